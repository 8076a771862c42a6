//! Seeded sampling of polynomials over a coefficient pool.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hahn::KElem;
use crate::polyring::PolyK;

/// Deterministic source of sample polynomials.
pub struct Sampler {
    rng: ChaCha8Rng,
    p: u32,
    pool: Vec<KElem>,
}

impl Sampler {
    pub fn new(p: u32, pool: Vec<KElem>, seed: u64) -> Self {
        assert!(pool.iter().any(|c| !c.is_zero()), "pool needs a nonzero element");
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), p, pool }
    }

    fn coeff(&mut self) -> KElem {
        self.pool.choose(&mut self.rng).expect("nonempty pool").clone()
    }

    fn nonzero_coeff(&mut self) -> KElem {
        loop {
            let c = self.coeff();
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// A nonzero polynomial of degree exactly `deg`; roughly half of the lower
    /// coefficients are zero.
    pub fn poly_of_degree(&mut self, deg: usize, monic: bool) -> PolyK {
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            let c = if self.rng.gen_bool(0.5) { self.coeff() } else { KElem::zero(self.p) };
            coeffs.push(c);
        }
        coeffs.push(if monic { KElem::one(self.p) } else { self.nonzero_coeff() });
        PolyK::new(self.p, coeffs)
    }

    /// A nonzero polynomial of degree at most `max_deg`.
    pub fn poly(&mut self, max_deg: usize) -> PolyK {
        let deg = self.rng.gen_range(0..=max_deg);
        self.poly_of_degree(deg, false)
    }

    pub fn monic(&mut self, min_deg: usize, max_deg: usize) -> PolyK {
        let deg = self.rng.gen_range(min_deg..=max_deg);
        self.poly_of_degree(deg, true)
    }

    pub fn polys(&mut self, count: usize, max_deg: usize) -> Vec<PolyK> {
        (0..count).map(|_| self.poly(max_deg)).collect()
    }

    pub fn pick(&mut self) -> KElem {
        self.coeff()
    }

    pub fn gen_range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }
}
