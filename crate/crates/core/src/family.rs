//! The worked characteristic-p example: the chain `ν_1, ν_2, …` converging
//! to `ν_ω`, its limit key polynomial `φ_ω = x^p − x − y^{-1}`, the second
//! chain `ν_{ω+n}` converging to the limit with key polynomial
//! `φ_{2ω} = φ_ω^p − y·φ_ω − 1`, and the cubic of the ε = δ example.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::hahn::{HahnApprox, HahnPoint, KElem};
use crate::polyring::PolyK;
use crate::valgroup::{rat, GValue, Rat};
use crate::valuation::{ChainGenerator, ValChain};
use crate::error::Result;

/// Default number of generator stages inspected before a limit is declared
/// unstable.
pub const DEFAULT_CAP: usize = 20;

fn p_pow(p: u32, n: u32) -> BigInt {
    BigInt::from(p).pow(n)
}

/// `−1/p^n`.
pub fn neg_inv_pow(p: u32, n: u32) -> Rat {
    Rat::new(-BigInt::one(), p_pow(p, n))
}

/// `a_n = Σ_{i=1}^n y^{-1/p^i}` (`a_0 = 0`).
pub fn partial_sum(p: u32, n: u32) -> KElem {
    (1..=n).fold(KElem::zero(p), |acc, i| acc.add(&KElem::monomial(p, 1, neg_inv_pow(p, i))))
}

/// `φ_i = x − a_{i−1}` for `i ≥ 1` (so `φ_1 = x`).
pub fn phi(p: u32, i: u32) -> PolyK {
    assert!(i >= 1, "key polynomials of the first chain start at φ_1");
    PolyK::linear(&partial_sum(p, i - 1))
}

/// `γ_i = ν_i(φ_i) = −1/p^i`.
pub fn gamma(p: u32, i: u32) -> GValue {
    GValue::Finite(neg_inv_pow(p, i))
}

/// `φ_ω = x^p − x − y^{-1}`.
pub fn phi_omega(p: u32) -> PolyK {
    PolyK::artin_schreier(p)
}

/// `e_n = (1 + p + … + p^{n−1}) / p^n`, the exponents of the root
/// `1 + t^{1/p} + t^{(1+p)/p^2} + …` of `Z^p − tZ − 1`.
pub fn second_exponent(p: u32, n: u32) -> Rat {
    let num: BigInt = (0..n).map(|k| p_pow(p, k)).sum();
    Rat::new(num, p_pow(p, n))
}

/// `c_n = 1 + Σ_{i=1}^{n−1} y^{e_i}`.
pub fn second_partial_sum(p: u32, n: u32) -> KElem {
    (1..n).fold(KElem::one(p), |acc, i| acc.add(&KElem::monomial(p, 1, second_exponent(p, i))))
}

/// `φ_{ω+n} = φ_ω − c_n` for `n ≥ 1`.
pub fn second_phi(p: u32, n: u32) -> PolyK {
    phi_omega(p).sub(&PolyK::constant(second_partial_sum(p, n)))
}

/// `γ_{ω+n} = e_n`.
pub fn second_gamma(p: u32, n: u32) -> GValue {
    GValue::Finite(second_exponent(p, n))
}

/// `φ_{2ω} = φ_ω^p − y·φ_ω − 1`.
pub fn phi_two_omega(p: u32) -> PolyK {
    let f = phi_omega(p);
    f.pow(p).sub(&f.scale(&KElem::y_pow(p, 1, 1))).sub(&PolyK::one(p))
}

/// `p/(p−1)`, the supremum of `ν_{ω+n}(φ_{2ω})`.
pub fn second_sup(p: u32) -> Rat {
    rat(p as i64, p as i64 - 1)
}

/// Stage `n` is `(φ_{n+1}, −1/p^{n+1})`, on top of `ν_1`.
#[derive(Clone, Debug)]
pub struct FirstChain {
    pub p: u32,
    pub cap: usize,
}

impl ChainGenerator for FirstChain {
    fn stage(&self, n: usize) -> Option<(PolyK, GValue)> {
        let i = n as u32 + 1;
        Some((phi(self.p, i), gamma(self.p, i)))
    }

    fn cap(&self) -> usize {
        self.cap
    }

    fn name(&self) -> String {
        "first_chain".into()
    }
}

/// Stage `n` is `(φ_{ω+n}, e_n)`, on top of `ν_{ω+1}`.
#[derive(Clone, Debug)]
pub struct SecondChain {
    pub p: u32,
    pub cap: usize,
}

impl ChainGenerator for SecondChain {
    fn stage(&self, n: usize) -> Option<(PolyK, GValue)> {
        let n = n as u32;
        Some((second_phi(self.p, n), second_gamma(self.p, n)))
    }

    fn cap(&self) -> usize {
        self.cap
    }

    fn name(&self) -> String {
        "second_chain".into()
    }
}

/// `ν_1`, the monomial valuation with `ν_1(x) = −1/p`.
pub fn nu_1(p: u32) -> ValChain {
    ValChain::monomial(p, gamma(p, 1))
}

/// `ν_n = [ν_{n−1}; ν_n(φ_n) = −1/p^n]`.
pub fn first_chain(p: u32, n: u32) -> Result<ValChain> {
    (2..=n).try_fold(nu_1(p), |chain, i| chain.augment(phi(p, i), gamma(p, i)))
}

pub fn first_generator(p: u32, cap: usize) -> Arc<dyn ChainGenerator> {
    Arc::new(FirstChain { p, cap })
}

pub fn second_generator(p: u32, cap: usize) -> Arc<dyn ChainGenerator> {
    Arc::new(SecondChain { p, cap })
}

/// `ν_{ω+1} = [{ν_n}; ν_{ω+1}(φ_ω) = γ]`.
pub fn nu_omega_plus_one(p: u32, gamma: GValue, cap: usize) -> Result<ValChain> {
    nu_1(p).limit_augment(first_generator(p, cap), phi_omega(p), gamma)
}

/// `ν_{2ω+1} = [{ν_{ω+n}}; ν_{2ω+1}(φ_{2ω}) = γ′]`, built on `ν_{ω+1}` with
/// `γ = 0`.
pub fn nu_two_omega_plus_one(p: u32, gamma_prime: GValue, cap: usize) -> Result<ValChain> {
    nu_omega_plus_one(p, GValue::zero(), cap)?.limit_augment(second_generator(p, cap), phi_two_omega(p), gamma_prime)
}

/// `η = Σ_{i≥1} t^{-1/p^i}`; its translates `η + j` are the roots of `φ_ω`.
pub fn eta(p: u32) -> HahnPoint {
    HahnPoint::eta(p)
}

/// `η′ = η + t^γ`.
pub fn eta_prime(p: u32, gamma: Rat) -> HahnPoint {
    eta(p).plus(&HahnApprox::monomial(p, 1, gamma))
}

/// The roots `η + j`, `j ∈ F_p`, of `φ_ω`.
pub fn phi_omega_roots(p: u32) -> Vec<HahnPoint> {
    (0..p as i64).map(|j| eta(p).plus(&HahnApprox::constant(p, j))).collect()
}

/// Elements of `K` used as coefficients in sampled polynomials: the
/// coefficients of `φ_ω`, partial sums `a_1..a_n`, their perturbations
/// `a_m + y`, and the monomials `y^{-1/p^i}`.
pub fn coefficient_pool(p: u32, n: u32) -> Vec<KElem> {
    let mut pool = vec![KElem::zero(p), KElem::constant(p, -1), KElem::y_pow(p, -1, 1).neg()];
    let y = KElem::y_pow(p, 1, 1);
    for m in 1..=n {
        pool.push(partial_sum(p, m));
    }
    for m in 1..=n {
        pool.push(partial_sum(p, m).add(&y));
    }
    for i in 1..=n {
        pool.push(KElem::monomial(p, 1, neg_inv_pow(p, i)));
    }
    let mut out: Vec<KElem> = Vec::new();
    for c in pool {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Roots and point of the cubic example: `η′ = t + t^2 + t^3 + t^4` and roots
/// `0, t, t + t^2` (variant i, values 1, 2, 3) or `0, t, t + t^3`
/// (variant ii, values 1, 2, 2).
pub fn section3_roots(p: u32, variant: u32) -> Vec<KElem> {
    let t = |e: i64| KElem::monomial(p, 1, Rat::from_integer(BigInt::from(e)));
    let third = if variant == 1 { t(1).add(&t(2)) } else { t(1).add(&t(3)) };
    vec![KElem::zero(p), t(1), third]
}

pub fn section3_point(p: u32) -> HahnPoint {
    let terms = (1..=4).map(|e| (Rat::from_integer(BigInt::from(e)), 1)).collect();
    HahnPoint::series(HahnApprox::from_terms(p, terms, None))
}

/// `Π (x − a)` over the roots.
pub fn from_roots(p: u32, roots: &[KElem]) -> PolyK {
    roots.iter().fold(PolyK::one(p), |acc, a| acc.mul(&PolyK::linear(a)))
}

/// True when `γ′ > p/(p−1)`, as required for `ν_{2ω+1}`.
pub fn gamma_prime_admissible(p: u32, gamma_prime: &GValue) -> bool {
    *gamma_prime > second_sup(p)
}

/// True when the limit value `γ ≥ 0`.
pub fn gamma_admissible(gamma: &GValue) -> bool {
    *gamma >= Rat::zero()
}
