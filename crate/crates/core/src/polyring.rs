//! Dense polynomials over `K`, Hasse derivatives and `q`-expansions.

use std::fmt;

use crate::error::{Error, Result};
use crate::hahn::{fp_inv, KElem};

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut n: usize, mut k: usize, p: u32) -> u32 {
    let p = p as usize;
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let (mut num, mut den) = (1u64, 1u64);
        for j in 0..ki {
            num = num * (ni - j) as u64 % p as u64;
            den = den * (j + 1) as u64 % p as u64;
        }
        let c = num * fp_inv(den as u32, p as u32) as u64 % p as u64;
        acc = acc * c % p as u64;
        n /= p;
        k /= p;
    }
    acc as u32
}

/// Polynomial in `x` over `K`; `coeffs[i]` is the coefficient of `x^i`,
/// trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyK {
    p: u32,
    coeffs: Vec<KElem>,
}

impl PolyK {
    pub fn new(p: u32, mut coeffs: Vec<KElem>) -> Self {
        while coeffs.last().is_some_and(KElem::is_zero) {
            coeffs.pop();
        }
        PolyK { p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        PolyK { p, coeffs: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        PolyK::constant(KElem::one(p))
    }

    pub fn x(p: u32) -> Self {
        PolyK::monomial(KElem::one(p), 1)
    }

    pub fn constant(c: KElem) -> Self {
        let p = c.p();
        PolyK::new(p, vec![c])
    }

    /// `c · x^n`.
    pub fn monomial(c: KElem, n: usize) -> Self {
        let p = c.p();
        let mut coeffs = vec![KElem::zero(p); n];
        coeffs.push(c);
        PolyK::new(p, coeffs)
    }

    /// `x − a`.
    pub fn linear(a: &KElem) -> Self {
        PolyK::x(a.p()).sub(&PolyK::constant(a.clone()))
    }

    /// `x^p − x − y^{-1}`.
    pub fn artin_schreier(p: u32) -> Self {
        PolyK::monomial(KElem::one(p), p as usize)
            .sub(&PolyK::x(p))
            .sub(&PolyK::constant(KElem::y_pow(p, -1, 1)))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[KElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> KElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| KElem::zero(self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&KElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(KElem::is_one)
    }

    /// The constant term if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<KElem> {
        match self.coeffs.len() {
            0 => Some(KElem::zero(self.p)),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &PolyK) -> PolyK {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        PolyK::new(self.p, coeffs)
    }

    pub fn neg(&self) -> PolyK {
        PolyK { p: self.p, coeffs: self.coeffs.iter().map(KElem::neg).collect() }
    }

    pub fn sub(&self, o: &PolyK) -> PolyK {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PolyK) -> PolyK {
        if self.is_zero() || o.is_zero() {
            return PolyK::zero(self.p);
        }
        let mut out = vec![KElem::zero(self.p); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        PolyK::new(self.p, out)
    }

    pub fn scale(&self, c: &KElem) -> PolyK {
        PolyK::new(self.p, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, n: u32) -> PolyK {
        let mut acc = PolyK::one(self.p);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: `self = q·g + r` with `r = 0` or `deg r < deg g`.
    pub fn divmod(&self, g: &PolyK) -> Result<(PolyK, PolyK)> {
        let dg = g.degree().ok_or(Error::DivisionByZeroPoly)?;
        let lead = g.leading().expect("nonzero");
        let lead_inv = if lead.is_one() { None } else { Some(lead.inv()?) };
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((PolyK::zero(self.p), self.clone()));
        }
        let mut quot = vec![KElem::zero(self.p); rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dg];
            if top.is_zero() {
                continue;
            }
            let c = match &lead_inv {
                Some(li) => top.mul(li),
                None => top.clone(),
            };
            for (j, gj) in g.coeffs.iter().enumerate() {
                if !gj.is_zero() {
                    rem[k + j] = rem[k + j].sub(&c.mul(gj));
                }
            }
            quot[k] = c;
        }
        rem.truncate(dg);
        Ok((PolyK::new(self.p, quot), PolyK::new(self.p, rem)))
    }

    /// `∂_b`: `x^n ↦ C(n, b) x^{n−b}`, binomials reduced mod `p`. `∂_0` is
    /// the identity.
    pub fn hasse_derivative(&self, b: usize) -> PolyK {
        if b == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(b)
            .map(|(n, a)| a.scale(binom_mod_p(n, b, self.p)))
            .collect();
        PolyK::new(self.p, coeffs)
    }

    /// Base-`q` digits of `self`.
    pub fn q_expand(&self, q: &PolyK) -> Result<QExpansion> {
        if !q.is_monic() || q.deg0() == 0 {
            return Err(Error::NonMonicBase);
        }
        let mut digits = Vec::new();
        let mut rest = self.clone();
        while !rest.is_zero() {
            let (quot, rem) = rest.divmod(q)?;
            digits.push(rem);
            rest = quot;
        }
        Ok(QExpansion { base: q.clone(), digits })
    }

    /// Horner evaluation at an element of `K`.
    pub fn eval(&self, a: &KElem) -> KElem {
        let mut acc = KElem::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a).add(c);
        }
        acc
    }

    /// Makes the polynomial monic. Fails on zero.
    pub fn monic(&self) -> Result<PolyK> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        Ok(self.scale(&lead.inv()?))
    }
}

/// Digits `f_0, …, f_n` with `f = Σ f_i q^i` and `deg f_i < deg q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub base: PolyK,
    pub digits: Vec<PolyK>,
}

impl QExpansion {
    pub fn reconstruct(&self) -> PolyK {
        let p = self.base.p();
        let mut acc = PolyK::zero(p);
        for d in self.digits.iter().rev() {
            acc = acc.mul(&self.base).add(d);
        }
        acc
    }
}

fn needs_parens(c: &KElem) -> bool {
    !c.is_laurent() || c.numerator().num_terms() > 1
}

impl fmt::Display for PolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let xpow = match i {
                0 => String::new(),
                1 => "x".to_string(),
                n => format!("x^{n}"),
            };
            let part = if i == 0 {
                c.to_string()
            } else if c.is_one() {
                xpow
            } else if needs_parens(c) {
                format!("({c})*{xpow}")
            } else {
                format!("{c}*{xpow}")
            };
            parts.push(part);
        }
        f.write_str(&parts.join(" + "))
    }
}

/// `1/c` in `F_p` for a nonzero constant, used by scenario code.
pub fn fp_inverse(c: u32, p: u32) -> u32 {
    fp_inv(c % p, p)
}
