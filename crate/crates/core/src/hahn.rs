//! Truncated generalized power series over `F_p` with rational exponents,
//! elements of the perfect hull `K = F_p(y)^{1/p^∞}`, and the embedding
//! `ι: K → F_p((t^Q))` sending `y` to `t`.
//!
//! Precision is an exponent bound: a series with precision `P` knows every
//! term with exponent `< P` and nothing beyond. Exact series carry no bound.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::polyring::PolyK;
use crate::valgroup::{fmt_rat, rat, rat_int, GValue, Rat};

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u32,
    p: u32,
}

impl FpElem {
    pub fn new(value: i64, p: u32) -> Self {
        FpElem { value: value.rem_euclid(p as i64) as u32, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, o: FpElem) -> FpElem {
        FpElem { value: fp_add(self.value, o.value, self.p), p: self.p }
    }

    pub fn mul(self, o: FpElem) -> FpElem {
        FpElem { value: fp_mul(self.value, o.value, self.p), p: self.p }
    }

    pub fn neg(self) -> FpElem {
        FpElem { value: fp_neg(self.value, self.p), p: self.p }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<FpElem> {
        (!self.is_zero()).then(|| FpElem { value: fp_inv(self.value, self.p), p: self.p })
    }
}

pub(crate) fn fp_add(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

pub(crate) fn fp_mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn fp_neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn fp_inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    // Fermat: a^(p-2)
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn min_prec(a: &Option<Rat>, b: &Option<Rat>) -> Option<Rat> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(std::cmp::min(x, y).clone()),
    }
}

fn prec_value(p: &Option<Rat>) -> GValue {
    match p {
        Some(r) => GValue::Finite(r.clone()),
        None => GValue::Infinity,
    }
}

/// Truncated element of `F_p((t^Q))`.
///
/// Terms are sorted by strictly increasing exponent, coefficients are
/// nonzero residues, and every exponent is below `precision` when one is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HahnApprox {
    p: u32,
    terms: Vec<(Rat, u32)>,
    precision: Option<Rat>,
}

impl HahnApprox {
    /// Normalizes arbitrary `(exponent, coefficient)` pairs: merges equal
    /// exponents, reduces coefficients mod `p`, drops zeros and everything at
    /// or above the precision bound.
    pub fn from_terms(p: u32, terms: Vec<(Rat, i64)>, precision: Option<Rat>) -> Self {
        let raw = terms
            .into_iter()
            .map(|(e, c)| (e, c.rem_euclid(p as i64) as u32))
            .collect();
        Self::normalize(p, raw, precision)
    }

    fn normalize(p: u32, mut raw: Vec<(Rat, u32)>, precision: Option<Rat>) -> Self {
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(Rat, u32)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            if let Some(bound) = &precision {
                if &e >= bound {
                    break;
                }
            }
            match terms.last_mut() {
                Some(last) if last.0 == e => last.1 = fp_add(last.1, c, p),
                _ => terms.push((e, c % p)),
            }
        }
        terms.retain(|t| t.1 != 0);
        HahnApprox { p, terms, precision }
    }

    pub fn zero(p: u32) -> Self {
        HahnApprox { p, terms: Vec::new(), precision: None }
    }

    pub fn one(p: u32) -> Self {
        Self::monomial(p, 1, Rat::zero())
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::monomial(p, c, Rat::zero())
    }

    /// `c · t^exp`, exact.
    pub fn monomial(p: u32, c: i64, exp: Rat) -> Self {
        Self::from_terms(p, vec![(exp, c)], None)
    }

    /// The zero series known only up to `O(t^precision)`.
    pub fn zero_to(p: u32, precision: Rat) -> Self {
        HahnApprox { p, terms: Vec::new(), precision: Some(precision) }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, FpElem)> + '_ {
        self.terms.iter().map(move |(e, c)| (e, FpElem { value: *c, p: self.p }))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn precision(&self) -> Option<&Rat> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.terms.is_empty()
    }

    pub fn is_exact_one(&self) -> bool {
        self.is_exact() && self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1 == 1
    }

    /// Coefficient of `t^e` (zero when absent).
    pub fn coeff(&self, e: &Rat) -> u32 {
        self.terms
            .binary_search_by(|t| t.0.cmp(e))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Rat, u32)> {
        self.terms.first().map(|(e, c)| (e, *c))
    }

    /// Drops everything at or above `bound` and lowers the precision to it.
    pub fn truncate(&self, bound: &Rat) -> Self {
        let precision = min_prec(&self.precision, &Some(bound.clone()));
        Self::normalize(self.p, self.terms.clone(), precision)
    }

    fn check_p(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing characteristics {} and {}", self.p, other.p);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_p(other);
        let precision = min_prec(&self.precision, &other.precision);
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        Self::normalize(self.p, raw, precision)
    }

    pub fn neg(&self) -> Self {
        HahnApprox {
            p: self.p,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), fp_neg(*c, self.p))).collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product. With `a = A + O(t^pa)` and `b = B + O(t^pb)` the
    /// product is known up to `min(v(A) + pb, v(B) + pa, pa + pb)`.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_p(other);
        let pa = prec_value(&self.precision);
        let pb = prec_value(&other.precision);
        let va = self.terms.first().map_or(GValue::Infinity, |t| GValue::Finite(t.0.clone()));
        let vb = other.terms.first().map_or(GValue::Infinity, |t| GValue::Finite(t.0.clone()));
        let bound = std::cmp::min(std::cmp::min(&va + &pb, &vb + &pa), &pa + &pb);
        let precision = bound.finite().cloned();
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if let Some(pr) = &precision {
                    if &e >= pr {
                        // `other.terms` is sorted, later exponents only grow
                        break;
                    }
                }
                raw.push((e, fp_mul(*ca, *cb, self.p)));
            }
        }
        Self::normalize(self.p, raw, precision)
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.p;
        HahnApprox::normalize(
            self.p,
            self.terms.iter().map(|(e, x)| (e.clone(), fp_mul(*x, c, self.p))).collect(),
            self.precision.clone(),
        )
    }

    /// Multiplies by `c · t^e` (exact monomial).
    pub fn mul_monomial(&self, c: u32, e: &Rat) -> Self {
        let c = c % self.p;
        if c == 0 {
            return HahnApprox::zero(self.p);
        }
        HahnApprox {
            p: self.p,
            terms: self.terms.iter().map(|(x, k)| (x + e, fp_mul(*k, c, self.p))).collect(),
            precision: self.precision.as_ref().map(|b| b + e),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = HahnApprox::one(self.p);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The `t`-adic valuation. A series that is zero only up to its
    /// precision is not certified zero.
    pub fn valuation(&self) -> Result<GValue> {
        match (self.terms.first(), &self.precision) {
            (Some((e, _)), _) => Ok(GValue::Finite(e.clone())),
            (None, None) => Ok(GValue::Infinity),
            (None, Some(pr)) => Err(Error::InsufficientPrecision {
                what: "series".into(),
                precision: fmt_rat(pr),
            }),
        }
    }

    /// `1/a` up to `O(t^target)`: factor out the leading monomial and expand
    /// the geometric series of the remaining unit.
    pub fn invert(&self, target: &Rat) -> Result<Self> {
        let (v, c) = match self.terms.first() {
            Some((e, c)) => (e.clone(), *c),
            None => {
                return Err(match &self.precision {
                    None => Error::ZeroDivisor,
                    Some(pr) => Error::InsufficientPrecision {
                        what: "divisor".into(),
                        precision: fmt_rat(pr),
                    },
                })
            }
        };
        let cinv = fp_inv(c, self.p);
        let neg_v = -v.clone();
        if self.terms.len() == 1 && self.precision.is_none() {
            return Ok(HahnApprox::normalize(self.p, vec![(neg_v, cinv)], None));
        }
        // a = c t^v (1 + u), u has positive support
        let unit = self.mul_monomial(cinv, &neg_v);
        let u = unit.sub(&HahnApprox::one(self.p));
        // 1/a = c^{-1} t^{-v} / (1 + u), needed up to t^{target + v} inside
        let inner = target + &v;
        if let Some(pr) = u.precision() {
            if pr < &inner {
                return Err(Error::InsufficientPrecision {
                    what: "inverse".into(),
                    precision: fmt_rat(&(pr - &v)),
                });
            }
        }
        let mut sum = HahnApprox::one(self.p).truncate(&inner);
        if inner > Rat::zero() {
            let neg_u = u.neg().truncate(&inner);
            let mut power = HahnApprox::one(self.p);
            loop {
                power = power.mul(&neg_u).truncate(&inner);
                if power.terms.is_empty() {
                    break;
                }
                sum = sum.add(&power);
            }
        }
        Ok(sum.mul_monomial(cinv, &neg_v).truncate(target))
    }

    /// The unique `p`-th root. Frobenius is the identity on `F_p`, so only
    /// exponents change.
    pub fn pth_root(&self) -> Self {
        let pr = rat_int(self.p as i64);
        HahnApprox {
            p: self.p,
            terms: self.terms.iter().map(|(e, c)| (e / &pr, *c)).collect(),
            precision: self.precision.as_ref().map(|b| b / &pr),
        }
    }

    pub fn fmt_var(&self, var: &str) -> String {
        let mut parts: Vec<String> = self.terms.iter().map(|(e, c)| fmt_term(*c, var, e)).collect();
        if let Some(pr) = &self.precision {
            parts.push(format!("O({})", fmt_power(var, pr)));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(e, c)| json!({"exp": fmt_rat(e), "coeff": c}))
            .collect();
        json!({
            "terms": terms,
            "precision": self.precision.as_ref().map_or("exact".to_string(), fmt_rat),
        })
    }
}

impl fmt::Display for HahnApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

pub(crate) fn fmt_power(var: &str, e: &Rat) -> String {
    if e.is_one() {
        var.to_string()
    } else if e.is_integer() && e.is_positive() {
        format!("{var}^{}", e.numer())
    } else {
        format!("{var}^({})", fmt_rat(e))
    }
}

fn fmt_term(c: u32, var: &str, e: &Rat) -> String {
    if e.is_zero() {
        c.to_string()
    } else if c == 1 {
        fmt_power(var, e)
    } else {
        format!("{c}*{}", fmt_power(var, e))
    }
}

fn is_power_of(mut n: BigInt, p: u32) -> bool {
    let pb = BigInt::from(p);
    while n > BigInt::one() {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return false;
        }
        n = q;
    }
    n.is_one()
}

/// Element of `K = F_p(y)^{1/p^∞}` as a fraction of exact finite-support
/// series in `y`.
///
/// The denominator is normalized to have leading term `1·y^0`, so the
/// common case of a Laurent polynomial in the `y^{1/p^k}` has denominator 1.
#[derive(Clone, Debug)]
pub struct KElem {
    num: HahnApprox,
    den: HahnApprox,
}

impl KElem {
    /// Builds `num/den`, rejecting approximate series, a zero denominator
    /// and exponents outside `Z[1/p]`.
    pub fn new(num: HahnApprox, den: HahnApprox) -> Result<Self> {
        if num.p != den.p {
            return Err(Error::ModulusMismatch(num.p, den.p));
        }
        if !num.is_exact() || !den.is_exact() {
            return Err(Error::InvalidArgument("elements of K are exact".into()));
        }
        if den.terms.is_empty() {
            return Err(Error::ZeroDivisor);
        }
        for (e, _) in num.terms.iter().chain(den.terms.iter()) {
            if !is_power_of(e.denom().clone(), num.p) {
                return Err(Error::InvalidExponent(fmt_rat(e)));
            }
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: HahnApprox, den: HahnApprox) -> Self {
        let (v, c) = den.leading().map(|(e, c)| (e.clone(), c)).expect("nonzero denominator");
        if v.is_zero() && c == 1 {
            return KElem { num, den };
        }
        let cinv = fp_inv(c, num.p);
        let shift = -v;
        KElem { num: num.mul_monomial(cinv, &shift), den: den.mul_monomial(cinv, &shift) }
    }

    pub fn from_series(s: HahnApprox) -> Result<Self> {
        let p = s.p;
        KElem::new(s, HahnApprox::one(p))
    }

    pub fn zero(p: u32) -> Self {
        KElem { num: HahnApprox::zero(p), den: HahnApprox::one(p) }
    }

    pub fn one(p: u32) -> Self {
        KElem::constant(p, 1)
    }

    pub fn constant(p: u32, c: i64) -> Self {
        KElem { num: HahnApprox::constant(p, c), den: HahnApprox::one(p) }
    }

    /// `c · y^e`. Panics if the exponent is not in `Z[1/p]`.
    pub fn monomial(p: u32, c: i64, e: Rat) -> Self {
        KElem::from_series(HahnApprox::monomial(p, c, e)).expect("exponent outside Z[1/p]")
    }

    /// `y^(num/den)`.
    pub fn y_pow(p: u32, num: i64, den: i64) -> Self {
        KElem::monomial(p, 1, rat(num, den))
    }

    pub fn p(&self) -> u32 {
        self.num.p
    }

    pub fn numerator(&self) -> &HahnApprox {
        &self.num
    }

    pub fn denominator(&self) -> &HahnApprox {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_exact_one() && self.num.is_exact_one()
    }

    /// True when the denominator is 1, i.e. a Laurent polynomial in `y^{1/p^k}`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_exact_one()
    }

    /// If this is `c` for `c ∈ F_p`, returns it.
    pub fn as_constant(&self) -> Option<u32> {
        if !self.is_laurent() {
            return None;
        }
        match self.num.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn add(&self, o: &KElem) -> KElem {
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::normalized(num, self.den.mul(&o.den))
    }

    pub fn neg(&self) -> KElem {
        KElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &KElem) -> KElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &KElem) -> KElem {
        if self.is_zero() || o.is_zero() {
            return KElem::zero(self.p());
        }
        let den = if self.den.is_exact_one() {
            o.den.clone()
        } else if o.den.is_exact_one() {
            self.den.clone()
        } else {
            self.den.mul(&o.den)
        };
        Self::normalized(self.num.mul(&o.num), den)
    }

    pub fn scale(&self, c: u32) -> KElem {
        if c.is_multiple_of(self.p()) {
            return KElem::zero(self.p());
        }
        KElem { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<KElem> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &KElem) -> Result<KElem> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<KElem> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let e = n.unsigned_abs() as u32;
        Ok(Self::normalized(base.num.pow(e), base.den.pow(e)))
    }

    pub fn pth_root(&self) -> KElem {
        KElem { num: self.num.pth_root(), den: self.den.pth_root() }
    }

    /// `ν_0`: the `t`-adic valuation of `ι(a)`.
    pub fn valuation(&self) -> GValue {
        match self.num.terms.first() {
            // den has leading exponent 0
            Some((e, _)) => GValue::Finite(e.clone()),
            None => GValue::Infinity,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"num": self.num.to_json(), "den": self.den.to_json()})
    }
}

impl PartialEq for KElem {
    fn eq(&self, o: &KElem) -> bool {
        if self.den == o.den {
            self.num == o.num
        } else {
            self.num.mul(&o.den) == o.num.mul(&self.den)
        }
    }
}

impl Eq for KElem {}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            f.write_str(&self.num.fmt_var("y"))
        } else {
            write!(f, "({})/({})", self.num.fmt_var("y"), self.den.fmt_var("y"))
        }
    }
}

/// `ι(a)` expanded up to `O(t^target)`; exact when the denominator is 1.
pub fn iota(a: &KElem, target: &Rat) -> Result<HahnApprox> {
    if a.is_laurent() {
        return Ok(a.num.clone());
    }
    let vnum = match a.num.leading() {
        Some((e, _)) => e.clone(),
        None => return Ok(HahnApprox::zero(a.p())),
    };
    let inv = a.den.invert(&(target - &vnum))?;
    Ok(a.num.mul(&inv).truncate(target))
}

/// A series whose full expansion is infinite but which is a known root of a
/// polynomial over `K`. Polynomials evaluated at such a point are first
/// reduced modulo that polynomial, so cancellations that only happen in the
/// limit are performed exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicBase {
    /// `η = Σ_{i≥1} t^{-1/p^i}`, a root of `x^p − x − y^{-1}`.
    ArtinSchreier { p: u32 },
}

impl AlgebraicBase {
    pub fn p(&self) -> u32 {
        match self {
            AlgebraicBase::ArtinSchreier { p } => *p,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlgebraicBase::ArtinSchreier { .. } => "eta",
        }
    }

    /// The first `level` terms, with the precision bound at the next exponent.
    pub fn approx(&self, level: u32) -> HahnApprox {
        match self {
            AlgebraicBase::ArtinSchreier { p } => {
                let p = *p;
                let mut den = BigInt::one();
                let mut terms = Vec::with_capacity(level as usize);
                for _ in 0..level {
                    den *= p;
                    terms.push((Rat::new(-BigInt::one(), den.clone()), 1u32));
                }
                den *= p;
                HahnApprox::normalize(p, terms, Some(Rat::new(-BigInt::one(), den)))
            }
        }
    }

    pub fn min_poly(&self) -> PolyK {
        match self {
            AlgebraicBase::ArtinSchreier { p } => PolyK::artin_schreier(*p),
        }
    }
}

/// A point of `F_p((t^Q))`: an optional algebraic base plus a series shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HahnPoint {
    pub base: Option<AlgebraicBase>,
    pub shift: HahnApprox,
}

/// Approximation levels tried, in order, when a value cannot be certified.
pub const RETRY_LEVELS: [u32; 4] = [8, 16, 32, 64];

impl HahnPoint {
    pub fn series(s: HahnApprox) -> Self {
        HahnPoint { base: None, shift: s }
    }

    pub fn eta(p: u32) -> Self {
        HahnPoint { base: Some(AlgebraicBase::ArtinSchreier { p }), shift: HahnApprox::zero(p) }
    }

    pub fn p(&self) -> u32 {
        self.shift.p()
    }

    pub fn plus(&self, s: &HahnApprox) -> Self {
        HahnPoint { base: self.base.clone(), shift: self.shift.add(s) }
    }

    pub fn approx(&self, level: u32) -> HahnApprox {
        match &self.base {
            Some(b) => b.approx(level).add(&self.shift),
            None => self.shift.clone(),
        }
    }

    /// `ν_t(self − other)` at a fixed approximation level.
    pub fn diff_valuation_at(&self, other: &HahnPoint, level: u32) -> Result<GValue> {
        if self.base == other.base {
            return self.shift.sub(&other.shift).valuation();
        }
        self.approx(level).sub(&other.approx(level)).valuation()
    }

    /// `ν_t(self − other)`, raising the approximation level until certified.
    pub fn diff_valuation(&self, other: &HahnPoint) -> Result<GValue> {
        retry(|level| self.diff_valuation_at(other, level))
    }

    pub fn fmt_point(&self) -> String {
        match &self.base {
            None => self.shift.to_string(),
            Some(b) if self.shift.is_exact_zero() => b.name().to_string(),
            Some(b) => format!("{} + {}", b.name(), self.shift),
        }
    }
}

impl fmt::Display for HahnPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_point())
    }
}

/// Runs `attempt` at increasing approximation levels while it reports
/// insufficient precision.
pub fn retry<T>(attempt: impl FnMut(u32) -> Result<T>) -> Result<T> {
    retry_up_to(u32::MAX, attempt)
}

/// Like `retry`, skipping levels above `max_level` (the first level is
/// always tried).
pub fn retry_up_to<T>(max_level: u32, mut attempt: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let mut last = None;
    for (i, level) in RETRY_LEVELS.into_iter().enumerate() {
        if i > 0 && level > max_level {
            break;
        }
        match attempt(level) {
            Err(e @ Error::InsufficientPrecision { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one level"))
}

/// Horner evaluation of `f` at a series, coefficients embedded by `ι` with
/// precision bound `coeff_precision`.
pub fn eval_poly_series(f: &PolyK, s: &HahnApprox, coeff_precision: &Rat) -> Result<HahnApprox> {
    let p = f.p();
    let mut acc = HahnApprox::zero(p);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(s).add(&iota(c, coeff_precision)?);
    }
    Ok(acc)
}

/// `ν_t(ι(f)(η′))` at a fixed approximation level.
///
/// With an algebraic base `B` the evaluation goes through the Hasse–Taylor
/// expansion `f(B + s) = Σ_b (∂_b f mod m_B)(B) · s^b`.
pub fn hahn_poly_valuation(f: &PolyK, point: &HahnPoint, level: u32) -> Result<GValue> {
    if f.is_zero() {
        return Ok(GValue::Infinity);
    }
    let coeff_precision = rat_int(level as i64);
    let value = match &point.base {
        None => eval_poly_series(f, &point.shift, &coeff_precision)?,
        Some(base) => {
            let m = base.min_poly();
            let approx = base.approx(level);
            let mut acc = HahnApprox::zero(f.p());
            let mut shift_pow = HahnApprox::one(f.p());
            for b in 0..=f.degree().unwrap_or(0) {
                if b > 0 {
                    if point.shift.is_exact_zero() {
                        break;
                    }
                    shift_pow = shift_pow.mul(&point.shift);
                }
                let r = f.hasse_derivative(b).divmod(&m)?.1;
                if r.is_zero() {
                    continue;
                }
                let at_base = match r.as_constant() {
                    Some(c) => iota(&c, &coeff_precision)?,
                    None => eval_poly_series(&r, &approx, &coeff_precision)?,
                };
                acc = acc.add(&at_base.mul(&shift_pow));
            }
            acc
        }
    };
    value.valuation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::PolyK;
    use proptest::prelude::*;

    fn t(p: u32, n: i64, d: i64) -> HahnApprox {
        HahnApprox::monomial(p, 1, rat(n, d))
    }

    #[test]
    fn characteristic_two_cancels() {
        let a = t(2, -1, 2);
        assert!(a.add(&a).is_exact_zero());
    }

    #[test]
    fn distributivity_example() {
        let a = t(2, -1, 2).add(&t(2, -1, 4));
        let prod = a.mul(&t(2, 1, 4));
        assert_eq!(prod, t(2, -1, 4).add(&HahnApprox::one(2)));
    }

    #[test]
    fn precision_merge_drops_terms_beyond_bound() {
        // oracle: schoolbook merge keeps exponents < 2 only
        let a = HahnApprox::from_terms(2, vec![(rat(-1, 1), 1), (rat(0, 1), 1)], Some(rat(2, 1)));
        let b = HahnApprox::from_terms(2, vec![(rat(3, 1), 1)], Some(rat(2, 1)));
        let sum = a.add(&b);
        assert_eq!(sum, HahnApprox::from_terms(2, vec![(rat(-1, 1), 1), (rat(0, 1), 1)], Some(rat(2, 1))));
        assert_eq!(sum.precision(), Some(&rat(2, 1)));
    }

    #[test]
    fn valuation_cases() {
        let a = t(2, -1, 2).add(&t(2, -1, 4));
        assert_eq!(a.valuation().unwrap(), GValue::from_ratio(-1, 2));
        assert_eq!(HahnApprox::zero(2).valuation().unwrap(), GValue::Infinity);
        assert!(matches!(
            HahnApprox::zero_to(2, rat(5, 1)).valuation(),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn invert_monomial_is_exact() {
        let inv = t(2, -1, 1).invert(&rat(10, 1)).unwrap();
        assert_eq!(inv, t(2, 1, 1));
        assert!(inv.is_exact());
    }

    #[test]
    fn invert_one_plus_t() {
        let a = HahnApprox::one(2).add(&t(2, 1, 1));
        let inv = a.invert(&rat(4, 1)).unwrap();
        let expected = HahnApprox::from_terms(
            2,
            vec![(rat(0, 1), 1), (rat(1, 1), 1), (rat(2, 1), 1), (rat(3, 1), 1)],
            Some(rat(4, 1)),
        );
        assert_eq!(inv, expected);
        // oracle: multiply back
        let back = a.mul(&inv).sub(&HahnApprox::one(2));
        assert!(back.num_terms() == 0 && back.precision() == Some(&rat(4, 1)));
        assert!(matches!(HahnApprox::zero(2).invert(&rat(1, 1)), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn invert_rejects_unsupported_target() {
        let a = HahnApprox::from_terms(3, vec![(rat(0, 1), 1), (rat(1, 1), 1)], Some(rat(2, 1)));
        assert!(matches!(a.invert(&rat(5, 1)), Err(Error::InsufficientPrecision { .. })));
        assert!(a.invert(&rat(2, 1)).is_ok());
    }

    #[test]
    fn pth_root_examples() {
        assert_eq!(t(2, -1, 1).pth_root(), t(2, -1, 2));
        let a = HahnApprox::from_terms(3, vec![(rat(-1, 3), 1), (rat(2, 3), 2)], None);
        let r = a.pth_root();
        assert_eq!(r, HahnApprox::from_terms(3, vec![(rat(-1, 9), 1), (rat(2, 9), 2)], None));
        // oracle: cube it
        assert_eq!(r.pow(3), a);
        assert!(HahnApprox::zero(3).pth_root().is_exact_zero());
    }

    #[test]
    fn iota_examples() {
        let e = KElem::y_pow(2, -1, 2);
        let s = iota(&e, &rat(4, 1)).unwrap();
        assert_eq!(s, t(2, -1, 2));
        assert!(s.is_exact());

        let y = KElem::y_pow(2, 1, 1);
        let q = y.div(&KElem::one(2).add(&y)).unwrap();
        let s = iota(&q, &rat(4, 1)).unwrap();
        let expected = HahnApprox::from_terms(
            2,
            vec![(rat(1, 1), 1), (rat(2, 1), 1), (rat(3, 1), 1)],
            Some(rat(4, 1)),
        );
        assert_eq!(s, expected);
        // oracle: (1 + t)·s = t up to t^4
        let back = s.mul(&HahnApprox::one(2).add(&t(2, 1, 1))).sub(&t(2, 1, 1));
        assert_eq!(back.num_terms(), 0);

        assert_eq!(iota(&KElem::one(2), &rat(1, 1)).unwrap(), HahnApprox::one(2));
    }

    #[test]
    fn kelem_rejects_foreign_exponents() {
        let bad = HahnApprox::monomial(2, 1, rat(1, 3));
        assert!(matches!(KElem::from_series(bad), Err(Error::InvalidExponent(_))));
        let ok = HahnApprox::monomial(3, 1, rat(-2, 9));
        assert!(KElem::from_series(ok).is_ok());
    }

    #[test]
    fn kelem_fractions_compare_by_value() {
        let y = KElem::y_pow(3, 1, 1);
        let a = y.div(&KElem::one(3).add(&y)).unwrap();
        let b = a.add(&KElem::one(3)).sub(&KElem::one(3));
        assert_eq!(a, b);
        assert_eq!(a.valuation(), GValue::from_ratio(1, 1));
        assert_eq!(a.mul(&a.inv().unwrap()), KElem::one(3));
    }

    #[test]
    fn eta_approximations() {
        let eta = AlgebraicBase::ArtinSchreier { p: 2 }.approx(3);
        assert_eq!(eta.num_terms(), 3);
        assert_eq!(eta.precision(), Some(&rat(-1, 16)));
        assert_eq!(eta.valuation().unwrap(), GValue::from_ratio(-1, 2));
    }

    #[test]
    fn hahn_valuation_examples() {
        let p = 2;
        let f = PolyK::x(p).sub(&PolyK::constant(KElem::y_pow(p, -1, 2)));
        let pt = HahnPoint::series(t(p, -1, 2).add(&t(p, -1, 4)));
        assert_eq!(hahn_poly_valuation(&f, &pt, 8).unwrap(), GValue::from_ratio(-1, 4));

        // x^2 - x - y^-1 at the N-term truncation of eta
        let phi = PolyK::artin_schreier(p);
        for n in 1..6u32 {
            let trunc = AlgebraicBase::ArtinSchreier { p }.approx(n);
            let exact: Vec<(Rat, i64)> = trunc.terms().map(|(e, c)| (e.clone(), c.value() as i64)).collect();
            let pt = HahnPoint::series(HahnApprox::from_terms(p, exact, None));
            assert_eq!(
                hahn_poly_valuation(&phi, &pt, 8).unwrap(),
                GValue::Finite(-rat(1, 1) / rat_int(2i64.pow(n)))
            );
        }

        let zero = HahnPoint::series(HahnApprox::zero(p));
        assert_eq!(hahn_poly_valuation(&PolyK::x(p), &zero, 8).unwrap(), GValue::Infinity);
    }

    #[test]
    fn algebraic_base_evaluation() {
        for p in [2u32, 3, 5] {
            let phi = PolyK::artin_schreier(p);
            // eta is an exact root
            assert_eq!(hahn_poly_valuation(&phi, &HahnPoint::eta(p), 8).unwrap(), GValue::Infinity);
            // so is eta + j
            let pt = HahnPoint::eta(p).plus(&HahnApprox::constant(p, 1));
            assert_eq!(hahn_poly_valuation(&phi, &pt, 8).unwrap(), GValue::Infinity);
            // phi(eta + t^{1/3}) = t^{p/3} - t^{1/3}
            let pt = HahnPoint::eta(p).plus(&t(p, 1, 3));
            assert_eq!(hahn_poly_valuation(&phi, &pt, 8).unwrap(), GValue::from_ratio(1, 3));
            // x at eta has value -1/p
            assert_eq!(
                hahn_poly_valuation(&PolyK::x(p), &HahnPoint::eta(p), 8).unwrap(),
                GValue::from_ratio(-1, p as i64)
            );
        }
    }

    #[test]
    fn point_differences() {
        let p = 2;
        let eta = HahnPoint::eta(p);
        let shifted = eta.plus(&t(p, 1, 3));
        assert_eq!(shifted.diff_valuation(&eta).unwrap(), GValue::from_ratio(1, 3));
        let plus_one = eta.plus(&HahnApprox::one(p));
        assert_eq!(shifted.diff_valuation(&plus_one).unwrap(), GValue::zero());
        let a1 = HahnPoint::series(t(p, -1, 2));
        assert_eq!(eta.diff_valuation(&a1).unwrap(), GValue::from_ratio(-1, 4));
    }

    fn arb_exact(p: u32) -> impl Strategy<Value = HahnApprox> {
        prop::collection::vec((-6i64..6, 0u32..3, 0i64..p as i64), 0..5).prop_map(move |v| {
            let terms = v
                .into_iter()
                .map(|(n, k, c)| (rat(n, (p as i64).pow(k)), c))
                .collect();
            HahnApprox::from_terms(p, terms, None)
        })
    }

    fn arb_approx() -> impl Strategy<Value = HahnApprox> {
        (arb_exact(3), prop::option::of(-2i64..8)).prop_map(|(s, pr)| match pr {
            Some(b) => s.truncate(&rat_int(b)),
            None => s,
        })
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative_and_ultrametric(a in arb_approx(), b in arb_approx()) {
            if let (Ok(va), Ok(vb)) = (a.valuation(), b.valuation()) {
                if let Ok(vab) = a.mul(&b).valuation() {
                    prop_assert_eq!(vab, &va + &vb);
                }
                if let Ok(vs) = a.add(&b).valuation() {
                    prop_assert!(vs >= std::cmp::min(va, vb));
                }
            }
        }

        #[test]
        fn pth_root_round_trip(a in arb_exact(3)) {
            prop_assert_eq!(a.pth_root().pow(3), a);
        }

        #[test]
        fn invert_round_trip(a in arb_exact(3), target in 0i64..6) {
            prop_assume!(!a.is_exact_zero());
            let target = rat_int(target);
            let inv = a.invert(&target).unwrap();
            let residue = a.mul(&inv).sub(&HahnApprox::one(3));
            let v = a.leading().unwrap().0.clone();
            prop_assert!(residue.terms().all(|(e, _)| e >= &(target.clone() + &v)));
        }

        #[test]
        fn precision_monotonicity(a in arb_exact(3), lo in 0i64..4, extra in 1i64..4) {
            let low = a.truncate(&rat_int(lo));
            let high = a.truncate(&rat_int(lo + extra));
            if let Ok(v) = low.valuation() {
                prop_assert_eq!(high.valuation().unwrap(), v);
            }
        }
    }
}
