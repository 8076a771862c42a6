//! δ(f), key-polynomial and minimal-pair falsifiers, pseudo-convergent
//! sequences and their types.
//!
//! Universally quantified predicates are checked against finite pools. A
//! falsification is exact; `NotFalsified` only says the pool had no witness.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hahn::{hahn_poly_valuation, iota, retry, HahnApprox, HahnPoint, KElem};
use crate::polyring::PolyK;
use crate::valgroup::{rat_int, GValue};
use crate::valuation::{epsilon, truncate, EpsilonReport, HahnValuation, ValuationOracle};

/// An element of `K`, or a point of `F_p((t^Q))` standing for an element of
/// the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    K(KElem),
    Point(HahnPoint),
}

impl Element {
    pub fn p(&self) -> u32 {
        match self {
            Element::K(a) => a.p(),
            Element::Point(a) => a.p(),
        }
    }

    fn to_point(&self, level: u32) -> Result<HahnPoint> {
        match self {
            Element::K(a) => Ok(HahnPoint::series(iota(a, &rat_int(level as i64))?)),
            Element::Point(a) => Ok(a.clone()),
        }
    }

    pub fn as_k(&self) -> Option<&KElem> {
        match self {
            Element::K(a) => Some(a),
            Element::Point(_) => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::K(a) => write!(f, "{a}"),
            Element::Point(a) => write!(f, "{a}"),
        }
    }
}

/// `ν_t(a − b)`.
pub fn diff_value(a: &Element, b: &Element) -> Result<GValue> {
    if let (Element::K(a), Element::K(b)) = (a, b) {
        return Ok(a.sub(b).valuation());
    }
    retry(|level| a.to_point(level)?.diff_valuation_at(&b.to_point(level)?, level))
}

/// `ν_t(f(a))`, with `∞` for a root.
pub fn value_at(f: &PolyK, a: &Element) -> Result<GValue> {
    match a {
        Element::K(a) => Ok(f.eval(a).valuation()),
        Element::Point(pt) => retry(|level| hahn_poly_valuation(f, pt, level)),
    }
}

/// A monic polynomial with its roots, supplied analytically.
#[derive(Clone, Debug)]
pub struct RootData {
    pub poly: PolyK,
    pub roots: Vec<Element>,
}

impl RootData {
    /// Checks that `poly` is monic with `deg poly` roots and vanishes at each
    /// of them (exactly, or beyond every tested precision).
    pub fn new(poly: PolyK, roots: Vec<Element>) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::InvalidArgument("root data needs a monic polynomial".into()));
        }
        if roots.len() != poly.deg0() {
            return Err(Error::InvalidArgument(format!(
                "{} roots supplied for a polynomial of degree {}",
                roots.len(),
                poly.deg0()
            )));
        }
        for r in &roots {
            match value_at(&poly, r) {
                Ok(GValue::Infinity) | Err(Error::InsufficientPrecision { .. }) => {}
                Ok(v) => return Err(Error::InvalidArgument(format!("{r} is not a root of {poly}: value {v}"))),
                Err(e) => return Err(e),
            }
        }
        Ok(RootData { poly, roots })
    }

    pub fn linear(a: KElem) -> Self {
        RootData { poly: PolyK::linear(&a), roots: vec![Element::K(a)] }
    }

    /// Roots known in closed form: monic linear polynomials and the
    /// Artin–Schreier polynomial `x^p − x − y^{-1}` (roots `η + j`).
    pub fn analytic(poly: &PolyK) -> Result<Self> {
        let p = poly.p();
        if poly.is_monic() && poly.deg0() == 1 {
            return Ok(Self::linear(poly.coeff(0).neg()));
        }
        if *poly == PolyK::artin_schreier(p) {
            let eta = HahnPoint::eta(p);
            let roots = (0..p as i64).map(|j| Element::Point(eta.plus(&HahnApprox::constant(p, j)))).collect();
            return Ok(RootData { poly: poly.clone(), roots });
        }
        Err(Error::InvalidArgument(format!("no closed-form roots known for {poly}; supply them")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
    pub value: GValue,
    /// `ν_t(η′ − a)` per root, in root order.
    pub root_values: Vec<GValue>,
    /// Index of the first root attaining the maximum.
    pub best: usize,
}

/// `δ(f) = max ν_t(η′ − a)` over the roots `a` of `f`.
pub fn delta(rd: &RootData, eta_prime: &HahnPoint) -> Result<DeltaReport> {
    let point = Element::Point(eta_prime.clone());
    let root_values = rd.roots.iter().map(|r| diff_value(&point, r)).collect::<Result<Vec<_>>>()?;
    let (best, value) = root_values
        .iter()
        .enumerate()
        .fold(None::<(usize, &GValue)>, |acc, (i, v)| match acc {
            Some((_, b)) if b >= v => acc,
            _ => Some((i, v)),
        })
        .ok_or_else(|| Error::InvalidArgument("δ needs at least one root".into()))?;
    Ok(DeltaReport { value: value.clone(), root_values, best })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsDeltaReport {
    pub epsilon: EpsilonReport,
    pub delta: DeltaReport,
}

impl EpsDeltaReport {
    pub fn equal(&self) -> bool {
        self.epsilon.value == self.delta.value
    }

    pub fn to_json(&self) -> Value {
        json!({
            "equal": self.equal(),
            "epsilon": self.epsilon.to_json(),
            "delta": self.delta.value,
            "root_values": self.delta.root_values,
        })
    }
}

/// ε(f) under `ν_{η′}` against δ(f) from the roots.
pub fn check_eps_eq_delta(rd: &RootData, eta_prime: &HahnPoint) -> Result<EpsDeltaReport> {
    let reference = HahnValuation::new(eta_prime.clone());
    Ok(EpsDeltaReport { epsilon: epsilon(&reference, &rd.poly)?, delta: delta(rd, eta_prime)? })
}

/// Outcome of a pool-sampled check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Falsified(W),
    NotFalsified,
}

impl<W> Verdict<W> {
    pub fn is_falsified(&self) -> bool {
        matches!(self, Verdict::Falsified(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyReport {
    pub verdict: Verdict<PolyK>,
    pub eps_q: GValue,
    /// `(f, ε(f))` for each nonconstant pool member checked.
    pub values: Vec<(PolyK, GValue)>,
}

impl KeyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": verdict_name(&self.verdict),
            "witness": match &self.verdict {
                Verdict::Falsified(f) => Value::String(f.to_string()),
                Verdict::NotFalsified => Value::Null,
            },
            "epsilon_q": self.eps_q,
            "values": self.values.iter()
                .map(|(f, e)| json!({"f": f.to_string(), "epsilon": e}))
                .collect::<Vec<_>>(),
        })
    }
}

fn verdict_name<W>(v: &Verdict<W>) -> &'static str {
    match v {
        Verdict::Falsified(_) => "falsified",
        Verdict::NotFalsified => "not_falsified",
    }
}

/// Looks for `f` in the pool with `deg f < deg Q` and `ε(f) ≥ ε(Q)`. The
/// first such `f` in pool order is the witness. Constants are skipped.
pub fn is_key_sampled(reference: &dyn ValuationOracle, q: &PolyK, pool: &[PolyK]) -> Result<KeyReport> {
    if !q.is_monic() || q.deg0() == 0 {
        return Err(Error::InvalidArgument("key polynomial candidates are monic and nonconstant".into()));
    }
    let eps_q = epsilon(reference, q)?.value;
    let mut values = Vec::new();
    for f in pool.iter().filter(|f| f.deg0() > 0) {
        let e = epsilon(reference, f)?.value;
        values.push((f.clone(), e.clone()));
        if f.deg0() < q.deg0() && e >= eps_q {
            return Ok(KeyReport { verdict: Verdict::Falsified(f.clone()), eps_q, values });
        }
    }
    Ok(KeyReport { verdict: Verdict::NotFalsified, eps_q, values })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaPsiReport {
    pub alpha: Option<usize>,
    pub psi: Vec<PolyK>,
    /// `(f, ν_Q(f), ν(f))` for each pool member.
    pub entries: Vec<(PolyK, GValue, GValue)>,
}

impl AlphaPsiReport {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha,
            "psi": self.psi.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "values": self.entries.iter()
                .map(|(f, t, v)| json!({"f": f.to_string(), "truncated": t, "value": v}))
                .collect::<Vec<_>>(),
        })
    }
}

/// `α(Q)` and `Ψ(Q)` restricted to the pool.
pub fn alpha_psi_sampled(reference: &dyn ValuationOracle, q: &PolyK, pool: &[PolyK]) -> Result<AlphaPsiReport> {
    if pool.is_empty() {
        return Err(Error::InvalidArgument("α/Ψ search needs a nonempty pool".into()));
    }
    let mut entries = Vec::new();
    for f in pool.iter().filter(|f| !f.is_zero()) {
        entries.push((f.clone(), truncate(reference, q, f)?, reference.value(f)?));
    }
    let drops = || entries.iter().filter(|(_, t, v)| t < v);
    let alpha = drops().map(|(f, _, _)| f.deg0()).min();
    let psi = drops()
        .filter(|(f, _, _)| Some(f.deg0()) == alpha && f.is_monic())
        .map(|(f, _, _)| f.clone())
        .collect();
    Ok(AlphaPsiReport { alpha, psi, entries })
}

/// A finite prefix `a_0, …, a_m` of a sequence with its successive
/// differences `γ_ρ = ν(a_{ρ+1} − a_ρ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcsPrefix {
    pub terms: Vec<Element>,
    pub diffs: Vec<GValue>,
}

impl PcsPrefix {
    pub fn new(terms: Vec<Element>) -> Result<Self> {
        let diffs = terms.windows(2).map(|w| diff_value(&w[1], &w[0])).collect::<Result<Vec<_>>>()?;
        Ok(PcsPrefix { terms, diffs })
    }

    pub fn from_k(terms: Vec<KElem>) -> Result<Self> {
        Self::new(terms.into_iter().map(Element::K).collect())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcsReport {
    pub increasing: bool,
    pub triples: bool,
    /// First triple `ρ < σ < τ` violating the three-index condition.
    pub violation: Option<(usize, usize, usize)>,
    pub diffs: Vec<GValue>,
}

impl PcsReport {
    pub fn is_pcs(&self) -> bool {
        self.increasing && self.triples
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pcs": self.is_pcs(),
            "increasing_differences": self.increasing,
            "all_triples": self.triples,
            "violation": self.violation.map(|(a, b, c)| vec![a, b, c]),
            "gammas": self.diffs,
        })
    }
}

/// Checks both forms of the pcs condition: strictly increasing finite
/// successive differences, and finite `ν(a_σ − a_ρ) < ν(a_τ − a_σ)` on all
/// triples (so the terms are pairwise distinct).
pub fn pcs_check(prefix: &PcsPrefix) -> Result<PcsReport> {
    let n = prefix.len();
    if n < 3 {
        return Err(Error::PrefixTooShort(n));
    }
    let d = &prefix.diffs;
    let increasing = d.iter().all(GValue::is_finite) && d.windows(2).all(|w| w[0] < w[1]);
    let mut violation = None;
    'outer: for r in 0..n {
        for s in r + 1..n {
            let left = diff_value(&prefix.terms[s], &prefix.terms[r])?;
            for t in s + 1..n {
                let right = diff_value(&prefix.terms[t], &prefix.terms[s])?;
                if !(left.is_finite() && right.is_finite() && left < right) {
                    violation = Some((r, s, t));
                    break 'outer;
                }
            }
        }
    }
    Ok(PcsReport { increasing, triples: violation.is_none(), violation, diffs: d.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitReport {
    pub holds: bool,
    /// `(ν(a − a_ρ), γ_ρ)` per index.
    pub values: Vec<(GValue, GValue)>,
}

impl LimitReport {
    fn from_values(values: Vec<(GValue, GValue)>) -> Self {
        LimitReport { holds: values.iter().all(|(a, b)| a == b), values }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "limit": self.holds,
            "values": self.values.iter()
                .map(|(v, g)| json!({"value": v, "gamma": g}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Is `a` a limit of the prefix under `ν_t`?
pub fn is_limit(prefix: &PcsPrefix, a: &Element) -> Result<LimitReport> {
    let values = prefix
        .diffs
        .iter()
        .zip(&prefix.terms)
        .map(|(g, t)| Ok((diff_value(a, t)?, g.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitReport::from_values(values))
}

/// Is `x` a limit of the prefix under `reference`, i.e. `ν(x − a_ρ) = γ_ρ`?
pub fn is_limit_x(prefix: &PcsPrefix, reference: &dyn ValuationOracle) -> Result<LimitReport> {
    let values = prefix
        .diffs
        .iter()
        .zip(&prefix.terms)
        .map(|(g, t)| {
            let a = t.as_k().ok_or_else(|| Error::InvalidArgument("x can only be compared with elements of K".into()))?;
            Ok((reference.value(&PolyK::linear(a))?, g.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitReport::from_values(values))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// The values are constant from `index` to the end of the prefix.
    Stabilized { index: usize, value: GValue },
    StrictlyIncreasing { values: Vec<GValue> },
    Inconclusive { values: Vec<GValue> },
}

impl Classification {
    pub fn to_json(&self) -> Value {
        match self {
            Classification::Stabilized { index, value } => {
                json!({"class": "stabilized", "index": index, "value": value})
            }
            Classification::StrictlyIncreasing { values } => json!({"class": "strictly_increasing", "values": values}),
            Classification::Inconclusive { values } => json!({"class": "inconclusive", "values": values}),
        }
    }
}

/// Classifies `ν(f(a_ρ))` along the prefix: stabilized when the last two
/// values agree, strictly increasing when the finite values increase
/// strictly over at least the last three terms, inconclusive otherwise.
pub fn classify_along_pcs(prefix: &PcsPrefix, f: &PolyK) -> Result<Classification> {
    let values = prefix.terms.iter().map(|a| value_at(f, a)).collect::<Result<Vec<_>>>()?;
    let n = values.len();
    if n >= 2 && values[n - 1] == values[n - 2] {
        let mut index = n - 1;
        while index > 0 && values[index - 1] == values[n - 1] {
            index -= 1;
        }
        return Ok(Classification::Stabilized { index, value: values[n - 1].clone() });
    }
    if n == 1 {
        return Ok(Classification::Stabilized { index: 0, value: values[0].clone() });
    }
    let mut run = 1;
    while run < n && values[n - run - 1] < values[n - run] {
        run += 1;
    }
    if run >= 3 && values[n - 1].is_finite() {
        Ok(Classification::StrictlyIncreasing { values })
    } else {
        Ok(Classification::Inconclusive { values })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcsType {
    TranscendentalUpToCap { checked: usize },
    Algebraic { witness: PolyK, degree: usize },
}

impl PcsType {
    pub fn to_json(&self) -> Value {
        match self {
            PcsType::TranscendentalUpToCap { checked } => json!({"type": "transcendental_up_to_cap", "checked": checked}),
            PcsType::Algebraic { witness, degree } => {
                json!({"type": "algebraic", "witness": witness.to_string(), "degree": degree})
            }
        }
    }
}

/// Sweeps monic polynomials of degree `1..=cap` with coefficients from the
/// pool, in increasing degree and then lexicographically by pool index from
/// the `x^{d−1}` coefficient down. The first strictly increasing one is the
/// witness.
pub fn classify_pcs_type(prefix: &PcsPrefix, degree_cap: usize, pool: &[KElem]) -> Result<PcsType> {
    let p = prefix.terms.first().map(Element::p).ok_or(Error::PrefixTooShort(0))?;
    if pool.is_empty() {
        return Err(Error::InvalidArgument("coefficient pool is empty".into()));
    }
    let mut checked = 0;
    for d in 1..=degree_cap {
        let mut idx = vec![0usize; d];
        loop {
            let mut coeffs: Vec<KElem> = idx.iter().rev().map(|&i| pool[i].clone()).collect();
            coeffs.push(KElem::one(p));
            let f = PolyK::new(p, coeffs);
            checked += 1;
            if let Classification::StrictlyIncreasing { .. } = classify_along_pcs(prefix, &f)? {
                return Ok(PcsType::Algebraic { witness: f, degree: d });
            }
            // idx[0] is the x^{d−1} coefficient and varies slowest
            let mut k = d;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < pool.len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break;
            }
        }
    }
    Ok(PcsType::TranscendentalUpToCap { checked })
}

/// A candidate minimal pair `(a, δ)` with declared degrees over `K`.
#[derive(Clone, Debug)]
pub struct MinimalPairQuery {
    pub a: Element,
    pub degree: u32,
    pub delta: GValue,
    pub pool: Vec<(Element, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPairReport {
    pub verdict: Verdict<Element>,
    /// `(b, ν_t(b − a))` for each pool member checked.
    pub values: Vec<(Element, GValue)>,
}

impl MinimalPairReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": verdict_name(&self.verdict),
            "witness": match &self.verdict {
                Verdict::Falsified(b) => Value::String(b.to_string()),
                Verdict::NotFalsified => Value::Null,
            },
            "values": self.values.iter()
                .map(|(b, v)| json!({"b": b.to_string(), "value": v}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Looks for `b` of smaller declared degree with `ν_t(b − a) ≥ δ`.
pub fn is_minimal_pair_sampled(q: &MinimalPairQuery) -> Result<MinimalPairReport> {
    if q.degree == 0 || q.pool.iter().any(|(_, d)| *d == 0) {
        return Err(Error::InvalidArgument("declared degrees are positive".into()));
    }
    let mut values = Vec::new();
    for (b, _) in q.pool.iter().filter(|(_, d)| *d < q.degree) {
        let v = diff_value(b, &q.a)?;
        values.push((b.clone(), v.clone()));
        if v >= q.delta {
            return Ok(MinimalPairReport { verdict: Verdict::Falsified(b.clone()), values });
        }
    }
    Ok(MinimalPairReport { verdict: Verdict::NotFalsified, values })
}

/// `{x − a_ρ}`.
pub fn keypolys_from_pcs(prefix: &PcsPrefix) -> Result<Vec<PolyK>> {
    prefix
        .terms
        .iter()
        .map(|t| {
            t.as_k()
                .map(PolyK::linear)
                .ok_or_else(|| Error::InvalidArgument("key polynomials x − a need a ∈ K".into()))
        })
        .collect()
}

/// Picks per stage the root closest to `η′` (first in root order on ties) and
/// checks that the result is a pcs when it has at least three terms.
pub fn pcs_from_keypolys(stages: &[RootData], eta_prime: &HahnPoint) -> Result<PcsPrefix> {
    let terms = stages
        .iter()
        .map(|rd| Ok(rd.roots[delta(rd, eta_prime)?.best].clone()))
        .collect::<Result<Vec<_>>>()?;
    let prefix = PcsPrefix::new(terms)?;
    if prefix.len() >= 3 {
        let report = pcs_check(&prefix)?;
        if let Some((a, b, c)) = report.violation {
            return Err(Error::NotPcs(a, b, c));
        }
        if !report.increasing {
            let i = prefix.diffs.windows(2).position(|w| w[0] >= w[1]).unwrap_or(0);
            return Err(Error::NotPcs(i, i + 1, i + 2));
        }
    }
    Ok(prefix)
}
