//! Valuations on `K[x]`: monomial stages, MacLane augmentations, limit
//! augmentations over an ω-indexed generator, truncations `ν_q`, and the
//! operations that only need a value oracle (ε, `∼_ν`, `|_ν`, complete-set
//! decomposition).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hahn::{hahn_poly_valuation, retry_up_to, HahnPoint, KElem};
use crate::polyring::PolyK;
use crate::valgroup::GValue;

/// Anything that assigns values to nonzero polynomials.
pub trait ValuationOracle: Send + Sync + fmt::Debug {
    fn value(&self, f: &PolyK) -> Result<GValue>;

    /// Value of a nonzero constant, the base valuation `ν_0`.
    fn value_k(&self, a: &KElem) -> Result<GValue> {
        self.value(&PolyK::constant(a.clone()))
    }
}

impl<T: ValuationOracle + ?Sized> ValuationOracle for Arc<T> {
    fn value(&self, f: &PolyK) -> Result<GValue> {
        (**self).value(f)
    }
}

/// `min_i ν_0(a_i) + i·γ`.
pub fn eval_monomial(gamma: &GValue, f: &PolyK) -> Result<GValue> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| &a.valuation() + &gamma.scale(i as i64))
        .min()
        .expect("nonzero polynomial"))
}

/// Produces the stages `(φ_{n+1}, γ_{n+1})`, `n ≥ 1`, of an ω-indexed
/// family of augmentations on top of some prefix chain.
pub trait ChainGenerator: Send + Sync + fmt::Debug {
    /// Stage `n ≥ 1`; `None` when a finite generator is exhausted.
    fn stage(&self, n: usize) -> Option<(PolyK, GValue)>;

    /// Maximum number of stages inspected when looking for stabilization.
    fn cap(&self) -> usize;

    fn name(&self) -> String;
}

/// A finite list of stages, mostly for tests and DSL experiments.
#[derive(Clone, Debug)]
pub struct ExplicitGenerator {
    pub stages: Vec<(PolyK, GValue)>,
}

impl ChainGenerator for ExplicitGenerator {
    fn stage(&self, n: usize) -> Option<(PolyK, GValue)> {
        n.checked_sub(1).and_then(|i| self.stages.get(i).cloned())
    }

    fn cap(&self) -> usize {
        self.stages.len()
    }

    fn name(&self) -> String {
        format!("explicit[{}]", self.stages.len())
    }
}

#[derive(Clone, Debug)]
pub enum StageKind {
    Augmented,
    /// Augmentation of the limit of `prefix + generator`.
    LimitAugmented(Arc<dyn ChainGenerator>),
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub phi: PolyK,
    pub gamma: GValue,
    pub kind: StageKind,
}

/// A MacLane chain: a monomial stage `ν(x) = γ_x` followed by augmented and
/// limit-augmented stages.
#[derive(Clone, Debug)]
pub struct ValChain {
    p: u32,
    gamma_x: GValue,
    stages: Vec<Stage>,
}

/// Outcome of following an ω-generator on a fixed polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitOutcome {
    /// The value repeated at generator step `step`.
    Stable { value: GValue, step: usize },
    /// Strictly increasing up to the cap; all values seen, starting with the
    /// prefix value.
    Unstable { values: Vec<GValue> },
}

impl LimitOutcome {
    pub fn into_value(self) -> Result<GValue> {
        match self {
            LimitOutcome::Stable { value, .. } => Ok(value),
            LimitOutcome::Unstable { values } => Err(Error::UnstableLimit { values }),
        }
    }
}

#[derive(Clone, Copy)]
struct Layer<'a> {
    phi: &'a PolyK,
    gamma: &'a GValue,
    limit: Option<&'a Arc<dyn ChainGenerator>>,
}

impl ValChain {
    pub fn monomial(p: u32, gamma_x: GValue) -> Self {
        ValChain { p, gamma_x, stages: Vec::new() }
    }

    /// Assembles a chain without checking augmentation hypotheses. Only
    /// useful for feeding `validate_chain` deliberately broken chains.
    pub fn from_parts_unchecked(p: u32, gamma_x: GValue, stages: Vec<Stage>) -> Self {
        ValChain { p, gamma_x, stages }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn gamma_x(&self) -> &GValue {
        &self.gamma_x
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// The chain cut after its first `n` stages (`0` leaves the monomial stage).
    pub fn truncated(&self, n: usize) -> ValChain {
        ValChain { p: self.p, gamma_x: self.gamma_x.clone(), stages: self.stages[..n].to_vec() }
    }

    fn check_key_shape(&self, phi: &PolyK) -> Result<()> {
        if !phi.is_monic() || phi.deg0() == 0 {
            return Err(Error::InvalidAugmentation("key polynomial must be monic of positive degree".into()));
        }
        if let Some(last) = self.stages.last() {
            if phi.deg0() < last.phi.deg0() {
                return Err(Error::InvalidAugmentation("key polynomial degrees must not decrease".into()));
            }
        }
        Ok(())
    }

    /// `[ν; ν'(φ) = γ]`, rejecting `γ ≤ ν(φ)`.
    pub fn augment(&self, phi: PolyK, gamma: GValue) -> Result<ValChain> {
        self.check_key_shape(&phi)?;
        let current = self.eval(&phi)?;
        if gamma <= current {
            return Err(Error::InvalidAugmentation(format!(
                "augmentation must increase value: γ = {gamma} ≤ ν(φ) = {current}"
            )));
        }
        let mut next = self.clone();
        next.stages.push(Stage { phi, gamma, kind: StageKind::Augmented });
        Ok(next)
    }

    /// `[{ν_n}; ν'(φ) = γ]` where `ν_n` runs over this chain extended by
    /// `generator`. `γ` must exceed every value of `φ` seen along the
    /// generator (or its stable value).
    pub fn limit_augment(&self, generator: Arc<dyn ChainGenerator>, phi: PolyK, gamma: GValue) -> Result<ValChain> {
        self.check_key_shape(&phi)?;
        let bound = match self.eval_limit(generator.as_ref(), &phi)? {
            LimitOutcome::Stable { value, .. } => value,
            LimitOutcome::Unstable { values } => values.last().cloned().expect("nonempty"),
        };
        if gamma <= bound {
            return Err(Error::InvalidAugmentation(format!(
                "augmentation must increase value: γ = {gamma} ≤ {bound} reached along the limit"
            )));
        }
        let mut next = self.clone();
        next.stages.push(Stage { phi, gamma, kind: StageKind::LimitAugmented(generator) });
        Ok(next)
    }

    fn layers(&self) -> Vec<Layer<'_>> {
        self.stages
            .iter()
            .map(|s| Layer {
                phi: &s.phi,
                gamma: &s.gamma,
                limit: match &s.kind {
                    StageKind::Augmented => None,
                    StageKind::LimitAugmented(g) => Some(g),
                },
            })
            .collect()
    }

    /// Value of `f` under the full chain.
    pub fn eval(&self, f: &PolyK) -> Result<GValue> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        eval_layers(&self.gamma_x, &self.layers(), f)
    }

    /// Follows `generator` on top of this chain until the value of `f`
    /// repeats or the generator's cap is reached.
    pub fn eval_limit(&self, generator: &dyn ChainGenerator, f: &PolyK) -> Result<LimitOutcome> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        eval_limit_layers(&self.gamma_x, &self.layers(), generator, f)
    }

    /// The limit valuation `ν_ω` of this chain extended by `generator`.
    pub fn limit(&self, generator: Arc<dyn ChainGenerator>) -> LimitValuation {
        LimitValuation { prefix: self.clone(), generator }
    }
}

impl ValuationOracle for ValChain {
    fn value(&self, f: &PolyK) -> Result<GValue> {
        self.eval(f)
    }
}

fn eval_layers(gamma_x: &GValue, layers: &[Layer<'_>], f: &PolyK) -> Result<GValue> {
    let Some((top, rest)) = layers.split_last() else {
        return eval_monomial(gamma_x, f);
    };
    if f.deg0() < top.phi.deg0() {
        return value_below(gamma_x, top, rest, f);
    }
    let digits = f.q_expand(top.phi)?.digits;
    let mut best = GValue::Infinity;
    for (i, d) in digits.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let v = &value_below(gamma_x, top, rest, d)? + &top.gamma.scale(i as i64);
        best = best.min(v);
    }
    Ok(best)
}

/// Value of a digit of the `top` expansion: by the previous stage, or by
/// the limit when `top` is a limit augmentation.
fn value_below(gamma_x: &GValue, top: &Layer<'_>, rest: &[Layer<'_>], g: &PolyK) -> Result<GValue> {
    match top.limit {
        None => eval_layers(gamma_x, rest, g),
        Some(generator) => eval_limit_layers(gamma_x, rest, generator.as_ref(), g)?.into_value(),
    }
}

fn eval_limit_layers(
    gamma_x: &GValue,
    prefix: &[Layer<'_>],
    generator: &dyn ChainGenerator,
    f: &PolyK,
) -> Result<LimitOutcome> {
    let mut previous = eval_layers(gamma_x, prefix, f)?;
    let mut values = vec![previous.clone()];
    let mut generated: Vec<(PolyK, GValue)> = Vec::new();
    for n in 1..=generator.cap() {
        let Some(stage) = generator.stage(n) else { break };
        generated.push(stage);
        let mut layers = prefix.to_vec();
        layers.extend(generated.iter().map(|(phi, gamma)| Layer { phi, gamma, limit: None }));
        let v = eval_layers(gamma_x, &layers, f)?;
        if v == previous {
            return Ok(LimitOutcome::Stable { value: v, step: n });
        }
        values.push(v.clone());
        previous = v;
    }
    Ok(LimitOutcome::Unstable { values })
}

/// `ν_ω = sup ν_n`, computed by stabilization with the generator's cap.
#[derive(Clone, Debug)]
pub struct LimitValuation {
    pub prefix: ValChain,
    pub generator: Arc<dyn ChainGenerator>,
}

impl ValuationOracle for LimitValuation {
    fn value(&self, f: &PolyK) -> Result<GValue> {
        self.prefix.eval_limit(self.generator.as_ref(), f)?.into_value()
    }
}

/// `ν_{η'}(f) = ν_t(ι(f)(η′))`, retrying at higher approximation levels up
/// to `max_level`.
#[derive(Clone, Debug)]
pub struct HahnValuation {
    pub point: HahnPoint,
    pub max_level: u32,
}

impl HahnValuation {
    pub fn new(point: HahnPoint) -> Self {
        HahnValuation { point, max_level: u32::MAX }
    }
}

impl ValuationOracle for HahnValuation {
    fn value(&self, f: &PolyK) -> Result<GValue> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        retry_up_to(self.max_level, |level| hahn_poly_valuation(f, &self.point, level))
    }
}

/// `ν_q(f) = min_i ν(f_i) + i·ν(q)` over the `q`-expansion of `f`.
pub fn truncate(reference: &dyn ValuationOracle, q: &PolyK, f: &PolyK) -> Result<GValue> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let digits = f.q_expand(q)?.digits;
    let vq = if digits.len() > 1 { reference.value(q)? } else { GValue::zero() };
    let mut best = GValue::Infinity;
    for (i, d) in digits.iter().enumerate() {
        if !d.is_zero() {
            best = best.min(&reference.value(d)? + &vq.scale(i as i64));
        }
    }
    Ok(best)
}

/// The truncation `ν_q` of a reference valuation, as an oracle.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub reference: Arc<dyn ValuationOracle>,
    pub q: PolyK,
}

impl ValuationOracle for Truncation {
    fn value(&self, f: &PolyK) -> Result<GValue> {
        truncate(self.reference.as_ref(), &self.q, f)
    }
}

/// ε(f) with the values it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonReport {
    pub value: GValue,
    pub nu_f: GValue,
    /// `(b, ν(∂_b f))` for every `b` with `∂_b f ≠ 0`.
    pub derivatives: Vec<(usize, GValue)>,
}

impl EpsilonReport {
    pub fn to_json(&self) -> Value {
        json!({
            "epsilon": self.value,
            "nu_f": self.nu_f,
            "derivatives": self.derivatives.iter()
                .map(|(b, v)| json!({"b": b, "value": v}))
                .collect::<Vec<_>>(),
        })
    }
}

/// `ε(f) = max_b (ν(f) − ν(∂_b f)) / b`.
pub fn epsilon(reference: &dyn ValuationOracle, f: &PolyK) -> Result<EpsilonReport> {
    let deg = f.deg0();
    if deg == 0 {
        return Err(Error::InvalidArgument("ε is defined for nonconstant polynomials".into()));
    }
    let nu_f = reference.value(f)?;
    let mut derivatives = Vec::new();
    let mut best: Option<GValue> = None;
    for b in 1..=deg {
        let d = f.hasse_derivative(b);
        if d.is_zero() {
            continue;
        }
        let vb = reference.value(&d)?;
        derivatives.push((b, vb.clone()));
        if let Some(diff) = nu_f.checked_sub(&vb) {
            let q = match diff {
                GValue::Infinity => GValue::Infinity,
                finite => finite.div(b as u64)?,
            };
            best = Some(best.map_or(q.clone(), |x| x.max(q)));
        }
    }
    // ∂_deg f is the nonzero leading coefficient, so `best` is set unless
    // every derivative lies in the support
    let value = best.unwrap_or(GValue::Infinity);
    Ok(EpsilonReport { value, nu_f, derivatives })
}

/// `f ∼_ν g`: same value and `ν(f − g) > ν(f)`.
pub fn nu_equiv(reference: &dyn ValuationOracle, f: &PolyK, g: &PolyK) -> Result<bool> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let vf = reference.value(f)?;
    if vf != reference.value(g)? {
        return Ok(false);
    }
    let diff = f.sub(g);
    let vd = if diff.is_zero() { GValue::Infinity } else { reference.value(&diff)? };
    Ok(vd > vf)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivWitness {
    Witness(PolyK),
    /// The Euclidean quotient is not a witness; says nothing about
    /// divisibility itself.
    NoWitnessFound,
}

/// One-sided check of `g |_ν f`: tries the Euclidean quotient `h` and
/// reports it when `f ∼_ν g·h`.
pub fn nu_divides_witness(reference: &dyn ValuationOracle, g: &PolyK, f: &PolyK) -> Result<DivWitness> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (h, _) = f.divmod(g)?;
    if h.is_zero() {
        return Ok(DivWitness::NoWitnessFound);
    }
    if nu_equiv(reference, f, &g.mul(&h))? {
        Ok(DivWitness::Witness(h))
    } else {
        Ok(DivWitness::NoWitnessFound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCheck {
    pub stage: String,
    pub condition: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub checks: Vec<ChainCheck>,
}

impl ChainReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ChainCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass(),
            "checks": self.checks.iter().map(|c| json!({
                "stage": c.stage,
                "condition": c.condition,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

pub const VALUE_INCREASES: &str = "augmentation must increase value";
pub const DEGREE_MONOTONE: &str = "key polynomial degrees must not decrease";
pub const NOT_EQUIVALENT: &str = "consecutive key polynomials of equal degree must not be equivalent";

struct Checker {
    checks: Vec<ChainCheck>,
}

impl Checker {
    fn push(&mut self, stage: &str, condition: &'static str, pass: bool, detail: String) {
        self.checks.push(ChainCheck { stage: stage.to_string(), condition, pass, detail });
    }

    fn outcome<T>(&mut self, stage: &str, condition: &'static str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(stage, condition, false, e.to_string());
                None
            }
        }
    }

    /// Checks one ordinary augmentation `below → [below; φ = γ]` whose
    /// predecessor key polynomial (if any) is `prev_phi`.
    fn augmentation(&mut self, label: &str, below: &dyn ValuationOracle, prev_phi: Option<&PolyK>, phi: &PolyK, gamma: &GValue) {
        if let Some(v) = self.outcome(label, VALUE_INCREASES, below.value(phi)) {
            self.push(label, VALUE_INCREASES, gamma > &v, format!("γ = {gamma}, previous value {v}"));
        }
        if let Some(prev) = prev_phi {
            let (dp, dq) = (prev.deg0(), phi.deg0());
            self.push(label, DEGREE_MONOTONE, dp <= dq, format!("{dp} then {dq}"));
            if dp == dq {
                if let Some(eq) = self.outcome(label, NOT_EQUIVALENT, nu_equiv(below, prev, phi)) {
                    self.push(label, NOT_EQUIVALENT, !eq, format!("equivalent = {eq}"));
                }
            }
        }
    }
}

/// Checks the well-formedness conditions of a family of iterated
/// augmentations. Generator stages behind limit stages are checked up to
/// `generator_depth`.
pub fn validate_chain(chain: &ValChain, generator_depth: usize) -> ChainReport {
    let mut ck = Checker { checks: Vec::new() };
    for (k, stage) in chain.stages.iter().enumerate() {
        let below = chain.truncated(k);
        let prev_phi = k.checked_sub(1).map(|j| &chain.stages[j].phi);
        match &stage.kind {
            StageKind::Augmented => {
                let label = format!("stage {}", k + 1);
                let prev_plain = prev_phi.filter(|_| matches!(chain.stages[k - 1].kind, StageKind::Augmented));
                ck.augmentation(&label, &below, prev_plain, &stage.phi, &stage.gamma);
                if let Some(prev) = prev_phi.filter(|_| prev_plain.is_none()) {
                    let (dp, dq) = (prev.deg0(), stage.phi.deg0());
                    ck.push(&label, DEGREE_MONOTONE, dp <= dq, format!("{dp} then {dq}"));
                }
            }
            StageKind::LimitAugmented(generator) => {
                let mut running = below.clone();
                let mut prev = prev_phi.cloned();
                for n in 1..=generator_depth.min(generator.cap()) {
                    let Some((phi, gamma)) = generator.stage(n) else { break };
                    let label = format!("stage {} generator step {n}", k + 1);
                    ck.augmentation(&label, &running, prev.as_ref(), &phi, &gamma);
                    running = ValChain::from_parts_unchecked(chain.p, chain.gamma_x.clone(), {
                        let mut s = running.stages.clone();
                        s.push(Stage { phi: phi.clone(), gamma, kind: StageKind::Augmented });
                        s
                    });
                    prev = Some(phi);
                }
                let label = format!("stage {} (limit)", k + 1);
                if let Some(outcome) = ck.outcome(&label, VALUE_INCREASES, below.eval_limit(generator.as_ref(), &stage.phi)) {
                    let (bound, detail) = match &outcome {
                        LimitOutcome::Stable { value, .. } => (value.clone(), format!("stable value {value}")),
                        LimitOutcome::Unstable { values } => {
                            let last = values.last().cloned().expect("nonempty");
                            (last.clone(), format!("strictly increasing, last {last}"))
                        }
                    };
                    ck.push(&label, VALUE_INCREASES, stage.gamma > bound, format!("γ = {}, {detail}", stage.gamma));
                }
                if let Some(g1) = generator.stage(1) {
                    let (dp, dq) = (g1.0.deg0(), stage.phi.deg0());
                    ck.push(&label, DEGREE_MONOTONE, dp <= dq, format!("{dp} then {dq}"));
                }
            }
        }
    }
    ChainReport { checks: ck.checks }
}

/// One summand `a · Π Q_j^{λ_j}` of a complete-set decomposition; `exponents`
/// is keyed by position in the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub scalar: KElem,
    pub exponents: BTreeMap<usize, u32>,
}

impl DecompositionTerm {
    pub fn expand(&self, set: &[PolyK]) -> PolyK {
        self.exponents
            .iter()
            .fold(PolyK::constant(self.scalar.clone()), |acc, (j, e)| acc.mul(&set[*j].pow(*e)))
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub terms: Vec<DecompositionTerm>,
    pub value: GValue,
    pub term_values: Vec<GValue>,
}

impl Decomposition {
    pub fn to_json(&self, set_names: &[String]) -> Value {
        json!({
            "value": self.value,
            "terms": self.terms.iter().zip(&self.term_values).map(|(t, v)| json!({
                "scalar": t.scalar.to_string(),
                "exponents": t.exponents.iter()
                    .map(|(j, e)| json!({"poly": set_names[*j], "e": e}))
                    .collect::<Vec<_>>(),
                "value": v,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Index of the first `Q` in `set` with `deg Q ≤ deg f` and `ν_Q(f) = ν(f)`.
pub fn fixing_member(reference: &dyn ValuationOracle, set: &[PolyK], f: &PolyK) -> Result<Option<usize>> {
    let target = reference.value(f)?;
    for (j, q) in set.iter().enumerate() {
        if q.deg0() <= f.deg0() && truncate(reference, q, f)? == target {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Writes `f = Σ a_i Q^{λ_i}` with every summand valued at least `ν(f)`,
/// by induction on the degree: pick a fixing `Q`, expand in `Q`, recurse on
/// the digits.
pub fn decompose(reference: &dyn ValuationOracle, set: &[PolyK], f: &PolyK) -> Result<Decomposition> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let terms = decompose_rec(reference, set, f)?;
    let value = reference.value(f)?;
    let mut resum = PolyK::zero(f.p());
    let mut term_values = Vec::with_capacity(terms.len());
    for t in &terms {
        let e = t.expand(set);
        let v = reference.value(&e)?;
        assert!(v >= value, "decomposition term {} valued {v} below {value}", e);
        assert!(
            t.exponents.keys().all(|j| set[*j].deg0() <= f.deg0()),
            "decomposition uses a key polynomial of degree above deg f"
        );
        term_values.push(v);
        resum = resum.add(&e);
    }
    assert_eq!(&resum, f, "decomposition does not re-sum to the input");
    Ok(Decomposition { terms, value, term_values })
}

fn decompose_rec(reference: &dyn ValuationOracle, set: &[PolyK], g: &PolyK) -> Result<Vec<DecompositionTerm>> {
    if g.is_zero() {
        return Ok(Vec::new());
    }
    if g.deg0() == 0 {
        return Ok(vec![DecompositionTerm { scalar: g.coeff(0), exponents: BTreeMap::new() }]);
    }
    let j = fixing_member(reference, set, g)?.ok_or_else(|| Error::NotComplete { witness: g.to_string() })?;
    let digits = g.q_expand(&set[j])?.digits;
    let mut out = Vec::new();
    for (i, d) in digits.iter().enumerate() {
        for mut t in decompose_rec(reference, set, d)? {
            if i > 0 {
                *t.exponents.entry(j).or_insert(0) += i as u32;
            }
            out.push(t);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    /// For each sample, the index of the first fixing member, if any.
    pub entries: Vec<(PolyK, Option<usize>)>,
}

impl CompletenessReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|(_, j)| j.is_some())
    }

    pub fn to_json(&self, set_names: &[String]) -> Value {
        json!({
            "pass": self.all_pass(),
            "samples": self.entries.iter().map(|(f, j)| json!({
                "f": f.to_string(),
                "fixed_by": j.map(|j| set_names[j].clone()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Sampled completeness: does every nonconstant sample have a fixing member
/// of the set? Constants need none and are skipped.
pub fn is_complete_on(reference: &dyn ValuationOracle, set: &[PolyK], samples: &[PolyK]) -> Result<CompletenessReport> {
    let entries = samples
        .iter()
        .filter(|f| f.deg0() > 0)
        .map(|f| Ok((f.clone(), fixing_member(reference, set, f)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CompletenessReport { entries })
}
