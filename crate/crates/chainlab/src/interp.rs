//! Execution of checked scripts.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use valkey_core::family::{FirstChain, SecondChain, DEFAULT_CAP};
use valkey_core::keypoly::{
    alpha_psi_sampled, check_eps_eq_delta, classify_along_pcs, classify_pcs_type, delta, is_key_sampled, is_limit,
    is_limit_x, is_minimal_pair_sampled, keypolys_from_pcs, pcs_check, pcs_from_keypolys, MinimalPairQuery,
};
use valkey_core::valuation::{
    decompose, epsilon, is_complete_on, nu_divides_witness, nu_equiv, validate_chain, DivWitness, HahnValuation,
    Truncation,
};
use valkey_core::{
    ChainGenerator, Element, Error, GValue, HahnApprox, HahnPoint, KElem, LimitOutcome, PcsPrefix, PolyK, Rat, RootData,
    ValChain, ValuationOracle,
};

use crate::ast::*;
use crate::check::{arg_role, Role};
use crate::printer::{print_expr, print_stmt};
use crate::scenario;

type R<T> = Result<T, Error>;

/// Default number of generator steps checked by `validate` on limit stages.
const DEFAULT_VALIDATE_DEPTH: usize = 6;

#[derive(Clone, Debug)]
enum V {
    Poly(PolyK),
    Point(HahnPoint),
}

#[derive(Clone, Debug)]
enum Binding {
    Poly(PolyK),
    Point(HahnPoint),
    Gen(Arc<dyn ChainGenerator>),
    Chain(ValChain),
    Val(Arc<dyn ValuationOracle>),
    /// The statement defining the name failed.
    Failed,
}

pub struct Interp {
    p: u32,
    precision: Option<u32>,
    nmax: usize,
    names: HashMap<String, Binding>,
    results: Vec<Value>,
}

/// Runs a checked script, returning one JSON object per query (and per
/// failed definition).
pub fn run(script: &Script) -> Vec<Value> {
    let mut it = Interp { p: 2, precision: None, nmax: DEFAULT_CAP, names: HashMap::new(), results: Vec::new() };
    for s in &script.statements {
        it.statement(s);
    }
    it.results
}

/// True when any result has `"status": "error"`.
pub fn has_errors(results: &[Value]) -> bool {
    results.iter().any(|r| r["status"] == "error")
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::ZeroDivisor => "zero_divisor",
        Error::DivisionOfInfinity => "division_of_infinity",
        Error::InsufficientPrecision { .. } => "insufficient_precision",
        Error::ModulusMismatch(..) => "modulus_mismatch",
        Error::InvalidPrime(_) => "invalid_prime",
        Error::InvalidExponent(_) => "invalid_exponent",
        Error::ZeroPolynomial => "zero_polynomial",
        Error::DivisionByZeroPoly => "division_by_zero_poly",
        Error::NonMonicBase => "non_monic_base",
        Error::UnstableLimit { .. } => "unstable_limit",
        Error::InvalidAugmentation(_) => "invalid_augmentation",
        Error::NotComplete { .. } => "not_complete",
        Error::NotPcs(..) => "not_pcs",
        Error::PrefixTooShort(_) => "prefix_too_short",
        Error::InvalidArgument(_) => "invalid_argument",
    }
}

fn unsupported(what: &str) -> Error {
    Error::InvalidArgument(what.to_string())
}

impl Interp {
    fn statement(&mut self, s: &Statement) {
        let text = print_stmt(&s.stmt);
        match &s.stmt {
            Stmt::Param { name, value } => {
                let n = value.finite().and_then(|r| r.to_integer().to_u64()).unwrap_or(0);
                match name.as_str() {
                    "p" => self.p = n as u32,
                    "precision" => self.precision = Some(n as u32),
                    _ => self.nmax = n as usize,
                }
            }
            Stmt::Bind { kind, name, expr } => {
                let b = match kind {
                    BindKind::Elem => self.kelem(expr).map(|c| Binding::Poly(PolyK::constant(c))),
                    BindKind::Poly => self.poly(expr).map(Binding::Poly),
                    BindKind::Series => self.point(expr).map(Binding::Point),
                };
                self.define(s, &text, name, b);
            }
            Stmt::Gen { name, kind } => {
                let (p, cap) = (self.p, self.nmax);
                let g: Arc<dyn ChainGenerator> = match kind {
                    GenKind::FirstChain => Arc::new(FirstChain { p, cap }),
                    GenKind::SecondChain => Arc::new(SecondChain { p, cap }),
                };
                self.names.insert(name.clone(), Binding::Gen(g));
            }
            Stmt::Val { name, expr } => {
                let b = self.val(expr);
                self.define(s, &text, name, b);
            }
            Stmt::Query { kind, args } => {
                let out = match self.query(*kind, args) {
                    Ok(mut obj) => {
                        obj.insert("status".into(), json!("ok"));
                        obj
                    }
                    Err(e) => self.error_object(s, e),
                };
                let mut obj = out;
                obj.insert("query".into(), json!(text));
                self.results.push(Value::Object(obj));
            }
            Stmt::Scenario { name, args } => {
                let generated = scenario::Scenario::from_args(name, args).and_then(|sc| scenario::generate(&sc));
                match generated {
                    Ok(script) => self.results.extend(run(&script)),
                    Err(e) => {
                        let mut obj = self.error_object(s, unsupported(&e.to_string()));
                        obj.insert("query".into(), json!(text));
                        self.results.push(Value::Object(obj));
                    }
                }
            }
        }
    }

    fn define(&mut self, s: &Statement, text: &str, name: &str, b: R<Binding>) {
        match b {
            Ok(b) => {
                self.names.insert(name.to_string(), b);
            }
            Err(e) => {
                let mut obj = self.error_object(s, e);
                obj.insert("query".into(), json!(text));
                self.results.push(Value::Object(obj));
                self.names.insert(name.to_string(), Binding::Failed);
            }
        }
    }

    fn error_object(&self, s: &Statement, e: Error) -> serde_json::Map<String, Value> {
        let mut err = serde_json::Map::new();
        err.insert("kind".into(), json!(error_kind(&e)));
        err.insert("message".into(), json!(e.to_string()));
        err.insert("line".into(), json!(s.span.line));
        err.insert("column".into(), json!(s.span.column));
        if let Error::InsufficientPrecision { precision, .. } = &e {
            err.insert("precision".into(), json!(precision));
            err.insert(
                "hint".into(),
                json!(match self.precision {
                    Some(level) => format!("approximation level capped at {level}; raise `param precision`"),
                    None => "every approximation level was tried; the value may be infinite".to_string(),
                }),
            );
        }
        let mut obj = serde_json::Map::new();
        obj.insert("status".into(), json!("error"));
        obj.insert("error".into(), Value::Object(err));
        obj
    }

    fn lookup(&self, name: &str) -> R<&Binding> {
        match self.names.get(name) {
            Some(Binding::Failed) => Err(unsupported(&format!("`{name}` is unavailable after an earlier error"))),
            Some(b) => Ok(b),
            None => Err(unsupported(&format!("`{name}` is not defined"))),
        }
    }

    fn chain(&self, name: &str) -> R<&ValChain> {
        match self.lookup(name)? {
            Binding::Chain(c) => Ok(c),
            _ => Err(unsupported(&format!("`{name}` is not a chain valuation"))),
        }
    }

    fn oracle(&self, name: &str) -> R<Arc<dyn ValuationOracle>> {
        match self.lookup(name)? {
            Binding::Chain(c) => Ok(Arc::new(c.clone())),
            Binding::Val(v) => Ok(v.clone()),
            _ => Err(unsupported(&format!("`{name}` is not a valuation"))),
        }
    }

    fn generator(&self, name: &str) -> R<Arc<dyn ChainGenerator>> {
        match self.lookup(name)? {
            Binding::Gen(g) => Ok(g.clone()),
            _ => Err(unsupported(&format!("`{name}` is not a generator"))),
        }
    }

    fn val(&self, v: &ValExpr) -> R<Binding> {
        Ok(match v {
            ValExpr::Monomial(g) => Binding::Chain(ValChain::monomial(self.p, g.clone())),
            ValExpr::Augment { base, phi, gamma } => {
                Binding::Chain(self.chain(base)?.augment(self.poly(phi)?, gamma.clone())?)
            }
            ValExpr::Limit { base, generator, key } => {
                let chain = self.chain(base)?;
                let g = self.generator(generator)?;
                match key {
                    Some((phi, gamma)) => Binding::Chain(chain.limit_augment(g, self.poly(phi)?, gamma.clone())?),
                    None => Binding::Val(Arc::new(chain.limit(g))),
                }
            }
            ValExpr::Hahn(e) => {
                let mut h = HahnValuation::new(self.point(e)?);
                if let Some(level) = self.precision {
                    h.max_level = level;
                }
                Binding::Val(Arc::new(h))
            }
            ValExpr::Truncate { base, q } => {
                let q = self.poly(q)?;
                if !q.is_monic() || q.deg0() == 0 {
                    return Err(Error::NonMonicBase);
                }
                Binding::Val(Arc::new(Truncation { reference: self.oracle(base)?, q }))
            }
        })
    }

    // ---- expressions ----

    fn constant(&self, c: KElem) -> V {
        V::Poly(PolyK::constant(c))
    }

    fn eval(&self, e: &Expr) -> R<V> {
        let p = self.p;
        match e {
            Expr::Int(n) => Ok(self.constant(KElem::constant(p, *n))),
            Expr::Var(s) => Ok(match s.as_str() {
                "x" => V::Poly(PolyK::x(p)),
                "y" | "t" => self.constant(KElem::y_pow(p, 1, 1)),
                "eta" => V::Point(HahnPoint::eta(p)),
                name => match self.lookup(name)? {
                    Binding::Poly(f) => V::Poly(f.clone()),
                    Binding::Point(pt) => V::Point(pt.clone()),
                    _ => return Err(unsupported(&format!("`{name}` is not an expression"))),
                },
            }),
            Expr::Neg(a) => match self.eval(a)? {
                V::Poly(f) => Ok(V::Poly(f.neg())),
                V::Point(pt) if pt.base.is_none() => Ok(V::Point(HahnPoint::series(pt.shift.neg()))),
                V::Point(_) => Err(unsupported("an algebraic point cannot be negated")),
            },
            Expr::Add(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (V::Poly(f), V::Poly(g)) => Ok(V::Poly(f.add(&g))),
                (a, b) => {
                    let (a, b) = (to_point(&a)?, to_point(&b)?);
                    if a.base.is_some() && b.base.is_some() {
                        return Err(unsupported("two algebraic points cannot be added"));
                    }
                    Ok(V::Point(HahnPoint { base: a.base.or(b.base), shift: a.shift.add(&b.shift) }))
                }
            },
            Expr::Sub(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (V::Poly(f), V::Poly(g)) => Ok(V::Poly(f.sub(&g))),
                (a, b) => {
                    let (a, b) = (to_point(&a)?, to_point(&b)?);
                    match (&a.base, &b.base) {
                        (Some(x), Some(y)) if x == y => Ok(V::Point(HahnPoint::series(a.shift.sub(&b.shift)))),
                        (_, Some(_)) => Err(unsupported("an algebraic point cannot be subtracted")),
                        _ => Ok(V::Point(HahnPoint { base: a.base, shift: a.shift.sub(&b.shift) })),
                    }
                }
            },
            Expr::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (V::Poly(f), V::Poly(g)) => Ok(V::Poly(f.mul(&g))),
                (a, b) => Ok(V::Point(HahnPoint::series(plain_series(&a)?.mul(&plain_series(&b)?)))),
            },
            Expr::Div(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (V::Poly(f), V::Poly(g)) => {
                    let c = g.as_constant().ok_or_else(|| unsupported("division by a nonconstant polynomial"))?;
                    Ok(V::Poly(f.scale(&c.inv()?)))
                }
                (a, b) => {
                    let (e, c) = monomial_of(&plain_series(&b)?)?;
                    let inv = valkey_core::polyring::fp_inverse(c, p);
                    Ok(V::Point(HahnPoint::series(plain_series(&a)?.mul_monomial(inv, &-e))))
                }
            },
            Expr::Pow(a, x) => self.pow(self.eval(a)?, x),
        }
    }

    fn pow(&self, base: V, x: &Exponent) -> R<V> {
        let p = self.p;
        let r = match x {
            Exponent::Int(n) => Rat::from_integer(BigInt::from(*n)),
            Exponent::Rat(r) => r.clone(),
        };
        if let (V::Poly(f), Some(n)) = (&base, r.to_integer().to_u32().filter(|_| r.is_integer())) {
            return Ok(V::Poly(f.pow(n)));
        }
        if let V::Point(pt) = &base {
            if let Some(n) = r.to_integer().to_u32().filter(|_| r.is_integer()) {
                if n == 1 {
                    return Ok(base);
                }
                return Ok(V::Point(HahnPoint::series(plain_series(&V::Point(pt.clone()))?.pow(n))));
            }
        }
        if let V::Poly(f) = &base {
            let c = f.as_constant().ok_or_else(|| unsupported("negative or fractional power of a polynomial"))?;
            if let Some(k) = p_power_log(r.denom(), p) {
                let num = r.numer().to_i64().ok_or_else(|| unsupported("exponent too large"))?;
                let root = (0..k).fold(c.pow(num)?, |acc, _| acc.pth_root());
                return Ok(self.constant(root));
            }
        }
        // c·t^e with c ∈ F_p raised to a rational power outside Z[1/p]: only
        // c = 1 has an unambiguous root
        let s = plain_series(&base)?;
        let (e, c) = monomial_of(&s)?;
        if c != 1 {
            return Err(unsupported("fractional powers are taken of monomials with coefficient 1"));
        }
        Ok(V::Point(HahnPoint::series(HahnApprox::monomial(p, 1, e * r))))
    }

    fn poly(&self, e: &Expr) -> R<PolyK> {
        match self.eval(e)? {
            V::Poly(f) => Ok(f),
            V::Point(_) => Err(unsupported(&format!("{} is a series, not a polynomial", print_expr(e)))),
        }
    }

    fn kelem(&self, e: &Expr) -> R<KElem> {
        match self.eval(e)? {
            V::Poly(f) => f.as_constant().ok_or_else(|| unsupported(&format!("{} involves x", print_expr(e)))),
            V::Point(pt) => match pt.base {
                None => KElem::from_series(pt.shift),
                Some(_) => Err(unsupported(&format!("{} is not an element of K", print_expr(e)))),
            },
        }
    }

    fn element(&self, e: &Expr) -> R<Element> {
        match self.eval(e)? {
            V::Poly(f) => f
                .as_constant()
                .map(Element::K)
                .ok_or_else(|| unsupported(&format!("{} involves x", print_expr(e)))),
            V::Point(pt) => Ok(Element::Point(pt)),
        }
    }

    fn point(&self, e: &Expr) -> R<HahnPoint> {
        to_point(&self.eval(e)?)
    }

    fn polys(&self, items: &[Expr]) -> R<Vec<PolyK>> {
        items.iter().map(|e| self.poly(e)).collect()
    }

    fn elements(&self, items: &[Expr]) -> R<Vec<Element>> {
        items.iter().map(|e| self.element(e)).collect()
    }

    fn kelems(&self, items: &[Expr]) -> R<Vec<KElem>> {
        items.iter().map(|e| self.kelem(e)).collect()
    }

    // ---- queries ----

    fn query(&self, kind: QueryKind, args: &[Arg]) -> R<serde_json::Map<String, Value>> {
        use QueryKind::*;
        let a = Args { it: self, args, kind };
        let (value, report) = match kind {
            Eval => (Some(json!(a.oracle(0)?.value(&a.poly(1)?)?)), None),
            Epsilon => {
                let r = epsilon(a.oracle(0)?.as_ref(), &a.poly(1)?)?;
                (Some(json!(r.value)), Some(r.to_json()))
            }
            Equiv => (Some(json!(nu_equiv(a.oracle(0)?.as_ref(), &a.poly(1)?, &a.poly(2)?)?)), None),
            Divides => {
                let w = match nu_divides_witness(a.oracle(0)?.as_ref(), &a.poly(1)?, &a.poly(2)?)? {
                    DivWitness::Witness(h) => json!(h.to_string()),
                    DivWitness::NoWitnessFound => Value::Null,
                };
                (None, Some(json!({ "witness": w })))
            }
            Validate => {
                let depth = match args.get(1) {
                    Some(_) => a.count(1)?,
                    None => DEFAULT_VALIDATE_DEPTH,
                };
                (None, Some(validate_chain(a.chain(0)?, depth).to_json()))
            }
            Decompose => {
                let set = a.poly_list(1)?;
                let d = decompose(a.oracle(0)?.as_ref(), &set, &a.poly(2)?)?;
                (None, Some(d.to_json(&a.names(1))))
            }
            CompleteOn => {
                let r = is_complete_on(a.oracle(0)?.as_ref(), &a.poly_list(1)?, &a.poly_list(2)?)?;
                (None, Some(r.to_json(&a.names(1))))
            }
            Delta => {
                let rd = a.root_data()?;
                let d = delta(&rd, &a.point(1)?)?;
                let report = json!({
                    "delta": d.value,
                    "root_values": d.root_values,
                    "best": rd.roots[d.best].to_string(),
                });
                (Some(json!(d.value)), Some(report))
            }
            EpsDelta => (None, Some(check_eps_eq_delta(&a.root_data()?, &a.point(1)?)?.to_json())),
            IsKey => (None, Some(is_key_sampled(a.oracle(0)?.as_ref(), &a.poly(1)?, &a.poly_list(2)?)?.to_json())),
            AlphaPsi => {
                (None, Some(alpha_psi_sampled(a.oracle(0)?.as_ref(), &a.poly(1)?, &a.poly_list(2)?)?.to_json()))
            }
            PcsCheck => (None, Some(pcs_check(&a.prefix(0)?)?.to_json())),
            IsLimit => (None, Some(is_limit(&a.prefix(0)?, &a.element(1)?)?.to_json())),
            IsLimitX => (None, Some(is_limit_x(&a.prefix(0)?, a.oracle(1)?.as_ref())?.to_json())),
            Classify => (None, Some(classify_along_pcs(&a.prefix(0)?, &a.poly(1)?)?.to_json())),
            ClassifyType => {
                let pool = self.kelems(a.list(2)?)?;
                (None, Some(classify_pcs_type(&a.prefix(0)?, a.count(1)?, &pool)?.to_json()))
            }
            MinimalPair => {
                let pool_degree = a.count(4)? as u32;
                let pool = a.element_list(3)?.into_iter().map(|b| (b, pool_degree)).collect();
                let q = MinimalPairQuery { a: a.element(0)?, degree: a.count(1)? as u32, delta: a.gamma(2)?, pool };
                (None, Some(is_minimal_pair_sampled(&q)?.to_json()))
            }
            Keypolys => {
                let prefix = PcsPrefix::from_k(self.kelems(a.list(0)?)?)?;
                let polys = keypolys_from_pcs(&prefix)?;
                (Some(json!(polys.iter().map(|f| f.to_string()).collect::<Vec<_>>())), None)
            }
            PcsFromKeys => {
                let stages = a.poly_list(0)?.iter().map(RootData::analytic).collect::<R<Vec<_>>>()?;
                let prefix = pcs_from_keypolys(&stages, &a.point(1)?)?;
                let report = json!({
                    "terms": prefix.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "gammas": prefix.diffs,
                });
                (None, Some(report))
            }
            LimitTrace => {
                let g = a.generator(1)?;
                let report = match a.chain(0)?.eval_limit(g.as_ref(), &a.poly(2)?)? {
                    LimitOutcome::Stable { value, step } => json!({"outcome": "stable", "value": value, "step": step}),
                    LimitOutcome::Unstable { values } => json!({"outcome": "unstable", "values": values}),
                };
                (None, Some(report))
            }
        };
        let mut obj = serde_json::Map::new();
        if let Some(v) = value {
            obj.insert("value".into(), v);
        }
        if let Some(r) = report {
            obj.insert("report".into(), r);
        }
        Ok(obj)
    }
}

/// Positional access to query arguments, with roles from the signature.
struct Args<'a> {
    it: &'a Interp,
    args: &'a [Arg],
    kind: QueryKind,
}

impl Args<'_> {
    fn bad(&self, i: usize) -> Error {
        unsupported(&format!("argument {} of {} has the wrong shape", i + 1, self.kind.name()))
    }

    fn expr(&self, i: usize) -> R<&Expr> {
        match self.args.get(i) {
            Some(Arg::Expr(e)) => Ok(e),
            _ => Err(self.bad(i)),
        }
    }

    fn list(&self, i: usize) -> R<&[Expr]> {
        match self.args.get(i) {
            Some(Arg::List(l)) => Ok(l),
            _ => Err(self.bad(i)),
        }
    }

    fn name(&self, i: usize) -> R<&str> {
        match self.args.get(i) {
            Some(Arg::Val(s)) | Some(Arg::Gen(s)) => Ok(s),
            _ => Err(self.bad(i)),
        }
    }

    fn oracle(&self, i: usize) -> R<Arc<dyn ValuationOracle>> {
        self.it.oracle(self.name(i)?)
    }

    fn chain(&self, i: usize) -> R<&ValChain> {
        self.it.chain(self.name(i)?)
    }

    fn generator(&self, i: usize) -> R<Arc<dyn ChainGenerator>> {
        self.it.generator(self.name(i)?)
    }

    fn poly(&self, i: usize) -> R<PolyK> {
        debug_assert_eq!(arg_role(self.kind, i), Role::Poly);
        self.it.poly(self.expr(i)?)
    }

    fn point(&self, i: usize) -> R<HahnPoint> {
        self.it.point(self.expr(i)?)
    }

    fn element(&self, i: usize) -> R<Element> {
        self.it.element(self.expr(i)?)
    }

    fn poly_list(&self, i: usize) -> R<Vec<PolyK>> {
        self.it.polys(self.list(i)?)
    }

    fn element_list(&self, i: usize) -> R<Vec<Element>> {
        self.it.elements(self.list(i)?)
    }

    fn names(&self, i: usize) -> Vec<String> {
        self.list(i).map(|l| l.iter().map(print_expr).collect()).unwrap_or_default()
    }

    fn prefix(&self, i: usize) -> R<PcsPrefix> {
        PcsPrefix::new(self.element_list(i)?)
    }

    fn count(&self, i: usize) -> R<usize> {
        match self.args.get(i) {
            Some(Arg::Int(n)) if *n >= 0 => Ok(*n as usize),
            Some(Arg::Int(n)) => Err(unsupported(&format!("{n} is negative"))),
            _ => Err(self.bad(i)),
        }
    }

    fn gamma(&self, i: usize) -> R<GValue> {
        match self.args.get(i) {
            Some(Arg::Gamma(g)) => Ok(g.clone()),
            _ => Err(self.bad(i)),
        }
    }

    /// Roots from the optional third argument, else the closed forms.
    fn root_data(&self) -> R<RootData> {
        let f = self.poly(0)?;
        match self.args.get(2) {
            Some(Arg::List(items)) => RootData::new(f, self.it.elements(items)?),
            _ => RootData::analytic(&f),
        }
    }
}

fn to_point(v: &V) -> R<HahnPoint> {
    match v {
        V::Point(pt) => Ok(pt.clone()),
        V::Poly(f) => {
            let c = f.as_constant().ok_or_else(|| unsupported("a polynomial in x is not a series"))?;
            if !c.is_laurent() {
                return Err(unsupported("only Laurent elements of K are embedded exactly"));
            }
            Ok(HahnPoint::series(c.numerator().clone()))
        }
    }
}

/// The series of a point without an algebraic base.
fn plain_series(v: &V) -> R<HahnApprox> {
    let pt = to_point(v)?;
    match pt.base {
        None => Ok(pt.shift),
        Some(_) => Err(unsupported("algebraic points only support adding and subtracting series")),
    }
}

/// `(e, c)` for an exact single term `c·t^e`.
fn monomial_of(s: &HahnApprox) -> R<(Rat, u32)> {
    match s.leading() {
        Some((e, c)) if s.is_exact() && s.num_terms() == 1 => Ok((e.clone(), c)),
        Some(_) => Err(unsupported("only monomials can be divided by or raised to such powers")),
        None => Err(Error::ZeroDivisor),
    }
}

/// `k` with `d = p^k`.
fn p_power_log(d: &BigInt, p: u32) -> Option<u32> {
    let mut d = d.abs();
    let mut k = 0;
    let p = BigInt::from(p);
    while !d.is_one() {
        if d.is_zero() || !(&d % &p).is_zero() {
            return None;
        }
        d /= &p;
        k += 1;
    }
    Some(k)
}
