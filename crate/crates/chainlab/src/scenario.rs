//! Scripts reproducing the worked examples: the two chains over the perfect
//! hull of `F_p(y)` and the cubic of the ε = δ example.

use std::fmt::Write as _;

use num_traits::{One, ToPrimitive, Zero};
use valkey_core::family::{
    coefficient_pool, gamma_admissible, gamma_prime_admissible, neg_inv_pow, second_exponent, second_sup, DEFAULT_CAP,
};
use valkey_core::hahn::is_prime;
use valkey_core::valgroup::fmt_rat;
use valkey_core::{GValue, KElem, Rat};

use crate::ast::Script;
use crate::error::DslError;
use crate::parser::parse;
use crate::printer::print_gamma;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioName {
    Section6First,
    Section6Second,
    Section3Example,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 3] =
        [ScenarioName::Section6First, ScenarioName::Section6Second, ScenarioName::Section3Example];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioName::Section6First => "section6_first",
            ScenarioName::Section6Second => "section6_second",
            ScenarioName::Section3Example => "section3_example",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|n| n.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: ScenarioName,
    pub p: u32,
    /// Number of first-chain partial sums `a_1..a_n` (and second-chain steps).
    pub n: u32,
    /// Value of `φ_ω` under `ν_{ω+1}`.
    pub gamma: GValue,
    /// Value of `φ_{2ω}` under `ν_{2ω+1}`.
    pub gamma_prime: Option<GValue>,
    /// Highest approximation level used for series valuations.
    pub precision: Option<u32>,
    /// Root configuration of the cubic example (1 or 2).
    pub variant: u32,
    /// Generator cap.
    pub nmax: u32,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::InvalidParameters(msg.into()))
}

fn small_int(key: &str, v: &GValue) -> Result<u32, DslError> {
    match v.finite() {
        Some(r) if r.is_integer() && *r >= Rat::zero() => match r.numer().to_u32() {
            Some(n) => Ok(n),
            None => invalid(format!("{key} = {v} is too large")),
        },
        _ => invalid(format!("{key} must be a nonnegative integer, got {v}")),
    }
}

impl Scenario {
    pub fn new(name: ScenarioName, p: u32) -> Self {
        Scenario {
            name,
            p,
            n: 5,
            gamma: GValue::zero(),
            gamma_prime: None,
            precision: None,
            variant: 1,
            nmax: DEFAULT_CAP as u32,
        }
    }

    /// Builds a scenario from `key = value` pairs and validates it.
    pub fn from_args(name: &str, args: &[(String, GValue)]) -> Result<Self, DslError> {
        let Some(which) = ScenarioName::from_name(name) else {
            return invalid(format!(
                "unknown scenario `{name}` (expected section6_first, section6_second or section3_example)"
            ));
        };
        let p = match args.iter().find(|(k, _)| k == "p") {
            Some((k, v)) => small_int(k, v)?,
            None if which == ScenarioName::Section3Example => 2,
            None => return invalid("missing p"),
        };
        let mut sc = Scenario::new(which, p);
        for (k, v) in args {
            match k.as_str() {
                "p" => {}
                "n" => sc.n = small_int(k, v)?,
                "gamma" => sc.gamma = v.clone(),
                "gamma_prime" => sc.gamma_prime = Some(v.clone()),
                "precision" => sc.precision = Some(small_int(k, v)?),
                "variant" => sc.variant = small_int(k, v)?,
                "nmax" => sc.nmax = small_int(k, v)?,
                other => return invalid(format!("unknown scenario parameter `{other}`")),
            }
        }
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<(), DslError> {
        if !is_prime(self.p) {
            return invalid(format!("p = {} is not a prime", self.p));
        }
        if self.nmax == 0 {
            return invalid("nmax must be positive");
        }
        if self.precision == Some(0) {
            return invalid("precision must be positive");
        }
        match self.name {
            ScenarioName::Section3Example => {
                if self.variant != 1 && self.variant != 2 {
                    return invalid(format!("variant must be 1 or 2, got {}", self.variant));
                }
            }
            ScenarioName::Section6First | ScenarioName::Section6Second => {
                if self.n == 0 || self.n > self.nmax {
                    return invalid(format!("n must satisfy 1 ≤ n ≤ nmax = {}, got {}", self.nmax, self.n));
                }
                if !gamma_admissible(&self.gamma) {
                    return invalid(format!("gamma must be ≥ 0, got {}", self.gamma));
                }
            }
        }
        if self.name == ScenarioName::Section6Second {
            if self.gamma != GValue::zero() {
                return invalid("the second chain is built on gamma = 0");
            }
            match &self.gamma_prime {
                None => return invalid("section6_second needs gamma_prime"),
                Some(g) if !gamma_prime_admissible(self.p, g) => {
                    return invalid(format!(
                        "gamma_prime must exceed p/(p-1) = {}, got {g}",
                        fmt_rat(&second_sup(self.p))
                    ))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// The `scenario name(...)` statement invoking this scenario.
    pub fn invocation(&self) -> String {
        let mut args = vec![format!("p={}", self.p)];
        match self.name {
            ScenarioName::Section3Example => args.push(format!("variant={}", self.variant)),
            _ => {
                args.push(format!("n={}", self.n));
                if self.name == ScenarioName::Section6First {
                    args.push(format!("gamma={}", print_gamma(&self.gamma)));
                }
                if let Some(g) = &self.gamma_prime {
                    args.push(format!("gamma_prime={}", print_gamma(g)));
                }
                if self.nmax != DEFAULT_CAP as u32 {
                    args.push(format!("nmax={}", self.nmax));
                }
            }
        }
        if let Some(level) = self.precision {
            args.push(format!("precision={level}"));
        }
        format!("scenario {}({})", self.name.name(), args.join(", "))
    }
}

/// `y`, `y^3`, `y^(-1/2)`.
fn y_power(e: &Rat) -> String {
    if e.is_one() {
        "y".into()
    } else if e.is_integer() && *e > Rat::zero() {
        format!("y^{}", e.numer())
    } else {
        format!("y^({})", fmt_rat(e))
    }
}

/// Source text of a Laurent element of `K`.
fn kelem_text(c: &KElem) -> String {
    assert!(c.is_laurent(), "scenario coefficients are Laurent polynomials");
    let parts: Vec<String> = c
        .numerator()
        .terms()
        .map(|(e, k)| {
            let k = k.value();
            match (e.is_zero(), k) {
                (true, k) => k.to_string(),
                (false, 1) => y_power(e),
                (false, k) => format!("{k}*{}", y_power(e)),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn list(items: impl IntoIterator<Item = String>) -> String {
    format!("[{}]", items.into_iter().collect::<Vec<_>>().join(", "))
}

fn names(prefix: &str, range: std::ops::RangeInclusive<u32>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// Generates the scenario script. The text is parsed back, so
/// `--emit-script` output is exactly what runs.
pub fn generate(sc: &Scenario) -> Result<Script, DslError> {
    sc.validate()?;
    parse(&generate_text(sc))
}

pub fn generate_text(sc: &Scenario) -> String {
    let mut s = String::new();
    match sc.name {
        ScenarioName::Section6First => section6_first(sc, &mut s),
        ScenarioName::Section6Second => section6_second(sc, &mut s),
        ScenarioName::Section3Example => section3(sc, &mut s),
    }
    s
}

fn header(sc: &Scenario, s: &mut String) {
    writeln!(s, "# {}", sc.invocation()).unwrap();
    writeln!(s, "param p = {}", sc.p).unwrap();
    writeln!(s, "param nmax = {}", sc.nmax).unwrap();
    if let Some(level) = sc.precision {
        writeln!(s, "param precision = {level}").unwrap();
    }
}

/// Partial sums, key polynomials, the chain `ν_1..ν_{n+1}`, its limit and
/// `ν_{ω+1}`.
fn first_chain_definitions(sc: &Scenario, gamma: &GValue, s: &mut String) {
    let (p, n) = (sc.p, sc.n);
    writeln!(s, "# a_i = a_(i-1) + y^(-1/p^i)").unwrap();
    for i in 1..=n {
        let m = y_power(&neg_inv_pow(p, i));
        if i == 1 {
            writeln!(s, "elem a1 = {m}").unwrap();
        } else {
            writeln!(s, "elem a{i} = a{} + {m}", i - 1).unwrap();
        }
    }
    writeln!(s, "poly phi1 = x").unwrap();
    for i in 2..=n + 1 {
        writeln!(s, "poly phi{i} = x - a{}", i - 1).unwrap();
    }
    writeln!(s, "poly phiw = x^{p} - x - y^(-1)").unwrap();
    writeln!(s, "val nu1 = monomial({})", fmt_rat(&neg_inv_pow(p, 1))).unwrap();
    for i in 2..=n + 1 {
        writeln!(s, "val nu{i} = augment(nu{}, phi{i}, {})", i - 1, fmt_rat(&neg_inv_pow(p, i))).unwrap();
    }
    writeln!(s, "gen first = first_chain").unwrap();
    writeln!(s, "val nuw = limit(nu1, first)").unwrap();
    writeln!(s, "val nuw1 = limit(nu1, first, phiw, {})", print_gamma(gamma)).unwrap();
}

fn section6_first(sc: &Scenario, s: &mut String) {
    let (p, n) = (sc.p, sc.n);
    header(sc, s);
    first_chain_definitions(sc, &sc.gamma, s);
    let prefix = list(names("a", 1..=n));
    let keys = list(names("phi", 1..=n + 1));
    let f1 = "phiw*phi2 + y".to_string();
    let f2 = format!("x^{} - y^(-1)*x + 1", p + 1);

    writeln!(s, "\n# stage values nu_i(phi_i) = -1/p^i and nu_i(phiw) = -1/p^(i-1)").unwrap();
    for i in 1..=n + 1 {
        writeln!(s, "eval(nu{i}, phi{i})").unwrap();
    }
    for i in 2..=n + 1 {
        writeln!(s, "eval(nu{i}, phiw)").unwrap();
    }
    writeln!(s, "limit_trace(nu1, first, phiw)").unwrap();
    writeln!(s, "limit_trace(nu1, first, phi2^{p} + y)").unwrap();
    writeln!(s, "validate(nu{})", n + 1).unwrap();
    writeln!(s, "validate(nuw1, {n})").unwrap();

    writeln!(s, "\n# the limit stage").unwrap();
    writeln!(s, "eval(nuw1, phiw)").unwrap();
    writeln!(s, "epsilon(nuw1, phiw)").unwrap();
    writeln!(s, "alpha_psi(nuw1, phi{}, [phiw])", n + 1).unwrap();
    writeln!(s, "is_key(nuw1, phiw, {keys})").unwrap();
    writeln!(s, "minimal_pair(eta, {p}, {}, {prefix}, 1)", print_gamma(&sc.gamma)).unwrap();
    writeln!(s, "minimal_pair(eta, {p}, {}, {prefix}, 1)", fmt_rat(&neg_inv_pow(p, 2))).unwrap();

    if n >= 3 {
        let pool_size = n - 2;
        let pool = list(coefficient_pool(p, pool_size).iter().map(kelem_text));
        writeln!(s, "\n# the partial sums as a pseudo-convergent sequence").unwrap();
        writeln!(s, "pcs_check({prefix})").unwrap();
        writeln!(s, "is_limit({prefix}, eta)").unwrap();
        writeln!(s, "is_limit_x({prefix}, nuw)").unwrap();
        writeln!(s, "classify({prefix}, phiw)").unwrap();
        writeln!(s, "classify({prefix}, phi2)").unwrap();
        writeln!(s, "classify_type({prefix}, {p}, {pool})").unwrap();
        writeln!(s, "classify_type({prefix}, {}, {pool})", p - 1).unwrap();
        writeln!(s, "keypolys({prefix})").unwrap();
        writeln!(s, "pcs_from_keys({}, eta)", list(names("phi", 2..=n + 1))).unwrap();
    }

    writeln!(s, "\n# complete set").unwrap();
    let set = list(names("phi", 1..=n + 1).into_iter().chain(["phiw".to_string()]));
    writeln!(s, "decompose(nuw1, {set}, {f1})").unwrap();
    writeln!(s, "decompose(nuw1, {set}, {f2})").unwrap();
    writeln!(s, "complete_on(nuw1, {set}, [{f1}, {f2}, phiw, phi2^{p}])").unwrap();

    if let Some(g) = sc.gamma.finite().filter(|g| **g > Rat::zero()) {
        writeln!(s, "\n# comparison with the series point eta + t^gamma").unwrap();
        let tg = if g.is_integer() { format!("t^{}", g.numer()) } else { format!("t^({})", fmt_rat(g)) };
        writeln!(s, "series etap = eta + {tg}").unwrap();
        writeln!(s, "val nuh = hahn(etap)").unwrap();
        for f in ["phiw", "phi2", &f1, &f2] {
            writeln!(s, "eval(nuh, {f})").unwrap();
            writeln!(s, "eval(nuw1, {f})").unwrap();
        }
        writeln!(s, "eps_delta(phiw, etap)").unwrap();
    }
}

fn section6_second(sc: &Scenario, s: &mut String) {
    let (p, n) = (sc.p, sc.n);
    let gamma_prime = sc.gamma_prime.clone().expect("validated");
    header(sc, s);
    first_chain_definitions(sc, &GValue::zero(), s);
    writeln!(s, "\n# c_k = c_(k-1) + y^(e_(k-1)), e_k = (1 + ... + p^(k-1))/p^k").unwrap();
    writeln!(s, "elem c1 = 1").unwrap();
    for k in 2..=n {
        writeln!(s, "elem c{k} = c{} + {}", k - 1, y_power(&second_exponent(p, k - 1))).unwrap();
    }
    for k in 1..=n {
        writeln!(s, "poly psi{k} = phiw - c{k}").unwrap();
    }
    writeln!(s, "poly phi2w = phiw^{p} - y*phiw - 1").unwrap();
    for k in 1..=n {
        let below = if k == 1 { "nuw1".to_string() } else { format!("mu{}", k - 1) };
        writeln!(s, "val mu{k} = augment({below}, psi{k}, {})", fmt_rat(&second_exponent(p, k))).unwrap();
    }
    writeln!(s, "gen second = second_chain").unwrap();
    writeln!(s, "val nu2w1 = limit(nuw1, second, phi2w, {})", print_gamma(&gamma_prime)).unwrap();

    writeln!(s, "\n# stage values mu_k(psi_k) = e_k and mu_k(phi2w) = p*e_k").unwrap();
    for k in 1..=n {
        writeln!(s, "eval(mu{k}, psi{k})").unwrap();
    }
    for k in 1..=n {
        writeln!(s, "eval(mu{k}, phi2w)").unwrap();
    }
    writeln!(s, "limit_trace(nuw1, second, phi2w)").unwrap();
    writeln!(s, "validate(mu{n})").unwrap();
    writeln!(s, "validate(nu2w1, {n})").unwrap();

    writeln!(s, "\n# the second limit stage").unwrap();
    writeln!(s, "eval(nu2w1, phi2w)").unwrap();
    writeln!(s, "eval(nu2w1, phiw)").unwrap();
    writeln!(s, "epsilon(nu2w1, phi2w)").unwrap();
    writeln!(s, "alpha_psi(nu2w1, psi{n}, [phi2w])").unwrap();

    writeln!(s, "\n# truncations by the first key polynomials agree with the chain").unwrap();
    let probe = "phi2w*phi2 + y^(-1)*x";
    for i in 1..=(n + 1).min(5) {
        writeln!(s, "val tr{i} = truncate(nu2w1, phi{i})").unwrap();
        writeln!(s, "eval(tr{i}, {probe})").unwrap();
        writeln!(s, "eval(nu{i}, {probe})").unwrap();
    }

    writeln!(s, "\n# complete set").unwrap();
    let set = list(
        ["phi1", "phi2", "phiw"]
            .into_iter()
            .map(String::from)
            .chain(names("psi", 1..=n))
            .chain(["phi2w".to_string()]),
    );
    writeln!(s, "decompose(nu2w1, {set}, phi2w + phiw*phi2)").unwrap();
    writeln!(s, "complete_on(nu2w1, {set}, [phi2w + phiw*phi2, phiw^2 + y, phi2w*x])").unwrap();
}

fn section3(sc: &Scenario, s: &mut String) {
    header(sc, s);
    let third = if sc.variant == 1 { "t + t^2" } else { "t + t^3" };
    writeln!(s, "series etap = t + t^2 + t^3 + t^4").unwrap();
    writeln!(s, "elem r1 = 0").unwrap();
    writeln!(s, "elem r2 = t").unwrap();
    writeln!(s, "elem r3 = {third}").unwrap();
    writeln!(s, "poly f = (x - r1)*(x - r2)*(x - r3)").unwrap();
    writeln!(s, "val mu = hahn(etap)").unwrap();
    for i in 1..=3 {
        writeln!(s, "eval(mu, x - r{i})").unwrap();
    }
    writeln!(s, "eval(mu, f)").unwrap();
    writeln!(s, "epsilon(mu, f)").unwrap();
    writeln!(s, "delta(f, etap, [r1, r2, r3])").unwrap();
    writeln!(s, "eps_delta(f, etap, [r1, r2, r3])").unwrap();
}
