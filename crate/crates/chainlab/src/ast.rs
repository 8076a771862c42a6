//! Syntax tree of chain scripts.

use valkey_core::valgroup::Rat;
use valkey_core::GValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Int(i64),
    /// A non-integral rational, always written in parentheses.
    Rat(Rat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    /// A bound name or one of the reserved `x`, `y`, `t`, `eta`.
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BindKind {
    Elem,
    Poly,
    Series,
}

impl BindKind {
    pub fn keyword(self) -> &'static str {
        match self {
            BindKind::Elem => "elem",
            BindKind::Poly => "poly",
            BindKind::Series => "series",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    FirstChain,
    SecondChain,
}

impl GenKind {
    pub fn name(self) -> &'static str {
        match self {
            GenKind::FirstChain => "first_chain",
            GenKind::SecondChain => "second_chain",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "first_chain" => Some(GenKind::FirstChain),
            "second_chain" => Some(GenKind::SecondChain),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValExpr {
    Monomial(GValue),
    Augment { base: String, phi: Expr, gamma: GValue },
    /// `limit(base, gen)` or, with a key, `limit(base, gen, phi, gamma)`.
    Limit { base: String, generator: String, key: Option<(Expr, GValue)> },
    Hahn(Expr),
    Truncate { base: String, q: Expr },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Val,
    Gen,
    Expr,
    List,
    Int,
    Gamma,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Val(String),
    Gen(String),
    Expr(Expr),
    List(Vec<Expr>),
    Int(i64),
    Gamma(GValue),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Eval,
    Epsilon,
    Equiv,
    Divides,
    Validate,
    Decompose,
    CompleteOn,
    Delta,
    EpsDelta,
    IsKey,
    AlphaPsi,
    PcsCheck,
    IsLimit,
    IsLimitX,
    Classify,
    ClassifyType,
    MinimalPair,
    Keypolys,
    PcsFromKeys,
    LimitTrace,
}

use ArgKind as K;

/// `(kind, name, required arguments, optional trailing arguments)`.
pub const QUERIES: &[(QueryKind, &str, &[ArgKind], &[ArgKind])] = &[
    (QueryKind::Eval, "eval", &[K::Val, K::Expr], &[]),
    (QueryKind::Epsilon, "epsilon", &[K::Val, K::Expr], &[]),
    (QueryKind::Equiv, "equiv", &[K::Val, K::Expr, K::Expr], &[]),
    (QueryKind::Divides, "divides", &[K::Val, K::Expr, K::Expr], &[]),
    (QueryKind::Validate, "validate", &[K::Val], &[K::Int]),
    (QueryKind::Decompose, "decompose", &[K::Val, K::List, K::Expr], &[]),
    (QueryKind::CompleteOn, "complete_on", &[K::Val, K::List, K::List], &[]),
    (QueryKind::Delta, "delta", &[K::Expr, K::Expr], &[K::List]),
    (QueryKind::EpsDelta, "eps_delta", &[K::Expr, K::Expr], &[K::List]),
    (QueryKind::IsKey, "is_key", &[K::Val, K::Expr, K::List], &[]),
    (QueryKind::AlphaPsi, "alpha_psi", &[K::Val, K::Expr, K::List], &[]),
    (QueryKind::PcsCheck, "pcs_check", &[K::List], &[]),
    (QueryKind::IsLimit, "is_limit", &[K::List, K::Expr], &[]),
    (QueryKind::IsLimitX, "is_limit_x", &[K::List, K::Val], &[]),
    (QueryKind::Classify, "classify", &[K::List, K::Expr], &[]),
    (QueryKind::ClassifyType, "classify_type", &[K::List, K::Int, K::List], &[]),
    (QueryKind::MinimalPair, "minimal_pair", &[K::Expr, K::Int, K::Gamma, K::List, K::Int], &[]),
    (QueryKind::Keypolys, "keypolys", &[K::List], &[]),
    (QueryKind::PcsFromKeys, "pcs_from_keys", &[K::List, K::Expr], &[]),
    (QueryKind::LimitTrace, "limit_trace", &[K::Val, K::Gen, K::Expr], &[]),
];

impl QueryKind {
    pub fn from_name(s: &str) -> Option<Self> {
        QUERIES.iter().find(|q| q.1 == s).map(|q| q.0)
    }

    pub fn name(self) -> &'static str {
        self.signature().1
    }

    pub fn signature(self) -> &'static (QueryKind, &'static str, &'static [ArgKind], &'static [ArgKind]) {
        QUERIES.iter().find(|q| q.0 == self).expect("every query has a signature")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Param { name: String, value: GValue },
    Bind { kind: BindKind, name: String, expr: Expr },
    Gen { name: String, kind: GenKind },
    Val { name: String, expr: ValExpr },
    Query { kind: QueryKind, args: Vec<Arg> },
    Scenario { name: String, args: Vec<(String, GValue)> },
}

#[derive(Clone, Debug)]
pub struct Statement {
    pub span: Span,
    pub stmt: Stmt,
}

#[derive(Clone, Debug, Default)]
pub struct Script {
    pub statements: Vec<Statement>,
}

impl Script {
    /// The statements without positions, for structural comparison.
    pub fn stmts(&self) -> Vec<&Stmt> {
        self.statements.iter().map(|s| &s.stmt).collect()
    }

    pub fn push(&mut self, stmt: Stmt) {
        let line = self.statements.len() + 1;
        self.statements.push(Statement { span: Span { line, column: 1 }, stmt });
    }
}
