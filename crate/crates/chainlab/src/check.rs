//! Name resolution and typing of scripts, done before anything runs.

use std::collections::HashMap;

use valkey_core::hahn::is_prime;
use valkey_core::GValue;

use crate::ast::*;
use crate::error::DslError;
use crate::scenario;

/// What an expression argument must evaluate to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// A polynomial in `x` (constants included).
    Poly,
    /// An element of `K`.
    KElem,
    /// An element of `K` or a point of the Hahn field.
    Element,
    /// A point of the Hahn field; elements of `K` are embedded.
    Point,
}

impl Role {
    fn describe(self) -> &'static str {
        match self {
            Role::Poly => "a polynomial",
            Role::KElem => "an element of K",
            Role::Element => "an element or a series",
            Role::Point => "a series",
        }
    }
}

/// Role of the expression (or list items) at argument position `i`.
pub fn arg_role(kind: QueryKind, i: usize) -> Role {
    use QueryKind::*;
    match (kind, i) {
        (Delta | EpsDelta, 1) | (PcsFromKeys, 1) => Role::Point,
        (Delta | EpsDelta, 2) => Role::Element,
        (Classify, 1) => Role::Poly,
        (PcsCheck | IsLimit | Classify | MinimalPair, _) => Role::Element,
        (ClassifyType, 0) => Role::Element,
        (IsLimitX | Keypolys | ClassifyType, _) => Role::KElem,
        _ => Role::Poly,
    }
}

/// Queries whose valuation argument must be a chain.
fn needs_chain(kind: QueryKind) -> bool {
    matches!(kind, QueryKind::Validate | QueryKind::LimitTrace)
}

pub const PARAMS: [&str; 3] = ["p", "precision", "nmax"];
pub const RESERVED: [&str; 5] = ["x", "y", "t", "eta", "inf"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ty {
    Elem,
    Poly,
    Series,
    Gen,
    Chain,
    Val,
}

impl Ty {
    fn describe(self) -> &'static str {
        match self {
            Ty::Elem => "an element",
            Ty::Poly => "a polynomial",
            Ty::Series => "a series",
            Ty::Gen => "a generator",
            Ty::Chain => "a chain valuation",
            Ty::Val => "a valuation",
        }
    }
}

/// The kind of value an expression produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ExprTy {
    Elem,
    Poly,
    Series,
}

struct Checker {
    names: HashMap<String, Ty>,
    has_p: bool,
}

pub fn check(script: &Script) -> Result<(), DslError> {
    let mut c = Checker { names: HashMap::new(), has_p: false };
    for s in &script.statements {
        c.statement(s.span, &s.stmt)?;
    }
    Ok(())
}

fn mismatch(span: Span, name: &str, expected: &str, actual: &str) -> DslError {
    DslError::TypeMismatch { span, name: name.into(), expected: expected.into(), actual: actual.into() }
}

impl Checker {
    fn require_p(&self, span: Span) -> Result<(), DslError> {
        if self.has_p {
            Ok(())
        } else {
            Err(DslError::UndefinedIdentifier { span, name: "p".into() })
        }
    }

    fn bind(&mut self, span: Span, name: &str, ty: Ty) -> Result<(), DslError> {
        if RESERVED.contains(&name) || PARAMS.contains(&name) {
            return Err(mismatch(span, name, "a fresh name", "reserved"));
        }
        self.names.insert(name.to_string(), ty);
        Ok(())
    }

    fn lookup(&self, span: Span, name: &str) -> Result<Ty, DslError> {
        self.names
            .get(name)
            .copied()
            .ok_or_else(|| DslError::UndefinedIdentifier { span, name: name.into() })
    }

    fn statement(&mut self, span: Span, stmt: &Stmt) -> Result<(), DslError> {
        match stmt {
            Stmt::Param { name, value } => self.param(span, name, value),
            Stmt::Bind { kind, name, expr } => {
                self.require_p(span)?;
                let t = self.expr(span, expr)?;
                let (ty, ok) = match kind {
                    BindKind::Elem => (Ty::Elem, t == ExprTy::Elem),
                    BindKind::Poly => (Ty::Poly, t != ExprTy::Series),
                    BindKind::Series => (Ty::Series, t != ExprTy::Poly),
                };
                if !ok {
                    return Err(mismatch(span, name, ty.describe(), expr_ty_name(t)));
                }
                self.bind(span, name, ty)
            }
            Stmt::Gen { name, .. } => {
                self.require_p(span)?;
                self.bind(span, name, Ty::Gen)
            }
            Stmt::Val { name, expr } => {
                self.require_p(span)?;
                let ty = self.val_expr(span, expr)?;
                self.bind(span, name, ty)
            }
            Stmt::Query { kind, args } => {
                self.require_p(span)?;
                self.query(span, *kind, args)
            }
            Stmt::Scenario { name, args } => {
                let sc = scenario::Scenario::from_args(name, args)?;
                check(&scenario::generate(&sc)?)
            }
        }
    }

    fn param(&mut self, span: Span, name: &str, value: &GValue) -> Result<(), DslError> {
        let as_int = value.finite().filter(|r| r.is_integer()).and_then(|r| i64::try_from(r.numer()).ok());
        let bad = |expected: &str| Err(mismatch(span, name, expected, &value.to_string()));
        match name {
            "p" => {
                if self.has_p || !self.names.is_empty() {
                    return Err(mismatch(span, name, "set once, before any binding", "set again"));
                }
                match as_int {
                    Some(n) if n > 1 && n <= u32::MAX as i64 && is_prime(n as u32) => {}
                    _ => return bad("a prime"),
                }
                self.has_p = true;
                Ok(())
            }
            "precision" | "nmax" => match as_int {
                Some(n) if n >= 1 && n <= u32::MAX as i64 => Ok(()),
                _ => bad("a positive integer"),
            },
            _ => Err(DslError::UndefinedIdentifier { span, name: name.into() }),
        }
    }

    fn expr(&self, span: Span, e: &Expr) -> Result<ExprTy, DslError> {
        Ok(match e {
            Expr::Int(_) => ExprTy::Elem,
            Expr::Var(s) => match s.as_str() {
                "x" => ExprTy::Poly,
                "y" | "t" => ExprTy::Elem,
                "eta" => ExprTy::Series,
                name => match self.lookup(span, name)? {
                    Ty::Elem => ExprTy::Elem,
                    Ty::Poly => ExprTy::Poly,
                    Ty::Series => ExprTy::Series,
                    other => return Err(mismatch(span, name, "an element, polynomial or series", other.describe())),
                },
            },
            Expr::Neg(a) | Expr::Pow(a, _) => self.expr(span, a)?,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let (ta, tb) = (self.expr(span, a)?, self.expr(span, b)?);
                match (ta, tb) {
                    (ExprTy::Elem, t) | (t, ExprTy::Elem) => t,
                    (ta, tb) if ta == tb => ta,
                    _ => {
                        return Err(mismatch(
                            span,
                            &crate::printer::print_expr(e),
                            "a polynomial or a series",
                            "a mix of both",
                        ))
                    }
                }
            }
        })
    }

    fn expect_role(&self, span: Span, e: &Expr, role: Role) -> Result<(), DslError> {
        let t = self.expr(span, e)?;
        let ok = match role {
            Role::Poly => t != ExprTy::Series,
            Role::KElem => t == ExprTy::Elem,
            Role::Element | Role::Point => t != ExprTy::Poly,
        };
        if ok {
            Ok(())
        } else {
            Err(mismatch(span, &crate::printer::print_expr(e), role.describe(), expr_ty_name(t)))
        }
    }

    fn expect_name(&self, span: Span, name: &str, want: Ty) -> Result<(), DslError> {
        let have = self.lookup(span, name)?;
        let ok = have == want || (want == Ty::Val && have == Ty::Chain);
        if ok {
            Ok(())
        } else {
            Err(mismatch(span, name, want.describe(), have.describe()))
        }
    }

    fn val_expr(&self, span: Span, v: &ValExpr) -> Result<Ty, DslError> {
        match v {
            ValExpr::Monomial(_) => Ok(Ty::Chain),
            ValExpr::Augment { base, phi, .. } => {
                self.expect_name(span, base, Ty::Chain)?;
                self.expect_role(span, phi, Role::Poly)?;
                Ok(Ty::Chain)
            }
            ValExpr::Limit { base, generator, key } => {
                self.expect_name(span, base, Ty::Chain)?;
                self.expect_name(span, generator, Ty::Gen)?;
                match key {
                    Some((phi, _)) => {
                        self.expect_role(span, phi, Role::Poly)?;
                        Ok(Ty::Chain)
                    }
                    None => Ok(Ty::Val),
                }
            }
            ValExpr::Hahn(e) => {
                self.expect_role(span, e, Role::Point)?;
                Ok(Ty::Val)
            }
            ValExpr::Truncate { base, q } => {
                self.expect_name(span, base, Ty::Val)?;
                self.expect_role(span, q, Role::Poly)?;
                Ok(Ty::Val)
            }
        }
    }

    fn query(&self, span: Span, kind: QueryKind, args: &[Arg]) -> Result<(), DslError> {
        for (i, a) in args.iter().enumerate() {
            match a {
                Arg::Val(name) => {
                    let want = if needs_chain(kind) { Ty::Chain } else { Ty::Val };
                    self.expect_name(span, name, want)?;
                }
                Arg::Gen(name) => self.expect_name(span, name, Ty::Gen)?,
                Arg::Expr(e) => self.expect_role(span, e, arg_role(kind, i))?,
                Arg::List(items) => {
                    for e in items {
                        self.expect_role(span, e, arg_role(kind, i))?;
                    }
                }
                Arg::Int(_) | Arg::Gamma(_) => {}
            }
        }
        Ok(())
    }
}

fn expr_ty_name(t: ExprTy) -> &'static str {
    match t {
        ExprTy::Elem => "an element",
        ExprTy::Poly => "a polynomial",
        ExprTy::Series => "a series",
    }
}
