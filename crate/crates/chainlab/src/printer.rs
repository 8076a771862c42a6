//! Canonical text form of scripts. `parse(print(s))` gives back `s`.

use valkey_core::valgroup::fmt_rat;
use valkey_core::GValue;

use crate::ast::*;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Int(_) | Expr::Var(_) => 5,
    }
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let paren = prec(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Int(n) => out.push_str(&n.to_string()),
        Expr::Var(s) => out.push_str(s),
        Expr::Neg(a) => {
            out.push('-');
            write_expr(out, a, 3);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(out, a, 1);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_expr(out, b, 2);
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            write_expr(out, a, 2);
            out.push(if matches!(e, Expr::Mul(..)) { '*' } else { '/' });
            write_expr(out, b, 3);
        }
        Expr::Pow(b, x) => {
            write_expr(out, b, 5);
            out.push('^');
            match x {
                Exponent::Int(n) if *n >= 0 => out.push_str(&n.to_string()),
                Exponent::Int(n) => out.push_str(&format!("({n})")),
                Exponent::Rat(r) => out.push_str(&format!("({})", fmt_rat(r))),
            }
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

pub fn print_gamma(g: &GValue) -> String {
    match g {
        GValue::Infinity => "inf".into(),
        GValue::Finite(r) => fmt_rat(r),
    }
}

fn print_list(items: &[Expr]) -> String {
    format!("[{}]", items.iter().map(print_expr).collect::<Vec<_>>().join(", "))
}

fn print_arg(a: &Arg) -> String {
    match a {
        Arg::Val(s) | Arg::Gen(s) => s.clone(),
        Arg::Expr(e) => print_expr(e),
        Arg::List(l) => print_list(l),
        Arg::Int(n) => n.to_string(),
        Arg::Gamma(g) => print_gamma(g),
    }
}

pub fn print_val_expr(v: &ValExpr) -> String {
    match v {
        ValExpr::Monomial(g) => format!("monomial({})", print_gamma(g)),
        ValExpr::Augment { base, phi, gamma } => {
            format!("augment({base}, {}, {})", print_expr(phi), print_gamma(gamma))
        }
        ValExpr::Limit { base, generator, key: None } => format!("limit({base}, {generator})"),
        ValExpr::Limit { base, generator, key: Some((phi, gamma)) } => {
            format!("limit({base}, {generator}, {}, {})", print_expr(phi), print_gamma(gamma))
        }
        ValExpr::Hahn(e) => format!("hahn({})", print_expr(e)),
        ValExpr::Truncate { base, q } => format!("truncate({base}, {})", print_expr(q)),
    }
}

pub fn print_stmt(s: &Stmt) -> String {
    match s {
        Stmt::Param { name, value } => format!("param {name} = {}", print_gamma(value)),
        Stmt::Bind { kind, name, expr } => format!("{} {name} = {}", kind.keyword(), print_expr(expr)),
        Stmt::Gen { name, kind } => format!("gen {name} = {}", kind.name()),
        Stmt::Val { name, expr } => format!("val {name} = {}", print_val_expr(expr)),
        Stmt::Query { kind, args } => {
            format!("{}({})", kind.name(), args.iter().map(print_arg).collect::<Vec<_>>().join(", "))
        }
        Stmt::Scenario { name, args } => format!(
            "scenario {name}({})",
            args.iter().map(|(k, v)| format!("{k}={}", print_gamma(v))).collect::<Vec<_>>().join(", ")
        ),
    }
}

pub fn print_script(script: &Script) -> String {
    script.statements.iter().map(|s| print_stmt(&s.stmt) + "\n").collect()
}
