//! Recursive descent parser for chain scripts.
//!
//! ```text
//! script    := { stmt? NEWLINE }
//! stmt      := "param" IDENT "=" gamma
//!            | ("elem" | "poly" | "series") IDENT "=" expr
//!            | "gen" IDENT "=" IDENT
//!            | "val" IDENT "=" valexpr
//!            | "scenario" IDENT "(" [ IDENT "=" gamma { "," IDENT "=" gamma } ] ")"
//!            | QUERY "(" args ")"
//! valexpr   := "monomial" "(" gamma ")"
//!            | "augment" "(" IDENT "," expr "," gamma ")"
//!            | "limit" "(" IDENT "," IDENT [ "," expr "," gamma ] ")"
//!            | "hahn" "(" expr ")"
//!            | "truncate" "(" IDENT "," expr ")"
//! gamma     := "inf" | ["-"] INT [ "/" INT ]
//! expr      := term { ("+" | "-") term }
//! term      := unary { ("*" | "/") unary }
//! unary     := "-" unary | power
//! power     := atom [ "^" exponent ]
//! exponent  := INT | "(" ["-"] INT [ "/" INT ] ")"
//! atom      := INT | IDENT | "(" expr ")"
//! list      := "[" [ expr { "," expr } ] "]"
//! ```

use num_bigint::BigInt;
use num_traits::One;
use valkey_core::valgroup::Rat;
use valkey_core::GValue;

use crate::ast::*;
use crate::error::DslError;
use crate::lexer::{tokenize, Tok, Token};

pub fn parse(src: &str) -> Result<Script, DslError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut script = Script::default();
    loop {
        match p.peek() {
            Tok::Eof => break,
            Tok::Newline => {
                p.pos += 1;
            }
            _ => {
                let span = p.span();
                let stmt = p.statement()?;
                p.expect_end()?;
                script.statements.push(Statement { span, stmt });
            }
        }
    }
    Ok(script)
}

/// Parses a single expression, as used for command line arguments.
pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

/// Parses a value-group literal such as `-1/3` or `inf`.
pub fn parse_gamma(src: &str) -> Result<GValue, DslError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let g = p.gamma()?;
    p.expect_end()?;
    Ok(g)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, DslError> {
        Err(DslError::Parse { span: self.span(), expected: expected.into(), found: self.peek().describe() })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), DslError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(&tok.describe())
        }
    }

    fn expect_end(&mut self) -> Result<(), DslError> {
        match self.peek() {
            Tok::Newline => {
                self.pos += 1;
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => self.error("end of line"),
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("an identifier"),
        }
    }

    fn int(&mut self) -> Result<i64, DslError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.error("an integer"),
        }
    }

    fn signed_int(&mut self) -> Result<i64, DslError> {
        if self.eat(&Tok::Minus) {
            Ok(-self.int()?)
        } else {
            self.int()
        }
    }

    /// `[-]INT[/INT]`, with a nonzero denominator.
    fn rational(&mut self) -> Result<Rat, DslError> {
        let num = self.signed_int()?;
        if self.eat(&Tok::Slash) {
            let span = self.span();
            let den = self.int()?;
            if den == 0 {
                return Err(DslError::Parse { span, expected: "a nonzero denominator".into(), found: "`0`".into() });
            }
            Ok(Rat::new(BigInt::from(num), BigInt::from(den)))
        } else {
            Ok(Rat::from_integer(BigInt::from(num)))
        }
    }

    fn gamma(&mut self) -> Result<GValue, DslError> {
        if let Tok::Ident(s) = self.peek() {
            if s == "inf" {
                self.pos += 1;
                return Ok(GValue::Infinity);
            }
        }
        if !matches!(self.peek(), Tok::Int(_) | Tok::Minus) {
            return self.error("a value (`inf` or a rational)");
        }
        Ok(GValue::Finite(self.rational()?))
    }

    fn statement(&mut self) -> Result<Stmt, DslError> {
        let keyword = self.ident()?;
        match keyword.as_str() {
            "param" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let value = self.gamma()?;
                Ok(Stmt::Param { name, value })
            }
            "elem" | "poly" | "series" => {
                let kind = match keyword.as_str() {
                    "elem" => BindKind::Elem,
                    "poly" => BindKind::Poly,
                    _ => BindKind::Series,
                };
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let expr = self.expr()?;
                Ok(Stmt::Bind { kind, name, expr })
            }
            "gen" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let kind = match self.peek() {
                    Tok::Ident(s) => GenKind::from_name(s),
                    _ => None,
                };
                match kind {
                    Some(kind) => {
                        self.pos += 1;
                        Ok(Stmt::Gen { name, kind })
                    }
                    None => self.error("`first_chain` or `second_chain`"),
                }
            }
            "val" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let expr = self.val_expr()?;
                Ok(Stmt::Val { name, expr })
            }
            "scenario" => {
                let name = self.ident()?;
                self.expect(Tok::LParen)?;
                let mut args = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        let k = self.ident()?;
                        self.expect(Tok::Eq)?;
                        args.push((k, self.gamma()?));
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        if !self.eat(&Tok::Comma) {
                            return self.error("`,` or `)`");
                        }
                    }
                }
                Ok(Stmt::Scenario { name, args })
            }
            q => match QueryKind::from_name(q) {
                Some(kind) => self.query(kind),
                None => {
                    self.pos -= 1;
                    self.error("a statement keyword or query name")
                }
            },
        }
    }

    fn val_expr(&mut self) -> Result<ValExpr, DslError> {
        let head = self.ident()?;
        self.expect(Tok::LParen)?;
        let v = match head.as_str() {
            "monomial" => ValExpr::Monomial(self.gamma()?),
            "augment" => {
                let base = self.ident()?;
                self.expect(Tok::Comma)?;
                let phi = self.expr()?;
                self.expect(Tok::Comma)?;
                let gamma = self.gamma()?;
                ValExpr::Augment { base, phi, gamma }
            }
            "limit" => {
                let base = self.ident()?;
                self.expect(Tok::Comma)?;
                let generator = self.ident()?;
                let key = if self.eat(&Tok::Comma) {
                    let phi = self.expr()?;
                    self.expect(Tok::Comma)?;
                    Some((phi, self.gamma()?))
                } else {
                    None
                };
                ValExpr::Limit { base, generator, key }
            }
            "hahn" => ValExpr::Hahn(self.expr()?),
            "truncate" => {
                let base = self.ident()?;
                self.expect(Tok::Comma)?;
                ValExpr::Truncate { base, q: self.expr()? }
            }
            _ => {
                self.pos -= 2;
                return self.error("`monomial`, `augment`, `limit`, `hahn` or `truncate`");
            }
        };
        if !self.eat(&Tok::RParen) {
            return self.error("`,` or `)`");
        }
        Ok(v)
    }

    fn query(&mut self, kind: QueryKind) -> Result<Stmt, DslError> {
        let (_, _, required, optional) = kind.signature();
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        for (i, k) in required.iter().enumerate() {
            if i > 0 {
                self.expect(Tok::Comma)?;
            }
            args.push(self.arg(*k)?);
        }
        for k in optional.iter() {
            if !self.eat(&Tok::Comma) {
                break;
            }
            args.push(self.arg(*k)?);
        }
        if !self.eat(&Tok::RParen) {
            let more = args.len() < required.len() + optional.len();
            return self.error(if more { "`,` or `)`" } else { "`)`" });
        }
        Ok(Stmt::Query { kind, args })
    }

    fn arg(&mut self, kind: ArgKind) -> Result<Arg, DslError> {
        Ok(match kind {
            ArgKind::Val => Arg::Val(self.ident()?),
            ArgKind::Gen => Arg::Gen(self.ident()?),
            ArgKind::Expr => Arg::Expr(self.expr()?),
            ArgKind::List => Arg::List(self.list()?),
            ArgKind::Int => Arg::Int(self.signed_int()?),
            ArgKind::Gamma => Arg::Gamma(self.gamma()?),
        })
    }

    fn list(&mut self) -> Result<Vec<Expr>, DslError> {
        self.expect(Tok::LBracket)?;
        let mut items = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.eat(&Tok::RBracket) {
                return Ok(items);
            }
            if !self.eat(&Tok::Comma) {
                return self.error("`,` or `]`");
            }
        }
    }

    pub fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            return Ok(Expr::Pow(Box::new(base), self.exponent()?));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Exponent, DslError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Exponent::Int(n))
            }
            Tok::LParen => {
                self.pos += 1;
                let r = self.rational()?;
                self.expect(Tok::RParen)?;
                Ok(exponent_of(r))
            }
            _ => self.error("an integer or a parenthesized rational exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.error("an expression"),
        }
    }
}

pub fn exponent_of(r: Rat) -> Exponent {
    if r.denom().is_one() {
        // numerators come from 64-bit literals and only shrink on reduction
        Exponent::Int(r.numer().try_into().expect("reduced literal fits in i64"))
    } else {
        Exponent::Rat(r)
    }
}
