//! Recursive-descent parser for the literal language.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' factor)?
//! atom   := NUM | 'w' | 'n' | '(' expr ')' | IDENT '(' expr (',' expr)* ')'
//! signed := '[' (('+' | '-') expr (',' ('+' | '-') expr)*)? ']'
//! ```
//!
//! Expressions are interpreted either as closed ordinals or as families in
//! `n`. Dyadics are written `p/2^k`, `p/q`, as decimals or as integers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::limit_engine::RunTemplate;
use crate::ordinal::{Affine, Ordinal, ParamOrdinal};
use crate::real_bridge::Dyadic;
use crate::sign_expansion::{Run, Sign, SignExpansion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(u64),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(k) => write!(f, "{k}"),
            Tok::Ident(s) => write!(f, "{s:?}"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(d);
                chars.next();
                column += 1;
            }
            let k = digits
                .parse()
                .map_err(|_| pos.error(format!("number {digits} is too large")))?;
            out.push((Tok::Num(k), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                word.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Ident(word), pos));
        } else if "+-*^()[],".contains(c) || c == 'ω' {
            chars.next();
            column += 1;
            let tok = if c == 'ω' {
                Tok::Ident("w".into())
            } else {
                Tok::Sym(c)
            };
            out.push((tok, pos));
        } else {
            return Err(pos.error(format!("unexpected character {c:?}")));
        }
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ExprKind {
    Nat(u64),
    W,
    N,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Expr {
    kind: ExprKind,
    pos: Pos,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.pos().error(format!("expected '{c}', found {}", self.peek())))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            t => Err(self.pos().error(format!("unexpected {t}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::Sym('+') {
            let pos = self.bump().1;
            let rhs = self.term()?;
            lhs = Expr {
                kind: ExprKind::Add(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Sym('*') {
            let pos = self.bump().1;
            let rhs = self.factor()?;
            lhs = Expr {
                kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            let pos = self.bump().1;
            let exponent = self.factor()?;
            return Ok(Expr {
                kind: ExprKind::Pow(Box::new(base), Box::new(exponent)),
                pos,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        let kind = match tok {
            Tok::Num(k) => ExprKind::Nat(k),
            Tok::Ident(w) if w == "w" || w == "omega" => ExprKind::W,
            Tok::Ident(n) if n == "n" => ExprKind::N,
            Tok::Ident(name) => {
                self.expect('(')?;
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                ExprKind::Call(name, args)
            }
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                return Ok(inner);
            }
            t => return Err(pos.error(format!("expected an ordinal, found {t}"))),
        };
        Ok(Expr { kind, pos })
    }

    /// `[±len, ...]` with raw length expressions.
    fn signed(&mut self) -> Result<Vec<(Sign, Expr)>, ParseError> {
        self.expect('[')?;
        let mut runs = Vec::new();
        if self.eat(']') {
            return Ok(runs);
        }
        loop {
            let sign = if self.eat('+') {
                Sign::Plus
            } else if self.eat('-') {
                Sign::Minus
            } else {
                return Err(self.pos().error(format!("expected '+' or '-', found {}", self.peek())));
            };
            runs.push((sign, self.expr()?));
            if self.eat(']') {
                return Ok(runs);
            }
            self.expect(',')?;
        }
    }
}

fn ordinal_of(e: &Expr) -> Result<Ordinal, ParseError> {
    let err = |m: &dyn fmt::Display| e.pos.error(m.to_string());
    match &e.kind {
        ExprKind::Nat(k) => Ok(Ordinal::nat(*k)),
        ExprKind::W => Ok(Ordinal::omega()),
        ExprKind::N => Err(err(&"the parameter n is not allowed in a closed ordinal")),
        ExprKind::Add(a, b) => ordinal_of(a)?.checked_add(&ordinal_of(b)?).map_err(|x| err(&x)),
        ExprKind::Mul(a, b) => ordinal_of(a)?.checked_mul(&ordinal_of(b)?).map_err(|x| err(&x)),
        ExprKind::Pow(base, exponent) => {
            if base.kind != ExprKind::W {
                return Err(base.pos.error("only w may be raised to a power"));
            }
            Ok(Ordinal::omega_pow(ordinal_of(exponent)?))
        }
        ExprKind::Call(name, args) => match name.as_str() {
            "nat_sum" => {
                let mut acc = Ordinal::zero();
                for a in args {
                    acc = acc.checked_nat_sum(&ordinal_of(a)?).map_err(|x| err(&x))?;
                }
                Ok(acc)
            }
            "sup" => {
                let mut best = Ordinal::zero();
                for a in args {
                    best = best.max(param_of(a)?.sup().map_err(|x| err(&x))?);
                }
                Ok(best)
            }
            _ => Err(err(&format!("unknown function {name}"))),
        },
    }
}

/// The coefficient of a family with only finite terms.
fn as_affine(p: &ParamOrdinal) -> Option<Affine> {
    match p.terms() {
        [] => Some(Affine::constant(0)),
        [t] if t.exponent().is_zero() => Some(t.coefficient()),
        _ => None,
    }
}

fn param_of(e: &Expr) -> Result<ParamOrdinal, ParseError> {
    let err = |m: &dyn fmt::Display| e.pos.error(m.to_string());
    match &e.kind {
        ExprKind::N => Ok(ParamOrdinal::param()),
        ExprKind::Add(a, b) => param_of(a)?.checked_add(&param_of(b)?).map_err(|x| err(&x)),
        ExprKind::Mul(a, b) => {
            let (x, y) = (param_of(a)?, param_of(b)?);
            if x.is_closed() && y.is_closed() {
                return Ok(ordinal_of(e)?.into());
            }
            let unsupported = || err(&"this product is not a family of the supported shape");
            if let Some(k) = as_affine(&y) {
                if k.is_zero() {
                    return Ok(ParamOrdinal::zero());
                }
                if let [t] = x.terms() {
                    let c = t.coefficient().checked_mul(&k).ok_or_else(unsupported)?;
                    return ParamOrdinal::monomial(t.exponent().clone(), c).map_err(|x| err(&x));
                }
                if k.is_constant() {
                    let mut acc = ParamOrdinal::zero();
                    for _ in 0..k.offset {
                        acc = acc.checked_add(&x).map_err(|x| err(&x))?;
                    }
                    return Ok(acc);
                }
            }
            Err(unsupported())
        }
        ExprKind::Pow(base, exponent) => {
            if base.kind != ExprKind::W {
                return Err(base.pos.error("only w may be raised to a power"));
            }
            ParamOrdinal::monomial(param_of(exponent)?, Affine::constant(1)).map_err(|x| err(&x))
        }
        _ => Ok(ordinal_of(e)?.into()),
    }
}

fn parse_with<T>(
    text: &str,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut p = Parser::new(text)?;
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

pub fn parse_ordinal(text: &str) -> Result<Ordinal, ParseError> {
    parse_with(text, |p| ordinal_of(&p.expr()?))
}

pub fn parse_param(text: &str) -> Result<ParamOrdinal, ParseError> {
    parse_with(text, |p| param_of(&p.expr()?))
}

pub fn parse_sign_expansion(text: &str) -> Result<SignExpansion, ParseError> {
    parse_with(text, |p| {
        let runs = p
            .signed()?
            .iter()
            .map(|(s, e)| Ok(Run::new(*s, ordinal_of(e)?)))
            .collect::<Result<Vec<_>, ParseError>>()?;
        Ok(SignExpansion::normalize(runs))
    })
}

pub fn parse_template(text: &str) -> Result<RunTemplate, ParseError> {
    let start = Pos { line: 1, column: 1 };
    parse_with(text, |p| {
        let runs = p
            .signed()?
            .iter()
            .map(|(s, e)| Ok((*s, param_of(e)?)))
            .collect::<Result<Vec<_>, ParseError>>()?;
        RunTemplate::new(runs).map_err(|e| start.error(e.to_string()))
    })
}

/// A rational written `p/q`, `p/2^k`, as a decimal or as an integer.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let at = |column: usize, m: String| ParseError {
        line: 1,
        column,
        message: m,
    };
    let trimmed = text.trim();
    let lead = text.len() - text.trim_start().len() + 1;
    let (negative, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed),
    };
    let int = |s: &str, col: usize| {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(at(col, format!("expected digits, found {s:?}")));
        }
        Ok(BigInt::from_str(s).expect("digits"))
    };
    let body_col = lead + usize::from(negative);
    let value = if let Some((num, den)) = body.split_once('/') {
        let den_col = body_col + num.len() + 1;
        let denominator = match den.split_once('^') {
            Some((two, k)) => {
                if two != "2" {
                    return Err(at(den_col, "only powers of 2 may be written with '^'".into()));
                }
                let k: u32 = k
                    .parse()
                    .map_err(|_| at(den_col + 2, format!("bad exponent {k:?}")))?;
                BigInt::one() << k as usize
            }
            None => int(den, den_col)?,
        };
        if denominator.is_zero() {
            return Err(at(den_col, "zero denominator".into()));
        }
        BigRational::new(int(num, body_col)?, denominator)
    } else if let Some((whole, frac)) = body.split_once('.') {
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let digits = int(&format!("{whole}{frac}"), body_col)?;
        BigRational::new(digits, scale)
    } else {
        BigRational::from_integer(int(body, body_col)?)
    };
    Ok(if negative { -value } else { value })
}

/// A dyadic literal; a non-dyadic rational is reported as a domain error by
/// the caller, so this returns both layers.
pub fn parse_dyadic(text: &str) -> Result<Result<Dyadic, crate::real_bridge::BridgeError>, ParseError> {
    Ok(Dyadic::from_rational(&parse_rational(text)?))
}

/// Any literal of the language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Ordinal(Ordinal),
    Param(ParamOrdinal),
    SignExpansion(SignExpansion),
    Rational(BigRational),
}

pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let t = text.trim_start();
    if t.starts_with('[') {
        return parse_sign_expansion(text).map(Literal::SignExpansion);
    }
    if t.starts_with('-') || t.starts_with(|c: char| c.is_ascii_digit()) && t.contains(['/', '.']) {
        return parse_rational(text).map(Literal::Rational);
    }
    let p = parse_param(text)?;
    Ok(if p.is_closed() {
        Literal::Ordinal(parse_ordinal(text)?)
    } else {
        Literal::Param(p)
    })
}

impl FromStr for Ordinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

impl FromStr for ParamOrdinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_param(s)
    }
}

impl FromStr for SignExpansion {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sign_expansion(s)
    }
}

impl FromStr for RunTemplate {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_template(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_cases() {
        assert_eq!(parse_ordinal("w^(w)").unwrap(), Ordinal::omega_pow(Ordinal::omega()));
        assert_eq!(parse_ordinal("nat_sum(w+1, w+1)").unwrap().to_string(), "w*2+2");
        assert_eq!(parse_ordinal("2^3").unwrap_err().column, 1);
        assert_eq!(
            parse_sign_expansion("[+w, -2]").unwrap().to_string(),
            "[+w, -2]"
        );
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-5/2^3").unwrap(), BigRational::new((-5).into(), 8.into()));
        assert_eq!(parse_rational("0.75").unwrap(), BigRational::new(3.into(), 4.into()));
        assert!(parse_dyadic("1/3").unwrap().is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_ordinal("1+w").unwrap(), Ordinal::omega());
        assert_eq!(parse_ordinal("w+2*3").unwrap().to_string(), "w+6");
        assert_eq!(parse_ordinal("w^w^2").unwrap().to_string(), "w^(w^2)");
        assert_eq!(parse_ordinal("2*w").unwrap(), Ordinal::omega());
        assert_eq!(parse_ordinal("(w+1)*2").unwrap().to_string(), "w*2+1");
        assert_eq!(parse_ordinal("sup(w^n)").unwrap().to_string(), "w^(w)");
        assert_eq!(parse_ordinal("sup(w+n)").unwrap().to_string(), "w*2");
    }

    #[test]
    fn families() {
        assert_eq!(parse_param("2*n+1").unwrap().to_string(), "2*n+1");
        assert_eq!(parse_param("w+(2*n+1)").unwrap().to_string(), "w+(2*n+1)");
        assert_eq!(parse_param("w^n").unwrap().to_string(), "w^n");
        assert_eq!(parse_param("w*n").unwrap().eval(3).unwrap().to_string(), "w*3");
        assert!(parse_param("n*n").is_err());
        let t = parse_template("[+w, -n]").unwrap();
        assert_eq!(t.to_string(), "[+w, -n]");
    }

    #[test]
    fn positions() {
        let e = parse_sign_expansion("[+w,\n  *2]").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_ordinal("w + n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_ordinal("foo(1)").unwrap_err();
        assert_eq!(e.column, 1);
        assert!(parse_ordinal("w)").is_err());
    }

    #[test]
    fn literal_kinds() {
        assert!(matches!(parse_literal("w^(w)"), Ok(Literal::Ordinal(_))));
        assert!(matches!(parse_literal("[+w, -2]"), Ok(Literal::SignExpansion(_))));
        assert!(matches!(parse_literal("3/2"), Ok(Literal::Rational(_))));
        assert!(matches!(parse_literal("-1"), Ok(Literal::Rational(_))));
        assert!(matches!(parse_literal("w+n"), Ok(Literal::Param(_))));
    }
}
