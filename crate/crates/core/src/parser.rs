//! Text syntax for expressions.
//!
//! ```text
//! expr     = term , { ("+" | "-") , term } ;
//! term     = unary , { "*" , unary } ;
//! unary    = ("-" | "+") , unary | power ;
//! power    = atom , [ "^" , unary ] ;
//! atom     = number | variable | "(" , expr , ")" ;
//! number   = digits , [ "/" , digits ] ;
//! variable = "t" | "x" idx | "v" idx | "a" idx | "p" idx | "pi" idx
//!          | "j" idx "_" order | "p0" ;
//! ```
//!
//! Multiplication is always explicit and `/` only appears inside rational
//! literals. Exponents must reduce to non-negative integer constants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::expr::{normalize, CanonicalVar, Expr, ExprError, Rational, RawExpr};

/// Byte range into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        SourceSpan { start, end }
    }

    fn join(self, other: SourceSpan) -> SourceSpan {
        SourceSpan::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    IndexOutOfRange,
    UnsupportedExpression,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at bytes {span}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn syntax(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Syntax,
            span,
            message: message.into(),
        }
    }

    /// Renders the offending line with a caret marker under the span.
    pub fn annotate(&self, text: &str) -> String {
        let start = self.span.start.min(text.len());
        let end = self.span.end.clamp(start, text.len());
        let line_start = text[..start].rfind('\n').map_or(0, |i| i + 1);
        let line_end = text[start..].find('\n').map_or(text.len(), |i| start + i);
        let line = &text[line_start..line_end];
        let pad = text[line_start..start].chars().count();
        let width = text[start..end.min(line_end)].chars().count().max(1);
        format!("{line}\n{}{}", " ".repeat(pad), "^".repeat(width))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(CanonicalVar),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    n: u32,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str, n: u32) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
        let mut lx = Lexer { text, pos: 0, n };
        let mut out = Vec::new();
        loop {
            let tok = lx.next()?;
            let end = matches!(tok.0, Tok::End);
            out.push(tok);
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, SourceSpan), ParseError> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((Tok::End, SourceSpan::new(start, start)));
        };
        let single = |t| (t, SourceSpan::new(start, start + 1));
        self.pos += 1;
        Ok(match c {
            b'+' => single(Tok::Plus),
            b'-' => single(Tok::Minus),
            b'*' => single(Tok::Star),
            b'^' => single(Tok::Caret),
            b'(' => single(Tok::LParen),
            b')' => single(Tok::RParen),
            b'/' => {
                return Err(ParseError::syntax(
                    SourceSpan::new(start, start + 1),
                    "'/' is only allowed inside rational literals",
                ))
            }
            b'0'..=b'9' => {
                self.pos = start;
                self.number()?
            }
            b'a'..=b'z' => {
                self.pos = start;
                self.variable()?
            }
            _ => {
                let ch = self.text[start..].chars().next().unwrap();
                let end = start + ch.len_utf8();
                self.pos = end;
                return Err(ParseError::syntax(
                    SourceSpan::new(start, end),
                    format!("unexpected character {ch:?}"),
                ));
            }
        })
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn number(&mut self) -> Result<(Tok, SourceSpan), ParseError> {
        let start = self.pos;
        let num: BigInt = self.digits().parse().expect("ascii digits");
        let mut value = Rational::from_integer(num.clone());
        if self.text.as_bytes().get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den = self.digits();
            let span = SourceSpan::new(start, self.pos);
            if den.is_empty() {
                return Err(ParseError::syntax(
                    span,
                    "rational literal is missing its denominator",
                ));
            }
            let den: BigInt = den.parse().expect("ascii digits");
            if den.is_zero() {
                return Err(ParseError::syntax(span, "zero denominator"));
            }
            value = Rational::new(num, den);
        }
        Ok((Tok::Num(value), SourceSpan::new(start, self.pos)))
    }

    fn variable(&mut self) -> Result<(Tok, SourceSpan), ParseError> {
        let start = self.pos;
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len()
            && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let span = SourceSpan::new(start, self.pos);
        let word = &self.text[start..self.pos];
        let unknown = || ParseError::syntax(span, format!("unknown identifier {word:?}"));

        if word == "t" {
            return Ok((Tok::Var(CanonicalVar::T), span));
        }
        let (prefix, rest) = if let Some(r) = word.strip_prefix("pi") {
            ("pi", r)
        } else {
            word.split_at(1)
        };
        let parse_index = |s: &str| -> Result<u32, ParseError> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(unknown());
            }
            s.parse::<u32>()
                .map_err(|_| ParseError::syntax(span, format!("index in {word:?} is too large")))
        };
        let check = |i: u32| -> Result<u32, ParseError> {
            if i == 0 || i > self.n {
                Err(ParseError {
                    kind: ParseErrorKind::IndexOutOfRange,
                    span,
                    message: format!("index {i} of {word:?} outside 1..={}", self.n),
                })
            } else {
                Ok(i)
            }
        };
        let var = match prefix {
            "pi" => CanonicalVar::Pi(check(parse_index(rest)?)?),
            "p" if rest == "0" => CanonicalVar::P0,
            "p" => CanonicalVar::P(check(parse_index(rest)?)?),
            "x" => CanonicalVar::X(check(parse_index(rest)?)?),
            "v" => CanonicalVar::V(check(parse_index(rest)?)?),
            "a" => CanonicalVar::A(check(parse_index(rest)?)?),
            "j" => {
                let (i, k) = rest.split_once('_').ok_or_else(unknown)?;
                let i = check(parse_index(i)?)?;
                let k = parse_index(k)?;
                if k == 0 {
                    return Err(ParseError::syntax(span, "jet order must be at least 1"));
                }
                CanonicalVar::J(i, k)
            }
            _ => return Err(unknown()),
        };
        Ok((Tok::Var(var), span))
    }
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<(RawExpr, SourceSpan), ParseError> {
        let (first, mut span) = self.term()?;
        let mut items = vec![first];
        loop {
            let neg = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            let (t, s) = self.term()?;
            span = span.join(s);
            items.push(if neg { RawExpr::Neg(Box::new(t)) } else { t });
        }
        Ok((single_or(items, RawExpr::Add), span))
    }

    fn term(&mut self) -> Result<(RawExpr, SourceSpan), ParseError> {
        let (first, mut span) = self.unary()?;
        let mut items = vec![first];
        while matches!(self.peek(), Tok::Star) {
            self.bump();
            let (f, s) = self.unary()?;
            span = span.join(s);
            items.push(f);
        }
        Ok((single_or(items, RawExpr::Mul), span))
    }

    fn unary(&mut self) -> Result<(RawExpr, SourceSpan), ParseError> {
        match self.peek() {
            Tok::Minus => {
                let (_, s) = self.bump();
                let (e, es) = self.unary()?;
                Ok((RawExpr::Neg(Box::new(e)), s.join(es)))
            }
            Tok::Plus => {
                let (_, s) = self.bump();
                let (e, es) = self.unary()?;
                Ok((e, s.join(es)))
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<(RawExpr, SourceSpan), ParseError> {
        let (base, span) = self.atom()?;
        if !matches!(self.peek(), Tok::Caret) {
            return Ok((base, span));
        }
        self.bump();
        let (exp, exp_span) = self.unary()?;
        let unsupported = |message: String| ParseError {
            kind: ParseErrorKind::UnsupportedExpression,
            span: exp_span,
            message,
        };
        let k = normalize(&exp)
            .map_err(|e| unsupported(e.to_string()))?
            .as_constant()
            .ok_or_else(|| unsupported("exponent must be a constant".into()))?;
        if !k.is_integer() || k.is_negative() {
            return Err(unsupported(format!(
                "exponent {k} is not a non-negative integer"
            )));
        }
        if k.to_integer().to_u32().is_none() {
            return Err(unsupported(format!("exponent {k} too large")));
        }
        Ok((RawExpr::pow(base, RawExpr::Num(k)), span.join(exp_span)))
    }

    fn atom(&mut self) -> Result<(RawExpr, SourceSpan), ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Num(r) => Ok((RawExpr::Num(r), span)),
            Tok::Var(v) => Ok((RawExpr::Var(v), span)),
            Tok::LParen => {
                let (e, _) = self.expr()?;
                let (close, cs) = self.bump();
                if close != Tok::RParen {
                    return Err(ParseError::syntax(cs, "expected ')'"));
                }
                Ok((e, span.join(cs)))
            }
            Tok::End => Err(ParseError::syntax(span, "unexpected end of input")),
            other => Err(ParseError::syntax(
                span,
                format!("unexpected token {other:?}"),
            )),
        }
    }
}

fn single_or(mut items: Vec<RawExpr>, wrap: fn(Vec<RawExpr>) -> RawExpr) -> RawExpr {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        wrap(items)
    }
}

/// Parses `text` into a raw tree, checking variable indices against `n`.
pub fn parse_raw(text: &str, n: u32) -> Result<RawExpr, ParseError> {
    let toks = Lexer::tokens(text, n)?;
    let mut p = Parser { toks, pos: 0 };
    let (e, _) = p.expr()?;
    if !matches!(p.peek(), Tok::End) {
        let span = p.span();
        let msg = match p.peek() {
            Tok::Var(_) | Tok::Num(_) | Tok::LParen => {
                "expected an operator (multiplication must be written with '*')"
            }
            _ => "unexpected trailing input",
        };
        return Err(ParseError::syntax(span, msg));
    }
    Ok(e)
}

/// Parses and normalizes an expression over coordinates `1..=n`.
pub fn parse(text: &str, n: u32) -> Result<Expr, ParseError> {
    let raw = parse_raw(text, n)?;
    normalize(&raw).map_err(|e| {
        let kind = match e {
            ExprError::UnsupportedExpression(_) => ParseErrorKind::UnsupportedExpression,
            ExprError::InvalidSubstitution(_) => ParseErrorKind::Syntax,
        };
        ParseError {
            kind,
            span: SourceSpan::new(0, text.len()),
            message: e.to_string(),
        }
    })
}

/// Canonical text form; `parse(&render(e), n) == e` for any `n` covering
/// the indices in `e`.
pub fn render(e: &Expr) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, CanonicalVar::*};

    #[test]
    fn fixture_lagrangian_parses() {
        let l = parse(
            "1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2 + v3*a3",
            3,
        )
        .unwrap();
        let half = rat(1, 2);
        let sq = |v| Expr::var(v).pow(2);
        let expected = [
            sq(A(1)).scale(&half),
            sq(A(2)).scale(&half),
            sq(V(1)).scale(&-half.clone()),
            sq(V(2)).scale(&-half.clone()),
            sq(X(3)).scale(&half),
            &Expr::var(V(3)) * &Expr::var(A(3)),
        ]
        .iter()
        .fold(Expr::zero(), |acc, t| &acc + t);
        assert_eq!(l, expected);
    }

    #[test]
    fn cancellation_to_zero() {
        assert!(parse("x1 - x1", 1).unwrap().is_zero());
    }

    #[test]
    fn negative_exponent_is_unsupported() {
        let err = parse("v1^-1", 1).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnsupportedExpression);
        assert_eq!(err.span, SourceSpan::new(3, 5));
        let err = parse("v1^(1/2)", 1).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnsupportedExpression);
    }

    #[test]
    fn index_out_of_range() {
        let err = parse("x1 + v4", 3).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::IndexOutOfRange);
        assert_eq!(err.span, SourceSpan::new(5, 7));
        assert_eq!(
            parse("x0", 3).unwrap_err().kind,
            ParseErrorKind::IndexOutOfRange
        );
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let err = parse("2x1", 1).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert_eq!(err.span, SourceSpan::new(1, 3));
        assert!(parse("x1 x2", 2).is_err());
        assert!(parse("(x1)(x2)", 2).is_err());
    }

    #[test]
    fn token_forms() {
        assert_eq!(parse("pi2", 2).unwrap(), Expr::var(Pi(2)));
        assert_eq!(parse("p2", 2).unwrap(), Expr::var(P(2)));
        assert_eq!(parse("p0", 2).unwrap(), Expr::var(P0));
        assert_eq!(parse("j2_3", 2).unwrap(), Expr::var(J(2, 3)));
        assert_eq!(parse("t", 1).unwrap(), Expr::var(T));
        assert!(parse("j2", 2).is_err());
        assert!(parse("q1", 2).is_err());
        assert!(parse("x1/2", 2).is_err());
        assert!(parse("1/0", 2).is_err());
        assert!(parse("(x1", 2).is_err());
        assert!(parse("", 2).is_err());
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            render(&Expr::var(Pi(1)).pow(2).scale(&rat(1, 2))),
            "1/2*pi1^2"
        );
        assert_eq!(render(&Expr::zero()), "0");
        let l = parse(
            "1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2 + v3*a3",
            3,
        )
        .unwrap();
        assert_eq!(parse(&render(&l), 3).unwrap(), l);
    }

    #[test]
    fn error_spans_stay_in_bounds() {
        for text in ["", "(", "x1 +", "v1^-1", "é", "x1 é", "3/", "x9", "1 2"] {
            if let Err(e) = parse(text, 3) {
                assert!(
                    e.span.start <= e.span.end && e.span.end <= text.len(),
                    "{text:?}: {e:?}"
                );
                let _ = e.annotate(text);
            }
        }
    }
}
