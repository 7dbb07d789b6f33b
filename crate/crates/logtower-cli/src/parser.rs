//! Recursive-descent parser for tower-germ and differential-polynomial
//! expressions.
//!
//! Grammar:
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-'? factor
//! factor := base ('^' exponent)?
//! base   := rational | 'x' | 'l' nat | 'log' '(' expr ')'
//!         | ('gamma'|'omega'|'lambda'|'sigma_gamma') '(' nat ')'
//!         | 'Y' '\''*            (differential-polynomial mode only)
//!         | '(' expr ')'
//! exponent := '-'? number | '(' '-'? number ('/' number)? ')'
//! ```
//! Decimal literals become exact rationals (`0.25` is `1/4`); whitespace is
//! insignificant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::ast::{Expr, SeqKind, Span, SpanError, Spanned};

/// Caps on tower levels and derivative orders accepted from input.
pub const MAX_LEVEL: usize = 100;
pub const MAX_JET_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Prime,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn tokenize(input: &str) -> Result<Vec<Token>, SpanError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | '\'' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Prime,
                };
                i += 1;
                out.push(Token {
                    tok,
                    span: (start, i),
                });
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(SpanError::new(
                            "digits expected after decimal point",
                            (start, i),
                        ));
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                out.push(Token {
                    tok: Tok::Num(input[start..i].to_string()),
                    span: (start, i),
                });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(input[start..i].to_string()),
                    span: (start, i),
                });
            }
            _ => {
                return Err(SpanError::new(
                    format!("unexpected character '{}'", c),
                    (start, start + c.len_utf8()),
                ));
            }
        }
    }
    Ok(out)
}

/// Exact rational from a decimal literal.
fn parse_number(text: &str, span: Span) -> Result<BigRational, SpanError> {
    match text.split_once('.') {
        None => {
            let n: BigInt = text
                .parse()
                .map_err(|_| SpanError::new("invalid number", span))?;
            Ok(BigRational::from_integer(n))
        }
        Some((whole, frac)) => {
            let digits: BigInt = format!("{}{}", whole, frac)
                .parse()
                .map_err(|_| SpanError::new("invalid number", span))?;
            let den = BigInt::from(10u32).pow(frac.len() as u32);
            Ok(BigRational::new(digits, den))
        }
    }
}

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    input_len: usize,
    allow_jets: bool,
}

impl Parser {
    fn new(input: &str, allow_jets: bool) -> Result<Self, SpanError> {
        Ok(Parser {
            tokens: tokenize(input)?,
            pos: 0,
            input_len: input.len(),
            allow_jets,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> Span {
        self.tokens
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or((self.input_len, self.input_len))
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, SpanError> {
        if self.peek() == Some(&tok) {
            Ok(self.bump())
        } else {
            Err(SpanError::new(format!("expected {}", what), self.span()))
        }
    }

    fn parse_expr(&mut self) -> Result<Spanned, SpanError> {
        let mut lhs = self.parse_term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => Tok::Plus,
                Some(Tok::Minus) => Tok::Minus,
                _ => break,
            };
            self.bump();
            let rhs = self.parse_term()?;
            let span = (lhs.span.0, rhs.span.1);
            let node = if op == Tok::Plus {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Spanned::new(node, span);
        }
        Ok(lhs)
    }

    fn parse_term(&mut self) -> Result<Spanned, SpanError> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => Tok::Star,
                Some(Tok::Slash) => Tok::Slash,
                _ => break,
            };
            self.bump();
            let rhs = self.parse_unary()?;
            let span = (lhs.span.0, rhs.span.1);
            let node = if op == Tok::Star {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
            lhs = Spanned::new(node, span);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Spanned, SpanError> {
        if self.peek() == Some(&Tok::Minus) {
            let start = self.span().0;
            self.bump();
            let inner = self.parse_factor()?;
            let span = (start, inner.span.1);
            return Ok(Spanned::new(Expr::Neg(Box::new(inner)), span));
        }
        self.parse_factor()
    }

    fn parse_factor(&mut self) -> Result<Spanned, SpanError> {
        let base = self.parse_base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let (exp, end) = self.parse_exponent()?;
        let span = (base.span.0, end);
        Ok(Spanned::new(Expr::Pow(Box::new(base), exp), span))
    }

    /// `'-'? number` or `'(' '-'? number ('/' number)? ')'`.
    fn parse_exponent(&mut self) -> Result<(BigRational, usize), SpanError> {
        let parenthesized = self.peek() == Some(&Tok::LParen);
        if parenthesized {
            self.bump();
        }
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let num_tok = match self.peek() {
            Some(Tok::Num(_)) => self.bump(),
            _ => return Err(SpanError::new("expected a rational exponent", self.span())),
        };
        let text = match &num_tok.tok {
            Tok::Num(t) => t.clone(),
            _ => unreachable!(),
        };
        let mut value = parse_number(&text, num_tok.span)?;
        let mut end = num_tok.span.1;
        if parenthesized && self.peek() == Some(&Tok::Slash) {
            self.bump();
            let den_tok = match self.peek() {
                Some(Tok::Num(_)) => self.bump(),
                _ => return Err(SpanError::new("expected a denominator", self.span())),
            };
            let den_text = match &den_tok.tok {
                Tok::Num(t) => t.clone(),
                _ => unreachable!(),
            };
            let den = parse_number(&den_text, den_tok.span)?;
            if den.is_zero() {
                return Err(SpanError::new("zero denominator in exponent", den_tok.span));
            }
            value /= den;
            end = den_tok.span.1;
        }
        if parenthesized {
            let close = self.expect(Tok::RParen, "')'")?;
            end = close.span.1;
        }
        if negative {
            value = -value;
        }
        Ok((value, end))
    }

    fn parse_nat_argument(&mut self, what: &str) -> Result<(usize, usize), SpanError> {
        self.expect(Tok::LParen, "'('")?;
        let tok = match self.peek() {
            Some(Tok::Num(_)) => self.bump(),
            _ => {
                return Err(SpanError::new(
                    format!("expected a level index for {}", what),
                    self.span(),
                ))
            }
        };
        let text = match &tok.tok {
            Tok::Num(t) => t.clone(),
            _ => unreachable!(),
        };
        if text.contains('.') {
            return Err(SpanError::new("level index must be an integer", tok.span));
        }
        let n: usize = text
            .parse()
            .map_err(|_| SpanError::new("level index out of range", tok.span))?;
        if n > MAX_LEVEL {
            return Err(SpanError::new(
                format!("level index capped at {}", MAX_LEVEL),
                tok.span,
            ));
        }
        let close = self.expect(Tok::RParen, "')'")?;
        Ok((n, close.span.1))
    }

    fn parse_base(&mut self) -> Result<Spanned, SpanError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Num(text)) => {
                let tok = self.bump();
                let value = parse_number(&text, tok.span)?;
                Ok(Spanned::new(Expr::Rational(value), tok.span))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.parse_expr()?;
                let close = self.expect(Tok::RParen, "')'")?;
                Ok(Spanned::new(inner.node, (span.0, close.span.1)))
            }
            Some(Tok::Ident(name)) => {
                let tok = self.bump();
                self.parse_named(&name, tok.span)
            }
            _ => Err(SpanError::new("expected an expression", span)),
        }
    }

    fn parse_named(&mut self, name: &str, span: Span) -> Result<Spanned, SpanError> {
        match name {
            "x" => Ok(Spanned::new(Expr::Var, span)),
            "log" => {
                self.expect(Tok::LParen, "'('")?;
                let inner = self.parse_expr()?;
                let close = self.expect(Tok::RParen, "')'")?;
                Ok(Spanned::new(
                    Expr::Log(Box::new(inner)),
                    (span.0, close.span.1),
                ))
            }
            "gamma" | "omega" | "lambda" | "sigma_gamma" => {
                let kind = match name {
                    "gamma" => SeqKind::Gamma,
                    "omega" => SeqKind::Omega,
                    "lambda" => SeqKind::Lambda,
                    _ => SeqKind::SigmaGamma,
                };
                let (n, end) = self.parse_nat_argument(name)?;
                Ok(Spanned::new(Expr::Seq(kind, n), (span.0, end)))
            }
            "Y" => {
                if !self.allow_jets {
                    return Err(SpanError::new(
                        "differential variable Y is not allowed in a germ expression",
                        span,
                    ));
                }
                let mut order = 0;
                let mut end = span.1;
                while self.peek() == Some(&Tok::Prime) {
                    let t = self.bump();
                    order += 1;
                    end = t.span.1;
                    if order > MAX_JET_ORDER {
                        return Err(SpanError::new(
                            format!("derivative order capped at {}", MAX_JET_ORDER),
                            (span.0, end),
                        ));
                    }
                }
                Ok(Spanned::new(Expr::Jet(order), (span.0, end)))
            }
            _ => {
                if let Some(rest) = name.strip_prefix('l') {
                    if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                        let level: usize = rest
                            .parse()
                            .map_err(|_| SpanError::new("tower level out of range", span))?;
                        if level > MAX_LEVEL {
                            return Err(SpanError::new(
                                format!("tower level capped at {}", MAX_LEVEL),
                                span,
                            ));
                        }
                        return Ok(Spanned::new(
                            if level == 0 {
                                Expr::Var
                            } else {
                                Expr::Tower(level)
                            },
                            span,
                        ));
                    }
                }
                Err(SpanError::new(format!("unknown name '{}'", name), span))
            }
        }
    }

    fn finish(mut self, what: &str) -> Result<Spanned, SpanError> {
        let expr = self.parse_expr()?;
        if self.pos != self.tokens.len() {
            return Err(SpanError::new(
                format!("unexpected trailing input in {}", what),
                self.span(),
            ));
        }
        Ok(expr)
    }
}

/// Parses a tower-germ expression.
pub fn parse(input: &str) -> Result<Spanned, SpanError> {
    Parser::new(input, false)?.finish("germ expression")
}

/// Parses a differential-polynomial expression in `Y, Y', Y'', ...`.
pub fn parse_diffpoly(input: &str) -> Result<Spanned, SpanError> {
    Parser::new(input, true)?.finish("differential polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_basic_shapes() {
        assert!(parse("1/(4*x^2)").is_ok());
        assert!(parse("omega(2)/4 + gamma(2)^2/4").is_ok());
        assert!(parse("log(log(x))").is_ok());
        assert!(parse("x^(1/2)").is_ok());
        assert!(parse("x^-2").is_ok());
        assert!(parse("0.25").is_ok());
        assert!(parse("sigma_gamma(3)").is_ok());
        assert!(parse("l0 + l1 + l2").is_ok());
    }

    #[test]
    fn decimal_literals_are_exact() {
        let e = parse("0.25").unwrap();
        assert_eq!(e.node, Expr::Rational(rat(1, 4)));
    }

    #[test]
    fn operator_precedence() {
        // 1 + 2*x parses the product first.
        let e = parse("1 + 2*x").unwrap();
        match e.node {
            Expr::Add(lhs, rhs) => {
                assert!(matches!(lhs.node, Expr::Rational(_)));
                assert!(matches!(rhs.node, Expr::Mul(_, _)));
            }
            other => panic!("unexpected {:?}", other),
        }
        // -x^2 negates the power.
        let e = parse("-x^2").unwrap();
        assert!(matches!(e.node, Expr::Neg(_)));
    }

    #[test]
    fn error_spans_point_into_input() {
        let input = "omega(2) + ?";
        let err = parse(input).unwrap_err();
        assert!(err.span.0 < input.len());
        assert!(err.span.1 <= input.len());
        let err = parse("gamma(x)").unwrap_err();
        assert!(err.span.0 >= 6);
    }

    #[test]
    fn jets_only_in_diffpoly_mode() {
        assert!(parse("Y'' + x*Y").is_err());
        let e = parse_diffpoly("4*Y'' + omega(2)*Y").unwrap();
        assert!(matches!(e.node, Expr::Add(_, _)));
        assert!(parse_diffpoly(&format!("Y{}", "'".repeat(9))).is_err());
    }

    #[test]
    fn rejects_trailing_input_and_bad_tokens() {
        assert!(parse("x x").is_err());
        assert!(parse("x^").is_err());
        assert!(parse("l").is_err());
        assert!(parse("1.").is_err());
        assert!(parse("x^(1/0)").is_err());
    }

    #[test]
    fn one_is_not_a_tower_level_name() {
        // "l01" is l1; "lfoo" is unknown.
        assert!(parse("l01").is_ok());
        assert!(parse("lfoo").is_err());
    }
}
