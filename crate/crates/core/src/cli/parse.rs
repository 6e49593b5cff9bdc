//! Recursive-descent parser for invariant polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | VAR | '(' expr ')'
//! VAR    := 'c' INT | 'ch' INT
//! ```
//!
//! Chern-class variables `c_k` are rewritten into Chern-character coordinates
//! when the tree is lowered to a polynomial.

use num_bigint::BigInt;
use thiserror::Error;

use crate::charclass::{ch_to_chern, ChVector};
use crate::error::Result;
use crate::exact::{Poly, Rational};
use crate::invariants::{invariant_ring, InvPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },

    #[error("variable `{name}` at byte {offset} is out of range 1..={max}")]
    IndexOutOfRange { name: String, offset: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// `c_k`
    Chern,
    /// `ch_k`
    Character,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Literal(Rational),
    Var { kind: VarKind, index: usize, offset: usize },
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> std::result::Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = match b {
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += 1;
        } else if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let value = text[start..i].parse::<BigInt>().expect("digits parse as an integer");
            out.push((Token::Int(value), start));
        } else if b.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Token::Ident(text[start..i].to_string()), start));
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(ParseError::Syntax {
                offset: start,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, message: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> std::result::Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.bump();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<ExprAst, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Token::Star {
            self.bump();
            lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> std::result::Result<ExprAst, ParseError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Token::Int(e), offset) => {
                let exp = u32::try_from(&e).map_err(|_| ParseError::Syntax {
                    offset,
                    message: "exponent too large".into(),
                })?;
                Ok(ExprAst::Pow(Box::new(base), exp))
            }
            (_, offset) => Err(ParseError::Syntax {
                offset,
                message: "exponent must be a nonnegative integer literal".into(),
            }),
        }
    }

    fn atom(&mut self) -> std::result::Result<ExprAst, ParseError> {
        match self.bump() {
            (Token::Int(numer), _) => {
                if *self.peek() != Token::Slash {
                    return Ok(ExprAst::Literal(Rational::from_integer(numer)));
                }
                self.bump();
                match self.bump() {
                    (Token::Int(denom), offset) => {
                        if denom == BigInt::from(0) {
                            return Err(ParseError::Syntax {
                                offset,
                                message: "zero denominator".into(),
                            });
                        }
                        Ok(ExprAst::Literal(Rational::new(numer, denom)))
                    }
                    (_, offset) => Err(ParseError::Syntax {
                        offset,
                        message: "`/` is only allowed between integer literals".into(),
                    }),
                }
            }
            (Token::Ident(name), offset) => parse_variable(&name, offset),
            (Token::LParen, _) => {
                let inner = self.expr()?;
                if *self.peek() != Token::RParen {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            (Token::End, offset) => Err(ParseError::Syntax {
                offset,
                message: "unexpected end of input".into(),
            }),
            (_, offset) => Err(ParseError::Syntax {
                offset,
                message: "expected a number, variable or `(`".into(),
            }),
        }
    }
}

fn parse_variable(name: &str, offset: usize) -> std::result::Result<ExprAst, ParseError> {
    let unknown = || ParseError::UnknownVariable {
        name: name.to_string(),
        offset,
    };
    let (kind, digits) = if let Some(rest) = name.strip_prefix("ch") {
        (VarKind::Character, rest)
    } else if let Some(rest) = name.strip_prefix('c') {
        (VarKind::Chern, rest)
    } else {
        return Err(unknown());
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0')) {
        return Err(unknown());
    }
    let index = digits.parse::<usize>().map_err(|_| unknown())?;
    Ok(ExprAst::Var { kind, index, offset })
}

/// Parses the expression into a syntax tree without any range checks.
pub fn parse_expr(text: &str) -> std::result::Result<ExprAst, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let ast = parser.expr()?;
    if *parser.peek() != Token::End {
        return parser.error("unexpected trailing input");
    }
    Ok(ast)
}

fn lower(ast: &ExprAst, n: usize, chern: &[Poly], ch: &[Poly]) -> std::result::Result<Poly, ParseError> {
    let ring = ch[0].ring();
    Ok(match ast {
        ExprAst::Literal(q) => Poly::constant(ring, q.clone()),
        ExprAst::Var { kind, index, offset } => {
            if *index == 0 || *index > n + 1 {
                let prefix = if *kind == VarKind::Chern { "c" } else { "ch" };
                return Err(ParseError::IndexOutOfRange {
                    name: format!("{prefix}{index}"),
                    offset: *offset,
                    max: n + 1,
                });
            }
            match kind {
                VarKind::Chern => chern[*index].clone(),
                VarKind::Character => ch[*index - 1].clone(),
            }
        }
        ExprAst::Neg(a) => -lower(a, n, chern, ch)?,
        ExprAst::Add(a, b) => lower(a, n, chern, ch)? + lower(b, n, chern, ch)?,
        ExprAst::Sub(a, b) => lower(a, n, chern, ch)? - lower(b, n, chern, ch)?,
        ExprAst::Mul(a, b) => lower(a, n, chern, ch)? * lower(b, n, chern, ch)?,
        ExprAst::Pow(a, e) => lower(a, n, chern, ch)?.pow(*e),
    })
}

/// Parses an invariant polynomial in `c1..c{n+1}` / `ch1..ch{n+1}` and checks
/// that its weighted degree is at most `n`.
pub fn parse_invariant_poly(text: &str, n: usize) -> Result<InvPoly> {
    if n == 0 {
        return Err(crate::error::Error::NonPositiveDimension(0));
    }
    let ast = parse_expr(text)?;
    let ring = invariant_ring(n);
    let ch: Vec<Poly> = (0..=n).map(|i| Poly::var(&ring, i)).collect();
    let chern = ch_to_chern(&ChVector::with_rank(&ring, n as u32 + 1, ch.clone()));
    let poly = lower(&ast, n, &chern, &ch)?;
    InvPoly::new(n, poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn ch(n: usize, k: usize) -> Poly {
        Poly::var(&invariant_ring(n), k - 1)
    }

    #[test]
    fn single_variable() {
        assert_eq!(*parse_invariant_poly("ch2", 2).unwrap().poly(), ch(2, 2));
    }

    #[test]
    fn chern_classes_are_rewritten() {
        let expected = (ch(2, 1).pow(2) - ch(2, 2).scale(&int(2))).scale(&rat(1, 2));
        assert_eq!(*parse_invariant_poly("c2", 2).unwrap().poly(), expected);
        assert_eq!(*parse_invariant_poly("c1", 2).unwrap().poly(), ch(2, 1));
    }

    #[test]
    fn degree_bound_is_enforced() {
        assert!(matches!(
            parse_invariant_poly("c1*c3", 3),
            Err(Error::DegreeTooHigh { got: 4, n: 3 })
        ));
        // cancels down to degree 0
        assert_eq!(
            parse_invariant_poly("ch1^5 - ch1^5 + 2", 1).unwrap().poly().as_constant(),
            Some(int(2))
        );
    }

    #[test]
    fn precedence() {
        let p = parse_invariant_poly("-ch1^2 + 2*ch2 - (ch1 - 1)*3", 2).unwrap();
        let expected = -ch(2, 1).pow(2) + ch(2, 2).scale(&int(2)) - ch(2, 1).scale(&int(3))
            + Poly::constant(&invariant_ring(2), int(3));
        assert_eq!(*p.poly(), expected);
        let p = parse_invariant_poly("--3/4", 1).unwrap();
        assert_eq!(p.poly().as_constant(), Some(rat(3, 4)));
        assert_eq!(parse_invariant_poly("2^3", 1).unwrap().poly().as_constant(), Some(int(8)));
    }

    #[test]
    fn error_offsets() {
        let err = |t: &str, n| match parse_invariant_poly(t, n) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(
            err("ch1 + ", 2),
            ParseError::Syntax {
                offset: 6,
                message: "unexpected end of input".into()
            }
        );
        assert!(matches!(err("ch1 $ 2", 2), ParseError::Syntax { offset: 4, .. }));
        assert!(matches!(err("(ch1", 2), ParseError::Syntax { offset: 4, .. }));
        assert!(matches!(err("ch1 ch2", 2), ParseError::Syntax { offset: 4, .. }));
        assert!(matches!(err("ch1^ch2", 2), ParseError::Syntax { offset: 4, .. }));
        assert!(matches!(err("ch1/2", 2), ParseError::Syntax { offset: 3, .. }));
        assert!(matches!(err("1/0", 2), ParseError::Syntax { offset: 2, .. }));
        assert_eq!(
            err("2*x1", 2),
            ParseError::UnknownVariable {
                name: "x1".into(),
                offset: 2
            }
        );
        assert!(matches!(err("c", 2), ParseError::UnknownVariable { .. }));
        assert!(matches!(err("ch01", 2), ParseError::UnknownVariable { .. }));
        assert_eq!(
            err("1 + ch4", 2),
            ParseError::IndexOutOfRange {
                name: "ch4".into(),
                offset: 4,
                max: 3
            }
        );
        assert!(matches!(err("c0", 2), ParseError::IndexOutOfRange { .. }));
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            (0i64..9).prop_map(|v| v.to_string()),
            (1i64..9, 1i64..5).prop_map(|(p, q)| format!("{p}/{q}")),
            (1usize..5).prop_map(|k| format!("ch{k}")),
            (1usize..5).prop_map(|k| format!("c{k}")),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
                inner.clone().prop_map(|a| format!("-{a}")),
                (inner, 0u32..3).prop_map(|(a, e)| format!("({a})^{e}")),
            ]
        })
    }

    proptest! {
        #[test]
        fn canonical_print_round_trip(text in arb_expr()) {
            // Large n so the degree bound rarely bites; skip when it does.
            if let Ok(p) = parse_invariant_poly(&text, 12) {
                let printed = p.to_string();
                let again = parse_invariant_poly(&printed, 12).unwrap();
                prop_assert_eq!(&again, &p);
                prop_assert_eq!(again.to_string(), printed);
            }
        }
    }
}
