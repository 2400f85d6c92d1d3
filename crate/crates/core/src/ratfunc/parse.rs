//! Precedence-climbing parser for rational expressions in `z`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'z' | 'i' | 'a' | '(' expr ')'
//! ```

use rug::Integer;

use super::{Poly, RatFunc};
use crate::error::{Error, Result};
use crate::exactfield::ExactComplex;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(Integer),
    Z,
    I,
    A,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut p = 0;
    while p < b.len() {
        let c = b[p];
        if c.is_ascii_whitespace() {
            p += 1;
            continue;
        }
        let start = p;
        let tok = match c {
            b'0'..=b'9' => {
                while p < b.len() && b[p].is_ascii_digit() {
                    p += 1;
                }
                out.push((Tok::Int(s[start..p].parse().unwrap()), start));
                continue;
            }
            b'z' => Tok::Z,
            b'i' => Tok::I,
            b'a' => Tok::A,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = s[p..].chars().next().unwrap();
                return Err(syntax(p, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        p += 1;
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    acc = acc.div(&self.unary()?)?;
                }
                Tok::Int(_) | Tok::Z | Tok::I | Tok::A | Tok::LParen => {
                    return Err(syntax(self.at(), "implicit multiplication is not allowed; use '*'"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.at();
        match self.bump() {
            Tok::Int(n) => {
                let e = n.to_u32().ok_or_else(|| syntax(at, "exponent too large"))?;
                if *self.peek() == Tok::Caret {
                    return Err(syntax(self.at(), "chained exponents need parentheses"));
                }
                Ok(base.pow(e))
            }
            _ => Err(syntax(at, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<RatFunc> {
        let at = self.at();
        match self.bump() {
            Tok::Int(n) => Ok(RatFunc::constant(ExactComplex::from_rational(n.into()))),
            Tok::Z => Ok(RatFunc::from_poly(Poly::z())),
            Tok::I => Ok(RatFunc::constant(ExactComplex::i())),
            Tok::A => Ok(RatFunc::constant(ExactComplex::a())),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.at();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    _ => Err(syntax(close, "expected ')'")),
                }
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            t => Err(syntax(at, format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses an expression into a reduced rational function.
pub fn parse(s: &str) -> Result<RatFunc> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let r = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.at(), "unexpected trailing input"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        assert_eq!(parse("z^2-1").unwrap(), RatFunc::from_poly(Poly::from_ints(&[-1, 0, 1])));
        assert_eq!(parse("-z^2").unwrap(), RatFunc::from_poly(Poly::from_ints(&[0, 0, -1])));
        assert_eq!(parse("(-z)^2").unwrap(), RatFunc::from_poly(Poly::from_ints(&[0, 0, 1])));
        assert_eq!(parse(" 2 * ( z + 1 ) ").unwrap(), RatFunc::from_poly(Poly::from_ints(&[2, 2])));
        assert_eq!(parse("z^0").unwrap(), RatFunc::constant(ExactComplex::one()));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("2z"),
            Err(Error::Syntax {
                position: 1,
                message: "implicit multiplication is not allowed; use '*'".into()
            })
        );
        assert!(matches!(parse("z+"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse("(z"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse("z^-1"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse("z $ 1"), Err(Error::Syntax { position: 2, .. })));
        assert_eq!(parse("1/(z-z)"), Err(Error::DivisionByZero));
    }
}
