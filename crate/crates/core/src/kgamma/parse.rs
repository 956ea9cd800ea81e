//! Integer polynomial expressions in `x1..xn` or `y1..yn`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | var | '(' expr ')'
//! ```
//!
//! A single expression uses either x-variables or y-variables, never both.

use num_bigint::BigInt;

use super::ring::{RingElement, TruncatedPolyRing};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(char, usize),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn lex(src: &str, factors: usize) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::Open,
            b')' => Tok::Close,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
                continue;
            }
            b'x' | b'y' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &src[start + 1..i];
                let idx: usize = digits.parse().map_err(|_| Error::Parse {
                    offset: start,
                    message: format!("variable '{}' needs an index", c as char),
                })?;
                if idx == 0 || idx > factors {
                    return Err(Error::Parse {
                        offset: start,
                        message: format!("variable index {idx} outside 1..={factors}"),
                    });
                }
                out.push((Tok::Var(c as char, idx - 1), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().expect("non-empty");
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a TruncatedPolyRing,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    family: Option<char>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<RingElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.unary()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RingElement> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.ring.sub(&self.ring.zero(), &v));
        }
        self.power()
    }

    fn power(&mut self) -> Result<RingElement> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let e: u64 = n
                    .try_into()
                    .or_else(|_| self.err("exponent too large"))?;
                self.pos += 1;
                Ok(self.ring.pow(&base, e))
            }
            _ => self.err("expected a non-negative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<RingElement> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(self.ring.constant(n))
            }
            Some(Tok::Var(fam, j)) => {
                match self.family {
                    Some(f) if f != fam => {
                        return self.err(format!(
                            "mixing x- and y-variables is not allowed (found {fam}{} after {f}-variables)",
                            j + 1
                        ))
                    }
                    _ => self.family = Some(fam),
                }
                self.pos += 1;
                Ok(if fam == 'x' { self.ring.x(j) } else { self.ring.y(j) })
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(_) => self.err("expected a number, a variable or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses and evaluates `src` in `ring`.
pub fn parse_element(ring: &TruncatedPolyRing, src: &str) -> Result<RingElement> {
    let toks = lex(src, ring.factors())?;
    let mut p = Parser {
        ring,
        toks,
        pos: 0,
        end: src.len(),
        family: None,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> TruncatedPolyRing {
        TruncatedPolyRing::new(vec![2, 2, 2, 2]).unwrap()
    }

    #[test]
    fn parses_y_products() {
        let r = ring();
        let e = parse_element(&r, "4*y1*y2*y3*y4").unwrap();
        assert_eq!(e, r.y_monomial(&[1, 1, 1, 1], 4));
        assert!(parse_element(&r, "y1^2").unwrap().is_zero());
        assert!(parse_element(&r, "0").unwrap().is_zero());
    }

    #[test]
    fn x_and_y_agree() {
        let r = ring();
        let a = parse_element(&r, "2*x1*x2 - 2").unwrap();
        let b = parse_element(&r, "2*(y1 + y2 + y1*y2)").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_element(&r, "-(-3) + x1^0").unwrap(), r.constant(4));
    }

    #[test]
    fn reports_offsets() {
        let r = ring();
        let err = parse_element(&r, "x1 + y2").unwrap_err();
        assert_eq!(err, Error::Parse { offset: 5, message: err_msg(&err) });
        match parse_element(&r, "2 * y5") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_element(&r, "(y1 + 2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("unexpected {other:?}"),
        }
        match parse_element(&r, "y1 $ 2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_element(&r, "y1 y2").is_err());
        assert!(parse_element(&r, "").is_err());
    }

    fn err_msg(e: &Error) -> String {
        match e {
            Error::Parse { message, .. } => message.clone(),
            _ => String::new(),
        }
    }
}
