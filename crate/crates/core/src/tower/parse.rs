//! Expression parser for field elements.
//!
//! Grammar, loosest to tightest binding:
//!   expr  := term (('+' | '-') term)*
//!   term  := unary (('*' | '/') unary)*
//!   unary := '-' unary | power
//!   power := atom ('^' INT)?
//!   atom  := INT | IDENT | '(' expr ')'
//! Integer literals are unbounded, exponents must be nonnegative machine
//! integers, and unary minus binds more loosely than '^', so "-t^2" is
//! -(t^2). Rationals are spelled as divisions. Formatting an element and
//! reparsing it reproduces the identical canonical encoding.

use std::sync::Arc;

use num_bigint::BigInt;

use super::element::FieldElement;
use super::{FieldError, Tower};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LPar,
    RPar,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, FieldError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LPar));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RPar));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &input[start..i];
                toks.push((start, Tok::Int(lit.parse().expect("digit run"))));
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(input[start..i].to_string())));
            }
            _ => {
                return Err(FieldError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", input[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    tower: &'a Arc<Tower>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.checked_add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.checked_mul(&self.unary()?)?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    acc = acc.checked_div(&self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElement, FieldError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<FieldElement, FieldError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some((_, Tok::Int(e))) => {
                    let e: u32 = e.try_into().map_err(|_| FieldError::Syntax {
                        pos,
                        msg: "exponent too large".to_string(),
                    })?;
                    return base.pow(e);
                }
                _ => {
                    return Err(FieldError::Syntax {
                        pos,
                        msg: "expected a nonnegative integer exponent after `^`".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElement, FieldError> {
        let pos = self.here();
        match self.bump() {
            Some((_, Tok::Int(v))) => Ok(self.tower.from_bigint(v)),
            Some((_, Tok::Ident(name))) => self.tower.generator(&name),
            Some((_, Tok::LPar)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Tok::RPar)) => Ok(inner),
                    _ => Err(FieldError::Syntax {
                        pos: self.here(),
                        msg: "expected `)`".to_string(),
                    }),
                }
            }
            _ => Err(FieldError::Syntax {
                pos,
                msg: "expected an integer, generator or parenthesized expression".to_string(),
            }),
        }
    }
}

/// Parse an expression into a canonical element of the given tower.
pub fn parse_element(expr: &str, tower: &Arc<Tower>) -> Result<FieldElement, FieldError> {
    let toks = lex(expr)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: expr.len(),
        tower,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(FieldError::Syntax {
            pos: p.here(),
            msg: "unexpected trailing input".to_string(),
        });
    }
    Ok(e)
}
