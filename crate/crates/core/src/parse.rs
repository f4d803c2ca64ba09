//! Text syntax for polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```
//!
//! Integer literals of any length are reduced modulo the characteristic.
//! Columns in error messages are 1-based character offsets.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{PolyRing, Polynomial};

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    ring: &'a Arc<PolyRing>,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        column,
        message: message.into(),
    }
}

impl<'a> Parser<'a> {
    fn column(&self) -> usize {
        self.chars.get(self.idx).map_or(self.chars.len(), |c| c.0) + 1
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.idx).is_some_and(|c| c.1.is_whitespace()) {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.idx).map(|c| c.1)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut sign = match self.peek() {
            Some('-') => {
                self.idx += 1;
                -1
            }
            Some('+') => {
                self.idx += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t)? } else { acc.add(&t)? };
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => return Ok(acc),
            }
            self.idx += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.idx += 1;
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.idx += 1;
            self.skip_ws();
            let col = self.column();
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(syntax(col, "expected exponent after `^`"));
            }
            let e: u64 = digits.parse().map_err(|_| Error::ExponentOverflow)?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.idx) {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.idx += 1;
        }
        s
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let col = {
            self.skip_ws();
            self.column()
        };
        match self.peek() {
            Some('(') => {
                self.idx += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(syntax(self.column(), "expected `)`"));
                }
                self.idx += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let p = self.ring.characteristic() as u64;
                let v = digits
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Polynomial::constant(self.ring, v as i64))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => Err(Error::UnknownVariable { name, column: col }),
                }
            }
            Some(c) => Err(syntax(col, format!("unexpected `{c}`"))),
            None => Err(syntax(col, "unexpected end of input")),
        }
    }
}

pub fn parse_polynomial(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    let mut parser = Parser {
        chars: text.chars().enumerate().collect(),
        idx: 0,
        ring,
    };
    let f = parser.expr()?;
    if let Some(c) = parser.peek() {
        return Err(syntax(parser.column(), format!("unexpected `{c}`")));
    }
    Ok(f)
}
