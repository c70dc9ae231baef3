//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | number 'i' | 'i' | identifier | '(' expr ')'
//! ```
//!
//! `i` denotes the imaginary unit unless it is one of the declared
//! variables. Numbers accept a decimal point and an `e` exponent.

use alloc::format;
use alloc::string::{String, ToString};

use crate::poly::Polynomial;
use crate::{Error, Result, C64};

pub fn parse_polynomial<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<Polynomial> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        variables,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a, S> {
    src: &'a [u8],
    pos: usize,
    variables: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn n(&self) -> usize {
        self.variables.len()
    }

    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let position = {
            self.skip_ws();
            self.pos
        };
        let parenthesized = self.peek() == Some(b'(');
        if parenthesized {
            self.pos += 1;
        }
        if self.peek() == Some(b'-') {
            return Err(Error::NegativeExponent { position });
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a nonnegative integer exponent"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let exponent: u32 = digits
            .parse()
            .map_err(|_| self.syntax("exponent out of range"))?;
        if parenthesized {
            if self.peek() != Some(b')') {
                return Err(self.syntax("expected `)`"));
            }
            self.pos += 1;
        }
        Ok(base.pow(exponent))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' => self.number(),
            Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => self.identifier(),
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        let bytes = self.src;
        let mut end = self.pos;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let literal = core::str::from_utf8(&bytes[start..end]).unwrap();
        let value: f64 = literal
            .parse()
            .map_err(|_| self.syntax(&format!("invalid number `{literal}`")))?;
        self.pos = end;
        let imaginary = self.pos < bytes.len()
            && bytes[self.pos] == b'i'
            && !bytes
                .get(self.pos + 1)
                .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
        let coefficient = if imaginary {
            self.pos += 1;
            C64::new(0.0, value)
        } else {
            C64::new(value, 0.0)
        };
        Ok(Polynomial::constant(self.n(), coefficient))
    }

    fn identifier(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if let Some(index) = self.variables.iter().position(|v| v.as_ref() == name) {
            return Ok(Polynomial::variable(self.n(), index));
        }
        if name == "i" {
            return Ok(Polynomial::constant(self.n(), C64::new(0.0, 1.0)));
        }
        Err(Error::UnknownVariable {
            name: String::from(name),
            position: start,
        })
    }
}
