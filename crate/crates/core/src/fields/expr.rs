//! Recursive descent parser for field elements written as arithmetic
//! expressions: integers, single-letter symbols, `+ - * / ^`, parentheses and
//! implicit multiplication (`2t`, `3i`, `(t+1)(t+2)`).

use num_bigint::BigInt;

use super::GlobalField;
use crate::error::{Error, Result};

pub(crate) struct ExprParser<'a, F: GlobalField> {
    field: &'a F,
    src: Vec<char>,
    pos: usize,
    number: &'a dyn Fn(&BigInt) -> F::Elem,
    symbol: &'a dyn Fn(char) -> Option<F::Elem>,
}

impl<'a, F: GlobalField> ExprParser<'a, F> {
    pub(crate) fn parse(
        field: &'a F,
        s: &str,
        number: &'a dyn Fn(&BigInt) -> F::Elem,
        symbol: &'a dyn Fn(char) -> Option<F::Elem>,
    ) -> Result<F::Elem> {
        let mut p = ExprParser { field, src: s.chars().collect(), pos: 0, number, symbol };
        if p.peek().is_none() {
            return Err(Error::Parse("empty expression".into()));
        }
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    fn err(&self, msg: &str) -> Error {
        let s: String = self.src.iter().collect();
        Error::Parse(format!("{msg} at position {} of {s:?}", self.pos))
    }

    fn peek(&mut self) -> Option<char> {
        while self.pos < self.src.len() && self.src[self.pos].is_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<F::Elem> {
        let k = self.field;
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                k.neg(&self.term()?)
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { k.add(&acc, &t) } else { k.sub(&acc, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<F::Elem> {
        let k = self.field;
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = k.mul(&acc, &self.power()?);
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    acc = k.div(&acc, &d).map_err(|_| self.err("division by zero"))?;
                }
                Some(c) if c == '(' || c.is_ascii_alphanumeric() => acc = k.mul(&acc, &self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<F::Elem> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = if self.peek() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e: i64 = i64::try_from(e).map_err(|_| self.err("exponent too large"))?;
            let e = if neg { -e } else { e };
            return self.field.pow(&base, e).map_err(|_| self.err("negative power of zero"));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.peek();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits: String = self.src[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.err("expected a number"))
    }

    fn atom(&mut self) -> Result<F::Elem> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok((self.number)(&n))
            }
            Some(c) => {
                self.pos += 1;
                (self.symbol)(c).ok_or_else(|| {
                    self.pos -= 1;
                    self.err(&format!("unexpected symbol {c:?}"))
                })
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}
