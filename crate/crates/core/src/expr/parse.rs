//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := ("-")? base ("^" sint)? ;
//! base   := number | ident | "(" expr ")" | ("exp"|"log") "(" expr ")" ;
//! ```
//!
//! `-a^2` parses as `-(a^2)`.

use super::chart::Chart;
use super::tree::{Expr, Node};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn parse(text: &str, chart: &Chart) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        chart,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else if self.pos >= self.src.len() {
            Err(self.error(&format!("expected `{}`, found end of input", c as char)))
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = lhs + self.term()?;
            } else if self.eat(b'-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = lhs * self.factor()?;
            } else if self.eat(b'/') {
                lhs = lhs / self.factor()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let negate = self.eat(b'-');
        let mut e = self.base()?;
        if self.eat(b'^') {
            e = e.powi(self.sint()?);
        }
        Ok(if negate { -e } else { e })
    }

    fn sint(&mut self) -> Result<i32> {
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: i32 = digits.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "exponent out of range".into(),
        })?;
        Ok(if neg { -n } else { n })
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match ident {
                    "exp" | "log" => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        Ok(if ident == "exp" { arg.exp() } else { arg.log() })
                    }
                    _ => self
                        .chart
                        .index_of(ident)
                        .map(Expr::coord)
                        .ok_or_else(|| Error::UnknownIdentifier(ident.to_string())),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let r = Rational::parse_decimal(text).map_err(|e| match e {
            Error::Overflow => Error::Overflow,
            _ => Error::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            },
        })?;
        Ok(Expr::new(Node::Const(r)))
    }
}
