//! Closed-form expression trees for custom warping functions.
//!
//! The grammar is deliberately small: the variable `r`, numeric literals,
//! `+ - * / ^`, parentheses, and the functions `ln`, `exp`, `sqrt`.
//! Anything else is rejected at parse time.

use std::fmt;

use crate::error::Error;
use crate::jet::Jet2;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var,
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, Error> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input at byte {} in expression '{src}'",
                p.pos
            )));
        }
        Ok(e)
    }

    pub fn eval(&self, r: Jet2) -> Jet2 {
        match self {
            Expr::Var => r,
            Expr::Const(c) => Jet2::constant(*c),
            Expr::Add(a, b) => a.eval(r) + b.eval(r),
            Expr::Sub(a, b) => a.eval(r) - b.eval(r),
            Expr::Mul(a, b) => a.eval(r) * b.eval(r),
            Expr::Div(a, b) => a.eval(r) / b.eval(r),
            Expr::Pow(a, b) => a.eval(r).pow(b.eval(r)),
            Expr::Ln(a) => a.eval(r).ln(),
            Expr::Exp(a) => a.eval(r).exp(),
            Expr::Sqrt(a) => a.eval(r).sqrt(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "r"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // '^' binds tighter than '*' and is right-associative.
    // unary minus binds looser than ^, so -r^2 is -(r^2)
    fn factor(&mut self) -> Result<Expr, Error> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(Expr::Sub(Box::new(Expr::Const(0.0)), Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            other => Err(Error::Parse(format!("unexpected token {other:?} in expression"))),
        }
    }

    fn number(&mut self) -> Result<Expr, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_digit() || c == b'.' {
                self.pos += 1;
            } else if (c == b'e' || c == b'E')
                && self.pos > start
                && self
                    .src
                    .get(self.pos + 1)
                    .is_some_and(|&n| n.is_ascii_digit() || n == b'+' || n == b'-')
            {
                self.pos += 2;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| Error::Parse(format!("bad numeric literal '{text}'")))
    }

    fn ident(&mut self) -> Result<Expr, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_owned();
        match name.as_str() {
            "r" => Ok(Expr::Var),
            "ln" | "exp" | "sqrt" => {
                if self.peek() != Some(b'(') {
                    return Err(Error::Parse(format!("expected '(' after '{name}'")));
                }
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                self.pos += 1;
                let arg = Box::new(arg);
                Ok(match name.as_str() {
                    "ln" => Expr::Ln(arg),
                    "exp" => Expr::Exp(arg),
                    _ => Expr::Sqrt(arg),
                })
            }
            _ => Err(Error::Parse(format!("unknown identifier '{name}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_evaluates() {
        let e = Expr::parse("sqrt(0.6931471805599453) * r / ln(2 + r^2) ^ 0.5").unwrap();
        let j = e.eval(Jet2::variable(1.0));
        let expected = (2.0f64.ln()).sqrt() * 1.0 / 3.0f64.ln().sqrt();
        assert!((j.value - expected).abs() < 1e-14);
    }

    #[test]
    fn rejects_unknown_functions() {
        assert!(Expr::parse("sin(r)").is_err());
        assert!(Expr::parse("r + q").is_err());
        assert!(Expr::parse("r + ").is_err());
    }

    #[test]
    fn unary_minus_and_precedence() {
        let e = Expr::parse("-r^2 + 3*r").unwrap();
        let j = e.eval(Jet2::variable(2.0));
        assert_eq!(j.value, 2.0);
        assert_eq!(j.d1, -1.0);
        assert_eq!(j.d2, -2.0);
    }
}
