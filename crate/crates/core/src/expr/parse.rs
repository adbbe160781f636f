//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Names: `x y xi xi1 xi2 eps pi i jxi`. Functions: `exp log sin cos sqrt abs
//! sign step pow bump bump2 jb plateau`.

use super::{Expr, Var};
use crate::util::prelude::*;
use crate::{Error, Result};

pub(super) fn parse(source: &str) -> Result<Expr> {
    let mut p = Parser { src: source.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.to_string() }
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

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.eat(b'/') {
                acc = acc / self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(base.pow(exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    while self.eat(b',') {
                        args.push(self.expr()?);
                    }
                    if !self.eat(b')') {
                        return Err(self.error("expected ')' after arguments"));
                    }
                    let at = start;
                    return call(name, args).map_err(|m| Error::Parse { position: at, message: m });
                }
                Ok(match name {
                    "x" => Expr::var(Var::X),
                    "y" => Expr::var(Var::Y),
                    "xi" | "xi1" => Expr::var(Var::Xi),
                    "xi2" => Expr::var(Var::Xi2),
                    "eps" => Expr::var(Var::Eps),
                    "pi" => Expr::constant(core::f64::consts::PI),
                    "i" => Expr::imaginary_unit(),
                    "jxi" => Expr::japanese_xi(),
                    _ => {
                        self.pos = start;
                        return Err(self.error(&format!("unknown name '{name}'")));
                    }
                })
            }
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src;
        let mut end = start;
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
        let text = core::str::from_utf8(&bytes[start..end]).unwrap_or("");
        let value: f64 = text.parse().map_err(|_| self.error("malformed number"))?;
        self.pos = end;
        Ok(Expr::constant(value))
    }
}

fn call(name: &str, mut args: Vec<Expr>) -> core::result::Result<Expr, String> {
    let arity = |n: usize| -> core::result::Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("{name} expects {n} argument(s), got {}", args.len()))
        }
    };
    let unary = |f: fn(Expr) -> Expr, args: &mut Vec<Expr>| f(args.remove(0));
    Ok(match name {
        "exp" => {
            arity(1)?;
            unary(Expr::exp, &mut args)
        }
        "log" | "ln" => {
            arity(1)?;
            unary(Expr::ln, &mut args)
        }
        "sin" => {
            arity(1)?;
            unary(Expr::sin, &mut args)
        }
        "cos" => {
            arity(1)?;
            unary(Expr::cos, &mut args)
        }
        "sqrt" => {
            arity(1)?;
            unary(Expr::sqrt, &mut args)
        }
        "abs" => {
            arity(1)?;
            unary(Expr::abs, &mut args)
        }
        "sign" => {
            arity(1)?;
            Expr::unary(super::Unary::Sign, args.remove(0))
        }
        "step" => {
            arity(1)?;
            unary(Expr::step, &mut args)
        }
        "pow" => {
            arity(2)?;
            let b = args.pop().unwrap();
            args.pop().unwrap().pow(b)
        }
        "bump" => {
            arity(1)?;
            Expr::bump(args.remove(0))
        }
        "bump2" => {
            arity(2)?;
            let b = args.pop().unwrap();
            let a = args.pop().unwrap();
            Expr::flat_exp(0, Expr::constant(1.0) - Expr::powi(a, 2) - Expr::powi(b, 2))
        }
        "jb" => match args.len() {
            1 => (Expr::constant(1.0) + Expr::powi(args.remove(0), 2)).sqrt(),
            2 => {
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                (Expr::constant(1.0) + Expr::powi(a, 2) + Expr::powi(b, 2)).sqrt()
            }
            n => return Err(format!("jb expects 1 or 2 arguments, got {n}")),
        },
        "plateau" => {
            arity(2)?;
            let r = args.pop().unwrap();
            let r = match r.as_const() {
                Some(c) if c.im == 0.0 && c.re > 0.0 => c.re,
                _ => return Err("plateau radius must be a positive constant".to_string()),
            };
            Expr::plateau_sq(Expr::powi(args.remove(0), 2), r)
        }
        _ => return Err(format!("unknown function '{name}'")),
    })
}
