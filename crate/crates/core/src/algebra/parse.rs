//! Element input grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Integers are read modulo 2. In a field context the identifier `u` is the
//! transcendental of F₂(u) and `w` the class of the indeterminate in
//! GF(2^n). In a ring context the presentation's generators are available
//! as well, and division is allowed only by nonzero constants.

use std::sync::Arc;

use super::field::{Field, FieldElem};
use super::presentation::Presentation;
use super::ring::RingElem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Int(u64),
    Ident(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
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

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.power()?;
            lhs = if c == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs), at)
            };
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let n = self.integer()?;
            let e = u32::try_from(n).map_err(|_| Error::Parse {
                pos: at,
                msg: "exponent too large".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| err(start, "integer out of range"))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Expr::Ident(name.to_string(), start))
            }
            Some(_) => err(self.pos, "unexpected character"),
            None => err(self.pos, "unexpected end of input"),
        }
    }
}

fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    Ok(e)
}

fn scalar_ident(field: Field, name: &str, pos: usize) -> Result<FieldElem> {
    match (field, name) {
        (Field::Rational, "u") | (Field::Gf2n { .. }, "w") => Ok(field.generator()),
        _ => err(pos, format!("unknown identifier '{name}' for field {field}")),
    }
}

fn eval_field(field: Field, e: &Expr) -> Result<FieldElem> {
    Ok(match e {
        Expr::Int(n) => field.from_bits(n & 1),
        Expr::Ident(name, pos) => scalar_ident(field, name, *pos)?,
        Expr::Add(a, b) | Expr::Sub(a, b) => &eval_field(field, a)? + &eval_field(field, b)?,
        Expr::Mul(a, b) => &eval_field(field, a)? * &eval_field(field, b)?,
        Expr::Div(a, b, pos) => {
            let d = eval_field(field, b)?;
            if d.is_zero() {
                return err(*pos, "division by zero");
            }
            eval_field(field, a)?.try_div(&d)?
        }
        Expr::Pow(a, n) => eval_field(field, a)?.pow(*n as u64),
    })
}

fn eval_ring(pres: &Arc<Presentation>, e: &Expr) -> Result<RingElem> {
    Ok(match e {
        Expr::Int(n) => RingElem::constant(pres, pres.field().from_bits(n & 1)),
        Expr::Ident(name, pos) => {
            if pres.var_index(name).is_some() {
                RingElem::var(pres, name)
            } else {
                RingElem::constant(pres, scalar_ident(pres.field(), name, *pos)?)
            }
        }
        Expr::Add(a, b) => &eval_ring(pres, a)? + &eval_ring(pres, b)?,
        Expr::Sub(a, b) => &eval_ring(pres, a)? - &eval_ring(pres, b)?,
        Expr::Mul(a, b) => &eval_ring(pres, a)? * &eval_ring(pres, b)?,
        Expr::Div(a, b, pos) => {
            let d = eval_ring(pres, b)?;
            match d.as_constant() {
                Some(c) if !c.is_zero() => eval_ring(pres, a)?.scale(&c.inv()?),
                _ => return err(*pos, "division only by nonzero constants"),
            }
        }
        Expr::Pow(a, n) => eval_ring(pres, a)?.pow(*n),
    })
}

/// Parses a scalar of `field`.
pub fn parse_field_elem(field: Field, src: &str) -> Result<FieldElem> {
    eval_field(field, &parse(src)?)
}

/// Parses an element of a presented ring.
pub fn parse_ring_elem(pres: &Arc<Presentation>, src: &str) -> Result<RingElem> {
    eval_ring(pres, &parse(src)?)
}

/// Parses `f2-rational` or `gf2:<n>:<modulus bits, most significant first>`.
pub fn parse_field_spec(spec: &str) -> Result<Field> {
    if spec == "f2-rational" {
        return Ok(Field::Rational);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 || parts[0] != "gf2" {
        return err(0, format!("unknown field spec '{spec}'"));
    }
    let n: u32 = parts[1].parse().or_else(|_| err(4, "bad degree"))?;
    let bits_at = 5 + parts[1].len();
    let modulus = u64::from_str_radix(parts[2], 2).or_else(|_| err(bits_at, "bad modulus bits"))?;
    if 63 - modulus.leading_zeros() != n {
        return err(bits_at, format!("modulus does not have degree {n}"));
    }
    Field::gf2n(modulus).map_err(|e| Error::Parse {
        pos: bits_at,
        msg: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presentation::{ring_a, ring_r};

    #[test]
    fn scalars() {
        let k = Field::Rational;
        let u = k.generator();
        assert_eq!(parse_field_elem(k, "u").unwrap(), u);
        assert_eq!(parse_field_elem(k, "(1+u)^2").unwrap(), &(&u * &u) + &k.one());
        let f = parse_field_elem(k, "u/(1+u)").unwrap();
        assert_eq!(&f * &(&u + &k.one()), u);
        assert_eq!(parse_field_elem(k, "u+u").unwrap(), k.zero());
        let k4 = parse_field_spec("gf2:2:111").unwrap();
        assert_eq!(k4, Field::gf4());
        let w = parse_field_elem(k4, "w^3").unwrap();
        assert!(w.is_one());
    }

    #[test]
    fn ring_elements() {
        let k = Field::Rational;
        let r = ring_r(k);
        let f = parse_ring_elem(&r, "1 + (1+u)*a^2").unwrap();
        assert_eq!(f.to_string(), "(u+1)*x*y + 1");
        let a = ring_a(k);
        let g = parse_ring_elem(&a, "(1+s)*(1+t)").unwrap();
        assert_eq!(g, parse_ring_elem(&a, "1+s+t").unwrap());
        let h = parse_ring_elem(&a, "s/u").unwrap();
        assert_eq!(h, RingElem::var(&a, "s").scale(&k.generator().inv().unwrap()));
    }

    #[test]
    fn errors_carry_positions() {
        let k = Field::Rational;
        assert_eq!(
            parse_field_elem(k, "1 + v"),
            Err(Error::Parse {
                pos: 4,
                msg: "unknown identifier 'v' for field f2-rational".into()
            })
        );
        assert!(matches!(parse_field_elem(k, "(u+1"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_field_elem(k, "u/0"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_field_elem(k, "u u"), Err(Error::Parse { pos: 2, .. })));
        let r = ring_r(k);
        assert!(matches!(parse_ring_elem(&r, "x/y"), Err(Error::Parse { pos: 1, .. })));
        assert!(parse_field_spec("gf2:2:101").is_err());
        assert!(parse_field_spec("gf2:3:111").is_err());
        assert!(parse_field_spec("q").is_err());
    }
}
