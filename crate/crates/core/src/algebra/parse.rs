//! Expression parser for Laurent polynomials such as `1 + 2*(t + t^-1 - 2)`.
//!
//! Besides `t`, the shorthands `u = t + t^-1 - 2` and `v = t - t^-1` are
//! accepted, and `D` stands for the Alexander polynomial, which may only occur
//! as a divisor (`(t - 1)/D`, `t^2/D^2`).

use num_bigint::BigInt;

use super::laurent::LaurentPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `num / D^delta_pow`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioExpr {
    pub num: LaurentPoly,
    pub delta_pow: u32,
}

#[derive(Clone, Debug)]
struct Value {
    num: LaurentPoly,
    dpow: i32,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
    depth: usize,
}

// Bounds that keep hostile input from exhausting time, memory or stack.
const MAX_DEPTH: usize = 64;
const MAX_EXP: i64 = 1 << 16;
const MAX_SPAN: i64 = 1 << 9;
const MAX_DPOW: i32 = 256;
const MAX_BITS: u64 = 1 << 12;

pub fn parse_laurent(s: &str) -> Result<LaurentPoly> {
    let e = parse_ratio_expr(s)?;
    if e.delta_pow != 0 {
        return Err(Error::Parse { line: 1, col: 1, msg: "unexpected D in polynomial".into() });
    }
    Ok(e.num)
}

pub fn parse_ratio_expr(s: &str) -> Result<RatioExpr> {
    parse_ratio_expr_at(s, 1, 1)
}

/// Same as [`parse_ratio_expr`], reporting errors relative to a position inside a
/// larger document.
pub fn parse_ratio_expr_at(s: &str, line: usize, col: usize) -> Result<RatioExpr> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, line, col0: col, depth: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if v.dpow > 0 {
        return Err(p.err("D may only appear as a divisor"));
    }
    Ok(RatioExpr { num: v.num, delta_pow: (-v.dpow) as u32 })
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: self.line, col: self.col0 + self.pos, msg: msg.to_string() }
    }

    fn bounded(&self, v: Value) -> Result<Value> {
        let too_big = match (v.num.min_exp(), v.num.max_exp()) {
            (Some(lo), Some(hi)) => {
                hi - lo > MAX_SPAN
                    || lo.abs() > MAX_EXP
                    || hi.abs() > MAX_EXP
                    || v.num.terms().any(|(_, c)| c.numer().bits() > MAX_BITS || c.denom().bits() > MAX_BITS)
            }
            _ => false,
        };
        if too_big || v.dpow.abs() > MAX_DPOW {
            return Err(self.err("expression too large"));
        }
        Ok(v)
    }

    /// Multiplies after checking that the product stays within the limits,
    /// so a hostile input cannot force one huge multiplication.
    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        let span = |v: &Value| v.num.max_exp().zip(v.num.min_exp()).map_or(0, |(hi, lo)| hi - lo);
        let bits = |v: &Value| v.num.terms().map(|(_, c)| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0);
        let len = a.num.terms().count().min(b.num.terms().count()) as u64;
        if span(a) + span(b) > MAX_SPAN || bits(a) + bits(b) + 64 - len.leading_zeros() as u64 > MAX_BITS {
            return Err(self.err("expression too large"));
        }
        self.bounded(Value { num: &a.num * &b.num, dpow: a.dpow + b.dpow })
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("nesting too deep"));
        }
        Ok(())
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

    fn expr(&mut self) -> Result<Value> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc.num = -&acc.num;
        }
        loop {
            match self.peek() {
                Some(b'+') | Some(b'-') => {
                    let minus = self.src[self.pos] == b'-';
                    self.pos += 1;
                    let mut rhs = self.term()?;
                    if minus {
                        rhs.num = -&rhs.num;
                    }
                    acc = self.add(acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn add(&self, a: Value, b: Value) -> Result<Value> {
        if a.num.is_zero() {
            return Ok(b);
        }
        if b.num.is_zero() {
            return Ok(a);
        }
        if a.dpow != b.dpow {
            return Err(self.err("cannot add terms with different powers of D"));
        }
        self.bounded(Value { num: &a.num + &b.num, dpow: a.dpow })
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = self.mul(&acc, &rhs)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = self.divide(acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn divide(&self, a: Value, b: Value) -> Result<Value> {
        match b.num.is_monomial() {
            Some((e, c)) => {
                let inv = c.recip();
                self.bounded(Value { num: a.num.shift(-e).scale(&inv), dpow: a.dpow - b.dpow })
            }
            None => Err(self.err("can only divide by constants, powers of t, and D")),
        }
    }

    fn factor(&mut self) -> Result<Value> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.signed_int()?;
            return self.power(base, n);
        }
        Ok(base)
    }

    fn power(&self, base: Value, n: i64) -> Result<Value> {
        if n >= 0 {
            let mut acc = Value { num: LaurentPoly::one(), dpow: 0 };
            for _ in 0..n {
                acc = self.mul(&acc, &base)?;
            }
            return Ok(acc);
        }
        match base.num.is_monomial() {
            Some((e, c)) => {
                let m = -n;
                let c = num_traits::pow(c.recip(), m as usize);
                self.bounded(Value { num: LaurentPoly::monomial(-e * m, c), dpow: -base.dpow * m as i32 })
            }
            None => Err(self.err("negative powers only of monomials")),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            Some(b'(') => {
                self.pos += 1;
                self.enter()?;
                let v = self.signed_int()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                self.depth -= 1;
                return Ok(v);
            }
            _ => {}
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer exponent"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = s.parse().map_err(|_| self.err("exponent out of range"))?;
        if v > 64 {
            return Err(self.err("exponent too large"));
        }
        Ok(if neg { -v } else { v })
    }

    fn base(&mut self) -> Result<Value> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.enter()?;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                self.depth -= 1;
                Ok(v)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Value { num: LaurentPoly::t_pow(1), dpow: 0 })
            }
            Some(b'u') => {
                self.pos += 1;
                Ok(Value { num: LaurentPoly::u(), dpow: 0 })
            }
            Some(b'v') => {
                self.pos += 1;
                Ok(Value { num: LaurentPoly::v(), dpow: 0 })
            }
            Some(b'D') => {
                self.pos += 1;
                Ok(Value { num: LaurentPoly::one(), dpow: 1 })
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos - start > 30 {
                    return Err(self.err("number too long"));
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = s.parse().map_err(|_| self.err("bad number"))?;
                Ok(Value { num: LaurentPoly::constant(Rational::from_integer(n)), dpow: 0 })
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn parses_u_form() {
        let p = parse_laurent("1 + 2*(t + t^-1 - 2)").unwrap();
        assert_eq!(p, LaurentPoly::from_ints(&[(-1, 2), (0, -3), (1, 2)]));
        assert_eq!(parse_laurent("1 + 2*u").unwrap(), p);
    }

    #[test]
    fn parses_delta_divisor() {
        let e = parse_ratio_expr("(t-1)/D").unwrap();
        assert_eq!(e.delta_pow, 1);
        assert_eq!(e.num, LaurentPoly::from_ints(&[(0, -1), (1, 1)]));
        let e = parse_ratio_expr("t^2/D^2").unwrap();
        assert_eq!(e.delta_pow, 2);
        assert!(parse_ratio_expr("D").is_err());
        assert!(parse_ratio_expr("t + 1/D").is_err());
    }

    #[test]
    fn rational_constants() {
        let p = parse_laurent("t/2 - 3/4").unwrap();
        assert_eq!(p.coeff(1), rat(1, 2));
        assert_eq!(p.coeff(0), rat(-3, 4));
    }

    #[test]
    fn errors_carry_columns() {
        match parse_laurent("1 + $") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_laurent("(t+1)^-1").is_err());
        assert!(parse_laurent("t/(t+1)").is_err());
    }

    #[test]
    fn hostile_inputs_are_refused() {
        let deep = format!("{}t{}", "(".repeat(200), ")".repeat(200));
        assert!(matches!(parse_laurent(&deep), Err(Error::Parse { .. })));
        assert!(parse_laurent("((u^64)^64)^64").is_err());
        assert!(parse_laurent("((t^64)^64)^64").is_err());
        assert!(parse_laurent("((123456789012345678901234567890^64)^64)").is_err());
        assert!(parse_ratio_expr("1/(D^64)^64").is_err());
        assert_eq!(parse_laurent("(t^64)^64").unwrap(), LaurentPoly::t_pow(4096));
        assert!(parse_laurent("(t + 1)^64 * (t + 1)^64").is_ok());
        assert!(parse_laurent("((t + 1)^64)^64").is_err());
        assert!(parse_laurent("(u^64)").is_ok());
    }
}
