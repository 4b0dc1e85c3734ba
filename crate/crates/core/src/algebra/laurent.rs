use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Laurent polynomial in `t` with rational coefficients. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// `t^k`
    pub fn t_pow(k: i64) -> Self {
        Self::monomial(k, Rational::one())
    }

    /// `u = t + 1/t - 2`
    pub fn u() -> Self {
        Self::from_ints(&[(-1, 1), (0, -2), (1, 1)])
    }

    /// `v = t - 1/t`
    pub fn v() -> Self {
        Self::from_ints(&[(-1, -1), (1, 1)])
    }

    pub fn from_ints(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in pairs {
            p.add_term(e, &Rational::from_integer(c.into()));
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, &c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_monomial(&self) -> Option<(i64, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                num_traits::pow(t.clone(), *e as usize)
            } else {
                num_traits::pow(t.recip(), (-*e) as usize)
            };
            acc += c * p;
        }
        acc
    }

    pub fn eval_at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }

    /// `f(t) -> f(1/t)`
    pub fn invert_t(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_t()
    }

    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in `Q[t, 1/t]`. Fails unless `other` divides `self`.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(other)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision("laurent polynomial"))
        }
    }

    /// Division with remainder. Writing `self = t^a P` and `other = t^b R` with
    /// `P(0), R(0) != 0`, this divides `P` by `R` in `Q[t]` and returns
    /// `(t^(a-b) Q, t^a Rem)` so that `self = q * other + r`.
    pub fn div_rem(&self, other: &Self) -> Result<(Self, Self)> {
        let (b, dhi) = match (other.min_exp(), other.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(Error::InexactDivision("division by zero")),
        };
        let a = match self.min_exp() {
            Some(a) => a,
            None => return Ok((Self::zero(), Self::zero())),
        };
        let rdeg = dhi - b;
        let lead = other.coeff(dhi);
        let mut rem = self.shift(-a);
        let mut quot = Self::zero();
        while let Some(top) = rem.max_exp() {
            if top < rdeg {
                break;
            }
            let c = rem.coeff(top) / &lead;
            let e = top - rdeg;
            quot.add_term(e, &c);
            for (de, dc) in other.terms() {
                rem.add_term(e + de - b, &-(&c * dc));
            }
        }
        Ok((quot.shift(a - b), rem.shift(a)))
    }

    pub fn to_json_pairs(&self) -> Vec<(i64, String)> {
        self.terms.iter().map(|(e, c)| (*e, format_rational(c))).collect()
    }

    pub fn from_json_pairs(pairs: &[(i64, String)]) -> Result<Self> {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(*e, &parse_rational(c)?);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let cs = format_rational(&a);
            let needs_paren = cs.contains('/');
            match *e {
                0 => write!(f, "{cs}")?,
                _ => {
                    if !a.is_one() {
                        if needs_paren {
                            write!(f, "({cs})*")?;
                        } else {
                            write!(f, "{cs}*")?;
                        }
                    }
                    if *e == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(i64, String)>::deserialize(d)?;
        LaurentPoly::from_json_pairs(&pairs).map_err(D::Error::custom)
    }
}

/// A quotient `num / den` of Laurent polynomials, compared by cross-multiplication.
#[derive(Clone, Debug)]
pub struct LaurentFraction {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl LaurentFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self { num, den })
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::Singular);
        }
        Ok(self.num.eval(t) / d)
    }

    pub fn invert_t(&self) -> Self {
        Self { num: self.num.invert_t(), den: self.den.invert_t() }
    }

    pub fn scale(&self, s: &LaurentPoly) -> Self {
        Self { num: &self.num * s, den: self.den.clone() }
    }
}

impl PartialEq for LaurentFraction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}
