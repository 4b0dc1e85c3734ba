use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPoly;
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Power series in `h` truncated after `h^order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HSeries {
    order: usize,
    coeffs: Vec<Rational>,
}

impl HSeries {
    pub fn zero(order: usize) -> Self {
        Self { order, coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from the leading coefficients; missing ones are zero and
    /// extra ones are dropped.
    pub fn from_coeffs(coeffs: Vec<Rational>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[i] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// `h -> -h`
    pub fn negate_h(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self { order: self.order, coeffs }
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstant);
        }
        // (log s)' = s' / s
        let inv = series_invert(self)?;
        let mut deriv = Self::zero(self.order);
        for k in 1..=self.order {
            deriv.coeffs[k - 1] = &self.coeffs[k] * Rational::from_integer(k.into());
        }
        let q = &deriv * &inv;
        let mut out = Self::zero(self.order);
        for k in 1..=self.order {
            out.coeffs[k] = &q.coeffs[k - 1] / Rational::from_integer(k.into());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson { order: self.order, coeffs: self.coeffs.iter().map(format_rational).collect() }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let coeffs = j.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        if coeffs.len() != j.order + 1 {
            return Err(Error::InvalidArgument(format!(
                "series of order {} needs {} coefficients, got {}",
                j.order,
                j.order + 1,
                coeffs.len()
            )));
        }
        Ok(Self { order: j.order, coeffs })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesJson {
    pub order: usize,
    pub coeffs: Vec<String>,
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]_h{}", parts.join(","), self.order)
    }
}

impl fmt::Debug for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HSeries({self})")
    }
}

impl Add for &HSeries {
    type Output = HSeries;
    fn add(self, rhs: &HSeries) -> HSeries {
        let order = self.order.min(rhs.order);
        HSeries {
            order,
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &HSeries {
    type Output = HSeries;
    fn sub(self, rhs: &HSeries) -> HSeries {
        let order = self.order.min(rhs.order);
        HSeries {
            order,
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for &HSeries {
    type Output = HSeries;
    fn mul(self, rhs: &HSeries) -> HSeries {
        let order = self.order.min(rhs.order);
        let mut out = HSeries::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        out
    }
}

impl Neg for &HSeries {
    type Output = HSeries;
    fn neg(self) -> HSeries {
        HSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// `f(e^h)` truncated after `h^order`.
pub fn exp_substitute(f: &LaurentPoly, order: usize) -> HSeries {
    let mut out = HSeries::zero(order);
    let mut fact = Rational::one();
    for j in 0..=order {
        if j > 0 {
            fact *= Rational::from_integer(j.into());
        }
        let mut moment = Rational::zero();
        for (k, c) in f.terms() {
            moment += c * num_traits::pow(Rational::from_integer(k.into()), j);
        }
        out.coeffs[j] = moment / &fact;
    }
    out
}

/// Multiplicative inverse by Newton iteration `g <- g (2 - s g)`, doubling the
/// number of correct coefficients each step.
pub fn series_invert(s: &HSeries) -> Result<HSeries> {
    let c0 = &s.coeffs[0];
    if c0.is_zero() {
        return Err(Error::NonUnit);
    }
    let order = s.order;
    let two = HSeries::constant(Rational::from_integer(2.into()), order);
    let mut g = HSeries::constant(c0.recip(), order);
    let mut correct = 1usize;
    while correct <= order {
        let sg = s * &g;
        g = &g * &(&two - &sg);
        correct *= 2;
    }
    Ok(g)
}
