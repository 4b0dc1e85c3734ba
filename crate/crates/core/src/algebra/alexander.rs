use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `f(1) = 1`, `f(t) = f(1/t)` and integer coefficients.
pub fn is_in_z(f: &LaurentPoly) -> bool {
    f.has_integer_coeffs() && f.eval_at_one().is_one() && f.is_symmetric()
}

/// An element of Z together with its expansion `1 + sum a_j u^j`,
/// `u = t + 1/t - 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderPoly {
    poly: LaurentPoly,
    u_coeffs: Vec<Rational>,
}

impl AlexanderPoly {
    pub fn new(poly: LaurentPoly) -> Result<Self> {
        if !is_in_z(&poly) {
            return Err(Error::NotInZ);
        }
        let u = LaurentPoly::u();
        let mut rest = poly.clone();
        let mut coeffs = Vec::new();
        // f = a_0 + u (a_1 + u (a_2 + ...)); a_0 = 1 is implicit.
        let mut first = true;
        while !rest.is_zero() {
            let c = rest.eval_at_one();
            if !first {
                coeffs.push(c.clone());
            }
            first = false;
            let shifted = &rest - &LaurentPoly::constant(c);
            rest = shifted.div_exact(&u)?;
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(Self { poly, u_coeffs: coeffs })
    }

    /// `1 + sum_j a_j u^j` from `[a_1, ..., a_m]`.
    pub fn from_u_coeffs(coeffs: &[i64]) -> Result<Self> {
        let u = LaurentPoly::u();
        let mut p = LaurentPoly::one();
        for (j, a) in coeffs.iter().enumerate() {
            p = &p + &u.pow(j as u32 + 1).scale(&Rational::from_integer((*a).into()));
        }
        Self::new(p)
    }

    /// `1 + a u`
    pub fn genus_one(a: i64) -> Self {
        Self::from_u_coeffs(&[a]).expect("1 + a u lies in Z")
    }

    pub fn one() -> Self {
        Self::genus_one(0)
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn u_coeffs(&self) -> &[Rational] {
        &self.u_coeffs
    }

    pub fn deg(&self) -> usize {
        self.u_coeffs.len()
    }
}

/// `deg f`, the top power of `u`.
pub fn deg_z(f: &LaurentPoly) -> Result<usize> {
    AlexanderPoly::new(f.clone()).map(|a| a.deg())
}
