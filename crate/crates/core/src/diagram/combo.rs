use std::collections::BTreeMap;

use num_traits::Zero;

use super::{canonicalize, Diagram};
use crate::algebra::Rational;
use crate::error::Result;

/// Rational combination of diagrams keyed by canonical code. Each stored
/// diagram is the canonical representative, so coefficients already absorb
/// the orientation sign; diagrams equal to their own negative are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearCombo {
    terms: BTreeMap<Vec<u8>, (Diagram, Rational)>,
}

impl LinearCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_diagram(d: &Diagram) -> Result<Self> {
        let mut c = Self::new();
        c.add(d, &Rational::from_integer(1.into()))?;
        Ok(c)
    }

    pub fn from_terms<'a, I: IntoIterator<Item = &'a (Rational, Diagram)>>(terms: I) -> Result<Self> {
        let mut c = Self::new();
        for (q, d) in terms {
            c.add(d, q)?;
        }
        Ok(c)
    }

    pub fn add(&mut self, d: &Diagram, coeff: &Rational) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        let c = canonicalize(d)?;
        if c.sign == 0 {
            return Ok(());
        }
        let q = if c.sign > 0 { coeff.clone() } else { -coeff };
        self.add_canonical(c.code, c.diagram, &q);
        Ok(())
    }

    /// Adds a term whose code and representative are already canonical.
    pub fn add_canonical(&mut self, code: Vec<u8>, d: Diagram, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&code) {
            Some((_, q)) => {
                *q += coeff;
                if q.is_zero() {
                    self.terms.remove(&code);
                }
            }
            None => {
                self.terms.insert(code, (d, coeff.clone()));
            }
        }
    }

    pub fn add_combo(&mut self, other: &LinearCombo, scale: &Rational) {
        for (code, (d, q)) in &other.terms {
            self.add_canonical(code.clone(), d.clone(), &(q * scale));
        }
    }

    pub fn scale(&self, s: &Rational) -> LinearCombo {
        let mut out = LinearCombo::new();
        out.add_combo(self, s);
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], &Diagram, &Rational)> + '_ {
        self.terms.iter().map(|(k, (d, q))| (k.as_slice(), d, q))
    }

    pub fn coeff_of_code(&self, code: &[u8]) -> Rational {
        self.terms.get(code).map_or_else(Rational::zero, |(_, q)| q.clone())
    }

    /// Coefficient of `d` in this combination, sign included.
    pub fn coeff_of(&self, d: &Diagram) -> Result<Rational> {
        let c = canonicalize(d)?;
        if c.sign == 0 {
            return Ok(Rational::zero());
        }
        let q = self.coeff_of_code(&c.code);
        Ok(if c.sign > 0 { q } else { -q })
    }

    /// Disjoint-union product.
    pub fn product(&self, other: &LinearCombo) -> Result<LinearCombo> {
        let mut out = LinearCombo::new();
        for (d1, q1) in self.terms.values() {
            for (d2, q2) in other.terms.values() {
                out.add(&d1.disjoint_union(d2)?, &(q1 * q2))?;
            }
        }
        Ok(out)
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Diagram) -> bool) -> LinearCombo {
        LinearCombo {
            terms: self.terms.iter().filter(|(_, (d, _))| keep(d)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn truncate(&self, max_degree: usize) -> LinearCombo {
        self.filter(|d| d.degree() <= max_degree)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.values().map(|(d, _)| d.degree()).max()
    }
}
