//! The rational Aarhus integral: pairing a surgery presentation's diagrams
//! against the Gaussian built from the inverse linking matrix, normalizing by
//! the unknot values, and extracting loop parts.

mod glue;

use num_traits::{One, Zero};

pub use glue::{gaussian_combo, glue, pair, pair_brute, pair_gaussian, perfect_matchings};

use crate::algebra::{exp_substitute, series_invert, AlexanderPoly, HSeries, LaurentPoly, Rational};
use crate::diagram::{expand_labels, shapes, Diagram, Label, Leg, LinearCombo, Skeleton};
use crate::error::{Error, Result};
use crate::linking::{appendix_b_certificate, invert_over_delta, BCertificate, EqLinkingMatrix, Inverse};

/// How strut labels are stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrutLabels {
    /// `q^{ij}(t) / Delta(t)`.
    Symbolic,
    /// `l^{ij}(e^h)` truncated after `h^order`.
    Series { order: usize },
}

/// The strut table `(i, j) -> l^{ij}` of `exp(-1/2 sum_ij l^ij strut(x_i, x_j))`.
/// Entry `(i, j)` is read from the `x_i` end; `(j, i)` is the same strut read
/// the other way.
#[derive(Clone, Debug)]
pub struct GaussianPart {
    pub marks: Vec<String>,
    entries: Vec<Vec<Option<Label>>>,
    pub delta: AlexanderPoly,
}

/// `x1, ..., xn`.
pub fn default_marks(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl GaussianPart {
    pub fn from_inverse(inv: &Inverse, mode: StrutLabels) -> Result<Self> {
        let n = inv.q.len();
        let delta_series = match mode {
            StrutLabels::Series { order } => Some(series_invert(&exp_substitute(inv.delta.poly(), order))?),
            StrutLabels::Symbolic => None,
        };
        let entries = inv
            .q
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| {
                        if q.is_zero() {
                            return None;
                        }
                        Some(match (&delta_series, mode) {
                            (Some(di), StrutLabels::Series { order }) => Label::Series(&exp_substitute(q, order) * di),
                            _ => Label::over_delta(q.clone(), 1),
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(Self { marks: default_marks(n), entries, delta: inv.delta.clone() })
    }

    pub fn index_of(&self, mark: &str) -> Option<usize> {
        self.marks.iter().position(|m| m == mark)
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&Label> {
        self.entries[i][j].as_ref()
    }
}

/// Every component has a trivalent vertex not adjacent to an `h`-leg.
pub fn is_ppart(c: &LinearCombo) -> bool {
    c.iter().all(|(_, d, _)| d.satisfies_ppart())
}

/// `<exp(-1/2 sum l^ij strut), P>` with labels left in place.
pub fn aarhus_pairing(p: &LinearCombo, gp: &GaussianPart) -> Result<LinearCombo> {
    if !is_ppart(p) {
        return Err(Error::PPartViolation);
    }
    pair_gaussian(gp, p)
}

/// The pairing with every label expanded into `h`-legs, truncated at degree `n`.
pub fn aarhus_integral(p: &LinearCombo, gp: &GaussianPart, n: usize) -> Result<LinearCombo> {
    let paired = aarhus_pairing(p, gp)?;
    let mut out = LinearCombo::new();
    for (_, d, q) in paired.iter() {
        out.add_combo(&expand_labels(d, n, Some(&gp.delta))?, q);
    }
    Ok(out.truncate(n))
}

/// Wheel coefficients `b_2, b_4, ...` of `log chi^-1 nu = sum b_2n w_2n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NuData {
    pub b: Vec<Rational>,
}

impl NuData {
    /// Coefficients of `1/2 log(sinh(h/2) / (h/2))` covering degree `cutoff`.
    pub fn standard(cutoff: usize) -> Result<Self> {
        let order = cutoff.max(2);
        let mut coeffs = vec![Rational::zero(); order + 1];
        let mut fact = Rational::one();
        for k in 0..=order / 2 {
            if k > 0 {
                fact *= Rational::from_integer(((2 * k) * (2 * k + 1)).into());
            }
            let four_k = num_traits::pow(Rational::from_integer(4.into()), k);
            coeffs[2 * k] = (&fact * four_k).recip();
        }
        let log = HSeries::from_coeffs(coeffs, order).log()?.scale(&crate::algebra::rat(1, 2));
        Ok(Self { b: (1..=cutoff / 2).map(|n| log.coeff(2 * n)).collect() })
    }

    pub fn cutoff(&self) -> usize {
        2 * self.b.len() + 1
    }

    /// `chi^-1 nu = exp(sum b_2n w_2n)` on the mark `x`, through degree `n`.
    pub fn omega(&self, n: usize) -> Result<LinearCombo> {
        if n > self.cutoff() {
            return Err(Error::InsufficientNu(n));
        }
        let mut wheels = LinearCombo::new();
        for (i, b) in self.b.iter().enumerate() {
            let k = 2 * (i + 1);
            if k <= n {
                wheels.add(&shapes::wheel(k, "x"), b)?;
            }
        }
        exp_combo(&wheels, n)
    }

    /// `<chi^-1 nu, chi^-1 nu>` through degree `n`.
    pub fn self_pairing(&self, n: usize) -> Result<LinearCombo> {
        let om = self.omega(n)?;
        Ok(pair(&om, &om, &["x".to_string()])?.truncate(n))
    }
}

fn unit(skeleton: Skeleton) -> Result<LinearCombo> {
    LinearCombo::from_diagram(&Diagram::empty(skeleton))
}

fn constant_term(c: &LinearCombo) -> Rational {
    c.iter().filter(|(_, d, _)| d.vertices().is_empty()).map(|(_, _, q)| q.clone()).fold(Rational::zero(), |a, b| a + b)
}

fn without_constant(c: &LinearCombo) -> LinearCombo {
    c.filter(|d| !d.vertices().is_empty())
}

/// `exp(c)` in the disjoint-union algebra through degree `n`; `c` must have
/// no constant term.
pub fn exp_combo(c: &LinearCombo, n: usize) -> Result<LinearCombo> {
    if !constant_term(c).is_zero() {
        return Err(Error::InvalidArgument("exponent has a constant term".into()));
    }
    let mut out = unit(Skeleton::marks())?;
    let mut power = out.clone();
    for k in 1..=n {
        power = power.product(c)?.truncate(n).scale(&crate::algebra::rat(1, k as i64));
        if power.is_empty() {
            break;
        }
        out.add_combo(&power, &Rational::one());
    }
    Ok(out)
}

/// Group-like logarithm through degree `n`.
pub fn log_combo(c: &LinearCombo, n: usize) -> Result<LinearCombo> {
    if !constant_term(c).is_one() {
        return Err(Error::NonUnitConstant);
    }
    let x = without_constant(c).truncate(n);
    let mut out = LinearCombo::new();
    let mut power = unit(Skeleton::marks())?;
    for k in 1..=n {
        power = power.product(&x)?.truncate(n);
        if power.is_empty() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.add_combo(&power, &crate::algebra::rat(sign, k as i64));
    }
    Ok(out)
}

/// Multiplicative inverse through degree `n` of a combination with constant
/// term 1.
pub fn inverse_combo(c: &LinearCombo, n: usize) -> Result<LinearCombo> {
    if !constant_term(c).is_one() {
        return Err(Error::NonUnitConstant);
    }
    let x = without_constant(c).truncate(n);
    let mut out = unit(Skeleton::marks())?;
    let mut power = out.clone();
    for k in 1..=n {
        power = power.product(&x)?.truncate(n);
        if power.is_empty() {
            break;
        }
        out.add_combo(&power, &Rational::from_integer(if k % 2 == 1 { (-1).into() } else { 1.into() }));
    }
    Ok(out)
}

/// `U_+` (sign > 0) or `U_-`: `<chi^-1 nu, chi^-1 nu>^-1 exp(-+ theta / 16)`.
pub fn unknot_value(positive: bool, nu: &NuData, n: usize) -> Result<LinearCombo> {
    let s = if positive { -1 } else { 1 };
    let theta = LinearCombo::from_diagram(&shapes::theta())?.scale(&crate::algebra::rat(s, 16));
    let e = exp_combo(&theta, n)?;
    inverse_combo(&nu.self_pairing(n)?, n)?.product(&e).map(|c| c.truncate(n))
}

/// Divides `c` by `U_+^sigma_plus U_-^sigma_minus` through degree `n`.
pub fn normalize_unknots(c: &LinearCombo, sigma_plus: usize, sigma_minus: usize, nu: &NuData, n: usize) -> Result<LinearCombo> {
    if sigma_plus + sigma_minus == 0 {
        return Ok(c.clone());
    }
    if n > nu.cutoff() {
        return Err(Error::InsufficientNu(n));
    }
    let mut den = unit(Skeleton::marks())?;
    for (count, positive) in [(sigma_plus, true), (sigma_minus, false)] {
        if count > 0 {
            let u = unknot_value(positive, nu, n)?;
            for _ in 0..count {
                den = den.product(&u)?.truncate(n);
            }
        }
    }
    Ok(c.product(&inverse_combo(&den, n)?)?.truncate(n))
}

/// Connected terms with first Betti number `n`.
pub fn loop_project(c: &LinearCombo, n: usize) -> LinearCombo {
    c.filter(|d| !d.vertices().is_empty() && d.is_connected() && d.loop_number() == n)
}

/// Result of comparing a knot with its clasper surgery.
#[derive(Clone, Debug)]
pub struct ClasperDifference {
    /// The pairing of the Gaussian with the clasper, labels expanded.
    pub delta: LinearCombo,
    /// The same before expansion: the clasper closed into an extra loop.
    pub closed: LinearCombo,
    pub r: Rational,
    /// Coefficient in `delta` of the closed clasper carrying two `h`-legs on
    /// its new edge.
    pub leading_coefficient: Rational,
    pub leading: LinearCombo,
    pub certificate: BCertificate,
}

/// The difference term for a clasper with legs on `x_{2g+1}` and `x_{3g+1}`.
pub fn clasper_difference(m: &EqLinkingMatrix, clasper: &Diagram, n: usize) -> Result<ClasperDifference> {
    let g = m.genus();
    let (xa, xb) = (format!("x{}", 2 * g + 1), format!("x{}", 3 * g + 1));
    let legs: Vec<&Leg> = clasper.legs().map(|(_, _, l)| l).collect();
    let ok = clasper.is_connected()
        && legs.len() == 2
        && legs.iter().any(|l| l.label == xa)
        && legs.iter().any(|l| l.label == xb);
    if !ok {
        return Err(Error::InvalidArgument(format!("clasper must be connected with one leg on each of {xa}, {xb}")));
    }
    let inv = invert_over_delta(m)?;
    let certificate = appendix_b_certificate(m)?;
    let gp = GaussianPart::from_inverse(&inv, StrutLabels::Series { order: n })?;
    let p = LinearCombo::from_diagram(clasper)?;
    let closed = aarhus_pairing(&p, &gp)?;
    let mut delta = LinearCombo::new();
    for (_, d, q) in closed.iter() {
        delta.add_combo(&expand_labels(d, n, None)?, q);
    }
    // the same closing with a bare h^2 label marks the leading diagram
    let mut h2 = vec![Rational::zero(); 3];
    h2[2] = Rational::one();
    let mut probe = gp.clone();
    probe.set_all(Label::Series(HSeries::from_coeffs(h2, n)));
    let mut leading = LinearCombo::new();
    for (_, d, q) in aarhus_pairing(&p, &probe)?.iter() {
        leading.add_combo(&expand_labels(d, n, None)?, q);
    }
    let leading_coefficient = match leading.iter().next() {
        Some((code, _, q)) if leading.len() == 1 => delta.coeff_of_code(code) / q,
        _ => Rational::zero(),
    };
    Ok(ClasperDifference { delta, closed, r: certificate.r.clone(), leading_coefficient, leading, certificate })
}

impl GaussianPart {
    fn set_all(&mut self, l: Label) {
        for row in &mut self.entries {
            for e in row.iter_mut() {
                *e = Some(l.clone());
            }
        }
    }
}

/// `q^{ij}` entries as labels over `Delta`, the symbolic Gaussian of `M`.
pub fn symbolic_gaussian(m: &EqLinkingMatrix) -> Result<GaussianPart> {
    GaussianPart::from_inverse(&invert_over_delta(m)?, StrutLabels::Symbolic)
}

/// Splits every label `(sum_k r_k t^k) / Delta^p` into its monomials, so each
/// term carries only labels `t^k / Delta^p`.
pub fn split_labels(c: &LinearCombo) -> Result<LinearCombo> {
    let mut out = LinearCombo::new();
    for (_, d, q) in c.iter() {
        let (skel, vertices, labels) = d.clone().into_parts();
        let options: Vec<Vec<(Rational, Option<Label>)>> = labels
            .iter()
            .map(|l| match l {
                Some(Label::Ratio { num, delta_pow }) => num
                    .terms()
                    .map(|(k, r)| (r.clone(), Some(Label::over_delta(LaurentPoly::t_pow(k), *delta_pow))))
                    .collect(),
                other => vec![(Rational::one(), other.clone())],
            })
            .collect();
        let mut idx = vec![0usize; options.len()];
        loop {
            let mut coeff = q.clone();
            let mut ls = vec![];
            for (i, o) in options.iter().enumerate() {
                coeff *= &o[idx[i]].0;
                ls.push(o[idx[i]].1.clone());
            }
            out.add(&Diagram::new(skel.clone(), vertices.clone(), ls)?, &coeff)?;
            let mut i = 0;
            while i < idx.len() {
                idx[i] += 1;
                if idx[i] < options[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
