use std::fmt;

use num_traits::{One, Zero};

use super::{Dart, Diagram, Leg, LinearCombo, Vertex};
use crate::algebra::{exp_substitute, series_invert, AlexanderPoly, HSeries, LaurentPoly, Rational};
use crate::error::{Error, Result};

/// One-sided edge label, read from the labeled end towards the other end.
/// `Ratio` stands for `num(t) / Delta(t)^delta_pow` with `t = e^h`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Ratio { num: LaurentPoly, delta_pow: u32 },
    Series(HSeries),
}

impl Label {
    pub fn poly(num: LaurentPoly) -> Self {
        Label::Ratio { num, delta_pow: 0 }
    }

    pub fn t_pow(k: i64) -> Self {
        Self::poly(LaurentPoly::t_pow(k))
    }

    pub fn over_delta(num: LaurentPoly, delta_pow: u32) -> Self {
        Label::Ratio { num, delta_pow }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Label::Ratio { num, delta_pow } => *delta_pow == 0 && num.is_one_poly(),
            Label::Series(s) => s.coeff(0).is_one() && s.coeffs().iter().skip(1).all(|c| c.is_zero()),
        }
    }

    /// The same label read from the other end: `t -> 1/t`, `h -> -h`.
    pub fn inverted(&self) -> Self {
        match self {
            Label::Ratio { num, delta_pow } => Label::Ratio { num: num.invert_t(), delta_pow: *delta_pow },
            Label::Series(s) => Label::Series(s.negate_h()),
        }
    }

    /// Stable text used for canonical codes and the text format.
    pub fn key(&self) -> String {
        self.to_string()
    }

    pub fn mul(&self, other: &Label) -> Result<Label> {
        match (self, other) {
            (Label::Ratio { num: a, delta_pow: p }, Label::Ratio { num: b, delta_pow: q }) => {
                Ok(Label::Ratio { num: a * b, delta_pow: p + q })
            }
            (Label::Series(a), Label::Series(b)) => Ok(Label::Series(a * b)),
            _ => Err(Error::UnsupportedLabel("cannot multiply a symbolic label by a series".into())),
        }
    }

    /// `t^k` if the label is exactly a power of `t`.
    pub fn as_t_power(&self) -> Option<i64> {
        match self {
            Label::Ratio { num, delta_pow: 0 } => match num.is_monomial() {
                Some((k, c)) if c.is_one() => Some(k),
                _ => None,
            },
            _ => None,
        }
    }
}

impl LaurentPoly {
    fn is_one_poly(&self) -> bool {
        matches!(self.is_monomial(), Some((0, c)) if c.is_one())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Ratio { num, delta_pow: 0 } => write!(f, "{num}"),
            Label::Ratio { num, delta_pow: 1 } => write!(f, "({num})/D"),
            Label::Ratio { num, delta_pow } => write!(f, "({num})/D^{delta_pow}"),
            Label::Series(s) => {
                let cs: Vec<String> = s.coeffs().iter().map(crate::algebra::format_rational).collect();
                write!(f, "h:{}", cs.join(","))
            }
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({self})")
    }
}

/// The label as a series in `h` truncated after `h^order`.
pub fn label_series(label: &Label, order: usize, delta: Option<&AlexanderPoly>) -> Result<HSeries> {
    match label {
        Label::Series(s) => {
            if s.order() < order {
                return Err(Error::InvalidArgument(format!(
                    "series label of order {} cannot be expanded to order {order}",
                    s.order()
                )));
            }
            Ok(s.truncate(order))
        }
        Label::Ratio { num, delta_pow } => {
            let mut s = exp_substitute(num, order);
            if *delta_pow > 0 {
                let delta = delta.ok_or(Error::MissingDelta)?;
                let inv = series_invert(&exp_substitute(delta.poly(), order))?;
                for _ in 0..*delta_pow {
                    s = &s * &inv;
                }
            }
            Ok(s)
        }
    }
}

/// Inserts `k` legs along edge `e`, starting next to the labeled end. Each new
/// trivalent vertex is ordered (towards labeled end, away from it, leg).
pub(crate) fn insert_legs(vertices: &mut Vec<Vertex>, labels: &mut Vec<Option<Label>>, e: usize, k: usize, leg: &Leg) {
    if k == 0 {
        return;
    }
    let far = 2 * e + 1;
    let mut pending = far;
    for _ in 0..k {
        let g = labels.len();
        labels.push(None);
        let l = labels.len();
        labels.push(None);
        vertices.push(Vertex::Tri([pending, 2 * g, 2 * l]));
        vertices.push(Vertex::Uni { dart: 2 * l + 1, leg: leg.clone() });
        pending = 2 * g + 1;
    }
    // the far endpoint now holds the last segment's dart
    for v in vertices.iter_mut().rev().skip(2 * k) {
        match v {
            Vertex::Tri(ds) => {
                if let Some(x) = ds.iter_mut().find(|x| **x == far) {
                    *x = pending;
                    return;
                }
            }
            Vertex::Uni { dart, .. } => {
                if *dart == far {
                    *dart = pending;
                    return;
                }
            }
        }
    }
    unreachable!("edge endpoint exists");
}

/// Replaces every label by its series and distributes: a coefficient `c_k h^k`
/// becomes `k` consecutive `h`-legs on that edge. Terms of degree above
/// `max_degree` are dropped.
pub fn expand_labels(d: &Diagram, max_degree: usize, delta: Option<&AlexanderPoly>) -> Result<LinearCombo> {
    let mut out = LinearCombo::new();
    let base = d.degree();
    if base > max_degree {
        return Ok(out);
    }
    let budget = max_degree - base;
    let labeled: Vec<usize> = (0..d.num_edges()).filter(|&e| d.label(e).is_some()).collect();
    let series: Vec<HSeries> = labeled
        .iter()
        .map(|&e| label_series(d.label(e).unwrap(), budget, delta))
        .collect::<Result<_>>()?;
    let (skel, vertices, labels) = d.clone().into_parts();
    let plain_labels: Vec<Option<Label>> = labels.iter().map(|_| None).collect();

    let h = Leg::mark("h");
    let mut ks = vec![0usize; labeled.len()];
    loop {
        let coeff = ks.iter().zip(&series).fold(Rational::one(), |acc, (&k, s)| acc * s.coeff(k));
        if !coeff.is_zero() {
            let mut vs = vertices.clone();
            let mut ls = plain_labels.clone();
            for (i, &e) in labeled.iter().enumerate() {
                insert_legs(&mut vs, &mut ls, e, ks[i], &h);
            }
            out.add(&Diagram::new(skel.clone(), vs, ls)?, &coeff)?;
        }
        // next tuple with sum <= budget
        let mut i = 0;
        loop {
            if i == ks.len() {
                return Ok(out);
            }
            ks[i] += 1;
            if ks.iter().sum::<usize>() <= budget {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
    }
}

/// At a trivalent vertex, `t` on all three incoming sides is trivial, so one
/// incoming `t^k` may be traded for `t^(-k)` on the other two incoming sides.
const VERTEX_SHIFT: i64 = -1;

/// Multiplies the label of `dart`'s edge, as read towards `dart`'s vertex, by `m`.
fn mul_incoming(labels: &mut [Option<Label>], dart: Dart, m: &LaurentPoly) -> Result<()> {
    let e = dart / 2;
    let factor = if dart % 2 == 1 { m.clone() } else { m.invert_t() };
    let f = Label::poly(factor);
    labels[e] = match labels[e].take() {
        None => Some(f),
        Some(l) => Some(l.mul(&f)?),
    }
    .filter(|l| !l.is_identity());
    Ok(())
}

/// Pushes a `t^k` label on `edge` through its endpoint `vertex`.
pub fn move_label(d: &Diagram, edge: usize, vertex: usize) -> Result<LinearCombo> {
    let mut out = LinearCombo::new();
    let label = match d.label(edge) {
        None => {
            out.add(d, &Rational::one())?;
            return Ok(out);
        }
        Some(l) => l,
    };
    let k = label
        .as_t_power()
        .ok_or_else(|| Error::UnsupportedLabel(format!("{label} is not a power of t")))?;
    let (a, b) = (d.vertex_of(2 * edge), d.vertex_of(2 * edge + 1));
    if a == b {
        return Err(Error::UnsupportedLabel("label on a loop edge".into()));
    }
    let here = if b == vertex {
        2 * edge + 1
    } else if a == vertex {
        2 * edge
    } else {
        return Err(Error::SiteNotFound(format!("vertex {vertex} is not an end of edge {edge}")));
    };
    let incoming = if here % 2 == 1 { k } else { -k };
    let (skel, vertices, mut labels) = d.clone().into_parts();
    labels[edge] = None;
    match &vertices[vertex] {
        Vertex::Tri(ds) => {
            let m = LaurentPoly::t_pow(VERTEX_SHIFT * incoming);
            for &x in ds.iter().filter(|&&x| x != here) {
                mul_incoming(&mut labels, x, &m)?;
            }
        }
        Vertex::Uni { leg, .. } => {
            if leg.label != "h" || leg.pos.is_some() {
                return Err(Error::UnsupportedLabel(format!("cannot move a label through leg {}", leg.label)));
            }
        }
    }
    out.add(&Diagram::new(skel, vertices, labels)?, &Rational::one())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_laurent, rat};
    use crate::diagram::shapes;

    fn factorial(n: usize) -> Rational {
        (1..=n).fold(Rational::one(), |a, k| a * rat(k as i64, 1))
    }

    /// Theta with `k` h-legs inserted on edge 0 by hand.
    fn theta_with_legs(k: usize) -> Diagram {
        let t = shapes::theta();
        let (s, mut v, mut l) = t.into_parts();
        insert_legs(&mut v, &mut l, 0, k, &Leg::mark("h"));
        Diagram::new(s, v, l).unwrap()
    }

    #[test]
    fn identity_label_is_dropped() {
        let d = shapes::theta_labeled([Some(Label::poly(LaurentPoly::one())), None, None]);
        assert!(!d.has_labels());
        let c = expand_labels(&d, 5, None).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff_of(&shapes::theta()).unwrap(), rat(1, 1));
    }

    #[test]
    fn t_label_expands_to_exponential() {
        let d = shapes::theta_labeled([Some(Label::t_pow(1)), None, None]);
        let c = expand_labels(&d, 6, None).unwrap();
        for k in 0..=5 {
            // some leg counts give a diagram equal to its own negative
            let got = c.coeff_of(&theta_with_legs(k)).unwrap();
            if crate::diagram::canonicalize(&theta_with_legs(k)).unwrap().sign == 0 {
                assert!(got.is_zero());
            } else {
                assert_eq!(got, factorial(k).recip(), "k = {k}");
            }
        }
    }

    #[test]
    fn v_label_on_theta() {
        let d = shapes::theta_labeled([Some(Label::poly(parse_laurent("t - t^-1").unwrap())), None, None]);
        let s = label_series(d.label(0).unwrap(), 3, None).unwrap();
        assert_eq!(s.coeffs(), &[rat(0, 1), rat(2, 1), rat(0, 1), rat(1, 3)]);
        let c = expand_labels(&d, 4, None).unwrap();
        // one leg on a theta edge is killed by the vertex-swapping automorphism
        assert_eq!(crate::diagram::canonicalize(&theta_with_legs(1)).unwrap().sign, 0);
        assert!(c.coeff_of(&theta_with_legs(1)).unwrap().is_zero());
        let three = crate::diagram::canonicalize(&theta_with_legs(3)).unwrap();
        if three.sign == 0 {
            assert!(c.is_empty());
        } else {
            assert_eq!(c.coeff_of(&theta_with_legs(3)).unwrap(), rat(1, 3));
            assert_eq!(c.len(), 1);
        }
    }

    #[test]
    fn delta_requires_context() {
        let d = shapes::theta_labeled([Some(Label::over_delta(LaurentPoly::one(), 1)), None, None]);
        assert_eq!(expand_labels(&d, 3, None).unwrap_err(), Error::MissingDelta);
        let delta = AlexanderPoly::genus_one(1);
        assert!(expand_labels(&d, 3, Some(&delta)).is_ok());
    }

    #[test]
    fn scaling_label_scales_coefficients() {
        let p = parse_laurent("2*t + 3 - t^-2").unwrap();
        let d1 = shapes::theta_labeled([Some(Label::poly(p.clone())), None, None]);
        let d5 = shapes::theta_labeled([Some(Label::poly(p.scale(&rat(5, 1)))), None, None]);
        let c1 = expand_labels(&d1, 5, None).unwrap();
        let c5 = expand_labels(&d5, 5, None).unwrap();
        assert_eq!(c1.scale(&rat(5, 1)), c5);
    }

    #[test]
    fn move_through_h_leg_drops_label() {
        let d = shapes::strut(Leg::mark("h"), Leg::mark("x"), Some(Label::t_pow(2)));
        let c = move_label(&d, 0, 0).unwrap();
        let plain = shapes::strut(Leg::mark("h"), Leg::mark("x"), None);
        assert_eq!(c.coeff_of(&plain).unwrap(), rat(1, 1));
        assert!(move_label(&d, 0, 1).is_err());
    }

    #[test]
    fn move_rejects_non_powers() {
        let d = shapes::theta_labeled([Some(Label::poly(LaurentPoly::u())), None, None]);
        assert!(matches!(move_label(&d, 0, 0), Err(Error::UnsupportedLabel(_))));
    }
}
