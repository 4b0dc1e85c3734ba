//! Concrete two- and three-loop computations: the genus-one generators and
//! their low-degree coordinates, the closed-form solve, the knot-example
//! determinants, the `Theta^n_m` index set, the three-loop set and the crude
//! dimension bound.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{rat, AlexanderPoly, Rational};
use crate::diagram::{expand_labels, parse_diagrams, Diagram, LinearCombo};
use crate::error::{Error, Result};
use crate::spaces::{quotient_basis, Basis, ConnectedLibrary, SpaceId, SpaceKind};

const TWO_LOOP_DATA: &str = include_str!("../data/two_loop.diag");
const XSET_DATA: &str = include_str!("../data/xset3.diag");

/// Degree cutoff needed to see the degree-5 coordinate.
pub const TWO_LOOP_CUTOFF: usize = 5;

struct TwoLoopShapes {
    theta1: Diagram,
    theta2_main: Diagram,
    theta2_corr: Diagram,
    h1: Diagram,
    h2: Diagram,
}

fn two_loop_shapes() -> Result<TwoLoopShapes> {
    let mut ds = parse_diagrams(TWO_LOOP_DATA)?.into_iter();
    let mut next = || ds.next().ok_or_else(|| Error::Malformed("two-loop data is incomplete".into()));
    Ok(TwoLoopShapes { theta1: next()?, theta2_main: next()?, theta2_corr: next()?, h1: next()?, h2: next()? })
}

/// The two-loop quotient through degree 5 and the reference coordinates of
/// `H1` (degree 3) and `H2` (degree 5).
pub struct TwoLoopContext {
    basis: Basis,
    shapes: TwoLoopShapes,
    h1: Rational,
    h2: Rational,
}

impl TwoLoopContext {
    pub fn new() -> Result<Self> {
        let basis = quotient_basis(&SpaceId::new(SpaceKind::Bn(2), &["h"], TWO_LOOP_CUTOFF))?;
        if basis.block(3).map(|b| b.dim()) != Some(1) || basis.block(5).map(|b| b.dim()) != Some(1) {
            return Err(Error::ShapeMismatch(format!("two-loop dims {:?}; expected 1 in degrees 3 and 5", basis.dims())));
        }
        let shapes = two_loop_shapes()?;
        let single = |b: &Basis, d: &Diagram, deg: usize| -> Result<Rational> {
            let q = b.block(deg).expect("checked").coords(&LinearCombo::from_diagram(d)?)?[0].clone();
            if q.is_zero() {
                return Err(Error::Singular);
            }
            Ok(q)
        };
        let h1 = single(&basis, &shapes.h1, 3)?;
        let h2 = single(&basis, &shapes.h2, 5)?;
        Ok(Self { basis, shapes, h1, h2 })
    }

    /// `(H1, H2)` coordinates of the two-loop part of `c` expanded over `delta`.
    fn low_coords(&self, c: &LinearCombo, delta: &AlexanderPoly) -> Result<(Rational, Rational)> {
        let mut two = LinearCombo::new();
        for (_, d, q) in c.iter() {
            for (_, e, r) in expand_labels(d, TWO_LOOP_CUTOFF, Some(delta))?.iter() {
                if e.loop_number() == 2 {
                    two.add(e, &(q * r))?;
                }
            }
        }
        let v = self.basis.coords(&two)?;
        // blocks are 0,1,0,1,0,1 by degree: degree 3 is entry 1, degree 5 entry 2
        Ok((&v[1] / &self.h1, &v[2] / &self.h2))
    }
}

/// The genus-one generators for `Delta = 1 + a u` with their coordinates.
#[derive(Clone, Debug)]
pub struct TwoLoopGenus1 {
    pub a: i64,
    pub theta1: LinearCombo,
    pub theta2: LinearCombo,
    /// `coeffs[i] = (H1, H2)` coordinates of `theta_{i+1}`.
    pub coeffs: [[Rational; 2]; 2],
}

impl TwoLoopGenus1 {
    /// Determinant of the matrix whose columns are the coordinates of
    /// `theta_1` and `theta_2`.
    pub fn independence_det(&self) -> Rational {
        let [[a, c], [b, d]] = &self.coeffs;
        a * d - b * c
    }
}

/// `4a/3 - 1/3`
pub fn theta2_correction(a: i64) -> Rational {
    rat(4 * a - 1, 3)
}

pub fn build_thetas(ctx: &TwoLoopContext, a: i64) -> Result<TwoLoopGenus1> {
    let delta = AlexanderPoly::genus_one(a);
    let theta1 = LinearCombo::from_diagram(&ctx.shapes.theta1)?;
    let mut theta2 = LinearCombo::from_diagram(&ctx.shapes.theta2_main)?;
    theta2.add(&ctx.shapes.theta2_corr, &theta2_correction(a))?;
    let (p1, p2) = ctx.low_coords(&theta1, &delta)?;
    let (q1, q2) = ctx.low_coords(&theta2, &delta)?;
    Ok(TwoLoopGenus1 { a, theta1, theta2, coeffs: [[p1, p2], [q1, q2]] })
}

#[derive(Clone, Debug)]
pub struct TwoLoopSolution {
    pub p: Rational,
    pub q: Rational,
    /// `p theta_1 + q theta_2` written over the three shapes.
    pub expansion: LinearCombo,
}

/// Solves `p theta_1 + q theta_2 = b1 H1 + b2 H2 + ...` by Cramer's rule.
pub fn solve_two_loop(tl: &TwoLoopGenus1, b1: &Rational, b2: &Rational) -> Result<TwoLoopSolution> {
    if 16 * tl.a - 4 == 0 {
        return Err(Error::InvalidArgument("16a - 4 vanishes".into()));
    }
    let det = tl.independence_det();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let [[a, c], [b, d]] = &tl.coeffs;
    let p = (b1 * d - b * b2) / &det;
    let q = (a * b2 - c * b1) / &det;
    let shapes = two_loop_shapes()?;
    let mut expansion = LinearCombo::new();
    expansion.add(&shapes.theta1, &p)?;
    expansion.add(&shapes.theta2_main, &q)?;
    expansion.add(&shapes.theta2_corr, &(&q * theta2_correction(tl.a)))?;
    Ok(TwoLoopSolution { p, q, expansion })
}

/// `((28a - 5) b1 + 6 b2) / (16a - 4)`
pub fn closed_form_p(a: i64, b1: &Rational, b2: &Rational) -> Rational {
    (rat(28 * a - 5, 1) * b1 + rat(6, 1) * b2) / rat(16 * a - 4, 1)
}

/// `((12a - 1) b1 + 6 b2) / (32a - 8)`
pub fn closed_form_q(a: i64, b1: &Rational, b2: &Rational) -> Rational {
    (rat(12 * a - 1, 1) * b1 + rat(6, 1) * b2) / rat(32 * a - 8, 1)
}

/// `((12a - 1) b1 + 6 b2) / 24`, the coefficient of the correction shape.
pub fn closed_form_r(a: i64, b1: &Rational, b2: &Rational) -> Rational {
    (rat(12 * a - 1, 1) * b1 + rat(6, 1) * b2) / rat(24, 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KExamples {
    /// `(theta_1, theta_2)` coefficients of the three knots.
    pub pairs: [(Rational, Rational); 3],
    pub det01: Rational,
    pub det12: Rational,
}

fn det2(x: &(Rational, Rational), y: &(Rational, Rational)) -> Rational {
    &x.0 * &y.1 - &x.1 * &y.0
}

/// Coefficients `(-A/16, A/32)`, `(-A/16 + 1/2, A/32)`, `(-A/16, A/32 - 3/4)`
/// with `A = a(a+1)` and the determinants of consecutive pairs.
pub fn k_examples(a: i64) -> KExamples {
    let big_a = rat(a * (a + 1), 1);
    let x = -&big_a / rat(16, 1);
    let y = &big_a / rat(32, 1);
    let pairs = [(x.clone(), y.clone()), (&x + rat(1, 2), y.clone()), (x, y - rat(3, 4))];
    let det01 = det2(&pairs[0], &pairs[1]);
    let det12 = det2(&pairs[1], &pairs[2]);
    KExamples { pairs, det01, det12 }
}

/// The case split: the first two knots are independent unless `a` is 0 or
/// -1, where the last two are.
pub fn k_examples_split_holds(a: i64) -> bool {
    let k = k_examples(a);
    if a == 0 || a == -1 {
        k.det01.is_zero() && !k.det12.is_zero()
    } else {
        !k.det01.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ThetaMN {
    pub n: usize,
    pub m: usize,
}

/// `{(n, m) : n >= 1, 0 <= 2m <= n <= 2g}`
pub fn theta_mn_set(g: usize) -> Vec<ThetaMN> {
    (1..=2 * g).flat_map(|n| (0..=n / 2).map(move |m| ThetaMN { n, m })).collect()
}

pub fn theta_mn_count(g: usize) -> usize {
    theta_mn_set(g).len()
}

/// The stored three-loop diagrams.
pub fn xset_3loop() -> Result<Vec<Diagram>> {
    parse_diagrams(XSET_DATA)
}

/// Largest loop number the crude bound will enumerate.
pub const CRUDE_BOUND_MAX_LOOPS: usize = 5;

/// Number of connected legless diagrams with `n` loops.
pub fn legless_count(n: usize) -> Result<usize> {
    if n > CRUDE_BOUND_MAX_LOOPS {
        return Err(Error::TooLarge(format!("{n} loops; the enumeration stops at {CRUDE_BOUND_MAX_LOOPS}")));
    }
    Ok(ConnectedLibrary::new(&["h".to_string()]).get(n, 0)?.len())
}

/// `m_n (2g + 5)^(3(n - 1))`
pub fn crude_bound(n: usize, g: usize) -> Result<BigInt> {
    if n < 2 || g < 1 {
        return Err(Error::InvalidArgument("crude bound needs n >= 2 and g >= 1".into()));
    }
    let m = legless_count(n)?;
    let base = BigInt::from(2 * g + 5);
    Ok(BigInt::from(m) * num_traits::pow(base, 3 * (n - 1)))
}
