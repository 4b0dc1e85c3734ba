//! The sl2 weight system on open diagrams, normalized by the trace form of
//! the 2-dimensional representation, with values in `Q[c]` where `c` is the
//! Casimir element of `S(sl2)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{rat, Rational};
use crate::diagram::{shapes, Diagram, LinearCombo, Vertex};
use crate::error::{Error, Result};

/// A polynomial in `c` carrying the degree of the diagrams it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CasimirPoly {
    /// `coeffs[i]` multiplies `c^i`; no trailing zeros.
    pub coeffs: Vec<Rational>,
    pub grading: usize,
}

impl CasimirPoly {
    pub fn zero(grading: usize) -> Self {
        Self { coeffs: vec![], grading }
    }

    pub fn monomial(q: Rational, power: usize, grading: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = q;
        Self { coeffs, grading }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|q| q.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_scaled(&mut self, other: &CasimirPoly, q: &Rational) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * q;
        }
        *self = std::mem::replace(self, Self::zero(0)).trimmed();
    }

    /// `self / other` when both are the same monomial up to a constant.
    pub fn ratio(&self, other: &CasimirPoly) -> Option<Rational> {
        if other.is_zero() || self.coeffs.len() != other.coeffs.len() {
            return None;
        }
        let top = self.coeffs.len() - 1;
        let q = &self.coeffs[top] / &other.coeffs[top];
        (0..top).all(|i| self.coeffs[i] == &other.coeffs[i] * &q).then_some(q)
    }
}

impl fmt::Display for CasimirPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, q) in self.coeffs.iter().enumerate().rev().filter(|(_, q)| !q.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{q}")?,
                1 => write!(f, "({q})*c")?,
                _ => write!(f, "({q})*c^{i}")?,
            }
        }
        write!(f, " [h^{}]", self.grading)
    }
}

fn check_input(d: &Diagram) -> Result<()> {
    if d.has_labels() {
        return Err(Error::UnexpandedLabel);
    }
    if !d.skeleton().is_marks() {
        return Err(Error::SkeletonMismatch("sl2 weights take diagrams without a skeleton".into()));
    }
    if let Some((_, _, l)) = d.legs().find(|(_, _, l)| l.label != "h") {
        return Err(Error::InvalidArgument(format!("leg marked {}; expected h", l.label)));
    }
    Ok(())
}

/// Ports are darts; `mate` pairs the two ends of each current edge.
#[derive(Clone)]
struct Wires {
    mate: Vec<usize>,
    /// Cyclic ports of each live trivalent vertex.
    tri: BTreeMap<usize, [usize; 3]>,
    is_leg: Vec<bool>,
}

impl Wires {
    fn new(d: &Diagram) -> Self {
        let n = 2 * d.num_edges();
        let mut is_leg = vec![false; n];
        let mut tri = BTreeMap::new();
        for (v, x) in d.vertices().iter().enumerate() {
            match x {
                Vertex::Tri(ds) => {
                    tri.insert(v, *ds);
                }
                Vertex::Uni { dart, .. } => is_leg[*dart] = true,
            }
        }
        Self { mate: (0..n).map(|p| p ^ 1).collect(), tri, is_leg }
    }

    fn owner(&self, p: usize) -> Option<usize> {
        self.tri.iter().find(|(_, ps)| ps.contains(&p)).map(|(&v, _)| v)
    }

    /// `Some(tri-tri edge)` to contract, or `None` when the value is zero
    /// or there is nothing left to contract.
    fn pick(&self) -> std::result::Result<Option<(usize, usize, usize)>, ()> {
        for ps in self.tri.values() {
            let mut legs = 0;
            for &p in ps {
                let q = self.mate[p];
                if ps.contains(&q) {
                    return Err(());
                }
                if self.is_leg[q] {
                    legs += 1;
                }
            }
            if legs >= 2 {
                return Err(());
            }
        }
        for (&v, ps) in &self.tri {
            for &p in ps {
                if let Some(w) = self.owner(self.mate[p]) {
                    if w != v {
                        return Ok(Some((v, w, p)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Removes `u`, `v` and the edge from port `eu`, reconnecting the other
    /// ports of `u` to those of `v` by `ident`. Returns the number of closed
    /// circles formed.
    fn reconnect(&mut self, u: usize, v: usize, ident: &[(usize, usize)]) -> usize {
        let mut removed: Vec<usize> = self.tri[&u].iter().chain(&self.tri[&v]).copied().collect();
        self.tri.remove(&u);
        self.tri.remove(&v);
        let mut id = BTreeMap::new();
        for &(a, b) in ident {
            id.insert(a, b);
            id.insert(b, a);
        }
        removed.retain(|p| id.contains_key(p));
        let mut seen = std::collections::HashSet::new();
        let mut updates = vec![];
        for &start in &removed {
            let x = self.mate[start];
            if id.contains_key(&x) || seen.contains(&start) {
                continue;
            }
            // x is outside; walk through the identified pair chain
            let mut cur = start;
            let y = loop {
                seen.insert(cur);
                let q = id[&cur];
                seen.insert(q);
                let y = self.mate[q];
                if !id.contains_key(&y) {
                    break y;
                }
                cur = y;
            };
            seen.insert(self.mate[y]);
            updates.push((x, y));
        }
        let mut circles = 0;
        for &p in &removed {
            if seen.contains(&p) {
                continue;
            }
            circles += 1;
            let mut cur = p;
            loop {
                seen.insert(cur);
                let q = id[&cur];
                seen.insert(q);
                cur = self.mate[q];
                if cur == p {
                    break;
                }
            }
        }
        for (x, y) in updates {
            self.mate[x] = y;
            self.mate[y] = x;
        }
        circles
    }
}

fn rotate(ps: [usize; 3], first: usize) -> [usize; 3] {
    let i = ps.iter().position(|&p| p == first).expect("port on vertex");
    [ps[i], ps[(i + 1) % 3], ps[(i + 2) % 3]]
}

fn dim_power(k: usize) -> Rational {
    Rational::from_integer(3.into()).pow(k as i32)
}

fn evaluate(w: Wires) -> CasimirPoly {
    match w.pick() {
        Err(()) => CasimirPoly::zero(0),
        Ok(None) => {
            let struts = w.is_leg.iter().filter(|&&b| b).count() / 2;
            CasimirPoly::monomial(Rational::one(), struts, 0)
        }
        Ok(Some((u, v, eu))) => {
            // f_{abe} f_{ecd} = -2 (d_ac d_bd - d_ad d_bc) for the trace form
            let [_, a, b] = rotate(w.tri[&u], eu);
            let [_, c, d] = rotate(w.tri[&v], w.mate[eu]);
            let mut out = CasimirPoly::zero(0);
            for (ident, sign) in [([(a, c), (b, d)], -2), ([(a, d), (b, c)], 2)] {
                let mut next = w.clone();
                let circles = next.reconnect(u, v, &ident);
                out.add_scaled(&evaluate(next), &(rat(sign, 1) * dim_power(circles)));
            }
            out
        }
    }
}

/// The weight of a single diagram, by contracting one edge between two
/// trivalent vertices at a time.
pub fn sl2_weight(d: &Diagram) -> Result<CasimirPoly> {
    check_input(d)?;
    let mut p = evaluate(Wires::new(d));
    p.grading = d.degree();
    Ok(p)
}

/// Weights of a combination, one polynomial per degree present.
pub fn sl2_weight_combo(c: &LinearCombo) -> Result<BTreeMap<usize, CasimirPoly>> {
    let mut out: BTreeMap<usize, CasimirPoly> = BTreeMap::new();
    for (_, d, q) in c.iter() {
        let w = sl2_weight(d)?;
        out.entry(w.grading).or_insert_with(|| CasimirPoly::zero(w.grading)).add_scaled(&w, q);
    }
    out.retain(|_, p| !p.is_zero());
    Ok(out)
}

/// Basis `(H, E, F)` with `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H`.
struct Sl2Tables {
    f: [[[Rational; 3]; 3]; 3],
    inv_form: [[Rational; 3]; 3],
}

impl Sl2Tables {
    fn new() -> Self {
        let z = || Rational::zero();
        let r = |n: i64| rat(n, 1);
        let bracket = |a: usize, b: usize| -> [Rational; 3] {
            match (a, b) {
                (0, 1) => [z(), r(2), z()],
                (1, 0) => [z(), r(-2), z()],
                (0, 2) => [z(), z(), r(-2)],
                (2, 0) => [z(), z(), r(2)],
                (1, 2) => [r(1), z(), z()],
                (2, 1) => [r(-1), z(), z()],
                _ => [z(), z(), z()],
            }
        };
        let form = [[r(2), z(), z()], [z(), z(), r(1)], [z(), r(1), z()]];
        let inv_form = [[rat(1, 2), z(), z()], [z(), z(), r(1)], [z(), r(1), z()]];
        let mut f: [[[Rational; 3]; 3]; 3] = Default::default();
        for a in 0..3 {
            for b in 0..3 {
                let x = bracket(a, b);
                for c in 0..3 {
                    f[a][b][c] = (0..3).map(|i| &x[i] * &form[i][c]).sum();
                }
            }
        }
        Self { f, inv_form }
    }
}

/// Reference weight by summing over all index assignments. The tensor in
/// `S(sl2)` is evaluated at two points where the Casimir is `1/2` and `2`;
/// both must give the same multiple of `c^(legs/2)`.
pub fn sl2_brute(d: &Diagram) -> Result<CasimirPoly> {
    check_input(d)?;
    if d.vertices().len() > 8 {
        return Err(Error::TooLarge(format!("{} vertices; the tensor oracle takes at most 8", d.vertices().len())));
    }
    let t = Sl2Tables::new();
    let legs = d.num_legs();
    let grading = d.degree();
    if legs % 2 == 1 {
        return Ok(CasimirPoly::zero(grading));
    }
    let points = [([Rational::one(), Rational::zero(), Rational::zero()], rat(1, 2)), ([Rational::zero(), rat(1, 1), rat(1, 1)], rat(2, 1))];
    let mut kappa = None;
    for (pt, casimir) in points {
        let v = contract(d, &t, &pt) / casimir.pow((legs / 2) as i32);
        if kappa.as_ref().is_some_and(|k| *k != v) {
            return Err(Error::InvalidArgument("tensor is not a multiple of a Casimir power".into()));
        }
        kappa = Some(v);
    }
    Ok(CasimirPoly::monomial(kappa.expect("two points"), legs / 2, grading))
}

struct Contraction<'a> {
    d: &'a Diagram,
    t: &'a Sl2Tables,
    pt: &'a [Rational; 3],
    pairs: Vec<(usize, usize)>,
    /// Vertices whose last dart belongs to each edge.
    ready: Vec<Vec<usize>>,
    idx: Vec<usize>,
}

impl Contraction<'_> {
    fn go(&mut self, e: usize, acc: Rational) -> Rational {
        if e == self.ready.len() {
            return acc;
        }
        let mut total = Rational::zero();
        for k in 0..self.pairs.len() {
            let (i, j) = self.pairs[k];
            self.idx[2 * e] = i;
            self.idx[2 * e + 1] = j;
            let mut w = &acc * &self.t.inv_form[i][j];
            for &v in &self.ready[e] {
                match &self.d.vertices()[v] {
                    Vertex::Tri([x, y, z]) => w *= &self.t.f[self.idx[*x]][self.idx[*y]][self.idx[*z]],
                    Vertex::Uni { dart, .. } => w *= &self.pt[self.idx[*dart]],
                }
            }
            if !w.is_zero() {
                total += self.go(e + 1, w);
            }
        }
        total
    }
}

fn contract(d: &Diagram, t: &Sl2Tables, pt: &[Rational; 3]) -> Rational {
    let pairs = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|&(i, j)| !t.inv_form[i][j].is_zero()).collect();
    let ne = d.num_edges();
    let mut ready = vec![vec![]; ne];
    for v in 0..d.vertices().len() {
        let last = d.darts_of(v).iter().map(|&x| x / 2).max().expect("vertex has darts");
        ready[last].push(v);
    }
    Contraction { d, t, pt, pairs, ready, idx: vec![0; 2 * ne] }.go(0, Rational::one())
}

/// True when the sl2 image of `c` is nonzero, which certifies `c != 0`.
/// Inputs the weight system cannot take give `false`.
pub fn nonvanishing_certificate(c: &LinearCombo) -> bool {
    sl2_weight_combo(c).is_ok_and(|m| !m.is_empty())
}

/// `D_{n,d}`: a wheel with `2d` legs whose rim carries `n - 1` bubbles, so
/// that it has `n` loops. Leading diagram of an `n`-loop clasper with `2d`
/// leaves.
pub fn family_diagram(n: usize, d: usize) -> Diagram {
    assert!(n >= 1 && d >= 1);
    shapes::wheel_with_bubbles(2 * d, n - 1, "h")
}

/// The normalizing factor `4^(n-1) * 2 * (2c)^d`.
pub fn family_target(n: usize, d: usize) -> CasimirPoly {
    let q = rat(4, 1).pow((n - 1) as i32) * rat(2, 1) * rat(2, 1).pow(d as i32);
    CasimirPoly::monomial(q, d, n - 1 + 2 * d)
}

/// Result of comparing `sl2_weight(D_{n,d})` against `family_target`.
#[derive(Clone, Debug)]
pub struct FamilyCheck {
    pub rows: Vec<(usize, usize, CasimirPoly, Option<Rational>)>,
    pub constant: bool,
    pub nonzero: bool,
}

pub fn family_check(pairs: &[(usize, usize)]) -> Result<FamilyCheck> {
    let mut rows = vec![];
    for &(n, d) in pairs {
        let w = sl2_weight(&family_diagram(n, d))?;
        let r = w.ratio(&family_target(n, d));
        rows.push((n, d, w, r));
    }
    let first = rows.first().and_then(|r| r.3.clone());
    let constant = first.is_some() && rows.iter().all(|r| r.3 == first);
    let nonzero = first.is_some_and(|q| !q.is_zero());
    Ok(FamilyCheck { rows, constant, nonzero })
}

#[cfg(test)]
mod tests;
