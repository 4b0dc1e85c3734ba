//! Symmetrization `chi` from free legs to legs on lines, and its inverse.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::{One, Zero};

use super::{build_block, grow_all, Block, PivotOrder, QuotientOptions, Target};
use crate::algebra::Rational;
use crate::diagram::{Diagram, Leg, LinearCombo, Skeleton, Vertex};
use crate::error::{Error, Result};

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = vec![];
    go(&mut vec![], &mut vec![false; k], &mut out);
    out
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |a, i| a * Rational::from_integer(i.into()))
}

/// Leg vertices per mark, in a fixed order.
fn legs_by_label(d: &Diagram) -> BTreeMap<String, Vec<usize>> {
    let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (v, _, leg) in d.legs() {
        out.entry(leg.label.clone()).or_default().push(v);
    }
    out
}

/// Rebuilds `d` on `skeleton` with the given legs replaced.
fn with_leg_map(d: &Diagram, skeleton: &Skeleton, map: &HashMap<usize, Leg>) -> Result<Diagram> {
    let (_, vertices, labels) = d.clone().into_parts();
    let vertices = vertices
        .into_iter()
        .enumerate()
        .map(|(i, v)| match (v, map.get(&i)) {
            (Vertex::Uni { dart, .. }, Some(l)) => Vertex::Uni { dart, leg: l.clone() },
            (v, _) => v,
        })
        .collect();
    Diagram::new(skeleton.clone(), vertices, labels)
}

/// Averages every term over all orders of attaching its legs to the line of
/// the same name.
pub fn chi(c: &LinearCombo, lines: &[String]) -> Result<LinearCombo> {
    let skeleton = Skeleton::lines(lines);
    let mut out = LinearCombo::new();
    for (_, d, q) in c.iter() {
        let groups = legs_by_label(d);
        if let Some(m) = groups.keys().find(|m| !lines.contains(m)) {
            return Err(Error::MissingLine(m.clone()));
        }
        let groups: Vec<(String, Vec<usize>)> = groups.into_iter().collect();
        let perms: Vec<Vec<Vec<usize>>> = groups.iter().map(|(_, vs)| permutations(vs.len())).collect();
        let weight = groups.iter().fold(Rational::one(), |a, (_, vs)| a * factorial(vs.len()));
        let coeff = q / weight;
        let mut idx = vec![0usize; groups.len()];
        loop {
            let mut map = HashMap::new();
            for (g, (line, vs)) in groups.iter().enumerate() {
                for (j, &v) in vs.iter().enumerate() {
                    map.insert(v, Leg::on(line, perms[g][idx[g]][j] as u32));
                }
            }
            out.add(&with_leg_map(d, &skeleton, &map)?, &coeff)?;
            let mut g = 0;
            loop {
                if g == idx.len() {
                    break;
                }
                idx[g] += 1;
                if idx[g] < perms[g].len() {
                    break;
                }
                idx[g] = 0;
                g += 1;
            }
            if g == idx.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Inverse of [`chi`], computed degree by degree in the quotients: `chi` of
/// a basis of the open space is expressed in a basis of the line space and
/// the resulting square matrix is inverted once per degree and line set.
#[derive(Default)]
pub struct ChiInverse {
    cache: HashMap<(Vec<String>, usize), Rc<Degree>>,
}

struct Degree {
    open: Block,
    line: Block,
    /// Row `i`: open-basis coordinates of the `i`-th line basis element.
    inv: Vec<Vec<Rational>>,
}

impl ChiInverse {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns a combination of open diagrams whose image under `chi` equals
    /// `c` modulo relations.
    pub fn apply(&mut self, c: &LinearCombo) -> Result<LinearCombo> {
        let mut parts: BTreeMap<(Vec<String>, usize), LinearCombo> = BTreeMap::new();
        for (code, d, q) in c.iter() {
            parts.entry((d.skeleton().lines.clone(), d.degree())).or_default().add_canonical(code.to_vec(), d.clone(), q);
        }
        let mut out = LinearCombo::new();
        for (key, part) in parts {
            let deg = self.degree(&key.0, key.1)?;
            let y = deg.line.coords(&part)?;
            let mut x = vec![Rational::zero(); deg.open.dim()];
            for (yi, row) in y.iter().zip(&deg.inv) {
                if yi.is_zero() {
                    continue;
                }
                for (xj, r) in x.iter_mut().zip(row) {
                    *xj += yi * r;
                }
            }
            for (q, &i) in x.iter().zip(&deg.open.basis) {
                if !q.is_zero() {
                    out.add_canonical(deg.open.codes[i].clone(), deg.open.reps[i].clone(), q);
                }
            }
        }
        Ok(out)
    }

    fn degree(&mut self, lines: &[String], degree: usize) -> Result<Rc<Degree>> {
        let key = (lines.to_vec(), degree);
        if let Some(d) = self.cache.get(&key) {
            return Ok(d.clone());
        }
        let opts = QuotientOptions { order: PivotOrder::Forward, parallel: true };
        let marks: Vec<Target> = lines.iter().map(|l| Target::Mark(l.clone())).collect();
        let on_lines: Vec<Target> = lines.iter().map(|l| Target::Line(l.clone())).collect();
        let mut open = grow_all(&marks, &Skeleton::marks(), degree, true)?;
        let mut line = grow_all(&on_lines, &Skeleton::lines(lines), degree, true)?;
        let open = build_block(degree, &open.pop().expect("level"), opts)?;
        let line = build_block(degree, &line.pop().expect("level"), opts)?;
        if open.dim() != line.dim() {
            return Err(Error::ShapeMismatch(format!("open and line quotients differ in degree {degree}")));
        }
        let m = open
            .basis_diagrams()
            .into_iter()
            .map(|d| line.coords(&chi(&LinearCombo::from_diagram(d)?, lines)?))
            .collect::<Result<Vec<_>>>()?;
        let inv = invert(m)?;
        let d = Rc::new(Degree { open, line, inv });
        self.cache.insert(key, d.clone());
        Ok(d)
    }
}

/// Gauss-Jordan inverse of a square matrix.
fn invert(mut m: Vec<Vec<Rational>>) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, p);
        inv.swap(col, p);
        let f = m[col][col].recip();
        for j in 0..n {
            m[col][j] *= &f;
            inv[col][j] *= &f;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let (a, b) = (&m[col][j] * &f, &inv[col][j] * &f);
                    m[r][j] -= a;
                    inv[r][j] -= b;
                }
            }
        }
    }
    Ok(inv)
}

pub fn chi_inverse(c: &LinearCombo) -> Result<LinearCombo> {
    ChiInverse::new().apply(c)
}
