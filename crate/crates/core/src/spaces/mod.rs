//! Graded quotient spaces of diagrams modulo AS, IHX and STU.
//!
//! AS is absorbed by canonical signs, so a quotient is the span of canonical
//! codes modulo the IHX and STU rows generated at every site of every
//! enumerated diagram, computed one degree at a time.

mod enumerate;
mod membership;
mod pbw;
pub mod quotient;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;

pub use enumerate::{grow_all, ConnectedLibrary, Target};
pub use membership::{in_at, in_e, label_assignments};
pub use pbw::{chi, chi_inverse, ChiInverse};

use crate::algebra::{AlexanderPoly, Rational};
use crate::diagram::{apply_ihx, apply_stu, canonicalize, expand_labels, Diagram, LinearCombo, Skeleton, Vertex};
use crate::error::{Error, Result};
use quotient::{Row, Rref};

pub const DEFAULT_MAX_DEGREE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Open diagrams, every component has a leg.
    B,
    /// Connected open diagrams (legless ones allowed).
    Bconn,
    /// Connected open diagrams with first Betti number `n`.
    Bn(usize),
    /// Diagrams on oriented lines named by the marks.
    ALine,
    /// Open diagrams, legless components allowed.
    AMarks,
    /// Labels in `{t, 1/t}` on diagrams with legs marked by the marks.
    At,
    /// Connected legless `n`-loop diagrams labeled by `t^k / Delta`, `|k| <= m`.
    E0 { n: usize, m: usize, delta: Vec<i64> },
    /// As `E0` with labels `(t^k - 1) / Delta`.
    E1 { n: usize, m: usize, delta: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceId {
    pub kind: SpaceKind,
    pub marks: Vec<String>,
    pub degree: usize,
}

impl SpaceId {
    pub fn new(kind: SpaceKind, marks: &[&str], degree: usize) -> Self {
        Self { kind, marks: marks.iter().map(|s| s.to_string()).collect(), degree }
    }

    pub fn skeleton(&self) -> Skeleton {
        match self.kind {
            SpaceKind::ALine => Skeleton::lines(&self.marks),
            _ => Skeleton::marks(),
        }
    }

    fn delta(&self) -> Result<Option<AlexanderPoly>> {
        match &self.kind {
            SpaceKind::E0 { delta, .. } | SpaceKind::E1 { delta, .. } => AlexanderPoly::from_u_coeffs(delta).map(Some),
            _ => Ok(None),
        }
    }

    fn is_labeled(&self) -> bool {
        matches!(self.kind, SpaceKind::At | SpaceKind::E0 { .. } | SpaceKind::E1 { .. })
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match &self.kind {
            SpaceKind::B => write!(f, "B")?,
            SpaceKind::Bconn => write!(f, "Bconn")?,
            SpaceKind::Bn(n) => write!(f, "Bn:{n}")?,
            SpaceKind::ALine => write!(f, "A_line")?,
            SpaceKind::AMarks => write!(f, "A_marks")?,
            SpaceKind::At => write!(f, "At")?,
            SpaceKind::E0 { n, m, delta } => write!(f, "E0:{n},{m},[{}]", list(delta))?,
            SpaceKind::E1 { n, m, delta } => write!(f, "E1:{n},{m},[{}]", list(delta))?,
        }
        write!(f, "@{}", self.marks.join(","))
    }
}

/// Parses `Kind[:params][@marks]`, e.g. `Bn:2`, `B@x`, `A_line@x`,
/// `E0:2,1,[1]@h` (the bracket lists the `u`-coefficients of Delta). Marks
/// default to `h` for open spaces and `x` for lines. The degree is 0; set it
/// separately.
impl FromStr for SpaceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown space '{s}'"));
        let (head, marks) = match s.rsplit_once('@') {
            Some((h, m)) => (h, Some(m)),
            None => (s, None),
        };
        let (name, params) = match head.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (head, None),
        };
        let int = |p: &str| p.trim().parse::<usize>().map_err(|_| bad());
        let e_params = |p: Option<&str>| -> Result<(usize, usize, Vec<i64>)> {
            let p = p.ok_or_else(bad)?;
            let (nm, delta) = match p.split_once('[') {
                Some((a, b)) => (a.trim_end_matches(','), b.trim_end_matches(']')),
                None => (p, ""),
            };
            let mut it = nm.split(',');
            let n = int(it.next().ok_or_else(bad)?)?;
            let m = int(it.next().ok_or_else(bad)?)?;
            let delta = delta
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            Ok((n, m, delta))
        };
        let kind = match name {
            "B" => SpaceKind::B,
            "Bconn" => SpaceKind::Bconn,
            "Bn" => SpaceKind::Bn(int(params.ok_or_else(bad)?)?),
            "A_line" => SpaceKind::ALine,
            "A_marks" => SpaceKind::AMarks,
            "At" => SpaceKind::At,
            "E0" => {
                let (n, m, delta) = e_params(params)?;
                SpaceKind::E0 { n, m, delta }
            }
            "E1" => {
                let (n, m, delta) = e_params(params)?;
                SpaceKind::E1 { n, m, delta }
            }
            _ => return Err(bad()),
        };
        let default = if kind == SpaceKind::ALine { "x" } else { "h" };
        let marks: Vec<String> = marks.unwrap_or(default).split(',').map(|m| m.trim().to_string()).collect();
        if marks.iter().any(|m| m.is_empty()) {
            return Err(bad());
        }
        Ok(SpaceId { kind, marks, degree: 0 })
    }
}

/// All diagrams of the space by degree `0..=spec.degree`, one per isomorphism
/// class (including classes equal to their own negative), ordered by degree
/// then canonical code. Labeled spaces are listed in slot 0.
pub fn enumerate_by_degree(spec: &SpaceId) -> Result<Vec<Vec<Diagram>>> {
    enumerate_by_degree_with_max(spec, DEFAULT_MAX_DEGREE)
}

pub fn enumerate_by_degree_with_max(spec: &SpaceId, max_degree: usize) -> Result<Vec<Vec<Diagram>>> {
    if spec.degree > max_degree {
        return Err(Error::TooLarge(format!("degree {} exceeds the cutoff {max_degree}", spec.degree)));
    }
    let marks = &spec.marks;
    let d = spec.degree;
    let levels = match &spec.kind {
        SpaceKind::B | SpaceKind::AMarks => {
            let targets: Vec<Target> = marks.iter().map(|m| Target::Mark(m.clone())).collect();
            grow_all(&targets, &Skeleton::marks(), d, spec.kind == SpaceKind::AMarks)?
        }
        SpaceKind::ALine => {
            let targets: Vec<Target> = marks.iter().map(|m| Target::Line(m.clone())).collect();
            grow_all(&targets, &spec.skeleton(), d, false)?
        }
        SpaceKind::Bconn => {
            let mut lib = ConnectedLibrary::new(marks);
            (0..=d).map(|k| if k == 0 { Ok(vec![]) } else { lib.of_degree(k, 0) }).collect::<Result<_>>()?
        }
        SpaceKind::Bn(n) => {
            let mut lib = ConnectedLibrary::new(marks);
            (0..=d)
                .map(|k| if k + 1 >= *n && k > 0 { lib.get(*n, k + 1 - n) } else { Ok(vec![]) })
                .collect::<Result<_>>()?
        }
        SpaceKind::At | SpaceKind::E0 { .. } | SpaceKind::E1 { .. } => vec![label_assignments(spec)?],
    };
    Ok(levels)
}

pub fn enumerate_diagrams(spec: &SpaceId) -> Result<Vec<Diagram>> {
    Ok(enumerate_by_degree(spec)?.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    /// Columns eliminated in increasing canonical-code order.
    Forward,
    Reverse,
}

#[derive(Clone, Copy, Debug)]
pub struct QuotientOptions {
    pub order: PivotOrder,
    pub parallel: bool,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        Self { order: PivotOrder::Forward, parallel: true }
    }
}

/// One degree of a quotient.
#[derive(Clone, Debug)]
pub struct Block {
    pub degree: usize,
    /// Canonical codes of the nonzero generators, ascending.
    pub codes: Vec<Vec<u8>>,
    pub reps: Vec<Diagram>,
    index: HashMap<Vec<u8>, usize>,
    order: PivotOrder,
    rref: Rref,
    /// Positions (into `codes`) of the basis elements.
    pub basis: Vec<usize>,
    pub relations: Vec<Row>,
}

impl Block {
    fn col(&self, i: usize) -> usize {
        match self.order {
            PivotOrder::Forward => i,
            PivotOrder::Reverse => self.codes.len() - 1 - i,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a combination of this degree.
    pub fn coords(&self, c: &LinearCombo) -> Result<Vec<Rational>> {
        let mut row = Row::new();
        for (code, _, q) in c.iter() {
            let i = *self.index.get(code).ok_or_else(|| Error::NotInSpace(format!("term outside degree {}", self.degree)))?;
            let e = row.entry(self.col(i)).or_insert_with(Rational::zero);
            *e += q;
        }
        row.retain(|_, v| !v.is_zero());
        self.rref.reduce(&mut row);
        Ok(self.basis.iter().map(|&i| row.get(&self.col(i)).cloned().unwrap_or_else(Rational::zero)).collect())
    }

    pub fn basis_diagrams(&self) -> Vec<&Diagram> {
        self.basis.iter().map(|&i| &self.reps[i]).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Basis {
    pub space: SpaceId,
    pub blocks: Vec<Block>,
}

impl Basis {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn block(&self, degree: usize) -> Option<&Block> {
        self.blocks.get(degree)
    }

    /// Coordinates in the concatenated basis, degree by degree.
    pub fn coords(&self, c: &LinearCombo) -> Result<Vec<Rational>> {
        let mut by_degree: BTreeMap<usize, LinearCombo> = BTreeMap::new();
        for (code, d, q) in c.iter() {
            by_degree.entry(d.degree()).or_default().add_canonical(code.to_vec(), d.clone(), q);
        }
        let mut out = vec![];
        for b in &self.blocks {
            match by_degree.remove(&b.degree) {
                Some(part) => out.extend(b.coords(&part)?),
                None => out.extend(std::iter::repeat_n(Rational::zero(), b.dim())),
            }
        }
        if let Some((deg, _)) = by_degree.into_iter().next() {
            return Err(Error::NotInSpace(format!("degree {deg} is beyond the cutoff")));
        }
        Ok(out)
    }

    /// The combination of basis diagrams with the given coordinates.
    pub fn combo(&self, coords: &[Rational]) -> Result<LinearCombo> {
        let mut out = LinearCombo::new();
        let mut it = coords.iter();
        for b in &self.blocks {
            for &i in &b.basis {
                let q = it.next().ok_or_else(|| Error::ShapeMismatch("too few coordinates".into()))?;
                out.add_canonical(b.codes[i].clone(), b.reps[i].clone(), q);
            }
        }
        Ok(out)
    }
}

/// Relations at every site of `d`, as combinations that vanish in the quotient.
pub fn relations_of(d: &Diagram) -> Result<Vec<LinearCombo>> {
    let mut out = vec![];
    let this = LinearCombo::from_diagram(d)?;
    for e in 0..d.num_edges() {
        let (a, b) = (d.vertex_of(2 * e), d.vertex_of(2 * e + 1));
        let internal = a != b
            && d.label(e).is_none()
            && matches!(d.vertices()[a], Vertex::Tri(_))
            && matches!(d.vertices()[b], Vertex::Tri(_));
        if internal {
            let mut c = this.clone();
            for (q, t) in apply_ihx(d, e)? {
                c.add(&t, &-q)?;
            }
            out.push(c);
        }
    }
    for line in d.skeleton().lines.iter().chain(&d.skeleton().circles) {
        let k = d.legs_with_label(line) as u32;
        for p in 0..k.saturating_sub(1) {
            let mut c = this.clone();
            for (q, t) in apply_stu(d, line, p)? {
                c.add(&t, &-q)?;
            }
            out.push(c);
        }
    }
    Ok(out)
}

fn build_block(degree: usize, diagrams: &[Diagram], opts: QuotientOptions) -> Result<Block> {
    let mut codes = vec![];
    let mut reps = vec![];
    for d in diagrams {
        let c = canonicalize(d)?;
        if c.sign != 0 {
            codes.push(c.code);
            reps.push(c.diagram);
        }
    }
    let mut pairs: Vec<(Vec<u8>, Diagram)> = codes.into_iter().zip(reps).collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    pairs.dedup_by(|a, b| a.0 == b.0);
    let (codes, reps): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let index: HashMap<Vec<u8>, usize> = codes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut block = Block { degree, codes, reps, index, order: opts.order, rref: Rref::default(), basis: vec![], relations: vec![] };

    let rels: Vec<Vec<LinearCombo>> = if opts.parallel {
        diagrams.par_iter().map(relations_of).collect::<Result<_>>()?
    } else {
        diagrams.iter().map(relations_of).collect::<Result<_>>()?
    };
    let mut rows = vec![];
    for c in rels.into_iter().flatten() {
        let mut row = Row::new();
        for (code, _, q) in c.iter() {
            let i = *block
                .index
                .get(code)
                .ok_or_else(|| Error::NotInSpace(format!("relation leaves the enumerated set in degree {degree}")))?;
            row.insert(block.col(i), q.clone());
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    block.rref = Rref::build(rows.iter().cloned());
    block.relations = rows;
    block.basis = (0..block.codes.len()).filter(|&i| !block.rref.is_pivot(block.col(i))).collect();
    Ok(block)
}

pub fn quotient_basis(spec: &SpaceId) -> Result<Basis> {
    quotient_basis_with(spec, QuotientOptions::default())
}

pub fn quotient_basis_with(spec: &SpaceId, opts: QuotientOptions) -> Result<Basis> {
    if spec.is_labeled() {
        return labeled_span(spec, opts);
    }
    let levels = enumerate_by_degree(spec)?;
    let blocks = levels
        .iter()
        .enumerate()
        .map(|(deg, ds)| build_block(deg, ds, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(Basis { space: spec.clone(), blocks })
}

/// For labeled spaces: expand every generator into the unlabeled space with
/// an extra `h` mark and keep a maximal independent set of generators. The
/// result has a single block listing those generators.
fn labeled_span(spec: &SpaceId, opts: QuotientOptions) -> Result<Basis> {
    let target = expansion_target(spec);
    let basis = quotient_basis_with(&target, opts)?;
    let delta = spec.delta()?;
    let gens = label_assignments(spec)?;
    let mut rows: Vec<Row> = vec![];
    let mut keep = vec![];
    let mut rref = Rref::default();
    let mut codes = vec![];
    let mut reps = vec![];
    for g in &gens {
        let c = canonicalize(g)?;
        let x = expand_labels(g, spec.degree, delta.as_ref())?;
        let v = basis.coords(&x)?;
        let mut row: Row = v.into_iter().enumerate().filter(|(_, q)| !q.is_zero()).collect();
        let mut probe = row.clone();
        rref.reduce(&mut probe);
        if !probe.is_empty() {
            keep.push(codes.len());
            rows.push(std::mem::take(&mut row));
            rref = Rref::build(rows.iter().cloned());
        }
        codes.push(c.code);
        reps.push(c.diagram);
    }
    let index = codes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let block = Block {
        degree: 0,
        codes,
        reps,
        index,
        order: opts.order,
        rref: Rref::default(),
        basis: keep,
        relations: vec![],
    };
    Ok(Basis { space: spec.clone(), blocks: vec![block] })
}

/// The unlabeled space that a labeled space expands into.
pub fn expansion_target(spec: &SpaceId) -> SpaceId {
    let mut marks = spec.marks.clone();
    if !marks.iter().any(|m| m == "h") {
        marks.push("h".into());
    }
    let kind = match spec.kind {
        SpaceKind::E0 { n, .. } | SpaceKind::E1 { n, .. } => SpaceKind::Bn(n),
        _ => SpaceKind::AMarks,
    };
    SpaceId { kind, marks, degree: spec.degree }
}

pub fn coords(c: &LinearCombo, basis: &Basis) -> Result<Vec<Rational>> {
    basis.coords(c)
}

#[cfg(test)]
mod tests;
