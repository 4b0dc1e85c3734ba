//! Spanning sets by growth. Every nonzero diagram arises from a smaller one by
//! one of: adding a strut, inserting a leg into an edge, adding a connected
//! one-leg component, or (for legless graphs) joining the two legs of a
//! diagram with one loop fewer. Diagrams equal to their own negative are kept
//! while growing, since larger nonzero diagrams can grow out of them.

use std::collections::{BTreeMap, HashMap};

use crate::diagram::{canonicalize, shapes, Diagram, Leg, Skeleton};
use crate::error::{Error, Result};

/// Where a new leg may go.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Mark(String),
    Line(String),
}

fn dedupe(into: &mut BTreeMap<Vec<u8>, Diagram>, d: Diagram) -> Result<()> {
    let c = canonicalize(&d)?;
    into.entry(c.code).or_insert(c.diagram);
    Ok(())
}

/// Connected diagrams with free marks, memoized by `(loops, legs)`.
#[derive(Default)]
pub struct ConnectedLibrary {
    marks: Vec<String>,
    cache: HashMap<(usize, usize), Vec<Diagram>>,
    legless: HashMap<usize, Vec<Diagram>>,
}

impl ConnectedLibrary {
    pub fn new(marks: &[String]) -> Self {
        let mut marks = marks.to_vec();
        marks.sort();
        marks.dedup();
        Self { marks, ..Default::default() }
    }

    /// Connected diagrams with `n` loops and `k` legs, one representative per
    /// isomorphism class, ordered by canonical code.
    pub fn get(&mut self, n: usize, k: usize) -> Result<Vec<Diagram>> {
        if let Some(v) = self.cache.get(&(n, k)) {
            return Ok(v.clone());
        }
        let mut out = BTreeMap::new();
        match (n, k) {
            (0, 0) | (0, 1) | (1, 0) => {}
            (0, 2) => {
                for (i, a) in self.marks.iter().enumerate() {
                    for b in &self.marks[i..] {
                        dedupe(&mut out, shapes::strut(Leg::mark(a), Leg::mark(b), None))?;
                    }
                }
            }
            (1, 1) => {
                for m in &self.marks {
                    dedupe(&mut out, shapes::tadpole(Leg::mark(m)))?;
                }
            }
            (n, 0) => {
                for d in self.legless_graphs(n)? {
                    dedupe(&mut out, d)?;
                }
            }
            (n, k) => {
                let smaller = self.get(n, k - 1)?;
                for d in &smaller {
                    for e in 0..d.num_edges() {
                        for m in &self.marks {
                            dedupe(&mut out, d.add_leg_on_edge(e, &Leg::mark(m))?)?;
                        }
                    }
                }
            }
        }
        let v: Vec<Diagram> = out.into_values().collect();
        self.cache.insert((n, k), v.clone());
        Ok(v)
    }

    /// Connected trivalent graphs with first Betti number `n >= 2`.
    fn legless_graphs(&mut self, n: usize) -> Result<Vec<Diagram>> {
        if let Some(v) = self.legless.get(&n) {
            return Ok(v.clone());
        }
        let mut one = ConnectedLibrary::new(&["j".to_string()]);
        let mut out = BTreeMap::new();
        for d in one.get(n - 1, 2)? {
            if let Some(j) = d.join_two_legs() {
                dedupe(&mut out, j)?;
            }
        }
        let v: Vec<Diagram> = out.into_values().collect();
        self.legless.insert(n, v.clone());
        Ok(v)
    }

    /// Connected diagrams of the given degree, all loop numbers, with at least
    /// `min_legs` legs.
    pub fn of_degree(&mut self, degree: usize, min_legs: usize) -> Result<Vec<Diagram>> {
        let mut out = vec![];
        for n in 0..=degree + 1 {
            if degree + 1 < n {
                continue;
            }
            let k = degree + 1 - n;
            if k >= min_legs {
                out.extend(self.get(n, k)?);
            }
        }
        Ok(out)
    }
}

/// All diagrams of each degree `0..=max_degree` whose legs go to `targets`;
/// every graph component has a leg unless `allow_legless`.
pub fn grow_all(
    targets: &[Target],
    skeleton: &Skeleton,
    max_degree: usize,
    allow_legless: bool,
) -> Result<Vec<Vec<Diagram>>> {
    let marks: Vec<String> = targets
        .iter()
        .map(|t| match t {
            Target::Mark(m) | Target::Line(m) => m.clone(),
        })
        .collect();
    let mut lib = ConnectedLibrary::new(&marks);
    let mut levels: Vec<Vec<Diagram>> = vec![vec![Diagram::empty(skeleton.clone())]];
    for d in 1..=max_degree {
        let mut out = BTreeMap::new();
        // struts and inserted legs
        for base in &levels[d - 1] {
            for (i, a) in targets.iter().enumerate() {
                for b in &targets[i..] {
                    for x in with_new_leg(base, a, None)? {
                        let pending = x.legs().find(|(_, _, l)| l.label == PLACEHOLDER).expect("placeholder").0;
                        for y in with_new_leg_joined(&x, b, pending)? {
                            dedupe(&mut out, y)?;
                        }
                    }
                }
            }
            for e in 0..base.num_edges() {
                for t in targets {
                    for x in with_new_leg(base, t, Some(e))? {
                        dedupe(&mut out, x)?;
                    }
                }
            }
        }
        // connected one-leg components of degree j >= 1 (loop number j)
        for j in 1..=d {
            for comp in lib.get(j, 1)? {
                let (_, _, leg) = comp.legs().next().expect("one leg");
                let mark = leg.label.clone();
                let t = targets.iter().find(|t| matches!(t, Target::Mark(m) | Target::Line(m) if *m == mark));
                let t = t.expect("mark from targets").clone();
                for base in &levels[d - j] {
                    for x in attach_component(base, &comp, &t)? {
                        dedupe(&mut out, x)?;
                    }
                }
            }
            if allow_legless && j >= 1 && d >= j {
                // legless component with j + 1 loops has degree j
                for comp in lib.get(j + 1, 0)? {
                    for base in &levels[d - j] {
                        dedupe(&mut out, base.union_with(&comp.with_skeleton(skeleton.clone())?)?)?;
                    }
                }
            }
        }
        levels.push(out.into_values().collect());
    }
    Ok(levels)
}

/// Adds a new univalent vertex: on edge `e` if given (via a new trivalent
/// vertex), or as one end of a fresh strut whose other end is a placeholder
/// leg that [`with_new_leg_joined`] then places.
fn with_new_leg(d: &Diagram, t: &Target, e: Option<usize>) -> Result<Vec<Diagram>> {
    let pending = match e {
        Some(e) => d.add_leg_on_edge(e, &Leg::mark(NEW))?,
        None => d.union_with(&shapes::strut(Leg::mark(NEW), Leg::mark(PLACEHOLDER), None))?,
    };
    let v = pending.legs().find(|(_, _, l)| l.label == NEW).expect("new leg").0;
    with_new_leg_joined(&pending, t, v)
}

const PLACEHOLDER: &str = "__pending";
const NEW: &str = "__new";

/// Replaces the placeholder leg at vertex `v` by a leg going to `t`.
fn with_new_leg_joined(d: &Diagram, t: &Target, v: usize) -> Result<Vec<Diagram>> {
    let mut out = vec![];
    match t {
        Target::Mark(m) => out.push(d.relabel_leg(v, Leg::mark(m))?),
        Target::Line(l) => {
            let k = d.legs_with_label(l) as u32;
            for p in 0..=k {
                out.push(d.place_leg(v, l, p)?);
            }
        }
    }
    Ok(out)
}

fn attach_component(d: &Diagram, comp: &Diagram, t: &Target) -> Result<Vec<Diagram>> {
    let leg = comp.legs().next().expect("one leg").0;
    let v = d.vertices().len() + leg;
    let joined = d.union_with(&comp.relabel_leg(leg, Leg::mark(PLACEHOLDER))?)?;
    with_new_leg_joined(&joined, t, v)
}

impl Diagram {
    /// Same diagram on another skeleton; legs must not reference it.
    pub(crate) fn with_skeleton(&self, skeleton: Skeleton) -> Result<Diagram> {
        self.with_legs(skeleton, &|l: &Leg| l.clone())
    }

    pub(crate) fn relabel_leg(&self, v: usize, leg: Leg) -> Result<Diagram> {
        let (skel, mut vs, ls) = self.clone().into_parts();
        match vs.get_mut(v) {
            Some(crate::diagram::Vertex::Uni { leg: l, .. }) => *l = leg,
            _ => return Err(Error::SiteNotFound(format!("vertex {v} is not a leg"))),
        }
        Diagram::new(skel, vs, ls)
    }
}
