//! Jacobi diagrams as half-edge ("dart") structures.
//!
//! Edge `e` owns darts `2e` and `2e + 1`; a trivalent vertex lists its three
//! darts in cyclic order (the vertex orientation), a univalent vertex owns one
//! dart and carries a [`Leg`]. An edge label is stored on the side of dart `2e`,
//! read from that end towards dart `2e + 1`.

mod canon;
mod combo;
mod json;
mod label;
mod relations;
mod text;

pub use canon::{canonicalize, Canonical};
pub(crate) use canon::read_label;
pub use combo::LinearCombo;
pub use json::{DiagramJson, EdgeJson, LegJson};
pub use label::{expand_labels, label_series, move_label, Label};
pub use relations::{apply_as, apply_ihx, apply_stu, Terms};
pub use text::{parse_diagram, parse_diagrams, write_diagram};

use crate::error::{Error, Result};

pub type Dart = usize;

/// The mark of a univalent vertex: either a free label (`pos == None`) or an
/// attachment at position `pos` of the skeleton component named `label`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    pub label: String,
    pub pos: Option<u32>,
}

impl Leg {
    pub fn mark(label: &str) -> Self {
        Self { label: label.to_string(), pos: None }
    }

    pub fn on(label: &str, pos: u32) -> Self {
        Self { label: label.to_string(), pos: Some(pos) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Tri([Dart; 3]),
    Uni { dart: Dart, leg: Leg },
}

/// Oriented 1-manifold components. Legs whose label names a line or circle
/// must carry a position; all other legs are free marks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Skeleton {
    pub lines: Vec<String>,
    pub circles: Vec<String>,
}

impl Skeleton {
    pub fn marks() -> Self {
        Self::default()
    }

    pub fn lines<S: AsRef<str>>(names: &[S]) -> Self {
        Self { lines: names.iter().map(|s| s.as_ref().to_string()).collect(), circles: vec![] }
    }

    pub fn is_marks(&self) -> bool {
        self.lines.is_empty() && self.circles.is_empty()
    }

    pub fn has_component(&self, name: &str) -> bool {
        self.lines.iter().any(|l| l == name) || self.circles.iter().any(|c| c == name)
    }
}

/// Endpoint kind used by [`Diagram::assemble`].
#[derive(Clone, Debug)]
pub enum VKind {
    Tri,
    Uni(Leg),
}

/// `((vertex, slot), (vertex, slot), label)`; the label sits on the first end.
pub type EdgeSpec = ((usize, usize), (usize, usize), Option<Label>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    skeleton: Skeleton,
    vertices: Vec<Vertex>,
    labels: Vec<Option<Label>>,
    dart_vertex: Vec<usize>,
}

impl Diagram {
    pub fn empty(skeleton: Skeleton) -> Self {
        Self { skeleton, vertices: vec![], labels: vec![], dart_vertex: vec![] }
    }

    /// Builds and validates a diagram from vertex records and edge labels.
    pub fn new(skeleton: Skeleton, vertices: Vec<Vertex>, labels: Vec<Option<Label>>) -> Result<Self> {
        let ndarts = 2 * labels.len();
        let mut dart_vertex = vec![usize::MAX; ndarts];
        for (vi, v) in vertices.iter().enumerate() {
            let darts: &[Dart] = match v {
                Vertex::Tri(ds) => ds,
                Vertex::Uni { dart, .. } => std::slice::from_ref(dart),
            };
            for &d in darts {
                if d >= ndarts {
                    return Err(Error::Malformed(format!("dart {d} has no edge")));
                }
                if dart_vertex[d] != usize::MAX {
                    return Err(Error::Malformed(format!("dart {d} used twice")));
                }
                dart_vertex[d] = vi;
            }
        }
        if let Some(d) = dart_vertex.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Malformed(format!("half-edge {d} is not attached to a vertex")));
        }
        let labels = labels.into_iter().map(|l| l.filter(|l| !l.is_identity())).collect();
        let d = Self { skeleton, vertices, labels, dart_vertex };
        d.check_skeleton()?;
        Ok(d)
    }

    /// Builds a diagram from endpoint kinds and edges given by `(vertex, slot)`
    /// pairs; the slot order of a trivalent vertex is its cyclic orientation.
    pub fn assemble(skeleton: Skeleton, kinds: Vec<VKind>, edges: Vec<EdgeSpec>) -> Result<Self> {
        let mut slots: Vec<Vec<Option<Dart>>> = kinds
            .iter()
            .map(|k| match k {
                VKind::Tri => vec![None; 3],
                VKind::Uni(_) => vec![None; 1],
            })
            .collect();
        let mut labels = Vec::with_capacity(edges.len());
        for (e, ((va, sa), (vb, sb), label)) in edges.into_iter().enumerate() {
            for (side, (v, s)) in [(va, sa), (vb, sb)].into_iter().enumerate() {
                let slot = slots
                    .get_mut(v)
                    .and_then(|sl| sl.get_mut(s))
                    .ok_or_else(|| Error::Malformed(format!("no slot {s} at vertex {v}")))?;
                if slot.is_some() {
                    return Err(Error::Malformed(format!("slot {s} at vertex {v} used twice")));
                }
                *slot = Some(2 * e + side);
            }
            labels.push(label);
        }
        let mut vertices = Vec::with_capacity(kinds.len());
        for (v, (k, sl)) in kinds.into_iter().zip(slots).enumerate() {
            let ds: Vec<Dart> = sl
                .into_iter()
                .map(|d| d.ok_or_else(|| Error::Malformed(format!("vertex {v} has a free slot"))))
                .collect::<Result<_>>()?;
            vertices.push(match k {
                VKind::Tri => Vertex::Tri([ds[0], ds[1], ds[2]]),
                VKind::Uni(leg) => Vertex::Uni { dart: ds[0], leg },
            });
        }
        Self::new(skeleton, vertices, labels)
    }

    fn check_skeleton(&self) -> Result<()> {
        let mut used: std::collections::HashMap<&str, Vec<u32>> = Default::default();
        for v in &self.vertices {
            if let Vertex::Uni { leg, .. } = v {
                let on_skel = self.skeleton.has_component(&leg.label);
                match (on_skel, leg.pos) {
                    (true, Some(p)) => used.entry(&leg.label).or_default().push(p),
                    (true, None) => {
                        return Err(Error::Malformed(format!("leg on {} lacks a position", leg.label)))
                    }
                    (false, Some(_)) => {
                        return Err(Error::Malformed(format!("no skeleton component {}", leg.label)))
                    }
                    (false, None) => {}
                }
            }
        }
        for (name, mut ps) in used {
            ps.sort_unstable();
            if ps.iter().enumerate().any(|(i, &p)| p as usize != i) {
                return Err(Error::Malformed(format!("positions on {name} must be 0..k without gaps")));
            }
        }
        Ok(())
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_edges(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, edge: usize) -> Option<&Label> {
        self.labels[edge].as_ref()
    }

    pub fn labels(&self) -> &[Option<Label>] {
        &self.labels
    }

    pub fn has_labels(&self) -> bool {
        self.labels.iter().any(|l| l.is_some())
    }

    pub fn vertex_of(&self, dart: Dart) -> usize {
        self.dart_vertex[dart]
    }

    pub fn partner(dart: Dart) -> Dart {
        dart ^ 1
    }

    pub fn num_tri(&self) -> usize {
        self.vertices.iter().filter(|v| matches!(v, Vertex::Tri(_))).count()
    }

    pub fn legs(&self) -> impl Iterator<Item = (usize, Dart, &Leg)> + '_ {
        self.vertices.iter().enumerate().filter_map(|(i, v)| match v {
            Vertex::Uni { dart, leg } => Some((i, *dart, leg)),
            _ => None,
        })
    }

    pub fn num_legs(&self) -> usize {
        self.legs().count()
    }

    pub fn legs_with_label(&self, label: &str) -> usize {
        self.legs().filter(|(_, _, l)| l.label == label).count()
    }

    /// Half the number of vertices. Labels count only once expanded.
    pub fn degree(&self) -> usize {
        self.vertices.len() / 2
    }

    /// First Betti number `E - V + C` of the graph part.
    pub fn loop_number(&self) -> usize {
        let c = self.components().len();
        self.num_edges() + c - self.vertices.len()
    }

    /// Vertex sets of the connected components, in order of first vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = vec![];
            while let Some(v) = stack.pop() {
                members.push(v);
                for &d in self.darts_of(v) {
                    let w = self.dart_vertex[d ^ 1];
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn darts_of(&self, v: usize) -> &[Dart] {
        match &self.vertices[v] {
            Vertex::Tri(ds) => ds,
            Vertex::Uni { dart, .. } => std::slice::from_ref(dart),
        }
    }

    /// True for a trivalent vertex adjacent to a univalent vertex marked `h`.
    /// Such vertices are not counted by the non-Gaussian condition.
    pub fn is_h_adjacent(&self, v: usize) -> bool {
        match &self.vertices[v] {
            Vertex::Tri(ds) => ds.iter().any(|&d| match &self.vertices[self.dart_vertex[d ^ 1]] {
                Vertex::Uni { leg, .. } => leg.label == "h" && leg.pos.is_none(),
                _ => false,
            }),
            _ => false,
        }
    }

    /// Every component has a trivalent vertex that is not adjacent to an `h`-leg.
    pub fn satisfies_ppart(&self) -> bool {
        self.components().iter().all(|c| {
            c.iter().any(|&v| matches!(self.vertices[v], Vertex::Tri(_)) && !self.is_h_adjacent(v))
        })
    }

    /// Has an edge from a vertex to itself.
    pub fn has_self_loop(&self) -> bool {
        (0..self.num_edges()).any(|e| self.dart_vertex[2 * e] == self.dart_vertex[2 * e + 1])
    }

    pub fn disjoint_union(&self, other: &Diagram) -> Result<Diagram> {
        if self.skeleton != other.skeleton {
            return Err(Error::SkeletonMismatch(format!("{:?} vs {:?}", self.skeleton, other.skeleton)));
        }
        if !self.skeleton.is_marks() && self.num_legs() + other.num_legs() > 0 {
            return Err(Error::SkeletonMismatch("union of diagrams with skeleton attachments".into()));
        }
        let off = 2 * self.num_edges();
        let mut vertices = self.vertices.clone();
        for v in &other.vertices {
            vertices.push(match v {
                Vertex::Tri([a, b, c]) => Vertex::Tri([a + off, b + off, c + off]),
                Vertex::Uni { dart, leg } => Vertex::Uni { dart: dart + off, leg: leg.clone() },
            });
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Diagram::new(self.skeleton.clone(), vertices, labels)
    }

    /// Same graph with one vertex orientation reversed.
    pub fn flip_vertex(&self, v: usize) -> Result<Diagram> {
        match self.vertices.get(v) {
            Some(Vertex::Tri([a, b, c])) => {
                let mut d = self.clone();
                d.vertices[v] = Vertex::Tri([*a, *c, *b]);
                Ok(d)
            }
            _ => Err(Error::SiteNotFound(format!("vertex {v} is not trivalent"))),
        }
    }

    /// Replaces the skeleton and leg records; used by maps that move legs
    /// between free marks and skeleton components.
    pub(crate) fn with_legs(&self, skeleton: Skeleton, legs: &dyn Fn(&Leg) -> Leg) -> Result<Diagram> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| match v {
                Vertex::Uni { dart, leg } => Vertex::Uni { dart: *dart, leg: legs(leg) },
                t => t.clone(),
            })
            .collect();
        Diagram::new(skeleton, vertices, self.labels.clone())
    }

    /// Inserts one leg in the middle of edge `e`.
    pub fn add_leg_on_edge(&self, e: usize, leg: &Leg) -> Result<Diagram> {
        if e >= self.num_edges() {
            return Err(Error::SiteNotFound(format!("no edge {e}")));
        }
        let (skel, mut vs, mut ls) = self.clone().into_parts();
        label::insert_legs(&mut vs, &mut ls, e, 1, leg);
        Diagram::new(skel, vs, ls)
    }

    /// Puts the leg at vertex `v` on `line` at `pos`, moving the legs already
    /// at `pos` or later one step along.
    pub fn place_leg(&self, v: usize, line: &str, pos: u32) -> Result<Diagram> {
        let (skel, mut vs, ls) = self.clone().into_parts();
        if !matches!(vs.get(v), Some(Vertex::Uni { .. })) {
            return Err(Error::SiteNotFound(format!("vertex {v} is not a leg")));
        }
        for (i, x) in vs.iter_mut().enumerate() {
            if let Vertex::Uni { leg, .. } = x {
                if i == v {
                    *leg = Leg::on(line, pos);
                } else if leg.label == line && leg.pos.is_some_and(|p| p >= pos) {
                    leg.pos = leg.pos.map(|p| p + 1);
                }
            }
        }
        Diagram::new(skel, vs, ls)
    }

    /// Disjoint union keeping `self`'s skeleton and performing no checks
    /// beyond validity.
    pub fn union_with(&self, other: &Diagram) -> Result<Diagram> {
        let off = 2 * self.num_edges();
        let mut vertices = self.vertices.clone();
        for v in &other.vertices {
            vertices.push(match v {
                Vertex::Tri([a, b, c]) => Vertex::Tri([a + off, b + off, c + off]),
                Vertex::Uni { dart, leg } => Vertex::Uni { dart: dart + off, leg: leg.clone() },
            });
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Diagram::new(self.skeleton.clone(), vertices, labels)
    }

    /// For a diagram with exactly two legs, removes both and joins the
    /// edges they hung from. `None` if the two legs form a strut.
    pub fn join_two_legs(&self) -> Option<Diagram> {
        let legs: Vec<(usize, Dart)> = self.legs().map(|(v, d, _)| (v, d)).collect();
        if legs.len() != 2 || legs[0].1 ^ 1 == legs[1].1 {
            return None;
        }
        let ((v1, d1), (v2, d2)) = (legs[0], legs[1]);
        if self.labels[d1 / 2].is_some() || self.labels[d2 / 2].is_some() {
            return None;
        }
        // the edge of d1 survives and takes over d2's partner slot
        let p2 = d2 ^ 1;
        let dead = d2 / 2;
        let renum = |x: Dart| -> Dart {
            let x = if x == p2 { d1 } else { x };
            let e = x / 2;
            let e = if e > dead { e - 1 } else { e };
            2 * e + x % 2
        };
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v1 && *i != v2)
            .map(|(_, v)| match v {
                Vertex::Tri(ds) => Vertex::Tri([renum(ds[0]), renum(ds[1]), renum(ds[2])]),
                Vertex::Uni { dart, leg } => Vertex::Uni { dart: renum(*dart), leg: leg.clone() },
            })
            .collect();
        let labels = self.labels.iter().enumerate().filter(|(e, _)| *e != dead).map(|(_, l)| l.clone()).collect();
        Diagram::new(self.skeleton.clone(), vertices, labels).ok()
    }

    pub(crate) fn raw_parts(&self) -> (&Skeleton, &[Vertex], &[Option<Label>]) {
        (&self.skeleton, &self.vertices, &self.labels)
    }

    pub(crate) fn into_parts(self) -> (Skeleton, Vec<Vertex>, Vec<Option<Label>>) {
        (self.skeleton, self.vertices, self.labels)
    }
}

/// Common shapes.
pub mod shapes {
    use super::*;

    /// Two legs joined by an edge, optionally labeled on the first leg's side.
    pub fn strut(a: Leg, b: Leg, label: Option<Label>) -> Diagram {
        let skel = Skeleton::default();
        Diagram::assemble(skel, vec![VKind::Uni(a), VKind::Uni(b)], vec![((0, 0), (1, 0), label)])
            .expect("strut is well formed")
    }

    /// Theta graph with edge labels `labels[i]` on the side of the first vertex.
    pub fn theta_labeled(labels: [Option<Label>; 3]) -> Diagram {
        let [l0, l1, l2] = labels;
        Diagram::assemble(
            Skeleton::default(),
            vec![VKind::Tri, VKind::Tri],
            vec![((0, 0), (1, 0), l0), ((0, 1), (1, 2), l1), ((0, 2), (1, 1), l2)],
        )
        .expect("theta is well formed")
    }

    pub fn theta() -> Diagram {
        theta_labeled([None, None, None])
    }

    /// Two self-loops joined by a bridge.
    pub fn dumbbell() -> Diagram {
        Diagram::assemble(
            Skeleton::default(),
            vec![VKind::Tri, VKind::Tri],
            vec![((0, 0), (1, 0), None), ((0, 1), (0, 2), None), ((1, 1), (1, 2), None)],
        )
        .expect("dumbbell is well formed")
    }

    /// Trivalent vertex with a self-loop and one leg.
    pub fn tadpole(leg: Leg) -> Diagram {
        Diagram::assemble(
            Skeleton::default(),
            vec![VKind::Tri, VKind::Uni(leg)],
            vec![((0, 0), (1, 0), None), ((0, 1), (0, 2), None)],
        )
        .expect("tadpole is well formed")
    }

    /// Wheel with `k >= 1` spokes ending in legs marked `mark`.
    pub fn wheel(k: usize, mark: &str) -> Diagram {
        wheel_with_bubbles(k, 0, mark)
    }

    /// Wheel with `k` spokes whose rim additionally carries `bubbles` doubled
    /// segments; each bubble adds one loop and two trivalent vertices.
    pub fn wheel_with_bubbles(k: usize, bubbles: usize, mark: &str) -> Diagram {
        assert!(k >= 1);
        // rim vertices: k spoke vertices then 2 per bubble, in cyclic order
        let mut kinds = vec![];
        let mut edges: Vec<EdgeSpec> = vec![];
        let mut rim: Vec<usize> = vec![];
        for _ in 0..k {
            rim.push(kinds.len());
            kinds.push(VKind::Tri);
        }
        let mut bubble_pairs = vec![];
        for _ in 0..bubbles {
            let a = kinds.len();
            kinds.push(VKind::Tri);
            kinds.push(VKind::Tri);
            bubble_pairs.push((a, a + 1));
        }
        // cyclic rim sequence: spoke 0, bubbles..., spokes 1..k
        let mut seq: Vec<(usize, bool)> = vec![(rim[0], false)];
        for &(a, b) in &bubble_pairs {
            seq.push((a, true));
            seq.push((b, true));
        }
        for &r in &rim[1..] {
            seq.push((r, false));
        }
        // slots: 0 = previous along rim, 1 = next along rim, 2 = spoke/extra
        let n = seq.len();
        let mut bubble_second = std::collections::HashSet::new();
        for &(_, b) in &bubble_pairs {
            bubble_second.insert(b);
        }
        for i in 0..n {
            let (v, _) = seq[i];
            let (w, _) = seq[(i + 1) % n];
            if bubble_second.contains(&w) {
                // a -> b doubled: two parallel edges a.1-b.0 and a.2-b.2
                edges.push(((v, 1), (w, 0), None));
                edges.push(((v, 2), (w, 2), None));
            } else if n == 1 {
                edges.push(((v, 1), (v, 0), None));
            } else {
                edges.push(((v, 1), (w, 0), None));
            }
        }
        for &r in &rim {
            let l = kinds.len();
            kinds.push(VKind::Uni(Leg::mark(mark)));
            edges.push(((r, 2), (l, 0), None));
        }
        Diagram::assemble(Skeleton::default(), kinds, edges).expect("wheel is well formed")
    }
}
