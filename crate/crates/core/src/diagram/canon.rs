//! Canonical codes with orientation sign.
//!
//! Each connected component is traversed breadth-first from every admissible
//! start half-edge; opening a trivalent vertex branches on which way round its
//! remaining two half-edges are numbered, and taking the reversed way costs a
//! sign. The lexicographically least token sequence wins. If it is reached with
//! both signs the diagram equals its own negative and the sign is 0.

use std::collections::BTreeSet;

use super::{Dart, Diagram, Label, Leg, Skeleton, Vertex};
use crate::error::Result;

const UNSET: u32 = u32::MAX;
const OPEN_TRI: u32 = 0;
const OPEN_UNI: u32 = 1;
const REF_BASE: u32 = 2;

#[derive(Clone, Debug)]
pub struct Canonical {
    pub code: Vec<u8>,
    pub sign: i8,
    /// A representative in canonical numbering; `input = sign * diagram`
    /// whenever `sign != 0`.
    pub diagram: Diagram,
}

pub fn canonicalize(d: &Diagram) -> Result<Canonical> {
    if d.skeleton().circles.is_empty() {
        return Ok(canonicalize_fixed(d));
    }
    // positions on a circle are only defined up to rotation
    let circles = d.skeleton().circles.clone();
    let counts: Vec<u32> = circles.iter().map(|c| d.legs_with_label(c) as u32).collect();
    let mut shifts = vec![0u32; circles.len()];
    let mut best: Option<Canonical> = None;
    loop {
        let rotated = d.with_legs(d.skeleton().clone(), &|leg: &Leg| {
            match (circles.iter().position(|c| *c == leg.label), leg.pos) {
                (Some(i), Some(p)) => Leg::on(&leg.label, (p + shifts[i]) % counts[i].max(1)),
                _ => leg.clone(),
            }
        })?;
        let c = canonicalize_fixed(&rotated);
        best = Some(match best {
            None => c,
            Some(b) => match c.code.cmp(&b.code) {
                std::cmp::Ordering::Less => c,
                std::cmp::Ordering::Equal if c.sign != b.sign => Canonical { sign: 0, ..b },
                _ => b,
            },
        });
        // odometer over rotations
        let mut i = 0;
        loop {
            if i == shifts.len() {
                return Ok(best.expect("at least one rotation"));
            }
            shifts[i] += 1;
            if shifts[i] < counts[i].max(1) {
                break;
            }
            shifts[i] = 0;
            i += 1;
        }
    }
}

fn canonicalize_fixed(d: &Diagram) -> Canonical {
    let (skeleton, vertices, labels) = d.raw_parts();

    let leg_keys: BTreeSet<&Leg> = d.legs().map(|(_, _, l)| l).collect();
    let leg_keys: Vec<&Leg> = leg_keys.into_iter().collect();
    let mut label_keys: BTreeSet<String> = BTreeSet::new();
    for l in labels.iter().flatten() {
        label_keys.insert(l.key());
        label_keys.insert(l.inverted().key());
    }
    let label_keys: Vec<String> = label_keys.into_iter().collect();

    let leg_tok: Vec<u32> = vertices
        .iter()
        .map(|v| match v {
            Vertex::Uni { leg, .. } => leg_keys.binary_search(&leg).expect("leg key present") as u32,
            Vertex::Tri(_) => UNSET,
        })
        .collect();
    let mut lab_tok = vec![0u32; 2 * labels.len()];
    for (e, l) in labels.iter().enumerate() {
        if let Some(l) = l {
            let rank = |k: String| label_keys.binary_search(&k).expect("label key present") as u32 + 1;
            lab_tok[2 * e] = rank(l.key());
            lab_tok[2 * e + 1] = rank(l.inverted().key());
        }
    }

    let color = refine(d, &leg_tok, &lab_tok);

    let mut comps: Vec<(Vec<u32>, State)> = Vec::new();
    let mut sign = 1i8;
    for comp in d.components() {
        let mut search = Search {
            d,
            leg_tok: &leg_tok,
            lab_tok: &lab_tok,
            color: &color,
            best: None,
            signs: 0,
        };
        let min_leg = comp.iter().filter_map(|&v| (leg_tok[v] != UNSET).then_some(leg_tok[v])).min();
        let starts: Vec<Dart> = match min_leg {
            Some(m) => comp
                .iter()
                .filter(|&&v| leg_tok[v] == m)
                .flat_map(|&v| d.darts_of(v).to_vec())
                .collect(),
            None => {
                let c = comp.iter().map(|&v| color[v]).min().expect("nonempty component");
                comp.iter().filter(|&&v| color[v] == c).flat_map(|&v| d.darts_of(v).to_vec()).collect()
            }
        };
        for s in starts {
            let st = State::new(2 * labels.len());
            let v = d.vertex_of(s);
            match &vertices[v] {
                Vertex::Tri(_) => {
                    for &flip in search.flips(v, s) {
                        let mut s2 = st.clone();
                        search.open(&mut s2, v, s, flip);
                        search.run(s2);
                    }
                }
                Vertex::Uni { .. } => {
                    let mut s2 = st;
                    search.open(&mut s2, v, s, false);
                    search.run(s2);
                }
            }
        }
        let s = match search.signs {
            1 => 1,
            2 => -1,
            _ => 0,
        };
        sign *= s;
        let (code, st) = search.best.expect("component has a vertex");
        comps.push((code, st));
    }
    comps.sort_by(|a, b| a.0.cmp(&b.0));

    let mut code = header(skeleton, &leg_keys, &label_keys);
    for (c, _) in &comps {
        code.extend_from_slice(&(c.len() as u32).to_be_bytes());
        for t in c {
            code.extend_from_slice(&t.to_be_bytes());
        }
    }

    // rebuild in canonical numbering
    let mut new_vertices = Vec::new();
    let mut new_labels = Vec::new();
    let mut new_dart = vec![UNSET as usize; 2 * labels.len()];
    for (_, st) in &comps {
        for &dt in &st.order {
            let p = dt ^ 1;
            if st.num[dt] < st.num[p] {
                let e = new_labels.len();
                new_dart[dt] = 2 * e;
                new_dart[p] = 2 * e + 1;
                new_labels.push(read_label(labels, dt));
            }
        }
        for &v in &st.vorder {
            new_vertices.push(match &vertices[v] {
                Vertex::Tri(ds) => {
                    let mut ds = *ds;
                    ds.sort_by_key(|&x| st.num[x]);
                    Vertex::Tri([new_dart[ds[0]], new_dart[ds[1]], new_dart[ds[2]]])
                }
                Vertex::Uni { dart, leg } => Vertex::Uni { dart: new_dart[*dart], leg: leg.clone() },
            });
        }
    }
    let diagram = Diagram::new(skeleton.clone(), new_vertices, new_labels).expect("relabeling preserves validity");
    Canonical { code, sign, diagram }
}

/// Vertex colors by iterated refinement: a vertex's color is determined by
/// its leg token and the multiset of (label token, neighbour color) over its
/// half-edges. Colors are ranks of signatures, so isomorphic diagrams get
/// matching colorings.
fn refine(d: &Diagram, leg_tok: &[u32], lab_tok: &[u32]) -> Vec<u32> {
    let n = d.vertices().len();
    let mut color: Vec<u32> = leg_tok.iter().map(|&t| if t == UNSET { 0 } else { t + 1 }).collect();
    let mut classes = 0;
    loop {
        let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
            .map(|v| {
                let mut around: Vec<(u32, u32)> =
                    d.darts_of(v).iter().map(|&x| (lab_tok[x], color[d.vertex_of(x ^ 1)])).collect();
                around.sort_unstable();
                (color[v], around)
            })
            .collect();
        let mut sorted: Vec<&(u32, Vec<(u32, u32)>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        color = sigs.iter().map(|s| sorted.binary_search(&s).expect("present") as u32).collect();
        if sorted.len() == classes {
            return color;
        }
        classes = sorted.len();
    }
}

/// The label of `dart`'s edge read starting from `dart`'s end.
pub(crate) fn read_label(labels: &[Option<Label>], dart: Dart) -> Option<Label> {
    labels[dart / 2].as_ref().map(|l| if dart.is_multiple_of(2) { l.clone() } else { l.inverted() })
}

fn header(skel: &Skeleton, legs: &[&Leg], labels: &[String]) -> Vec<u8> {
    fn put_str(out: &mut Vec<u8>, s: &str) {
        out.extend_from_slice(&(s.len() as u32).to_be_bytes());
        out.extend_from_slice(s.as_bytes());
    }
    let mut out = b"JD1".to_vec();
    out.extend_from_slice(&(skel.lines.len() as u32).to_be_bytes());
    for l in &skel.lines {
        put_str(&mut out, l);
    }
    out.extend_from_slice(&(skel.circles.len() as u32).to_be_bytes());
    for c in &skel.circles {
        put_str(&mut out, c);
    }
    out.extend_from_slice(&(legs.len() as u32).to_be_bytes());
    for l in legs {
        put_str(&mut out, &l.label);
        out.extend_from_slice(&l.pos.map_or(u32::MAX, |p| p).to_be_bytes());
    }
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    for l in labels {
        put_str(&mut out, l);
    }
    out
}

#[derive(Clone)]
struct State {
    num: Vec<u32>,
    order: Vec<Dart>,
    vorder: Vec<usize>,
    next: usize,
    code: Vec<u32>,
    sign: i8,
    checked: usize,
    less: bool,
}

impl State {
    fn new(ndarts: usize) -> Self {
        Self {
            num: vec![UNSET; ndarts],
            order: vec![],
            vorder: vec![],
            next: 0,
            code: vec![],
            sign: 1,
            checked: 0,
            less: false,
        }
    }
}

struct Search<'a> {
    d: &'a Diagram,
    leg_tok: &'a [u32],
    lab_tok: &'a [u32],
    color: &'a [u32],
    best: Option<(Vec<u32>, State)>,
    signs: u8,
}

impl Search<'_> {
    /// Orders worth trying for the two half-edges after `p` at `v`: an order
    /// forced by invariants when they differ, both otherwise.
    fn flips(&self, v: usize, p: Dart) -> &'static [bool] {
        let ds = match &self.d.vertices()[v] {
            Vertex::Tri(ds) => ds,
            Vertex::Uni { .. } => return &[false],
        };
        let i = ds.iter().position(|&x| x == p).expect("dart at vertex");
        let key = |x: Dart| (self.color[self.d.vertex_of(x ^ 1)], self.lab_tok[x]);
        match key(ds[(i + 1) % 3]).cmp(&key(ds[(i + 2) % 3])) {
            std::cmp::Ordering::Less => &[false],
            std::cmp::Ordering::Greater => &[true],
            std::cmp::Ordering::Equal => &[false, true],
        }
    }

    fn open(&self, st: &mut State, v: usize, p: Dart, flip: bool) {
        st.vorder.push(v);
        let number = |st: &mut State, x: Dart| {
            st.num[x] = st.order.len() as u32;
            st.order.push(x);
        };
        match &self.d.vertices()[v] {
            Vertex::Tri(ds) => {
                let i = ds.iter().position(|&x| x == p).expect("dart at vertex");
                let (a, b) = (ds[(i + 1) % 3], ds[(i + 2) % 3]);
                number(st, p);
                if flip {
                    number(st, b);
                    number(st, a);
                    st.sign = -st.sign;
                } else {
                    number(st, a);
                    number(st, b);
                }
                st.code.push(OPEN_TRI);
                st.code.push(self.color[v]);
            }
            Vertex::Uni { .. } => {
                number(st, p);
                st.code.push(OPEN_UNI);
                st.code.push(self.leg_tok[v]);
            }
        }
    }

    fn emit_edge(&self, st: &mut State, d: Dart) {
        let p = d ^ 1;
        st.code.push(st.num[p] + REF_BASE);
        if st.num[d] < st.num[p] {
            st.code.push(self.lab_tok[d]);
        }
    }

    /// False if the partial code is already worse than the best complete one.
    fn check(&self, st: &mut State) -> bool {
        let best = match &self.best {
            Some((b, _)) => b,
            None => return true,
        };
        if st.less {
            return true;
        }
        for i in st.checked..st.code.len() {
            match best.get(i) {
                None => return false,
                Some(b) if st.code[i] < *b => {
                    st.less = true;
                    return true;
                }
                Some(b) if st.code[i] > *b => return false,
                _ => {}
            }
        }
        st.checked = st.code.len();
        true
    }

    fn finish(&mut self, st: State) {
        let bit = if st.sign > 0 { 1 } else { 2 };
        match &self.best {
            Some((b, _)) => match st.code.cmp(b) {
                std::cmp::Ordering::Less => {
                    self.signs = bit;
                    self.best = Some((st.code.clone(), st));
                }
                std::cmp::Ordering::Equal => self.signs |= bit,
                std::cmp::Ordering::Greater => {}
            },
            None => {
                self.signs = bit;
                self.best = Some((st.code.clone(), st));
            }
        }
    }

    fn run(&mut self, mut st: State) {
        loop {
            if !self.check(&mut st) {
                return;
            }
            if st.next == st.order.len() {
                self.finish(st);
                return;
            }
            let d = st.order[st.next];
            let p = d ^ 1;
            if st.num[p] == UNSET {
                let w = self.d.vertex_of(p);
                if let Vertex::Tri(_) = self.d.vertices()[w] {
                    for &flip in self.flips(w, p) {
                        let mut s2 = st.clone();
                        self.open(&mut s2, w, p, flip);
                        self.emit_edge(&mut s2, d);
                        s2.next += 1;
                        s2.checked = 0;
                        s2.less = false;
                        self.run(s2);
                    }
                    return;
                }
                self.open(&mut st, w, p, false);
            }
            self.emit_edge(&mut st, d);
            st.next += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::shapes;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random relabeling of vertices and edges, random edge reversal and
    /// random rotation of each cyclic triple. Returns the new diagram.
    pub(crate) fn scramble(d: &Diagram, rng: &mut ChaCha8Rng) -> Diagram {
        let (skel, vertices, labels) = d.raw_parts();
        let ne = labels.len();
        let mut eperm: Vec<usize> = (0..ne).collect();
        eperm.shuffle(rng);
        let flips: Vec<bool> = (0..ne).map(|_| rng.gen()).collect();
        let map = |x: Dart| 2 * eperm[x / 2] + ((x % 2 == 1) ^ flips[x / 2]) as usize;
        let mut new_labels = vec![None; ne];
        for e in 0..ne {
            new_labels[eperm[e]] = labels[e].as_ref().map(|l| if flips[e] { l.inverted() } else { l.clone() });
        }
        let mut new_vertices: Vec<Vertex> = vertices
            .iter()
            .map(|v| match v {
                Vertex::Tri(ds) => {
                    let r = rng.gen_range(0..3);
                    Vertex::Tri([map(ds[r]), map(ds[(r + 1) % 3]), map(ds[(r + 2) % 3])])
                }
                Vertex::Uni { dart, leg } => Vertex::Uni { dart: map(*dart), leg: leg.clone() },
            })
            .collect();
        new_vertices.shuffle(rng);
        Diagram::new(skel.clone(), new_vertices, new_labels).unwrap()
    }

    /// Brute-force oracle: are `a` and `b` isomorphic, and with which
    /// orientation signs. Tries every vertex bijection and every matching of
    /// half-edges consistent with it.
    pub(crate) fn iso_signs(a: &Diagram, b: &Diagram) -> BTreeSet<i8> {
        let mut out = BTreeSet::new();
        if a.vertices().len() != b.vertices().len() || a.num_edges() != b.num_edges() {
            return out;
        }
        let n = a.vertices().len();
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p| {
            // each tri vertex: 3 rotations x 2 reflections of its darts
            let tri: Vec<usize> = (0..n).filter(|&v| matches!(a.vertices()[v], Vertex::Tri(_))).collect();
            let mut choice = vec![0usize; tri.len()];
            loop {
                if let Some(s) = check_map(a, b, p, &tri, &choice) {
                    out.insert(s);
                }
                let mut i = 0;
                loop {
                    if i == choice.len() {
                        return;
                    }
                    choice[i] += 1;
                    if choice[i] < 6 {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if choice.is_empty() {
                    return;
                }
            }
        });
        out
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    fn check_map(a: &Diagram, b: &Diagram, p: &[usize], tri: &[usize], choice: &[usize]) -> Option<i8> {
        let mut dmap = vec![usize::MAX; 2 * a.num_edges()];
        let mut sign = 1i8;
        for (v, va) in a.vertices().iter().enumerate() {
            match (va, &b.vertices()[p[v]]) {
                (Vertex::Tri(x), Vertex::Tri(y)) => {
                    let c = choice[tri.iter().position(|&t| t == v).unwrap()];
                    let (r, refl) = (c % 3, c >= 3);
                    let img = if refl { [y[r], y[(r + 2) % 3], y[(r + 1) % 3]] } else { [y[r], y[(r + 1) % 3], y[(r + 2) % 3]] };
                    if refl {
                        sign = -sign;
                    }
                    for i in 0..3 {
                        dmap[x[i]] = img[i];
                    }
                }
                (Vertex::Uni { dart: x, leg: l1 }, Vertex::Uni { dart: y, leg: l2 }) if l1 == l2 => dmap[*x] = *y,
                _ => return None,
            }
        }
        for e in 0..a.num_edges() {
            let (x, y) = (dmap[2 * e], dmap[2 * e + 1]);
            if x ^ 1 != y {
                return None;
            }
            if read_label(a.labels(), 2 * e) != read_label(b.labels(), x) {
                return None;
            }
        }
        Some(sign)
    }

    #[test]
    fn theta_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = shapes::theta();
        let c0 = canonicalize(&t).unwrap();
        assert_ne!(c0.sign, 0);
        for _ in 0..50 {
            let s = scramble(&t, &mut rng);
            let c = canonicalize(&s).unwrap();
            assert_eq!(c.code, c0.code);
            let oracle = iso_signs(&s, &t);
            assert_eq!(oracle.len(), 1);
            assert_eq!(c.sign * c0.sign, *oracle.iter().next().unwrap());
        }
    }

    #[test]
    fn tadpole_is_zero() {
        let tp = shapes::tadpole(Leg::mark("h"));
        let c = canonicalize(&tp).unwrap();
        assert_eq!(c.sign, 0);
        assert_eq!(iso_signs(&tp, &tp), BTreeSet::from([-1, 1]));
    }

    #[test]
    fn dumbbell_loop_swap() {
        let db = shapes::dumbbell();
        let c = canonicalize(&db).unwrap();
        // swap the roles of the two loops by relabeling vertices
        let (skel, vs, ls) = db.raw_parts();
        let swapped = Diagram::new(skel.clone(), vec![vs[1].clone(), vs[0].clone()], ls.to_vec()).unwrap();
        let c2 = canonicalize(&swapped).unwrap();
        assert_eq!(c.code, c2.code);
        assert!(!iso_signs(&db, &swapped).is_empty());
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [shapes::theta(), shapes::wheel(3, "h"), shapes::wheel_with_bubbles(2, 1, "x"), shapes::dumbbell()] {
            let c = canonicalize(&d).unwrap();
            let cc = canonicalize(&c.diagram).unwrap();
            assert_eq!(c.code, cc.code);
            if c.sign != 0 {
                assert_eq!(cc.sign, 1);
            }
            for _ in 0..20 {
                let s = scramble(&d, &mut rng);
                let cs = canonicalize(&s).unwrap();
                assert_eq!(cs.code, c.code);
                let oracle = iso_signs(&s, &c.diagram);
                if c.sign == 0 {
                    assert_eq!(oracle, BTreeSet::from([-1, 1]));
                } else {
                    assert_eq!(oracle, BTreeSet::from([cs.sign]));
                }
            }
        }
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let a = canonicalize(&shapes::wheel(4, "h")).unwrap();
        let b = canonicalize(&shapes::wheel_with_bubbles(2, 1, "h")).unwrap();
        assert_ne!(a.code, b.code);
        let c = canonicalize(&shapes::wheel(2, "h")).unwrap();
        let d = canonicalize(&shapes::wheel(2, "x")).unwrap();
        assert_ne!(c.code, d.code);
    }
}
