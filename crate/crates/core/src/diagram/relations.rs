//! The AS, IHX and STU rewrites. Each returns the terms that the relation
//! says are equal to the input diagram.

use num_traits::One;

use super::{Dart, Diagram, Leg, Vertex};
use crate::algebra::Rational;
use crate::error::{Error, Result};

pub type Terms = Vec<(Rational, Diagram)>;

/// `D = -D'` where `D'` has the orientation at `v` reversed.
pub fn apply_as(d: &Diagram, v: usize) -> Result<Terms> {
    Ok(vec![(-Rational::one(), d.flip_vertex(v)?)])
}

fn rotate_to(ds: [Dart; 3], first: Dart) -> [Dart; 3] {
    let i = ds.iter().position(|&x| x == first).expect("dart at vertex");
    [ds[i], ds[(i + 1) % 3], ds[(i + 2) % 3]]
}

/// With `u = (e, a, b)` and `v = (e, c, d)` around the unlabeled edge `e`,
/// `I + H + X = 0` for `H: u = (e, a, c), v = (e, d, b)` and
/// `X: u = (e, a, d), v = (e, b, c)`.
pub fn apply_ihx(d: &Diagram, edge: usize) -> Result<Terms> {
    if edge >= d.num_edges() {
        return Err(Error::SiteNotFound(format!("no edge {edge}")));
    }
    let (e0, e1) = (2 * edge, 2 * edge + 1);
    let (u, v) = (d.vertex_of(e0), d.vertex_of(e1));
    if u == v {
        return Err(Error::SiteNotFound(format!("edge {edge} is a loop")));
    }
    if d.label(edge).is_some() {
        return Err(Error::UnsupportedLabel("IHX on a labeled edge".into()));
    }
    let (ut, vt) = match (&d.vertices()[u], &d.vertices()[v]) {
        (Vertex::Tri(x), Vertex::Tri(y)) => (rotate_to(*x, e0), rotate_to(*y, e1)),
        _ => return Err(Error::SiteNotFound(format!("edge {edge} is not internal"))),
    };
    let [_, a, b] = ut;
    let [_, c, dd] = vt;
    let (skel, verts, labels) = d.raw_parts();
    let rewire = |uu: [Dart; 3], vv: [Dart; 3]| -> Result<Diagram> {
        let mut vs = verts.to_vec();
        vs[u] = Vertex::Tri(uu);
        vs[v] = Vertex::Tri(vv);
        Diagram::new(skel.clone(), vs, labels.to_vec())
    };
    let h = rewire([e0, a, c], [e1, dd, b])?;
    let x = rewire([e0, a, dd], [e1, b, c])?;
    Ok(vec![(-Rational::one(), h), (-Rational::one(), x)])
}

/// For legs at positions `pos`, `pos + 1` of `line`, `T = U + S` where `U`
/// swaps the two legs and `S` joins their edges at a new trivalent vertex
/// `(earlier leg's branch, later leg's branch, stem)` with a single leg at `pos`.
pub fn apply_stu(d: &Diagram, line: &str, pos: u32) -> Result<Terms> {
    if !d.skeleton().lines.iter().any(|l| l == line) && !d.skeleton().circles.iter().any(|l| l == line) {
        return Err(Error::SiteNotFound(format!("no skeleton component {line}")));
    }
    let find = |p: u32| {
        d.legs()
            .find(|(_, _, l)| l.label == line && l.pos == Some(p))
            .map(|(v, dart, _)| (v, dart))
            .ok_or_else(|| Error::SiteNotFound(format!("no leg at {line}:{p}")))
    };
    let (va, da) = find(pos)?;
    let (vb, db) = find(pos + 1)?;
    let (skel, verts, labels) = d.raw_parts();

    let mut u = verts.to_vec();
    u[va] = Vertex::Uni { dart: da, leg: Leg::on(line, pos + 1) };
    u[vb] = Vertex::Uni { dart: db, leg: Leg::on(line, pos) };
    let u = Diagram::new(skel.clone(), u, labels.to_vec())?;

    let mut ls = labels.to_vec();
    let stem = ls.len();
    ls.push(None);
    let mut vs: Vec<Vertex> = Vec::with_capacity(verts.len());
    for (i, v) in verts.iter().enumerate() {
        if i == va {
            vs.push(Vertex::Tri([da, db, 2 * stem]));
        } else if i == vb {
            vs.push(Vertex::Uni { dart: 2 * stem + 1, leg: Leg::on(line, pos) });
        } else {
            vs.push(match v {
                Vertex::Uni { dart, leg } if leg.label == line && leg.pos.is_some_and(|p| p > pos + 1) => {
                    Vertex::Uni { dart: *dart, leg: Leg::on(line, leg.pos.unwrap() - 1) }
                }
                other => other.clone(),
            });
        }
    }
    let s = Diagram::new(skel.clone(), vs, ls)?;
    Ok(vec![(Rational::one(), u), (Rational::one(), s)])
}
