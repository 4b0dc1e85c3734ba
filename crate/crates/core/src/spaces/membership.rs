use std::collections::BTreeMap;

use super::{enumerate_by_degree, ConnectedLibrary, SpaceId, SpaceKind};
use crate::algebra::LaurentPoly;
use crate::diagram::{canonicalize, Diagram, Label, LinearCombo};
use crate::error::{Error, Result};

const MAX_ASSIGNMENTS: usize = 2_000_000;

/// The label tokens allowed by a labeled space, besides "no label".
pub fn tokens(spec: &SpaceId) -> Vec<Label> {
    match &spec.kind {
        SpaceKind::At => vec![Label::t_pow(1), Label::t_pow(-1)],
        SpaceKind::E0 { m, .. } => {
            let m = *m as i64;
            (-m..=m).map(|k| Label::over_delta(LaurentPoly::t_pow(k), 1)).collect()
        }
        SpaceKind::E1 { m, .. } => {
            let m = *m as i64;
            (-m..=m)
                .filter(|&k| k != 0)
                .map(|k| Label::over_delta(&LaurentPoly::t_pow(k) - &LaurentPoly::one(), 1))
                .collect()
        }
        _ => vec![],
    }
}

fn labels_allowed(d: &Diagram, allowed: &[Label]) -> bool {
    d.labels().iter().flatten().all(|l| allowed.contains(l))
}

/// Every term carries only the labels `t` and `1/t`.
pub fn in_at(c: &LinearCombo) -> bool {
    let allowed = [Label::t_pow(1), Label::t_pow(-1)];
    c.iter().all(|(_, d, _)| labels_allowed(d, &allowed))
}

/// Every term is a connected legless diagram with the space's loop number and
/// labels drawn from its token family.
pub fn in_e(c: &LinearCombo, spec: &SpaceId) -> bool {
    let n = match spec.kind {
        SpaceKind::E0 { n, .. } | SpaceKind::E1 { n, .. } => n,
        _ => return false,
    };
    let allowed = tokens(spec);
    c.iter().all(|(_, d, _)| {
        d.num_legs() == 0 && d.is_connected() && d.loop_number() == n && labels_allowed(d, &allowed)
    })
}

/// Generators of a labeled space: every way of putting an allowed token (or
/// nothing) on each edge of the underlying unlabeled diagrams, one per
/// isomorphism class.
pub fn label_assignments(spec: &SpaceId) -> Result<Vec<Diagram>> {
    let bases: Vec<Diagram> = match &spec.kind {
        SpaceKind::E0 { n, .. } | SpaceKind::E1 { n, .. } => {
            if *n < 2 {
                return Err(Error::InvalidArgument("labeled legless spaces need at least two loops".into()));
            }
            ConnectedLibrary::new(&spec.marks).get(*n, 0)?
        }
        SpaceKind::At => {
            let plain = SpaceId { kind: SpaceKind::B, ..spec.clone() };
            enumerate_by_degree(&plain)?.into_iter().flatten().collect()
        }
        _ => return Err(Error::InvalidArgument(format!("{spec} carries no labels"))),
    };
    let toks = tokens(spec);
    let choices = toks.len() + 1;
    let mut out = BTreeMap::new();
    for b in &bases {
        let e = b.num_edges();
        let total = (choices as f64).powi(e as i32);
        if total > MAX_ASSIGNMENTS as f64 {
            return Err(Error::TooLarge(format!("{total} label assignments")));
        }
        let (skel, vertices, _) = b.clone().into_parts();
        let mut idx = vec![0usize; e];
        loop {
            let labels = idx.iter().map(|&i| if i == 0 { None } else { Some(toks[i - 1].clone()) }).collect();
            let d = Diagram::new(skel.clone(), vertices.clone(), labels)?;
            let c = canonicalize(&d)?;
            out.entry(c.code).or_insert(c.diagram);
            let mut i = 0;
            loop {
                if i == e {
                    break;
                }
                idx[i] += 1;
                if idx[i] < choices {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == e {
                break;
            }
        }
    }
    Ok(out.into_values().collect())
}
