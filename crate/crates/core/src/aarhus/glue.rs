//! Gluing legs of diagrams and the pairing `<C1, C2>_X`.

use num_traits::One;

use super::GaussianPart;
use crate::algebra::Rational;
use crate::diagram::{label_series, shapes, Diagram, Label, Leg, LinearCombo, Vertex};
use crate::error::{Error, Result};

/// Product of two optional edge labels; a symbolic label meeting a series is
/// first expanded to the series' order.
pub(crate) fn mul_labels(a: Option<Label>, b: Option<Label>) -> Result<Option<Label>> {
    Ok(match (a, b) {
        (None, x) | (x, None) => x,
        (Some(Label::Series(s)), Some(r @ Label::Ratio { .. })) | (Some(r @ Label::Ratio { .. }), Some(Label::Series(s))) => {
            let rs = label_series(&r, s.order(), None)?;
            Some(Label::Series(&s * &rs))
        }
        (Some(x), Some(y)) => Some(x.mul(&y)?),
    })
}

/// Identifies each pair of univalent vertices: both disappear and the two
/// edges they ended become one, carrying the product of the labels met along
/// the way.
pub fn glue(d: &Diagram, pairs: &[(usize, usize)]) -> Result<Diagram> {
    let n = d.vertices().len();
    let mut mate = vec![usize::MAX; n];
    for &(a, b) in pairs {
        for v in [a, b] {
            if !matches!(d.vertices().get(v), Some(Vertex::Uni { .. })) || mate[v] != usize::MAX {
                return Err(Error::SiteNotFound(format!("vertex {v} is not a free leg")));
            }
        }
        if a == b {
            return Err(Error::SiteNotFound(format!("vertex {a} glued to itself")));
        }
        mate[a] = b;
        mate[b] = a;
    }
    let uni_dart = |v: usize| match &d.vertices()[v] {
        Vertex::Uni { dart, .. } => *dart,
        Vertex::Tri(_) => unreachable!("glued vertices are legs"),
    };
    let ndarts = 2 * d.num_edges();
    let mut new_dart = vec![usize::MAX; ndarts];
    let mut visited = vec![false; n];
    let mut labels = vec![];
    for v in 0..n {
        if mate[v] != usize::MAX {
            continue;
        }
        for &x in d.darts_of(v) {
            if new_dart[x] != usize::MAX {
                continue;
            }
            let mut acc: Option<Label> = None;
            let mut cur = x;
            let end = loop {
                acc = mul_labels(acc, crate::diagram::read_label(d.labels(), cur))?;
                let y = cur ^ 1;
                let w = d.vertex_of(y);
                if mate[w] == usize::MAX {
                    break y;
                }
                visited[w] = true;
                visited[mate[w]] = true;
                cur = uni_dart(mate[w]);
            };
            let e = labels.len();
            new_dart[x] = 2 * e;
            new_dart[end] = 2 * e + 1;
            labels.push(acc);
        }
    }
    if (0..n).any(|v| mate[v] != usize::MAX && !visited[v]) {
        return Err(Error::PPartViolation);
    }
    let vertices = (0..n)
        .filter(|&v| mate[v] == usize::MAX)
        .map(|v| match &d.vertices()[v] {
            Vertex::Tri(ds) => Vertex::Tri([new_dart[ds[0]], new_dart[ds[1]], new_dart[ds[2]]]),
            Vertex::Uni { dart, leg } => Vertex::Uni { dart: new_dart[*dart], leg: leg.clone() },
        })
        .collect();
    Diagram::new(d.skeleton().clone(), vertices, labels)
}

fn side(tag: char, x: &str) -> String {
    format!("{tag}{x}")
}

/// Legs of `d` carrying `mark`.
fn legs_marked(d: &Diagram, mark: &str) -> Vec<usize> {
    d.legs().filter(|(_, _, l)| l.label == mark && l.pos.is_none()).map(|(v, _, _)| v).collect()
}

fn counts_match(a: &Diagram, b: &Diagram, marks: &[String]) -> bool {
    marks.iter().all(|x| legs_marked(a, x).len() == legs_marked(b, x).len())
}

/// `a` and `b` side by side, with the `X`-legs renamed by side.
fn tagged_union(a: &Diagram, b: &Diagram, marks: &[String]) -> Result<Diagram> {
    let tag = |d: &Diagram, t: char| {
        d.with_legs(d.skeleton().clone(), &|l: &Leg| {
            if l.pos.is_none() && marks.contains(&l.label) {
                Leg::mark(&side(t, &l.label))
            } else {
                l.clone()
            }
        })
    };
    tag(a, '<')?.union_with(&tag(b, '>')?)
}

/// Sum over all ways of gluing the `x`-legs of a term of `c1` to the `x`-legs
/// of a term of `c2` for every `x` in `marks`. Term pairs whose leg counts
/// differ contribute nothing. Legs are glued one at a time and isomorphic
/// partial gluings are merged.
pub fn pair(c1: &LinearCombo, c2: &LinearCombo, marks: &[String]) -> Result<LinearCombo> {
    let mut out = LinearCombo::new();
    for (_, a, qa) in c1.iter() {
        for (_, b, qb) in c2.iter() {
            if !counts_match(a, b, marks) {
                continue;
            }
            let mut state = LinearCombo::new();
            state.add(&tagged_union(a, b, marks)?, &(qa * qb))?;
            for x in marks {
                let (left, right) = (side('<', x), side('>', x));
                loop {
                    if state.iter().all(|(_, d, _)| legs_marked(d, &right).is_empty()) {
                        break;
                    }
                    let mut next = LinearCombo::new();
                    for (_, d, q) in state.iter() {
                        let v = legs_marked(d, &right)[0];
                        for w in legs_marked(d, &left) {
                            next.add(&glue(d, &[(v, w)])?, q)?;
                        }
                    }
                    state = next;
                }
            }
            out.add_combo(&state, &Rational::one());
        }
    }
    Ok(out)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut p: Vec<usize> = (0..k).collect();
    permute(&mut p, 0, &mut out);
    out
}

fn permute(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == p.len() {
        out.push(p.clone());
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, out);
        p.swap(i, j);
    }
}

/// Reference pairing: every per-mark bijection glued separately.
pub fn pair_brute(c1: &LinearCombo, c2: &LinearCombo, marks: &[String]) -> Result<LinearCombo> {
    let mut out = LinearCombo::new();
    for (_, a, qa) in c1.iter() {
        for (_, b, qb) in c2.iter() {
            if !counts_match(a, b, marks) {
                continue;
            }
            let u = tagged_union(a, b, marks)?;
            let groups: Vec<(Vec<usize>, Vec<usize>)> =
                marks.iter().map(|x| (legs_marked(&u, &side('<', x)), legs_marked(&u, &side('>', x)))).collect();
            let perms: Vec<Vec<Vec<usize>>> = groups.iter().map(|(l, _)| permutations(l.len())).collect();
            let q = qa * qb;
            let mut idx = vec![0usize; groups.len()];
            loop {
                let mut pairs = vec![];
                for (g, (l, r)) in groups.iter().enumerate() {
                    for (i, &j) in perms[g][idx[g]].iter().enumerate() {
                        pairs.push((r[i], l[j]));
                    }
                }
                out.add(&glue(&u, &pairs)?, &q)?;
                let mut g = 0;
                while g < idx.len() {
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
    }
    Ok(out)
}

/// All perfect matchings of `0..n` as lists of pairs.
pub fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(rest: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&a, tail)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        for i in 0..tail.len() {
            let b = tail[i];
            let remaining: Vec<usize> = tail.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            cur.push((a, b));
            go(&remaining, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    if n.is_multiple_of(2) {
        go(&(0..n).collect::<Vec<_>>(), &mut vec![], &mut out);
    }
    out
}

/// `<exp(-1/2 sum_ij l^ij strut(x_i, x_j)), P>`: each perfect matching of the
/// `X`-legs of a term joins every matched pair `(a, b)` by an edge labeled
/// `-l^{ab}` read from `a` to `b`.
pub fn pair_gaussian(gp: &GaussianPart, p: &LinearCombo) -> Result<LinearCombo> {
    let mut out = LinearCombo::new();
    for (_, d, q) in p.iter() {
        let legs: Vec<(usize, usize)> = d
            .legs()
            .filter(|(_, _, l)| l.pos.is_none())
            .filter_map(|(v, _, l)| gp.index_of(&l.label).map(|i| (v, i)))
            .collect();
        if legs.len() % 2 == 1 {
            continue;
        }
        let k = legs.len() / 2;
        let sign = if k.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        let coeff = q * sign;
        'matching: for m in perfect_matchings(legs.len()) {
            let mut u = d.clone();
            let mut pairs = vec![];
            for &(a, b) in &m {
                let (va, i) = legs[a];
                let (vb, j) = legs[b];
                let Some(label) = gp.entry(i, j) else { continue 'matching };
                let base = u.vertices().len();
                u = u.union_with(&shapes::strut(Leg::mark("<"), Leg::mark(">"), Some(label.clone())))?;
                pairs.push((va, base));
                pairs.push((vb, base + 1));
            }
            out.add(&glue(&u, &pairs)?, &coeff)?;
        }
    }
    Ok(out)
}

/// The Gaussian `sum_k (-1/2)^k / k! (sum_ij l^ij strut(x_i, x_j))^k` up to
/// `max_struts` struts, as diagrams.
pub fn gaussian_combo(gp: &GaussianPart, max_struts: usize) -> Result<LinearCombo> {
    let mut s = LinearCombo::new();
    for i in 0..gp.marks.len() {
        for j in 0..gp.marks.len() {
            if let Some(l) = gp.entry(i, j) {
                s.add(&shapes::strut(Leg::mark(&gp.marks[i]), Leg::mark(&gp.marks[j]), Some(l.clone())), &Rational::one())?;
            }
        }
    }
    let s = s.scale(&-crate::algebra::rat(1, 2));
    let mut out = LinearCombo::from_diagram(&Diagram::empty(Default::default()))?;
    let mut power = out.clone();
    for k in 1..=max_struts {
        power = power.product(&s)?.scale(&crate::algebra::rat(1, k as i64));
        out.add_combo(&power, &Rational::one());
    }
    Ok(out)
}
