//! Sparse exact row reduction over ordered columns.

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;

use crate::algebra::Rational;

pub type Row = BTreeMap<usize, Rational>;

/// Reduced row echelon data: `pivots[c]` is the row whose leading column is
/// `c`, normalized to 1 there and free of every other pivot column.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    pub pivots: BTreeMap<usize, Row>,
}

impl Rref {
    /// Column indices are the elimination order: the smallest live column of a
    /// row becomes its pivot. Rows are first brought to echelon form, then
    /// back-substituted once.
    pub fn build(rows: impl IntoIterator<Item = Row>) -> Self {
        // the reduced form does not depend on row order; short rows first
        // keeps fill-in down
        let mut rows: Vec<Row> = rows.into_iter().collect();
        rows.sort_by_key(|r| r.len());
        let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
        let mut seen = HashSet::new();
        for mut row in rows {
            if !seen.insert(row.clone()) {
                continue;
            }
            eliminate(&mut row, &pivots);
            if let Some((&lead, c)) = row.iter().next() {
                let inv = c.recip();
                for v in row.values_mut() {
                    *v *= &inv;
                }
                pivots.insert(lead, row);
            }
        }
        // back substitution, last pivot first
        let cols: Vec<usize> = pivots.keys().rev().copied().collect();
        for c in cols {
            let mut row = pivots.remove(&c).expect("pivot");
            let later: Vec<usize> = row.keys().skip(1).copied().filter(|k| pivots.contains_key(k)).collect();
            for k in later {
                if let Some(f) = row.get(&k).cloned() {
                    axpy(&mut row, &-f, &pivots[&k]);
                }
            }
            pivots.insert(c, row);
        }
        Self { pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivots.contains_key(&c)
    }

    /// Rewrites `v` in terms of non-pivot columns.
    pub fn reduce(&self, v: &mut Row) {
        eliminate(v, &self.pivots);
    }
}

fn axpy(y: &mut Row, a: &Rational, x: &Row) {
    for (c, xv) in x {
        let e = y.entry(*c).or_insert_with(Rational::zero);
        *e += a * xv;
        if e.is_zero() {
            y.remove(c);
        }
    }
}

/// Clears every pivot column of `row`, smallest first; pivot rows only
/// introduce columns larger than their own pivot.
fn eliminate(row: &mut Row, pivots: &BTreeMap<usize, Row>) {
    let mut from = 0;
    while let Some((&c, f)) = row.range(from..).find(|(c, _)| pivots.contains_key(c)) {
        let f = f.clone();
        axpy(row, &-f, &pivots[&c]);
        from = c + 1;
    }
}
