//! Equivariant linking matrices of surgery presentations over `Q[t, 1/t]`,
//! their exact inverses `Q / Delta`, and the identities satisfied by the
//! `(2g+1)`-th column of the inverse.
//!
//! Indices are 0-based throughout: the entry written `l^{2g+1,3g+1}` in
//! 1-based notation is `inverse[2g][3g]` here.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{exp_substitute, series_invert, AlexanderPoly, LaurentFraction, LaurentPoly, Rational};
use crate::error::{Error, Result};

pub type LaurentMatrix = Vec<Vec<LaurentPoly>>;

/// A `4g x 4g` matrix with `l_ji(t) = l_ij(1/t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqLinkingMatrix {
    g: usize,
    entries: LaurentMatrix,
}

impl EqLinkingMatrix {
    pub fn new(entries: LaurentMatrix) -> Result<Self> {
        let n = entries.len();
        if n == 0 || !n.is_multiple_of(4) || entries.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("need a square 4g x 4g matrix, got {n} rows")));
        }
        for i in 0..n {
            for j in i..n {
                if entries[j][i] != entries[i][j].invert_t() {
                    return Err(Error::InvalidArgument(format!("entries ({i},{j}) and ({j},{i}) are not conjugate")));
                }
            }
        }
        Ok(Self { g: n / 4, entries })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &LaurentMatrix {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }
}

/// Linking data of a `g`-component tangle: framings and mutual linking in
/// `U`, `V`, and the linking between the two halves in `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleLinkingData {
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub w: Vec<Vec<i64>>,
}

impl TangleLinkingData {
    pub fn new(u: Vec<Vec<i64>>, v: Vec<Vec<i64>>, w: Vec<Vec<i64>>) -> Result<Self> {
        let g = u.len();
        let square = |m: &Vec<Vec<i64>>| m.len() == g && m.iter().all(|r| r.len() == g);
        if g == 0 || !square(&u) || !square(&v) || !square(&w) {
            return Err(Error::ShapeMismatch("U, V, W must be square of the same size".into()));
        }
        for (name, m) in [("U", &u), ("V", &v)] {
            for i in 0..g {
                for j in 0..i {
                    if m[i][j] != m[j][i] {
                        return Err(Error::InvalidArgument(format!("{name} is not symmetric")));
                    }
                }
            }
        }
        Ok(Self { u, v, w })
    }

    pub fn genus(&self) -> usize {
        self.u.len()
    }
}

/// The block matrix
/// `[[0, (1/t - 1) I, I, 0], [(t - 1) I, 0, 0, I], [I, 0, U, W], [0, I, W^T, V]]`.
pub fn build_surgery_matrix(d: &TangleLinkingData) -> Result<EqLinkingMatrix> {
    let d = TangleLinkingData::new(d.u.clone(), d.v.clone(), d.w.clone())?;
    let g = d.genus();
    let n = 4 * g;
    let int = |x: i64| LaurentPoly::constant(Rational::from_integer(x.into()));
    let mut m = vec![vec![LaurentPoly::zero(); n]; n];
    let tm1 = &LaurentPoly::t_pow(1) - &LaurentPoly::one();
    for i in 0..g {
        m[i][g + i] = tm1.invert_t();
        m[g + i][i] = tm1.clone();
        m[i][2 * g + i] = LaurentPoly::one();
        m[2 * g + i][i] = LaurentPoly::one();
        m[g + i][3 * g + i] = LaurentPoly::one();
        m[3 * g + i][g + i] = LaurentPoly::one();
        for j in 0..g {
            m[2 * g + i][2 * g + j] = int(d.u[i][j]);
            m[3 * g + i][3 * g + j] = int(d.v[i][j]);
            m[2 * g + i][3 * g + j] = int(d.w[i][j]);
            m[3 * g + j][2 * g + i] = int(d.w[i][j]);
        }
    }
    EqLinkingMatrix::new(m)
}

/// Fraction-free Gauss-Jordan elimination on `[M | I]`. Returns `(det M, R)`
/// with `M^-1 = R / det M`.
fn bareiss_inverse(m: &LaurentMatrix) -> Result<(LaurentPoly, LaurentMatrix)> {
    let n = m.len();
    let mut a: Vec<Vec<LaurentPoly>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }));
            r
        })
        .collect();
    let mut prev = LaurentPoly::one();
    let mut negate = false;
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::Singular)?;
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let pivot = a[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let x = &(&pivot * &a[i][j]) - &(&f * &a[k][j]);
                a[i][j] = x.div_exact(&prev)?;
            }
            a[i][k] = LaurentPoly::zero();
        }
        // rows already eliminated keep the common scale `pivot`
        prev = pivot;
    }
    // every diagonal entry of the left block now equals det(P M)
    let d = a[n - 1][n - 1].clone();
    let r: LaurentMatrix = a.into_iter().map(|row| row[n..].to_vec()).collect();
    let det = if negate { -&d } else { d.clone() };
    // M^-1 = R / d with d = det(PM); rescale so the denominator is det M
    let r = if negate { r.into_iter().map(|row| row.iter().map(|x| -x).collect()).collect() } else { r };
    Ok((det, r))
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &LaurentMatrix) -> Result<LaurentPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut a = m.clone();
    let mut prev = LaurentPoly::one();
    let mut negate = false;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(LaurentPoly::zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = x.div_exact(&prev)?;
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

/// `M^-1 = Q / Delta` with `Delta` normalized into Z by a unit `+-t^k`.
#[derive(Clone, Debug)]
pub struct Inverse {
    pub delta: AlexanderPoly,
    pub q: LaurentMatrix,
}

impl Inverse {
    pub fn entry(&self, i: usize, j: usize) -> LaurentFraction {
        LaurentFraction { num: self.q[i][j].clone(), den: self.delta.poly().clone() }
    }
}

pub fn invert_over_delta(m: &EqLinkingMatrix) -> Result<Inverse> {
    let (det, r) = bareiss_inverse(&m.entries)?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let unit = normalizing_unit(&det)?;
    let delta = AlexanderPoly::new(&det * &unit).map_err(|_| Error::NormalizationFailure(det.to_string()))?;
    // M^-1 = R / det = (unit R) / (unit det)
    let q = r.into_iter().map(|row| row.iter().map(|x| x * &unit).collect()).collect();
    Ok(Inverse { delta, q })
}

/// The `+-t^k` that centers `f` and makes its value at 1 positive.
fn normalizing_unit(f: &LaurentPoly) -> Result<LaurentPoly> {
    let at_one = f.eval_at_one();
    if at_one.is_zero() {
        return Err(Error::NormalizationFailure(format!("{f} vanishes at t = 1")));
    }
    let (lo, hi) = (f.min_exp().expect("nonzero"), f.max_exp().expect("nonzero"));
    if (lo + hi).is_odd() {
        return Err(Error::NormalizationFailure(format!("{f} cannot be centered")));
    }
    let sign = if at_one > Rational::zero() { Rational::one() } else { -Rational::one() };
    Ok(LaurentPoly::monomial(-(lo + hi) / 2, sign))
}

/// `(M^-1)_{ji} = C_{ij} / det M`, from the `(i, j)` cofactor.
pub fn cofactor(m: &EqLinkingMatrix, i: usize, j: usize) -> Result<LaurentFraction> {
    let n = m.size();
    if i >= n || j >= n {
        return Err(Error::InvalidArgument(format!("index ({i},{j}) outside a {n} x {n} matrix")));
    }
    let det = determinant(&m.entries)?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let minor: LaurentMatrix = (0..n)
        .filter(|&r| r != i)
        .map(|r| (0..n).filter(|&c| c != j).map(|c| m.entries[r][c].clone()).collect())
        .collect();
    let mut c = determinant(&minor)?;
    if (i + j) % 2 == 1 {
        c = -&c;
    }
    LaurentFraction::new(c, det)
}

/// Checks on the `(2g+1)`-th column of the inverse of a surgery matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BCertificate {
    /// `l^{3g+1,2g+1}(t) = -(t - 1) l^{1,2g+1}(t)`.
    pub lgg_identity: bool,
    /// `l^{1,2g+1}(1)`.
    pub value_at_1: Rational,
    /// `h` coefficients of `l^{3g+1,2g+1}(e^h)` and `l^{2g+1,3g+1}(e^h)`.
    pub leading: [Rational; 2],
    /// `h^2` coefficient of `l^{3g+1,2g+1}(e^h)`.
    pub r: Rational,
    /// `h^2` coefficient of `l^{2g+1,3g+1}(e^h)`.
    pub r_transposed: Rational,
    pub r_half_integer: bool,
}

impl BCertificate {
    /// Every expected property holds.
    pub fn holds(&self) -> bool {
        self.lgg_identity
            && self.value_at_1.is_one()
            && self.leading == [-Rational::one(), Rational::one()]
            && self.r == self.r_transposed
            && self.r_half_integer
    }
}

fn is_half_integer(r: &Rational) -> bool {
    let twice = r * Rational::from_integer(2.into());
    twice.is_integer() && twice.to_integer().is_odd()
}

pub fn appendix_b_certificate(m: &EqLinkingMatrix) -> Result<BCertificate> {
    let inv = invert_over_delta(m)?;
    let g = m.genus();
    let (a, b, c) = (0, 2 * g, 3 * g);
    let tm1 = &LaurentPoly::t_pow(1) - &LaurentPoly::one();
    let lgg_identity = inv.q[c][b] == -&(&tm1 * &inv.q[a][b]);
    let value_at_1 = inv.entry(a, b).eval(&Rational::one())?;
    let delta_inv = series_invert(&exp_substitute(inv.delta.poly(), 2))?;
    let expand = |p: &LaurentPoly| &exp_substitute(p, 2) * &delta_inv;
    let x = expand(&inv.q[c][b]);
    let y = expand(&inv.q[b][c]);
    let r = x.coeff(2);
    Ok(BCertificate {
        lgg_identity,
        value_at_1,
        leading: [x.coeff(1), y.coeff(1)],
        r_half_integer: is_half_integer(&r),
        r_transposed: y.coeff(2),
        r,
    })
}

/// Largest `|k|` among exponents of the entries of `Q`.
pub fn q_support(inv: &Inverse) -> i64 {
    inv.q.iter().flatten().filter_map(|p| Some(p.min_exp()?.abs().max(p.max_exp()?.abs()))).max().unwrap_or(0)
}

/// Matrix product over `Q[t, 1/t]`.
pub fn mat_mul(a: &LaurentMatrix, b: &LaurentMatrix) -> LaurentMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = LaurentPoly::zero();
                    for (k, x) in a[i].iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            s = &s + &(x * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t() -> LaurentPoly {
        LaurentPoly::t_pow(1)
    }

    fn random_data(g: usize, rng: &mut ChaCha8Rng) -> TangleLinkingData {
        let mut sym = || {
            let mut m = vec![vec![0i64; g]; g];
            for i in 0..g {
                for j in i..g {
                    m[i][j] = rng.gen_range(-3..=3);
                    m[j][i] = m[i][j];
                }
            }
            m
        };
        let (u, v) = (sym(), sym());
        let w = (0..g).map(|_| (0..g).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        TangleLinkingData::new(u, v, w).unwrap()
    }

    fn zero_data() -> TangleLinkingData {
        TangleLinkingData::new(vec![vec![0]], vec![vec![0]], vec![vec![0]]).unwrap()
    }

    /// Cofactor expansion along the first row, as an independent determinant.
    fn laplace(m: &LaurentMatrix) -> LaurentPoly {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut s = LaurentPoly::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: LaurentMatrix = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let term = &m[0][j] * &laplace(&minor);
            s = if j % 2 == 0 { &s + &term } else { &s - &term };
        }
        s
    }

    #[test]
    fn block_matrix_for_zero_data() {
        let m = build_surgery_matrix(&zero_data()).unwrap();
        let (z, o) = (LaurentPoly::zero(), LaurentPoly::one());
        let expected = vec![
            vec![z.clone(), &t().invert_t() - &o, o.clone(), z.clone()],
            vec![&t() - &o, z.clone(), z.clone(), o.clone()],
            vec![o.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), o.clone(), z.clone(), z.clone()],
        ];
        assert_eq!(m.entries(), &expected);
    }

    #[test]
    fn transposing_w_moves_the_block() {
        let d = TangleLinkingData::new(vec![vec![0; 2]; 2], vec![vec![0; 2]; 2], vec![vec![0, 1], vec![0, 0]]).unwrap();
        let m = build_surgery_matrix(&d).unwrap();
        assert_eq!(m.entry(4, 7), &LaurentPoly::one());
        assert_eq!(m.entry(7, 4), &LaurentPoly::one());
        assert!(m.entry(5, 6).is_zero());
    }

    #[test]
    fn shape_and_symmetry_errors() {
        assert!(matches!(
            TangleLinkingData::new(vec![vec![0]], vec![vec![0, 0]], vec![vec![0]]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(TangleLinkingData::new(vec![vec![0, 1], vec![2, 0]], vec![vec![0; 2]; 2], vec![vec![0; 2]; 2]).is_err());
        let mut m = build_surgery_matrix(&zero_data()).unwrap().entries().clone();
        m[0][1] = t();
        assert!(EqLinkingMatrix::new(m).is_err());
    }

    #[test]
    fn determinant_matches_laplace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in [1, 2] {
            for _ in 0..10 {
                let m = build_surgery_matrix(&random_data(g, &mut rng)).unwrap();
                assert_eq!(determinant(m.entries()).unwrap(), laplace(m.entries()));
            }
        }
    }

    #[test]
    fn genus_one_delta_has_one_u_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let inv = invert_over_delta(&build_surgery_matrix(&random_data(1, &mut rng)).unwrap()).unwrap();
            assert!(inv.delta.deg() <= 1);
            assert!(inv.delta.u_coeffs().iter().all(|c| c.is_integer()));
        }
    }

    #[test]
    fn inverse_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [1, 2] {
            for _ in 0..20 {
                let m = build_surgery_matrix(&random_data(g, &mut rng)).unwrap();
                let inv = invert_over_delta(&m).unwrap();
                let p = mat_mul(m.entries(), &inv.q);
                for (i, row) in p.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        let want = if i == j { inv.delta.poly().clone() } else { LaurentPoly::zero() };
                        assert_eq!(x, &want);
                    }
                }
            }
        }
    }

    #[test]
    fn cofactors_agree_with_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = build_surgery_matrix(&random_data(1, &mut rng)).unwrap();
        let inv = invert_over_delta(&m).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(cofactor(&m, i, j).unwrap(), inv.entry(j, i));
            }
        }
    }

    #[test]
    fn certificate_on_zero_data() {
        let c = appendix_b_certificate(&build_surgery_matrix(&zero_data()).unwrap()).unwrap();
        assert!(c.lgg_identity);
        assert_eq!(c.value_at_1, rat(1, 1));
        assert!(c.holds(), "{c:?}");
    }

    #[test]
    fn certificates_and_support_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for g in [1, 2] {
            for _ in 0..30 {
                let m = build_surgery_matrix(&random_data(g, &mut rng)).unwrap();
                let c = appendix_b_certificate(&m).unwrap();
                assert!(c.holds(), "{c:?}");
                assert!(q_support(&invert_over_delta(&m).unwrap()) <= g as i64);
            }
        }
    }

    #[test]
    fn singular_matrix() {
        let z = vec![vec![LaurentPoly::zero(); 4]; 4];
        let m = EqLinkingMatrix::new(z).unwrap();
        assert!(matches!(invert_over_delta(&m), Err(Error::Singular)));
        assert!(matches!(cofactor(&m, 0, 0), Err(Error::Singular)));
    }
}
