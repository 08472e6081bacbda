//! Exact linear algebra over ℚ and ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Point, Rational};

/// A linear map ℚ^source → ℚ^target stored as a dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    target_dim: usize,
    source_dim: usize,
    entries: Vec<Vec<Rational>>,
}

impl LinearMap {
    pub fn new(target_dim: usize, source_dim: usize, entries: Vec<Vec<Rational>>) -> Result<Self> {
        if entries.len() != target_dim {
            return Err(Error::DimensionMismatch { expected: target_dim, found: entries.len() });
        }
        if let Some(row) = entries.iter().find(|r| r.len() != source_dim) {
            return Err(Error::DimensionMismatch { expected: source_dim, found: row.len() });
        }
        Ok(Self { target_dim, source_dim, entries })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        let target = rows.len();
        let source = rows.first().map_or(0, |r| r.len());
        Self::new(target, source, rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Rational::one())
    }

    pub fn scalar(dim: usize, s: Rational) -> Self {
        let entries = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { s.clone() } else { Rational::zero() }).collect())
            .collect();
        Self { target_dim: dim, source_dim: dim, entries }
    }

    /// Builds the map column by column from a function of (row, column).
    pub fn from_fn(target_dim: usize, source_dim: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let entries = (0..target_dim).map(|i| (0..source_dim).map(|j| f(i, j)).collect()).collect();
        Self { target_dim, source_dim, entries }
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Point> {
        if x.len() != self.source_dim {
            return Err(Error::DimensionMismatch { expected: self.source_dim, found: x.len() });
        }
        Ok(self
            .entries
            .iter()
            .map(|row| row.iter().zip(x).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.target_dim != self.source_dim {
            return Err(Error::DimensionMismatch { expected: self.source_dim, found: other.target_dim });
        }
        Ok(Self::from_fn(self.target_dim, other.source_dim, |i, j| {
            (0..self.source_dim).fold(Rational::zero(), |acc, t| acc + &self.entries[i][t] * &other.entries[t][j])
        }))
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.target_dim != self.source_dim {
            return Err(Error::DimensionMismatch { expected: self.target_dim, found: self.source_dim });
        }
        Ok(det_rational(self.entries.clone()))
    }
}

/// Determinant by fraction-free (Bareiss) elimination. The matrix is consumed.
pub fn det_bigint(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

pub fn det_rational(m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let scale = crate::rational::lcm_of_denominators(m.iter().flatten());
    let ints = m
        .into_iter()
        .map(|row| row.into_iter().map(|q| (q * Rational::from_integer(scale.clone())).to_integer()).collect())
        .collect();
    Rational::new(det_bigint(ints), scale.pow(n as u32))
}

/// Incremental row echelon basis; used to find affine spans and pivot columns.
#[derive(Clone, Debug, Default)]
pub(crate) struct EchelonBasis {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBasis {
    /// Reduces `v` against the basis; inserts the remainder and returns its
    /// pivot column when it is nonzero.
    pub(crate) fn insert(&mut self, mut v: Vec<Rational>) -> Option<usize> {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &f * r;
                }
            }
        }
        let pivot = v.iter().position(|x| !x.is_zero())?;
        let lead = v[pivot].clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &f * r;
                }
            }
        }
        self.rows.push((pivot, v));
        Some(pivot)
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut basis = EchelonBasis::default();
    for r in rows {
        basis.insert(r.clone());
    }
    basis.rank()
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let lead = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &lead;
        }
        b[col] /= &lead;
        let pivot_row = a[col].clone();
        let pivot_rhs = b[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
                b[r] -= &f * &pivot_rhs;
            }
        }
    }
    Some(b)
}

/// A nonzero integer vector spanning the kernel of `rows` (which must have a
/// one-dimensional kernel), divided by the gcd of its entries.
pub(crate) fn integer_kernel_vector(rows: &[Vec<BigInt>], width: usize) -> Option<Vec<BigInt>> {
    let mut basis = EchelonBasis::default();
    for r in rows {
        basis.insert(r.iter().map(|v| Rational::from_integer(v.clone())).collect());
    }
    let pivots: Vec<usize> = basis.rows.iter().map(|(p, _)| *p).collect();
    let free = (0..width).find(|c| !pivots.contains(c))?;
    let mut kernel = vec![Rational::zero(); width];
    kernel[free] = Rational::one();
    for (pivot, row) in &basis.rows {
        kernel[*pivot] = -row[free].clone();
    }
    let scale = crate::rational::lcm_of_denominators(&kernel);
    let ints: Vec<BigInt> =
        kernel.into_iter().map(|q| (q * Rational::from_integer(scale.clone())).to_integer()).collect();
    Some(primitive(ints))
}

/// Divides by the gcd of all entries.
pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

pub(crate) fn abs_det(m: Vec<Vec<BigInt>>) -> BigInt {
    det_bigint(m).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    // Leibniz expansion, independent of the elimination path.
    fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        let mut total = BigInt::zero();
        let mut perm: Vec<usize> = (0..n).collect();
        fn rec(k: usize, perm: &mut Vec<usize>, m: &[Vec<BigInt>], total: &mut BigInt) {
            let n = perm.len();
            if k == n {
                let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
                let prod = (0..n).fold(BigInt::one(), |acc, i| acc * &m[i][perm[i]]);
                if inversions % 2 == 0 {
                    *total += prod;
                } else {
                    *total -= prod;
                }
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, m, total);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, m, &mut total);
        total
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let cases = [
            big(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]),
            big(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]),
            big(&[&[0, 0], &[1, 1]]),
            big(&[&[1, 2, 3, 4], &[0, 1, 0, 2], &[3, 0, 1, 1], &[2, 2, 2, 0]]),
        ];
        for m in cases {
            assert_eq!(det_bigint(m.clone()), leibniz(&m));
        }
    }

    #[test]
    fn rational_determinant_and_solve() {
        let m = vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 4), ratio(1, 5)]];
        assert_eq!(det_rational(m.clone()), ratio(1, 10) - ratio(1, 12));
        let x = solve(m, vec![int(1), int(1)]).unwrap();
        assert_eq!(x, vec![int(-8), int(15)]);
        assert!(solve(vec![vec![int(1), int(2)], vec![int(2), int(4)]], vec![int(0), int(0)]).is_none());
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)], vec![int(0), int(1), int(1)]];
        assert_eq!(rank(&rows), 2);
        let k = integer_kernel_vector(&big(&[&[1, 2, 3], &[0, 1, 1]]), 3).unwrap();
        assert_eq!(k.iter().map(|v| v.abs()).collect::<Vec<_>>(), big(&[&[1, 1, 1]])[0]);
    }

    #[test]
    fn linear_map_compose_and_mismatch() {
        let a = LinearMap::from_integers(&[&[0, 1], &[1, 0]]).unwrap();
        let id = a.compose(&a).unwrap();
        assert_eq!(id, LinearMap::identity(2));
        assert_eq!(a.determinant().unwrap(), int(-1));
        assert!(a.apply(&[int(1)]).is_err());
        assert!(LinearMap::new(2, 2, vec![vec![int(1)]]).is_err());
    }
}
