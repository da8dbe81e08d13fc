//! Integer linear algebra over Z: Smith normal form, invariant factors,
//! normalized volume, sign algebra mod 2 and re-coordinatization of
//! configurations with nontrivial index.

mod f2;
mod snf;
mod volume;

pub use f2::{sign_solvability, Sign, SignSolution};
pub use snf::{smith_normal_form, SnfDecomposition};
pub use volume::normalized_volume;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::Input("matrix rows must be nonempty and of equal length".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("well-formed literal matrix")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if c == 0 || r == 0 || cols.iter().any(|v| v.len() != r) {
            return Err(Error::Input("columns must be nonempty and of equal length".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Exact inverse of a square nonsingular matrix over Q.
    pub fn inverse_rational(&self) -> Result<Vec<Vec<BigRational>>> {
        let rows: Vec<Vec<BigRational>> =
            self.to_rows().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
        rational_inverse(&rows)
    }

    /// Inverse of a unimodular matrix, as an integer matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_unimodular() {
            return Err(Error::SingularMatrix);
        }
        let inv = self.inverse_rational()?;
        let rows = inv.into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect();
        IntMatrix::from_rows(rows)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

/// Gauss-Jordan inverse over Q.
pub(crate) fn rational_inverse(m: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Rank of a rational matrix given by rows.
pub(crate) fn rational_rank(m: &[Vec<BigRational>]) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        for i in rank + 1..rows {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in c..cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of a square rational matrix.
pub(crate) fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

/// A finite set of distinct lattice points in Z^n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportSet {
    dim: usize,
    points: Vec<Vec<BigInt>>,
}

impl SupportSet {
    pub fn new(dim: usize, points: Vec<Vec<BigInt>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Input(format!("point of length {} in dimension {dim}", p.len())));
        }
        for i in 0..points.len() {
            if points[..i].contains(&points[i]) {
                return Err(Error::Input(format!("duplicate point at position {i}")));
            }
        }
        Ok(SupportSet { dim, points })
    }

    pub fn from_i64(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, points.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<BigInt>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_origin(&self) -> bool {
        self.origin_index().is_some()
    }

    pub fn origin_index(&self) -> Option<usize> {
        self.points.iter().position(|p| p.iter().all(Zero::is_zero))
    }

    pub fn index_of(&self, point: &[BigInt]) -> Option<usize> {
        self.points.iter().position(|p| p.as_slice() == point)
    }

    /// The set shifted by `-base`.
    pub fn translated(&self, base: &[BigInt]) -> SupportSet {
        let points = self.points.iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        SupportSet { dim: self.dim, points }
    }

    /// Image under x ↦ M·x.
    pub fn transformed(&self, m: &IntMatrix) -> Result<SupportSet> {
        SupportSet::new(m.rows(), self.points.iter().map(|p| m.mul_vec(p)).collect())
    }

    /// Difference vectors from the origin (if present) or the first point.
    pub(crate) fn difference_vectors(&self) -> Vec<Vec<BigInt>> {
        let base = self.origin_index().unwrap_or(0);
        let b = &self.points[base];
        self.points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != base)
            .map(|(_, p)| p.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect()
    }

    /// Dimension of the affine span.
    pub fn affine_dimension(&self) -> usize {
        let diffs: Vec<Vec<BigRational>> = self
            .difference_vectors()
            .into_iter()
            .map(|v| v.into_iter().map(BigRational::from_integer).collect())
            .collect();
        if diffs.is_empty() {
            0
        } else {
            rational_rank(&diffs)
        }
    }

    pub fn spans(&self) -> bool {
        self.affine_dimension() == self.dim
    }
}

/// Invariant factors of a configuration together with the index and the
/// number of even factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors {
    pub factors: Vec<BigInt>,
    pub index: BigInt,
    pub e_count: usize,
}

impl InvariantFactors {
    /// index = 2^e · odd part.
    pub fn odd_part(&self) -> BigInt {
        let mut n = self.index.clone();
        while n.is_even() && !n.is_zero() {
            n /= 2;
        }
        n
    }
}

/// Invariant factors of the lattice spanned by the difference vectors of `a`.
pub fn invariant_factors(a: &SupportSet) -> Result<InvariantFactors> {
    let diffs = a.difference_vectors();
    if diffs.len() < a.dim() {
        return Err(Error::NotFullRank(a.dim()));
    }
    let m = IntMatrix::from_columns(&diffs)?;
    let snf = smith_normal_form(&m);
    let factors = snf.diagonal();
    if factors.len() < a.dim() || factors.iter().any(Zero::is_zero) {
        return Err(Error::NotFullRank(a.dim()));
    }
    let index = factors.iter().product();
    let e_count = factors.iter().filter(|d| d.is_even()).count();
    Ok(InvariantFactors { factors, index, e_count })
}

/// Re-express a configuration containing the origin in a basis of the
/// lattice it generates. Returns `(A', B)` with `A = B·A'` pointwise.
pub fn to_primitive_coordinates(a: &SupportSet) -> Result<(SupportSet, IntMatrix)> {
    if !a.contains_origin() {
        return Err(Error::Input("configuration must contain the origin".into()));
    }
    let inv = invariant_factors(a)?;
    let n = a.dim();
    if inv.index.is_one() {
        return Ok((a.clone(), IntMatrix::identity(n)));
    }
    let m = IntMatrix::from_columns(&a.difference_vectors())?;
    let snf = smith_normal_form(&m);
    let d = snf.diagonal();
    // M = U^{-1} D V^{-1}, so the columns of U^{-1}·diag(d) form a basis of ZA.
    let u_inv = snf.u.inverse_unimodular()?;
    let mut basis = u_inv.clone();
    for j in 0..n {
        for i in 0..n {
            basis[(i, j)] = &u_inv[(i, j)] * &d[j];
        }
    }
    let mut points = Vec::with_capacity(a.len());
    for p in a.points() {
        let up = snf.u.mul_vec(p);
        let q: Vec<BigInt> = up.iter().zip(&d).map(|(x, dj)| x / dj).collect();
        debug_assert!(up.iter().zip(&d).all(|(x, dj)| (x % dj).is_zero()));
        points.push(q);
    }
    Ok((SupportSet::new(n, points)?, basis))
}

/// Integer gcd of a list (nonnegative, zero for an all-zero list).
pub(crate) fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
