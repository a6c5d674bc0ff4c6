//! Dense linear algebra over an abstract field.
//!
//! A single elimination core serves exact rationals and doubles. Exact
//! scalars pivot on the first nonzero entry; doubles use partial pivoting and
//! treat entries below a relative threshold as zero. Determinants of rational
//! matrices use fraction-free (Bareiss) elimination over the integers.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{denominator_lcm, Rational};

/// Errors raised by the elimination routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Scalar field used by the elimination core.
pub trait Field: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Size used to rank pivot candidates (larger is preferred).
    fn magnitude(&self) -> f64;
    /// Whether the value counts as zero relative to `scale` (the largest
    /// magnitude in the matrix being reduced).
    fn is_negligible(&self, scale: f64) -> bool;
    /// Exact fields keep the first usable pivot instead of the largest one.
    const EXACT: bool;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    const EXACT: bool = true;
}

/// Relative threshold below which a double pivot is considered zero.
pub const FLOAT_PIVOT_TOL: f64 = 1e-13;

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_PIVOT_TOL * scale.max(f64::MIN_POSITIVE)
    }
    const EXACT: bool = false;
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    /// Matrix of zeros.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows, which must share one length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds an `rows × cols` matrix from an entry function.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// All rows as owned vectors.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Matrix product.
    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, l| {
                acc.add(&self[(i, l)].mul(&other[(l, j)]))
            })
        }))
    }

    /// Applies `f` to every entry.
    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Whether every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == T::zero())
    }

    /// Largest entry magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a reduction to reduced row echelon form.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref<T> {
    /// The reduced matrix (zero rows at the bottom).
    pub matrix: Matrix<T>,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

fn choose_pivot<T: Field>(m: &Matrix<T>, col: usize, from: usize, scale: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in from..m.rows {
        let v = &m[(i, col)];
        if v.is_negligible(scale) {
            continue;
        }
        if T::EXACT {
            return Some(i);
        }
        let mag = v.magnitude();
        if best.is_none_or(|(_, b)| mag > b) {
            best = Some((i, mag));
        }
    }
    best.map(|(i, _)| i)
}

/// Eliminates column `col` using pivot row `p`, scaling the pivot row to 1.
fn eliminate<T: Field>(m: &mut Matrix<T>, p: usize, col: usize) {
    let inv = T::one().div(&m[(p, col)]);
    for j in 0..m.cols {
        m[(p, j)] = m[(p, j)].mul(&inv);
    }
    for i in 0..m.rows {
        if i == p || m[(i, col)] == T::zero() {
            continue;
        }
        let factor = m[(i, col)].clone();
        for j in 0..m.cols {
            let delta = factor.mul(&m[(p, j)]);
            m[(i, j)] = m[(i, j)].sub(&delta);
        }
    }
}

/// Reduced row echelon form with automatically chosen pivots.
pub fn rref<T: Field>(m: &Matrix<T>) -> Rref<T> {
    let mut a = m.clone();
    let scale = a.max_magnitude();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = choose_pivot(&a, col, row, scale) else {
            for i in row..a.rows {
                a[(i, col)] = T::zero();
            }
            continue;
        };
        a.swap_rows(row, p);
        eliminate(&mut a, row, col);
        pivots.push(col);
        row += 1;
    }
    Rref { matrix: a, pivots }
}

/// Rank of `m`.
pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    rref(m).pivots.len()
}

/// For a full-row-rank `k × n` matrix, returns `M_I⁻¹ M` where `M_I` is the
/// square submatrix on `cols`, i.e. the row echelon form whose identity block
/// sits on the requested columns.
pub fn rref_at<T: Field>(m: &Matrix<T>, cols: &[usize]) -> Result<Matrix<T>, LinalgError> {
    if cols.len() != m.rows {
        return Err(LinalgError::Shape(format!(
            "{} pivot columns for {} rows",
            cols.len(),
            m.rows
        )));
    }
    let square = m.select(&(0..m.rows).collect::<Vec<_>>(), cols);
    solve(&square, m)
}

/// Solves `a x = b` for square nonsingular `a`.
pub fn solve<T: Field>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let n = a.rows;
    if a.cols != n || b.rows != n {
        return Err(LinalgError::Shape(format!(
            "system {}x{} with right-hand side {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut aug = Matrix::from_fn(n, n + b.cols, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[(i, j - n)].clone()
        }
    });
    let scale = a.max_magnitude();
    for col in 0..n {
        let p = choose_pivot(&aug, col, col, scale).ok_or(LinalgError::Singular)?;
        aug.swap_rows(col, p);
        eliminate(&mut aug, col, col);
    }
    Ok(Matrix::from_fn(n, b.cols, |i, j| aug[(i, n + j)].clone()))
}

/// Basis of the right null space `{x : m x = 0}`, one basis vector per row.
pub fn kernel<T: Field>(m: &Matrix<T>) -> Matrix<T> {
    let r = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !r.pivots.contains(c)).collect();
    Matrix::from_fn(free.len(), m.cols, |i, j| {
        if j == free[i] {
            T::one()
        } else if let Some(row) = r.pivots.iter().position(|&p| p == j) {
            r.matrix[(row, free[i])].neg()
        } else {
            T::zero()
        }
    })
}

/// Determinant by Gaussian elimination.
pub fn det<T: Field>(m: &Matrix<T>) -> T {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let mut a = m.clone();
    let scale = a.max_magnitude();
    let mut acc = T::one();
    for col in 0..a.rows {
        let Some(p) = choose_pivot(&a, col, col, scale) else {
            return T::zero();
        };
        if p != col {
            a.swap_rows(col, p);
            acc = acc.neg();
        }
        let pivot = a[(col, col)].clone();
        acc = acc.mul(&pivot);
        for i in col + 1..a.rows {
            if a[(i, col)] == T::zero() {
                continue;
            }
            let factor = a[(i, col)].div(&pivot);
            for j in col..a.cols {
                let delta = factor.mul(&a[(col, j)]);
                a[(i, j)] = a[(i, j)].sub(&delta);
            }
        }
    }
    acc
}

/// Exact determinant of a rational matrix by fraction-free elimination.
///
/// Each row is first scaled by the lcm of its denominators; Bareiss
/// elimination then runs over the integers and the scale is divided out.
pub fn det_bareiss(m: &Matrix<Rational>) -> Rational {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return <Rational as One>::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let l = denominator_lcm(row.iter());
            scale *= &l;
            row.iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return <Rational as Zero>::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = &a[n - 1][n - 1] * sign;
    Rational::new(d, scale)
}

/// Whether two matrices of equal shape have proportional (projectively equal)
/// row spaces, compared through their reduced row echelon forms.
pub fn same_row_space(a: &Matrix<Rational>, b: &Matrix<Rational>) -> bool {
    if a.ncols() != b.ncols() {
        return false;
    }
    let ra = rref(a);
    let rb = rref(b);
    let ka = ra.pivots.len();
    ka == rb.pivots.len()
        && ra.pivots == rb.pivots
        && (0..ka).all(|i| ra.matrix.row(i) == rb.matrix.row(i))
}

/// Sign of a nonzero rational as ±1, or 0.
pub fn signum(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn bareiss_matches_hand_value() {
        let m = qm(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det_bareiss(&m), int(0));
        let m = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_bareiss(&m), int(-1));
        let m = Matrix::from_rows(vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 4), int(1)]]);
        assert_eq!(det_bareiss(&m), ratio(1, 2) - ratio(1, 12));
    }

    #[test]
    fn kernel_and_rank() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let k = kernel(&m);
        assert_eq!(k.nrows(), 2);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());
    }

    #[test]
    fn rref_at_columns() {
        let m = qm(&[&[1, 1, 0], &[0, 1, 1]]);
        let r = rref_at(&m, &[1, 2]).unwrap();
        assert_eq!(r.row(0), &[int(1), int(1), int(0)]);
        assert_eq!(r.row(1), &[int(-1), int(0), int(1)]);
        assert_eq!(rref_at(&qm(&[&[1, 0, 0], &[1, 0, 0]]), &[0, 1]), Err(LinalgError::Singular));
    }

    #[test]
    fn float_solve() {
        let a = Matrix::from_rows(vec![vec![1e-3, 1.0], vec![1.0, 1.0]]);
        let b = Matrix::from_rows(vec![vec![1.0], vec![2.0]]);
        let x = solve(&a, &b).unwrap();
        assert!((x[(0, 0)] - 1.001_001_001).abs() < 1e-8);
        assert!((det(&a) - (1e-3 - 1.0)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_field_elimination(entries in proptest::collection::vec((-9i64..9, 1i64..5), 16)) {
            let m = Matrix::from_fn(4, 4, |i, j| {
                let (p, q) = entries[4 * i + j];
                ratio(p, q)
            });
            prop_assert_eq!(det_bareiss(&m), det(&m));
        }

        #[test]
        fn determinant_is_multiplicative(a in proptest::collection::vec(-5i64..5, 9), b in proptest::collection::vec(-5i64..5, 9)) {
            let ma = Matrix::from_fn(3, 3, |i, j| int(a[3 * i + j]));
            let mb = Matrix::from_fn(3, 3, |i, j| int(b[3 * i + j]));
            let prod = ma.mul(&mb).unwrap();
            prop_assert_eq!(det_bareiss(&prod), det_bareiss(&ma) * det_bareiss(&mb));
        }

        #[test]
        fn kernel_vectors_are_annihilated(a in proptest::collection::vec(-3i64..3, 12)) {
            let m = Matrix::from_fn(3, 4, |i, j| int(a[4 * i + j]));
            let k = kernel(&m);
            prop_assert_eq!(k.nrows() + rank(&m), 4);
            prop_assert!(m.mul(&k.transpose()).unwrap().is_zero());
        }
    }
}
