//! Exact linear algebra over the rationals.
//!
//! Every subspace is carried by a basis in reduced column-echelon form, so two
//! subspaces are equal exactly when their `Subspace` values compare equal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("subspace containment failed: denominator is not contained in numerator")]
    Containment,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse rational literal {0:?}")]
    Parse(String),
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_scalar(s: &str) -> Result<Scalar, LinAlgError> {
    let err = || LinAlgError::Parse(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| err())?)),
    }
}

pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", format_scalar(self.get(r, c)))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinAlgError::Shape("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from integer rows; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|x| x.iter().map(|&v| int(v))).collect(),
        }
    }

    pub fn from_columns(ambient: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(ambient, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), ambient);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn column_vector(v: &[Scalar]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set(c, r, v.clone());
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "mul_vec shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = block.get(r, c);
                if !v.is_zero() {
                    self.set(r0 + r, c0 + c, v.clone());
                }
            }
        }
    }

    /// Adds `block` into `self` at `(r0, c0)`.
    pub fn add_at(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = block.get(r, c);
                if !v.is_zero() {
                    let idx = (r0 + r) * self.cols + c0 + c;
                    self.data[idx] += v;
                }
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                m.set(i, c, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows), "hstack row mismatch");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            m.put(0, c0, b);
            c0 += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols), "vstack column mismatch");
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut r0 = 0;
        for b in blocks {
            m.put(r0, 0, b);
            r0 += b.rows;
        }
        m
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.put(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = Matrix::hstack(&[self, &Matrix::identity(n)]);
        let red = rref(&aug);
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return None;
        }
        Some(red.matrix.submatrix(0..n, n..2 * n))
    }

    /// Rows of integers rendered as `"p/q"` strings, the scenario-file encoding.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(format_scalar).collect()).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.to_string_rows().into_iter().map(|r| format!("[{}]", r.join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape {:?} x {:?}", self.shape(), rhs.shape());
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn add(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

pub(crate) struct Reduced {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form; `pivots[i]` is the pivot column of row `i`.
pub(crate) fn rref(m: &Matrix) -> Reduced {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<Scalar>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for c in 0..cols {
        if prow == rows {
            break;
        }
        let Some(p) = (prow..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(prow, p);
        let inv = a[prow][c].recip();
        if !inv.is_one() {
            for x in a[prow][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = a[prow].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == prow || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        prow += 1;
    }
    let data = a.into_iter().flatten().collect();
    Reduced {
        matrix: Matrix { rows, cols, data },
        pivots,
    }
}

/// A linear subspace of `Q^ambient_dim` with a canonical basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// The column span of `vectors`.
    pub fn span(vectors: &Matrix) -> Self {
        let ambient_dim = vectors.rows();
        let red = rref(&vectors.transpose());
        let k = red.pivots.len();
        let basis = red.matrix.submatrix(0..k, 0..ambient_dim).transpose();
        Subspace {
            ambient_dim,
            basis,
            pivots: red.pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` lies outside.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient_dim, "coords: vector length");
        let c: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        (self.basis.mul_vec(&c) == v).then_some(c)
    }

    /// Column-wise coordinates of `m`, or `None` if any column lies outside.
    pub fn coords_matrix(&self, m: &Matrix) -> Option<Matrix> {
        assert_eq!(m.rows(), self.ambient_dim, "coords_matrix: row count");
        let c = m.select_rows(&self.pivots);
        (&self.basis * &c == *m).then_some(c)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.coords_matrix(&other.basis).is_some()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&Matrix::hstack(&[&self.basis, &other.basis]))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve A x = B y; the intersection is the image of A on the x-part of the kernel.
        let k = kernel(&Matrix::hstack(&[&self.basis, &(-&other.basis)]));
        let x = k.basis.submatrix(0..self.dim(), 0..k.dim());
        Subspace::span(&(&self.basis * &x))
    }

    /// Image of this subspace under `m`.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        Subspace::span(&(m * &self.basis))
    }
}

pub fn kernel(m: &Matrix) -> Subspace {
    let cols = m.cols();
    let red = rref(m);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &p in &red.pivots {
            s[p] = true;
        }
        s
    };
    let mut vecs = Vec::new();
    for free in (0..cols).filter(|&c| !pivot_set[c]) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (i, &p) in red.pivots.iter().enumerate() {
            v[p] = -red.matrix.get(i, free).clone();
        }
        vecs.push(v);
    }
    Subspace::span(&Matrix::from_columns(cols, &vecs))
}

pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m)
}

/// A quotient `num / den` together with a lift of its basis and a projector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub dim: usize,
    /// Ambient vectors in `num` whose classes form the quotient basis.
    pub lift: Matrix,
    /// Sends vectors of `num` to quotient coordinates; vanishes on `den`.
    pub projector: Matrix,
}

pub fn quotient(num: &Subspace, den: &Subspace) -> Result<Quotient, LinAlgError> {
    if num.ambient_dim != den.ambient_dim {
        return Err(LinAlgError::Shape("quotient ambient dimensions differ".into()));
    }
    if !num.contains_subspace(den) {
        return Err(LinAlgError::Containment);
    }
    let n = num.ambient_dim;
    let mut current = den.clone();
    let mut chosen = Vec::new();
    for j in 0..num.dim() {
        if current.dim() == num.dim() {
            break;
        }
        let v = num.basis.column(j);
        if !current.contains(&v) {
            current = current.sum(&Subspace::span(&Matrix::column_vector(&v)));
            chosen.push(v);
        }
    }
    let lift = Matrix::from_columns(n, &chosen);
    let dim = chosen.len();
    let full = Matrix::hstack(&[den.basis(), &lift]);
    let left = left_inverse(&full).expect("independent columns have a left inverse");
    let projector = left.submatrix(den.dim()..den.dim() + dim, 0..n);
    Ok(Quotient { dim, lift, projector })
}

/// A left inverse of a matrix with independent columns.
pub fn left_inverse(m: &Matrix) -> Option<Matrix> {
    let k = m.cols();
    let rows = rref(&m.transpose()).pivots;
    if rows.len() < k {
        return None;
    }
    let square = m.select_rows(&rows);
    let inv = square.inverse()?;
    let mut out = Matrix::zeros(k, m.rows());
    for (j, &r) in rows.iter().enumerate() {
        for i in 0..k {
            out.set(i, r, inv.get(i, j).clone());
        }
    }
    Some(out)
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(b.len(), m.rows(), "solve: rhs length");
    let aug = Matrix::hstack(&[m, &Matrix::column_vector(b)]);
    let red = rref(&aug);
    let cols = m.cols();
    if red.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (i, &p) in red.pivots.iter().enumerate() {
        x[p] = red.matrix.get(i, cols).clone();
    }
    Some(x)
}

/// Solves `m X = b` column by column.
pub fn solve_matrix(m: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(b.rows(), m.rows(), "solve_matrix: rhs rows");
    let aug = Matrix::hstack(&[m, b]);
    let red = rref(&aug);
    let cols = m.cols();
    if red.pivots.iter().any(|&p| p >= cols) {
        return None;
    }
    let mut x = Matrix::zeros(cols, b.cols());
    for (i, &p) in red.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, red.matrix.get(i, cols + j).clone());
        }
    }
    Some(x)
}

pub fn is_nonneg(x: &Scalar) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank by fraction-free integer elimination, independent of `rref`.
    fn oracle_rank(rows: &[&[i64]]) -> usize {
        let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let (n, m) = (a.len(), a.first().map_or(0, |r| r.len()));
        let mut rank = 0;
        for c in 0..m {
            let Some(p) = (rank..n).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, p);
            for r in 0..n {
                if r != rank && a[r][c] != 0 {
                    let (x, y) = (a[rank][c], a[r][c]);
                    for k in 0..m {
                        a[r][k] = a[r][k] * x - a[rank][k] * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::zeros(2, 2)).dim(), 2);
        assert_eq!(kernel(&Matrix::identity(1)).dim(), 0);
        let rows: &[&[i64]] = &[&[1, 2], &[2, 4]];
        let m = Matrix::from_i64(rows);
        assert_eq!(oracle_rank(rows), 1);
        assert_eq!(kernel(&m).dim(), 2 - oracle_rank(rows));
        let k = kernel(&m);
        assert!((&m * k.basis()).is_zero());
    }

    #[test]
    fn image_examples() {
        assert_eq!(image(&Matrix::zeros(3, 2)).dim(), 0);
        assert_eq!(image(&Matrix::identity(4)).dim(), 4);
        let rows: &[&[i64]] = &[&[1, 2], &[2, 4]];
        assert_eq!(image(&Matrix::from_i64(rows)).dim(), oracle_rank(rows));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(&Subspace::full(2), &Subspace::zero(2)).unwrap();
        assert_eq!(q.dim, 2);
        let q = quotient(&Subspace::full(1), &Subspace::full(1)).unwrap();
        assert_eq!(q.dim, 0);
        let den = Subspace::span(&Matrix::from_i64(&[&[1], &[1]]));
        let q = quotient(&Subspace::full(2), &den).unwrap();
        assert_eq!(q.dim, 2 - 1);
        assert!((&q.projector * den.basis()).is_zero());
        assert_eq!(&q.projector * &q.lift, Matrix::identity(1));
    }

    #[test]
    fn quotient_requires_containment() {
        let num = Subspace::span(&Matrix::from_i64(&[&[1], &[0]]));
        let den = Subspace::span(&Matrix::from_i64(&[&[0], &[1]]));
        assert_eq!(quotient(&num, &den), Err(LinAlgError::Containment));
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(3), int(-1)];
        assert_eq!(solve(&Matrix::identity(2), &b), Some(b.clone()));
        assert_eq!(solve(&Matrix::zeros(2, 2), &b), None);
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let x = solve(&m, &[int(1), int(2)]).unwrap();
        assert_eq!(&x[0] + &(int(2) * &x[1]), int(1));
        assert_eq!(m.mul_vec(&x), vec![int(1), int(2)]);
    }

    #[test]
    fn canonical_basis_is_independent_of_spanning_set() {
        let a = Subspace::span(&Matrix::from_i64(&[&[1, 0], &[1, 1], &[0, 1]]));
        let b = Subspace::span(&Matrix::from_i64(&[&[1, 1, 2], &[2, 1, 3], &[1, 0, 1]]));
        assert_eq!(a, b);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_scalar("7").unwrap(), int(7));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert_eq!(format_scalar(&frac(4, -6)), "-2/3");
    }

    #[test]
    fn inverse_and_intersection() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let a = Subspace::span(&Matrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]));
        let b = Subspace::span(&Matrix::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]));
        let i = a.intersection(&b);
        assert_eq!(i, Subspace::span(&Matrix::from_i64(&[&[0], &[1], &[0]])));
    }
}
