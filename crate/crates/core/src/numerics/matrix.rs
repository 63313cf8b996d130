use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cone, cr, czero, Real, C};

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

/// Column vector of complex amplitudes.
pub type Vector<T> = Vec<C<T>>;

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    /// All-ones `n x n` matrix.
    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, n, |_, _| cone())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from a row-major entry list, rejecting bad lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: rows * cols,
                right: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor from real rows; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| cr(T::lit(rows[i][j])))
    }

    pub fn from_diag(diag: &[C<T>]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = cr(x);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector<T>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.len());
        Self::from_fn(rows, cols, |i, j| columns[j][i])
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C<T>], v: &[C<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Rank-one projector `|v><v|`.
    pub fn projector(v: &[C<T>]) -> Self {
        Self::outer(v, v)
    }

    /// Matrix unit `|i><j|` in dimension `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = cone();
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vector<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C<T>]) {
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn diagonal(&self) -> Vector<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn real_diagonal(&self) -> Vec<T> {
        self.diagonal().into_iter().map(|z| z.re).collect()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C<T> {
        self.diagonal().into_iter().fold(czero(), |a, b| a + b)
    }

    /// Hilbert–Schmidt inner product `Tr(A† B)`.
    pub fn hs_inner(&self, other: &Self) -> C<T> {
        self.data
            .iter()
            .zip(&other.data)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `sqrt(Tr(M† M))`.
    pub fn hs_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Sum of entry magnitudes, optionally restricted to `i != j`.
    pub fn entrywise_l1(&self, offdiag_only: bool) -> T {
        let mut s = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if offdiag_only && i == j {
                    continue;
                }
                s += self[(i, j)].norm();
            }
        }
        s
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Largest off-diagonal magnitude.
    pub fn max_offdiag_abs(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    m = m.max(self[(i, j)].norm());
                }
            }
        }
        m
    }

    /// `||M - M†||_2`.
    pub fn hermitian_deviation(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.hermitian_deviation() <= tol
    }

    pub fn is_diagonal(&self, zero_tol: T) -> bool {
        self.max_offdiag_abs() <= zero_tol
    }

    /// Averages `M` with `M†` to remove rounding asymmetry.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * T::lit(0.5)
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C<T>]) -> Result<Vector<T>> {
        if v.len() != self.cols {
            return Err(Error::DimMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(czero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    /// `A X A†`.
    pub fn sandwich(&self, x: &Self) -> Result<Self> {
        self.matmul(x)?.matmul(&self.dagger())
    }

    /// `A† X A`, i.e. the matrix of `X` expressed in the columns of `A`.
    pub fn adjoint_sandwich(&self, x: &Self) -> Result<Self> {
        self.dagger().matmul(x)?.matmul(self)
    }

    /// Entrywise (Schur / Hadamard) product.
    pub fn schur(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = other.shape();
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Copy of the sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Converts the scalar type (e.g. `f64` to `f32`).
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator impls panic on shape mismatch, like slice indexing; use the
// fallible methods when shapes come from untrusted input.
impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

/// Sum of a non-empty list of equally shaped matrices.
pub fn sum<T: Real>(n: usize, items: impl IntoIterator<Item = Matrix<T>>) -> Matrix<T> {
    items
        .into_iter()
        .fold(Matrix::zeros(n, n), |acc, m| &acc + &m)
}

// ---- vector helpers -------------------------------------------------------

/// `<u|v>`, conjugate-linear in the first argument.
pub fn inner<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter()
        .zip(v)
        .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
}

pub fn norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
}

pub fn normalized<T: Real>(v: &[C<T>]) -> Vector<T> {
    let n = norm(v);
    v.iter().map(|&z| z / n).collect()
}

/// Standard basis vector `|i>` in dimension `n`.
pub fn basis_vector<T: Real>(n: usize, i: usize) -> Vector<T> {
    let mut v = vec![czero(); n];
    v[i] = cone();
    v
}

/// Kronecker product of two vectors.
pub fn kron_vec<T: Real>(u: &[C<T>], v: &[C<T>]) -> Vector<T> {
    u.iter()
        .flat_map(|&a| v.iter().map(move |&b| a * b))
        .collect()
}

/// Maximum deviation of the Gram matrix of `vectors` from the identity.
pub fn orthonormality_defect<T: Real>(vectors: &[Vector<T>]) -> T {
    let mut worst = T::zero();
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let target = if i == j { cone() } else { czero() };
            worst = worst.max((inner(u, v) - target).norm());
        }
    }
    worst
}
