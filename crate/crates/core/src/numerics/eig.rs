//! Hermitian eigendecomposition and rank-revealing nullspaces, both built on
//! complex Jacobi rotations.

use num_complex::Complex;

use super::matrix::{Matrix, Vector};
use crate::error::{Error, Result};
use crate::scalar::{cr, czero, Real, C};

/// Sweep budget for both Jacobi iterations.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues (non-increasing) with matching orthonormal eigenvector columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> Vector<T> {
        self.vectors.column(k)
    }

    /// `Σ_k f(λ_k) v_k v_k†`.
    pub fn map(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.vectors.rows();
        let mut out = Matrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.map(|x| x)
    }

    pub fn min_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
}

/// Unitary 2x2 block `[[g00, g01], [g10, g11]]` diagonalizing the Hermitian
/// block `[[a, b], [b*, d]]` via `g† H g`.
#[derive(Clone, Copy)]
struct Rotation<T> {
    g00: C<T>,
    g01: C<T>,
    g10: C<T>,
    g11: C<T>,
}

fn jacobi_rotation<T: Real>(a: T, d: T, b: C<T>) -> Rotation<T> {
    let mag = b.norm();
    // b = |b| e^{iφ}; the phase factor e^{-iφ} makes the block real symmetric.
    let ph = (b / mag).conj();
    let theta = (d - a) / (T::lit(2.0) * mag);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    Rotation {
        g00: cr(c),
        g01: cr(s),
        g10: ph * (-s),
        g11: ph * c,
    }
}

/// Right-multiplies columns `p`, `q` of `m` by the rotation.
fn rotate_columns<T: Real>(m: &mut Matrix<T>, p: usize, q: usize, g: Rotation<T>) {
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * g.g00 + mq * g.g10;
        m[(k, q)] = mp * g.g01 + mq * g.g11;
    }
}

/// Left-multiplies rows `p`, `q` of `m` by the adjoint rotation.
fn rotate_rows_adjoint<T: Real>(m: &mut Matrix<T>, p: usize, q: usize, g: Rotation<T>) {
    for k in 0..m.cols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = g.g00.conj() * mp + g.g10.conj() * mq;
        m[(q, k)] = g.g01.conj() * mp + g.g11.conj() * mq;
    }
}

fn offdiag_sq<T: Real>(m: &Matrix<T>) -> T {
    let n = m.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Eigenvalues come back non-increasing; equal eigenvalues keep the order in
/// which the solver produced them.
pub fn hermitian_eig<T: Real>(m: &Matrix<T>, tol: T) -> Result<Spectrum<T>> {
    let n = m.require_square()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let dev = m.hermitian_deviation();
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev.as_f64(),
        });
    }
    let mut a = m.hermitian_part();
    let mut v = Matrix::identity(n);
    let scale = a.hs_norm();
    let stop = (T::epsilon() * scale) * (T::epsilon() * scale);

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if offdiag_sq(&a) <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                if b.norm() <= T::min_positive_value() {
                    continue;
                }
                let g = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, b);
                rotate_columns(&mut a, p, q, g);
                rotate_rows_adjoint(&mut a, p, q, g);
                a[(p, q)] = czero();
                a[(q, p)] = czero();
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
                rotate_columns(&mut v, p, q, g);
            }
        }
    }
    if !converged && offdiag_sq(&a) > stop {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
        });
    }

    let raw: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: ties stay in solver order.
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| raw[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Spectrum { values, vectors })
}

/// Principal square root of a positive semidefinite matrix; negative
/// eigenvalues are clamped to zero.
pub fn sqrt_psd<T: Real>(m: &Matrix<T>, tol: T) -> Result<Matrix<T>> {
    let spec = hermitian_eig(m, tol)?;
    // Roundoff-level eigenvalues are zeroed; their square roots would
    // otherwise inject errors of order sqrt(eps).
    let top = spec.values.first().map_or(T::zero(), |v| v.abs());
    let floor = T::epsilon() * T::lit(64.0 * spec.len() as f64) * top;
    Ok(spec.map(|x| if x <= floor { T::zero() } else { x.sqrt() }))
}

/// Upper-triangular factor of a Householder QR decomposition (`cols x cols`).
/// Rows beyond the rank are zero-padded when the input is wide.
fn householder_r<T: Real>(a: &Matrix<T>) -> Matrix<T> {
    let (m, n) = a.shape();
    let mut w = if m >= n {
        a.clone()
    } else {
        Matrix::from_fn(n, n, |i, j| if i < m { a[(i, j)] } else { czero() })
    };
    let rows = w.rows();
    for k in 0..n.min(rows) {
        let xnorm = (k..rows)
            .map(|i| w[(i, k)].norm_sqr())
            .fold(T::zero(), |s, x| s + x)
            .sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let x0 = w[(k, k)];
        let phase = if x0.norm() > T::zero() {
            x0 / x0.norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        let alpha = -phase * xnorm;
        let mut v: Vector<T> = (k..rows).map(|i| w[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |s, x| s + x).sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        for j in k..n {
            let mut dot = czero();
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * w[(k + t, j)];
            }
            let two_dot = dot * T::lit(2.0);
            for (t, vi) in v.iter().enumerate() {
                w[(k + t, j)] -= *vi * two_dot;
            }
        }
    }
    w.block(0, 0, n, n)
}

/// Right singular vectors and singular values of `a` by QR followed by
/// one-sided Jacobi. Singular values are returned in column order of the
/// rotated factor, not sorted.
pub fn right_singular<T: Real>(a: &Matrix<T>) -> Result<(Vec<T>, Matrix<T>)> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.cols();
    let mut w = householder_r(a);
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = czero();
                for k in 0..w.rows() {
                    let wp = w[(k, p)];
                    let wq = w[(k, q)];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() == T::zero() {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, g);
                rotate_columns(&mut v, p, q, g);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
        });
    }
    let sigma = (0..n)
        .map(|k| {
            (0..w.rows())
                .map(|i| w[(i, k)].norm_sqr())
                .fold(T::zero(), |s, x| s + x)
                .sqrt()
        })
        .collect();
    Ok((sigma, v))
}

/// Orthonormal basis of `{x : A x = 0}`; singular values at or below
/// `cutoff * max(1, σ_max)` count as zero.
pub fn nullspace<T: Real>(a: &Matrix<T>, cutoff: T) -> Result<Vec<Vector<T>>> {
    let (sigma, v) = right_singular(a)?;
    let smax = sigma.iter().fold(T::one(), |m, &s| m.max(s));
    Ok(sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff * smax)
        .map(|(k, _)| v.column(k))
        .collect())
}
