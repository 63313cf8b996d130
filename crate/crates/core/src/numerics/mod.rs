//! Dense complex linear algebra kernel.
//!
//! Everything here is generic over [`Real`]; entropies are reported in bits.

mod eig;
mod matrix;

pub use eig::{hermitian_eig, nullspace, right_singular, sqrt_psd, Spectrum, MAX_SWEEPS};
pub use matrix::{
    basis_vector, inner, kron_vec, norm, normalized, orthonormality_defect, sum, Matrix, Vector,
};

use crate::error::{Error, Result};
use crate::scalar::{czero, Real};

/// Default tolerance for validity checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Eigenvalues below this are treated as exact zeros before taking logs.
pub const EIGEN_CLAMP: f64 = 1e-9;

/// Which factor of a bipartite space to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Entrywise product `a_ij * b_ij`.
pub fn schur_product<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    a.schur(b)
}

/// Kronecker product `A ⊗ B`.
pub fn tensor<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.kron(b)
}

pub fn entrywise_l1<T: Real>(m: &Matrix<T>, offdiag_only: bool) -> T {
    m.entrywise_l1(offdiag_only)
}

pub fn hs_norm<T: Real>(m: &Matrix<T>) -> T {
    m.hs_norm()
}

/// Reduced operator on the kept factor of a `dA x dB` system.
pub fn partial_trace<T: Real>(
    m: &Matrix<T>,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<Matrix<T>> {
    let n = m.require_square()?;
    let (da, db) = dims;
    if da * db != n {
        return Err(Error::DimMismatch {
            expected: da * db,
            got: n,
        });
    }
    Ok(match keep {
        Subsystem::A => Matrix::from_fn(da, da, |i, j| {
            (0..db).fold(czero(), |acc, k| acc + m[(i * db + k, j * db + k)])
        }),
        Subsystem::B => Matrix::from_fn(db, db, |i, j| {
            (0..da).fold(czero(), |acc, k| acc + m[(k * db + i, k * db + j)])
        }),
    })
}

fn clamp<T: Real>(x: T) -> T {
    if x < T::lit(EIGEN_CLAMP) {
        T::zero()
    } else {
        x
    }
}

/// Shannon entropy in bits of a (possibly unnormalized) weight vector, with
/// `0 log 0 = 0` and tiny weights clamped to zero.
pub fn shannon_entropy<T: Real>(weights: &[T]) -> T {
    weights
        .iter()
        .map(|&p| clamp(p))
        .filter(|&p| p > T::zero())
        .map(|p| -p * p.log2())
        .fold(T::zero(), |a, b| a + b)
}

/// `-Tr(M log2 M)` of a positive semidefinite operator.
pub fn entropy_psd<T: Real>(m: &Matrix<T>, tol: T) -> Result<T> {
    let spec = hermitian_eig(m, tol)?;
    if spec.min_value() < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: spec.min_value().as_f64(),
        });
    }
    Ok(shannon_entropy(&spec.values))
}

/// `Tr(ρ log2 ρ) - Tr(ρ log2 σ)` for positive semidefinite `ρ` and `σ`.
///
/// `σ` need not be normalized. Returns `+∞` when the support of `ρ` is not
/// contained in the support of `σ`.
pub fn relative_entropy_psd<T: Real>(rho: &Matrix<T>, sigma: &Matrix<T>, tol: T) -> Result<T> {
    rho.require_same_shape(sigma)?;
    let sr = hermitian_eig(rho, tol)?;
    let ss = hermitian_eig(sigma, tol)?;
    for s in [&sr, &ss] {
        if s.min_value() < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: s.min_value().as_f64(),
            });
        }
    }
    let neg_entropy = -shannon_entropy(&sr.values);
    let rho_h = rho.hermitian_part();
    let mut cross = T::zero();
    for (j, &mu) in ss.values.iter().enumerate() {
        let w = ss.vector(j);
        let weight = inner(&w, &rho_h.apply(&w)?).re;
        let mu = clamp(mu);
        if mu == T::zero() {
            if weight > T::lit(EIGEN_CLAMP) {
                return Ok(T::infinity());
            }
            continue;
        }
        cross += weight * mu.log2();
    }
    Ok(neg_entropy - cross)
}

fn sorted_desc<T: Real>(v: &[T]) -> Vec<T> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
    s
}

fn partial_sum_gap<T: Real>(x: &[T], y: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let scan = |v: Vec<T>| {
        v.into_iter()
            .scan(T::zero(), |acc, e| {
                *acc += e;
                Some(*acc)
            })
            .collect::<Vec<_>>()
    };
    Ok((scan(sorted_desc(x)), scan(sorted_desc(y))))
}

/// Whether `y ≺ x`: every partial sum of sorted `y` is at most that of sorted
/// `x` (up to `tol`), and the totals agree within `tol`.
pub fn majorizes<T: Real>(x: &[T], y: &[T], tol: T) -> Result<bool> {
    let (px, py) = partial_sum_gap(x, y)?;
    let totals_match = match (px.last(), py.last()) {
        (Some(&a), Some(&b)) => (a - b).abs() <= tol,
        _ => true,
    };
    Ok(totals_match && px.iter().zip(&py).all(|(&a, &b)| b <= a + tol))
}

/// Weak (sub-)majorization `y ≺_w x`: partial sums only, totals may differ.
pub fn weakly_majorizes<T: Real>(x: &[T], y: &[T], tol: T) -> Result<bool> {
    let (px, py) = partial_sum_gap(x, y)?;
    Ok(px.iter().zip(&py).all(|(&a, &b)| b <= a + tol))
}

/// Largest violation `max_m (Σ_{k≤m} y↓ - Σ_{k≤m} x↓)`, clipped at zero, plus
/// the total mismatch. Zero means `y ≺ x` exactly.
pub fn majorization_violation<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    let (px, py) = partial_sum_gap(x, y)?;
    let mut worst = T::zero();
    for (&a, &b) in px.iter().zip(&py) {
        worst = worst.max(b - a);
    }
    if let (Some(&a), Some(&b)) = (px.last(), py.last()) {
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}
