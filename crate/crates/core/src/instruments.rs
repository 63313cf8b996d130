//! Measurement processes and their state transformers.

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::numerics::{self, hermitian_eig, orthonormality_defect, Matrix, Vector, DEFAULT_TOL};
use crate::qstate::{range_residual, Basis, DensityMatrix, FineGraining, Observable, Povm};
use crate::scalar::{cr, Real, C};

/// Outcomes with probability at or below this are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// `p_n = Tr(ρ P_n)`.
pub fn born_probabilities<T: Real>(rho: &DensityMatrix<T>, obs: &Observable<T>) -> Result<Vec<T>> {
    obs.require_dim(rho.dim())?;
    Ok(obs
        .projectors()
        .iter()
        .map(|p| p.hs_inner(rho.matrix()).re)
        .collect())
}

/// `p_n = Tr(ρ M_n)`.
pub fn born_probabilities_povm<T: Real>(rho: &DensityMatrix<T>, povm: &Povm<T>) -> Result<Vec<T>> {
    rho.require_dim(povm.dim())?;
    Ok(povm
        .effects()
        .iter()
        .map(|m| m.hs_inner(rho.matrix()).re)
        .collect())
}

/// Complete dephasing in `basis`.
pub fn dephase<T: Real>(rho: &DensityMatrix<T>, basis: &Basis<T>) -> Result<DensityMatrix<T>> {
    basis.check_dim(rho.dim())?;
    let in_basis = basis.express(rho.matrix())?;
    let diag = Matrix::from_diag(&in_basis.diagonal().iter().map(|z| cr(z.re)).collect::<Vec<_>>());
    Ok(DensityMatrix::from_trusted(basis.unexpress(&diag)?.hermitian_part()))
}

/// Lüders transformer `Σ P_n ρ P_n`.
pub fn luders<T: Real>(rho: &DensityMatrix<T>, obs: &Observable<T>) -> Result<DensityMatrix<T>> {
    obs.require_dim(rho.dim())?;
    let mut out = Matrix::zeros(rho.dim(), rho.dim());
    for p in obs.projectors() {
        out = &out + &p.sandwich(rho.matrix())?;
    }
    Ok(DensityMatrix::from_trusted(out.hermitian_part()))
}

/// Probability of outcome `n` and the normalized post-measurement state
/// `P_n ρ P_n / p_n`.
pub fn luders_outcome<T: Real>(
    rho: &DensityMatrix<T>,
    obs: &Observable<T>,
    outcome: usize,
) -> Result<(T, DensityMatrix<T>)> {
    obs.require_dim(rho.dim())?;
    if outcome >= obs.num_outcomes() {
        return Err(Error::BadParameter(format!(
            "outcome {outcome} out of range 0..{}",
            obs.num_outcomes()
        )));
    }
    let post = obs.projector(outcome).sandwich(rho.matrix())?.hermitian_part();
    let p = post.trace().re;
    if p <= T::lit(ZERO_PROBABILITY) {
        return Err(Error::ZeroProbabilityOutcome { outcome });
    }
    Ok((p, DensityMatrix::from_trusted(post.scale_real(T::one() / p))))
}

/// Fine-graining whose basis diagonalizes every block `P_n ρ P_n`.
pub fn optimal_fine_grain<T: Real>(obs: &Observable<T>, rho: &DensityMatrix<T>) -> Result<FineGraining<T>> {
    obs.require_dim(rho.dim())?;
    let blocks = (0..obs.num_outcomes())
        .map(|n| {
            let b = Matrix::from_columns(obs.block_basis(n));
            let compressed = b.adjoint_sandwich(rho.matrix())?.hermitian_part();
            let spec = hermitian_eig(&compressed, T::lit(DEFAULT_TOL))?;
            (0..spec.len())
                .map(|k| b.apply(&spec.vector(k)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FineGraining::new(obs, blocks, T::lit(1e-6))
}

/// Repeatable instrument `K_n = Σ_i |θ_ni><φ_ni|`, with `φ_ni` the block
/// bases of `obs` and `θ_n` any orthonormal family inside eigenspace `n`.
pub fn repeatable_instrument<T: Real>(
    obs: &Observable<T>,
    theta: &[Vec<Vector<T>>],
    tol: T,
) -> Result<KrausChannel<T>> {
    if theta.len() != obs.num_outcomes() {
        return Err(Error::LengthMismatch {
            left: theta.len(),
            right: obs.num_outcomes(),
        });
    }
    let d = obs.dim();
    let mut kraus = Vec::with_capacity(theta.len());
    for (n, block) in theta.iter().enumerate() {
        if block.len() != obs.degeneracies()[n] {
            return Err(Error::LengthMismatch {
                left: block.len(),
                right: obs.degeneracies()[n],
            });
        }
        for (i, v) in block.iter().enumerate() {
            if v.len() != d {
                return Err(Error::DimMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
            let residual = range_residual(obs.projector(n), v);
            if residual > tol {
                return Err(Error::VectorOutsideEigenspace {
                    block: n,
                    index: i,
                    residual: residual.as_f64(),
                });
            }
        }
        if orthonormality_defect(block) > tol {
            return Err(Error::NonOrthonormal { block: n });
        }
        let k = numerics::sum(
            d,
            block
                .iter()
                .zip(obs.block_basis(n))
                .map(|(t, phi)| Matrix::outer(t, phi)),
        );
        kraus.push(k);
    }
    KrausChannel::new(kraus, T::lit(DEFAULT_TOL))
}

/// `Σ M_n^{1/2} ρ M_n^{1/2}`.
pub fn generalized_luders<T: Real>(rho: &DensityMatrix<T>, povm: &Povm<T>) -> Result<DensityMatrix<T>> {
    rho.require_dim(povm.dim())?;
    let mut out = Matrix::zeros(rho.dim(), rho.dim());
    for s in povm.sqrt_effects() {
        out = &out + &s.sandwich(rho.matrix())?;
    }
    Ok(DensityMatrix::from_trusted(out.hermitian_part()))
}

/// `U_k = Σ_j ω^{jk} P_j`, `ω = e^{2πi/N}`, `k = 1..N`, whose uniform
/// mixture is the Lüders channel.
pub fn unitary_mixing<T: Real>(obs: &Observable<T>) -> Vec<Matrix<T>> {
    let n = obs.num_outcomes();
    let d = obs.dim();
    (1..=n)
        .map(|k| {
            let mut u = Matrix::zeros(d, d);
            for (j, p) in obs.projectors().iter().enumerate() {
                // Projectors are indexed from one in the phase exponent.
                let angle = T::TAU() * T::lit(((j + 1) * k % n) as f64) / T::lit(n as f64);
                u = &u + &p.scale(C::from_polar(T::one(), angle));
            }
            u
        })
        .collect()
}
