//! Coherence and correlation quantifiers, all in bits.

use crate::error::{Error, Result};
use crate::instruments::{dephase, generalized_luders, luders};
use crate::numerics::{self, partial_trace, relative_entropy_psd, Matrix, Subsystem, DEFAULT_TOL};
use crate::qstate::{Basis, BipartiteState, DensityMatrix, FineGraining, Observable, Povm};
use crate::scalar::Real;

/// Conditional branches with probability below this are dropped from the
/// classical-correlation sums.
pub const BRANCH_CUTOFF: f64 = 1e-12;

/// Tolerance used to confirm that a fine-graining refines an observable.
pub const REFINE_TOL: f64 = 1e-6;

/// Sum of off-diagonal magnitudes of `ρ` in `basis`.
pub fn c_l1<T: Real>(rho: &DensityMatrix<T>, basis: &Basis<T>) -> Result<T> {
    basis.check_dim(rho.dim())?;
    Ok(basis.express(rho.matrix())?.entrywise_l1(true))
}

/// Relative entropy of coherence `S(D(ρ)) - S(ρ)`.
pub fn c_re<T: Real>(rho: &DensityMatrix<T>, basis: &Basis<T>) -> Result<T> {
    Ok(dephase(rho, basis)?.entropy() - rho.entropy())
}

fn require_refines<T: Real>(fg: &FineGraining<T>, obs: &Observable<T>) -> Result<()> {
    if fg.refines(obs, T::lit(REFINE_TOL)) {
        Ok(())
    } else {
        Err(Error::IncompatibleFineGraining)
    }
}

/// l1 weight of the off-diagonal blocks `P_m ρ P_n`, `m ≠ n`, measured in the
/// fine-grained basis.
pub fn c_l1_coarse<T: Real>(
    rho: &DensityMatrix<T>,
    obs: &Observable<T>,
    fg: &FineGraining<T>,
) -> Result<T> {
    obs.require_dim(rho.dim())?;
    require_refines(fg, obs)?;
    let m = fg.basis().express(rho.matrix())?;
    let block = fg.block_index();
    let mut total = T::zero();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if block[i] != block[j] {
                total += m[(i, j)].norm();
            }
        }
    }
    Ok(total)
}

/// `S(L(ρ)) - S(ρ)`.
pub fn c_re_coarse<T: Real>(rho: &DensityMatrix<T>, obs: &Observable<T>) -> Result<T> {
    Ok(luders(rho, obs)?.entropy() - rho.entropy())
}

/// `S(L_R(ρ) ‖ D_fg(ρ))`, the coherence left over by a fine-graining.
pub fn hierarchy_gap<T: Real>(
    rho: &DensityMatrix<T>,
    obs: &Observable<T>,
    fg: &FineGraining<T>,
) -> Result<T> {
    obs.require_dim(rho.dim())?;
    require_refines(fg, obs)?;
    let l = luders(rho, obs)?;
    let d = dephase(rho, &fg.basis())?;
    relative_entropy_psd(l.matrix(), d.matrix(), T::lit(DEFAULT_TOL))
}

fn local_projectors<T: Real>(state: &BipartiteState<T>, obs: &Observable<T>) -> Result<Vec<Matrix<T>>> {
    let (da, db) = state.dims();
    obs.require_dim(db)?;
    let id = Matrix::identity(da);
    Ok(obs.projectors().iter().map(|p| id.kron(p)).collect())
}

/// `Σ (I ⊗ P_n) ρ (I ⊗ P_n)`, a Lüders measurement on the second factor.
pub fn luders_on_b<T: Real>(state: &BipartiteState<T>, obs: &Observable<T>) -> Result<BipartiteState<T>> {
    let ps = local_projectors(state, obs)?;
    let n = state.state().dim();
    let mut out = Matrix::zeros(n, n);
    for p in &ps {
        out = &out + &p.sandwich(state.state().matrix())?;
    }
    BipartiteState::new(state.dims(), DensityMatrix::from_trusted(out.hermitian_part()))
}

/// Quantum-incoherent coherence `S(L^B(ρ)) - S(ρ)`.
pub fn qi_coherence<T: Real>(state: &BipartiteState<T>, obs: &Observable<T>) -> Result<T> {
    Ok(luders_on_b(state, obs)?.state().entropy() - state.state().entropy())
}

/// Mutual information destroyed by the local Lüders measurement.
pub fn luders_discord<T: Real>(state: &BipartiteState<T>, obs: &Observable<T>) -> Result<T> {
    let after = luders_on_b(state, obs)?;
    Ok(state.mutual_information() - after.mutual_information())
}

/// `Σ p_n S(ρA_n ‖ ρA) + Σ p_n I(ρAB_n)` over the conditional states of the
/// local measurement.
pub fn classical_correlation<T: Real>(state: &BipartiteState<T>, obs: &Observable<T>) -> Result<T> {
    let ps = local_projectors(state, obs)?;
    let dims = state.dims();
    let rho_a = state.reduced(Subsystem::A);
    let mut j = T::zero();
    for p in &ps {
        let branch = p.sandwich(state.state().matrix())?.hermitian_part();
        let pn = branch.trace().re;
        if pn < T::lit(BRANCH_CUTOFF) {
            continue;
        }
        let cond = DensityMatrix::from_trusted(branch.scale_real(T::one() / pn));
        let cond_a = partial_trace(cond.matrix(), dims, Subsystem::A)?;
        let rel = relative_entropy_psd(&cond_a, rho_a.matrix(), T::lit(DEFAULT_TOL))?;
        let mi = BipartiteState::new(dims, cond)?.mutual_information();
        j += pn * (rel + mi);
    }
    Ok(j)
}

/// `S(ρ ‖ Σ M_n ρ M_n)` with the second argument left sub-normalized.
pub fn povm_coherence<T: Real>(rho: &DensityMatrix<T>, povm: &Povm<T>) -> Result<T> {
    rho.require_dim(povm.dim())?;
    let sigma = numerics::sum(
        rho.dim(),
        povm.effects()
            .iter()
            .map(|m| m.sandwich(rho.matrix()).expect("dimensions agree")),
    )
    .hermitian_part();
    relative_entropy_psd(rho.matrix(), &sigma, T::lit(DEFAULT_TOL))
}

/// `S(ρ ‖ Σ M_n^{1/2} ρ M_n^{1/2})`.
pub fn povm_coherence_modified<T: Real>(rho: &DensityMatrix<T>, povm: &Povm<T>) -> Result<T> {
    let sigma = generalized_luders(rho, povm)?;
    relative_entropy_psd(rho.matrix(), sigma.matrix(), T::lit(DEFAULT_TOL))
}
