//! System–apparatus realizations of channels.
//!
//! Joint spaces are ordered system ⊗ apparatus, so the composite index of
//! `(s, a)` is `s * ancilla_dim + a`. Dilations are not unique: every builder
//! fixes one completion deterministically.

use crate::channels::{classify, correlation_matrix_of, CorrelationMatrix, IncoherenceClass, KrausChannel};
use crate::error::{Error, Result};
use crate::numerics::{self, basis_vector, inner, kron_vec, norm, partial_trace, Matrix, Subsystem, Vector, DEFAULT_TOL};
use crate::qstate::{Basis, DensityMatrix, FineGraining, Observable};
use crate::scalar::{cr, czero, Real, C};

/// Gram–Schmidt candidates whose residual falls below this are skipped.
pub const COMPLETION_SKIP: f64 = 1e-8;

/// Ancilla, initial apparatus state, joint unitary and readout basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationModel<T> {
    system_dim: usize,
    ancilla_dim: usize,
    apparatus_init: Vector<T>,
    joint_unitary: Matrix<T>,
    readout: Vec<Vector<T>>,
}

impl<T: Real> DilationModel<T> {
    pub fn new(
        system_dim: usize,
        ancilla_dim: usize,
        apparatus_init: Vector<T>,
        joint_unitary: Matrix<T>,
        readout: Vec<Vector<T>>,
        tol: T,
    ) -> Result<Self> {
        let n = system_dim * ancilla_dim;
        if n == 0 {
            return Err(Error::InvalidModel("zero-dimensional factor".into()));
        }
        if joint_unitary.shape() != (n, n) {
            return Err(Error::InvalidModel(format!(
                "joint unitary is {}x{}, expected {n}x{n}",
                joint_unitary.rows(),
                joint_unitary.cols()
            )));
        }
        let defect = unitarity_residual(&joint_unitary);
        if defect > tol {
            return Err(Error::InvalidModel(format!("U†U deviates from I by {defect}")));
        }
        if apparatus_init.len() != ancilla_dim || (norm(&apparatus_init) - T::one()).abs() > tol {
            return Err(Error::InvalidModel("apparatus state is not a unit vector".into()));
        }
        if readout.is_empty()
            || readout.len() > ancilla_dim
            || readout.iter().any(|v| v.len() != ancilla_dim)
            || numerics::orthonormality_defect(&readout) > tol
        {
            return Err(Error::InvalidModel("readout vectors are not orthonormal".into()));
        }
        Ok(Self {
            system_dim,
            ancilla_dim,
            apparatus_init,
            joint_unitary,
            readout,
        })
    }

    fn trusted(system_dim: usize, ancilla_dim: usize, joint_unitary: Matrix<T>) -> Self {
        Self {
            system_dim,
            ancilla_dim,
            apparatus_init: basis_vector(ancilla_dim, 0),
            joint_unitary,
            readout: (0..ancilla_dim).map(|a| basis_vector(ancilla_dim, a)).collect(),
        }
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn apparatus_init(&self) -> &[C<T>] {
        &self.apparatus_init
    }

    pub fn joint_unitary(&self) -> &Matrix<T> {
        &self.joint_unitary
    }

    pub fn readout(&self) -> &[Vector<T>] {
        &self.readout
    }

    /// `U (ρ ⊗ |a₀><a₀|) U†`.
    pub fn joint_output(&self, rho: &DensityMatrix<T>) -> Result<Matrix<T>> {
        if rho.dim() != self.system_dim {
            return Err(Error::DimMismatch {
                expected: self.system_dim,
                got: rho.dim(),
            });
        }
        let joint = rho.matrix().kron(&Matrix::projector(&self.apparatus_init));
        self.joint_unitary.sandwich(&joint)
    }

    /// Probabilities of the readout outcomes on the apparatus.
    pub fn apparatus_probabilities(&self, rho: &DensityMatrix<T>) -> Result<Vec<T>> {
        let out = self.joint_output(rho)?;
        let app = partial_trace(&out, (self.system_dim, self.ancilla_dim), Subsystem::B)?;
        Ok(self
            .readout
            .iter()
            .map(|a| inner(a, &app.apply(a).expect("ancilla dimension")).re)
            .collect())
    }

    /// Normalized system state conditioned on readout outcome `n`.
    pub fn conditional_system_state(&self, rho: &DensityMatrix<T>, outcome: usize) -> Result<(T, DensityMatrix<T>)> {
        let k = &self.kraus_operators()[outcome];
        let post = k.sandwich(rho.matrix())?.hermitian_part();
        let p = post.trace().re;
        if p <= T::lit(crate::instruments::ZERO_PROBABILITY) {
            return Err(Error::ZeroProbabilityOutcome { outcome });
        }
        Ok((p, DensityMatrix::from_trusted(post.scale_real(T::one() / p))))
    }

    /// `K_n = <a_n| U |a₀>` for every readout vector.
    pub fn kraus_operators(&self) -> Vec<Matrix<T>> {
        let (ds, da) = (self.system_dim, self.ancilla_dim);
        let u = &self.joint_unitary;
        // U|a₀> restricted to each system column: M[(s,a), s'] = Σ_a' U[(s,a),(s',a')] a0[a'].
        let m = Matrix::from_fn(ds * da, ds, |row, sp| {
            (0..da).fold(czero(), |acc, ap| acc + u[(row, sp * da + ap)] * self.apparatus_init[ap])
        });
        self.readout
            .iter()
            .map(|a| {
                Matrix::from_fn(ds, ds, |s, sp| {
                    (0..da).fold(czero(), |acc, k| acc + a[k].conj() * m[(s * da + k, sp)])
                })
            })
            .collect()
    }
}

/// Kraus operators of a dilation as a channel.
pub fn extract_kraus<T: Real>(model: &DilationModel<T>) -> Result<KrausChannel<T>> {
    KrausChannel::new(model.kraus_operators(), T::lit(DEFAULT_TOL))
        .map_err(|e| Error::InvalidModel(e.to_string()))
}

/// `‖U†U - I‖₂`.
pub fn unitarity_residual<T: Real>(u: &Matrix<T>) -> T {
    (&(&u.dagger() * u) - &Matrix::identity(u.cols())).hs_norm()
}

/// Largest matrix-unit action discrepancy between a model and a channel.
pub fn round_trip_residual<T: Real>(model: &DilationModel<T>, ch: &KrausChannel<T>) -> Result<T> {
    extract_kraus(model)?.action_distance(ch)
}

/// `Xⁿ` with `X|i> = |i+1 mod d>`.
fn shift_power<T: Real>(d: usize, n: usize) -> Matrix<T> {
    let mut x = Matrix::zeros(d, d);
    for i in 0..d {
        x[((i + n) % d, i)] = cr(T::one());
    }
    x
}

/// `Σ |n><n| ⊗ Xⁿ`: `|n>|i> ↦ |n>|i+n mod d>`.
pub fn generalized_cnot<T: Real>(d: usize) -> Result<Matrix<T>> {
    if d < 2 {
        return Err(Error::BadDimension(format!("generalized CNOT needs d >= 2, got {d}")));
    }
    let mut u = Matrix::zeros(d * d, d * d);
    for n in 0..d {
        for i in 0..d {
            u[(n * d + (i + n) % d, n * d + i)] = cr(T::one());
        }
    }
    Ok(u)
}

/// Unitary whose first column is the unit vector `c`, built from a
/// reflection that never subtracts nearly equal vectors.
pub fn unitary_with_first_column<T: Real>(c: &[C<T>]) -> Matrix<T> {
    let d = c.len();
    let theta = if c[0].norm() > T::zero() { c[0].arg() } else { T::zero() };
    let phase = C::from_polar(T::one(), theta);
    let y: Vector<T> = c.iter().map(|z| z * phase.conj()).collect();
    let mut w = y.clone();
    w[0] += cr(T::one());
    let wn = norm(&w);
    let w: Vector<T> = w.into_iter().map(|z| z / wn).collect();
    let h = &Matrix::identity(d) - &Matrix::outer(&w, &w).scale_real(T::lit(2.0));
    h.scale(-phase)
}

/// Von Neumann premeasurement `|φ_n>|a₀> ↦ |φ_n>|a_n>`.
pub fn dilate_von_neumann<T: Real>(basis: &Basis<T>) -> Result<DilationModel<T>> {
    let d = basis.dim();
    if d < 2 {
        return Ok(DilationModel::trusted(1, 1, Matrix::identity(1)));
    }
    let w = basis.unitary();
    let id = Matrix::identity(d);
    let u = &(&w.kron(&id) * &generalized_cnot(d)?) * &w.dagger().kron(&id);
    Ok(DilationModel::trusted(d, d, u))
}

/// Lüders premeasurement `|φ_ni>|a₀> ↦ |φ_ni>|a_n>`, realized as
/// `Σ P_n ⊗ Xⁿ` on an `N`-level apparatus.
pub fn dilate_luders<T: Real>(obs: &Observable<T>, fg: &FineGraining<T>) -> Result<DilationModel<T>> {
    if !fg.refines(obs, T::lit(1e-6)) {
        return Err(Error::IncompatibleFineGraining);
    }
    let n = obs.num_outcomes();
    let mut u = Matrix::zeros(obs.dim() * n, obs.dim() * n);
    for (k, p) in obs.projectors().iter().enumerate() {
        u = &u + &p.kron(&shift_power(n, k));
    }
    Ok(DilationModel::trusted(obs.dim(), n, u))
}

/// Controlled unitary `Σ |φ_n><φ_n| ⊗ U_n` with `U_n|a₀> = |c_n>`.
///
/// The dynamical vectors are recomputed from the correlation matrix, so the
/// apparatus has the Choi rank as dimension (at least two).
pub fn dilate_gio<T: Real>(ch: &KrausChannel<T>, basis: &Basis<T>) -> Result<DilationModel<T>> {
    let c = correlation_matrix_of(ch, basis)?;
    let compact = CorrelationMatrix::new(c.entries().clone(), T::lit(1e-6))?;
    let r = compact.rank().max(2);
    let d = ch.dim();
    let mut u = Matrix::zeros(d * r, d * r);
    for (n, cn) in compact.dynamical_vectors().iter().enumerate() {
        let mut padded = cn.clone();
        padded.resize(r, czero());
        let un = unitary_with_first_column(&padded);
        let phi = basis.vector(n);
        u = &u + &Matrix::projector(&phi).kron(&un);
    }
    Ok(DilationModel::trusted(d, r, u))
}

/// `V = Σ_n K_n ⊗ |a_n>`, rows indexed `(s, n)`.
pub fn stinespring_isometry<T: Real>(ch: &KrausChannel<T>) -> Matrix<T> {
    let d = ch.dim();
    let r = ch.kraus().len();
    Matrix::from_fn(d * r, d, |row, sp| ch.kraus()[row % r][(row / r, sp)])
}

/// Stinespring isometry of an incoherent operation.
pub fn effective_isometry<T: Real>(ch: &KrausChannel<T>, basis: &Basis<T>) -> Result<Matrix<T>> {
    if !classify(ch, basis)?.is_io() {
        let column = first_io_violation(ch, basis)?;
        return Err(Error::NotIoForm { column });
    }
    Ok(stinespring_isometry(ch))
}

fn first_io_violation<T: Real>(ch: &KrausChannel<T>, basis: &Basis<T>) -> Result<usize> {
    for k in ch.kraus_in(basis)? {
        for j in 0..k.cols() {
            let nz = (0..k.rows())
                .filter(|&i| k[(i, j)].norm() > T::lit(crate::channels::ZERO_TOL))
                .count();
            if nz > 1 {
                return Ok(j);
            }
        }
    }
    Ok(0)
}

/// Unitary `U` with `U(|ψ> ⊗ |a₀>) = V|ψ>`, completed by Gram–Schmidt over
/// the joint standard basis in lexicographic order.
pub fn extend_to_unitary<T: Real>(v: &Matrix<T>, a0: &[C<T>]) -> Result<Matrix<T>> {
    let ds = v.cols();
    let da = a0.len();
    if ds == 0 || da == 0 || v.rows() != ds * da {
        return Err(Error::DimMismatch {
            expected: ds * da,
            got: v.rows(),
        });
    }
    let defect = unitarity_residual(v);
    if defect > T::lit(DEFAULT_TOL) {
        return Err(Error::NotIsometry {
            deviation: defect.as_f64(),
        });
    }
    if (norm(a0) - T::one()).abs() > T::lit(DEFAULT_TOL) {
        return Err(Error::BadParameter("apparatus state is not a unit vector".into()));
    }
    let n = ds * da;
    let mut cols: Vec<Vector<T>> = v.columns();
    let mut extra: Vec<Vector<T>> = Vec::with_capacity(n - ds);
    for cand in 0..n {
        if extra.len() == n - ds {
            break;
        }
        let mut r = basis_vector(n, cand);
        for _ in 0..2 {
            for q in cols.iter().chain(&extra) {
                let c = inner(q, &r);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= *qi * c;
                }
            }
        }
        let rn = norm(&r);
        if rn < T::lit(COMPLETION_SKIP) {
            continue;
        }
        extra.push(r.into_iter().map(|z| z / rn).collect());
    }
    if extra.len() != n - ds {
        return Err(Error::NotIsometry {
            deviation: defect.as_f64(),
        });
    }
    // Place V on the (s, 0) columns and the completion on the rest.
    let mut completed = Matrix::zeros(n, n);
    let mut rest = extra.drain(..);
    for s in 0..ds {
        for a in 0..da {
            let col = if a == 0 {
                std::mem::take(&mut cols[s])
            } else {
                rest.next().expect("n - ds completion vectors")
            };
            completed.set_column(s * da + a, &col);
        }
    }
    let g = unitary_with_first_column(a0);
    Ok(&completed * &Matrix::identity(ds).kron(&g.dagger()))
}

/// Dilation of any trace-preserving Kraus list from its Stinespring
/// isometry, with `|a₀> = |0>` and the Kraus index as readout.
pub fn dilate_kraus<T: Real>(ch: &KrausChannel<T>) -> Result<DilationModel<T>> {
    if !ch.is_trace_preserving() {
        return Err(Error::UnsupportedClass("trace-decreasing operation".into()));
    }
    let r = ch.kraus().len().max(2);
    let mut kraus = ch.kraus().to_vec();
    kraus.resize(r, Matrix::zeros(ch.dim(), ch.dim()));
    let padded = KrausChannel::new(kraus, T::lit(DEFAULT_TOL))?;
    let v = stinespring_isometry(&padded);
    let u = extend_to_unitary(&v, &basis_vector(r, 0))?;
    Ok(DilationModel::trusted(ch.dim(), r, u))
}

/// Dilation of an SIO through its effective isometry.
pub fn dilate_sio<T: Real>(ch: &KrausChannel<T>, basis: &Basis<T>) -> Result<DilationModel<T>> {
    let class = classify(ch, basis)?;
    if !class.is_sio() {
        return Err(Error::UnsupportedClass(class.to_string()));
    }
    dilate_kraus(ch)
}

/// Dilation of an IO through its effective isometry.
pub fn dilate_io<T: Real>(ch: &KrausChannel<T>, basis: &Basis<T>) -> Result<DilationModel<T>> {
    effective_isometry(ch, basis)?;
    dilate_kraus(ch)
}

/// Picks the most structured builder for the channel's class.
pub fn dilate_channel<T: Real>(ch: &KrausChannel<T>, basis: &Basis<T>) -> Result<(IncoherenceClass, DilationModel<T>)> {
    let class = classify(ch, basis)?;
    let model = match class {
        IncoherenceClass::Gio => dilate_gio(ch, basis)?,
        IncoherenceClass::SioNotGio => dilate_sio(ch, basis)?,
        IncoherenceClass::IoNotSio => dilate_io(ch, basis)?,
        IncoherenceClass::NotIo => return Err(Error::UnsupportedClass(class.to_string())),
    };
    Ok((class, model))
}

/// Joint state `U(|ψ> ⊗ |a₀>)`.
pub fn premeasure<T: Real>(model: &DilationModel<T>, psi: &[C<T>]) -> Result<Vector<T>> {
    model
        .joint_unitary
        .apply(&kron_vec(psi, &model.apparatus_init))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{bit_flip, phase_damping, random_gio_with, random_sio_with};
    use crate::coherence::c_l1;
    use crate::instruments::{born_probabilities, luders};
    use crate::random::{random_density, random_density_with, random_observable, rng_from_seed};

    type M = Matrix<f64>;

    fn comp(d: usize) -> Basis<f64> {
        Basis::computational(d)
    }

    #[test]
    fn trivial_model_extracts_identity() {
        let m = DilationModel::new(
            2,
            2,
            basis_vector(2, 0),
            M::identity(4),
            vec![basis_vector(2, 0), basis_vector(2, 1)],
            1e-8,
        )
        .unwrap();
        let ks = m.kraus_operators();
        assert_eq!(ks[0], M::identity(2));
        assert_eq!(ks[1], M::zeros(2, 2));
        assert!(DilationModel::new(2, 2, basis_vector(2, 0), M::ones(4), vec![basis_vector(2, 0)], 1e-8).is_err());
    }

    #[test]
    fn cnot_examples() {
        let c: M = generalized_cnot(2).unwrap();
        let expect = M::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(c, expect);
        let c3: M = generalized_cnot(3).unwrap();
        assert_eq!(unitarity_residual(&c3), 0.0);
        let twice = &c3 * &c3;
        assert_ne!(twice, M::identity(9));
        assert_eq!(&twice * &c3, M::identity(9));
        assert!(generalized_cnot::<f64>(1).is_err());
    }

    #[test]
    fn householder_first_column() {
        let h = 1.0 / 2f64.sqrt();
        for c in [
            vec![cr(1.0), cr(0.0)],
            vec![cr(-1.0), cr(0.0)],
            vec![cr(0.0), C::new(0.0, 1.0)],
            vec![C::new(0.0, h), cr(-h)],
        ] {
            let u = unitary_with_first_column(&c);
            assert!(unitarity_residual(&u) < 1e-14);
            let col = u.column(0);
            assert!(col.iter().zip(&c).all(|(a, b)| (a - b).norm() < 1e-15));
        }
    }

    #[test]
    fn von_neumann_model() {
        let m = dilate_von_neumann(&comp(2)).unwrap();
        let ks = m.kraus_operators();
        assert_eq!(ks[0], M::from_real_diag(&[1.0, 0.0]));
        assert_eq!(ks[1], M::from_real_diag(&[0.0, 1.0]));

        let plus = DensityMatrix::<f64>::maximally_coherent(2);
        let out = m.joint_output(&plus).unwrap();
        let sys = partial_trace(&out, (2, 2), Subsystem::A).unwrap();
        assert!((&sys - &M::identity(2).scale_real(0.5)).hs_norm() < 1e-15);

        let basis = crate::random::random_basis_with(&mut rng_from_seed(1), 3);
        let m = dilate_von_neumann(&basis).unwrap();
        let obs = Observable::from_basis(&basis, vec![2.0, 1.0, 0.0]).unwrap();
        for seed in 0..20 {
            let rho = random_density::<f64>(3, 3, seed).unwrap();
            let a = m.apparatus_probabilities(&rho).unwrap();
            let b = born_probabilities(&rho, &obs).unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10));
        }
        let deph = KrausChannel::complete_dephasing(&basis);
        assert!(round_trip_residual(&m, &deph).unwrap() < 1e-10);
    }

    #[test]
    fn luders_model() {
        let obs = random_observable::<f64>(3, &[2, 1], 2).unwrap();
        let fg = FineGraining::canonical(&obs);
        let m = dilate_luders(&obs, &fg).unwrap();
        for (k, p) in m.kraus_operators().iter().zip(obs.projectors()) {
            assert!((k - p).hs_norm() < 1e-10);
        }
        let rho = random_density::<f64>(3, 3, 3).unwrap();
        let ch = extract_kraus(&m).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!((out.matrix() - luders(&rho, &obs).unwrap().matrix()).hs_norm() < 1e-10);
        for n in 0..2 {
            let (_, post) = m.conditional_system_state(&rho, n).unwrap();
            let p = obs.projector(n);
            assert!((&p.sandwich(post.matrix()).unwrap() - post.matrix()).hs_norm() < 1e-10);
        }
        let other = FineGraining::canonical(&random_observable::<f64>(3, &[1, 2], 4).unwrap());
        assert_eq!(dilate_luders(&obs, &other), Err(Error::IncompatibleFineGraining));
    }

    #[test]
    fn gio_models() {
        let deph = KrausChannel::<f64>::complete_dephasing(&comp(3));
        let m = dilate_gio(&deph, &comp(3)).unwrap();
        assert_eq!(m.ancilla_dim(), 3);
        assert!(round_trip_residual(&m, &deph).unwrap() < 1e-10);

        let pd = phase_damping(0.8).unwrap();
        let m = dilate_gio(&pd, &comp(2)).unwrap();
        let cs: Vec<Vector<f64>> = (0..2)
            .map(|n| premeasure(&m, &basis_vector(2, n)).unwrap()[n * 2..n * 2 + 2].to_vec())
            .collect();
        assert!((inner(&cs[0], &cs[1]).re - 0.6).abs() < 1e-12);
        assert!(round_trip_residual(&m, &pd).unwrap() < 1e-10);

        let mut rng = rng_from_seed(5);
        let ch: KrausChannel<f64> = random_gio_with(&mut rng, 4, 3);
        let m = dilate_gio(&ch, &comp(4)).unwrap();
        assert_eq!(m.ancilla_dim(), 3);
        assert!(round_trip_residual(&m, &ch).unwrap() < 1e-10);
        assert!(unitarity_residual(m.joint_unitary()) < 1e-8);

        let id = KrausChannel::<f64>::identity(2);
        let m = dilate_gio(&id, &comp(2)).unwrap();
        assert_eq!(m.ancilla_dim(), 2);
        assert!(round_trip_residual(&m, &id).unwrap() < 1e-12);

        assert_eq!(dilate_gio(&bit_flip(0.3).unwrap(), &comp(2)), Err(Error::NotGio));
    }

    #[test]
    fn gio_joint_state_can_carry_apparatus_coherence() {
        let pd = phase_damping(0.8).unwrap();
        let m = dilate_gio(&pd, &comp(2)).unwrap();
        let psi = premeasure(&m, &basis_vector(2, 0)).unwrap();
        let joint = M::projector(&psi);
        let sys = partial_trace(&joint, (2, 2), Subsystem::A).unwrap();
        assert!((&sys - &M::from_real_diag(&[1.0, 0.0])).hs_norm() < 1e-12);
        let app = DensityMatrix::new(partial_trace(&joint, (2, 2), Subsystem::B).unwrap(), 1e-8).unwrap();
        assert!(c_l1(&app, &comp(2)).unwrap() > 1e-3);
    }

    #[test]
    fn isometry_and_completion() {
        let flip = bit_flip(0.3).unwrap();
        let v = effective_isometry(&flip, &comp(2)).unwrap();
        assert!(unitarity_residual(&v) < 1e-12);

        let u = crate::random::random_unitary::<f64>(3, 6);
        let single = KrausChannel::unitary(u.clone()).unwrap();
        let v = effective_isometry(&single, &Basis::computational(3));
        assert!(matches!(v, Err(Error::NotIoForm { .. })));
        assert_eq!(extend_to_unitary(&u, &[cr(1.0)]).unwrap(), u);

        let vn = stinespring_isometry(&KrausChannel::complete_dephasing(&comp(2)));
        let full = extend_to_unitary(&vn, &basis_vector(2, 0)).unwrap();
        assert!(unitarity_residual(&full) < 1e-10);

        let mut rng = rng_from_seed(7);
        let sio: KrausChannel<f64> = random_sio_with(&mut rng, 3, 2);
        let v = effective_isometry(&sio, &comp(3)).unwrap();
        let a0 = crate::random::random_vector_with::<f64, _>(&mut rng, 2);
        let u = extend_to_unitary(&v, &a0).unwrap();
        assert!(unitarity_residual(&u) < 1e-10);
        for s in 0..3 {
            let out = u.apply(&kron_vec(&basis_vector(3, s), &a0)).unwrap();
            let diff: Vector<f64> = out.iter().zip(v.column(s)).map(|(a, b)| a - b).collect();
            assert!(norm(&diff) < 1e-10);
        }
        assert!(matches!(
            extend_to_unitary(&v.scale_real(2.0), &a0),
            Err(Error::NotIsometry { .. })
        ));
    }

    #[test]
    fn sio_and_io_round_trips() {
        let mut rng = rng_from_seed(8);
        let sio: KrausChannel<f64> = random_sio_with(&mut rng, 3, 2);
        let m = dilate_sio(&sio, &comp(3)).unwrap();
        assert!(round_trip_residual(&m, &sio).unwrap() < 1e-10);

        let h = 1.0 / 2f64.sqrt();
        let io = KrausChannel::new(
            vec![
                M::from_real_rows(&[&[h, h], &[0.0, 0.0]]),
                M::from_real_rows(&[&[0.0, 0.0], &[h, -h]]),
            ],
            1e-8,
        )
        .unwrap();
        let m = dilate_io(&io, &comp(2)).unwrap();
        assert!(round_trip_residual(&m, &io).unwrap() < 1e-10);
        assert!(matches!(dilate_sio(&io, &comp(2)), Err(Error::UnsupportedClass(_))));

        let rho = random_density_with::<f64, _>(&mut rng, 2, 2).unwrap();
        let (class, m) = dilate_channel(&io, &comp(2)).unwrap();
        assert_eq!(class, IncoherenceClass::IoNotSio);
        let a = extract_kraus(&m).unwrap().apply(&rho).unwrap();
        assert!((a.matrix() - io.apply(&rho).unwrap().matrix()).hs_norm() < 1e-10);
    }
}
