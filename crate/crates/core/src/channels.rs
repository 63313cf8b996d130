//! Kraus channels and their incoherence structure.
//!
//! Classification, factorization and correlation matrices are always taken
//! relative to a reference [`Basis`]; matrices returned by those routines are
//! in the coordinates of that basis.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{self, hermitian_eig, nullspace, Matrix, Vector, DEFAULT_TOL};
use crate::qstate::{Basis, DensityMatrix, Observable};
use crate::random::{random_unitary_with, random_vector_with};
use crate::scalar::{cr, czero, Real, C};

/// Magnitude below which a matrix entry counts as structurally zero.
pub const ZERO_TOL: f64 = 1e-10;

/// Singular-value cutoff for commutant and fixed-point nullspaces.
pub const NULLSPACE_CUTOFF: f64 = 1e-9;

/// Eigenvalues of a correlation matrix below this are dropped when
/// factorizing it, fixing the Choi rank.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Operator-sum representation `ρ ↦ Σ K ρ K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel<T> {
    dim: usize,
    kraus: Vec<Matrix<T>>,
    trace_preserving: bool,
    unital: bool,
}

impl<T: Real> KrausChannel<T> {
    /// Accepts any quantum operation (`Σ K†K ≤ I`) and records whether it is
    /// trace preserving and unital within `tol`.
    pub fn new(kraus: Vec<Matrix<T>>, tol: T) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::BadParameter("empty Kraus list".into()))?;
        let dim = first.require_square()?;
        for k in &kraus {
            if k.shape() != (dim, dim) {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: k.rows(),
                });
            }
            if !k.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let id = Matrix::identity(dim);
        let completeness = numerics::sum(dim, kraus.iter().map(|k| &k.dagger() * k));
        let trace_preserving = (&completeness - &id).hs_norm() <= tol;
        if !trace_preserving {
            let top = hermitian_eig(&completeness, T::lit(DEFAULT_TOL))?.values[0];
            if top > T::one() + tol {
                return Err(Error::NotAnOperation {
                    excess: (top - T::one()).as_f64(),
                });
            }
        }
        let unitality = numerics::sum(dim, kraus.iter().map(|k| k * &k.dagger()));
        let unital = (&unitality - &id).hs_norm() <= tol;
        Ok(Self {
            dim,
            kraus,
            trace_preserving,
            unital,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![Matrix::identity(dim)], T::lit(DEFAULT_TOL)).expect("identity is a channel")
    }

    /// Single-Kraus unitary channel.
    pub fn unitary(u: Matrix<T>) -> Result<Self> {
        Self::new(vec![u], T::lit(DEFAULT_TOL))
    }

    /// Complete dephasing `Σ |φ_n><φ_n| · |φ_n><φ_n|`.
    pub fn complete_dephasing(basis: &Basis<T>) -> Self {
        let kraus = basis.vectors().iter().map(|v| Matrix::projector(v)).collect();
        Self::new(kraus, T::lit(DEFAULT_TOL)).expect("projectors resolve identity")
    }

    /// Lüders channel `Σ P_n · P_n`.
    pub fn luders(obs: &Observable<T>) -> Self {
        Self::new(obs.projectors().to_vec(), T::lit(DEFAULT_TOL))
            .expect("projectors resolve identity")
    }

    /// Random-unitary channel `Σ p_k U_k · U_k†`.
    pub fn unitary_mixture(weights: &[T], unitaries: &[Matrix<T>]) -> Result<Self> {
        if weights.len() != unitaries.len() {
            return Err(Error::LengthMismatch {
                left: weights.len(),
                right: unitaries.len(),
            });
        }
        if weights.iter().any(|&w| w < T::zero()) {
            return Err(Error::BadParameter("negative mixture weight".into()));
        }
        let kraus = weights
            .iter()
            .zip(unitaries)
            .map(|(&w, u)| u.scale_real(w.sqrt()))
            .collect();
        Self::new(kraus, T::lit(DEFAULT_TOL))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[Matrix<T>] {
        &self.kraus
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    fn require_tp(&self) -> Result<()> {
        if self.trace_preserving {
            Ok(())
        } else {
            let s = numerics::sum(self.dim, self.kraus.iter().map(|k| &k.dagger() * k));
            Err(Error::NotTracePreserving {
                deviation: (&s - &Matrix::identity(self.dim)).hs_norm().as_f64(),
            })
        }
    }

    fn require_unital(&self) -> Result<()> {
        if self.unital {
            Ok(())
        } else {
            let s = numerics::sum(self.dim, self.kraus.iter().map(|k| k * &k.dagger()));
            Err(Error::NotUnital {
                deviation: (&s - &Matrix::identity(self.dim)).hs_norm().as_f64(),
            })
        }
    }

    /// `Σ K X K†` for an arbitrary operator `X`.
    pub fn apply_operator(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        if x.shape() != (self.dim, self.dim) {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: x.rows(),
            });
        }
        let mut out = Matrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out = &out + &k.sandwich(x)?;
        }
        Ok(out)
    }

    /// Applies a trace-preserving channel to a state.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        self.require_tp()?;
        Ok(DensityMatrix::from_trusted(self.apply_operator(rho.matrix())?))
    }

    /// Output of a possibly trace-decreasing operation together with its trace.
    pub fn apply_unnormalized(&self, rho: &DensityMatrix<T>) -> Result<(Matrix<T>, T)> {
        let out = self.apply_operator(rho.matrix())?.hermitian_part();
        let tr = out.trace().re;
        Ok((out, tr))
    }

    /// Row-major superoperator: `vec(Φ(X)) = S vec(X)`.
    pub fn superoperator(&self) -> Matrix<T> {
        let n = self.dim * self.dim;
        let mut s = Matrix::zeros(n, n);
        for k in &self.kraus {
            s = &s + &k.kron(&k.conj());
        }
        s
    }

    /// Largest Hilbert–Schmidt discrepancy between the two channels over the
    /// matrix units `|i><j|`.
    pub fn action_distance(&self, other: &Self) -> Result<T> {
        if other.dim != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = Matrix::unit(self.dim, i, j);
                let d = (&self.apply_operator(&e)? - &other.apply_operator(&e)?).hs_norm();
                worst = worst.max(d);
            }
        }
        Ok(worst)
    }

    /// Kraus operators written in the coordinates of `basis`.
    pub fn kraus_in(&self, basis: &Basis<T>) -> Result<Vec<Matrix<T>>> {
        self.kraus.iter().map(|k| basis.express(k)).collect()
    }
}

/// Qubit phase damping `p ρ + (1-p) Z ρ Z`.
pub fn phase_damping<T: Real>(p: T) -> Result<KrausChannel<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::BadParameter(format!("p = {p} outside [0, 1]")));
    }
    let z = Matrix::from_real_diag(&[T::one(), -T::one()]);
    KrausChannel::new(
        vec![
            Matrix::identity(2).scale_real(p.sqrt()),
            z.scale_real((T::one() - p).sqrt()),
        ],
        T::lit(DEFAULT_TOL),
    )
}

/// Qubit bit flip `p ρ + (1-p) X ρ X`.
pub fn bit_flip<T: Real>(p: T) -> Result<KrausChannel<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::BadParameter(format!("p = {p} outside [0, 1]")));
    }
    let mut x = Matrix::zeros(2, 2);
    x[(0, 1)] = cr(T::one());
    x[(1, 0)] = cr(T::one());
    KrausChannel::new(
        vec![
            Matrix::identity(2).scale_real(p.sqrt()),
            x.scale_real((T::one() - p).sqrt()),
        ],
        T::lit(DEFAULT_TOL),
    )
}

/// Qubit amplitude damping with decay probability `gamma`.
pub fn amplitude_damping<T: Real>(gamma: T) -> Result<KrausChannel<T>> {
    if !(gamma >= T::zero() && gamma <= T::one()) {
        return Err(Error::BadParameter(format!("gamma = {gamma} outside [0, 1]")));
    }
    let mut k0 = Matrix::identity(2);
    k0[(1, 1)] = cr((T::one() - gamma).sqrt());
    let mut k1 = Matrix::zeros(2, 2);
    k1[(0, 1)] = cr(gamma.sqrt());
    KrausChannel::new(vec![k0, k1], T::lit(DEFAULT_TOL))
}

/// Strongest incoherence class of a Kraus list relative to a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IncoherenceClass {
    Gio,
    SioNotGio,
    IoNotSio,
    NotIo,
}

impl IncoherenceClass {
    pub fn is_gio(self) -> bool {
        self == Self::Gio
    }

    pub fn is_sio(self) -> bool {
        matches!(self, Self::Gio | Self::SioNotGio)
    }

    pub fn is_io(self) -> bool {
        self != Self::NotIo
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Gio => "GIO",
            Self::SioNotGio => "SIO-not-GIO",
            Self::IoNotSio => "IO-not-SIO",
            Self::NotIo => "not-IO",
        }
    }
}

impl fmt::Display for IncoherenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn nonzero_rows<T: Real>(k: &Matrix<T>, col: usize, zero_tol: T) -> Vec<usize> {
    (0..k.rows()).filter(|&i| k[(i, col)].norm() > zero_tol).collect()
}

fn nonzero_cols<T: Real>(k: &Matrix<T>, row: usize, zero_tol: T) -> usize {
    (0..k.cols()).filter(|&j| k[(row, j)].norm() > zero_tol).count()
}

/// Classifies a trace-preserving Kraus list with the default zero threshold.
pub fn classify<T: Real>(ch: &KrausChannel<T>, basis: &Basis<T>) -> Result<IncoherenceClass> {
    classify_with(ch, basis, T::lit(ZERO_TOL))
}

/// GIO: every Kraus operator diagonal. SIO: at most one nonzero per column
/// and per row. IO: at most one nonzero per column.
pub fn classify_with<T: Real>(
    ch: &KrausChannel<T>,
    basis: &Basis<T>,
    zero_tol: T,
) -> Result<IncoherenceClass> {
    ch.require_tp()?;
    basis.check_dim(ch.dim())?;
    let ks = ch.kraus_in(basis)?;
    let d = ch.dim();
    let io = ks
        .iter()
        .all(|k| (0..d).all(|j| nonzero_rows(k, j, zero_tol).len() <= 1));
    if !io {
        return Ok(IncoherenceClass::NotIo);
    }
    let sio = ks
        .iter()
        .all(|k| (0..d).all(|i| nonzero_cols(k, i, zero_tol) <= 1));
    if !sio {
        return Ok(IncoherenceClass::IoNotSio);
    }
    if ks.iter().all(|k| k.is_diagonal(zero_tol)) {
        Ok(IncoherenceClass::Gio)
    } else {
        Ok(IncoherenceClass::SioNotGio)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Permutation,
    Relabeling,
}

/// Index function `i ↦ f(i)` on `0..dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMap {
    map: Vec<usize>,
    kind: MapKind,
}

impl IndexMap {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let dim = map.len();
        if map.iter().any(|&f| f >= dim) {
            return Err(Error::BadParameter("index map leaves its range".into()));
        }
        let mut seen = vec![false; dim];
        for &f in &map {
            seen[f] = true;
        }
        let kind = if seen.iter().all(|&s| s) {
            MapKind::Permutation
        } else {
            MapKind::Relabeling
        };
        Ok(Self { map, kind })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            map: (0..dim).collect(),
            kind: MapKind::Permutation,
        }
    }

    pub fn dim(&self) -> usize {
        self.map.len()
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    /// The 0/1 matrix `Σ_i |f(i)><i|`.
    pub fn matrix<T: Real>(&self) -> Matrix<T> {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (i, &f) in self.map.iter().enumerate() {
            m[(f, i)] = cr(T::one());
        }
        m
    }
}

/// `K = M(f) · diag(c)` in basis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausFactor<T> {
    pub index_map: IndexMap,
    pub coefficients: Vector<T>,
}

impl<T: Real> KrausFactor<T> {
    /// The diagonal (GIO) part `Σ c_i |i><i|`.
    pub fn gio_part(&self) -> Matrix<T> {
        Matrix::from_diag(&self.coefficients)
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        &self.index_map.matrix() * &self.gio_part()
    }
}

/// Splits an IO-form Kraus operator into an index map and a diagonal part.
///
/// Zero columns are sent to unused targets when that completes a
/// permutation, otherwise to themselves.
pub fn factor_kraus<T: Real>(k: &Matrix<T>, basis: &Basis<T>) -> Result<KrausFactor<T>> {
    factor_kraus_with(k, basis, T::lit(ZERO_TOL))
}

pub fn factor_kraus_with<T: Real>(
    k: &Matrix<T>,
    basis: &Basis<T>,
    zero_tol: T,
) -> Result<KrausFactor<T>> {
    let kb = basis.express(k)?;
    let d = kb.rows();
    let mut map: Vec<Option<usize>> = vec![None; d];
    let mut coefficients = vec![czero(); d];
    for (j, slot) in map.iter_mut().enumerate() {
        match nonzero_rows(&kb, j, zero_tol).as_slice() {
            [] => {}
            [i] => {
                *slot = Some(*i);
                coefficients[j] = kb[(*i, j)];
            }
            _ => return Err(Error::NotIoForm { column: j }),
        }
    }
    let mut used = vec![false; d];
    let mut injective = true;
    for f in map.iter().flatten() {
        injective &= !used[*f];
        used[*f] = true;
    }
    let mut free = (0..d).filter(|&i| !used[i]);
    let map = map
        .iter()
        .enumerate()
        .map(|(j, f)| match f {
            Some(f) => *f,
            None if injective => free.next().expect("as many free targets as zero columns"),
            None => j,
        })
        .collect();
    Ok(KrausFactor {
        index_map: IndexMap::new(map)?,
        coefficients,
    })
}

/// Largest deviation of `Σ_{n: f_n(i)=f_n(j)} conj(c_i^(n)) c_j^(n)` from
/// `δ_ij`, evaluated from the factored Kraus operators.
pub fn io_completeness_residual<T: Real>(ch: &KrausChannel<T>, basis: &Basis<T>) -> Result<T> {
    let factors = ch
        .kraus()
        .iter()
        .map(|k| factor_kraus(k, basis))
        .collect::<Result<Vec<_>>>()?;
    let d = ch.dim();
    let mut worst = T::zero();
    for i in 0..d {
        for j in 0..d {
            let mut s: C<T> = czero();
            for f in &factors {
                if f.index_map.image(i) == f.index_map.image(j) {
                    s += f.coefficients[i].conj() * f.coefficients[j];
                }
            }
            let target = if i == j { cr(T::one()) } else { czero() };
            worst = worst.max((s - target).norm());
        }
    }
    Ok(worst)
}

/// Whether the IO completeness constraint holds within `tol`.
pub fn io_completeness_check<T: Real>(
    ch: &KrausChannel<T>,
    basis: &Basis<T>,
    tol: T,
) -> Result<bool> {
    Ok(io_completeness_residual(ch, basis)? <= tol)
}

/// Unit-diagonal positive semidefinite Gram matrix `C_ij = <c_i|c_j>` of a
/// GIO's dynamical vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix<T> {
    entries: Matrix<T>,
    vectors: Vec<Vector<T>>,
}

impl<T: Real> CorrelationMatrix<T> {
    /// Validates `entries` and factorizes it as a Gram matrix.
    pub fn new(entries: Matrix<T>, tol: T) -> Result<Self> {
        let d = entries.require_square()?;
        for i in 0..d {
            let z = entries[(i, i)];
            if (z - cr(T::one())).norm() > tol {
                return Err(Error::DiagonalNotOne {
                    index: i,
                    value: z.re.as_f64(),
                });
            }
        }
        let spec = hermitian_eig(&entries, tol)?;
        if spec.min_value() < -tol {
            return Err(Error::NotPsd {
                min_eigenvalue: spec.min_value().as_f64(),
            });
        }
        // C = W Λ W† = V†V with V = √Λ W†; column i of V is |c_i>.
        let kept: Vec<usize> = (0..d)
            .filter(|&k| spec.values[k] > T::lit(RANK_CUTOFF))
            .collect();
        let vectors = (0..d)
            .map(|i| {
                kept.iter()
                    .map(|&k| spec.vectors[(i, k)].conj() * spec.values[k].sqrt())
                    .collect()
            })
            .collect();
        Ok(Self {
            entries: entries.hermitian_part(),
            vectors,
        })
    }

    /// Gram matrix of the given dynamical vectors.
    pub fn from_vectors(vectors: Vec<Vector<T>>) -> Self {
        let d = vectors.len();
        let entries = Matrix::from_fn(d, d, |i, j| numerics::inner(&vectors[i], &vectors[j]));
        Self { entries, vectors }
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix<T> {
        &self.entries
    }

    /// `|c_i>` for each basis index `i`, all of length [`Self::rank`].
    pub fn dynamical_vectors(&self) -> &[Vector<T>] {
        &self.vectors
    }

    /// Number of components of the dynamical vectors (Choi rank after
    /// factorization).
    pub fn rank(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    /// `Cᵀ ∘ X`.
    pub fn schur_action(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        self.entries.transpose().schur(x)
    }
}

/// Correlation matrix read off the diagonal Kraus operators of a GIO.
pub fn correlation_matrix_of<T: Real>(
    ch: &KrausChannel<T>,
    basis: &Basis<T>,
) -> Result<CorrelationMatrix<T>> {
    if classify(ch, basis)? != IncoherenceClass::Gio {
        return Err(Error::NotGio);
    }
    let ks = ch.kraus_in(basis)?;
    let vectors = (0..ch.dim())
        .map(|i| ks.iter().map(|k| k[(i, i)]).collect())
        .collect();
    Ok(CorrelationMatrix::from_vectors(vectors))
}

/// Diagonal Kraus operators `K_n = Σ_i c_i^(n) |i><i|` in the computational
/// basis.
pub fn gio_from_correlation<T: Real>(c: &CorrelationMatrix<T>) -> Result<KrausChannel<T>> {
    gio_from_correlation_in(c, &Basis::computational(c.dim()))
}

/// As [`gio_from_correlation`], with Kraus operators diagonal in `basis`.
pub fn gio_from_correlation_in<T: Real>(
    c: &CorrelationMatrix<T>,
    basis: &Basis<T>,
) -> Result<KrausChannel<T>> {
    basis.check_dim(c.dim())?;
    let kraus = (0..c.rank())
        .map(|n| {
            let diag: Vector<T> = c.vectors.iter().map(|v| v[n]).collect();
            basis.unexpress(&Matrix::from_diag(&diag))
        })
        .collect::<Result<Vec<_>>>()?;
    KrausChannel::new(kraus, T::lit(DEFAULT_TOL))
}

/// Orthonormal (Hilbert–Schmidt) basis of the operators commuting with every
/// `K_i` and `K_i†` of a unital channel.
pub fn commutant<T: Real>(ch: &KrausChannel<T>) -> Result<Vec<Matrix<T>>> {
    ch.require_tp()?;
    ch.require_unital()?;
    let d = ch.dim();
    let id = Matrix::identity(d);
    let ops: Vec<Matrix<T>> = ch
        .kraus()
        .iter()
        .flat_map(|k| [k.clone(), k.dagger()])
        .collect();
    // Row-major vec: vec(XK - KX) = (I ⊗ Kᵀ - K ⊗ I) vec(X).
    let n = d * d;
    let mut system = Matrix::zeros(ops.len() * n, n);
    for (b, k) in ops.iter().enumerate() {
        let block = &id.kron(&k.transpose()) - &k.kron(&id);
        for i in 0..n {
            for j in 0..n {
                system[(b * n + i, j)] = block[(i, j)];
            }
        }
    }
    Ok(unvec_all(d, nullspace(&system, T::lit(NULLSPACE_CUTOFF))?))
}

/// Orthonormal basis of `{X : Φ(X) = X}` from the nullspace of the
/// superoperator minus the identity.
pub fn fixed_point_space<T: Real>(ch: &KrausChannel<T>) -> Result<Vec<Matrix<T>>> {
    let d = ch.dim();
    let s = &ch.superoperator() - &Matrix::identity(d * d);
    Ok(unvec_all(d, nullspace(&s, T::lit(NULLSPACE_CUTOFF))?))
}

fn unvec_all<T: Real>(d: usize, vs: Vec<Vector<T>>) -> Vec<Matrix<T>> {
    vs.into_iter()
        .map(|v| Matrix::from_row_major(d, d, v).expect("d*d entries"))
        .collect()
}

/// Residuals of the fixed-point relations for one operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointResiduals<T> {
    /// `‖Φ(X) - X‖₂`.
    pub fixedness: T,
    /// `‖Σ [X,K][X,K]† - Φ(XX†) + XX†‖₂`; vanishes for fixed points of
    /// unital channels.
    pub identity: T,
    /// Residual of the unconditional expansion
    /// `Σ [X,K][X,K]† = X (Σ KK†) X† - X Φ(X†) - Φ(X) X† + Φ(XX†)`.
    pub expansion: T,
}

pub fn fixed_point_check<T: Real>(
    ch: &KrausChannel<T>,
    x: &Matrix<T>,
) -> Result<FixedPointResiduals<T>> {
    ch.require_tp()?;
    let phi_x = ch.apply_operator(x)?;
    let fixedness = (&phi_x - x).hs_norm();
    let xx = x * &x.dagger();
    let mut lhs = Matrix::zeros(ch.dim(), ch.dim());
    for k in ch.kraus() {
        let c = &(x * k) - &(k * x);
        lhs = &lhs + &(&c * &c.dagger());
    }
    let phi_xx = ch.apply_operator(&xx)?;
    let rhs = &phi_xx - &xx;
    let kk = numerics::sum(ch.dim(), ch.kraus().iter().map(|k| k * &k.dagger()));
    let full = &(&(&x.sandwich(&kk)? - &(x * &ch.apply_operator(&x.dagger())?))
        - &(&phi_x * &x.dagger()))
        + &phi_xx;
    Ok(FixedPointResiduals {
        fixedness,
        identity: (&lhs - &rhs).hs_norm(),
        expansion: (&lhs - &full).hs_norm(),
    })
}

/// States `ρ, Φ(ρ), ..., Φⁿ(ρ)` of a GIO.
pub fn trajectory<T: Real>(
    ch: &KrausChannel<T>,
    basis: &Basis<T>,
    rho: &DensityMatrix<T>,
    steps: usize,
) -> Result<Vec<DensityMatrix<T>>> {
    if classify(ch, basis)? != IncoherenceClass::Gio {
        return Err(Error::NotGio);
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(rho.clone());
    for _ in 0..steps {
        let next = ch.apply(out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// `Φⁿ(ρ)` for a GIO.
pub fn iterate<T: Real>(
    ch: &KrausChannel<T>,
    basis: &Basis<T>,
    rho: &DensityMatrix<T>,
    steps: usize,
) -> Result<DensityMatrix<T>> {
    Ok(trajectory(ch, basis, rho, steps)?
        .pop()
        .expect("trajectory includes the initial state"))
}

/// Closed form `(C_ji)ⁿ ρ_ij` of n GIO steps, in basis coordinates.
pub fn schur_power_law<T: Real>(c: &CorrelationMatrix<T>, rho_in_basis: &Matrix<T>, steps: usize) -> Matrix<T> {
    let ct = c.entries().transpose();
    Matrix::from_fn(c.dim(), c.dim(), |i, j| {
        ct[(i, j)].powu(steps as u32) * rho_in_basis[(i, j)]
    })
}

// ---- random instances -----------------------------------------------------

/// GIO with `rank` diagonal Kraus operators built from random unit dynamical
/// vectors.
pub fn random_gio_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> KrausChannel<T> {
    let vectors = (0..dim).map(|_| random_vector_with(rng, rank)).collect();
    gio_from_vectors(vectors)
}

fn gio_from_vectors<T: Real>(vectors: Vec<Vector<T>>) -> KrausChannel<T> {
    let rank = vectors[0].len();
    let kraus = (0..rank)
        .map(|n| Matrix::from_diag(&vectors.iter().map(|v| v[n]).collect::<Vec<_>>()))
        .collect();
    KrausChannel::new(kraus, T::lit(1e-6)).expect("unit dynamical vectors give a channel")
}

/// GIO whose correlation matrix has every off-diagonal magnitude at most
/// `bound` (< 1): dynamical vectors share a common component of weight
/// `bound` and otherwise point along mutually orthogonal axes.
pub fn random_contracting_gio_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    bound: f64,
) -> KrausChannel<T> {
    let rank = dim + 1;
    let common = bound.sqrt();
    let rest = (1.0 - bound).sqrt();
    let vectors = (0..dim)
        .map(|i| {
            let scale: f64 = rng.random::<f64>();
            let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            let a = common * scale;
            let b = (1.0 - a * a).sqrt().max(rest);
            let norm = (a * a + b * b).sqrt();
            let mut v = vec![czero::<T>(); rank];
            v[0] = C::from_polar(T::lit(a / norm), T::lit(phase));
            v[i + 1] = cr(T::lit(b / norm));
            v
        })
        .collect();
    gio_from_vectors(vectors)
}

/// GIO whose basis indices are split into random groups sharing one
/// dynamical vector, so `C_ij = 1` inside a group and the commutant grows
/// beyond the diagonal matrices.
pub fn random_grouped_gio_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> KrausChannel<T> {
    let groups = rng.random_range(1..=dim);
    let shared: Vec<Vector<T>> = (0..groups).map(|_| random_vector_with(rng, rank)).collect();
    let vectors = (0..dim)
        .map(|i| shared[if i < groups { i } else { rng.random_range(0..groups) }].clone())
        .collect();
    gio_from_vectors(vectors)
}

/// IO that is generically not SIO: with weight `q` measure in a random basis
/// `{v_k}` and prepare `|f(k)>` for a random relabeling `f`, otherwise apply a
/// random SIO.
pub fn random_io_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> KrausChannel<T> {
    let q: f64 = 0.2 + 0.6 * rng.random::<f64>();
    let v: Matrix<T> = random_unitary_with(rng, dim);
    let mut kraus: Vec<Matrix<T>> = (0..dim)
        .map(|k| {
            let target = rng.random_range(0..dim);
            Matrix::outer(&crate::numerics::basis_vector(dim, target), &v.column(k)).scale_real(T::lit(q.sqrt()))
        })
        .collect();
    let sio: KrausChannel<T> = random_sio_with(rng, dim, 2);
    kraus.extend(sio.kraus().iter().map(|k| k.scale_real(T::lit((1.0 - q).sqrt()))));
    KrausChannel::new(kraus, T::lit(1e-6)).expect("convex combination of channels")
}

/// SIO: random permutations composed with the diagonal parts of a random GIO.
pub fn random_sio_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> KrausChannel<T> {
    let gio: KrausChannel<T> = random_gio_with(rng, dim, rank);
    let kraus = gio
        .kraus()
        .iter()
        .map(|k| {
            let mut perm: Vec<usize> = (0..dim).collect();
            perm.shuffle(rng);
            &IndexMap::new(perm).expect("permutation").matrix() * k
        })
        .collect();
    KrausChannel::new(kraus, T::lit(1e-6)).expect("permuted GIO is a channel")
}

/// Random-unitary (hence unital) channel with `terms` Haar-like unitaries.
pub fn random_unitary_mixture_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    terms: usize,
) -> KrausChannel<T> {
    let raw: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<T> = raw.iter().map(|w| T::lit(w / total)).collect();
    let unitaries: Vec<Matrix<T>> = (0..terms).map(|_| random_unitary_with(rng, dim)).collect();
    KrausChannel::unitary_mixture(&weights, &unitaries).expect("valid mixture")
}

/// Generic trace-preserving channel from a random isometry split into
/// `rank` Kraus blocks.
pub fn random_channel_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> KrausChannel<T> {
    let u: Matrix<T> = random_unitary_with(rng, dim * rank);
    let kraus = (0..rank).map(|n| u.block(n * dim, 0, dim, dim)).collect();
    KrausChannel::new(kraus, T::lit(1e-6)).expect("isometry blocks give a channel")
}
