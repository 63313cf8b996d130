//! States, observables and measurements.

use crate::error::{Error, Result};
use crate::numerics::{
    self, hermitian_eig, inner, normalized, orthonormality_defect, partial_trace, sqrt_psd,
    Matrix, Subsystem, Vector, DEFAULT_TOL,
};
use crate::scalar::{Real, C};

/// Default spread/gap tolerance for grouping degenerate eigenvalues.
pub const GROUP_TOL: f64 = 1e-6;

/// Complete orthonormal basis, stored as the unitary whose columns are the
/// basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis<T> {
    unitary: Matrix<T>,
}

impl<T: Real> Basis<T> {
    pub fn computational(dim: usize) -> Self {
        Self {
            unitary: Matrix::identity(dim),
        }
    }

    pub fn from_vectors(vectors: &[Vector<T>], tol: T) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::BadBasis("empty basis".into()));
        }
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::BadBasis(format!(
                "expected {n} vectors of length {n}"
            )));
        }
        let defect = orthonormality_defect(vectors);
        if defect > tol {
            return Err(Error::BadBasis(format!(
                "vectors not orthonormal (defect {:.3e})",
                defect.as_f64()
            )));
        }
        Ok(Self {
            unitary: Matrix::from_columns(vectors),
        })
    }

    pub fn from_unitary(unitary: Matrix<T>, tol: T) -> Result<Self> {
        unitary
            .require_square()
            .map_err(|_| Error::BadBasis("basis matrix must be square".into()))?;
        Self::from_vectors(&unitary.columns(), tol)
    }

    pub fn dim(&self) -> usize {
        self.unitary.rows()
    }

    pub fn vector(&self, k: usize) -> Vector<T> {
        self.unitary.column(k)
    }

    pub fn vectors(&self) -> Vec<Vector<T>> {
        self.unitary.columns()
    }

    /// Unitary with the basis vectors as columns.
    pub fn unitary(&self) -> &Matrix<T> {
        &self.unitary
    }

    /// Matrix elements `<φ_i|M|φ_j>`.
    pub fn express(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_dim(m.rows())?;
        self.unitary.adjoint_sandwich(m)
    }

    /// Inverse of [`Basis::express`]: builds `Σ m_ij |φ_i><φ_j|`.
    pub fn unexpress(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_dim(m.rows())?;
        self.unitary.sandwich(m)
    }

    /// Basis with its vectors reordered: new vector `k` is old vector `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let v = self.vectors();
        Self {
            unitary: Matrix::from_columns(&perm.iter().map(|&k| v[k].clone()).collect::<Vec<_>>()),
        }
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if d == self.dim() {
            Ok(())
        } else {
            Err(Error::DimMismatch {
                expected: self.dim(),
                got: d,
            })
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: Matrix<T>,
}

/// Checks the density-matrix invariants and wraps `m`.
pub fn validate_density<T: Real>(m: Matrix<T>, tol: T) -> Result<DensityMatrix<T>> {
    DensityMatrix::new(m, tol)
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(m: Matrix<T>, tol: T) -> Result<Self> {
        m.require_square()?;
        let spec = hermitian_eig(&m, tol)?;
        if spec.min_value() < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: spec.min_value().as_f64(),
            });
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::TraceNotOne {
                trace: tr.re.as_f64(),
            });
        }
        Ok(Self {
            matrix: m.hermitian_part(),
        })
    }

    /// Wraps the output of a trace-preserving map without re-running the
    /// eigenvalue check.
    pub(crate) fn from_trusted(m: Matrix<T>) -> Self {
        Self {
            matrix: m.hermitian_part(),
        }
    }

    /// `|ψ><ψ|` for the normalized input vector.
    pub fn pure(psi: &[C<T>]) -> Self {
        Self::from_trusted(Matrix::projector(&normalized(psi)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(Matrix::identity(dim).scale_real(T::one() / T::lit(dim as f64)))
    }

    /// `|+><+|` generalization: all entries `1/d`.
    pub fn maximally_coherent(dim: usize) -> Self {
        Self::from_trusted(Matrix::ones(dim).scale_real(T::one() / T::lit(dim as f64)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eig(&self.matrix, T::lit(DEFAULT_TOL))
            .expect("density matrix is Hermitian")
            .values
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> T {
        numerics::shannon_entropy(&self.eigenvalues())
    }

    pub(crate) fn require_dim(&self, d: usize) -> Result<()> {
        if self.dim() == d {
            Ok(())
        } else {
            Err(Error::DimMismatch {
                expected: d,
                got: self.dim(),
            })
        }
    }
}

/// `-Σ λ log2 λ` of a density matrix.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.entropy()
}

/// Quantum relative entropy `S(ρ‖σ)` in bits, `+∞` on support violation.
pub fn relative_entropy<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    numerics::relative_entropy_psd(rho.matrix(), sigma.matrix(), T::lit(DEFAULT_TOL))
}

/// Hermitian observable `R = Σ r_n P_n` with its resolved spectral data.
///
/// Blocks are ordered by non-increasing eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable<T> {
    dim: usize,
    eigenvalues: Vec<T>,
    projectors: Vec<Matrix<T>>,
    degeneracies: Vec<usize>,
    block_bases: Vec<Vec<Vector<T>>>,
}

/// Groups the eigenvalues of `h` into degenerate blocks.
///
/// Consecutive sorted eigenvalues closer than `group_tol` are merged; a block
/// whose total spread exceeds `group_tol` makes the grouping ambiguous.
pub fn spectral_decompose<T: Real>(h: &Matrix<T>, group_tol: T) -> Result<Observable<T>> {
    let dim = h.require_square()?;
    let spec = hermitian_eig(h, T::lit(DEFAULT_TOL))?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..dim {
        match groups.last_mut() {
            Some(g) if spec.values[*g.last().unwrap()] - spec.values[k] <= group_tol => g.push(k),
            _ => groups.push(vec![k]),
        }
    }
    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut block_bases = Vec::with_capacity(groups.len());
    for g in &groups {
        let first = spec.values[g[0]];
        let last = spec.values[*g.last().unwrap()];
        if first - last > group_tol {
            return Err(Error::AmbiguousGrouping {
                tol: group_tol.as_f64(),
            });
        }
        let mean = g.iter().map(|&k| spec.values[k]).fold(T::zero(), |a, b| a + b)
            / T::lit(g.len() as f64);
        eigenvalues.push(mean);
        block_bases.push(g.iter().map(|&k| spec.vector(k)).collect());
    }
    Ok(Observable::assemble(dim, eigenvalues, block_bases))
}

impl<T: Real> Observable<T> {
    fn assemble(dim: usize, eigenvalues: Vec<T>, block_bases: Vec<Vec<Vector<T>>>) -> Self {
        let projectors = block_bases
            .iter()
            .map(|vs| numerics::sum(dim, vs.iter().map(|v| Matrix::projector(v))))
            .collect();
        let degeneracies = block_bases.iter().map(Vec::len).collect();
        Self {
            dim,
            eigenvalues,
            projectors,
            degeneracies,
            block_bases,
        }
    }

    /// Observable from distinct eigenvalues and orthonormal vectors spanning
    /// each eigenspace.
    pub fn from_blocks(eigenvalues: Vec<T>, blocks: Vec<Vec<Vector<T>>>, tol: T) -> Result<Self> {
        if eigenvalues.len() != blocks.len() || blocks.is_empty() {
            return Err(Error::InvalidObservable(
                "need one non-empty vector block per eigenvalue".into(),
            ));
        }
        let flat: Vec<Vector<T>> = blocks.iter().flatten().cloned().collect();
        let dim = flat.len();
        if blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidObservable("empty eigenspace".into()));
        }
        Basis::from_vectors(&flat, tol)
            .map_err(|e| Error::InvalidObservable(format!("block vectors: {e}")))?;
        let obs = Self::assemble(dim, eigenvalues, blocks);
        obs.check_distinct(tol)?;
        Ok(obs.sorted())
    }

    /// Observable from distinct eigenvalues and their orthogonal projectors.
    pub fn from_projectors(eigenvalues: Vec<T>, projectors: Vec<Matrix<T>>, tol: T) -> Result<Self> {
        if eigenvalues.len() != projectors.len() || projectors.is_empty() {
            return Err(Error::InvalidObservable(
                "need one projector per eigenvalue".into(),
            ));
        }
        let dim = projectors[0].require_square()?;
        let mut total = Matrix::zeros(dim, dim);
        let mut blocks = Vec::with_capacity(projectors.len());
        for (n, p) in projectors.iter().enumerate() {
            if p.shape() != (dim, dim) {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: p.rows(),
                });
            }
            if (&(p * p) - p).hs_norm() > tol {
                return Err(Error::InvalidObservable(format!(
                    "projector {n} is not idempotent"
                )));
            }
            for (m, q) in projectors.iter().enumerate().skip(n + 1) {
                if (p * q).hs_norm() > tol {
                    return Err(Error::InvalidObservable(format!(
                        "projectors {n} and {m} are not orthogonal"
                    )));
                }
            }
            let spec = hermitian_eig(p, tol)
                .map_err(|e| Error::InvalidObservable(format!("projector {n}: {e}")))?;
            let rank = spec.values.iter().filter(|&&x| x > T::lit(0.5)).count();
            if rank == 0 {
                return Err(Error::InvalidObservable(format!("projector {n} is zero")));
            }
            blocks.push((0..rank).map(|k| spec.vector(k)).collect::<Vec<_>>());
            total = &total + p;
        }
        if (&total - &Matrix::identity(dim)).hs_norm() > tol {
            return Err(Error::InvalidObservable(
                "projectors do not resolve the identity".into(),
            ));
        }
        let obs = Self::assemble(dim, eigenvalues, blocks);
        obs.check_distinct(tol)?;
        Ok(obs.sorted())
    }

    /// Nondegenerate observable diagonal in `basis`.
    pub fn from_basis(basis: &Basis<T>, eigenvalues: Vec<T>) -> Result<Self> {
        if eigenvalues.len() != basis.dim() {
            return Err(Error::LengthMismatch {
                left: basis.dim(),
                right: eigenvalues.len(),
            });
        }
        let blocks = basis.vectors().into_iter().map(|v| vec![v]).collect();
        let obs = Self::assemble(basis.dim(), eigenvalues, blocks);
        obs.check_distinct(T::zero())?;
        Ok(obs.sorted())
    }

    /// Nondegenerate observable with eigenvalues `d-1, ..., 0` on the
    /// computational basis states `|0>, ..., |d-1>`.
    pub fn computational(dim: usize) -> Self {
        let eig = (0..dim).map(|k| T::lit((dim - 1 - k) as f64)).collect();
        Self::from_basis(&Basis::computational(dim), eig).expect("distinct eigenvalues")
    }

    /// Pauli Z: `+1` on `|0>`, `-1` on `|1>`.
    pub fn pauli_z() -> Self {
        Self::from_basis(&Basis::computational(2), vec![T::one(), -T::one()])
            .expect("distinct eigenvalues")
    }

    /// Multiple of the identity: a single block covering the whole space.
    pub fn trivial(dim: usize) -> Self {
        let blocks = vec![Basis::computational(dim).vectors()];
        Self::assemble(dim, vec![T::one()], blocks)
    }

    fn check_distinct(&self, tol: T) -> Result<()> {
        for (i, a) in self.eigenvalues.iter().enumerate() {
            for b in &self.eigenvalues[i + 1..] {
                if (*a - *b).abs() <= tol {
                    return Err(Error::InvalidObservable(format!(
                        "eigenvalues {a} and {b} are not distinct"
                    )));
                }
            }
        }
        Ok(())
    }

    fn sorted(self) -> Self {
        let mut order: Vec<usize> = (0..self.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| {
            self.eigenvalues[j]
                .partial_cmp(&self.eigenvalues[i])
                .expect("finite eigenvalues")
        });
        Self {
            dim: self.dim,
            eigenvalues: order.iter().map(|&i| self.eigenvalues[i]).collect(),
            projectors: order.iter().map(|&i| self.projectors[i].clone()).collect(),
            degeneracies: order.iter().map(|&i| self.degeneracies[i]).collect(),
            block_bases: order.iter().map(|&i| self.block_bases[i].clone()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of distinct eigenvalues `N`.
    pub fn num_outcomes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[Matrix<T>] {
        &self.projectors
    }

    pub fn projector(&self, n: usize) -> &Matrix<T> {
        &self.projectors[n]
    }

    pub fn degeneracies(&self) -> &[usize] {
        &self.degeneracies
    }

    /// Orthonormal vectors spanning eigenspace `n`.
    pub fn block_basis(&self, n: usize) -> &[Vector<T>] {
        &self.block_bases[n]
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.degeneracies.iter().all(|&d| d == 1)
    }

    /// `Σ r_n P_n`.
    pub fn matrix(&self) -> Matrix<T> {
        numerics::sum(
            self.dim,
            self.eigenvalues
                .iter()
                .zip(&self.projectors)
                .map(|(&r, p)| p.scale_real(r)),
        )
    }

    /// Smallest gap between distinct eigenvalues (`None` for `N = 1`).
    pub fn min_gap(&self) -> Option<T> {
        self.eigenvalues
            .windows(2)
            .map(|w| (w[0] - w[1]).abs())
            .fold(None, |acc: Option<T>, g| Some(acc.map_or(g, |a| a.min(g))))
    }

    pub(crate) fn require_dim(&self, d: usize) -> Result<()> {
        if self.dim == d {
            Ok(())
        } else {
            Err(Error::DimMismatch {
                expected: self.dim,
                got: d,
            })
        }
    }
}

/// Refinement of a (possibly degenerate) observable into a nondegenerate one:
/// an orthonormal basis adapted to the eigenspaces plus distinct labels.
#[derive(Clone, Debug, PartialEq)]
pub struct FineGraining<T> {
    parent_eigenvalues: Vec<T>,
    blocks: Vec<Vec<Vector<T>>>,
    labels: Vec<Vec<T>>,
}

impl<T: Real> FineGraining<T> {
    /// Fine-graining with the observable's own block bases.
    pub fn canonical(obs: &Observable<T>) -> Self {
        Self::with_labels(obs, obs.block_bases.clone())
    }

    /// Validates that `blocks[n]` is an orthonormal basis of eigenspace `n`.
    pub fn new(obs: &Observable<T>, blocks: Vec<Vec<Vector<T>>>, tol: T) -> Result<Self> {
        if blocks.len() != obs.num_outcomes() {
            return Err(Error::IncompatibleFineGraining);
        }
        for (n, block) in blocks.iter().enumerate() {
            if block.len() != obs.degeneracies[n]
                || block.iter().any(|v| v.len() != obs.dim)
                || orthonormality_defect(block) > tol
            {
                return Err(Error::IncompatibleFineGraining);
            }
            let p = numerics::sum(obs.dim, block.iter().map(|v| Matrix::projector(v)));
            if (&p - &obs.projectors[n]).hs_norm() > tol {
                return Err(Error::IncompatibleFineGraining);
            }
        }
        Ok(Self::with_labels(obs, blocks))
    }

    // μ_ni = r_n + i·ε with ε = gap / (2 max d_n); offsets stay below half a gap.
    fn with_labels(obs: &Observable<T>, blocks: Vec<Vec<Vector<T>>>) -> Self {
        let max_d = obs.degeneracies.iter().copied().max().unwrap_or(1);
        let gap = obs.min_gap().unwrap_or_else(T::one);
        let eps = gap / T::lit(2.0 * max_d as f64);
        let labels = obs
            .eigenvalues
            .iter()
            .zip(&blocks)
            .map(|(&r, b)| (0..b.len()).map(|i| r + eps * T::lit(i as f64)).collect())
            .collect();
        Self {
            parent_eigenvalues: obs.eigenvalues.clone(),
            blocks,
            labels,
        }
    }

    pub fn blocks(&self) -> &[Vec<Vector<T>>] {
        &self.blocks
    }

    pub fn labels(&self) -> &[Vec<T>] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// All vectors, block by block.
    pub fn basis(&self) -> Basis<T> {
        let flat: Vec<Vector<T>> = self.blocks.iter().flatten().cloned().collect();
        Basis {
            unitary: Matrix::from_columns(&flat),
        }
    }

    /// Block index of each flattened basis position.
    pub fn block_index(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(n, b)| std::iter::repeat_n(n, b.len()))
            .collect()
    }

    /// The coarse-graining map `f(μ_ni) = r_n`.
    pub fn coarse_grain(&self, label: T) -> Option<T> {
        self.labels.iter().zip(&self.parent_eigenvalues).find_map(|(ls, &r)| {
            ls.contains(&label).then_some(r)
        })
    }

    /// The nondegenerate fine-grained observable `Σ μ_ni |φ_ni><φ_ni|`.
    pub fn observable(&self) -> Observable<T> {
        let eig = self.labels.iter().flatten().copied().collect();
        Observable::from_basis(&self.basis(), eig).expect("labels are distinct")
    }

    /// Whether the blocks resolve exactly the projectors of `obs`.
    pub fn refines(&self, obs: &Observable<T>, tol: T) -> bool {
        Self::new(obs, self.blocks.clone(), tol).is_ok()
    }
}

/// State of a `dA x dB` composite system.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState<T> {
    dims: (usize, usize),
    state: DensityMatrix<T>,
}

impl<T: Real> BipartiteState<T> {
    pub fn new(dims: (usize, usize), state: DensityMatrix<T>) -> Result<Self> {
        if dims.0 * dims.1 != state.dim() || dims.0 == 0 || dims.1 == 0 {
            return Err(Error::DimMismatch {
                expected: dims.0 * dims.1,
                got: state.dim(),
            });
        }
        Ok(Self { dims, state })
    }

    pub fn product(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Self {
        Self {
            dims: (a.dim(), b.dim()),
            state: DensityMatrix::from_trusted(a.matrix().kron(b.matrix())),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn state(&self) -> &DensityMatrix<T> {
        &self.state
    }

    pub fn reduced(&self, keep: Subsystem) -> DensityMatrix<T> {
        DensityMatrix::from_trusted(
            partial_trace(self.state.matrix(), self.dims, keep).expect("dims checked"),
        )
    }

    /// `S(ρA) + S(ρB) - S(ρAB)` in bits.
    pub fn mutual_information(&self) -> T {
        self.reduced(Subsystem::A).entropy() + self.reduced(Subsystem::B).entropy()
            - self.state.entropy()
    }
}

/// Positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<T> {
    effects: Vec<Matrix<T>>,
}

impl<T: Real> Povm<T> {
    pub fn new(effects: Vec<Matrix<T>>, tol: T) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidPovm("no effects".into()))?;
        let dim = first.require_square()?;
        let mut total = Matrix::zeros(dim, dim);
        for (n, e) in effects.iter().enumerate() {
            if e.shape() != (dim, dim) {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: e.rows(),
                });
            }
            let spec = hermitian_eig(e, tol)
                .map_err(|err| Error::InvalidPovm(format!("effect {n}: {err}")))?;
            if spec.min_value() < -tol || spec.values[0] > T::one() + tol {
                return Err(Error::InvalidPovm(format!(
                    "effect {n} has eigenvalues outside [0, 1]"
                )));
            }
            total = &total + e;
        }
        if (&total - &Matrix::identity(dim)).hs_norm() > tol {
            return Err(Error::InvalidPovm("effects do not sum to identity".into()));
        }
        Ok(Self {
            effects: effects.into_iter().map(|e| e.hermitian_part()).collect(),
        })
    }

    /// Projective measurement of an observable.
    pub fn from_observable(obs: &Observable<T>) -> Self {
        Self {
            effects: obs.projectors().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.effects[0].rows()
    }

    pub fn effects(&self) -> &[Matrix<T>] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// `M_n^{1/2}` through the spectral decomposition, negatives clamped.
    pub fn sqrt_effects(&self) -> Vec<Matrix<T>> {
        self.effects
            .iter()
            .map(|e| sqrt_psd(e, T::lit(DEFAULT_TOL)).expect("effects are Hermitian"))
            .collect()
    }
}

/// Residual of `Σ_i |v_i><v_i| = P` style checks, exposed for tests.
pub fn span_projector_residual<T: Real>(vectors: &[Vector<T>], p: &Matrix<T>) -> T {
    let q = numerics::sum(p.rows(), vectors.iter().map(|v| Matrix::projector(v)));
    (&q - p).hs_norm()
}

/// `‖P v - v‖` for membership of `v` in the range of projector `P`.
pub fn range_residual<T: Real>(p: &Matrix<T>, v: &[C<T>]) -> T {
    let pv = p.apply(v).expect("dimensions agree");
    numerics::norm(&pv.iter().zip(v).map(|(a, b)| a - b).collect::<Vec<_>>())
}

/// `|<u|v>|²`.
pub fn overlap<T: Real>(u: &[C<T>], v: &[C<T>]) -> T {
    inner(u, v).norm_sqr()
}
