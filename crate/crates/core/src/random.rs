//! Seeded instance generators.
//!
//! Every generator is a pure function of its seed. Streams for independent
//! trials are derived from a single root seed with [`derive_seed`], a
//! SplitMix64 mix of `(root, stream, index)`, so any failing trial can be
//! replayed in isolation.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::{inner, norm, Matrix, Vector};
use crate::qstate::{Basis, DensityMatrix, FineGraining, Observable, Povm};
use crate::scalar::{Real, C};

pub type InstanceRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for trial `index` of stream `stream` under `root`.
pub fn derive_seed(root: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(root) ^ stream) ^ index)
}

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex::new(T::lit(re * s), T::lit(im * s))
}

/// Complex Gaussian matrix with unit-variance entries.
pub fn ginibre_with<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_vector_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector<T> {
    let v: Vector<T> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Modified Gram–Schmidt with reorthogonalization on the columns of `g`.
fn orthonormalize_columns<T: Real>(g: &Matrix<T>) -> Matrix<T> {
    let mut cols: Vec<Vector<T>> = Vec::with_capacity(g.cols());
    for j in 0..g.cols() {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= *qi * c;
                }
            }
        }
        let n = norm(&v);
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    Matrix::from_columns(&cols)
}

pub fn random_unitary_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix<T> {
    orthonormalize_columns(&ginibre_with(rng, dim, dim))
}

/// Haar-like unitary from orthonormalizing a seeded complex Gaussian matrix.
pub fn random_unitary<T: Real>(dim: usize, seed: u64) -> Matrix<T> {
    random_unitary_with(&mut rng_from_seed(seed), dim)
}

pub fn random_basis_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Basis<T> {
    Basis::from_unitary(random_unitary_with(rng, dim), T::lit(1e-6)).expect("unitary columns")
}

pub fn random_density_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> Result<DensityMatrix<T>> {
    if rank == 0 || rank > dim {
        return Err(Error::BadProfile(format!(
            "rank {rank} outside 1..={dim}"
        )));
    }
    let g: Matrix<T> = ginibre_with(rng, dim, rank);
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    Ok(DensityMatrix::from_trusted(m.scale_real(T::one() / tr)))
}

/// `G G† / Tr(G G†)` with `G` a `dim x rank` complex Gaussian matrix.
pub fn random_density<T: Real>(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix<T>> {
    random_density_with(&mut rng_from_seed(seed), dim, rank)
}

pub fn random_pure_with<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix<T> {
    DensityMatrix::pure(&random_vector_with::<T, R>(rng, dim))
}

/// Observable with eigenspace dimensions `profile` in a random basis.
///
/// Eigenvalues descend from `N` with random offsets below one half, so the
/// minimum gap is at least one half.
pub fn random_observable_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    profile: &[usize],
) -> Result<Observable<T>> {
    if profile.is_empty() || profile.contains(&0) || profile.iter().sum::<usize>() != dim {
        return Err(Error::BadProfile(format!(
            "profile {profile:?} does not partition dimension {dim}"
        )));
    }
    let u: Matrix<T> = random_unitary_with(rng, dim);
    let n = profile.len();
    let mut eigenvalues = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    let mut col = 0;
    for (k, &d) in profile.iter().enumerate() {
        let offset: f64 = rng.random::<f64>() * 0.5;
        eigenvalues.push(T::lit((n - k) as f64 + offset));
        blocks.push((col..col + d).map(|j| u.column(j)).collect());
        col += d;
    }
    Observable::from_blocks(eigenvalues, blocks, T::lit(1e-6))
}

pub fn random_observable<T: Real>(dim: usize, profile: &[usize], seed: u64) -> Result<Observable<T>> {
    random_observable_with(&mut rng_from_seed(seed), dim, profile)
}

/// Random profile partitioning `dim` into at least two blocks, with at least
/// one block of size two or more when `dim >= 3`.
pub fn random_degenerate_profile<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<usize> {
    if dim <= 2 {
        return vec![1; dim];
    }
    let big = rng.random_range(2..dim);
    let mut profile = vec![big];
    let mut rest = dim - big;
    while rest > 0 {
        let d = rng.random_range(1..=rest);
        profile.push(d);
        rest -= d;
    }
    profile
}

/// POVM with `outcomes` effects `S^{-1/2} A_n S^{-1/2}` where the `A_n` are
/// random positive matrices and `S = Σ A_n`.
pub fn random_povm_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    outcomes: usize,
) -> Result<Povm<T>> {
    let raw: Vec<Matrix<T>> = (0..outcomes)
        .map(|_| {
            let g: Matrix<T> = ginibre_with(rng, dim, dim);
            &g * &g.dagger()
        })
        .collect();
    let s = crate::numerics::sum(dim, raw.iter().cloned());
    let spec = crate::numerics::hermitian_eig(&s, T::lit(1e-8))?;
    let inv_sqrt = spec.map(|x| T::one() / x.sqrt());
    let effects = raw.iter().map(|a| inv_sqrt.sandwich(a).expect("square")).collect();
    Povm::new(effects, T::lit(1e-8))
}

/// Full-rank state `Σ w_n τ_n` with independent random blocks `τ_n` on the
/// eigenspaces of `obs` and random weights `w_n`, hence commuting with it.
pub fn random_block_diagonal_with<T: Real, R: Rng + ?Sized>(rng: &mut R, obs: &Observable<T>) -> DensityMatrix<T> {
    let raw: Vec<f64> = (0..obs.num_outcomes()).map(|_| rng.random::<f64>() + 1e-2).collect();
    let total: f64 = raw.iter().sum();
    let mut m = Matrix::zeros(obs.dim(), obs.dim());
    for (n, w) in raw.iter().enumerate() {
        let b = Matrix::from_columns(obs.block_basis(n));
        let dn = b.cols();
        let tau: DensityMatrix<T> = random_density_with(rng, dn, dn).expect("full rank profile");
        let lifted = b.sandwich(tau.matrix()).expect("block shapes agree");
        m = &m + &lifted.scale_real(T::lit(w / total));
    }
    DensityMatrix::from_trusted(m.hermitian_part())
}

/// Orthonormal bases of each eigenspace of `obs`, rotated by independent
/// random unitaries.
pub fn random_block_rotation_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    obs: &Observable<T>,
) -> Vec<Vec<Vector<T>>> {
    (0..obs.num_outcomes())
        .map(|n| {
            let b = Matrix::from_columns(obs.block_basis(n));
            let u: Matrix<T> = random_unitary_with(rng, b.cols());
            (&b * &u).columns()
        })
        .collect()
}

pub fn random_fine_graining_with<T: Real, R: Rng + ?Sized>(rng: &mut R, obs: &Observable<T>) -> FineGraining<T> {
    let blocks = random_block_rotation_with(rng, obs);
    FineGraining::new(obs, blocks, T::lit(1e-6)).expect("rotations stay inside eigenspaces")
}
