//! Property tests over seeded random instances. Proptest drives the seed and
//! the dimension; the library generators turn them into states, observables
//! and channels.

use proptest::prelude::*;
use rand::Rng;

use qcoherence::channels::{
    classify, random_gio_with, random_io_with, random_sio_with, IncoherenceClass,
};
use qcoherence::coherence::{
    c_l1, c_l1_coarse, c_re, c_re_coarse, classical_correlation, luders_discord,
};
use qcoherence::dilation::{dilate_gio, dilate_io, dilate_luders, dilate_sio, extract_kraus};
use qcoherence::instruments::{luders, optimal_fine_grain, repeatable_instrument};
use qcoherence::numerics::{
    hermitian_eig, relative_entropy_psd, schur_product, sqrt_psd, DEFAULT_TOL,
};
use qcoherence::qstate::{relative_entropy, spectral_decompose};
use qcoherence::random::{
    ginibre_with, random_basis_with, random_block_diagonal_with, random_block_rotation_with,
    random_degenerate_profile, random_density_with, random_fine_graining_with,
    random_observable_with, random_pure_with, random_unitary_with, rng_from_seed, InstanceRng,
};
use qcoherence::{
    Basis, BipartiteState, DensityMatrix, FineGraining, IndexMap, KrausChannel, MapKind,
    Matrix, Observable,
};

fn state(rng: &mut InstanceRng, d: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=d);
    random_density_with(rng, d, rank).unwrap()
}

fn full_rank(rng: &mut InstanceRng, d: usize) -> DensityMatrix {
    random_density_with(rng, d, d).unwrap()
}

fn observable(rng: &mut InstanceRng, d: usize) -> Observable {
    let profile = random_degenerate_profile(rng, d);
    random_observable_with(rng, d, &profile).unwrap()
}

fn psd(rng: &mut InstanceRng, d: usize) -> Matrix {
    let rank = rng.random_range(1..=d);
    let g: Matrix = ginibre_with(rng, d, rank);
    &g * &g.dagger()
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Largest excess of a partial sum of `x` over that of `y`, both sorted
/// descending.
fn majorization_excess(x: &[f64], y: &[f64]) -> f64 {
    let (x, y) = (sorted_desc(x.to_vec()), sorted_desc(y.to_vec()));
    let (mut sx, mut sy, mut worst) = (0.0, 0.0, f64::NEG_INFINITY);
    for (a, b) in x.iter().zip(&y) {
        sx += a;
        sy += b;
        worst = worst.max(sx - sy);
    }
    worst
}

fn permute(m: &Matrix, perm: &[usize]) -> Matrix {
    let p = IndexMap::new(perm.to_vec()).unwrap().matrix::<f64>();
    p.sandwich(m).unwrap()
}

fn shuffled(rng: &mut InstanceRng, d: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), d in 1usize..=16) {
        let mut rng = rng_from_seed(seed);
        let g: Matrix = ginibre_with(&mut rng, d, d);
        let h = &g + &g.dagger();
        let spec = hermitian_eig(&h, 1e-8).unwrap();
        prop_assert!((&spec.reconstruct() - &h).hs_norm() <= 1e-10 * h.hs_norm().max(1.0));
        prop_assert!(spec.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn schur_product_of_psd_is_psd(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (psd(&mut rng, d), psd(&mut rng, d));
        let s = schur_product(&a, &b).unwrap();
        prop_assert!(hermitian_eig(&s, 1e-8).unwrap().min_value() >= -1e-10);
    }

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>(), d in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let rho = state(&mut rng, d);
        let sigma = full_rank(&mut rng, d);
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
        prop_assert!(relative_entropy(&sigma, &sigma).unwrap().abs() <= 1e-8);
    }

    #[test]
    fn spectral_decomposition_reconstructs(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, d);
        let h = obs.matrix();
        let again = spectral_decompose(&h, 1e-6).unwrap();
        let sum = again
            .eigenvalues()
            .iter()
            .zip(again.projectors())
            .fold(Matrix::zeros(d, d), |acc, (&r, p)| &acc + &p.scale_real(r));
        prop_assert!((&sum - &h).hs_norm() <= 1e-8);
        prop_assert_eq!(again.degeneracies(), obs.degeneracies());
    }

    #[test]
    fn fine_graining_blocks_sum_to_projectors(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, d);
        let fg = random_fine_graining_with(&mut rng, &obs);
        for (block, p) in fg.blocks().iter().zip(obs.projectors()) {
            let sum = block.iter().fold(Matrix::zeros(d, d), |acc, v| &acc + &Matrix::projector(v));
            prop_assert!((&sum - p).hs_norm() <= 1e-8);
        }
        let labels: Vec<f64> = fg.labels().iter().flatten().copied().collect();
        for (i, a) in labels.iter().enumerate() {
            prop_assert!(labels[i + 1..].iter().all(|b| b != a));
        }
    }

    #[test]
    fn luders_minimally_disturbs(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, d);
        let rho = state(&mut rng, d);
        let l = luders(&rho, &obs).unwrap();
        let base = (rho.matrix() - l.matrix()).hs_norm();
        let s_rl = relative_entropy_psd(rho.matrix(), l.matrix(), DEFAULT_TOL).unwrap();
        for _ in 0..20 {
            let sigma = random_block_diagonal_with(&mut rng, &obs);
            prop_assert!(base <= (rho.matrix() - sigma.matrix()).hs_norm() + 1e-12);
            let lhs = relative_entropy_psd(rho.matrix(), sigma.matrix(), DEFAULT_TOL).unwrap();
            let rhs = s_rl + relative_entropy_psd(l.matrix(), sigma.matrix(), DEFAULT_TOL).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-8);
        }
    }

    #[test]
    fn luders_increases_entropy_and_is_majorized(seed in any::<u64>(), d in 2usize..=8) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, d);
        let rho = state(&mut rng, d);
        let l = luders(&rho, &obs).unwrap();
        prop_assert!(l.entropy() >= rho.entropy() - 1e-10);
        prop_assert!(majorization_excess(&l.eigenvalues(), &rho.eigenvalues()) <= 1e-10);
    }

    #[test]
    fn orthogonal_supports_multiply_to_zero(seed in any::<u64>(), d in 2usize..=8) {
        let mut rng = rng_from_seed(seed);
        let u: Matrix = random_unitary_with(&mut rng, d);
        let k = rng.random_range(1..d);
        let ga: Matrix = ginibre_with(&mut rng, k, k);
        let gb: Matrix = ginibre_with(&mut rng, d - k, d - k);
        let ua = u.block(0, 0, d, k);
        let ub = u.block(0, k, d, d - k);
        let a = ua.sandwich(&(&ga * &ga.dagger())).unwrap();
        let b = ub.sandwich(&(&gb * &gb.dagger())).unwrap();
        let ab = &a * &b;
        prop_assert!(ab.trace().norm() <= 1e-10);
        prop_assert!(ab.hs_norm() <= 1e-10);
    }

    #[test]
    fn coarse_graining_lowers_coherence(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, d);
        let fg = random_fine_graining_with(&mut rng, &obs);
        let rho = state(&mut rng, d);
        let basis = fg.basis();
        prop_assert!(c_l1(&rho, &basis).unwrap() >= c_l1_coarse(&rho, &obs, &fg).unwrap() - 1e-10);
        prop_assert!(c_re(&rho, &basis).unwrap() >= c_re_coarse(&rho, &obs).unwrap() - 1e-10);
    }

    #[test]
    fn optimal_fine_graining_attains_coarse_values(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, d);
        let rho = state(&mut rng, d);
        let best = optimal_fine_grain(&obs, &rho).unwrap();
        let basis = best.basis();
        prop_assert!((c_l1(&rho, &basis).unwrap() - c_l1_coarse(&rho, &obs, &best).unwrap()).abs() <= 1e-8);
        prop_assert!((c_re(&rho, &basis).unwrap() - c_re_coarse(&rho, &obs).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn discord_and_classical_correlation_add_up(seed in any::<u64>(), db in 2usize..=3, da in 2usize..=3) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, db);
        let st = BipartiteState::new((da, db), state(&mut rng, da * db)).unwrap();
        let total = luders_discord(&st, &obs).unwrap() + classical_correlation(&st, &obs).unwrap();
        prop_assert!((total - st.mutual_information()).abs() <= 1e-8);
    }

    #[test]
    fn repeatable_instruments_leave_equal_residual_coherence(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, d);
        let psi = random_pure_with(&mut rng, d);
        let theta = random_block_rotation_with(&mut rng, &obs);
        for (block, p) in theta.iter().zip(obs.projectors()) {
            for v in block {
                let pv = p.apply(v).unwrap();
                let err: f64 = pv.iter().zip(v).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                prop_assert!(err <= 1e-10);
            }
        }
        let inst = repeatable_instrument(&obs, &theta, 1e-8).unwrap();
        let phi = FineGraining::canonical(&obs).basis();
        let th = FineGraining::new(&obs, theta, 1e-6).unwrap().basis();
        let a = luders(&psi, &obs).unwrap();
        let b = inst.apply(&psi).unwrap();
        prop_assert!((c_l1(&a, &phi).unwrap() - c_l1(&b, &th).unwrap()).abs() <= 1e-10);
        prop_assert!((c_re(&a, &phi).unwrap() - c_re(&b, &th).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn coherence_is_permutation_invariant(seed in any::<u64>(), d in 2usize..=8) {
        let mut rng = rng_from_seed(seed);
        let rho = state(&mut rng, d);
        let perm = shuffled(&mut rng, d);
        let moved = DensityMatrix::new(permute(rho.matrix(), &perm), 1e-8).unwrap();
        let comp = Basis::computational(d);
        prop_assert!((c_l1(&rho, &comp).unwrap() - c_l1(&moved, &comp).unwrap()).abs() <= 1e-12);
        prop_assert!((c_re(&rho, &comp).unwrap() - c_re(&moved, &comp).unwrap()).abs() <= 1e-12);
        for i in 0..d {
            for j in 0..d {
                prop_assert_eq!(moved.matrix()[(perm[i], perm[j])], rho.matrix()[(i, j)]);
            }
        }
    }

    #[test]
    fn relabelings_move_matrix_units_exactly(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let map: Vec<usize> = (0..d).map(|_| rng.random_range(0..d)).collect();
        let r = IndexMap::new(map.clone()).unwrap();
        let injective = {
            let mut seen = map.clone();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == d
        };
        prop_assert_eq!(r.kind() == MapKind::Permutation, injective);
        let m = r.matrix::<f64>();
        for i in 0..d {
            for j in 0..d {
                let moved = m.sandwich(&Matrix::unit(d, i, j)).unwrap();
                prop_assert_eq!(moved, Matrix::unit(d, map[i], map[j]));
            }
        }
    }

    #[test]
    fn gio_sieves_matrix_units_exactly(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let r = rng.random_range(1..=d);
        let ch: KrausChannel = random_gio_with(&mut rng, d, r);
        for k in ch.kraus() {
            for i in 0..d {
                for j in 0..d {
                    let out = k.sandwich(&Matrix::unit(d, i, j)).unwrap();
                    let mut expected = Matrix::zeros(d, d);
                    expected[(i, j)] = k[(i, i)] * k[(j, j)].conj();
                    prop_assert_eq!(out, expected);
                }
            }
        }
    }

    #[test]
    fn classification_is_nested(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let r = rng.random_range(1..=d);
        let comp = Basis::computational(d);
        let cases: [(KrausChannel, IncoherenceClass); 3] = [
            (random_gio_with(&mut rng, d, r), IncoherenceClass::Gio),
            (random_sio_with(&mut rng, d, r), IncoherenceClass::SioNotGio),
            (random_io_with(&mut rng, d), IncoherenceClass::IoNotSio),
        ];
        for (ch, at_least) in &cases {
            let class = classify(ch, &comp).unwrap();
            prop_assert!(!class.is_gio() || class.is_sio());
            prop_assert!(!class.is_sio() || class.is_io());
            let rank = |c: IncoherenceClass| match c {
                IncoherenceClass::Gio => 0,
                IncoherenceClass::SioNotGio => 1,
                IncoherenceClass::IoNotSio => 2,
                IncoherenceClass::NotIo => 3,
            };
            prop_assert!(rank(class) <= rank(*at_least));
        }
    }

    #[test]
    fn dilations_round_trip_on_matrix_units(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let comp = Basis::computational(d);
        let r = rng.random_range(1..=d);
        let gio: KrausChannel = random_gio_with(&mut rng, d, r);
        let sio: KrausChannel = random_sio_with(&mut rng, d, r);
        let io: KrausChannel = random_io_with(&mut rng, d);
        let models = [
            (dilate_gio(&gio, &comp).unwrap(), &gio),
            (dilate_sio(&sio, &comp).unwrap(), &sio),
            (dilate_io(&io, &comp).unwrap(), &io),
        ];
        for (model, ch) in &models {
            let back = extract_kraus(model).unwrap();
            prop_assert!(back.action_distance(ch).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn luders_dilation_is_repeatable(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let obs = observable(&mut rng, d);
        let fg = random_fine_graining_with(&mut rng, &obs);
        let model = dilate_luders(&obs, &fg).unwrap();
        let rho = full_rank(&mut rng, d);
        for (n, p) in obs.projectors().iter().enumerate() {
            let (_, post) = model.conditional_system_state(&rho, n).unwrap();
            let projected = p.sandwich(post.matrix()).unwrap();
            prop_assert!((&projected - post.matrix()).hs_norm() <= 1e-10);
        }
    }

    #[test]
    fn schur_eigenvalues_weakly_majorized(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (psd(&mut rng, d), psd(&mut rng, d));
        let s = schur_product(&a, &b).unwrap();
        let la = sorted_desc(hermitian_eig(&a, 1e-8).unwrap().values);
        let db = sorted_desc(b.real_diagonal());
        let bound: Vec<f64> = la.iter().zip(&db).map(|(x, y)| x * y).collect();
        let ls = hermitian_eig(&s, 1e-8).unwrap().values;
        let scale = bound.iter().sum::<f64>().max(1.0);
        prop_assert!(majorization_excess(&ls, &bound) <= 1e-9 * scale);
    }

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = rng_from_seed(seed);
        let a = psd(&mut rng, d);
        let r = sqrt_psd(&a, 1e-8).unwrap();
        prop_assert!((&(&r * &r) - &a).hs_norm() <= 1e-9 * a.hs_norm().max(1.0));
    }
}

#[test]
fn gio_dilation_can_build_apparatus_coherence() {
    // Phase damping leaves |0> alone on the system but rotates the apparatus
    // of the |1> branch into a superposition.
    let ch: KrausChannel = qcoherence::channels::phase_damping(0.8).unwrap();
    let comp = Basis::computational(2);
    let model = dilate_gio(&ch, &comp).unwrap();
    let mut witnessed = false;
    for n in 0..2 {
        let e = qcoherence::numerics::basis_vector(2, n);
        let joint = model.joint_output(&DensityMatrix::pure(&e)).unwrap();
        let dims = (2, model.ancilla_dim());
        let sys = qcoherence::numerics::partial_trace(&joint, dims, qcoherence::Subsystem::A).unwrap();
        assert!((&sys - &Matrix::projector(&e)).hs_norm() < 1e-12);
        let app = qcoherence::numerics::partial_trace(&joint, dims, qcoherence::Subsystem::B).unwrap();
        let app = DensityMatrix::new(app, 1e-8).unwrap();
        witnessed |= c_l1(&app, &Basis::computational(model.ancilla_dim())).unwrap() > 1e-3;
    }
    assert!(witnessed);
}

#[test]
fn random_basis_is_orthonormal() {
    let mut rng = rng_from_seed(3);
    let b: Basis = random_basis_with(&mut rng, 5);
    let u = b.unitary();
    assert!((&(&u.dagger() * u) - &Matrix::identity(5)).hs_norm() < 1e-12);
}
