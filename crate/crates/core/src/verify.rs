//! Seeded property suite over the whole library.
//!
//! Each property draws its instances from its own stream
//! `derive_seed(seed, stream, trial)`, so properties can run in parallel and
//! any single trial can be replayed. Reports are sorted by property name.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::channels::{
    self, bit_flip, classify, commutant, correlation_matrix_of, factor_kraus, fixed_point_check,
    fixed_point_space, random_contracting_gio_with, random_gio_with, random_grouped_gio_with,
    random_io_with, random_sio_with, random_unitary_mixture_with, schur_power_law,
    IncoherenceClass, KrausChannel,
};
use crate::coherence::{
    c_l1, c_l1_coarse, c_re, c_re_coarse, classical_correlation, hierarchy_gap, luders_discord,
    povm_coherence, povm_coherence_modified, qi_coherence,
};
use crate::dilation::{
    dilate_gio, dilate_io, dilate_luders, dilate_sio, dilate_von_neumann, extract_kraus,
    unitarity_residual, DilationModel,
};
use crate::error::Result;
use crate::instruments::{luders, optimal_fine_grain, repeatable_instrument};
use crate::numerics::{
    majorization_violation, relative_entropy_psd, weakly_majorizes, Matrix, Subsystem, DEFAULT_TOL,
};
use crate::qstate::{Basis, BipartiteState, DensityMatrix, FineGraining, Observable, Povm};
use crate::random::{
    derive_seed, ginibre_with, random_basis_with, random_block_diagonal_with,
    random_block_rotation_with, random_degenerate_profile, random_density_with,
    random_fine_graining_with, random_observable_with, random_povm_with, random_pure_with,
    rng_from_seed, InstanceRng,
};

type M = Matrix<f64>;

/// Suite parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides every property's default trial count.
    pub trials: Option<usize>,
    /// Largest system dimension drawn for single-system instances.
    pub dim_max: usize,
    /// Negative control: evaluates the GIO Schur identity with `C` in place
    /// of `Cᵀ`.
    pub corrupt: bool,
    pub parallel: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            trials: None,
            dim_max: 8,
            corrupt: false,
            parallel: true,
        }
    }
}

impl VerifyConfig {
    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn dim_max(&self) -> usize {
        self.dim_max.max(2)
    }
}

/// Direction of the acceptance test on a property's extreme value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    /// Worst residual must not exceed the tolerance.
    AtMost(f64),
    /// Best witness must exceed the threshold.
    AtLeast(f64),
}

impl Bound {
    pub fn tolerance(self) -> f64 {
        match self {
            Self::AtMost(t) | Self::AtLeast(t) => t,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    /// Worst residual, or best witness for [`Bound::AtLeast`].
    pub value: f64,
    pub bound: Bound,
    pub checks: usize,
    pub error: Option<String>,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let (what, rel) = match self.bound {
            Bound::AtMost(_) => ("worst", "<="),
            Bound::AtLeast(_) => ("best", ">"),
        };
        write!(
            f,
            "{verdict} {:<40} {what} {:.3e} {rel} {:.1e} ({} checks)",
            self.name,
            self.value,
            self.bound.tolerance(),
            self.checks
        )?;
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyReport> {
        self.properties.iter().filter(|p| !p.passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for p in &self.properties {
            writeln!(f, "{p}")?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} properties, {} passed, {} failed",
            self.properties.len(),
            self.properties.len() - failed,
            failed
        )
    }
}

/// Running extreme of a residual stream.
#[derive(Clone, Copy, Debug)]
struct Probe {
    bound: Bound,
    value: f64,
    checks: usize,
    nan: bool,
}

impl Probe {
    fn at_most(tol: f64) -> Self {
        Self {
            bound: Bound::AtMost(tol),
            value: 0.0,
            checks: 0,
            nan: false,
        }
    }

    fn at_least(threshold: f64) -> Self {
        Self {
            bound: Bound::AtLeast(threshold),
            value: f64::NEG_INFINITY,
            checks: 0,
            nan: false,
        }
    }

    fn record(&mut self, x: f64) {
        self.checks += 1;
        if x.is_nan() {
            self.nan = true;
        }
        self.value = self.value.max(x);
    }

    fn passed(&self) -> bool {
        !self.nan
            && self.checks > 0
            && match self.bound {
                Bound::AtMost(t) => self.value <= t,
                Bound::AtLeast(t) => self.value > t,
            }
    }
}

type Check = fn(&VerifyConfig, u64) -> Result<Vec<(&'static str, Probe)>>;

/// Stream numbers are fixed per check so adding checks does not reseed
/// existing ones.
const CHECKS: &[(u64, Check)] = &[
    (1, gio_schur),
    (2, unital_majorization),
    (3, minimal_disturbance),
    (4, hierarchy),
    (5, discord),
    (6, fixed_points),
    (7, dephasing_limit),
    (8, dilations),
    (9, residual_coherence),
    (10, classification),
    (11, povm_coherences),
    (12, schur_majorization),
    (13, permutation_covariance),
];

/// Names produced by each check, used to report failures when a check
/// errors before producing probes.
fn names_of(stream: u64) -> &'static [&'static str] {
    match stream {
        1 => &["gio_schur_equivalence"],
        2 => &["unital_entropy_increase", "unital_majorization"],
        3 => &["minimal_disturbance", "pythagorean_identity"],
        4 => &["coherence_hierarchy", "hierarchy_gap_identity", "optimal_fine_graining"],
        5 => &[
            "classical_correlation_sum",
            "degenerate_branch_mutual_information",
            "discord_identity",
        ],
        6 => &[
            "commutant_fixedness",
            "commutant_matches_fixed_points",
            "commutator_expansion",
            "commutator_identity",
        ],
        7 => &["dephasing_limit", "schur_power_law"],
        8 => &["dilation_round_trip", "dilation_unitarity"],
        9 => &["residual_coherence"],
        10 => &["classification_truth_table", "factorization_exact"],
        11 => &["povm_coherence_nonnegative", "povm_projective_reduction"],
        12 => &["schur_weak_majorization"],
        13 => &["permutation_covariance"],
        _ => &[],
    }
}

/// Runs every property and returns the reports sorted by name.
pub fn run(config: &VerifyConfig) -> SuiteReport {
    let run_one = |&(stream, check): &(u64, Check)| -> Vec<PropertyReport> {
        match check(config, stream) {
            Ok(probes) => probes
                .into_iter()
                .map(|(name, p)| PropertyReport {
                    name,
                    passed: p.passed(),
                    value: if p.nan { f64::NAN } else { p.value },
                    bound: p.bound,
                    checks: p.checks,
                    error: None,
                })
                .collect(),
            Err(e) => names_of(stream)
                .iter()
                .map(|&name| PropertyReport {
                    name,
                    passed: false,
                    value: f64::NAN,
                    bound: Bound::AtMost(0.0),
                    checks: 0,
                    error: Some(e.to_string()),
                })
                .collect(),
        }
    };
    let mut properties: Vec<PropertyReport> = if config.parallel {
        CHECKS.par_iter().flat_map_iter(run_one).collect()
    } else {
        CHECKS.iter().flat_map(run_one).collect()
    };
    properties.sort_by(|a, b| a.name.cmp(b.name));
    SuiteReport {
        seed: config.seed,
        properties,
    }
}

fn trial_rng(config: &VerifyConfig, stream: u64, trial: usize) -> InstanceRng {
    rng_from_seed(derive_seed(config.seed, stream, trial as u64))
}

fn random_dim(rng: &mut InstanceRng, config: &VerifyConfig, min: usize) -> usize {
    rng.random_range(min.min(config.dim_max())..=config.dim_max())
}

fn random_rank_state(rng: &mut InstanceRng, d: usize) -> Result<DensityMatrix<f64>> {
    let r = rng.random_range(1..=d);
    random_density_with(rng, d, r)
}

fn degenerate_observable(rng: &mut InstanceRng, d: usize) -> Result<Observable<f64>> {
    let profile = random_degenerate_profile(rng, d);
    random_observable_with(rng, d, &profile)
}

fn gio_schur(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut probe = Probe::at_most(1e-10);
    for t in 0..config.trials(100) {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let r = rng.random_range(1..=d);
        let ch: KrausChannel<f64> = random_gio_with(&mut rng, d, r);
        let c = correlation_matrix_of(&ch, &Basis::computational(d))?;
        let multiplier = if config.corrupt {
            c.entries().clone()
        } else {
            c.entries().transpose()
        };
        for _ in 0..5 {
            let rho = random_rank_state(&mut rng, d)?;
            let lhs = ch.apply(&rho)?;
            let rhs = multiplier.schur(rho.matrix())?;
            probe.record((lhs.matrix() - &rhs).hs_norm());
        }
    }
    Ok(vec![("gio_schur_equivalence", probe)])
}

fn unital_majorization(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut maj = Probe::at_most(1e-9);
    let mut ent = Probe::at_most(1e-9);
    for t in 0..config.trials(100) {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let ch: KrausChannel<f64> = if t % 2 == 0 {
            let r = rng.random_range(1..=d);
            random_gio_with(&mut rng, d, r)
        } else {
            let terms = rng.random_range(2..=4);
            random_unitary_mixture_with(&mut rng, d, terms)
        };
        let rho = random_rank_state(&mut rng, d)?;
        let out = ch.apply(&rho)?;
        maj.record(majorization_violation(&rho.eigenvalues(), &out.eigenvalues())?);
        ent.record(rho.entropy() - out.entropy());
    }
    Ok(vec![("unital_majorization", maj), ("unital_entropy_increase", ent)])
}

fn minimal_disturbance(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut dist = Probe::at_most(1e-12);
    let mut pyth = Probe::at_most(1e-8);
    for t in 0..config.trials(20) {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let obs = degenerate_observable(&mut rng, d)?;
        let rho = random_rank_state(&mut rng, d)?;
        let l = luders(&rho, &obs)?;
        let base = (rho.matrix() - l.matrix()).hs_norm();
        let s_rho_l = relative_entropy_psd(rho.matrix(), l.matrix(), DEFAULT_TOL)?;
        for _ in 0..200 {
            let sigma = random_block_diagonal_with(&mut rng, &obs);
            dist.record(base - (rho.matrix() - sigma.matrix()).hs_norm());
            let lhs = relative_entropy_psd(rho.matrix(), sigma.matrix(), DEFAULT_TOL)?;
            let rhs = s_rho_l + relative_entropy_psd(l.matrix(), sigma.matrix(), DEFAULT_TOL)?;
            pyth.record((lhs - rhs).abs());
        }
    }
    Ok(vec![("minimal_disturbance", dist), ("pythagorean_identity", pyth)])
}

fn hierarchy(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut order = Probe::at_most(1e-10);
    let mut gap = Probe::at_most(1e-8);
    let mut optimal = Probe::at_most(1e-8);
    for t in 0..config.trials(50) {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let obs = degenerate_observable(&mut rng, d)?;
        let rho = random_rank_state(&mut rng, d)?;
        let fg = random_fine_graining_with(&mut rng, &obs);
        let basis = fg.basis();
        let fine_l1 = c_l1(&rho, &basis)?;
        let fine_re = c_re(&rho, &basis)?;
        let coarse_l1 = c_l1_coarse(&rho, &obs, &fg)?;
        let coarse_re = c_re_coarse(&rho, &obs)?;
        order.record(coarse_l1 - fine_l1);
        order.record(coarse_re - fine_re);
        let g = hierarchy_gap(&rho, &obs, &fg)?;
        gap.record((g - (fine_re - coarse_re)).abs());
        let star = optimal_fine_grain(&obs, &rho)?;
        optimal.record(hierarchy_gap(&rho, &obs, &star)?.abs());
        optimal.record((c_re(&rho, &star.basis())? - coarse_re).abs());
        optimal.record((c_l1(&rho, &star.basis())? - c_l1_coarse(&rho, &obs, &star)?).abs());
    }
    Ok(vec![
        ("coherence_hierarchy", order),
        ("hierarchy_gap_identity", gap),
        ("optimal_fine_graining", optimal),
    ])
}

fn discord(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut identity = Probe::at_most(1e-8);
    let mut sum = Probe::at_most(1e-8);
    let mut branch = Probe::at_least(1e-3);
    let bipartite_b_max = if config.dim_max() >= 3 { 3 } else { 2 };
    for t in 0..config.trials(50) {
        let mut rng = trial_rng(config, stream, t);
        // Alternate qubit-qubit / qubit-qutrit and nondegenerate / degenerate R.
        let db = if t % 4 < 2 { 2 } else { bipartite_b_max };
        let profile: Vec<usize> = match (t % 2, db) {
            (0, _) => vec![1; db],
            (_, 2) => vec![2],
            (_, _) => vec![2, db - 2],
        };
        let obs = random_observable_with(&mut rng, db, &profile)?;
        let rho = random_rank_state(&mut rng, 2 * db)?;
        let state = BipartiteState::new((2, db), rho)?;
        let delta = luders_discord(&state, &obs)?;
        let qi = qi_coherence(&state, &obs)?;
        let local = c_re_coarse(&state.reduced(Subsystem::B), &obs)?;
        identity.record((delta - (qi - local)).abs());
        let j = classical_correlation(&state, &obs)?;
        sum.record((j + delta - state.mutual_information()).abs());
        if obs.degeneracies().iter().any(|&d| d > 1) {
            branch.record(branch_mutual_information(&state, &obs)?);
        }
    }
    Ok(vec![
        ("discord_identity", identity),
        ("classical_correlation_sum", sum),
        ("degenerate_branch_mutual_information", branch),
    ])
}

/// `Σ p_n I(ρAB_n)` over the branches of the local Lüders measurement.
fn branch_mutual_information(state: &BipartiteState<f64>, obs: &Observable<f64>) -> Result<f64> {
    let (da, _) = state.dims();
    let mut total = 0.0;
    for p in obs.projectors() {
        let lifted = M::identity(da).kron(p);
        let branch = lifted.sandwich(state.state().matrix())?.hermitian_part();
        let pn = branch.trace().re;
        if pn < 1e-12 {
            continue;
        }
        let cond = DensityMatrix::new(branch.scale_real(1.0 / pn), 1e-6)?;
        total += pn * BipartiteState::new(state.dims(), cond)?.mutual_information();
    }
    Ok(total)
}

fn fixed_points(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut dims = Probe::at_most(0.0);
    let mut fixed = Probe::at_most(1e-8);
    let mut ident = Probe::at_most(1e-10);
    let mut expansion = Probe::at_most(1e-10);
    let trials = config.trials(30);
    for t in 0..trials {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let r = rng.random_range(1..=d);
        let ch: KrausChannel<f64> = if t % 2 == 0 {
            random_grouped_gio_with(&mut rng, d, r)
        } else {
            random_gio_with(&mut rng, d, r)
        };
        let comm = commutant(&ch)?;
        let oracle = fixed_point_space(&ch)?;
        dims.record((comm.len() as f64 - oracle.len() as f64).abs());
        for x in &comm {
            fixed.record(fixed_point_check(&ch, x)?.fixedness);
        }
        // About 100 random operators in total, split over the channels.
        let per = 100usize.div_ceil(trials.max(1));
        for _ in 0..per {
            let coeffs: M = ginibre_with(&mut rng, comm.len(), 1);
            let mut x = M::zeros(d, d);
            for (k, basis_op) in comm.iter().enumerate() {
                x = &x + &basis_op.scale(coeffs[(k, 0)]);
            }
            ident.record(fixed_point_check(&ch, &x)?.identity);
            let free: M = ginibre_with(&mut rng, d, d);
            expansion.record(fixed_point_check(&ch, &free)?.expansion);
        }
    }
    Ok(vec![
        ("commutant_matches_fixed_points", dims),
        ("commutant_fixedness", fixed),
        ("commutator_identity", ident),
        ("commutator_expansion", expansion),
    ])
}

fn dephasing_limit(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    const STEPS: usize = 200;
    let bound = 0.9f64.powi(STEPS as i32);
    let mut limit = Probe::at_most(1e-12);
    let mut law = Probe::at_most(1e-9);
    for t in 0..config.trials(10) {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let ch: KrausChannel<f64> = random_contracting_gio_with(&mut rng, d, 0.9);
        let basis = Basis::computational(d);
        let c = correlation_matrix_of(&ch, &basis)?;
        let rho = random_rank_state(&mut rng, d)?;
        let traj = channels::trajectory(&ch, &basis, &rho, STEPS)?;
        for (n, state) in traj.iter().enumerate() {
            let exact = schur_power_law(&c, rho.matrix(), n);
            law.record((state.matrix() - &exact).hs_norm());
        }
        let last = traj.last().expect("non-empty trajectory");
        limit.record(last.matrix().max_offdiag_abs() - bound);
    }
    Ok(vec![("dephasing_limit", limit), ("schur_power_law", law)])
}

fn dilations(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut round = Probe::at_most(1e-10);
    let mut unitary = Probe::at_most(1e-8);
    let mut record = |model: &DilationModel<f64>, ch: &KrausChannel<f64>| -> Result<()> {
        round.record(extract_kraus(model)?.action_distance(ch)?);
        unitary.record(unitarity_residual(model.joint_unitary()));
        Ok(())
    };
    let dim_cap = config.dim_max().min(5);
    for t in 0..config.trials(10) {
        let mut rng = trial_rng(config, stream, t);
        let d = rng.random_range(2..=dim_cap);
        let comp = Basis::computational(d);

        let basis = random_basis_with(&mut rng, d);
        record(&dilate_von_neumann(&basis)?, &KrausChannel::complete_dephasing(&basis))?;

        let obs = degenerate_observable(&mut rng, d)?;
        let fg = FineGraining::canonical(&obs);
        record(&dilate_luders(&obs, &fg)?, &KrausChannel::luders(&obs))?;

        let r = rng.random_range(1..=d);
        let gio = random_gio_with(&mut rng, d, r);
        record(&dilate_gio(&gio, &comp)?, &gio)?;

        let sio = random_sio_with(&mut rng, d, 2);
        record(&dilate_sio(&sio, &comp)?, &sio)?;

        let io = random_io_with(&mut rng, d);
        record(&dilate_io(&io, &comp)?, &io)?;
    }
    Ok(vec![("dilation_round_trip", round), ("dilation_unitarity", unitary)])
}

fn residual_coherence(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut probe = Probe::at_most(1e-10);
    for t in 0..config.trials(30) {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let obs = degenerate_observable(&mut rng, d)?;
        let psi: DensityMatrix<f64> = random_pure_with(&mut rng, d);
        let theta = random_block_rotation_with(&mut rng, &obs);
        let inst = repeatable_instrument(&obs, &theta, 1e-8)?;
        let phi_basis = FineGraining::canonical(&obs).basis();
        let theta_basis = FineGraining::new(&obs, theta, 1e-6)?.basis();
        let a = luders(&psi, &obs)?;
        let b = inst.apply(&psi)?;
        probe.record((c_l1(&a, &phi_basis)? - c_l1(&b, &theta_basis)?).abs());
        probe.record((c_re(&a, &phi_basis)? - c_re(&b, &theta_basis)?).abs());
        probe.record((a.entropy() - b.entropy()).abs());
    }
    Ok(vec![("residual_coherence", probe)])
}

fn classification(_config: &VerifyConfig, _stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut table = Probe::at_most(0.0);
    let mut factor = Probe::at_most(0.0);
    let comp = Basis::computational(2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let relabel = KrausChannel::new(
        vec![
            M::from_real_rows(&[&[h, h], &[0.0, 0.0]]),
            M::from_real_rows(&[&[0.0, 0.0], &[h, -h]]),
        ],
        DEFAULT_TOL,
    )?;
    let cases = [
        (KrausChannel::complete_dephasing(&comp), IncoherenceClass::Gio),
        (bit_flip(0.3)?, IncoherenceClass::SioNotGio),
        (relabel, IncoherenceClass::IoNotSio),
    ];
    for (ch, expected) in &cases {
        let got = classify(ch, &comp)?;
        table.record(if got == *expected { 0.0 } else { 1.0 });
        for k in ch.kraus() {
            let f = factor_kraus(k, &comp)?;
            factor.record((&f.reconstruct() - k).max_abs());
        }
    }
    Ok(vec![
        ("classification_truth_table", table),
        ("factorization_exact", factor),
    ])
}

fn povm_coherences(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut nonneg = Probe::at_most(1e-10);
    let mut reduction = Probe::at_most(1e-10);
    for t in 0..config.trials(50) {
        let mut rng = trial_rng(config, stream, t);
        let d = 2 + t % 2;
        let outcomes = rng.random_range(2..=4);
        let povm: Povm<f64> = random_povm_with(&mut rng, d, outcomes)?;
        let rho = random_rank_state(&mut rng, d)?;
        nonneg.record(-povm_coherence(&rho, &povm)?);
        nonneg.record(-povm_coherence_modified(&rho, &povm)?);

        let basis = random_basis_with(&mut rng, d);
        let proj = Povm::from_observable(&Observable::from_basis(
            &basis,
            (0..d).map(|k| (d - k) as f64).collect(),
        )?);
        let cre = c_re(&rho, &basis)?;
        reduction.record((povm_coherence(&rho, &proj)? - cre).abs());
        reduction.record((povm_coherence_modified(&rho, &proj)? - cre).abs());
    }
    Ok(vec![
        ("povm_coherence_nonnegative", nonneg),
        ("povm_projective_reduction", reduction),
    ])
}

/// `λ(A∘B) ≺_w λ(A)∘diag(B)↓`, both sorted; full majorization when `B` has a
/// unit diagonal.
fn schur_majorization(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    let mut probe = Probe::at_most(1e-9);
    for t in 0..config.trials(50) {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let ga: M = ginibre_with(&mut rng, d, d);
        let gb: M = ginibre_with(&mut rng, d, d);
        let a = &ga * &ga.dagger();
        let b = &gb * &gb.dagger();
        let lambda_ab = crate::numerics::hermitian_eig(&a.schur(&b)?, 1e-8)?.values;
        let lambda_a = crate::numerics::hermitian_eig(&a, 1e-8)?.values;
        let mut diag_b = b.real_diagonal();
        diag_b.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
        let bound: Vec<f64> = lambda_a.iter().zip(&diag_b).map(|(x, y)| x * y).collect();
        let scale = bound.iter().sum::<f64>().max(1.0);
        let ok = weakly_majorizes(&bound, &lambda_ab, 1e-9 * scale)?;
        probe.record(if ok { 0.0 } else { 1.0 });
    }
    Ok(vec![("schur_weak_majorization", probe)])
}

fn permutation_covariance(config: &VerifyConfig, stream: u64) -> Result<Vec<(&'static str, Probe)>> {
    use rand::seq::SliceRandom;
    let mut probe = Probe::at_most(1e-12);
    for t in 0..config.trials(20) {
        let mut rng = trial_rng(config, stream, t);
        let d = random_dim(&mut rng, config, 2);
        let rho = random_rank_state(&mut rng, d)?;
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(&mut rng);
        let p = channels::IndexMap::new(perm)?.matrix::<f64>();
        let moved = DensityMatrix::new(p.sandwich(rho.matrix())?, 1e-8)?;
        let comp = Basis::computational(d);
        probe.record((c_l1(&moved, &comp)? - c_l1(&rho, &comp)?).abs());
        probe.record((c_re(&moved, &comp)? - c_re(&rho, &comp)?).abs());
    }
    Ok(vec![("permutation_covariance", probe)])
}
