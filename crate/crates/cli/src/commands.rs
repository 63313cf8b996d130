//! One function per subcommand. Each returns a [`Report`] holding the plain
//! text rendering and the JSON rendering of the same numbers.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use qcoherence::channels::{
    self, bit_flip, classify, correlation_matrix_of, factor_kraus, io_completeness_residual,
    phase_damping, random_channel_with, random_gio_with, random_io_with, random_sio_with,
    random_unitary_mixture_with, trajectory,
};
use qcoherence::coherence::{
    c_l1, c_l1_coarse, c_re, c_re_coarse, classical_correlation, hierarchy_gap, luders_discord,
    qi_coherence,
};
use qcoherence::dilation::{dilate_channel, round_trip_residual, unitarity_residual};
use qcoherence::instruments::{born_probabilities, luders, optimal_fine_grain};
use qcoherence::numerics::{Matrix as GMatrix, DEFAULT_TOL};
use qcoherence::qstate::range_residual;
use qcoherence::random::{
    random_basis_with, random_density_with, random_observable_with, random_povm_with,
    random_pure_with, rng_from_seed,
};
use qcoherence::verify::{self, Bound, VerifyConfig};
use qcoherence::{
    Basis, BipartiteState, DensityMatrix, FineGraining, IncoherenceClass, KrausChannel, Matrix,
    Observable, Subsystem,
};

use crate::format::{
    read_doc, write_doc, BasisDoc, ChannelDoc, DilationDoc, MatrixDoc, ObservableDoc, PovmDoc,
    StateDoc,
};
use crate::CliError;

/// Tolerance for deciding which eigenspace a fine-graining vector belongs to.
const MEMBERSHIP_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// Zero unless a property check failed.
    pub exit_code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            exit_code: 0,
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.json).expect("reports serialize") + "\n"
        } else {
            self.text.clone()
        }
    }
}

fn load_basis(path: Option<&Path>, dim: usize) -> Result<Basis, CliError> {
    let basis = match path {
        Some(p) => read_doc::<BasisDoc>(p)?.to_basis()?,
        None => Basis::computational(dim),
    };
    if basis.dim() != dim {
        return Err(CliError::Validation(format!(
            "basis has dimension {}, expected {dim}",
            basis.dim()
        )));
    }
    Ok(basis)
}

/// Drops the sign of values that print as zero at ten decimals.
fn shown(x: f64) -> f64 {
    if x.abs() < 5e-11 {
        0.0
    } else {
        x
    }
}

fn fmt_vec(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix(out: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                format!("{:>9.5}{:+.5}i", z.re, z.im)
            })
            .collect();
        let _ = writeln!(out, "  {}", row.join("  "));
    }
}

fn matrix_json(m: &Matrix) -> Value {
    serde_json::to_value(MatrixDoc::from_matrix(m)).expect("matrices serialize")
}

/// Groups the vectors of `basis` by the eigenspace of `obs` containing them.
pub fn fine_graining_from_basis(obs: &Observable, basis: &Basis) -> Result<FineGraining, CliError> {
    let mut blocks = vec![Vec::new(); obs.num_outcomes()];
    for v in basis.vectors() {
        let n = (0..obs.num_outcomes())
            .find(|&n| range_residual(obs.projector(n), &v) <= MEMBERSHIP_TOL)
            .ok_or_else(|| {
                CliError::Validation("fine-graining vector straddles eigenspaces".into())
            })?;
        blocks[n].push(v);
    }
    FineGraining::new(obs, blocks, MEMBERSHIP_TOL).map_err(CliError::validation)
}

/// Numbers reported by `measure`.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub probabilities: Vec<f64>,
    pub luders_image: DensityMatrix,
    pub fine_basis: Basis,
    pub c_l1: f64,
    pub c_re: f64,
    pub c_l1_fine: f64,
    pub c_re_fine: f64,
    pub gap: f64,
}

pub fn measurement(
    rho: &DensityMatrix,
    obs: &Observable,
    fine: Option<&Basis>,
) -> Result<Measurement, CliError> {
    if rho.dim() != obs.dim() {
        return Err(CliError::Validation(format!(
            "state has dimension {}, observable {}",
            rho.dim(),
            obs.dim()
        )));
    }
    let fg = match fine {
        Some(b) => fine_graining_from_basis(obs, b)?,
        None => optimal_fine_grain(obs, rho)?,
    };
    let fine_basis = fg.basis();
    Ok(Measurement {
        probabilities: born_probabilities(rho, obs)?,
        luders_image: luders(rho, obs)?,
        c_l1: c_l1_coarse(rho, obs, &fg)?,
        c_re: c_re_coarse(rho, obs)?,
        c_l1_fine: c_l1(rho, &fine_basis)?,
        c_re_fine: c_re(rho, &fine_basis)?,
        gap: hierarchy_gap(rho, obs, &fg)?,
        fine_basis,
    })
}

pub fn measure(state: &Path, observable: &Path, fine: Option<&Path>) -> Result<Report, CliError> {
    let rho = read_doc::<StateDoc>(state)?.to_state()?;
    let obs = read_doc::<ObservableDoc>(observable)?.to_observable()?;
    let fine = fine.map(|p| load_basis(Some(p), rho.dim())).transpose()?;
    let m = measurement(&rho, &obs, fine.as_ref())?;

    let mut text = String::new();
    let _ = writeln!(text, "outcomes        {}", obs.num_outcomes());
    let _ = writeln!(text, "eigenvalues     {}", fmt_vec(obs.eigenvalues()));
    let _ = writeln!(text, "probabilities   {}", fmt_vec(&m.probabilities));
    let _ = writeln!(text, "fine-graining   {}", if fine.is_some() { "given" } else { "optimal" });
    let _ = writeln!(text, "C_l1            {:.10}", shown(m.c_l1));
    let _ = writeln!(text, "C_re            {:.10}", shown(m.c_re));
    let _ = writeln!(text, "C_l1 (fine)     {:.10}", shown(m.c_l1_fine));
    let _ = writeln!(text, "C_re (fine)     {:.10}", shown(m.c_re_fine));
    let _ = writeln!(text, "hierarchy gap   {:.10}", shown(m.gap));
    let _ = writeln!(text, "Lüders image");
    fmt_matrix(&mut text, m.luders_image.matrix());

    let json = json!({
        "eigenvalues": obs.eigenvalues(),
        "probabilities": m.probabilities,
        "fine_graining": if fine.is_some() { "given" } else { "optimal" },
        "fine_basis": BasisDoc::from_basis(&m.fine_basis),
        "c_l1": m.c_l1,
        "c_re": m.c_re,
        "c_l1_fine": m.c_l1_fine,
        "c_re_fine": m.c_re_fine,
        "hierarchy_gap": m.gap,
        "luders_image": StateDoc::from_state(&m.luders_image, None),
    });
    Ok(Report::ok(text, json))
}

pub fn classify_channel(channel: &Path, basis: Option<&Path>) -> Result<Report, CliError> {
    let ch = read_doc::<ChannelDoc>(channel)?.to_channel()?;
    let basis = load_basis(basis, ch.dim())?;
    if !ch.is_trace_preserving() {
        return Err(CliError::Validation("channel is not trace preserving".into()));
    }
    let class = classify(&ch, &basis)?;

    let mut text = String::new();
    let _ = writeln!(text, "class           {class}");
    let mut json = json!({ "class": class.label(), "dim": ch.dim(), "kraus": ch.kraus().len() });

    if class == IncoherenceClass::Gio {
        let c = correlation_matrix_of(&ch, &basis)?;
        let _ = writeln!(text, "correlation matrix (rank {})", c.rank());
        fmt_matrix(&mut text, c.entries());
        json["correlation_matrix"] = matrix_json(c.entries());
    }

    if class.is_io() {
        let _ = writeln!(text, "factorization");
        let mut rows = Vec::new();
        for (n, k) in ch.kraus().iter().enumerate() {
            let f = factor_kraus(k, &basis)?;
            let kind = format!("{:?}", f.index_map.kind()).to_lowercase();
            let coeffs: Vec<[f64; 2]> = f.coefficients.iter().map(|z| [z.re, z.im]).collect();
            let shown: Vec<String> = f
                .coefficients
                .iter()
                .map(|z| format!("{:.5}{:+.5}i", z.re, z.im))
                .collect();
            let _ = writeln!(
                text,
                "  K{n}  {kind:<11} map {:?}  diag [{}]",
                f.index_map.map(),
                shown.join(", ")
            );
            rows.push(json!({
                "kind": kind,
                "map": f.index_map.map(),
                "diagonal": coeffs,
            }));
        }
        let residual = io_completeness_residual(&ch, &basis)?;
        let holds = residual <= DEFAULT_TOL;
        let _ = writeln!(
            text,
            "IO completeness {} (residual {residual:.3e} <= {DEFAULT_TOL:.1e})",
            if holds { "holds" } else { "violated" }
        );
        json["factorization"] = Value::Array(rows);
        json["io_completeness"] = json!({ "holds": holds, "residual": residual, "tolerance": DEFAULT_TOL });
    }
    Ok(Report::ok(text, json))
}

pub fn dilate(channel: &Path, out: &Path, basis: Option<&Path>) -> Result<Report, CliError> {
    let ch = read_doc::<ChannelDoc>(channel)?.to_channel()?;
    let basis = load_basis(basis, ch.dim())?;
    let (class, model) = dilate_channel(&ch, &basis)?;
    let residual = round_trip_residual(&model, &ch)?;
    let unitarity = unitarity_residual(model.joint_unitary());
    write_doc(out, &DilationDoc::from_model(&model))?;

    let mut text = String::new();
    let _ = writeln!(text, "class           {class}");
    let _ = writeln!(text, "system dim      {}", model.system_dim());
    let _ = writeln!(text, "ancilla dim     {}", model.ancilla_dim());
    let _ = writeln!(text, "round trip      {residual:.3e}");
    let _ = writeln!(text, "unitarity       {unitarity:.3e}");
    let mut json = json!({
        "class": class.label(),
        "system_dim": model.system_dim(),
        "ancilla_dim": model.ancilla_dim(),
        "round_trip_residual": residual,
        "unitarity_residual": unitarity,
        "model": out.display().to_string(),
    });

    if class == IncoherenceClass::Gio {
        // U = Σ |φ_n><φ_n| ⊗ U_n; list each apparatus block U_n.
        let r = model.ancilla_dim();
        let u = model.joint_unitary();
        let mut blocks = Vec::new();
        let _ = writeln!(text, "controlled-unitary blocks");
        for n in 0..ch.dim() {
            let phi = GMatrix::from_columns(&[basis.vector(n)]);
            let lift = phi.kron(&Matrix::identity(r));
            let block = &(&lift.dagger() * u) * &lift;
            let _ = writeln!(text, " U_{n}");
            fmt_matrix(&mut text, &block);
            blocks.push(matrix_json(&block));
        }
        json["controlled_blocks"] = Value::Array(blocks);
    }
    Ok(Report::ok(text, json))
}

/// One CSV row of `evolve`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub step: usize,
    pub max_offdiag: f64,
    pub entropy: f64,
}

pub fn trajectory_points(
    ch: &KrausChannel,
    basis: &Basis,
    rho: &DensityMatrix,
    steps: usize,
) -> Result<Vec<TrajectoryPoint>, CliError> {
    let states = trajectory(ch, basis, rho, steps)?;
    states
        .iter()
        .enumerate()
        .map(|(step, s)| {
            Ok(TrajectoryPoint {
                step,
                max_offdiag: basis.express(s.matrix())?.max_offdiag_abs(),
                entropy: s.entropy(),
            })
        })
        .collect()
}

pub fn evolve(
    channel: &Path,
    state: &Path,
    steps: usize,
    out: &Path,
    basis: Option<&Path>,
) -> Result<Report, CliError> {
    let ch = read_doc::<ChannelDoc>(channel)?.to_channel()?;
    let rho = read_doc::<StateDoc>(state)?.to_state()?;
    let basis = load_basis(basis, ch.dim())?;
    if rho.dim() != ch.dim() {
        return Err(CliError::Validation("state and channel dimensions differ".into()));
    }
    let points = trajectory_points(&ch, &basis, &rho, steps)?;
    let mut csv = String::from("step,max_offdiag,entropy\n");
    for p in &points {
        let _ = writeln!(csv, "{},{:e},{:e}", p.step, p.max_offdiag, p.entropy);
    }
    std::fs::write(out, csv).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    let last = points.last().expect("initial state is always present");
    let text = format!(
        "steps           {steps}\nfinal offdiag   {:.6e}\nfinal entropy   {:.10}\nwrote           {}\n",
        last.max_offdiag,
        last.entropy,
        out.display()
    );
    let json = json!({
        "steps": steps,
        "final_max_offdiag": last.max_offdiag,
        "final_entropy": last.entropy,
        "csv": out.display().to_string(),
    });
    Ok(Report::ok(text, json))
}

pub fn discord(state: &Path, observable: &Path) -> Result<Report, CliError> {
    let st = read_doc::<StateDoc>(state)?.to_bipartite()?;
    let obs = read_doc::<ObservableDoc>(observable)?.to_observable()?;
    let qi = qi_coherence(&st, &obs)?;
    let local = c_re_coarse(&st.reduced(Subsystem::B), &obs)?;
    let delta = luders_discord(&st, &obs)?;
    let j = classical_correlation(&st, &obs)?;
    let mi = st.mutual_information();
    let text = format!(
        "mutual information     {:.10}\nQI coherence           {:.10}\nlocal coherence (B)    {:.10}\nLüders discord         {:.10}\nclassical correlation  {:.10}\n",
        shown(mi),
        shown(qi),
        shown(local),
        shown(delta),
        shown(j)
    );
    let json = json!({
        "mutual_information": mi,
        "qi_coherence": qi,
        "local_coherence": local,
        "discord": delta,
        "classical_correlation": j,
    });
    Ok(Report::ok(text, json))
}

pub fn run_verify(config: &VerifyConfig) -> Report {
    let report = verify::run(config);
    let props: Vec<Value> = report
        .properties
        .iter()
        .map(|p| {
            let (kind, tol) = match p.bound {
                Bound::AtMost(t) => ("at_most", t),
                Bound::AtLeast(t) => ("at_least", t),
            };
            json!({
                "name": p.name,
                "passed": p.passed,
                "value": p.value,
                "bound": kind,
                "tolerance": tol,
                "checks": p.checks,
                "error": p.error,
            })
        })
        .collect();
    let json = json!({
        "seed": report.seed,
        "passed": report.all_passed(),
        "properties": props,
    });
    Report {
        text: report.to_string(),
        json,
        exit_code: if report.all_passed() { 0 } else { 1 },
    }
}

/// Object families emitted by `gen`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    State,
    Pure,
    Observable,
    Basis,
    Povm,
    Bipartite,
    Gio,
    Sio,
    Io,
    Unital,
    Channel,
    PhaseDamping,
    BitFlip,
    AmplitudeDamping,
    Dephasing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenOptions {
    pub kind: GenKind,
    pub seed: u64,
    pub dim: usize,
    /// Rank of states, Kraus count of random channels, outcomes of POVMs.
    pub rank: Option<usize>,
    /// Eigenspace dimensions of an observable.
    pub profile: Option<Vec<usize>>,
    /// Second factor of a bipartite state.
    pub dim_b: usize,
    /// Damping or flip probability.
    pub p: f64,
}

/// Writes one seeded instance. Random kinds draw from a ChaCha8 stream seeded
/// directly with `seed`.
pub fn gen(opts: &GenOptions, out: &Path) -> Result<Report, CliError> {
    let d = opts.dim;
    if d == 0 {
        return Err(CliError::Validation("dimension must be positive".into()));
    }
    let mut rng = rng_from_seed(opts.seed);
    let rank = opts.rank.unwrap_or(d);
    let chan = |ch: KrausChannel| serde_json::to_value(ChannelDoc::from_channel(&ch));
    let doc = match opts.kind {
        GenKind::State => serde_json::to_value(StateDoc::from_state(
            &random_density_with(&mut rng, d, rank)?,
            None,
        )),
        GenKind::Pure => serde_json::to_value(StateDoc::from_state(&random_pure_with(&mut rng, d), None)),
        GenKind::Bipartite => {
            let n = d * opts.dim_b;
            let rho = random_density_with(&mut rng, n, opts.rank.unwrap_or(n))?;
            BipartiteState::new((d, opts.dim_b), rho.clone())?;
            serde_json::to_value(StateDoc::from_state(&rho, Some([d, opts.dim_b])))
        }
        GenKind::Observable => {
            let profile = opts.profile.clone().unwrap_or_else(|| vec![1; d]);
            let obs = random_observable_with(&mut rng, d, &profile)?;
            serde_json::to_value(ObservableDoc::from_observable(&obs))
        }
        GenKind::Basis => serde_json::to_value(BasisDoc::from_basis(&random_basis_with(&mut rng, d))),
        GenKind::Povm => {
            let povm = random_povm_with(&mut rng, d, opts.rank.unwrap_or(3))?;
            serde_json::to_value(PovmDoc::from_povm(&povm))
        }
        GenKind::Gio => chan(random_gio_with(&mut rng, d, rank)),
        GenKind::Sio => chan(random_sio_with(&mut rng, d, rank)),
        GenKind::Io => chan(random_io_with(&mut rng, d)),
        GenKind::Unital => chan(random_unitary_mixture_with(&mut rng, d, rank)),
        GenKind::Channel => chan(random_channel_with(&mut rng, d, rank)),
        GenKind::PhaseDamping => chan(phase_damping(opts.p)?),
        GenKind::BitFlip => chan(bit_flip(opts.p)?),
        GenKind::AmplitudeDamping => chan(channels::amplitude_damping(opts.p)?),
        GenKind::Dephasing => chan(KrausChannel::complete_dephasing(&Basis::computational(d))),
    }
    .expect("documents serialize");
    write_doc(out, &doc)?;
    let kind = doc["type"].as_str().unwrap_or("object").to_string();
    Ok(Report::ok(
        format!("wrote {kind} to {}\n", out.display()),
        json!({ "type": kind, "path": out.display().to_string() }),
    ))
}
