use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use qcoherence::channels::phase_damping;
use qcoherence::coherence::{c_l1, c_l1_coarse, c_re, c_re_coarse, hierarchy_gap};
use qcoherence::instruments::{born_probabilities, optimal_fine_grain};
use qcoherence::numerics::basis_vector;
use qcoherence::{Complex, DensityMatrix, KrausChannel, Matrix, Observable};
use qcoherence_cli::format::{read_doc, write_doc, ChannelDoc, DilationDoc, ObservableDoc, StateDoc};

fn qcoh(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcoh"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_of(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json report")
}

struct Scratch {
    dir: tempfile::TempDir,
}

impl Scratch {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        qcoh(args, self.dir.path())
    }

    fn state(&self, name: &str, rho: &DensityMatrix, dims: Option<[usize; 2]>) -> String {
        write_doc(&self.path(name), &StateDoc::from_state(rho, dims)).unwrap();
        name.to_string()
    }

    fn observable(&self, name: &str, obs: &Observable) -> String {
        write_doc(&self.path(name), &ObservableDoc::from_observable(obs)).unwrap();
        name.to_string()
    }

    fn channel(&self, name: &str, ch: &KrausChannel) -> String {
        write_doc(&self.path(name), &ChannelDoc::from_channel(ch)).unwrap();
        name.to_string()
    }
}

fn plus() -> DensityMatrix {
    DensityMatrix::maximally_coherent(2)
}

fn real(rows: &[&[f64]]) -> Matrix {
    Matrix::from_real_rows(rows)
}

#[test]
fn measure_plus_state_against_z() {
    let s = Scratch::new();
    let st = s.state("plus.json", &plus(), None);
    let ob = s.observable("z.json", &Observable::pauli_z());
    let j = json_of(&s.run(&["measure", "--state", &st, "--observable", &ob, "--json"]));
    assert!((j["c_l1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((j["c_re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let text = stdout(&s.run(&["measure", "--state", &st, "--observable", &ob]));
    assert!(text.contains("C_l1            1.0000000000"));
}

#[test]
fn measure_commuting_pair_is_incoherent() {
    let s = Scratch::new();
    let st = s.state("one.json", &DensityMatrix::pure(&basis_vector(2, 1)), None);
    let ob = s.observable("z.json", &Observable::pauli_z());
    let j = json_of(&s.run(&["measure", "--state", &st, "--observable", &ob, "--json"]));
    for key in ["c_l1", "c_re", "hierarchy_gap"] {
        assert!(j[key].as_f64().unwrap().abs() < 1e-12, "{key}");
    }
}

#[test]
fn measure_matches_library_bit_for_bit() {
    let s = Scratch::new();
    assert!(s.run(&["gen", "state", "--dim", "4", "--seed", "11", "--out", "s.json"]).status.success());
    assert!(s
        .run(&["gen", "observable", "--dim", "4", "--profile", "2,1,1", "--seed", "12", "--out", "o.json"])
        .status
        .success());
    let j = json_of(&s.run(&["measure", "--state", "s.json", "--observable", "o.json", "--json"]));

    let rho = read_doc::<StateDoc>(&s.path("s.json")).unwrap().to_state().unwrap();
    let obs = read_doc::<ObservableDoc>(&s.path("o.json")).unwrap().to_observable().unwrap();
    let fg = optimal_fine_grain(&obs, &rho).unwrap();
    let probs: Vec<f64> = j["probabilities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(probs, born_probabilities(&rho, &obs).unwrap());
    assert_eq!(j["c_l1"].as_f64().unwrap(), c_l1_coarse(&rho, &obs, &fg).unwrap());
    assert_eq!(j["c_re"].as_f64().unwrap(), c_re_coarse(&rho, &obs).unwrap());
    assert_eq!(j["c_l1_fine"].as_f64().unwrap(), c_l1(&rho, &fg.basis()).unwrap());
    assert_eq!(j["c_re_fine"].as_f64().unwrap(), c_re(&rho, &fg.basis()).unwrap());
    assert_eq!(j["hierarchy_gap"].as_f64().unwrap(), hierarchy_gap(&rho, &obs, &fg).unwrap());
}

#[test]
fn measure_with_given_fine_graining() {
    let s = Scratch::new();
    let obs = Observable::from_projectors(
        vec![1.0, 0.0],
        vec![real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]), real(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0]])],
        1e-9,
    )
    .unwrap();
    let ob = s.observable("r.json", &obs);
    let st = s.state("m.json", &DensityMatrix::maximally_coherent(3), None);
    std::fs::write(
        s.path("fg.json"),
        r#"{"type":"basis","vectors":[[[0,0],[0,0],[1,0]],[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]]]}"#,
    )
    .unwrap();
    let j = json_of(&s.run(&[
        "measure", "--state", &st, "--observable", &ob, "--fine-grain", "fg.json", "--json",
    ]));
    // Coarse l1 counts only the four entries between the blocks.
    assert!((j["c_l1"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
    assert!((j["c_l1_fine"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(j["hierarchy_gap"].as_f64().unwrap() > 0.5);
    assert_eq!(j["fine_graining"], "given");
}

#[test]
fn classify_phase_damping_prints_correlation_matrix() {
    let s = Scratch::new();
    let ch = s.channel("pd.json", &phase_damping(0.8).unwrap());
    let j = json_of(&s.run(&["classify", "--channel", &ch, "--json"]));
    assert_eq!(j["class"], "GIO");
    let c: qcoherence_cli::format::MatrixDoc =
        serde_json::from_value(j["correlation_matrix"].clone()).unwrap();
    let c = c.to_matrix().unwrap();
    assert!((c[(0, 1)].re - (2.0 * 0.8 - 1.0)).abs() < 1e-12);
    assert!(j["io_completeness"]["holds"].as_bool().unwrap());
}

#[test]
fn classify_bit_flip_reports_swap() {
    let s = Scratch::new();
    assert!(s.run(&["gen", "bit-flip", "--p", "0.3", "--out", "bf.json"]).status.success());
    let j = json_of(&s.run(&["classify", "--channel", "bf.json", "--json"]));
    assert_eq!(j["class"], "SIO-not-GIO");
    let maps: Vec<Value> = j["factorization"].as_array().unwrap().iter().map(|r| r["map"].clone()).collect();
    assert!(maps.contains(&serde_json::json!([1, 0])));
}

#[test]
fn classify_amplitude_damping_is_sio() {
    // Both operators have at most one nonzero per row and column, so the
    // second one is a permutation with a zero column, not a true relabeling.
    let s = Scratch::new();
    assert!(s.run(&["gen", "amplitude-damping", "--p", "0.3", "--out", "ad.json"]).status.success());
    let j = json_of(&s.run(&["classify", "--channel", "ad.json", "--json"]));
    assert_eq!(j["class"], "SIO-not-GIO");
}

#[test]
fn classify_relabeling_channel_is_io() {
    let s = Scratch::new();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ch = KrausChannel::new(
        vec![real(&[&[h, h], &[0.0, 0.0]]), real(&[&[0.0, 0.0], &[h, -h]])],
        1e-9,
    )
    .unwrap();
    let f = s.channel("reset.json", &ch);
    let j = json_of(&s.run(&["classify", "--channel", &f, "--json"]));
    assert_eq!(j["class"], "IO-not-SIO");
    let kinds: Vec<&str> = j["factorization"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"relabeling"));
}

#[test]
fn classify_in_a_rotated_basis() {
    let s = Scratch::new();
    let f = s.channel("pd.json", &phase_damping(0.7).unwrap());
    std::fs::write(
        s.path("x.json"),
        r#"{"type":"basis","vectors":[[[0.7071067811865476,0],[0.7071067811865476,0]],[[0.7071067811865476,0],[-0.7071067811865476,0]]]}"#,
    )
    .unwrap();
    let j = json_of(&s.run(&["classify", "--channel", &f, "--basis", "x.json", "--json"]));
    assert_eq!(j["class"], "SIO-not-GIO");
}

#[test]
fn dilate_luders_channel_round_trips() {
    let s = Scratch::new();
    let obs = Observable::from_projectors(
        vec![1.0, -1.0],
        vec![real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]), real(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0]])],
        1e-9,
    )
    .unwrap();
    let f = s.channel("l.json", &KrausChannel::luders(&obs));
    let j = json_of(&s.run(&["dilate", "--channel", &f, "--out", "model.json", "--json"]));
    assert!(j["round_trip_residual"].as_f64().unwrap() <= 1e-10);
    let model = read_doc::<DilationDoc>(&s.path("model.json")).unwrap().to_model().unwrap();
    assert_eq!(model.system_dim(), 3);
}

#[test]
fn dilate_gio_lists_controlled_blocks() {
    let s = Scratch::new();
    assert!(s.run(&["gen", "gio", "--dim", "3", "--rank", "2", "--seed", "5", "--out", "g.json"]).status.success());
    let out = s.run(&["dilate", "--channel", "g.json", "--out", "model.json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("controlled-unitary blocks"));
    assert!(text.contains(" U_0") && text.contains(" U_2"));
    let j = json_of(&s.run(&["dilate", "--channel", "g.json", "--out", "model.json", "--json"]));
    assert_eq!(j["controlled_blocks"].as_array().unwrap().len(), 3);
    assert!(j["round_trip_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn dilate_identity_is_trivial() {
    let s = Scratch::new();
    let f = s.channel("id.json", &KrausChannel::identity(2));
    let j = json_of(&s.run(&["dilate", "--channel", &f, "--out", "model.json", "--json"]));
    assert_eq!(j["class"], "GIO");
    let model = read_doc::<DilationDoc>(&s.path("model.json")).unwrap().to_model().unwrap();
    let a0 = model.apparatus_init().to_vec();
    let psi = vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)];
    let joint = qcoherence::dilation::premeasure(&model, &psi).unwrap();
    let expected = qcoherence::numerics::kron_vec(&psi, &a0);
    let err: f64 = joint.iter().zip(&expected).map(|(a, b)| (a - b).norm()).sum();
    assert!(err < 1e-12);
}

#[test]
fn dilate_rejects_non_io_channel() {
    let s = Scratch::new();
    assert!(s.run(&["gen", "unital", "--dim", "2", "--rank", "2", "--seed", "1", "--out", "u.json"]).status.success());
    let out = s.run(&["dilate", "--channel", "u.json", "--out", "m.json"]);
    assert_eq!(out.status.code(), Some(3));
}

fn read_csv(path: &Path) -> Vec<(usize, f64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,max_offdiag,entropy"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn evolve_phase_damping_follows_power_law() {
    let s = Scratch::new();
    let ch = s.channel("pd.json", &phase_damping(0.75).unwrap());
    let st = s.state("plus.json", &plus(), None);
    let out = s.run(&["evolve", "--channel", &ch, "--state", &st, "--steps", "10", "--out", "t.csv"]);
    assert!(out.status.success());
    let rows = read_csv(&s.path("t.csv"));
    assert_eq!(rows.len(), 11);
    let last = rows[10].1;
    assert!((last - 4.8828125e-4).abs() < 1e-15, "{last}");
    assert!(rows.windows(2).all(|w| w[1].2 >= w[0].2 - 1e-12));
    assert!(rows.windows(2).all(|w| (w[1].1 - 0.5 * w[0].1).abs() < 1e-15));
}

#[test]
fn evolve_complete_dephasing_settles_after_one_step() {
    let s = Scratch::new();
    assert!(s.run(&["gen", "dephasing", "--dim", "3", "--out", "d.json"]).status.success());
    assert!(s.run(&["gen", "state", "--dim", "3", "--seed", "9", "--out", "s.json"]).status.success());
    assert!(s
        .run(&["evolve", "--channel", "d.json", "--state", "s.json", "--steps", "3", "--out", "t.csv"])
        .status
        .success());
    let rows = read_csv(&s.path("t.csv"));
    assert!(rows[0].1 > 0.0);
    for r in &rows[1..] {
        assert_eq!(r.1, 0.0);
        assert_eq!(r.2, rows[1].2);
    }
}

#[test]
fn evolve_identity_is_constant() {
    let s = Scratch::new();
    let ch = s.channel("id.json", &KrausChannel::identity(2));
    let st = s.state("plus.json", &plus(), None);
    assert!(s
        .run(&["evolve", "--channel", &ch, "--state", &st, "--steps", "4", "--out", "t.csv"])
        .status
        .success());
    let rows = read_csv(&s.path("t.csv"));
    assert!(rows.iter().all(|r| r.1 == rows[0].1 && r.2 == rows[0].2));
}

#[test]
fn evolve_rejects_non_gio() {
    let s = Scratch::new();
    assert!(s.run(&["gen", "bit-flip", "--out", "bf.json"]).status.success());
    let st = s.state("plus.json", &plus(), None);
    let out = s.run(&["evolve", "--channel", "bf.json", "--state", &st, "--out", "t.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("genuinely incoherent"));
}

#[test]
fn discord_of_bell_state() {
    let s = Scratch::new();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = vec![Complex::new(h, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(h, 0.0)];
    let st = s.state("bell.json", &DensityMatrix::pure(&bell), Some([2, 2]));
    let ob = s.observable("z.json", &Observable::pauli_z());
    let j = json_of(&s.run(&["discord", "--state", &st, "--observable", &ob, "--json"]));
    for (key, want) in [
        ("mutual_information", 2.0),
        ("qi_coherence", 1.0),
        ("local_coherence", 0.0),
        ("discord", 1.0),
        ("classical_correlation", 1.0),
    ] {
        assert!((j[key].as_f64().unwrap() - want).abs() < 1e-9, "{key}");
    }
}

#[test]
fn discord_needs_dims() {
    let s = Scratch::new();
    let st = s.state("flat.json", &DensityMatrix::maximally_mixed(4), None);
    let ob = s.observable("z.json", &Observable::pauli_z());
    let out = s.run(&["discord", "--state", &st, "--observable", &ob]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_and_validation_exit_codes() {
    let s = Scratch::new();
    std::fs::write(s.path("broken.json"), "{ not json").unwrap();
    assert_eq!(s.run(&["classify", "--channel", "broken.json"]).status.code(), Some(2));
    assert_eq!(s.run(&["classify", "--channel", "missing.json"]).status.code(), Some(2));
    // Trace two is not a state.
    std::fs::write(
        s.path("big.json"),
        r#"{"type":"state","matrix":{"type":"matrix","dim":[2,2],"entries":[[1,0],[0,0],[0,0],[1,0]]}}"#,
    )
    .unwrap();
    let ob = s.observable("z.json", &Observable::pauli_z());
    assert_eq!(s.run(&["measure", "--state", "big.json", "--observable", &ob]).status.code(), Some(3));
    // Kraus operators that overshoot the identity.
    let k = real(&[&[2.0, 0.0], &[0.0, 1.0]]);
    std::fs::write(
        s.path("over.json"),
        serde_json::to_string(&serde_json::json!({
            "type": "channel",
            "kraus": [qcoherence_cli::format::MatrixDoc::from_matrix(&k)]
        }))
        .unwrap(),
    )
    .unwrap();
    assert_eq!(s.run(&["classify", "--channel", "over.json"]).status.code(), Some(3));
    assert_eq!(s.run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let s = Scratch::new();
    for name in ["a.json", "b.json"] {
        assert!(s.run(&["gen", "io", "--dim", "4", "--seed", "77", "--out", name]).status.success());
    }
    let a = std::fs::read(s.path("a.json")).unwrap();
    assert_eq!(a, std::fs::read(s.path("b.json")).unwrap());
    let ch = read_doc::<ChannelDoc>(&s.path("a.json")).unwrap().to_channel().unwrap();
    assert!(ch.is_trace_preserving());
}

#[test]
fn verify_corrupt_names_the_broken_property() {
    let s = Scratch::new();
    let out = s.run(&["verify", "--corrupt", "--trials", "3", "--dim-max", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let failing: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1);
    assert!(failing[0].contains("gio_schur_equivalence"));
}

#[test]
fn verify_json_lists_every_property_with_tolerance() {
    let s = Scratch::new();
    let j = json_of(&s.run(&["verify", "--trials", "2", "--dim-max", "3", "--json"]));
    assert_eq!(j["passed"], true);
    let props = j["properties"].as_array().unwrap();
    assert!(props.len() >= 20);
    assert!(props.iter().all(|p| p["tolerance"].as_f64().unwrap() >= 0.0));
    let names: Vec<&str> = props.iter().map(|p| p["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}
