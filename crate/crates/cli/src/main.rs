use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qcoherence::verify::VerifyConfig;
use qcoherence_cli::commands::{self, GenKind, GenOptions, Report};
use qcoherence_cli::CliError;

/// Coherence, discord and incoherent-channel analysis of finite-dimensional
/// quantum states.
#[derive(Parser)]
#[command(name = "qcoh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lüders measurement report: probabilities, image, coherences, gap.
    Measure {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        /// Basis file refining the observable's eigenspaces.
        #[arg(long, conflicts_with = "optimal")]
        fine_grain: Option<PathBuf>,
        /// Use the state-dependent optimal fine-graining (the default).
        #[arg(long)]
        optimal: bool,
        #[arg(long)]
        json: bool,
    },
    /// GIO / SIO / IO classification with factorization table.
    Classify {
        #[arg(long)]
        channel: PathBuf,
        /// Reference basis file; computational basis if absent.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Build a system-apparatus dilation and write it to a file.
    Dilate {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Iterate a GIO and write (step, max off-diagonal, entropy) as CSV.
    Evolve {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// QI coherence, Lüders discord and classical correlation of a
    /// bipartite state measured on B.
    Discord {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the seeded property suite.
    Verify {
        #[arg(long, default_value_t = VerifyConfig::default().seed)]
        seed: u64,
        /// Trials per property; each property's default if absent.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = VerifyConfig::default().dim_max)]
        dim_max: usize,
        /// Negative control: break one identity on purpose.
        #[arg(long)]
        corrupt: bool,
        /// Run properties one after another instead of in parallel.
        #[arg(long)]
        serial: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write a seeded random or standard instance to a file.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// State rank, Kraus count or POVM outcome count.
        #[arg(long)]
        rank: Option<usize>,
        /// Eigenspace dimensions of an observable, e.g. 2,1.
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<usize>>,
        /// Dimension of subsystem B for bipartite states.
        #[arg(long, default_value_t = 2)]
        dim_b: usize,
        /// Channel parameter for the standard qubit channels.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
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

impl From<Kind> for GenKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::State => GenKind::State,
            Kind::Pure => GenKind::Pure,
            Kind::Observable => GenKind::Observable,
            Kind::Basis => GenKind::Basis,
            Kind::Povm => GenKind::Povm,
            Kind::Bipartite => GenKind::Bipartite,
            Kind::Gio => GenKind::Gio,
            Kind::Sio => GenKind::Sio,
            Kind::Io => GenKind::Io,
            Kind::Unital => GenKind::Unital,
            Kind::Channel => GenKind::Channel,
            Kind::PhaseDamping => GenKind::PhaseDamping,
            Kind::BitFlip => GenKind::BitFlip,
            Kind::AmplitudeDamping => GenKind::AmplitudeDamping,
            Kind::Dephasing => GenKind::Dephasing,
        }
    }
}

fn dispatch(command: Command) -> Result<(Report, bool), CliError> {
    Ok(match command {
        Command::Measure {
            state,
            observable,
            fine_grain,
            optimal: _,
            json,
        } => (commands::measure(&state, &observable, fine_grain.as_deref())?, json),
        Command::Classify { channel, basis, json } => {
            (commands::classify_channel(&channel, basis.as_deref())?, json)
        }
        Command::Dilate {
            channel,
            out,
            basis,
            json,
        } => (commands::dilate(&channel, &out, basis.as_deref())?, json),
        Command::Evolve {
            channel,
            state,
            steps,
            out,
            basis,
            json,
        } => (
            commands::evolve(&channel, &state, steps, &out, basis.as_deref())?,
            json,
        ),
        Command::Discord {
            state,
            observable,
            json,
        } => (commands::discord(&state, &observable)?, json),
        Command::Verify {
            seed,
            trials,
            dim_max,
            corrupt,
            serial,
            json,
        } => {
            let config = VerifyConfig {
                seed,
                trials,
                dim_max,
                corrupt,
                parallel: !serial,
            };
            (commands::run_verify(&config), json)
        }
        Command::Gen {
            kind,
            seed,
            dim,
            rank,
            profile,
            dim_b,
            p,
            out,
        } => {
            let opts = GenOptions {
                kind: kind.into(),
                seed,
                dim,
                rank,
                profile,
                dim_b,
                p,
            };
            (commands::gen(&opts, &out)?, false)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok((report, json)) => {
            print!("{}", report.render(json));
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("qcoh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
