use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use secret_states::distill::{self, check_private_state, MeasurementOutcome};
use secret_states::entanglement::{enumerate_splits, negativity_report, BipartiteSplit};
use secret_states::linalg::random::random_density_matrix;
use secret_states::linalg::{haar_unitary_with, seeded_rng};
use secret_states::statefile::StateFile;
use secret_states::states::{
    inner_layout, make_even_parity_state, make_example_state, make_private_state, make_werner,
    SecretSharingInstance, WernerKind,
};
use secret_states::verifier::{self, default_chain, VerificationReport};
use secret_states::{DensityMatrix, Error};
use serde_json::json;

mod demo;

const SEED_VAR: &str = "SECRET_STATES_SEED";

#[derive(Parser)]
#[command(
    name = "sss",
    version,
    about = "Construct, verify and reduce multipartite secret-sharing states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a state and write it to a state file
    Construct(ConstructArgs),
    /// Decide whether a state file holds a secret-sharing state
    Verify(VerifyArgs),
    /// CNOT from `control` to `target`, then measure `control`
    Reduce(ReduceArgs),
    /// Partial-transpose negativity across bipartite splits
    Negativity(NegativityArgs),
    /// Reproduce the Werner-flag example end to end
    Demo {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Random 3-party state with a joint inner system
    Eq1Random,
    /// Random n-party state with a joint inner system
    Eq2Random,
    /// One of the four even-parity 3-qubit pure states
    EvenParityPure,
    /// Werner-flag example state
    Example,
    /// Extreme Werner state on two d-level systems
    Werner,
    /// Random private state on register A, B
    Private,
}

#[derive(Args)]
struct ConstructArgs {
    kind: Kind,
    #[arg(long)]
    out: PathBuf,
    /// Falls back to $SECRET_STATES_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 2)]
    inner_dim: usize,
    #[arg(long, default_value_t = 4)]
    parties: usize,
    #[arg(long, default_value_t = 0.25)]
    a1: f64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Even-parity state index 0..4
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, value_enum, default_value_t = Symmetry::Symmetric)]
    symmetry: Symmetry,
}

#[derive(Clone, Copy, ValueEnum)]
enum Symmetry {
    Symmetric,
    Antisymmetric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Block,
    Semantic,
    Both,
}

#[derive(Args)]
struct VerifyArgs {
    path: PathBuf,
    #[arg(long, default_value_t = verifier::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = VerifyMode::Both)]
    mode: VerifyMode,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReduceArgs {
    path: PathBuf,
    #[arg(long)]
    control: String,
    #[arg(long)]
    target: String,
    /// Branch `r` is written to `<prefix>.<r>.json`
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Args)]
struct NegativityArgs {
    path: PathBuf,
    /// Comma-separated subsystem labels on one side, e.g. `A,A'`
    #[arg(
        long,
        conflicts_with = "all_splits",
        required_unless_present = "all_splits"
    )]
    split: Option<String>,
    #[arg(long)]
    all_splits: bool,
    /// Allow splits that separate a party's subsystems
    #[arg(long)]
    raw: bool,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Io(_)) { 3 } else { 2 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(args) => construct(&args),
        Command::Verify(args) => verify(&args),
        Command::Reduce(args) => reduce(&args),
        Command::Negativity(args) => negativity(&args),
        Command::Demo { json } => demo::run(json),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_VAR}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn construct(args: &ConstructArgs) -> CmdResult {
    let seed = resolve_seed(args.seed)?;
    let mut rng = seeded_rng(seed);
    let kind = args
        .kind
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let mut meta = vec![("kind", json!(kind))];
    let rho = match args.kind {
        Kind::Eq1Random | Kind::Eq2Random => {
            let n = if matches!(args.kind, Kind::Eq1Random) {
                3
            } else {
                args.parties
            };
            if n < 2 {
                return Err(usage(format!("--parties must be at least 2, got {n}")));
            }
            if args.inner_dim == 0 {
                return Err(usage("--inner-dim must be positive"));
            }
            meta.extend([
                ("seed", json!(seed)),
                ("parties", json!(n)),
                ("inner_dim", json!(args.inner_dim)),
            ]);
            SecretSharingInstance::random(n, args.inner_dim, &mut rng)?.state
        }
        Kind::EvenParityPure => {
            meta.push(("index", json!(args.index)));
            make_even_parity_state(args.index)?.projector()
        }
        Kind::Example => {
            meta.extend([("a1", json!(args.a1)), ("d", json!(args.d))]);
            make_example_state(args.a1, 0.5 - args.a1, args.d)?
        }
        Kind::Werner => {
            let kind = match args.symmetry {
                Symmetry::Symmetric => WernerKind::Symmetric,
                Symmetry::Antisymmetric => WernerKind::Antisymmetric,
            };
            meta.push(("d", json!(args.d)));
            let w = make_werner(args.d, kind)?;
            let (m, layout) = w.into_parts();
            let owned = layout
                .subsystems()
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.party = Some(s.label.clone());
                    s
                })
                .collect();
            DensityMatrix::new(m, secret_states::linalg::SystemLayout::new(owned)?)?
        }
        Kind::Private => {
            if args.inner_dim == 0 {
                return Err(usage("--inner-dim must be positive"));
            }
            meta.extend([("seed", json!(seed)), ("inner_dim", json!(args.inner_dim))]);
            let k = args.inner_dim;
            let rank = rng.gen_range(1..=k);
            let inner =
                DensityMatrix::new(random_density_matrix(k, rank, &mut rng), inner_layout(k))?;
            let u0 = haar_unitary_with(k, &mut rng);
            let u1 = haar_unitary_with(k, &mut rng);
            make_private_state(&inner, &u0, &u1)?
        }
    };
    let mut file = StateFile::from_state(&rho);
    for (k, v) in meta {
        file = file.with_metadata(k, v);
    }
    file.write(&args.out)?;
    println!(
        "wrote {} ({}, dim {})",
        args.out.display(),
        layout_summary(&rho),
        rho.dim()
    );
    Ok(true)
}

fn layout_summary(rho: &DensityMatrix) -> String {
    rho.layout()
        .subsystems()
        .iter()
        .map(|s| match &s.party {
            Some(p) if p != &s.label => format!("{}:{}@{}", s.label, s.dim, p),
            _ => format!("{}:{}", s.label, s.dim),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn load(path: &Path) -> Result<DensityMatrix, Failure> {
    Ok(StateFile::read(path)?.to_state()?)
}

fn register_of(rho: &DensityMatrix) -> Result<Vec<String>, Failure> {
    let register: Vec<String> = rho
        .layout()
        .register()
        .into_iter()
        .map(String::from)
        .collect();
    if register.len() < 2 {
        return Err(usage(format!(
            "state has {} register qubit(s); at least 2 are needed",
            register.len()
        )));
    }
    Ok(register)
}

fn verify(args: &VerifyArgs) -> CmdResult {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let rho = load(&args.path)?;
    let register = register_of(&rho)?;
    let mut reports = Vec::new();
    if args.mode != VerifyMode::Semantic {
        let chain = default_chain(register.len())?;
        reports.push(verifier::check_block_criterion(
            &rho, &register, &chain, args.tol,
        )?);
    }
    if args.mode != VerifyMode::Block {
        reports.push(verifier::verify_secret_sharing(&rho, &register, args.tol)?);
    }
    let accepted = reports.iter().all(|r| r.accepted);
    let agree = reports.windows(2).all(|w| w[0].accepted == w[1].accepted);
    if args.json {
        let out = json!({
            "register": register,
            "accepted": accepted,
            "verdicts_agree": agree,
            "reports": reports,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("report serializes")
        );
    } else {
        println!("register: {}", register.join(","));
        for r in &reports {
            print_report(r);
        }
        if !agree {
            println!("WARNING: block and semantic verdicts disagree");
        }
        println!("verdict: {}", if accepted { "ACCEPT" } else { "REJECT" });
    }
    Ok(accepted)
}

fn print_report(r: &VerificationReport) {
    println!("[{:?}] n={} tol={:e}", r.mode, r.n, r.tolerance);
    println!(
        "  statistics (target {} on even parity):",
        verifier::uniform_weight(r.n)
    );
    for (i, p) in &r.statistics {
        if i.is_even() || p.abs() > r.tolerance {
            println!("    p_{i} = {p:.12}");
        }
    }
    println!("  statistics violation {:.3e}", r.statistics_violation);
    println!("  support violation    {:.3e}", r.support_violation);
    if !r.block_norms.is_empty() {
        println!("  chain block norms:");
        for b in &r.block_norms {
            println!(
                "    ||X_{},{}||_1 = {:.12} (deviation {:.3e})",
                b.pair.0, b.pair.1, b.norm, b.deviation
            );
        }
    }
    if !r.eve_fidelities.is_empty() {
        let worst = r
            .eve_fidelities
            .iter()
            .min_by(|a, b| a.fidelity.total_cmp(&b.fidelity))
            .expect("non-empty");
        println!(
            "  min Eve fidelity {:.12} at ({},{})",
            worst.fidelity, worst.pair.0, worst.pair.1
        );
    }
    if let Some(note) = &r.note {
        println!("  note: {note}");
    }
    println!("  {}", if r.accepted { "accepted" } else { "rejected" });
}

fn reduce(args: &ReduceArgs) -> CmdResult {
    let rho = load(&args.path)?;
    let register = register_of(&rho)?;
    for label in [&args.control, &args.target] {
        if !register.contains(label) {
            return Err(usage(format!(
                "`{label}` is not a register qubit of this state"
            )));
        }
    }
    let branches: Vec<MeasurementOutcome> = if register.len() == 3 {
        if args.control != register[1] || args.target != register[2] {
            let after = distill::apply_cnot(&rho, &args.control, &args.target)?;
            distill::measure_computational(&after, &args.control)?
        } else {
            distill::reduce_to_private(&rho)?
        }
    } else if register.len() >= 4 {
        distill::reduce_n_party(&rho, &args.control, &args.target)?
    } else {
        return Err(usage("reduction needs at least 3 register qubits"));
    };
    let mut total = 0.0;
    for b in &branches {
        total += b.probability;
        let path = branch_path(&args.out_prefix, b.result);
        StateFile::from_state(&b.post_state)
            .with_metadata("source", args.path.display().to_string())
            .with_metadata("control", args.control.as_str())
            .with_metadata("target", args.target.as_str())
            .with_metadata("result", b.result)
            .with_metadata("probability", b.probability)
            .write(&path)?;
        let reg = b.post_state.layout().register();
        let status = if reg.len() == 2 {
            let c = check_private_state(&b.post_state, 1e-8, 1e-10)?;
            format!(
                "private-state check {}",
                if c.accepted { "passed" } else { "FAILED" }
            )
        } else {
            let r = verifier::verify_secret_sharing(&b.post_state, &reg, verifier::DEFAULT_TOL)?;
            format!(
                "{}-party verification {}",
                reg.len(),
                if r.accepted { "passed" } else { "FAILED" }
            )
        };
        println!(
            "result {} p={:.12} -> {} ({})",
            b.result,
            b.probability,
            path.display(),
            status
        );
    }
    println!("total probability {total:.12}");
    Ok(true)
}

fn branch_path(prefix: &Path, result: u8) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(format!(".{result}.json"));
    PathBuf::from(s)
}

fn negativity(args: &NegativityArgs) -> CmdResult {
    let rho = load(&args.path)?;
    let splits = if args.all_splits {
        enumerate_splits(rho.layout())?
    } else {
        let spec = args.split.as_deref().expect("clap requires --split");
        let labels: Vec<&str> = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let split = if args.raw {
            BipartiteSplit::raw(rho.layout(), &labels)?
        } else {
            BipartiteSplit::new(rho.layout(), &labels)?
        };
        vec![split]
    };
    let mut rows = Vec::new();
    for split in &splits {
        let r = negativity_report(&rho, split)?;
        let npt = r.min_eigenvalue < -args.tol;
        rows.push((r, npt));
    }
    if args.json {
        let out: Vec<_> = rows
            .iter()
            .map(|(r, npt)| {
                let mut v = serde_json::to_value(r).expect("report serializes");
                v["npt"] = json!(npt);
                v
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("rows serialize")
        );
    } else {
        println!(
            "{:<28} {:>18} {:>14} {:>14} {:>16} {:>4}",
            "split", "trace_norm_pt", "negativity", "log_neg", "min_eigenvalue", "NPT"
        );
        for (r, npt) in &rows {
            println!(
                "{:<28} {:>18.12} {:>14.10} {:>14.10} {:>16.3e} {:>4}",
                r.split,
                r.trace_norm_pt,
                r.negativity,
                r.log_negativity,
                r.min_eigenvalue,
                if *npt { "yes" } else { "no" }
            );
        }
    }
    Ok(true)
}
