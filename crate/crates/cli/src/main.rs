//! `qutrit`: build, lower, simulate and cost mixed-radix circuits.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use config::{Config, Format};
use qutrit_core::arith::{self, RegisterLayout};
use qutrit_core::noise::{self, NoiseParams};
use qutrit_core::pricing::{self, PricingSetup};
use qutrit_core::resources::{self, ApproxParams, ArithOp, Baseline, LogMode};
use qutrit_core::simulator::{self, total_dim};
use qutrit_core::{verify, Circuit, GateFilter, GateKind, LoweringStrategy};

#[derive(Parser)]
#[command(name = "qutrit", version, about = "Mixed-radix qubit/qutrit circuit toolkit")]
struct Cli {
    /// TOML file with default noise parameters, output format, size guards and seed.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed; overrides the config file (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an arithmetic circuit as JSON.
    Build(BuildArgs),
    /// Lower every Toffoli with the chosen strategy.
    Decompose(DecomposeArgs),
    /// Simulate a circuit from a basis input and sample all wires.
    Simulate(SimulateArgs),
    /// Closed-form resource estimate for one arithmetic operation.
    Estimate(EstimateArgs),
    /// Success probability against Toffoli count, as CSV.
    NoiseCurve(NoiseCurveArgs),
    /// Truncation and discretization error bounds, as JSON.
    Bounds(BoundsArgs),
    /// Run the built-in equivalence and exhaustive correctness suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildOp {
    Adder,
    Multiplier,
    /// Fixed 5 x 3 partial-product multiplier with prepared inputs.
    Witness,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    op: BuildOp,
    /// Width of the first operand.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Width of the second multiplier operand (defaults to `n`).
    #[arg(long)]
    nb: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionalStrategy {
    Qutrit,
    Cliffordt,
}

impl From<FunctionalStrategy> for LoweringStrategy {
    fn from(s: FunctionalStrategy) -> Self {
        match s {
            FunctionalStrategy::Qutrit => LoweringStrategy::Qutrit,
            FunctionalStrategy::Cliffordt => LoweringStrategy::CliffordTFunctional,
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, value_enum)]
    strategy: FunctionalStrategy,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long = "in")]
    input_file: PathBuf,
    /// Basis label, one digit per wire (default all zeros).
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    /// Histogram CSV destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Final state as JSON `[re, im]` pairs.
    #[arg(long)]
    state_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CostStrategy {
    Qutrit,
    Baseline,
}

impl From<CostStrategy> for LoweringStrategy {
    fn from(s: CostStrategy) -> Self {
        match s {
            CostStrategy::Qutrit => LoweringStrategy::Qutrit,
            CostStrategy::Baseline => LoweringStrategy::SelingerCost,
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// add, sub, mul, div, sqrt, exp or arcsine.
    #[arg(long, required_unless_present = "benchmark")]
    op: Option<ArithOp>,
    #[arg(long, default_value_t = 8)]
    n: u64,
    /// Integer bits of the fixed-point format.
    #[arg(long, default_value_t = 0)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long = "M", default_value_t = 1)]
    m: u64,
    /// Defaults to `k`.
    #[arg(long)]
    d: Option<u64>,
    #[arg(long, default_value_t = 1)]
    z: u64,
    #[arg(long, value_enum, default_value_t = CostStrategy::Qutrit)]
    strategy: CostStrategy,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Floor the log2 terms of the addition counts.
    #[arg(long)]
    floored: bool,
    /// Convert the autocallable benchmark totals instead of one operation.
    #[arg(long)]
    benchmark: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CurveStrategy {
    Both,
    Qutrit,
    Conventional,
}

#[derive(Args)]
struct NoiseCurveArgs {
    #[arg(long, value_enum, default_value_t = CurveStrategy::Both)]
    strategy: CurveStrategy,
    #[arg(long, default_value_t = 50)]
    max_toffoli: u64,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    /// T1 of level 1, μs.
    #[arg(long)]
    t1a: Option<f64>,
    /// T1 of level 2, μs.
    #[arg(long)]
    t1b: Option<f64>,
    /// Duration of one circuit layer, μs.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-Toffoli comparison and two-wire no-error tables as JSON.
    #[arg(long)]
    table_out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long = "T", default_value_t = 1)]
    t_steps: u32,
    #[arg(long, default_value_t = 5.0)]
    w: f64,
    #[arg(long, default_value_t = 4)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Width `B_u − B_l` of the integration domain.
    #[arg(long, default_value_t = 1.0)]
    range: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_circuit(path: &Path) -> anyhow::Result<Circuit> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Circuit::from_json(&text).with_context(|| format!("parsing circuit {}", path.display()))
}

fn pretty(value: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn summary(circuit: &Circuit) -> serde_json::Value {
    json!({
        "wires": circuit.num_wires(),
        "qutrit_wires": circuit.dims().iter().filter(|&&d| d == 3).count(),
        "gates": circuit.gate_count(None),
        "toffolis": circuit.gate_count(Some(GateFilter::Kind(GateKind::Toffoli))),
        "two_qutrit_gates": circuit.gate_count(Some(GateFilter::TwoQutrit)),
        "depth": circuit.depth(),
    })
}

fn build(args: &BuildArgs) -> anyhow::Result<()> {
    let (circuit, layout): (Circuit, RegisterLayout) = match args.op {
        BuildOp::Adder => arith::build_adder(args.n)?,
        BuildOp::Multiplier => arith::build_multiplier(args.n, args.nb.unwrap_or(args.n))?,
        BuildOp::Witness => arith::fig5_multiplier_witness()?,
    };
    let report = json!({ "circuit": summary(&circuit), "layout": layout });
    match &args.out {
        Some(path) => {
            emit(Some(path), &(circuit.to_json() + "\n"))?;
            emit(None, &pretty(&report)?)
        }
        None => emit(None, &(circuit.to_json() + "\n")),
    }
}

fn decompose(args: &DecomposeArgs) -> anyhow::Result<()> {
    let circuit = read_circuit(&args.input)?;
    let lowered = qutrit_core::lower_toffolis(&circuit, args.strategy.into())?;
    match &args.out {
        Some(path) => {
            emit(Some(path), &(lowered.to_json() + "\n"))?;
            emit(None, &pretty(&json!({ "before": summary(&circuit), "after": summary(&lowered) }))?)
        }
        None => emit(None, &(lowered.to_json() + "\n")),
    }
}

fn simulate(args: &SimulateArgs, config: &Config, seed: u64) -> anyhow::Result<()> {
    let circuit = read_circuit(&args.input_file)?;
    let dim = total_dim(&circuit.dims());
    if dim > config.guards.max_state_dim {
        bail!("state dimension {dim} exceeds the configured guard {}", config.guards.max_state_dim);
    }
    if args.shots > config.guards.max_shots {
        bail!("{} shots exceed the configured guard {}", args.shots, config.guards.max_shots);
    }
    let state = match &args.input {
        Some(label) => simulator::simulate_label(&circuit, label)?,
        None => simulator::simulate(&circuit, &vec![0; circuit.num_wires()])?,
    };
    let hist = simulator::measure_all(&state, args.shots, seed)?;
    if let Some(path) = &args.state_out {
        emit(Some(path), &(state.to_json() + "\n"))?;
    }
    emit(args.out.as_deref(), &hist.to_csv())
}

fn estimate(args: &EstimateArgs, config: &Config) -> anyhow::Result<()> {
    let strategy: LoweringStrategy = args.strategy.into();
    let report = if args.benchmark {
        resources::benchmark_report(strategy, &Baseline::AUTOCALLABLE)
    } else {
        let op = args.op.expect("clap enforces --op without --benchmark");
        let params = ApproxParams { k: args.k, m: args.m, d: args.d.unwrap_or(args.k), z: args.z };
        let mode = if args.floored { LogMode::Floored } else { LogMode::AsPrinted };
        resources::operation_report(op, args.n, args.p, &params, strategy, mode)?
    };
    let text = match args.format.unwrap_or(config.format) {
        Format::Json => pretty(&report)?,
        Format::Csv => report.to_csv(),
    };
    emit(None, &text)
}

fn noise_curve(args: &NoiseCurveArgs, config: &Config) -> anyhow::Result<()> {
    let base = config.noise;
    let params = NoiseParams {
        p1: args.p1.unwrap_or(base.p1),
        p2: args.p2.unwrap_or(base.p2),
        t1_level1: args.t1a.unwrap_or(base.t1_level1),
        t1_level2: args.t1b.unwrap_or(base.t1_level2),
        tau_gate: args.tau.unwrap_or(base.tau_gate),
    };
    params.validate()?;
    if args.max_toffoli > config.guards.max_toffoli {
        bail!("--max-toffoli {} exceeds the configured guard {}", args.max_toffoli, config.guards.max_toffoli);
    }
    let csv = match args.strategy {
        CurveStrategy::Both => noise::success_curves_csv(args.max_toffoli, &params),
        single => {
            let (strategy, column) = match single {
                CurveStrategy::Qutrit => (LoweringStrategy::Qutrit, "p_success_qutrit"),
                _ => (LoweringStrategy::SelingerCost, "p_success_conventional"),
            };
            let mut out = format!("toffoli_count,{column}\n");
            for (n, p) in noise::success_curve(strategy, 1..=args.max_toffoli, &params) {
                out.push_str(&format!("{n},{p}\n"));
            }
            out
        }
    };
    if let Some(path) = &args.table_out {
        let tables = json!({
            "params": params,
            "comparison": noise::comparison_table(&params, 30),
            "two_wire_no_error": noise::two_wire_no_error_table(params.p2),
        });
        emit(Some(path), &pretty(&tables)?)?;
    }
    emit(args.out.as_deref(), &csv)
}

fn bounds(args: &BoundsArgs) -> anyhow::Result<()> {
    let setup = PricingSetup {
        d: args.d,
        t_steps: args.t_steps,
        n: args.n,
        w: args.w,
        beta: args.beta,
        b_lower: 0.0,
        b_upper: args.range,
        ..PricingSetup::default()
    };
    emit(args.out.as_deref(), &pretty(&pricing::bounds_report(&setup)?)?)
}

/// Returns whether every check passed.
fn run_verify(args: &VerifyArgs, config: &Config) -> anyhow::Result<bool> {
    let results = verify::run_verification();
    let text = match args.format.unwrap_or(config.format) {
        Format::Json => pretty(&results)?,
        Format::Csv => {
            let mut s = String::from("check,passed,detail\n");
            for r in &results {
                s.push_str(&format!("{},{},\"{}\"\n", r.name, r.passed, r.detail));
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)?;
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    if !failed.is_empty() {
        eprintln!("verify: {} of {} checks failed: {}", failed.len(), results.len(), failed.join(", "));
    }
    Ok(failed.is_empty())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let config = Config::load(cli.config.as_deref())?;
    let seed = cli.seed.unwrap_or(config.seed);
    match &cli.command {
        Command::Build(a) => build(a)?,
        Command::Decompose(a) => decompose(a)?,
        Command::Simulate(a) => simulate(a, &config, seed)?,
        Command::Estimate(a) => estimate(a, &config)?,
        Command::NoiseCurve(a) => noise_curve(a, &config)?,
        Command::Bounds(a) => bounds(a)?,
        Command::Verify(a) => {
            if !run_verify(a, &config)? {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version.
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
