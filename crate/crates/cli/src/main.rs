//! Command-line driver: compile circuits, simulate schedules, verify gate
//! pulses against their closed forms, sample measurements, and export
//! secondary graphs and code layouts.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 input error.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bhwalk_core::encoding::EncodingMap;
use bhwalk_core::fock::FockBasis;
use bhwalk_core::gates::{self, GateSpec};
use bhwalk_core::graph::default_config;
use bhwalk_core::io;
use bhwalk_core::measure::{outcome_probabilities, sample_shots, shots_to_csv, QubitOutcome};
use bhwalk_core::qecc::{build_layout, LayoutMode, LogicalGate, Region};
use bhwalk_core::schedule::{compile, run_with_leakage, timing_sweep, Policy, Schedule};
use bhwalk_core::secondary::build_secondary;

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "bhwalk",
    about = "Bosonic-walker lattice simulator and gate verifier",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a gate pulse and compare it against its closed form.
    VerifyGate(VerifyGateArgs),
    /// Compile a circuit and simulate it from an encoded initial state.
    Run(RunArgs),
    /// Compile a circuit into a pulse schedule.
    Compile(CompileArgs),
    /// Export the secondary (Fock-coupling) graph of a configuration.
    ExportGraph(ExportGraphArgs),
    /// Build an error-correction lattice layout, optionally emitting
    /// physical circuits for logical operations.
    QeccLayout(QeccLayoutArgs),
    /// Scan a pulse over fractions of its duration and report worst-case
    /// leakage.
    SweepTiming(SweepTimingArgs),
}

/// One gate pulse, as named on the command line.
#[derive(Subcommand, Clone)]
enum GateCmd {
    /// X rotation by --theta on one qubit.
    Rx {
        #[arg(long, default_value_t = 1)]
        qubit: usize,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        j: f64,
    },
    /// Z rotation by --theta on one qubit.
    Rz {
        #[arg(long, default_value_t = 1)]
        qubit: usize,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
    },
    /// One-step Hadamard on one qubit.
    Hadamard {
        #[arg(long, default_value_t = 1)]
        qubit: usize,
        #[arg(long, default_value_t = 1.0)]
        j: f64,
    },
    /// Entangling phase gate on the pair (--qubit, --qubit + 1).
    Cphase {
        #[arg(long, default_value_t = 1)]
        qubit: usize,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// SWAP-family gate on the pair (--qubit, --qubit + 1).
    Swap {
        #[arg(long, default_value_t = 1)]
        qubit: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        l: u32,
    },
}

impl GateCmd {
    fn build(&self, interaction: f64) -> bhwalk_core::Result<GateSpec> {
        match *self {
            GateCmd::Rx { qubit, theta, j } => gates::rx_gate(qubit, theta, j),
            GateCmd::Rz { qubit, theta, v } => gates::rz_gate(qubit, theta, v),
            GateCmd::Hadamard { qubit, j } => gates::hadamard_gate(qubit, j),
            GateCmd::Cphase { qubit, m, k } => gates::cphase_gate(qubit, m, k, interaction),
            GateCmd::Swap { qubit, k, l } => gates::swap_gate(qubit, k, l, interaction),
        }
    }
}

#[derive(Args)]
struct CommonGateArgs {
    /// Global on-site interaction strength U.
    #[arg(long, global = true, default_value_t = 1.0)]
    u: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyGateArgs {
    #[command(subcommand)]
    gate: GateCmd,
    #[command(flatten)]
    common: CommonGateArgs,
    /// Leakage tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_leak: f64,
    /// Operator-deviation tolerance (after global-phase alignment).
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_op: f64,
}

#[derive(Args)]
struct RunArgs {
    /// Circuit document (bhwalk-circuit-v1).
    #[arg(long)]
    circuit: PathBuf,
    /// Run configuration document (bhwalk-config-v1).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Initial computational label, e.g. "010"; defaults to all zeros.
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    policy: Option<Policy>,
    #[arg(long)]
    seed: Option<u64>,
    /// Stretch every pulse duration by this factor (1.0 = on time).
    #[arg(long, default_value_t = 1.0)]
    stretch: f64,
    /// Number of seeded measurement shots to append to the report.
    #[arg(long, default_value_t = 0)]
    shots: usize,
    /// Write the shot table (CSV) here.
    #[arg(long)]
    shots_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    policy: Option<Policy>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GraphSource {
    /// The pulse graph of a single gate.
    Gate {
        #[command(subcommand)]
        gate: GateCmd,
    },
    /// A configuration document (bhwalk-graph-v1).
    Config {
        #[arg(long)]
        path: PathBuf,
    },
    /// The idle (edgeless) lattice for a number of qubits.
    Idle {
        #[arg(long)]
        qubits: usize,
    },
}

#[derive(Args)]
struct ExportGraphArgs {
    #[command(subcommand)]
    source: GraphSource,
    /// Output format.
    #[arg(long, global = true, value_parser = ["dot", "json"], default_value = "dot")]
    format: String,
    #[arg(long, global = true, default_value_t = 1.0)]
    u: f64,
    /// Drop components with no computational vertex.
    #[arg(long, global = true, default_value_t = false)]
    prune: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QeccLayoutArgs {
    /// Number of logical qubits.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_parser = ["logical-only", "with-ancilla"], default_value = "with-ancilla")]
    mode: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the physical circuit of a transversal gate (x, z, or h).
    #[arg(long)]
    transversal: Option<String>,
    #[arg(long, value_parser = ["logical", "ancilla"], default_value = "logical")]
    region: String,
    /// Emit the data-ancilla entangler at this code position.
    #[arg(long)]
    entangle_position: Option<usize>,
    /// Emit a syndrome-extraction circuit for this stabilizer index (0-2).
    #[arg(long)]
    syndrome: Option<usize>,
    /// Treat the syndrome stabilizer as X-type.
    #[arg(long, default_value_t = false)]
    syndrome_x: bool,
    #[arg(long, default_value_t = 1)]
    logical: usize,
    #[arg(long, default_value_t = 6)]
    m: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Write the emitted circuit here.
    #[arg(long)]
    circuit_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepTimingArgs {
    #[command(subcommand)]
    gate: GateCmd,
    #[command(flatten)]
    common: CommonGateArgs,
    /// Comma-separated fractions of the designated duration, each in (0, 2].
    #[arg(long, global = true, default_value = "0.25,0.5,0.75,0.9,1.0")]
    fractions: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn execute(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::VerifyGate(args) => verify_gate(args),
        Command::Run(args) => run_circuit(args),
        Command::Compile(args) => compile_circuit(args),
        Command::ExportGraph(args) => export_graph(args),
        Command::QeccLayout(args) => qecc_layout(args),
        Command::SweepTiming(args) => sweep_timing_cmd(args),
    }
}

fn verify_gate(args: VerifyGateArgs) -> Result<ExitCode, String> {
    if !(args.tol_leak > 0.0 && args.tol_leak < 1.0 && args.tol_op > 0.0 && args.tol_op < 1.0) {
        return Err("tolerances must lie in (0, 1)".into());
    }
    let spec = args.gate.build(args.common.u).map_err(|e| e.to_string())?;
    let doc = report::verify(&spec, args.common.u, args.tol_leak, args.tol_op)
        .map_err(|e| e.to_string())?;
    let pass = doc.pass;
    write_output(&args.common.out, &report::to_json(&doc))?;
    Ok(ExitCode::from(if pass { 0 } else { 1 }))
}

fn load_run_config(path: &Option<PathBuf>) -> Result<RunConfig, String> {
    let mut cfg = match path {
        Some(p) => config::from_json(&read_file(p)?).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    cfg.apply_env().map_err(|e| e.to_string())?;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn encoded_basis(qubits: usize, cfg: &RunConfig) -> Result<EncodingMap, String> {
    let basis =
        FockBasis::enumerate_capped(qubits, 2 * qubits, cfg.dim_cap).map_err(|e| e.to_string())?;
    EncodingMap::new(basis).map_err(|e| e.to_string())
}

fn run_circuit(args: RunArgs) -> Result<ExitCode, String> {
    let mut cfg = load_run_config(&args.config)?;
    cfg.override_with(args.u, args.policy, args.seed);
    cfg.validate().map_err(|e| e.to_string())?;

    let circuit = io::circuit_from_json(&read_file(&args.circuit)?).map_err(|e| e.to_string())?;
    let enc = encoded_basis(circuit.qubit_count, &cfg)?;

    let label = args
        .initial
        .unwrap_or_else(|| "0".repeat(circuit.qubit_count));
    let initial = enc.encode(&label).map_err(|e| e.to_string())?;

    let mut schedule = compile(&circuit, cfg.u, cfg.policy).map_err(|e| e.to_string())?;
    if args.stretch != 1.0 {
        if !args.stretch.is_finite() || args.stretch <= 0.0 {
            return Err("--stretch must be positive".into());
        }
        for step in &mut schedule.steps {
            step.duration *= args.stretch;
        }
    }

    let (final_state, step_leakage) =
        run_with_leakage(&schedule, &initial, &enc).map_err(|e| e.to_string())?;
    let (amplitudes, leakage) = enc.decode(&final_state);

    let qubits: Vec<usize> = (1..=circuit.qubit_count).collect();
    let dist = outcome_probabilities(&final_state, &qubits).map_err(|e| e.to_string())?;
    let err_probability: f64 = dist
        .iter()
        .filter(|(tuple, _)| tuple.contains(&QubitOutcome::Err))
        .map(|(_, &p)| p)
        .sum();

    let shots_csv = if args.shots > 0 {
        let shots =
            sample_shots(&final_state, &qubits, args.shots, cfg.seed).map_err(|e| e.to_string())?;
        Some(shots_to_csv(&qubits, &shots))
    } else {
        None
    };

    let doc = report::RunReport {
        schema: report::RUN_SCHEMA.to_string(),
        qubits: circuit.qubit_count,
        initial: label,
        steps: schedule.steps.len(),
        stretch: args.stretch,
        amplitudes: amplitudes
            .into_iter()
            .map(|(k, v)| (k, [v.re, v.im]))
            .collect(),
        leakage,
        step_leakage,
        err_probability,
        shots: args.shots,
        seed: cfg.seed,
    };
    write_output(&args.out, &report::run_to_json(&doc))?;

    if let Some(csv) = shots_csv {
        let path = args
            .shots_out
            .ok_or_else(|| "--shots requires --shots-out".to_string())?;
        std::fs::write(&path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn compile_circuit(args: CompileArgs) -> Result<ExitCode, String> {
    let mut cfg = load_run_config(&args.config)?;
    cfg.override_with(args.u, args.policy, None);
    cfg.validate().map_err(|e| e.to_string())?;
    let circuit = io::circuit_from_json(&read_file(&args.circuit)?).map_err(|e| e.to_string())?;
    let schedule: Schedule = compile(&circuit, cfg.u, cfg.policy).map_err(|e| e.to_string())?;
    write_output(&args.out, &io::schedule_to_json(&schedule))?;
    Ok(ExitCode::SUCCESS)
}

fn export_graph(args: ExportGraphArgs) -> Result<ExitCode, String> {
    let config = match &args.source {
        GraphSource::Gate { gate } => {
            let spec = gate.build(args.u).map_err(|e| e.to_string())?.minimal();
            spec.to_config(spec.minimal_qubits(), args.u)
                .map_err(|e| e.to_string())?
        }
        GraphSource::Config { path } => {
            io::graph_from_json(&read_file(path)?).map_err(|e| e.to_string())?
        }
        GraphSource::Idle { qubits } => {
            if *qubits == 0 {
                return Err("--qubits must be at least 1".into());
            }
            default_config(*qubits, args.u)
        }
    };
    if config.site_count % 2 != 0 {
        return Err("graph export needs a two-row lattice (even site count)".into());
    }
    let qubits = config.site_count / 2;
    let cfg = RunConfig::default();
    let enc = encoded_basis(qubits, &cfg)?;
    let graph = build_secondary(enc.basis(), &config, &enc).map_err(|e| e.to_string())?;
    let graph = if args.prune {
        graph.pruned_to_computational()
    } else {
        graph
    };
    let text = match args.format.as_str() {
        "dot" => graph.to_dot(),
        "json" => io::secondary_to_json(&graph),
        other => return Err(format!("unknown format {other:?}")),
    };
    write_output(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn qecc_layout(args: QeccLayoutArgs) -> Result<ExitCode, String> {
    if args.n == 0 {
        return Err("--n must be at least 1".into());
    }
    let mode: LayoutMode = args
        .mode
        .parse()
        .map_err(|e: bhwalk_core::Error| e.to_string())?;
    let layout = build_layout(args.n, mode);
    write_output(&args.out, &io::layout_to_json(&layout))?;

    let requested = [
        args.transversal.is_some(),
        args.entangle_position.is_some(),
        args.syndrome.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if requested > 1 {
        return Err("choose one of --transversal, --entangle-position, --syndrome".into());
    }
    if requested == 1 {
        let region = match args.region.as_str() {
            "logical" => Region::Logical,
            "ancilla" => Region::Ancilla,
            other => return Err(format!("unknown region {other:?}")),
        };
        let circuit = if let Some(kind) = &args.transversal {
            let gate = match kind.as_str() {
                "x" => LogicalGate::TransversalX {
                    logical: args.logical,
                    region,
                },
                "z" => LogicalGate::TransversalZ {
                    logical: args.logical,
                    region,
                },
                "h" => LogicalGate::TransversalH {
                    logical: args.logical,
                    region,
                },
                other => return Err(format!("unknown transversal gate {other:?}")),
            };
            layout.physical_circuit(&gate).map_err(|e| e.to_string())?
        } else if let Some(position) = args.entangle_position {
            layout
                .physical_circuit(&LogicalGate::EntangleAncilla {
                    logical: args.logical,
                    position,
                    m: args.m,
                    k: args.k,
                })
                .map_err(|e| e.to_string())?
        } else {
            let stabilizer = args.syndrome.unwrap();
            layout
                .syndrome_circuit(args.logical, stabilizer, args.syndrome_x, args.m, args.k)
                .map_err(|e| e.to_string())?
        };
        let path = args
            .circuit_out
            .ok_or_else(|| "circuit emission requires --circuit-out".to_string())?;
        std::fs::write(&path, io::circuit_to_json(&circuit))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep_timing_cmd(args: SweepTimingArgs) -> Result<ExitCode, String> {
    let spec = args.gate.build(args.common.u).map_err(|e| e.to_string())?;
    let fractions: Vec<f64> = args
        .fractions
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad fraction {s:?}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    let points = timing_sweep(&spec, &fractions, args.common.u).map_err(|e| e.to_string())?;
    let doc = report::SweepReport {
        schema: report::SWEEP_SCHEMA.to_string(),
        gate: spec.kind,
        duration: spec.duration,
        points: points
            .into_iter()
            .map(|(fraction, leakage)| report::SweepPoint { fraction, leakage })
            .collect(),
    };
    write_output(&args.common.out, &report::sweep_to_json(&doc))?;
    Ok(ExitCode::SUCCESS)
}
