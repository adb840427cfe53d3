//! `hsf-sim`: run and compare simulation engines, generate benchmark
//! instances, and sweep timed benchmarks.
//!
//! Exit codes: 0 success, 2 cross-engine amplitude deviation above the
//! limit, 3 every selected engine timed out, 4 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use hsf_core::circuit::{Circuit, CutSpec};
use hsf_core::plan::{build_plan, PlanMode};
use hsf_core::qaoa::{qaoa_circuit, sbm_graph, DEFAULT_BETA, DEFAULT_GAMMA};
use hsf_sim::bench::{run_bench, BenchConfig, BenchInstanceSpec};
use hsf_sim::engines::{run_engines, EngineKind, EngineOptions};
use hsf_sim::io::{dump_amplitudes, load_circuit, save_circuit, write_json, QaoaManifest};
use hsf_sim::report::{PlanSummary, RunReport};

const EXIT_DEVIATION: u8 = 2;
const EXIT_ALL_TIMED_OUT: u8 = 3;
const EXIT_CONFIG: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hsf-sim",
    version,
    about = "Statevector and hybrid Schrödinger-Feynman simulation with joint gate cutting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run selected engines on one circuit and compare amplitudes
    Run(RunArgs),
    /// Generate an SBM-QAOA instance (circuit file + manifest)
    GenQaoa(GenQaoaArgs),
    /// Sweep SBM-QAOA instances with repeated timed runs
    Bench(BenchArgs),
    /// Plan a cut and report blocks and path counts without simulating
    Plan(PlanArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Circuit file: `qubits <n>` header, one gate per line
    #[arg(long, conflicts_with = "gen_qaoa")]
    circuit: Option<PathBuf>,
    /// Generate the circuit instead: n1,n2,p_intra,p_inter,seed
    #[arg(long, value_name = "N1,N2,PI,PE,SEED")]
    gen_qaoa: Option<String>,
    /// QAOA layers for --gen-qaoa
    #[arg(long, default_value_t = 1)]
    layers: usize,
    /// Problem angle(s) for --gen-qaoa (comma list or one value for all layers)
    #[arg(long)]
    gamma: Option<String>,
    /// Mixer angle(s) for --gen-qaoa
    #[arg(long)]
    beta: Option<String>,
    /// Skip the initial Hadamard layer for --gen-qaoa
    #[arg(long)]
    no_initial_h: bool,
    /// Cut boundary: the cut lies between qubit L and L+1
    #[arg(long, value_name = "L")]
    cut: Option<usize>,
    /// Comma list from {schrodinger, hsf-standard, hsf-joint}
    #[arg(long, default_value = "schrodinger,hsf-standard,hsf-joint")]
    engines: String,
    /// Amplitude prefix to compute (clamped to the state size)
    #[arg(long, default_value_t = 1_000_000)]
    amps: usize,
    /// Path workers; 0 = one per logical core
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Per-engine timeout in seconds
    #[arg(long, default_value_t = 3600)]
    timeout: u64,
    /// Sequential path order: repeated runs give byte-identical dumps
    #[arg(long)]
    deterministic: bool,
    #[arg(long, default_value_t = 12)]
    max_block_qubits: usize,
    #[arg(long, default_value_t = 1 << 26)]
    path_budget: u64,
    /// Full-state qubit cap for the Schrödinger engine
    #[arg(long, default_value_t = 28)]
    max_qubits: usize,
    /// Write the JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump amplitudes of the first completed engine (.json or binary)
    #[arg(long)]
    dump_amplitudes: Option<PathBuf>,
}

#[derive(Args)]
struct GenQaoaArgs {
    /// Partition sizes: n1,n2
    #[arg(long, value_name = "N1,N2", required_unless_present = "from_manifest")]
    sizes: Option<String>,
    #[arg(long, default_value_t = 0.8)]
    p_intra: f64,
    #[arg(long, default_value_t = 0.1)]
    p_inter: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    layers: usize,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    no_initial_h: bool,
    /// Regenerate from an existing manifest instead
    #[arg(long)]
    from_manifest: Option<PathBuf>,
    #[arg(long)]
    out_circuit: Option<PathBuf>,
    #[arg(long)]
    out_manifest: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Partition sizes: n1,n2
    #[arg(long, value_name = "N1,N2")]
    sizes: String,
    #[arg(long, default_value_t = 0.8)]
    p_intra: f64,
    /// Comma list of inter-partition probabilities
    #[arg(long, default_value = "0.1")]
    p_inter: String,
    /// Comma list of RNG seeds
    #[arg(long, default_value = "1")]
    seeds: String,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = 1)]
    layers: usize,
    #[arg(long, default_value = "schrodinger,hsf-standard,hsf-joint")]
    engines: String,
    #[arg(long, default_value_t = 1_000_000)]
    amps: usize,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = 3600)]
    timeout: u64,
    #[arg(long, default_value_t = 12)]
    max_block_qubits: usize,
    #[arg(long, default_value_t = 1 << 26)]
    path_budget: u64,
    #[arg(long, default_value_t = 28)]
    max_qubits: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, value_name = "L")]
    cut: usize,
    #[arg(long, default_value_t = 12)]
    max_block_qubits: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, not config errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_CONFIG);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::GenQaoa(args) => cmd_gen_qaoa(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Plan(args) => cmd_plan(args),
    };
    match outcome {
        Ok(code) => code,
        Err(AppError { exit, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(exit)
        }
    }
}

struct AppError {
    exit: u8,
    message: String,
}

fn config_error(message: impl Into<String>) -> AppError {
    AppError {
        exit: EXIT_CONFIG,
        message: message.into(),
    }
}

fn runtime_error(message: impl Into<String>) -> AppError {
    AppError {
        exit: 1,
        message: message.into(),
    }
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, AppError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| config_error(format!("bad {what}: `{s}`")))
        })
        .collect()
}

fn parse_sizes(text: &str) -> Result<[usize; 2], AppError> {
    let parts: Vec<usize> = parse_list(text, "partition size")?;
    if parts.len() != 2 || parts[0] == 0 || parts[1] == 0 {
        return Err(config_error(format!(
            "--sizes wants two non-empty partitions, got `{text}`"
        )));
    }
    Ok([parts[0], parts[1]])
}

fn parse_engines(text: &str) -> Result<Vec<EngineKind>, AppError> {
    let engines: Vec<EngineKind> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| EngineKind::parse(s).ok_or_else(|| config_error(format!("unknown engine `{s}`"))))
        .collect::<Result<_, _>>()?;
    if engines.is_empty() {
        return Err(config_error("no engines selected"));
    }
    Ok(engines)
}

/// One value broadcasts to all layers; otherwise the list length must match.
fn parse_angles(
    text: Option<&String>,
    layers: usize,
    default: f64,
    what: &str,
) -> Result<Vec<f64>, AppError> {
    match text {
        None => Ok(vec![default; layers]),
        Some(t) => {
            let vals: Vec<f64> = parse_list(t, what)?;
            if vals.len() == 1 {
                Ok(vec![vals[0]; layers])
            } else if vals.len() == layers {
                Ok(vals)
            } else {
                Err(config_error(format!(
                    "{what} list has {} value(s) for {layers} layer(s)",
                    vals.len()
                )))
            }
        }
    }
}

struct ResolvedCircuit {
    description: String,
    circuit: Circuit,
    generated_cut: Option<CutSpec>,
}

fn resolve_circuit(args: &RunArgs) -> Result<ResolvedCircuit, AppError> {
    if let Some(path) = &args.circuit {
        let circuit = load_circuit(path).map_err(|e| config_error(e.to_string()))?;
        return Ok(ResolvedCircuit {
            description: path.display().to_string(),
            circuit,
            generated_cut: None,
        });
    }
    let Some(spec) = &args.gen_qaoa else {
        return Err(config_error("one of --circuit or --gen-qaoa is required"));
    };
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(config_error(format!(
            "--gen-qaoa wants n1,n2,p_intra,p_inter,seed, got `{spec}`"
        )));
    }
    let n1: usize = parts[0].parse().map_err(|_| config_error("bad n1"))?;
    let n2: usize = parts[1].parse().map_err(|_| config_error("bad n2"))?;
    let p_intra: f64 = parts[2].parse().map_err(|_| config_error("bad p_intra"))?;
    let p_inter: f64 = parts[3].parse().map_err(|_| config_error("bad p_inter"))?;
    let seed: u64 = parts[4].parse().map_err(|_| config_error("bad seed"))?;
    let gammas = parse_angles(args.gamma.as_ref(), args.layers, DEFAULT_GAMMA, "gamma")?;
    let betas = parse_angles(args.beta.as_ref(), args.layers, DEFAULT_BETA, "beta")?;
    let graph = sbm_graph([n1, n2], p_intra, p_inter, seed);
    let instance = qaoa_circuit(&graph, args.layers, &gammas, &betas, !args.no_initial_h)
        .map_err(|e| config_error(e.to_string()))?;
    Ok(ResolvedCircuit {
        description: format!("qaoa({n1},{n2},{p_intra},{p_inter},seed={seed})"),
        circuit: instance.circuit,
        generated_cut: Some(instance.cut),
    })
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, AppError> {
    let resolved = resolve_circuit(&args)?;
    let engines = parse_engines(&args.engines)?;
    let cut = args.cut.map(CutSpec::new).or(resolved.generated_cut);
    if let Some(c) = cut {
        c.validate(resolved.circuit.num_qubits())
            .map_err(|e| config_error(e.to_string()))?;
    }
    if cut.is_none() && engines.iter().any(|e| e.plan_mode().is_some()) {
        return Err(config_error(
            "HSF engines need --cut (or a generated instance)",
        ));
    }
    if args.amps == 0 {
        return Err(config_error("--amps must be at least 1"));
    }
    let opts = EngineOptions {
        amp_count: args.amps,
        workers: args.workers,
        deterministic: args.deterministic,
        max_block_qubits: args.max_block_qubits,
        path_budget: args.path_budget as u128,
        max_qubits: args.max_qubits,
        timeout: Some(Duration::from_secs(args.timeout)),
        ..Default::default()
    };

    let runs = run_engines(&engines, &resolved.circuit, cut, &opts)
        .map_err(|e| runtime_error(e.to_string()))?;
    let amp_count = runs
        .iter()
        .find_map(|r| r.result.as_ref().map(|res| res.amplitudes.len()))
        .unwrap_or(args.amps);
    let report = RunReport::build(
        &resolved.description,
        resolved.circuit.num_qubits(),
        cut.map(|c| c.boundary()),
        amp_count,
        args.deterministic,
        &runs,
    );
    print!("{}", report.render_text());
    if let Some(path) = &args.out {
        write_json(path, &report).map_err(|e| runtime_error(e.to_string()))?;
    }
    if let Some(path) = &args.dump_amplitudes {
        let first = runs.iter().find_map(|r| r.result.as_ref());
        match first {
            Some(result) => dump_amplitudes(path, &result.amplitudes)
                .map_err(|e| runtime_error(e.to_string()))?,
            None => eprintln!("no completed engine; skipping amplitude dump"),
        }
    }
    if !report.deviation_ok {
        return Ok(ExitCode::from(EXIT_DEVIATION));
    }
    if report.all_timed_out() {
        return Ok(ExitCode::from(EXIT_ALL_TIMED_OUT));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen_qaoa(args: GenQaoaArgs) -> Result<ExitCode, AppError> {
    let manifest = if let Some(path) = &args.from_manifest {
        QaoaManifest::load(path).map_err(|e| config_error(e.to_string()))?
    } else {
        let sizes = parse_sizes(args.sizes.as_deref().unwrap_or_default())?;
        let gammas = parse_angles(args.gamma.as_ref(), args.layers, DEFAULT_GAMMA, "gamma")?;
        let betas = parse_angles(args.beta.as_ref(), args.layers, DEFAULT_BETA, "beta")?;
        let graph = sbm_graph(sizes, args.p_intra, args.p_inter, args.seed);
        let instance = qaoa_circuit(&graph, args.layers, &gammas, &betas, !args.no_initial_h)
            .map_err(|e| config_error(e.to_string()))?;
        QaoaManifest::from_instance(&instance)
    };
    let instance = manifest
        .regenerate()
        .map_err(|e| runtime_error(e.to_string()))?;
    println!(
        "qaoa instance: {} qubits, cut {}, {} edges ({} crossing), {} layer(s)",
        instance.graph.num_vertices(),
        instance.cut.boundary(),
        instance.graph.edges.len(),
        instance.graph.inter_edge_count(),
        instance.layers,
    );
    if let Some(path) = &args.out_circuit {
        save_circuit(path, &instance.circuit).map_err(|e| runtime_error(e.to_string()))?;
        println!("circuit written to {}", path.display());
    }
    if let Some(path) = &args.out_manifest {
        manifest
            .save(path)
            .map_err(|e| runtime_error(e.to_string()))?;
        println!("manifest written to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, AppError> {
    let sizes = parse_sizes(&args.sizes)?;
    let p_inters: Vec<f64> = parse_list(&args.p_inter, "p_inter")?;
    let seeds: Vec<u64> = parse_list(&args.seeds, "seed")?;
    let engines = parse_engines(&args.engines)?;
    let mut instances = Vec::new();
    for &p_inter in &p_inters {
        for &seed in &seeds {
            instances.push(BenchInstanceSpec {
                sizes,
                p_intra: args.p_intra,
                p_inter,
                seed,
                layers: args.layers,
                gammas: vec![DEFAULT_GAMMA; args.layers],
                betas: vec![DEFAULT_BETA; args.layers],
                initial_h: true,
            });
        }
    }
    let config = BenchConfig {
        instances,
        engines,
        repeats: args.repeats,
        opts: EngineOptions {
            amp_count: args.amps,
            workers: args.workers,
            max_block_qubits: args.max_block_qubits,
            path_budget: args.path_budget as u128,
            max_qubits: args.max_qubits,
            timeout: Some(Duration::from_secs(args.timeout)),
            ..Default::default()
        },
    };
    let table = run_bench(&config).map_err(|e| runtime_error(e.to_string()))?;
    print!("{}", table.render_text());
    if let Some(path) = &args.out {
        write_json(path, &table).map_err(|e| runtime_error(e.to_string()))?;
    }
    let bad_deviation = table.rows.iter().any(|r| {
        r.max_deviation
            .is_some_and(|d| d >= hsf_sim::report::DEVIATION_LIMIT)
    });
    if bad_deviation {
        return Ok(ExitCode::from(EXIT_DEVIATION));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_plan(args: PlanArgs) -> Result<ExitCode, AppError> {
    let circuit = load_circuit(&args.circuit).map_err(|e| config_error(e.to_string()))?;
    let cut = CutSpec::new(args.cut);
    cut.validate(circuit.num_qubits())
        .map_err(|e| config_error(e.to_string()))?;
    let plan = build_plan(
        &circuit,
        cut,
        PlanMode::Joint,
        args.max_block_qubits,
        hsf_core::schmidt::DEFAULT_TRUNCATION_TOL,
    )
    .map_err(|e| runtime_error(e.to_string()))?;
    let summary = PlanSummary::from_counts(plan.counts());
    println!(
        "cut {}: {} crossing gate(s), blocks+sep {}, sep. cuts {}",
        args.cut,
        summary.separate_cuts,
        summary.blocks_plus_separate(),
        summary.separate_cuts,
    );
    println!(
        "paths: standard {}{}, joint {}{}",
        summary.n_p_standard,
        summary
            .n_p_standard_log2
            .map_or(String::new(), |k| format!(" (2^{k})")),
        summary.n_p_joint,
        summary
            .n_p_joint_log2
            .map_or(String::new(), |k| format!(" (2^{k})")),
    );
    for (i, b) in summary.block_details.iter().enumerate() {
        println!(
            "block {i}: {} gate(s), rank {} (bound {}, separate product {})",
            b.gates, b.rank, b.rank_bound, b.member_rank_product
        );
    }
    if let Some(path) = &args.out {
        write_json(path, &summary).map_err(|e| runtime_error(e.to_string()))?;
    }
    Ok(ExitCode::SUCCESS)
}
