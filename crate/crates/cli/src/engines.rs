//! Timed engine execution: Schrödinger and both HSF modes under a common
//! options struct, with cooperative timeouts and path-range parallelism.

use std::time::{Duration, Instant};

use hsf_core::circuit::{Circuit, CutSpec};
use hsf_core::hsf::{enumerate_paths, HsfError, MemoryStats, PathRunner, DEFAULT_PATH_BUDGET};
use hsf_core::linalg::C_ZERO;
use hsf_core::plan::{build_plan, CutPlan, PathCountReport, PlanMode, DEFAULT_MAX_BLOCK_QUBITS};
use hsf_core::schmidt::DEFAULT_TRUNCATION_TOL;
use hsf_core::schrodinger::{self, AmpSelection, SimError, DEFAULT_MAX_QUBITS};
use hsf_core::{Cancel, Complex64};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    Schrodinger,
    HsfStandard,
    HsfJoint,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Schrodinger => "schrodinger",
            EngineKind::HsfStandard => "hsf-standard",
            EngineKind::HsfJoint => "hsf-joint",
        }
    }

    pub fn parse(s: &str) -> Option<EngineKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "schrodinger" | "s" => Some(EngineKind::Schrodinger),
            "hsf-standard" | "standard" | "t" => Some(EngineKind::HsfStandard),
            "hsf-joint" | "joint" | "j" => Some(EngineKind::HsfJoint),
            _ => None,
        }
    }

    pub fn all() -> [EngineKind; 3] {
        [
            EngineKind::Schrodinger,
            EngineKind::HsfStandard,
            EngineKind::HsfJoint,
        ]
    }

    pub fn plan_mode(self) -> Option<PlanMode> {
        match self {
            EngineKind::Schrodinger => None,
            EngineKind::HsfStandard => Some(PlanMode::Standard),
            EngineKind::HsfJoint => Some(PlanMode::Joint),
        }
    }
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct EngineOptions {
    /// Requested amplitude prefix; clamped to the state size.
    pub amp_count: usize,
    /// Path workers; 0 uses the rayon default.
    pub workers: usize,
    /// Sequential path execution and merge order, for bit-stable dumps.
    pub deterministic: bool,
    pub max_block_qubits: usize,
    pub path_budget: u128,
    /// Full-state register cap for the Schrödinger engine.
    pub max_qubits: usize,
    pub timeout: Option<Duration>,
    pub truncation_tol: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            amp_count: 1_000_000,
            workers: 0,
            deterministic: false,
            max_block_qubits: DEFAULT_MAX_BLOCK_QUBITS,
            path_budget: DEFAULT_PATH_BUDGET,
            max_qubits: DEFAULT_MAX_QUBITS,
            timeout: None,
            truncation_tol: DEFAULT_TRUNCATION_TOL,
        }
    }
}

/// Amplitude prefix produced by one engine, with its wall-clock time.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub amplitudes: Vec<Complex64>,
    pub n: usize,
    pub elapsed: Duration,
    pub engine: EngineKind,
}

/// One engine's row of a run: the two-line timing split (full time with
/// preprocessing vs simulation only), path counts, and memory accounting.
#[derive(Debug, Clone)]
pub struct EngineRun {
    pub engine: EngineKind,
    /// None when the engine timed out.
    pub result: Option<SimulationResult>,
    pub timed_out: bool,
    pub preprocessing_seconds: f64,
    pub simulation_seconds: f64,
    pub full_seconds: f64,
    pub n_paths: Option<u128>,
    pub counts: Option<PathCountReport>,
    /// Per-worker half-state accounting, maximum over workers.
    pub memory: Option<MemoryStats>,
    pub workers_used: usize,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("engine {0} requires a cut position")]
    CutRequired(EngineKind),
    #[error("{0}")]
    Sim(SimError),
    #[error("{0}")]
    Hsf(HsfError),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl From<SimError> for EngineError {
    fn from(e: SimError) -> Self {
        EngineError::Sim(e)
    }
}

impl From<HsfError> for EngineError {
    fn from(e: HsfError) -> Self {
        EngineError::Hsf(e)
    }
}

/// Wall-clock deadline checked between gates and between paths.
struct Deadline {
    at: Option<Instant>,
}

impl Deadline {
    fn starting_now(timeout: Option<Duration>) -> Deadline {
        Deadline {
            at: timeout.map(|t| Instant::now() + t),
        }
    }
}

impl Cancel for Deadline {
    fn is_cancelled(&self) -> bool {
        self.at.is_some_and(|at| Instant::now() >= at)
    }
}

fn clamp_amp_count(requested: usize, n: usize) -> usize {
    if n >= usize::BITS as usize - 1 {
        return requested;
    }
    requested.min(1usize << n).max(1)
}

/// Run one engine on the circuit. Timeouts produce a marked row, not an
/// error; anything else (bad cut, path budget, memory cap) is an error.
pub fn run_engine(
    engine: EngineKind,
    circuit: &Circuit,
    cut: Option<CutSpec>,
    opts: &EngineOptions,
) -> Result<EngineRun, EngineError> {
    let n = circuit.num_qubits();
    let amp_count = clamp_amp_count(opts.amp_count, n);
    let deadline = Deadline::starting_now(opts.timeout);
    let start = Instant::now();

    match engine.plan_mode() {
        None => {
            match schrodinger::simulate(
                circuit,
                AmpSelection::Prefix(amp_count),
                opts.max_qubits,
                &deadline,
            ) {
                Ok(amplitudes) => {
                    let elapsed = start.elapsed();
                    Ok(EngineRun {
                        engine,
                        result: Some(SimulationResult {
                            amplitudes,
                            n,
                            elapsed,
                            engine,
                        }),
                        timed_out: false,
                        preprocessing_seconds: 0.0,
                        simulation_seconds: elapsed.as_secs_f64(),
                        full_seconds: elapsed.as_secs_f64(),
                        n_paths: None,
                        counts: None,
                        memory: None,
                        workers_used: 1,
                    })
                }
                Err(SimError::Cancelled) => Ok(timed_out_run(engine, start)),
                Err(e) => Err(e.into()),
            }
        }
        Some(mode) => {
            let cut = cut.ok_or(EngineError::CutRequired(engine))?;
            let plan = build_plan(
                circuit,
                cut,
                mode,
                opts.max_block_qubits,
                opts.truncation_tol,
            )
            .map_err(HsfError::Plan)?;
            let space = enumerate_paths(&plan, opts.path_budget)?;
            // Timed-out rows still report the path count and plan summary;
            // only the amplitudes are missing.
            let timed_out = |start: Instant, preprocessing_seconds: f64| EngineRun {
                preprocessing_seconds,
                n_paths: Some(space.n_paths()),
                counts: Some(plan.counts().clone()),
                ..timed_out_run(engine, start)
            };
            if deadline.is_cancelled() {
                return Ok(timed_out(start, start.elapsed().as_secs_f64()));
            }
            let preprocessing_seconds = start.elapsed().as_secs_f64();

            let sim_start = Instant::now();
            let outcome = run_paths(&plan, space.n_paths(), amp_count, opts, &deadline);
            let simulation_seconds = sim_start.elapsed().as_secs_f64();
            let full_seconds = start.elapsed().as_secs_f64();

            let (amplitudes, memory, workers_used) = match outcome {
                Ok(v) => v,
                Err(EngineError::Hsf(HsfError::Cancelled)) => {
                    return Ok(timed_out(start, preprocessing_seconds))
                }
                Err(e) => return Err(e),
            };
            Ok(EngineRun {
                engine,
                result: Some(SimulationResult {
                    amplitudes,
                    n,
                    elapsed: start.elapsed(),
                    engine,
                }),
                timed_out: false,
                preprocessing_seconds,
                simulation_seconds,
                full_seconds,
                n_paths: Some(space.n_paths()),
                counts: Some(plan.counts().clone()),
                memory: Some(memory),
                workers_used,
            })
        }
    }
}

fn timed_out_run(engine: EngineKind, start: Instant) -> EngineRun {
    let elapsed = start.elapsed().as_secs_f64();
    EngineRun {
        engine,
        result: None,
        timed_out: true,
        preprocessing_seconds: 0.0,
        simulation_seconds: elapsed,
        full_seconds: elapsed,
        n_paths: None,
        counts: None,
        memory: None,
        workers_used: 1,
    }
}

/// Execute all paths of a plan. Deterministic mode walks the whole range on
/// one runner; otherwise contiguous ranges go to a worker pool and partial
/// buffers merge in range order, so results do not depend on scheduling.
fn run_paths(
    plan: &CutPlan,
    n_paths: u128,
    amp_count: usize,
    opts: &EngineOptions,
    cancel: &Deadline,
) -> Result<(Vec<Complex64>, MemoryStats, usize), EngineError> {
    let space = enumerate_paths(plan, u128::MAX).expect("budget already checked");
    if opts.deterministic || opts.workers == 1 || n_paths <= 1 {
        let mut partial = vec![C_ZERO; amp_count];
        let mut runner = PathRunner::new(plan);
        runner
            .accumulate_range(0, n_paths, &mut partial, cancel)
            .map_err(EngineError::Hsf)?;
        return Ok((partial, runner.stats(), 1));
    }

    let workers = if opts.workers == 0 {
        rayon::current_num_threads()
    } else {
        opts.workers
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))?;
    let ranges = space.split(workers);
    let parts: Result<Vec<(Vec<Complex64>, MemoryStats)>, HsfError> = pool.install(|| {
        ranges
            .par_iter()
            .map(|&(lo, hi)| {
                let mut partial = vec![C_ZERO; amp_count];
                let mut runner = PathRunner::new(plan);
                runner.accumulate_range(lo, hi, &mut partial, cancel)?;
                Ok((partial, runner.stats()))
            })
            .collect()
    });
    let parts = parts.map_err(EngineError::Hsf)?;

    let mut merged = vec![C_ZERO; amp_count];
    let mut memory = MemoryStats::default();
    let used = parts.len();
    for (partial, stats) in parts {
        for (m, p) in merged.iter_mut().zip(&partial) {
            *m += p;
        }
        memory.peak_half_state_len = memory.peak_half_state_len.max(stats.peak_half_state_len);
        memory.half_state_allocations = memory
            .half_state_allocations
            .max(stats.half_state_allocations);
        memory.total_half_state_len = memory.total_half_state_len.max(stats.total_half_state_len);
    }
    Ok((merged, memory, used))
}

/// Run each selected engine in turn on the same circuit. Timings never
/// contend: one engine at a time, parallelism only inside the HSF path
/// loop.
pub fn run_engines(
    engines: &[EngineKind],
    circuit: &Circuit,
    cut: Option<CutSpec>,
    opts: &EngineOptions,
) -> Result<Vec<EngineRun>, EngineError> {
    engines
        .iter()
        .map(|&k| run_engine(k, circuit, cut, opts))
        .collect()
}

/// Largest amplitude deviation across all pairs of completed engines, over
/// the common prefix.
pub fn max_cross_deviation(runs: &[EngineRun]) -> Option<f64> {
    let done: Vec<&SimulationResult> = runs.iter().filter_map(|r| r.result.as_ref()).collect();
    if done.len() < 2 {
        return None;
    }
    let mut max = 0.0f64;
    for (i, a) in done.iter().enumerate() {
        for b in &done[i + 1..] {
            let len = a.amplitudes.len().min(b.amplitudes.len());
            for (x, y) in a.amplitudes[..len].iter().zip(&b.amplitudes[..len]) {
                max = max.max((x - y).norm());
            }
        }
    }
    Some(max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hsf_core::circuit::parse_circuit;

    fn bell() -> Circuit {
        parse_circuit("qubits 2\nh 0\ncnot 0 1").unwrap()
    }

    #[test]
    fn all_engines_agree_on_bell() {
        let opts = EngineOptions {
            amp_count: 4,
            ..Default::default()
        };
        let runs = run_engines(&EngineKind::all(), &bell(), Some(CutSpec::new(0)), &opts).unwrap();
        assert_eq!(runs.len(), 3);
        for run in &runs {
            assert!(!run.timed_out);
            let amps = &run.result.as_ref().unwrap().amplitudes;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            assert!((amps[0].re - s).abs() < 1e-12);
            assert!((amps[3].re - s).abs() < 1e-12);
        }
        assert!(max_cross_deviation(&runs).unwrap() < 1e-12);
        assert_eq!(runs[1].n_paths, Some(2));
        assert_eq!(runs[2].n_paths, Some(2));
    }

    #[test]
    fn hsf_without_cut_is_an_error() {
        let err = run_engine(
            EngineKind::HsfJoint,
            &bell(),
            None,
            &EngineOptions::default(),
        );
        assert!(matches!(
            err,
            Err(EngineError::CutRequired(EngineKind::HsfJoint))
        ));
    }

    #[test]
    fn zero_timeout_marks_run_timed_out() {
        let opts = EngineOptions {
            amp_count: 4,
            timeout: Some(Duration::from_secs(0)),
            ..Default::default()
        };
        let run = run_engine(EngineKind::Schrodinger, &bell(), None, &opts).unwrap();
        assert!(run.timed_out);
        assert!(run.result.is_none());
        // A timed-out HSF row still reports its path count.
        let run2 = run_engine(
            EngineKind::HsfStandard,
            &bell(),
            Some(CutSpec::new(0)),
            &opts,
        )
        .unwrap();
        assert!(run2.timed_out);
        assert_eq!(run2.n_paths, Some(2));
        assert!(run2.counts.is_some());
        // Other engines still run afterwards.
        let run3 = run_engine(
            EngineKind::HsfJoint,
            &bell(),
            Some(CutSpec::new(0)),
            &EngineOptions {
                amp_count: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!run3.timed_out);
    }

    #[test]
    fn deterministic_runs_are_bit_identical() {
        let mut opts = EngineOptions {
            amp_count: 16,
            deterministic: true,
            ..Default::default()
        };
        let (circuit, cut) =
            hsf_core::random::random_circuit(&hsf_core::random::RandomCircuitConfig {
                num_qubits: 6,
                local_gates: 12,
                crossing_gates: 3,
                seed: 99,
            });
        let a = run_engine(EngineKind::HsfJoint, &circuit, Some(cut), &opts).unwrap();
        let b = run_engine(EngineKind::HsfJoint, &circuit, Some(cut), &opts).unwrap();
        let (ra, rb) = (a.result.unwrap(), b.result.unwrap());
        assert_eq!(ra.amplitudes.len(), rb.amplitudes.len());
        for (x, y) in ra.amplitudes.iter().zip(&rb.amplitudes) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        // Parallel execution agrees numerically.
        opts.deterministic = false;
        opts.workers = 4;
        let c = run_engine(EngineKind::HsfJoint, &circuit, Some(cut), &opts).unwrap();
        let rc = c.result.unwrap();
        let dev = ra
            .amplitudes
            .iter()
            .zip(&rc.amplitudes)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12);
    }
}
