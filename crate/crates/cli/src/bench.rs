//! Benchmark harness: sweeps of SBM-QAOA instances, each engine timed over
//! repeated runs with mean and standard deviation, plus the per-instance
//! specification columns (qubits, cut position, gate and block counts).

use hsf_core::plan::{build_plan, PlanMode};
use hsf_core::qaoa::{qaoa_circuit, sbm_graph, QaoaError, QaoaInstance};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engines::{max_cross_deviation, run_engines, EngineError, EngineKind, EngineOptions};
use crate::report::PlanSummary;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Qaoa(QaoaError),
    #[error("{0}")]
    Plan(hsf_core::plan::PlanError),
}

/// One generated instance of the sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchInstanceSpec {
    pub sizes: [usize; 2],
    pub p_intra: f64,
    pub p_inter: f64,
    pub seed: u64,
    pub layers: usize,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub initial_h: bool,
}

impl BenchInstanceSpec {
    pub fn instantiate(&self) -> Result<QaoaInstance, QaoaError> {
        let graph = sbm_graph(self.sizes, self.p_intra, self.p_inter, self.seed);
        qaoa_circuit(
            &graph,
            self.layers,
            &self.gammas,
            &self.betas,
            self.initial_h,
        )
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub instances: Vec<BenchInstanceSpec>,
    pub engines: Vec<EngineKind>,
    pub repeats: usize,
    pub opts: EngineOptions,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EngineStats {
    pub engine: String,
    pub timed_out: bool,
    pub full_mean: f64,
    pub full_std: f64,
    pub sim_mean: f64,
    pub sim_std: f64,
    pub n_p: Option<u64>,
    pub n_p_log2: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub qubits: usize,
    pub cut_position: usize,
    pub two_qubit_gates: usize,
    pub sizes: [usize; 2],
    pub p_inter: f64,
    pub p_intra: f64,
    pub seed: u64,
    pub blocks_plus_separate: String,
    pub separate_cuts: usize,
    pub engines: Vec<EngineStats>,
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchTable {
    pub repeats: usize,
    pub rows: Vec<BenchRow>,
}

fn mean_std(samples: &[f64]) -> (f64, f64) {
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var =
        samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (samples.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Run the whole suite. An empty instance list yields an empty table.
pub fn run_bench(config: &BenchConfig) -> Result<BenchTable, BenchError> {
    let mut rows = Vec::new();
    for spec in &config.instances {
        let instance = spec.instantiate().map_err(BenchError::Qaoa)?;
        let circuit = &instance.circuit;
        let joint_plan = build_plan(
            circuit,
            instance.cut,
            PlanMode::Joint,
            config.opts.max_block_qubits,
            config.opts.truncation_tol,
        )
        .map_err(BenchError::Plan)?;
        let summary = PlanSummary::from_counts(joint_plan.counts());
        let two_qubit_gates = circuit
            .gates()
            .iter()
            .filter(|g| g.qubits().len() == 2)
            .count();

        let mut full: Vec<Vec<f64>> = vec![Vec::new(); config.engines.len()];
        let mut sim: Vec<Vec<f64>> = vec![Vec::new(); config.engines.len()];
        let mut timed_out = vec![false; config.engines.len()];
        let mut n_p: Vec<Option<u128>> = vec![None; config.engines.len()];
        let mut max_deviation: Option<f64> = None;
        for _ in 0..config.repeats {
            let runs = run_engines(&config.engines, circuit, Some(instance.cut), &config.opts)?;
            for (i, run) in runs.iter().enumerate() {
                full[i].push(run.full_seconds);
                sim[i].push(run.simulation_seconds);
                timed_out[i] |= run.timed_out;
                n_p[i] = n_p[i].or(run.n_paths);
            }
            if let Some(dev) = max_cross_deviation(&runs) {
                max_deviation = Some(max_deviation.map_or(dev, |d: f64| d.max(dev)));
            }
        }

        let engines = config
            .engines
            .iter()
            .enumerate()
            .map(|(i, kind)| {
                let (full_mean, full_std) = mean_std(&full[i]);
                let (sim_mean, sim_std) = mean_std(&sim[i]);
                EngineStats {
                    engine: kind.name().to_string(),
                    timed_out: timed_out[i],
                    full_mean,
                    full_std,
                    sim_mean,
                    sim_std,
                    n_p: n_p[i].map(|v| u64::try_from(v).unwrap_or(u64::MAX)),
                    n_p_log2: n_p[i].and_then(|v| v.is_power_of_two().then(|| v.trailing_zeros())),
                }
            })
            .collect();

        rows.push(BenchRow {
            name: format!("q{}-s{}", instance.graph.num_vertices(), spec.seed),
            qubits: instance.graph.num_vertices(),
            cut_position: instance.cut.boundary(),
            two_qubit_gates,
            sizes: spec.sizes,
            p_inter: spec.p_inter,
            p_intra: spec.p_intra,
            seed: spec.seed,
            blocks_plus_separate: summary.blocks_plus_separate(),
            separate_cuts: summary.separate_cuts,
            engines,
            max_deviation,
        });
    }
    Ok(BenchTable {
        repeats: config.repeats,
        rows,
    })
}

impl BenchTable {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<10} {:>3} {:>4} {:>5} {:>7} {:>7} {:>11} {:>9}",
            "instance", "q", "cut", "#2q", "p_intra", "p_inter", "blocks+sep", "sep.cuts"
        ));
        for row in self.rows.first().iter() {
            for e in &row.engines {
                out.push_str(&format!(" {:>24}", e.engine));
            }
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{:<10} {:>3} {:>4} {:>5} {:>7.2} {:>7.2} {:>11} {:>9}",
                row.name,
                row.qubits,
                row.cut_position,
                row.two_qubit_gates,
                row.p_intra,
                row.p_inter,
                row.blocks_plus_separate,
                row.separate_cuts
            ));
            for e in &row.engines {
                let cell = if e.timed_out {
                    "timed out".to_string()
                } else {
                    format!("{:.3} ({:.3})", e.full_mean, e.full_std)
                };
                let np = match (e.n_p_log2, e.n_p) {
                    (Some(k), _) => format!("2^{k}"),
                    (None, Some(v)) => v.to_string(),
                    _ => "-".to_string(),
                };
                out.push_str(&format!(" {:>16} {:>7}", cell, np));
            }
            if let Some(dev) = row.max_deviation {
                out.push_str(&format!("  dev {dev:.1e}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "mean (std) over {} run(s) per engine\n",
            self.repeats
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec(seed: u64) -> BenchInstanceSpec {
        BenchInstanceSpec {
            sizes: [4, 4],
            p_intra: 0.8,
            p_inter: 0.2,
            seed,
            layers: 1,
            gammas: vec![0.4],
            betas: vec![0.7],
            initial_h: true,
        }
    }

    #[test]
    fn empty_suite_gives_empty_table() {
        let config = BenchConfig {
            instances: vec![],
            engines: vec![EngineKind::Schrodinger],
            repeats: 3,
            opts: EngineOptions::default(),
        };
        let table = run_bench(&config).unwrap();
        assert!(table.rows.is_empty());
    }

    #[test]
    fn repeats_populate_std_dev_and_deviation_check() {
        let config = BenchConfig {
            instances: vec![small_spec(3)],
            engines: vec![EngineKind::Schrodinger, EngineKind::HsfJoint],
            repeats: 5,
            opts: EngineOptions {
                amp_count: 64,
                ..Default::default()
            },
        };
        let table = run_bench(&config).unwrap();
        assert_eq!(table.rows.len(), 1);
        let row = &table.rows[0];
        assert_eq!(row.engines.len(), 2);
        assert!(row.max_deviation.unwrap() < 1e-10);
        // Five runs of anything real have nonzero spread.
        assert!(row.engines[0].full_mean > 0.0);
        assert!(row.engines[0].full_std >= 0.0);
        assert!(table.render_text().contains("q8-s3"));
    }
}
