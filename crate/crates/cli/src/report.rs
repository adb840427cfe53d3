//! JSON and text reports: per-engine timing rows with the two-line split
//! (full time with preprocessing vs simulation only), plan summaries, and
//! the S/J and T/J performance ratios.

use hsf_core::plan::PathCountReport;
use serde::{Deserialize, Serialize};

use crate::engines::{max_cross_deviation, EngineKind, EngineRun};

pub const DEVIATION_LIMIT: f64 = 1e-10;

fn sat_u64(x: u128) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

fn log2_exact(x: u128) -> Option<u32> {
    x.is_power_of_two().then(|| x.trailing_zeros())
}

/// Machine-readable analogue of one timing row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimingReport {
    pub engine: String,
    pub n_p: Option<u64>,
    pub preprocessing_seconds: f64,
    pub simulation_seconds: f64,
    pub amp_count: usize,
}

pub fn timing_report(run: &EngineRun, amp_count: usize) -> TimingReport {
    TimingReport {
        engine: run.engine.name().to_string(),
        n_p: run.n_paths.map(sat_u64),
        preprocessing_seconds: run.preprocessing_seconds,
        simulation_seconds: run.simulation_seconds,
        amp_count,
    }
}

/// Plan summary: block count, separate cuts, and both path counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanSummary {
    pub blocks: usize,
    pub separate: usize,
    /// Crossing-gate total: the cuts a purely per-gate scheme performs.
    pub separate_cuts: usize,
    pub n_p_standard: u64,
    pub n_p_standard_log2: Option<u32>,
    pub n_p_joint: u64,
    pub n_p_joint_log2: Option<u32>,
    pub block_details: Vec<BlockSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockSummary {
    pub gates: usize,
    pub rank: usize,
    pub rank_bound: u64,
    pub member_rank_product: u64,
}

impl PlanSummary {
    pub fn from_counts(counts: &PathCountReport) -> PlanSummary {
        PlanSummary {
            blocks: counts.block_count,
            separate: counts.separate_count,
            separate_cuts: counts.crossing_gates,
            n_p_standard: sat_u64(counts.n_standard),
            n_p_standard_log2: log2_exact(counts.n_standard),
            n_p_joint: sat_u64(counts.n_joint),
            n_p_joint_log2: log2_exact(counts.n_joint),
            block_details: counts
                .blocks
                .iter()
                .map(|b| BlockSummary {
                    gates: b.gates,
                    rank: b.rank,
                    rank_bound: sat_u64(b.rank_bound),
                    member_rank_product: sat_u64(b.member_rank_product),
                })
                .collect(),
        }
    }

    /// Table-style cell: `<blocks>+<separate>`.
    pub fn blocks_plus_separate(&self) -> String {
        format!("{}+{}", self.blocks, self.separate)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EngineReport {
    pub engine: String,
    pub timed_out: bool,
    pub full_seconds: f64,
    pub simulation_seconds: f64,
    pub preprocessing_seconds: f64,
    pub n_p: Option<u64>,
    pub n_p_log2: Option<u32>,
    pub amp_count: usize,
    pub plan: Option<PlanSummary>,
    pub peak_half_state_len: Option<usize>,
    pub workers: usize,
}

/// Full cross-engine report for one circuit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub circuit: String,
    pub num_qubits: usize,
    pub cut: Option<usize>,
    pub amp_count: usize,
    pub deterministic: bool,
    pub engines: Vec<EngineReport>,
    /// Largest amplitude deviation between completed engines.
    pub max_deviation: Option<f64>,
    pub deviation_ok: bool,
    /// Schrödinger full time over joint full time.
    pub s_over_j: Option<f64>,
    /// Standard full time over joint full time; a lower bound if the
    /// standard engine timed out.
    pub t_over_j: Option<f64>,
    pub t_over_j_is_lower_bound: bool,
}

impl RunReport {
    pub fn build(
        circuit_desc: &str,
        num_qubits: usize,
        cut: Option<usize>,
        amp_count: usize,
        deterministic: bool,
        runs: &[EngineRun],
    ) -> RunReport {
        let engines: Vec<EngineReport> = runs
            .iter()
            .map(|r| EngineReport {
                engine: r.engine.name().to_string(),
                timed_out: r.timed_out,
                full_seconds: r.full_seconds,
                simulation_seconds: r.simulation_seconds,
                preprocessing_seconds: r.preprocessing_seconds,
                n_p: r.n_paths.map(sat_u64),
                n_p_log2: r.n_paths.and_then(log2_exact),
                amp_count,
                plan: r.counts.as_ref().map(PlanSummary::from_counts),
                peak_half_state_len: r.memory.map(|m| m.peak_half_state_len),
                workers: r.workers_used,
            })
            .collect();
        let max_deviation = max_cross_deviation(runs);
        let deviation_ok = max_deviation.is_none_or(|d| d < DEVIATION_LIMIT);

        let full_of = |kind: EngineKind| {
            runs.iter()
                .find(|r| r.engine == kind)
                .map(|r| (r.full_seconds, r.timed_out))
        };
        let joint = full_of(EngineKind::HsfJoint).filter(|&(_, to)| !to);
        let mut s_over_j = None;
        let mut t_over_j = None;
        let mut t_lower = false;
        if let Some((jt, _)) = joint {
            if jt > 0.0 {
                if let Some((st, false)) = full_of(EngineKind::Schrodinger) {
                    s_over_j = Some(st / jt);
                }
                if let Some((tt, timed_out)) = full_of(EngineKind::HsfStandard) {
                    t_over_j = Some(tt / jt);
                    t_lower = timed_out;
                }
            }
        }
        RunReport {
            circuit: circuit_desc.to_string(),
            num_qubits,
            cut,
            amp_count,
            deterministic,
            engines,
            max_deviation,
            deviation_ok,
            s_over_j,
            t_over_j,
            t_over_j_is_lower_bound: t_lower,
        }
    }

    pub fn all_timed_out(&self) -> bool {
        !self.engines.is_empty() && self.engines.iter().all(|e| e.timed_out)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "circuit: {} ({} qubits, cut {}, {} amplitudes)\n",
            self.circuit,
            self.num_qubits,
            self.cut.map_or("-".to_string(), |c| c.to_string()),
            self.amp_count
        ));
        out.push_str(&format!(
            "{:<14} {:>12} {:>12} {:>12} {:>10} {:>12}\n",
            "engine", "full (s)", "sim (s)", "preproc (s)", "n_p", "blocks+sep"
        ));
        for e in &self.engines {
            let np = match (e.n_p_log2, e.n_p) {
                (Some(k), _) => format!("2^{k}"),
                (None, Some(v)) => v.to_string(),
                (None, None) => "-".to_string(),
            };
            let blocks = e
                .plan
                .as_ref()
                .map_or("-".to_string(), |p| p.blocks_plus_separate());
            if e.timed_out {
                out.push_str(&format!(
                    "{:<14} {:>12} {:>12} {:>12} {:>10} {:>12}\n",
                    e.engine, "timed out", "-", "-", np, blocks
                ));
            } else {
                out.push_str(&format!(
                    "{:<14} {:>12.3} {:>12.3} {:>12.3} {:>10} {:>12}\n",
                    e.engine,
                    e.full_seconds,
                    e.simulation_seconds,
                    e.preprocessing_seconds,
                    np,
                    blocks
                ));
            }
        }
        if let Some(dev) = self.max_deviation {
            out.push_str(&format!(
                "max amplitude deviation: {dev:.3e} ({})\n",
                if self.deviation_ok { "ok" } else { "FAIL" }
            ));
        }
        if let Some(r) = self.s_over_j {
            out.push_str(&format!("S/J = {r:.3}\n"));
        }
        if let Some(r) = self.t_over_j {
            let bound = if self.t_over_j_is_lower_bound {
                ">= "
            } else {
                ""
            };
            out.push_str(&format!("T/J = {bound}{r:.3}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{run_engines, EngineOptions};
    use hsf_core::circuit::{parse_circuit, CutSpec};

    #[test]
    fn report_round_trips_through_json() {
        let circuit = parse_circuit("qubits 2\nh 0\ncnot 0 1").unwrap();
        let opts = EngineOptions {
            amp_count: 4,
            ..Default::default()
        };
        let runs = run_engines(&EngineKind::all(), &circuit, Some(CutSpec::new(0)), &opts).unwrap();
        let report = RunReport::build("bell", 2, Some(0), 4, false, &runs);
        assert!(report.deviation_ok);
        assert!(report.s_over_j.is_some());
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.engines.len(), 3);
        assert_eq!(back.engines[2].n_p, Some(2));
        assert!(report.render_text().contains("hsf-joint"));
    }

    #[test]
    fn log2_annotation() {
        assert_eq!(log2_exact(2048), Some(11));
        assert_eq!(log2_exact(3), None);
    }
}
