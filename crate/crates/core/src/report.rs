//! Report types emitted by the region and simulator front-ends: stable
//! JSON schemas (all of them re-parse) plus fixed-column CSV renderings.
//!
//! Node numbers in reports are external (1-based); subset masks use bit
//! `i` for node `i+1`.

use serde::{Deserialize, Serialize};

use crate::region::{FeasibilityCertificate, SubsetOutcome};
use crate::simulator::{DelaySummary, Trace};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DeficitReport {
    pub node: usize,
    pub cut_rate_bits: f64,
    pub deficit_bits: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SubsetReport {
    pub subset_mask: u32,
    pub subset_nodes: Vec<usize>,
    pub rate_sum_bits: f64,
    /// Witness node, absent for violated subsets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
    /// The witness's cut rate, or the best cut rate among the members of a
    /// violated subset.
    pub cut_rate_bits: f64,
    pub slack_bits: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deficits: Option<Vec<DeficitReport>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateReport {
    pub verdict: String,
    pub n: usize,
    pub margin_bits: f64,
    pub rates_bits: Vec<f64>,
    pub subsets: Vec<SubsetReport>,
}

impl CertificateReport {
    pub fn from_certificate(cert: &FeasibilityCertificate) -> Self {
        let subsets = cert
            .entries
            .iter()
            .map(|entry| {
                let (witness, cut_rate, slack, deficits) = match &entry.outcome {
                    SubsetOutcome::Witness {
                        node,
                        cut_rate_bits,
                        slack_bits,
                    } => (Some(node + 1), *cut_rate_bits, *slack_bits, None),
                    SubsetOutcome::Violation { deficits } => {
                        let best = entry.best_cut_rate_bits();
                        (
                            None,
                            best,
                            best - entry.rate_sum_bits,
                            Some(
                                deficits
                                    .iter()
                                    .map(|d| DeficitReport {
                                        node: d.node + 1,
                                        cut_rate_bits: d.cut_rate_bits,
                                        deficit_bits: d.deficit_bits,
                                    })
                                    .collect(),
                            ),
                        )
                    }
                };
                SubsetReport {
                    subset_mask: entry.subset.bits(),
                    subset_nodes: entry.subset.external_nodes(),
                    rate_sum_bits: entry.rate_sum_bits,
                    witness,
                    cut_rate_bits: cut_rate,
                    slack_bits: slack,
                    deficits,
                }
            })
            .collect();
        Self {
            verdict: if cert.feasible {
                "feasible".to_string()
            } else {
                "infeasible".to_string()
            },
            n: cert.n,
            margin_bits: cert.margin_bits,
            rates_bits: cert.rates_bits.clone(),
            subsets,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("subset_mask,witness,cut_rate_bits,rate_sum_bits,slack_bits\n");
        for s in &self.subsets {
            let witness = s.witness.map(|w| w.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.subset_mask, witness, s.cut_rate_bits, s.rate_sum_bits, s.slack_bits
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SymRateReport {
    pub n: usize,
    pub tol_bits: f64,
    pub symmetric_rate_bits: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoundaryRow {
    pub direction: Vec<f64>,
    pub rates_bits: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoundaryReport {
    pub n: usize,
    pub tol_bits: f64,
    pub rows: Vec<BoundaryRow>,
}

impl BoundaryReport {
    pub fn to_csv(&self) -> String {
        let mut header = String::from("direction_index");
        for i in 1..=self.n {
            header.push_str(&format!(",direction_{i}"));
        }
        for i in 1..=self.n {
            header.push_str(&format!(",rate_{i}_bits"));
        }
        header.push('\n');
        let mut out = header;
        for (idx, row) in self.rows.iter().enumerate() {
            out.push_str(&idx.to_string());
            for d in &row.direction {
                out.push_str(&format!(",{d}"));
            }
            for r in &row.rates_bits {
                out.push_str(&format!(",{r}"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HdPhaseReport {
    pub weight: f64,
    pub transmitters: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HdOptReport {
    pub n: usize,
    pub phases: Vec<HdPhaseReport>,
    pub symmetric_rate_bits: f64,
    pub tol_bits: f64,
    pub grid: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimulationReport {
    pub n: usize,
    pub oracle: String,
    pub seed: u64,
    pub blocks_run: u64,
    pub coverage_bound: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion_block: Option<u64>,
    pub bound_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_delay: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub early_window_sup: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub late_window_sup: Option<i64>,
    pub delays_stabilized: bool,
}

impl SimulationReport {
    pub fn from_trace(trace: &Trace, summary: &DelaySummary) -> Self {
        Self {
            n: trace.n,
            oracle: trace.oracle_mode.as_str().to_string(),
            seed: trace.seed,
            blocks_run: trace.blocks.len() as u64,
            coverage_bound: trace.coverage_bound,
            completion_block: trace.completion_block,
            bound_ok: trace
                .completion_block
                .is_some_and(|b| b <= trace.coverage_bound),
            sup_delay: summary.sup_delay,
            early_window_sup: summary.early_window_sup,
            late_window_sup: summary.late_window_sup,
            delays_stabilized: summary.stabilized,
        }
    }
}

/// Per-block per-node trace rows:
/// `block,node,coverage_mask,min_frontier,max_delay_so_far`.
pub fn trace_to_csv(trace: &Trace) -> String {
    let mut out = String::from("block,node,coverage_mask,min_frontier,max_delay_so_far\n");
    for record in &trace.blocks {
        for node in 0..trace.n {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                record.block,
                node + 1,
                record.coverage[node].bits(),
                record.min_frontier[node],
                record.max_delay_so_far[node],
            ));
        }
    }
    out
}
