use crate::error::{Result, ValidationReport};
use crate::model::nodeset::NodeSet;

/// Normalized phase weights must sum to 1 within this tolerance.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// One phase of a periodic schedule: a weight (relative block length) and a
/// per-phase payload — input distributions for a time-varying discrete
/// network, or the transmitter set for half-duplex operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase<P> {
    pub weight: f64,
    pub payload: P,
}

/// A periodic operation of the network with `K >= 1` phases. Block `b` uses
/// phase `b mod K`; phase `k` runs for `L_k` consecutive channel uses.
///
/// Integer block lengths are reduced by their gcd on construction, so the
/// stored weights of `(L, L, …)` and `(1, 1, …)` are identical and
/// length-weighted averages of equal-length schedules reduce to plain
/// averages bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<P> {
    phases: Vec<Phase<P>>,
}

impl<P> Schedule<P> {
    /// Schedule with integer block lengths `L_k >= 1`.
    pub fn from_lengths(phases: Vec<(u64, P)>) -> Result<Self> {
        let mut report = ValidationReport::new();
        if phases.is_empty() {
            report.push("schedule must have at least one phase");
        }
        for (k, (len, _)) in phases.iter().enumerate() {
            if *len == 0 {
                report.push(format!("phase {} has zero block length", k + 1));
            }
        }
        report.into_result()?;
        let g = phases.iter().fold(0u64, |g, (len, _)| gcd(g, *len));
        Ok(Self {
            phases: phases
                .into_iter()
                .map(|(len, payload)| Phase {
                    weight: (len / g) as f64,
                    payload,
                })
                .collect(),
        })
    }

    /// Schedule with pre-normalized weights `λ_k` summing to 1.
    pub fn from_weights(phases: Vec<(f64, P)>) -> Result<Self> {
        let mut report = ValidationReport::new();
        if phases.is_empty() {
            report.push("schedule must have at least one phase");
        }
        let mut sum = 0.0;
        for (k, (w, _)) in phases.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                report.push(format!("phase {} weight {w} must be positive", k + 1));
            }
            sum += w;
        }
        if report.is_valid() && (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            report.push(format!("phase weights sum to {sum}, expected 1"));
        }
        report.into_result()?;
        Ok(Self {
            phases: phases
                .into_iter()
                .map(|(weight, payload)| Phase { weight, payload })
                .collect(),
        })
    }

    /// Equal-length phases (the fixed-block-length periodic scheme).
    pub fn uniform(payloads: Vec<P>) -> Result<Self> {
        Self::from_lengths(payloads.into_iter().map(|p| (1, p)).collect())
    }

    pub fn phase_count(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[Phase<P>] {
        &self.phases
    }

    pub fn total_weight(&self) -> f64 {
        self.phases.iter().map(|p| p.weight).sum()
    }
}

impl Schedule<NodeSet> {
    /// Half-duplex phase payloads are transmitter sets; a phase in which
    /// everyone transmits has no receivers and is rejected. An empty
    /// transmitter set is allowed (a silent phase contributes zero rate).
    pub fn validate_half_duplex(&self, n: usize) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (k, phase) in self.phases.iter().enumerate() {
            if phase.payload.universe() != n {
                report.push(format!(
                    "phase {} transmitter set is over {} nodes, expected {n}",
                    k + 1,
                    phase.payload.universe()
                ));
            } else if phase.payload.is_full() {
                report.push(format!(
                    "phase {} has every node transmitting; at least one receiver is required",
                    k + 1
                ));
            }
        }
        report
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
