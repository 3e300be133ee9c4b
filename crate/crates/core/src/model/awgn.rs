use crate::error::{Result, ValidationReport};

/// An AWGN wireless network: received signals are attenuated sums of the
/// other nodes' transmissions plus circularly symmetric Gaussian noise.
///
/// Gains are stored as squared magnitudes `|g_{i,j}|^2` (row = transmitter,
/// column = receiver). The noise variance is `noise_power` to avoid the
/// clash between the node-set symbol and the noise symbol.
///
/// `powers[i]` is the average transmit power of node `i+1`: per symbol in
/// full-duplex operation, per transmitting slot in half-duplex operation
/// (the half-duplex constraint normalizes by the number of slots in which
/// the node actually transmits, so no duty-cycle rescaling is applied when
/// evaluating half-duplex cut rates).
#[derive(Debug, Clone, PartialEq)]
pub struct AwgnNetwork {
    gain_sq: Vec<Vec<f64>>,
    powers: Vec<f64>,
    noise_power: f64,
}

impl AwgnNetwork {
    pub fn new(gain_sq: Vec<Vec<f64>>, powers: Vec<f64>, noise_power: f64) -> Result<Self> {
        Self::validate(&gain_sq, &powers, noise_power).into_result()?;
        Ok(Self {
            gain_sq,
            powers,
            noise_power,
        })
    }

    /// Builds the squared-magnitude matrix from complex gains `(re, im)`.
    pub fn from_complex_gains(
        gains: Vec<Vec<(f64, f64)>>,
        powers: Vec<f64>,
        noise_power: f64,
    ) -> Result<Self> {
        let gain_sq = gains
            .iter()
            .map(|row| row.iter().map(|&(re, im)| re * re + im * im).collect())
            .collect();
        Self::new(gain_sq, powers, noise_power)
    }

    pub fn validate(gain_sq: &[Vec<f64>], powers: &[f64], noise_power: f64) -> ValidationReport {
        let mut report = ValidationReport::new();
        let n = gain_sq.len();
        if n == 0 {
            report.push("network must have at least one node");
        }
        for (i, row) in gain_sq.iter().enumerate() {
            if row.len() != n {
                report.push(format!(
                    "gain row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                ));
                continue;
            }
            for (j, &g) in row.iter().enumerate() {
                if i == j {
                    continue; // diagonal unused
                }
                if !g.is_finite() || g < 0.0 {
                    report.push(format!(
                        "gain_sq[{}][{}] = {g} must be finite and >= 0",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        if powers.len() != n {
            report.push(format!("{} powers given for {n} nodes", powers.len()));
        }
        for (i, &p) in powers.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                report.push(format!(
                    "power of node {} must be finite and >= 0, got {p}",
                    i + 1
                ));
            }
        }
        if !(noise_power.is_finite() && noise_power > 0.0) {
            report.push(format!("noise must be positive, got {noise_power}"));
        }
        report
    }

    pub fn node_count(&self) -> usize {
        self.gain_sq.len()
    }

    /// `|g_{tx,rx}|^2` with internal 0-based indices.
    pub fn gain_sq(&self, tx: usize, rx: usize) -> f64 {
        self.gain_sq[tx][rx]
    }

    pub fn power(&self, node: usize) -> f64 {
        self.powers[node]
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }
}
