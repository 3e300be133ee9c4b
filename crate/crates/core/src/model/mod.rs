//! Channel models, schedules and rate vectors shared by every other module.
//!
//! All types are immutable after construction; constructors run the full
//! invariant check and fail with the collected [`ValidationReport`] on any
//! violation.

mod awgn;
mod dmc;
mod indexing;
mod nodeset;
mod schedule;

pub use awgn::AwgnNetwork;
pub use dmc::{DmcNetwork, InputDistributions, JointChannel, DEFAULT_TABLE_GUARD, PMF_TOLERANCE};
pub use indexing::MixedRadix;
pub use nodeset::{proper_nonempty_subsets, NodeSet, MAX_NODES};
pub use schedule::{Phase, Schedule, WEIGHT_TOLERANCE};

use crate::error::{Result, ValidationReport};

/// Per-source information rates `R_i >= 0` in bits per channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    rates: Vec<f64>,
}

impl RateVector {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        Self::validate(&rates).into_result()?;
        Ok(Self { rates })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            rates: vec![0.0; n],
        }
    }

    pub fn symmetric(n: usize, rate: f64) -> Result<Self> {
        Self::new(vec![rate; n])
    }

    pub fn validate(rates: &[f64]) -> ValidationReport {
        let mut report = ValidationReport::new();
        if rates.is_empty() {
            report.push("rate vector is empty");
        }
        for (i, &r) in rates.iter().enumerate() {
            if !r.is_finite() || r < 0.0 {
                report.push(format!(
                    "rate of node {} must be finite and >= 0, got {r}",
                    i + 1
                ));
            }
        }
        report
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn get(&self, node: usize) -> f64 {
        self.rates[node]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.rates
    }

    /// Sum of the rates of the members of `set`, in ascending node order.
    pub fn sum_over(&self, set: &NodeSet) -> f64 {
        set.iter().map(|j| self.rates[j]).sum()
    }

    /// Componentwise scaling by `t >= 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.rates.iter().map(|r| r * t).collect())
    }
}
