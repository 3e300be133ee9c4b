//! Cut-rate evaluators: the right-hand side of the achievability condition
//! for each supported channel model, evaluated for a single cut `(S, i₀)`.
//!
//! Every evaluator returns bits per channel use and sums in a fixed order
//! (ascending phase, ascending node) so results are reproducible bit for
//! bit.

use crate::error::{Error, Result, ValidationReport};
use crate::infotheory::{conditional_mi, MiQuery};
use crate::model::{AwgnNetwork, DmcNetwork, InputDistributions, NodeSet, Schedule};

/// A cut: a proper nonempty subset `S` and the receiving node `i₀ ∈ S`
/// that must hear the senders `Sᶜ` across the cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutQuery {
    subset: NodeSet,
    receiver: usize,
}

impl CutQuery {
    pub fn new(subset: NodeSet, receiver: usize) -> Result<Self> {
        if !subset.is_proper_nonempty() {
            return Err(Error::BadQuery(format!(
                "cut subset {subset} must be a proper nonempty subset"
            )));
        }
        if !subset.contains(receiver) {
            return Err(Error::BadQuery(format!(
                "cut receiver {} must belong to the subset {subset}",
                receiver + 1
            )));
        }
        Ok(Self { subset, receiver })
    }

    pub fn subset(&self) -> NodeSet {
        self.subset
    }

    pub fn receiver(&self) -> usize {
        self.receiver
    }

    pub fn senders(&self) -> NodeSet {
        self.subset.complement()
    }
}

/// Single-distribution discrete network: `I(X_{Sᶜ}; Y_{i₀} | X_S)`.
pub fn cut_rate_dmc(net: &DmcNetwork, dists: &InputDistributions, cut: &CutQuery) -> Result<f64> {
    let query = MiQuery::new(cut.receiver, cut.subset)?;
    conditional_mi(net, dists, &query)
}

/// Periodic discrete network with varying block lengths: the
/// length-weighted average `Σ_k L_k I_k / Σ_k L_k` of the per-phase
/// conditional mutual informations.
pub fn cut_rate_periodic_dmc(
    net: &DmcNetwork,
    schedule: &Schedule<InputDistributions>,
    cut: &CutQuery,
) -> Result<f64> {
    let mut weighted = 0.0f64;
    let mut total = 0.0f64;
    for phase in schedule.phases() {
        let mi = cut_rate_dmc(net, &phase.payload, cut)?;
        weighted += phase.weight * mi;
        total += phase.weight;
    }
    Ok(weighted / total)
}

/// Equal-block-length periodic form: the plain average `(1/K) Σ_k I_k`.
/// Agrees bit for bit with [`cut_rate_periodic_dmc`] on a schedule with
/// equal lengths.
pub fn cut_rate_periodic_dmc_equal(
    net: &DmcNetwork,
    phases: &[InputDistributions],
    cut: &CutQuery,
) -> Result<f64> {
    if phases.is_empty() {
        return Err(Error::BadQuery("periodic schedule has no phases".into()));
    }
    let mut sum = 0.0f64;
    let mut count = 0.0f64;
    for dists in phases {
        sum += cut_rate_dmc(net, dists, cut)?;
        count += 1.0;
    }
    Ok(sum / count)
}

/// Full-duplex AWGN network:
/// `log₂(1 + Σ_{j∈Sᶜ} |g_{j,i₀}|² P_j / noise_power)`.
pub fn cut_rate_awgn_fd(net: &AwgnNetwork, cut: &CutQuery) -> Result<f64> {
    check_universe(net.node_count(), cut)?;
    Ok(received_snr_log2(net, &cut.senders(), cut.receiver))
}

/// Half-duplex AWGN network under a periodic transmitter-set schedule:
/// phases where the receiver transmits contribute nothing, otherwise only
/// senders across the cut that are actually transmitting count.
pub fn cut_rate_awgn_hd(
    net: &AwgnNetwork,
    schedule: &Schedule<NodeSet>,
    cut: &CutQuery,
) -> Result<f64> {
    check_universe(net.node_count(), cut)?;
    let senders = cut.senders();
    let mut weighted = 0.0f64;
    let mut total = 0.0f64;
    for phase in schedule.phases() {
        let transmitters = &phase.payload;
        if !transmitters.contains(cut.receiver) {
            let active = senders.intersect(transmitters);
            weighted += phase.weight * received_snr_log2(net, &active, cut.receiver);
        }
        total += phase.weight;
    }
    Ok(weighted / total)
}

/// `log₂(1 + Σ_{j∈senders} |g_{j,rx}|² P_j / noise)`, ascending j.
fn received_snr_log2(net: &AwgnNetwork, senders: &NodeSet, receiver: usize) -> f64 {
    let mut power_sum = 0.0f64;
    for j in senders.iter() {
        power_sum += net.gain_sq(j, receiver) * net.power(j);
    }
    (1.0 + power_sum / net.noise_power()).log2()
}

fn check_universe(n: usize, cut: &CutQuery) -> Result<()> {
    if cut.subset.universe() != n {
        return Err(Error::BadQuery(format!(
            "cut over {} nodes against a {n}-node network",
            cut.subset.universe()
        )));
    }
    Ok(())
}

/// A channel model paired with whatever schedule it needs, so region
/// exploration can evaluate cuts without caring which model kind it is.
#[derive(Debug, Clone)]
pub enum Scenario {
    /// Discrete memoryless network with one product input distribution.
    Dmc {
        network: DmcNetwork,
        inputs: InputDistributions,
    },
    /// Discrete memoryless network operated periodically with per-phase
    /// input distributions and block lengths.
    PeriodicDmc {
        network: DmcNetwork,
        schedule: Schedule<InputDistributions>,
    },
    /// Full-duplex AWGN network.
    AwgnFullDuplex { network: AwgnNetwork },
    /// Half-duplex AWGN network with a periodic transmitter-set schedule.
    AwgnHalfDuplex {
        network: AwgnNetwork,
        schedule: Schedule<NodeSet>,
    },
}

impl Scenario {
    pub fn dmc(network: DmcNetwork, inputs: InputDistributions) -> Result<Self> {
        let mut report = ValidationReport::new();
        if !inputs.matches(network.input_alphabet_sizes()) {
            report.push("input distributions do not match the network alphabets");
        }
        report.into_result()?;
        Ok(Self::Dmc { network, inputs })
    }

    pub fn periodic_dmc(
        network: DmcNetwork,
        schedule: Schedule<InputDistributions>,
    ) -> Result<Self> {
        let mut report = ValidationReport::new();
        for (k, phase) in schedule.phases().iter().enumerate() {
            if !phase.payload.matches(network.input_alphabet_sizes()) {
                report.push(format!(
                    "phase {} input distributions do not match the network alphabets",
                    k + 1
                ));
            }
        }
        report.into_result()?;
        Ok(Self::PeriodicDmc { network, schedule })
    }

    pub fn awgn_fd(network: AwgnNetwork) -> Self {
        Self::AwgnFullDuplex { network }
    }

    pub fn awgn_hd(network: AwgnNetwork, schedule: Schedule<NodeSet>) -> Result<Self> {
        schedule
            .validate_half_duplex(network.node_count())
            .into_result()?;
        Ok(Self::AwgnHalfDuplex { network, schedule })
    }

    pub fn node_count(&self) -> usize {
        match self {
            Self::Dmc { network, .. } | Self::PeriodicDmc { network, .. } => network.node_count(),
            Self::AwgnFullDuplex { network } | Self::AwgnHalfDuplex { network, .. } => {
                network.node_count()
            }
        }
    }

    /// The cut rate in bits per channel use under whichever model this is.
    pub fn cut_rate(&self, cut: &CutQuery) -> Result<f64> {
        match self {
            Self::Dmc { network, inputs } => cut_rate_dmc(network, inputs, cut),
            Self::PeriodicDmc { network, schedule } => {
                cut_rate_periodic_dmc(network, schedule, cut)
            }
            Self::AwgnFullDuplex { network } => cut_rate_awgn_fd(network, cut),
            Self::AwgnHalfDuplex { network, schedule } => cut_rate_awgn_hd(network, schedule, cut),
        }
    }
}
