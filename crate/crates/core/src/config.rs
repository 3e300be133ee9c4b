//! JSON configuration schema: channel models, schedules, rates and run
//! parameters, with 1-based node numbering at the file boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport};
use crate::model::{
    AwgnNetwork, DmcNetwork, InputDistributions, JointChannel, NodeSet, RateVector, Schedule,
    DEFAULT_TABLE_GUARD,
};
use crate::rates::Scenario;

/// Top-level run configuration: one model, optional schedule and rates,
/// optional command-specific sections, and default command parameters
/// (command-line flags override them).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hdopt: Option<HdOptConfig>,
    #[serde(default)]
    pub params: ParamsConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type")]
pub enum ModelConfig {
    /// Discrete memoryless network. Receiver channels are given directly
    /// (`receiver_channels[i]` is a row-stochastic matrix with one row per
    /// joint input configuration) or derived from a full `joint` law.
    #[serde(rename = "dmc")]
    Dmc {
        n: usize,
        input_alphabet_sizes: Vec<usize>,
        output_alphabet_sizes: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        receiver_channels: Option<Vec<Vec<Vec<f64>>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        joint: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table_guard: Option<usize>,
    },
    /// Full-duplex AWGN network. Gains are squared magnitudes in
    /// `gain_sq`, or complex pairs `[re, im]` in `gains`.
    #[serde(rename = "awgn_fd")]
    AwgnFd {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gain_sq: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gains: Option<Vec<Vec<[f64; 2]>>>,
        powers: Vec<f64>,
        noise_power: f64,
    },
    /// Half-duplex AWGN network; needs a schedule with transmitter sets.
    #[serde(rename = "awgn_hd")]
    AwgnHd {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gain_sq: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gains: Option<Vec<Vec<[f64; 2]>>>,
        powers: Vec<f64>,
        noise_power: f64,
    },
}

impl ModelConfig {
    pub fn node_count(&self) -> usize {
        match self {
            Self::Dmc { n, .. } | Self::AwgnFd { n, .. } | Self::AwgnHd { n, .. } => *n,
        }
    }
}

/// One schedule phase: a `length` (positive integer) or a normalized
/// `weight`, plus the phase payload — `transmitters` (1-based nodes) for
/// half-duplex models, `inputs` (per-node pmfs) for periodic discrete
/// models.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transmitters: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub phases: Vec<PhaseConfig>,
}

/// Search section for the half-duplex schedule optimizer.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HdOptConfig {
    pub phases: usize,
    /// Candidate transmitter sets as lists of 1-based node numbers.
    pub candidates: Vec<Vec<usize>>,
    pub grid: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_evaluations: Option<usize>,
}

/// Command parameters; every field has a flag of the same name that wins
/// over the file value.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_blocks: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

/// External 1-based node list into an internal bitmask.
pub fn node_list_to_set(n: usize, nodes: &[usize]) -> Result<NodeSet> {
    let mut set = NodeSet::empty(n);
    for &v in nodes {
        if v == 0 || v > n {
            return Err(Error::BadQuery(format!("node {v} outside 1..={n}")));
        }
        set.insert(v - 1);
    }
    Ok(set)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::BadQuery(format!("config parse error: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Builds the scenario this config describes, enforcing the pairing
    /// rules between model kind and schedule payload.
    pub fn build_scenario(&self) -> Result<Scenario> {
        match &self.model {
            ModelConfig::Dmc { .. } => {
                let network = self.build_dmc()?;
                match (&self.schedule, &self.inputs) {
                    (Some(schedule), None) => {
                        let phases = self.dmc_phases(schedule)?;
                        Scenario::periodic_dmc(network, phases)
                    }
                    (None, Some(inputs)) => {
                        let dists = InputDistributions::new(inputs.clone())?;
                        Scenario::dmc(network, dists)
                    }
                    (Some(_), Some(_)) => Err(Error::BadQuery(
                        "give either top-level inputs or a schedule with per-phase inputs, not both"
                            .into(),
                    )),
                    (None, None) => Err(Error::BadQuery(
                        "discrete model needs input distributions (top-level inputs or schedule phases)"
                            .into(),
                    )),
                }
            }
            ModelConfig::AwgnFd { .. } => {
                if self.schedule.is_some() {
                    return Err(Error::BadQuery(
                        "full-duplex model takes no schedule".into(),
                    ));
                }
                Ok(Scenario::awgn_fd(self.build_awgn()?))
            }
            ModelConfig::AwgnHd { .. } => {
                let network = self.build_awgn()?;
                let schedule = self
                    .schedule
                    .as_ref()
                    .ok_or_else(|| Error::BadQuery("half-duplex model needs a schedule".into()))?;
                let schedule = self.hd_schedule(network.node_count(), schedule)?;
                Scenario::awgn_hd(network, schedule)
            }
        }
    }

    pub fn build_rates(&self) -> Result<RateVector> {
        let rates = self
            .rates
            .as_ref()
            .ok_or_else(|| Error::BadQuery("config has no rates".into()))?;
        RateVector::new(rates.clone())
    }

    fn build_dmc(&self) -> Result<DmcNetwork> {
        let ModelConfig::Dmc {
            n,
            input_alphabet_sizes,
            output_alphabet_sizes,
            receiver_channels,
            joint,
            table_guard,
        } = &self.model
        else {
            return Err(Error::BadQuery("model is not discrete".into()));
        };
        if input_alphabet_sizes.len() != *n {
            return Err(Error::BadQuery(format!(
                "{} input alphabets for n = {n}",
                input_alphabet_sizes.len()
            )));
        }
        let guard = table_guard.unwrap_or(DEFAULT_TABLE_GUARD);
        match (receiver_channels, joint) {
            (Some(tables), None) => {
                let flat: Vec<Vec<f64>> = tables
                    .iter()
                    .map(|rows| rows.iter().flatten().copied().collect())
                    .collect();
                DmcNetwork::with_guard(
                    input_alphabet_sizes.clone(),
                    output_alphabet_sizes.clone(),
                    flat,
                    guard,
                )
            }
            (None, Some(joint_rows)) => {
                let flat: Vec<f64> = joint_rows.iter().flatten().copied().collect();
                let joint = JointChannel::with_guard(
                    input_alphabet_sizes.clone(),
                    output_alphabet_sizes.clone(),
                    flat,
                    guard,
                )?;
                DmcNetwork::from_joint(&joint)
            }
            (Some(_), Some(_)) => Err(Error::BadQuery(
                "give receiver_channels or joint, not both".into(),
            )),
            (None, None) => Err(Error::BadQuery(
                "discrete model needs receiver_channels or joint".into(),
            )),
        }
    }

    fn build_awgn(&self) -> Result<AwgnNetwork> {
        let (n, gain_sq, gains, powers, noise_power) = match &self.model {
            ModelConfig::AwgnFd {
                n,
                gain_sq,
                gains,
                powers,
                noise_power,
            }
            | ModelConfig::AwgnHd {
                n,
                gain_sq,
                gains,
                powers,
                noise_power,
            } => (*n, gain_sq, gains, powers, noise_power),
            ModelConfig::Dmc { .. } => return Err(Error::BadQuery("model is not AWGN".into())),
        };
        let net = match (gain_sq, gains) {
            (Some(sq), None) => AwgnNetwork::new(sq.clone(), powers.clone(), *noise_power)?,
            (None, Some(complex)) => AwgnNetwork::from_complex_gains(
                complex
                    .iter()
                    .map(|row| row.iter().map(|&[re, im]| (re, im)).collect())
                    .collect(),
                powers.clone(),
                *noise_power,
            )?,
            (Some(_), Some(_)) => {
                return Err(Error::BadQuery("give gain_sq or gains, not both".into()))
            }
            (None, None) => {
                return Err(Error::BadQuery("AWGN model needs gain_sq or gains".into()))
            }
        };
        if net.node_count() != n {
            return Err(Error::BadQuery(format!(
                "gain matrix is {}x{} but n = {n}",
                net.node_count(),
                net.node_count()
            )));
        }
        Ok(net)
    }

    fn dmc_phases(&self, schedule: &ScheduleConfig) -> Result<Schedule<InputDistributions>> {
        let mut payloads = Vec::with_capacity(schedule.phases.len());
        for (k, phase) in schedule.phases.iter().enumerate() {
            if phase.transmitters.is_some() {
                return Err(Error::BadQuery(format!(
                    "phase {}: transmitter sets belong to half-duplex schedules",
                    k + 1
                )));
            }
            let inputs = phase.inputs.as_ref().ok_or_else(|| {
                Error::BadQuery(format!("phase {} has no input distributions", k + 1))
            })?;
            payloads.push(InputDistributions::new(inputs.clone())?);
        }
        build_schedule(&schedule.phases, payloads)
    }

    fn hd_schedule(&self, n: usize, schedule: &ScheduleConfig) -> Result<Schedule<NodeSet>> {
        let mut payloads = Vec::with_capacity(schedule.phases.len());
        for (k, phase) in schedule.phases.iter().enumerate() {
            if phase.inputs.is_some() {
                return Err(Error::BadQuery(format!(
                    "phase {}: input distributions belong to discrete schedules",
                    k + 1
                )));
            }
            let transmitters = phase.transmitters.as_ref().ok_or_else(|| {
                Error::BadQuery(format!("phase {} has no transmitter set", k + 1))
            })?;
            payloads.push(node_list_to_set(n, transmitters)?);
        }
        build_schedule(&schedule.phases, payloads)
    }

    pub fn hd_candidates(&self, n: usize) -> Result<Vec<NodeSet>> {
        let hdopt = self
            .hdopt
            .as_ref()
            .ok_or_else(|| Error::BadQuery("config has no hdopt section".into()))?;
        hdopt
            .candidates
            .iter()
            .map(|nodes| node_list_to_set(n, nodes))
            .collect()
    }

    /// Full validation pass: collects every violation instead of stopping
    /// at the first.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        match self.build_scenario() {
            Ok(_) => {}
            Err(Error::Validation(inner)) => report.absorb("model", inner),
            Err(e) => report.push(e.to_string()),
        }
        if let Some(rates) = &self.rates {
            report.absorb("rates", RateVector::validate(rates));
            if rates.len() != self.model.node_count() {
                report.push(format!(
                    "rates: {} entries for {} nodes",
                    rates.len(),
                    self.model.node_count()
                ));
            }
        }
        if let Some(directions) = &self.directions {
            for (idx, d) in directions.iter().enumerate() {
                if d.len() != self.model.node_count() {
                    report.push(format!(
                        "directions[{idx}]: {} entries for {} nodes",
                        d.len(),
                        self.model.node_count()
                    ));
                }
            }
        }
        report
    }
}

/// Mixed length/weight phases are rejected; lengths build a gcd-reduced
/// schedule, weights must already be normalized.
fn build_schedule<P>(phases: &[PhaseConfig], payloads: Vec<P>) -> Result<Schedule<P>> {
    let all_lengths = phases
        .iter()
        .all(|p| p.length.is_some() && p.weight.is_none());
    let all_weights = phases
        .iter()
        .all(|p| p.weight.is_some() && p.length.is_none());
    if all_lengths {
        Schedule::from_lengths(
            phases
                .iter()
                .zip(payloads)
                .map(|(p, payload)| (p.length.unwrap(), payload))
                .collect(),
        )
    } else if all_weights {
        Schedule::from_weights(
            phases
                .iter()
                .zip(payloads)
                .map(|(p, payload)| (p.weight.unwrap(), payload))
                .collect(),
        )
    } else {
        Err(Error::BadQuery(
            "every phase needs a length, or every phase needs a weight".into(),
        ))
    }
}
