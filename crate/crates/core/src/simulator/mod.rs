//! Block-level simulation of the greedy relay scheme at the covering
//! abstraction: per-node coverage sets, per-source message frontiers, and
//! decode-delay accounting, driven by pluggable decode oracles.
//!
//! The simulator works above the coding layer. What a node can decode is
//! not derived from signals; it is supplied by an oracle constrained by the
//! admissibility contract: in every block, for every proper nonempty subset
//! `S`, the certificate's witness `i₀(S)` decodes at least one node of
//! `Sᶜ`. Everything the completion and delay checks verify follows from
//! that contract and the relay discipline alone.
//!
//! For periodic scenarios one simulated block stands for a whole period
//! (a group block): the witness structure comes from the period-averaged
//! cut rates, so all block counts here are in group-block units.

mod exhaustive;
mod oracle;

pub use exhaustive::{
    enumerate_witness_maps, exhaustive_worst_completion, verify_coverage_bound_exhaustive,
    ExhaustiveReport, EXHAUSTIVE_MAX_NODES,
};
pub use oracle::{DecodeOracle, OracleMode};

use crate::error::{Error, Result};
use crate::model::{proper_nonempty_subsets, NodeSet, RateVector};
use crate::rates::Scenario;
use crate::region::{check_feasible, WitnessMap, DEFAULT_MARGIN};

/// Sentinel frontier for a source the node does not cover yet: behaves as
/// "zero messages relayed" once coverage arrives (`-1 + 1 = 0`).
pub const NO_FRONTIER: i64 = -1;

/// Coverage, transmit frontiers and knowledge frontiers at the end of a
/// block.
///
/// `coverage[i]` always contains `i` and never shrinks. For a covered
/// source `j`, `transmit[i][j] = m` means node `i` has relayed messages
/// `1..=m` of source `j` (its block-`m` message last); `knowledge[i][j]`
/// is the contiguous prefix of source `j`'s messages that `i` has decoded.
/// `transmit[i][j] <= knowledge[i][j]` always, and a frontier advances by
/// at most one message per block.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub block: u64,
    pub coverage: Vec<NodeSet>,
    pub transmit: Vec<Vec<i64>>,
    pub knowledge: Vec<Vec<i64>>,
}

impl SimState {
    /// End-of-block-0 state: every node covers exactly itself.
    pub fn initial(n: usize) -> Self {
        let coverage = (0..n).map(|i| NodeSet::singleton(n, i)).collect();
        let transmit = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 0 } else { NO_FRONTIER })
                    .collect()
            })
            .collect();
        let knowledge = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 0 } else { NO_FRONTIER })
                    .collect()
            })
            .collect();
        Self {
            block: 0,
            coverage,
            transmit,
            knowledge,
        }
    }

    pub fn node_count(&self) -> usize {
        self.coverage.len()
    }

    pub fn all_covered(&self) -> bool {
        self.coverage.iter().all(NodeSet::is_full)
    }
}

/// Which other nodes each node decodes at the end of the current block.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeAssignment {
    sets: Vec<NodeSet>,
}

impl DecodeAssignment {
    pub fn new(sets: Vec<NodeSet>) -> Result<Self> {
        let n = sets.len();
        for (i, d) in sets.iter().enumerate() {
            if d.universe() != n {
                return Err(Error::BadQuery(format!(
                    "decode set of node {} is over {} nodes, expected {n}",
                    i + 1,
                    d.universe()
                )));
            }
            if d.contains(i) {
                return Err(Error::BadQuery(format!(
                    "node {} cannot decode its own transmission",
                    i + 1
                )));
            }
        }
        Ok(Self { sets })
    }

    pub fn decode_set(&self, node: usize) -> NodeSet {
        self.sets[node]
    }

    pub fn sets(&self) -> &[NodeSet] {
        &self.sets
    }
}

/// Independent admissibility check: scans all `2ⁿ - 2` subsets and demands
/// that each subset's witness decodes someone across the cut.
pub fn is_admissible(witnesses: &WitnessMap, assignment: &DecodeAssignment) -> bool {
    let n = witnesses.node_count();
    for subset in proper_nonempty_subsets(n) {
        let Some(w) = witnesses.witness(&subset) else {
            return false;
        };
        if assignment
            .decode_set(w)
            .intersect(&subset.complement())
            .is_empty()
        {
            return false;
        }
    }
    true
}

/// Advances one block: coverage absorbs the decoded nodes' coverage,
/// knowledge absorbs their transmit frontiers, then every transmit frontier
/// moves forward by at most one message (sources always add their own new
/// message).
pub fn step(state: &SimState, assignment: &DecodeAssignment) -> SimState {
    let n = state.node_count();
    let next_block = state.block + 1;
    let mut coverage = Vec::with_capacity(n);
    let mut transmit = vec![vec![NO_FRONTIER; n]; n];
    let mut knowledge = vec![vec![NO_FRONTIER; n]; n];

    for i in 0..n {
        let decoded = assignment.decode_set(i);
        let mut cov = state.coverage[i];
        for k in decoded.iter() {
            cov = cov.union(&state.coverage[k]);
        }
        coverage.push(cov);

        for j in 0..n {
            if j == i {
                transmit[i][j] = next_block as i64;
                knowledge[i][j] = next_block as i64;
                continue;
            }
            let mut know = state.knowledge[i][j];
            for k in decoded.iter() {
                know = know.max(state.transmit[k][j]);
            }
            knowledge[i][j] = know;
            if cov.contains(j) {
                transmit[i][j] = know.min(state.transmit[i][j] + 1);
            }
        }
    }

    SimState {
        block: next_block,
        coverage,
        transmit,
        knowledge,
    }
}

/// Per-block snapshot kept in a trace.
#[derive(Debug, Clone)]
pub struct BlockRecord {
    pub block: u64,
    pub coverage: Vec<NodeSet>,
    /// Per node: the lowest transmit frontier over its covered sources.
    pub min_frontier: Vec<i64>,
    /// Per node: largest decode delay it has observed so far.
    pub max_delay_so_far: Vec<i64>,
    /// Largest delay of a message first decoded in this block, if any.
    pub max_new_delay: Option<i64>,
}

/// Decode-delay bookkeeping: message `m` of source `j` is decoded by node
/// `i` at the end of the first block where `knowledge[i][j] >= m`; its
/// delay is that block number minus `m`.
#[derive(Debug, Clone, Default)]
pub struct DelayLedger {
    /// Largest observed delay across all nodes, sources and messages.
    pub sup_delay: Option<i64>,
    /// `per_block_max[b-1]`: largest delay of the messages first decoded in
    /// block `b`.
    pub per_block_max: Vec<Option<i64>>,
}

impl DelayLedger {
    fn record_block(&mut self, max_new: Option<i64>) {
        self.per_block_max.push(max_new);
        if let Some(d) = max_new {
            self.sup_delay = Some(self.sup_delay.map_or(d, |s| s.max(d)));
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimOptions {
    /// Feasibility margin used for the certificate.
    pub margin: f64,
    /// How many blocks to simulate; must be at least the coverage bound.
    pub max_blocks: u64,
    /// Stop as soon as every node covers the whole network (delay
    /// measurement needs the full horizon, so the default keeps going).
    pub stop_on_completion: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            margin: DEFAULT_MARGIN,
            max_blocks: 1000,
            stop_on_completion: false,
        }
    }
}

/// A completed simulation run.
#[derive(Debug, Clone)]
pub struct Trace {
    pub n: usize,
    pub oracle_mode: OracleMode,
    pub seed: u64,
    /// First block at whose end every node covered the whole network.
    pub completion_block: Option<u64>,
    /// The guaranteed coverage bound `2^(n-2)` in blocks.
    pub coverage_bound: u64,
    pub blocks: Vec<BlockRecord>,
    pub delays: DelayLedger,
}

/// `2^(n-2)`: the block by which every admissible run must have completed
/// coverage.
pub fn coverage_bound(n: usize) -> u64 {
    debug_assert!(n >= 2);
    1u64 << (n - 2)
}

/// Checks feasibility of `rates` under `scenario`, then simulates the relay
/// scheme with the certificate's witness structure. Fails if the rates are
/// infeasible or if coverage misses the `2^(n-2)` bound (which would mean
/// an inadmissible oracle or a broken update rule).
pub fn run(
    scenario: &Scenario,
    rates: &RateVector,
    oracle: &mut DecodeOracle,
    options: &SimOptions,
) -> Result<Trace> {
    let certificate = check_feasible(scenario, rates, options.margin)?;
    let witnesses = certificate.witness_map()?;
    run_with_witness_map(&witnesses, oracle, options)
}

/// Simulation entry for a prebuilt witness structure (used by stress tests
/// that sweep synthetic witness maps).
pub fn run_with_witness_map(
    witnesses: &WitnessMap,
    oracle: &mut DecodeOracle,
    options: &SimOptions,
) -> Result<Trace> {
    let n = witnesses.node_count();
    if n < 2 {
        return Err(Error::BadQuery(
            "simulation needs at least two nodes".into(),
        ));
    }
    let bound = coverage_bound(n);
    if options.max_blocks < bound {
        return Err(Error::BadQuery(format!(
            "max_blocks {} is below the coverage bound {bound}",
            options.max_blocks
        )));
    }

    let mut state = SimState::initial(n);
    let mut blocks = Vec::new();
    let mut delays = DelayLedger::default();
    let mut completion_block = None;
    let mut max_delay_so_far = vec![i64::MIN; n];

    for block in 1..=options.max_blocks {
        let assignment = oracle.assignment(witnesses, &state)?;
        if !is_admissible(witnesses, &assignment) {
            return Err(Error::Internal(format!(
                "{:?} oracle produced an inadmissible assignment at block {block}",
                oracle.mode()
            )));
        }
        let next = step(&state, &assignment);

        let mut max_new_delay: Option<i64> = None;
        for (i, node_max) in max_delay_so_far.iter_mut().enumerate() {
            for j in 0..n {
                let before = state.knowledge[i][j];
                let after = next.knowledge[i][j];
                let first_message = before.max(0) + 1;
                if after >= first_message {
                    // Messages first_message..=after decoded this block; the
                    // earliest one waited longest.
                    let delay = block as i64 - first_message;
                    max_new_delay = Some(max_new_delay.map_or(delay, |d| d.max(delay)));
                    *node_max = (*node_max).max(delay);
                }
            }
        }
        delays.record_block(max_new_delay);

        state = next;
        if completion_block.is_none() && state.all_covered() {
            completion_block = Some(block);
        }
        blocks.push(BlockRecord {
            block,
            coverage: state.coverage.clone(),
            min_frontier: state
                .coverage
                .iter()
                .enumerate()
                .map(|(i, cov)| cov.iter().map(|j| state.transmit[i][j]).min().unwrap_or(0))
                .collect(),
            max_delay_so_far: max_delay_so_far
                .iter()
                .map(|&d| if d == i64::MIN { 0 } else { d })
                .collect(),
            max_new_delay,
        });
        if options.stop_on_completion && completion_block.is_some() {
            break;
        }
    }

    match completion_block {
        Some(b) if b <= bound => {}
        completed => {
            return Err(Error::CoverageBound { completed, bound });
        }
    }

    Ok(Trace {
        n,
        oracle_mode: oracle.mode(),
        seed: oracle.seed(),
        completion_block,
        coverage_bound: bound,
        blocks,
        delays,
    })
}

/// Delay summary over a horizon: the observed sup and whether it has
/// stabilized (the sup over the second half equals the sup over the second
/// quarter).
#[derive(Debug, Clone, PartialEq)]
pub struct DelaySummary {
    pub horizon: u64,
    pub sup_delay: Option<i64>,
    /// Sup over blocks `[horizon/4, horizon/2]`.
    pub early_window_sup: Option<i64>,
    /// Sup over blocks `[horizon/2, horizon]`.
    pub late_window_sup: Option<i64>,
    pub stabilized: bool,
}

/// Boundedness check from the trace's delay ledger: delays keep being
/// assigned forever, so a growing sup shows up as a late-window sup that
/// exceeds the early-window sup. Reported, not raised.
pub fn measure_delays(trace: &Trace, horizon: u64) -> Result<DelaySummary> {
    if trace.completion_block.is_none() {
        return Err(Error::BadQuery(
            "delay measurement needs a completed coverage run".into(),
        ));
    }
    if (trace.blocks.len() as u64) < horizon || horizon < 4 {
        return Err(Error::BadQuery(format!(
            "trace has {} blocks; horizon {horizon} needs at least 4 and at most that many",
            trace.blocks.len()
        )));
    }
    let window_sup = |from: u64, to: u64| -> Option<i64> {
        (from..=to)
            .filter_map(|b| trace.delays.per_block_max[(b - 1) as usize])
            .max()
    };
    let early = window_sup(horizon / 4, horizon / 2);
    let late = window_sup(horizon / 2, horizon);
    Ok(DelaySummary {
        horizon,
        sup_delay: trace.delays.sup_delay,
        early_window_sup: early,
        late_window_sup: late,
        stabilized: early == late,
    })
}
