//! Rate-region exploration: exhaustive cut enumeration with witness
//! certificates, symmetric-rate and boundary bisection, and half-duplex
//! schedule search.

use crate::error::{Error, Result};
use crate::model::{
    proper_nonempty_subsets, AwgnNetwork, NodeSet, RateVector, Schedule, MAX_NODES,
};
use crate::rates::{CutQuery, Scenario};

/// Default strictness margin in bits: a witness must clear the rate sum by
/// more than this, so boundary points count as infeasible.
pub const DEFAULT_MARGIN: f64 = 1e-9;

/// One node of a violated subset together with how far the rate sum
/// overshoots its cut rate (`rate_sum - cut_rate`, in bits).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDeficit {
    pub node: usize,
    pub cut_rate_bits: f64,
    pub deficit_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubsetOutcome {
    /// The first node (ascending order) whose cut rate strictly clears the
    /// rate sum by more than the margin.
    Witness {
        node: usize,
        cut_rate_bits: f64,
        slack_bits: f64,
    },
    /// No member works; every member's deficit is recorded.
    Violation { deficits: Vec<NodeDeficit> },
}

/// Per-subset verdict for one proper nonempty subset `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetRecord {
    pub subset: NodeSet,
    pub rate_sum_bits: f64,
    pub outcome: SubsetOutcome,
}

impl SubsetRecord {
    pub fn witness(&self) -> Option<usize> {
        match &self.outcome {
            SubsetOutcome::Witness { node, .. } => Some(*node),
            SubsetOutcome::Violation { .. } => None,
        }
    }

    /// The witness cut rate, or the best (largest) cut rate of a violated
    /// subset.
    pub fn best_cut_rate_bits(&self) -> f64 {
        match &self.outcome {
            SubsetOutcome::Witness { cut_rate_bits, .. } => *cut_rate_bits,
            SubsetOutcome::Violation { deficits } => deficits
                .iter()
                .map(|d| d.cut_rate_bits)
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// The full cut-by-cut account of why a rate vector is (in)feasible:
/// one record per proper nonempty subset, in ascending mask order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityCertificate {
    pub n: usize,
    pub margin_bits: f64,
    pub rates_bits: Vec<f64>,
    pub entries: Vec<SubsetRecord>,
    pub feasible: bool,
}

impl FeasibilityCertificate {
    pub fn first_violation(&self) -> Option<&SubsetRecord> {
        self.entries.iter().find(|e| e.witness().is_none())
    }

    /// Witness lookup table indexed by subset mask, for the simulator's
    /// admissibility contract. Fails on an infeasible certificate.
    pub fn witness_map(&self) -> Result<WitnessMap> {
        if !self.feasible {
            let mask = self.first_violation().map(|e| e.subset.bits()).unwrap_or(0);
            return Err(Error::Infeasible { mask });
        }
        let mut witnesses = vec![None; 1usize << self.n];
        for entry in &self.entries {
            witnesses[entry.subset.bits() as usize] = entry.witness();
        }
        Ok(WitnessMap {
            n: self.n,
            witnesses,
        })
    }
}

/// For every proper nonempty subset, the node whose decode guarantee the
/// relay scheme relies on. Usually built from a certificate; synthetic maps
/// can be built directly for stress tests.
#[derive(Debug, Clone)]
pub struct WitnessMap {
    n: usize,
    witnesses: Vec<Option<usize>>,
}

impl WitnessMap {
    /// Builds a map by choosing a witness for every proper nonempty mask.
    /// The chosen node must be a member of the subset.
    pub fn from_fn(n: usize, mut pick: impl FnMut(NodeSet) -> usize) -> Result<Self> {
        let mut witnesses = vec![None; 1usize << n];
        for subset in proper_nonempty_subsets(n) {
            let w = pick(subset);
            if !subset.contains(w) {
                return Err(Error::BadQuery(format!(
                    "witness {} is not a member of {subset}",
                    w + 1
                )));
            }
            witnesses[subset.bits() as usize] = Some(w);
        }
        Ok(Self { n, witnesses })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn witness(&self, subset: &NodeSet) -> Option<usize> {
        self.witnesses[subset.bits() as usize]
    }
}

/// All cut rates of a scenario, evaluated once: `rates_for(S)[k]` is the
/// cut rate of the k-th member of `S` (ascending). Rate-vector probes reuse
/// the table, which is what makes bisection affordable.
pub struct CutRateTable {
    n: usize,
    per_mask: Vec<Vec<f64>>,
}

impl CutRateTable {
    pub fn build(scenario: &Scenario) -> Result<Self> {
        let n = scenario.node_count();
        if n > MAX_NODES {
            return Err(Error::guard(
                "cut_enumeration",
                format!("{n} nodes need 2^{n} subsets; the cap is {MAX_NODES} nodes"),
            ));
        }
        if n < 2 {
            return Err(Error::BadQuery(
                "region analysis needs at least two nodes".into(),
            ));
        }
        let mut per_mask = vec![Vec::new(); 1usize << n];
        for subset in proper_nonempty_subsets(n) {
            let mut rates = Vec::with_capacity(subset.len());
            for i0 in subset.iter() {
                let cut = CutQuery::new(subset, i0)?;
                rates.push(scenario.cut_rate(&cut)?);
            }
            per_mask[subset.bits() as usize] = rates;
        }
        Ok(Self { n, per_mask })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    fn rates_for(&self, subset: &NodeSet) -> &[f64] {
        &self.per_mask[subset.bits() as usize]
    }

    /// Largest cut rate over the members of any single-node subset — an
    /// upper bound on the symmetric rate that is always infeasible itself.
    fn max_single_node_cut(&self) -> f64 {
        (0..self.n)
            .map(|i| self.per_mask[1usize << i][0])
            .fold(0.0, f64::max)
    }

    /// Fast verdict-only probe (short-circuits at the first violated cut).
    pub fn is_feasible(&self, rates: &RateVector, margin: f64) -> bool {
        for subset in proper_nonempty_subsets(self.n) {
            let rate_sum = rates.sum_over(&subset.complement());
            let ok = self
                .rates_for(&subset)
                .iter()
                .any(|&cut| rate_sum < cut - margin);
            if !ok {
                return false;
            }
        }
        true
    }

    /// Full certificate with witnesses and deficits.
    pub fn certificate(&self, rates: &RateVector, margin: f64) -> FeasibilityCertificate {
        let mut entries = Vec::with_capacity((1usize << self.n) - 2);
        let mut feasible = true;
        for subset in proper_nonempty_subsets(self.n) {
            let rate_sum = rates.sum_over(&subset.complement());
            let cut_rates = self.rates_for(&subset);
            let witness = subset
                .iter()
                .zip(cut_rates)
                .find(|&(_, &cut)| rate_sum < cut - margin);
            let outcome = match witness {
                Some((node, &cut)) => SubsetOutcome::Witness {
                    node,
                    cut_rate_bits: cut,
                    slack_bits: cut - rate_sum,
                },
                None => {
                    feasible = false;
                    SubsetOutcome::Violation {
                        deficits: subset
                            .iter()
                            .zip(cut_rates)
                            .map(|(node, &cut)| NodeDeficit {
                                node,
                                cut_rate_bits: cut,
                                deficit_bits: rate_sum - cut,
                            })
                            .collect(),
                    }
                }
            };
            entries.push(SubsetRecord {
                subset,
                rate_sum_bits: rate_sum,
                outcome,
            });
        }
        FeasibilityCertificate {
            n: self.n,
            margin_bits: margin,
            rates_bits: rates.as_slice().to_vec(),
            entries,
            feasible,
        }
    }
}

fn check_margin(margin: f64) -> Result<()> {
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::BadQuery(format!(
            "margin must be finite and >= 0, got {margin}"
        )));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::BadQuery(format!(
            "tolerance must be finite and > 0, got {tol}"
        )));
    }
    Ok(())
}

/// Decides whether `rates` is achievable: every proper nonempty subset must
/// have a witness whose cut rate strictly exceeds the subset-complement
/// rate sum by more than `margin`.
pub fn check_feasible(
    scenario: &Scenario,
    rates: &RateVector,
    margin: f64,
) -> Result<FeasibilityCertificate> {
    check_margin(margin)?;
    let table = CutRateTable::build(scenario)?;
    if rates.len() != table.node_count() {
        return Err(Error::BadQuery(format!(
            "{} rates given for {} nodes",
            rates.len(),
            table.node_count()
        )));
    }
    Ok(table.certificate(rates, margin))
}

/// Largest `R` such that the symmetric vector `(R, …, R)` is achievable,
/// located by bisection to within `tol` bits. Returns 0 when even the zero
/// vector has no witness structure (some cut rate is 0).
pub fn max_symmetric_rate(scenario: &Scenario, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let table = CutRateTable::build(scenario)?;
    Ok(max_symmetric_rate_from_table(&table, tol))
}

pub(crate) fn max_symmetric_rate_from_table(table: &CutRateTable, tol: f64) -> f64 {
    let n = table.node_count();
    let feasible = |r: f64| table.is_feasible(&RateVector::symmetric(n, r).unwrap(), 0.0);
    let mut hi = table.max_single_node_cut();
    if hi <= 0.0 || !feasible(0.0) {
        return 0.0;
    }
    let mut lo = 0.0f64;
    // hi is infeasible: at the subset realizing it the sum of the other
    // n-1 >= 1 symmetric rates meets or exceeds the cut rate.
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    lo
}

/// Scales `direction` to the region boundary: returns `t*·direction` with
/// `t*` the largest feasible scale, located by doubling plus bisection.
/// The result is within `tol` bits of the boundary in every component.
pub fn boundary_sample(scenario: &Scenario, direction: &[f64], tol: f64) -> Result<RateVector> {
    check_tol(tol)?;
    let table = CutRateTable::build(scenario)?;
    if direction.len() != table.node_count() {
        return Err(Error::BadQuery(format!(
            "direction has {} components for {} nodes",
            direction.len(),
            table.node_count()
        )));
    }
    let max_component = direction.iter().fold(0.0f64, |m, &d| m.max(d));
    if direction.iter().any(|d| !d.is_finite() || *d < 0.0) || max_component == 0.0 {
        return Err(Error::BadQuery(
            "direction must be nonnegative, finite and nonzero".into(),
        ));
    }
    let base = RateVector::new(direction.to_vec())?;
    let feasible = |t: f64| table.is_feasible(&base.scaled(t).unwrap(), 0.0);
    if !feasible(0.0) {
        return base.scaled(0.0);
    }
    let mut hi = 1.0f64;
    while feasible(hi) {
        hi *= 2.0;
        if hi > 1e24 {
            return Err(Error::Internal(
                "ray never left the region; cut rates should be finite".into(),
            ));
        }
    }
    let mut lo = if hi == 1.0 { 0.0 } else { hi / 2.0 };
    let scale_tol = tol / max_component;
    let mut iterations = 0;
    while hi - lo > scale_tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    base.scaled(lo)
}

/// Search controls for [`optimize_hd_schedule`].
#[derive(Debug, Clone)]
pub struct HdScheduleSearch {
    /// Number of phases `K` in the candidate schedules.
    pub phases: usize,
    /// Weight grid resolution: weights are positive integer multiples of
    /// `1/grid` summing to 1.
    pub grid: u64,
    /// Bisection tolerance for each symmetric-rate evaluation.
    pub tol: f64,
    /// Cap on the number of candidate schedules evaluated.
    pub max_evaluations: usize,
}

impl Default for HdScheduleSearch {
    fn default() -> Self {
        Self {
            phases: 2,
            grid: 4,
            tol: 1e-6,
            max_evaluations: 100_000,
        }
    }
}

/// Exhaustive search over transmitter-set assignments (combinations with
/// repetition from `candidates`) and weight compositions on the grid,
/// maximizing the symmetric rate. Exact on the grid; ties keep the first
/// schedule in enumeration order (ascending set tuples, then ascending
/// weight compositions), which is the lexicographically smallest one.
pub fn optimize_hd_schedule(
    net: &AwgnNetwork,
    candidates: &[NodeSet],
    search: &HdScheduleSearch,
) -> Result<(Schedule<NodeSet>, f64)> {
    let n = net.node_count();
    if candidates.is_empty() {
        return Err(Error::BadQuery("no candidate transmitter sets".into()));
    }
    for c in candidates {
        if c.universe() != n {
            return Err(Error::BadQuery(format!(
                "candidate {c} is over {} nodes, expected {n}",
                c.universe()
            )));
        }
        if c.is_full() {
            return Err(Error::BadQuery(format!(
                "candidate {c} leaves no receivers"
            )));
        }
    }
    if search.phases == 0 {
        return Err(Error::BadQuery("schedule needs at least one phase".into()));
    }
    if search.grid < search.phases as u64 {
        return Err(Error::BadQuery(format!(
            "grid resolution {} cannot split into {} positive weights",
            search.grid, search.phases
        )));
    }
    check_tol(search.tol)?;

    let mut sets: Vec<NodeSet> = candidates.to_vec();
    sets.sort_by_key(|s| s.bits());
    sets.dedup();

    let assignments = combinations_with_repetition(sets.len(), search.phases);
    let compositions = positive_compositions(search.grid, search.phases);
    let total = assignments
        .len()
        .checked_mul(compositions.len())
        .ok_or_else(|| Error::guard("hd_schedule_search", "search space overflows usize"))?;
    if total > search.max_evaluations {
        return Err(Error::guard(
            "hd_schedule_search",
            format!(
                "{total} schedules exceed the cap of {}",
                search.max_evaluations
            ),
        ));
    }

    let mut best: Option<(Schedule<NodeSet>, f64)> = None;
    for assignment in &assignments {
        for lengths in &compositions {
            let phases: Vec<(u64, NodeSet)> = lengths
                .iter()
                .zip(assignment)
                .map(|(&len, &set_idx)| (len, sets[set_idx]))
                .collect();
            let schedule = Schedule::from_lengths(phases)?;
            let scenario = Scenario::awgn_hd(net.clone(), schedule.clone())?;
            let table = CutRateTable::build(&scenario)?;
            let rate = max_symmetric_rate_from_table(&table, search.tol);
            let improves = match &best {
                Some((_, best_rate)) => rate > *best_rate,
                None => true,
            };
            if improves {
                best = Some((schedule, rate));
            }
        }
    }
    Ok(best.expect("at least one candidate schedule"))
}

/// Non-decreasing index tuples of length `k` over `0..count`.
fn combinations_with_repetition(count: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(
        count: usize,
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..count {
            current.push(i);
            recurse(count, k, i, current, out);
            current.pop();
        }
    }
    recurse(count, k, 0, &mut current, &mut out);
    out
}

/// Ordered tuples of positive integers of length `k` summing to `total`,
/// in lexicographic order.
fn positive_compositions(total: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(remaining: u64, slots: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 1 {
            current.push(remaining);
            out.push(current.clone());
            current.pop();
            return;
        }
        // Leave at least 1 for each remaining slot.
        for v in 1..=(remaining - slots as u64 + 1) {
            current.push(v);
            recurse(remaining - v, slots - 1, current, out);
            current.pop();
        }
    }
    if k >= 1 && total >= k as u64 {
        recurse(total, k, &mut current, &mut out);
    }
    out
}
