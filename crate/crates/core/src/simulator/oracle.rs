//! Decode oracles: how each node's per-block decode set gets chosen,
//! spanning the scheme's guarantee (greedy) through stress cases
//! (adversarial, random) — all under the same admissibility contract.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{proper_nonempty_subsets, NodeSet};
use crate::region::WitnessMap;
use crate::simulator::{DecodeAssignment, SimState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Each witness decodes everything it is guaranteed: the union of `Sᶜ`
    /// over the subsets it witnesses.
    Greedy,
    /// Greedy minimal hitting sets, preferring nodes whose coverage adds
    /// the least.
    AdversarialHeuristic,
    /// Enumerates all minimal admissible assignments and picks the one
    /// with the smallest total coverage after the step (small networks).
    ExhaustiveAdversarial,
    /// Seeded random admissible assignment (rejection sampling with a
    /// constructive patch as fallback).
    Random,
}

impl OracleMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Greedy => "greedy",
            Self::AdversarialHeuristic => "adversarial_heuristic",
            Self::ExhaustiveAdversarial => "exhaustive_adversarial",
            Self::Random => "random",
        }
    }
}

impl std::str::FromStr for OracleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Self::Greedy),
            "adversarial_heuristic" => Ok(Self::AdversarialHeuristic),
            "exhaustive_adversarial" => Ok(Self::ExhaustiveAdversarial),
            "random" => Ok(Self::Random),
            other => Err(Error::BadQuery(format!(
                "unknown oracle mode '{other}' (greedy, adversarial_heuristic, exhaustive_adversarial, random)"
            ))),
        }
    }
}

/// Exhaustive assignment enumeration is super-exponential; past this many
/// nodes only the heuristic and random modes apply.
pub(crate) const EXHAUSTIVE_ORACLE_MAX_NODES: usize = 4;

#[derive(Debug, Clone)]
pub struct DecodeOracle {
    mode: OracleMode,
    seed: u64,
    rng: ChaCha8Rng,
}

impl DecodeOracle {
    pub fn new(mode: OracleMode, seed: u64) -> Self {
        Self {
            mode,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Produces an admissible decode assignment for the current block.
    pub fn assignment(
        &mut self,
        witnesses: &WitnessMap,
        state: &SimState,
    ) -> Result<DecodeAssignment> {
        let families = hitting_families(witnesses);
        match self.mode {
            OracleMode::Greedy => greedy_assignment(&families),
            OracleMode::AdversarialHeuristic => heuristic_assignment(&families, state),
            OracleMode::ExhaustiveAdversarial => exhaustive_assignment(&families, state),
            OracleMode::Random => random_assignment(&families, &mut self.rng),
        }
    }
}

/// For each node `i`, the complements `Sᶜ` of the subsets it witnesses:
/// its decode set must intersect every one of them.
pub(crate) fn hitting_families(witnesses: &WitnessMap) -> Vec<Vec<NodeSet>> {
    let n = witnesses.node_count();
    let mut families = vec![Vec::new(); n];
    for subset in proper_nonempty_subsets(n) {
        if let Some(w) = witnesses.witness(&subset) {
            families[w].push(subset.complement());
        }
    }
    families
}

fn greedy_assignment(families: &[Vec<NodeSet>]) -> Result<DecodeAssignment> {
    let n = families.len();
    let sets = families
        .iter()
        .map(|family| {
            family
                .iter()
                .fold(NodeSet::empty(n), |acc, sc| acc.union(sc))
        })
        .collect();
    DecodeAssignment::new(sets)
}

/// Greedy hitting set for one node: repeatedly pick the candidate that hits
/// the most unhit families, breaking ties toward the smallest coverage
/// growth and then the smallest index.
fn greedy_hitting_set(
    n: usize,
    node: usize,
    family: &[NodeSet],
    growth: impl Fn(usize) -> usize,
) -> NodeSet {
    let mut chosen = NodeSet::empty(n);
    let mut unhit: Vec<NodeSet> = family.to_vec();
    while !unhit.is_empty() {
        let mut best: Option<(usize, usize, usize)> = None; // (node, hits, growth)
        for k in 0..n {
            if k == node || chosen.contains(k) {
                continue;
            }
            let hits = unhit.iter().filter(|sc| sc.contains(k)).count();
            if hits == 0 {
                continue;
            }
            let g = growth(k);
            let better = match best {
                None => true,
                Some((_, best_hits, best_growth)) => {
                    hits > best_hits || (hits == best_hits && g < best_growth)
                }
            };
            if better {
                best = Some((k, hits, g));
            }
        }
        let (k, _, _) = best.expect("every family member is another node");
        chosen.insert(k);
        unhit.retain(|sc| !sc.contains(k));
    }
    chosen
}

fn heuristic_assignment(families: &[Vec<NodeSet>], state: &SimState) -> Result<DecodeAssignment> {
    let n = families.len();
    let sets = (0..n)
        .map(|i| {
            greedy_hitting_set(n, i, &families[i], |k| {
                state.coverage[k].difference(&state.coverage[i]).len()
            })
        })
        .collect();
    DecodeAssignment::new(sets)
}

/// All inclusion-minimal hitting sets of `family` over `{0..n-1} \ {node}`,
/// ascending by mask.
pub(crate) fn minimal_hitting_sets(n: usize, node: usize, family: &[NodeSet]) -> Vec<NodeSet> {
    if family.is_empty() {
        return vec![NodeSet::empty(n)];
    }
    let others: Vec<usize> = (0..n).filter(|&k| k != node).collect();
    let mut hitting: Vec<NodeSet> = Vec::new();
    for bits in 0..(1u32 << others.len()) {
        let set = NodeSet::from_nodes(
            n,
            others
                .iter()
                .enumerate()
                .filter(|(pos, _)| bits & (1 << pos) != 0)
                .map(|(_, &k)| k),
        );
        if family.iter().all(|sc| !sc.intersect(&set).is_empty()) {
            hitting.push(set);
        }
    }
    hitting
        .iter()
        .filter(|h| {
            !hitting
                .iter()
                .any(|other| other.bits() != h.bits() && other.is_subset_of(h))
        })
        .copied()
        .collect()
}

/// Decoding more can only accelerate coverage, so the single-step worst
/// case lives among combinations of minimal hitting sets.
fn exhaustive_assignment(families: &[Vec<NodeSet>], state: &SimState) -> Result<DecodeAssignment> {
    let n = families.len();
    if n > EXHAUSTIVE_ORACLE_MAX_NODES {
        return Err(Error::guard(
            "exhaustive_enumeration",
            format!(
                "{n} nodes; the exhaustive oracle handles at most {EXHAUSTIVE_ORACLE_MAX_NODES}"
            ),
        ));
    }
    let choices: Vec<Vec<NodeSet>> = (0..n)
        .map(|i| minimal_hitting_sets(n, i, &families[i]))
        .collect();
    let mut best: Option<(Vec<NodeSet>, usize)> = None;
    let mut current = vec![NodeSet::empty(n); n];
    fn search(
        node: usize,
        n: usize,
        choices: &[Vec<NodeSet>],
        state: &SimState,
        current: &mut Vec<NodeSet>,
        best: &mut Option<(Vec<NodeSet>, usize)>,
    ) {
        if node == n {
            let total: usize = (0..n)
                .map(|i| {
                    current[i]
                        .iter()
                        .fold(state.coverage[i], |acc, k| acc.union(&state.coverage[k]))
                        .len()
                })
                .sum();
            let better = match best {
                None => true,
                Some((_, best_total)) => total < *best_total,
            };
            if better {
                *best = Some((current.clone(), total));
            }
            return;
        }
        for set in &choices[node] {
            current[node] = *set;
            search(node + 1, n, choices, state, current, best);
        }
    }
    search(0, n, &choices, state, &mut current, &mut best);
    let (sets, _) = best.expect("minimal hitting sets are never empty");
    DecodeAssignment::new(sets)
}

fn random_assignment(families: &[Vec<NodeSet>], rng: &mut ChaCha8Rng) -> Result<DecodeAssignment> {
    let n = families.len();
    let mut sets = Vec::with_capacity(n);
    for (i, family) in families.iter().enumerate() {
        let mut accepted = None;
        let mut last = NodeSet::empty(n);
        for _ in 0..64 {
            let mut set = NodeSet::empty(n);
            for k in 0..n {
                if k != i && rng.gen_bool(0.5) {
                    set.insert(k);
                }
            }
            last = set;
            if family.iter().all(|sc| !sc.intersect(&set).is_empty()) {
                accepted = Some(set);
                break;
            }
        }
        let set = accepted.unwrap_or_else(|| {
            // Constructive patch: hit each remaining family at a random member.
            let mut set = last;
            for sc in family {
                if sc.intersect(&set).is_empty() {
                    let members: Vec<usize> = sc.iter().collect();
                    set.insert(members[rng.gen_range(0..members.len())]);
                }
            }
            set
        });
        sets.push(set);
    }
    DecodeAssignment::new(sets)
}
