//! Exhaustive verification of the coverage bound on small networks.
//!
//! For a fixed witness structure, the coverage dynamics are monotone in the
//! decode sets: decoding more nodes never slows coverage down. The worst
//! admissible trajectory therefore lives among assignments built from
//! inclusion-minimal hitting sets, and a breadth-first sweep over those
//! assignment sequences covers every admissible oracle.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{proper_nonempty_subsets, MixedRadix, NodeSet};
use crate::region::WitnessMap;
use crate::simulator::coverage_bound;
use crate::simulator::oracle::{hitting_families, minimal_hitting_sets};

/// Witness-map sweeps and assignment-tree walks stop being tractable
/// beyond this many nodes.
pub const EXHAUSTIVE_MAX_NODES: usize = 4;

fn pack(coverage: &[NodeSet]) -> u64 {
    let n = coverage.len();
    coverage
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, c)| acc | ((c.bits() as u64) << (i * n)))
}

/// Worst-case completion over every admissible assignment sequence for one
/// witness structure: `Some(d)` if every sequence completes by block `d`
/// (minimal such `d`), `None` if some sequence is still incomplete after
/// `max_depth` blocks.
pub fn exhaustive_worst_completion(witnesses: &WitnessMap, max_depth: u64) -> Result<Option<u64>> {
    let n = witnesses.node_count();
    if !(2..=EXHAUSTIVE_MAX_NODES).contains(&n) {
        return Err(Error::guard(
            "exhaustive_enumeration",
            format!("{n} nodes; exhaustive sweeps handle 2..={EXHAUSTIVE_MAX_NODES}"),
        ));
    }
    let families = hitting_families(witnesses);
    let per_node: Vec<Vec<NodeSet>> = (0..n)
        .map(|i| minimal_hitting_sets(n, i, &families[i]))
        .collect();

    // All combinations of per-node minimal hitting sets.
    let mut assignments: Vec<Vec<NodeSet>> = vec![Vec::new()];
    for choices in &per_node {
        let mut extended = Vec::with_capacity(assignments.len() * choices.len());
        for partial in &assignments {
            for &choice in choices {
                let mut next = partial.clone();
                next.push(choice);
                extended.push(next);
            }
        }
        assignments = extended;
    }

    let initial: Vec<NodeSet> = (0..n).map(|i| NodeSet::singleton(n, i)).collect();
    let complete = pack(&vec![NodeSet::full(n); n]);
    let mut frontier: HashSet<u64> = HashSet::new();
    frontier.insert(pack(&initial));

    for depth in 1..=max_depth {
        let mut next: HashSet<u64> = HashSet::new();
        for &profile in &frontier {
            let coverage: Vec<NodeSet> = (0..n)
                .map(|i| NodeSet::from_bits(n, ((profile >> (i * n)) & ((1 << n) - 1)) as u32))
                .collect();
            for assignment in &assignments {
                let stepped: Vec<NodeSet> = (0..n)
                    .map(|i| {
                        assignment[i]
                            .iter()
                            .fold(coverage[i], |acc, k| acc.union(&coverage[k]))
                    })
                    .collect();
                next.insert(pack(&stepped));
            }
        }
        frontier = next;
        if frontier.len() == 1 && frontier.contains(&complete) {
            return Ok(Some(depth));
        }
    }
    Ok(None)
}

/// Every way of assigning a witness to every proper nonempty subset of an
/// `n`-node network. Any feasible certificate induces one of these maps.
pub fn enumerate_witness_maps(n: usize) -> Result<Vec<WitnessMap>> {
    if !(2..=EXHAUSTIVE_MAX_NODES).contains(&n) {
        return Err(Error::guard(
            "exhaustive_enumeration",
            format!("{n} nodes; witness-map sweeps handle 2..={EXHAUSTIVE_MAX_NODES}"),
        ));
    }
    let subsets: Vec<NodeSet> = proper_nonempty_subsets(n).collect();
    let sizes: Vec<usize> = subsets.iter().map(|s| s.len()).collect();
    let space = MixedRadix::new(&sizes)?;
    let mut maps = Vec::with_capacity(space.total());
    space.for_each_tuple(|_, digits| {
        let map = WitnessMap::from_fn(n, |subset| {
            let pos = subsets.iter().position(|s| s == &subset).unwrap();
            subset.iter().nth(digits[pos]).unwrap()
        })
        .expect("member choice is always inside the subset");
        maps.push(map);
    });
    Ok(maps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub n: usize,
    pub bound: u64,
    pub witness_maps_checked: usize,
    /// Largest completion block seen across all witness maps and all
    /// admissible assignment sequences.
    pub worst_completion: u64,
    pub violations: usize,
}

/// Sweeps every witness map and every admissible oracle behavior for an
/// `n`-node network and checks that coverage always completes within
/// `2^(n-2)` blocks.
pub fn verify_coverage_bound_exhaustive(n: usize) -> Result<ExhaustiveReport> {
    let bound = coverage_bound(n);
    let maps = enumerate_witness_maps(n)?;
    let mut worst = 0u64;
    let mut violations = 0usize;
    for map in &maps {
        match exhaustive_worst_completion(map, bound)? {
            Some(d) => worst = worst.max(d),
            None => violations += 1,
        }
    }
    Ok(ExhaustiveReport {
        n,
        bound,
        witness_maps_checked: maps.len(),
        worst_completion: worst,
        violations,
    })
}
