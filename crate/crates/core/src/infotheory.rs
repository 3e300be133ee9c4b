//! Exact conditional mutual information on a discrete memoryless network by
//! exhaustive summation over input configurations.
//!
//! All information quantities are in bits (log base 2).

use crate::error::{Error, Result};
use crate::model::{DmcNetwork, InputDistributions, MixedRadix, NodeSet};
use crate::numeric::CompensatedSum;

/// Negative MI results within this distance of zero are rounding artifacts
/// and clamp to 0; anything more negative is an internal error.
const NEGATIVE_CLAMP: f64 = 1e-12;

/// Shannon entropy of a pmf in bits, with `0·log 0 = 0`.
pub fn entropy(pmf: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &p in pmf {
        if p > 0.0 {
            acc.add(-p * p.log2());
        }
    }
    acc.value()
}

/// Binary entropy `H₂(ε)` in bits.
pub fn binary_entropy(eps: f64) -> f64 {
    assert!((0.0..=1.0).contains(&eps), "ε must lie in [0,1]");
    if eps == 0.0 || eps == 1.0 {
        return 0.0;
    }
    -eps * eps.log2() - (1.0 - eps) * (1.0 - eps).log2()
}

/// A conditional mutual information query `I(X_{Sᶜ}; Y_{i₀} | X_S)`: the
/// receiver `i₀` must lie in the conditioned set `S`, and the message set
/// `Sᶜ` must be nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiQuery {
    receiver: usize,
    conditioned: NodeSet,
}

impl MiQuery {
    pub fn new(receiver: usize, conditioned: NodeSet) -> Result<Self> {
        if receiver >= conditioned.universe() {
            return Err(Error::BadQuery(format!(
                "receiver {} outside the {}-node network",
                receiver + 1,
                conditioned.universe()
            )));
        }
        if !conditioned.contains(receiver) {
            return Err(Error::BadQuery(format!(
                "receiver {} must belong to the conditioned set {}",
                receiver + 1,
                conditioned
            )));
        }
        if conditioned.is_full() {
            return Err(Error::BadQuery(
                "conditioned set covers every node; no message senders remain".into(),
            ));
        }
        Ok(Self {
            receiver,
            conditioned,
        })
    }

    pub fn receiver(&self) -> usize {
        self.receiver
    }

    pub fn conditioned(&self) -> NodeSet {
        self.conditioned
    }

    pub fn senders(&self) -> NodeSet {
        self.conditioned.complement()
    }
}

/// Partial mixed-radix walk over the inputs of a subset of nodes: yields
/// `(index contribution into the full input space, product probability)`
/// for every symbol combination of the subset, in ascending tuple order.
fn subset_configs(
    net: &DmcNetwork,
    dists: &InputDistributions,
    nodes: &NodeSet,
) -> Vec<(usize, f64)> {
    let members: Vec<usize> = nodes.iter().collect();
    let sizes: Vec<usize> = members
        .iter()
        .map(|&i| net.input_alphabet_sizes()[i])
        .collect();
    let full_space = net.input_space();
    let member_strides: Vec<usize> = members
        .iter()
        .map(|&i| {
            // stride of node i in the full input space
            let mut digits = vec![0usize; net.node_count()];
            digits[i] = 1;
            full_space.index(&digits)
        })
        .collect();
    let space = MixedRadix::new(&sizes).expect("validated alphabets");
    let mut out = Vec::with_capacity(space.total());
    space.for_each_tuple(|_, digits| {
        let mut index = 0usize;
        let mut prob = 1.0f64;
        for ((&d, &stride), &node) in digits.iter().zip(&member_strides).zip(&members) {
            index += d * stride;
            prob *= dists.prob(node, d);
        }
        out.push((index, prob));
    });
    out
}

/// `I(X_{Sᶜ}; Y_{i₀} | X_S)` in bits under the product input distribution,
/// computed as `Σ_x q(x) Σ_y p(y|x) log₂[p(y|x) / p(y|x_S)]` with
/// `p(y|x_S) = Σ_{x'_{Sᶜ}} q(x'_{Sᶜ}) p(y | x_S, x'_{Sᶜ})`.
///
/// Terms with zero joint mass contribute zero. The accumulation is
/// compensated; a result within rounding of zero clamps to exactly 0.
pub fn conditional_mi(
    net: &DmcNetwork,
    dists: &InputDistributions,
    query: &MiQuery,
) -> Result<f64> {
    if query.conditioned.universe() != net.node_count() {
        return Err(Error::BadQuery(format!(
            "query over {} nodes against a {}-node network",
            query.conditioned.universe(),
            net.node_count()
        )));
    }
    if !dists.matches(net.input_alphabet_sizes()) {
        return Err(Error::BadQuery(
            "input distributions do not match the network alphabets".into(),
        ));
    }

    let conditioned = subset_configs(net, dists, &query.conditioned);
    let senders = subset_configs(net, dists, &query.senders());
    let receiver = query.receiver;
    let out_size = net.output_alphabet_sizes()[receiver];

    let mut acc = CompensatedSum::new();
    let mut averaged = vec![0.0f64; out_size];
    for &(s_index, s_prob) in &conditioned {
        if s_prob == 0.0 {
            continue;
        }
        // p(y | x_S): average the receiver's rows over the senders' inputs.
        averaged.iter_mut().for_each(|v| *v = 0.0);
        for &(c_index, c_prob) in &senders {
            if c_prob == 0.0 {
                continue;
            }
            let row = net.channel_row(receiver, s_index + c_index);
            for (avg, &p) in averaged.iter_mut().zip(row) {
                *avg += c_prob * p;
            }
        }
        for &(c_index, c_prob) in &senders {
            if c_prob == 0.0 {
                continue;
            }
            let weight = s_prob * c_prob;
            let row = net.channel_row(receiver, s_index + c_index);
            for (&p, &pbar) in row.iter().zip(&averaged) {
                if p > 0.0 {
                    acc.add(weight * p * (p / pbar).log2());
                }
            }
        }
    }

    let value = acc.value();
    if value < 0.0 {
        if value >= -NEGATIVE_CLAMP {
            return Ok(0.0);
        }
        return Err(Error::Internal(format!(
            "conditional mutual information evaluated to {value}"
        )));
    }
    Ok(value)
}
