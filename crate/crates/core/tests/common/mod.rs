//! Shared helpers for the integration and acceptance suites: an independent
//! brute-force mutual-information oracle, random instance generators, and
//! node-relabeling utilities.
//!
//! The oracle deliberately takes a different route from the library
//! (entropy difference over a materialized joint instead of the direct
//! log-ratio sum) so the two implementations check each other.
#![allow(dead_code)]

use rand::distributions::{Distribution, Uniform};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use omnirelay::model::{
    AwgnNetwork, DmcNetwork, InputDistributions, MixedRadix, NodeSet, RateVector, Schedule,
};
use omnirelay::rates::Scenario;
use omnirelay::region::boundary_sample;

/// Textbook binary entropy, kept separate from the library's version.
pub fn h2_oracle(eps: f64) -> f64 {
    if eps <= 0.0 || eps >= 1.0 {
        return 0.0;
    }
    -(eps * eps.log2()) - (1.0 - eps) * (1.0 - eps).log2()
}

/// Brute-force `I(X_{Sᶜ}; Y_{i₀} | X_S) = H(Y|X_S) - H(Y|X)` by
/// materializing the joint `q(x) p(y|x)` and grouping over `x_S`.
pub fn brute_force_conditional_mi(
    net: &DmcNetwork,
    dists: &InputDistributions,
    receiver: usize,
    conditioned: &NodeSet,
) -> f64 {
    let members: Vec<usize> = conditioned.iter().collect();
    let member_sizes: Vec<usize> = members
        .iter()
        .map(|&i| net.input_alphabet_sizes()[i])
        .collect();
    let cond_space = MixedRadix::new(&member_sizes).unwrap();
    let out_size = net.output_alphabet_sizes()[receiver];

    let mut h_y_given_x = 0.0f64;
    // joint r(x_S, y) = sum over x with that S-pattern of q(x) p(y|x)
    let mut grouped = vec![0.0f64; cond_space.total() * out_size];
    net.input_space().for_each_tuple(|x_index, digits| {
        let mut q = 1.0f64;
        for (i, &d) in digits.iter().enumerate() {
            q *= dists.prob(i, d);
        }
        if q == 0.0 {
            return;
        }
        let row = net.channel_row(receiver, x_index);
        let mut h_row = 0.0f64;
        for &p in row {
            if p > 0.0 {
                h_row -= p * p.log2();
            }
        }
        h_y_given_x += q * h_row;

        let cond_digits: Vec<usize> = members.iter().map(|&i| digits[i]).collect();
        let key = cond_space.index(&cond_digits);
        for (y, &p) in row.iter().enumerate() {
            grouped[key * out_size + y] += q * p;
        }
    });

    let mut h_y_given_xs = 0.0f64;
    for chunk in grouped.chunks(out_size) {
        let mass: f64 = chunk.iter().sum();
        if mass == 0.0 {
            continue;
        }
        for &r in chunk {
            if r > 0.0 {
                h_y_given_xs -= r * (r / mass).log2();
            }
        }
    }
    h_y_given_xs - h_y_given_x
}

/// Random row-stochastic pmf of the given length.
pub fn random_pmf(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let dist = Uniform::new(0.05f64, 1.0);
    let mut row: Vec<f64> = (0..len).map(|_| dist.sample(rng)).collect();
    let sum: f64 = row.iter().sum();
    row.iter_mut().for_each(|p| *p /= sum);
    // Nudge the last entry so the row sums to exactly 1 within 1e-15.
    let partial: f64 = row[..len - 1].iter().sum();
    row[len - 1] = 1.0 - partial;
    row
}

/// Random discrete network with the given per-node alphabet bounds.
pub fn random_dmc(rng: &mut ChaCha8Rng, n: usize, max_in: usize, max_out: usize) -> DmcNetwork {
    let input_sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_in)).collect();
    let output_sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_out)).collect();
    let input_total: usize = input_sizes.iter().product();
    let tables = output_sizes
        .iter()
        .map(|&cols| {
            let mut table = Vec::with_capacity(input_total * cols);
            for _ in 0..input_total {
                table.extend(random_pmf(rng, cols));
            }
            table
        })
        .collect();
    DmcNetwork::new(input_sizes, output_sizes, tables).unwrap()
}

pub fn random_dists(rng: &mut ChaCha8Rng, net: &DmcNetwork) -> InputDistributions {
    InputDistributions::new(
        net.input_alphabet_sizes()
            .iter()
            .map(|&m| random_pmf(rng, m))
            .collect(),
    )
    .unwrap()
}

/// Random AWGN network with positive gains and powers.
pub fn random_awgn(rng: &mut ChaCha8Rng, n: usize) -> AwgnNetwork {
    let gain = Uniform::new(0.1f64, 2.0);
    let gain_sq: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0.0 } else { gain.sample(rng) })
                .collect()
        })
        .collect();
    let powers: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2f64..2.0)).collect();
    let noise = rng.gen_range(0.5f64..2.0);
    AwgnNetwork::new(gain_sq, powers, noise).unwrap()
}

/// Random half-duplex schedule: every node listens in at least one phase
/// (otherwise the symmetric region collapses to zero, which is legal but
/// uninteresting for feasibility sampling).
pub fn random_hd_schedule(rng: &mut ChaCha8Rng, n: usize, phases: usize) -> Schedule<NodeSet> {
    loop {
        let payloads: Vec<NodeSet> = (0..phases)
            .map(|_| {
                let mut set = NodeSet::empty(n);
                for i in 0..n {
                    if rng.gen_bool(0.4) {
                        set.insert(i);
                    }
                }
                if set.is_full() {
                    set = set.difference(&NodeSet::singleton(n, rng.gen_range(0..n)));
                }
                set
            })
            .collect();
        let every_node_listens = (0..n).all(|i| payloads.iter().any(|t| !t.contains(i)));
        let someone_transmits = payloads.iter().any(|t| !t.is_empty());
        if every_node_listens && someone_transmits {
            let lengths: Vec<(u64, NodeSet)> = payloads
                .into_iter()
                .map(|p| (rng.gen_range(1u64..=4), p))
                .collect();
            return Schedule::from_lengths(lengths).unwrap();
        }
    }
}

pub fn random_periodic_phases(
    rng: &mut ChaCha8Rng,
    net: &DmcNetwork,
    phases: usize,
) -> Vec<InputDistributions> {
    (0..phases).map(|_| random_dists(rng, net)).collect()
}

/// True when the zero rate vector is feasible, i.e. every subset has a
/// member with a strictly positive cut rate.
pub fn has_positive_region(scenario: &Scenario) -> bool {
    let n = scenario.node_count();
    omnirelay::region::check_feasible(scenario, &RateVector::zero(n), 1e-12)
        .unwrap()
        .feasible
}

/// Random scenario of the given kind (0 = discrete, 1 = full-duplex AWGN,
/// 2 = half-duplex AWGN), regenerated until the rate region has interior.
pub fn random_scenario(rng: &mut ChaCha8Rng, kind: usize) -> Scenario {
    for _ in 0..200 {
        let scenario = match kind {
            0 => {
                let n = rng.gen_range(2..=3);
                let net = random_dmc(rng, n, 2, 2);
                let dists = random_dists(rng, &net);
                Scenario::dmc(net, dists).unwrap()
            }
            1 => {
                let n = rng.gen_range(2..=6);
                Scenario::awgn_fd(random_awgn(rng, n))
            }
            _ => {
                let n = rng.gen_range(2..=5);
                let phases = rng.gen_range(2..=3);
                let net = random_awgn(rng, n);
                let schedule = random_hd_schedule(rng, n, phases);
                Scenario::awgn_hd(net, schedule).unwrap()
            }
        };
        if has_positive_region(&scenario) {
            return scenario;
        }
    }
    panic!("could not draw a scenario with a nonempty region");
}

/// A strictly interior feasible rate vector: a random direction scaled to
/// the boundary and shrunk by `shrink < 1`.
pub fn random_feasible_rates(rng: &mut ChaCha8Rng, scenario: &Scenario, shrink: f64) -> RateVector {
    let n = scenario.node_count();
    let direction: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2f64..1.0)).collect();
    let boundary = boundary_sample(scenario, &direction, 1e-4).unwrap();
    boundary.scaled(shrink).unwrap()
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// `perm[i]` is the new label of old node `i`.
pub fn permute_set(set: &NodeSet, perm: &[usize]) -> NodeSet {
    NodeSet::from_nodes(set.universe(), set.iter().map(|i| perm[i]))
}

pub fn permute_rates(rates: &RateVector, perm: &[usize]) -> RateVector {
    let mut out = vec![0.0; rates.len()];
    for (i, &r) in rates.as_slice().iter().enumerate() {
        out[perm[i]] = r;
    }
    RateVector::new(out).unwrap()
}

pub fn permute_awgn(net: &AwgnNetwork, perm: &[usize]) -> AwgnNetwork {
    let n = net.node_count();
    let mut gain_sq = vec![vec![0.0; n]; n];
    let mut powers = vec![0.0; n];
    for i in 0..n {
        powers[perm[i]] = net.power(i);
        for j in 0..n {
            if i != j {
                gain_sq[perm[i]][perm[j]] = net.gain_sq(i, j);
            }
        }
    }
    AwgnNetwork::new(gain_sq, powers, net.noise_power()).unwrap()
}

pub fn permute_dists(dists: &InputDistributions, perm: &[usize]) -> InputDistributions {
    let n = dists.node_count();
    let mut out = vec![Vec::new(); n];
    for i in 0..n {
        out[perm[i]] = dists.dist(i).to_vec();
    }
    InputDistributions::new(out).unwrap()
}

pub fn permute_dmc(net: &DmcNetwork, perm: &[usize]) -> DmcNetwork {
    let n = net.node_count();
    let mut input_sizes = vec![0usize; n];
    let mut output_sizes = vec![0usize; n];
    for i in 0..n {
        input_sizes[perm[i]] = net.input_alphabet_sizes()[i];
        output_sizes[perm[i]] = net.output_alphabet_sizes()[i];
    }
    let new_space = MixedRadix::new(&input_sizes).unwrap();
    let mut tables = vec![Vec::new(); n];
    for old_receiver in 0..n {
        let cols = net.output_alphabet_sizes()[old_receiver];
        let mut table = vec![0.0f64; new_space.total() * cols];
        new_space.for_each_tuple(|new_x, new_digits| {
            // Old node i's symbol sits at new position perm[i].
            let old_digits: Vec<usize> = (0..n).map(|i| new_digits[perm[i]]).collect();
            let old_x = net.input_space().index(&old_digits);
            let row = net.channel_row(old_receiver, old_x);
            table[new_x * cols..(new_x + 1) * cols].copy_from_slice(row);
        });
        tables[perm[old_receiver]] = table;
    }
    DmcNetwork::new(input_sizes, output_sizes, tables).unwrap()
}

/// Rebuilds a schedule with permuted payloads, preserving the stored
/// weights exactly (lengths stay lengths, normalized weights stay as they
/// are) so cut rates match bit for bit.
fn rebuild_schedule<P>(weights: Vec<f64>, payloads: Vec<P>) -> Schedule<P> {
    if weights.iter().all(|w| w.fract() == 0.0) {
        Schedule::from_lengths(
            weights
                .into_iter()
                .map(|w| w as u64)
                .zip(payloads)
                .collect(),
        )
        .unwrap()
    } else {
        Schedule::from_weights(weights.into_iter().zip(payloads).collect()).unwrap()
    }
}

pub fn permute_scenario(scenario: &Scenario, perm: &[usize]) -> Scenario {
    match scenario {
        Scenario::Dmc { network, inputs } => {
            Scenario::dmc(permute_dmc(network, perm), permute_dists(inputs, perm)).unwrap()
        }
        Scenario::PeriodicDmc { network, schedule } => {
            let weights: Vec<f64> = schedule.phases().iter().map(|p| p.weight).collect();
            let payloads: Vec<InputDistributions> = schedule
                .phases()
                .iter()
                .map(|p| permute_dists(&p.payload, perm))
                .collect();
            Scenario::periodic_dmc(
                permute_dmc(network, perm),
                rebuild_schedule(weights, payloads),
            )
            .unwrap()
        }
        Scenario::AwgnFullDuplex { network } => Scenario::awgn_fd(permute_awgn(network, perm)),
        Scenario::AwgnHalfDuplex { network, schedule } => {
            let weights: Vec<f64> = schedule.phases().iter().map(|p| p.weight).collect();
            let payloads: Vec<NodeSet> = schedule
                .phases()
                .iter()
                .map(|p| permute_set(&p.payload, perm))
                .collect();
            Scenario::awgn_hd(
                permute_awgn(network, perm),
                rebuild_schedule(weights, payloads),
            )
            .unwrap()
        }
    }
}
