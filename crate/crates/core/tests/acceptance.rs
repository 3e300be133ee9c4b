//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Tolerances and budgets are pinned
//! in the asserts.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use omnirelay::infotheory::{conditional_mi, MiQuery};
use omnirelay::model::{
    proper_nonempty_subsets, DmcNetwork, InputDistributions, NodeSet, RateVector, Schedule,
};
use omnirelay::rates::{
    cut_rate_awgn_fd, cut_rate_awgn_hd, cut_rate_dmc, cut_rate_periodic_dmc,
    cut_rate_periodic_dmc_equal, CutQuery, Scenario,
};
use omnirelay::region::{check_feasible, max_symmetric_rate, WitnessMap, DEFAULT_MARGIN};
use omnirelay::simulator::{
    coverage_bound, measure_delays, run, run_with_witness_map, verify_coverage_bound_exhaustive,
    DecodeOracle, OracleMode, SimOptions,
};

fn bsc_pair(eps: f64) -> DmcNetwork {
    #[rustfmt::skip]
    let y1 = vec![
        1.0 - eps, eps,
        eps,       1.0 - eps,
        1.0 - eps, eps,
        eps,       1.0 - eps,
    ];
    let y2 = vec![1.0; 4];
    DmcNetwork::new(vec![2, 2], vec![2, 1], vec![y1, y2]).unwrap()
}

fn unit_awgn(n: usize) -> omnirelay::model::AwgnNetwork {
    let gain_sq = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect();
    omnirelay::model::AwgnNetwork::new(gain_sq, vec![1.0; n], 1.0).unwrap()
}

/// C1 — MI engine exactness: closed-form BSC values within 1e-9 and
/// brute-force oracle equivalence within 1e-10 on 100 random channels.
#[test]
fn c1_mi_engine_exactness() {
    let start = Instant::now();
    let dists = InputDistributions::uniform(&[2, 2]);
    let query = MiQuery::new(0, NodeSet::singleton(2, 0)).unwrap();
    for eps in [0.0, 0.11, 0.5] {
        let mi = conditional_mi(&bsc_pair(eps), &dists, &query).unwrap();
        let expect = 1.0 - h2_oracle(eps);
        assert!(
            (mi - expect).abs() < 1e-9,
            "BSC({eps}): engine {mi}, closed form {expect}"
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0usize;
    for _ in 0..100 {
        let net = random_dmc(&mut rng, 3, 2, 2);
        let dists = random_dists(&mut rng, &net);
        for subset in proper_nonempty_subsets(3) {
            for receiver in subset.iter() {
                let q = MiQuery::new(receiver, subset).unwrap();
                let fast = conditional_mi(&net, &dists, &q).unwrap();
                let slow = brute_force_conditional_mi(&net, &dists, receiver, &subset);
                assert!(
                    (fast - slow).abs() < 1e-10,
                    "oracle mismatch: {fast} vs {slow}"
                );
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "budget exceeded: {elapsed:?}");
    println!(
        "[acceptance] C1 mi-engine-exactness: PASS ({checked} oracle comparisons, {} ms)",
        elapsed.as_millis()
    );
}

/// C2 — the full-duplex formula matches an independently coded one-line
/// evaluation to 1e-12 on 1000 random networks.
#[test]
fn c2_awgn_fd_formula() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut checked = 0usize;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=8);
        let net = random_awgn(&mut rng, n);
        for _ in 0..4 {
            let bits = rng.gen_range(1u32..(1 << n) - 1);
            let subset = NodeSet::from_bits(n, bits);
            let members: Vec<usize> = subset.iter().collect();
            let receiver = members[rng.gen_range(0..members.len())];
            let cut = CutQuery::new(subset, receiver).unwrap();
            let got = cut_rate_awgn_fd(&net, &cut).unwrap();
            let mut power_sum = 0.0;
            for j in subset.complement().iter() {
                power_sum += net.gain_sq(j, receiver) * net.power(j);
            }
            let expect = (1.0 + power_sum / net.noise_power()).log2();
            assert!(
                (got - expect).abs() < 1e-12,
                "formula mismatch: {got} vs {expect}"
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "budget exceeded: {elapsed:?}");
    println!(
        "[acceptance] C2 awgn-fd-formula: PASS ({checked} cuts, {} ms)",
        elapsed.as_millis()
    );
}

/// C3 — half-duplex hand cases: alternating schedule gives symmetric rate
/// 0.5, and weights (1/4, 3/4) give cut rate 0.75 on the favorable cut.
#[test]
fn c3_half_duplex_hand_cases() {
    let net = unit_awgn(2);
    let t1 = NodeSet::singleton(2, 0);
    let t2 = NodeSet::singleton(2, 1);

    let alternating = Schedule::uniform(vec![t1, t2]).unwrap();
    let scenario = Scenario::awgn_hd(net.clone(), alternating).unwrap();
    let symmetric = max_symmetric_rate(&scenario, 1e-7).unwrap();
    assert!(
        (symmetric - 0.5).abs() < 1e-6,
        "alternating symmetric rate {symmetric}"
    );

    // Node 1 listens three quarters of the time: S = {1}, i0 = 1.
    let skewed = Schedule::from_lengths(vec![(1, t1), (3, t2)]).unwrap();
    let cut = CutQuery::new(NodeSet::singleton(2, 0), 0).unwrap();
    let rate = cut_rate_awgn_hd(&net, &skewed, &cut).unwrap();
    assert!((rate - 0.75).abs() < 1e-6, "favorable cut rate {rate}");

    println!(
        "[acceptance] C3 half-duplex-hand-cases: PASS (symmetric {symmetric}, favorable cut {rate})"
    );
}

/// C4 — periodic evaluator specializations are bit-for-bit: K=1 equals the
/// single-distribution evaluator, equal lengths equal the plain-average
/// form, on 100 random discrete instances.
#[test]
fn c4_periodic_specializations() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let net = random_dmc(&mut rng, n, 3, 3);
        let bits = rng.gen_range(1u32..(1 << n) - 1);
        let subset = NodeSet::from_bits(n, bits);
        let receiver = subset.iter().next().unwrap();
        let cut = CutQuery::new(subset, receiver).unwrap();

        // K = 1, arbitrary block length.
        let dists = random_dists(&mut rng, &net);
        let single =
            Schedule::from_lengths(vec![(rng.gen_range(1u64..=5), dists.clone())]).unwrap();
        let plain = cut_rate_dmc(&net, &dists, &cut).unwrap();
        let periodic = cut_rate_periodic_dmc(&net, &single, &cut).unwrap();
        assert_eq!(plain.to_bits(), periodic.to_bits(), "K=1 specialization");

        // Equal lengths vs the plain-average form.
        let k = rng.gen_range(2..=4);
        let phases = random_periodic_phases(&mut rng, &net, k);
        let len = rng.gen_range(1u64..=5);
        let equal_schedule =
            Schedule::from_lengths(phases.iter().map(|p| (len, p.clone())).collect()).unwrap();
        let general = cut_rate_periodic_dmc(&net, &equal_schedule, &cut).unwrap();
        let averaged = cut_rate_periodic_dmc_equal(&net, &phases, &cut).unwrap();
        assert_eq!(
            general.to_bits(),
            averaged.to_bits(),
            "equal-length specialization"
        );
    }
    println!("[acceptance] C4 periodic-specializations: PASS (100 instances, bit-for-bit)");
}

/// C5 — feasibility structure: downward closure and relabeling verdict
/// invariance over 1000 random instances across all three model kinds.
#[test]
fn c5_feasibility_structure() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut counterexamples = 0usize;
    for trial in 0..1000 {
        let scenario = random_scenario(&mut rng, trial % 3);
        let n = scenario.node_count();
        let rates = random_feasible_rates(&mut rng, &scenario, 0.85);
        let cert = check_feasible(&scenario, &rates, 0.0).unwrap();
        if !cert.feasible {
            counterexamples += 1;
            continue;
        }
        // Downward closure.
        let shrunk = RateVector::new(
            rates
                .as_slice()
                .iter()
                .map(|r| r * rng.gen_range(0.0f64..=1.0))
                .collect(),
        )
        .unwrap();
        if !check_feasible(&scenario, &shrunk, 0.0).unwrap().feasible {
            counterexamples += 1;
        }
        // Relabeling invariance, on a feasible and an infeasible vector.
        let perm = random_permutation(&mut rng, n);
        let permuted = permute_scenario(&scenario, &perm);
        for (vector, _label) in [
            (rates.clone(), "feasible"),
            (rates.scaled(1.7).unwrap(), "scaled"),
        ] {
            let original = check_feasible(&scenario, &vector, DEFAULT_MARGIN).unwrap();
            let relabeled =
                check_feasible(&permuted, &permute_rates(&vector, &perm), DEFAULT_MARGIN).unwrap();
            if original.feasible != relabeled.feasible {
                counterexamples += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(counterexamples, 0);
    assert!(elapsed.as_secs() < 30, "budget exceeded: {elapsed:?}");
    println!(
        "[acceptance] C5 feasibility-structure: PASS (1000 instances, 0 counterexamples, {} ms)",
        elapsed.as_millis()
    );
}

/// C6 — coverage bound 2^(n-2): exhaustive for n=3,4 over every witness
/// map and admissible oracle; 10^4 random/adversarial runs for n=5..8;
/// exact completion at block 1 for n=2.
#[test]
fn c6_coverage_bound() {
    let start = Instant::now();

    // n=2 is tight: completion at exactly block 1, every mode.
    let scenario2 = Scenario::awgn_fd(unit_awgn(2));
    for mode in [
        OracleMode::Greedy,
        OracleMode::AdversarialHeuristic,
        OracleMode::ExhaustiveAdversarial,
        OracleMode::Random,
    ] {
        let mut oracle = DecodeOracle::new(mode, 9);
        let options = SimOptions {
            max_blocks: 4,
            ..SimOptions::default()
        };
        let trace = run(&scenario2, &RateVector::zero(2), &mut oracle, &options).unwrap();
        assert_eq!(trace.completion_block, Some(1), "{mode:?}");
    }

    // Exhaustive: every witness map, every admissible assignment sequence.
    let report3 = verify_coverage_bound_exhaustive(3).unwrap();
    assert_eq!(report3.bound, 2);
    assert_eq!(report3.violations, 0);
    assert!(report3.worst_completion <= 2);

    let report4 = verify_coverage_bound_exhaustive(4).unwrap();
    assert_eq!(report4.bound, 4);
    assert_eq!(report4.witness_maps_checked, 5184);
    assert_eq!(report4.violations, 0);
    assert!(report4.worst_completion <= 4);

    // Randomized sweeps for n = 5..8: network-derived witness maps and
    // synthetic ones, random and adversarial-heuristic oracles.
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut runs = 0usize;
    for n in 5..=8usize {
        let bound = coverage_bound(n);
        for trial in 0..1250u64 {
            let mode = if trial % 2 == 0 {
                OracleMode::Random
            } else {
                OracleMode::AdversarialHeuristic
            };
            let options = SimOptions {
                max_blocks: bound,
                stop_on_completion: true,
                ..SimOptions::default()
            };

            // Network-derived witness structure.
            let scenario = Scenario::awgn_fd(random_awgn(&mut rng, n));
            let rates = random_feasible_rates(&mut rng, &scenario, 0.8);
            let mut oracle = DecodeOracle::new(mode, trial);
            let trace = run(&scenario, &rates, &mut oracle, &options).unwrap();
            assert!(trace.completion_block.unwrap() <= bound);
            runs += 1;

            // Synthetic witness structure.
            let witnesses = WitnessMap::from_fn(n, |s| {
                let members: Vec<usize> = s.iter().collect();
                members[rng.gen_range(0..members.len())]
            })
            .unwrap();
            let mut oracle = DecodeOracle::new(mode, trial.wrapping_add(1 << 32));
            let trace = run_with_witness_map(&witnesses, &mut oracle, &options).unwrap();
            assert!(trace.completion_block.unwrap() <= bound);
            runs += 1;
        }
    }
    assert!(runs >= 10_000);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "budget exceeded: {elapsed:?}");
    println!(
        "[acceptance] C6 coverage-bound: PASS (n=3: {} maps, n=4: {} maps, {} randomized runs, worst n=4 completion {}, {} ms)",
        report3.witness_maps_checked,
        report4.witness_maps_checked,
        runs,
        report4.worst_completion,
        elapsed.as_millis()
    );
}

/// C7 — delay boundedness: the observed sup decode delay over blocks
/// [500,1000] equals the sup over [250,500] on 100 random feasible
/// configurations with n <= 5.
#[test]
fn c7_delay_stabilization() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut failures = 0usize;
    for trial in 0..100u64 {
        let n = 2 + (trial as usize % 4); // 2..=5
        let scenario = Scenario::awgn_fd(random_awgn(&mut rng, n));
        let rates = random_feasible_rates(&mut rng, &scenario, 0.8);
        let mut oracle = DecodeOracle::new(OracleMode::Greedy, trial);
        let options = SimOptions {
            max_blocks: 1000,
            ..SimOptions::default()
        };
        let trace = run(&scenario, &rates, &mut oracle, &options).unwrap();
        let summary = measure_delays(&trace, 1000).unwrap();
        if !summary.stabilized || summary.late_window_sup.is_none() {
            failures += 1;
        }
    }
    assert_eq!(failures, 0);
    let elapsed = start.elapsed();
    println!(
        "[acceptance] C7 delay-stabilization: PASS (100 configurations, 0 failures, {} ms)",
        elapsed.as_millis()
    );
}

/// C8 — bisection sandwich: R*-2tol feasible, R*+2tol infeasible, on 100
/// random AWGN networks at tol = 1e-6 bits.
#[test]
fn c8_bisection_sandwich() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let tol = 1e-6;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let scenario = Scenario::awgn_fd(random_awgn(&mut rng, n));
        let r = max_symmetric_rate(&scenario, tol).unwrap();
        assert!(r > 2.0 * tol, "positive networks have interior rates");
        let below = RateVector::symmetric(n, r - 2.0 * tol).unwrap();
        let above = RateVector::symmetric(n, r + 2.0 * tol).unwrap();
        assert!(
            check_feasible(&scenario, &below, 0.0).unwrap().feasible,
            "R* - 2tol should be feasible"
        );
        assert!(
            !check_feasible(&scenario, &above, 0.0).unwrap().feasible,
            "R* + 2tol should be infeasible"
        );
    }
    let elapsed = start.elapsed();
    println!(
        "[acceptance] C8 bisection-sandwich: PASS (100 networks, {} ms)",
        elapsed.as_millis()
    );
}
