use crate::error::{Error, Result, ValidationReport};
use crate::model::indexing::MixedRadix;

/// Row sums of a pmf table may drift from 1 by at most this much.
pub const PMF_TOLERANCE: f64 = 1e-12;

/// Default cap on the total number of stored table entries.
pub const DEFAULT_TABLE_GUARD: usize = 10_000_000;

/// A discrete memoryless network channel on `n` nodes: every node `i`
/// transmits a symbol from its input alphabet and receives an output whose
/// conditional law is `p(y_i | x_1, …, x_n)`.
///
/// Each receiver's channel is a dense row-stochastic table with one row per
/// joint input configuration (mixed-radix index, node 0 most significant)
/// and one column per output symbol.
#[derive(Debug, Clone)]
pub struct DmcNetwork {
    input_alphabet_sizes: Vec<usize>,
    output_alphabet_sizes: Vec<usize>,
    receiver_channels: Vec<Vec<f64>>,
    input_space: MixedRadix,
}

impl DmcNetwork {
    pub fn new(
        input_alphabet_sizes: Vec<usize>,
        output_alphabet_sizes: Vec<usize>,
        receiver_channels: Vec<Vec<f64>>,
    ) -> Result<Self> {
        Self::with_guard(
            input_alphabet_sizes,
            output_alphabet_sizes,
            receiver_channels,
            DEFAULT_TABLE_GUARD,
        )
    }

    pub fn with_guard(
        input_alphabet_sizes: Vec<usize>,
        output_alphabet_sizes: Vec<usize>,
        receiver_channels: Vec<Vec<f64>>,
        max_entries: usize,
    ) -> Result<Self> {
        check_table_guard(&input_alphabet_sizes, &output_alphabet_sizes, max_entries)?;
        let report = Self::validate(
            &input_alphabet_sizes,
            &output_alphabet_sizes,
            &receiver_channels,
        );
        report.into_result()?;
        let input_space = MixedRadix::new(&input_alphabet_sizes)?;
        Ok(Self {
            input_alphabet_sizes,
            output_alphabet_sizes,
            receiver_channels,
            input_space,
        })
    }

    /// Checks every invariant and returns the full list of violations.
    pub fn validate(
        input_alphabet_sizes: &[usize],
        output_alphabet_sizes: &[usize],
        receiver_channels: &[Vec<f64>],
    ) -> ValidationReport {
        let mut report = ValidationReport::new();
        let n = input_alphabet_sizes.len();
        if n == 0 {
            report.push("network must have at least one node");
            return report;
        }
        if output_alphabet_sizes.len() != n {
            report.push(format!(
                "output alphabet count {} does not match node count {n}",
                output_alphabet_sizes.len()
            ));
            return report;
        }
        if receiver_channels.len() != n {
            report.push(format!(
                "receiver channel count {} does not match node count {n}",
                receiver_channels.len()
            ));
            return report;
        }
        for (i, &m) in input_alphabet_sizes.iter().enumerate() {
            if m == 0 {
                report.push(format!("input alphabet of node {} is empty", i + 1));
            }
        }
        for (i, &m) in output_alphabet_sizes.iter().enumerate() {
            if m == 0 {
                report.push(format!("output alphabet of node {} is empty", i + 1));
            }
        }
        if !report.is_valid() {
            return report;
        }
        let input_space = match MixedRadix::new(input_alphabet_sizes) {
            Ok(s) => s,
            Err(e) => {
                report.push(e.to_string());
                return report;
            }
        };
        for (i, table) in receiver_channels.iter().enumerate() {
            let cols = output_alphabet_sizes[i];
            if table.len() != input_space.total() * cols {
                report.push(format!(
                    "receiver {} table has {} entries, expected {}",
                    i + 1,
                    table.len(),
                    input_space.total() * cols
                ));
                continue;
            }
            for (row_idx, row) in table.chunks(cols).enumerate() {
                report_pmf_row(&mut report, row, || {
                    format!("receiver {} row {row_idx}", i + 1)
                });
            }
        }
        report
    }

    pub fn node_count(&self) -> usize {
        self.input_alphabet_sizes.len()
    }

    pub fn input_alphabet_sizes(&self) -> &[usize] {
        &self.input_alphabet_sizes
    }

    pub fn output_alphabet_sizes(&self) -> &[usize] {
        &self.output_alphabet_sizes
    }

    pub fn input_space(&self) -> &MixedRadix {
        &self.input_space
    }

    /// `p(· | x)` at receiver `i` for the joint input with the given index.
    pub fn channel_row(&self, receiver: usize, input_index: usize) -> &[f64] {
        let cols = self.output_alphabet_sizes[receiver];
        &self.receiver_channels[receiver][input_index * cols..(input_index + 1) * cols]
    }

    /// Builds per-receiver channels by marginalizing a full joint law
    /// `p(y_1, …, y_n | x_1, …, x_n)`.
    pub fn from_joint(joint: &JointChannel) -> Result<Self> {
        let n = joint.input_alphabet_sizes.len();
        let mut receiver_channels = Vec::with_capacity(n);
        for receiver in 0..n {
            receiver_channels.push(joint.marginalize(receiver)?);
        }
        Self::new(
            joint.input_alphabet_sizes.clone(),
            joint.output_alphabet_sizes.clone(),
            receiver_channels,
        )
    }
}

fn check_table_guard(
    input_sizes: &[usize],
    output_sizes: &[usize],
    max_entries: usize,
) -> Result<()> {
    let input_space = MixedRadix::new(input_sizes)?;
    let mut total = 0usize;
    for &cols in output_sizes {
        total = input_space
            .total()
            .checked_mul(cols)
            .and_then(|e| total.checked_add(e))
            .ok_or_else(|| Error::guard("table_size", "entry count overflows usize"))?;
    }
    if total > max_entries {
        return Err(Error::guard(
            "table_size",
            format!("{total} entries exceed the cap of {max_entries}"),
        ));
    }
    Ok(())
}

fn report_pmf_row(report: &mut ValidationReport, row: &[f64], label: impl Fn() -> String) {
    let mut sum = 0.0;
    for &p in row {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            report.push(format!("{}: entry {p} outside [0,1]", label()));
            return;
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PMF_TOLERANCE {
        report.push(format!("{}: row sum {sum} differs from 1", label()));
    }
}

pub(crate) fn validate_pmf(report: &mut ValidationReport, pmf: &[f64], label: &str) {
    if pmf.is_empty() {
        report.push(format!("{label}: empty pmf"));
        return;
    }
    report_pmf_row(report, pmf, || label.to_string());
}

/// A full joint conditional law `p(y_1, …, y_n | x_1, …, x_n)` stored as one
/// row per joint input configuration and one column per joint output tuple.
#[derive(Debug, Clone)]
pub struct JointChannel {
    pub input_alphabet_sizes: Vec<usize>,
    pub output_alphabet_sizes: Vec<usize>,
    pub rows: Vec<f64>,
    input_space: MixedRadix,
    output_space: MixedRadix,
}

impl JointChannel {
    pub fn new(
        input_alphabet_sizes: Vec<usize>,
        output_alphabet_sizes: Vec<usize>,
        rows: Vec<f64>,
    ) -> Result<Self> {
        Self::with_guard(
            input_alphabet_sizes,
            output_alphabet_sizes,
            rows,
            DEFAULT_TABLE_GUARD,
        )
    }

    pub fn with_guard(
        input_alphabet_sizes: Vec<usize>,
        output_alphabet_sizes: Vec<usize>,
        rows: Vec<f64>,
        max_entries: usize,
    ) -> Result<Self> {
        if input_alphabet_sizes.len() != output_alphabet_sizes.len() {
            return Err(Error::BadQuery(format!(
                "{} input alphabets but {} output alphabets",
                input_alphabet_sizes.len(),
                output_alphabet_sizes.len()
            )));
        }
        let input_space = MixedRadix::new(&input_alphabet_sizes)?;
        let output_space = MixedRadix::new(&output_alphabet_sizes)?;
        let entries = input_space
            .total()
            .checked_mul(output_space.total())
            .ok_or_else(|| Error::guard("table_size", "joint table overflows usize"))?;
        if entries > max_entries {
            return Err(Error::guard(
                "table_size",
                format!("{entries} joint entries exceed the cap of {max_entries}"),
            ));
        }
        let mut report = ValidationReport::new();
        if rows.len() != entries {
            report.push(format!(
                "joint table has {} entries, expected {entries}",
                rows.len()
            ));
        } else {
            for (row_idx, row) in rows.chunks(output_space.total()).enumerate() {
                report_pmf_row(&mut report, row, || format!("joint row {row_idx}"));
            }
        }
        report.into_result()?;
        Ok(Self {
            input_alphabet_sizes,
            output_alphabet_sizes,
            rows,
            input_space,
            output_space,
        })
    }

    /// Sums out every output except `y_receiver`, giving the dense
    /// `p(y_receiver | x)` table (row-major over input configurations).
    pub fn marginalize(&self, receiver: usize) -> Result<Vec<f64>> {
        if receiver >= self.input_alphabet_sizes.len() {
            return Err(Error::BadQuery(format!(
                "receiver {} out of range",
                receiver + 1
            )));
        }
        let cols = self.output_alphabet_sizes[receiver];
        let out_total = self.output_space.total();
        let mut table = vec![0.0f64; self.input_space.total() * cols];
        for x in 0..self.input_space.total() {
            let row = &self.rows[x * out_total..(x + 1) * out_total];
            let out = &mut table[x * cols..(x + 1) * cols];
            for (y_joint, &p) in row.iter().enumerate() {
                out[self.output_space.digit(y_joint, receiver)] += p;
            }
        }
        Ok(table)
    }
}

/// A per-node product input distribution `q_1(x_1) ⋯ q_n(x_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistributions {
    dists: Vec<Vec<f64>>,
}

impl InputDistributions {
    pub fn new(dists: Vec<Vec<f64>>) -> Result<Self> {
        let report = Self::validate(&dists, None);
        report.into_result()?;
        Ok(Self { dists })
    }

    /// Uniform distribution on every node's alphabet.
    pub fn uniform(alphabet_sizes: &[usize]) -> Self {
        let dists = alphabet_sizes
            .iter()
            .map(|&m| vec![1.0 / m as f64; m])
            .collect();
        Self { dists }
    }

    pub fn validate(dists: &[Vec<f64>], alphabet_sizes: Option<&[usize]>) -> ValidationReport {
        let mut report = ValidationReport::new();
        if dists.is_empty() {
            report.push("no input distributions given");
        }
        for (i, q) in dists.iter().enumerate() {
            validate_pmf(
                &mut report,
                q,
                &format!("input distribution of node {}", i + 1),
            );
        }
        if let Some(sizes) = alphabet_sizes {
            if sizes.len() != dists.len() {
                report.push(format!(
                    "{} distributions for {} nodes",
                    dists.len(),
                    sizes.len()
                ));
            } else {
                for (i, (q, &m)) in dists.iter().zip(sizes).enumerate() {
                    if q.len() != m {
                        report.push(format!(
                            "node {} distribution has {} entries, alphabet size is {m}",
                            i + 1,
                            q.len()
                        ));
                    }
                }
            }
        }
        report
    }

    pub fn matches(&self, alphabet_sizes: &[usize]) -> bool {
        Self::validate(&self.dists, Some(alphabet_sizes)).is_valid()
    }

    pub fn node_count(&self) -> usize {
        self.dists.len()
    }

    pub fn prob(&self, node: usize, symbol: usize) -> f64 {
        self.dists[node][symbol]
    }

    pub fn dist(&self, node: usize) -> &[f64] {
        &self.dists[node]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_bsc_rows() {
        let rows = vec![0.9, 0.1, 0.1, 0.9];
        let report = DmcNetwork::validate(&[2], &[2], &[rows]);
        assert!(report.is_valid());
    }

    #[test]
    fn bad_row_sum_reported() {
        let rows = vec![0.5, 0.6, 0.1, 0.9];
        let report = DmcNetwork::validate(&[2], &[2], &[rows]);
        assert!(!report.is_valid());
        assert!(report.violations[0].contains("row sum"));
    }

    #[test]
    fn table_guard_enforced() {
        let err =
            DmcNetwork::with_guard(vec![2, 2], vec![2, 2], vec![vec![], vec![]], 4).unwrap_err();
        assert!(matches!(err, Error::Guard { .. }));
    }

    #[test]
    fn two_node_bsc_builds() {
        // Node 1 hears node 2 through a BSC; node 2 hears nothing.
        let y1 = vec![
            0.9, 0.1, // (x1=0, x2=0)
            0.1, 0.9, // (0,1)
            0.9, 0.1, // (1,0)
            0.1, 0.9, // (1,1)
        ];
        let y2 = vec![1.0; 4]; // constant output, |Y_2| = 1
        let net = DmcNetwork::new(vec![2, 2], vec![2, 1], vec![y1, y2]).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.channel_row(0, 1), &[0.1, 0.9]);
    }

    #[test]
    fn marginal_of_independent_joint_is_factor() {
        // Two nodes, node 2 with a trivial input: p(y1,y2|x1) factors as
        // p1(y1|x1) p2(y2|x1).
        let p1 = [[0.7, 0.3], [0.2, 0.8]];
        let p2 = [[0.6, 0.4], [0.5, 0.5]];
        let mut rows = Vec::new();
        for x in 0..2 {
            for &a in &p1[x] {
                for &b in &p2[x] {
                    rows.push(a * b);
                }
            }
        }
        let joint = JointChannel::new(vec![2, 1], vec![2, 2], rows).unwrap();
        let m0 = joint.marginalize(0).unwrap();
        let m1 = joint.marginalize(1).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert!((m0[x * 2 + y] - p1[x][y]).abs() < 1e-15);
                assert!((m1[x * 2 + y] - p2[x][y]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn marginal_of_deterministic_copy_is_identity() {
        // y1 = y2 = x1 for a binary x1.
        let mut rows = vec![0.0; 2 * 4];
        rows[0] = 1.0; // x=0 -> (y1,y2)=(0,0)
        rows[4 + 3] = 1.0; // x=1 -> (1,1)
        let joint = JointChannel::new(vec![2, 1], vec![2, 2], rows).unwrap();
        let m = joint.marginalize(0).unwrap();
        assert_eq!(m, vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!(joint.marginalize(1).unwrap(), m);
    }

    #[test]
    fn joint_requires_matching_node_counts() {
        assert!(JointChannel::new(vec![2], vec![2, 2], vec![0.0; 8]).is_err());
    }

    #[test]
    fn marginalization_matches_nested_loop_oracle_and_stays_stochastic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            // Random 2-node joint, binary everywhere.
            let mut rows = Vec::with_capacity(4 * 4);
            for _ in 0..4 {
                let raw: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05f64..1.0)).collect();
                let sum: f64 = raw.iter().sum();
                let mut row: Vec<f64> = raw.iter().map(|v| v / sum).collect();
                let partial: f64 = row[..3].iter().sum();
                row[3] = 1.0 - partial;
                rows.extend(row);
            }
            let joint = JointChannel::new(vec![2, 2], vec![2, 2], rows.clone()).unwrap();
            for receiver in 0..2 {
                let table = joint.marginalize(receiver).unwrap();
                for x in 0..4 {
                    let row_sum: f64 = table[x * 2..(x + 1) * 2].iter().sum();
                    assert!((row_sum - 1.0).abs() <= 1e-12);
                    for y in 0..2 {
                        // Independent nested-loop summation over the other output.
                        let mut expect = 0.0;
                        for other in 0..2 {
                            let y_joint = if receiver == 0 {
                                y * 2 + other
                            } else {
                                other * 2 + y
                            };
                            expect += rows[x * 4 + y_joint];
                        }
                        assert!((table[x * 2 + y] - expect).abs() < 1e-15);
                    }
                }
            }
            // The derived network passes full validation.
            assert!(DmcNetwork::from_joint(&joint).is_ok());
        }
    }

    #[test]
    fn input_distributions_validate() {
        assert!(InputDistributions::new(vec![vec![0.5, 0.5], vec![1.0]]).is_ok());
        assert!(InputDistributions::new(vec![vec![0.5, 0.6]]).is_err());
        let u = InputDistributions::uniform(&[4]);
        assert_eq!(u.dist(0), &[0.25; 4]);
    }
}
