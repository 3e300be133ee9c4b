use std::fmt;

/// A subset of the nodes `{1, …, n}` of a network, stored as a bitmask over
/// internal indices `0..n-1` (bit `i` is node `i+1` in external numbering).
///
/// Every set carries the universe size `n` so that complements are exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet {
    bits: u32,
    n: u8,
}

pub const MAX_NODES: usize = 20;

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= 32);
        Self {
            bits: 0,
            n: n as u8,
        }
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        Self {
            bits: Self::full_mask(n),
            n: n as u8,
        }
    }

    pub fn singleton(n: usize, node: usize) -> Self {
        debug_assert!(node < n);
        Self {
            bits: 1 << node,
            n: n as u8,
        }
    }

    pub fn from_bits(n: usize, bits: u32) -> Self {
        debug_assert!(bits & !Self::full_mask(n) == 0, "bits outside universe");
        Self { bits, n: n as u8 }
    }

    pub fn from_nodes<I: IntoIterator<Item = usize>>(n: usize, nodes: I) -> Self {
        let mut bits = 0u32;
        for node in nodes {
            debug_assert!(node < n);
            bits |= 1 << node;
        }
        Self { bits, n: n as u8 }
    }

    fn full_mask(n: usize) -> u32 {
        if n >= 32 {
            u32::MAX
        } else {
            (1u32 << n) - 1
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn universe(&self) -> usize {
        self.n as usize
    }

    pub fn contains(&self, node: usize) -> bool {
        node < self.n as usize && self.bits & (1 << node) != 0
    }

    pub fn insert(&mut self, node: usize) {
        debug_assert!(node < self.n as usize);
        self.bits |= 1 << node;
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == Self::full_mask(self.n as usize)
    }

    /// Nonempty and not the whole node set: the subsets quantified over by
    /// the cut conditions.
    pub fn is_proper_nonempty(&self) -> bool {
        !self.is_empty() && !self.is_full()
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: !self.bits & Self::full_mask(self.n as usize),
            n: self.n,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits | other.bits,
            n: self.n,
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits & other.bits,
            n: self.n,
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits & !other.bits,
            n: self.n,
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    /// Member nodes in ascending internal index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n as usize;
        (0..n).filter(move |i| self.bits & (1 << i) != 0)
    }

    /// External (1-based) node numbers, ascending.
    pub fn external_nodes(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

/// All proper nonempty subsets of `{0..n-1}` in ascending mask order
/// (`2^n - 2` of them).
pub fn proper_nonempty_subsets(n: usize) -> impl Iterator<Item = NodeSet> {
    debug_assert!((1..=32).contains(&n));
    let full = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
    (1..full).map(move |bits| NodeSet::from_bits(n, bits))
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NodeSet({self})")
    }
}

impl fmt::Display for NodeSet {
    /// Renders external 1-based node numbers, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, node) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", node + 1)?;
        }
        write!(f, "}}")
    }
}
