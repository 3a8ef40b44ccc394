use std::fmt;

/// A subset of the states `0..n`, as a dense bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    n: usize,
    blocks: Vec<u64>,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            blocks: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for q in 0..n {
            s.insert(q);
        }
        s
    }

    pub fn singleton(n: usize, q: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(q);
        s
    }

    /// Panics if a state is `>= n`.
    pub fn from_states<I: IntoIterator<Item = usize>>(n: usize, states: I) -> Self {
        let mut s = Self::empty(n);
        for q in states {
            s.insert(q);
        }
        s
    }

    /// Size of the universe `0..n`.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, q: usize) -> bool {
        assert!(q < self.n, "state {q} outside universe of size {}", self.n);
        let (b, bit) = (q / 64, 1u64 << (q % 64));
        let fresh = self.blocks[b] & bit == 0;
        self.blocks[b] |= bit;
        fresh
    }

    pub fn remove(&mut self, q: usize) -> bool {
        if q >= self.n {
            return false;
        }
        let (b, bit) = (q / 64, 1u64 << (q % 64));
        let present = self.blocks[b] & bit != 0;
        self.blocks[b] &= !bit;
        present
    }

    pub fn contains(&self, q: usize) -> bool {
        q < self.n && self.blocks[q / 64] & (1u64 << (q % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let tz = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(i * 64 + tz)
            })
        })
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &StateSet) -> usize {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.intersection_len(other) == 0
    }

    fn zip_with(&self, other: &StateSet, op: impl Fn(u64, u64) -> u64) -> StateSet {
        debug_assert_eq!(self.n, other.n);
        StateSet {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// 0/1 characteristic vector.
    pub fn indicator(&self) -> Vec<i64> {
        (0..self.n).map(|q| i64::from(self.contains(q))).collect()
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("}")
    }
}
