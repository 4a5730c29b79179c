//! Subsets closed by sums, compatible subsets, exhaustive enumeration and
//! Hasse diagrams.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::DegreeVector;
use crate::rootsys::RootSystem;

/// Largest ground a [`BitSet`] can index.
pub const MAX_GROUND: usize = 64;
/// Default and maximum enumeration cap.
pub const DEFAULT_CAP: usize = 32;

/// Subset of a ground of at most 64 elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct BitSet(u64);

impl BitSet {
    pub const EMPTY: BitSet = BitSet(0);

    pub fn from_bits(bits: u64) -> Self {
        BitSet(bits)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            BitSet(u64::MAX)
        } else {
            BitSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        indices.into_iter().fold(BitSet::EMPTY, |s, i| s.with(i))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        BitSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        BitSet(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: BitSet) -> Self {
        BitSet(self.0 | o.0)
    }

    pub fn intersection(self, o: BitSet) -> Self {
        BitSet(self.0 & o.0)
    }

    pub fn difference(self, o: BitSet) -> Self {
        BitSet(self.0 & !o.0)
    }

    pub fn complement(self, n: usize) -> Self {
        BitSet(!self.0).intersection(BitSet::full(n))
    }

    pub fn is_subset(self, o: BitSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Cardinality first, then numeric value.
    pub fn canonical_key(self) -> (usize, u64) {
        (self.len(), self.0)
    }
}

impl fmt::Display for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Ground set with every relation `elements[i] + elements[j] = elements[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumGround {
    elements: Vec<DegreeVector>,
    /// `(i, j, k)` with `i ≤ j`.
    sums: Vec<(usize, usize, usize)>,
}

impl SumGround {
    pub fn new(elements: Vec<DegreeVector>) -> Result<Self> {
        if elements.len() > MAX_GROUND {
            return Err(Error::CapExceeded {
                size: elements.len(),
                cap: MAX_GROUND,
            });
        }
        if let Some(first) = elements.first() {
            if let Some(bad) = elements.iter().find(|e| e.rank() != first.rank()) {
                return Err(Error::RankMismatch {
                    expected: first.rank(),
                    found: bad.rank(),
                });
            }
        }
        let index: HashMap<&DegreeVector, usize> =
            elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != elements.len() {
            return Err(Error::Invalid("ground elements must be distinct".into()));
        }
        let mut sums = Vec::new();
        for i in 0..elements.len() {
            for j in i..elements.len() {
                if let Some(&k) = index.get(&(&elements[i] + &elements[j])) {
                    sums.push((i, j, k));
                }
            }
        }
        Ok(SumGround { elements, sums })
    }

    pub fn from_roots(rs: &RootSystem) -> Result<Self> {
        SumGround::new(rs.roots().to_vec())
    }

    pub fn elements(&self) -> &[DegreeVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum_pairs(&self) -> &[(usize, usize, usize)] {
        &self.sums
    }

    pub fn full(&self) -> BitSet {
        BitSet::full(self.len())
    }

    /// For all `α, β ∈ s` (including `α = β`) with `α + β` in the ground, `α + β ∈ s`.
    pub fn is_closed_by_sums(&self, s: BitSet) -> bool {
        self.sums
            .iter()
            .all(|&(i, j, k)| !(s.contains(i) && s.contains(j)) || s.contains(k))
    }

    /// For every `γ = α + β` in `s`, `α ∈ s` or `β ∈ s`.
    pub fn is_compatible(&self, s: BitSet) -> bool {
        self.sums
            .iter()
            .all(|&(i, j, k)| !s.contains(k) || s.contains(i) || s.contains(j))
    }

    /// Smallest closed superset.
    pub fn closure(&self, s: BitSet) -> BitSet {
        let mut cur = s;
        loop {
            let mut next = cur;
            for &(i, j, k) in &self.sums {
                if next.contains(i) && next.contains(j) {
                    next = next.with(k);
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Every closed subset, sorted by cardinality then bit value.
    pub fn enumerate_closed(&self, cap: usize) -> Result<Vec<BitSet>> {
        let cap = cap.min(MAX_GROUND);
        if self.len() > cap {
            return Err(Error::CapExceeded {
                size: self.len(),
                cap,
            });
        }
        // Fan out over the decisions on the first few elements.
        let split = self.len().min(6);
        let mut prefixes = vec![(BitSet::EMPTY, BitSet::EMPTY)];
        for e in 0..split {
            prefixes = prefixes
                .into_iter()
                .flat_map(|(inc, exc)| self.branch(inc, exc, e))
                .collect();
        }
        let mut out: Vec<BitSet> = prefixes
            .into_par_iter()
            .flat_map_iter(|(inc, exc)| {
                let mut found = Vec::new();
                self.dfs(inc, exc, split, &mut found);
                found
            })
            .collect();
        out.sort_by_key(|s| s.canonical_key());
        Ok(out)
    }

    fn branch(&self, inc: BitSet, exc: BitSet, e: usize) -> Vec<(BitSet, BitSet)> {
        if inc.contains(e) {
            return vec![(inc, exc)];
        }
        let mut out = vec![(inc, exc.with(e))];
        let closed = self.closure(inc.with(e));
        if closed.intersection(exc).is_empty() {
            out.push((closed, exc));
        }
        out
    }

    fn dfs(&self, inc: BitSet, exc: BitSet, e: usize, out: &mut Vec<BitSet>) {
        if e == self.len() {
            out.push(inc);
            return;
        }
        for (i, x) in self.branch(inc, exc, e) {
            self.dfs(i, x, e + 1, out);
        }
    }

    /// Disjoint union of grounds with pairwise disjoint supports.
    pub fn product(parts: &[SumGround]) -> Result<SumGround> {
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (p, g) in parts.iter().enumerate() {
            for e in &g.elements {
                for v in e.support() {
                    if let Some(&q) = owner.get(&v) {
                        if q != p {
                            return Err(Error::OverlappingSupports { vertex: v + 1 });
                        }
                    }
                    owner.insert(v, p);
                }
            }
        }
        let g = SumGround::new(parts.iter().flat_map(|g| g.elements.clone()).collect())?;
        let expected: usize = parts.iter().map(|g| g.sums.len()).sum();
        if g.sums.len() != expected {
            return Err(Error::Internal("sums across components".into()));
        }
        Ok(g)
    }

    /// Every multiset decomposition of each element into at least two ground
    /// elements, recorded as the set of distinct parts used.
    pub fn decompositions(&self) -> Vec<Vec<BitSet>> {
        fn rec(
            g: &SumGround,
            rem: &DegreeVector,
            min: usize,
            parts: usize,
            used: BitSet,
            out: &mut Vec<BitSet>,
        ) {
            if rem.is_zero() {
                if parts >= 2 {
                    out.push(used);
                }
                return;
            }
            for r in min..g.len() {
                if g.elements[r].leq(rem).unwrap() {
                    rec(g, &(rem - &g.elements[r]), r, parts + 1, used.with(r), out);
                }
            }
        }
        self.elements
            .iter()
            .map(|e| {
                let mut out = Vec::new();
                rec(self, e, 0, 0, BitSet::EMPTY, &mut out);
                out.sort_by_key(|s| s.bits());
                out.dedup();
                out
            })
            .collect()
    }
}

/// Covering relations of inclusion among `sets`: `(lower, upper)` index pairs.
pub fn hasse(sets: &[BitSet]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sets[i].canonical_key()));
    let edges: Vec<Vec<(usize, usize)>> = (0..sets.len())
        .into_par_iter()
        .map(|t| {
            let mut covers: Vec<usize> = Vec::new();
            for &s in &order {
                let (a, b) = (sets[s], sets[t]);
                if a != b
                    && a.is_subset(b)
                    && !covers.iter().any(|&c| a.is_subset(sets[c]))
                {
                    covers.push(s);
                }
            }
            covers.sort_unstable();
            covers.into_iter().map(|s| (s, t)).collect()
        })
        .collect();
    let mut out: Vec<(usize, usize)> = edges.into_iter().flatten().collect();
    out.sort_unstable();
    out
}

/// Whether `span{ξ_β : β ∈ s}` is closed under the bracket, read off the
/// structure constants.
pub fn graded_lie_check(rs: &RootSystem, s: BitSet) -> bool {
    s.iter().all(|i| {
        s.iter().all(|j| match rs.structure_constant(i, j) {
            Some(n) if n != 0 => s.contains(rs.sum_index(i, j).unwrap()),
            _ => true,
        })
    })
}

/// Compatibility through multiset decompositions: every decomposition of
/// every `γ ∈ s` into two or more parts uses some part in `s`.
pub fn compatible_by_decompositions(decomps: &[Vec<BitSet>], s: BitSet) -> bool {
    s.iter()
        .all(|g| decomps[g].iter().all(|used| !used.intersection(s).is_empty()))
}
