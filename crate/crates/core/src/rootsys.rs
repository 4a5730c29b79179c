//! Classical root systems: Cartan matrices, reflection closure, Chevalley
//! structure constants and convex orders.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::DegreeVector;

/// Rank cap for named types.
pub const MAX_NAMED_RANK: usize = 12;

/// Generalized Cartan matrix of finite type, `a_ij = ⟨α_i^∨, α_j⟩`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
    symmetrizers: Vec<i64>,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidCartan("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
            }
            for j in 0..n {
                if i != j && row[j] > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "positive off-diagonal entry at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if (row[j] == 0) != (entries[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "a_{0}{1} = 0 but a_{1}{0} ≠ 0",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let symmetrizers = symmetrize(&entries)?;
        let sym: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| symmetrizers[i] * entries[i][j]).collect())
            .collect();
        if !leading_minors_positive(&sym) {
            return Err(Error::InvalidCartan("not of finite type".into()));
        }
        Ok(CartanMatrix {
            entries,
            symmetrizers,
        })
    }

    /// Parses names such as `A3`, `G2`, `B2xA1`.
    pub fn from_type(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name
            .split(['x', 'X', '×', '*', '+'])
            .map(str::trim)
            .collect();
        let mut blocks = Vec::new();
        for part in parts {
            let mut chars = part.chars();
            let letter = chars
                .next()
                .ok_or_else(|| Error::parse("Cartan type", name, "empty factor"))?
                .to_ascii_uppercase();
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::parse("Cartan type", name, format!("bad rank in {part:?}")))?;
            blocks.push(named_block(letter, rank).ok_or_else(|| {
                Error::parse("Cartan type", name, format!("unknown type {part:?}"))
            })?);
        }
        let total: usize = blocks.iter().map(Vec::len).sum();
        if total > MAX_NAMED_RANK {
            return Err(Error::parse(
                "Cartan type",
                name,
                format!("total rank {total} above the cap {MAX_NAMED_RANK}"),
            ));
        }
        CartanMatrix::new(block_diagonal(&blocks))
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.symmetrizers
    }

    /// `(β, γ) = Σ b_i c_j d_i a_ij`.
    pub fn inner(&self, b: &DegreeVector, c: &DegreeVector) -> i64 {
        let n = self.rank();
        let mut acc = 0i64;
        for i in 0..n {
            if b.get(i) == 0 {
                continue;
            }
            for j in 0..n {
                acc += b.get(i) * c.get(j) * self.symmetrizers[i] * self.entries[i][j];
            }
        }
        acc
    }

    /// `s_i(β) = β − ⟨α_i^∨, β⟩ α_i`.
    pub fn reflect(&self, i: usize, beta: &DegreeVector) -> DegreeVector {
        let pairing: i64 = (0..self.rank()).map(|j| self.entries[i][j] * beta.get(j)).sum();
        let mut coords = beta.coords().to_vec();
        coords[i] -= pairing;
        DegreeVector::new(coords)
    }

    /// Connected components of the Dynkin graph, each sorted, in order of least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        graph_components(n, |i, j| self.entries[i][j] != 0)
    }

    /// Dynkin type of a connected set of vertices, e.g. `('D', 4)`.
    pub fn classify_component(&self, comp: &[usize]) -> (char, usize) {
        let r = comp.len();
        let a = |x: usize, y: usize| self.entries[comp[x]][comp[y]];
        let degree: Vec<usize> = (0..r)
            .map(|x| (0..r).filter(|&y| y != x && a(x, y) != 0).count())
            .collect();
        let multi = (0..r)
            .flat_map(|x| (0..r).map(move |y| (x, y)))
            .find(|&(x, y)| x < y && a(x, y) * a(y, x) > 1);
        if let Some((x, y)) = multi {
            if a(x, y) * a(y, x) == 3 {
                return ('G', 2);
            }
            if r == 2 {
                return ('B', 2);
            }
            if r == 4 && degree[x] == 2 && degree[y] == 2 {
                return ('F', 4);
            }
            let (leaf, other) = if degree[x] == 1 { (x, y) } else { (y, x) };
            return if a(leaf, other) == -2 { ('B', r) } else { ('C', r) };
        }
        let Some(center) = (0..r).find(|&x| degree[x] == 3) else {
            return ('A', r);
        };
        let mut arms: Vec<usize> = (0..r)
            .filter(|&y| y != center && a(center, y) != 0)
            .map(|start| {
                let (mut prev, mut cur, mut len) = (center, start, 1);
                loop {
                    let next = (0..r).find(|&z| z != prev && z != cur && a(cur, z) != 0);
                    match next {
                        Some(z) => {
                            prev = cur;
                            cur = z;
                            len += 1;
                        }
                        None => break len,
                    }
                }
            })
            .collect();
        arms.sort_unstable();
        match arms.as_slice() {
            [1, 1, _] => ('D', r),
            _ => ('E', r),
        }
    }

    /// Type name such as `B2xA1`.
    pub fn type_name(&self) -> String {
        self.components()
            .iter()
            .map(|c| {
                let (l, r) = self.classify_component(c);
                format!("{l}{r}")
            })
            .collect::<Vec<_>>()
            .join("x")
    }
}

pub(crate) fn graph_components(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if !seen[j] && i != j && adjacent(i, j) {
                    seen[j] = true;
                    comp.push(j);
                    queue.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn symmetrize(a: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = a.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    let mut out = vec![0i64; n];
    for comp in graph_components(n, |i, j| a[i][j] != 0) {
        d[comp[0]] = Some(Ratio::one());
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].unwrap();
            for &j in &comp {
                if i != j && a[i][j] != 0 {
                    let dj = di * Ratio::new(a[i][j], a[j][i]);
                    match d[j] {
                        None => {
                            d[j] = Some(dj);
                            queue.push_back(j);
                        }
                        Some(old) if old != dj => {
                            return Err(Error::InvalidCartan("not symmetrizable".into()));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let lcm = comp.iter().fold(1i64, |acc, &i| acc.lcm(d[i].unwrap().denom()));
        let ints: Vec<i64> = comp
            .iter()
            .map(|&i| (d[i].unwrap() * lcm).to_integer())
            .collect();
        let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        for (&i, &x) in comp.iter().zip(&ints) {
            if x <= 0 {
                return Err(Error::InvalidCartan("symmetrizer not positive".into()));
            }
            out[i] = x / g;
        }
    }
    Ok(out)
}

/// Fraction-free elimination; true iff every leading principal minor is positive.
fn leading_minors_positive(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut prev = 1i128;
    for k in 0..n {
        // a[k][k] is now the (k+1)-th leading principal minor.
        if a[k][k] <= 0 {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    true
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = 2;
        if i + 1 < n {
            m[i][i + 1] = -1;
            m[i + 1][i] = -1;
        }
    }
    m
}

fn named_block(letter: char, n: usize) -> Option<Vec<Vec<i64>>> {
    match (letter, n) {
        ('A', n) if n >= 1 => Some(chain(n)),
        ('B', n) if n >= 2 => {
            let mut m = chain(n);
            m[n - 1][n - 2] = -2;
            Some(m)
        }
        ('C', n) if n >= 2 => {
            let mut m = chain(n);
            m[n - 2][n - 1] = -2;
            Some(m)
        }
        ('D', n) if n >= 4 => {
            let mut m = chain(n);
            m[n - 2][n - 1] = 0;
            m[n - 1][n - 2] = 0;
            m[n - 3][n - 1] = -1;
            m[n - 1][n - 3] = -1;
            Some(m)
        }
        ('E', n @ 6..=8) => {
            // Bourbaki labelling: 1-3-4-5-6(-7-8), 2 attached to 4.
            let mut m = vec![vec![0i64; n]; n];
            let mut edges = vec![(0, 2), (2, 3), (3, 4), (1, 3)];
            for k in 4..n - 1 {
                edges.push((k, k + 1));
            }
            for i in 0..n {
                m[i][i] = 2;
            }
            for (i, j) in edges {
                m[i][j] = -1;
                m[j][i] = -1;
            }
            Some(m)
        }
        ('F', 4) => {
            let mut m = chain(4);
            m[2][1] = -2;
            Some(m)
        }
        ('G', 2) => Some(vec![vec![2, -3], vec![-1, 2]]),
        _ => None,
    }
}

fn block_diagonal(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut m = vec![vec![0i64; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    m
}

/// Positive roots of a finite root system with sum table and Chevalley
/// structure constants `[ξ_β, ξ_γ] = N_{β,γ} ξ_{β+γ}`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: CartanMatrix,
    roots: Vec<DegreeVector>,
    index: HashMap<DegreeVector, usize>,
    sums: Vec<Vec<Option<usize>>>,
    structure: Vec<Vec<i64>>,
}

impl RootSystem {
    /// Reflection closure of the simple roots, then structure constants.
    pub fn generate(cartan: &CartanMatrix) -> RootSystem {
        let n = cartan.rank();
        let mut seen: HashSet<DegreeVector> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let a = DegreeVector::simple(n, i);
            seen.insert(a.clone());
            queue.push_back(a);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                let img = cartan.reflect(i, &beta);
                if img.is_nonnegative() && !img.is_zero() && seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        let mut roots: Vec<DegreeVector> = seen.into_iter().collect();
        roots.sort();
        let index: HashMap<DegreeVector, usize> =
            roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let m = roots.len();
        let sums = (0..m)
            .map(|i| (0..m).map(|j| index.get(&(&roots[i] + &roots[j])).copied()).collect())
            .collect();
        let mut rs = RootSystem {
            cartan: cartan.clone(),
            roots,
            index,
            sums,
            structure: vec![vec![0; m]; m],
        };
        rs.structure = StructureSolver::new(&rs).solve();
        rs
    }

    pub fn from_type(name: &str) -> Result<RootSystem> {
        Ok(RootSystem::generate(&CartanMatrix::from_type(name)?))
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// Positive roots in height-lex order.
    pub fn roots(&self) -> &[DegreeVector] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn index_of(&self, beta: &DegreeVector) -> Option<usize> {
        self.index.get(beta).copied()
    }

    /// Whether `v` lies in `Δ = Δ₊ ∪ −Δ₊`.
    pub fn is_root(&self, v: &DegreeVector) -> bool {
        self.index.contains_key(v) || self.index.contains_key(&-v)
    }

    pub fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        self.sums[i][j]
    }

    /// `N_{βᵢ,βⱼ}`, defined exactly when `βᵢ + βⱼ ∈ Δ₊`.
    pub fn structure_constant(&self, i: usize, j: usize) -> Option<i64> {
        self.sums[i][j].map(|_| self.structure[i][j])
    }

    pub fn highest_root(&self) -> &DegreeVector {
        self.roots.last().expect("nonempty root system")
    }

    /// `max{k ≥ 0 : γ − kβ ∈ Δ}`.
    pub fn string_length(&self, beta: &DegreeVector, gamma: &DegreeVector) -> i64 {
        let mut k = 0;
        let mut cur = gamma - beta;
        while self.is_root(&cur) {
            k += 1;
            cur = &cur - beta;
        }
        k
    }

    /// Convex order from the greedy (lex-least) reduced word of the longest element.
    ///
    /// `β_k = s_{i₁}⋯s_{i_{k−1}}(α_{i_k})` with `i_k` the least index keeping the
    /// word reduced.
    pub fn convex_order(&self) -> Result<Vec<usize>> {
        let n = self.rank();
        let mut word: Vec<usize> = Vec::new();
        let mut order = Vec::with_capacity(self.len());
        let apply = |word: &[usize], v: DegreeVector| {
            word.iter().rev().fold(v, |acc, &i| self.cartan.reflect(i, &acc))
        };
        loop {
            let next = (0..n).find_map(|i| {
                let img = apply(&word, DegreeVector::simple(n, i));
                img.is_nonnegative().then_some((i, img))
            });
            let Some((i, beta)) = next else { break };
            let idx = self
                .index_of(&beta)
                .ok_or_else(|| Error::Internal(format!("{beta} is not a positive root")))?;
            order.push(idx);
            word.push(i);
            if order.len() > self.len() {
                return Err(Error::Internal("reduced word longer than |Δ₊|".into()));
            }
        }
        if order.len() != self.len() {
            return Err(Error::Internal("convex order misses roots".into()));
        }
        if let Some((a, b)) = self.convexity_violation(&order) {
            return Err(Error::Internal(format!(
                "order is not convex at {} + {}",
                self.roots[a], self.roots[b]
            )));
        }
        Ok(order)
    }

    /// First pair `(α, β)` whose sum does not sit strictly between them.
    pub fn convexity_violation(&self, order: &[usize]) -> Option<(usize, usize)> {
        let mut pos = vec![usize::MAX; self.len()];
        for (p, &r) in order.iter().enumerate() {
            pos[r] = p;
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                if let Some(c) = self.sums[a][b] {
                    let (lo, hi) = (pos[a].min(pos[b]), pos[a].max(pos[b]));
                    if !(lo < pos[c] && pos[c] < hi) {
                        return Some((a, b));
                    }
                }
            }
        }
        None
    }

    /// Checks that every decomposition of a positive root into `3..=max_parts`
    /// positive roots contains two parts summing to a root.
    pub fn verify_sum_lemma(&self, max_parts: usize) -> SumLemmaReport {
        assert!(max_parts >= 3, "max_parts must be at least 3");
        let results: Vec<(u128, Vec<Vec<usize>>)> = (0..self.len())
            .into_par_iter()
            .map(|a| {
                let mut memo = HashMap::new();
                let counts = self.count_decompositions(&self.roots[a], 0, max_parts, &mut memo);
                let total = counts[3.min(counts.len())..].iter().sum();
                let mut bad = Vec::new();
                self.independent_decompositions(&self.roots[a], 0, max_parts, &mut Vec::new(), &mut bad);
                (total, bad)
            })
            .collect();
        let mut report = SumLemmaReport {
            roots_checked: self.len(),
            max_parts,
            decompositions: 0,
            counterexamples: Vec::new(),
        };
        for (a, (total, bad)) in results.into_iter().enumerate() {
            report.decompositions += total;
            report
                .counterexamples
                .extend(bad.into_iter().map(|parts| (a, parts)));
        }
        report
    }

    /// `counts[k]` = number of multisets of `k` roots with index ≥ `min` summing to `rem`.
    fn count_decompositions(
        &self,
        rem: &DegreeVector,
        min: usize,
        max_parts: usize,
        memo: &mut HashMap<(DegreeVector, usize), Vec<u128>>,
    ) -> Vec<u128> {
        let mut counts = vec![0u128; max_parts + 1];
        if rem.is_zero() {
            counts[0] = 1;
            return counts;
        }
        if let Some(c) = memo.get(&(rem.clone(), min)) {
            return c.clone();
        }
        for r in min..self.len() {
            if !self.roots[r].leq(rem).unwrap() {
                continue;
            }
            let sub = self.count_decompositions(&(rem - &self.roots[r]), r, max_parts, memo);
            for k in 0..max_parts {
                counts[k + 1] += sub[k];
            }
        }
        memo.insert((rem.clone(), min), counts.clone());
        counts
    }

    /// Multisets with ≥ 3 parts and no two parts summing to a root; each is a
    /// counterexample. Branches stop as soon as a good pair appears.
    fn independent_decompositions(
        &self,
        rem: &DegreeVector,
        min: usize,
        max_parts: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rem.is_zero() {
            if chosen.len() >= 3 {
                out.push(chosen.clone());
            }
            return;
        }
        if chosen.len() == max_parts {
            return;
        }
        for r in min..self.len() {
            if !self.roots[r].leq(rem).unwrap() {
                continue;
            }
            if chosen.iter().any(|&c| self.sums[c][r].is_some()) {
                continue;
            }
            chosen.push(r);
            self.independent_decompositions(&(rem - &self.roots[r]), r, max_parts, chosen, out);
            chosen.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumLemmaReport {
    pub roots_checked: usize,
    pub max_parts: usize,
    /// Multiset decompositions with `3..=max_parts` parts, over all roots.
    pub decompositions: u128,
    /// `(root index, parts)` with no pair of parts summing to a root.
    pub counterexamples: Vec<(usize, Vec<usize>)>,
}

impl SumLemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for SumLemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} roots, {} decompositions with 3..={} parts, {} counterexamples",
            if self.passed() { "PASS" } else { "FAIL" },
            self.roots_checked,
            self.decompositions,
            self.max_parts,
            self.counterexamples.len()
        )
    }
}

/// Carter's algorithm: extraspecial pairs get `N = +(p+1)`, everything else
/// follows from the relations between structure constants.
struct StructureSolver<'a> {
    rs: &'a RootSystem,
    table: Vec<Vec<i64>>,
}

impl<'a> StructureSolver<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        let m = rs.len();
        StructureSolver {
            rs,
            table: vec![vec![0; m]; m],
        }
    }

    fn solve(mut self) -> Vec<Vec<i64>> {
        let rs = self.rs;
        for xi in 0..rs.len() {
            let pairs: Vec<(usize, usize)> = (0..xi)
                .flat_map(|i| (i + 1..xi).map(move |j| (i, j)))
                .filter(|&(i, j)| rs.sums[i][j] == Some(xi))
                .collect();
            let Some(&(a, b)) = pairs.first() else { continue };
            let (alpha, beta) = (&rs.roots[a], &rs.roots[b]);
            let nab = rs.string_length(alpha, beta) + 1;
            self.table[a][b] = nab;
            self.table[b][a] = -nab;
            let xi_v = &rs.roots[xi];
            let xixi = Ratio::from(rs.cartan.inner(xi_v, xi_v));
            for &(g, d) in &pairs[1..] {
                let (gamma, delta) = (&rs.roots[g], &rs.roots[d]);
                let mut acc = Ratio::<i64>::zero();
                let da = delta - alpha;
                let t1 = self.n(delta, &-alpha) * self.n(gamma, &-beta);
                if t1 != 0 {
                    acc += Ratio::new(t1, rs.cartan.inner(&da, &da));
                }
                let ga = gamma - alpha;
                let t2 = self.n(&-alpha, gamma) * self.n(delta, &-beta);
                if t2 != 0 {
                    acc += Ratio::new(t2, rs.cartan.inner(&ga, &ga));
                }
                let value = xixi * acc / Ratio::from(nab);
                assert!(value.is_integer(), "non-integral structure constant");
                let value = value.to_integer();
                assert!(value != 0, "vanishing structure constant");
                self.table[g][d] = value;
                self.table[d][g] = -value;
            }
        }
        self.table
    }

    /// `N_{r,s}` for arbitrary roots, 0 when `r + s ∉ Δ`.
    fn n(&self, r: &DegreeVector, s: &DegreeVector) -> i64 {
        let rs = self.rs;
        let t = r + s;
        if t.is_zero() || !rs.is_root(&t) {
            return 0;
        }
        let (pr, ps) = (r.is_nonnegative(), s.is_nonnegative());
        match (pr, ps) {
            (true, true) => {
                let v = self.table[rs.index[r]][rs.index[s]];
                assert!(v != 0, "structure constant requested before it was fixed");
                v
            }
            (false, false) => -self.n(&-r, &-s),
            (false, true) => -self.n(s, r),
            (true, false) => {
                let t = -&t;
                let tt = rs.cartan.inner(&t, &t);
                if !t.is_nonnegative() {
                    let num = -tt * self.n(&-s, &-&t);
                    exact_div(num, rs.cartan.inner(r, r))
                } else {
                    exact_div(tt * self.n(&t, r), rs.cartan.inner(s, s))
                }
            }
        }
    }
}

fn exact_div(a: i64, b: i64) -> i64 {
    assert!(a % b == 0, "inexact division {a}/{b} in structure constants");
    a / b
}
