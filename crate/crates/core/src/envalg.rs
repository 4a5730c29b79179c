//! Height-truncated model of `U(𝔫₊)` on a PBW basis and of its graded dual
//! `Z_Δ = 𝕜[z_β : β ∈ Δ₊]`, with dual basis `m*` and `z_β = (ξ_β)*`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::closedsets::{BitSet, SumGround};
use crate::error::{Error, Result};
use crate::lattice::DegreeVector;
use crate::rootsys::RootSystem;

pub const MAX_RANK: usize = 4;
pub const MAX_DEGREE: i64 = 16;

/// PBW monomial as exponents indexed by position in the convex order. It is
/// read as the word with the largest position leftmost.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PbwMonomial(Vec<u32>);

impl PbwMonomial {
    pub fn one(len: usize) -> Self {
        PbwMonomial(vec![0; len])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_one()
    }

    fn with(&self, p: usize) -> Self {
        let mut m = self.clone();
        m.0[p] += 1;
        m
    }

    fn without(&self, p: usize) -> Self {
        let mut m = self.clone();
        m.0[p] -= 1;
        m
    }

    /// Position of the rightmost letter.
    fn last(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// Letters left to right.
    fn word(&self) -> Vec<usize> {
        (0..self.0.len())
            .rev()
            .flat_map(|p| std::iter::repeat_n(p, self.0[p] as usize))
            .collect()
    }

    fn uses_outside(&self, inside: &[bool]) -> bool {
        self.0.iter().zip(inside).any(|(&e, &ok)| e > 0 && !ok)
    }
}

/// Integer combination of PBW monomials.
pub type Poly = BTreeMap<PbwMonomial, i64>;

fn add_scaled(acc: &mut Poly, p: &Poly, c: i64) -> Result<()> {
    for (m, &v) in p {
        let term = v
            .checked_mul(c)
            .ok_or_else(|| Error::Internal("coefficient overflow in straightening".into()))?;
        let slot = acc.entry(m.clone()).or_insert(0);
        *slot = slot
            .checked_add(term)
            .ok_or_else(|| Error::Internal("coefficient overflow in straightening".into()))?;
        if *slot == 0 {
            acc.remove(m);
        }
    }
    Ok(())
}

/// Rewrites products into the PBW basis, memoized on (monomial, letter).
struct Straightener<'a> {
    rs: &'a RootSystem,
    order: &'a [usize],
    pos: &'a [usize],
    memo: HashMap<(PbwMonomial, usize), Poly>,
}

impl Straightener<'_> {
    /// `m·ξ`, with `ξ` at position `b`.
    ///
    /// If the rightmost letter `ξ_c` of `m = m'ξ_c` sits below `b`, then
    /// `m·ξ_b = (m'·ξ_b)·ξ_c + N_{c,b}·m'·ξ_{c+b}`.
    fn times_letter(&mut self, m: &PbwMonomial, b: usize) -> Result<Poly> {
        if let Some(p) = self.memo.get(&(m.clone(), b)) {
            return Ok(p.clone());
        }
        let out = match m.last() {
            Some(c) if c < b => {
                let rest = m.without(c);
                let mut out = Poly::new();
                for (mono, coef) in self.times_letter(&rest, b)? {
                    let p = self.times_letter(&mono, c)?;
                    add_scaled(&mut out, &p, coef)?;
                }
                let (rc, rb) = (self.order[c], self.order[b]);
                if let Some(n) = self.rs.structure_constant(rc, rb) {
                    let s = self.pos[self.rs.sum_index(rc, rb).expect("sum exists")];
                    let p = self.times_letter(&rest, s)?;
                    add_scaled(&mut out, &p, n)?;
                }
                out
            }
            _ => Poly::from([(m.with(b), 1)]),
        };
        self.memo.insert((m.clone(), b), out.clone());
        Ok(out)
    }

    fn product(&mut self, a: &PbwMonomial, b: &PbwMonomial) -> Result<Poly> {
        let mut cur = Poly::from([(a.clone(), 1)]);
        for letter in b.word() {
            let mut next = Poly::new();
            for (m, c) in &cur {
                let p = self.times_letter(m, letter)?;
                add_scaled(&mut next, &p, *c)?;
            }
            cur = next;
        }
        Ok(cur)
    }
}

/// One term `c·a*⊗b*` of a reduced coproduct.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoproductTerm {
    pub left: PbwMonomial,
    pub right: PbwMonomial,
    pub coefficient: i64,
}

/// `U(𝔫₊)` truncated at height `D`, with the reduced coproduct of every dual
/// basis element `m*`: `Δ̄(m*) = Σ c^m_{ab} a*⊗b*` over nonempty `a, b`,
/// where `a·b = Σ_m c^m_{ab} m`.
pub struct PbwAlgebra {
    rs: RootSystem,
    order: Vec<usize>,
    pos: Vec<usize>,
    max_degree: i64,
    basis: Vec<PbwMonomial>,
    coproduct: HashMap<PbwMonomial, Vec<CoproductTerm>>,
}

impl PbwAlgebra {
    pub fn new(rs: RootSystem, max_degree: i64) -> Result<Self> {
        if rs.rank() > MAX_RANK {
            return Err(Error::CapExceeded {
                size: rs.rank(),
                cap: MAX_RANK,
            });
        }
        if !(1..=MAX_DEGREE).contains(&max_degree) {
            return Err(Error::Invalid(format!(
                "max degree {max_degree} outside 1..={MAX_DEGREE}"
            )));
        }
        let order = rs.convex_order()?;
        let mut pos = vec![0; order.len()];
        for (p, &r) in order.iter().enumerate() {
            pos[r] = p;
        }
        let heights: Vec<i64> = order.iter().map(|&r| rs.roots()[r].height()).collect();
        let mut basis = Vec::new();
        enumerate_monomials(&heights, 0, &mut vec![0; order.len()], 0, max_degree, &mut basis);
        basis.sort_by_key(|m| weight(&heights, m));

        let mut alg = PbwAlgebra {
            rs,
            order,
            pos,
            max_degree,
            basis,
            coproduct: HashMap::new(),
        };
        alg.coproduct = alg.transpose_products()?;
        Ok(alg)
    }

    pub fn from_type(name: &str, max_degree: i64) -> Result<Self> {
        Self::new(RootSystem::from_type(name)?, max_degree)
    }

    /// Pairs `(a, b)` of nonempty monomials grouped by left factor; each worker
    /// keeps its own memo.
    fn transpose_products(&self) -> Result<HashMap<PbwMonomial, Vec<CoproductTerm>>> {
        let nonempty: Vec<&PbwMonomial> = self.basis.iter().filter(|m| !m.is_one()).collect();
        let chunks: Vec<Vec<(PbwMonomial, CoproductTerm)>> = nonempty
            .par_iter()
            .map(|a| {
                let mut st = self.straightener();
                let ha = self.height(a);
                let mut out = Vec::new();
                for b in &nonempty {
                    if ha + self.height(b) > self.max_degree {
                        continue;
                    }
                    for (m, c) in st.product(a, b)? {
                        out.push((
                            m,
                            CoproductTerm {
                                left: (*a).clone(),
                                right: (*b).clone(),
                                coefficient: c,
                            },
                        ));
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut table: HashMap<PbwMonomial, Vec<CoproductTerm>> = HashMap::new();
        for (m, t) in chunks.into_iter().flatten() {
            table.entry(m).or_default().push(t);
        }
        Ok(table)
    }

    fn straightener(&self) -> Straightener<'_> {
        Straightener {
            rs: &self.rs,
            order: &self.order,
            pos: &self.pos,
            memo: HashMap::new(),
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    /// Root indices in convex order.
    pub fn convex_order(&self) -> &[usize] {
        &self.order
    }

    /// Basis monomials of height ≤ D, the empty monomial first.
    pub fn basis(&self) -> &[PbwMonomial] {
        &self.basis
    }

    pub fn letter(&self, root: usize) -> PbwMonomial {
        PbwMonomial::one(self.order.len()).with(self.pos[root])
    }

    pub fn degree(&self, m: &PbwMonomial) -> DegreeVector {
        let mut d = DegreeVector::zero(self.rs.rank());
        for (p, &e) in m.0.iter().enumerate() {
            if e > 0 {
                d = &d + &self.rs.roots()[self.order[p]].scale(e as i64);
            }
        }
        d
    }

    pub fn height(&self, m: &PbwMonomial) -> i64 {
        m.0.iter()
            .enumerate()
            .map(|(p, &e)| e as i64 * self.rs.roots()[self.order[p]].height())
            .sum()
    }

    /// `a·b` in the PBW basis (not truncated).
    pub fn multiply(&self, a: &PbwMonomial, b: &PbwMonomial) -> Result<Poly> {
        self.straightener().product(a, b)
    }

    /// `Δ̄(m*)`; empty beyond height D.
    pub fn reduced_coproduct(&self, m: &PbwMonomial) -> &[CoproductTerm] {
        self.coproduct.get(m).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `a*·b* = ∏ᵢ C(aᵢ+bᵢ, aᵢ)·(ab)*`, the transpose of the primitively
    /// generated coproduct of `U(𝔫₊)`.
    pub fn dual_product(&self, a: &PbwMonomial, b: &PbwMonomial) -> (BigUint, PbwMonomial) {
        let mut coef = BigUint::one();
        let mut exps = Vec::with_capacity(a.0.len());
        for (&x, &y) in a.0.iter().zip(&b.0) {
            coef *= binomial(x + y, x);
            exps.push(x + y);
        }
        (coef, PbwMonomial(exps))
    }

    /// `dim 𝒫(Z_Δ)_γ`: kernel dimension of the reduced coproduct in degree `γ`.
    pub fn primitive_space(&self, degree: &DegreeVector) -> usize {
        if degree.is_zero() || degree.height() > self.max_degree {
            return 0;
        }
        let cols: Vec<&PbwMonomial> = self.basis.iter().filter(|m| &self.degree(m) == degree).collect();
        let mut keys: HashMap<(&PbwMonomial, &PbwMonomial), usize> = HashMap::new();
        let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
        for m in &cols {
            let mut row = Vec::new();
            for t in self.reduced_coproduct(m) {
                let next = keys.len();
                let k = *keys.entry((&t.left, &t.right)).or_insert(next);
                row.push((k, t.coefficient));
            }
            rows.push(row);
        }
        cols.len() - rank(&rows, keys.len())
    }

    /// Every degree of height `1..=D` with a nonzero primitive space.
    pub fn primitive_degrees(&self) -> Vec<(DegreeVector, usize)> {
        let mut degrees: Vec<DegreeVector> = self
            .basis
            .iter()
            .filter(|m| !m.is_one())
            .map(|m| self.degree(m))
            .collect();
        degrees.sort();
        degrees.dedup();
        degrees
            .into_par_iter()
            .map(|d| {
                let n = self.primitive_space(&d);
                (d, n)
            })
            .filter(|(_, n)| *n > 0)
            .collect()
    }

    pub fn primitive_total(&self) -> usize {
        self.primitive_degrees().iter().map(|(_, n)| n).sum()
    }

    fn inside(&self, b: BitSet) -> Result<Vec<bool>> {
        if b.iter().any(|i| i >= self.rs.len()) {
            return Err(Error::Invalid(format!("subset {b} exceeds Δ₊ of size {}", self.rs.len())));
        }
        Ok(self.order.iter().map(|&r| b.contains(r)).collect())
    }

    /// Checks `Δ(I(B)) ⊆ I(B)⊗Z + Z⊗I(B)` on the table, where `I(B)` is spanned
    /// by the monomials using some `z_β` with `β ∉ B`. `B` must be closed.
    ///
    /// `I(B)` is a monomial ideal of the polynomial ring, so the ideal half
    /// holds by construction.
    pub fn verify_hopf_ideal(&self, b: BitSet) -> Result<HopfIdealReport> {
        let ground = SumGround::from_roots(&self.rs)?;
        if !ground.is_closed_by_sums(b) {
            return Err(Error::NotClosed(format!("{b} over Δ₊")));
        }
        self.coideal_scan(b)
    }

    /// The table scan behind [`Self::verify_hopf_ideal`], without the
    /// closedness hypothesis.
    pub fn coideal_scan(&self, b: BitSet) -> Result<HopfIdealReport> {
        let inside = self.inside(b)?;
        let ideal: Vec<&PbwMonomial> = self.basis.iter().filter(|m| m.uses_outside(&inside)).collect();
        let mut violations = Vec::new();
        for m in &ideal {
            for t in self.reduced_coproduct(m) {
                if !t.left.uses_outside(&inside) && !t.right.uses_outside(&inside) {
                    violations.push(((*m).clone(), t.clone()));
                }
            }
        }
        Ok(HopfIdealReport {
            subset: b,
            monomials_checked: ideal.len(),
            violations,
        })
    }

    /// `Δ̄(m*)` in `Z(B) = Z_Δ/I(B)`: terms with both factors outside `I(B)`.
    pub fn quotient_coproduct(&self, b: BitSet, m: &PbwMonomial) -> Result<Vec<CoproductTerm>> {
        let inside = self.inside(b)?;
        Ok(self
            .reduced_coproduct(m)
            .iter()
            .filter(|t| !t.left.uses_outside(&inside) && !t.right.uses_outside(&inside))
            .cloned()
            .collect())
    }

    pub fn format_monomial(&self, m: &PbwMonomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for p in (0..m.0.len()).rev() {
            let e = m.0[p];
            if e == 0 {
                continue;
            }
            let root = self.rs.roots()[self.order[p]].format_ascii().expect("positive root");
            let root = root.replace(' ', "");
            parts.push(if e == 1 { format!("[{root}]") } else { format!("[{root}]^{e}") });
        }
        parts.join(" ")
    }
}

fn weight(heights: &[i64], m: &PbwMonomial) -> (i64, Vec<u32>) {
    let h = m.0.iter().zip(heights).map(|(&e, &h)| e as i64 * h).sum();
    (h, m.0.clone())
}

fn enumerate_monomials(
    heights: &[i64],
    p: usize,
    cur: &mut Vec<u32>,
    h: i64,
    max: i64,
    out: &mut Vec<PbwMonomial>,
) {
    if p == heights.len() {
        out.push(PbwMonomial(cur.clone()));
        return;
    }
    let mut e = 0;
    while h + e as i64 * heights[p] <= max {
        cur[p] = e;
        enumerate_monomials(heights, p + 1, cur, h + e as i64 * heights[p], max, out);
        e += 1;
    }
    cur[p] = 0;
}

fn binomial(n: u32, k: u32) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Rank of sparse integer rows over ℚ.
fn rank(rows: &[Vec<(usize, i64)>], width: usize) -> usize {
    let mut dense: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![BigRational::zero(); width];
            for &(k, c) in r {
                v[k] += BigRational::from_integer(BigInt::from(c));
            }
            v
        })
        .collect();
    let mut r = 0;
    for col in 0..width {
        let Some(piv) = (r..dense.len()).find(|&i| !dense[i][col].is_zero()) else {
            continue;
        };
        dense.swap(r, piv);
        let pivot = dense[r][col].clone();
        for i in r + 1..dense.len() {
            if dense[i][col].is_zero() {
                continue;
            }
            let f = &dense[i][col] / &pivot;
            for j in col..width {
                let delta = &f * &dense[r][j];
                dense[i][j] -= delta;
            }
        }
        r += 1;
        if r == dense.len() {
            break;
        }
    }
    r
}

#[derive(Clone, Debug)]
pub struct HopfIdealReport {
    pub subset: BitSet,
    pub monomials_checked: usize,
    /// `(m, term)` with `m ∈ I(B)` and both factors of the term outside `I(B)`.
    pub violations: Vec<(PbwMonomial, CoproductTerm)>,
}

impl HopfIdealReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for HopfIdealReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS: I(B) for B = {} checked on {} monomials", self.subset, self.monomials_checked)
        } else {
            write!(f, "FAIL: {} coproduct terms escape I(B) for B = {}", self.violations.len(), self.subset)
        }
    }
}

/// Reduced coproduct of `z₁₂₃₄` in `Z(B)` for `𝔰𝔩₅` and
/// `B = {1, 123, 1234, 234, 4}`, plus primitivity of the other `z_β`.
#[derive(Clone, Debug)]
pub struct Z1234Report {
    /// `(left, right, coefficient)` by degree.
    pub support: Vec<(DegreeVector, DegreeVector, i64)>,
    /// `(β, primitive in Z(B))` for `β ∈ B∖{1234}`.
    pub others: Vec<(DegreeVector, bool)>,
}

impl Z1234Report {
    pub fn expected_support(&self) -> bool {
        let dv = |c: [i64; 4]| DegreeVector::new(c.to_vec());
        let mut got: Vec<(DegreeVector, DegreeVector)> =
            self.support.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
        got.sort();
        let mut want = vec![
            (dv([1, 0, 0, 0]), dv([0, 1, 1, 1])),
            (dv([1, 1, 1, 0]), dv([0, 0, 0, 1])),
        ];
        want.sort();
        got == want && self.support.iter().all(|(_, _, c)| *c != 0)
    }

    pub fn unit_coefficients(&self) -> bool {
        self.support.iter().all(|(_, _, c)| c.abs() == 1)
    }

    pub fn passed(&self) -> bool {
        self.expected_support() && self.others.iter().all(|(_, p)| *p)
    }
}

impl fmt::Display for Z1234Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: reduced coproduct of z[1234] in Z(B)", if self.passed() { "PASS" } else { "FAIL" })?;
        for (a, b, c) in &self.support {
            let fa = a.format_ascii().unwrap_or_default().replace(' ', "");
            let fb = b.format_ascii().unwrap_or_default().replace(' ', "");
            writeln!(f, "  {c:+} z[{fa}] (x) z[{fb}]")?;
        }
        for (beta, prim) in &self.others {
            let fb = beta.format_ascii().unwrap_or_default().replace(' ', "");
            writeln!(f, "  z[{fb}] primitive: {prim}")?;
        }
        write!(f, "  coefficients all ±1: {}", self.unit_coefficients())
    }
}

pub fn z1234_fixture(max_degree: i64) -> Result<Z1234Report> {
    if max_degree < 4 {
        return Err(Error::Invalid(format!("z1234 fixture needs D ≥ 4, got {max_degree}")));
    }
    let alg = PbwAlgebra::from_type("A4", max_degree)?;
    let rs = alg.root_system();
    let dv = |c: [i64; 4]| DegreeVector::new(c.to_vec());
    let members = [dv([1, 0, 0, 0]), dv([1, 1, 1, 0]), dv([1, 1, 1, 1]), dv([0, 1, 1, 1]), dv([0, 0, 0, 1])];
    let idx = |v: &DegreeVector| {
        rs.index_of(v)
            .ok_or_else(|| Error::Internal(format!("{v} is not a root of A4")))
    };
    let b = BitSet::from_indices(members.iter().map(idx).collect::<Result<Vec<_>>>()?);
    alg.verify_hopf_ideal(b)?;
    let z = |v: &DegreeVector| -> Result<PbwMonomial> { Ok(alg.letter(idx(v)?)) };
    let top = alg.quotient_coproduct(b, &z(&members[2])?)?;
    let mut support: Vec<(DegreeVector, DegreeVector, i64)> = top
        .iter()
        .map(|t| (alg.degree(&t.left), alg.degree(&t.right), t.coefficient))
        .collect();
    support.sort();
    let mut others = Vec::new();
    for v in members.iter().filter(|v| **v != members[2]) {
        others.push((v.clone(), alg.quotient_coproduct(b, &z(v)?)?.is_empty()));
    }
    Ok(Z1234Report { support, others })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{geometric_factor, TruncatedSeries};
    use proptest::prelude::*;

    fn dv(c: &[i64]) -> DegreeVector {
        DegreeVector::new(c.to_vec())
    }

    fn poly_mul(alg: &PbwAlgebra, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::new();
        for (a, ca) in p {
            for (b, cb) in q {
                add_scaled(&mut out, &alg.multiply(a, b).unwrap(), ca * cb).unwrap();
            }
        }
        out
    }

    #[test]
    fn a2_straightening() {
        let alg = PbwAlgebra::from_type("A2", 4).unwrap();
        let rs = alg.root_system();
        let (x1, x2, x12) = (alg.letter(0), alg.letter(1), alg.letter(2));
        let n = rs.structure_constant(0, 1).unwrap();
        // ξ₂ξ₁ − ξ₁ξ₂ = −N₁₂ ξ₁₂
        let p21 = alg.multiply(&x2, &x1).unwrap();
        let p12 = alg.multiply(&x1, &x2).unwrap();
        let mut diff = p21.clone();
        add_scaled(&mut diff, &p12, -1).unwrap();
        assert_eq!(diff, Poly::from([(x12, -n)]));
        assert!(p21.len() == 1 || p12.len() == 1);
    }

    #[test]
    fn commutators_match_structure_constants() {
        for name in ["A3", "B2", "G2"] {
            let alg = PbwAlgebra::from_type(name, 6).unwrap();
            let rs = alg.root_system();
            for i in 0..rs.len() {
                for j in 0..rs.len() {
                    let (xi, xj) = (alg.letter(i), alg.letter(j));
                    let mut diff = alg.multiply(&xi, &xj).unwrap();
                    add_scaled(&mut diff, &alg.multiply(&xj, &xi).unwrap(), -1).unwrap();
                    let want = match rs.structure_constant(i, j) {
                        Some(n) => Poly::from([(alg.letter(rs.sum_index(i, j).unwrap()), n)]),
                        None => Poly::new(),
                    };
                    assert_eq!(diff, want, "{name} [{i},{j}]");
                }
            }
        }
    }

    #[test]
    fn a1_is_a_polynomial_ring() {
        let alg = PbwAlgebra::from_type("A1", 6).unwrap();
        let x = alg.letter(0);
        let x2 = alg.multiply(&x, &x).unwrap();
        let x3 = alg.multiply(x2.keys().next().unwrap(), &x).unwrap();
        assert_eq!(x3.values().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(x3.keys().next().unwrap().exponents(), &[3]);
    }

    #[test]
    fn associativity_on_small_triples() {
        for name in ["A3", "B2", "G2"] {
            let alg = PbwAlgebra::from_type(name, 9).unwrap();
            let small: Vec<&PbwMonomial> = alg.basis().iter().filter(|m| alg.height(m) <= 3).collect();
            for a in &small {
                for b in &small {
                    let ab = alg.multiply(a, b).unwrap();
                    for c in &small {
                        let left = poly_mul(&alg, &ab, &Poly::from([((*c).clone(), 1)]));
                        let bc = alg.multiply(b, c).unwrap();
                        let right = poly_mul(&alg, &Poly::from([((*a).clone(), 1)]), &bc);
                        assert_eq!(left, right, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn grading_and_pbw_dimension() {
        for name in ["A2", "B2", "G2"] {
            let alg = PbwAlgebra::from_type(name, 8).unwrap();
            let rs = alg.root_system();
            for a in alg.basis().iter().filter(|m| alg.height(m) <= 4) {
                for b in alg.basis().iter().filter(|m| alg.height(m) <= 4) {
                    let want = &alg.degree(a) + &alg.degree(b);
                    for m in alg.multiply(a, b).unwrap().keys() {
                        assert_eq!(alg.degree(m), want);
                    }
                }
            }
            let factors: Vec<_> = rs.roots().iter().map(|r| geometric_factor(r, 8).unwrap()).collect();
            let series = TruncatedSeries::product(2, 8, &factors).unwrap();
            let mut counted = TruncatedSeries::zero(2, 8);
            for m in alg.basis() {
                counted.add_term(alg.degree(m), BigUint::one());
            }
            assert_eq!(counted, series, "{name}");
        }
    }

    fn full_coproduct(alg: &PbwAlgebra, m: &PbwMonomial) -> BTreeMap<(PbwMonomial, PbwMonomial), BigInt> {
        let one = PbwMonomial::one(m.exponents().len());
        let mut out = BTreeMap::new();
        out.insert((m.clone(), one.clone()), BigInt::one());
        *out.entry((one.clone(), m.clone())).or_insert_with(BigInt::zero) += 1;
        if m.is_one() {
            out.insert((one.clone(), one), BigInt::one());
            return out;
        }
        for t in alg.reduced_coproduct(m) {
            *out.entry((t.left.clone(), t.right.clone())).or_insert_with(BigInt::zero) += t.coefficient;
        }
        out
    }

    #[test]
    fn dual_is_a_commutative_bialgebra() {
        for name in ["A2", "B2", "A3"] {
            let alg = PbwAlgebra::from_type(name, 6).unwrap();
            let basis: Vec<&PbwMonomial> = alg.basis().iter().filter(|m| alg.height(m) <= 3).collect();
            for a in &basis {
                for b in &basis {
                    assert_eq!(alg.dual_product(a, b), alg.dual_product(b, a));
                    // Δ(a*b*) = Δ(a*)Δ(b*)
                    let (c, ab) = alg.dual_product(a, b);
                    let lhs: BTreeMap<_, _> = full_coproduct(&alg, &ab)
                        .into_iter()
                        .map(|(k, v)| (k, v * BigInt::from(c.clone())))
                        .filter(|(_, v)| !v.is_zero())
                        .collect();
                    let mut rhs: BTreeMap<(PbwMonomial, PbwMonomial), BigInt> = BTreeMap::new();
                    for ((a1, a2), ca) in full_coproduct(&alg, a) {
                        for ((b1, b2), cb) in full_coproduct(&alg, b) {
                            let (c1, m1) = alg.dual_product(&a1, &b1);
                            let (c2, m2) = alg.dual_product(&a2, &b2);
                            *rhs.entry((m1, m2)).or_insert_with(BigInt::zero) +=
                                &ca * &cb * BigInt::from(c1 * c2);
                        }
                    }
                    rhs.retain(|_, v| !v.is_zero());
                    assert_eq!(lhs, rhs, "{name}");
                }
            }
        }
    }

    #[test]
    fn coassociativity() {
        for name in ["A2", "B2", "A3"] {
            let alg = PbwAlgebra::from_type(name, 6).unwrap();
            for m in alg.basis() {
                let mut left: BTreeMap<(PbwMonomial, PbwMonomial, PbwMonomial), BigInt> = BTreeMap::new();
                let mut right = left.clone();
                for ((x, y), c) in full_coproduct(&alg, m) {
                    for ((x1, x2), c1) in full_coproduct(&alg, &x) {
                        *left.entry((x1, x2, y.clone())).or_insert_with(BigInt::zero) += &c * &c1;
                    }
                    for ((y1, y2), c2) in full_coproduct(&alg, &y) {
                        *right.entry((x.clone(), y1, y2)).or_insert_with(BigInt::zero) += &c * &c2;
                    }
                }
                left.retain(|_, v| !v.is_zero());
                right.retain(|_, v| !v.is_zero());
                assert_eq!(left, right, "{name}");
            }
        }
    }

    #[test]
    fn primitives() {
        let alg = PbwAlgebra::from_type("A2", 4).unwrap();
        assert_eq!(alg.primitive_space(&dv(&[1, 0])), 1);
        assert_eq!(alg.primitive_space(&dv(&[1, 1])), 0);
        assert_eq!(alg.primitive_space(&dv(&[0, 0])), 0);
        assert_eq!(alg.primitive_total(), 2);
        let a3 = PbwAlgebra::from_type("A3", 6).unwrap();
        let degrees = a3.primitive_degrees();
        assert_eq!(degrees.len(), 3);
        assert!(degrees.iter().all(|(d, n)| d.height() == 1 && *n == 1));
        // Simple z's are primitive; z₁₂ is not.
        assert!(alg.reduced_coproduct(&alg.letter(0)).is_empty());
        let z12 = alg.reduced_coproduct(&alg.letter(2));
        assert_eq!(z12.len(), 1);
        assert_ne!(z12[0].coefficient, 0);
    }

    #[test]
    fn hopf_ideal_examples() {
        let alg = PbwAlgebra::from_type("A2", 4).unwrap();
        assert!(alg.verify_hopf_ideal(BitSet::from_indices([0, 2])).unwrap().passed());
        assert!(matches!(alg.verify_hopf_ideal(BitSet::from_indices([0, 1])), Err(Error::NotClosed(_))));
        let scan = alg.coideal_scan(BitSet::from_indices([0, 1])).unwrap();
        assert!(!scan.passed());
        let a3 = PbwAlgebra::from_type("A3", 6).unwrap();
        assert!(matches!(a3.verify_hopf_ideal(BitSet::from_indices([0, 1])), Err(Error::NotClosed(_))));
    }

    #[test]
    fn coideal_iff_closed_on_a2_a3() {
        for (name, d) in [("A2", 4), ("A3", 6)] {
            let alg = PbwAlgebra::from_type(name, d).unwrap();
            let ground = SumGround::from_roots(alg.root_system()).unwrap();
            for bits in 0..1u64 << ground.len() {
                let b = BitSet::from_bits(bits);
                assert_eq!(alg.coideal_scan(b).unwrap().passed(), ground.is_closed_by_sums(b), "{name} {b}");
            }
        }
    }

    #[test]
    fn z1234() {
        let r = z1234_fixture(4).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.others.len(), 4);
        assert!(z1234_fixture(3).is_err());
    }

    #[test]
    fn caps() {
        assert!(matches!(PbwAlgebra::from_type("A5", 4), Err(Error::CapExceeded { .. })));
        assert!(PbwAlgebra::from_type("A2", 17).is_err());
    }

    proptest! {
        #[test]
        fn dual_product_associative(a in proptest::collection::vec(0u32..3, 3),
                                    b in proptest::collection::vec(0u32..3, 3),
                                    c in proptest::collection::vec(0u32..3, 3)) {
            let alg = PbwAlgebra::from_type("A2", 2).unwrap();
            let (a, b, c) = (PbwMonomial(a), PbwMonomial(b), PbwMonomial(c));
            let (c1, ab) = alg.dual_product(&a, &b);
            let (c2, l) = alg.dual_product(&ab, &c);
            let (c3, bc) = alg.dual_product(&b, &c);
            let (c4, r) = alg.dual_product(&a, &bc);
            prop_assert_eq!(l, r);
            prop_assert_eq!(c1 * c2, c3 * c4);
        }
    }
}
