//! Multivariate power series over big integers, truncated at total degree `D`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::braiding::RootDatum;
use crate::closedsets::{BitSet, SumGround};
use crate::error::{Error, Result};
use crate::lattice::DegreeVector;

/// Environment variable overriding the default truncation degree.
pub const MAX_DEGREE_ENV: &str = "PRENICHOLS_MAX_DEGREE";

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    rank: usize,
    max_degree: i64,
    coeffs: BTreeMap<DegreeVector, BigUint>,
}

impl TruncatedSeries {
    pub fn zero(rank: usize, max_degree: i64) -> Self {
        TruncatedSeries {
            rank,
            max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize, max_degree: i64) -> Self {
        let mut s = Self::zero(rank, max_degree);
        s.add_term(DegreeVector::zero(rank), BigUint::one());
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    /// Adds `c·t^v`, dropping it when `ht v > D`.
    pub fn add_term(&mut self, v: DegreeVector, c: BigUint) {
        assert_eq!(v.rank(), self.rank, "rank mismatch in series term");
        assert!(v.is_nonnegative(), "series degrees are nonnegative");
        if c.is_zero() || v.height() > self.max_degree {
            return;
        }
        *self.coeffs.entry(v).or_default() += c;
    }

    pub fn coefficient(&self, v: &DegreeVector) -> BigUint {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DegreeVector, &BigUint)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of all stored coefficients (the series at `t = (1,…,1)`).
    pub fn total(&self) -> BigUint {
        self.coeffs.values().sum()
    }

    /// Sum of coefficients of total degree `d`.
    pub fn total_at_height(&self, d: i64) -> BigUint {
        self.coeffs
            .iter()
            .filter(|(v, _)| v.height() == d)
            .map(|(_, c)| c)
            .sum()
    }

    fn check_compatible(&self, other: &TruncatedSeries) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        if self.max_degree != other.max_degree {
            return Err(Error::TruncationMismatch(format!(
                "D = {} vs D = {}",
                self.max_degree, other.max_degree
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let mut out = TruncatedSeries::zero(self.rank, self.max_degree);
        for (a, ca) in &self.coeffs {
            let ha = a.height();
            for (b, cb) in &other.coeffs {
                if ha + b.height() <= self.max_degree {
                    out.add_term(a + b, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn product<'a>(
        rank: usize,
        max_degree: i64,
        factors: impl IntoIterator<Item = &'a TruncatedSeries>,
    ) -> Result<TruncatedSeries> {
        factors
            .into_iter()
            .try_fold(TruncatedSeries::one(rank, max_degree), |acc, f| acc.mul(f))
    }

    /// Exact equality; mismatched truncation is an error, not `false`.
    pub fn equals(&self, other: &TruncatedSeries) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.coeffs == other.coeffs)
    }

    /// Coefficientwise `self ≤ other`.
    pub fn leq(&self, other: &TruncatedSeries) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self
            .coeffs
            .iter()
            .all(|(v, c)| other.coeffs.get(v).is_some_and(|d| c <= d)))
    }

    /// Degrees where the two series differ, with both coefficients.
    pub fn differences(&self, other: &TruncatedSeries) -> Result<Vec<(DegreeVector, BigUint, BigUint)>> {
        self.check_compatible(other)?;
        let mut keys: Vec<&DegreeVector> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        Ok(keys
            .into_iter()
            .filter_map(|k| {
                let (a, b) = (self.coefficient(k), other.coefficient(k));
                (a != b).then(|| (k.clone(), a, b))
            })
            .collect())
    }

    /// `degree,coefficient` rows in canonical order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,coefficient\n");
        for (v, c) in &self.coeffs {
            out.push_str(&format!("{v},{c}\n"));
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(v, c)| {
                let mono = if v.is_zero() {
                    "1".to_string()
                } else {
                    format!("t^({v})")
                };
                match (c.is_one(), v.is_zero()) {
                    (true, _) => mono,
                    (false, true) => c.to_string(),
                    (false, false) => format!("{c}·{mono}"),
                }
            })
            .collect();
        write!(f, "{} + O(deg {})", terms.join(" + "), self.max_degree + 1)
    }
}

/// `1/(1 − t^β) = Σ_k t^{kβ}`, truncated.
pub fn geometric_factor(beta: &DegreeVector, max_degree: i64) -> Result<TruncatedSeries> {
    if beta.is_zero() || !beta.is_nonnegative() {
        return Err(Error::Invalid(format!(
            "geometric factor needs a nonzero nonnegative degree, got {beta:?}"
        )));
    }
    let mut s = TruncatedSeries::zero(beta.rank(), max_degree);
    let mut k = 0;
    while k * beta.height() <= max_degree {
        s.add_term(beta.scale(k), BigUint::one());
        k += 1;
    }
    Ok(s)
}

/// `(1 − t^{Nβ})/(1 − t^β) = 1 + t^β + ⋯ + t^{(N−1)β}`, truncated.
pub fn qfactor(beta: &DegreeVector, n: u64, max_degree: i64) -> Result<TruncatedSeries> {
    if beta.is_zero() || !beta.is_nonnegative() {
        return Err(Error::Invalid(format!(
            "truncated geometric factor needs a nonzero nonnegative degree, got {beta:?}"
        )));
    }
    if n < 2 {
        return Err(Error::Invalid(format!("order N = {n} must be at least 2")));
    }
    let mut s = TruncatedSeries::zero(beta.rank(), max_degree);
    for k in 0..n as i64 {
        s.add_term(beta.scale(k), BigUint::one());
    }
    Ok(s)
}

/// `ℋ_{𝓑_q} = ∏_β (1 − t^{N_β β})/(1 − t^β)`.
pub fn nichols_series(d: &RootDatum, max_degree: i64) -> Result<TruncatedSeries> {
    let factors = d
        .roots()
        .iter()
        .map(|r| qfactor(&r.degree, r.order, max_degree))
        .collect::<Result<Vec<_>>>()?;
    TruncatedSeries::product(d.rank(), max_degree, &factors)
}

/// `ℋ_{𝓑(q,B)} = ℋ_{𝓑_q} · ∏_{β ∈ B} 1/(1 − t^β)` for `B` over `Ô₊^q`.
pub fn prenichols_series(d: &RootDatum, b: BitSet, max_degree: i64) -> Result<TruncatedSeries> {
    let hoc = d.hoc_degrees();
    check_closed(&hoc, b)?;
    let mut s = nichols_series(d, max_degree)?;
    for i in b.iter() {
        s = s.mul(&geometric_factor(&hoc[i], max_degree)?)?;
    }
    Ok(s)
}

/// The same series for `B = Ô₊^q`, assembled from the PBW generators of the
/// eminent algebra: unbounded powers of Cartan root vectors, bounded powers of
/// the others, and one free generator per bold degree.
pub fn eminent_series(d: &RootDatum, max_degree: i64) -> Result<TruncatedSeries> {
    let mut factors = Vec::new();
    for r in d.roots() {
        factors.push(if r.cartan {
            geometric_factor(&r.degree, max_degree)?
        } else {
            qfactor(&r.degree, r.order, max_degree)?
        });
    }
    for h in d.hoc().iter().filter(|h| h.bold) {
        factors.push(geometric_factor(&h.degree, max_degree)?);
    }
    TruncatedSeries::product(d.rank(), max_degree, &factors)
}

fn check_closed(hoc: &[DegreeVector], b: BitSet) -> Result<()> {
    if b.iter().any(|i| i >= hoc.len()) {
        return Err(Error::Invalid(format!("subset {b} exceeds Ô₊ of size {}", hoc.len())));
    }
    let ground = SumGround::new(hoc.to_vec())?;
    if !ground.is_closed_by_sums(b) {
        return Err(Error::NotClosed(b.to_string()));
    }
    Ok(())
}

/// Counts PBW monomials `x_{β₁}^{n₁}⋯ z_{γ₁}^{p₁}⋯` with `nᵢ < N_{βᵢ}` and
/// unbounded `pⱼ` over `γⱼ ∈ B`, one by one, binned by degree.
pub fn pbw_count_oracle(d: &RootDatum, b: BitSet, max_degree: i64) -> Result<TruncatedSeries> {
    let hoc = d.hoc_degrees();
    check_closed(&hoc, b)?;
    // (degree, exponent bound) per generator; None = unbounded.
    let mut gens: Vec<(Vec<i64>, Option<u64>)> = d
        .roots()
        .iter()
        .map(|r| (r.degree.coords().to_vec(), Some(r.order)))
        .collect();
    gens.extend(b.iter().map(|i| (hoc[i].coords().to_vec(), None)));
    let mut counts: HashMap<Vec<i64>, u64> = HashMap::new();
    let mut cur = vec![0i64; d.rank()];
    count_monomials(&gens, 0, &mut cur, 0, max_degree, &mut counts);
    let mut s = TruncatedSeries::zero(d.rank(), max_degree);
    for (v, c) in counts {
        s.add_term(DegreeVector::new(v), BigUint::from(c));
    }
    Ok(s)
}

fn count_monomials(
    gens: &[(Vec<i64>, Option<u64>)],
    g: usize,
    cur: &mut Vec<i64>,
    height: i64,
    max_degree: i64,
    counts: &mut HashMap<Vec<i64>, u64>,
) {
    if g == gens.len() {
        *counts.entry(cur.clone()).or_default() += 1;
        return;
    }
    let (deg, bound) = &gens[g];
    let h: i64 = deg.iter().sum();
    let mut k = 0u64;
    loop {
        let total = height + k as i64 * h;
        if total > max_degree || bound.is_some_and(|n| k >= n) {
            break;
        }
        count_monomials(gens, g + 1, cur, total, max_degree, counts);
        for (c, x) in cur.iter_mut().zip(deg) {
            *c += x;
        }
        k += 1;
    }
    for (c, x) in cur.iter_mut().zip(deg) {
        *c -= x * k as i64;
    }
}

/// `GKdim 𝓑(q, B) = |B|`.
pub fn gkdim(b: BitSet) -> usize {
    b.len()
}

/// `2·max ht(Ô₊^q) + 4`, unless the environment variable is set.
pub fn default_max_degree(d: &RootDatum) -> Result<i64> {
    if let Ok(v) = std::env::var(MAX_DEGREE_ENV) {
        let parsed: i64 = v
            .trim()
            .parse()
            .map_err(|_| Error::parse("max degree", &v, "not an integer"))?;
        if parsed < 1 {
            return Err(Error::parse("max degree", &v, "must be at least 1"));
        }
        return Ok(parsed);
    }
    let top = d.hoc().iter().map(|h| h.degree.height()).max().unwrap_or(0);
    Ok(2 * top + 4)
}
