//! Degree vectors in ℤ^θ.
//!
//! Every grading degree, root, and generator degree in the crate is a
//! [`DegreeVector`]: the coordinates of `a₁α₁ + ⋯ + a_θα_θ` in the basis of
//! simple roots. The compact notation `1^a₁ 2^a₂ ⋯` (exponent 1 and zero
//! entries omitted) is used for all text input and output.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector {
    coords: Vec<i64>,
}

impl DegreeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "degree vectors have positive rank");
        DegreeVector { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![0; rank])
    }

    /// The simple root `α_i` (0-based `i`).
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.coords[i] = 1;
        v
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> i64 {
        self.coords[i]
    }

    pub fn height(&self) -> i64 {
        self.coords
            .iter()
            .try_fold(0i64, |acc, &c| acc.checked_add(c))
            .expect("height overflow")
    }

    /// 0-based indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.coords[i] != 0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn leq(&self, other: &DegreeVector) -> Result<bool> {
        self.check_rank(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b))
    }

    pub fn checked_add(&self, other: &DegreeVector) -> Result<DegreeVector> {
        self.check_rank(other)?;
        Ok(self.zip_with(other, |a, b| a.checked_add(b)))
    }

    pub fn checked_sub(&self, other: &DegreeVector) -> Result<DegreeVector> {
        self.check_rank(other)?;
        Ok(self.zip_with(other, |a, b| a.checked_sub(b)))
    }

    pub fn scale(&self, k: i64) -> DegreeVector {
        DegreeVector {
            coords: self
                .coords
                .iter()
                .map(|&a| a.checked_mul(k).expect("degree overflow"))
                .collect(),
        }
    }

    /// Embeds into a larger lattice, placing coordinate `i` at `positions[i]`.
    pub fn embed(&self, rank: usize, positions: &[usize]) -> DegreeVector {
        assert_eq!(positions.len(), self.rank());
        let mut out = vec![0; rank];
        for (i, &p) in positions.iter().enumerate() {
            out[p] = self.coords[i];
        }
        DegreeVector::new(out)
    }

    /// Restricts to the given coordinates.
    pub fn restrict(&self, positions: &[usize]) -> DegreeVector {
        DegreeVector::new(positions.iter().map(|&p| self.coords[p]).collect())
    }

    fn check_rank(&self, other: &DegreeVector) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &DegreeVector, f: impl Fn(i64, i64) -> Option<i64>) -> DegreeVector {
        DegreeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f(a, b).expect("degree overflow"))
                .collect(),
        }
    }

    /// Compact notation with Unicode superscripts, e.g. `1³2⁶3³`.
    ///
    /// Factors are concatenated for rank ≤ 9 and space-separated above that.
    pub fn format_compact(&self) -> Result<String> {
        self.format_with(|exp| superscript(exp), self.rank() > 9)
    }

    /// ASCII caret form, e.g. `1^3 2^6 3^3`; factors are always space-separated.
    pub fn format_ascii(&self) -> Result<String> {
        self.format_with(|exp| format!("^{exp}"), true)
    }

    fn format_with(&self, exponent: impl Fn(i64) -> String, spaced: bool) -> Result<String> {
        if let Some(&neg) = self.coords.iter().find(|&&c| c < 0) {
            return Err(Error::Invalid(format!(
                "compact notation needs nonnegative entries, found {neg} in {:?}",
                self.coords
            )));
        }
        if self.is_zero() {
            return Ok("0".to_string());
        }
        let factors: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| {
                if a == 1 {
                    (i + 1).to_string()
                } else {
                    format!("{}{}", i + 1, exponent(a))
                }
            })
            .collect();
        Ok(factors.join(if spaced { " " } else { "" }))
    }

    /// Parses compact notation: `1^3 2^6 3^3`, `1³2⁶3³`, `123` (= α₁+α₂+α₃),
    /// `1 2^2 3`, or `0`.
    ///
    /// For rank ≤ 9 each index is a single digit, so factors may be
    /// concatenated; above that factors must be separated by whitespace.
    /// A repeated index accumulates.
    pub fn parse_compact(input: &str, rank: usize) -> Result<DegreeVector> {
        let err = |reason: &str| Error::parse("degree vector", input, reason);
        if rank == 0 {
            return Err(err("rank must be positive"));
        }
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Err(err("empty input"));
        }
        if trimmed == "0" {
            return Ok(DegreeVector::zero(rank));
        }
        let chars: Vec<char> = trimmed.chars().collect();
        let mut coords = vec![0i64; rank];
        let mut pos = 0;
        while pos < chars.len() {
            let c = chars[pos];
            if c.is_whitespace() || c == '*' || c == '·' {
                pos += 1;
                continue;
            }
            if !c.is_ascii_digit() {
                return Err(err(&format!("unexpected character {c:?}")));
            }
            let start = pos;
            if rank <= 9 {
                pos += 1;
            } else {
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
            }
            let index: usize = chars[start..pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| err("bad index"))?;
            if index == 0 || index > rank {
                return Err(err(&format!("index {index} outside 1..={rank}")));
            }
            let mut exp = 1i64;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let braced = pos < chars.len() && chars[pos] == '{';
                if braced {
                    pos += 1;
                }
                let s = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                if s == pos {
                    return Err(err("missing exponent after '^'"));
                }
                exp = chars[s..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("bad exponent"))?;
                if braced {
                    if pos >= chars.len() || chars[pos] != '}' {
                        return Err(err("unterminated '{'"));
                    }
                    pos += 1;
                }
            } else if pos < chars.len() && superscript_digit(chars[pos]).is_some() {
                let mut value = 0i64;
                while let Some(d) = chars.get(pos).and_then(|&c| superscript_digit(c)) {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d))
                        .ok_or_else(|| err("exponent overflow"))?;
                    pos += 1;
                }
                exp = value;
            }
            coords[index - 1] = coords[index - 1]
                .checked_add(exp)
                .ok_or_else(|| err("exponent overflow"))?;
        }
        Ok(DegreeVector::new(coords))
    }
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn superscript(n: i64) -> String {
    n.to_string()
        .chars()
        .map(|c| SUPERSCRIPTS[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn superscript_digit(c: char) -> Option<i64> {
    SUPERSCRIPTS.iter().position(|&s| s == c).map(|d| d as i64)
}

/// Height first, then larger leading coordinate first (so `α₁` precedes `α₂`).
impl Ord for DegreeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.height().cmp(&other.height()))
            .then_with(|| other.coords.cmp(&self.coords))
    }
}

impl PartialOrd for DegreeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.format_ascii() {
            Ok(s) => f.write_str(&s),
            Err(_) => write!(f, "{:?}", self.coords),
        }
    }
}

impl Add for &DegreeVector {
    type Output = DegreeVector;
    fn add(self, rhs: &DegreeVector) -> DegreeVector {
        self.checked_add(rhs).expect("rank mismatch in addition")
    }
}

impl Sub for &DegreeVector {
    type Output = DegreeVector;
    fn sub(self, rhs: &DegreeVector) -> DegreeVector {
        self.checked_sub(rhs).expect("rank mismatch in subtraction")
    }
}

impl Mul<i64> for &DegreeVector {
    type Output = DegreeVector;
    fn mul(self, k: i64) -> DegreeVector {
        self.scale(k)
    }
}

impl Neg for &DegreeVector {
    type Output = DegreeVector;
    fn neg(self) -> DegreeVector {
        self.scale(-1)
    }
}

impl From<Vec<i64>> for DegreeVector {
    fn from(coords: Vec<i64>) -> Self {
        DegreeVector::new(coords)
    }
}
