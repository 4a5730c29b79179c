//! Exact multiplicative scalars: a root of unity times a power of one formal
//! parameter `q` that is not a root of unity.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `e^{2πi·rot} · q^{param_exp}` with `rot ∈ [0,1)` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Scalar {
    rot: Ratio<i64>,
    param_exp: i64,
}

/// Multiplicative order of a scalar.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("∞"),
        }
    }
}

fn reduce_rot(r: Ratio<i64>) -> Ratio<i64> {
    let fl = r.floor();
    r - fl
}

impl Scalar {
    pub fn new(rot: Ratio<i64>, param_exp: i64) -> Self {
        Scalar {
            rot: reduce_rot(rot),
            param_exp,
        }
    }

    pub fn one() -> Self {
        Scalar::new(Ratio::zero(), 0)
    }

    pub fn minus_one() -> Self {
        Scalar::new(Ratio::new(1, 2), 0)
    }

    /// `ζ_n^k` where `ζ_n = e^{2πi/n}`.
    pub fn root_of_unity(n: i64, k: i64) -> Self {
        assert!(n > 0, "root of unity needs a positive order");
        Scalar::new(Ratio::new(k.rem_euclid(n), n), 0)
    }

    /// `q^e` for the formal parameter.
    pub fn param(e: i64) -> Self {
        Scalar::new(Ratio::zero(), e)
    }

    pub fn rot(&self) -> Ratio<i64> {
        self.rot
    }

    pub fn param_exp(&self) -> i64 {
        self.param_exp
    }

    pub fn is_one(&self) -> bool {
        self.rot.is_zero() && self.param_exp == 0
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.param_exp == 0
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar::new(
            self.rot + other.rot,
            self.param_exp
                .checked_add(other.param_exp)
                .expect("parameter exponent overflow"),
        )
    }

    pub fn inv(&self) -> Scalar {
        self.power(-1)
    }

    pub fn power(&self, n: i64) -> Scalar {
        let (num, den) = (*self.rot.numer(), *self.rot.denom());
        let num = (num as i128 * n as i128).rem_euclid(den as i128) as i64;
        Scalar::new(
            Ratio::new(num, den),
            self.param_exp
                .checked_mul(n)
                .expect("parameter exponent overflow"),
        )
    }

    pub fn order(&self) -> Order {
        if self.param_exp != 0 {
            Order::Infinite
        } else {
            Order::Finite(*self.rot.denom() as u64)
        }
    }

    /// Whether `self = gⁿ` for some integer `n`.
    pub fn is_in_cyclic_subgroup(&self, g: &Scalar) -> bool {
        if g.param_exp != 0 {
            if self.param_exp % g.param_exp != 0 {
                return false;
            }
            return g.power(self.param_exp / g.param_exp) == *self;
        }
        // g generates all N-th roots of unity, N = denom(rot g).
        self.param_exp == 0 && g.rot.denom() % self.rot.denom() == 0
    }

    /// Whether the quantum integer `(n)_self = 1 + self + ⋯ + self^{n-1}` vanishes.
    pub fn quantum_integer_vanishes(&self, n: i64) -> bool {
        match self.order() {
            Order::Finite(m) if m >= 2 => n % m as i64 == 0,
            _ => false,
        }
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar::mul(&self, &rhs)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::one()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rot == Ratio::new(1, 2) {
            parts.push("-1".to_string());
        } else if !self.rot.is_zero() {
            let (k, n) = (self.rot.numer(), self.rot.denom());
            if k.is_one() {
                parts.push(format!("zeta({n})"));
            } else {
                parts.push(format!("zeta({n})^{k}"));
            }
        }
        match self.param_exp {
            0 => {}
            1 => parts.push("q".to_string()),
            e => parts.push(format!("q^{e}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" * "))
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts products of `1`, `-1`, `zeta(N)`, `zeta(N)^k`, `q`, `q^e`.
    fn from_str(input: &str) -> Result<Scalar> {
        let err = |reason: &str| Error::parse("scalar", input, reason);
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Err(err("empty input"));
        }
        let mut acc = Scalar::one();
        for raw in trimmed.split('*') {
            let factor: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    let e = e.trim_start_matches('(').trim_end_matches(')');
                    let e: i64 = e.parse().map_err(|_| err("bad exponent"))?;
                    (b.to_string(), e)
                }
                None => (factor.clone(), 1),
            };
            let value = if base == "1" {
                Scalar::one()
            } else if base == "-1" {
                Scalar::minus_one()
            } else if base == "q" {
                Scalar::param(1)
            } else if let Some(n) = base
                .strip_prefix("zeta(")
                .and_then(|rest| rest.strip_suffix(')'))
            {
                let n: i64 = n.parse().map_err(|_| err("bad root-of-unity order"))?;
                if n <= 0 {
                    return Err(err("root-of-unity order must be positive"));
                }
                Scalar::root_of_unity(n, 1)
            } else {
                return Err(err(&format!("unknown factor {factor:?}")));
            };
            acc = acc.mul(&value.power(exp));
        }
        Ok(acc)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `lcm` of finite orders, used when combining component data.
pub fn lcm_orders(orders: impl IntoIterator<Item = u64>) -> u64 {
    orders.into_iter().fold(1, |a, b| a.lcm(&b))
}
