//! Exact rational parameters.
//!
//! Thresholds such as `(1 - 4α)/(2α)·|X|` are compared against integer set
//! sizes, and several of the strict inequalities are tight for small hosts.
//! Keeping α rational makes every such comparison exact.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type Rational = Ratio<i64>;

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.03125"` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse {s:?} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num: i64 = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let mut den: i64 = 1;
    let pow10 = |k: u32| 10i64.checked_pow(k).ok_or_else(bad);
    if scale >= 0 {
        num = num.checked_mul(pow10(scale as u32)?).ok_or_else(bad)?;
    } else {
        den = pow10((-scale) as u32)?;
    }
    if neg {
        num = -num;
    }
    Ok(Ratio::new(num, den))
}

/// `⌈q·n⌉` for a non-negative rational `q`.
pub fn ceil_mul(q: Rational, n: usize) -> usize {
    let v = q * Ratio::from_integer(n as i64);
    v.ceil().to_integer().max(0) as usize
}

/// `⌊q·n⌋` for a non-negative rational `q`.
pub fn floor_mul(q: Rational, n: usize) -> usize {
    let v = q * Ratio::from_integer(n as i64);
    v.floor().to_integer().max(0) as usize
}

/// Whether `lhs < q·x` holds exactly.
pub fn lt_scaled(lhs: usize, q: Rational, x: usize) -> bool {
    Ratio::from_integer(lhs as i64) < q * Ratio::from_integer(x as i64)
}

/// Whether `lhs ≤ q·x` holds exactly.
pub fn le_scaled(lhs: usize, q: Rational, x: usize) -> bool {
    Ratio::from_integer(lhs as i64) <= q * Ratio::from_integer(x as i64)
}

/// The joinedness density `α ∈ (0, 1)`, kept exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlphaRepr", into = "String")]
pub struct Alpha(Rational);

#[derive(Deserialize)]
#[serde(untagged)]
enum AlphaRepr {
    Text(String),
    Number(f64),
}

impl TryFrom<AlphaRepr> for Alpha {
    type Error = Error;

    fn try_from(r: AlphaRepr) -> Result<Self, Error> {
        match r {
            AlphaRepr::Text(s) => s.parse(),
            // shortest round-trip decimal, then exact
            AlphaRepr::Number(x) => format!("{x}").parse(),
        }
    }
}

impl From<Alpha> for String {
    fn from(a: Alpha) -> String {
        a.to_string()
    }
}

impl Alpha {
    pub fn new(value: Rational) -> Result<Self, Error> {
        if value <= Rational::zero() || value >= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {value}"
            )));
        }
        Ok(Alpha(value))
    }

    /// `1/d`
    pub fn reciprocal(d: i64) -> Result<Self, Error> {
        if d <= 1 {
            return Err(Error::InvalidParameter(format!("1/{d} is not in (0, 1)")));
        }
        Alpha::new(Ratio::new(1, d))
    }

    pub fn value(self) -> Rational {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `⌈αN⌉`, the size used wherever a set of "αN" vertices is required.
    pub fn ceil_of(self, n: usize) -> usize {
        ceil_mul(self.0, n)
    }

    /// `(1 - 4α)/(2α)`: the sparse-set ratio of the removal rule.
    pub fn removal_ratio(self) -> Rational {
        (Rational::one() - self.0 * 4) / (self.0 * 2)
    }

    /// `(1 - 2α)/(6α)`: the expansion factor of the extracted subgraph.
    pub fn expansion_factor(self) -> Rational {
        (Rational::one() - self.0 * 2) / (self.0 * 6)
    }

    /// `(1 - 4α)/(6α)`: the goodness degree of the initial null embedding.
    pub fn null_goodness_degree(self) -> Rational {
        (Rational::one() - self.0 * 4) / (self.0 * 6)
    }

    pub fn is_below(self, bound: Rational) -> bool {
        self.0 < bound
    }

    pub fn is_at_most(self, bound: Rational) -> bool {
        self.0 <= bound
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Alpha::new(parse_rational(s)?)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alpha({self})")
    }
}

/// Floor of a non-negative rational as an integer count.
pub fn floor_count(q: Rational) -> usize {
    if q.is_negative() {
        0
    } else {
        q.floor().to_integer() as usize
    }
}

/// Smallest `k` with `base^k >= target`; `target <= 1` gives 0.
pub fn ceil_log(base: u64, target: u64) -> u32 {
    assert!(base >= 2);
    let mut k = 0;
    let mut acc: u64 = 1;
    while acc < target {
        acc = acc.saturating_mul(base);
        k += 1;
    }
    k
}
