//! Scalar abstraction for edge and set weights.
//!
//! Every algorithm in this workspace is generic over [`Weight`]. The exact
//! instantiation ([`crate::Rational`]) is what the local-ratio routines are
//! meant to run on: their "strictly positive" tests and subtraction chains are
//! only sound when arithmetic is exact. Float instantiations exist for quick
//! experiments and carry no such guarantee.

use std::fmt::{Debug, Display};

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// A totally ordered (for all practical inputs) signed field element.
pub trait Weight:
    Clone + Debug + Display + PartialOrd + Num + Signed + ToPrimitive + FromPrimitive + Send + Sync + 'static
{
    /// `num / den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(num).expect("numerator representable") / Self::from_i64(den).expect("denominator representable")
    }

    fn from_count(count: usize) -> Self {
        Self::from_usize(count).expect("count representable")
    }

    /// Parses `num` or `num/den` with integer parts.
    fn parse_weight(text: &str) -> Option<Self> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
            None => (text.parse::<i64>().ok()?, 1),
        };
        if den == 0 {
            return None;
        }
        Some(Self::from_ratio(num, den))
    }

    /// Lossy conversion used for thresholds and reporting.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// True when arithmetic on this type never rounds.
    fn is_exact() -> bool;
}

impl Weight for BigRational {
    fn parse_weight(text: &str) -> Option<Self> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
            None => (text.parse::<BigInt>().ok()?, BigInt::one()),
        };
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    }

    fn is_exact() -> bool {
        true
    }
}

impl Weight for Ratio<i64> {
    fn is_exact() -> bool {
        true
    }
}

impl Weight for f64 {
    fn parse_weight(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.contains('/') {
            let (n, d) = text.split_once('/')?;
            let d: f64 = d.trim().parse().ok()?;
            if d == 0.0 {
                return None;
            }
            return Some(n.trim().parse::<f64>().ok()? / d);
        }
        text.parse().ok()
    }

    fn is_exact() -> bool {
        false
    }
}

impl Weight for f32 {
    fn parse_weight(text: &str) -> Option<Self> {
        f64::parse_weight(text).map(|w| w as f32)
    }

    fn is_exact() -> bool {
        false
    }
}

/// Harmonic number `H_k = 1 + 1/2 + ... + 1/k`, computed in `W`.
pub fn harmonic<W: Weight>(k: usize) -> W {
    (1..=k).fold(W::zero(), |acc, i| acc + W::one() / W::from_count(i))
}

/// The larger of two partially ordered values; `a` wins ties and
/// incomparable pairs.
pub fn max_weight<W: Weight>(a: W, b: W) -> W {
    if b > a {
        b
    } else {
        a
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued fractions). Exponents in the configuration are given as
/// decimals; this recovers e.g. `1.3 -> 13/10` exactly.
pub fn rational_approximation(x: f64, max_den: u64) -> (u64, u64) {
    assert!(x.is_finite() && x >= 0.0, "exponent must be a finite non-negative number");
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut frac = x;
    loop {
        let a = frac.floor();
        let a_int = a as u64;
        let p2 = a_int.saturating_mul(p1).saturating_add(p0);
        let q2 = a_int.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let rem = frac - a;
        if rem < 1e-12 || (p1 as f64 / q1 as f64 - x).abs() < 1e-12 {
            break;
        }
        frac = 1.0 / rem;
    }
    if q1 == 0 {
        (x.round() as u64, 1)
    } else {
        (p1, q1)
    }
}

/// `floor(base^exponent)` computed with integer arithmetic: the exponent is
/// turned into a fraction `p/q` and the result is the largest `k` with
/// `k^q <= base^p`.
pub fn floor_pow(base: u64, exponent: f64) -> u64 {
    let (p, q) = rational_approximation(exponent, 1000);
    let power = BigUint::from(base).pow(u32::try_from(p).expect("exponent numerator too large"));
    let root = power.nth_root(u32::try_from(q).expect("exponent denominator too large"));
    root.to_u64().unwrap_or(u64::MAX)
}

/// `ceil(base^exponent)`, clamped to at least 1. Used for counts such as
/// machine numbers and group sizes where the exact integer matters less than
/// the rounding direction.
pub fn ceil_pow(base: f64, exponent: f64) -> usize {
    let v = base.powf(exponent);
    let c = v.ceil();
    // absorb float noise such as 9.000000000002
    let c = if (v - v.round()).abs() < 1e-9 { v.round() } else { c };
    c.max(1.0) as usize
}

/// Exact `ceil(log_base(x))` for integers; `0` when `x <= 1`.
pub fn ceil_log(base: usize, x: usize) -> usize {
    assert!(base >= 2, "logarithm base must be at least 2");
    let mut rounds = 0;
    let mut reach = 1usize;
    while reach < x {
        reach = reach.saturating_mul(base);
        rounds += 1;
    }
    rounds
}
