//! Scalar abstraction shared by the exact and floating-point halves of the
//! crate.
//!
//! Group points, Lie vectors, and zig-zags are generic over [`Scalar`]: a
//! commutative ring with an embedding of the rationals. `BigRational` gives
//! exact arithmetic for every identity check, `f64` gives throughput for
//! Monte-Carlo sampling, and [`crate::polyalg::MPoly`] turns the same group
//! formulas into polynomial identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Exact rational scalar used by all symbolic verification.
pub type Q = BigRational;

/// Commutative ring operations plus an embedding of `i64/i64` ratios.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    /// The exact image of `n/d`; `d` must be nonzero.
    fn from_ratio(n: i64, d: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
    /// Multiply by an exact rational constant (structure constants, 1/k!).
    fn scale_ratio(&self, n: i64, d: i64) -> Self {
        self.mul(&Self::from_ratio(n, d))
    }
    /// Multiply by an arbitrary-precision rational constant.
    fn mul_q(&self, c: &Q) -> Self;
}

/// Scalars that admit exact division and a total order, for coordinate
/// normalization and membership predicates. Sign tests go through
/// comparisons with `Scalar::zero()` so the trait stays disjoint from the
/// `num_traits` method names.
pub trait FieldScalar: Scalar + PartialOrd {
    fn div(&self, other: &Self) -> Self;
}

impl Scalar for Q {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_q(&self, c: &Q) -> Self {
        self * c
    }
}

impl FieldScalar for Q {
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn mul_q(&self, c: &Q) -> Self {
        use num_traits::ToPrimitive;
        self * c.to_f64().expect("rational out of f64 range")
    }
}

impl FieldScalar for f64 {
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Shorthand for an exact rational from an integer pair.
pub fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

/// Exact rational zero (avoids the Zero-trait/Scalar-trait ambiguity).
pub fn q0() -> Q {
    q(0, 1)
}

/// Exact rational one.
pub fn q1() -> Q {
    q(1, 1)
}

/// Parse a scalar given either as `p/q` or as a (possibly signed) decimal
/// string; both forms are exact.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::from(0)
        } else {
            int.parse().map_err(|e| format!("bad number {s:?}: {e}"))?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad fractional part {frac:?}"));
        }
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let frac_i: BigInt = if frac.is_empty() {
            BigInt::from(0)
        } else {
            frac.parse().map_err(|e| format!("bad number {s:?}: {e}"))?
        };
        let num = &int * &scale + if neg { -frac_i } else { frac_i };
        return Ok(BigRational::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|e| format!("bad number {s:?}: {e}"))?;
    Ok(BigRational::from_integer(n))
}
