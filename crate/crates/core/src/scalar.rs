//! Exact scalar fields used throughout the crate.
//!
//! Every verdict is decided by sign tests, so the scalar must be an ordered
//! field with exact arithmetic. Machine floats do not qualify.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

/// An exact ordered field.
pub trait Scalar:
    Clone + Eq + Ord + Hash + Debug + Display + Send + Sync + Signed + 'static
{
    fn from_int(v: i64) -> Self;

    fn from_frac(numer: i64, denom: i64) -> Self;

    /// Numerator and (positive) denominator in lowest terms.
    fn to_big_parts(&self) -> (BigInt, BigInt);

    fn is_integral(&self) -> bool {
        self.to_big_parts().1.is_one()
    }
}

macro_rules! impl_ratio_scalar {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_int(v: i64) -> Self {
                Ratio::from_integer(v as $int)
            }

            fn from_frac(numer: i64, denom: i64) -> Self {
                Ratio::new(numer as $int, denom as $int)
            }

            fn to_big_parts(&self) -> (BigInt, BigInt) {
                (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }
        }
    };
}

impl_ratio_scalar!(i64);
impl_ratio_scalar!(i128);

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_frac(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_big_parts(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

/// Scales a nonzero rational vector to the unique primitive integer vector
/// pointing the same way. Returns `None` for the zero vector or on overflow.
pub fn primitive_direction<T: Scalar>(v: &[T]) -> Option<Vec<i64>> {
    let parts: Vec<(BigInt, BigInt)> = v.iter().map(Scalar::to_big_parts).collect();
    let lcm = parts
        .iter()
        .fold(BigInt::one(), |acc, (_, d)| acc.lcm(d));
    let scaled: Vec<BigInt> = parts.iter().map(|(n, d)| n * (&lcm / d)).collect();
    let gcd = scaled
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return None;
    }
    scaled
        .into_iter()
        .map(|x| i64::try_from(x / &gcd).ok())
        .collect()
}

/// Dot product of two equal-length vectors.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn dot_int<T: Scalar>(a: &[T], b: &[i64]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, &y)| acc + x.clone() * T::from_int(y))
}

pub fn int_vec<T: Scalar>(v: &[i64]) -> Vec<T> {
    v.iter().map(|&x| T::from_int(x)).collect()
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_ratio<T: Scalar>(x: &T) -> String {
    let (n, d) = x.to_big_parts();
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_ratio<T: Scalar>(s: &str) -> Option<T> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| T::from_frac(n, d))
        }
        None => s.parse::<i64>().ok().map(T::from_int),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i64>;

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = vec![Q::new(1, 2), Q::new(-3, 4), Q::from_integer(0)];
        assert_eq!(primitive_direction(&v), Some(vec![2, -3, 0]));
        assert_eq!(primitive_direction::<Q>(&[Q::zero(), Q::zero()]), None);
    }

    #[test]
    fn ratio_text_round_trip() {
        for s in ["3", "-7/2", "0", "5/10"] {
            let x: BigRational = parse_ratio(s).unwrap();
            let y: BigRational = parse_ratio(&format_ratio(&x)).unwrap();
            assert_eq!(x, y);
        }
        assert_eq!(format_ratio(&Q::new(5, 10)), "1/2");
        assert!(parse_ratio::<Q>("1/0").is_none());
        assert!(parse_ratio::<Q>("x").is_none());
    }
}
