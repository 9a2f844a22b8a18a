//! Exact scalar types and parsing/formatting for the `"p/q"` wire format.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the library.
pub type Q = BigRational;
/// Exact integer scalar.
pub type Z = BigInt;

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

pub fn q_from_i64(n: i64) -> Q {
    Q::from(Z::from(n))
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    Q::new(Z::from(num), Z::from(den))
}

/// Parses a rational from the wire format: `"p"`, `"p/q"`, optionally signed.
/// Never accepts floating point.
pub fn q_from_str(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?} (expected \"p\" or \"p/q\")"));
    if s.is_empty() || s.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let mut parts = s.splitn(2, '/');
    let num: Z = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Q::from(num)),
        Some(d) => {
            let den: Z = d.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(num, den))
        }
    }
}

/// Canonical wire form: reduced, positive denominator, `"p"` when integral,
/// `"p/q"` otherwise. Reparsing the output reproduces the value bit-exactly.
pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn q_is_integer(q: &Q) -> bool {
    q.denom().is_one()
}

/// Least common multiple of the denominators of a slice of rationals.
/// Returns 1 for an empty slice.
pub fn denominator_lcm(values: &[Q]) -> Z {
    let mut acc = Z::one();
    for v in values {
        acc = num_integer::lcm(acc, v.denom().clone());
    }
    acc.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-3", "7/2", "-7/2", "22/7"] {
            let q = q_from_str(s).unwrap();
            assert_eq!(q_to_string(&q), s);
        }
        // non-canonical inputs normalize
        assert_eq!(q_to_string(&q_from_str("4/2").unwrap()), "2");
        assert_eq!(q_to_string(&q_from_str("2/-4").unwrap()), "-1/2");
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for s in ["1.5", "", "1/0", "a/b", "1e3"] {
            assert!(q_from_str(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn lcm_of_denominators() {
        let vals = vec![q_ratio(1, 2), q_ratio(1, 3)];
        assert_eq!(denominator_lcm(&vals), Z::from(6));
        assert_eq!(denominator_lcm(&[]), Z::from(1));
    }
}
