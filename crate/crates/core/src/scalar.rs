//! Exact rational coefficients.
//!
//! Everything in this crate is computed over `Q`; there is no floating
//! point anywhere. `Rat` is a reduced fraction with positive denominator,
//! which gives decidable equality and bit-identical reruns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rat = BigRational;

/// The rational zero.
pub fn zero() -> Rat {
    Rat::zero()
}

/// The rational one.
pub fn one() -> Rat {
    Rat::one()
}

/// Rational from a machine integer.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"` with decimal integers. Rejects a zero denominator.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let p: BigInt = num.parse().ok()?;
    let q: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return None;
    }
    Some(Rat::new(p, q))
}

/// Renders a rational in the same `"p"` / `"p/q"` form accepted by [`parse_rat`].
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign of a reordering of graded factors: `(-1)^{ab}`.
pub fn koszul_sign(deg_a: usize, deg_b: usize) -> Rat {
    if deg_a % 2 == 1 && deg_b % 2 == 1 {
        -one()
    } else {
        one()
    }
}

/// `(-1)^n` for possibly negative exponents.
pub fn sign_pow(n: i64) -> Rat {
    if n.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

pub fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-7", "3/4", "-22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(parse_rat("4/6").unwrap(), frac(2, 3));
        assert_eq!(format_rat(&parse_rat("-4/2").unwrap()), "-2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn koszul_sign_odd_odd() {
        assert_eq!(koszul_sign(1, 1), int(-1));
        assert_eq!(koszul_sign(1, 2), int(1));
        assert_eq!(koszul_sign(2, 3), int(1));
        assert_eq!(koszul_sign(3, 3), int(-1));
    }
}
