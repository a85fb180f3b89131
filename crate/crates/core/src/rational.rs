//! Exact rational coefficients.
//!
//! Coefficients are `num_rational::BigRational`, which keeps the value
//! reduced with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the canonical form written by [`format`]. Non-reduced fractions,
/// zero or negative denominators, `q = 1`, leading `+` and `-0` are rejected.
pub fn parse_canonical(s: &str) -> std::result::Result<Rational, String> {
    fn parse_int(t: &str, what: &str) -> std::result::Result<BigInt, String> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("malformed {what} `{t}`"));
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(format!("leading zero in {what} `{t}`"));
        }
        if t.starts_with('-') && digits == "0" {
            return Err(format!("negative zero `{t}`"));
        }
        t.parse::<BigInt>().map_err(|e| format!("malformed {what} `{t}`: {e}"))
    }
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s, "integer")?)),
        Some((p, q)) => {
            let p = parse_int(p, "numerator")?;
            if q.starts_with('-') {
                return Err(format!("negative denominator in `{s}`"));
            }
            let q = parse_int(q, "denominator")?;
            if q.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            if q.is_one() {
                return Err(format!("denominator 1 must be omitted in `{s}`"));
            }
            if !p.gcd(&q).is_one() {
                return Err(format!("fraction `{s}` is not in lowest terms"));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Exact square root in the rationals, if one exists.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// Positive divisors of `|n|` for a nonzero integer `n`, by trial division.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_roundtrip() {
        for s in ["0", "7", "-3", "1/2", "-22/7"] {
            assert_eq!(format(&parse_canonical(s).unwrap()), s);
        }
    }

    #[test]
    fn rejects_non_canonical() {
        for s in ["1/0", "2/4", "3/1", "+3", "-0", "1/-2", "01", "x", "", "1/"] {
            assert!(parse_canonical(s).is_err(), "{s}");
        }
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_exact(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(sqrt_exact(&int(2)), None);
        assert_eq!(sqrt_exact(&int(-4)), None);
    }

    #[test]
    fn divisor_list() {
        let d: Vec<i64> = divisors(&BigInt::from(-12))
            .iter()
            .map(|b| b.try_into().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }
}
