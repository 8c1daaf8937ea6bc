//! Exact rational scalars used for all polynomial coefficients and parameters.
//!
//! Parameters must stay exact because the truncation index of the extended
//! Jacobi polynomials tests whether `-n - alpha - beta` is an integer in
//! `{1, ..., n}`; floating point would make that test ill-posed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Rational from an integer pair, reduced with a positive denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rint(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of approximations for very large terms.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Returns `Some(k)` when `r` is an integer that fits in `i64`.
pub fn as_integer(r: &Rational) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Largest integer `<= r`.
pub fn floor_int(r: &Rational) -> i64 {
    r.floor().numer().to_i64().expect("floor out of i64 range")
}

/// Pochhammer symbol `(a)_m = a (a+1) ... (a+m-1)`, with `(a)_0 = 1`.
/// Factors are accumulated left to right so a zero factor is exact.
pub fn pochhammer(a: &Rational, m: u32) -> Rational {
    let mut acc = Rational::one();
    let mut f = a.clone();
    for _ in 0..m {
        acc *= &f;
        f += Rational::one();
    }
    acc
}

pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Parses "p/q" or "p" into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: i64 = p.trim().parse().map_err(|e| format!("bad numerator {p:?}: {e}"))?;
        let den: i64 = q.trim().parse().map_err(|e| format!("bad denominator {q:?}: {e}"))?;
        if den == 0 {
            return Err("zero denominator".into());
        }
        Ok(rat(num, den))
    } else {
        let num: i64 = s.parse().map_err(|e| format!("bad rational {s:?}: {e}"))?;
        Ok(rint(num))
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractional part `r - floor(r)` in `[0, 1)`.
pub fn fract(r: &Rational) -> Rational {
    let f = r - Rational::from_integer(r.floor().numer().clone());
    debug_assert!(!f.is_negative());
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_basics() {
        assert_eq!(pochhammer(&rint(3), 0), rint(1));
        assert_eq!(pochhammer(&rint(3), 2), rint(12));
        assert_eq!(pochhammer(&rat(-1, 2), 2), rat(-1, 4));
        // zero factor inside the product
        assert_eq!(pochhammer(&rint(-2), 4), rint(0));
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("4").unwrap(), rint(4));
        assert!(parse_rational("1/0").is_err());
    }
}
