//! Minimal double-double arithmetic for compensated Horner evaluation.
//!
//! The shifted-monomial expansions of high-degree Jacobi polynomials cancel
//! heavily (the value can be 10+ orders below the largest term), so plain f64
//! Horner loses most digits. Carrying an error term through the recurrence
//! keeps roughly 30 significant digits, which is enough to meet the 1e-12
//! agreement bound against the exact rational path for degrees up to 20.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Dd {
        let (s, e) = two_sum(self.hi, other);
        let e = e + self.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let e = e + self.lo * other;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Horner evaluation of `sum_k coeffs[k] x^k` with double-double accumulation.
pub fn horner_dd(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = Dd::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc.mul_f64(x).add_f64(c);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_cancellation() {
        // (x-1)^8 expanded: 16 digits of cancellation at x = 1.01, far beyond
        // plain f64 Horner but comfortable for double-double.
        let c = [1.0, -8.0, 28.0, -56.0, 70.0, -56.0, 28.0, -8.0, 1.0];
        let x = 1.01_f64;
        let exact = (x - 1.0).powi(8);
        let got = horner_dd(&c, x);
        assert!(
            (got - exact).abs() <= 1e-12 * exact.abs(),
            "got {got:e}, exact {exact:e}"
        );
        let plain: f64 = c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck);
        assert!((plain - exact).abs() > (got - exact).abs());
    }
}
