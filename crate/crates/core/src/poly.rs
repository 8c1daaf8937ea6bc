//! Small exact polynomials in one and two variables.
//!
//! `Poly1` carries a representation tag: coefficients either multiply powers
//! of `t` or powers of `t - 1`. Orthogonal systems on `[0,1]` built from
//! `J_n(2t-1)` have small coefficients in the `t-1` basis and huge alternating
//! ones in the monomial basis, so the tag is what keeps evaluation stable.
//! Cross-representation conversion is reserved for low degrees.

use crate::dd::Dd;
use crate::rational::*;
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep1 {
    /// coefficients of `t^k`
    PowT,
    /// coefficients of `(t-1)^k`
    PowTm1,
}

#[derive(Clone, Debug)]
pub struct Poly1 {
    pub rep: Rep1,
    pub coeffs: Vec<Rational>,
    dd: Vec<(f64, f64)>,
}

fn dd_of(r: &Rational) -> (f64, f64) {
    let hi = to_f64(r);
    if !hi.is_finite() {
        return (hi, 0.0);
    }
    let lo = match Rational::from_float(hi) {
        Some(h) => to_f64(&(r - h)),
        None => 0.0,
    };
    (hi, lo)
}

impl Poly1 {
    pub fn new(rep: Rep1, coeffs: Vec<Rational>) -> Self {
        let dd = coeffs.iter().map(dd_of).collect();
        Poly1 { rep, coeffs, dd }
    }

    pub fn zero(rep: Rep1) -> Self {
        Poly1::new(rep, vec![Rational::zero()])
    }

    pub fn constant(rep: Rep1, c: Rational) -> Self {
        Poly1::new(rep, vec![c])
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn var(&self, t: f64) -> f64 {
        match self.rep {
            Rep1::PowT => t,
            Rep1::PowTm1 => t - 1.0,
        }
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let v = self.var(t);
        let mut acc = Dd::ZERO;
        for &(hi, lo) in self.dd.iter().rev() {
            acc = acc.mul_f64(v).add(Dd { hi, lo });
        }
        acc.value()
    }

    pub fn eval_rational(&self, t: &Rational) -> Rational {
        let v = match self.rep {
            Rep1::PowT => t.clone(),
            Rep1::PowTm1 => t - Rational::one(),
        };
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &v + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly1 {
        if self.coeffs.len() <= 1 {
            return Poly1::zero(self.rep);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rint(k as i64))
            .collect();
        Poly1::new(self.rep, out)
    }

    pub fn nth_derivative(&self, k: u32) -> Poly1 {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p
    }

    pub fn scale(&self, s: &Rational) -> Poly1 {
        Poly1::new(self.rep, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        assert_eq!(self.rep, other.rep, "representation mismatch in Poly1::add");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Poly1::new(self.rep, out)
    }

    pub fn sub(&self, other: &Poly1) -> Poly1 {
        self.add(&other.scale(&rint(-1)))
    }

    /// Rewrites into the other representation. Intended for low degrees
    /// (Taylor corrections); the binomial reshuffle is exact but would
    /// destroy conditioning at high degree.
    pub fn convert(&self, rep: Rep1) -> Poly1 {
        if rep == self.rep {
            return self.clone();
        }
        let shift = match (self.rep, rep) {
            (Rep1::PowT, Rep1::PowTm1) => Rational::one(),
            (Rep1::PowTm1, Rep1::PowT) => -Rational::one(),
            _ => unreachable!(),
        };
        // p(v) with v = u - shift_in_new_variable: expand (u + s)^k
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            // old_var^k = (new_var + shift)^k
            let mut pw = Rational::one();
            for j in (0..=k).rev() {
                // coefficient of new_var^j: C(k,j) shift^{k-j}
                out[j] += c * binomial(k as u32, j as u32) * &pw;
                pw *= &shift;
            }
        }
        Poly1::new(rep, out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Dense exact bivariate polynomial in monomials `x^i y^j` (low degree only).
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    /// `coeffs[i][j]` multiplies `x^i y^j`.
    pub coeffs: Vec<Vec<Rational>>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 {
            coeffs: vec![vec![Rational::zero()]],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Poly2 { coeffs: vec![vec![c]] }
    }

    /// Builds from integer triples `(i, j, coeff)`.
    pub fn from_terms(terms: &[(usize, usize, Rational)]) -> Self {
        let di = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let dj = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut coeffs = vec![vec![Rational::zero(); dj + 1]; di + 1];
        for (i, j, c) in terms {
            coeffs[*i][*j] += c;
        }
        Poly2 { coeffs }
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        let mut xi = 1.0;
        for row in &self.coeffs {
            let mut inner = 0.0;
            for c in row.iter().rev() {
                inner = inner * y + to_f64(c);
            }
            acc += xi * inner;
            xi *= x;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut xi = Rational::one();
        for row in &self.coeffs {
            let mut inner = Rational::zero();
            for c in row.iter().rev() {
                inner = inner * y + c;
            }
            acc += &xi * inner;
            xi *= x;
        }
        acc
    }

    pub fn dx(&self) -> Poly2 {
        if self.coeffs.len() <= 1 {
            return Poly2::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, row)| row.iter().map(|c| c * rint(i as i64)).collect())
            .collect();
        Poly2 { coeffs }
    }

    pub fn dy(&self) -> Poly2 {
        let coeffs: Vec<Vec<Rational>> = self
            .coeffs
            .iter()
            .map(|row| {
                if row.len() <= 1 {
                    vec![Rational::zero()]
                } else {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, c)| c * rint(j as i64))
                        .collect()
                }
            })
            .collect();
        Poly2 { coeffs }
    }

    pub fn partial(&self, i: u32, j: u32) -> Poly2 {
        let mut p = self.clone();
        for _ in 0..i {
            p = p.dx();
        }
        for _ in 0..j {
            p = p.dy();
        }
        p
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let di = self.coeffs.len().max(other.coeffs.len());
        let dj = self
            .coeffs
            .iter()
            .chain(other.coeffs.iter())
            .map(|r| r.len())
            .max()
            .unwrap_or(1);
        let mut coeffs = vec![vec![Rational::zero(); dj]; di];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                coeffs[i][j] += c;
            }
        }
        for (i, row) in other.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                coeffs[i][j] += c;
            }
        }
        Poly2 { coeffs }
    }

    pub fn scale(&self, s: &Rational) -> Poly2 {
        Poly2 {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| c * s).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let di = self.coeffs.len() + other.coeffs.len() - 1;
        let dj = self.coeffs.iter().map(|r| r.len()).max().unwrap_or(1)
            + other.coeffs.iter().map(|r| r.len()).max().unwrap_or(1)
            - 1;
        let mut coeffs = vec![vec![Rational::zero(); dj]; di];
        for (i1, r1) in self.coeffs.iter().enumerate() {
            for (j1, c1) in r1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (i2, r2) in other.coeffs.iter().enumerate() {
                    for (j2, c2) in r2.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        coeffs[i1 + i2][j1 + j2] += c1 * c2;
                    }
                }
            }
        }
        Poly2 { coeffs }
    }

    /// Substitution `p(a1 x + b1 y + c1, a2 x + b2 y + c2)` with small integer
    /// entries; used for the simultaneous permutations of `(x, y, 1-x-y)`.
    pub fn compose_affine(
        &self,
        a1: i64,
        b1: i64,
        c1: i64,
        a2: i64,
        b2: i64,
        c2: i64,
    ) -> Poly2 {
        let u = Poly2::from_terms(&[(1, 0, rint(a1)), (0, 1, rint(b1)), (0, 0, rint(c1))]);
        let v = Poly2::from_terms(&[(1, 0, rint(a2)), (0, 1, rint(b2)), (0, 0, rint(c2))]);
        let mut acc = Poly2::zero();
        // powers of u and v, built incrementally
        let mut upow = vec![Poly2::constant(Rational::one())];
        for i in 1..self.coeffs.len() {
            upow.push(upow[i - 1].mul(&u));
        }
        let maxj = self.coeffs.iter().map(|r| r.len()).max().unwrap_or(1);
        let mut vpow = vec![Poly2::constant(Rational::one())];
        for j in 1..maxj {
            vpow.push(vpow[j - 1].mul(&v));
        }
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = acc.add(&upow[i].mul(&vpow[j]).scale(c));
            }
        }
        acc
    }

    pub fn total_degree(&self) -> usize {
        let mut d = 0;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    d = d.max(i + j);
                }
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly1_convert_roundtrip() {
        let p = Poly1::new(Rep1::PowT, vec![rint(1), rint(-2), rat(1, 3)]);
        let q = p.convert(Rep1::PowTm1).convert(Rep1::PowT);
        assert_eq!(p.coeffs, q.coeffs);
        let t = rat(2, 7);
        assert_eq!(p.eval_rational(&t), p.convert(Rep1::PowTm1).eval_rational(&t));
    }

    #[test]
    fn poly2_ops() {
        // p = x (1 - x - 2y)
        let p = Poly2::from_terms(&[(1, 0, rint(1)), (2, 0, rint(-1)), (1, 1, rint(-2))]);
        assert_eq!(p.eval_rational(&rat(1, 2), &rat(1, 4)), rint(0));
        let px = p.dx();
        assert_eq!(px.eval_rational(&rint(0), &rint(0)), rint(1));
        // substitution x -> y, y -> 1-x-y
        let q = p.compose_affine(0, 1, 0, -1, -1, 1);
        assert_eq!(
            q.eval_rational(&rat(1, 3), &rat(1, 5)),
            p.eval_rational(&rat(1, 5), &rat(7, 15))
        );
    }
}
