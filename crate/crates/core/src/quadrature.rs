//! Gauss-Jacobi rules on `[0,1]`, product rules on the triangle, and edge
//! rules for boundary terms.
//!
//! Recurrence coefficients are computed in exact rational arithmetic and only
//! converted to floats for the symmetric tridiagonal eigenproblem.

use crate::rational::*;
use crate::Error;
use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Zero};
use statrs::function::gamma::ln_gamma;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Gaussian rule for the weight `(1-t)^a t^b` on `[0,1]`.
#[derive(Clone, Debug)]
pub struct GaussJacobi1D {
    pub size: usize,
    pub a: Rational,
    pub b: Rational,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi1D {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `B(b+1, a+1) = Gamma(a+1) Gamma(b+1) / Gamma(a+b+2)`, the total mass of the
/// weight `(1-t)^a t^b` on `[0,1]`.
pub fn weight_mass(a: f64, b: f64) -> f64 {
    (ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp()
}

/// Monic three-term coefficients for the Jacobi weight `(1-x)^a (1+x)^b` on
/// `[-1,1]`, exact; removable singularities at `k = 0, 1` are cancelled.
fn monic_recurrence(a: &Rational, b: &Rational, k: u32) -> (Rational, Rational) {
    let s = a + b;
    let alpha = if k == 0 {
        (b - a) / (&s + rint(2))
    } else {
        let m = rint(2 * k as i64) + &s;
        let num = (b - a) * (b + a);
        if num.is_zero() {
            Rational::zero()
        } else {
            num / (&m * (&m + rint(2)))
        }
    };
    let beta = if k == 0 {
        Rational::zero() // unused; mass handled separately
    } else if k == 1 {
        rint(4) * (Rational::one() + a) * (Rational::one() + b)
            / ((rint(2) + &s) * (rint(2) + &s) * (rint(3) + &s))
    } else {
        let kk = rint(k as i64);
        let m = rint(2 * k as i64) + &s;
        rint(4) * &kk * (&kk + a) * (&kk + b) * (&kk + &s)
            / (&m * &m * (&m + Rational::one()) * (&m - Rational::one()))
    };
    (alpha, beta)
}

fn build_rule(size: usize, a: &Rational, b: &Rational) -> Result<GaussJacobi1D, Error> {
    if *a <= rint(-1) || *b <= rint(-1) {
        return Err(Error::ParameterOutOfRange(format!(
            "Gauss-Jacobi weight exponents must exceed -1, got ({}, {})",
            fmt_rational(a),
            fmt_rational(b)
        )));
    }
    if size == 0 {
        return Err(Error::ParameterOutOfRange("rule size must be >= 1".into()));
    }
    // Map to [0,1]: alpha' = (alpha+1)/2, beta' = beta/4.
    let mut diag = Vec::with_capacity(size);
    let mut off = Vec::with_capacity(size.saturating_sub(1));
    for k in 0..size as u32 {
        let (al, be) = monic_recurrence(a, b, k);
        diag.push((to_f64(&al) + 1.0) / 2.0);
        if k >= 1 {
            off.push((to_f64(&be) / 4.0).sqrt());
        }
    }
    let mut m = DMatrix::<f64>::zeros(size, size);
    for i in 0..size {
        m[(i, i)] = diag[i];
        if i + 1 < size {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mass = weight_mass(to_f64(a), to_f64(b));
    let mut pairs: Vec<(f64, f64)> = (0..size)
        .map(|i| {
            let node = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            (node, mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    Ok(GaussJacobi1D {
        size,
        a: a.clone(),
        b: b.clone(),
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

type RuleKey = (usize, Rational, Rational);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<GaussJacobi1D>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<GaussJacobi1D>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached Gauss rule for the weight `(1-t)^a t^b` on `[0,1]`.
pub fn gauss_jacobi(size: usize, a: &Rational, b: &Rational) -> Result<Arc<GaussJacobi1D>, Error> {
    let key = (size, a.clone(), b.clone());
    if let Some(r) = cache().lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let rule = Arc::new(build_rule(size, a, b)?);
    cache().lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

/// Parameter triple `(alpha, beta, gamma)` of the triangle weight
/// `x^alpha y^beta (1-x-y)^gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParameterTriple {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

impl ParameterTriple {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        ParameterTriple { alpha, beta, gamma }
    }

    pub fn of(a: i64, b: i64, c: i64) -> Self {
        ParameterTriple::new(rint(a), rint(b), rint(c))
    }

    pub fn all_classical(&self) -> bool {
        self.alpha > rint(-1) && self.beta > rint(-1) && self.gamma > rint(-1)
    }

    /// Cyclic shift `(a,b,c) -> (c,a,b)`.
    pub fn cycle(&self) -> ParameterTriple {
        ParameterTriple::new(self.gamma.clone(), self.alpha.clone(), self.beta.clone())
    }
}

impl std::fmt::Display for ParameterTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{})",
            fmt_rational(&self.alpha),
            fmt_rational(&self.beta),
            fmt_rational(&self.gamma)
        )
    }
}

/// Product rule on the triangle, exact for total degree `2*size - 1` against
/// the weight `x^alpha y^beta (1-x-y)^gamma`.
///
/// Built from the substitution `x = uv`, `y = u(1-v)`, which turns the
/// triangle weight into `u^{alpha+beta+1} (1-u)^gamma v^alpha (1-v)^beta`.
#[derive(Clone, Debug)]
pub struct TriangleRule {
    pub params: ParameterTriple,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub weights: Vec<f64>,
    /// `x + y` at each node (the radial Duffy variable), kept for integrands
    /// with a known homogeneity degree at the origin.
    pub us: Vec<f64>,
}

impl TriangleRule {
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.xs.len() {
            acc += self.weights[i] * f(self.xs[i], self.ys[i]);
        }
        acc
    }
}

/// Triangle rule; `u_shift` adds a rational exponent to the radial variable
/// (integrands are then multiplied by `(x+y)^{-u_shift}` by the caller).
pub fn triangle_rule_shifted(
    size: usize,
    params: &ParameterTriple,
    u_shift: &Rational,
) -> Result<TriangleRule, Error> {
    let ub = &params.alpha + &params.beta + Rational::one() + u_shift;
    let u_rule = gauss_jacobi(size, &params.gamma, &ub)?;
    let v_rule = gauss_jacobi(size, &params.beta, &params.alpha)?;
    let n = size * size;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    let mut us = Vec::with_capacity(n);
    for (iu, &u) in u_rule.nodes.iter().enumerate() {
        for (iv, &v) in v_rule.nodes.iter().enumerate() {
            xs.push(u * v);
            ys.push(u * (1.0 - v));
            ws.push(u_rule.weights[iu] * v_rule.weights[iv]);
            us.push(u);
        }
    }
    Ok(TriangleRule {
        params: params.clone(),
        xs,
        ys,
        weights: ws,
        us,
    })
}

pub fn triangle_rule(size: usize, params: &ParameterTriple) -> Result<TriangleRule, Error> {
    triangle_rule_shifted(size, params, &Rational::zero())
}

/// Default size for exactness at a target polynomial degree, with one point
/// of headroom.
pub fn size_for_degree(degree: usize) -> usize {
    degree / 2 + 2
}

/// Classical inner product `<f, g>` over the triangle for `params > -1`.
pub fn l2_inner<F, G>(rule: &TriangleRule, f: F, g: G) -> f64
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    rule.integrate(|x, y| f(x, y) * g(x, y))
}

/// The three edges of the triangle, each parameterized over `t in [0,1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Edge {
    /// `x = 0`, point `(0, t)`
    X0,
    /// `y = 0`, point `(t, 0)`
    Y0,
    /// hypotenuse `1-x-y = 0`, point `(t, 1-t)`
    Hyp,
}

impl Edge {
    pub fn point(&self, t: f64) -> (f64, f64) {
        match self {
            Edge::X0 => (0.0, t),
            Edge::Y0 => (t, 0.0),
            Edge::Hyp => (t, 1.0 - t),
        }
    }

    /// Tangent direction `(dx/dt, dy/dt)`.
    pub fn tangent(&self) -> (f64, f64) {
        match self {
            Edge::X0 => (0.0, 1.0),
            Edge::Y0 => (1.0, 0.0),
            Edge::Hyp => (1.0, -1.0),
        }
    }
}

/// Rule for `\int_0^1 h(t) t^p (1-t)^q dt` on the given edge; `h` is the
/// trace of a 2-D integrand.
pub fn edge_rule(size: usize, p: &Rational, q: &Rational) -> Result<Arc<GaussJacobi1D>, Error> {
    gauss_jacobi(size, q, p)
}

/// Exact value of `\int_T x^i y^j (1-x-y)^0 * x^a y^b (1-x-y)^c dx dy` via
/// the Beta-type closed form; used as an exactness oracle in tests.
pub fn exact_monomial_moment(i: u32, j: u32, params: &ParameterTriple) -> f64 {
    let a = to_f64(&params.alpha) + i as f64;
    let b = to_f64(&params.beta) + j as f64;
    let c = to_f64(&params.gamma);
    (ln_gamma(a + 1.0) + ln_gamma(b + 1.0) + ln_gamma(c + 1.0) - ln_gamma(a + b + c + 3.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn midpoint_rule() {
        let r = gauss_jacobi(1, &rint(0), &rint(0)).unwrap();
        assert_relative_eq!(r.nodes[0], 0.5, max_relative = 1e-14);
        assert_relative_eq!(r.weights[0], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn two_point_legendre() {
        let r = gauss_jacobi(2, &rint(0), &rint(0)).unwrap();
        let d = 1.0 / (2.0 * 3.0_f64.sqrt());
        assert_relative_eq!(r.nodes[0], 0.5 - d, max_relative = 1e-13);
        assert_relative_eq!(r.nodes[1], 0.5 + d, max_relative = 1e-13);
        assert_relative_eq!(r.weights[0], 0.5, max_relative = 1e-13);
        assert_relative_eq!(r.weights[1], 0.5, max_relative = 1e-13);
    }

    #[test]
    fn weight_sum() {
        for size in [1usize, 3, 8] {
            let r = gauss_jacobi(size, &rint(1), &rint(0)).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert_relative_eq!(total, 0.5, max_relative = 1e-13);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(gauss_jacobi(3, &rint(-1), &rint(0)).is_err());
        assert!(gauss_jacobi(3, &rint(0), &rat(-3, 2)).is_err());
    }

    #[test]
    fn triangle_basic_moments() {
        let rule = triangle_rule(4, &ParameterTriple::of(0, 0, 0)).unwrap();
        assert_relative_eq!(rule.integrate(|_, _| 1.0), 0.5, max_relative = 1e-13);
        assert_relative_eq!(rule.integrate(|x, _| x), 1.0 / 6.0, max_relative = 1e-13);
        assert_relative_eq!(
            rule.integrate(|x, y| x * y),
            1.0 / 24.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn triangle_monomial_exactness() {
        let cases = [
            ParameterTriple::of(0, 0, 0),
            ParameterTriple::new(rat(-1, 2), rat(1, 2), rint(2)),
            ParameterTriple::new(rint(1), rint(0), rat(3, 2)),
        ];
        for params in &cases {
            let size = 6; // exact through total degree 11
            let rule = triangle_rule(size, params).unwrap();
            for i in 0..=5u32 {
                for j in 0..=(5 - i) {
                    let got = rule.integrate(|x, y| x.powi(i as i32) * y.powi(j as i32));
                    let want = exact_monomial_moment(i, j, params);
                    assert_relative_eq!(got, want, max_relative = 1e-13);
                }
            }
        }
    }

    #[test]
    fn edge_rule_moment() {
        // edge z = 0: int_0^1 x (1-x) dx = 1/6
        let r = edge_rule(4, &rint(0), &rint(0)).unwrap();
        let got = r.integrate(|t| {
            let (x, y) = Edge::Hyp.point(t);
            x * y
        });
        assert_relative_eq!(got, 1.0 / 6.0, max_relative = 1e-13);
    }
}
