//! The three orthogonal families `J/K/L` on the unit triangle for arbitrary
//! rational parameters, with norms, derivative rewrites, recurrences between
//! parameter sets, and eigen-operator constants.
//!
//! Evaluation never divides by `x+y`, `1-y` or `1-x`: each family is reduced
//! through its boundary-factor structure to classical Jacobi factors that are
//! evaluated by the stable three-term recurrence, so corner points are
//! first-class inputs and degree-24 members keep full precision.

use crate::jacobi::{
    eval_classical_recurrence, extended_jacobi_coeffs, iota0, pochhammer_f64, sigma, tau,
    ParameterPair,
};
pub use crate::quadrature::ParameterTriple;
use crate::rational::*;
use crate::Error;
use num_traits::{One, Zero};
use statrs::function::gamma::ln_gamma;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    J,
    K,
    L,
}

impl Family {
    pub fn next(self) -> Family {
        match self {
            Family::J => Family::K,
            Family::K => Family::L,
            Family::L => Family::J,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::J => write!(f, "J"),
            Family::K => write!(f, "K"),
            Family::L => write!(f, "L"),
        }
    }
}

/// Index of one triangle polynomial: family, inner degree `k`, total degree `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub family: Family,
    pub k: u32,
    pub n: u32,
}

/// Inner/outer parameter pairs of a family member.
///
/// Every family has the shape `inner(k at s) * outer(n-k at t)` where the
/// inner factor is homogenized by `h^k` and `(1-s)/2 = A/h`, `(1+s)/2 = B/h`,
/// `(1-t)/2 = wm`, `(1+t)/2 = wp`.
struct Frame {
    inner: ParameterPair,
    outer_second: Rational,
}

fn frame(family: Family, p: &ParameterTriple) -> Frame {
    match family {
        Family::J => Frame {
            inner: ParameterPair::new(p.alpha.clone(), p.beta.clone()),
            outer_second: p.gamma.clone(),
        },
        Family::K => Frame {
            inner: ParameterPair::new(p.gamma.clone(), p.alpha.clone()),
            outer_second: p.beta.clone(),
        },
        Family::L => Frame {
            inner: ParameterPair::new(p.beta.clone(), p.gamma.clone()),
            outer_second: p.alpha.clone(),
        },
    }
}

/// Geometry of the frame at a point: `(A, B, h, t, wm, wp)` for the inner and
/// outer factors.
fn frame_coords(family: Family, x: f64, y: f64) -> (f64, f64, f64, f64, f64, f64) {
    let z = 1.0 - x - y;
    match family {
        Family::J => (x, y, x + y, 1.0 - 2.0 * (x + y), x + y, z),
        Family::K => (z, x, 1.0 - y, 2.0 * y - 1.0, 1.0 - y, y),
        Family::L => (y, z, 1.0 - x, 2.0 * x - 1.0, 1.0 - x, x),
    }
}

fn neg_int(r: &Rational) -> Option<u32> {
    match as_integer(r) {
        Some(v) if v <= -1 => Some((-v) as u32),
        _ => None,
    }
}

/// Stable evaluation of `J_n^{a,b}(t)` given `wm = (1-t)/2`, `wp = (1+t)/2`
/// exactly from the geometry. Negative integer parameters are peeled off as
/// boundary factors before the classical recurrence runs.
pub(crate) fn stable_jacobi_01(
    a: &Rational,
    b: &Rational,
    n: u32,
    t: f64,
    wm: f64,
    wp: f64,
) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if let Some(l) = neg_int(a) {
        if n >= l {
            // J_n^{-l,b} = (-1)^l (n-l)!/(2^l n!) (1-t)^l J_{n-l}^{l,b}
            let mut c = 1.0;
            for i in 0..l {
                c *= -wm / ((n - i) as f64);
            }
            return c * stable_jacobi_01(&rint(l as i64), b, n - l, t, wm, wp);
        }
        return horner_shifted(a, b, n, wm);
    }
    if let Some(m) = neg_int(b) {
        if n >= m {
            let mut c = 1.0;
            for i in 0..m {
                c *= wp / ((n - i) as f64);
            }
            return c * stable_jacobi_01(a, &rint(m as i64), n - m, t, wm, wp);
        }
        return horner_shifted(a, b, n, wm);
    }
    if *a > rint(-1) && *b > rint(-1) {
        eval_classical_recurrence(to_f64(a), to_f64(b), n, t)
    } else {
        // non-integer parameter <= -1: outside the catalog, degree stays small
        horner_shifted(a, b, n, wm)
    }
}

fn horner_shifted(a: &Rational, b: &Rational, n: u32, wm: f64) -> f64 {
    // w = (t-1)/2 = -wm
    let poly = extended_jacobi_coeffs(&ParameterPair::new(a.clone(), b.clone()), n);
    poly.eval_f64(1.0 - 2.0 * wm)
}

/// Homogenized inner factor `h^k J_k^{a,b}(s)` with `(1-s)/2 = A/h`,
/// `(1+s)/2 = B/h`, `A + B = h`.
fn inner_value(a: &Rational, b: &Rational, k: u32, big_a: f64, big_b: f64, h: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if let Some(l) = neg_int(a) {
        if k >= l {
            let mut c = 1.0;
            for i in 0..l {
                c *= -big_a / ((k - i) as f64);
            }
            return c * inner_value(&rint(l as i64), b, k - l, big_a, big_b, h);
        }
        return inner_horner(a, b, k, big_a, h);
    }
    if let Some(m) = neg_int(b) {
        if k >= m {
            let mut c = 1.0;
            for i in 0..m {
                c *= big_b / ((k - i) as f64);
            }
            return c * inner_value(a, &rint(m as i64), k - m, big_a, big_b, h);
        }
        return inner_horner(a, b, k, big_a, h);
    }
    if h == 0.0 {
        return 0.0; // a degree-k homogeneous factor vanishes at the corner
    }
    if *a > rint(-1) && *b > rint(-1) {
        let s = (big_b - big_a) / h;
        h.powi(k as i32) * eval_classical_recurrence(to_f64(a), to_f64(b), k, s)
    } else {
        inner_horner(a, b, k, big_a, h)
    }
}

fn inner_horner(a: &Rational, b: &Rational, k: u32, big_a: f64, h: f64) -> f64 {
    // sum_j c_j (-A)^j h^{k-j}
    let poly = extended_jacobi_coeffs(&ParameterPair::new(a.clone(), b.clone()), k);
    let mut terms = Vec::with_capacity(k as usize + 1);
    let mut apow = 1.0;
    for c in &poly.coeffs {
        terms.push(to_f64(c) * apow);
        apow *= -big_a;
    }
    let mut acc = 0.0;
    let mut hpow = 1.0;
    for j in (0..=k as usize).rev() {
        acc += terms[j] * hpow;
        if j > 0 {
            hpow *= h;
        }
    }
    acc
}

/// Evaluates one raw family member at `(x, y)`.
pub fn eval_basis(family: Family, p: &ParameterTriple, k: u32, n: u32, x: f64, y: f64) -> f64 {
    assert!(k <= n, "basis index requires 0 <= k <= n");
    let fr = frame(family, p);
    let (a_c, b_c, h, t, wm, wp) = frame_coords(family, x, y);
    let inner = inner_value(&fr.inner.alpha, &fr.inner.beta, k, a_c, b_c, h);
    let outer_first = rint(2 * k as i64) + &fr.inner.alpha + &fr.inner.beta + Rational::one();
    let outer = stable_jacobi_01(&outer_first, &fr.outer_second, n - k, t, wm, wp);
    inner * outer
}

/// Exact rational evaluation of a raw family member (homogenized sums).
pub fn eval_basis_rational(
    family: Family,
    p: &ParameterTriple,
    k: u32,
    n: u32,
    x: &Rational,
    y: &Rational,
) -> Rational {
    assert!(k <= n);
    let fr = frame(family, p);
    let z = Rational::one() - x - y;
    let (a_c, h): (Rational, Rational) = match family {
        Family::J => (x.clone(), x + y),
        Family::K => (z.clone(), Rational::one() - y),
        Family::L => (y.clone(), Rational::one() - x),
    };
    let wm = h.clone();
    let inner_poly = extended_jacobi_coeffs(&fr.inner, k);
    let mut terms = Vec::with_capacity(k as usize + 1);
    let mut apow = Rational::one();
    for c in &inner_poly.coeffs {
        terms.push(c * &apow);
        apow *= -a_c.clone();
    }
    let mut inner = Rational::zero();
    let mut hpow = Rational::one();
    for j in (0..=k as usize).rev() {
        inner += &terms[j] * &hpow;
        if j > 0 {
            hpow *= &h;
        }
    }
    let outer_first = rint(2 * k as i64) + &fr.inner.alpha + &fr.inner.beta + Rational::one();
    let outer_poly =
        extended_jacobi_coeffs(&ParameterPair::new(outer_first, fr.outer_second), n - k);
    let mut outer = Rational::zero();
    for c in outer_poly.coeffs.iter().rev() {
        outer = outer * -wm.clone() + c;
    }
    inner * outer
}

/// Closed-form L2 norm of `J_{k,n}^{a,b,c}` for classical parameters.
pub fn norm_hkn(p: &ParameterTriple, k: u32, n: u32) -> Result<f64, Error> {
    if !p.all_classical() {
        return Err(Error::ParameterOutOfRange(format!(
            "norm needs all parameters > -1, got {p}"
        )));
    }
    let a = to_f64(&p.alpha);
    let b = to_f64(&p.beta);
    let g = to_f64(&p.gamma);
    let kf = k as f64;
    let nf = n as f64;
    let ln = ln_gamma(kf + a + 1.0) + ln_gamma(kf + b + 1.0) + ln_gamma(kf + a + b + 1.0)
        + ln_gamma(nf - kf + g + 1.0)
        - ln_gamma(kf + 1.0)
        - ln_gamma(nf - kf + 1.0)
        + ln_gamma(nf + kf + a + b + 2.0)
        + ln_gamma(nf + kf + a + b + g + 2.0)
        - 2.0 * ln_gamma(2.0 * kf + a + b + 2.0)
        - 2.0 * ln_gamma(2.0 * nf + a + b + g + 3.0);
    Ok(ln.exp() * (2.0 * kf + a + b + 1.0) * (2.0 * nf + a + b + g + 2.0))
}

/// Norm of a raw member of any family (parameter roles permute with the family).
pub fn norm_family(family: Family, p: &ParameterTriple, k: u32, n: u32) -> Result<f64, Error> {
    let q = match family {
        Family::J => p.clone(),
        Family::K => ParameterTriple::new(p.gamma.clone(), p.alpha.clone(), p.beta.clone()),
        Family::L => ParameterTriple::new(p.beta.clone(), p.gamma.clone(), p.alpha.clone()),
    };
    norm_hkn(&q, k, n)
}

/// `a_{k,n}^{a,b}`: generic `(k+b)(n+k+a+b+1)/((2k+a+b)(2k+a+b+1))`, with the
/// two special values at `(a,b) = (-k,-k)` and `(-k-1,-k)`.
pub fn akn(pair: &ParameterPair, k: u32, n: u32) -> Result<Rational, Error> {
    let kk = rint(k as i64);
    if pair.alpha == -(&kk) && pair.beta == -(&kk) {
        return Ok(rint((n - k) as i64) + Rational::one());
    }
    if pair.alpha == -(&kk) - Rational::one() && pair.beta == -(&kk) {
        return Ok(-rint((n - k) as i64));
    }
    let d1 = rint(2 * k as i64) + &pair.alpha + &pair.beta;
    let d2 = &d1 + Rational::one();
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::UndefinedCoefficient(format!(
            "a_({k},{n})^{pair} undefined"
        )));
    }
    Ok(
        (kk + &pair.beta) * (rint((n + k) as i64) + &pair.alpha + &pair.beta + Rational::one())
            / (d1 * d2),
    )
}

/// Derivative-rewrite coefficient for the slot pair `(u, v)` at `(k, n)`.
///
/// The tabulated special values `n-k+1` and `-(n-k)` belong to the direction
/// whose factorization they were built for (the `J` family's x-derivative and
/// its two permutation images). In the mirrored direction the numerator
/// `(k + v)` vanishes at the same parameter patterns and the correct limit is
/// zero; this is what direct differentiation of the degenerate members gives.
fn akn_for_direction(
    pair: &ParameterPair,
    k: u32,
    n: u32,
    mirrored: bool,
) -> Result<Rational, Error> {
    if mirrored {
        let kk = rint(k as i64);
        if pair.beta == -(&kk)
            && (pair.alpha == -(&kk) || pair.alpha == -(&kk) - Rational::one())
        {
            return Ok(Rational::zero());
        }
    }
    akn(pair, k, n)
}

/// Conditions (a)/(b) under which the mixed derivative rewrite holds for the
/// slot pair `(u, v)` at inner degree `k`.
fn derivative_condition(u: &Rational, v: &Rational, k: u32) -> bool {
    let kk = rint(k as i64);
    // (b): (u,v) = (-k,-k) or (-k-1,-k)
    if *v == -(&kk) && (*u == -(&kk) || *u == -(&kk) - Rational::one()) {
        return true;
    }
    // (a)
    let s = u + v;
    let d1 = rint(2 * k as i64) + &s;
    if d1.is_zero() || (&d1 + Rational::one()).is_zero() {
        return false;
    }
    let c = &kk + &s + Rational::one();
    if !c.is_zero() {
        return true;
    }
    // k+u+v+1 = 0 but u+1 in {-1, ..., -k}
    match as_integer(&(u + Rational::one())) {
        Some(j) => j <= -1 && j >= -(k as i64),
        None => false,
    }
}

/// A raw family member reference; `k` outside `[0, n]` denotes the zero
/// polynomial per the index convention.
#[derive(Clone, Debug)]
pub struct Member {
    pub family: Family,
    pub params: ParameterTriple,
    pub k: i64,
    pub n: i64,
}

impl Member {
    pub fn is_zero(&self) -> bool {
        self.k < 0 || self.n < 0 || self.k > self.n
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            eval_basis(self.family, &self.params, self.k as u32, self.n as u32, x, y)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    D1,
    D2,
    D3,
}

/// Rewrites the directional derivative of a raw member as an exact linear
/// combination of raw members with shifted parameters. Errors with
/// `IdentityNotApplicable` when the relevant proposition's conditions fail.
pub fn derivative_member(m: &Member, dir: Dir) -> Result<Vec<(Rational, Member)>, Error> {
    if m.is_zero() {
        return Ok(vec![]);
    }
    let k = m.k as u32;
    let n = m.n as u32;
    let p = &m.params;
    let one = Rational::one();
    let raise = |da: i64, db: i64, dg: i64| {
        ParameterTriple::new(&p.alpha + rint(da), &p.beta + rint(db), &p.gamma + rint(dg))
    };
    let mk = |params: ParameterTriple, k: i64, n: i64| Member {
        family: m.family,
        params,
        k,
        n,
    };
    let pair = |u: &Rational, v: &Rational| ParameterPair::new(u.clone(), v.clone());
    let _ = n;

    let (first, second, terms): (Rational, Rational, Vec<(Rational, Member)>) =
        match (m.family, dir) {
            // d3 J = J^{a+1,b+1,g}_{k-1,n-1}, unconditional
            (Family::J, Dir::D3) => {
                return Ok(vec![(one, mk(raise(1, 1, 0), m.k - 1, m.n - 1))]);
            }
            // d1 K = K^{a+1,b,g+1}_{k-1,n-1}, unconditional (zero at k=0)
            (Family::K, Dir::D1) => {
                if k == 0 {
                    return Ok(vec![]);
                }
                return Ok(vec![(one, mk(raise(1, 0, 1), m.k - 1, m.n - 1))]);
            }
            // d2 L = -L^{a,b+1,g+1}_{k-1,n-1}, unconditional (zero at k=0)
            (Family::L, Dir::D2) => {
                if k == 0 {
                    return Ok(vec![]);
                }
                return Ok(vec![(-one, mk(raise(0, 1, 1), m.k - 1, m.n - 1))]);
            }
            (Family::J, Dir::D1) => {
                if k == 0 {
                    return Ok(vec![(-one, mk(raise(1, 0, 1), 0, m.n - 1))]);
                }
                let a = akn(&pair(&p.alpha, &p.beta), k, n)?;
                (
                    p.alpha.clone(),
                    p.beta.clone(),
                    vec![
                        (-a, mk(raise(1, 0, 1), m.k - 1, m.n - 1)),
                        (-Rational::one(), mk(raise(1, 0, 1), m.k, m.n - 1)),
                    ],
                )
            }
            (Family::J, Dir::D2) => {
                if k == 0 {
                    return Ok(vec![(-one, mk(raise(0, 1, 1), 0, m.n - 1))]);
                }
                let a = akn(&pair(&p.beta, &p.alpha), k, n)?;
                (
                    p.beta.clone(),
                    p.alpha.clone(),
                    vec![
                        (a, mk(raise(0, 1, 1), m.k - 1, m.n - 1)),
                        (-Rational::one(), mk(raise(0, 1, 1), m.k, m.n - 1)),
                    ],
                )
            }
            (Family::K, Dir::D2) => {
                if k == 0 {
                    return Ok(vec![(one, mk(raise(0, 1, 1), 0, m.n - 1))]);
                }
                let a = akn(&pair(&p.gamma, &p.alpha), k, n)?;
                (
                    p.gamma.clone(),
                    p.alpha.clone(),
                    vec![
                        (a, mk(raise(0, 1, 1), m.k - 1, m.n - 1)),
                        (Rational::one(), mk(raise(0, 1, 1), m.k, m.n - 1)),
                    ],
                )
            }
            (Family::K, Dir::D3) => {
                if k == 0 {
                    return Ok(vec![(one, mk(raise(1, 1, 0), 0, m.n - 1))]);
                }
                let a = akn(&pair(&p.alpha, &p.gamma), k, n)?;
                (
                    p.alpha.clone(),
                    p.gamma.clone(),
                    vec![
                        (-a, mk(raise(1, 1, 0), m.k - 1, m.n - 1)),
                        (Rational::one(), mk(raise(1, 1, 0), m.k, m.n - 1)),
                    ],
                )
            }
            (Family::L, Dir::D1) => {
                if k == 0 {
                    return Ok(vec![(one, mk(raise(1, 0, 1), 0, m.n - 1))]);
                }
                let a = akn(&pair(&p.gamma, &p.beta), k, n)?;
                (
                    p.gamma.clone(),
                    p.beta.clone(),
                    vec![
                        (-a, mk(raise(1, 0, 1), m.k - 1, m.n - 1)),
                        (Rational::one(), mk(raise(1, 0, 1), m.k, m.n - 1)),
                    ],
                )
            }
            (Family::L, Dir::D3) => {
                if k == 0 {
                    return Ok(vec![(-one, mk(raise(1, 1, 0), 0, m.n - 1))]);
                }
                let a = akn(&pair(&p.beta, &p.gamma), k, n)?;
                (
                    p.beta.clone(),
                    p.gamma.clone(),
                    vec![
                        (-a, mk(raise(1, 1, 0), m.k - 1, m.n - 1)),
                        (-Rational::one(), mk(raise(1, 1, 0), m.k, m.n - 1)),
                    ],
                )
            }
        };
    if !derivative_condition(&first, &second, k) {
        return Err(Error::IdentityNotApplicable(format!(
            "derivative rewrite conditions fail for {} family at {p}, k={k}",
            m.family
        )));
    }
    Ok(terms)
}

/// Linear combination of raw members plus an optional explicit low-degree
/// polynomial; the working representation for modified bases and for
/// derivative cascades.
#[derive(Clone, Debug, Default)]
pub struct MemberSum {
    pub terms: Vec<(Rational, Member)>,
    pub poly: Option<crate::poly::Poly2>,
}

impl MemberSum {
    pub fn raw(member: Member) -> MemberSum {
        MemberSum {
            terms: vec![(Rational::one(), member)],
            poly: None,
        }
    }

    pub fn from_poly(p: crate::poly::Poly2) -> MemberSum {
        MemberSum {
            terms: vec![],
            poly: Some(p),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (c, m) in &self.terms {
            acc += to_f64(c) * m.eval(x, y);
        }
        if let Some(p) = &self.poly {
            acc += p.eval_f64(x, y);
        }
        acc
    }

    pub fn derivative(&self, dir: Dir) -> Result<MemberSum, Error> {
        let mut out = MemberSum::default();
        for (c, m) in &self.terms {
            for (c2, m2) in derivative_member(m, dir)? {
                if !m2.is_zero() {
                    out.terms.push((c * c2, m2));
                }
            }
        }
        if let Some(p) = &self.poly {
            let d = match dir {
                Dir::D1 => p.dx(),
                Dir::D2 => p.dy(),
                Dir::D3 => p.dy().add(&p.dx().scale(&rint(-1))),
            };
            out.poly = Some(d);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> MemberSum {
        MemberSum {
            terms: self.terms.iter().map(|(c, m)| (c * s, m.clone())).collect(),
            poly: self.poly.as_ref().map(|p| p.scale(s)),
        }
    }

    pub fn add(&self, other: &MemberSum) -> MemberSum {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let poly = match (&self.poly, &other.poly) {
            (Some(p), Some(q)) => Some(p.add(q)),
            (Some(p), None) => Some(p.clone()),
            (None, Some(q)) => Some(q.clone()),
            (None, None) => None,
        };
        MemberSum { terms, poly }
    }
}

/// Spec-level operation: evaluates the derivative identity's right-hand side.
pub fn partial_derivative_basis(
    idx: BasisIndex,
    p: &ParameterTriple,
    dir: Dir,
    x: f64,
    y: f64,
) -> Result<f64, Error> {
    let m = Member {
        family: idx.family,
        params: p.clone(),
        k: idx.k as i64,
        n: idx.n as i64,
    };
    let terms = derivative_member(&m, dir)?;
    Ok(terms.iter().map(|(c, m)| to_f64(c) * m.eval(x, y)).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecurrenceKind {
    GammaRaise,
    AlphaRaise,
    BetaRaise,
    AbRaise,
}

/// Expands `J_{k,n}` over the raised-parameter family. Returns the target
/// parameter triple and `((k', n'), coefficient)` pairs.
pub fn recurrence_expand(
    p: &ParameterTriple,
    k: u32,
    n: u32,
    kind: RecurrenceKind,
) -> Result<(ParameterTriple, Vec<((u32, u32), Rational)>), Error> {
    let outer_first = rint(2 * k as i64) + &p.alpha + &p.beta + Rational::one();
    let mut out: Vec<((u32, u32), Rational)> = Vec::new();
    let mut push = |ki: i64, ni: i64, c: Rational| {
        if ki >= 0 && ni >= 0 && ki <= ni && !c.is_zero() {
            out.push(((ki as u32, ni as u32), c));
        }
    };
    let target = match kind {
        RecurrenceKind::GammaRaise => {
            let nn = rint(n as i64);
            if !(nn > -(&p.gamma)) {
                return Err(Error::IdentityNotApplicable(format!(
                    "gamma raise needs n > -gamma at {p}, n={n}"
                )));
            }
            if !(rint(2 * n as i64) + &p.alpha + &p.beta + Rational::one() > Rational::zero()) {
                return Err(Error::IdentityNotApplicable(format!(
                    "gamma raise needs n > -(alpha+beta+1)/2 at {p}, n={n}"
                )));
            }
            push(k as i64, n as i64, Rational::one());
            if n > k {
                let t = tau(
                    &ParameterPair::new(p.gamma.clone(), outer_first.clone()),
                    n - k,
                )?;
                push(k as i64, n as i64 - 1, t);
            }
            ParameterTriple::new(p.alpha.clone(), p.beta.clone(), &p.gamma + Rational::one())
        }
        RecurrenceKind::AlphaRaise => {
            push(k as i64, n as i64, Rational::one());
            if n > k {
                let t = tau(
                    &ParameterPair::new(outer_first.clone(), p.gamma.clone()),
                    n - k,
                )?;
                push(k as i64, n as i64 - 1, -t);
            }
            if k >= 1 {
                let tk = tau(&ParameterPair::new(p.alpha.clone(), p.beta.clone()), k)?;
                push(k as i64 - 1, n as i64, &tk * rint((n - k) as i64 + 1));
                let sg = sigma(
                    &ParameterPair::new(outer_first.clone(), p.gamma.clone()),
                    n - k,
                )?;
                push(k as i64 - 1, n as i64 - 1, -(&tk * sg));
            }
            ParameterTriple::new(&p.alpha + Rational::one(), p.beta.clone(), p.gamma.clone())
        }
        RecurrenceKind::BetaRaise => {
            push(k as i64, n as i64, Rational::one());
            if n > k {
                let t = tau(
                    &ParameterPair::new(outer_first.clone(), p.gamma.clone()),
                    n - k,
                )?;
                push(k as i64, n as i64 - 1, -t);
            }
            if k >= 1 {
                let tk = tau(&ParameterPair::new(p.beta.clone(), p.alpha.clone()), k)?;
                push(k as i64 - 1, n as i64, -(&tk * rint((n - k) as i64 + 1)));
                let sg = sigma(
                    &ParameterPair::new(outer_first.clone(), p.gamma.clone()),
                    n - k,
                )?;
                push(k as i64 - 1, n as i64 - 1, tk * sg);
            }
            ParameterTriple::new(p.alpha.clone(), &p.beta + Rational::one(), p.gamma.clone())
        }
        RecurrenceKind::AbRaise => {
            // nine-term expansion over (alpha+1, beta+1, gamma)
            let a1 = outer_first.clone(); // 2k + a + b + 1
            let a2 = &a1 + Rational::one();
            let a0 = &a1 - Rational::one();
            push(k as i64, n as i64, Rational::one());
            if n > k {
                let t1 = tau(&ParameterPair::new(a2.clone(), p.gamma.clone()), n - k)?;
                let t2 = tau(&ParameterPair::new(a1.clone(), p.gamma.clone()), n - k)?;
                push(k as i64, n as i64 - 1, -(&t1 + &t2));
                if n > k + 1 {
                    let t3 = tau(&ParameterPair::new(a2.clone(), p.gamma.clone()), n - k - 1)?;
                    push(k as i64, n as i64 - 2, t2 * t3);
                }
            }
            if k >= 1 {
                let tk_ab = tau(&ParameterPair::new(p.alpha.clone(), p.beta.clone()), k)?;
                let tk_ba1 = tau(
                    &ParameterPair::new(p.beta.clone(), &p.alpha + Rational::one()),
                    k,
                )?;
                let ck = &tk_ba1 - &tk_ab;
                push(k as i64 - 1, n as i64, -(&ck * rint((n - k + 1) as i64)));
                if n > k {
                    let (afrak, bfrak) = crate::jacobi::three_term(
                        &ParameterPair::new(a1.clone(), p.gamma.clone()),
                        n - k,
                    )?;
                    push(
                        k as i64 - 1,
                        n as i64 - 1,
                        &ck * (Rational::one() - afrak) / rint(2),
                    );
                    push(k as i64 - 1, n as i64 - 2, -(&ck * bfrak) / rint(2));
                }
                if k >= 2 {
                    let tk1_ba1 = tau(
                        &ParameterPair::new(p.beta.clone(), &p.alpha + Rational::one()),
                        k - 1,
                    )?;
                    let dk = &tk_ab * tk1_ba1;
                    push(
                        k as i64 - 2,
                        n as i64,
                        &dk * rint((n - k + 1) as i64) * rint((n - k + 2) as i64),
                    );
                    if n > k {
                        let s1 =
                            sigma(&ParameterPair::new(a0.clone(), p.gamma.clone()), n - k + 1)?;
                        let s2 = sigma(&ParameterPair::new(a1.clone(), p.gamma.clone()), n - k)?;
                        push(
                            k as i64 - 2,
                            n as i64 - 1,
                            -(&dk * rint((n - k + 1) as i64) * (&s1 + &s2)),
                        );
                        let s3 = sigma(&ParameterPair::new(a0.clone(), p.gamma.clone()), n - k)?;
                        push(k as i64 - 2, n as i64 - 2, dk * s2 * s3);
                    }
                }
            }
            ParameterTriple::new(
                &p.alpha + Rational::one(),
                &p.beta + Rational::one(),
                p.gamma.clone(),
            )
        }
    };
    Ok((target, out))
}

/// Eigenvalue of the order-`2r` operator on degree-`n` members:
/// `(-n)_r (n+a+b+g+2)_r`.
pub fn lambda_rn(p: &ParameterTriple, r: u32, n: u32) -> Rational {
    pochhammer(&rint(-(n as i64)), r)
        * pochhammer(&(rint(n as i64) + &p.alpha + &p.beta + &p.gamma + rint(2)), r)
}

/// `mu_k^{a,b} = -k (k + a + b + 1)`.
pub fn mu_k(pair: &ParameterPair, k: u32) -> Rational {
    -rint(k as i64) * (rint(k as i64) + &pair.alpha + &pair.beta + Rational::one())
}

/// Eigenvalue of the fourth-order directional operator. The middle term uses
/// the degree-lowered first-order eigenvalue (the hypotenuse derivative lands
/// in degree `n-1`); the finite-difference checks confirm this normalization.
pub fn sigma_kn(p: &ParameterTriple, k: u32, n: u32) -> Rational {
    let inner = ParameterPair::new(p.alpha.clone(), p.beta.clone());
    let raised = ParameterTriple::new(
        &p.alpha + Rational::one(),
        &p.beta + Rational::one(),
        p.gamma.clone(),
    );
    let raised_pair = ParameterPair::new(&p.alpha + Rational::one(), &p.beta + Rational::one());
    let l1 = if n >= 1 {
        lambda_rn(&raised, 1, n - 1)
    } else {
        Rational::zero()
    };
    let mu = mu_k(&inner, k);
    let mu_prev = if k >= 1 {
        mu_k(&raised_pair, k - 1)
    } else {
        Rational::zero()
    };
    lambda_rn(p, 2, n) - rint(2) * l1 * &mu + mu_prev * mu
}

#[derive(Clone, Debug)]
pub struct EigenConstants {
    pub lambda_rn: Rational,
    pub mu_k: Rational,
    pub sigma_kn: Rational,
}

pub fn eigen_constants(p: &ParameterTriple, r: u32, k: u32, n: u32) -> EigenConstants {
    EigenConstants {
        lambda_rn: lambda_rn(p, r, n),
        mu_k: mu_k(&ParameterPair::new(p.alpha.clone(), p.beta.clone()), k),
        sigma_kn: sigma_kn(p, k, n),
    }
}

/// `pochhammer` in f64 re-exported for harness-scale computations.
pub fn poch_f64(a: f64, m: u32) -> f64 {
    pochhammer_f64(a, m)
}

/// Truncation index of the inner Jacobi factor of a family member.
pub fn truncation_index(family: Family, p: &ParameterTriple, k: u32) -> u32 {
    iota0(&frame(family, p).inner, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::triangle_rule;
    use approx::assert_relative_eq;

    #[test]
    fn constant_member() {
        let p = ParameterTriple::of(0, 0, 0);
        for fam in [Family::J, Family::K, Family::L] {
            assert_relative_eq!(eval_basis(fam, &p, 0, 0, 0.3, 0.2), 1.0);
        }
    }

    #[test]
    fn j_family_neg_one_neg_one() {
        // J_{1,1}^{-1,-1,g} = -x for any g
        let p = ParameterTriple::new(rint(-1), rint(-1), rat(3, 2));
        for (x, y) in [(0.2, 0.3), (0.0, 0.5), (0.7, 0.0)] {
            assert_relative_eq!(eval_basis(Family::J, &p, 1, 1, x, y), -x, epsilon = 1e-14);
        }
    }

    #[test]
    fn transform_identities() {
        // K^{a,b,g}(x,y) = J^{g,a,b}(1-x-y, x), L^{a,b,g}(x,y) = J^{b,g,a}(y, 1-x-y)
        let cases = [
            ParameterTriple::of(0, 1, 2),
            ParameterTriple::new(rint(1), rat(-1, 2), rint(2)),
            ParameterTriple::of(-1, -1, -1),
            ParameterTriple::of(-2, -2, -2),
        ];
        let pts = [(0.2, 0.3), (0.15, 0.7), (0.55, 0.1)];
        for p in &cases {
            let pk = p.cycle(); // (g, a, b)
            let pl = p.cycle().cycle(); // (b, g, a)
            for n in 0..=8u32 {
                for k in 0..=n {
                    for &(x, y) in &pts {
                        let z = 1.0 - x - y;
                        let kv = eval_basis(Family::K, p, k, n, x, y);
                        let jv = eval_basis(Family::J, &pk, k, n, z, x);
                        assert!(
                            (kv - jv).abs() <= 1e-11 * kv.abs().max(1e-3),
                            "K transform {p} k={k} n={n}: {kv} vs {jv}"
                        );
                        let lv = eval_basis(Family::L, p, k, n, x, y);
                        let jv2 = eval_basis(Family::J, &pl, k, n, y, z);
                        assert!(
                            (lv - jv2).abs() <= 1e-11 * lv.abs().max(1e-3),
                            "L transform {p} k={k} n={n}: {lv} vs {jv2}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn spec_transform_example() {
        let p = ParameterTriple::of(0, 1, 2);
        let (x, y) = (0.2, 0.3);
        let kv = eval_basis(Family::K, &p, 1, 3, x, y);
        let jv = eval_basis(
            Family::J,
            &ParameterTriple::of(2, 0, 1),
            1,
            3,
            1.0 - x - y,
            x,
        );
        assert_relative_eq!(kv, jv, max_relative = 1e-12);
    }

    #[test]
    fn stable_matches_exact() {
        let cases = [
            ParameterTriple::of(0, 0, 0),
            ParameterTriple::new(rat(1, 2), rat(-1, 2), rint(1)),
            ParameterTriple::of(-1, -1, 0),
            ParameterTriple::of(-1, -1, -1),
            ParameterTriple::of(-1, -1, -2),
            ParameterTriple::of(-2, -2, -2),
            ParameterTriple::of(0, -2, 1),
        ];
        let pts = [(rat(1, 5), rat(3, 10)), (rat(2, 3), rat(1, 4))];
        for p in &cases {
            for fam in [Family::J, Family::K, Family::L] {
                for n in 0..=10u32 {
                    for k in 0..=n {
                        for (xr, yr) in &pts {
                            let exact = to_f64(&eval_basis_rational(fam, p, k, n, xr, yr));
                            let fast = eval_basis(fam, p, k, n, to_f64(xr), to_f64(yr));
                            assert!(
                                (fast - exact).abs() <= 1e-12 * exact.abs().max(1e-8),
                                "{fam} {p} k={k} n={n}: fast={fast:e} exact={exact:e}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hkn_matches_quadrature() {
        let p = ParameterTriple::of(0, 0, 0);
        let rule = triangle_rule(8, &p).unwrap();
        for (k, n) in [(0u32, 0u32), (1, 2), (0, 2), (2, 3)] {
            let q = rule.integrate(|x, y| {
                let v = eval_basis(Family::J, &p, k, n, x, y);
                v * v
            });
            let h = norm_hkn(&p, k, n).unwrap();
            assert_relative_eq!(q, h, max_relative = 1e-12);
        }
        assert_relative_eq!(norm_hkn(&p, 0, 0).unwrap(), 0.5, max_relative = 1e-13);
    }

    #[test]
    fn hkn_positive() {
        let params = [
            ParameterTriple::new(rat(-1, 2), rint(3), rat(1, 2)),
            ParameterTriple::of(0, 0, 0),
            ParameterTriple::of(3, 1, 2),
        ];
        for p in &params {
            for n in 0..=10 {
                for k in 0..=n {
                    assert!(norm_hkn(p, k, n).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn akn_examples() {
        assert_eq!(akn(&ParameterPair::of(0, 0), 1, 2).unwrap(), rat(2, 3));
        assert_eq!(akn(&ParameterPair::of(-2, -2), 2, 5).unwrap(), rint(4));
        assert_eq!(akn(&ParameterPair::of(-3, -2), 2, 5).unwrap(), rint(-3));
    }

    #[test]
    fn derivative_examples() {
        // d3 J_{0,n} = 0
        let p = ParameterTriple::new(rat(1, 2), rint(0), rint(1));
        let m = Member {
            family: Family::J,
            params: p,
            k: 0,
            n: 4,
        };
        let d = derivative_member(&m, Dir::D3).unwrap();
        assert!(d.iter().all(|(_, m)| m.is_zero()) || d.is_empty());

        // d3 J_{1,1}^{-1,-1,-1} = J_{0,0}^{0,0,-1} = 1
        let v = partial_derivative_basis(
            BasisIndex {
                family: Family::J,
                k: 1,
                n: 1,
            },
            &ParameterTriple::of(-1, -1, -1),
            Dir::D3,
            0.4,
            0.1,
        )
        .unwrap();
        assert_relative_eq!(v, 1.0);

        // d1 K_{1,2}^{0,0,0} = K_{0,1}^{1,0,1}
        let lhs = partial_derivative_basis(
            BasisIndex {
                family: Family::K,
                k: 1,
                n: 2,
            },
            &ParameterTriple::of(0, 0, 0),
            Dir::D1,
            0.25,
            0.25,
        )
        .unwrap();
        let rhs = eval_basis(Family::K, &ParameterTriple::of(1, 0, 1), 0, 1, 0.25, 0.25);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn derivative_counterexample() {
        // d2 of J_{1,n}^{-2,-1,-1} is not expressible by the two-term rewrite
        let m = Member {
            family: Family::J,
            params: ParameterTriple::of(-2, -1, -1),
            k: 1,
            n: 4,
        };
        assert!(matches!(
            derivative_member(&m, Dir::D2),
            Err(Error::IdentityNotApplicable(_))
        ));
        // while d1 works through condition (b)
        assert!(derivative_member(&m, Dir::D1).is_ok());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let cases = [
            ParameterTriple::of(0, 0, 0),
            ParameterTriple::new(rat(1, 2), rat(3, 2), rint(0)),
            ParameterTriple::of(-1, -1, -1),
        ];
        let h = 1e-5;
        for p in &cases {
            for n in 1..=5u32 {
                for k in 0..=n {
                    let m = Member {
                        family: Family::J,
                        params: p.clone(),
                        k: k as i64,
                        n: n as i64,
                    };
                    let (x, y) = (0.31, 0.27);
                    for (dir, dx, dy) in
                        [(Dir::D1, 1.0, 0.0), (Dir::D2, 0.0, 1.0), (Dir::D3, -1.0, 1.0)]
                    {
                        let Ok(terms) = derivative_member(&m, dir) else {
                            continue;
                        };
                        let rhs: f64 =
                            terms.iter().map(|(c, mm)| to_f64(c) * mm.eval(x, y)).sum();
                        let f = |x: f64, y: f64| eval_basis(Family::J, p, k, n, x, y);
                        let fd = (8.0 * (f(x + h * dx, y + h * dy) - f(x - h * dx, y - h * dy))
                            - (f(x + 2.0 * h * dx, y + 2.0 * h * dy)
                                - f(x - 2.0 * h * dx, y - 2.0 * h * dy)))
                            / (12.0 * h);
                        assert!(
                            (rhs - fd).abs() <= 1e-8 * rhs.abs().max(1.0),
                            "{p} k={k} n={n} {dir:?}: rewrite={rhs} fd={fd}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_raise_example() {
        let p = ParameterTriple::of(0, 0, -1);
        let (target, terms) = recurrence_expand(&p, 0, 2, RecurrenceKind::GammaRaise).unwrap();
        assert_eq!(target, ParameterTriple::of(0, 0, 0));
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0], ((0, 2), rint(1)));
        assert_eq!(terms[1], ((0, 1), rat(3, 20)));
    }

    #[test]
    fn recurrences_pointwise() {
        let cases = [
            ParameterTriple::of(0, 0, 0),
            ParameterTriple::new(rat(1, 2), rint(1), rat(-1, 2)),
            ParameterTriple::of(-1, -1, 0),
        ];
        let pts = [(0.2, 0.3), (0.4, 0.15), (0.1, 0.6)];
        for p in &cases {
            for n in 0..=6u32 {
                for k in 0..=n {
                    for kind in [
                        RecurrenceKind::GammaRaise,
                        RecurrenceKind::AlphaRaise,
                        RecurrenceKind::BetaRaise,
                        RecurrenceKind::AbRaise,
                    ] {
                        let Ok((target, terms)) = recurrence_expand(p, k, n, kind) else {
                            continue;
                        };
                        for &(x, y) in &pts {
                            let lhs = eval_basis(Family::J, p, k, n, x, y);
                            let rhs: f64 = terms
                                .iter()
                                .map(|((ki, ni), c)| {
                                    to_f64(c) * eval_basis(Family::J, &target, *ki, *ni, x, y)
                                })
                                .sum();
                            assert!(
                                (lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0),
                                "{p} k={k} n={n} {kind:?}: {lhs} vs {rhs}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ab_raise_special_row() {
        // the k=1 expansion of the (-1,-1,g) family carries the m/2 correction
        let p = ParameterTriple::new(rint(-1), rint(-1), rat(1, 2));
        let m = 5u32;
        let (_, terms) = recurrence_expand(&p, 1, m, RecurrenceKind::AbRaise).unwrap();
        let c = terms
            .iter()
            .find(|((ki, ni), _)| *ki == 0 && *ni == m)
            .map(|(_, c)| c.clone())
            .unwrap();
        assert_eq!(c, rat(m as i64, 2));
    }

    #[test]
    fn eigen_constant_examples() {
        let p = ParameterTriple::of(0, 0, 0);
        for n in 0..6u32 {
            assert_eq!(lambda_rn(&p, 1, n), rint(-(n as i64)) * rint(n as i64 + 2));
        }
        assert_eq!(mu_k(&ParameterPair::of(3, 1), 0), rint(0));
        // sigma for gamma = -2 factorizes as (n-k-1)_2 (n+k+a+b)_2
        let q = ParameterTriple::of(0, 0, -2);
        let (k, n) = (1u32, 4u32);
        let expect =
            pochhammer(&rint((n - k - 1) as i64), 2) * pochhammer(&rint((n + k) as i64), 2);
        assert_eq!(sigma_kn(&q, k, n), expect);
    }
}
