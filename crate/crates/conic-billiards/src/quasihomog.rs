//! Quasihomogeneous models of dual billiard singularities.
//!
//! The `(p, q; ρ)`-billiard lives on the curve `w^q = z^p`, with every
//! involution equal to `η_ρ` in the ζ-chart of the tangent lines. This module
//! provides `(p, q)`-weighted degrees and lower parts, restrictions to the
//! tangent line `L` at `(1, 1)`, root divisors on `L`, `η_ρ`-quasi-invariance,
//! the admissible residue set `ℳ`, the primitive quasi-invariant polynomials
//! for `ρ = 2 ± 2/k`, and the two residue formulas.
//!
//! Polynomials here are [`Poly`] values in `(z, w)` (no `t`).

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{NumError, Rational, Scalar};
use crate::integrals::poly::{Poly, UniPoly};
use crate::projcore::{eta, ExtValue};

/// Errors raised by quasihomogeneous computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QhError {
    /// The zero polynomial has no lower part.
    #[error("zero polynomial")]
    ZeroPoly,
    /// `p` and `q` must be positive and coprime.
    #[error("weights ({0}, {1}) are not positive coprime integers")]
    BadWeights(u32, u32),
    /// The polynomial depends on `t`.
    #[error("polynomial must be in (z, w) only")]
    NotBivariate,
    /// The polynomial is not quasihomogeneous for the weights.
    #[error("polynomial is not ({0},{1})-quasihomogeneous")]
    NotQuasihomogeneous(u32, u32),
    /// A prime factor needs an unsupported field extension.
    #[error("prime factor not representable over the working field: {0}")]
    IrreduciblePrimeOverField(String),
    /// `ρ` is an integer; there is no primitive family.
    #[error("rho = {0} is an integer")]
    RhoInteger(String),
    /// `ρ` is outside `ℳ`.
    #[error("rho = {0} is not in the admissible set")]
    RhoNotInM(String),
    /// A polynomial is not primitive `η_ρ`-quasi-invariant.
    #[error("not a primitive quasi-invariant polynomial: {0}")]
    NotPrimitive(String),
    /// The first polynomial does not vanish on the curve.
    #[error("P1 does not vanish on w^q = z^p")]
    NotOnCurve,
    /// The degree relation between the two polynomials fails.
    #[error("degree relation violated: {0}")]
    RelationViolated(String),
    /// `θ_ρ` coincides with `θ_r` on a `w` factor, or lies in both divisors.
    #[error("ambiguous case: {0}")]
    AmbiguousCase(String),
    /// Scalar arithmetic failure.
    #[error(transparent)]
    Num(#[from] NumError),
}

fn check_weights(p: u32, q: u32) -> Result<(), QhError> {
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(QhError::BadWeights(p, q));
    }
    Ok(())
}

fn weight(e: &[u32; 3], p: u32, q: u32) -> u32 {
    e[0] * q + e[1] * p
}

/// A `(p, q)`-quasihomogeneous polynomial in `(z, w)`: every monomial
/// `z^k w^m` has weighted degree `kq + mp` equal to `qh_degree`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QHPoly {
    /// The polynomial.
    pub poly: Poly,
    /// Weight exponent `p`.
    pub p: u32,
    /// Weight exponent `q`.
    pub q: u32,
    /// The common weighted degree.
    pub qh_degree: u32,
}

impl QHPoly {
    /// Validate and wrap a polynomial.
    pub fn new(poly: Poly, p: u32, q: u32) -> Result<QHPoly, QhError> {
        check_weights(p, q)?;
        if poly.is_zero() {
            return Err(QhError::ZeroPoly);
        }
        if poly.degree_in(2).unwrap_or(0) > 0 {
            return Err(QhError::NotBivariate);
        }
        let degs: Vec<u32> = poly.terms().map(|(e, _)| weight(e, p, q)).collect();
        let d = degs[0];
        if degs.iter().any(|&x| x != d) {
            return Err(QhError::NotQuasihomogeneous(p, q));
        }
        Ok(QHPoly { poly, p, q, qh_degree: d })
    }

    /// `r = p/q`.
    pub fn r(&self) -> Scalar {
        Scalar::ratio(self.p as i64, self.q as i64)
    }
}

/// The lower `(p, q)`-quasihomogeneous part: the sum of the monomials of
/// minimal weighted degree.
///
/// ```
/// use conic_billiards::integrals::Poly;
/// use conic_billiards::quasihomog::lower_part;
/// let f = Poly::from_int_terms(&[([0, 1, 0], 1), ([2, 0, 0], -1), ([3, 0, 0], 1)]);
/// let l = lower_part(&f, 2, 1).unwrap();
/// assert_eq!(l.poly, Poly::from_int_terms(&[([0, 1, 0], 1), ([2, 0, 0], -1)]));
/// ```
pub fn lower_part(f: &Poly, p: u32, q: u32) -> Result<QHPoly, QhError> {
    check_weights(p, q)?;
    let d = f.terms().map(|(e, _)| weight(e, p, q)).min().ok_or(QhError::ZeroPoly)?;
    let low = Poly::from_terms(f.terms().filter(|(e, _)| weight(e, p, q) == d).map(|(e, c)| (*e, c.clone())));
    QHPoly::new(low, p, q)
}

/// `ℛ_{p,q,c}(ζ) = (q − p + pζ)^q − c·q^q·ζ^p`: the restriction of
/// `w^q − c z^p` to the tangent line `w = 1 − r + rz` (`r = p/q`) at
/// `(1, 1)`, scaled by `q^q`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::integrals::UniPoly;
/// use conic_billiards::quasihomog::restriction_r;
/// assert_eq!(restriction_r(2, 1, &Scalar::int(-8)), UniPoly::from_ints(&[-1, 2, 8]));
/// ```
pub fn restriction_r(p: u32, q: u32, c: &Scalar) -> UniPoly {
    let lin = UniPoly::linear(Scalar::int(p as i64), Scalar::int(q as i64 - p as i64));
    let mut zp = vec![Scalar::zero(); p as usize + 1];
    zp[p as usize] = c * &Scalar::int((q as i64).pow(q));
    &lin.pow(q) - &UniPoly::new(zp)
}

/// The restriction of a `(z, w)` polynomial to the tangent line at `(1, 1)`
/// of `w^q = z^p`, in the coordinate `ζ = z`.
pub fn restrict_to_tangent(f: &QHPoly) -> UniPoly {
    let r = f.r();
    let w = UniPoly::linear(r.clone(), Scalar::one() - r);
    f.poly.substitute_uni(&[UniPoly::x(), w, UniPoly::one()])
}

/// A multiset of points of the tangent line `L` (possibly `∞`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootDivisor {
    /// `(point, multiplicity)` pairs with distinct points.
    pub roots: Vec<(ExtValue, usize)>,
}

impl RootDivisor {
    /// Total number of points counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    /// Multiplicity of a point (0 if absent).
    pub fn multiplicity(&self, x: &ExtValue) -> usize {
        self.roots.iter().find(|(y, _)| y == x).map_or(0, |(_, m)| *m)
    }

    /// True iff the point occurs.
    pub fn contains(&self, x: &ExtValue) -> bool {
        self.multiplicity(x) > 0
    }

    fn add(&mut self, x: ExtValue, m: usize) {
        if m == 0 {
            return;
        }
        match self.roots.iter_mut().find(|(y, _)| *y == x) {
            Some((_, k)) => *k += m,
            None => self.roots.push((x, m)),
        }
    }
}

/// The root divisor `χ(P)`: the roots of `P|_L`, with `∞` carrying the
/// drop between the total degree of `P` and the degree of its restriction.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::integrals::Poly;
/// use conic_billiards::projcore::ExtValue;
/// use conic_billiards::quasihomog::{root_divisor, QHPoly};
/// let zw = QHPoly::new(Poly::from_int_terms(&[([1, 1, 0], 1)]), 2, 1).unwrap();
/// let chi = root_divisor(&zw).unwrap();
/// assert!(chi.contains(&ExtValue::finite(Scalar::zero())));
/// assert!(chi.contains(&ExtValue::finite(Scalar::ratio(1, 2))));
/// ```
pub fn root_divisor(f: &QHPoly) -> Result<RootDivisor, QhError> {
    let h = restrict_to_tangent(f);
    let mut d = RootDivisor { roots: vec![] };
    let total = f.poly.total_degree().unwrap_or(0) as usize;
    if h.is_zero() {
        return Err(QhError::IrreduciblePrimeOverField("restriction vanishes identically".into()));
    }
    let roots = h.roots().map_err(|e| QhError::IrreduciblePrimeOverField(e.to_string()))?;
    for (x, m) in roots {
        d.add(ExtValue::finite(x), m);
    }
    let at_inf = total - h.degree().unwrap_or(0);
    d.add(ExtValue::infinity(), at_inf);
    Ok(d)
}

/// `θ_ρ = (ρ − 1)/ρ = η_ρ(∞)`.
pub fn theta_rho(rho: &Scalar) -> ExtValue {
    ExtValue(rho - &Scalar::one(), rho.clone())
}

/// True iff `χ(P)` with one copy of `θ_ρ` removed (if present) is mapped to
/// itself by `η_ρ`.
///
/// The divisor is never computed: the restriction, read as a binary form of
/// degree `deg P`, has one linear factor for `θ_ρ` divided out, and the
/// remaining form must be a constant multiple of its pullback by `η_ρ`. This
/// is exact over the algebraic closure and needs no root finding.
pub fn is_eta_quasi_invariant(f: &QHPoly, rho: &Scalar) -> Result<bool, QhError> {
    let mut h = restrict_to_tangent(f);
    if h.is_zero() {
        return Err(QhError::IrreduciblePrimeOverField("restriction vanishes identically".into()));
    }
    let mut n = f.poly.total_degree().unwrap_or(0) as usize;
    let h_deg = h.degree().unwrap_or(0);
    match theta_rho(rho).value() {
        Some(t) if h.eval(&t).is_zero() => {
            h = h.div_rem(&UniPoly::linear(Scalar::one(), -t)).0;
            n -= 1;
        }
        None if h_deg < n => n -= 1,
        _ => {}
    }
    let g = pull_back_form(&h, n, &eta(rho).matrix);
    let top = h.degree().unwrap_or(0);
    Ok(g.scale(&h.lead()) == h.scale(&g.coeff(top)))
}

/// The binary form `Σ c_k X^k Y^(n−k)` pulled back by `m`, in the chart `Y = 1`:
/// `Σ c_k (a x + b)^k (c x + d)^(n−k)`.
fn pull_back_form(h: &UniPoly, n: usize, m: &[[Scalar; 2]; 2]) -> UniPoly {
    let x = UniPoly::linear(m[0][0].clone(), m[0][1].clone());
    let y = UniPoly::linear(m[1][0].clone(), m[1][1].clone());
    let mut acc = UniPoly::zero();
    for (k, c) in h.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &(&x.pow(k as u32) * &y.pow((n - k) as u32)).scale(c);
        }
    }
    acc
}

/// Membership of `ρ` in `ℳ = {0,1,2,3,4} ∪ {2 ± 2/k : k ≥ 3}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoClass {
    /// Whether `ρ ∈ ℳ`.
    pub in_m: bool,
    /// `m = 2/(ρ − 2)` when it is an integer (undefined for `ρ = 2`).
    pub m: Option<i64>,
}

/// Classify `ρ` by arithmetic: `ρ ∈ ℳ` iff `ρ = 2` or `2/(ρ − 2)` is a
/// nonzero integer `m` (the values `m = ±1, ±2` give `ρ = 4, 0, 3, 1`).
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::quasihomog::classify_rho;
/// let c = classify_rho(&Scalar::ratio(4, 3));
/// assert!(c.in_m);
/// assert_eq!(c.m, Some(-3));
/// assert!(!classify_rho(&Scalar::ratio(5, 7)).in_m);
/// ```
pub fn classify_rho(rho: &Scalar) -> RhoClass {
    let Some(r) = rho.as_rational() else { return RhoClass { in_m: false, m: None } };
    let two = Rational::from_integer(2.into());
    let gap = r - &two;
    if gap == Rational::from_integer(0.into()) {
        return RhoClass { in_m: true, m: None };
    }
    let m = &two / &gap;
    if m.is_integer() {
        let m = m.to_integer().to_i64();
        RhoClass { in_m: m.is_some(), m }
    } else {
        RhoClass { in_m: false, m: None }
    }
}

/// Classify `ρ` by walking the orbit of `ζ = 1/2` under `T = η₂ ∘ η_ρ`:
/// `ρ ∈ ℳ` iff `T` is the identity or `T^m(1/2) = ∞` for some integer `m`.
/// An integer `m` with this property satisfies `|m| ≤ 2·den(ρ)`, which bounds
/// the walk.
pub fn classify_rho_orbit(rho: &Scalar) -> RhoClass {
    let Some(r) = rho.as_rational() else { return RhoClass { in_m: false, m: None } };
    let t = eta(&Scalar::int(2)).compose(&eta(rho)).expect("same chart");
    if t.is_identity() {
        return RhoClass { in_m: true, m: None };
    }
    let t_inv = eta(rho).compose(&eta(&Scalar::int(2))).expect("same chart");
    let bound = 2 * r.denom().to_i64().unwrap_or(i64::MAX / 4) + 2;
    let start = ExtValue::finite(Scalar::ratio(1, 2));
    for (map, sign) in [(&t, 1i64), (&t_inv, -1i64)] {
        let mut x = start.clone();
        for k in 1..=bound {
            x = map.apply(&x);
            if x.is_infinite() {
                return RhoClass { in_m: true, m: Some(sign * k) };
            }
            if x == start {
                break;
            }
        }
    }
    RhoClass { in_m: false, m: None }
}

/// A primitive `η_ρ`-quasi-invariant polynomial for `ρ = 2 + 2/m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Primitive {
    /// `ρ`.
    pub rho: Scalar,
    /// `m = 2/(ρ − 2)`.
    pub m: i64,
    /// The polynomial `w^[m>0] z^[m even] ∏(w − c_j z²)`.
    pub poly: QHPoly,
    /// The coefficients `c_j = −4j(m−j)/(2j−m)²`.
    pub c: Vec<Scalar>,
    /// The orbit points `ζ_j = (2j − m)/(2(j − m))` paired by `η_ρ`.
    pub orbit_points: Vec<Scalar>,
    /// Whether a `w` factor is present (`ρ > 2`).
    pub has_w: bool,
    /// Whether a `z` factor is present (`m` even).
    pub has_z: bool,
}

/// Build the primitive quasi-invariant polynomial for a non-integer `ρ ∈ ℳ`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::quasihomog::build_primitive;
/// let p = build_primitive(&Scalar::ratio(8, 3)).unwrap();
/// assert_eq!(p.c, vec![Scalar::int(-8)]);
/// assert!(p.has_w && !p.has_z);
/// ```
pub fn build_primitive(rho: &Scalar) -> Result<Primitive, QhError> {
    let class = classify_rho(rho);
    if !class.in_m {
        return Err(QhError::RhoNotInM(rho.to_string()));
    }
    let m = match class.m {
        Some(m) if m.abs() >= 3 => m,
        _ => return Err(QhError::RhoInteger(rho.to_string())),
    };
    let count = (m.abs() - 1) / 2;
    let js: Vec<i64> = (1..=count).map(|j| j * m.signum()).collect();
    let c: Vec<Scalar> = js.iter().map(|&j| Scalar::ratio(-4 * j * (m - j), (2 * j - m).pow(2))).collect();
    let orbit_points = js.iter().map(|&j| Scalar::ratio(2 * j - m, 2 * (j - m))).collect();
    let has_w = m > 0;
    let has_z = m % 2 == 0;
    let mut poly = Poly::one();
    if has_w {
        poly = &poly * &Poly::w();
    }
    if has_z {
        poly = &poly * &Poly::z();
    }
    for cj in &c {
        poly = &poly * &(&Poly::w() - &Poly::monomial([2, 0, 0], cj.clone()));
    }
    Ok(Primitive { rho: rho.clone(), m, poly: QHPoly::new(poly, 2, 1)?, c, orbit_points, has_w, has_z })
}

/// Factorization `P = u · z^α w^β ∏ (w^q − c_j z^p)^{μ_j}` of a
/// quasihomogeneous polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QhFactors {
    /// Constant factor.
    pub unit: Scalar,
    /// Power of `z`.
    pub alpha: u32,
    /// Power of `w`.
    pub beta: u32,
    /// `(c_j, μ_j)`.
    pub primes: Vec<(Scalar, usize)>,
}

impl QhFactors {
    /// Number of prime factors `w^q − c z^p` with multiplicity.
    pub fn n(&self) -> usize {
        self.primes.iter().map(|(_, m)| m).sum()
    }

    /// True iff all multiplicities are one and `α, β ≤ 1`.
    pub fn is_reduced(&self) -> bool {
        self.alpha <= 1 && self.beta <= 1 && self.primes.iter().all(|(_, m)| *m == 1)
    }
}

/// Factor a quasihomogeneous polynomial into `z`, `w` and
/// `w^q − c z^p` primes.
pub fn factor_qh(f: &QHPoly) -> Result<QhFactors, QhError> {
    let (p, q) = (f.p, f.q);
    let alpha = f.poly.min_degree_in(0).unwrap_or(0);
    let beta = f.poly.min_degree_in(1).unwrap_or(0);
    // After removing z^α w^β the rest is a binary form in X = z^p, Y = w^q.
    let mut coeffs: Vec<Scalar> = Vec::new();
    for (e, c) in f.poly.terms() {
        let (k, m) = (e[0] - alpha, e[1] - beta);
        if k % p != 0 || m % q != 0 {
            return Err(QhError::NotQuasihomogeneous(p, q));
        }
        let y = (m / q) as usize;
        if coeffs.len() <= y {
            coeffs.resize(y + 1, Scalar::zero());
        }
        coeffs[y] = c.clone();
    }
    let g = UniPoly::new(coeffs);
    let unit = g.lead();
    let roots = if g.degree().unwrap_or(0) == 0 {
        vec![]
    } else {
        g.roots().map_err(|e| QhError::IrreduciblePrimeOverField(e.to_string()))?
    };
    Ok(QhFactors { unit, alpha, beta, primes: roots })
}

/// Outcome of evaluating both residue formulas on a pair of primitive
/// polynomials `P1`, `P2` with the integral `P1^{m1}/P2^{m2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckReport {
    /// Which degree relation applies: 1 (`θ_ρ` in neither divisor), 2 (in
    /// `χ(P1)`) or 3 (in `χ(P2)`).
    pub case: u8,
    /// `d_i = N_i p + α_i + β_i`.
    pub d1: u32,
    /// See `d1`.
    pub d2: u32,
    /// `ν = m2/m1`.
    pub nu: Scalar,
    /// `ρ₀ = 2(r + 1)/3`.
    pub rho0: Scalar,
    /// `ρ₀ − (d₁ − νd₂) − (r − 1)(β₁ − νβ₂)`.
    pub first_formula: Scalar,
    /// Whether the first formula returns `ρ`.
    pub first_matches: bool,
    /// `d̂ = d₁ + [θ_ρ ∈ χ(P1)]`.
    pub d_hat: u32,
    /// `ρ(d̂ − 2)`.
    pub second_lhs: Scalar,
    /// `2(Np + α + βr − ρ₀)` for `P1`.
    pub second_rhs: Scalar,
    /// Whether the second formula holds.
    pub second_matches: bool,
}

impl CrosscheckReport {
    /// Both formulas agree with `ρ`.
    pub fn holds(&self) -> bool {
        self.first_matches && self.second_matches
    }
}

/// Evaluate both residue formulas for the integral `P1^{m1}/P2^{m2}` of the
/// `(p, q; ρ)`-billiard, after checking primitivity and the degree relation.
pub fn formula_crosscheck(
    p1: &QHPoly,
    p2: &QHPoly,
    m1: i64,
    m2: i64,
    rho: &Scalar,
) -> Result<CrosscheckReport, QhError> {
    if (p1.p, p1.q) != (p2.p, p2.q) {
        return Err(QhError::NotPrimitive("P1 and P2 have different weights".into()));
    }
    if m1 == 0 || m2 == 0 {
        return Err(QhError::RelationViolated("exponents must be nonzero".into()));
    }
    let (p, q) = (p1.p, p1.q);
    let f1 = factor_qh(p1)?;
    let f2 = factor_qh(p2)?;
    for (name, f, poly) in [("P1", &f1, p1), ("P2", &f2, p2)] {
        if !f.is_reduced() || !is_eta_quasi_invariant(poly, rho)? {
            return Err(QhError::NotPrimitive(name.into()));
        }
    }
    if !f1.primes.iter().any(|(c, _)| c.is_one()) {
        return Err(QhError::NotOnCurve);
    }
    let theta = theta_rho(rho);
    let r = p1.r();
    let theta_r = ExtValue(&r - &Scalar::one(), r.clone());
    let in1 = root_divisor(p1)?.contains(&theta);
    let in2 = root_divisor(p2)?.contains(&theta);
    if in1 && in2 {
        return Err(QhError::AmbiguousCase("theta_rho lies in both root divisors".into()));
    }
    if f1.beta == 1 && theta == theta_r {
        return Err(QhError::AmbiguousCase("theta_rho = theta_r on a w factor of P1".into()));
    }
    let d = |f: &QhFactors| f.n() as u32 * p + f.alpha + f.beta;
    let (d1, d2) = (d(&f1), d(&f2));
    let (case, lhs, rhs) = if in1 {
        (2u8, (d1 as i64 + 1) * m1, d2 as i64 * m2)
    } else if in2 {
        (3u8, d1 as i64 * m1, (d2 as i64 + 1) * m2)
    } else {
        (1u8, d1 as i64 * m1, d2 as i64 * m2)
    };
    if lhs != rhs {
        return Err(QhError::RelationViolated(format!("case {case}: {lhs} != {rhs}")));
    }
    let s = |x: u32| Scalar::int(x as i64);
    let nu = Scalar::ratio(m2, m1);
    let rho0 = Scalar::ratio(2, 3) * (&r + &Scalar::one());
    let first = &(&rho0 - &(s(d1) - &nu * &s(d2))) - &((&r - &Scalar::one()) * (s(f1.beta) - &nu * &s(f2.beta)));
    let d_hat = d1 + in1 as u32;
    let second_lhs = rho * &(s(d_hat) - Scalar::int(2));
    let second_rhs =
        Scalar::int(2) * (s(f1.n() as u32 * p) + s(f1.alpha) + &s(f1.beta) * &r - rho0.clone());
    let _ = q;
    Ok(CrosscheckReport {
        case,
        d1,
        d2,
        first_matches: first == *rho,
        first_formula: first,
        nu,
        rho0,
        d_hat,
        second_matches: second_lhs == second_rhs,
        second_lhs,
        second_rhs,
    })
}

/// The ζ-coordinate sign of a rational, used to order divisors in reports.
pub fn is_negative(x: &Scalar) -> bool {
    x.as_rational().is_some_and(|r| r.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qh(terms: &[([u32; 3], i64)]) -> QHPoly {
        QHPoly::new(Poly::from_int_terms(terms), 2, 1).unwrap()
    }

    fn fin(n: i64, d: i64) -> ExtValue {
        ExtValue::finite(Scalar::ratio(n, d))
    }

    #[test]
    fn lower_parts() {
        let f = Poly::from_int_terms(&[([0, 2, 0], 1), ([3, 0, 0], -1), ([4, 0, 0], 1)]);
        assert_eq!(lower_part(&f, 3, 2).unwrap().poly, Poly::from_int_terms(&[([0, 2, 0], 1), ([3, 0, 0], -1)]));
        let g = Poly::from_int_terms(&[([0, 1, 0], 1), ([2, 0, 0], -1)]);
        let f = &g.pow(2) + &Poly::from_int_terms(&[([5, 0, 0], 1)]);
        assert_eq!(lower_part(&f, 2, 1).unwrap().poly, g.pow(2));
        assert_eq!(lower_part(&Poly::zero(), 2, 1), Err(QhError::ZeroPoly));
        assert_eq!(lower_part(&f, 2, 2), Err(QhError::BadWeights(2, 2)));
    }

    #[test]
    fn restrictions() {
        assert_eq!(restriction_r(2, 1, &Scalar::int(-3)), UniPoly::from_ints(&[-1, 2, 3]));
        assert_eq!(restriction_r(2, 1, &Scalar::one()), UniPoly::from_ints(&[-1, 2, -1]));
        let roots = restriction_r(2, 1, &Scalar::int(-3)).roots().unwrap();
        assert!(roots.contains(&(Scalar::int(-1), 1)) && roots.contains(&(Scalar::ratio(1, 3), 1)));
        // Scaling: q^q times the restriction of w^q − c z^p.
        let f = QHPoly::new(Poly::from_int_terms(&[([0, 2, 0], 1), ([3, 0, 0], -5)]), 3, 2).unwrap();
        assert_eq!(restrict_to_tangent(&f).scale(&Scalar::int(4)), restriction_r(3, 2, &Scalar::int(5)));
    }

    #[test]
    fn divisors() {
        let chi = root_divisor(&qh(&[([0, 1, 0], 1), ([2, 0, 0], -1)])).unwrap();
        assert_eq!(chi.roots, vec![(fin(1, 1), 2)]);
        // w(w + 8z²): {1/2, 1/4, −1/2}.
        let chi = root_divisor(&qh(&[([0, 2, 0], 1), ([2, 1, 0], 8)])).unwrap();
        assert_eq!(chi.degree(), 3);
        for x in [fin(1, 2), fin(1, 4), fin(-1, 2)] {
            assert!(chi.contains(&x));
        }
    }

    #[test]
    fn quasi_invariance() {
        let g = qh(&[([0, 1, 0], 1), ([2, 0, 0], -1)]);
        for rho in [Scalar::ratio(4, 3), Scalar::int(3), Scalar::ratio(7, 2)] {
            assert!(is_eta_quasi_invariant(&g, &rho).unwrap());
        }
        // η_{8/3} swaps 1/2 ↔ −1/2 and fixes 1/4.
        let e = eta(&Scalar::ratio(8, 3));
        assert_eq!(e.apply(&fin(1, 2)), fin(-1, 2));
        assert_eq!(e.apply(&fin(1, 4)), fin(1, 4));
        assert!(is_eta_quasi_invariant(&qh(&[([0, 2, 0], 1), ([2, 1, 0], 8)]), &Scalar::ratio(8, 3)).unwrap());
        assert!(!is_eta_quasi_invariant(&qh(&[([1, 1, 0], 1)]), &Scalar::one()).unwrap());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_rho(&Scalar::ratio(13, 6)), RhoClass { in_m: true, m: Some(12) });
        assert_eq!(classify_rho(&Scalar::int(2)), RhoClass { in_m: true, m: None });
        for (rho, m) in [(0, -1), (1, -2), (3, 2), (4, 1)] {
            assert_eq!(classify_rho(&Scalar::int(rho)).m, Some(m));
            assert_eq!(classify_rho_orbit(&Scalar::int(rho)).m, Some(m));
        }
        assert_eq!(classify_rho_orbit(&Scalar::ratio(4, 3)), RhoClass { in_m: true, m: Some(-3) });
        assert!(!classify_rho_orbit(&Scalar::ratio(5, 7)).in_m);
        assert!(!classify_rho(&Scalar::int(5)).in_m);
    }

    #[test]
    fn primitives() {
        let p = build_primitive(&Scalar::ratio(3, 2)).unwrap();
        assert_eq!((p.m, p.c.clone(), p.has_z, p.has_w), (-4, vec![Scalar::int(-3)], true, false));
        let p = build_primitive(&Scalar::ratio(8, 5)).unwrap();
        assert_eq!(p.c, vec![Scalar::ratio(-16, 9), Scalar::int(-24)]);
        let p = build_primitive(&Scalar::ratio(5, 2)).unwrap();
        assert_eq!(p.poly.poly, Poly::from_int_terms(&[([1, 2, 0], 1), ([3, 1, 0], 3)]));
        assert_eq!(build_primitive(&Scalar::int(3)), Err(QhError::RhoInteger("3".into())));
        // c_j = (ζ_j ζ_{m−j})⁻¹ and 1 − c_j = m²/(2j − m)².
        let p = build_primitive(&Scalar::ratio(2 * 7 + 2, 7)).unwrap();
        for (k, (c, zj)) in p.c.iter().zip(&p.orbit_points).enumerate() {
            let j = k as i64 + 1;
            let zmj = Scalar::ratio(2 * (7 - j) - 7, 2 * (7 - j - 7));
            assert_eq!(c.checked_mul(&(zj * &zmj)).unwrap(), Scalar::one());
            assert_eq!(Scalar::one() - c.clone(), Scalar::ratio(49, (2 * j - 7).pow(2)));
        }
    }

    #[test]
    fn factorization() {
        let f = qh(&[([1, 2, 0], 1), ([3, 1, 0], 3)]);
        let fs = factor_qh(&f).unwrap();
        assert_eq!((fs.alpha, fs.beta, fs.primes.clone()), (1, 1, vec![(Scalar::int(-3), 1)]));
    }

    #[test]
    fn crosschecks() {
        let p1 = qh(&[([0, 1, 0], 1), ([2, 0, 0], -1)]);
        let cases: Vec<(Scalar, QHPoly, i64, i64, u8)> = vec![
            (Scalar::int(2), qh(&[([0, 1, 0], 1)]), 1, 1, 3),
            (Scalar::ratio(4, 3), qh(&[([0, 1, 0], 1), ([2, 0, 0], 8)]), 3, 2, 3),
            (Scalar::ratio(3, 2), qh(&[([1, 1, 0], 1), ([3, 0, 0], 3)]), 2, 1, 3),
            (Scalar::ratio(8, 3), qh(&[([0, 2, 0], 1), ([2, 1, 0], 8)]), 3, 2, 1),
            (Scalar::ratio(5, 2), qh(&[([1, 2, 0], 1), ([3, 1, 0], 3)]), 2, 1, 1),
        ];
        for (rho, p2, m1, m2, case) in cases {
            let r = formula_crosscheck(&p1, &p2, m1, m2, &rho).unwrap();
            assert!(r.holds(), "{rho}: {r:?}");
            assert_eq!(r.case, case);
        }
        let bad = formula_crosscheck(&p1, &qh(&[([0, 1, 0], 1)]), 2, 1, &Scalar::int(2));
        assert!(matches!(bad, Err(QhError::RelationViolated(_))));
    }
}
