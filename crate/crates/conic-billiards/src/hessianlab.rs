//! Hessians of plane curve equations and the residue identities they obey.
//!
//! For `G(z, w)` the Hessian is `H(G) = G_zz G_w² − 2 G_zw G_z G_w + G_ww G_z²`.
//! Along a branch `w^q = z^p` of a dual billiard curve, with `G` the
//! appropriate root of a rational first integral, `H(G)` behaves like
//! `c·z^d` and the residue of the singularity is `ρ = −d/3`. Along the conic
//! `{w = z²}` the Hessian satisfies `dH/dz = −3 f H`, with `f` the
//! f-function of the dual billiard structure.

use serde::Serialize;
use thiserror::Error;

use crate::dualbilliard::{f_function, BilliardSpec, DualError};
use crate::exactnum::{precision_bits, NumError, Rational, Real, Scalar};
use crate::integrals::poly::{Poly, UniPoly};
use crate::integrals::{catalog_factors, IntegralError};
use crate::quasihomog::{factor_qh, lower_part, QHPoly, QhError};

/// Errors raised by Hessian computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HessianError {
    /// A sample point does not lie on `{f = 0}`.
    #[error("sample point is not on the curve f = 0")]
    SampleOffCurve,
    /// A fractional power is taken of a non-positive value.
    #[error("branch ambiguity: {0}")]
    BranchAmbiguity(String),
    /// The sampled Hessian is not of the form `c·z^d`.
    #[error("fit failure: {0}")]
    FitFailure(String),
    /// The factored function is not of the supported normalized form.
    #[error("not a normalized factored function: {0}")]
    NotNormalized(String),
    /// A sample lies on a pole of `f` or a zero of `H`.
    #[error("singular sample at z = {0}")]
    SingularSample(String),
    /// The spec has no factored catalog integral.
    #[error("unsupported spec: {0}")]
    UnsupportedSpec(String),
    /// Quasihomogeneous factorization failure.
    #[error(transparent)]
    Qh(#[from] QhError),
    /// Integral catalog failure.
    #[error(transparent)]
    Integral(#[from] IntegralError),
    /// Dual billiard failure.
    #[error(transparent)]
    Dual(#[from] DualError),
    /// Scalar arithmetic failure.
    #[error(transparent)]
    Num(#[from] NumError),
}

const Z: usize = 0;
const W: usize = 1;

fn at(z: &Scalar, w: &Scalar) -> [Scalar; 3] {
    [z.clone(), w.clone(), Scalar::one()]
}

/// The Hessian `G_zz G_w² − 2 G_zw G_z G_w + G_ww G_z²` of a polynomial in
/// `(z, w)`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::hessianlab::hessian_poly;
/// use conic_billiards::integrals::Poly;
/// let g = Poly::from_int_terms(&[([0, 1, 0], 1), ([2, 0, 0], -1)]);
/// assert_eq!(hessian_poly(&g), Poly::constant(Scalar::int(-2)));
/// ```
pub fn hessian_poly(g: &Poly) -> Poly {
    let (gz, gw) = (g.deriv(Z), g.deriv(W));
    let (gzz, gzw, gww) = (gz.deriv(Z), gz.deriv(W), gw.deriv(W));
    let two = Poly::constant(Scalar::int(2));
    &(&(&gzz * &gw.pow(2)) - &(&two * &(&gzw * &(&gz * &gw)))) + &(&gww * &gz.pow(2))
}

/// Check `H(fg) = g³ H(f)` exactly at points `(z, w)` of `{f = 0}`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::hessianlab::hess3_check;
/// use conic_billiards::integrals::Poly;
/// let f = Poly::from_int_terms(&[([0, 1, 0], 1), ([2, 0, 0], -1)]);
/// let pts: Vec<_> = (1..4).map(|t| [Scalar::int(t), Scalar::int(t * t)]).collect();
/// assert!(hess3_check(&f, &Poly::w(), &pts).unwrap());
/// ```
pub fn hess3_check(f: &Poly, g: &Poly, samples: &[[Scalar; 2]]) -> Result<bool, HessianError> {
    let hfg = hessian_poly(&(f * g));
    let hf = hessian_poly(f);
    for [z, w] in samples {
        let x = at(z, w);
        if !f.try_eval(&x)?.is_zero() {
            return Err(HessianError::SampleOffCurve);
        }
        let lhs = hfg.try_eval(&x)?;
        let rhs = g.try_eval(&x)?.pow(3).checked_mul(&hf.try_eval(&x)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The structure of a [`FactoredG`]: `G = (w^q − z^p)·z^α w^β ∏ (w^q − c_j z^p)^{μ_j}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GStructure {
    /// Exponent of `z`.
    pub alpha: Scalar,
    /// Exponent of `w`.
    pub beta: Scalar,
    /// `(c_j, μ_j)` for the primes other than the curve itself.
    pub primes: Vec<(Scalar, Scalar)>,
}

/// A product of rational powers of the quasihomogeneous primes `z`, `w` and
/// `w^q − c z^p`, containing the curve factor `w^q − z^p` to the first power.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactoredG {
    /// Weight exponent `p`.
    pub p: u32,
    /// Weight exponent `q`.
    pub q: u32,
    /// `(prime, exponent)` pairs; primes are monic in `w^q` (or are `z`).
    pub factors: Vec<(Poly, Scalar)>,
}

fn prime(p: u32, q: u32, c: &Scalar) -> Poly {
    &Poly::monomial([0, q, 0], Scalar::one()) - &Poly::monomial([p, 0, 0], c.clone())
}

impl FactoredG {
    /// Validate factors: exponents must be nonzero rationals, primes must be
    /// `z`, `w` or `w^q − c z^p`, and the curve factor must occur with exponent 1.
    pub fn new(p: u32, q: u32, factors: Vec<(Poly, Scalar)>) -> Result<FactoredG, HessianError> {
        let g = FactoredG { p, q, factors };
        g.structure()?;
        Ok(g)
    }

    /// Build from `α`, `β` and `(c_j, μ_j)`.
    ///
    /// ```
    /// use conic_billiards::exactnum::Scalar;
    /// use conic_billiards::hessianlab::FactoredG;
    /// let g = FactoredG::from_parts(2, 1, Scalar::zero(), Scalar::zero(),
    ///     &[(Scalar::int(-8), Scalar::ratio(-2, 3))]).unwrap();
    /// assert_eq!(g.factors.len(), 2);
    /// ```
    pub fn from_parts(
        p: u32,
        q: u32,
        alpha: Scalar,
        beta: Scalar,
        primes: &[(Scalar, Scalar)],
    ) -> Result<FactoredG, HessianError> {
        let mut factors = vec![(prime(p, q, &Scalar::one()), Scalar::one())];
        if !alpha.is_zero() {
            factors.push((Poly::z(), alpha));
        }
        if !beta.is_zero() {
            factors.push((Poly::w(), beta));
        }
        factors.extend(primes.iter().map(|(c, mu)| (prime(p, q, c), mu.clone())));
        FactoredG::new(p, q, factors)
    }

    /// Decompose into `α`, `β` and `(c_j, μ_j)`, validating the form.
    pub fn structure(&self) -> Result<GStructure, HessianError> {
        let (mut alpha, mut beta) = (Scalar::zero(), Scalar::zero());
        let mut primes: Vec<(Scalar, Scalar)> = Vec::new();
        let mut curve = Scalar::zero();
        for (f, e) in &self.factors {
            if e.is_zero() || !e.is_rational() {
                return Err(HessianError::NotNormalized(format!("exponent {e} of {f}")));
            }
            let bad = || HessianError::NotNormalized(format!("factor {f} is not z, w or w^q − c z^p"));
            let fs = factor_qh(&QHPoly::new(f.clone(), self.p, self.q)?)?;
            if !fs.unit.is_one() || fs.alpha + fs.beta + fs.n() as u32 != 1 {
                return Err(bad());
            }
            if fs.alpha == 1 {
                alpha = &alpha + e;
            } else if fs.beta == 1 {
                beta = &beta + e;
            } else if fs.primes[0].0.is_one() {
                curve = &curve + e;
            } else {
                let c = &fs.primes[0].0;
                match primes.iter_mut().find(|(d, _)| d == c) {
                    Some((_, mu)) => *mu = &*mu + e,
                    None => primes.push((c.clone(), e.clone())),
                }
            }
        }
        if !curve.is_one() {
            return Err(HessianError::NotNormalized("the curve factor must have exponent 1".into()));
        }
        primes.retain(|(_, mu)| !mu.is_zero());
        Ok(GStructure { alpha, beta, primes })
    }

    /// True iff every exponent is an integer.
    pub fn has_integer_exponents(&self) -> bool {
        self.factors.iter().all(|(_, e)| e.as_rational().is_some_and(|r| r.is_integer()))
    }
}

/// The asymptotic exponent `d = 3(pN + α + βr − ρ₀)` with `N = 1 + Σμ_j`,
/// `r = p/q` and `ρ₀ = 2(r + 1)/3`.
pub fn closed_form_exponent(p: u32, q: u32, s: &GStructure) -> Scalar {
    let r = Scalar::ratio(p as i64, q as i64);
    let n = s.primes.iter().fold(Scalar::one(), |acc, (_, mu)| &acc + mu);
    let rho0 = Scalar::ratio(2, 3) * (&r + &Scalar::one());
    Scalar::int(3) * (&(&(Scalar::int(p as i64) * n) + &s.alpha) + &(&(&s.beta * &r) - &rho0))
}

/// An exact or approximate value of the constant `c`.
#[derive(Clone, Debug, PartialEq)]
pub enum CValue {
    /// Exact.
    Exact(Scalar),
    /// Approximate (real).
    Approx(Real),
}

impl CValue {
    /// A real float at working precision.
    pub fn to_real(&self, prec: usize) -> Result<Real, NumError> {
        match self {
            CValue::Exact(s) => Real::from_scalar(s, prec),
            CValue::Approx(r) => Ok(r.clone()),
        }
    }
}

impl std::fmt::Display for CValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CValue::Exact(s) => write!(f, "{s}"),
            CValue::Approx(r) => write!(f, "{:.20e}", r.to_f64()),
        }
    }
}

impl Serialize for CValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// How the restriction of `H(G)` to the curve is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HessianPath {
    /// Exact symbolic restriction (integer exponents only).
    Exact,
    /// Sampling at real points on the positive branch.
    Numeric,
}

/// `H(G)` along `(z, w) = (t^q, t^p)`, written as `c·z^d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HessianOnCurve {
    /// Which computation produced `c`.
    pub path: HessianPath,
    /// The constant `c`.
    pub c: CValue,
    /// The exponent `d` (closed form, confirmed by the computation).
    pub d: Scalar,
    /// `qp(q − p)·∏(1 − c_j)^{3μ_j}`.
    pub c_weighted: CValue,
    /// `qp(q − p)·(∏(1 − c_j))³`, without multiplicity weights.
    pub c_literal: CValue,
    /// Whether `c` agrees with the weighted constant.
    pub weighted_matches: bool,
    /// Whether `c` agrees with the literal constant.
    pub literal_matches: bool,
}

/// `x^e` for a positive exact base and rational exponent: exact when
/// possible, else approximate.
fn rational_power(x: &Scalar, e: &Rational, prec: usize) -> Result<CValue, HessianError> {
    if e.is_integer() {
        let k = e.to_integer().try_into().map_err(|_| NumError::NotRepresentable(e.to_string()))?;
        return Ok(CValue::Exact(x.pow(k)));
    }
    let xr = Real::from_scalar(x, prec)?;
    if !(xr > Real::int(0, prec)) {
        return Err(HessianError::BranchAmbiguity(format!("{x} raised to {e}")));
    }
    Ok(CValue::Approx(xr.powf(&Real::from_rational(e, prec))))
}

fn cmul(a: CValue, b: CValue, prec: usize) -> Result<CValue, NumError> {
    Ok(match (a, b) {
        (CValue::Exact(x), CValue::Exact(y)) => CValue::Exact(x.checked_mul(&y)?),
        (a, b) => CValue::Approx(&a.to_real(prec)? * &b.to_real(prec)?),
    })
}

fn close(a: &CValue, b: &CValue, prec: usize, tol: f64) -> Result<bool, NumError> {
    Ok(match (a, b) {
        (CValue::Exact(x), CValue::Exact(y)) => x == y,
        _ => a.to_real(prec)?.rel_diff(&b.to_real(prec)?).to_f64() <= tol,
    })
}

fn closed_form_constants(g: &FactoredG, s: &GStructure, prec: usize) -> Result<(CValue, CValue), HessianError> {
    let (p, q) = (g.p as i64, g.q as i64);
    let base = CValue::Exact(Scalar::int(q * p * (q - p)));
    let mut weighted = base.clone();
    let mut product = Scalar::one();
    for (c, mu) in &s.primes {
        let one_minus = Scalar::one() - c.clone();
        let e = mu.as_rational().expect("validated") * Rational::from_integer(3.into());
        weighted = cmul(weighted, rational_power(&one_minus, &e, prec)?, prec)?;
        product = product.checked_mul(&one_minus)?;
    }
    let literal = cmul(base, CValue::Exact(product.pow(3)), prec)?;
    Ok((weighted, literal))
}

/// Restriction of `H(G)` to `(t^q, t^p)`, as `c·z^d`. Integer exponents use
/// the exact path, fractional ones the numeric path.
pub fn hessian_on_curve(g: &FactoredG) -> Result<HessianOnCurve, HessianError> {
    let path = if g.has_integer_exponents() { HessianPath::Exact } else { HessianPath::Numeric };
    hessian_on_curve_with(g, path)
}

/// [`hessian_on_curve`] with an explicit choice of path.
pub fn hessian_on_curve_with(g: &FactoredG, path: HessianPath) -> Result<HessianOnCurve, HessianError> {
    let s = g.structure()?;
    let d = closed_form_exponent(g.p, g.q, &s);
    let prec = precision_bits();
    let c = match path {
        HessianPath::Exact => exact_constant(g, &d)?,
        HessianPath::Numeric => numeric_constant(g, &d, prec)?,
    };
    let (c_weighted, c_literal) = closed_form_constants(g, &s, prec)?;
    let tol = 1e-20;
    Ok(HessianOnCurve {
        path,
        weighted_matches: close(&c, &c_weighted, prec, tol)?,
        literal_matches: close(&c, &c_literal, prec, tol)?,
        c,
        d,
        c_weighted,
        c_literal,
    })
}

/// Split a Laurent monomial `a·t^k` off a univariate polynomial.
fn monomial_of(u: &UniPoly) -> Option<(Scalar, usize)> {
    let nz: Vec<usize> = (0..u.coeffs().len()).filter(|&k| !u.coeff(k).is_zero()).collect();
    (nz.len() == 1).then(|| (u.coeff(nz[0]), nz[0]))
}

/// Exact path: `G = N/D`; with `P_x = N_x D − N D_x` and `S_xy` the
/// numerators of the second derivatives over `D³`, the Hessian is
/// `(S_zz P_w² − 2 S_zw P_z P_w + S_ww P_z²)/D⁷`. Every piece is restricted
/// to `(t^q, t^p)` first and combined as polynomials in `t`.
fn exact_constant(g: &FactoredG, d: &Scalar) -> Result<CValue, HessianError> {
    let (mut n, mut dd) = (Poly::one(), Poly::one());
    for (f, e) in &g.factors {
        let k = e.as_rational().expect("validated").to_integer();
        let k: i64 = k.try_into().map_err(|_| NumError::NotRepresentable(e.to_string()))?;
        if k > 0 {
            n = &n * &f.pow(k as u32);
        } else {
            dd = &dd * &f.pow((-k) as u32);
        }
    }
    let tq = UniPoly::monomial(g.q as usize);
    let tp = UniPoly::monomial(g.p as usize);
    let on = |f: &Poly| f.substitute_uni(&[tq.clone(), tp.clone(), UniPoly::one()]);
    let jet = |f: &Poly| {
        let (fz, fw) = (f.deriv(Z), f.deriv(W));
        [on(f), on(&fz), on(&fw), on(&fz.deriv(Z)), on(&fz.deriv(W)), on(&fw.deriv(W))]
    };
    let [n0, nz, nw, nzz, nzw, nww] = jet(&n);
    let [d0, dz, dw, dzz, dzw, dww] = jet(&dd);
    let two = UniPoly::constant(Scalar::int(2));
    let pz = &(&nz * &d0) - &(&n0 * &dz);
    let pw = &(&nw * &d0) - &(&n0 * &dw);
    // ∂_y(P_x/D²) = ((N_xy D + N_x D_y − N_y D_x − N D_xy) D − 2 D_y P_x)/D³.
    let second = |nxy: &UniPoly, nx: &UniPoly, ny: &UniPoly, dx: &UniPoly, dy: &UniPoly, dxy: &UniPoly, px: &UniPoly| {
        let inner = &(&(&(nxy * &d0) + &(nx * dy)) - &(ny * dx)) - &(&n0 * dxy);
        &(&inner * &d0) - &(&two * &(dy * px))
    };
    let szz = second(&nzz, &nz, &nz, &dz, &dz, &dzz, &pz);
    let szw = second(&nzw, &nz, &nw, &dz, &dw, &dzw, &pz);
    let sww = second(&nww, &nw, &nw, &dw, &dw, &dww, &pw);
    let num = &(&(&szz * &pw.pow(2)) - &(&two * &(&szw * &(&pz * &pw)))) + &(&sww * &pz.pow(2));
    let den = d0.pow(7);
    let fail = |what: &str| HessianError::FitFailure(format!("{what} is not a monomial in t"));
    let (a, ka) = monomial_of(&num).ok_or_else(|| fail("restricted numerator"))?;
    let (b, kb) = monomial_of(&den).ok_or_else(|| fail("restricted denominator"))?;
    let fitted = Scalar::ratio(ka as i64 - kb as i64, g.q as i64);
    if fitted != *d {
        return Err(HessianError::FitFailure(format!("exponent {fitted} differs from closed form {d}")));
    }
    Ok(CValue::Exact(a.checked_div(&b)?))
}

/// Values and first and second partial derivatives of a function at a point.
#[derive(Clone, Debug)]
struct Jet {
    v: Real,
    z: Real,
    w: Real,
    zz: Real,
    zw: Real,
    ww: Real,
}

impl Jet {
    fn of_poly(f: &Poly, z: &Real, w: &Real) -> Result<Jet, NumError> {
        let (fz, fw) = (f.deriv(Z), f.deriv(W));
        Ok(Jet {
            v: eval_real(f, z, w)?,
            z: eval_real(&fz, z, w)?,
            w: eval_real(&fw, z, w)?,
            zz: eval_real(&fz.deriv(Z), z, w)?,
            zw: eval_real(&fz.deriv(W), z, w)?,
            ww: eval_real(&fw.deriv(W), z, w)?,
        })
    }

    /// Jet of `f^e` on the real branch; `f^1` is taken literally so the
    /// curve factor may vanish.
    fn power(self, e: &Rational, prec: usize) -> Result<Jet, HessianError> {
        if *e == Rational::from_integer(1.into()) {
            return Ok(self);
        }
        if self.v.is_zero() {
            return Err(HessianError::BranchAmbiguity("power of a vanishing factor".into()));
        }
        let er = Real::from_rational(e, prec);
        let u = if e.is_integer() {
            let k: i64 = e.to_integer().try_into().map_err(|_| NumError::NotRepresentable(e.to_string()))?;
            let m = self.v.abs().powf(&er);
            if self.v.is_negative() && k % 2 != 0 {
                -m
            } else {
                m
            }
        } else if self.v.is_negative() {
            return Err(HessianError::BranchAmbiguity("fractional power of a negative value".into()));
        } else {
            self.v.powf(&er)
        };
        let one = Real::int(1, prec);
        let (lz, lw) = (&self.z / &self.v, &self.w / &self.v);
        let em1 = &er - &one;
        let eu = &er * &u;
        let second = |fxy: &Real, lx: &Real, ly: &Real| &eu * &(&(&em1 * &(lx * ly)) + &(fxy / &self.v));
        Ok(Jet {
            zz: second(&self.zz, &lz, &lz),
            zw: second(&self.zw, &lz, &lw),
            ww: second(&self.ww, &lw, &lw),
            z: &eu * &lz,
            w: &eu * &lw,
            v: u,
        })
    }

    fn mul(&self, o: &Jet) -> Jet {
        let two = Real::int(2, self.v.precision());
        Jet {
            v: &self.v * &o.v,
            z: &(&self.z * &o.v) + &(&self.v * &o.z),
            w: &(&self.w * &o.v) + &(&self.v * &o.w),
            zz: &(&(&self.zz * &o.v) + &(&two * &(&self.z * &o.z))) + &(&self.v * &o.zz),
            zw: &(&(&(&self.zw * &o.v) + &(&self.z * &o.w)) + &(&self.w * &o.z)) + &(&self.v * &o.zw),
            ww: &(&(&self.ww * &o.v) + &(&two * &(&self.w * &o.w))) + &(&self.v * &o.ww),
        }
    }

    fn hessian(&self) -> Real {
        let two = Real::int(2, self.v.precision());
        &(&(&self.zz * &(&self.w * &self.w)) - &(&two * &(&self.zw * &(&self.z * &self.w))))
            + &(&self.ww * &(&self.z * &self.z))
    }
}

/// Evaluate a polynomial with real coefficients at a real point (`t = 1`).
fn eval_real(f: &Poly, z: &Real, w: &Real) -> Result<Real, NumError> {
    let prec = z.precision();
    let mut acc = Real::int(0, prec);
    for (e, c) in f.terms() {
        let term = &(&Real::from_scalar(c, prec)? * &z.powi(e[0] as usize)) * &w.powi(e[1] as usize);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Numeric value of `H(G)` at a real point, by multiplying the second-order
/// jets of the factors.
fn hessian_at(factors: &[(Poly, Scalar)], z: &Real, w: &Real) -> Result<Real, HessianError> {
    let prec = z.precision();
    let mut acc: Option<Jet> = None;
    for (f, e) in factors {
        let e = e.as_rational().ok_or(NumError::NotReal)?;
        let j = Jet::of_poly(f, z, w)?.power(e, prec)?;
        acc = Some(match acc {
            None => j,
            Some(a) => a.mul(&j),
        });
    }
    Ok(acc.map_or(Real::int(0, prec), |j| j.hessian()))
}

/// Numeric path: sample `H(G)` at `t ∈ {1/2, 1/3, 1/5, 1/7}`, check that the
/// exponent between every pair of samples equals `d` and that `H/z^d` is
/// constant, both to relative `1e−20`.
fn numeric_constant(g: &FactoredG, d: &Scalar, prec: usize) -> Result<CValue, HessianError> {
    let tol = 1e-20;
    let dr = Real::from_scalar(d, prec)?;
    let mut samples: Vec<(Real, Real)> = Vec::new();
    for den in [2, 3, 5, 7] {
        let t = Real::from_rational(&Rational::new(1.into(), den.into()), prec);
        let (z, w) = (t.powi(g.q as usize), t.powi(g.p as usize));
        let h = hessian_at(&g.factors, &z, &w)?;
        if h.is_zero() {
            return Err(HessianError::FitFailure("Hessian vanishes at a sample".into()));
        }
        samples.push((z, h));
    }
    let (z0, h0) = &samples[0];
    for (z, h) in &samples[1..] {
        if h.is_negative() != h0.is_negative() {
            return Err(HessianError::FitFailure("sign changes between samples".into()));
        }
        let fitted = (h.abs() / h0.abs()).ln() / (z / z0).ln();
        let err = if d.is_zero() { fitted.abs() } else { fitted.rel_diff(&dr) };
        if err.to_f64() > tol {
            return Err(HessianError::FitFailure(format!("fitted exponent {} differs from {d}", fitted.to_f64())));
        }
    }
    let cs: Vec<Real> = samples.iter().map(|(z, h)| h / &z.powf(&dr)).collect();
    if cs.iter().any(|c| c.rel_diff(&cs[0]).to_f64() > tol) {
        return Err(HessianError::FitFailure("H/z^d is not constant across samples".into()));
    }
    Ok(CValue::Approx(cs[0].clone()))
}

/// `ρ = −d/3`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::hessianlab::residue_from_hessian;
/// assert_eq!(residue_from_hessian(&Scalar::int(-4)), Scalar::ratio(4, 3));
/// ```
pub fn residue_from_hessian(d: &Scalar) -> Scalar {
    -(d / &Scalar::int(3))
}

/// The local model at the origin `(0, 0)` of a catalog spec: the lower
/// `(2,1)`-parts of the factors of its affine integral, with exponents
/// divided by that of `w − z²` so the curve factor has exponent 1. Factors
/// not vanishing at the origin and constant units are dropped.
///
/// ```
/// use conic_billiards::dualbilliard::BilliardSpec;
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::hessianlab::{hessian_on_curve, origin_model, residue_from_hessian};
/// let g = origin_model(&BilliardSpec::C2).unwrap();
/// let h = hessian_on_curve(&g).unwrap();
/// assert_eq!(residue_from_hessian(&h.d), Scalar::ratio(4, 3));
/// ```
pub fn origin_model(spec: &BilliardSpec) -> Result<FactoredG, HessianError> {
    let affine = catalog_factors(spec)?.dehomogenize();
    let (mut alpha, mut beta) = (Scalar::zero(), Scalar::zero());
    let mut primes: Vec<(Scalar, Scalar)> = Vec::new();
    let mut curve = Scalar::zero();
    for (f, e) in &affine.factors {
        if !f.coeff(&[0, 0, 0]).is_zero() {
            continue;
        }
        let fs = factor_qh(&lower_part(f, 2, 1)?)?;
        let e = Scalar::int(*e);
        alpha = &alpha + &(Scalar::int(fs.alpha as i64) * e.clone());
        beta = &beta + &(Scalar::int(fs.beta as i64) * e.clone());
        for (c, mu) in fs.primes {
            let k = Scalar::int(mu as i64) * e.clone();
            if c.is_one() {
                curve = &curve + &k;
            } else {
                match primes.iter_mut().find(|(d, _)| *d == c) {
                    Some((_, m)) => *m = &*m + &k,
                    None => primes.push((c, k)),
                }
            }
        }
    }
    if curve.is_zero() {
        return Err(HessianError::NotNormalized("integral does not vanish on the conic".into()));
    }
    let scale = |x: &Scalar| x.checked_div(&curve);
    let primes: Vec<(Scalar, Scalar)> =
        primes.iter().map(|(c, mu)| Ok((c.clone(), scale(mu)?))).collect::<Result<_, NumError>>()?;
    FactoredG::from_parts(2, 1, scale(&alpha)?, scale(&beta)?, &primes)
}

/// One sample of [`ode_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdeSample {
    /// The point `z₀` on the conic `(z₀, z₀²)`.
    pub z0: f64,
    /// `dH/dz` by central difference.
    pub lhs: f64,
    /// `−3 f(z₀) H(z₀)`.
    pub rhs: f64,
    /// Relative error.
    pub rel_err: f64,
}

/// Result of [`ode_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdeReport {
    /// The spec checked.
    pub spec: String,
    /// Per-sample values.
    pub samples: Vec<OdeSample>,
    /// Relative tolerance applied.
    pub tolerance: f64,
    /// True iff every sample is within tolerance.
    pub passed: bool,
}

/// The factors of `R^{1/m}` in the affine chart, where `R` is the catalog
/// integral of the spec and `m` the exponent of `w − z²` in it. Constants
/// are dropped.
pub fn normalized_integral_factors(spec: &BilliardSpec) -> Result<Vec<(Poly, Scalar)>, HessianError> {
    if matches!(spec, BilliardSpec::Pencil(_) | BilliardSpec::Custom { .. }) {
        return Err(HessianError::UnsupportedSpec(spec.to_string()));
    }
    let affine = catalog_factors(spec)?.dehomogenize();
    let gamma = Poly::from_int_terms(&[([0, 1, 0], 1), ([2, 0, 0], -1)]);
    let m = affine
        .factors
        .iter()
        .find(|(f, _)| *f == gamma)
        .map(|(_, e)| *e)
        .ok_or_else(|| HessianError::NotNormalized("no w − z² factor".into()))?;
    Ok(affine.factors.iter().map(|(f, e)| (f.clone(), Scalar::ratio(*e, m))).collect())
}

/// Check `dH/dz = −3 f(z) H` along `{w = z²}` at `z₀ = 2, …, 17`, with
/// `H = H(R^{1/m})`, by central differences with step `10⁻⁸` at the working
/// precision, to relative tolerance `10⁻⁶`. Factors with negative values are
/// raised in absolute value, which changes `H` by a constant sign only.
pub fn ode_check(spec: &BilliardSpec) -> Result<OdeReport, HessianError> {
    let factors = normalized_integral_factors(spec)?;
    let prec = precision_bits();
    let f = f_function(spec)?;
    let delta = Real::from_rational(&Rational::new(1.into(), 100_000_000.into()), prec);
    let two = Real::int(2, prec);
    let tolerance = 1e-6;
    let h_on_conic = |z: &Real| hessian_at_abs(&factors, z, &(z * z));
    let mut samples = Vec::new();
    for k in 2..18i64 {
        let z0s = Scalar::int(k);
        let fz = f.eval(&z0s).ok_or_else(|| HessianError::SingularSample(k.to_string()))?;
        let z0 = Real::int(k, prec);
        let h = h_on_conic(&z0)?;
        if h.is_zero() {
            return Err(HessianError::SingularSample(k.to_string()));
        }
        let lhs = &(&h_on_conic(&(&z0 + &delta))? - &h_on_conic(&(&z0 - &delta))?) / &(&two * &delta);
        let rhs = &(&Real::int(-3, prec) * &Real::from_scalar(&fz, prec)?) * &h;
        let rel_err = lhs.rel_diff(&rhs).to_f64();
        samples.push(OdeSample { z0: k as f64, lhs: lhs.to_f64(), rhs: rhs.to_f64(), rel_err });
    }
    let passed = samples.iter().all(|s| s.rel_err <= tolerance);
    Ok(OdeReport { spec: spec.to_string(), samples, tolerance, passed })
}

/// [`hessian_at`] with every factor replaced by its absolute value.
fn hessian_at_abs(factors: &[(Poly, Scalar)], z: &Real, w: &Real) -> Result<Real, HessianError> {
    let prec = z.precision();
    let mut acc: Option<Jet> = None;
    for (f, e) in factors {
        let e = e.as_rational().ok_or(NumError::NotReal)?;
        let mut j = Jet::of_poly(f, z, w)?;
        if j.v.is_negative() {
            j = Jet { v: -j.v, z: -j.z, w: -j.w, zz: -j.zz, zw: -j.zw, ww: -j.ww };
        }
        let j = j.power(e, prec)?;
        acc = Some(match acc {
            None => j,
            Some(a) => a.mul(&j),
        });
    }
    Ok(acc.map_or(Real::int(0, prec), |j| j.hessian()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualbilliard::{residue_report, Parity};

    fn poly(terms: &[([u32; 3], i64)]) -> Poly {
        Poly::from_int_terms(terms)
    }

    #[test]
    fn hessian_of_power_difference() {
        for (p, q) in [(2u32, 1u32), (3, 2), (5, 3), (4, 1)] {
            let g = &Poly::monomial([0, q, 0], Scalar::one()) - &Poly::monomial([p, 0, 0], Scalar::one());
            let (p, q) = (p as i64, q as i64);
            let mut want = Poly::zero();
            if q >= 2 {
                want = Poly::monomial([2 * (p as u32 - 1), q as u32 - 2, 0], Scalar::int(q * (q - 1) * p * p));
            }
            if p >= 2 {
                want = &want
                    - &Poly::monomial([p as u32 - 2, 2 * (q as u32 - 1), 0], Scalar::int(p * (p - 1) * q * q));
            }
            assert_eq!(hessian_poly(&g), want, "p={p} q={q}");
        }
    }

    #[test]
    fn hessian_is_cubic_in_scaling() {
        let g = poly(&[([0, 1, 0], 1), ([2, 0, 0], -1), ([1, 1, 0], 3)]);
        let l = Scalar::ratio(-5, 2);
        assert_eq!(hessian_poly(&g.scale(&l)), hessian_poly(&g).scale(&l.pow(3)));
    }

    #[test]
    fn product_rule_on_cusp() {
        let f = poly(&[([0, 2, 0], 1), ([3, 0, 0], -1)]);
        let g = poly(&[([1, 0, 0], 1), ([0, 0, 0], 1)]);
        let pts: Vec<[Scalar; 2]> = (1..6).map(|t| [Scalar::int(t * t), Scalar::int(t * t * t)]).collect();
        assert!(hess3_check(&f, &g, &pts).unwrap());
        assert_eq!(hess3_check(&f, &g, &[[Scalar::one(), Scalar::int(2)]]), Err(HessianError::SampleOffCurve));
    }

    #[test]
    fn regular_conic() {
        let g = FactoredG::from_parts(2, 1, Scalar::zero(), Scalar::zero(), &[]).unwrap();
        let h = hessian_on_curve(&g).unwrap();
        assert_eq!((h.c.clone(), h.d.clone()), (CValue::Exact(Scalar::int(-2)), Scalar::zero()));
        assert!(h.weighted_matches && h.literal_matches);
    }

    #[test]
    fn fractional_models() {
        let g = FactoredG::from_parts(2, 1, Scalar::zero(), Scalar::zero(), &[(Scalar::int(-8), Scalar::ratio(-2, 3))])
            .unwrap();
        let h = hessian_on_curve(&g).unwrap();
        assert_eq!((h.path, h.d.clone()), (HessianPath::Numeric, Scalar::int(-4)));
        // c = −2·9^{−2}: exact weighted form.
        assert_eq!(h.c_weighted, CValue::Exact(Scalar::ratio(-2, 81)));
        assert!(h.weighted_matches);
        let g = FactoredG::from_parts(
            2,
            1,
            Scalar::ratio(-1, 2),
            Scalar::zero(),
            &[(Scalar::int(-3), Scalar::ratio(-1, 2))],
        )
        .unwrap();
        let h = hessian_on_curve(&g).unwrap();
        assert_eq!(residue_from_hessian(&h.d), Scalar::ratio(3, 2));
        assert!(h.weighted_matches);
    }

    #[test]
    fn exact_and_numeric_paths_agree() {
        let g = FactoredG::from_parts(
            2,
            1,
            Scalar::int(-1),
            Scalar::zero(),
            &[(Scalar::int(-3), Scalar::int(-1))],
        )
        .unwrap();
        let e = hessian_on_curve_with(&g, HessianPath::Exact).unwrap();
        let n = hessian_on_curve_with(&g, HessianPath::Numeric).unwrap();
        let prec = precision_bits();
        let diff = e.c.to_real(prec).unwrap().rel_diff(&n.c.to_real(prec).unwrap()).to_f64();
        assert!(diff <= 1e-18, "{diff}");
        assert!(e.weighted_matches && n.weighted_matches);
        let g = FactoredG::from_parts(3, 2, Scalar::zero(), Scalar::one(), &[]).unwrap();
        let e = hessian_on_curve_with(&g, HessianPath::Exact).unwrap();
        assert_eq!(e.c, CValue::Exact(Scalar::int(-6)));
    }

    #[test]
    fn origin_residues_match_f_residues() {
        let cases = [
            (BilliardSpec::B1, Scalar::ratio(3, 2)),
            (BilliardSpec::C2, Scalar::ratio(4, 3)),
            (BilliardSpec::D, Scalar::ratio(4, 3)),
            (BilliardSpec::exotic(Parity::Odd, 2).unwrap(), Scalar::ratio(8, 5)),
            (BilliardSpec::exotic(Parity::Even, 2).unwrap(), Scalar::ratio(5, 3)),
        ];
        for (spec, rho) in cases {
            let h = hessian_on_curve(&origin_model(&spec).unwrap()).unwrap();
            assert_eq!(residue_from_hessian(&h.d), rho, "{spec}");
            let report = residue_report(&spec).unwrap();
            let at_origin = report.finite_poles.iter().find(|(z, _)| z.is_zero()).unwrap();
            assert_eq!(at_origin.1, rho);
        }
    }

    #[test]
    fn ode_along_conic() {
        for spec in [BilliardSpec::B1, BilliardSpec::D, BilliardSpec::C1, BilliardSpec::exotic(Parity::Odd, 1).unwrap()] {
            let r = ode_check(&spec).unwrap();
            assert!(r.passed, "{spec}: {:?}", r.samples.iter().map(|s| s.rel_err).collect::<Vec<_>>());
        }
    }
}
