//! Dual billiard structures on the conic `γ = {w = z²}`: the catalog of
//! rationally integrable structures, the involutions `σ_P`, their
//! f-functions, residues, and reconstruction from prescribed residues.
//!
//! Away from its singular points every structure on `γ` has the form
//! `σ_P : u ↦ −u/(1 + f(z₀)u)` in the coordinate `u = z − z₀` on the tangent
//! line at `P = (z₀, z₀²)`, for a rational function `f` with simple poles.
//! The residues of `f` (with the point at infinity contributing `4 − λ`,
//! where `f ~ λ/z`) always sum to 4.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conicpencil::{pencil_involution, Conic, ConicError, Pencil};
use crate::exactnum::{NumError, Scalar};
use crate::integrals::poly::{RatFn, UniPoly};
use crate::projcore::{Chart, HomPoint, MobiusMap, ProjError};

/// Errors raised by dual billiard operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualError {
    /// The operation needs an f-function but the spec is a pencil.
    #[error("pencil specs have no stored f-function")]
    PencilSpec,
    /// `P` is a singular point of the structure.
    #[error("P is a singular point of the structure (z = {0})")]
    SingularPoint(String),
    /// `P` is the point at infinity of the conic.
    #[error("P is the point at infinity; the u-chart is undefined there")]
    InfinitePoint,
    /// `P` does not lie on the conic `w = z²`.
    #[error("P is not on the conic w = z^2")]
    NotOnConic,
    /// The f-function has a pole of order ≥ 2.
    #[error("f has a pole of order {order} at {at}")]
    HigherOrderPole {
        /// Location of the pole.
        at: String,
        /// Its order.
        order: usize,
    },
    /// The f-function does not decay at infinity.
    #[error("f does not decay at infinity")]
    NonDecaying,
    /// Prescribed residues do not sum to 4.
    #[error("residues sum to {0}, not 4")]
    ResidueSumNotFour(String),
    /// A pole location was listed twice.
    #[error("duplicate pole location {0}")]
    DuplicateLocation(String),
    /// A prescribed residue is zero.
    #[error("zero residue at {0}")]
    ZeroResidue(String),
    /// The parameter `N` of an exotic spec must be ≥ 1.
    #[error("N must be at least 1")]
    InvalidN,
    /// Pencil computation failed.
    #[error(transparent)]
    Conic(#[from] ConicError),
    /// Projective primitive failure.
    #[error(transparent)]
    Proj(#[from] ProjError),
    /// Scalar arithmetic failure.
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Parity of an exotic structure of type 2a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// `ρ = 2 − 2/(2N+1)`.
    Odd,
    /// `ρ = 2 − 1/(N+1)`.
    Even,
}

/// A dual billiard structure on `γ = {w = z²}` (chart `t = 1`).
#[derive(Clone, Debug, PartialEq)]
pub enum BilliardSpec {
    /// Type 2b1: singularities at `0`, `1`, `∞` with residues `3/2, 1, 3/2`.
    B1,
    /// Type 2b2: singularities at `±i`, `∞` with residues `3/2, 3/2, 1`.
    B2,
    /// Type 2c1: singularities at the cube roots of unity, residue `4/3` each.
    C1,
    /// Type 2c2: singularities at `0`, `1`, `∞`, residue `4/3` each.
    C2,
    /// Type 2d: singularities at `0`, `1`, `∞` with residues `4/3, 1, 5/3`.
    D,
    /// Type 2a: the quasihomogeneous structure with residue `ρ` at the origin
    /// and `4 − ρ` at infinity, for the exotic values of `ρ`.
    ExoticA {
        /// Which residue family.
        parity: Parity,
        /// The family index `N ≥ 1`.
        n: u32,
    },
    /// The quasihomogeneous structure `σ_P = η_ρ` (in the ζ-chart) for an
    /// arbitrary residue `ρ` at the origin.
    Model {
        /// Residue at the origin.
        rho: Scalar,
    },
    /// The structure induced by a pencil of conics containing `γ`.
    Pencil(Pencil),
    /// A structure given by its f-function; integrability is not asserted.
    Custom {
        /// The f-function.
        f: RatFn,
        /// Whether invariance of some integral has been checked.
        integrability_verified: bool,
    },
}

impl BilliardSpec {
    /// The exotic spec of the given parity and index.
    pub fn exotic(parity: Parity, n: u32) -> Result<BilliardSpec, DualError> {
        if n == 0 {
            return Err(DualError::InvalidN);
        }
        Ok(BilliardSpec::ExoticA { parity, n })
    }

    /// The quasihomogeneous structure with residue `ρ` at the origin,
    /// represented as [`BilliardSpec::ExoticA`] when `ρ` is an exotic value.
    pub fn model(rho: Scalar) -> BilliardSpec {
        exotic_from_rho(&rho).unwrap_or(BilliardSpec::Model { rho })
    }

    /// The pencil spec with carrier `γ`.
    pub fn pencil(a: Conic) -> Result<BilliardSpec, DualError> {
        Ok(BilliardSpec::Pencil(Pencil::new(a, Conic::standard())?))
    }

    /// The five sporadic catalog entries followed by the exotic families for
    /// `N = 1..=max_n`.
    pub fn catalog(max_n: u32) -> Vec<BilliardSpec> {
        let mut out = vec![BilliardSpec::B1, BilliardSpec::B2, BilliardSpec::C1, BilliardSpec::C2, BilliardSpec::D];
        for n in 1..=max_n {
            out.push(BilliardSpec::ExoticA { parity: Parity::Odd, n });
            out.push(BilliardSpec::ExoticA { parity: Parity::Even, n });
        }
        out
    }

    /// Residue at the origin for quasihomogeneous specs.
    pub fn rho(&self) -> Option<Scalar> {
        match self {
            BilliardSpec::ExoticA { parity, n } => Some(exotic_rho(*parity, *n)),
            BilliardSpec::Model { rho } => Some(rho.clone()),
            _ => None,
        }
    }

    /// Short lowercase tag used in JSON and reports.
    pub fn kind(&self) -> &'static str {
        match self {
            BilliardSpec::B1 => "b1",
            BilliardSpec::B2 => "b2",
            BilliardSpec::C1 => "c1",
            BilliardSpec::C2 => "c2",
            BilliardSpec::D => "d",
            BilliardSpec::ExoticA { .. } => "a",
            BilliardSpec::Model { .. } => "model",
            BilliardSpec::Pencil(_) => "pencil",
            BilliardSpec::Custom { .. } => "custom",
        }
    }
}

impl fmt::Display for BilliardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BilliardSpec::ExoticA { parity, n } => {
                let p = match parity {
                    Parity::Odd => "odd",
                    Parity::Even => "even",
                };
                write!(f, "a-{p}-N{n} (rho = {})", exotic_rho(*parity, *n))
            }
            BilliardSpec::Model { rho } => write!(f, "model (rho = {rho})"),
            other => f.write_str(other.kind()),
        }
    }
}

/// `ρ` of an exotic structure: `2 − 2/(2N+1)` (odd) or `2 − 1/(N+1)` (even).
pub fn exotic_rho(parity: Parity, n: u32) -> Scalar {
    let n = n as i64;
    match parity {
        Parity::Odd => Scalar::int(2) - Scalar::ratio(2, 2 * n + 1),
        Parity::Even => Scalar::int(2) - Scalar::ratio(1, n + 1),
    }
}

/// The exotic spec with residue `ρ` at the origin, if any.
pub fn exotic_from_rho(rho: &Scalar) -> Option<BilliardSpec> {
    use num_traits::{Inv, Signed, ToPrimitive};
    let gap = (&Scalar::int(2) - rho).as_rational()?.clone();
    if !gap.is_positive() {
        return None;
    }
    let inv = gap.inv();
    if inv.is_integer() {
        // 2 − ρ = 1/(N+1).
        let k = inv.to_integer().to_i64()?;
        return (k >= 2).then(|| BilliardSpec::ExoticA { parity: Parity::Even, n: (k - 1) as u32 });
    }
    // 2 − ρ = 2/(2N+1).
    let twice = inv * num_rational::BigRational::from_integer(2.into());
    let k = twice.is_integer().then(|| twice.to_integer().to_i64()).flatten()?;
    (k >= 3 && k % 2 == 1).then(|| BilliardSpec::ExoticA { parity: Parity::Odd, n: ((k - 1) / 2) as u32 })
}

fn z_minus(a: &Scalar) -> UniPoly {
    UniPoly::linear(Scalar::one(), -a)
}

/// The f-function of a non-pencil spec, with `σ_P : u ↦ −u/(1 + f(z₀)u)`.
///
/// ```
/// use conic_billiards::dualbilliard::{f_function, BilliardSpec};
/// use conic_billiards::exactnum::Scalar;
/// let f = f_function(&BilliardSpec::C1).unwrap();
/// assert_eq!(f.eval(&Scalar::int(2)), Some(Scalar::ratio(16, 7)));
/// ```
pub fn f_function(spec: &BilliardSpec) -> Result<RatFn, DualError> {
    let i = UniPoly::from_ints;
    Ok(match spec {
        BilliardSpec::B1 => RatFn::new(i(&[-3, 5]), i(&[0, -2, 2])),
        BilliardSpec::B2 => RatFn::new(i(&[0, 3]), i(&[1, 0, 1])),
        BilliardSpec::C1 => RatFn::new(i(&[0, 0, 4]), i(&[-1, 0, 0, 1])),
        BilliardSpec::C2 => RatFn::new(i(&[-4, 8]), i(&[0, -3, 3])),
        BilliardSpec::D => RatFn::new(i(&[-4, 7]), i(&[0, -3, 3])),
        BilliardSpec::ExoticA { .. } | BilliardSpec::Model { .. } => {
            RatFn::new(UniPoly::constant(spec.rho().expect("quasihomogeneous spec")), UniPoly::x())
        }
        BilliardSpec::Custom { f, .. } => f.clone(),
        BilliardSpec::Pencil(_) => return Err(DualError::PencilSpec),
    })
}

/// The z-coordinate of a point of `γ = {w = z²}` (`InfinitePoint` at `(0:1:0)`).
pub fn conic_z(p: &HomPoint) -> Result<Scalar, DualError> {
    let (z, w) = p.to_affine().ok_or(DualError::InfinitePoint)?;
    if &z * &z != w {
        return Err(DualError::NotOnConic);
    }
    Ok(z)
}

/// The point `(z, z²)` of `γ`.
pub fn conic_point(z: &Scalar) -> HomPoint {
    HomPoint::new([z.clone(), z * z, Scalar::one()]).expect("affine point")
}

/// The involution `σ_P` on the tangent line at `P = (z₀, z₀²)`, in the chart
/// `u = z − z₀`.
///
/// ```
/// use conic_billiards::dualbilliard::{conic_point, sigma_at, BilliardSpec};
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::projcore::ExtValue;
/// let s = sigma_at(&BilliardSpec::B1, &conic_point(&Scalar::int(2))).unwrap();
/// assert_eq!(s.apply_finite(&Scalar::int(4)), ExtValue::finite(Scalar::ratio(-1, 2)));
/// ```
pub fn sigma_at(spec: &BilliardSpec, p: &HomPoint) -> Result<MobiusMap, DualError> {
    let z0 = conic_z(p)?;
    if let BilliardSpec::Pencil(pencil) = spec {
        return Ok(pencil_involution(pencil, p)?);
    }
    let f = f_function(spec)?;
    let fz = f.eval(&z0).ok_or_else(|| DualError::SingularPoint(z0.to_string()))?;
    Ok(MobiusMap::new(
        [[Scalar::int(-1), Scalar::zero()], [fz, Scalar::one()]],
        Chart::Tangent { z0 },
    )?)
}

/// Residues of a structure at its singular points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    /// `(z-location, residue)` of the finite singular points.
    pub finite_poles: Vec<(Scalar, Scalar)>,
    /// Residue at the point at infinity of `γ` (0 when regular there).
    pub infinity_residue: Scalar,
    /// Sum of all residues (always 4).
    pub total: Scalar,
}

impl ResidueReport {
    /// All residues including the one at infinity when nonzero, in report order.
    pub fn configuration(&self) -> Vec<Scalar> {
        let mut v: Vec<Scalar> = self.finite_poles.iter().map(|(_, r)| r.clone()).collect();
        if !self.infinity_residue.is_zero() {
            v.push(self.infinity_residue.clone());
        }
        v
    }

    /// The report as a JSON object with exact strings:
    /// `{"poles": {loc: res, ...}, "infinity": res, "total": res}`.
    pub fn to_json(&self) -> serde_json::Value {
        let poles: serde_json::Map<String, serde_json::Value> = self
            .finite_poles
            .iter()
            .map(|(a, r)| (a.to_string(), serde_json::Value::String(r.to_string())))
            .collect();
        serde_json::json!({
            "poles": poles,
            "infinity": self.infinity_residue.to_string(),
            "total": self.total.to_string(),
        })
    }
}

fn pole_order_key(a: &Scalar) -> (u8, String) {
    // Rationals first in increasing order, then algebraic values by text.
    match a.as_rational() {
        Some(r) => {
            let f = num_traits::ToPrimitive::to_f64(r).unwrap_or(0.0);
            (0, format!("{:040.12}", f + 1e15))
        }
        None => (1, a.to_string()),
    }
}

/// Residues of an f-function: partial-fraction residues at the finite
/// poles and `4 − λ` at infinity, where `f(z) ~ λ/z`.
pub fn residues_of_f(f: &RatFn) -> Result<ResidueReport, DualError> {
    let dn = f.num.degree();
    let dd = f.den.degree().expect("nonzero denominator");
    let mut poles = Vec::new();
    for (a, m) in f.den.roots()? {
        let na = f.num.eval(&a);
        if na.is_zero() {
            // Removable: cancel and retry on the reduced function.
            let g = f.num.gcd(&f.den);
            let reduced = RatFn::new(f.num.div_rem(&g).0, f.den.div_rem(&g).0);
            return residues_of_f(&reduced);
        }
        if m > 1 {
            return Err(DualError::HigherOrderPole { at: a.to_string(), order: m });
        }
        let res = na.checked_div(&f.den.deriv().eval(&a))?;
        poles.push((a, res));
    }
    poles.sort_by_key(|(a, _)| pole_order_key(a));
    let lambda = match dn {
        None => Scalar::zero(),
        Some(k) if k + 1 == dd => f.num.lead().checked_div(&f.den.lead())?,
        Some(k) if k + 1 < dd => Scalar::zero(),
        Some(_) => return Err(DualError::NonDecaying),
    };
    let infinity_residue = Scalar::int(4) - lambda;
    let total = poles.iter().fold(infinity_residue.clone(), |acc, (_, r)| acc + r.clone());
    Ok(ResidueReport { finite_poles: poles, infinity_residue, total })
}

/// The residue report of a spec. Pencil residues are the contact orders of
/// the pencil's base points with `γ`.
///
/// ```
/// use conic_billiards::dualbilliard::{residue_report, BilliardSpec};
/// use conic_billiards::exactnum::Scalar;
/// let r = residue_report(&BilliardSpec::D).unwrap();
/// assert_eq!(r.configuration(), vec![Scalar::ratio(4, 3), Scalar::one(), Scalar::ratio(5, 3)]);
/// ```
pub fn residue_report(spec: &BilliardSpec) -> Result<ResidueReport, DualError> {
    if let BilliardSpec::Pencil(p) = spec {
        let mut poles = Vec::new();
        let mut inf = Scalar::zero();
        for (pt, k) in p.base_points_on_standard()? {
            match pt.to_affine() {
                Some((z, _)) => poles.push((z, Scalar::int(k as i64))),
                None => inf = Scalar::int(k as i64),
            }
        }
        poles.sort_by_key(|(a, _)| pole_order_key(a));
        let total = poles.iter().fold(inf.clone(), |acc, (_, r)| acc + r.clone());
        return Ok(ResidueReport { finite_poles: poles, infinity_residue: inf, total });
    }
    residues_of_f(&f_function(spec)?)
}

/// Reconstruct a structure from its residues: `f(z) = Σ λⱼ/(z − aⱼ)`.
/// Catalog entries (and quasihomogeneous models) are recognized; anything
/// else becomes a [`BilliardSpec::Custom`] spec with integrability unverified.
///
/// ```
/// use conic_billiards::dualbilliard::{spec_from_residues, BilliardSpec};
/// use conic_billiards::exactnum::Scalar;
/// let s = spec_from_residues(
///     &[(Scalar::zero(), Scalar::ratio(4, 3)), (Scalar::one(), Scalar::one())],
///     &Scalar::ratio(5, 3),
/// ).unwrap();
/// assert_eq!(s, BilliardSpec::D);
/// ```
pub fn spec_from_residues(finite: &[(Scalar, Scalar)], infinity: &Scalar) -> Result<BilliardSpec, DualError> {
    for (k, (a, r)) in finite.iter().enumerate() {
        if r.is_zero() {
            return Err(DualError::ZeroResidue(a.to_string()));
        }
        if finite[..k].iter().any(|(b, _)| b == a) {
            return Err(DualError::DuplicateLocation(a.to_string()));
        }
    }
    let total = finite.iter().fold(infinity.clone(), |acc, (_, r)| acc + r.clone());
    if total != Scalar::int(4) {
        return Err(DualError::ResidueSumNotFour(total.to_string()));
    }
    if let [(a, rho)] = finite {
        if a.is_zero() {
            return Ok(BilliardSpec::model(rho.clone()));
        }
    }
    let den = finite.iter().fold(UniPoly::one(), |acc, (a, _)| &acc * &z_minus(a));
    let mut num = UniPoly::zero();
    for (j, (_, lam)) in finite.iter().enumerate() {
        let others = finite
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .fold(UniPoly::one(), |acc, (_, (a, _))| &acc * &z_minus(a));
        num = &num + &others.scale(lam);
    }
    let f = RatFn::new(num, den);
    for spec in [BilliardSpec::B1, BilliardSpec::B2, BilliardSpec::C1, BilliardSpec::C2, BilliardSpec::D] {
        if f_function(&spec)?.same_function(&f) {
            return Ok(spec);
        }
    }
    Ok(BilliardSpec::Custom { f, integrability_verified: false })
}

/// JSON form of a spec.
#[derive(Serialize, Deserialize)]
struct SpecRepr {
    kind: String,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity: Option<Parity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rho: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pencil: Option<PencilRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    custom_f: Option<CustomFRepr>,
}

/// A pencil given by its conic `A` (the carrier is always `γ`) or both conics.
#[derive(Serialize, Deserialize)]
struct PencilRepr {
    a: Conic,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<Conic>,
}

/// An f-function as ascending coefficient lists.
#[derive(Serialize, Deserialize)]
struct CustomFRepr {
    num: Vec<Scalar>,
    den: Vec<Scalar>,
    #[serde(default)]
    integrability_verified: bool,
}

impl Serialize for BilliardSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut r = SpecRepr { kind: self.kind().into(), n: None, parity: None, rho: None, pencil: None, custom_f: None };
        match self {
            BilliardSpec::ExoticA { parity, n } => {
                r.n = Some(*n);
                r.parity = Some(*parity);
            }
            BilliardSpec::Model { rho } => r.rho = Some(rho.clone()),
            BilliardSpec::Pencil(p) => r.pencil = Some(PencilRepr { a: p.a.clone(), b: Some(p.b.clone()) }),
            BilliardSpec::Custom { f, integrability_verified } => {
                r.custom_f = Some(CustomFRepr {
                    num: f.num.coeffs().to_vec(),
                    den: f.den.coeffs().to_vec(),
                    integrability_verified: *integrability_verified,
                })
            }
            _ => {}
        }
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BilliardSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = SpecRepr::deserialize(d)?;
        let spec = match r.kind.to_ascii_lowercase().as_str() {
            "b1" => BilliardSpec::B1,
            "b2" => BilliardSpec::B2,
            "c1" => BilliardSpec::C1,
            "c2" => BilliardSpec::C2,
            "d" => BilliardSpec::D,
            "a" => {
                let n = r.n.ok_or_else(|| D::Error::missing_field("N"))?;
                let parity = r.parity.ok_or_else(|| D::Error::missing_field("parity"))?;
                BilliardSpec::exotic(parity, n).map_err(D::Error::custom)?
            }
            "model" => BilliardSpec::Model { rho: r.rho.ok_or_else(|| D::Error::missing_field("rho"))? },
            "pencil" => {
                let p = r.pencil.ok_or_else(|| D::Error::missing_field("pencil"))?;
                let b = p.b.unwrap_or_else(Conic::standard);
                BilliardSpec::Pencil(Pencil::new(p.a, b).map_err(D::Error::custom)?)
            }
            "custom" => {
                let c = r.custom_f.ok_or_else(|| D::Error::missing_field("custom_f"))?;
                let den = UniPoly::new(c.den);
                if den.is_zero() {
                    return Err(D::Error::custom("custom_f has a zero denominator"));
                }
                BilliardSpec::Custom { f: RatFn::new(UniPoly::new(c.num), den), integrability_verified: c.integrability_verified }
            }
            other => return Err(D::Error::custom(format!("unknown spec kind {other:?}"))),
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projcore::{chart_transport, eta, ExtValue};

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn f_functions() {
        let d = f_function(&BilliardSpec::D).unwrap();
        // 4/(3z) + 1/(z − 1)
        let alt = RatFn::new(UniPoly::from_ints(&[-4, 7]), UniPoly::from_ints(&[0, -3, 3]));
        assert!(d.same_function(&alt));
        assert_eq!(d.eval(&Scalar::int(2)), Some(s(5, 3)));
        assert_eq!(f_function(&BilliardSpec::pencil(Conic::diagonal(Scalar::one(), Scalar::one(), Scalar::int(-1))).unwrap()), Err(DualError::PencilSpec));
    }

    #[test]
    fn sigma_examples() {
        let p = conic_point(&Scalar::int(2));
        let c1 = sigma_at(&BilliardSpec::C1, &p).unwrap();
        assert_eq!(c1.apply_finite(&Scalar::int(7)), ExtValue::finite(s(-7, 17)));
        assert_eq!(c1.apply_finite(&Scalar::zero()), ExtValue::finite(Scalar::zero()));
        assert!(matches!(sigma_at(&BilliardSpec::B1, &conic_point(&Scalar::one())), Err(DualError::SingularPoint(_))));
        assert_eq!(sigma_at(&BilliardSpec::B1, &HomPoint::ints(0, 1, 0)), Err(DualError::InfinitePoint));
    }

    #[test]
    fn sigma_fixed_points() {
        let z0 = Scalar::int(3);
        let m = sigma_at(&BilliardSpec::D, &conic_point(&z0)).unwrap();
        let f = f_function(&BilliardSpec::D).unwrap().eval(&z0).unwrap();
        let fixed = m.fixed_points().unwrap();
        assert!(fixed.contains(&ExtValue::finite(Scalar::zero())));
        assert!(fixed.contains(&ExtValue::finite(Scalar::int(-2) / f)));
    }

    #[test]
    fn residues_of_catalog() {
        let r = residue_report(&BilliardSpec::B1).unwrap();
        assert_eq!(r.finite_poles, vec![(Scalar::zero(), s(3, 2)), (Scalar::one(), Scalar::one())]);
        assert_eq!(r.infinity_residue, s(3, 2));
        let r = residue_report(&BilliardSpec::C1).unwrap();
        assert_eq!(r.finite_poles.len(), 3);
        assert!(r.finite_poles.iter().all(|(_, x)| *x == s(4, 3)));
        assert!(r.infinity_residue.is_zero());
        let r = residue_report(&BilliardSpec::B2).unwrap();
        assert!(r.finite_poles.iter().any(|(a, _)| *a == Scalar::i()));
        assert_eq!(r.infinity_residue, Scalar::one());
        for spec in BilliardSpec::catalog(5) {
            assert_eq!(residue_report(&spec).unwrap().total, Scalar::int(4), "{spec}");
        }
    }

    #[test]
    fn higher_order_poles_are_rejected() {
        let f = RatFn::new(UniPoly::one(), UniPoly::from_ints(&[0, 0, 1]));
        assert!(matches!(residues_of_f(&f), Err(DualError::HigherOrderPole { order: 2, .. })));
    }

    #[test]
    fn pencil_residues_are_contact_orders() {
        // A = (w − z)(w − z − 2t) meets γ at z = 0, 1, −1, 2.
        let a = crate::integrals::poly::Poly::from_int_terms(&[
            ([0, 2, 0], 1),
            ([1, 1, 0], -2),
            ([2, 0, 0], 1),
            ([0, 1, 1], -2),
            ([1, 0, 1], 2),
        ]);
        let spec = BilliardSpec::pencil(Conic::from_poly(&a).unwrap()).unwrap();
        let r = residue_report(&spec).unwrap();
        assert_eq!(r.finite_poles.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>(), vec![Scalar::int(-1), Scalar::zero(), Scalar::one(), Scalar::int(2)]);
        assert!(r.infinity_residue.is_zero());
        assert_eq!(r.total, Scalar::int(4));
    }

    #[test]
    fn reconstruction() {
        let b1 = spec_from_residues(&[(Scalar::zero(), s(3, 2)), (Scalar::one(), Scalar::one())], &s(3, 2)).unwrap();
        assert_eq!(b1, BilliardSpec::B1);
        let two = spec_from_residues(&[(Scalar::zero(), Scalar::int(2))], &Scalar::int(2)).unwrap();
        assert_eq!(two, BilliardSpec::Model { rho: Scalar::int(2) });
        let a = spec_from_residues(&[(Scalar::zero(), s(4, 3))], &s(8, 3)).unwrap();
        assert_eq!(a, BilliardSpec::ExoticA { parity: Parity::Odd, n: 1 });
        assert!(matches!(
            spec_from_residues(&[(Scalar::zero(), Scalar::one())], &Scalar::one()),
            Err(DualError::ResidueSumNotFour(_))
        ));
        assert!(matches!(
            spec_from_residues(&[(Scalar::zero(), Scalar::one()), (Scalar::zero(), Scalar::one())], &Scalar::int(2)),
            Err(DualError::DuplicateLocation(_))
        ));
        let custom = spec_from_residues(&[(Scalar::zero(), Scalar::one()), (Scalar::int(5), Scalar::one())], &Scalar::int(2)).unwrap();
        assert!(matches!(custom, BilliardSpec::Custom { integrability_verified: false, .. }));
    }

    #[test]
    fn round_trip_catalog_through_residues() {
        for spec in BilliardSpec::catalog(5) {
            let r = residue_report(&spec).unwrap();
            assert_eq!(spec_from_residues(&r.finite_poles, &r.infinity_residue).unwrap(), spec);
        }
    }

    #[test]
    fn exotic_values_are_recognised() {
        for n in 1..8 {
            for parity in [Parity::Odd, Parity::Even] {
                let rho = exotic_rho(parity, n);
                assert_eq!(exotic_from_rho(&rho), Some(BilliardSpec::ExoticA { parity, n }), "{rho}");
            }
        }
        assert_eq!(exotic_from_rho(&Scalar::int(2)), None);
        assert_eq!(exotic_from_rho(&s(8, 3)), None);
        assert_eq!(exotic_from_rho(&Scalar::one()), None);
    }

    #[test]
    fn exotic_sigma_is_eta_in_zeta_chart() {
        for spec in BilliardSpec::catalog(3).into_iter().skip(5) {
            let rho = spec.rho().unwrap();
            for z0 in [Scalar::int(2), s(-3, 7), s(11, 5)] {
                let m = sigma_at(&spec, &conic_point(&z0)).unwrap();
                assert_eq!(chart_transport(&m, &Chart::Zeta).unwrap(), eta(&rho));
            }
        }
    }

    /// The θ-coordinate `u = θ/(1 + ψθ)` conjugates `σ_P` to `θ ↦ −θ`
    /// precisely when `ψ = −f/2`.
    #[test]
    fn psi_is_minus_half_f() {
        for spec in [BilliardSpec::B1, BilliardSpec::C2, BilliardSpec::D] {
            let f = f_function(&spec).unwrap();
            for z0 in [Scalar::int(2), s(7, 3), s(-5, 2)] {
                let fz = f.eval(&z0).unwrap();
                let psi = -(&fz / &Scalar::int(2));
                let sigma = sigma_at(&spec, &conic_point(&z0)).unwrap();
                for theta in [Scalar::one(), s(1, 9), s(-2, 5)] {
                    let den = Scalar::one() + &psi * &theta;
                    if den.is_zero() || (Scalar::one() - &psi * &theta).is_zero() {
                        continue;
                    }
                    let u = &theta / &den;
                    let u_minus = -&theta / (Scalar::one() - &psi * &theta);
                    assert_eq!(sigma.apply_finite(&u), ExtValue::finite(u_minus));
                }
            }
        }
    }

    #[test]
    fn json_forms() {
        let spec: BilliardSpec = serde_json::from_str(r#"{"kind":"a","N":2,"parity":"even"}"#).unwrap();
        assert_eq!(spec, BilliardSpec::ExoticA { parity: Parity::Even, n: 2 });
        let d: BilliardSpec = serde_json::from_str(r#"{"kind":"d"}"#).unwrap();
        assert_eq!(d, BilliardSpec::D);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<BilliardSpec>(&text).unwrap(), spec);
        assert!(serde_json::from_str::<BilliardSpec>(r#"{"kind":"q"}"#).is_err());
    }
}
