//! Projective billiards on the parabola `C = {x₂ = x₁²}`: transversal line
//! fields, the projective reflection law, the billiard flow, moment vectors,
//! the integrals `Ψ` of the integrable fields, and the bridge to dual
//! billiards on `γ = {wt = z²}`.
//!
//! A point `x` with velocity `v` has moment vector `M = (−v₂, v₁, Δ)` with
//! `Δ = x₁v₂ − x₂v₁`. Integrals are 0-homogeneous rational functions of
//! `(v₁, v₂, Δ)`, represented as [`HomRational`] in the variable order
//! `[v₁, v₂, Δ]`. A dual integral `R(z, w, t)` becomes `R(v₂, −2Δ, −2v₁)`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conicpencil::{space_form_transversal, Conic, ConicError, Pencil};
use crate::dualbilliard::{conic_point, sigma_at, BilliardSpec, DualError, Parity};
use crate::exactnum::{NumError, Scalar};
use crate::integrals::{catalog_integral, exotic_coefficients, HomRational, IntegralError, Poly};
use crate::projcore::{ExtValue, HomPoint, ProjError};

/// Errors raised by projective billiard computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjBilliardError {
    /// The field is undefined or tangent to the table at the point.
    #[error("singular field point at {0}")]
    SingularFieldPoint(String),
    /// The point is not on the table `{x₂ = x₁²}`.
    #[error("point is not on the table")]
    NotOnTable,
    /// Tangent and transversal directions are parallel.
    #[error("degenerate reflection frame")]
    DegenerateFrame,
    /// The velocity vanishes.
    #[error("zero velocity")]
    ZeroVelocity,
    /// The forward ray does not meet the table again.
    #[error("the ray does not hit the table")]
    NoHit,
    /// The ray hits the table at a singular point of the field.
    #[error("hit at a singular field point: {0}")]
    SingularHit(String),
    /// No integral is catalogued for the field.
    #[error("no catalog integral for {0}")]
    NoCatalogPsi(String),
    /// Conic failure.
    #[error(transparent)]
    Conic(#[from] ConicError),
    /// Dual billiard failure.
    #[error(transparent)]
    Dual(#[from] DualError),
    /// Integral failure.
    #[error(transparent)]
    Integral(#[from] IntegralError),
    /// Projective failure.
    #[error(transparent)]
    Proj(#[from] ProjError),
    /// Scalar arithmetic failure.
    #[error(transparent)]
    Num(#[from] NumError),
}

type Vec2 = [Scalar; 2];

/// A transversal line field on the table `{x₂ = x₁²}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TransversalField {
    /// `(ρ, 2(ρ − 2)x₁)`.
    A {
        /// The residue `ρ`.
        rho: Scalar,
    },
    /// `(5x₁ + 3, 2(x₂ − x₁))`.
    B1,
    /// `(3x₁, 2x₂ − 4)`.
    B2,
    /// `(x₂, x₁x₂ − 1)`.
    C1,
    /// `(2x₁ + 1, x₂ − x₁)`.
    C2,
    /// `(7x₁ + 4, 2x₂ − 4x₁)`.
    D,
    /// The space-form transversal for the matrix `a`; `members` optionally
    /// names two conics whose ratio, evaluated at the moment vector, is the
    /// integral.
    SpaceForm {
        /// The space-form matrix.
        a: Conic,
        /// Optional pair of conics `(numerator, denominator)` for `Ψ`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        members: Option<(Conic, Conic)>,
    },
    /// The dual of the pencil dual billiard.
    PencilDual(Pencil),
}

impl TransversalField {
    /// Short name.
    pub fn name(&self) -> String {
        match self {
            TransversalField::A { rho } => format!("a (rho = {rho})"),
            TransversalField::B1 => "b1".into(),
            TransversalField::B2 => "b2".into(),
            TransversalField::C1 => "c1".into(),
            TransversalField::C2 => "c2".into(),
            TransversalField::D => "d".into(),
            TransversalField::SpaceForm { .. } => "space-form".into(),
            TransversalField::PencilDual(_) => "pencil-dual".into(),
        }
    }
}

fn det(a: &Vec2, b: &Vec2) -> Scalar {
    &(&a[0] * &b[1]) - &(&a[1] * &b[0])
}

fn on_table(q: &HomPoint) -> Result<Vec2, ProjBilliardError> {
    let (x1, x2) = q.to_affine().ok_or(ProjBilliardError::NotOnTable)?;
    if &x1 * &x1 != x2 {
        return Err(ProjBilliardError::NotOnTable);
    }
    Ok([x1, x2])
}

/// The tangent direction `(1, 2x₁)` of the table at `(x₁, x₁²)`.
pub fn tangent_dir(x1: &Scalar) -> Vec2 {
    [Scalar::one(), Scalar::int(2) * x1.clone()]
}

/// The direction of the transversal line at a point `Q` of the table.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::projbilliard::{field_at, TransversalField};
/// use conic_billiards::projcore::HomPoint;
/// let q = HomPoint::ints(1, 1, 1);
/// let v = field_at(&TransversalField::B2, &q).unwrap();
/// assert_eq!(v, [Scalar::int(3), Scalar::int(-2)]);
/// ```
pub fn field_at(f: &TransversalField, q: &HomPoint) -> Result<Vec2, ProjBilliardError> {
    let [x1, x2] = on_table(q)?;
    let i = Scalar::int;
    let v: Vec2 = match f {
        TransversalField::A { rho } => [rho.clone(), &(i(2) * (rho - &i(2))) * &x1],
        TransversalField::B1 => [&(i(5) * x1.clone()) + &i(3), i(2) * (&x2 - &x1)],
        TransversalField::B2 => [i(3) * x1.clone(), &(i(2) * x2.clone()) - &i(4)],
        TransversalField::C1 => [x2.clone(), &(&x1 * &x2) - &i(1)],
        TransversalField::C2 => [&(i(2) * x1.clone()) + &i(1), &x2 - &x1],
        TransversalField::D => [&(i(7) * x1.clone()) + &i(4), &(i(2) * x2.clone()) - &(i(4) * x1.clone())],
        TransversalField::SpaceForm { a, .. } => {
            let l = space_form_transversal(a, &Conic::standard(), q)?;
            [l.covector[1].clone(), -&l.covector[0]]
        }
        TransversalField::PencilDual(p) => dual_recipe(&BilliardSpec::Pencil(p.clone()), &x1)?,
    };
    let tangent = tangent_dir(&x1);
    if (v[0].is_zero() && v[1].is_zero()) || det(&tangent, &v).is_zero() {
        return Err(ProjBilliardError::SingularFieldPoint(format!("({x1}, {x2})")));
    }
    Ok(v)
}

/// The transversal direction at `(x₁, x₁²)` obtained from a dual billiard
/// structure: with `f(z₀)` the coefficient of its involution at the dual
/// point `z₀ = −x₁`, the direction is `(f, 4 − 2z₀f)`, proportional to
/// `(1, −2g(z₀))` with `g(z₀) = z₀ − 2/f(z₀)`.
pub fn dual_recipe(spec: &BilliardSpec, x1: &Scalar) -> Result<Vec2, ProjBilliardError> {
    let z0 = -x1;
    let sigma = sigma_at(spec, &conic_point(&z0))
        .map_err(|_| ProjBilliardError::SingularFieldPoint(format!("x1 = {x1}")))?;
    // Fixed points in the chart u = z − z₀ are 0 and −2/f.
    let other = sigma
        .fixed_points()?
        .into_iter()
        .find(|u| !u.0.is_zero())
        .ok_or_else(|| ProjBilliardError::SingularFieldPoint(format!("x1 = {x1}")))?;
    // f = −2/u* = (−2·den : num).
    let (fnum, fden) = (-(Scalar::int(2) * other.1.clone()), other.0.clone());
    Ok([fnum.clone(), &(Scalar::int(4) * fden) - &(&(Scalar::int(2) * z0) * &fnum)])
}

/// Reflect `v` at a point with the given tangent and transversal
/// directions: write `v = a·t + b·n` and return `a·t − b·n`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::projbilliard::reflect;
/// let i = Scalar::int;
/// let v = reflect(&[i(1), i(2)], &[i(1), i(-1)], &[i(3), i(0)]).unwrap();
/// assert_eq!(v, [i(-1), i(4)]);
/// ```
pub fn reflect(tangent: &Vec2, transversal: &Vec2, v: &Vec2) -> Result<Vec2, ProjBilliardError> {
    if det(tangent, transversal).is_zero() {
        return Err(ProjBilliardError::DegenerateFrame);
    }
    Ok(reflect_vector(tangent, transversal, v)?)
}

/// Reflect `v` in the pair (tangent `t`, transversal `n`): `v − 2bN` with
/// `b = det(t, v)/det(t, n)`.
pub fn reflect_vector(t: &[Scalar; 2], n: &[Scalar; 2], v: &[Scalar; 2]) -> Result<[Scalar; 2], NumError> {
    let b = det(t, v).checked_div(&det(t, n))?;
    let two_b = Scalar::int(2) * b;
    Ok([&v[0] - &(&two_b * &n[0]), &v[1] - &(&two_b * &n[1])])
}

/// A position and a nonzero velocity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    /// `(x₁, x₂)`.
    pub position: Vec2,
    /// `(v₁, v₂)`.
    pub velocity: Vec2,
}

impl FlowState {
    /// Build a state, rejecting zero velocity.
    pub fn new(position: Vec2, velocity: Vec2) -> Result<FlowState, ProjBilliardError> {
        if velocity[0].is_zero() && velocity[1].is_zero() {
            return Err(ProjBilliardError::ZeroVelocity);
        }
        Ok(FlowState { position, velocity })
    }

    /// Whether the position lies on the table.
    pub fn on_table(&self) -> bool {
        &self.position[0] * &self.position[0] == self.position[1]
    }
}

/// How the next boundary point is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Traversal {
    /// Follow the forward ray; a ray leaving the table is an error.
    Ray,
    /// Move to the other intersection of the line with the table whatever
    /// its sign (the chord map on lines, on which `Ψ` lives).
    Chord,
}

fn is_positive(x: &Scalar) -> Result<bool, NumError> {
    Ok(x.cmp_real(&Scalar::zero())? == Ordering::Greater)
}

/// Parameter of the next boundary hit along `x + s·v`.
fn next_hit(s: &FlowState, mode: Traversal) -> Result<Scalar, ProjBilliardError> {
    let ([x1, x2], [v1, v2]) = (&s.position, &s.velocity);
    // (x₁ + s v₁)² = x₂ + s v₂:  v₁² s² + (2x₁v₁ − v₂) s + (x₁² − x₂) = 0.
    let a = v1 * v1;
    let b = &(Scalar::int(2) * (x1 * v1)) - v2;
    let c = &(x1 * x1) - x2;
    let candidates: Vec<Scalar> = if s.on_table() {
        if a.is_zero() {
            return Err(ProjBilliardError::NoHit);
        }
        vec![(-b).checked_div(&a)?]
    } else if a.is_zero() {
        vec![(-c).checked_div(&b).map_err(|_| ProjBilliardError::NoHit)?]
    } else {
        let disc = b.checked_mul(&b)?.checked_sub(&Scalar::int(4).checked_mul(&a)?.checked_mul(&c)?)?;
        if disc.signum()? < 0 {
            return Err(ProjBilliardError::NoHit);
        }
        crate::integrals::poly::quadratic_roots(&a, &b, &c)?
    };
    let mut best: Option<Scalar> = None;
    for r in candidates {
        let ok = match mode {
            Traversal::Ray => is_positive(&r)?,
            Traversal::Chord => !r.is_zero(),
        };
        if ok && best.as_ref().map_or(Ok::<bool, NumError>(true), |b| Ok(r.cmp_real(b)? == Ordering::Less))? {
            best = Some(r);
        }
    }
    best.ok_or(ProjBilliardError::NoHit)
}

/// Move to the next boundary hit and reflect there.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::projbilliard::{flow_step, FlowState, TransversalField, Traversal};
/// let i = Scalar::int;
/// let s = FlowState::new([i(-1), i(1)], [i(1), i(0)]).unwrap();
/// let f = TransversalField::A { rho: Scalar::ratio(4, 3) };
/// let t = flow_step(&f, &s, Traversal::Ray).unwrap();
/// assert_eq!(t.position, [i(1), i(1)]);
/// assert_eq!(t.velocity, [Scalar::ratio(-1, 3), Scalar::ratio(4, 3)]);
/// ```
pub fn flow_step(field: &TransversalField, s: &FlowState, mode: Traversal) -> Result<FlowState, ProjBilliardError> {
    let t = next_hit(s, mode)?;
    let pos = [&s.position[0] + &(&t * &s.velocity[0]), &s.position[1] + &(&t * &s.velocity[1])];
    let q = HomPoint::new([pos[0].clone(), pos[1].clone(), Scalar::one()])?;
    let n = field_at(field, &q).map_err(|e| match e {
        ProjBilliardError::SingularFieldPoint(p) => ProjBilliardError::SingularHit(p),
        e => e,
    })?;
    let v = reflect(&tangent_dir(&pos[0]), &n, &s.velocity)?;
    FlowState::new(pos, v)
}

/// The moment vector `(−v₂, v₁, Δ)`, `Δ = x₁v₂ − x₂v₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentVector(pub [Scalar; 3]);

impl MomentVector {
    /// `Δ`.
    pub fn delta(&self) -> &Scalar {
        &self.0[2]
    }

    /// The integral variables `[v₁, v₂, Δ]`.
    pub fn psi_args(&self) -> [Scalar; 3] {
        [self.0[1].clone(), -&self.0[0], self.0[2].clone()]
    }
}

/// The moment vector of `(x, v)`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::projbilliard::moment;
/// let i = Scalar::int;
/// assert_eq!(moment(&[i(1), i(2)], &[i(3), i(4)]).0, [i(-4), i(3), i(-2)]);
/// ```
pub fn moment(x: &Vec2, v: &Vec2) -> MomentVector {
    MomentVector([-&v[1], v[0].clone(), det(x, v)])
}

fn var(i: usize) -> Poly {
    Poly::var(i)
}

/// `4v₁Δ − c·v₂²`.
fn quad_form(c: &Scalar) -> Poly {
    &Poly::monomial([1, 0, 1], Scalar::int(4)) - &Poly::monomial([0, 2, 0], c.clone())
}

fn ip(terms: &[([u32; 3], i64)]) -> Poly {
    Poly::from_int_terms(terms)
}

fn ratio(num: Poly, den: Poly) -> Result<HomRational, ProjBilliardError> {
    Ok(HomRational::new(num, den)?)
}

/// The rational integral `Ψ(v₁, v₂, Δ)` of a field. Exotic fields with
/// `ρ < 2` and the sporadic fields use the closed forms; other admissible
/// `ρ` and pencil duals use the dual integral; space-form fields need a
/// member pair.
pub fn psi_catalog(f: &TransversalField) -> Result<HomRational, ProjBilliardError> {
    let x = quad_form(&Scalar::one());
    match f {
        TransversalField::A { rho } => match BilliardSpec::model(rho.clone()) {
            BilliardSpec::ExoticA { parity: Parity::Odd, n } => {
                let mut den = var(0).pow(2);
                for c in exotic_coefficients(Parity::Odd, n) {
                    den = &den * &quad_form(&c).pow(2);
                }
                ratio(x.pow(2 * n + 1), den)
            }
            BilliardSpec::ExoticA { parity: Parity::Even, n } => {
                let mut den = &var(0) * &var(1);
                for c in exotic_coefficients(Parity::Even, n) {
                    den = &den * &quad_form(&c);
                }
                ratio(x.pow(n + 1), den)
            }
            spec => Ok(integral_from_dual(&catalog_integral(&spec)?)),
        },
        TransversalField::B1 => ratio(
            x.pow(2),
            &(&quad_form(&Scalar::int(-3)) * &ip(&[([1, 0, 0], 2), ([0, 1, 0], 1)]))
                * &ip(&[([0, 0, 1], 2), ([0, 1, 0], 1)]),
        ),
        TransversalField::B2 => ratio(
            x.pow(2),
            &ip(&[([0, 2, 0], 1), ([0, 0, 2], 4), ([1, 0, 1], 4), ([2, 0, 0], 4)])
                * &ip(&[([0, 2, 0], 1), ([2, 0, 0], 4)]),
        ),
        TransversalField::C1 => ratio(x.pow(3), ip(&[([3, 0, 0], 1), ([0, 0, 3], 1), ([1, 1, 1], 1)]).pow(2)),
        TransversalField::C2 => ratio(
            x.pow(3),
            ip(&[
                ([0, 3, 0], 1),
                ([1, 2, 0], 2),
                ([2, 0, 1], 1),
                ([0, 2, 1], 2),
                ([1, 1, 1], 5),
                ([1, 0, 2], 1),
            ])
            .pow(2),
        ),
        TransversalField::D => ratio(
            x.pow(3),
            &(&ip(&[([1, 0, 1], 1), ([0, 2, 0], 2)]) * &ip(&[([1, 0, 0], 2), ([0, 1, 0], 1)]))
                * &ip(&[
                    ([1, 2, 0], 8),
                    ([0, 3, 0], 2),
                    ([2, 0, 1], 4),
                    ([0, 2, 1], 5),
                    ([1, 1, 1], 28),
                    ([1, 0, 2], 16),
                ]),
        ),
        TransversalField::SpaceForm { members: Some((p, q)), .. } => {
            // Conics evaluated at the moment vector M = (−v₂, v₁, Δ).
            let m = [-&var(1), var(0), var(2)];
            ratio(p.to_poly().substitute(&m), q.to_poly().substitute(&m))
        }
        TransversalField::SpaceForm { members: None, .. } => {
            Err(ProjBilliardError::NoCatalogPsi("space-form field without a member pair".into()))
        }
        TransversalField::PencilDual(p) => {
            let r = HomRational::new(p.a.to_poly(), p.b.to_poly())?;
            Ok(integral_from_dual(&r))
        }
    }
}

/// `R(v₂, −2Δ, −2v₁)` as a function of `[v₁, v₂, Δ]`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::integrals::{classpqr_integral, Poly};
/// use conic_billiards::projbilliard::integral_from_dual;
/// let r = integral_from_dual(&classpqr_integral(&Scalar::int(2)).unwrap());
/// // (4v₁Δ − v₂²)/(4v₁Δ)
/// assert_eq!(r.den, Poly::from_int_terms(&[([1, 0, 1], 4)]));
/// ```
pub fn integral_from_dual(r: &HomRational) -> HomRational {
    let two = Scalar::int(-2);
    r.substitute(&[var(1), var(2).scale(&two), var(0).scale(&two)])
}

/// The dual billiard structure of a catalog or pencil field.
pub fn dual_spec(f: &TransversalField) -> Option<BilliardSpec> {
    Some(match f {
        TransversalField::A { rho } => BilliardSpec::model(rho.clone()),
        TransversalField::B1 => BilliardSpec::B1,
        TransversalField::B2 => BilliardSpec::B2,
        TransversalField::C1 => BilliardSpec::C1,
        TransversalField::C2 => BilliardSpec::C2,
        TransversalField::D => BilliardSpec::D,
        TransversalField::PencilDual(p) => BilliardSpec::Pencil(p.clone()),
        TransversalField::SpaceForm { .. } => return None,
    })
}

/// The transversal field dual to a dual billiard structure.
pub fn field_from_spec(spec: &BilliardSpec) -> Result<TransversalField, ProjBilliardError> {
    Ok(match spec {
        BilliardSpec::B1 => TransversalField::B1,
        BilliardSpec::B2 => TransversalField::B2,
        BilliardSpec::C1 => TransversalField::C1,
        BilliardSpec::C2 => TransversalField::C2,
        BilliardSpec::D => TransversalField::D,
        BilliardSpec::ExoticA { .. } | BilliardSpec::Model { .. } => {
            TransversalField::A { rho: spec.rho().expect("model specs carry rho") }
        }
        BilliardSpec::Pencil(p) => TransversalField::PencilDual(p.clone()),
        BilliardSpec::Custom { .. } => return Err(ProjBilliardError::NoCatalogPsi(spec.to_string())),
    })
}

/// The constant `k` with `Ψ = k·R(v₂, −2Δ, −2v₁)`, if it exists.
pub fn psi_dual_constant(f: &TransversalField) -> Result<Option<Scalar>, ProjBilliardError> {
    let spec = dual_spec(f).ok_or_else(|| ProjBilliardError::NoCatalogPsi(f.name()))?;
    let dual = match &spec {
        BilliardSpec::Pencil(p) => HomRational::new(p.a.to_poly(), p.b.to_poly())?,
        s => catalog_integral(s)?,
    };
    Ok(psi_catalog(f)?.constant_ratio(&integral_from_dual(&dual)))
}

/// `Ψ` at `(x, v)` as a projective value (`∞` on the polar locus, `None`
/// when numerator and denominator both vanish).
pub fn eval_psi(psi: &HomRational, x: &Vec2, v: &Vec2) -> Option<ExtValue> {
    psi.eval(&moment(x, v).psi_args())
}

/// One reflection of a simulated trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bounce {
    /// 1-based step number.
    pub step: usize,
    /// Hit point.
    pub position: Vec2,
    /// Velocity before reflection.
    pub v_in: Vec2,
    /// Velocity after reflection.
    pub v_out: Vec2,
    /// `Ψ` before reflection.
    pub psi_before: Option<ExtValue>,
    /// `Ψ` after reflection.
    pub psi_after: Option<ExtValue>,
}

/// A simulated trajectory with `Ψ` recorded at every reflection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    /// Field name.
    pub field: String,
    /// Initial state.
    pub start: FlowState,
    /// `Ψ` at the initial state.
    pub psi_start: Option<ExtValue>,
    /// The reflections.
    pub bounces: Vec<Bounce>,
}

impl Trajectory {
    /// All recorded `Ψ` values (before and after each reflection).
    pub fn psi_values(&self) -> Vec<Option<ExtValue>> {
        self.bounces.iter().flat_map(|b| [b.psi_before.clone(), b.psi_after.clone()]).collect()
    }

    /// True iff every recorded value equals the initial one projectively.
    pub fn psi_conserved(&self) -> bool {
        self.psi_values().iter().all(|p| *p == self.psi_start)
    }

    /// CSV with columns `step,x1,x2,v1,v2,psi_num,psi_den`; row 0 is the
    /// start, row `k` the state after the `k`-th reflection.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,x1,x2,v1,v2,psi_num,psi_den\n");
        let mut row = |step: usize, x: &Vec2, v: &Vec2, psi: &Option<ExtValue>| {
            let (n, d) = psi_strings(psi);
            let _ = writeln!(out, "{step},{},{},{},{},{n},{d}", x[0], x[1], v[0], v[1]);
        };
        row(0, &self.start.position, &self.start.velocity, &self.psi_start);
        for b in &self.bounces {
            row(b.step, &b.position, &b.v_out, &b.psi_after);
        }
        out
    }

    /// An SVG drawing of the table and the trajectory.
    pub fn to_svg(&self) -> String {
        let pts: Vec<(f64, f64)> = std::iter::once(&self.start.position)
            .chain(self.bounces.iter().map(|b| &b.position))
            .map(|p| (p[0].to_f64_pair().0, p[1].to_f64_pair().0))
            .collect();
        let xmax = pts.iter().map(|p| p.0.abs()).fold(1.0_f64, f64::max) * 1.1;
        let ymax = xmax * xmax;
        let (w, h) = (600.0, 600.0);
        let sx = |x: f64| (x + xmax) / (2.0 * xmax) * w;
        let sy = |y: f64| h - y / ymax * h;
        let table: Vec<String> = (0..=200)
            .map(|k| {
                let x = -xmax + 2.0 * xmax * k as f64 / 200.0;
                format!("{:.3},{:.3}", sx(x), sy(x * x))
            })
            .collect();
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y))).collect();
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <polyline fill=\"none\" stroke=\"black\" points=\"{}\"/>\n\
             <polyline fill=\"none\" stroke=\"red\" points=\"{}\"/>\n</svg>\n",
            table.join(" "),
            path.join(" ")
        )
    }
}

fn psi_strings(psi: &Option<ExtValue>) -> (String, String) {
    match psi {
        None => ("0".into(), "0".into()),
        Some(v) => match v.value() {
            Some(x) => (x.to_string(), "1".into()),
            None => ("1".into(), "0".into()),
        },
    }
}

/// Run `steps` flow steps from `s0`, recording `Ψ` before and after each
/// reflection.
pub fn simulate(
    field: &TransversalField,
    s0: &FlowState,
    steps: usize,
    mode: Traversal,
) -> Result<Trajectory, ProjBilliardError> {
    let psi = psi_catalog(field)?;
    let mut s = s0.clone();
    let mut bounces = Vec::with_capacity(steps);
    for step in 1..=steps {
        let next = flow_step(field, &s, mode)?;
        bounces.push(Bounce {
            step,
            psi_before: eval_psi(&psi, &next.position, &s.velocity),
            psi_after: eval_psi(&psi, &next.position, &next.velocity),
            position: next.position.clone(),
            v_in: s.velocity.clone(),
            v_out: next.velocity.clone(),
        });
        s = next;
    }
    Ok(Trajectory {
        field: field.name(),
        psi_start: eval_psi(&psi, &s0.position, &s0.velocity),
        start: s0.clone(),
        bounces,
    })
}
