//! Conics as symmetric matrices, tangency and line–conic intersection over
//! quadratic extensions, pencils of conics with their dual billiard
//! involutions, and space-form transversal lines with the caustic check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{NumError, Scalar};
use crate::integrals::poly::{Poly, UniPoly};
use crate::projcore::{
    cross, dot, mobius_from_three_pairs, Chart, ExtValue, HomPoint, MobiusMap, ProjError, ProjLine,
};

/// Errors raised by conic computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConicError {
    /// The matrix is not symmetric.
    #[error("conic matrix is not symmetric")]
    NotSymmetric,
    /// The point does not lie on the conic.
    #[error("point is not on the conic")]
    PointNotOnConic,
    /// The point lies on the conic where a point off it was required.
    #[error("point lies on the conic")]
    PointOnConic,
    /// The conic is singular at the point (no tangent line).
    #[error("conic is singular at the point")]
    SingularPoint,
    /// The conic is degenerate where a regular one was required.
    #[error("conic is singular")]
    SingularConic,
    /// The line lies on the conic.
    #[error("line is contained in the conic")]
    LineOnConic,
    /// The point is a base point of the pencil.
    #[error("point is a base point of the pencil")]
    BasePoint,
    /// No pencil member meets the tangent line in two usable points.
    #[error("no non-degenerate pencil member found")]
    DegenerateMember,
    /// The pencil involution failed validation against another member.
    #[error("pencil involution failed validation against member {0}")]
    ValidationFailed(String),
    /// The form matrix does not define a transversal at this point.
    #[error("form matrix gives no transversal line here")]
    SingularA,
    /// A value outside ℚ or the current quadratic field was required.
    #[error("not representable: {0}")]
    NotRepresentable(String),
    /// Projective primitive failure.
    #[error(transparent)]
    Proj(#[from] ProjError),
    /// Scalar arithmetic failure.
    #[error(transparent)]
    Num(#[from] NumError),
}

type Mat3 = [[Scalar; 3]; 3];

fn mat_vec(m: &Mat3, v: &[Scalar; 3]) -> [Scalar; 3] {
    std::array::from_fn(|i| dot(&m[i], v))
}

fn det3(m: &Mat3) -> Scalar {
    dot(&m[0], &cross(&m[1], &m[2]))
}

fn adjugate3(m: &Mat3) -> Mat3 {
    // Columns of the adjugate are cross products of rows: adj = [r1×r2, r2×r0, r0×r1]ᵀ.
    let c0 = cross(&m[1], &m[2]);
    let c1 = cross(&m[2], &m[0]);
    let c2 = cross(&m[0], &m[1]);
    std::array::from_fn(|i| [c0[i].clone(), c1[i].clone(), c2[i].clone()])
}

/// A conic `{⟨Mx, x⟩ = 0}` given by a symmetric 3×3 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConicRepr", into = "ConicRepr")]
pub struct Conic {
    m: Mat3,
}

/// JSON form of a conic: the upper triangle `[m00, m01, m02, m11, m12, m22]`.
#[derive(Serialize, Deserialize)]
struct ConicRepr([Scalar; 6]);

impl TryFrom<ConicRepr> for Conic {
    type Error = ConicError;
    fn try_from(r: ConicRepr) -> Result<Self, Self::Error> {
        let [a, b, c, d, e, f] = r.0;
        Conic::new([[a, b.clone(), c.clone()], [b, d, e.clone()], [c, e, f]])
    }
}

impl From<Conic> for ConicRepr {
    fn from(c: Conic) -> Self {
        let m = c.m;
        ConicRepr([
            m[0][0].clone(),
            m[0][1].clone(),
            m[0][2].clone(),
            m[1][1].clone(),
            m[1][2].clone(),
            m[2][2].clone(),
        ])
    }
}

impl Conic {
    /// Build from a symmetric matrix.
    pub fn new(m: Mat3) -> Result<Conic, ConicError> {
        for i in 0..3 {
            for j in 0..i {
                if m[i][j] != m[j][i] {
                    return Err(ConicError::NotSymmetric);
                }
            }
        }
        Ok(Conic { m })
    }

    /// Build from a homogeneous quadratic form in `(x₁, x₂, x₃)`.
    pub fn from_poly(q: &Poly) -> Result<Conic, ConicError> {
        if q.homogeneous_degree() != Some(2) {
            return Err(ConicError::NotRepresentable("conic polynomial must be a quadratic form".into()));
        }
        let half = Scalar::ratio(1, 2);
        let mut m: Mat3 = std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero()));
        for (e, c) in q.terms() {
            let idx: Vec<usize> = (0..3).flat_map(|i| std::iter::repeat(i).take(e[i] as usize)).collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m[i][i] = c.clone();
            } else {
                m[i][j] = c * &half;
                m[j][i] = c * &half;
            }
        }
        Conic::new(m)
    }

    /// The quadratic form `⟨Mx, x⟩` as a polynomial.
    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut e = [0u32; 3];
                e[i] += 1;
                e[j] += 1;
                p = &p + &Poly::monomial(e, self.m[i][j].clone());
            }
        }
        p
    }

    /// The matrix.
    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    /// The standard conic `γ = {wt = z²}` in coordinates `(z, w, t)`; in the
    /// chart `t = 1` it is the parabola `w = z²`.
    pub fn standard() -> Conic {
        Conic::from_poly(&Poly::from_int_terms(&[([0, 1, 1], 1), ([2, 0, 0], -1)])).expect("quadratic form")
    }

    /// The form `diag(a, b, c)`.
    pub fn diagonal(a: Scalar, b: Scalar, c: Scalar) -> Conic {
        let z = Scalar::zero;
        Conic { m: [[a, z(), z()], [z(), b, z()], [z(), z(), c]] }
    }

    /// `⟨Mx, x⟩`.
    pub fn eval(&self, p: &HomPoint) -> Scalar {
        dot(&mat_vec(&self.m, &p.coords), &p.coords)
    }

    /// The symmetric bilinear form `⟨Mx, y⟩`.
    pub fn bilinear(&self, x: &[Scalar; 3], y: &[Scalar; 3]) -> Scalar {
        dot(&mat_vec(&self.m, x), y)
    }

    /// Determinant of the matrix.
    pub fn det(&self) -> Scalar {
        det3(&self.m)
    }

    /// True iff the conic is regular (nonzero determinant).
    pub fn is_regular(&self) -> bool {
        !self.det().is_zero()
    }

    /// True iff the point lies on the conic.
    pub fn contains(&self, p: &HomPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// `self − λ·other` (pencil member arithmetic).
    pub fn minus_scaled(&self, lambda: &Scalar, other: &Conic) -> Conic {
        Conic {
            m: std::array::from_fn(|i| std::array::from_fn(|j| &self.m[i][j] - &(lambda * &other.m[i][j]))),
        }
    }
}

/// The tangent line to `C` at a point `P ∈ C`: covector `M·P`.
///
/// ```
/// use conic_billiards::conicpencil::{tangent_line, Conic};
/// use conic_billiards::projcore::{HomPoint, ProjLine};
/// // At (1, 1) on w = z² the tangent is w = 2z − 1.
/// let l = tangent_line(&Conic::standard(), &HomPoint::ints(1, 1, 1)).unwrap();
/// assert_eq!(l, ProjLine::ints(2, -1, -1));
/// ```
pub fn tangent_line(c: &Conic, p: &HomPoint) -> Result<ProjLine, ConicError> {
    if !c.contains(p) {
        return Err(ConicError::PointNotOnConic);
    }
    ProjLine::new(mat_vec(&c.m, &p.coords)).map_err(|_| ConicError::SingularPoint)
}

/// Roots `(λ : μ)` of the binary quadratic `α λ² + 2β λμ + γ μ²`.
fn binary_quadratic_roots(
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
) -> Result<[(Scalar, Scalar); 2], ConicError> {
    if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
        return Err(ConicError::LineOnConic);
    }
    if alpha.is_zero() {
        // λ(2βλ... ) : μ = 0 is a root; the other solves 2βλ + γμ = 0.
        return Ok([(Scalar::one(), Scalar::zero()), (gamma.clone(), -(Scalar::int(2) * beta))]);
    }
    let disc = beta.checked_mul(beta)?.checked_sub(&alpha.checked_mul(gamma)?)?;
    let s = disc
        .sqrt_in_field()?
        .ok_or_else(|| ConicError::NotRepresentable(format!("square root of {disc}")))?;
    let mb = -beta;
    Ok([
        (mb.checked_add(&s)?, alpha.clone()),
        (mb.checked_sub(&s)?, alpha.clone()),
    ])
}

/// The two intersection points of a line with a conic, over ℚ or the
/// quadratic field of the discriminant. A tangent line yields the same point
/// twice.
pub fn line_conic_points(c: &Conic, l: &ProjLine) -> Result<[HomPoint; 2], ConicError> {
    let (a, b) = l.spanning_points();
    let alpha = c.eval(&a);
    let beta = c.bilinear(&a.coords, &b.coords);
    let gamma = c.eval(&b);
    let roots = binary_quadratic_roots(&alpha, &beta, &gamma)?;
    let pt = |(lam, mu): &(Scalar, Scalar)| -> Result<HomPoint, ConicError> {
        let coords: [Scalar; 3] = std::array::from_fn(|i| &(lam * &a.coords[i]) + &(mu * &b.coords[i]));
        Ok(HomPoint::new(coords)?)
    };
    Ok([pt(&roots[0])?, pt(&roots[1])?])
}

/// The ζ-coordinate `z/z₀` of a point of the tangent line to `{w = z²}` at
/// `(z₀, z₀²)` (`None` at infinity).
pub fn zeta_coordinate(p: &HomPoint, z0: &Scalar) -> Option<Scalar> {
    let (z, _) = p.to_affine()?;
    Some(&z / z0)
}

/// A pencil `{B − λA}` of conics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pencil {
    /// The conic `A`.
    pub a: Conic,
    /// The conic `B` (the member carrying the dual billiard).
    pub b: Conic,
    /// Base points with contact orders, populated on demand by
    /// [`Pencil::with_base_points`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_points: Option<Vec<(HomPoint, usize)>>,
}

impl Pencil {
    /// Build a pencil; `A` and `B` must not be proportional.
    pub fn new(a: Conic, b: Conic) -> Result<Pencil, ConicError> {
        let pa = a.to_poly();
        let pb = b.to_poly();
        // Proportional iff pb·c(pa) = pa·c(pb) for leading coefficients.
        let (ea, ca) = pa.terms().next().ok_or(ConicError::DegenerateMember)?;
        let cb = pb.coeff(ea);
        if pb.is_zero() || pa.scale(&cb) == pb.scale(ca) {
            return Err(ConicError::DegenerateMember);
        }
        Ok(Pencil { a, b, base_points: None })
    }

    /// The member `B − λA`.
    pub fn member(&self, lambda: &Scalar) -> Conic {
        self.b.minus_scaled(lambda, &self.a)
    }

    /// Base points of the pencil on `B` with contact orders (intersection
    /// multiplicities of `A` and `B`), for `B` equal to the standard conic
    /// `{wt = z²}`. Base points must lie in ℚ or one quadratic field.
    pub fn base_points_on_standard(&self) -> Result<Vec<(HomPoint, usize)>, ConicError> {
        let k = Scalar::int(2) * &self.b.matrix()[1][2];
        if k.is_zero() || self.b.to_poly() != Conic::standard().to_poly().scale(&k) {
            return Err(ConicError::NotRepresentable(
                "base points are computed for pencils whose carrier is {wt = z^2}".into(),
            ));
        }
        // Parametrise B by [s : s² : 1] and restrict A.
        let q = self.a.to_poly();
        let s = UniPoly::x();
        let quartic = q.substitute_uni(&[s.clone(), &s * &s, UniPoly::one()]);
        if quartic.is_zero() {
            return Err(ConicError::DegenerateMember);
        }
        let mut out = Vec::new();
        for (r, m) in quartic.roots()? {
            out.push((HomPoint::new([r.clone(), &r * &r, Scalar::one()])?, m));
        }
        let at_inf = 4 - quartic.degree().unwrap_or(0);
        if at_inf > 0 {
            out.push((HomPoint::ints(0, 1, 0), at_inf));
        }
        Ok(out)
    }

    /// Populate the cached base-point list.
    pub fn with_base_points(mut self) -> Result<Pencil, ConicError> {
        self.base_points = Some(self.base_points_on_standard()?);
        Ok(self)
    }
}

/// Parameter `(β : α)` of `X = αP + βD` on the line spanned by `P` and `D`.
fn line_param(x: &[Scalar; 3], p: &[Scalar; 3], d: &[Scalar; 3]) -> ExtValue {
    // Pick two coordinates with a nonzero 2×2 minor of (P, D).
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let det = &(&p[i] * &d[j]) - &(&p[j] * &d[i]);
        if det.is_zero() {
            continue;
        }
        let alpha = &(&x[i] * &d[j]) - &(&x[j] * &d[i]);
        let beta = &(&p[i] * &x[j]) - &(&p[j] * &x[i]);
        return ExtValue(beta, alpha);
    }
    unreachable!("P and D span a line")
}

/// The chart used for involutions on the tangent line `L_P`: points are
/// `P + s·D` with `D` the point at infinity of `L_P`, scaled to have first
/// coordinate 1 when possible. On `{wt = z²}` at an affine `P` this is
/// `s = z − z₀`.
pub fn tangent_frame(l: &ProjLine, p: &HomPoint) -> Result<([Scalar; 3], [Scalar; 3]), ConicError> {
    let origin = match p.to_affine() {
        Some((x, y)) => [x, y, Scalar::one()],
        None => p.coords.clone(),
    };
    let d = match l.infinite_point() {
        Ok(d) if d != *p => d.coords,
        _ => {
            // Tangent line at infinity or P at infinity: use any other point.
            let (a, b) = l.spanning_points();
            if a != *p { a.coords } else { b.coords }
        }
    };
    let d = if !d[0].is_zero() {
        let k = d[0].clone();
        std::array::from_fn(|i| &d[i] / &k)
    } else {
        d
    };
    Ok((origin, d))
}

/// Coefficients `(c₀, c₁, c₂)` of the restriction of a conic to `P + sD`.
fn restricted_quadratic(c: &Conic, p: &[Scalar; 3], d: &[Scalar; 3]) -> [Scalar; 3] {
    [
        c.bilinear(p, p),
        Scalar::int(2) * c.bilinear(p, d),
        c.bilinear(d, d),
    ]
}

/// The involution `σ_P` of the tangent line `L_P` to `B` induced by the pencil:
/// it fixes `P` and swaps the two intersection points of `L_P` with every
/// member of the pencil.
///
/// It is constructed from one member by three point pairs and validated
/// against a second member; the chart is `s` with points `P + s·D` (see
/// [`tangent_frame`]), reported as [`Chart::Tangent`] when `B = {wt = z²}`.
pub fn pencil_involution(p: &Pencil, pt: &HomPoint) -> Result<MobiusMap, ConicError> {
    let l = tangent_line(&p.b, pt)?;
    if p.a.contains(pt) {
        return Err(ConicError::BasePoint);
    }
    let (o, d) = tangent_frame(&l, pt)?;
    let chart = match pt.to_affine() {
        Some((z0, _)) if p.b == Conic::standard() => Chart::Tangent { z0 },
        _ => Chart::Zeta,
    };
    let candidates = [
        Scalar::one(),
        Scalar::int(-1),
        Scalar::int(2),
        Scalar::ratio(1, 2),
        Scalar::int(3),
        Scalar::int(-3),
        Scalar::ratio(-1, 2),
    ];
    let mut built: Option<(MobiusMap, usize)> = None;
    for (k, lam) in candidates.iter().enumerate() {
        let member = p.member(lam);
        let pts = match line_conic_points(&member, &l) {
            Ok(pts) => pts,
            Err(ConicError::LineOnConic | ConicError::NotRepresentable(_)) => continue,
            Err(e) => return Err(e),
        };
        if pts[0] == pts[1] || pts.iter().any(|x| x == pt) {
            continue;
        }
        let s1 = line_param(&pts[0].coords, &o, &d);
        let s2 = line_param(&pts[1].coords, &o, &d);
        let zero = ExtValue::finite(Scalar::zero());
        let m = mobius_from_three_pairs(
            [(zero.clone(), zero), (s1.clone(), s2.clone()), (s2, s1)],
            chart.clone(),
        )?;
        built = Some((m, k));
        break;
    }
    let (m, used) = built.ok_or(ConicError::DegenerateMember)?;
    // Validate against another member: the involution x ↦ a x/(c x − a)
    // pairs the roots of c₂s² + c₁s + c₀ iff c·c₀ + a·c₁ = 0.
    let mat = &m.matrix;
    let (a, c) = (&mat[0][0], &mat[1][0]);
    for lam in candidates.iter().enumerate().filter(|(k, _)| *k != used).map(|(_, l)| l).take(2) {
        let q = restricted_quadratic(&p.member(lam), &o, &d);
        if q.iter().all(Scalar::is_zero) {
            continue;
        }
        let rel = &(c * &q[0]) + &(a * &q[1]);
        if !rel.is_zero() {
            return Err(ConicError::ValidationFailed(lam.to_string()));
        }
    }
    Ok(m)
}

/// The two lines through `Q` tangent to the regular conic `C`, over ℚ or the
/// quadratic field of the discriminant.
pub fn tangents_from_point(c: &Conic, q: &HomPoint) -> Result<[ProjLine; 2], ConicError> {
    if !c.is_regular() {
        return Err(ConicError::SingularConic);
    }
    if c.contains(q) {
        return Err(ConicError::PointOnConic);
    }
    // Lines through Q form the pencil λℓ₁ + μℓ₂; tangency is ℓᵀ adj(M) ℓ = 0.
    let dual = Conic { m: adjugate3(&c.m) };
    let basis = [HomPoint::ints(1, 0, 0), HomPoint::ints(0, 1, 0), HomPoint::ints(0, 0, 1)];
    let mut lines: Vec<[Scalar; 3]> = Vec::new();
    for e in &basis {
        let l = cross(&q.coords, &e.coords);
        if l.iter().any(|x| !x.is_zero()) && !lines.iter().any(|m| cross(m, &l).iter().all(Scalar::is_zero)) {
            lines.push(l);
        }
    }
    let (l1, l2) = (&lines[0], &lines[1]);
    let alpha = dual.bilinear(l1, l1);
    let beta = dual.bilinear(l1, l2);
    let gamma = dual.bilinear(l2, l2);
    let roots = binary_quadratic_roots(&alpha, &beta, &gamma)?;
    let mk = |(lam, mu): &(Scalar, Scalar)| -> Result<ProjLine, ConicError> {
        Ok(ProjLine::new(std::array::from_fn(|i| &(lam * &l1[i]) + &(mu * &l2[i])))?)
    };
    Ok([mk(&roots[0])?, mk(&roots[1])?])
}

/// True iff the line meets the conic in a doubled point (zero discriminant of
/// the restricted quadratic).
pub fn is_tangent(c: &Conic, l: &ProjLine) -> bool {
    let (a, b) = l.spanning_points();
    let alpha = c.eval(&a);
    let beta = c.bilinear(&a.coords, &b.coords);
    let gamma = c.eval(&b);
    (&(&beta * &beta) - &(&alpha * &gamma)).is_zero()
}

/// The transversal line at `Q ∈ C` of the space form billiard given by the
/// form matrix `A`.
///
/// * `A = diag(1, 1, 0)` (Euclidean case): the Euclidean normal line at `Q`
///   in the chart `x₃ = 1`.
/// * `det A ≠ 0`: the line through `Q` and the point `m = A⁻¹(r × τ)`, where
///   `r` is the lift of `Q` and `τ` the tangent direction. Equivalently, the
///   transversal plane contains `r` and the `⟨Ax, x⟩`-orthogonal complement
///   of the tangent plane.
pub fn space_form_transversal(a: &Conic, c: &Conic, q: &HomPoint) -> Result<ProjLine, ConicError> {
    let tl = tangent_line(c, q)?;
    let euclid = Conic::diagonal(Scalar::one(), Scalar::one(), Scalar::zero());
    let normal_point = if *a == euclid {
        let l = &tl.covector;
        if q.coords[2].is_zero() {
            return Err(ConicError::SingularA);
        }
        [l[0].clone(), l[1].clone(), Scalar::zero()]
    } else {
        let det = a.det();
        if det.is_zero() {
            return Err(ConicError::SingularA);
        }
        // r × τ is the tangent covector; A⁻¹ = adj(A)/det.
        let adj = adjugate3(&a.m);
        mat_vec(&adj, &tl.covector)
    };
    ProjLine::new(cross(&q.coords, &normal_point)).map_err(|_| ConicError::SingularA)
}

/// True iff the projective billiard reflection at `Q ∈ C` with transversal
/// line `N` swaps the two lines through `Q` tangent to `S`.
pub fn caustic_reflection_check(
    c: &Conic,
    transversal: &ProjLine,
    s: &Conic,
    q: &HomPoint,
) -> Result<bool, ConicError> {
    if q.to_affine().is_none() {
        return Err(ConicError::SingularPoint);
    }
    let tl = tangent_line(c, q)?;
    if !q.lies_on(transversal) || *transversal == tl {
        return Err(ConicError::SingularA);
    }
    let dir = |l: &ProjLine| [l.covector[1].clone(), -&l.covector[0]];
    let t = dir(&tl);
    let n = dir(transversal);
    let [l1, l2] = tangents_from_point(s, q)?;
    let d1 = dir(&l1);
    let d2 = dir(&l2);
    let r = crate::projbilliard::reflect_vector(&t, &n, &d1)
        .map_err(|_| ConicError::SingularA)?;
    Ok((&(&r[0] * &d2[1]) - &(&r[1] * &d2[0])).is_zero())
}
