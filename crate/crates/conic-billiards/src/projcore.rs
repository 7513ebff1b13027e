//! Projective points and lines, orthogonal polarity, and Möbius maps on
//! affine charts of projective lines — including the involutions `η_ρ`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{NumError, Scalar};

/// Errors raised by projective primitives.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjError {
    /// All homogeneous coordinates vanish.
    #[error("zero homogeneous coordinates")]
    ZeroInput,
    /// Two points (or lines) coincide projectively.
    #[error("coincident points")]
    CoincidentPoints,
    /// Source or target values of a three-pair specification are not distinct.
    #[error("degenerate point pairs for a Möbius map")]
    DegeneratePairs,
    /// Chart coordinates cannot be related.
    #[error("charts cannot be related: {0}")]
    ChartMismatch(String),
    /// The matrix has zero determinant.
    #[error("singular matrix")]
    SingularMatrix,
    /// Scalar arithmetic failure.
    #[error(transparent)]
    Num(#[from] NumError),
}

/// `a × b` for coordinate triples.
pub fn cross(a: &[Scalar; 3], b: &[Scalar; 3]) -> [Scalar; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// `⟨a, b⟩ = Σ aᵢbᵢ`.
pub fn dot(a: &[Scalar; 3], b: &[Scalar; 3]) -> Scalar {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

fn is_null(a: &[Scalar; 3]) -> bool {
    a.iter().all(Scalar::is_zero)
}

fn proportional(a: &[Scalar; 3], b: &[Scalar; 3]) -> bool {
    is_null(&cross(a, b))
}

fn canonical(a: &[Scalar; 3]) -> [Scalar; 3] {
    let k = a.iter().find(|c| !c.is_zero()).expect("nonzero triple").clone();
    std::array::from_fn(|i| &a[i] / &k)
}

/// A point of the projective plane in homogeneous coordinates.
///
/// Equality is equality up to a nonzero factor; [`HomPoint::canonical`] gives
/// the representative whose first nonzero coordinate is 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomPoint {
    /// Homogeneous coordinates, not all zero.
    pub coords: [Scalar; 3],
}

impl HomPoint {
    /// Build from coordinates.
    pub fn new(coords: [Scalar; 3]) -> Result<HomPoint, ProjError> {
        if is_null(&coords) {
            return Err(ProjError::ZeroInput);
        }
        Ok(HomPoint { coords })
    }

    /// The affine point `(x, y)` in the chart `x₃ = 1`.
    pub fn affine(x: Scalar, y: Scalar) -> HomPoint {
        HomPoint { coords: [x, y, Scalar::one()] }
    }

    /// Build from integers.
    pub fn ints(a: i64, b: i64, c: i64) -> HomPoint {
        HomPoint::new([Scalar::int(a), Scalar::int(b), Scalar::int(c)]).expect("nonzero point")
    }

    /// Representative with first nonzero coordinate equal to 1.
    pub fn canonical(&self) -> HomPoint {
        HomPoint { coords: canonical(&self.coords) }
    }

    /// Affine coordinates in the chart `x₃ = 1`, `None` at infinity.
    pub fn to_affine(&self) -> Option<(Scalar, Scalar)> {
        if self.coords[2].is_zero() {
            None
        } else {
            Some((&self.coords[0] / &self.coords[2], &self.coords[1] / &self.coords[2]))
        }
    }

    /// Incidence with a line.
    pub fn lies_on(&self, l: &ProjLine) -> bool {
        dot(&self.coords, &l.covector).is_zero()
    }
}

impl PartialEq for HomPoint {
    fn eq(&self, o: &Self) -> bool {
        proportional(&self.coords, &o.coords)
    }
}

impl Eq for HomPoint {}

impl std::hash::Hash for HomPoint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        canonical(&self.coords).hash(state);
    }
}

impl fmt::Display for HomPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coords;
        write!(f, "[{}:{}:{}]", c[0], c[1], c[2])
    }
}

/// A line of the projective plane given by its covector: the points `x` with
/// `⟨covector, x⟩ = 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjLine {
    /// Covector, not all zero.
    pub covector: [Scalar; 3],
}

impl ProjLine {
    /// Build from a covector.
    pub fn new(covector: [Scalar; 3]) -> Result<ProjLine, ProjError> {
        if is_null(&covector) {
            return Err(ProjError::ZeroInput);
        }
        Ok(ProjLine { covector })
    }

    /// Build from integers.
    pub fn ints(a: i64, b: i64, c: i64) -> ProjLine {
        ProjLine::new([Scalar::int(a), Scalar::int(b), Scalar::int(c)]).expect("nonzero line")
    }

    /// The intersection point of two distinct lines.
    pub fn meet(&self, o: &ProjLine) -> Result<HomPoint, ProjError> {
        HomPoint::new(cross(&self.covector, &o.covector)).map_err(|_| ProjError::CoincidentPoints)
    }

    /// The point at infinity of the line (its direction), or an error for the
    /// line at infinity itself.
    pub fn infinite_point(&self) -> Result<HomPoint, ProjError> {
        let l = &self.covector;
        HomPoint::new([l[1].clone(), -&l[0], Scalar::zero()])
    }

    /// Two distinct points spanning the line.
    pub fn spanning_points(&self) -> (HomPoint, HomPoint) {
        let l = &self.covector;
        let basis = [
            [Scalar::one(), Scalar::zero(), Scalar::zero()],
            [Scalar::zero(), Scalar::one(), Scalar::zero()],
            [Scalar::zero(), Scalar::zero(), Scalar::one()],
        ];
        let mut pts: Vec<[Scalar; 3]> = Vec::new();
        for e in &basis {
            let p = cross(l, e);
            if !is_null(&p) && !pts.iter().any(|q| proportional(q, &p)) {
                pts.push(p);
            }
            if pts.len() == 2 {
                break;
            }
        }
        let mut it = pts.into_iter();
        (
            HomPoint { coords: it.next().expect("two points") },
            HomPoint { coords: it.next().expect("two points") },
        )
    }
}

impl PartialEq for ProjLine {
    fn eq(&self, o: &Self) -> bool {
        proportional(&self.covector, &o.covector)
    }
}

impl Eq for ProjLine {}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.covector;
        write!(f, "{{({})x1 + ({})x2 + ({})x3 = 0}}", c[0], c[1], c[2])
    }
}

/// Input or output of [`polar_dual`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolarObject {
    /// A point.
    Point(HomPoint),
    /// A line.
    Line(ProjLine),
}

/// Orthogonal polarity: the point with coordinates `x` corresponds to the line
/// with covector `x` and vice versa (the line is the projectivised orthogonal
/// complement of the point's direction in 3-space). Involutive.
///
/// ```
/// use conic_billiards::projcore::{polar_dual, HomPoint, PolarObject, ProjLine};
/// let l = polar_dual(&PolarObject::Point(HomPoint::ints(0, 0, 1))).unwrap();
/// assert_eq!(l, PolarObject::Line(ProjLine::ints(0, 0, 1)));
/// ```
pub fn polar_dual(x: &PolarObject) -> Result<PolarObject, ProjError> {
    match x {
        PolarObject::Point(p) => Ok(PolarObject::Line(ProjLine::new(p.coords.clone())?)),
        PolarObject::Line(l) => Ok(PolarObject::Point(HomPoint::new(l.covector.clone())?)),
    }
}

/// The line through two distinct points (cross product of coordinates).
pub fn line_through(p: &HomPoint, q: &HomPoint) -> Result<ProjLine, ProjError> {
    ProjLine::new(cross(&p.coords, &q.coords)).map_err(|_| ProjError::CoincidentPoints)
}

/// A point of a projective line in a chart coordinate: `(x : y)` stands for
/// the chart value `x / y`, with `(1 : 0)` the point at infinity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtValue(pub Scalar, pub Scalar);

impl ExtValue {
    /// A finite chart value.
    pub fn finite(x: Scalar) -> ExtValue {
        ExtValue(x, Scalar::one())
    }

    /// The point at infinity.
    pub fn infinity() -> ExtValue {
        ExtValue(Scalar::one(), Scalar::zero())
    }

    /// True at infinity.
    pub fn is_infinite(&self) -> bool {
        self.1.is_zero()
    }

    /// The finite value, `None` at infinity.
    pub fn value(&self) -> Option<Scalar> {
        (!self.1.is_zero()).then(|| &self.0 / &self.1)
    }
}

impl PartialEq for ExtValue {
    fn eq(&self, o: &Self) -> bool {
        (&self.0 * &o.1) == (&self.1 * &o.0)
    }
}

impl Eq for ExtValue {}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "inf"),
        }
    }
}

/// Affine coordinate on a projective line in which a [`MobiusMap`] acts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "chart", rename_all = "lowercase")]
pub enum Chart {
    /// The reference coordinate `ζ`.
    Zeta,
    /// `u = ζ − 1`.
    U,
    /// `y = 1/(ζ − 1)`.
    Y,
    /// `u = z − z₀` on the tangent line at a point with `z = z₀` of the conic
    /// `{w = z²}`; related to `ζ = z/z₀` by `u = z₀(ζ − 1)` (requires `z₀ ≠ 0`).
    Tangent {
        /// The z-coordinate of the tangency point.
        z0: Scalar,
    },
}

impl Chart {
    /// Matrix `C` with `chart = C(ζ)`.
    fn from_zeta(&self) -> Result<[[Scalar; 2]; 2], ProjError> {
        let (o, z) = (Scalar::one(), Scalar::zero());
        Ok(match self {
            Chart::Zeta => [[o.clone(), z.clone()], [z, o]],
            Chart::U => [[o.clone(), -&o], [z, o]],
            Chart::Y => [[z.clone(), o.clone()], [o.clone(), -&o]],
            Chart::Tangent { z0 } => {
                if z0.is_zero() {
                    return Err(ProjError::ChartMismatch(
                        "the tangent chart at z0 = 0 is not related to zeta = z/z0".into(),
                    ));
                }
                [[z0.clone(), -z0], [z, o]]
            }
        })
    }

    /// Tag used in JSON output.
    pub fn tag(&self) -> &'static str {
        match self {
            Chart::Zeta => "zeta",
            Chart::U | Chart::Tangent { .. } => "u",
            Chart::Y => "y",
        }
    }
}

type Mat2 = [[Scalar; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]))
    })
}

fn det2(a: &Mat2) -> Scalar {
    &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0])
}

fn adjugate(a: &Mat2) -> Mat2 {
    [[a[1][1].clone(), -&a[0][1]], [-&a[1][0], a[0][0].clone()]]
}

/// A Möbius transformation `x ↦ (a x + b)/(c x + d)` acting in a given
/// affine chart of a projective line. Equality is proportionality of the
/// matrices within the same chart (PSL₂ semantics).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MobiusMap {
    /// The matrix `[[a, b], [c, d]]` (nonzero determinant).
    pub matrix: Mat2,
    /// The chart the map acts in.
    pub chart: Chart,
}

impl MobiusMap {
    /// Build a map; fails on a singular matrix.
    pub fn new(matrix: Mat2, chart: Chart) -> Result<MobiusMap, ProjError> {
        if det2(&matrix).is_zero() {
            return Err(ProjError::SingularMatrix);
        }
        Ok(MobiusMap { matrix, chart })
    }

    /// The identity in a chart.
    pub fn identity(chart: Chart) -> MobiusMap {
        MobiusMap {
            matrix: [[Scalar::one(), Scalar::zero()], [Scalar::zero(), Scalar::one()]],
            chart,
        }
    }

    /// Apply to a chart value.
    pub fn apply(&self, x: &ExtValue) -> ExtValue {
        let m = &self.matrix;
        ExtValue(
            &(&m[0][0] * &x.0) + &(&m[0][1] * &x.1),
            &(&m[1][0] * &x.0) + &(&m[1][1] * &x.1),
        )
    }

    /// Apply to a finite chart value.
    pub fn apply_finite(&self, x: &Scalar) -> ExtValue {
        self.apply(&ExtValue::finite(x.clone()))
    }

    /// Composition `self ∘ other` (same chart required).
    pub fn compose(&self, other: &MobiusMap) -> Result<MobiusMap, ProjError> {
        if self.chart != other.chart {
            return Err(ProjError::ChartMismatch("composition across charts".into()));
        }
        MobiusMap::new(mat_mul(&self.matrix, &other.matrix), self.chart.clone())
    }

    /// True iff the square of the matrix is a scalar multiple of the identity
    /// and the map is not the identity.
    pub fn is_involution(&self) -> bool {
        let s = mat_mul(&self.matrix, &self.matrix);
        let scalar_sq = s[0][1].is_zero() && s[1][0].is_zero() && s[0][0] == s[1][1];
        scalar_sq && !self.is_identity()
    }

    /// True iff the matrix is a nonzero multiple of the identity.
    pub fn is_identity(&self) -> bool {
        let m = &self.matrix;
        m[0][1].is_zero() && m[1][0].is_zero() && m[0][0] == m[1][1]
    }

    /// The matrix scaled so that its first nonzero entry is 1.
    pub fn normalized(&self) -> MobiusMap {
        let m = &self.matrix;
        let k = [&m[0][0], &m[0][1], &m[1][0], &m[1][1]]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("nonzero matrix")
            .clone();
        MobiusMap {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| &m[i][j] / &k)),
            chart: self.chart.clone(),
        }
    }

    /// Fixed points in the chart.
    pub fn fixed_points(&self) -> Result<Vec<ExtValue>, ProjError> {
        // c x² + (d − a) x − b = 0 (with ∞ fixed when c = 0).
        let m = &self.matrix;
        let (a, b, c, d) = (&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
        if c.is_zero() {
            let mut out = vec![ExtValue::infinity()];
            let lin = d - a;
            if !lin.is_zero() {
                out.push(ExtValue::finite(b.checked_div(&lin)?));
            }
            return Ok(out);
        }
        let roots = crate::integrals::poly::quadratic_roots(c, &(d - a), &-b)?;
        Ok(roots.into_iter().map(ExtValue::finite).collect())
    }
}

impl PartialEq for MobiusMap {
    fn eq(&self, o: &Self) -> bool {
        if self.chart != o.chart {
            return false;
        }
        let a = &self.matrix;
        let b = &o.matrix;
        let av = [&a[0][0], &a[0][1], &a[1][0], &a[1][1]];
        let bv = [&b[0][0], &b[0][1], &b[1][0], &b[1][1]];
        (0..4).all(|i| (0..4).all(|j| (av[i] * bv[j]) == (av[j] * bv[i])))
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        write!(
            f,
            "x -> (({})x + ({}))/(({})x + ({})) [{}]",
            m[0][0],
            m[0][1],
            m[1][0],
            m[1][1],
            self.chart.tag()
        )
    }
}

/// The involution `η_ρ(ζ) = ((ρ−1)ζ − (ρ−2)) / (ρζ − (ρ−1))` in the chart `ζ`.
///
/// It fixes `ζ = 1` and `ζ = (ρ−2)/ρ` and sends `∞` to `θ_ρ = (ρ−1)/ρ`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::projcore::{eta, ExtValue};
/// // η₁ is ζ ↦ 1/ζ.
/// let e = eta(&Scalar::one());
/// assert_eq!(e.apply_finite(&Scalar::int(4)), ExtValue::finite(Scalar::ratio(1, 4)));
/// ```
pub fn eta(rho: &Scalar) -> MobiusMap {
    let one = Scalar::one();
    let two = Scalar::int(2);
    MobiusMap {
        matrix: [[rho - &one, -(rho - &two)], [rho.clone(), -(rho - &one)]],
        chart: Chart::Zeta,
    }
}

/// `θ_ρ = (ρ − 1)/ρ = η_ρ(∞)` as an extended value (∞ for `ρ = 0`).
pub fn theta(rho: &Scalar) -> ExtValue {
    ExtValue(rho - &Scalar::one(), rho.clone())
}

/// The unique Möbius map sending three distinct sources to three distinct
/// targets.
pub fn mobius_from_three_pairs(
    pairs: [(ExtValue, ExtValue); 3],
    chart: Chart,
) -> Result<MobiusMap, ProjError> {
    // Matrix sending e₁ ↦ p₁, e₂ ↦ p₂, (1,1) ↦ p₃ (up to scalars).
    fn frame(p: [&ExtValue; 3]) -> Result<Mat2, ProjError> {
        let v = |e: &ExtValue| [e.0.clone(), e.1.clone()];
        let (a, b, c) = (v(p[0]), v(p[1]), v(p[2]));
        let base = [[a[0].clone(), b[0].clone()], [a[1].clone(), b[1].clone()]];
        let d = det2(&base);
        if d.is_zero() {
            return Err(ProjError::DegeneratePairs);
        }
        // Solve λ a + μ b = c.
        let l = (&(&c[0] * &b[1]) - &(&c[1] * &b[0])) / &d;
        let m = (&(&a[0] * &c[1]) - &(&a[1] * &c[0])) / &d;
        if l.is_zero() || m.is_zero() {
            return Err(ProjError::DegeneratePairs);
        }
        Ok([[&a[0] * &l, &b[0] * &m], [&a[1] * &l, &b[1] * &m]])
    }
    let src = frame([&pairs[0].0, &pairs[1].0, &pairs[2].0])?;
    let dst = frame([&pairs[0].1, &pairs[1].1, &pairs[2].1])?;
    let m = mat_mul(&dst, &adjugate(&src));
    Ok(MobiusMap::new(m, chart)?.normalized())
}

/// Re-express a Möbius map in another chart of the same line.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::projcore::{chart_transport, eta, Chart, MobiusMap};
/// // In y = 1/(ζ − 1), η_ρ is the reflection y ↦ −y − ρ.
/// let rho = Scalar::ratio(4, 3);
/// let m = chart_transport(&eta(&rho), &Chart::Y).unwrap();
/// let want = MobiusMap::new(
///     [[-Scalar::one(), -rho.clone()], [Scalar::zero(), Scalar::one()]],
///     Chart::Y,
/// ).unwrap();
/// assert_eq!(m, want);
/// ```
pub fn chart_transport(m: &MobiusMap, to: &Chart) -> Result<MobiusMap, ProjError> {
    let from = m.chart.from_zeta()?;
    let to_m = to.from_zeta()?;
    // chart_to = T ∘ F⁻¹ (chart_from)
    let change = mat_mul(&to_m, &adjugate(&from));
    let conj = mat_mul(&mat_mul(&change, &m.matrix), &adjugate(&change));
    Ok(MobiusMap::new(conj, to.clone())?.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(n: i64, d: i64) -> ExtValue {
        ExtValue::finite(Scalar::ratio(n, d))
    }

    #[test]
    fn polarity_examples() {
        let p = HomPoint::ints(3, 5, 7);
        let l = polar_dual(&PolarObject::Point(p.clone())).unwrap();
        assert_eq!(polar_dual(&l).unwrap(), PolarObject::Point(p));
        // Tangent line to {wt = z²} at (z₀, z₀²) has covector (−2z₀, 1, z₀²).
        let z0 = Scalar::int(3);
        let line = ProjLine::new([Scalar::int(-6), Scalar::one(), &z0 * &z0]).unwrap();
        let q = polar_dual(&PolarObject::Line(line)).unwrap();
        assert_eq!(
            q,
            PolarObject::Point(HomPoint::new([Scalar::int(-6), Scalar::one(), Scalar::int(9)]).unwrap())
        );
    }

    #[test]
    fn lines_through_points() {
        let l = line_through(&HomPoint::ints(1, 0, 1), &HomPoint::ints(0, 1, 1)).unwrap();
        assert_eq!(l, ProjLine::ints(-1, -1, 1));
        let l = line_through(&HomPoint::ints(0, 0, 1), &HomPoint::ints(1, 0, 1)).unwrap();
        assert_eq!(l, ProjLine::ints(0, 1, 0));
        assert_eq!(
            line_through(&HomPoint::ints(1, 2, 3), &HomPoint::ints(2, 4, 6)),
            Err(ProjError::CoincidentPoints)
        );
    }

    #[test]
    fn eta_examples() {
        // ρ = 0: ζ ↦ 2 − ζ
        let e0 = eta(&Scalar::zero());
        assert_eq!(e0.apply_finite(&Scalar::int(5)), fin(-3, 1));
        // ρ = 1: ζ ↦ 1/ζ
        assert_eq!(eta(&Scalar::one()).apply_finite(&Scalar::int(3)), fin(1, 3));
        // ρ = 2: ζ ↦ ζ/(2ζ − 1), swapping ∞ and 1/2 and fixing 1
        let e2 = eta(&Scalar::int(2));
        assert_eq!(e2.apply(&ExtValue::infinity()), fin(1, 2));
        assert_eq!(e2.apply(&fin(1, 2)), ExtValue::infinity());
        assert_eq!(e2.apply(&fin(1, 1)), fin(1, 1));
        assert!(e2.is_involution());
    }

    #[test]
    fn three_pairs_examples() {
        let m = mobius_from_three_pairs(
            [(fin(0, 1), fin(0, 1)), (fin(1, 1), fin(-1, 1)), (ExtValue::infinity(), ExtValue::infinity())],
            Chart::Zeta,
        )
        .unwrap();
        assert_eq!(m.apply(&fin(7, 2)), fin(-7, 2));
        let m = mobius_from_three_pairs(
            [(fin(1, 1), fin(1, 1)), (fin(0, 1), ExtValue::infinity()), (ExtValue::infinity(), fin(0, 1))],
            Chart::Zeta,
        )
        .unwrap();
        assert_eq!(m, eta(&Scalar::one()));
        let m = mobius_from_three_pairs(
            [(fin(1, 1), fin(1, 1)), (fin(1, 2), ExtValue::infinity()), (ExtValue::infinity(), fin(1, 2))],
            Chart::Zeta,
        )
        .unwrap();
        assert_eq!(m, eta(&Scalar::int(2)));
        assert_eq!(
            mobius_from_three_pairs(
                [(fin(1, 1), fin(1, 1)), (fin(1, 1), fin(2, 1)), (fin(3, 1), fin(3, 1))],
                Chart::Zeta
            ),
            Err(ProjError::DegeneratePairs)
        );
    }

    #[test]
    fn chart_examples() {
        let rho = Scalar::ratio(5, 3);
        let u = chart_transport(&eta(&rho), &Chart::U).unwrap();
        // u ↦ −u/(1 + ρu)
        let want = MobiusMap::new(
            [[-Scalar::one(), Scalar::zero()], [rho.clone(), Scalar::one()]],
            Chart::U,
        )
        .unwrap();
        assert_eq!(u, want);
        let id = MobiusMap::identity(Chart::Zeta);
        assert!(chart_transport(&id, &Chart::Y).unwrap().is_identity());
        // The composite η₂∘η_ρ is the translation y ↦ y + ρ − 2.
        let t = eta(&Scalar::int(2)).compose(&eta(&rho)).unwrap();
        let ty = chart_transport(&t, &Chart::Y).unwrap();
        let want = MobiusMap::new(
            [[Scalar::one(), &rho - &Scalar::int(2)], [Scalar::zero(), Scalar::one()]],
            Chart::Y,
        )
        .unwrap();
        assert_eq!(ty, want);
    }

    #[test]
    fn fixed_points_of_eta() {
        let rho = Scalar::ratio(8, 3);
        let fp = eta(&rho).fixed_points().unwrap();
        assert!(fp.contains(&fin(1, 1)));
        assert!(fp.contains(&ExtValue::finite(&(&rho - &Scalar::int(2)) / &rho)));
    }
}
