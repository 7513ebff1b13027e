//! Exact verification of first integrals: invariance under the dual
//! billiard involutions, restriction to lines, the `ρ ↔ 4 − ρ` swap and the
//! projective equivalences between configurations.

use serde::Serialize;

use super::catalog::{catalog_integral, classpqr_integral, gamma_form};
use super::poly::{Poly, RatFn, UniPoly};
use super::rational::HomRational;
use super::IntegralError;
use crate::dualbilliard::{conic_point, sigma_at, BilliardSpec};
use crate::exactnum::Scalar;
use crate::projcore::{ExtValue, ProjLine};
use crate::sampling::SamplePlan;

/// A sampled pair `(P, u)` where `R(σ_P(x)) ≠ R(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    /// `z₀ = z(P)`.
    pub z0: String,
    /// Chart value `u` of `x` on the tangent line.
    pub u: String,
    /// Chart value of `σ_P(x)`.
    pub image: String,
    /// `R(x)`.
    pub value: String,
    /// `R(σ_P(x))`.
    pub image_value: String,
}

/// Outcome of an invariance verification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    /// Spec tag.
    pub spec: String,
    /// Number of `(P, u)` pairs compared.
    pub checked: usize,
    /// Pairs skipped (singular `P`, `σ_P(x)` at infinity, or `R` indeterminate).
    pub skipped: usize,
    /// Failing pairs.
    pub counterexamples: Vec<Counterexample>,
}

impl InvarianceReport {
    /// True iff no counterexample was found and at least one pair was checked.
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.checked > 0
    }
}

/// The point `P + u·(1, 2z₀, 0)` of the tangent line to `γ` at `(z₀, z₀²)`.
pub fn tangent_line_point(z0: &Scalar, u: &Scalar) -> [Scalar; 3] {
    [z0 + u, &(z0 * z0) + &(Scalar::int(2) * (z0 * u)), Scalar::one()]
}

/// Check `R ∘ σ_P = R` on the tangent lines of `γ` at random rational points,
/// exactly. Sampling follows `plan`; singular points, images at infinity and
/// indeterminate values are skipped and redrawn (bounded retries).
///
/// ```
/// use conic_billiards::dualbilliard::BilliardSpec;
/// use conic_billiards::integrals::{catalog_integral, verify_invariance};
/// use conic_billiards::sampling::SamplePlan;
/// let plan = SamplePlan { points: 4, values_per_point: 2, height: 100, seed: 1 };
/// let r = catalog_integral(&BilliardSpec::D).unwrap();
/// assert!(verify_invariance(&r, &BilliardSpec::D, &plan).passed());
/// ```
pub fn verify_invariance(r: &HomRational, spec: &BilliardSpec, plan: &SamplePlan) -> InvarianceReport {
    let mut s = plan.sampler();
    let mut report = InvarianceReport { spec: spec.to_string(), checked: 0, skipped: 0, counterexamples: vec![] };
    let max_tries = 20;
    for _ in 0..plan.points {
        let mut sigma = None;
        for _ in 0..max_tries {
            let z0 = s.rational();
            match sigma_at(spec, &conic_point(&z0)) {
                Ok(m) => {
                    sigma = Some((z0, m));
                    break;
                }
                Err(_) => report.skipped += 1,
            }
        }
        let Some((z0, m)) = sigma else { continue };
        let mut done = 0;
        let mut tries = 0;
        while done < plan.values_per_point && tries < max_tries * plan.values_per_point {
            tries += 1;
            let u = s.rational();
            let Some(u2) = m.apply_finite(&u).value() else {
                report.skipped += 1;
                continue;
            };
            let (Some(a), Some(b)) = (r.eval(&tangent_line_point(&z0, &u)), r.eval(&tangent_line_point(&z0, &u2)))
            else {
                report.skipped += 1;
                continue;
            };
            done += 1;
            report.checked += 1;
            if a != b {
                let show = |v: &ExtValue| match v.value() {
                    Some(x) => x.to_string(),
                    None => "inf".into(),
                };
                report.counterexamples.push(Counterexample {
                    z0: z0.to_string(),
                    u: u.to_string(),
                    image: u2.to_string(),
                    value: show(&a),
                    image_value: show(&b),
                });
            }
        }
    }
    report
}

/// Restriction of `R` to the line `L` (chart `t = 1`), as a rational
/// function of the coordinate `z` along `L`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::integrals::{classpqr_integral, restrict_to_line, RatFn, UniPoly};
/// use conic_billiards::projcore::ProjLine;
/// // The tangent line to w = z² at (1, 1) is w = 2z − 1.
/// let l = ProjLine::ints(2, -1, -1);
/// let r2 = restrict_to_line(&classpqr_integral(&Scalar::int(2)).unwrap(), &l).unwrap();
/// let want = RatFn::new(UniPoly::from_ints(&[-1, 2, -1]), UniPoly::from_ints(&[-1, 2]));
/// assert!(r2.same_function(&want));
/// ```
pub fn restrict_to_line(r: &HomRational, l: &ProjLine) -> Result<RatFn, IntegralError> {
    let [a, b, c] = &l.covector;
    if b.is_zero() {
        return Err(IntegralError::LineInLocus);
    }
    // a z + b w + c = 0  ⇒  w = −(a z + c)/b.
    let w = UniPoly::linear(-(a / b), -(c / b));
    let subs = [UniPoly::x(), w, UniPoly::one()];
    let num = r.num.substitute_uni(&subs);
    let den = r.den.substitute_uni(&subs);
    if num.is_zero() || den.is_zero() {
        return Err(IntegralError::LineInLocus);
    }
    Ok(RatFn::new(num, den))
}

/// True iff the change `(z, w) ↦ (z/w, 1/w)` carries `R_ρ` to `R_{4−ρ}`.
/// Homogeneously the change exchanges `w` and `t`.
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::integrals::swap_check;
/// assert!(swap_check(&Scalar::ratio(4, 3)).unwrap());
/// ```
pub fn swap_check(rho: &Scalar) -> Result<bool, IntegralError> {
    let r = classpqr_integral(rho)?;
    let partner = classpqr_integral(&(Scalar::int(4) - rho.clone()))?;
    Ok(r.permute([0, 2, 1]).same_function(&partner))
}

/// Which configuration pair to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivalenceCase {
    /// Structures 2b1 and 2b2, over `ℚ(i)`.
    B,
    /// Structures 2c1 and 2c2, over `ℚ(√−3)`.
    C,
}

/// Outcome of an equivalence check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    /// The case.
    pub case: EquivalenceCase,
    /// Named polynomial identities and whether they hold exactly.
    pub identities: Vec<(String, bool)>,
    /// The constant `k` with `R ∘ M = k·R'`, if one exists.
    pub constant: Option<String>,
    /// Whether the constant was the same at every sampled point.
    pub constant_stable: bool,
    /// Overall verdict.
    pub holds: bool,
}

fn half(x: Scalar) -> Scalar {
    x / Scalar::int(2)
}

/// The matrix carrying 2c2 to 2c1 coordinates, with `ε = e^{−2πi/3}`.
pub fn case_c_matrix() -> [[Scalar; 3]; 3] {
    let eps = Scalar::eisenstein_unit().conjugate().expect("exact"); // (−1 − √−3)/2
    let eps_bar = Scalar::eisenstein_unit();
    [
        [Scalar::ratio(-1, 2), Scalar::ratio(1, 2), Scalar::ratio(1, 2)],
        [Scalar::one(), half(eps_bar.clone()), half(eps.clone())],
        [Scalar::one(), half(eps), half(eps_bar)],
    ]
}

/// The inverse matrix of the projective map carrying 2b1 to 2b2.
pub fn case_b_inverse_matrix() -> [[Scalar; 3]; 3] {
    let i = Scalar::i();
    [
        [Scalar::zero(), Scalar::ratio(1, 2), Scalar::ratio(1, 2)],
        [-i.clone(), Scalar::ratio(1, 2), Scalar::ratio(-1, 2)],
        [i, Scalar::ratio(1, 2), Scalar::ratio(-1, 2)],
    ]
}

/// Verify the projective equivalence of complex-conjugate configurations.
///
/// * Case `C`: `Q₁ ∘ M = −¾(wt − z²)` and
///   `8·Q₂ ∘ M = 3(8z³ − 8z²w − 8z²t − w²t − wt² + 10zwt)` for
///   `Q₁ = wt − z²`, `Q₂ = t³ + w³ − 2zwt`.
/// * Case `B`: `R_{b1} ∘ M⁻¹ = k·R_{b2}` for a constant `k`, found at 20
///   sample points and confirmed as a polynomial identity.
pub fn equivalence_pullback_check(case: EquivalenceCase, seed: u64) -> Result<EquivalenceReport, IntegralError> {
    let p = Poly::from_int_terms;
    match case {
        EquivalenceCase::C => {
            let m = case_c_matrix();
            let q1 = gamma_form();
            let q2 = p(&[([0, 0, 3], 1), ([0, 3, 0], 1), ([1, 1, 1], -2)]);
            let c2 = p(&[
                ([3, 0, 0], 8),
                ([2, 1, 0], -8),
                ([2, 0, 1], -8),
                ([0, 2, 1], -1),
                ([0, 1, 2], -1),
                ([1, 1, 1], 10),
            ]);
            let id1 = q1.linear_change(&m) == q1.scale(&Scalar::ratio(-3, 4));
            let id2 = q2.linear_change(&m).scale(&Scalar::int(8)) == c2.scale(&Scalar::int(3));
            // Consequently R_{c1} ∘ M = k·R_{c2} with k = (−3/4)³/(3/8)² = −3.
            let rc1 = catalog_integral(&BilliardSpec::C1)?.linear_change(&m);
            let rc2 = catalog_integral(&BilliardSpec::C2)?;
            let k = rc1.constant_ratio(&rc2);
            Ok(EquivalenceReport {
                case,
                identities: vec![
                    ("Q1∘M = -3/4 (wt - z^2)".into(), id1),
                    ("8 Q2∘M = 3 (8z^3 - 8z^2w - 8z^2t - w^2t - wt^2 + 10zwt)".into(), id2),
                ],
                holds: id1 && id2 && k.is_some(),
                constant_stable: k.is_some(),
                constant: k.map(|k| k.to_string()),
            })
        }
        EquivalenceCase::B => {
            let minv = case_b_inverse_matrix();
            let pulled = catalog_integral(&BilliardSpec::B1)?.linear_change(&minv);
            let target = catalog_integral(&BilliardSpec::B2)?;
            let mut s = crate::sampling::Sampler::new(seed, 1000);
            let mut ks: Vec<Scalar> = Vec::new();
            while ks.len() < 20 {
                let x = [s.rational(), s.rational(), s.rational()];
                let (Some(a), Some(b)) = (pulled.eval(&x), target.eval(&x)) else { continue };
                let (Some(a), Some(b)) = (a.value(), b.value()) else { continue };
                if b.is_zero() {
                    continue;
                }
                ks.push(a / b);
            }
            let stable = ks.windows(2).all(|w| w[0] == w[1]);
            let k = ks[0].clone();
            let identity = &pulled.num * &target.den == (&target.num * &pulled.den).scale(&k);
            Ok(EquivalenceReport {
                case,
                identities: vec![("R_b1∘M^-1 = k R_b2".into(), identity)],
                constant: Some(k.to_string()),
                constant_stable: stable,
                holds: stable && identity,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projcore::{eta, Chart};

    #[test]
    fn worked_invariance_instances() {
        // B1 at P = (2, 4): u = 4 ↦ −1/2, i.e. (6, 20) ↦ (3/2, 2).
        let z0 = Scalar::int(2);
        let m = sigma_at(&BilliardSpec::B1, &conic_point(&z0)).unwrap();
        let u2 = m.apply_finite(&Scalar::int(4)).value().unwrap();
        assert_eq!(tangent_line_point(&z0, &Scalar::int(4)), [Scalar::int(6), Scalar::int(20), Scalar::one()]);
        assert_eq!(tangent_line_point(&z0, &u2), [Scalar::ratio(3, 2), Scalar::int(2), Scalar::one()]);
        // C1 at P = (2, 4): u = 7 ↦ −7/17, i.e. (9, 32) ↦ (27/17, 40/17).
        let m = sigma_at(&BilliardSpec::C1, &conic_point(&z0)).unwrap();
        let u2 = m.apply_finite(&Scalar::int(7)).value().unwrap();
        assert_eq!(tangent_line_point(&z0, &u2), [Scalar::ratio(27, 17), Scalar::ratio(40, 17), Scalar::one()]);
    }

    #[test]
    fn wrong_integral_is_caught() {
        let plan = SamplePlan { points: 4, values_per_point: 4, height: 50, seed: 3 };
        let r = catalog_integral(&BilliardSpec::B1).unwrap();
        let report = verify_invariance(&r, &BilliardSpec::D, &plan);
        assert!(!report.counterexamples.is_empty());
    }

    #[test]
    fn restrictions_to_the_tangent_line_at_one() {
        let l = ProjLine::ints(2, -1, -1);
        let r1 = restrict_to_line(&classpqr_integral(&Scalar::one()).unwrap(), &l).unwrap();
        assert!(r1.same_function(&RatFn::new(UniPoly::from_ints(&[-1, 2, -1]), UniPoly::x())));
        let r0 = restrict_to_line(&classpqr_integral(&Scalar::zero()).unwrap(), &l).unwrap();
        assert!(r0.same_function(&RatFn::poly(UniPoly::from_ints(&[-1, 2, -1]))));
        // Each restriction is η_ρ-invariant.
        for rho in [0, 1, 2, 3, 4] {
            let rho = Scalar::int(rho);
            let f = restrict_to_line(&classpqr_integral(&rho).unwrap(), &l).unwrap();
            let e = eta(&rho);
            assert_eq!(e.chart, Chart::Zeta);
            assert!(f.compose_mobius(&e.matrix).same_function(&f));
        }
    }

    #[test]
    fn swaps() {
        for (a, b) in [(0, 4), (1, 3), (2, 2)] {
            assert!(swap_check(&Scalar::int(a)).unwrap());
            let r = classpqr_integral(&Scalar::int(a)).unwrap().permute([0, 2, 1]);
            assert!(r.same_function(&classpqr_integral(&Scalar::int(b)).unwrap()));
        }
        assert!(!classpqr_integral(&Scalar::int(1))
            .unwrap()
            .permute([0, 2, 1])
            .same_function(&classpqr_integral(&Scalar::int(1)).unwrap()));
    }

    #[test]
    fn equivalences() {
        let c = equivalence_pullback_check(EquivalenceCase::C, 0).unwrap();
        assert!(c.holds, "{c:?}");
        assert_eq!(c.constant.as_deref(), Some("-3"));
        let b = equivalence_pullback_check(EquivalenceCase::B, 0).unwrap();
        assert!(b.holds, "{b:?}");
    }
}
