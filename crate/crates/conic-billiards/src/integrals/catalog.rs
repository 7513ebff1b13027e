//! The catalog of rational first integrals, written homogeneously in
//! `(z, w, t)` so that the chart `t = 1` recovers the affine formulas.

use super::poly::Poly;
use super::rational::{FactoredRational, HomRational};
use super::IntegralError;
use crate::dualbilliard::{BilliardSpec, Parity};
use crate::exactnum::Scalar;
use crate::quasihomog::classify_rho;

fn p(terms: &[([u32; 3], i64)]) -> Poly {
    Poly::from_int_terms(terms)
}

/// `wt − z²`, the defining form of `γ`.
pub fn gamma_form() -> Poly {
    p(&[([0, 1, 1], 1), ([2, 0, 0], -1)])
}

/// `wt − c z²`.
fn wt_minus(c: &Scalar) -> Poly {
    &p(&[([0, 1, 1], 1)]) - &Poly::monomial([2, 0, 0], c.clone())
}

/// The coefficients `c_j` (`j = 1..=N`) of the exotic integrals:
/// `−4j(2N+1−j)/(2N+1−2j)²` (odd) or `−j(2N+2−j)/(N+1−j)²` (even).
///
/// ```
/// use conic_billiards::dualbilliard::Parity;
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::integrals::exotic_coefficients;
/// assert_eq!(exotic_coefficients(Parity::Odd, 1), vec![Scalar::int(-8)]);
/// assert_eq!(exotic_coefficients(Parity::Even, 1), vec![Scalar::int(-3)]);
/// ```
pub fn exotic_coefficients(parity: Parity, n: u32) -> Vec<Scalar> {
    let n = n as i64;
    (1..=n)
        .map(|j| match parity {
            Parity::Odd => Scalar::ratio(-4 * j * (2 * n + 1 - j), (2 * n + 1 - 2 * j).pow(2)),
            Parity::Even => Scalar::ratio(-j * (2 * n + 2 - j), (n + 1 - j).pow(2)),
        })
        .collect()
}

/// Factored form of the exotic integrals and of their `ρ > 2` partners.
/// `extra_w` adds the `w`-power of the rows with `ρ > 2`.
fn exotic_factors(parity: Parity, n: u32, above_two: bool) -> FactoredRational {
    let cs = exotic_coefficients(parity, n);
    let n = n as i64;
    let mut f = Vec::new();
    match parity {
        Parity::Odd => {
            f.push((gamma_form(), 2 * n + 1));
            f.push(if above_two { (Poly::w(), -2) } else { (Poly::t(), -2) });
            f.extend(cs.iter().map(|c| (wt_minus(c), -2)));
        }
        Parity::Even => {
            f.push((gamma_form(), n + 1));
            f.push((Poly::z(), -1));
            f.push(if above_two { (Poly::w(), -1) } else { (Poly::t(), -1) });
            f.extend(cs.iter().map(|c| (wt_minus(c), -1)));
        }
    }
    FactoredRational::new(f)
}

/// The quasihomogeneous integral `R_ρ` of the `(2,1;ρ)`-billiard for
/// `ρ ∈ ℳ`, homogenized by `t` (so `t = 1` gives the affine formula).
pub fn classpqr_factors(rho: &Scalar) -> Result<FactoredRational, IntegralError> {
    let class = classify_rho(rho);
    if !class.in_m {
        return Err(IntegralError::RhoNotInM(rho.to_string()));
    }
    let q = gamma_form();
    let (z, w, t) = (Poly::z(), Poly::w(), Poly::t());
    let int = |k: i64| *rho == Scalar::int(k);
    let simple = |rest: Vec<(Poly, i64)>| {
        let mut f = vec![(q.clone(), 1)];
        f.extend(rest);
        Ok(FactoredRational::new(f))
    };
    if int(0) {
        return simple(vec![(t, -2)]);
    }
    if int(1) {
        return simple(vec![(z, -1), (t, -1)]);
    }
    if int(2) {
        return simple(vec![(w, -1), (t, -1)]);
    }
    if int(3) {
        return simple(vec![(z, -1), (w, -1)]);
    }
    if int(4) {
        return simple(vec![(w, -2)]);
    }
    // ρ = 2 + 2/m with |m| ≥ 3; k = |m| = 2N+1 (odd) or 2N+2 (even).
    let m = class.m.expect("non-integer ρ in ℳ has an index m");
    let k = m.unsigned_abs() as u32;
    let (parity, n) = if k % 2 == 1 { (Parity::Odd, (k - 1) / 2) } else { (Parity::Even, k / 2 - 1) };
    Ok(exotic_factors(parity, n, m > 0))
}

/// Expanded form of [`classpqr_factors`].
///
/// ```
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::integrals::{classpqr_integral, Poly};
/// let r4 = classpqr_integral(&Scalar::int(4)).unwrap();
/// assert_eq!(r4.den, Poly::w().pow(2));
/// ```
pub fn classpqr_integral(rho: &Scalar) -> Result<HomRational, IntegralError> {
    classpqr_factors(rho)?.expand()
}

/// The rational first integral of a catalog spec in factored homogeneous
/// form. Pencil specs yield `A/B` (the ratio of the two defining forms).
pub fn catalog_factors(spec: &BilliardSpec) -> Result<FactoredRational, IntegralError> {
    let q = gamma_form();
    Ok(match spec {
        BilliardSpec::B1 => FactoredRational::new(vec![
            (q, 2),
            (p(&[([0, 1, 1], 1), ([2, 0, 0], 3)]), -1),
            (p(&[([1, 0, 0], 1), ([0, 0, 1], -1)]), -1),
            (p(&[([1, 0, 0], 1), ([0, 1, 0], -1)]), -1),
        ]),
        BilliardSpec::B2 => FactoredRational::new(vec![
            (q, 2),
            (p(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], 1), ([0, 1, 1], 1)]), -1),
            (p(&[([2, 0, 0], 1), ([0, 0, 2], 1)]), -1),
        ]),
        BilliardSpec::C1 => FactoredRational::new(vec![
            (q, 3),
            (p(&[([0, 0, 3], 1), ([0, 3, 0], 1), ([1, 1, 1], -2)]), -2),
        ]),
        BilliardSpec::C2 => FactoredRational::new(vec![
            (q, 3),
            (
                p(&[
                    ([3, 0, 0], 8),
                    ([2, 1, 0], -8),
                    ([2, 0, 1], -8),
                    ([0, 2, 1], -1),
                    ([0, 1, 2], -1),
                    ([1, 1, 1], 10),
                ]),
                -2,
            ),
        ]),
        BilliardSpec::D => FactoredRational::new(vec![
            (q, 3),
            (p(&[([0, 1, 1], 1), ([2, 0, 0], 8)]), -1),
            (p(&[([1, 0, 0], 1), ([0, 0, 1], -1)]), -1),
            (
                p(&[
                    ([0, 1, 2], 1),
                    ([2, 0, 1], 8),
                    ([0, 2, 1], 4),
                    ([2, 1, 0], 5),
                    ([1, 1, 1], -14),
                    ([3, 0, 0], -4),
                ]),
                -1,
            ),
        ]),
        BilliardSpec::ExoticA { parity, n } => exotic_factors(*parity, *n, false),
        BilliardSpec::Model { rho } => classpqr_factors(rho)?,
        BilliardSpec::Pencil(pencil) => {
            FactoredRational::new(vec![(pencil.a.to_poly(), 1), (pencil.b.to_poly(), -1)])
        }
        BilliardSpec::Custom { .. } => return Err(IntegralError::UnknownSpec(spec.to_string())),
    })
}

/// The rational first integral of a catalog spec.
///
/// ```
/// use conic_billiards::dualbilliard::BilliardSpec;
/// use conic_billiards::exactnum::Scalar;
/// use conic_billiards::integrals::catalog_integral;
/// use conic_billiards::projcore::ExtValue;
/// let r = catalog_integral(&BilliardSpec::B1).unwrap();
/// let v = r.eval(&[Scalar::int(6), Scalar::int(20), Scalar::one()]).unwrap();
/// assert_eq!(v, ExtValue::finite(Scalar::ratio(-1, 35)));
/// ```
pub fn catalog_integral(spec: &BilliardSpec) -> Result<HomRational, IntegralError> {
    catalog_factors(spec)?.expand()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projcore::ExtValue;

    fn at(r: &HomRational, z: Scalar, w: Scalar) -> ExtValue {
        r.eval(&[z, w, Scalar::one()]).unwrap()
    }

    #[test]
    fn exotic_coefficients_closed_forms() {
        assert_eq!(exotic_coefficients(Parity::Odd, 2), vec![Scalar::ratio(-16, 9), Scalar::int(-24)]);
        // 1 − c_j is a positive square ratio: (2N+1)²/(2N+1−2j)².
        for n in 1..8 {
            for (j, c) in exotic_coefficients(Parity::Odd, n).iter().enumerate() {
                let k = 2 * n as i64 + 1;
                let j = j as i64 + 1;
                assert_eq!(Scalar::one() - c.clone(), Scalar::ratio(k * k, (k - 2 * j).pow(2)));
            }
        }
    }

    #[test]
    fn small_exotic_integrals() {
        // ρ = 4/3: (w − z²)³/(w + 8z²)².
        let r = catalog_integral(&BilliardSpec::ExoticA { parity: Parity::Odd, n: 1 }).unwrap();
        let want = HomRational::new(
            gamma_form().pow(3),
            &p(&[([0, 1, 1], 1), ([2, 0, 0], 8)]).pow(2) * &Poly::t().pow(2),
        )
        .unwrap();
        assert!(r.same_function(&want));
        // ρ = 3/2: (w − z²)²/(z(w + 3z²)).
        let r = catalog_integral(&BilliardSpec::ExoticA { parity: Parity::Even, n: 1 }).unwrap();
        let want = HomRational::new(
            gamma_form().pow(2),
            &(&p(&[([0, 1, 1], 1), ([2, 0, 0], 3)]) * &Poly::z()) * &Poly::t(),
        )
        .unwrap();
        assert!(r.same_function(&want));
    }

    #[test]
    fn hand_checked_values() {
        let b1 = catalog_integral(&BilliardSpec::B1).unwrap();
        assert_eq!(at(&b1, Scalar::ratio(3, 2), Scalar::int(2)), ExtValue::finite(Scalar::ratio(-1, 35)));
        let c1 = catalog_integral(&BilliardSpec::C1).unwrap();
        let want = ExtValue::finite(Scalar::ratio(-117_649, 32_193 * 32_193));
        assert_eq!(at(&c1, Scalar::int(9), Scalar::int(32)), want);
        assert_eq!(at(&c1, Scalar::ratio(27, 17), Scalar::ratio(40, 17)), want);
    }

    #[test]
    fn table_rows() {
        let r0 = classpqr_integral(&Scalar::zero()).unwrap();
        assert_eq!(at(&r0, Scalar::int(2), Scalar::int(5)), ExtValue::finite(Scalar::one()));
        let r = classpqr_integral(&Scalar::ratio(8, 3)).unwrap();
        let want = HomRational::new(
            gamma_form().pow(3),
            &p(&[([0, 1, 1], 1), ([2, 0, 0], 8)]).pow(2) * &Poly::w().pow(2),
        )
        .unwrap();
        assert!(r.same_function(&want));
        assert!(matches!(classpqr_integral(&Scalar::ratio(5, 7)), Err(IntegralError::RhoNotInM(_))));
    }

    #[test]
    fn all_catalog_integrals_are_homogeneous_of_degree_zero() {
        for spec in BilliardSpec::catalog(5) {
            let r = catalog_integral(&spec).unwrap();
            assert_eq!(r.num.homogeneous_degree(), r.den.homogeneous_degree(), "{spec}");
        }
    }
}
