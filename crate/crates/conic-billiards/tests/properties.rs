//! Property-based checks of structural invariants.

use proptest::prelude::*;

use conic_billiards::dualbilliard::{conic_point, residue_report, sigma_at, BilliardSpec};
use conic_billiards::exactnum::Scalar;
use conic_billiards::hessianlab::hessian_poly;
use conic_billiards::integrals::Poly;
use conic_billiards::projbilliard::{eval_psi, field_at, moment, psi_catalog, reflect, tangent_dir, TransversalField};
use conic_billiards::projcore::{eta, ExtValue, HomPoint};
use conic_billiards::quasihomog::{classify_rho, classify_rho_orbit, lower_part};

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Scalar> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

/// A small polynomial in `z, w` with integer coefficients.
fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 1..5).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|((a, b), c)| ([a, b, 0], Scalar::int(c))))
    })
}

fn catalog_field() -> impl Strategy<Value = TransversalField> {
    prop_oneof![
        Just(TransversalField::B1),
        Just(TransversalField::B2),
        Just(TransversalField::C1),
        Just(TransversalField::C2),
        Just(TransversalField::D),
        Just(TransversalField::A { rho: Scalar::ratio(4, 3) }),
        Just(TransversalField::A { rho: Scalar::ratio(3, 2) }),
    ]
}

fn catalog_spec() -> impl Strategy<Value = BilliardSpec> {
    prop::sample::select(BilliardSpec::catalog(3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hessian_is_cubic_in_scalars(g in small_poly(), c in nonzero_rational()) {
        prop_assert_eq!(hessian_poly(&g.scale(&c)), hessian_poly(&g).scale(&c.pow(3)));
    }

    #[test]
    fn lower_parts_multiply(
        f in small_poly(),
        g in small_poly(),
        (p, q) in prop::sample::select(vec![(1u32, 1u32), (2, 1), (1, 2), (3, 1), (3, 2), (2, 3)]),
    ) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let lf = lower_part(&f, p, q).unwrap().poly;
        let lg = lower_part(&g, p, q).unwrap().poly;
        prop_assert_eq!(lower_part(&(&f * &g), p, q).unwrap().poly, &lf * &lg);
    }

    #[test]
    fn eta_is_an_involution_fixing_one(rho in nonzero_rational()) {
        let e = eta(&rho);
        prop_assert!(e.is_involution());
        prop_assert_eq!(e.apply(&ExtValue::finite(Scalar::one())), ExtValue::finite(Scalar::one()));
    }

    #[test]
    fn classifiers_agree(rho in rational()) {
        prop_assert_eq!(classify_rho(&rho), classify_rho_orbit(&rho));
    }

    #[test]
    fn model_residues_sum_to_four(rho in nonzero_rational()) {
        let rep = residue_report(&BilliardSpec::model(rho)).unwrap();
        prop_assert_eq!(rep.total, Scalar::int(4));
    }

    #[test]
    fn sigma_is_an_involution(spec in catalog_spec(), z0 in nonzero_rational()) {
        if let Ok(m) = sigma_at(&spec, &conic_point(&z0)) {
            prop_assert!(m.is_involution());
        }
    }

    #[test]
    fn reflection_preserves_psi(f in catalog_field(), x1 in rational(), v1 in rational(), v2 in rational()) {
        prop_assume!(!(v1.is_zero() && v2.is_zero()));
        let x = [x1.clone(), &x1 * &x1];
        let q = HomPoint::new([x[0].clone(), x[1].clone(), Scalar::one()]).unwrap();
        let Ok(n) = field_at(&f, &q) else { return Ok(()) };
        let v = [v1, v2];
        let Ok(r) = reflect(&tangent_dir(&x1), &n, &v) else { return Ok(()) };
        let psi = psi_catalog(&f).unwrap();
        if let (Some(a), Some(b)) = (eval_psi(&psi, &x, &v), eval_psi(&psi, &x, &r)) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn moment_is_constant_along_lines(x1 in rational(), x2 in rational(), v1 in rational(), v2 in rational(), t in rational()) {
        let x = [x1, x2];
        let v = [v1, v2];
        let y = [&x[0] + &(&t * &v[0]), &x[1] + &(&t * &v[1])];
        prop_assert_eq!(moment(&y, &v), moment(&x, &v));
    }

    #[test]
    fn quadratic_field_distributes(a in rational(), b in rational(), c in rational(), e in rational()) {
        let r = Scalar::sqrt_int(5);
        let x = &a + &(&b * &r);
        let y = &c + &(&e * &r);
        let z = &a - &(&e * &r);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }
}
