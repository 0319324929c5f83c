//! Randomized algebraic and numerical invariants.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use su2ym::exact::{parse_poly, Assignment, Monomial, Poly, Scalar, Var};
use su2ym::geometry::{fiber_discriminant, genus_riemann_hurwitz, reference_curve};
use su2ym::numerics::separation_of_state;
use su2ym::painleve::{CurveId, CurveRelation};

fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational(), rational(), rational()).prop_map(|(a, b, c, d)| Scalar::new(a, b, c, d))
}

const VARS: [&str; 3] = ["x", "y", "z"];

/// Up to six terms in x, y, z, each exponent at most 2 so total degree is
/// at most 6.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((scalar(), [0u32..=2, 0u32..=2, 0u32..=2]), 0..=6).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|(c, es)| {
            let m = Monomial::from_factors(VARS.iter().zip(es).filter(|(_, e)| *e > 0).map(|(v, e)| (Var::new(v), e)));
            (m, c)
        }))
    })
}

fn point() -> impl Strategy<Value = Assignment> {
    [scalar(), scalar(), scalar()].prop_map(|vals| VARS.iter().map(|v| Var::new(v)).zip(vals).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scalar_field_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        match x.inv() {
            Some(inv) => prop_assert!((&x * &inv).is_one()),
            None => prop_assert!(x.is_zero()),
        }
        prop_assert!(x.is_zero() == x.checked_div(&x).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn poly_ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn eval_is_a_ring_homomorphism(p in poly(), q in poly(), at in point()) {
        let (pv, qv) = (p.eval(&at).unwrap(), q.eval(&at).unwrap());
        prop_assert_eq!((&p * &q).eval(&at).unwrap(), &pv * &qv);
        prop_assert_eq!((&p + &q).eval(&at).unwrap(), &pv + &qv);
    }

    #[test]
    fn partial_derivative_leibniz(p in poly(), q in poly(), k in 0usize..3) {
        let v = Var::new(VARS[k]);
        let lhs = (&p * &q).partial(&v);
        let rhs = &(&p * &q.partial(&v)) + &(&q * &p.partial(&v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_text_round_trip(p in poly()) {
        let text = p.to_canonical_text();
        prop_assert_eq!(parse_poly(&text).unwrap(), p.clone());
        // the text is a function of the value only
        prop_assert_eq!(text, (&p + &Poly::zero()).to_canonical_text());
    }

    #[test]
    fn no_stored_zero_coefficients(p in poly(), q in poly()) {
        let prod = &p * &q;
        prop_assert!(prod.terms().all(|(_, c)| !c.is_zero()));
    }
}

fn specialize_curve(c: &CurveRelation, at: &Assignment) -> CurveRelation {
    CurveRelation {
        relation: c.relation.specialize(at),
        ..c.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn discriminant_commutes_with_specialization(
        id in prop::sample::select(vec![CurveId::Sys4, CurveId::Sys5, CurveId::Gamma]),
        vals in prop::collection::vec(rational(), 4),
        minus in any::<bool>(),
    ) {
        let eps = if minus { -Scalar::i() } else { Scalar::i() };
        let curve = reference_curve(id, &eps);
        let at: Assignment = curve
            .parameters()
            .into_iter()
            .zip(vals)
            .map(|(v, r)| (v, Scalar::from_rational(r)))
            .collect();
        let generic = fiber_discriminant(&curve).unwrap().specialize(&at);
        let special = fiber_discriminant(&specialize_curve(&curve, &at)).unwrap();
        prop_assert_eq!(generic, special);
    }

    #[test]
    fn riemann_hurwitz(n in 1u32..5, half in 0usize..12) {
        let g = genus_riemann_hurwitz(n, 2 * half).unwrap();
        prop_assert_eq!(2 * g - 2, -2 * n as i64 + 2 * half as i64);
        prop_assert!(genus_riemann_hurwitz(n, 2 * half + 1).is_err());
    }
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn separation_closure(x in [complex(), complex(), complex(), complex()]) {
        let smp = separation_of_state(Complex64::new(0.0, 0.0), &x, None).unwrap();
        prop_assume!(!smp.flagged());
        let worst = smp.closure_residuals(&x).into_iter().fold(0.0, f64::max);
        let scale = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let gap = (smp.s[0] - smp.s[1]).norm();
        // ṡ divides by s₁ − s₂, so roundoff grows as the roots approach
        prop_assert!(worst <= 1e-13 * scale.powi(3) / gap.min(1.0), "{worst} at {x:?}");
    }
}

#[test]
fn curve_parameters_are_named() {
    let names: BTreeMap<CurveId, Vec<String>> = CurveId::ALL
        .iter()
        .map(|id| (*id, reference_curve(*id, &Scalar::i()).parameters().iter().map(|v| v.name().to_string()).collect()))
        .collect();
    assert_eq!(names[&CurveId::Sys5], ["a", "c1", "c2", "c3"]);
    assert_eq!(names[&CurveId::P6], ["a", "b1", "b2"]);
}
