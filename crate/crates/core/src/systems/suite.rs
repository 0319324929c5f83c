use crate::exact::{poly, Poly};
use crate::report::Check;
use crate::systems::{
    hamiltonian_vector_field, lie_bracket_fields, phi, poisson_bracket, poisson_matrix, sigma_equivariance_diffs,
    sys4, sys5, sys5_second_flow, verify_jacobi, verify_phi_intertwines, verify_su2_reduction,
    verify_weight_homogeneity, ReductionReport, Weights, F1, F2, F3, H1, H2,
};

fn field_diff(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Every exact identity among the two systems, as named checks.
pub fn exact_identity_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let j = poisson_matrix();
    let (f1, f2, f3) = (poly(F1), poly(F2), poly(F3));

    out.push(Check::identities("poisson.skew", &j.skew_residuals()));
    for ([a, b, c], sum) in verify_jacobi(&j).triples {
        out.push(Check::identity(format!("poisson.jacobi_{}{}{}", a + 1, b + 1, c + 1), &sum));
    }
    out.push(Check::identity("poisson.involution_F1_F2", &poisson_bracket(&j, &f1, &f2)));
    let x1 = hamiltonian_vector_field(&j, &f1);
    let x2 = hamiltonian_vector_field(&j, &f2);
    let x3 = hamiltonian_vector_field(&j, &f3);
    out.push(Check::identities("poisson.casimir_F3", &x3));
    let s5 = sys5();
    out.push(Check::identities("poisson.field_F1", &field_diff(&x1, &s5.field)));
    out.push(Check::identities("poisson.field_F2", &field_diff(&x2, &sys5_second_flow())));
    match lie_bracket_fields(&j.vars, &x1, &x2) {
        Ok(br) => out.push(Check::identities("flows.commute_F1_F2", &br)),
        Err(e) => out.push(Check::error("flows.commute_F1_F2", &e)),
    }

    for sys in [sys4(), s5] {
        for (name, inv) in &sys.invariants {
            out.push(Check::identity(
                format!("conservation.{}_{name}", sys.id),
                &sys.lie_derivative(inv),
            ));
        }
    }

    let m = phi();
    out.push(Check::identity("phi.pullback_F1", &(&m.pull_back(&f1) - &poly(H1))));
    out.push(Check::identity("phi.pullback_F2", &(&m.pull_back(&f2) - &poly(H2))));
    out.push(Check::identity("phi.pullback_F3", &m.pull_back(&f3)));
    out.push(Check::identities("phi.intertwines", &verify_phi_intertwines()));

    for (name, diffs) in sigma_equivariance_diffs() {
        out.push(Check::identities(format!("sigma.{name}"), &diffs));
    }

    for (sys, expected) in [
        (sys4(), vec![4, 5]),
        (sys5(), vec![4, 5, 6]),
    ] {
        let rep = verify_weight_homogeneity(&sys, &Weights::of(&sys));
        out.push(Check::identities(
            format!("homogeneity.{}_field", sys.id),
            &rep.field_residuals,
        ));
        for ((name, got), want) in rep.invariant_weights.iter().zip(expected) {
            out.push(Check::flag(
                format!("homogeneity.{}_weight_{name}", sys.id),
                *got == Some(want),
                || format!("weight {got:?}, expected {want}"),
            ));
        }
    }

    let su2 = verify_su2_reduction();
    let show = |c: &[crate::systems::MonomialRatio]| {
        ReductionReport::class_ratio(c).map_or_else(|| "mixed".to_string(), |r| r.to_string())
    };
    out.push(Check::skip(
        "su2.reduction_ratios",
        format!(
            "reported only: kinetic ratio {}, quartic ratio {}",
            show(&su2.kinetic),
            show(&su2.potential)
        ),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn suite_passes() {
        let checks = exact_identity_suite();
        for c in &checks {
            assert!(c.status != Status::Fail, "{} failed: {:?}", c.name, c.witness);
        }
        assert!(checks.iter().any(|c| c.name == "poisson.jacobi_345"));
        let mut names: Vec<_> = checks.iter().map(|c| &c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), checks.len());
    }
}
