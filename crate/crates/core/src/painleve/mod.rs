//! Weight-homogeneous balances in `τ = t^(1/2)`: leading families,
//! Kowalevski exponents, order-by-order extension with free parameters at
//! the resonances, residual checks, and the parameter curves cut out by the
//! invariants.

mod balance;
mod curve;
pub mod fixtures;
mod leading;
mod series;

pub use balance::{extend_balance, invariant_series, residual_check, Balance, FreeParameter, ResidualReport};
pub use curve::{curve_from_balance, CurveId, CurveRelation};
pub use leading::{
    find_leading_balances, indicial_equations, kowalevski_exponents, kowalevski_matrix, principal_families,
    principal_family, Kowalevski, LeadingBalances, LeadingFamily,
};
pub use series::PuiseuxSeries;

use crate::error::Result;
use crate::exact::Scalar;
use crate::systems::SystemDef;

/// Principal balance with the given `ε`, extended through τ-order `order`.
pub fn principal_balance(system: &SystemDef, epsilon: &Scalar, order: usize) -> Result<Balance> {
    let fam = principal_family(system, epsilon)?;
    extend_balance(system, &fam, order)
}

/// Coefficients of `balance` that differ from the reference table, as
/// `(coordinate, τ-order, computed − expected)`.
pub fn fixture_mismatches(balance: &Balance) -> Vec<(String, usize, crate::exact::Poly)> {
    let eps = balance.epsilon.clone().unwrap_or_else(Scalar::i);
    let mut out = Vec::new();
    for (coord, j, want) in fixtures::expected_coefficients(balance.system, &eps) {
        let k = balance
            .var_names
            .iter()
            .position(|n| *n == coord)
            .expect("fixture coordinate");
        let diff = match balance.coefficient(k, j) {
            Some(got) => got - &want,
            None => want,
        };
        if !diff.is_zero() {
            out.push((coord, j, diff));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{poly, Var};
    use crate::painleve::fixtures::{with_epsilon, SYS4_CURVE, SYS5_CURVE};
    use crate::systems::{sys4, sys5};
    use std::collections::BTreeMap;

    fn both_eps() -> [Scalar; 2] {
        [Scalar::i(), -Scalar::i()]
    }

    #[test]
    fn sys4_series_matches_reference() {
        let s = sys4();
        for eps in both_eps() {
            let b = principal_balance(&s, &eps, 10).unwrap();
            assert!(fixture_mismatches(&b).is_empty(), "{:?}", fixture_mismatches(&b));
        }
    }

    #[test]
    fn sys5_series_matches_reference() {
        let s = sys5();
        for eps in both_eps() {
            let b = principal_balance(&s, &eps, 12).unwrap();
            assert!(fixture_mismatches(&b).is_empty(), "{:?}", fixture_mismatches(&b));
        }
    }

    #[test]
    fn reference_series_misprint_would_be_caught() {
        let s = sys4();
        let b = principal_balance(&s, &Scalar::i(), 10).unwrap();
        let bad = b.with_coefficient(0, 3, poly("-1/3*u^3"));
        assert_eq!(fixture_mismatches(&bad).len(), 1);
    }

    #[test]
    fn curves_match_reference() {
        for eps in both_eps() {
            let s = sys4();
            let c = curve_from_balance(&s, &principal_balance(&s, &eps, 10).unwrap()).unwrap();
            assert_eq!(c.relation, with_epsilon(SYS4_CURVE, &eps));
            let s = sys5();
            let c = curve_from_balance(&s, &principal_balance(&s, &eps, 12).unwrap()).unwrap();
            assert_eq!(c.relation, with_epsilon(SYS5_CURVE, &eps));
        }
    }

    #[test]
    fn parameter_flip_swaps_branches() {
        let s = sys4();
        let ci = curve_from_balance(&s, &principal_balance(&s, &Scalar::i(), 10).unwrap()).unwrap();
        let cm = curve_from_balance(&s, &principal_balance(&s, &-Scalar::i(), 10).unwrap()).unwrap();
        let flip: BTreeMap<Var, _> = [(Var::new("u"), poly("-u")), (Var::new("v"), poly("-v"))].into();
        assert_eq!(ci.relation.substitute(&flip).conj(), cm.relation);
    }
}
