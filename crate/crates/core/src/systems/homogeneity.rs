use std::collections::BTreeMap;

use crate::exact::{Monomial, Poly, Var};
use crate::systems::SystemDef;

/// Integer weights for state variables and the parameter `a`.
#[derive(Debug, Clone)]
pub struct Weights {
    pub state: Vec<u32>,
    pub param: u32,
}

impl Weights {
    pub fn of(system: &SystemDef) -> Self {
        Weights {
            state: system.weights.clone(),
            param: system.param_weight,
        }
    }

    fn table(&self, system: &SystemDef) -> BTreeMap<Var, u32> {
        let mut t: BTreeMap<Var, u32> = system
            .state_vars
            .iter()
            .cloned()
            .zip(self.state.iter().copied())
            .collect();
        t.insert(system.param(), self.param);
        t
    }
}

#[derive(Debug, Clone)]
pub struct HomogeneityReport {
    /// `f_k(λ^ν z) − λ^(ν_k+1) f_k(z)` per field component.
    pub field_residuals: Vec<Poly>,
    /// Weighted degree of each invariant, `None` if it is not homogeneous.
    pub invariant_weights: Vec<(&'static str, Option<u32>)>,
}

impl HomogeneityReport {
    pub fn field_homogeneous(&self) -> bool {
        self.field_residuals.iter().all(Poly::is_zero)
    }
}

fn weighted_degree(m: &Monomial, table: &BTreeMap<Var, u32>) -> u32 {
    m.factors()
        .iter()
        .map(|(v, e)| table.get(v).copied().unwrap_or(0) * e)
        .sum()
}

/// Weighted degree shared by every monomial of `p`, if any.
fn homogeneous_degree(p: &Poly, table: &BTreeMap<Var, u32>) -> Option<u32> {
    let mut degs = p.terms().map(|(m, _)| weighted_degree(m, table));
    let first = degs.next()?;
    degs.all(|d| d == first).then_some(first)
}

pub fn verify_weight_homogeneity(system: &SystemDef, weights: &Weights) -> HomogeneityReport {
    let table = weights.table(system);
    let lambda = Var::new("lambda");
    let scaling: BTreeMap<Var, Poly> = table
        .iter()
        .map(|(v, &w)| {
            let p = Poly::term(
                crate::exact::Scalar::one(),
                Monomial::from_factors([(v.clone(), 1), (lambda.clone(), w)]),
            );
            (v.clone(), p)
        })
        .collect();
    let field_residuals = system
        .field
        .iter()
        .zip(&weights.state)
        .map(|(f, &w)| {
            let scaled = f.substitute(&scaling);
            let expected = f.mul_monomial(&Monomial::var(lambda.clone(), w + 1));
            &scaled - &expected
        })
        .collect();
    let invariant_weights = system
        .invariants
        .iter()
        .map(|(n, p)| (*n, homogeneous_degree(p, &table)))
        .collect();
    HomogeneityReport {
        field_residuals,
        invariant_weights,
    }
}
