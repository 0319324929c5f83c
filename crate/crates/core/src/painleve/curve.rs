use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Poly, Scalar, Var};
use crate::painleve::balance::{invariant_series, Balance};
use crate::systems::{verify_weight_homogeneity, SystemDef, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CurveId {
    /// Relation between `u` and `v` from the 4D balance.
    #[serde(rename = "C_eps")]
    Sys4,
    /// Relation between `alpha` and `beta` from the 5D balance.
    #[serde(rename = "H_eps")]
    Sys5,
    /// The genus-2 quotient in `(z, w)`.
    #[serde(rename = "Gamma_eps")]
    Gamma,
    /// `zeta² = P₆(s)`.
    #[serde(rename = "P6")]
    P6,
}

impl CurveId {
    pub const ALL: [CurveId; 4] = [CurveId::Sys4, CurveId::Sys5, CurveId::Gamma, CurveId::P6];

    pub fn as_str(self) -> &'static str {
        match self {
            CurveId::Sys4 => "C_eps",
            CurveId::Sys5 => "H_eps",
            CurveId::Gamma => "Gamma_eps",
            CurveId::P6 => "P6",
        }
    }
}

impl std::fmt::Display for CurveId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CurveId {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> crate::error::Result<Self> {
        CurveId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::error::Error::InvalidInput(format!("unknown curve `{s}`")))
    }
}

/// A polynomial relation `relation = 0`, quadratic in `fiber`, over the line
/// with coordinate `base`. Everything else in it is a parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRelation {
    pub id: CurveId,
    pub relation: Poly,
    pub base: Var,
    pub fiber: Var,
    pub epsilon: Option<Scalar>,
}

impl CurveRelation {
    /// `(A, B, C)` with `relation = A·y² + B·y + C`.
    pub fn fiber_coeffs(&self) -> Result<(Poly, Poly, Poly)> {
        if self.relation.degree_in(&self.fiber) != Some(2) {
            return Err(Error::NotQuadratic(format!(
                "relation has degree {:?} in {}",
                self.relation.degree_in(&self.fiber),
                self.fiber
            )));
        }
        let cs = self.relation.coeffs_in(&self.fiber);
        Ok((cs[2].clone(), cs[1].clone(), cs[0].clone()))
    }

    /// Variables other than the base and fiber.
    pub fn parameters(&self) -> Vec<Var> {
        self.relation
            .vars()
            .into_iter()
            .filter(|v| *v != self.base && *v != self.fiber)
            .collect()
    }
}

/// Substitutes the balance into each invariant, keeps the `t⁰` coefficient,
/// sets it equal to the named value, eliminates the parameters listed in the
/// system's curve spec (each must enter some remaining equation linearly
/// with a constant coefficient), and normalizes the last equation.
pub fn curve_from_balance(system: &SystemDef, balance: &Balance) -> Result<CurveRelation> {
    let spec = &system.curve;
    let rep = verify_weight_homogeneity(system, &Weights::of(system));
    let mut eqs = Vec::new();
    for (((_, inv), (name, w)), value) in system
        .invariants
        .iter()
        .zip(&rep.invariant_weights)
        .zip(&spec.value_names)
    {
        let w = w.ok_or_else(|| Error::InvalidInput(format!("{name} is not weight-homogeneous")))? as usize;
        if 2 * w > balance.order {
            return Err(Error::InvalidInput(format!(
                "balance order {} too low for the t^0 term of {name} (needs {})",
                balance.order,
                2 * w
            )));
        }
        let ser = invariant_series(system, balance, inv);
        eqs.push(&ser[2 * w] - &Poly::var(value));
    }
    for p in &spec.eliminate {
        let var = Var::new(p);
        let pos = eqs.iter().position(|e| {
            e.degree_in(&var) == Some(1) && e.coeffs_in(&var)[1].as_constant().is_some()
        });
        let Some(pos) = pos else {
            return Err(Error::EliminationNotLinear(format!(
                "{p} does not enter any remaining equation linearly with a constant coefficient"
            )));
        };
        let e = eqs.remove(pos);
        let cs = e.coeffs_in(&var);
        let lead = cs[1].as_constant().expect("checked");
        let expr = cs[0].scale(&-lead.inv().expect("nonzero"));
        let map: BTreeMap<Var, Poly> = [(var, expr)].into();
        eqs = eqs.iter().map(|q| q.substitute(&map)).collect();
    }
    if eqs.len() != 1 {
        return Err(Error::EliminationNotLinear(format!(
            "{} equations remain after elimination",
            eqs.len()
        )));
    }
    let rel = eqs.pop().expect("one equation");
    let fiber = Var::new(spec.fiber);
    let cs = rel.coeffs_in(&fiber);
    let lead = cs
        .get(2)
        .and_then(Poly::as_constant)
        .filter(|c| !c.is_zero() && cs.len() == 3)
        .ok_or_else(|| Error::NotQuadratic(format!("relation is not quadratic in {fiber} with constant leading coefficient")))?;
    let norm = &Scalar::from_int(spec.fiber_leading) / &lead;
    Ok(CurveRelation {
        id: match system.id {
            crate::systems::SystemId::Sys4 => CurveId::Sys4,
            crate::systems::SystemId::Sys5 => CurveId::Sys5,
        },
        relation: rel.scale(&norm),
        base: Var::new(spec.base),
        fiber,
        epsilon: balance.epsilon.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::painleve::{extend_balance, principal_family};
    use crate::systems::sys4;

    #[test]
    fn relation_has_no_tau_and_no_w() {
        let s = sys4();
        let f = principal_family(&s, &Scalar::i()).unwrap();
        let b = extend_balance(&s, &f, 10).unwrap();
        let c = curve_from_balance(&s, &b).unwrap();
        let names: Vec<String> = c.relation.vars().iter().map(|v| v.name().to_string()).collect();
        assert_eq!(names, vec!["a", "b1", "b2", "u", "v"]);
        let (a, _, _) = c.fiber_coeffs().unwrap();
        assert_eq!(a, Poly::int(2));
    }

    #[test]
    fn order_too_low() {
        let s = sys4();
        let f = principal_family(&s, &Scalar::i()).unwrap();
        let b = extend_balance(&s, &f, 9).unwrap();
        assert!(curve_from_balance(&s, &b).is_err());
    }

    #[test]
    fn not_quadratic() {
        let c = CurveRelation {
            id: CurveId::Sys4,
            relation: crate::exact::poly("v^3 - u"),
            base: Var::new("u"),
            fiber: Var::new("v"),
            epsilon: None,
        };
        assert!(matches!(c.fiber_coeffs(), Err(Error::NotQuadratic(_))));
    }
}
