//! The 4D system in `(q1, q2, p1, p2)` and the 5D system in `z1..z5`, their
//! first integrals, the Poisson structure on C⁵, the morphism between them,
//! the reflection σ, and the exact identity checks relating all of these.

pub mod homogeneity;
pub mod morphism;
pub mod poisson;
pub mod su2;
pub mod suite;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{poly, Assignment, Poly, Scalar, Var};

pub use homogeneity::{verify_weight_homogeneity, HomogeneityReport, Weights};
pub use morphism::{
    apply_sigma, phi, pushforward_phi, sigma_equivariance_diffs, sigma_sign, verify_phi_intertwines,
    Morphism,
};
pub use poisson::{
    hamiltonian_vector_field, lie_bracket_fields, poisson_bracket, poisson_matrix, verify_jacobi,
    JacobiReport, PoissonMatrix,
};
pub use su2::{compare_after_substitution, su2_transformation, verify_su2_reduction, MonomialRatio, ReductionReport};
pub use suite::exact_identity_suite;

/// The parameter `a` shared by both systems.
pub const PARAM_A: &str = "a";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemId {
    #[serde(rename = "4d")]
    Sys4,
    #[serde(rename = "5d")]
    Sys5,
}

impl SystemId {
    pub fn dim(self) -> usize {
        match self {
            SystemId::Sys4 => 4,
            SystemId::Sys5 => 5,
        }
    }

    pub fn definition(self) -> SystemDef {
        match self {
            SystemId::Sys4 => sys4(),
            SystemId::Sys5 => sys5(),
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemId::Sys4 => "4d",
            SystemId::Sys5 => "5d",
        })
    }
}

impl std::str::FromStr for SystemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "4d" | "4" | "sys4" => Ok(SystemId::Sys4),
            "5d" | "5" | "sys5" => Ok(SystemId::Sys5),
            _ => Err(Error::InvalidInput(format!("unknown system `{s}` (expected 4d or 5d)"))),
        }
    }
}

/// How the parameter curve is cut out of a balance: which invariants are
/// fixed to which symbolic values, which balance parameters are eliminated
/// and in what order, and how the resulting relation is normalized.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub value_names: Vec<&'static str>,
    pub eliminate: Vec<&'static str>,
    pub base: &'static str,
    pub fiber: &'static str,
    /// Coefficient of `fiber²` in the normalized relation.
    pub fiber_leading: i64,
}

#[derive(Debug, Clone)]
pub struct SystemDef {
    pub id: SystemId,
    pub state_vars: Vec<Var>,
    /// Right-hand side, one polynomial per state variable.
    pub field: Vec<Poly>,
    pub invariants: Vec<(&'static str, Poly)>,
    /// Integer weight of each state variable.
    pub weights: Vec<u32>,
    pub param_weight: u32,
    /// Balance parameter names in order of their resonance.
    pub balance_parameters: Vec<&'static str>,
    pub curve: CurveSpec,
}

impl SystemDef {
    pub fn dim(&self) -> usize {
        self.state_vars.len()
    }

    pub fn param(&self) -> Var {
        Var::new(PARAM_A)
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.state_vars.iter().map(Var::name).collect()
    }

    pub fn invariant(&self, name: &str) -> Option<&Poly> {
        self.invariants.iter().find(|(n, _)| *n == name).map(|(_, p)| p)
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    fn assignment(&self, state: &[Scalar], a: &Scalar) -> Assignment {
        let mut asg: Assignment = self
            .state_vars
            .iter()
            .cloned()
            .zip(state.iter().cloned())
            .collect();
        asg.insert(self.param(), a.clone());
        asg
    }

    /// Exact evaluation of the vector field.
    pub fn vector_field_exact(&self, state: &[Scalar], a: &Scalar) -> Result<Vec<Scalar>> {
        self.check_dim(state.len())?;
        let asg = self.assignment(state, a);
        self.field.iter().map(|f| f.eval(&asg)).collect()
    }

    /// Floating-point evaluation of the vector field.
    pub fn vector_field(&self, state: &[Complex64], a: Complex64) -> Result<Vec<Complex64>> {
        self.check_dim(state.len())?;
        Ok(self
            .field
            .iter()
            .map(|f| eval_complex(f, &self.state_vars, state, a))
            .collect())
    }

    /// Exact values of all invariants, in definition order.
    pub fn invariants_at_exact(&self, state: &[Scalar], a: &Scalar) -> Result<Vec<Scalar>> {
        self.check_dim(state.len())?;
        let asg = self.assignment(state, a);
        self.invariants.iter().map(|(_, p)| p.eval(&asg)).collect()
    }

    pub fn invariants_at(&self, state: &[Complex64], a: Complex64) -> Result<Vec<Complex64>> {
        self.check_dim(state.len())?;
        Ok(self
            .invariants
            .iter()
            .map(|(_, p)| eval_complex(p, &self.state_vars, state, a))
            .collect())
    }

    /// `⟨∇I, X⟩` for an invariant `I`, as a polynomial.
    pub fn lie_derivative(&self, inv: &Poly) -> Poly {
        self.state_vars
            .iter()
            .zip(&self.field)
            .fold(Poly::zero(), |acc, (v, f)| &acc + &(&inv.partial(v) * f))
    }
}

fn eval_complex(p: &Poly, vars: &[Var], state: &[Complex64], a: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let mut t = c.to_complex();
        for (v, e) in m.factors() {
            let x = if v.name() == PARAM_A {
                a
            } else {
                let k = vars.iter().position(|w| w == v).expect("state variable");
                state[k]
            };
            t *= x.powu(*e);
        }
        acc += t;
    }
    acc
}

fn vars(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| Var::new(n)).collect()
}

/// The 4D system with `H₁`, `H₂`.
pub fn sys4() -> SystemDef {
    SystemDef {
        id: SystemId::Sys4,
        state_vars: vars(&["q1", "q2", "p1", "p2"]),
        field: SYS4_FIELD.iter().map(|s| poly(s)).collect(),
        invariants: vec![("H1", poly(H1)), ("H2", poly(H2))],
        weights: vec![1, 1, 2, 2],
        param_weight: 2,
        balance_parameters: vec!["u", "v", "w"],
        curve: CurveSpec {
            value_names: vec!["b1", "b2"],
            eliminate: vec!["w"],
            base: "u",
            fiber: "v",
            fiber_leading: 2,
        },
    }
}

/// The 5D system with `F₁`, `F₂`, `F₃`.
pub fn sys5() -> SystemDef {
    SystemDef {
        id: SystemId::Sys5,
        state_vars: vars(&["z1", "z2", "z3", "z4", "z5"]),
        field: SYS5_FIELD.iter().map(|s| poly(s)).collect(),
        invariants: vec![("F1", poly(F1)), ("F2", poly(F2)), ("F3", poly(F3))],
        weights: vec![2, 1, 2, 3, 4],
        param_weight: 2,
        balance_parameters: vec!["alpha", "beta", "theta", "gamma"],
        curve: CurveSpec {
            value_names: vec!["c1", "c2", "c3"],
            eliminate: vec!["gamma", "theta"],
            base: "alpha",
            fiber: "beta",
            fiber_leading: 1,
        },
    }
}

pub const H1: &str = "1/2*(p1^2 + p2^2) + a/2*(q1^2 + 4*q2^2) + 1/4*q1^4 + 4*q2^4 + 3*q1^2*q2^2";
pub const H2: &str = "a*q1^2*q2 + q1^4*q2 + 2*q1^2*q2^3 - q2*p1^2 + q1*p1*p2";

pub const SYS4_FIELD: [&str; 4] = [
    "p1",
    "p2",
    "-(a + q1^2 + 6*q2^2)*q1",
    "-2*(2*a + 3*q1^2 + 8*q2^2)*q2",
];

pub const F1: &str =
    "1/2*z5 + 2*z1*z2^2 + 1/2*z3^2 + 1/2*a*z1 + 2*a*z2^2 + 1/4*z1^2 + 4*z2^4";
pub const F2: &str = "a*z1*z2 + z1^2*z2 + 4*z1*z2^3 - z2*z5 + z3*z4";
pub const F3: &str = "z1*z5 - 2*z1^2*z2^2 - z4^2";

pub const SYS5_FIELD: [&str; 5] = [
    "2*z4",
    "z3",
    "-4*a*z2 - 6*z1*z2 - 16*z2^3",
    "-a*z1 - z1^2 - 8*z1*z2^2 + z5",
    "-8*z2^2*z4 - 2*a*z4 - 2*z1*z4 + 4*z1*z2*z3",
];

/// The flow generated by `F₂`, as displayed alongside the 5D system.
pub const SYS5_SECOND_FLOW: [&str; 5] = [
    "2*z1*z3 - 4*z2*z4",
    "z4",
    "z5 - 8*z1*z2^2 - a*z1 - z1^2",
    "-2*a*z1*z2 - 4*z1^2*z2 - 2*z2*z5",
    "-4*a*z2*z4 - 4*z1*z2*z4 - 16*z2^3*z4 - 2*z3*z5 + 8*z1*z2^2*z3",
];

pub fn sys5_second_flow() -> Vec<Poly> {
    SYS5_SECOND_FLOW.iter().map(|s| poly(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn field_examples() {
        let s4 = sys4();
        let zero = Scalar::zero();
        assert_eq!(s4.vector_field_exact(&ints(&[1, 0, 0, 0]), &zero).unwrap(), ints(&[0, 0, -1, 0]));
        assert_eq!(s4.vector_field_exact(&ints(&[0, 1, 0, 0]), &zero).unwrap(), ints(&[0, 0, 0, -16]));
        let s5 = sys5();
        let a = Scalar::from_ratio(7, 3);
        assert_eq!(s5.vector_field_exact(&ints(&[0, 0, 0, 0, 0]), &a).unwrap(), ints(&[0; 5]));
    }

    #[test]
    fn dimension_mismatch() {
        let err = sys4().vector_field_exact(&ints(&[1, 2, 3]), &Scalar::zero());
        assert!(matches!(err, Err(Error::DimensionMismatch { expected: 4, got: 3 })));
        assert!(sys5().invariants_at(&[Complex64::new(0.0, 0.0); 4], Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn invariant_examples() {
        let s4 = sys4();
        let v = s4.invariants_at_exact(&ints(&[1, 0, 0, 0]), &Scalar::zero()).unwrap();
        assert_eq!(v[0], Scalar::from_ratio(1, 4));
        let v = s4
            .invariants_at_exact(&ints(&[0, 0, 5, -3]), &Scalar::from_int(2))
            .unwrap();
        assert!(v[1].is_zero());
        // F₃(1,1,1,1,3) = 1·3 − 2·1 − 1 = 0
        let v = sys5().invariants_at_exact(&ints(&[1, 1, 1, 1, 3]), &Scalar::one()).unwrap();
        assert!(v[2].is_zero());
        let h = s4.invariants_at_exact(&ints(&[0, 0, 0, 0]), &Scalar::from_int(9)).unwrap();
        assert!(h[0].is_zero());
    }

    #[test]
    fn numeric_matches_exact() {
        let s5 = sys5();
        let st = ints(&[1, -2, 3, 1, 2]);
        let a = Scalar::from_ratio(1, 2);
        let exact = s5.vector_field_exact(&st, &a).unwrap();
        let num = s5
            .vector_field(&st.iter().map(Scalar::to_complex).collect::<Vec<_>>(), a.to_complex())
            .unwrap();
        for (e, n) in exact.iter().zip(num) {
            assert!((e.to_complex() - n).norm() < 1e-12);
        }
    }

    #[test]
    fn system_id_parsing() {
        assert_eq!("4d".parse::<SystemId>().unwrap(), SystemId::Sys4);
        assert_eq!("5D".parse::<SystemId>().unwrap(), SystemId::Sys5);
        assert!("6d".parse::<SystemId>().is_err());
    }
}
