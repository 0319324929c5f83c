use std::collections::BTreeMap;
use std::ops::Neg;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{poly, Assignment, Poly, Scalar, Var};
use crate::systems::{hamiltonian_vector_field, poisson_matrix, sys4, sys5, F1, F2, F3};

/// A polynomial map between coordinate spaces.
#[derive(Debug, Clone)]
pub struct Morphism {
    pub source: Vec<Var>,
    pub target: Vec<Var>,
    /// `target[k] = components[k](source)`.
    pub components: Vec<Poly>,
}

impl Morphism {
    /// `p ∘ self` for `p` in the target variables.
    pub fn pull_back(&self, p: &Poly) -> Poly {
        let map: BTreeMap<Var, Poly> = self
            .target
            .iter()
            .cloned()
            .zip(self.components.iter().cloned())
            .collect();
        p.substitute(&map)
    }

    pub fn apply_exact(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.source.len() {
            return Err(Error::DimensionMismatch {
                expected: self.source.len(),
                got: x.len(),
            });
        }
        let asg: Assignment = self.source.iter().cloned().zip(x.iter().cloned()).collect();
        self.components.iter().map(|c| c.eval(&asg)).collect()
    }
}

/// `φ(q, p) = (q1², q2, p2, q1p1, 2q1²q2² + p1²)`.
pub fn phi() -> Morphism {
    Morphism {
        source: sys4().state_vars,
        target: sys5().state_vars,
        components: ["q1^2", "q2", "p2", "q1*p1", "2*q1^2*q2^2 + p1^2"]
            .iter()
            .map(|s| poly(s))
            .collect(),
    }
}

pub fn pushforward_phi(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let [q1, q2, p1, p2] = <[Complex64; 4]>::try_from(x).map_err(|_| Error::DimensionMismatch {
        expected: 4,
        got: x.len(),
    })?;
    Ok(vec![
        q1 * q1,
        q2,
        p2,
        q1 * p1,
        2.0 * q1 * q1 * q2 * q2 + p1 * p1,
    ])
}

/// Component residuals `Dφ·X₄ − X₅∘φ`.
pub fn verify_phi_intertwines() -> Vec<Poly> {
    let m = phi();
    let s4 = sys4();
    let s5 = sys5();
    m.components
        .iter()
        .zip(&s5.field)
        .map(|(c, f5)| &s4.lie_derivative(c) - &m.pull_back(f5))
        .collect()
}

pub fn sigma_sign() -> [i64; 5] {
    [1, 1, -1, -1, 1]
}

/// `σ(z) = (z1, z2, −z3, −z4, z5)`.
pub fn apply_sigma<T: Clone + Neg<Output = T>>(z: &[T]) -> Result<Vec<T>> {
    if z.len() != 5 {
        return Err(Error::DimensionMismatch {
            expected: 5,
            got: z.len(),
        });
    }
    Ok(z
        .iter()
        .zip(sigma_sign())
        .map(|(x, s)| if s < 0 { -x.clone() } else { x.clone() })
        .collect())
}

fn sigma_substitution() -> BTreeMap<Var, Poly> {
    sys5()
        .state_vars
        .into_iter()
        .zip(sigma_sign())
        .map(|(v, s)| {
            let p = Poly::from_var(&v).scale(&Scalar::from_int(s));
            (v, p)
        })
        .collect()
}

/// Named residuals of the σ identities: `F_k∘σ − F_k` for k = 1..3 and
/// `S·X_{F_k}(Sz) + X_{F_k}(z)` for k = 1, 2 (components concatenated).
pub fn sigma_equivariance_diffs() -> Vec<(String, Vec<Poly>)> {
    let sub = sigma_substitution();
    let mut out = Vec::new();
    for (name, f) in [("F1", F1), ("F2", F2), ("F3", F3)] {
        let f = poly(f);
        out.push((format!("invariant_{name}"), vec![&f.substitute(&sub) - &f]));
    }
    let j = poisson_matrix();
    for (name, f) in [("F1", F1), ("F2", F2)] {
        let x = hamiltonian_vector_field(&j, &poly(f));
        let diffs = x
            .iter()
            .zip(sigma_sign())
            .map(|(xk, s)| &xk.substitute(&sub).scale(&Scalar::from_int(s)) + xk)
            .collect();
        out.push((format!("reverses_{name}"), diffs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{H1, H2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pushforward_examples() {
        let out = pushforward_phi(&[c(1.0), c(1.0), c(1.0), c(1.0)]).unwrap();
        assert_eq!(out, vec![c(1.0), c(1.0), c(1.0), c(1.0), c(3.0)]);
        let out = pushforward_phi(&[c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
        assert_eq!(out, vec![c(0.0), c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert!(pushforward_phi(&[c(1.0)]).is_err());
        let ex = phi()
            .apply_exact(&[1, 1, 1, 1].map(Scalar::from_int))
            .unwrap();
        assert_eq!(ex, [1, 1, 1, 1, 3].map(Scalar::from_int).to_vec());
    }

    #[test]
    fn pullbacks() {
        let m = phi();
        assert_eq!(m.pull_back(&poly(F1)), poly(H1));
        assert_eq!(m.pull_back(&poly(F2)), poly(H2));
        assert!(m.pull_back(&poly(F3)).is_zero());
    }

    #[test]
    fn intertwines() {
        let r = verify_phi_intertwines();
        assert_eq!(r.len(), 5);
        assert!(r.iter().all(Poly::is_zero));
    }

    #[test]
    fn sigma() {
        let z: Vec<Scalar> = (1..=5).map(Scalar::from_int).collect();
        let s = apply_sigma(&z).unwrap();
        assert_eq!(s[2], Scalar::from_int(-3));
        assert_eq!(apply_sigma(&s).unwrap(), z);
        assert!(apply_sigma(&z[..3]).is_err());
        for (name, diffs) in sigma_equivariance_diffs() {
            assert!(diffs.iter().all(Poly::is_zero), "{name}");
        }
    }
}
