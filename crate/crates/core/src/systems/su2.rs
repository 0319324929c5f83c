//! Substitution of the complex symplectic change of variables into the
//! reduced Yang–Mills Hamiltonian, compared monomial by monomial with the
//! quartic normal form.

use std::collections::BTreeMap;

use crate::exact::{poly, Monomial, Poly, Scalar, Var};

/// Symbol standing for `2^(1/4)`; reduced with `r⁴ = 2`.
const FOURTH_ROOT: &str = "r";

pub const REDUCED_YM: &str = "1/2*(p1^2 + p2^2 + q1^2*q2^2)";
pub const QUARTIC_FORM: &str =
    "1/2*(p1^2 + p2^2) + 1/4*q1^4 + 1/4*q2^4 + 1/2*q1^2*q2^2";

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialRatio {
    pub monomial: String,
    pub computed: Scalar,
    pub target: Scalar,
    /// `computed / target`, `None` when the target coefficient is zero.
    pub ratio: Option<Scalar>,
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub kinetic: Vec<MonomialRatio>,
    pub potential: Vec<MonomialRatio>,
}

impl ReductionReport {
    /// The common ratio of a monomial class, if there is one.
    pub fn class_ratio(class: &[MonomialRatio]) -> Option<Scalar> {
        let first = class.first()?.ratio.clone()?;
        class
            .iter()
            .all(|m| m.ratio.as_ref() == Some(&first))
            .then_some(first)
    }
}

/// `p1 → (√2/2)(p1+p2)`, `p2 → (√2/2)(p1−p2)`, `q1 → (r/2)(q1+iq2)`,
/// `q2 → (r/2)(q1−iq2)`.
pub fn su2_transformation() -> BTreeMap<Var, Poly> {
    [
        ("p1", "sqrt2/2*(p1 + p2)"),
        ("p2", "sqrt2/2*(p1 - p2)"),
        ("q1", "r/2*(q1 + i*q2)"),
        ("q2", "r/2*(q1 - i*q2)"),
    ]
    .iter()
    .map(|(v, s)| (Var::new(v), poly(s)))
    .collect()
}

fn reduce_fourth_root(p: &Poly) -> Poly {
    let r = Var::new(FOURTH_ROOT);
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let (rest, e) = m.split_off(&r);
        let mut coeff = c.clone();
        for _ in 0..e / 4 {
            coeff = &coeff * &Scalar::from_int(2);
        }
        let m = rest.mul(&Monomial::var(r.clone(), e % 4));
        out.add_term(m, &coeff);
    }
    out
}

/// Substitutes `map` into `h`, reduces `r⁴ = 2`, and lists the coefficient
/// ratio against `target` for every monomial of either side.
pub fn compare_after_substitution(
    h: &Poly,
    map: &BTreeMap<Var, Poly>,
    target: &Poly,
) -> Vec<MonomialRatio> {
    let got = reduce_fourth_root(&h.substitute(map));
    let mut monomials: Vec<Monomial> = got.terms().map(|(m, _)| m.clone()).collect();
    for (m, _) in target.terms() {
        if !monomials.contains(m) {
            monomials.push(m.clone());
        }
    }
    monomials.sort();
    monomials
        .into_iter()
        .rev()
        .map(|m| {
            let computed = got.coeff(&m);
            let t = target.coeff(&m);
            MonomialRatio {
                monomial: Poly::term(Scalar::one(), m).to_string(),
                ratio: t.inv().map(|ti| &computed * &ti),
                computed,
                target: t,
            }
        })
        .collect()
}

pub fn verify_su2_reduction() -> ReductionReport {
    let rows = compare_after_substitution(&poly(REDUCED_YM), &su2_transformation(), &poly(QUARTIC_FORM));
    let (kinetic, potential) = rows.into_iter().partition(|m| m.monomial.contains('p'));
    ReductionReport { kinetic, potential }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reported_ratios() {
        let rep = verify_su2_reduction();
        assert_eq!(ReductionReport::class_ratio(&rep.kinetic), Some(Scalar::one()));
        assert_eq!(
            ReductionReport::class_ratio(&rep.potential),
            Some(Scalar::from_ratio(1, 4))
        );
        let q14 = rep.potential.iter().find(|m| m.monomial == "q1^4").unwrap();
        assert_eq!(q14.computed, Scalar::from_ratio(1, 16));
        let mixed = rep.potential.iter().find(|m| m.monomial == "q1^2*q2^2").unwrap();
        assert_eq!(mixed.computed, Scalar::from_ratio(1, 8));
    }

    #[test]
    fn identity_transformation() {
        let h = poly(QUARTIC_FORM);
        let rows = compare_after_substitution(&h, &BTreeMap::new(), &h);
        assert!(rows.iter().all(|m| m.ratio == Some(Scalar::one())));
    }
}
