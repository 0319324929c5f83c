//! Curves that are double covers of a line: discriminants, branch points,
//! Riemann–Hurwitz genus, the genus-2 quotient of the 4D parameter curve,
//! the sextic `ζ² = P₆(s)`, and the sign flip exchanging the two branches.

mod roots;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{quadratic_discriminant, Monomial, Poly, Scalar, Var};
use crate::painleve::fixtures::{with_epsilon, GAMMA_CURVE, SYS4_CURVE, SYS5_CURVE};
use crate::painleve::{CurveId, CurveRelation};

pub use roots::{cluster, polynomial_roots};

/// `B² − 4AC` for the relation `A·y² + B·y + C` in its fiber variable.
pub fn fiber_discriminant(curve: &CurveRelation) -> Result<Poly> {
    let (a, b, c) = curve.fiber_coeffs()?;
    Ok(quadratic_discriminant(&a, &b, &c))
}

/// `g = −n + 1 + v/2`.
pub fn genus_riemann_hurwitz(n: u32, v: usize) -> Result<i64> {
    if v % 2 == 1 {
        return Err(Error::OddBranchCount(v));
    }
    if n == 0 {
        return Err(Error::InvalidInput("a cover needs at least one sheet".into()));
    }
    Ok(-(n as i64) + 1 + (v / 2) as i64)
}

/// `P₆(s) = s(−8s⁵ − 4a s³ + 2b₁ s + b₂)`.
pub fn hyperelliptic_p6(a: &Poly, b1: &Poly, b2: &Poly) -> Poly {
    p6_coefficients(a, b1, b2)
        .into_iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (k, c)| {
            &acc + &c.mul_monomial(&Monomial::var(Var::new("s"), k as u32))
        })
}

/// Coefficients of `P₆` for degrees `0..=6`: `(0, b₂, 2b₁, 0, −4a, 0, −8)`.
pub fn p6_coefficients(a: &Poly, b1: &Poly, b2: &Poly) -> Vec<Poly> {
    vec![
        Poly::zero(),
        b2.clone(),
        b1.scale(&Scalar::from_int(2)),
        Poly::zero(),
        a.scale(&Scalar::from_int(-4)),
        Poly::zero(),
        Poly::int(-8),
    ]
}

/// `ζ² − P₆(s) = 0` with symbolic `a, b1, b2`.
pub fn p6_curve() -> CurveRelation {
    let p6 = hyperelliptic_p6(&Poly::var("a"), &Poly::var("b1"), &Poly::var("b2"));
    CurveRelation {
        id: CurveId::P6,
        relation: &Poly::var("zeta").pow(2) - &p6,
        base: Var::new("s"),
        fiber: Var::new("zeta"),
        epsilon: None,
    }
}

/// The parameter curves in their reference form.
pub fn reference_curve(id: CurveId, epsilon: &Scalar) -> CurveRelation {
    let (text, base, fiber) = match id {
        CurveId::Sys4 => (SYS4_CURVE, "u", "v"),
        CurveId::Sys5 => (SYS5_CURVE, "alpha", "beta"),
        CurveId::Gamma => (GAMMA_CURVE, "z", "w"),
        CurveId::P6 => return p6_curve(),
    };
    CurveRelation {
        id,
        relation: with_epsilon(text, epsilon),
        base: Var::new(base),
        fiber: Var::new(fiber),
        epsilon: Some(epsilon.clone()),
    }
}

/// Multiplies the `(u, v)` relation by `u²` and rewrites it in `z = u²`,
/// `w = uv`.
pub fn quotient_to_gamma(curve: &CurveRelation) -> Result<CurveRelation> {
    let (u, v) = (&curve.base, &curve.fiber);
    let (z, w) = (Var::new("z"), Var::new("w"));
    let mut out = Poly::zero();
    for (m, c) in curve.relation.terms() {
        let (rest, eu) = m.split_off(u);
        let (rest, ev) = rest.split_off(v);
        let eu = eu + 2;
        if eu < ev || (eu - ev) % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "term u^{eu}·v^{ev} is not a polynomial in u², uv"
            )));
        }
        let m = rest
            .mul(&Monomial::var(z.clone(), (eu - ev) / 2))
            .mul(&Monomial::var(w.clone(), ev));
        out.add_term(m, c);
    }
    Ok(CurveRelation {
        id: CurveId::Gamma,
        relation: out,
        base: z,
        fiber: w,
        epsilon: curve.epsilon.clone(),
    })
}

/// Inverse of [`quotient_to_gamma`]: `z = u²`, `w = uv`, then divides by
/// `u²`.
pub fn gamma_to_uv(curve: &CurveRelation) -> Result<CurveRelation> {
    let (u, v) = (Var::new("u"), Var::new("v"));
    let map: BTreeMap<Var, Poly> = [
        (curve.base.clone(), Poly::from_var(&u).pow(2)),
        (curve.fiber.clone(), &Poly::from_var(&u) * &Poly::from_var(&v)),
    ]
    .into();
    let sub = curve.relation.substitute(&map);
    let mut out = Poly::zero();
    for (m, c) in sub.terms() {
        let m = m
            .div_var(&u, 2)
            .ok_or_else(|| Error::InvalidInput("relation is not divisible by u^2".into()))?;
        out.add_term(m, c);
    }
    Ok(CurveRelation {
        id: CurveId::Sys4,
        relation: out,
        base: u,
        fiber: v,
        epsilon: curve.epsilon.clone(),
    })
}

/// Image of the curve under `(base, fiber) → (−base, −fiber)`, relabelled
/// with `−ε`. For the 5D curve this is exactly the `−ε` relation. The 4D
/// relation is even in `(u, v)` and so is fixed; its two branches are
/// complex conjugates instead.
pub fn curve_involution_swap(curve: &CurveRelation) -> CurveRelation {
    let map: BTreeMap<Var, Poly> = [&curve.base, &curve.fiber]
        .into_iter()
        .map(|v| (v.clone(), -Poly::from_var(v)))
        .collect();
    CurveRelation {
        relation: curve.relation.substitute(&map),
        epsilon: curve.epsilon.as_ref().map(|e| -e.clone()),
        ..curve.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub n_sheets: u32,
    /// Distinct finite roots of the discriminant, `[re, im]`.
    pub branch_points: Vec<[f64; 2]>,
    pub infinity_branched: bool,
    /// `None` when the parameters are degenerate.
    pub genus: Option<i64>,
    pub discriminant_degree: usize,
    /// Why the genus was withheld.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<String>,
}

impl BranchReport {
    pub fn branch_count(&self) -> usize {
        self.branch_points.len() + usize::from(self.infinity_branched)
    }
}

/// Counts branch points of the double cover for numeric parameter values.
/// Infinity is a branch point iff the discriminant has odd degree (the
/// fiber's leading coefficient must be a nonzero constant).
pub fn count_branch_points(
    curve: &CurveRelation,
    params: &BTreeMap<Var, Complex64>,
    tol: f64,
) -> Result<BranchReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("cluster tolerance {tol} must be positive")));
    }
    let (a, _, _) = curve.fiber_coeffs()?;
    let a0 = a.eval_complex(params)?;
    let disc = fiber_discriminant(curve)?;
    let cs: Vec<Complex64> = disc
        .coeffs_in(&curve.base)
        .iter()
        .map(|c| c.eval_complex(params))
        .collect::<Result<_>>()?;
    let mut report = BranchReport {
        n_sheets: 2,
        branch_points: Vec::new(),
        infinity_branched: false,
        genus: None,
        discriminant_degree: 0,
        degenerate: None,
    };
    if a.degree_in(&curve.base).unwrap_or(0) > 0 || a0.norm() == 0.0 {
        report.degenerate = Some("fiber leading coefficient is not a nonzero constant".into());
        return Ok(report);
    }
    let scale = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let Some(deg) = cs.iter().rposition(|c| c.norm() > 1e-14 * scale) else {
        report.degenerate = Some("discriminant vanishes identically".into());
        return Ok(report);
    };
    let lead_sym = deg + 1 < cs.len();
    report.discriminant_degree = deg;
    report.infinity_branched = deg % 2 == 1;
    let roots = polynomial_roots(&cs[..=deg])?;
    let clusters = cluster(&roots, tol)?;
    let mut pts: Vec<Complex64> = clusters.iter().map(|(c, _)| *c).collect();
    pts.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    report.branch_points = pts.iter().map(|z| [z.re, z.im]).collect();
    if lead_sym {
        report.degenerate = Some("leading coefficient of the discriminant vanishes".into());
    } else if let Some((c, m)) = clusters.iter().find(|(_, m)| *m > 1) {
        report.degenerate = Some(format!("discriminant root {c} has multiplicity {m}"));
    } else {
        report.genus = Some(genus_riemann_hurwitz(2, report.branch_count())?);
    }
    Ok(report)
}

/// Parameter names the curve needs besides its base and fiber.
pub fn curve_parameter_names(id: CurveId) -> &'static [&'static str] {
    match id {
        CurveId::Sys4 | CurveId::Gamma | CurveId::P6 => &["a", "b1", "b2"],
        CurveId::Sys5 => &["a", "c1", "c2", "c3"],
    }
}

/// One random parameter draw, components uniform in `[-2, 2]`.
pub fn random_parameters(id: CurveId, rng: &mut ChaCha8Rng) -> BTreeMap<Var, Complex64> {
    curve_parameter_names(id)
        .iter()
        .map(|n| (Var::new(n), Complex64::new(rng.random_range(-2.0..2.0), 0.0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly;
    use rand::SeedableRng;

    fn eps() -> Scalar {
        Scalar::i()
    }

    #[test]
    fn discriminant_degrees() {
        let d = fiber_discriminant(&reference_curve(CurveId::Sys4, &eps())).unwrap();
        let u = Var::new("u");
        assert_eq!(d.degree_in(&u), Some(10));
        assert_eq!(d.coeffs_in(&u)[10], Poly::int(16));
        let d = fiber_discriminant(&reference_curve(CurveId::Sys5, &eps())).unwrap();
        let al = Var::new("alpha");
        assert_eq!(d.degree_in(&al), Some(6));
        assert_eq!(d.coeffs_in(&al)[6], Poly::int(16));
        let c = CurveRelation {
            id: CurveId::P6,
            relation: poly("y^2 - x"),
            base: Var::new("x"),
            fiber: Var::new("y"),
            epsilon: None,
        };
        assert_eq!(fiber_discriminant(&c).unwrap(), poly("4*x"));
    }

    #[test]
    fn riemann_hurwitz() {
        assert_eq!(genus_riemann_hurwitz(2, 10).unwrap(), 4);
        assert_eq!(genus_riemann_hurwitz(2, 6).unwrap(), 2);
        assert_eq!(genus_riemann_hurwitz(1, 0).unwrap(), 0);
        assert!(matches!(genus_riemann_hurwitz(2, 5), Err(Error::OddBranchCount(5))));
    }

    #[test]
    fn p6_shape() {
        let cs = p6_coefficients(&poly("a"), &poly("b1"), &poly("b2"));
        let want = ["0", "b2", "2*b1", "0", "-4*a", "0", "-8"];
        for (c, w) in cs.iter().zip(want) {
            assert_eq!(*c, poly(w));
        }
        let zero = hyperelliptic_p6(&Poly::zero(), &Poly::zero(), &Poly::zero());
        assert_eq!(zero, poly("-8*s^6"));
        let p = hyperelliptic_p6(&poly("a"), &poly("b1"), &poly("b2"));
        let asg = [(Var::new("s"), Scalar::zero())].into();
        assert!(p.specialize(&asg).is_zero());
    }

    #[test]
    fn gamma_quotient() {
        for e in [Scalar::i(), -Scalar::i()] {
            let c = reference_curve(CurveId::Sys4, &e);
            let g = quotient_to_gamma(&c).unwrap();
            assert_eq!(g.relation, reference_curve(CurveId::Gamma, &e).relation);
            assert_eq!(gamma_to_uv(&g).unwrap().relation, c.relation);
        }
        let odd = CurveRelation {
            relation: poly("v^2 + u*v + v"),
            ..reference_curve(CurveId::Sys4, &eps())
        };
        assert!(quotient_to_gamma(&odd).is_err());
    }

    #[test]
    fn involution_swaps_branches() {
        let hi = reference_curve(CurveId::Sys5, &Scalar::i());
        let hm = reference_curve(CurveId::Sys5, &-Scalar::i());
        let s = curve_involution_swap(&hi);
        assert_eq!(s.relation, hm.relation);
        assert_eq!(s.epsilon, hm.epsilon);
        assert_eq!(curve_involution_swap(&s), hi);
        let c3 = Var::new("c3");
        assert_eq!(s.relation.coeffs_in(&c3)[1], Poly::one());
        let ci = reference_curve(CurveId::Sys4, &Scalar::i());
        assert_eq!(curve_involution_swap(&ci).relation, ci.relation);
        assert_eq!(ci.relation.conj(), reference_curve(CurveId::Sys4, &-Scalar::i()).relation);
    }

    #[test]
    fn generic_genera() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            for (id, g, v) in [(CurveId::Sys4, 4, 10), (CurveId::Sys5, 2, 6), (CurveId::P6, 2, 6), (CurveId::Gamma, 2, 6)] {
                let p = random_parameters(id, &mut rng);
                let c = reference_curve(id, &eps());
                for tol in [1e-10, 1e-8, 1e-6] {
                    let r = count_branch_points(&c, &p, tol).unwrap();
                    assert_eq!(r.genus, Some(g), "{id:?} {tol}");
                    assert_eq!(r.branch_count(), v);
                    assert!(!r.infinity_branched);
                }
            }
        }
    }

    #[test]
    fn degenerate_parameters_flagged() {
        // b2 = 0 makes s = 0 a double root of 4·P₆
        let c = p6_curve();
        let p = [("a", 1.0), ("b1", 0.5), ("b2", 0.0)]
            .iter()
            .map(|(n, x)| (Var::new(n), Complex64::new(*x, 0.0)))
            .collect();
        let r = count_branch_points(&c, &p, 1e-8).unwrap();
        assert!(r.genus.is_none() && r.degenerate.is_some());
    }

    #[test]
    fn specialization_commutes_with_discriminant() {
        let c = reference_curve(CurveId::Sys4, &eps());
        let asg = [
            (Var::new("a"), Scalar::from_ratio(3, 2)),
            (Var::new("b1"), Scalar::from_int(-2)),
            (Var::new("b2"), Scalar::from_ratio(1, 7)),
        ]
        .into();
        let spec = CurveRelation {
            relation: c.relation.specialize(&asg),
            ..c.clone()
        };
        assert_eq!(
            fiber_discriminant(&spec).unwrap(),
            fiber_discriminant(&c).unwrap().specialize(&asg)
        );
    }
}
