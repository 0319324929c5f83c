use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::linalg::{char_poly, rank, Matrix};
use crate::exact::{Assignment, Poly, Scalar, Var};
use crate::systems::{SystemDef, Weights};

/// Leading coefficients `c` of `z_k ≈ c_k τ^(−2ν_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingFamily {
    pub c0: Vec<Scalar>,
    /// `x/√(−x²)` for the first nonzero `x = c0[k]`, when that root is exact.
    pub epsilon: Option<Scalar>,
    pub weights: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct LeadingBalances {
    pub families: Vec<LeadingFamily>,
    /// Zero patterns (true = coordinate nonzero) the exact solver could not
    /// settle, e.g. positive-dimensional or irrational leading systems.
    pub unresolved: Vec<Vec<bool>>,
}

/// The indicial equations `ν_k c_k + f_k(c)|_{a=0} = 0`.
pub fn indicial_equations(system: &SystemDef, weights: &Weights) -> Vec<Poly> {
    let zero_a: BTreeMap<Var, Poly> = [(system.param(), Poly::zero())].into();
    system
        .field
        .iter()
        .zip(&system.state_vars)
        .zip(&weights.state)
        .map(|((f, v), &nu)| &Poly::from_var(v).scale(&Scalar::from_int(nu as i64)) + &f.substitute(&zero_a))
        .collect()
}

/// Enumerates every zero pattern of the leading coefficients and solves the
/// indicial equations exactly where the small solver applies.
pub fn find_leading_balances(system: &SystemDef, weights: &Weights) -> Result<LeadingBalances> {
    let eqs = indicial_equations(system, weights);
    let n = system.dim();
    let mut families = Vec::new();
    let mut unresolved = Vec::new();
    for mask in 1u32..(1 << n) {
        let pattern: Vec<bool> = (0..n).map(|k| mask & (1 << k) != 0).collect();
        let zero: BTreeMap<Var, Poly> = system
            .state_vars
            .iter()
            .zip(&pattern)
            .filter(|(_, &nz)| !nz)
            .map(|(v, _)| (v.clone(), Poly::zero()))
            .collect();
        let reduced: Vec<Poly> = eqs.iter().map(|e| e.substitute(&zero)).collect();
        let unknowns: Vec<Var> = system
            .state_vars
            .iter()
            .zip(&pattern)
            .filter(|(_, &nz)| nz)
            .map(|(v, _)| v.clone())
            .collect();
        let mut out = SolveOutcome::default();
        solve(reduced, unknowns.clone(), Vec::new(), &mut out);
        if out.unresolved {
            unresolved.push(pattern.clone());
        }
        for sol in out.solutions {
            let c0: Vec<Scalar> = system
                .state_vars
                .iter()
                .map(|v| sol.get(v).cloned().unwrap_or_else(Scalar::zero))
                .collect();
            if unknowns.iter().any(|v| sol[v].is_zero()) {
                continue;
            }
            let asg: Assignment = system.state_vars.iter().cloned().zip(c0.iter().cloned()).collect();
            let ok = eqs
                .iter()
                .all(|e| e.eval(&asg).map(|x| x.is_zero()).unwrap_or(false));
            if !ok {
                continue;
            }
            let family = LeadingFamily {
                epsilon: epsilon_label(&c0),
                c0,
                weights: weights.state.clone(),
            };
            if !families.contains(&family) {
                families.push(family);
            }
        }
    }
    if families.is_empty() {
        return Err(Error::NoBalance(format!(
            "no nonzero solution of the indicial equations for {}",
            system.id
        )));
    }
    Ok(LeadingBalances {
        families,
        unresolved,
    })
}

fn epsilon_label(c0: &[Scalar]) -> Option<Scalar> {
    let x = c0.iter().find(|x| !x.is_zero())?;
    let sq = -(x * x);
    let root = Scalar::sqrt_rational(sq.as_rational()?)?;
    x.checked_div(&root).ok()
}

#[derive(Default)]
struct SolveOutcome {
    solutions: Vec<BTreeMap<Var, Scalar>>,
    unresolved: bool,
}

#[derive(Clone)]
enum Binding {
    /// `x = expr` in the unknowns bound later.
    Linear(Var, Poly),
    /// `x² = expr`; `x` appears only in even powers elsewhere.
    Square(Var, Poly),
}

/// Divides out the largest monomial in `unknowns` dividing every term.
fn strip_content(p: &Poly, unknowns: &[Var]) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let mut out = p.clone();
    for v in unknowns {
        let k = p.terms().map(|(m, _)| m.exponent(v)).min().unwrap_or(0);
        if k > 0 {
            out = Poly::from_terms(
                out.terms()
                    .map(|(m, c)| (m.div_var(v, k).expect("divisible"), c.clone())),
            );
        }
    }
    out
}

fn only_even_powers(p: &Poly, v: &Var) -> bool {
    p.terms().all(|(m, _)| m.exponent(v) % 2 == 0)
}

/// Replaces `v^(2m)` by `expr^m`.
fn substitute_square(p: &Poly, v: &Var, expr: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let (rest, e) = m.split_off(v);
        let t = expr.pow(e / 2).mul_monomial(&rest).scale(c);
        out = &out + &t;
    }
    out
}

fn solve(eqs: Vec<Poly>, unknowns: Vec<Var>, bindings: Vec<Binding>, out: &mut SolveOutcome) {
    let eqs: Vec<Poly> = eqs
        .iter()
        .map(|e| strip_content(e, &unknowns))
        .filter(|e| !e.is_zero())
        .collect();
    if eqs.iter().any(|e| e.as_constant().is_some()) {
        return;
    }
    if eqs.is_empty() {
        if unknowns.is_empty() {
            back_substitute(&bindings, BTreeMap::new(), out);
        } else {
            out.unresolved = true;
        }
        return;
    }
    for e in &eqs {
        for x in &unknowns {
            if e.degree_in(x) != Some(1) {
                continue;
            }
            let cs = e.coeffs_in(x);
            let Some(lead) = cs[1].as_constant() else { continue };
            let expr = cs[0].scale(&-lead.inv().expect("nonzero"));
            let map: BTreeMap<Var, Poly> = [(x.clone(), expr.clone())].into();
            let rest = eqs.iter().map(|q| q.substitute(&map)).collect();
            let unknowns = unknowns.iter().filter(|u| *u != x).cloned().collect();
            let mut b = bindings.clone();
            b.push(Binding::Linear(x.clone(), expr));
            return solve(rest, unknowns, b, out);
        }
    }
    for e in &eqs {
        for x in &unknowns {
            if e.degree_in(x) != Some(2) || !eqs.iter().all(|q| only_even_powers(q, x)) {
                continue;
            }
            let cs = e.coeffs_in(x);
            let Some(lead) = cs[2].as_constant() else { continue };
            let expr = cs[0].scale(&-lead.inv().expect("nonzero"));
            let rest = eqs.iter().map(|q| substitute_square(q, x, &expr)).collect();
            let unknowns = unknowns.iter().filter(|u| *u != x).cloned().collect();
            let mut b = bindings.clone();
            b.push(Binding::Square(x.clone(), expr));
            return solve(rest, unknowns, b, out);
        }
    }
    out.unresolved = true;
}

fn back_substitute(bindings: &[Binding], asg: BTreeMap<Var, Scalar>, out: &mut SolveOutcome) {
    let Some((last, rest)) = bindings.split_last() else {
        out.solutions.push(asg);
        return;
    };
    match last {
        Binding::Linear(x, expr) => {
            let Ok(val) = expr.eval(&asg) else {
                out.unresolved = true;
                return;
            };
            let mut asg = asg;
            asg.insert(x.clone(), val);
            back_substitute(rest, asg, out);
        }
        Binding::Square(x, expr) => {
            let sq = expr.eval(&asg).ok();
            let Some(root) = sq.as_ref().and_then(|s| Scalar::sqrt_rational(s.as_rational()?)) else {
                out.unresolved = true;
                return;
            };
            for r in [root.clone(), -root] {
                let mut a = asg.clone();
                a.insert(x.clone(), r);
                back_substitute(rest, a, out);
            }
        }
    }
}

/// Linearization `L = diag(2ν) + 2·Df(c0)|_{a=0}` of the τ-graded leading
/// map. An integer eigenvalue `k` of `L` is the τ-order at which a free
/// parameter may enter; the Kowalevski exponents in t-units are `k/2`.
pub fn kowalevski_matrix(system: &SystemDef, family: &LeadingFamily) -> Result<Matrix> {
    let n = system.dim();
    if family.c0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: family.c0.len(),
        });
    }
    let mut asg: Assignment = system
        .state_vars
        .iter()
        .cloned()
        .zip(family.c0.iter().cloned())
        .collect();
    asg.insert(system.param(), Scalar::zero());
    let two = Scalar::from_int(2);
    let mut m = vec![vec![Scalar::zero(); n]; n];
    for (i, f) in system.field.iter().enumerate() {
        for (j, v) in system.state_vars.iter().enumerate() {
            m[i][j] = &f.partial(v).eval(&asg)? * &two;
        }
        m[i][i] += &Scalar::from_int(2 * family.weights[i] as i64);
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct Kowalevski {
    pub matrix: Matrix,
    /// `det(x·I − L)` coefficients, constant term first.
    pub char_poly: Vec<Scalar>,
    /// Integer eigenvalues of `L` (τ-units) with algebraic multiplicity.
    pub tau_roots: Vec<(i64, usize)>,
    /// Degree of the factor of the characteristic polynomial left after
    /// removing the integer roots.
    pub other_roots: usize,
    /// Integer eigenvalues whose eigenspace is smaller than their
    /// multiplicity.
    pub defective: Vec<i64>,
}

impl Kowalevski {
    /// Exponents in units of `t`, i.e. `k/2` for each integer root `k`.
    pub fn exponents(&self) -> Vec<BigRational> {
        self.tau_roots
            .iter()
            .flat_map(|&(k, m)| std::iter::repeat_n(BigRational::new(k.into(), 2.into()), m))
            .collect()
    }

    /// Number of positive integer τ-exponents, counted with multiplicity.
    pub fn positive_count(&self) -> usize {
        self.tau_roots.iter().filter(|(k, _)| *k > 0).map(|(_, m)| m).sum()
    }
}

fn horner(p: &[Scalar], x: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
}

/// Divides `p` by `(x − r)`, assuming `r` is a root.
fn deflate(p: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let n = p.len() - 1;
    let mut q = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for k in (1..=n).rev() {
        carry = &p[k] + &(&carry * r);
        q[k - 1] = carry.clone();
    }
    q
}

fn root_bound(p: &[Scalar]) -> i64 {
    // Cauchy bound on a monic polynomial, using the complex modulus
    let lead = p.last().expect("nonempty").to_complex().norm();
    let m = p[..p.len() - 1]
        .iter()
        .map(|c| c.to_complex().norm() / lead)
        .fold(0.0, f64::max);
    (1.0 + m).ceil().min(1e6) as i64
}

pub fn kowalevski_exponents(system: &SystemDef, family: &LeadingFamily) -> Result<Kowalevski> {
    let matrix = kowalevski_matrix(system, family)?;
    let cp = char_poly(&matrix);
    let n = matrix.len();
    let mut rest = cp.clone();
    let mut tau_roots = Vec::new();
    let bound = root_bound(&cp);
    for k in -bound..=bound {
        let r = Scalar::from_int(k);
        let mut mult = 0;
        while rest.len() > 1 && horner(&rest, &r).is_zero() {
            rest = deflate(&rest, &r);
            mult += 1;
        }
        if mult > 0 {
            tau_roots.push((k, mult));
        }
    }
    let defective = tau_roots
        .iter()
        .filter(|&&(k, m)| {
            let shifted: Matrix = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let d = if i == j { Scalar::from_int(k) } else { Scalar::zero() };
                            &d - &matrix[i][j]
                        })
                        .collect()
                })
                .collect();
            n - rank(&shifted) < m
        })
        .map(|&(k, _)| k)
        .collect();
    Ok(Kowalevski {
        matrix,
        char_poly: cp,
        tau_roots,
        other_roots: rest.len() - 1,
        defective,
    })
}

/// Families whose integer Kowalevski exponents give a full set of `n − 1`
/// non-defective positive resonances.
pub fn principal_families(system: &SystemDef) -> Result<Vec<LeadingFamily>> {
    let lb = find_leading_balances(system, &Weights::of(system))?;
    let mut out = Vec::new();
    for f in lb.families {
        let k = kowalevski_exponents(system, &f)?;
        if k.positive_count() == system.dim() - 1 && k.defective.is_empty() && k.other_roots == 0 {
            out.push(f);
        }
    }
    // ε = i first
    out.sort_by(|x, y| {
        let im = |f: &LeadingFamily| f.epsilon.as_ref().map_or(0.0, |e| e.to_complex().im);
        im(y).total_cmp(&im(x))
    });
    Ok(out)
}

/// The principal family with the given `ε`.
pub fn principal_family(system: &SystemDef, epsilon: &Scalar) -> Result<LeadingFamily> {
    principal_families(system)?
        .into_iter()
        .find(|f| f.epsilon.as_ref() == Some(epsilon))
        .ok_or_else(|| Error::NoBalance(format!("no principal balance of {} with epsilon = {epsilon}", system.id)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly;
    use crate::systems::{sys4, sys5};

    fn eps_sqrt2_over_4(eps: &Scalar) -> Scalar {
        &(eps * &Scalar::sqrt2()) * &Scalar::from_ratio(1, 4)
    }

    #[test]
    fn sys4_principal_families() {
        let s = sys4();
        let fams = principal_families(&s).unwrap();
        assert_eq!(fams.len(), 2);
        for (f, eps) in fams.iter().zip([Scalar::i(), -Scalar::i()]) {
            assert_eq!(f.epsilon.as_ref(), Some(&eps));
            let c = eps_sqrt2_over_4(&eps);
            assert_eq!(f.c0, vec![Scalar::zero(), c.clone(), Scalar::zero(), -c]);
        }
    }

    #[test]
    fn sys4_exponents() {
        let s = sys4();
        let f = principal_family(&s, &Scalar::i()).unwrap();
        let k = kowalevski_exponents(&s, &f).unwrap();
        assert_eq!(k.tau_roots, vec![(-2, 1), (1, 1), (5, 1), (8, 1)]);
        assert!(k.exponents().contains(&BigRational::from_integer((-1).into())));
        assert!(k.defective.is_empty());
    }

    #[test]
    fn sys4_lower_balances_found() {
        let s = sys4();
        let lb = find_leading_balances(&s, &Weights::of(&s)).unwrap();
        // q1² = 1, q2² = −1/2 with all four coordinates nonzero
        assert!(lb.families.iter().any(|f| f.c0[0] == Scalar::one() && f.c0[2] == -Scalar::one()));
        assert!(lb.families.len() > 2);
    }

    #[test]
    fn sys5_principal_families() {
        let s = sys5();
        let fams = principal_families(&s).unwrap();
        assert_eq!(fams.len(), 2);
        let k = kowalevski_exponents(&s, &fams[0]).unwrap();
        assert_eq!(k.positive_count(), 4);
        assert!(k.tau_roots.contains(&(-2, 1)));
        let c = eps_sqrt2_over_4(&Scalar::i());
        assert_eq!(fams[0].c0[1], c);
        assert_eq!(fams[0].c0[2], -c);
    }

    #[test]
    fn solver_handles_squares() {
        let x = Var::new("x");
        let y = Var::new("y");
        let mut out = SolveOutcome::default();
        solve(
            vec![poly("x^2 + 2*y^2 - 3"), poly("x^2 - y^2")],
            vec![x.clone(), y.clone()],
            Vec::new(),
            &mut out,
        );
        assert!(!out.unresolved);
        assert_eq!(out.solutions.len(), 4);
        assert!(out.solutions.iter().all(|s| s[&x].pow(2) == Scalar::one()));
    }

    #[test]
    fn trivial_system_has_no_balance() {
        // ẋ = 0 with weight 1: indicial equation x = 0
        let mut s = sys4();
        s.field = vec![Poly::zero(); 4];
        assert!(matches!(find_leading_balances(&s, &Weights::of(&s)), Err(Error::NoBalance(_))));
    }
}
