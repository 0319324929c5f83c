//! The verification suites as named checks, plus the JSON documents emitted
//! by `balance` and `curves`. Shared by the CLI, the C ABI and the
//! acceptance tests.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Scalar, Var};
use crate::geometry::{
    count_branch_points, curve_involution_swap, gamma_to_uv, quotient_to_gamma, random_parameters, reference_curve,
    BranchReport,
};
use crate::numerics::{
    default_quadrature_state4, default_state4, flows_commute_numeric, integrate, invariant_drift, p6_residual,
    phi_compatibility, quadrature_linearization, refinement_sweep, tolerance_sweep, BranchMode, IntegratorConfig,
    TimeSpan, Trajectory,
};
use crate::painleve::{
    curve_from_balance, fixture_mismatches, kowalevski_exponents, principal_balance, principal_family,
    residual_check, Balance, CurveId,
};
use crate::report::Check;
use crate::systems::morphism::pushforward_phi;
use crate::systems::{SystemDef, SystemId};

/// τ-order the balances are extended to for the residual check.
pub const RESIDUAL_ORDER: usize = 16;
/// Cluster tolerances the genus counts must be stable across.
pub const CLUSTER_TOLS: [f64; 3] = [1e-10, 1e-8, 1e-6];

pub const DRIFT_BOUND: f64 = 1e-8;
pub const CASIMIR_BOUND: f64 = 1e-10;
pub const PHI_BOUND: f64 = 1e-7;
pub const CLOSURE_BOUND: f64 = 1e-10;
pub const P6_BOUND: f64 = 1e-6;
pub const QUADRATURE_BOUND: f64 = 1e-6;
pub const COMMUTE_BOUND: f64 = 1e-6;
pub const MIN_ORDER: f64 = 4.0;

/// Fixed step sizes for refinement sweeps.
pub const REFINEMENT_STEPS: [f64; 3] = [0.04, 0.02, 0.01];
/// Relative tolerances for the adaptive drift-rate sweep.
pub const TOLERANCE_SWEEP: [f64; 7] = [1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10];

pub fn epsilon_label(eps: &Scalar) -> &'static str {
    if *eps == Scalar::i() {
        "plus_i"
    } else {
        "minus_i"
    }
}

pub fn both_epsilons() -> [Scalar; 2] {
    [Scalar::i(), -Scalar::i()]
}

fn expected_free_parameters(system: SystemId) -> &'static [(&'static str, usize)] {
    match system {
        SystemId::Sys4 => &[("u", 1), ("v", 5), ("w", 8)],
        SystemId::Sys5 => &[("alpha", 2), ("beta", 6), ("theta", 8), ("gamma", 10)],
    }
}

/// Reference-table reproduction, residual through [`RESIDUAL_ORDER`],
/// free-parameter orders and Kowalevski exponents for one system.
pub fn balance_checks(system: &SystemDef) -> Vec<Check> {
    let tag = system.id.to_string();
    let mut out = Vec::new();
    for eps in both_epsilons() {
        let label = format!("balance.{tag}_{}", epsilon_label(&eps));
        match principal_balance(system, &eps, RESIDUAL_ORDER) {
            Ok(b) => {
                let bad = fixture_mismatches(&b);
                out.push(Check::flag(format!("{label}.coefficients"), bad.is_empty(), || {
                    let (c, j, d) = &bad[0];
                    format!("{} mismatches; first {c} at tau-order {j}: {}", bad.len(), d.to_canonical_text())
                }));
                out.push(match residual_check(system, &b, RESIDUAL_ORDER) {
                    Ok(r) => Check::flag(format!("{label}.residual"), r.ok(), || {
                        let (k, c, p) = r.first_bad.as_ref().expect("failing report");
                        format!("{c} at tau-order {k}: {}", p.to_canonical_text())
                    }),
                    Err(e) => Check::error(format!("{label}.residual"), &e),
                });
                let got: Vec<(&str, usize)> =
                    b.free_parameters.iter().map(|p| (p.name.as_str(), p.order)).collect();
                let want = expected_free_parameters(system.id);
                out.push(Check::flag(format!("{label}.free_parameters"), got == want, || {
                    format!("got {got:?}, expected {want:?}")
                }));
            }
            Err(e) => {
                for part in ["coefficients", "residual", "free_parameters"] {
                    out.push(Check::error(format!("{label}.{part}"), &e));
                }
            }
        }
    }
    let name = format!("balance.{tag}.kowalevski");
    out.push(
        match principal_family(system, &Scalar::i()).and_then(|f| kowalevski_exponents(system, &f)) {
            Ok(k) => Check::flag(name, k.positive_count() == system.dim() - 1 && k.defective.is_empty(), || {
                format!("exponents {:?}", k.tau_roots)
            }),
            Err(e) => Check::error(name, &e),
        },
    );
    out
}

/// Curves from the balances against the reference relations, the quotient
/// to `Γ_ε`, and the branch swap.
pub fn curve_checks(sys4: &SystemDef, sys5: &SystemDef) -> Vec<Check> {
    let mut out = Vec::new();
    for eps in both_epsilons() {
        let e = epsilon_label(&eps);
        for (system, id, order) in [(sys4, CurveId::Sys4, 10), (sys5, CurveId::Sys5, 12)] {
            let name = format!("curves.{}_{e}", system.id);
            let r = principal_balance(system, &eps, order).and_then(|b| curve_from_balance(system, &b));
            out.push(match r {
                Ok(c) => {
                    let d = &c.relation - &reference_curve(id, &eps).relation;
                    Check::identity(name, &d)
                }
                Err(err) => Check::error(name, &err),
            });
        }
        let c = reference_curve(CurveId::Sys4, &eps);
        let name = format!("curves.gamma_quotient_{e}");
        out.push(match quotient_to_gamma(&c).and_then(|g| Ok((gamma_to_uv(&g)?, g))) {
            Ok((back, g)) => Check::identities(
                name,
                [
                    &(&g.relation - &reference_curve(CurveId::Gamma, &eps).relation),
                    &(&back.relation - &c.relation),
                ],
            ),
            Err(err) => Check::error(name, &err),
        });
    }
    let hi = reference_curve(CurveId::Sys5, &Scalar::i());
    let hm = reference_curve(CurveId::Sys5, &-Scalar::i());
    let s = curve_involution_swap(&hi);
    out.push(Check::identity("curves.flip_5d", &(&s.relation - &hm.relation)));
    out.push(Check::identity(
        "curves.flip_5d_involutive",
        &(&curve_involution_swap(&s).relation - &hi.relation),
    ));
    out
}

fn expected_genus(id: CurveId) -> (i64, usize) {
    match id {
        CurveId::Sys4 => (4, 10),
        CurveId::Sys5 | CurveId::Gamma | CurveId::P6 => (2, 6),
    }
}

/// Genus and branch count for `draws` seeded random parameter sets at every
/// tolerance in [`CLUSTER_TOLS`]. One check per curve.
pub fn genus_checks(seed: u64, draws: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = [CurveId::Sys4, CurveId::Sys5, CurveId::Gamma, CurveId::P6];
    let mut bad: BTreeMap<CurveId, Vec<String>> = ids.iter().map(|id| (*id, Vec::new())).collect();
    for _ in 0..draws {
        for id in ids {
            let params = random_parameters(id, &mut rng);
            let curve = reference_curve(id, &Scalar::i());
            let (g, v) = expected_genus(id);
            for tol in CLUSTER_TOLS {
                let msg = match count_branch_points(&curve, &params, tol) {
                    Ok(r) if r.genus == Some(g) && r.branch_count() == v => continue,
                    Ok(r) => format!("tol {tol:e}: genus {:?}, {} branch points", r.genus, r.branch_count()),
                    Err(e) => format!("tol {tol:e}: {e}"),
                };
                bad.get_mut(&id).expect("listed").push(format!("{msg} at {}", fmt_params(&params)));
            }
        }
    }
    ids.iter()
        .map(|id| {
            let b = &bad[id];
            let mut c = Check::flag(format!("genus.{id}"), b.is_empty(), || b.join("; "));
            c.residual = Some(b.len() as f64);
            c
        })
        .collect()
}

fn fmt_params(p: &BTreeMap<Var, Complex64>) -> String {
    p.iter().map(|(k, v)| format!("{k}={}", v.re)).collect::<Vec<_>>().join(",")
}

/// Numerical inputs shared by the trajectory checks.
#[derive(Debug, Clone)]
pub struct NumericSetup {
    pub a: Complex64,
    /// 4D starting point for drift, φ-compatibility and the sextic identity.
    pub state4: Vec<Complex64>,
    /// 4D starting point for the quadrature check.
    pub quadrature_state4: Vec<Complex64>,
    pub span: TimeSpan,
    /// Shorter window for the φ-compatibility comparison.
    pub phi_span: TimeSpan,
    pub config: IntegratorConfig,
    pub commute_times: (f64, f64),
}

impl Default for NumericSetup {
    fn default() -> Self {
        NumericSetup {
            a: Complex64::new(1.0, 0.0),
            state4: default_state4(),
            quadrature_state4: default_quadrature_state4(),
            span: TimeSpan::real(0.0, 10.0),
            phi_span: TimeSpan::real(0.0, 5.0),
            config: IntegratorConfig::default(),
            commute_times: (0.5, 0.5),
        }
    }
}

fn checked<T>(name: &str, r: Result<T>, f: impl FnOnce(T) -> Vec<Check>) -> Vec<Check> {
    match r {
        Ok(x) => f(x),
        Err(e) => vec![Check::error(name, &e)],
    }
}

fn order_check(name: &str, order: Option<f64>, errors: &[f64]) -> Check {
    let mut c = Check::bound(name, -order.unwrap_or(f64::NAN), -MIN_ORDER);
    c.residual = order;
    if !c.passed() || order.is_none() {
        c.witness = Some(format!("observed order {order:?} below {MIN_ORDER}; errors {errors:?}"));
    }
    c
}

fn completed(name: &str, tr: &Trajectory) -> Option<Check> {
    (!tr.completed()).then(|| Check::flag(name, false, || format!("integration stopped: {:?}", tr.termination)))
}

/// Drift on both systems, the Casimir along the image of `φ`, the adaptive
/// drift rate, fixed-step orders and `φ`-compatibility.
pub fn integration_checks(setup: &NumericSetup, sys4: &SystemDef, sys5: &SystemDef) -> Vec<Check> {
    let mut out = Vec::new();
    out.extend(checked(
        "numerics.drift_4d",
        integrate(sys4, &setup.state4, setup.a, &setup.span, &setup.config),
        |tr| {
            if let Some(c) = completed("numerics.drift_4d", &tr) {
                return vec![c];
            }
            checked("numerics.drift_4d", invariant_drift(sys4, &tr), |d| {
                vec![Check::bound("numerics.drift_4d", d.max_relative(), DRIFT_BOUND)]
            })
        },
    ));
    out.extend(checked(
        "numerics.drift_5d",
        pushforward_phi(&setup.state4).and_then(|x| integrate(sys5, &x, setup.a, &setup.span, &setup.config)),
        |tr| {
            if let Some(c) = completed("numerics.drift_5d", &tr) {
                return vec![c];
            }
            checked("numerics.drift_5d", invariant_drift(sys5, &tr), |d| {
                let f3 = d.get("F3").map(|x| x.max_abs).unwrap_or(f64::NAN);
                vec![
                    Check::bound("numerics.drift_5d", d.max_relative(), DRIFT_BOUND),
                    Check::bound("numerics.casimir_F3", f3, CASIMIR_BOUND),
                ]
            })
        },
    ));
    out.extend(checked(
        "numerics.tolerance_rate",
        tolerance_sweep(sys4, &setup.state4, setup.a, &setup.span, &TOLERANCE_SWEEP),
        |r| {
            let mut c = Check::bound("numerics.tolerance_rate", -r.order.unwrap_or(f64::NAN), -1.0);
            c.residual = r.order;
            if !c.passed() {
                c.witness = Some(format!("drift {:?} at rtol {:?}", r.errors, r.steps));
            }
            vec![c]
        },
    ));
    for (name, system, x0) in [
        ("numerics.order_4d", sys4, Ok(setup.state4.clone())),
        ("numerics.order_5d", sys5, pushforward_phi(&setup.state4)),
    ] {
        out.extend(checked(
            name,
            x0.and_then(|x| {
                refinement_sweep(system, &x, setup.a, &setup.span, &REFINEMENT_STEPS, |tr| {
                    Ok(invariant_drift(system, tr)?.max_relative())
                })
            }),
            |r| vec![order_check(name, r.order, &r.errors)],
        ));
    }
    out.extend(checked(
        "numerics.phi_compatibility",
        phi_compatibility(&setup.state4, setup.a, &setup.phi_span, &setup.config),
        |r| vec![Check::bound("numerics.phi_compatibility", r.max_distance, PHI_BOUND)],
    ));
    out
}

/// Closure relations and the sextic identity on a 4D trajectory.
pub fn separation_checks(traj: &Trajectory) -> Vec<Check> {
    checked("separation.p6_residual", p6_residual(traj), |r| {
        let mut v = vec![
            Check::bound("separation.closure", r.closure, CLOSURE_BOUND),
            Check::bound("separation.p6_residual", r.residual, P6_BOUND),
        ];
        if r.used == 0 {
            v.push(Check::flag("separation.samples_used", false, || {
                "every sample is degenerate".to_string()
            }));
        }
        v
    })
}

/// Linearization of the Abel map on a 4D trajectory, with the forced-branch
/// cross-check.
pub fn quadrature_checks(traj: &Trajectory) -> Vec<Check> {
    let mut out = checked("quadrature.xi1", quadrature_linearization(traj, BranchMode::Tracked), |r| {
        let sig = format!("sigma {:?}, slope sign {}", r.sigma, r.slope_sign);
        let mut xi2 = Check::bound("quadrature.xi2", r.xi2_deviation, QUADRATURE_BOUND);
        xi2.witness.get_or_insert(sig);
        vec![
            Check::bound("quadrature.xi1", r.xi1_variation, QUADRATURE_BOUND),
            xi2,
            Check::bound("quadrature.sign_consistency", r.sign_residual, QUADRATURE_BOUND),
        ]
    });
    out.extend(checked(
        "quadrature.forced",
        quadrature_linearization(traj, BranchMode::Forced),
        |r| vec![Check::bound("quadrature.forced", r.xi1_variation.max(r.xi2_deviation), 1e-9)],
    ));
    out
}

/// Refinement orders of the sextic and quadrature residuals, and the slope
/// reversal under time reversal.
pub fn separation_refinement_checks(setup: &NumericSetup, sys4: &SystemDef) -> Vec<Check> {
    let x0 = &setup.quadrature_state4;
    let mut out = Vec::new();
    out.extend(checked(
        "separation.p6_order",
        refinement_sweep(sys4, x0, setup.a, &setup.span, &REFINEMENT_STEPS, |tr| Ok(p6_residual(tr)?.residual)),
        |r| vec![order_check("separation.p6_order", r.order, &r.errors)],
    ));
    out.extend(checked(
        "quadrature.order",
        refinement_sweep(sys4, x0, setup.a, &setup.span, &REFINEMENT_STEPS, |tr| {
            let r = quadrature_linearization(tr, BranchMode::Tracked)?;
            Ok(r.xi1_variation.max(r.xi2_deviation))
        }),
        |r| vec![order_check("quadrature.order", r.order, &r.errors)],
    ));
    let reversed = TimeSpan {
        direction: -setup.span.direction,
        ..setup.span
    };
    let both = integrate(sys4, x0, setup.a, &setup.span, &setup.config)
        .and_then(|f| quadrature_linearization(&f, BranchMode::Tracked))
        .and_then(|f| {
            let b = integrate(sys4, x0, setup.a, &reversed, &setup.config)?;
            Ok((f, quadrature_linearization(&b, BranchMode::Tracked)?))
        });
    out.extend(checked("quadrature.reversed_slope", both, |(f, b)| {
        vec![Check::flag(
            "quadrature.reversed_slope",
            f.slope_sign != 0 && f.slope_sign == -b.slope_sign && f.sigma == b.sigma,
            || format!("forward {:?}/{}, reversed {:?}/{}", f.sigma, f.slope_sign, b.sigma, b.slope_sign),
        )]
    }));
    out
}

pub fn commute_checks(setup: &NumericSetup) -> Vec<Check> {
    let (t1, t2) = setup.commute_times;
    checked(
        "flows.commute_numeric",
        pushforward_phi(&setup.state4).and_then(|x| flows_commute_numeric(&x, setup.a, t1, t2, &setup.config)),
        |d| vec![Check::bound("flows.commute_numeric", d, COMMUTE_BOUND)],
    )
}

/// Everything above, in a fixed order.
pub fn full_suite(seed: u64, draws: usize, setup: &NumericSetup) -> Vec<Check> {
    let (s4, s5) = (SystemId::Sys4.definition(), SystemId::Sys5.definition());
    let mut out = crate::systems::suite::exact_identity_suite();
    out.extend(balance_checks(&s4));
    out.extend(balance_checks(&s5));
    out.extend(curve_checks(&s4, &s5));
    out.extend(genus_checks(seed, draws));
    out.extend(integration_checks(setup, &s4, &s5));
    match integrate(&s4, &setup.state4, setup.a, &setup.span, &setup.config) {
        Ok(tr) => out.extend(separation_checks(&tr)),
        Err(e) => out.push(Check::error("separation.p6_residual", &e)),
    }
    match integrate(&s4, &setup.quadrature_state4, setup.a, &setup.span, &setup.config) {
        Ok(tr) => out.extend(quadrature_checks(&tr)),
        Err(e) => out.push(Check::error("quadrature.xi1", &e)),
    }
    out.extend(separation_refinement_checks(setup, &s4));
    out.extend(commute_checks(setup));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeParameterOut {
    pub name: String,
    pub order: usize,
    pub coordinate: String,
}

/// The `balance` document: per coordinate, `(τ-exponent, coefficient)` pairs
/// with coefficients in canonical text.
#[derive(Debug, Clone, Serialize)]
pub struct BalanceOutput {
    pub system: String,
    pub epsilon: String,
    pub order: usize,
    pub series: BTreeMap<String, Vec<(i64, String)>>,
    pub free_parameters: Vec<FreeParameterOut>,
    pub residual_ok: bool,
}

pub fn balance_output(system: &SystemDef, epsilon: &Scalar, order: usize) -> Result<BalanceOutput> {
    let b: Balance = principal_balance(system, epsilon, order)?;
    let residual_ok = residual_check(system, &b, order)?.ok();
    let series = b
        .series()
        .iter()
        .zip(&b.var_names)
        .map(|(s, n)| {
            let terms = s.terms().map(|(e, c)| (e, c.to_canonical_text())).collect();
            (n.clone(), terms)
        })
        .collect();
    Ok(BalanceOutput {
        system: system.id.to_string(),
        epsilon: epsilon.to_canonical_text(),
        order,
        series,
        free_parameters: b
            .free_parameters
            .iter()
            .map(|p| FreeParameterOut {
                name: p.name.clone(),
                order: p.order,
                coordinate: p.coordinate.clone(),
            })
            .collect(),
        residual_ok,
    })
}

/// One `curves` record.
#[derive(Debug, Clone, Serialize)]
pub struct CurveOutput {
    pub curve_id: String,
    pub params: BTreeMap<String, [f64; 2]>,
    #[serde(flatten)]
    pub report: BranchReport,
}

pub fn curve_output(id: CurveId, params: &BTreeMap<Var, Complex64>, tol: f64) -> Result<CurveOutput> {
    let curve = reference_curve(id, &Scalar::i());
    let missing: Vec<String> = curve
        .parameters()
        .iter()
        .filter(|v| !params.contains_key(*v))
        .map(|v| v.name().to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::InvalidInput(format!("curve {id} needs values for {}", missing.join(", "))));
    }
    let report = count_branch_points(&curve, params, tol)?;
    Ok(CurveOutput {
        curve_id: id.to_string(),
        params: params.iter().map(|(k, v)| (k.name().to_string(), [v.re, v.im])).collect(),
        report,
    })
}

/// `draws` seeded random parameter sets for `id`.
pub fn random_curve_outputs(id: CurveId, seed: u64, draws: usize, tol: f64) -> Result<Vec<CurveOutput>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws).map(|_| curve_output(id, &random_parameters(id, &mut rng), tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::sys4;

    #[test]
    fn balance_document() {
        let out = balance_output(&sys4(), &Scalar::i(), 12).unwrap();
        assert!(out.residual_ok);
        let q1 = &out.series["q1"];
        // q1 = τ⁻¹(u − ½u³·t + …): the t-coefficient sits at τ¹
        let (_, c) = q1.iter().find(|(e, _)| *e == 1).unwrap();
        assert_eq!(c, "(-1/2, 0, 0, 0) * u^3");
        assert_eq!(out.free_parameters.len(), 3);
    }

    #[test]
    fn curve_document_requires_parameters() {
        let p: BTreeMap<Var, Complex64> = [(Var::new("a"), Complex64::new(1.0, 0.0))].into();
        assert!(curve_output(CurveId::P6, &p, 1e-8).is_err());
        let out = random_curve_outputs(CurveId::Sys5, 3, 2, 1e-8).unwrap();
        assert!(out.iter().all(|o| o.report.genus == Some(2)));
        let json = serde_json::to_value(&out[0]).unwrap();
        assert_eq!(json["curve_id"], "H_eps");
        assert_eq!(json["n_sheets"], 2);
    }
}
