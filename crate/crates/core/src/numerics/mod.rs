//! Floating-point integration of both flows and the checks built on it.

pub mod field;
pub mod flows;
pub mod integrate;
pub mod io;
pub mod quadrature;
pub mod separation;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::systems::SystemDef;

pub use field::CompiledField;
pub use flows::{flows_commute_numeric, flows_commute_with, phi_compatibility, PhiCompatibility};
pub use integrate::{
    integrate, integrate_polys, DenseSegment, IntegratorConfig, Sample, Termination, TimeSpan, Trajectory,
};
pub use io::{read_csv, write_csv};
pub use quadrature::{quadrature_linearization, BranchMode, QuadratureReport};
pub use separation::{
    p6_residual, p6_residual_with, separation_coordinates, separation_of_state, P6Report, SeparationFlag,
    SeparationSample,
};

#[derive(Debug, Clone, Serialize)]
pub struct InvariantDrift {
    pub name: String,
    pub initial: [f64; 2],
    /// `max |I(t) − I(0)|`.
    pub max_abs: f64,
    /// `max_abs / max(1, |I(0)|)`.
    pub relative: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub invariants: Vec<InvariantDrift>,
}

impl DriftReport {
    pub fn max_relative(&self) -> f64 {
        self.invariants.iter().map(|d| d.relative).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&InvariantDrift> {
        self.invariants.iter().find(|d| d.name == name)
    }
}

pub fn invariant_drift(system: &SystemDef, traj: &Trajectory) -> Result<DriftReport> {
    if traj.samples.is_empty() {
        return Err(Error::InvalidInput("empty trajectory".into()));
    }
    let i0 = system.invariants_at(traj.initial_state(), traj.a)?;
    let mut max_abs = vec![0.0f64; i0.len()];
    for smp in &traj.samples {
        let it = system.invariants_at(&smp.state, traj.a)?;
        for (m, (x, x0)) in max_abs.iter_mut().zip(it.iter().zip(&i0)) {
            *m = m.max((x - x0).norm());
        }
    }
    let invariants = system
        .invariants
        .iter()
        .zip(i0.iter().zip(max_abs))
        .map(|((name, _), (x0, m))| InvariantDrift {
            name: name.to_string(),
            initial: [x0.re, x0.im],
            max_abs: m,
            relative: m / x0.norm().max(1.0),
        })
        .collect();
    Ok(DriftReport { invariants })
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Serialize)]
pub struct Refinement {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    /// Observed order: slope of `log error` against `log step`.
    pub order: Option<f64>,
}

/// Runs `measure` on fixed-step trajectories with each step size and fits the
/// convergence order.
pub fn refinement_sweep<F>(
    system: &SystemDef,
    state0: &[Complex64],
    a: Complex64,
    span: &TimeSpan,
    steps: &[f64],
    measure: F,
) -> Result<Refinement>
where
    F: Fn(&Trajectory) -> Result<f64> + Sync,
{
    let errors = std::thread::scope(|scope| {
        let handles: Vec<_> = steps
            .iter()
            .map(|&h| {
                let measure = &measure;
                scope.spawn(move || {
                    let tr = integrate(system, state0, a, span, &IntegratorConfig::fixed(h))?;
                    measure(&tr)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("refinement worker panicked"))
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(Refinement {
        order: loglog_slope(steps, &errors),
        steps: steps.to_vec(),
        errors,
    })
}

/// Adaptive runs at each relative tolerance (`atol = rtol/100`); `order` is the
/// fitted slope of `log drift` against `log rtol`.
pub fn tolerance_sweep(
    system: &SystemDef,
    state0: &[Complex64],
    a: Complex64,
    span: &TimeSpan,
    rtols: &[f64],
) -> Result<Refinement> {
    let errors = rtols
        .iter()
        .map(|&r| {
            let cfg = IntegratorConfig {
                rtol: r,
                atol: r * 1e-2,
                ..IntegratorConfig::default()
            };
            let tr = integrate(system, state0, a, span, &cfg)?;
            Ok(invariant_drift(system, &tr)?.max_relative())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Refinement {
        order: loglog_slope(rtols, &errors),
        steps: rtols.to_vec(),
        errors,
    })
}

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The standard real starting point `(1, 1, 0, 0)`.
pub fn default_state4() -> Vec<Complex64> {
    vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
}

/// Complex starting point used for the quadrature check. Real data start at a
/// turning point (`p = 0` forces `√P₆(sᵢ) = 0`) and real motion keeps hitting
/// them; off the real slice `√P₆` stays away from zero.
pub fn default_quadrature_state4() -> Vec<Complex64> {
    vec![c(1.0, 0.2), c(1.0, -0.1), c(0.3, 0.0), c(-0.2, 0.0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{sys4, sys5};
    use crate::systems::morphism::pushforward_phi;

    #[test]
    fn equilibrium_stays_put() {
        let s = sys4();
        let tr = integrate(&s, &[c(0.0, 0.0); 4], c(1.0, 0.0), &TimeSpan::real(0.0, 3.0), &IntegratorConfig::default())
            .unwrap();
        assert!(tr.completed());
        assert!(tr.samples.iter().all(|x| x.state.iter().all(|z| z.norm() == 0.0)));
        let d = invariant_drift(&s, &tr).unwrap();
        assert_eq!(d.max_relative(), 0.0);
    }

    #[test]
    fn drift_small_on_both_systems() {
        let a = c(1.0, 0.0);
        let span = TimeSpan::real(0.0, 10.0);
        let cfg = IntegratorConfig::default();
        let s4 = sys4();
        let tr4 = integrate(&s4, &default_state4(), a, &span, &cfg).unwrap();
        assert!(tr4.completed());
        assert!(invariant_drift(&s4, &tr4).unwrap().max_relative() <= 1e-8);
        let s5 = sys5();
        let x5 = pushforward_phi(&default_state4()).unwrap();
        let tr5 = integrate(&s5, &x5, a, &span, &cfg).unwrap();
        let d5 = invariant_drift(&s5, &tr5).unwrap();
        assert!(d5.max_relative() <= 1e-8, "{d5:?}");
        // F3 vanishes on the image of φ
        assert!(d5.get("F3").unwrap().max_abs <= 1e-10);
    }

    #[test]
    fn drift_tracks_tolerance() {
        let s = sys4();
        let r = tolerance_sweep(&s, &default_state4(), c(1.0, 0.0), &TimeSpan::real(0.0, 10.0), &[1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10])
            .unwrap();
        // at least 10× less drift per 10× tighter tolerance, on average
        assert!(r.order.unwrap() >= 1.0, "{r:?}");
    }

    #[test]
    fn fixed_step_order() {
        let s = sys4();
        let span = TimeSpan::real(0.0, 2.0);
        let r = refinement_sweep(&s, &default_state4(), c(1.0, 0.0), &span, &[0.04, 0.02, 0.01], |tr| {
            Ok(invariant_drift(&s, tr)?.max_relative())
        })
        .unwrap();
        assert!(r.order.unwrap() >= 4.0, "{r:?}");
    }

    #[test]
    fn dense_output_interpolates() {
        let s = sys4();
        let tr = integrate(&s, &default_state4(), c(1.0, 0.0), &TimeSpan::real(0.0, 2.0), &IntegratorConfig::default())
            .unwrap();
        for w in tr.samples.windows(2) {
            let mid = tr.state_at(w[0].s).unwrap();
            assert!(mid.iter().zip(&w[0].state).all(|(x, y)| (x - y).norm() < 1e-13));
        }
        let end = tr.state_at(2.0).unwrap();
        assert!(end.iter().zip(tr.final_state()).all(|(x, y)| (x - y).norm() < 1e-12));
        // against an independent tight run evaluated at an interior point
        let tight = integrate(&s, &default_state4(), c(1.0, 0.0), &TimeSpan::real(0.0, 1.2345), &IntegratorConfig::default())
            .unwrap();
        let x = tr.state_at(1.2345).unwrap();
        assert!(x.iter().zip(tight.final_state()).all(|(p, q)| (p - q).norm() < 1e-9));
    }

    #[test]
    fn complex_ray_and_reversal() {
        let s = sys4();
        let x0 = default_state4();
        let a = c(1.0, 0.0);
        let fwd = integrate(&s, &x0, a, &TimeSpan::real(0.0, 1.0), &IntegratorConfig::default()).unwrap();
        let back = integrate(&s, fwd.final_state(), a, &TimeSpan::real(1.0, 0.0), &IntegratorConfig::default()).unwrap();
        assert!(back.final_state().iter().zip(&x0).all(|(p, q)| (p - q).norm() < 1e-9));
        let ray = TimeSpan::between(c(0.0, 0.0), c(0.6, 0.8));
        let tr = integrate(&s, &x0, a, &ray, &IntegratorConfig::default()).unwrap();
        assert!((tr.samples.last().unwrap().t - c(0.6, 0.8)).norm() < 1e-14);
        assert!(invariant_drift(&s, &tr).unwrap().max_relative() < 1e-9);
    }

    #[test]
    fn blowup_reports_underflow() {
        // ẋ = x² from x = 1 blows up at t = 1
        let v = vec![crate::exact::Var::new("x")];
        let f = vec![crate::exact::poly("x^2")];
        let tr = integrate_polys(&v, &crate::exact::Var::new("a"), &f, &[c(1.0, 0.0)], c(0.0, 0.0), &TimeSpan::real(0.0, 2.0), &IntegratorConfig::default())
            .unwrap();
        match tr.termination {
            Termination::StepUnderflow { s } => assert!((s - 1.0).abs() < 1e-3),
            ref other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        let s = sys4();
        let span = TimeSpan::real(0.0, 1.0);
        let cfg = IntegratorConfig::default();
        assert!(integrate(&s, &[c(1.0, 0.0); 3], c(1.0, 0.0), &span, &cfg).is_err());
        assert!(integrate(&s, &[c(f64::NAN, 0.0); 4], c(1.0, 0.0), &span, &cfg).is_err());
        let bad = IntegratorConfig { rtol: -1.0, ..cfg };
        assert!(integrate(&s, &default_state4(), c(1.0, 0.0), &span, &bad).is_err());
    }

    #[test]
    fn slope_fit() {
        let x = [1.0, 0.5, 0.25];
        let y: Vec<f64> = x.iter().map(|h: &f64| 3.0 * h.powi(5)).collect();
        assert!((loglog_slope(&x, &y).unwrap() - 5.0).abs() < 1e-12);
    }
}
