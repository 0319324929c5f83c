use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Poly, Var};
use crate::numerics::{integrate, integrate_polys, IntegratorConfig, TimeSpan};
use crate::systems::morphism::pushforward_phi;
use crate::systems::{sys4, sys5, sys5_second_flow};

type C = Complex64;

fn leg(vars: &[Var], param: &Var, field: &[Poly], x: &[C], a: C, t: f64, cfg: &IntegratorConfig) -> Result<Vec<C>> {
    let tr = integrate_polys(vars, param, field, x, a, &TimeSpan::real(0.0, t), cfg)?;
    if !tr.completed() {
        return Err(Error::InvalidInput(format!("flow leg stopped early: {:?}", tr.termination)));
    }
    Ok(tr.final_state().to_vec())
}

/// `‖Φ²_{t₂}∘Φ¹_{t₁}(x) − Φ¹_{t₁}∘Φ²_{t₂}(x)‖` (max norm) for arbitrary
/// fields on the 5D phase space.
pub fn flows_commute_with(
    field1: &[Poly],
    field2: &[Poly],
    state0: &[C],
    a: C,
    t1: f64,
    t2: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let s = sys5();
    let (vars, param) = (&s.state_vars, s.param());
    let one_two = leg(vars, &param, field2, &leg(vars, &param, field1, state0, a, t1, cfg)?, a, t2, cfg)?;
    let two_one = leg(vars, &param, field1, &leg(vars, &param, field2, state0, a, t2, cfg)?, a, t1, cfg)?;
    Ok(one_two
        .iter()
        .zip(&two_one)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Commutation defect of the flows of `X_{F₁}` and `X_{F₂}`.
pub fn flows_commute_numeric(state0: &[C], a: C, t1: f64, t2: f64, cfg: &IntegratorConfig) -> Result<f64> {
    flows_commute_with(&sys5().field, &sys5_second_flow(), state0, a, t1, t2, cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiCompatibility {
    /// `max ‖φ(x₄(t)) − x₅(t)‖` over the 4D samples.
    pub max_distance: f64,
    pub samples: usize,
}

/// Integrates the 4D system and maps it by `φ`, against integrating the 5D
/// system from `φ(x₀)`; compares at the 4D sample times via dense output.
pub fn phi_compatibility(state0: &[C], a: C, span: &TimeSpan, cfg: &IntegratorConfig) -> Result<PhiCompatibility> {
    let t4 = integrate(&sys4(), state0, a, span, cfg)?;
    let t5 = integrate(&sys5(), &pushforward_phi(state0)?, a, span, cfg)?;
    if !t4.completed() || !t5.completed() {
        return Err(Error::InvalidInput("trajectory did not reach the end of the span".into()));
    }
    let mut max_distance = 0.0f64;
    for smp in &t4.samples {
        let img = pushforward_phi(&smp.state)?;
        let other = t5.state_at(smp.s).expect("sample inside the span");
        let d = img.iter().zip(&other).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        max_distance = max_distance.max(d);
    }
    Ok(PhiCompatibility {
        max_distance,
        samples: t4.samples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly;
    use crate::numerics::default_state4;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn x0() -> Vec<C> {
        pushforward_phi(&default_state4()).unwrap()
    }

    #[test]
    fn commuting_flows() {
        let d = flows_commute_numeric(&x0(), c(1.0), 0.5, 0.5, &IntegratorConfig::default()).unwrap();
        assert!(d <= 1e-6, "{d}");
        let z = flows_commute_numeric(&x0(), c(1.0), 0.0, 0.5, &IntegratorConfig::default()).unwrap();
        assert!(z <= 1e-12, "{z}");
    }

    #[test]
    fn perturbed_field_does_not_commute() {
        let mut y = sys5_second_flow();
        y[0] = &y[0] + &poly("1/10*z2");
        let cfg = IntegratorConfig::default();
        let big = flows_commute_with(&sys5().field, &y, &x0(), c(1.0), 0.2, 0.2, &cfg).unwrap();
        let small = flows_commute_with(&sys5().field, &y, &x0(), c(1.0), 0.1, 0.1, &cfg).unwrap();
        assert!(big > 1e-4);
        // defect ≈ t₁t₂‖[X, Y]‖, so halving both times quarters it
        let ratio = big / small;
        assert!((ratio - 4.0).abs() < 0.6, "{ratio}");
    }

    #[test]
    fn phi_maps_flow_to_flow() {
        let r = phi_compatibility(&default_state4(), c(1.0), &TimeSpan::real(0.0, 5.0), &IntegratorConfig::default())
            .unwrap();
        assert!(r.max_distance <= 1e-7, "{r:?}");
    }
}
