//! Abel-map check on the sextic: along a 4D trajectory,
//! `ξ₁ = ∫ (ṡ₁/ζ₁ + ρ ṡ₂/ζ₂) dt` stays constant and
//! `ξ₂ = ∫ (s₁ṡ₁/ζ₁ + ρ s₂ṡ₂/ζ₂) dt` grows like `σ₁ t`, where `ζᵢ = √P₆(sᵢ)`
//! is continued along the trajectory and `σᵢ`, `ρ = σ₁σ₂` are the sheet
//! signs detected at the first sample.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::separation::{p6_eval, separation_of_state};
use crate::numerics::{CompiledField, Trajectory};
use crate::systems::{sys4, SystemId};

type C = Complex64;

const GL_NODES: [f64; 4] = [0.1834346424956498, 0.525532409916329, 0.7966664774136267, 0.9602898564975363];
const GL_WEIGHTS: [f64; 4] = [0.362683783378362, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];

/// Bisection depth when a step is too coarse to continue `ζ` unambiguously.
const MAX_DEPTH: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchMode {
    /// `ζᵢ = √P₆(sᵢ)` by principal value at the start, then continued.
    Tracked,
    /// `ζᵢ := ṡᵢ(sᵢ − sⱼ)`; forces `ξ₁ ≡ 0`, `ξ₂ ≡ t`. Self-consistency only.
    Forced,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureReport {
    pub mode: BranchMode,
    /// Detected signs with `ζᵢ = σᵢ ṡᵢ (sᵢ − sⱼ)` at the first sample.
    pub sigma: [i8; 2],
    /// `max |ζᵢ − σᵢ ṡᵢ(sᵢ−sⱼ)| / max(1, |ζᵢ|)` over all evaluation points.
    /// Small means the detected signs never flipped.
    pub sign_residual: f64,
    /// `max |ξ₁(t) − ξ₁(t₀)|` over samples.
    pub xi1_variation: f64,
    /// `max |ξ₂(t) − ξ₂(t₀) − σ₁(t − t₀)|` over samples.
    pub xi2_deviation: f64,
    /// Least-squares `dξ₂/ds` along the ray, `[re, im]`; equals `σ₁·direction`.
    pub ray_slope: [f64; 2],
    /// Sign of the real part of `ray_slope`.
    pub slope_sign: i8,
    /// Smallest `|ζᵢ|` met; small values mean the path grazed a branch point.
    pub min_abs_zeta: f64,
    /// Extra points inserted to keep the continuation unambiguous.
    pub refinements: usize,
    pub samples: usize,
}

#[derive(Clone, Copy)]
struct Point {
    s1: C,
    zeta: [C; 2],
}

struct Tracker {
    mode: BranchMode,
    a: C,
    b1: C,
    b2: C,
    sigma: [f64; 2],
    prev: Point,
    sign_residual: f64,
    min_abs_zeta: f64,
    refinements: usize,
}

/// Integrands `(dξ₁/dt, dξ₂/dt)` at one point.
struct Eval {
    point: Point,
    d: [C; 2],
    sign_res: f64,
}

impl Tracker {
    fn eval(&self, t: C, x: &[C]) -> Result<Option<Eval>> {
        let sep = separation_of_state(t, x, Some(self.prev.s1))?;
        if sep.flagged() {
            return Err(Error::BranchTracking { t: fmt_t(t) });
        }
        let [s1, s2] = sep.s;
        let forced = [sep.sdot[0] * (s1 - s2), sep.sdot[1] * (s2 - s1)];
        let zeta = match self.mode {
            BranchMode::Forced => forced,
            BranchMode::Tracked => {
                let mut z = [C::new(0.0, 0.0); 2];
                for i in 0..2 {
                    let r = p6_eval(self.a, self.b1, self.b2, sep.s[i]).sqrt();
                    let prev = self.prev.zeta[i];
                    let (dp, dm) = ((r - prev).norm(), (r + prev).norm());
                    if dp.min(dm) > prev.norm() / 2.0 {
                        return Ok(None);
                    }
                    z[i] = if dp <= dm { r } else { -r };
                }
                z
            }
        };
        let rho = self.sigma[0] * self.sigma[1];
        let mut sign_res = 0.0f64;
        for i in 0..2 {
            sign_res = sign_res.max((zeta[i] - forced[i] * self.sigma[i]).norm() / zeta[i].norm().max(1.0));
        }
        let u = [sep.sdot[0] / zeta[0], sep.sdot[1] / zeta[1] * rho];
        Ok(Some(Eval {
            point: Point { s1, zeta },
            d: [u[0] + u[1], s1 * u[0] + s2 * u[1]],
            sign_res,
        }))
    }

    fn accept(&mut self, e: &Eval) {
        self.prev = e.point;
        self.sign_residual = self.sign_residual.max(e.sign_res);
        self.min_abs_zeta = self.min_abs_zeta.min(e.point.zeta[0].norm()).min(e.point.zeta[1].norm());
    }

    /// Continues the branch from the current point to ray parameter `s_to`,
    /// bisecting back from `s_from` if the jump is ambiguous.
    fn advance<F>(&mut self, interp: &F, s_from: f64, s_to: f64, depth: u32) -> Result<Eval>
    where
        F: Fn(f64) -> (C, Vec<C>),
    {
        let (t, x) = interp(s_to);
        if let Some(e) = self.eval(t, &x)? {
            self.accept(&e);
            return Ok(e);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::BranchTracking { t: fmt_t(t) });
        }
        self.refinements += 1;
        let mid = 0.5 * (s_from + s_to);
        self.advance(interp, s_from, mid, depth + 1)?;
        self.advance(interp, mid, s_to, depth + 1)
    }
}

fn fmt_t(t: C) -> String {
    format!("{t}")
}

fn sign_of(r: C, what: &str) -> Result<f64> {
    for s in [1.0, -1.0] {
        if (r - s).norm() <= 1e-6 {
            return Ok(s);
        }
    }
    Err(Error::InvalidInput(format!(
        "{what}: √P₆(s)/(ṡ(s₁−s₂)) = {r} is not ±1; the start is off the level set or at a turning point"
    )))
}

/// Runs the check on a 4D trajectory. Level values are recomputed from the
/// first sample. Trajectories without dense output (read from CSV) are
/// interpolated by cubic Hermite segments.
pub fn quadrature_linearization(traj: &Trajectory, mode: BranchMode) -> Result<QuadratureReport> {
    if traj.dim() != 4 || !matches!(traj.system, Some(SystemId::Sys4) | None) {
        return Err(Error::InvalidInput("quadrature needs a 4d trajectory".into()));
    }
    if traj.samples.len() < 2 {
        return Err(Error::InvalidInput("quadrature needs at least two samples".into()));
    }
    let sys = sys4();
    let a = traj.a;
    let x0 = traj.initial_state();
    let inv = sys.invariants_at(x0, a)?;
    let (b1, b2) = (inv[0], inv[1]);

    let t0 = traj.samples[0].t;
    let sep0 = separation_of_state(t0, x0, None)?;
    if sep0.flagged() {
        return Err(Error::InvalidInput("first sample is degenerate for separation".into()));
    }
    let [s1, s2] = sep0.s;
    let forced = [sep0.sdot[0] * (s1 - s2), sep0.sdot[1] * (s2 - s1)];
    let (sigma, zeta0) = match mode {
        BranchMode::Forced => ([1.0, 1.0], forced),
        BranchMode::Tracked => {
            let z = [p6_eval(a, b1, b2, s1).sqrt(), p6_eval(a, b1, b2, s2).sqrt()];
            ([sign_of(z[0] / forced[0], "s₁")?, sign_of(z[1] / forced[1], "s₂")?], z)
        }
    };
    let mut tracker = Tracker {
        mode,
        a,
        b1,
        b2,
        sigma,
        prev: Point { s1, zeta: zeta0 },
        sign_residual: 0.0,
        min_abs_zeta: f64::INFINITY,
        refinements: 0,
    };
    let e0 = tracker.eval(t0, x0)?.expect("start point is its own continuation");
    tracker.accept(&e0);

    let field = CompiledField::new(&sys.state_vars, &sys.param(), &sys.field)?;
    let dir = traj.span.direction;
    let mut xi = [C::new(0.0, 0.0); 2];
    let mut xi_at = vec![(0.0, xi)];
    for k in 0..traj.samples.len() - 1 {
        let (sa, sb) = (traj.samples[k].s, traj.samples[k + 1].s);
        let h = sb - sa;
        let interp = |s: f64| -> (C, Vec<C>) {
            let x = match traj.dense.get(k) {
                Some(seg) => seg.eval(s),
                None => hermite(&field, a, dir, &traj.samples[k].state, &traj.samples[k + 1].state, sa, h, s),
            };
            (traj.span.time(s), x)
        };
        let mut nodes: Vec<(f64, f64)> = GL_NODES
            .iter()
            .zip(GL_WEIGHTS)
            .flat_map(|(&x, w)| [(-x, w), (x, w)])
            .map(|(x, w)| (sa + 0.5 * h * (1.0 + x), w))
            .collect();
        nodes.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut prev_s = sa;
        let mut acc = [C::new(0.0, 0.0); 2];
        for (s, w) in nodes {
            let e = tracker.advance(&interp, prev_s, s, 0)?;
            acc[0] += e.d[0] * w;
            acc[1] += e.d[1] * w;
            prev_s = s;
        }
        tracker.advance(&interp, prev_s, sb, 0)?;
        for i in 0..2 {
            xi[i] += acc[i] * dir * (0.5 * h);
        }
        if !xi[0].is_finite() || !xi[1].is_finite() {
            return Err(Error::NonFinite { t: fmt_t(traj.samples[k + 1].t) });
        }
        xi_at.push((sb, xi));
    }

    let slope_target = dir * sigma[0];
    let xi1_variation = xi_at.iter().map(|(_, x)| x[0].norm()).fold(0.0, f64::max);
    let xi2_deviation = xi_at
        .iter()
        .map(|(s, x)| (x[1] - slope_target * *s).norm())
        .fold(0.0, f64::max);
    let n = xi_at.len() as f64;
    let sm = xi_at.iter().map(|p| p.0).sum::<f64>() / n;
    let xm = xi_at.iter().map(|p| p.1[1]).sum::<C>() / n;
    let sxx: f64 = xi_at.iter().map(|p| (p.0 - sm).powi(2)).sum();
    let sxy: C = xi_at.iter().map(|p| (p.1[1] - xm) * (p.0 - sm)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { C::new(0.0, 0.0) };
    Ok(QuadratureReport {
        mode,
        sigma: [sigma[0] as i8, sigma[1] as i8],
        sign_residual: tracker.sign_residual,
        xi1_variation,
        xi2_deviation,
        ray_slope: [slope.re, slope.im],
        slope_sign: if slope.re > 0.0 { 1 } else if slope.re < 0.0 { -1 } else { 0 },
        min_abs_zeta: tracker.min_abs_zeta,
        refinements: tracker.refinements,
        samples: traj.samples.len(),
    })
}

/// Cubic Hermite interpolation on `[sa, sa + h]` from end states and the
/// field (`d/ds = dir · d/dt`).
#[allow(clippy::too_many_arguments)]
fn hermite(field: &CompiledField, a: C, dir: C, y0: &[C], y1: &[C], sa: f64, h: f64, s: f64) -> Vec<C> {
    let f0 = field.eval(y0, a);
    let f1 = field.eval(y1, a);
    let th = (s - sa) / h;
    let h00 = (1.0 + 2.0 * th) * (1.0 - th).powi(2);
    let h10 = th * (1.0 - th).powi(2);
    let h01 = th * th * (3.0 - 2.0 * th);
    let h11 = th * th * (th - 1.0);
    (0..y0.len())
        .map(|i| y0[i] * h00 + f0[i] * dir * (h * h10) + y1[i] * h01 + f1[i] * dir * (h * h11))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{default_quadrature_state4, default_state4, integrate, IntegratorConfig, TimeSpan};

    fn run(span: TimeSpan, mode: BranchMode) -> QuadratureReport {
        let tr = integrate(&sys4(), &default_quadrature_state4(), C::new(1.0, 0.0), &span, &IntegratorConfig::default())
            .unwrap();
        quadrature_linearization(&tr, mode).unwrap()
    }

    #[test]
    fn linear_on_the_jacobian() {
        let r = run(TimeSpan::real(0.0, 10.0), BranchMode::Tracked);
        assert!(r.xi1_variation <= 1e-6, "{r:?}");
        assert!(r.xi2_deviation <= 1e-6, "{r:?}");
        assert!(r.sign_residual <= 1e-6, "{r:?}");
        assert_eq!(r.slope_sign, r.sigma[0]);
    }

    #[test]
    fn reversed_time_flips_slope() {
        let f = run(TimeSpan::real(0.0, 3.0), BranchMode::Tracked);
        let b = run(TimeSpan::real(0.0, -3.0), BranchMode::Tracked);
        assert_eq!(f.sigma, b.sigma);
        assert_eq!(f.slope_sign, -b.slope_sign);
        assert!(b.xi2_deviation <= 1e-6);
    }

    #[test]
    fn forced_branch_is_exact() {
        let r = run(TimeSpan::real(0.0, 10.0), BranchMode::Forced);
        assert!(r.xi1_variation <= 1e-9, "{r:?}");
        assert!(r.xi2_deviation <= 1e-9, "{r:?}");
        assert_eq!(r.sigma, [1, 1]);
    }

    #[test]
    fn residuals_converge_under_refinement() {
        use crate::numerics::{p6_residual, refinement_sweep};
        let s = sys4();
        let x0 = default_quadrature_state4();
        let span = TimeSpan::real(0.0, 10.0);
        let steps = [0.04, 0.02, 0.01];
        let q = refinement_sweep(&s, &x0, C::new(1.0, 0.0), &span, &steps, |tr| {
            let r = quadrature_linearization(tr, BranchMode::Tracked)?;
            Ok(r.xi1_variation.max(r.xi2_deviation))
        })
        .unwrap();
        let p = refinement_sweep(&s, &x0, C::new(1.0, 0.0), &span, &steps, |tr| Ok(p6_residual(tr)?.residual)).unwrap();
        assert!(q.order.unwrap() >= 4.0, "{q:?}");
        assert!(p.order.unwrap() >= 4.0, "{p:?}");
    }

    #[test]
    fn turning_point_start_rejected() {
        // p = 0 puts both sᵢ on roots of P₆
        let tr = integrate(&sys4(), &default_state4(), C::new(1.0, 0.0), &TimeSpan::real(0.0, 1.0), &IntegratorConfig::default())
            .unwrap();
        assert!(quadrature_linearization(&tr, BranchMode::Tracked).is_err());
    }

    #[test]
    fn hermite_fallback_agrees() {
        let mut tr = integrate(
            &sys4(),
            &default_quadrature_state4(),
            C::new(1.0, 0.0),
            &TimeSpan::real(0.0, 2.0),
            &IntegratorConfig {
                max_step: Some(0.005),
                ..IntegratorConfig::default()
            },
        )
        .unwrap();
        tr.dense.clear();
        let r = quadrature_linearization(&tr, BranchMode::Tracked).unwrap();
        assert!(r.xi1_variation <= 1e-6 && r.xi2_deviation <= 1e-6, "{r:?}");
    }
}
