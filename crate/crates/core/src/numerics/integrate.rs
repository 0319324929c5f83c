//! Dormand–Prince 5(4) with Hairer's dense output, over complex states along
//! a straight ray in complex time `t = t0 + dir·s`, `s ∈ [0, length]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Poly, Var};
use crate::numerics::field::CompiledField;
use crate::systems::{SystemDef, SystemId};

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on `|Δs|`; `None` for unbounded.
    pub max_step: Option<f64>,
    pub max_steps: usize,
    /// Fixed step `Δs` with no error control (refinement sweeps).
    pub fixed_step: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-12,
            atol: 1e-14,
            max_step: None,
            max_steps: 1_000_000,
            fixed_step: None,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if !pos(self.rtol) || !pos(self.atol) {
            return Err(Error::InvalidInput("tolerances must be positive and finite".into()));
        }
        if self.max_step.is_some_and(|h| !pos(h)) || self.fixed_step.is_some_and(|h| !pos(h)) {
            return Err(Error::InvalidInput("step sizes must be positive and finite".into()));
        }
        Ok(())
    }

    /// Same configuration with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        IntegratorConfig {
            rtol: self.rtol / factor,
            atol: self.atol / factor,
            ..self.clone()
        }
    }

    pub fn fixed(h: f64) -> Self {
        IntegratorConfig {
            fixed_step: Some(h),
            ..Self::default()
        }
    }
}

/// The ray `t = t0 + direction·s` for `s ∈ [0, length]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSpan {
    pub t0: C,
    pub direction: C,
    pub length: f64,
}

impl TimeSpan {
    /// Real interval from `t0` to `t1` (either orientation).
    pub fn real(t0: f64, t1: f64) -> Self {
        Self::between(C::new(t0, 0.0), C::new(t1, 0.0))
    }

    /// Ray from `t0` towards `t1` in the complex plane.
    pub fn between(t0: C, t1: C) -> Self {
        let d = t1 - t0;
        let len = d.norm();
        TimeSpan {
            t0,
            direction: if len > 0.0 { d / len } else { C::new(1.0, 0.0) },
            length: len,
        }
    }

    pub fn time(&self, s: f64) -> C {
        self.t0 + self.direction * s
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length >= 0.0 && self.length.is_finite()) || !self.t0.is_finite() {
            return Err(Error::InvalidInput("time span must be finite".into()));
        }
        if (self.direction.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("time direction must have modulus 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// Step size collapsed, typically next to a movable singularity.
    StepUnderflow { s: f64 },
    MaxSteps { s: f64 },
}

/// Interpolation data for one accepted step `[s, s + h]`.
#[derive(Debug, Clone)]
pub struct DenseSegment {
    pub s: f64,
    pub h: f64,
    rcont: [Vec<C>; 5],
}

impl DenseSegment {
    pub fn eval(&self, s: f64) -> Vec<C> {
        let th = (s - self.s) / self.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        (0..r1.len())
            .map(|i| r1[i] + (r2[i] + (r3[i] + (r4[i] + r5[i] * th1) * th) * th1) * th)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    /// Ray parameter.
    pub s: f64,
    pub t: C,
    pub state: Vec<C>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub system: Option<SystemId>,
    pub var_names: Vec<String>,
    pub a: C,
    pub span: TimeSpan,
    pub samples: Vec<Sample>,
    /// One segment per accepted step; empty for trajectories read from disk.
    pub dense: Vec<DenseSegment>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn initial_state(&self) -> &[C] {
        &self.samples[0].state
    }

    pub fn final_state(&self) -> &[C] {
        &self.samples.last().expect("nonempty").state
    }

    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// Dense-output state at ray parameter `s`.
    pub fn state_at(&self, s: f64) -> Option<Vec<C>> {
        if self.dense.is_empty() {
            return None;
        }
        let k = self.dense.partition_point(|seg| seg.s + seg.h < s);
        let seg = self.dense.get(k).or(self.dense.last())?;
        let end = self.samples.last()?.s;
        (s >= -1e-15 && s <= end + 1e-12 * end.abs().max(1.0)).then(|| seg.eval(s))
    }

    pub fn dim(&self) -> usize {
        self.var_names.len()
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

struct Rhs<'a> {
    field: &'a CompiledField,
    a: C,
    dir: C,
}

impl Rhs<'_> {
    fn call(&self, y: &[C], out: &mut [C]) {
        self.field.eval_into(y, self.a, out);
        for o in out.iter_mut() {
            *o *= self.dir;
        }
    }
}

fn combo(y: &[C], h: f64, terms: &[(f64, &[C])], out: &mut [C]) {
    for i in 0..y.len() {
        let mut acc = C::new(0.0, 0.0);
        for (c, k) in terms {
            acc += k[i] * *c;
        }
        out[i] = y[i] + acc * h;
    }
}

fn err_norm(y: &[C], y1: &[C], e: &[C], cfg: &IntegratorConfig) -> f64 {
    let n = y.len().max(1) as f64;
    let s: f64 = (0..y.len())
        .map(|i| {
            let sk = cfg.atol + cfg.rtol * y[i].norm().max(y1[i].norm());
            (e[i].norm() / sk).powi(2)
        })
        .sum();
    (s / n).sqrt()
}

fn initial_step(rhs: &Rhs, y: &[C], f0: &[C], cfg: &IntegratorConfig, hmax: f64) -> f64 {
    let n = y.len();
    let (mut dnf, mut dny) = (0.0, 0.0);
    for i in 0..n {
        let sk = cfg.atol + cfg.rtol * y[i].norm();
        dnf += (f0[i].norm() / sk).powi(2);
        dny += (y[i].norm() / sk).powi(2);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(hmax);
    let y1: Vec<C> = (0..n).map(|i| y[i] + f0[i] * h).collect();
    let mut f1 = vec![C::new(0.0, 0.0); n];
    rhs.call(&y1, &mut f1);
    let der2 = (0..n)
        .map(|i| {
            let sk = cfg.atol + cfg.rtol * y[i].norm();
            ((f1[i] - f0[i]).norm() / sk).powi(2)
        })
        .sum::<f64>()
        .sqrt()
        / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(hmax)
}

/// Integrates `dx/dt = field(x; a)` along `span`.
pub fn integrate_polys(
    vars: &[Var],
    param: &Var,
    field: &[Poly],
    state0: &[C],
    a: C,
    span: &TimeSpan,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    span.validate()?;
    if state0.len() != vars.len() || field.len() != vars.len() {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            got: state0.len(),
        });
    }
    if state0.iter().any(|x| !x.is_finite()) || !a.is_finite() {
        return Err(Error::InvalidInput("initial state and parameter must be finite".into()));
    }
    let compiled = CompiledField::new(vars, param, field)?;
    let rhs = Rhs {
        field: &compiled,
        a,
        dir: span.direction,
    };
    let n = vars.len();
    let zero = vec![C::new(0.0, 0.0); n];
    let mut samples = vec![Sample {
        s: 0.0,
        t: span.t0,
        state: state0.to_vec(),
    }];
    let mut dense = Vec::new();
    let mut termination = Termination::Completed;

    let mut y = state0.to_vec();
    let mut k1 = zero.clone();
    rhs.call(&y, &mut k1);
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone());
    let mut ytmp = zero.clone();
    let mut y1 = zero.clone();
    let mut errv = zero.clone();

    let end = span.length;
    let hmax = cfg.max_step.unwrap_or(end).min(end).max(f64::MIN_POSITIVE);
    let mut s = 0.0;
    let mut h = match cfg.fixed_step {
        Some(h) => h,
        None if end > 0.0 => initial_step(&rhs, &y, &k1, cfg, hmax),
        None => 0.0,
    };
    let mut facold: f64 = 1e-4;
    let mut reject = false;
    let mut steps = 0;
    const SAFE: f64 = 0.9;
    const BETA: f64 = 0.04;
    let expo1 = 0.2 - BETA * 0.75;

    while s < end {
        if steps >= cfg.max_steps {
            termination = Termination::MaxSteps { s };
            break;
        }
        steps += 1;
        let last = s + h >= end * (1.0 - 1e-14) || s + 1.01 * h >= end;
        if last {
            h = end - s;
        }
        if h <= 1e-14 * s.abs().max(1.0) {
            termination = Termination::StepUnderflow { s };
            break;
        }
        combo(&y, h, &[(A21, &k1)], &mut ytmp);
        rhs.call(&ytmp, &mut k2);
        combo(&y, h, &[(A31, &k1), (A32, &k2)], &mut ytmp);
        rhs.call(&ytmp, &mut k3);
        combo(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)], &mut ytmp);
        rhs.call(&ytmp, &mut k4);
        combo(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], &mut ytmp);
        rhs.call(&ytmp, &mut k5);
        combo(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], &mut ytmp);
        rhs.call(&ytmp, &mut k6);
        combo(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], &mut y1);
        rhs.call(&y1, &mut k7);

        if y1.iter().chain(&k7).any(|x| !x.is_finite()) {
            if cfg.fixed_step.is_some() {
                return Err(Error::NonFinite {
                    t: span.time(s + h).to_string(),
                });
            }
            h *= 0.1;
            reject = true;
            continue;
        }

        // step size actually taken; `h` becomes the proposal for the next one
        let hu = h;
        if cfg.fixed_step.is_none() {
            for i in 0..n {
                errv[i] = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            }
            let err = err_norm(&y, &y1, &errv, cfg);
            let fac11 = err.powf(expo1);
            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(1.0 / 10.0, 5.0);
            if err > 1.0 {
                h /= (fac11 / SAFE).min(5.0);
                reject = true;
                continue;
            }
            facold = err.max(1e-4);
            let mut hnew = (h / fac).min(hmax);
            if reject {
                hnew = hnew.min(h);
            }
            reject = false;
            h = hnew;
        }

        let mut rc: [Vec<C>; 5] = [y.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone()];
        for i in 0..n {
            let ydiff = y1[i] - y[i];
            let bspl = k1[i] * hu - ydiff;
            rc[1][i] = ydiff;
            rc[2][i] = bspl;
            rc[3][i] = ydiff - k7[i] * hu - bspl;
            rc[4][i] = (k1[i] * D1 + k3[i] * D3 + k4[i] * D4 + k5[i] * D5 + k6[i] * D6 + k7[i] * D7) * hu;
        }
        dense.push(DenseSegment { s, h: hu, rcont: rc });
        s = if last { end } else { s + hu };
        std::mem::swap(&mut y, &mut y1);
        std::mem::swap(&mut k1, &mut k7);
        samples.push(Sample {
            s,
            t: span.time(s),
            state: y.clone(),
        });
        if last {
            break;
        }
    }

    Ok(Trajectory {
        system: None,
        var_names: vars.iter().map(|v| v.name().to_string()).collect(),
        a,
        span: *span,
        samples,
        dense,
        termination,
    })
}

/// Integrates one of the two systems.
pub fn integrate(
    system: &SystemDef,
    state0: &[C],
    a: C,
    span: &TimeSpan,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let mut tr = integrate_polys(&system.state_vars, &system.param(), &system.field, state0, a, span, cfg)?;
    tr.system = Some(system.id);
    Ok(tr)
}
