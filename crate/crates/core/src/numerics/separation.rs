//! The change of variables `q₂ = s₁ + s₂`, `q₁² = −4 s₁ s₂` on the 4D system
//! and the sextic identity it satisfies.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Trajectory;
use crate::systems::{sys4, SystemId};

type C = Complex64;

/// Below this `|q₁|` (relative to the state scale) the `p₁` relation degenerates.
const Q1_TOL: f64 = 1e-12;
/// Below this `|s₁ − s₂|` the two roots are considered collided.
const COLLISION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationFlag {
    /// `q₁ = 0`: `s₁s₂ = 0` and `p₁` drops out.
    Q1Zero,
    /// `s₁ = s₂`: `ṡ` is undefined.
    Collision,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationSample {
    pub t: C,
    pub s: [C; 2],
    pub sdot: [C; 2],
    /// `true` when the labels were swapped relative to the principal formula
    /// `s₁ = (q₂ + √(q₂² + q₁²))/2` to stay continuous.
    pub swapped: bool,
    pub flags: Vec<SeparationFlag>,
}

impl SeparationSample {
    pub fn flagged(&self) -> bool {
        !self.flags.is_empty()
    }

    /// Residuals of `s₁+s₂ = q₂`, `s₁s₂ = −q₁²/4`, `ṡ₁+ṡ₂ = p₂` and
    /// `ṡ₁s₂ + s₁ṡ₂ = −q₁p₁/2`, each scaled by `max(1, |rhs|)`.
    pub fn closure_residuals(&self, x: &[C]) -> [f64; 4] {
        let (q1, q2, p1, p2) = (x[0], x[1], x[2], x[3]);
        let [s1, s2] = self.s;
        let [d1, d2] = self.sdot;
        let rel = |lhs: C, rhs: C| (lhs - rhs).norm() / rhs.norm().max(1.0);
        [
            rel(s1 + s2, q2),
            rel(s1 * s2, -q1 * q1 / 4.0),
            rel(d1 + d2, p2),
            rel(d1 * s2 + s1 * d2, -q1 * p1 / 2.0),
        ]
    }
}

fn principal_roots(q1: C, q2: C) -> [C; 2] {
    let d = (q2 * q2 + q1 * q1).sqrt();
    [(q2 + d) / 2.0, (q2 - d) / 2.0]
}

/// Initial labelling: descending real part, ties by imaginary part.
fn initial_order(r: [C; 2]) -> bool {
    let [x, y] = r;
    x.re < y.re || (x.re == y.re && x.im < y.im)
}

/// Separation coordinates of one 4D state. `prev` is the previous `s₁` for
/// continuity; `None` applies the initial ordering.
pub fn separation_of_state(t: C, x: &[C], prev: Option<C>) -> Result<SeparationSample> {
    if x.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: x.len(),
        });
    }
    let (q1, q2, p1, p2) = (x[0], x[1], x[2], x[3]);
    let mut r = principal_roots(q1, q2);
    let swapped = match prev {
        None => initial_order(r),
        Some(s1) => (r[0] - s1).norm() > (r[1] - s1).norm(),
    };
    if swapped {
        r.swap(0, 1);
    }
    let [s1, s2] = r;
    let scale = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut flags = Vec::new();
    if q1.norm() <= Q1_TOL * scale {
        flags.push(SeparationFlag::Q1Zero);
    }
    let gap = s1 - s2;
    let sdot = if gap.norm() <= COLLISION_TOL * scale {
        flags.push(SeparationFlag::Collision);
        [C::new(f64::NAN, f64::NAN); 2]
    } else {
        let d1 = (q1 * p1 / 2.0 + s1 * p2) / gap;
        [d1, p2 - d1]
    };
    Ok(SeparationSample {
        t,
        s: r,
        sdot,
        swapped,
        flags,
    })
}

fn require_sys4(traj: &Trajectory) -> Result<()> {
    match traj.system {
        Some(SystemId::Sys4) | None if traj.dim() == 4 => Ok(()),
        _ => Err(Error::InvalidInput("separation coordinates need a 4d trajectory".into())),
    }
}

/// Separation coordinates at every sample, labelled by continuity.
pub fn separation_coordinates(traj: &Trajectory) -> Result<Vec<SeparationSample>> {
    require_sys4(traj)?;
    let mut out: Vec<SeparationSample> = Vec::with_capacity(traj.samples.len());
    for smp in &traj.samples {
        let prev = out.last().map(|p| p.s[0]);
        out.push(separation_of_state(smp.t, &smp.state, prev)?);
    }
    Ok(out)
}

/// `P₆(s) = −8s⁶ − 4a s⁴ + 2b₁ s² + b₂ s`.
pub fn p6_eval(a: C, b1: C, b2: C, s: C) -> C {
    let s2 = s * s;
    s * (b2 + s * (2.0 * b1 + s2 * (-4.0 * a - 8.0 * s2)))
}

#[derive(Debug, Clone, Serialize)]
pub struct P6Report {
    pub b1: [f64; 2],
    pub b2: [f64; 2],
    /// `max |ṡᵢ²(s₁−s₂)² − P₆(sᵢ)| / max(1, |P₆(sᵢ)|)` over unflagged samples.
    pub residual: f64,
    /// Largest of the four closure residuals over unflagged samples.
    pub closure: f64,
    pub used: usize,
    /// Indices of flagged samples, excluded from both maxima.
    pub excluded: Vec<usize>,
}

/// Checks the sextic identity with `b₁ = H₁(x₀)`, `b₂ = H₂(x₀)` recomputed
/// from the trajectory's first sample.
pub fn p6_residual(traj: &Trajectory) -> Result<P6Report> {
    require_sys4(traj)?;
    let inv = sys4().invariants_at(traj.initial_state(), traj.a)?;
    p6_residual_with(traj, inv[0], inv[1])
}

/// As [`p6_residual`] with caller-supplied level values.
pub fn p6_residual_with(traj: &Trajectory, b1: C, b2: C) -> Result<P6Report> {
    let seps = separation_coordinates(traj)?;
    let mut residual = 0.0f64;
    let mut closure = 0.0f64;
    let mut excluded = Vec::new();
    for (k, (sep, smp)) in seps.iter().zip(&traj.samples).enumerate() {
        if sep.flagged() {
            excluded.push(k);
            continue;
        }
        let gap2 = (sep.s[0] - sep.s[1]).powu(2);
        for i in 0..2 {
            let p = p6_eval(traj.a, b1, b2, sep.s[i]);
            residual = residual.max((sep.sdot[i] * sep.sdot[i] * gap2 - p).norm() / p.norm().max(1.0));
        }
        closure = closure.max(sep.closure_residuals(&smp.state).into_iter().fold(0.0, f64::max));
    }
    Ok(P6Report {
        b1: [b1.re, b1.im],
        b2: [b2.re, b2.im],
        residual,
        closure,
        used: seps.len() - excluded.len(),
        excluded,
    })
}
