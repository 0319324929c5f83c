//! Reference series and curves in their displayed form: each coordinate is
//! `prefactor · τ^power · (b₀ + b₁t + b₂t² + ⋯)` with `τ = t^(1/2)` and the
//! symbol `eps` standing for `ε = ±i`.

use std::collections::BTreeMap;

use crate::exact::{poly, Poly, Scalar, Var};
use crate::systems::SystemId;

pub struct SeriesFixture {
    pub coordinate: &'static str,
    pub prefactor: &'static str,
    /// τ-exponent of the prefactor's power of `t`.
    pub tau_power: i64,
    /// Bracket coefficients of `t⁰, t¹, …`.
    pub bracket: Vec<String>,
}

const X4: &str = "(-11/16*u^5 + 1/3*a*u + v)";
const Y4: &str = "(41/32*u^8 - a*u^4 + 3/2*u^3*v + 1/6*a^2 - 3*eps*sqrt2/2*w)";

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

pub fn sys4_series() -> Vec<SeriesFixture> {
    vec![
        SeriesFixture {
            coordinate: "q1",
            prefactor: "1",
            tau_power: -1,
            bracket: strings(&[
                "u",
                "-1/2*u^3",
                "v",
                &format!("u^2*{X4}"),
                &format!("u/4*{Y4}"),
            ]),
        },
        SeriesFixture {
            coordinate: "q2",
            prefactor: "eps*sqrt2/4",
            tau_power: -2,
            bracket: strings(&["1", "u^2", "1/3*(2*a - 3*u^4)", "1/8*u*(24*v - u^5)", "-2*eps*sqrt2*w"]),
        },
        SeriesFixture {
            coordinate: "p1",
            prefactor: "1",
            tau_power: -3,
            bracket: strings(&[
                "-1/2*u",
                "-1/4*u^3",
                "3/2*v",
                &format!("5/2*u^2*{X4}"),
                &format!("7*u/8*{Y4}"),
            ]),
        },
        SeriesFixture {
            coordinate: "p2",
            prefactor: "eps*sqrt2/4",
            tau_power: -4,
            bracket: strings(&["-1", "0", "1/3*(2*a - 3*u^4)", "1/4*u*(24*v - u^5)", "-6*eps*sqrt2*w"]),
        },
    ]
}

pub fn sys5_series() -> Vec<SeriesFixture> {
    vec![
        SeriesFixture {
            coordinate: "z1",
            prefactor: "1",
            tau_power: -2,
            bracket: strings(&[
                "alpha",
                "-alpha^2",
                "beta",
                "1/6*alpha*(3*beta - 9*alpha^3 + 4*a*alpha)",
                "gamma",
            ]),
        },
        SeriesFixture {
            coordinate: "z2",
            prefactor: "eps*sqrt2/4",
            tau_power: -2,
            bracket: strings(&[
                "1",
                "alpha",
                "1/3*(-3*alpha^2 + 2*a)",
                "1/2*(3*beta - alpha^3)",
                "-2*eps*sqrt2*theta",
            ]),
        },
        SeriesFixture {
            coordinate: "z3",
            prefactor: "eps*sqrt2/4",
            tau_power: -4,
            bracket: strings(&[
                "-1",
                "0",
                "1/3*(-3*alpha^2 + 2*a)",
                "3*beta - alpha^3",
                "-6*eps*sqrt2*theta",
            ]),
        },
        SeriesFixture {
            coordinate: "z4",
            prefactor: "1/2",
            tau_power: -4,
            bracket: strings(&[
                "-alpha",
                "0",
                "beta",
                "1/3*alpha*(3*beta - 9*alpha^3 + 4*a*alpha)",
                "3*gamma",
            ]),
        },
        SeriesFixture {
            coordinate: "z5",
            prefactor: "1",
            tau_power: -2,
            bracket: strings(&[
                "-1/3*a*alpha + alpha^3 - beta",
                "3*alpha^4 - a*alpha^2 - 3*alpha*beta",
                "4*eps*sqrt2*alpha*theta + 2*gamma + 8/3*a*alpha^3 - 1/3*a*beta - alpha^2*beta - 3*alpha^5 - 4/9*a^2*alpha",
            ]),
        },
    ]
}

pub fn series_fixture(system: SystemId) -> Vec<SeriesFixture> {
    match system {
        SystemId::Sys4 => sys4_series(),
        SystemId::Sys5 => sys5_series(),
    }
}

/// Curve relations; `eps` as above.
pub const SYS4_CURVE: &str =
    "2*v^2 + 1/6*(15*u^4 - 8*a)*u*v - 39/32*u^10 + 7/6*a*u^6 + 2/9*(a^2 + 9*b1)*u^2 - eps*sqrt2*b2";
pub const SYS5_CURVE: &str = "beta^2 + 2/3*(3*alpha^2 - 2*a)*alpha*beta - 3*alpha^6 + 8/3*a*alpha^4 \
     + 4/9*(a^2 + 9*c1)*alpha^2 - 2*eps*sqrt2*c2*alpha + c3";
pub const GAMMA_CURVE: &str = "2*w^2 + 1/6*(15*z^2 - 8*a)*z*w \
     + z*(-39/32*z^5 + 7/6*a*z^3 + 2/9*(a^2 + 9*b1)*z - eps*sqrt2*b2)";

/// Parses a fixture string with `eps` replaced by the given value.
pub fn with_epsilon(s: &str, eps: &Scalar) -> Poly {
    let map: BTreeMap<Var, Poly> = [(Var::new("eps"), Poly::constant(eps.clone()))].into();
    poly(s).substitute(&map)
}

/// Expected balance coefficients `c_{k,j}` as `(coordinate, j, value)`,
/// including the zeros between printed terms. Coordinate `k` with weight
/// `ν` has `j = tau_power + 2ν + 2m` for bracket index `m`.
pub fn expected_coefficients(system: SystemId, eps: &Scalar) -> Vec<(String, usize, Poly)> {
    let def = system.definition();
    let mut out = Vec::new();
    for fx in series_fixture(system) {
        let k = def
            .state_vars
            .iter()
            .position(|v| v.name() == fx.coordinate)
            .expect("fixture coordinate");
        let nu = def.weights[k] as i64;
        let pre = with_epsilon(fx.prefactor, eps);
        let base = fx.tau_power + 2 * nu;
        let top = base + 2 * (fx.bracket.len() as i64 - 1);
        let mut table: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, b) in fx.bracket.iter().enumerate() {
            table.insert(base + 2 * m as i64, &pre * &with_epsilon(b, eps));
        }
        for j in 0..=top {
            let v = table.remove(&j).unwrap_or_else(Poly::zero);
            out.push((fx.coordinate.to_string(), j as usize, v));
        }
    }
    out
}
