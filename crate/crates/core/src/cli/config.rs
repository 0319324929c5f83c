//! Run configuration: built-in defaults, overridden by a flat TOML file,
//! overridden by command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use num_complex::Complex64;
use serde::Deserialize;

use su2ym::exact::Scalar;
use su2ym::numerics::{default_quadrature_state4, default_state4, IntegratorConfig, TimeSpan};
use su2ym::painleve::CurveId;
use su2ym::suites::NumericSetup;
use su2ym::systems::morphism::pushforward_phi;
use su2ym::systems::SystemId;
use su2ym::{Error, Result};

/// A number in a config file: plain TOML number or a complex literal such
/// as `"1+0.2i"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Value {
    fn complex(&self, key: &str) -> Result<Complex64> {
        let z = match self {
            Value::Float(x) => Complex64::new(*x, 0.0),
            Value::Int(n) => Complex64::new(*n as f64, 0.0),
            Value::Text(s) => parse_complex(s).map_err(|e| Error::InvalidInput(format!("{key}: {e}")))?,
        };
        finite(key, z)
    }
}

fn finite(key: &str, z: Complex64) -> Result<Complex64> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::InvalidInput(format!("{key} must be finite")))
    }
}

pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    Complex64::from_str(&t).map_err(|_| format!("`{s}` is not a complex number"))
}

/// Either `"1, 1+0.2i, 0, 0"` or an array of values.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum StateValue {
    List(Vec<Value>),
    Text(String),
}

impl StateValue {
    fn parse(&self, key: &str) -> Result<Vec<Complex64>> {
        match self {
            StateValue::List(v) => v.iter().map(|x| x.complex(key)).collect(),
            StateValue::Text(s) => s
                .split(',')
                .map(|p| parse_complex(p).map_err(|e| Error::InvalidInput(format!("{key}: {e}"))))
                .map(|r| r.and_then(|z| finite(key, z)))
                .collect(),
        }
    }
}

/// Keys of the flat config file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub system: Option<String>,
    pub curve: Option<String>,
    pub a: Option<Value>,
    pub b1: Option<Value>,
    pub b2: Option<Value>,
    pub c1: Option<Value>,
    pub c2: Option<Value>,
    pub c3: Option<Value>,
    pub state: Option<StateValue>,
    pub quadrature_state: Option<StateValue>,
    pub t0: Option<Value>,
    pub t1: Option<Value>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub max_step: Option<f64>,
    pub order: Option<usize>,
    pub branch: Option<String>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub cluster_tol: Option<f64>,
    pub seed: Option<u64>,
    pub draws: Option<usize>,
}

/// Flags shared by every subcommand. Each overrides the config-file key of
/// the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat TOML file with any of the keys below (underscores for dashes).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// System: 4d or 5d [default: 4d].
    #[arg(long, global = true)]
    pub system: Option<String>,
    /// Curve for `curves`: C_eps, H_eps, Gamma_eps or P6 [default: from --system].
    #[arg(long, global = true)]
    pub curve: Option<String>,
    /// Parameter a [default: 1].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Invariant value b1 (curves C_eps, Gamma_eps, P6).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b1: Option<String>,
    /// Invariant value b2 (curves C_eps, Gamma_eps, P6).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b2: Option<String>,
    /// Invariant value c1 (curve H_eps).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c1: Option<String>,
    /// Invariant value c2 (curve H_eps).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c2: Option<String>,
    /// Invariant value c3 (curve H_eps).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c3: Option<String>,
    /// Initial state, comma separated, e.g. "1,1,0,0" or "1+0.2i,1-0.1i,0.3,-0.2"
    /// [default: (1,1,0,0) for 4d, its image under the morphism for 5d].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub state: Option<String>,
    /// Initial 4d state for the quadrature check when --state is not given
    /// [default: 1+0.2i,1-0.1i,0.3,-0.2].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub quadrature_state: Option<String>,
    /// Start time, complex allowed [default: 0].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t0: Option<String>,
    /// End time; the run follows the straight ray from t0 [default: 10].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t1: Option<String>,
    /// Relative tolerance [default: 1e-12].
    #[arg(long, global = true)]
    pub rtol: Option<f64>,
    /// Absolute tolerance [default: 1e-14].
    #[arg(long, global = true)]
    pub atol: Option<f64>,
    /// Largest step along the time ray [default: none].
    #[arg(long, global = true)]
    pub max_step: Option<f64>,
    /// Series order N in powers of t^(1/2) [default: 12].
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Branch of the balance: i or -i [default: i].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub branch: Option<String>,
    /// JSON output path [default: stdout].
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Trajectory CSV output path for `simulate`.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Trajectory CSV input for `separate` and `quadrature` instead of integrating.
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Root clustering tolerance for branch points [default: 1e-8].
    #[arg(long, global = true)]
    pub cluster_tol: Option<f64>,
    /// Seed for random parameter draws [default: 1].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of random parameter draws [default: 3].
    #[arg(long, global = true)]
    pub draws: Option<usize>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemId,
    pub curve: CurveId,
    pub a: Complex64,
    /// Curve values given explicitly, by name.
    pub curve_values: Vec<(&'static str, Complex64)>,
    pub state: Vec<Complex64>,
    /// Whether `state` came from the file or a flag rather than the default.
    pub state_given: bool,
    pub quadrature_state: Vec<Complex64>,
    pub span: TimeSpan,
    pub integrator: IntegratorConfig,
    pub order: usize,
    pub branch: Scalar,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub cluster_tol: f64,
    pub seed: u64,
    pub draws: usize,
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("config {}: {e}", path.display())))
}

fn flag_value(s: &Option<String>) -> Option<Value> {
    s.clone().map(Value::Text)
}

fn flag_state(s: &Option<String>) -> Option<StateValue> {
    s.clone().map(StateValue::Text)
}

fn positive(key: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidInput(format!("{key} must be positive and finite")))
    }
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<RunConfig> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let system: SystemId = flags
            .system
            .clone()
            .or(file.system)
            .map(|s| s.parse())
            .transpose()?
            .unwrap_or(SystemId::Sys4);
        let curve = match flags.curve.clone().or(file.curve) {
            Some(s) => s.parse()?,
            None => match system {
                SystemId::Sys4 => CurveId::Sys4,
                SystemId::Sys5 => CurveId::Sys5,
            },
        };
        let pick = |flag: &Option<String>, fv: Option<Value>| flag_value(flag).or(fv);
        let a = pick(&flags.a, file.a).map(|v| v.complex("a")).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
        let mut curve_values = Vec::new();
        for (key, flag, fv) in [
            ("b1", &flags.b1, file.b1),
            ("b2", &flags.b2, file.b2),
            ("c1", &flags.c1, file.c1),
            ("c2", &flags.c2, file.c2),
            ("c3", &flags.c3, file.c3),
        ] {
            if let Some(v) = pick(flag, fv) {
                curve_values.push((key, v.complex(key)?));
            }
        }
        let state_value = flag_state(&flags.state).or(file.state);
        let state_given = state_value.is_some();
        let state = match state_value {
            Some(s) => s.parse("state")?,
            None => match system {
                SystemId::Sys4 => default_state4(),
                SystemId::Sys5 => pushforward_phi(&default_state4())?,
            },
        };
        if state.len() != system.dim() {
            return Err(Error::DimensionMismatch {
                expected: system.dim(),
                got: state.len(),
            });
        }
        let quadrature_state = match flag_state(&flags.quadrature_state).or(file.quadrature_state) {
            Some(s) => s.parse("quadrature_state")?,
            None => default_quadrature_state4(),
        };
        if quadrature_state.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: quadrature_state.len(),
            });
        }
        let t0 = pick(&flags.t0, file.t0).map(|v| v.complex("t0")).transpose()?.unwrap_or_default();
        let t1 = pick(&flags.t1, file.t1)
            .map(|v| v.complex("t1"))
            .transpose()?
            .unwrap_or(Complex64::new(10.0, 0.0));
        let span = TimeSpan::between(t0, t1);
        let defaults = IntegratorConfig::default();
        let integrator = IntegratorConfig {
            rtol: positive("rtol", flags.rtol.or(file.rtol).unwrap_or(defaults.rtol))?,
            atol: positive("atol", flags.atol.or(file.atol).unwrap_or(defaults.atol))?,
            max_step: flags.max_step.or(file.max_step).map(|h| positive("max_step", h)).transpose()?,
            ..defaults
        };
        let branch = match flags.branch.clone().or(file.branch).as_deref().map(str::trim) {
            None | Some("i") | Some("+i") => Scalar::i(),
            Some("-i") => -Scalar::i(),
            Some(other) => return Err(Error::InvalidInput(format!("branch must be i or -i, got `{other}`"))),
        };
        Ok(RunConfig {
            system,
            curve,
            a,
            curve_values,
            state,
            state_given,
            quadrature_state,
            span,
            integrator,
            order: flags.order.or(file.order).unwrap_or(12),
            branch,
            out: flags.out.clone().or(file.out),
            csv: flags.csv.clone().or(file.csv),
            input: flags.input.clone().or(file.input),
            cluster_tol: positive("cluster_tol", flags.cluster_tol.or(file.cluster_tol).unwrap_or(1e-8))?,
            seed: flags.seed.or(file.seed).unwrap_or(1),
            draws: flags.draws.or(file.draws).unwrap_or(3),
        })
    }

    /// Inputs for the trajectory checks. A 5d state is ignored there since
    /// those checks start from a 4d point.
    pub fn numeric_setup(&self) -> NumericSetup {
        let d = NumericSetup::default();
        NumericSetup {
            a: self.a,
            state4: if self.system == SystemId::Sys4 {
                self.state.clone()
            } else {
                d.state4
            },
            quadrature_state4: self.quadrature_state.clone(),
            span: self.span,
            config: self.integrator.clone(),
            ..d
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1+0.2i").unwrap(), Complex64::new(1.0, 0.2));
        assert_eq!(parse_complex(" -0.1i ").unwrap(), Complex64::new(0.0, -0.1));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn precedence() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        std::fs::write(&p, "a = 2.5\norder = 8\nstate = [1, 2, \"0.5i\", 0]\n").unwrap();
        let flags = Flags {
            config: Some(p),
            order: Some(10),
            ..Flags::default()
        };
        let c = RunConfig::resolve(&flags).unwrap();
        assert_eq!(c.a, Complex64::new(2.5, 0.0));
        assert_eq!(c.order, 10);
        assert_eq!(c.state[2], Complex64::new(0.0, 0.5));
        assert_eq!(c.seed, 1);
    }

    #[test]
    fn rejects_bad_values() {
        let bad_dim = Flags {
            state: Some("1,2,3".into()),
            ..Flags::default()
        };
        assert!(matches!(RunConfig::resolve(&bad_dim), Err(Error::DimensionMismatch { .. })));
        let bad_tol = Flags {
            rtol: Some(-1.0),
            ..Flags::default()
        };
        assert!(RunConfig::resolve(&bad_tol).is_err());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        std::fs::write(&p, "unknown_key = 1\n").unwrap();
        assert!(RunConfig::resolve(&Flags {
            config: Some(p),
            ..Flags::default()
        })
        .is_err());
    }
}
