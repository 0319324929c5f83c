use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use serde::Serialize;

use su2ym::exact::Var;
use su2ym::numerics::{
    integrate, invariant_drift, p6_residual, quadrature_linearization, read_csv, write_csv, BranchMode, DriftReport,
    P6Report, QuadratureReport, Termination, Trajectory,
};
use su2ym::report::Report;
use su2ym::suites::{
    balance_output, curve_output, full_suite, quadrature_checks, random_curve_outputs, separation_checks, CurveOutput,
};
use su2ym::systems::suite::exact_identity_suite;
use su2ym::systems::SystemId;
use su2ym::{Error, Result};

use super::config::RunConfig;

/// What a command produced: a document and whether its checks held.
pub struct Outcome {
    pub json: String,
    pub ok: bool,
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Writes through a temporary file in the target directory, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn report(cfg: &RunConfig, checks: Vec<su2ym::report::Check>) -> Result<Outcome> {
    let r = Report::new(Some(cfg.seed), checks);
    Ok(Outcome {
        ok: r.all_passed(),
        json: to_json(&r)?,
    })
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome> {
    report(cfg, exact_identity_suite())
}

pub fn full_report(cfg: &RunConfig) -> Result<Outcome> {
    report(cfg, full_suite(cfg.seed, cfg.draws, &cfg.numeric_setup()))
}

pub fn balance(cfg: &RunConfig) -> Result<Outcome> {
    let out = balance_output(&cfg.system.definition(), &cfg.branch, cfg.order)?;
    Ok(Outcome {
        ok: out.residual_ok,
        json: to_json(&out)?,
    })
}

#[derive(Serialize)]
struct CurvesDoc {
    /// `None` when the parameters were given explicitly.
    seed: Option<u64>,
    curves: Vec<CurveOutput>,
}

pub fn curves(cfg: &RunConfig) -> Result<Outcome> {
    let doc = if cfg.curve_values.is_empty() {
        CurvesDoc {
            seed: Some(cfg.seed),
            curves: random_curve_outputs(cfg.curve, cfg.seed, cfg.draws, cfg.cluster_tol)?,
        }
    } else {
        let mut params: BTreeMap<Var, _> = cfg.curve_values.iter().map(|(k, v)| (Var::new(k), *v)).collect();
        params.insert(Var::new("a"), cfg.a);
        CurvesDoc {
            seed: None,
            curves: vec![curve_output(cfg.curve, &params, cfg.cluster_tol)?],
        }
    };
    Ok(Outcome {
        ok: true,
        json: to_json(&doc)?,
    })
}

#[derive(Serialize)]
struct SimulateDoc {
    system: String,
    a: [f64; 2],
    t0: [f64; 2],
    t1: [f64; 2],
    termination: Termination,
    samples: usize,
    drift: DriftReport,
}

pub fn simulate(cfg: &RunConfig) -> Result<Outcome> {
    let sys = cfg.system.definition();
    let tr = integrate(&sys, &cfg.state, cfg.a, &cfg.span, &cfg.integrator)?;
    if let Some(path) = &cfg.csv {
        let mut buf = Vec::new();
        write_csv(&tr, &mut buf)?;
        write_atomic(path, &buf)?;
    }
    let drift = invariant_drift(&sys, &tr)?;
    let end = cfg.span.time(cfg.span.length);
    let doc = SimulateDoc {
        system: cfg.system.to_string(),
        a: [cfg.a.re, cfg.a.im],
        t0: [cfg.span.t0.re, cfg.span.t0.im],
        t1: [end.re, end.im],
        termination: tr.termination.clone(),
        samples: tr.samples.len(),
        drift,
    };
    Ok(Outcome {
        ok: tr.completed(),
        json: to_json(&doc)?,
    })
}

/// The 4D trajectory for `separate` and `quadrature`: read from `--input`
/// or integrated from `state`.
fn trajectory4(cfg: &RunConfig, state: &[num_complex::Complex64]) -> Result<Trajectory> {
    if cfg.system != SystemId::Sys4 {
        return Err(Error::InvalidInput("separation coordinates are defined for the 4d system only".into()));
    }
    match &cfg.input {
        Some(p) => read_csv(BufReader::new(File::open(p)?), SystemId::Sys4, cfg.a),
        None => integrate(&SystemId::Sys4.definition(), state, cfg.a, &cfg.span, &cfg.integrator),
    }
}

#[derive(Serialize)]
struct SeparateDoc {
    report: Report,
    p6: Option<P6Report>,
}

pub fn separate(cfg: &RunConfig) -> Result<Outcome> {
    let tr = trajectory4(cfg, &cfg.state)?;
    let report = Report::new(Some(cfg.seed), separation_checks(&tr));
    let doc = SeparateDoc {
        report,
        p6: p6_residual(&tr).ok(),
    };
    Ok(Outcome {
        ok: doc.report.all_passed(),
        json: to_json(&doc)?,
    })
}

#[derive(Serialize)]
struct QuadratureDoc {
    report: Report,
    tracked: Option<QuadratureReport>,
}

pub fn quadrature(cfg: &RunConfig) -> Result<Outcome> {
    // a real start has p = 0 and sits on a turning point of both roots
    let state = if cfg.state_given { &cfg.state } else { &cfg.quadrature_state };
    let tr = trajectory4(cfg, state)?;
    let report = Report::new(Some(cfg.seed), quadrature_checks(&tr));
    let doc = QuadratureDoc {
        report,
        tracked: quadrature_linearization(&tr, BranchMode::Tracked).ok(),
    };
    Ok(Outcome {
        ok: doc.report.all_passed(),
        json: to_json(&doc)?,
    })
}
