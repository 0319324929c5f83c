//! Trajectory CSV: header `t_re,t_im,<var>_re,<var>_im,...`, one row per
//! accepted step.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{Sample, Termination, TimeSpan, Trajectory};
use crate::systems::SystemId;

pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t_re".to_string(), "t_im".to_string()];
    for v in &traj.var_names {
        header.push(format!("{v}_re"));
        header.push(format!("{v}_im"));
    }
    w.write_record(&header)?;
    for smp in &traj.samples {
        let mut row = vec![smp.t.re.to_string(), smp.t.im.to_string()];
        for z in &smp.state {
            row.push(z.re.to_string());
            row.push(z.im.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a trajectory of `system` with parameter `a`. Times must lie on a
/// straight ray and move strictly away from the first one.
pub fn read_csv<R: Read>(input: R, system: SystemId, a: Complex64) -> Result<Trajectory> {
    let def = system.definition();
    let names: Vec<String> = def.var_names().iter().map(|s| s.to_string()).collect();
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
    let mut want = vec!["t_re".to_string(), "t_im".to_string()];
    for v in &names {
        want.push(format!("{v}_re"));
        want.push(format!("{v}_im"));
    }
    if header != want {
        return Err(Error::InvalidInput(format!(
            "CSV header {header:?} does not match {want:?}"
        )));
    }
    let mut times = Vec::new();
    let mut states = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidInput(format!("row {}: {e}", line + 2)))?;
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("row {}: non-finite value", line + 2)));
        }
        times.push(Complex64::new(vals[0], vals[1]));
        states.push(vals[2..].chunks(2).map(|p| Complex64::new(p[0], p[1])).collect::<Vec<_>>());
    }
    if times.is_empty() {
        return Err(Error::InvalidInput("CSV has no rows".into()));
    }
    let t0 = times[0];
    let span = TimeSpan::between(t0, *times.last().expect("nonempty"));
    let mut samples = Vec::with_capacity(times.len());
    let mut last = -1.0;
    for (t, state) in times.into_iter().zip(states) {
        let d = t - t0;
        let s = (d * span.direction.conj()).re;
        if s <= last || (d - span.direction * s).norm() > 1e-9 * s.abs().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "time {t} is not strictly increasing along the ray from {t0}"
            )));
        }
        last = s;
        samples.push(Sample { s, t, state });
    }
    Ok(Trajectory {
        system: Some(system),
        var_names: names,
        a,
        span,
        samples,
        dense: Vec::new(),
        termination: Termination::Completed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{default_state4, integrate, IntegratorConfig};
    use crate::systems::sys4;

    #[test]
    fn round_trip() {
        let a = Complex64::new(1.0, 0.0);
        let tr = integrate(&sys4(), &default_state4(), a, &TimeSpan::real(0.0, 1.0), &IntegratorConfig::default())
            .unwrap();
        let mut buf = Vec::new();
        write_csv(&tr, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t_re,t_im,q1_re,q1_im,q2_re,q2_im,p1_re,p1_im,p2_re,p2_im\n"));
        let back = read_csv(&buf[..], SystemId::Sys4, a).unwrap();
        assert_eq!(back.samples.len(), tr.samples.len());
        for (x, y) in back.samples.iter().zip(&tr.samples) {
            assert_eq!(x.state, y.state);
            assert_eq!(x.t, y.t);
        }
    }

    #[test]
    fn malformed_rejected() {
        let a = Complex64::new(1.0, 0.0);
        assert!(read_csv("t_re,t_im,q1_re\n0,0,1\n".as_bytes(), SystemId::Sys4, a).is_err());
        let hdr = "t_re,t_im,q1_re,q1_im,q2_re,q2_im,p1_re,p1_im,p2_re,p2_im\n";
        let back = format!("{hdr}0,0,1,0,1,0,0,0,0,0\n1,0,1,0,1,0,0,0,0,0\n0.5,0,1,0,1,0,0,0,0,0\n");
        assert!(read_csv(back.as_bytes(), SystemId::Sys4, a).is_err());
    }
}
