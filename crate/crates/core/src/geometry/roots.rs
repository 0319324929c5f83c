use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots of `Σ c_k x^k` (constant term first) by Aberth–Ehrlich iteration,
/// each polished by one Newton step.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs
        .iter()
        .rposition(|c| *c != Complex64::new(0.0, 0.0))
        .ok_or_else(|| Error::InvalidInput("zero polynomial has no roots".into()))?;
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite { t: "polynomial coefficients".into() });
    }
    // exact zeros at the origin are split off so that they cluster exactly
    let low = coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0);
    let mut out = vec![Complex64::new(0.0, 0.0); low];
    let coeffs = &coeffs[low..=deg];
    let deg = deg - low;
    if deg == 0 {
        return Ok(out);
    }
    let z = aberth(coeffs).ok_or_else(|| Error::InvalidInput("root iteration did not converge".into()))?;
    out.extend(z.into_iter().map(|z| newton_step(coeffs, z)));
    Ok(out)
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn aberth(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n].norm();
    // Cauchy-type bound on the root moduli
    let radius = 1.0 + c[..n].iter().map(|x| x.norm() / lead).fold(0.0, f64::max);
    let r0 = c[..n]
        .iter()
        .enumerate()
        .filter(|(_, x)| x.norm() > 0.0)
        .map(|(k, x)| (x.norm() / lead).powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .clamp(f64::MIN_POSITIVE.sqrt(), radius);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..500 {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let rep: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * rep);
            if !w.is_finite() {
                return None;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            }
        }
        if done.iter().all(|d| *d) {
            return Some(z);
        }
    }
    // multiple roots converge only linearly; accept what we have
    Some(z)
}

fn newton_step(c: &[Complex64], z: Complex64) -> Complex64 {
    let (p, dp) = horner(c, z);
    if dp.norm() == 0.0 {
        return z;
    }
    let next = z - p / dp;
    if next.is_finite() {
        next
    } else {
        z
    }
}

/// Groups points closer than `tol`; fails if some pair sits in the grey
/// zone `(tol, 100·tol]`. Returns `(center, multiplicity)` per cluster.
pub fn cluster(points: &[Complex64], tol: f64) -> Result<Vec<(Complex64, usize)>> {
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = (a - b).norm();
            if d > tol && d <= 100.0 * tol {
                return Err(Error::AmbiguousClusters { tol, distance: d });
            }
        }
    }
    let mut out: Vec<(Complex64, usize, Complex64)> = Vec::new();
    for &p in points {
        match out.iter_mut().find(|(c, _, _)| (c - p).norm() <= tol) {
            Some((_, n, sum)) => {
                *n += 1;
                *sum += p;
            }
            None => out.push((p, 1, p)),
        }
    }
    Ok(out
        .into_iter()
        .map(|(_, n, sum)| (sum / n as f64, n))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_roots() {
        // x² + 1
        let mut r = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn wilkinson_like() {
        // (x-1)(x-2)...(x-10)
        let mut p = vec![c(1.0, 0.0)];
        for k in 1..=10 {
            let mut next = vec![c(0.0, 0.0); p.len() + 1];
            for (i, ci) in p.iter().enumerate() {
                next[i + 1] += *ci;
                next[i] -= *ci * k as f64;
            }
            p = next;
        }
        let mut r = polynomial_roots(&p).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (k, z) in r.iter().enumerate() {
            assert!((z - c(k as f64 + 1.0, 0.0)).norm() < 1e-8, "{z}");
        }
        let r = polynomial_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(&r[..2], &[c(0.0, 0.0), c(0.0, 0.0)]);
        assert!((r[2] + 1.0).norm() < 1e-14);
    }

    #[test]
    fn clustering() {
        let pts = [c(0.0, 0.0), c(1e-12, 0.0), c(1.0, 0.0)];
        let cl = cluster(&pts, 1e-9).unwrap();
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].1, 2);
        assert!(matches!(cluster(&pts, 1e-13), Err(Error::AmbiguousClusters { .. })));
    }
}
