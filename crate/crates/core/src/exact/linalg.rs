//! Dense linear algebra over Q(i, √2) with polynomial right-hand sides.

use crate::exact::{Poly, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// General solution `particular + span(kernel)` of `M x = rhs`.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    /// Solution with every free coordinate set to zero.
    pub particular: Vec<Poly>,
    /// Basis of the null space of `M`, one vector per free column.
    pub kernel: Vec<Vec<Scalar>>,
}

/// Obstruction to solvability: a row combination of `M` that vanishes while
/// the same combination of the right-hand side does not.
#[derive(Debug, Clone)]
pub struct Inconsistent {
    pub residual: Poly,
}

struct Echelon {
    rows: Vec<Vec<Scalar>>,
    rhs: Vec<Poly>,
    pivots: Vec<usize>,
}

fn reduce(m: &Matrix, rhs: &[Poly]) -> Echelon {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rows = m.clone();
    let mut rhs = rhs.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        rhs.swap(r, piv);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        rhs[r] = rhs[r].scale(&inv);
        for k in 0..nrows {
            if k == r || rows[k][col].is_zero() {
                continue;
            }
            let f = rows[k][col].clone();
            for j in 0..ncols {
                if !rows[r][j].is_zero() {
                    let d = &f * &rows[r][j];
                    rows[k][j] -= &d;
                }
            }
            let d = rhs[r].scale(&f);
            rhs[k] = &rhs[k] - &d;
        }
        pivots.push(col);
        r += 1;
    }
    Echelon { rows, rhs, pivots }
}

/// Solves `M x = rhs` exactly, reporting the null space.
pub fn solve_poly_rhs(m: &Matrix, rhs: &[Poly]) -> Result<LinearSolution, Inconsistent> {
    let ncols = m.first().map_or(0, Vec::len);
    let ech = reduce(m, rhs);
    for k in ech.pivots.len()..ech.rows.len() {
        if !ech.rhs[k].is_zero() {
            return Err(Inconsistent {
                residual: ech.rhs[k].clone(),
            });
        }
    }
    let mut particular = vec![Poly::zero(); ncols];
    for (r, &c) in ech.pivots.iter().enumerate() {
        particular[c] = ech.rhs[r].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (r, &c) in ech.pivots.iter().enumerate() {
                v[c] = -&ech.rows[r][f];
            }
            v
        })
        .collect();
    Ok(LinearSolution { particular, kernel })
}

pub fn rank(m: &Matrix) -> usize {
    let zeros = vec![Poly::zero(); m.len()];
    reduce(m, &zeros).pivots.len()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for k in 0..inner {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc += &(&a[i][k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Coefficients `[c_0, …, c_n]` of `det(x·I − A) = Σ c_k x^k`
/// (Faddeev–LeVerrier).
pub fn char_poly(a: &Matrix) -> Vec<Scalar> {
    let n = a.len();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut mk: Matrix = vec![vec![Scalar::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = mat_mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mat_mul(a, &next);
        let mut trace = Scalar::zero();
        for (i, row) in am.iter().enumerate() {
            trace += &row[i];
        }
        coeffs[n - k] = -(&trace * &Scalar::from_ratio(1, k as i64));
        mk = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn char_poly_of_triangular() {
        let a = vec![
            vec![s(2), s(7), s(1)],
            vec![s(0), s(-1), s(4)],
            vec![s(0), s(0), s(3)],
        ];
        // (x − 2)(x + 1)(x − 3) = x³ − 4x² + x + 6
        assert_eq!(char_poly(&a), vec![s(6), s(1), s(-4), s(1)]);
    }

    #[test]
    fn kernel_and_consistency() {
        let m = vec![vec![s(1), s(2)], vec![s(2), s(4)]];
        let ok = solve_poly_rhs(&m, &[Poly::var("x"), Poly::var("x").scale(&s(2))]).unwrap();
        assert_eq!(ok.kernel.len(), 1);
        assert_eq!(ok.kernel[0], vec![s(-2), s(1)]);
        assert_eq!(ok.particular[0], Poly::var("x"));
        let bad = solve_poly_rhs(&m, &[Poly::var("x"), Poly::var("y")]).unwrap_err();
        assert!(!bad.residual.is_zero());
        assert_eq!(rank(&m), 1);
    }
}
