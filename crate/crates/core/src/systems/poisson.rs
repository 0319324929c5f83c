use crate::error::{Error, Result};
use crate::exact::{poly, Poly, Var};

/// A polynomial Poisson matrix `J` on a fixed coordinate list.
#[derive(Debug, Clone)]
pub struct PoissonMatrix {
    pub vars: Vec<Var>,
    pub entries: Vec<Vec<Poly>>,
}

impl PoissonMatrix {
    pub fn new(vars: Vec<Var>, entries: Vec<Vec<Poly>>) -> Result<Self> {
        let n = vars.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: entries.len(),
            });
        }
        Ok(PoissonMatrix { vars, entries })
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Entries of `J + Jᵀ`, row-major; all zero iff `J` is skew.
    pub fn skew_residuals(&self) -> Vec<Poly> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(&self.entries[i][j] + &self.entries[j][i]);
            }
        }
        out
    }

    fn gradient(&self, f: &Poly) -> Vec<Poly> {
        self.vars.iter().map(|v| f.partial(v)).collect()
    }
}

/// The constant-free Poisson structure on C⁵ for the 5D system.
pub fn poisson_matrix() -> PoissonMatrix {
    const ROWS: [[&str; 5]; 5] = [
        ["0", "0", "0", "2*z1", "4*z4"],
        ["0", "0", "1", "0", "0"],
        ["0", "-1", "0", "0", "-4*z1*z2"],
        ["-2*z1", "0", "0", "0", "2*z5 - 8*z1*z2^2"],
        ["-4*z4", "0", "4*z1*z2", "-2*z5 + 8*z1*z2^2", "0"],
    ];
    let vars = ["z1", "z2", "z3", "z4", "z5"].iter().map(|n| Var::new(n)).collect();
    let entries = ROWS
        .iter()
        .map(|r| r.iter().map(|s| poly(s)).collect())
        .collect();
    PoissonMatrix { vars, entries }
}

/// `{F, G} = Σ J_kl ∂F/∂z_k ∂G/∂z_l`.
pub fn poisson_bracket(j: &PoissonMatrix, f: &Poly, g: &Poly) -> Poly {
    let df = j.gradient(f);
    let dg = j.gradient(g);
    let mut acc = Poly::zero();
    for (k, dfk) in df.iter().enumerate() {
        if dfk.is_zero() {
            continue;
        }
        for (l, dgl) in dg.iter().enumerate() {
            if dgl.is_zero() || j.entries[k][l].is_zero() {
                continue;
            }
            acc = &acc + &(&(&j.entries[k][l] * dfk) * dgl);
        }
    }
    acc
}

/// `X_F = J ∇F`.
pub fn hamiltonian_vector_field(j: &PoissonMatrix, f: &Poly) -> Vec<Poly> {
    let df = j.gradient(f);
    j.entries
        .iter()
        .map(|row| {
            row.iter()
                .zip(&df)
                .fold(Poly::zero(), |acc, (jkl, d)| &acc + &(jkl * d))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct JacobiReport {
    /// One entry per `i < j < k` (zero-based), with its cyclic sum.
    pub triples: Vec<([usize; 3], Poly)>,
}

impl JacobiReport {
    pub fn all_zero(&self) -> bool {
        self.triples.iter().all(|(_, p)| p.is_zero())
    }
}

/// Cyclic sums `Σ_l (J_li ∂_l J_jk + J_lj ∂_l J_ki + J_lk ∂_l J_ij)` over
/// all index triples `i < j < k`.
pub fn verify_jacobi(j: &PoissonMatrix) -> JacobiReport {
    let n = j.dim();
    // d[l][a][b] = ∂_l J_ab
    let d: Vec<Vec<Vec<Poly>>> = j
        .vars
        .iter()
        .map(|v| {
            j.entries
                .iter()
                .map(|row| row.iter().map(|e| e.partial(v)).collect())
                .collect()
        })
        .collect();
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut acc = Poly::zero();
                for (l, dl) in d.iter().enumerate() {
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let jl = &j.entries[l][x];
                        if !jl.is_zero() && !dl[y][z].is_zero() {
                            acc = &acc + &(jl * &dl[y][z]);
                        }
                    }
                }
                triples.push(([a, b, c], acc));
            }
        }
    }
    JacobiReport { triples }
}

/// `[X, Y] = (DY)X − (DX)Y`, componentwise.
pub fn lie_bracket_fields(vars: &[Var], x: &[Poly], y: &[Poly]) -> Result<Vec<Poly>> {
    if x.len() != vars.len() || y.len() != vars.len() {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            got: if x.len() != vars.len() { x.len() } else { y.len() },
        });
    }
    Ok((0..vars.len())
        .map(|k| {
            let mut acc = Poly::zero();
            for (i, v) in vars.iter().enumerate() {
                acc = &acc + &(&y[k].partial(v) * &x[i]);
                acc = &acc - &(&x[k].partial(v) * &y[i]);
            }
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{sys5, sys5_second_flow, F1, F2, F3};

    #[test]
    fn skew_and_jacobi() {
        let j = poisson_matrix();
        assert!(j.skew_residuals().iter().all(Poly::is_zero));
        let rep = verify_jacobi(&j);
        assert_eq!(rep.triples.len(), 10);
        assert!(rep.all_zero());
    }

    #[test]
    fn constant_matrix_is_jacobi() {
        let vars: Vec<Var> = ["x", "y", "z"].iter().map(|n| Var::new(n)).collect();
        let e = vec![
            vec![poly("0"), poly("3"), poly("-1")],
            vec![poly("-3"), poly("0"), poly("2")],
            vec![poly("1"), poly("-2"), poly("0")],
        ];
        let j = PoissonMatrix::new(vars, e).unwrap();
        assert!(verify_jacobi(&j).all_zero());
    }

    #[test]
    fn non_jacobi_matrix_detected() {
        // J_12 = z3, J_13 = z1, J_23 = 0 fails: cyclic sum = J_31 ∂_3 J_12 ≠ 0
        let vars: Vec<Var> = ["z1", "z2", "z3"].iter().map(|n| Var::new(n)).collect();
        let e = vec![
            vec![poly("0"), poly("z3"), poly("z1")],
            vec![poly("-z3"), poly("0"), poly("0")],
            vec![poly("-z1"), poly("0"), poly("0")],
        ];
        let j = PoissonMatrix::new(vars, e).unwrap();
        assert!(!verify_jacobi(&j).all_zero());
    }

    #[test]
    fn brackets() {
        let j = poisson_matrix();
        assert!(poisson_bracket(&j, &poly(F1), &poly(F2)).is_zero());
        assert_eq!(poisson_bracket(&j, &poly("z2"), &poly("z3")), Poly::one());
        assert!(poisson_bracket(&j, &poly(F2), &poly(F2)).is_zero());
        let f = poly("z1*z3^2 + z5");
        let g = poly("z2*z4");
        assert_eq!(poisson_bracket(&j, &f, &g), -poisson_bracket(&j, &g, &f));
    }

    #[test]
    fn hamiltonian_fields() {
        let j = poisson_matrix();
        assert_eq!(hamiltonian_vector_field(&j, &poly(F1)), sys5().field);
        assert_eq!(hamiltonian_vector_field(&j, &poly(F2)), sys5_second_flow());
        assert!(hamiltonian_vector_field(&j, &poly(F3)).iter().all(Poly::is_zero));
    }

    #[test]
    fn lie_brackets() {
        let j = poisson_matrix();
        let x1 = hamiltonian_vector_field(&j, &poly(F1));
        let x2 = hamiltonian_vector_field(&j, &poly(F2));
        let x3 = hamiltonian_vector_field(&j, &poly(F3));
        let v = &j.vars;
        assert!(lie_bracket_fields(v, &x1, &x2).unwrap().iter().all(Poly::is_zero));
        assert!(lie_bracket_fields(v, &x1, &x1).unwrap().iter().all(Poly::is_zero));
        assert!(lie_bracket_fields(v, &x1, &x3).unwrap().iter().all(Poly::is_zero));
        assert!(lie_bracket_fields(v, &x1, &x2[..4]).is_err());
    }
}
