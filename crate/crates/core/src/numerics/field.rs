use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{Poly, Var};

struct Term {
    coef: Complex64,
    /// `(state index, exponent)`.
    factors: Vec<(usize, u32)>,
    param_exp: u32,
}

/// A list of polynomials in the state variables and one parameter, flattened
/// for fast floating-point evaluation.
pub struct CompiledField {
    dim: usize,
    components: Vec<Vec<Term>>,
}

impl CompiledField {
    pub fn new(vars: &[Var], param: &Var, polys: &[Poly]) -> Result<Self> {
        let components = polys
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| {
                        let mut factors = Vec::new();
                        let mut param_exp = 0;
                        for (v, e) in m.factors() {
                            if v == param {
                                param_exp = *e;
                            } else {
                                let j = vars
                                    .iter()
                                    .position(|w| w == v)
                                    .ok_or_else(|| Error::MissingVariable(v.name().to_string()))?;
                                factors.push((j, *e));
                            }
                        }
                        Ok(Term {
                            coef: c.to_complex(),
                            factors,
                            param_exp,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledField {
            dim: vars.len(),
            components,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn eval_into(&self, x: &[Complex64], a: Complex64, out: &mut [Complex64]) {
        for (o, terms) in out.iter_mut().zip(&self.components) {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in terms {
                let mut v = t.coef;
                for &(j, e) in &t.factors {
                    v *= x[j].powu(e);
                }
                if t.param_exp > 0 {
                    v *= a.powu(t.param_exp);
                }
                acc += v;
            }
            *o = acc;
        }
    }

    pub fn eval(&self, x: &[Complex64], a: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.components.len()];
        self.eval_into(x, a, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::sys5;

    #[test]
    fn agrees_with_symbolic_evaluation() {
        let s = sys5();
        let f = CompiledField::new(&s.state_vars, &s.param(), &s.field).unwrap();
        let x: Vec<Complex64> = (0..5).map(|k| Complex64::new(0.3 * k as f64 - 0.5, 0.1 * k as f64)).collect();
        let a = Complex64::new(1.25, -0.5);
        let got = f.eval(&x, a);
        let want = s.vector_field(&x, a).unwrap();
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).norm() < 1e-13);
        }
    }

    #[test]
    fn unknown_variable_rejected() {
        let s = sys5();
        let p = crate::exact::poly("z1 + q7");
        assert!(CompiledField::new(&s.state_vars, &s.param(), &[p]).is_err());
    }
}
