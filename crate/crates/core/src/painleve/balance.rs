use crate::error::{Error, Result};
use crate::exact::linalg::{solve_poly_rhs, Matrix};
use crate::exact::{Poly, Scalar, Var};
use crate::painleve::leading::{kowalevski_matrix, LeadingFamily};
use crate::painleve::series::{power_series_of, PuiseuxSeries};
use crate::systems::{SystemDef, SystemId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeParameter {
    pub name: String,
    /// τ-order (relative to the leading term) at which it enters.
    pub order: usize,
    /// Coordinate whose coefficient at that order equals the parameter.
    pub coordinate: String,
}

/// A principal balance `z_k = τ^(−2ν_k) Σ_j c_{k,j} τ^j`, known through
/// `j = order`.
#[derive(Debug, Clone)]
pub struct Balance {
    pub system: SystemId,
    pub epsilon: Option<Scalar>,
    pub order: usize,
    pub weights: Vec<u32>,
    pub var_names: Vec<String>,
    /// `coeffs[k][j] = c_{k,j}`.
    pub coeffs: Vec<Vec<Poly>>,
    pub free_parameters: Vec<FreeParameter>,
}

impl Balance {
    pub fn coefficient(&self, coord: usize, j: usize) -> Option<&Poly> {
        self.coeffs.get(coord)?.get(j)
    }

    /// Each coordinate as a series in τ with its true leading exponent.
    pub fn series(&self) -> Vec<PuiseuxSeries> {
        self.coeffs
            .iter()
            .zip(&self.weights)
            .map(|(c, &nu)| PuiseuxSeries::new(-2 * nu as i64, c.clone()))
            .collect()
    }

    pub fn parameter_names(&self) -> Vec<&str> {
        self.free_parameters.iter().map(|p| p.name.as_str()).collect()
    }

    /// Copy with one coefficient replaced.
    pub fn with_coefficient(&self, coord: usize, j: usize, value: Poly) -> Balance {
        let mut b = self.clone();
        b.coeffs[coord][j] = value;
        b
    }
}

/// A cached product chain for one state monomial `z_{f0} z_{f1} ⋯`:
/// `prefix[m]` holds the coefficients of the product of the first `m + 1`
/// factors.
struct Chain {
    factors: Vec<usize>,
    prefix: Vec<Vec<Poly>>,
}

impl Chain {
    fn new(factors: Vec<usize>) -> Self {
        let prefix = vec![Vec::new(); factors.len()];
        Chain { factors, prefix }
    }

    /// Computes coefficient `k` of every prefix, given `z[·][0..=k]`.
    fn push(&mut self, z: &[Vec<Poly>], k: usize) {
        let first = z[self.factors[0]][k].clone();
        self.prefix[0].push(first);
        for m in 1..self.factors.len() {
            let zf = &z[self.factors[m]];
            let mut acc = Poly::zero();
            for l in 0..=k {
                let (x, y) = (&self.prefix[m - 1][l], &zf[k - l]);
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            self.prefix[m].push(acc);
        }
    }

    fn pop(&mut self) {
        for p in &mut self.prefix {
            p.pop();
        }
    }

    fn coeff(&self, k: usize) -> &Poly {
        &self.prefix[self.factors.len() - 1][k]
    }
}

/// One term `coef · a^e · (chain product)` of a field component.
struct FieldTerm {
    coef: Scalar,
    param_exp: u32,
    chain: Option<usize>,
}

struct Engine {
    chains: Vec<Chain>,
    terms: Vec<Vec<FieldTerm>>,
    param: Var,
    shift: usize,
}

impl Engine {
    fn new(system: &SystemDef) -> Self {
        let param = system.param();
        let mut chains: Vec<Chain> = Vec::new();
        let mut keys: Vec<Vec<usize>> = Vec::new();
        let terms = system
            .field
            .iter()
            .map(|f| {
                f.terms()
                    .map(|(m, c)| {
                        let (m, e) = m.split_off(&param);
                        let mut factors = Vec::new();
                        for (v, k) in m.factors() {
                            let j = system
                                .state_vars
                                .iter()
                                .position(|w| w == v)
                                .expect("field uses state variables and a only");
                            factors.extend(std::iter::repeat_n(j, *k as usize));
                        }
                        let chain = (!factors.is_empty()).then(|| match keys.iter().position(|k| *k == factors) {
                            Some(i) => i,
                            None => {
                                keys.push(factors.clone());
                                chains.push(Chain::new(factors));
                                chains.len() - 1
                            }
                        });
                        FieldTerm {
                            coef: c.clone(),
                            param_exp: e,
                            chain,
                        }
                    })
                    .collect()
            })
            .collect();
        Engine {
            chains,
            terms,
            param,
            shift: 2 * system.param_weight as usize,
        }
    }

    fn push(&mut self, z: &[Vec<Poly>], k: usize) {
        for c in &mut self.chains {
            c.push(z, k);
        }
    }

    fn pop(&mut self) {
        for c in &mut self.chains {
            c.pop();
        }
    }

    /// `2·[f_i(Z; a·τ^shift)]_k` for each component.
    fn field_coeffs(&self, k: usize) -> Vec<Poly> {
        let two = Scalar::from_int(2);
        self.terms
            .iter()
            .map(|terms| {
                let mut acc = Poly::zero();
                for t in terms {
                    let off = self.shift * t.param_exp as usize;
                    if off > k {
                        continue;
                    }
                    let base = match t.chain {
                        Some(c) => self.chains[c].coeff(k - off).clone(),
                        None if off == k => Poly::one(),
                        None => continue,
                    };
                    if base.is_zero() {
                        continue;
                    }
                    let mut term = base.scale(&(&t.coef * &two));
                    if t.param_exp > 0 {
                        term = term.mul_monomial(&crate::exact::Monomial::var(self.param.clone(), t.param_exp));
                    }
                    acc = &acc + &term;
                }
                acc
            })
            .collect()
    }
}

/// Extends a leading family order by order through τ-order `order`,
/// inserting a named free parameter at each resonance. The parameter is
/// normalized so that it equals the coefficient of the first coordinate
/// on which the resonant eigenvector is nonzero.
pub fn extend_balance(system: &SystemDef, family: &LeadingFamily, order: usize) -> Result<Balance> {
    let n = system.dim();
    let l = kowalevski_matrix(system, family)?;
    let mut engine = Engine::new(system);
    let mut z: Vec<Vec<Poly>> = family.c0.iter().map(|c| vec![Poly::constant(c.clone())]).collect();
    engine.push(&z, 0);
    let mut free_parameters = Vec::new();
    let mut names = system.balance_parameters.iter();

    for k in 1..=order {
        for zi in z.iter_mut() {
            zi.push(Poly::zero());
        }
        engine.push(&z, k);
        let rhs = engine.field_coeffs(k);
        engine.pop();

        let m: Matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { Scalar::from_int(k as i64) } else { Scalar::zero() };
                        &d - &l[i][j]
                    })
                    .collect()
            })
            .collect();
        let sol = solve_poly_rhs(&m, &rhs).map_err(|inc| Error::LogTermRequired {
            order: k,
            residual: inc.residual.to_canonical_text(),
        })?;
        let mut c = sol.particular;
        for (idx, ker) in sol.kernel.iter().enumerate() {
            let piv = ker.iter().position(|x| !x.is_zero()).expect("nonzero kernel vector");
            let name = match names.next() {
                Some(nm) => nm.to_string(),
                None => format!("k{k}_{idx}"),
            };
            let shift = (&Poly::var(&name) - &c[piv]).scale(&ker[piv].inv().expect("nonzero pivot"));
            for (ci, kv) in c.iter_mut().zip(ker) {
                if !kv.is_zero() {
                    *ci = &*ci + &shift.scale(kv);
                }
            }
            free_parameters.push(FreeParameter {
                name,
                order: k,
                coordinate: system.state_vars[piv].name().to_string(),
            });
        }
        for (zi, ci) in z.iter_mut().zip(c) {
            *zi.last_mut().expect("pushed") = ci;
        }
        engine.push(&z, k);
    }
    Ok(Balance {
        system: system.id,
        epsilon: family.epsilon.clone(),
        order,
        weights: family.weights.clone(),
        var_names: system.var_names().iter().map(|s| s.to_string()).collect(),
        coeffs: z,
        free_parameters,
    })
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub order: usize,
    /// First nonzero residual as `(order, coordinate, coefficient)`.
    pub first_bad: Option<(usize, String, Poly)>,
}

impl ResidualReport {
    pub fn ok(&self) -> bool {
        self.first_bad.is_none()
    }
}

/// Substitutes the series into `ż − f(z)` using plain series arithmetic in
/// `t` (with `a` as an ordinary coefficient) and reports the first
/// nonzero coefficient through relative order `order`.
pub fn residual_check(system: &SystemDef, balance: &Balance, order: usize) -> Result<ResidualReport> {
    if order > balance.order {
        return Err(Error::InvalidInput(format!(
            "residual order {order} exceeds balance order {}",
            balance.order
        )));
    }
    let series: Vec<PuiseuxSeries> = balance
        .series()
        .iter()
        .map(|s| s.truncate_to(s.leading_exponent() + order as i64))
        .collect();
    let mut first_bad: Option<(usize, String, Poly)> = None;
    for (i, f) in system.field.iter().enumerate() {
        let rhs = PuiseuxSeries::compose(f, &system.state_vars, &series)?;
        let res = series[i].d_dt().sub(&rhs);
        let base = -2 * balance.weights[i] as i64 - 2;
        for rel in 0..=order {
            let Some(c) = res.coeff(base + rel as i64) else { break };
            if !c.is_zero() {
                if first_bad.as_ref().is_none_or(|(o, _, _)| rel < *o) {
                    first_bad = Some((rel, system.state_vars[i].name().to_string(), c));
                }
                break;
            }
        }
    }
    Ok(ResidualReport { order, first_bad })
}

/// Coefficients `0..=order` of `I(Z; a·τ^shift)` for an invariant `I`; the
/// constant-in-t term sits at index `2·weight(I)`.
pub fn invariant_series(system: &SystemDef, balance: &Balance, inv: &Poly) -> Vec<Poly> {
    power_series_of(
        inv,
        &system.state_vars,
        &system.param(),
        2 * system.param_weight as usize,
        &balance.coeffs,
        balance.order,
    )
}
