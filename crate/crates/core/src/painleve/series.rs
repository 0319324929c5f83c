use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Monomial, Poly, Scalar, Var};

/// A truncated series `Σ_{k=0}^{N} c_k τ^(e+k)` with `τ² = t`. Coefficients
/// past `τ^(e+N)` are unknown, not zero.
#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries {
    leading: i64,
    coeffs: Vec<Poly>,
}

impl PuiseuxSeries {
    /// `coeffs` must be nonempty; `coeffs[k]` multiplies `τ^(leading+k)`.
    pub fn new(leading: i64, coeffs: Vec<Poly>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one known coefficient");
        PuiseuxSeries { leading, coeffs }
    }

    /// The series of a constant, known through `τ^top`.
    pub fn constant(c: Poly, top: i64) -> Self {
        assert!(top >= 0);
        let mut coeffs = vec![Poly::zero(); top as usize + 1];
        coeffs[0] = c;
        PuiseuxSeries { leading: 0, coeffs }
    }

    pub fn leading_exponent(&self) -> i64 {
        self.leading
    }

    /// Highest τ-exponent whose coefficient is known.
    pub fn top_exponent(&self) -> i64 {
        self.leading + self.coeffs.len() as i64 - 1
    }

    /// Truncation order `N` relative to the leading exponent.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `τ^e`; `None` past the truncation.
    pub fn coeff(&self, e: i64) -> Option<Poly> {
        if e > self.top_exponent() {
            None
        } else if e < self.leading {
            Some(Poly::zero())
        } else {
            Some(self.coeffs[(e - self.leading) as usize].clone())
        }
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Nonzero terms as `(τ-exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.leading + k as i64, c))
    }

    pub fn scale(&self, p: &Poly) -> Self {
        PuiseuxSeries {
            leading: self.leading,
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lead = self.leading.min(other.leading);
        let top = self.top_exponent().min(other.top_exponent());
        let coeffs = (lead..=top)
            .map(|e| &self.coeff(e).expect("known") + &other.coeff(e).expect("known"))
            .collect();
        PuiseuxSeries { leading: lead, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Poly::int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let lead = self.leading + other.leading;
        let top = (self.top_exponent() + other.leading).min(other.top_exponent() + self.leading);
        let n = (top - lead) as usize;
        PuiseuxSeries {
            leading: lead,
            coeffs: mul_trunc(&self.coeffs, &other.coeffs, n),
        }
    }

    /// `d/dt = (1/(2τ)) d/dτ`.
    pub fn d_dt(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&Scalar::from_ratio(self.leading + k as i64, 2)))
            .collect();
        PuiseuxSeries {
            leading: self.leading - 2,
            coeffs,
        }
    }

    /// Drops known coefficients so that the top exponent is at most `top`.
    pub fn truncate_to(&self, top: i64) -> Self {
        let keep = (top - self.leading + 1).clamp(1, self.coeffs.len() as i64) as usize;
        PuiseuxSeries {
            leading: self.leading,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Substitutes `p(z)` with each `z_j` replaced by `series[j]`. Variables
    /// not in `vars` are carried along as coefficients.
    pub fn compose(p: &Poly, vars: &[Var], series: &[PuiseuxSeries]) -> Result<Self> {
        if vars.len() != series.len() {
            return Err(Error::DimensionMismatch {
                expected: vars.len(),
                got: series.len(),
            });
        }
        let top = series.iter().map(|s| s.top_exponent()).max().unwrap_or(0).max(0);
        let mut acc: Option<PuiseuxSeries> = None;
        let mut powers: BTreeMap<(usize, u32), PuiseuxSeries> = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut rest = Vec::new();
            let mut term: Option<PuiseuxSeries> = None;
            for (v, e) in m.factors() {
                match vars.iter().position(|w| w == v) {
                    Some(j) => {
                        let pw = powers
                            .entry((j, *e))
                            .or_insert_with(|| {
                                let mut s = series[j].clone();
                                for _ in 1..*e {
                                    s = s.mul(&series[j]);
                                }
                                s
                            })
                            .clone();
                        term = Some(match term {
                            Some(t) => t.mul(&pw),
                            None => pw,
                        });
                    }
                    None => rest.push((v.clone(), *e)),
                }
            }
            let coef = Poly::term(c.clone(), Monomial::from_factors(rest));
            let term = match term {
                Some(t) => t.scale(&coef),
                None => PuiseuxSeries::constant(coef, top),
            };
            acc = Some(match acc {
                Some(a) => a.add(&term),
                None => term,
            });
        }
        Ok(acc.unwrap_or_else(|| PuiseuxSeries::constant(Poly::zero(), top)))
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            write!(f, "({c})*tau^{e} + ")?;
        }
        write!(f, "O(tau^{})", self.top_exponent() + 1)
    }
}

/// First `n + 1` coefficients of the product of two power series.
pub(crate) fn mul_trunc(a: &[Poly], b: &[Poly], n: usize) -> Vec<Poly> {
    (0..=n)
        .map(|k| {
            let mut acc = Poly::zero();
            for l in 0..=k {
                if let (Some(x), Some(y)) = (a.get(l), b.get(k - l)) {
                    if !x.is_zero() && !y.is_zero() {
                        acc = &acc + &(x * y);
                    }
                }
            }
            acc
        })
        .collect()
}

/// Coefficients `0..=n` of `p(Z; a·τ^shift)` where `Z_j = Σ z[j][k] τ^k`.
/// Variables other than `vars` and `param` are kept symbolic.
pub(crate) fn power_series_of(
    p: &Poly,
    vars: &[Var],
    param: &Var,
    shift: usize,
    z: &[Vec<Poly>],
    n: usize,
) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); n + 1];
    let mut powers: BTreeMap<(usize, u32), Vec<Poly>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (m, e_param) = m.split_off(param);
        let offset = shift * e_param as usize;
        if offset > n {
            continue;
        }
        let mut rest = Vec::new();
        let mut prod: Vec<Poly> = vec![Poly::one()];
        for (v, e) in m.factors() {
            match vars.iter().position(|w| w == v) {
                Some(j) => {
                    let pw = powers.entry((j, *e)).or_insert_with(|| {
                        let mut s = z[j].clone();
                        for _ in 1..*e {
                            s = mul_trunc(&s, &z[j], n);
                        }
                        s
                    });
                    prod = mul_trunc(&prod, pw, n - offset);
                }
                None => rest.push((v.clone(), *e)),
            }
        }
        let mut coef = Poly::term(c.clone(), Monomial::from_factors(rest));
        if e_param > 0 {
            coef = coef.mul_monomial(&Monomial::var(param.clone(), e_param));
        }
        for (k, pk) in prod.iter().enumerate() {
            if k + offset <= n && !pk.is_zero() {
                out[k + offset] = &out[k + offset] + &(pk * &coef);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly;

    fn s(lead: i64, cs: &[&str]) -> PuiseuxSeries {
        PuiseuxSeries::new(lead, cs.iter().map(|c| poly(c)).collect())
    }

    #[test]
    fn truncation_is_not_zero() {
        let x = s(-1, &["u", "0", "v"]);
        assert_eq!(x.coeff(-2), Some(Poly::zero()));
        assert_eq!(x.coeff(1), Some(poly("v")));
        assert_eq!(x.coeff(2), None);
    }

    #[test]
    fn product_bookkeeping() {
        let x = s(-1, &["1", "1", "1"]); // known through τ¹
        let y = s(0, &["1", "2"]); // known through τ¹
        let p = x.mul(&y);
        assert_eq!(p.leading_exponent(), -1);
        assert_eq!(p.top_exponent(), 0);
        assert_eq!(p.coeffs(), &[poly("1"), poly("3")]);
        let q = x.add(&y);
        assert_eq!(q.top_exponent(), 1);
        assert_eq!(q.coeff(0), Some(poly("2")));
    }

    #[test]
    fn time_derivative() {
        // t^(-1/2) = τ^(-1); d/dt → −(1/2) t^(-3/2)
        let x = s(-1, &["1"]);
        let d = x.d_dt();
        assert_eq!(d.leading_exponent(), -3);
        assert_eq!(d.coeff(-3), Some(poly("-1/2")));
        // t = τ²
        let t = s(2, &["1"]);
        assert_eq!(t.d_dt().coeff(0), Some(poly("1")));
    }

    #[test]
    fn compose_matches_power_series() {
        let vars = vec![Var::new("x"), Var::new("y")];
        let p = poly("x^2*y + 3*a*x + y");
        let z = vec![
            vec![poly("1"), poly("u"), poly("0"), poly("2")],
            vec![poly("v"), poly("0"), poly("1"), poly("0")],
        ];
        let direct = power_series_of(&p, &vars, &Var::new("a"), 2, &z, 3);
        let ser: Vec<_> = z.iter().map(|c| PuiseuxSeries::new(0, c.clone())).collect();
        let composed = PuiseuxSeries::compose(&p, &vars, &ser).unwrap();
        // a is a plain coefficient in `compose`, so apply the τ² shift by hand
        let shifted = PuiseuxSeries::compose(&poly("x^2*y + y"), &vars, &ser)
            .unwrap()
            .add(&PuiseuxSeries::new(2, vec![poly("3*a"), poly("3*a*u")]).truncate_to(3));
        assert_eq!(shifted.coeffs(), &direct[..]);
        assert_eq!(composed.coeff(0), Some(poly("2*v + 3*a")));
    }
}
