//! Sparse multivariate polynomials with coefficients in Q(i, √2).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Error;
use crate::exact::Scalar;

/// A named polynomial variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// Power product; factors sorted by variable, exponents strictly positive.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes `v` entirely, returning the stripped monomial and the exponent.
    pub fn split_off(&self, v: &Var) -> (Monomial, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, k)| {
                if w == v {
                    e = *k;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (Monomial(rest), e)
    }

    /// Divides by `v^k`; `None` when the exponent of `v` is below `k`.
    pub fn div_var(&self, v: &Var, k: u32) -> Option<Monomial> {
        let e = self.exponent(v);
        if e < k {
            return None;
        }
        let (rest, _) = self.split_off(v);
        Some(rest.mul(&Monomial::var(v.clone(), e - k)))
    }
}

/// Graded lexicographic order: total degree first, then the exponent of the
/// smallest variable where the two differ (a larger exponent ranks higher).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type Assignment = BTreeMap<Var, Scalar>;

/// Sparse polynomial; never stores a zero coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Scalar::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Poly::constant(Scalar::from_ratio(n, d))
    }

    pub fn var(name: &str) -> Self {
        Poly::term(Scalar::one(), Monomial::var(Var::new(name), 1))
    }

    pub fn from_var(v: &Var) -> Self {
        Poly::term(Scalar::one(), Monomial::var(v.clone(), 1))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self
                .terms
                .get(&Monomial::one())
                .cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: &Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies a map to every coefficient, dropping resulting zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Coefficient-wise `i ↦ −i`.
    pub fn conj(&self) -> Poly {
        self.map_coeffs(Scalar::conj)
    }

    /// Exact evaluation; every variable of `self` must be assigned.
    pub fn eval(&self, assignment: &Assignment) -> Result<Scalar, Error> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.name().to_string()))?;
                t = &t * &x.pow(*e);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation; every variable of `self` must be assigned.
    pub fn eval_complex(&self, assignment: &BTreeMap<Var, Complex64>) -> Result<Complex64, Error> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (v, e) in m.factors() {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.name().to_string()))?;
                t *= x.powu(*e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes scalars for the assigned variables and keeps the rest symbolic.
    pub fn specialize(&self, assignment: &Assignment) -> Poly {
        let map: BTreeMap<Var, Poly> = assignment
            .iter()
            .map(|(v, s)| (v.clone(), Poly::constant(s.clone())))
            .collect();
        self.substitute(&map)
    }

    /// Simultaneous substitution `v ↦ map[v]`; unmapped variables stay.
    pub fn substitute(&self, map: &BTreeMap<Var, Poly>) -> Poly {
        let mut out = Poly::zero();
        let mut power_cache: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut t = Poly::constant(c.clone());
            for (v, e) in m.factors() {
                match map.get(v) {
                    Some(p) => {
                        let pe = power_cache
                            .entry((v.clone(), *e))
                            .or_insert_with(|| p.pow(*e));
                        t = &t * &*pe;
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            let t = t.mul_monomial(&Monomial::from_factors(kept));
            out = &out + &t;
        }
        out
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: &Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let dm = m.div_var(v, 1).expect("exponent checked");
            out.add_term(dm, &(c * &Scalar::from_int(e as i64)));
        }
        out
    }

    /// Coefficients `[p_0, p_1, …]` with `self = Σ p_k · v^k`.
    pub fn coeffs_in(&self, v: &Var) -> Vec<Poly> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            out[e as usize].add_term(rest, c);
        }
        out
    }

    /// Canonical text `coeff * var^e * …` with `(c0, c1, c2, c3)` coefficient
    /// tuples, terms in descending graded-lex order.
    pub fn to_canonical_text(&self) -> String {
        if self.is_zero() {
            return Scalar::zero().to_canonical_text();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.iter().rev() {
            let mut s = c.to_canonical_text();
            for (v, e) in m.factors() {
                s.push_str(&format!(" * {v}^{e}"));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned_poly {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &'a Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);

/// Human-readable form, highest terms first; round-trips through
/// [`crate::exact::parse_poly`].
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let simple = c.support_len() == 1;
            let cs = c.to_string();
            let (neg, body) = if simple {
                match cs.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, cs),
                }
            } else {
                (false, format!("({cs})"))
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut pieces = Vec::new();
            if !(body == "1" && !m.is_one()) {
                pieces.push(body);
            }
            for (v, e) in m.factors() {
                if *e == 1 {
                    pieces.push(v.to_string());
                } else {
                    pieces.push(format!("{v}^{e}"));
                }
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let x = Var::new("x");
        let y = Var::new("y");
        let x2 = Monomial::var(x.clone(), 2);
        let xy = Monomial::from_factors([(x.clone(), 1), (y.clone(), 1)]);
        let y2 = Monomial::var(y.clone(), 2);
        let x1 = Monomial::var(x, 1);
        assert!(x2 > xy && xy > y2 && y2 > x1 && x1 > Monomial::one());
    }

    #[test]
    fn no_stored_zeros() {
        let q = &p("x + y") - &p("x");
        assert_eq!(q, p("y"));
        assert_eq!((&p("x") - &p("x")).num_terms(), 0);
    }

    #[test]
    fn substitution_examples() {
        let mut map = BTreeMap::new();
        map.insert(Var::new("w"), p("u*v"));
        assert_eq!(p("2*w^2").substitute(&map), p("2*u^2*v^2"));
        let q = p("3*x^2*y - i*sqrt2*y + 1/7");
        let id: BTreeMap<Var, Poly> = q.vars().iter().map(|v| (v.clone(), Poly::from_var(v))).collect();
        assert_eq!(q.substitute(&id), q);
    }

    #[test]
    fn partials() {
        let h = p("1/2*(p1^2 + p2^2) + 1/4*q1^4");
        assert_eq!(h.partial(&Var::new("p1")), p("p1"));
        assert!(p("17 + 3*i").partial(&Var::new("x")).is_zero());
    }

    #[test]
    fn eval_missing_variable() {
        let err = p("x*y").eval(&Assignment::from([(Var::new("x"), Scalar::one())]));
        assert!(matches!(err, Err(Error::MissingVariable(v)) if v == "y"));
    }

    #[test]
    fn canonical_text_round_trip() {
        let q = p("-1/2*u^3 + i*sqrt2*v - 3");
        let text = q.to_canonical_text();
        assert_eq!(text, "(-1/2, 0, 0, 0) * u^3 + (0, 0, 0, 1) * v^1 + (-3, 0, 0, 0)");
        assert_eq!(parse_poly(&text).unwrap(), q);
        assert_eq!(parse_poly(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn coefficient_split() {
        let q = p("2*v^2 + u*v - u^10");
        let c = q.coeffs_in(&Var::new("v"));
        assert_eq!(c, vec![p("-u^10"), p("u"), p("2")]);
    }
}
