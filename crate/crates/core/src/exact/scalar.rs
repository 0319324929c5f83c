//! Exact arithmetic in the biquadratic field Q(i, √2).
//!
//! An element is stored as four reduced rationals over the basis
//! `1, i, √2, i√2`. The multiplication table follows from `i² = −1` and
//! `(√2)² = 2`; inversion goes through the relative norm down to Q(√2) and
//! then the absolute norm down to Q.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Element `c0 + c1·i + c2·√2 + c3·i·√2` of Q(i, √2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    c: [BigRational; 4],
}

impl Scalar {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational, c3: BigRational) -> Self {
        Scalar {
            c: [c0, c1, c2, c3],
        }
    }

    pub fn zero() -> Self {
        Scalar::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        let mut s = Scalar::zero();
        s.c[1] = BigRational::one();
        s
    }

    pub fn sqrt2() -> Self {
        let mut s = Scalar::zero();
        s.c[2] = BigRational::one();
        s
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            c: [r, BigRational::zero(), BigRational::zero(), BigRational::zero()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n / d`; panics when `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn components(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Returns the rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Field automorphism `i ↦ −i` (fixes √2).
    pub fn conj(&self) -> Self {
        Scalar::new(
            self.c[0].clone(),
            -self.c[1].clone(),
            self.c[2].clone(),
            -self.c[3].clone(),
        )
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x·conj(x) = m + n√2 with m, n rational.
        let x_bar = self.conj();
        let norm = self * &x_bar;
        debug_assert!(norm.c[1].is_zero() && norm.c[3].is_zero());
        let m = &norm.c[0];
        let n = &norm.c[2];
        let two = BigRational::from_integer(BigInt::from(2));
        let abs_norm = m * m - &two * n * n;
        // (m + n√2)^{-1} = (m − n√2) / (m² − 2n²)
        let rel_inv = Scalar::new(
            m / &abs_norm,
            BigRational::zero(),
            -(n / &abs_norm),
            BigRational::zero(),
        );
        Some(&x_bar * &rel_inv)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
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

    /// Square root of a rational, when it lies in Q(i, √2).
    ///
    /// The root with nonnegative real part (or positive imaginary part for
    /// negative radicands) is returned; `None` when `r` is neither a square
    /// nor twice a square up to sign.
    pub fn sqrt_rational(r: &BigRational) -> Option<Scalar> {
        if r.is_zero() {
            return Some(Scalar::zero());
        }
        let mag = r.abs();
        let two = BigRational::from_integer(BigInt::from(2));
        let (root, basis) = if let Some(q) = rational_sqrt(&mag) {
            (q, 0)
        } else if let Some(q) = rational_sqrt(&(&mag / &two)) {
            (q, 2)
        } else {
            return None;
        };
        let mut s = Scalar::zero();
        let idx = if r.is_negative() { basis + 1 } else { basis };
        s.c[idx] = root;
        Some(s)
    }

    pub fn to_complex(&self) -> Complex64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let s2 = std::f64::consts::SQRT_2;
        Complex64::new(f(&self.c[0]) + s2 * f(&self.c[2]), f(&self.c[1]) + s2 * f(&self.c[3]))
    }

    /// Canonical machine form `(c0, c1, c2, c3)`.
    pub fn to_canonical_text(&self) -> String {
        format!(
            "({}, {}, {}, {})",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }

    /// Number of nonzero basis components.
    pub(crate) fn support_len(&self) -> usize {
        self.c.iter().filter(|x| !x.is_zero()).count()
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = r.numer();
    let d = r.denom();
    if n.is_negative() {
        return None;
    }
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(
            &self.c[0] + &rhs.c[0],
            &self.c[1] + &rhs.c[1],
            &self.c[2] + &rhs.c[2],
            &self.c[3] + &rhs.c[3],
        )
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(
            &self.c[0] - &rhs.c[0],
            &self.c[1] - &rhs.c[1],
            &self.c[2] - &rhs.c[2],
            &self.c[3] - &rhs.c[3],
        )
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        // Basis products: i·i = −1, r·r = 2, (ir)(ir) = −2, i·r = ir,
        // i·(ir) = −r, r·(ir) = 2i.
        let mut out: [BigRational; 4] = Default::default();
        for (j, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (idx, factor) = BASIS_PRODUCT[j][k];
                let p = a * b;
                match factor {
                    1 => out[idx] += p,
                    -1 => out[idx] -= p,
                    f => out[idx] += p * BigInt::from(f),
                }
            }
        }
        Scalar { c: out }
    }
}

/// `BASIS_PRODUCT[j][k] = (index, factor)` with `e_j · e_k = factor · e_index`.
const BASIS_PRODUCT: [[(usize, i64); 4]; 4] = [
    [(0, 1), (1, 1), (2, 1), (3, 1)],
    [(1, 1), (0, -1), (3, 1), (2, -1)],
    [(2, 1), (3, 1), (0, 2), (1, 2)],
    [(3, 1), (2, -1), (1, 2), (0, -2)],
];

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(
            -self.c[0].clone(),
            -self.c[1].clone(),
            -self.c[2].clone(),
            -self.c[3].clone(),
        )
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Panics on division by zero; use [`Scalar::checked_div`] for a `Result`.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero in Q(i, sqrt2)")
    }
}

forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Human-readable form, e.g. `3/2 - 1/4*i*sqrt2`. Parseable by
/// [`crate::exact::parse_poly`].
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const UNITS: [&str; 4] = ["", "i", "sqrt2", "i*sqrt2"];
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", UNITS[k])?;
            } else {
                write!(f, "{mag}*{}", UNITS[k])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relations() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        assert_eq!(&Scalar::sqrt2() * &Scalar::sqrt2(), Scalar::from_int(2));
        let x = &(&Scalar::i() * &Scalar::sqrt2()) * &Scalar::from_ratio(1, 4);
        assert_eq!(&x * &x, Scalar::from_ratio(-1, 8));
    }

    #[test]
    fn inverse_of_mixed_element() {
        let x = Scalar::new(
            BigRational::from_integer(3.into()),
            BigRational::new((-1).into(), 2.into()),
            BigRational::from_integer(5.into()),
            BigRational::new(7.into(), 3.into()),
        );
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            Scalar::one().checked_div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn rational_square_roots() {
        let r = BigRational::new((-1).into(), 8.into());
        let s = Scalar::sqrt_rational(&r).unwrap();
        assert_eq!(&s * &s, Scalar::from_rational(r));
        assert_eq!(s.to_canonical_text(), "(0, 0, 0, 1/4)");
        assert!(Scalar::sqrt_rational(&BigRational::from_integer(3.into())).is_none());
    }

    #[test]
    fn display_forms() {
        let x = Scalar::new(
            BigRational::new(3.into(), 2.into()),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::new((-1).into(), 4.into()),
        );
        assert_eq!(x.to_string(), "3/2 - 1/4*i*sqrt2");
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!((-Scalar::i()).to_string(), "-i");
    }
}
