//! Exact algebra over Q(i, √2): scalars, sparse polynomials, and the small
//! amount of linear algebra the balance computations need.

pub mod linalg;
mod parse;
mod poly;
mod scalar;

pub use parse::parse_poly;
pub use poly::{Assignment, Monomial, Poly, Var};
pub use scalar::Scalar;

/// `B² − 4AC` for the quadratic `A·y² + B·y + C`.
pub fn quadratic_discriminant(a: &Poly, b: &Poly, c: &Poly) -> Poly {
    let four_ac = (a * c).scale(&Scalar::from_int(4));
    &(b * b) - &four_ac
}

/// Shorthand for parsing trusted literals; panics on malformed input.
pub(crate) fn poly(s: &str) -> Poly {
    parse_poly(s).unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_trivial() {
        assert_eq!(
            quadratic_discriminant(&Poly::int(1), &Poly::zero(), &Poly::int(-1)),
            Poly::int(4)
        );
    }

    #[test]
    fn discriminant_of_parameter_curves() {
        // In the fiber variable v: A = 2, B = (1/6)(15u⁴ − 8a)u, C = rest.
        let a = poly("2");
        let b = poly("1/6*(15*u^4 - 8*a)*u");
        let c = poly("-39/32*u^10 + 7/6*a*u^6 + 2/9*(a^2 + 9*b1)*u^2 - i*sqrt2*b2");
        let d = quadratic_discriminant(&a, &b, &c);
        let u = Var::new("u");
        assert_eq!(d.degree_in(&u), Some(10));
        assert_eq!(d.coeffs_in(&u)[10], Poly::int(16));

        let a = poly("1");
        let b = poly("2/3*(3*alpha^2 - 2*a)*alpha");
        let c = poly("-3*alpha^6 + 8/3*a*alpha^4 + 4/9*(a^2 + 9*c1)*alpha^2 - 2*i*sqrt2*c2*alpha + c3");
        let d = quadratic_discriminant(&a, &b, &c);
        let al = Var::new("alpha");
        assert_eq!(d.degree_in(&al), Some(6));
        assert_eq!(d.coeffs_in(&al)[6], Poly::int(16));
    }
}
