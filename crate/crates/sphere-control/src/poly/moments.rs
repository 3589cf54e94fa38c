//! Exact surface integrals of monomials over S².
//!
//! ∫_{S²} x^a y^b z^c dσ vanishes when any exponent is odd; for even
//! exponents it equals 4π (a−1)!! (b−1)!! (c−1)!! / (a+b+c+1)!!. Results are
//! returned as the exact rational multiple of π, so the quadrature-exactness
//! suite can compare grid sums against closed forms.

use super::{Rational, SpherePolynomial};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// ∫_{S²} x^a y^b z^c dσ as a rational multiple of π.
pub fn monomial_moment(a: u32, b: u32, c: u32) -> Rational {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return Rational::zero();
    }
    let numer = BigInt::from(4) * double_factorial(a as i64 - 1) * double_factorial(b as i64 - 1)
        * double_factorial(c as i64 - 1);
    let denom = double_factorial((a + b + c) as i64 + 1);
    Rational::new(numer, denom)
}

/// ∫_{S²} p dσ as a rational multiple of π.
pub fn integral_over_sphere(p: &SpherePolynomial) -> Rational {
    let mut acc = Rational::zero();
    for (m, coeff) in p.terms() {
        acc += coeff.clone() * monomial_moment(m.a, m.b, m.c);
    }
    acc
}

fn double_factorial(n: i64) -> BigInt {
    // (−1)!! = 1 by convention.
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn surface_area_is_four_pi() {
        assert_eq!(monomial_moment(0, 0, 0), int(4));
    }

    #[test]
    fn second_moment_of_z() {
        assert_eq!(monomial_moment(0, 0, 2), rat(4, 3));
    }

    #[test]
    fn odd_moments_vanish() {
        assert_eq!(monomial_moment(1, 0, 0), int(0));
        assert_eq!(monomial_moment(2, 1, 0), int(0));
        assert_eq!(monomial_moment(0, 3, 2), int(0));
    }

    #[test]
    fn moments_are_permutation_symmetric() {
        assert_eq!(monomial_moment(2, 4, 0), monomial_moment(4, 0, 2));
        assert_eq!(monomial_moment(2, 2, 2), monomial_moment(2, 2, 2));
    }

    #[test]
    fn relation_integrates_to_surface_area() {
        // ∫ (x² + y² + z²) = ∫ 1 = 4π, and canonicalization agrees.
        let p = SpherePolynomial::from_raw_terms([
            ((2, 0, 0), int(1)),
            ((0, 2, 0), int(1)),
            ((0, 0, 2), int(1)),
        ]);
        assert_eq!(integral_over_sphere(&p), int(4));
        // Direct sum of the three raw moments gives the same value.
        let direct = monomial_moment(2, 0, 0) + monomial_moment(0, 2, 0) + monomial_moment(0, 0, 2);
        assert_eq!(direct, int(4));
    }

    #[test]
    fn canonical_integral_matches_raw_route() {
        // z⁴ reduces to a polynomial in x, y; its integral must match the
        // closed form for the raw monomial, 4π·3!!/5!! = 4π/5.
        let p = SpherePolynomial::monomial(0, 0, 4);
        assert_eq!(integral_over_sphere(&p), rat(4, 5));
        assert_eq!(monomial_moment(0, 0, 4), rat(4, 5));
    }
}
