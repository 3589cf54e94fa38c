//! Differential operators of S² on canonical polynomials.
//!
//! The tangential gradient projects the ambient gradient onto the tangent
//! planes, the squared-gradient form g(∇p, ∇q) is the plain ℝ³ scalar
//! product of two such fields, and the Laplace–Beltrami operator acts
//! through the homogeneous decomposition of an ambient representative.
//! All of it is exact; every operator is representative-independent even
//! though partial derivatives are taken on one specific representative
//! (a property the test suite checks rather than assumes).

use super::{int, rat, Axis, Rational, SpherePolynomial};
use num_traits::Zero;

/// A polynomial vector field tangent to the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentField {
    pub components: [SpherePolynomial; 3],
}

impl TangentField {
    /// Pointwise tangency: x·V₁ + y·V₂ + z·V₃ must vanish identically.
    pub fn is_tangent(&self) -> bool {
        let mut acc = SpherePolynomial::zero();
        for (axis, component) in Axis::ALL.iter().zip(&self.components) {
            acc = &acc + &(&SpherePolynomial::var(*axis) * component);
        }
        acc.is_zero()
    }
}

/// Tangential (Riemannian) gradient of p on S².
///
/// Component i is Σ_j ∂p/∂x_j (δ_ij − x_i x_j), i.e. ∂p/∂x_i − x_i (x·∇p).
pub fn tangential_gradient(p: &SpherePolynomial) -> TangentField {
    let partials = [p.partial(Axis::X), p.partial(Axis::Y), p.partial(Axis::Z)];
    let mut radial = SpherePolynomial::zero();
    for (axis, dp) in Axis::ALL.iter().zip(&partials) {
        radial = &radial + &(&SpherePolynomial::var(*axis) * dp);
    }
    let components = [
        &partials[0] - &(&SpherePolynomial::x() * &radial),
        &partials[1] - &(&SpherePolynomial::y() * &radial),
        &partials[2] - &(&SpherePolynomial::z() * &radial),
    ];
    TangentField { components }
}

/// The first fundamental form applied to two tangential gradients,
/// g(∇p, ∇q), computed as the ℝ³ scalar product of the projected fields.
///
/// Symmetric and bilinear; `grad_inner(p, p)` is the squared-gradient
/// quantity that drives the saturation construction.
pub fn grad_inner(p: &SpherePolynomial, q: &SpherePolynomial) -> SpherePolynomial {
    let gp = tangential_gradient(p);
    let gq = tangential_gradient(q);
    let mut acc = SpherePolynomial::zero();
    for i in 0..3 {
        acc = &acc + &(&gp.components[i] * &gq.components[i]);
    }
    acc
}

/// Laplace–Beltrami operator of S² (the geometer's sign: Δz = −2z).
///
/// Splits a representative into ambient-homogeneous components P_n and maps
/// each to Δ_ambient P_n − n(n+1) P_n; on the sphere this is exactly the
/// surface Laplacian of the restriction, independent of the representative.
pub fn laplace_beltrami(p: &SpherePolynomial) -> SpherePolynomial {
    let mut out = SpherePolynomial::zero();
    let by_degree = homogeneous_components(p);
    for (n, component) in by_degree {
        let ambient = &(&component.partial(Axis::X).partial(Axis::X)
            + &component.partial(Axis::Y).partial(Axis::Y))
            + &component.partial(Axis::Z).partial(Axis::Z);
        let eigen = component.scale(&int(-(n as i64) * (n as i64 + 1)));
        out = &(&out + &ambient) + &eigen;
    }
    out
}

type RawTerms = Vec<((u32, u32, u32), Rational)>;

fn homogeneous_components(p: &SpherePolynomial) -> Vec<(u32, SpherePolynomial)> {
    let mut buckets: std::collections::BTreeMap<u32, RawTerms> = std::collections::BTreeMap::new();
    for (m, c) in p.terms() {
        buckets
            .entry(m.degree())
            .or_default()
            .push(((m.a, m.b, m.c), c.clone()));
    }
    buckets
        .into_iter()
        .map(|(n, terms)| (n, SpherePolynomial::from_raw_terms(terms)))
        .collect()
}

/// Second commutator of the multiplication operator φ with H₀ = −Δ,
/// applied to h:  [φ, [φ, −Δ]] h = −(Δ(φ²h) − 2φ Δ(φh) + φ² Δh).
///
/// As an operator identity this is multiplication by −2 g(∇φ, ∇φ), which
/// the identity suite verifies term for term.
pub fn ad2_h0(phi: &SpherePolynomial, h: &SpherePolynomial) -> SpherePolynomial {
    let phi2 = phi * phi;
    let inner = &(&laplace_beltrami(&(&phi2 * h))
        - &(phi * &laplace_beltrami(&(phi * h))).scale(&int(2)))
        + &(&phi2 * &laplace_beltrami(h));
    -&inner
}

/// Third commutator [φ, ad²_φ(−Δ)] applied to h.
///
/// Identically zero, because the second commutator is a multiplication
/// operator and multiplications commute.
pub fn ad3_h0(phi: &SpherePolynomial, h: &SpherePolynomial) -> SpherePolynomial {
    &(phi * &ad2_h0(phi, h)) - &ad2_h0(phi, &(phi * h))
}

/// Coefficient of cⁿ in the formal expansion of e^{−icφ} Δ(e^{icφ} ψ).
///
/// Concretely Σ_{k+l=n} (−1)^l / (k! l!) · φ^l Δ(φ^k ψ), with the factor iⁿ
/// kept out so the result stays a real polynomial. The n = 0, 1, 2 terms
/// reproduce Δψ, then Δφ·ψ + 2g(∇φ,∇ψ), then g(∇φ,∇φ)ψ (which the iⁿ
/// factor turns into −c² g(∇φ,∇φ)ψ in the full expansion), and all higher
/// terms vanish: the conjugation expansion behind the conjugated-pulse
/// limit, checked exactly by the identity suite.
pub fn phase_conjugation_term(
    n: u32,
    phi: &SpherePolynomial,
    psi: &SpherePolynomial,
) -> SpherePolynomial {
    let mut acc = SpherePolynomial::zero();
    for k in 0..=n {
        let l = n - k;
        let mut weight = Rational::zero();
        weight += rat(1, (factorial(k) * factorial(l)) as i64);
        if l % 2 == 1 {
            weight = -weight;
        }
        let term = &phi.pow(l) * &laplace_beltrami(&(&phi.pow(k) * psi));
        acc = &acc + &term.scale(&weight);
    }
    acc
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product::<u64>().max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat, Monomial, SpherePolynomial};

    fn x() -> SpherePolynomial {
        SpherePolynomial::x()
    }
    fn y() -> SpherePolynomial {
        SpherePolynomial::y()
    }
    fn z() -> SpherePolynomial {
        SpherePolynomial::z()
    }

    #[test]
    fn gradient_of_z_matches_case_table() {
        let g = tangential_gradient(&z());
        assert_eq!(g.components[0], -&(&x() * &z()));
        assert_eq!(g.components[1], -&(&y() * &z()));
        assert_eq!(g.components[2], &SpherePolynomial::one() - &(&z() * &z()));
        assert!(g.is_tangent());
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = tangential_gradient(&SpherePolynomial::one());
        assert!(g.components.iter().all(SpherePolynomial::is_zero));
    }

    #[test]
    fn gradient_of_x_plus_z() {
        // (1 − x² − xz, −xy − yz, −xz + 1 − z²)
        let g = tangential_gradient(&(&x() + &z()));
        let one = SpherePolynomial::one();
        assert_eq!(g.components[0], &(&one - &(&x() * &x())) - &(&x() * &z()));
        assert_eq!(g.components[1], -&(&(&x() * &y()) + &(&y() * &z())));
        assert_eq!(g.components[2], &(&one - &(&z() * &z())) - &(&x() * &z()));
    }

    #[test]
    fn squared_gradient_of_z() {
        let g = grad_inner(&z(), &z());
        assert_eq!(g, &SpherePolynomial::one() - &(&z() * &z()));
    }

    #[test]
    fn squared_gradients_of_coordinates_sum_to_two() {
        let sum = &(&grad_inner(&x(), &x()) + &grad_inner(&y(), &y())) + &grad_inner(&z(), &z());
        assert_eq!(sum, SpherePolynomial::constant(int(2)));
    }

    #[test]
    fn polarization_difference_is_4xz() {
        let minus = &x() - &z();
        let plus = &x() + &z();
        let diff = &grad_inner(&minus, &minus) - &grad_inner(&plus, &plus);
        assert_eq!(diff, SpherePolynomial::monomial(1, 0, 1).scale(&int(4)));
    }

    #[test]
    fn laplacian_of_constant_and_z() {
        assert!(laplace_beltrami(&SpherePolynomial::one()).is_zero());
        assert_eq!(laplace_beltrami(&z()), z().scale(&int(-2)));
    }

    #[test]
    fn laplacian_of_z_squared() {
        // z² = (z² − 1/3) + 1/3 with the first part a degree-2 eigenfunction:
        // Δ z² = 2 − 6z².
        let z2 = SpherePolynomial::monomial(0, 0, 2);
        let expected = SpherePolynomial::from_raw_terms([((0, 0, 0), int(2)), ((0, 0, 2), int(-6))]);
        assert_eq!(laplace_beltrami(&z2), expected);
    }

    #[test]
    fn leibniz_rule_holds() {
        let p = SpherePolynomial::from_raw_terms([((1, 1, 0), rat(2, 3)), ((0, 0, 1), int(1))]);
        let q = SpherePolynomial::from_raw_terms([((2, 0, 1), int(1)), ((0, 1, 0), rat(-1, 2))]);
        let lhs = laplace_beltrami(&(&p * &q));
        let rhs = &(&(&p * &laplace_beltrami(&q)) + &(&q * &laplace_beltrami(&p)))
            + &grad_inner(&p, &q).scale(&int(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ad2_is_minus_twice_squared_gradient() {
        let one = SpherePolynomial::one();
        // (φ=z, h=1) → −2(1−z²)
        assert_eq!(
            ad2_h0(&z(), &one),
            grad_inner(&z(), &z()).scale(&int(-2))
        );
        // (φ=1, h arbitrary) → 0
        assert!(ad2_h0(&one, &SpherePolynomial::monomial(1, 2, 1)).is_zero());
        // (φ=x, h=y) → −2(1−x²)y
        let expected = &(&grad_inner(&x(), &x()) * &y()).scale(&int(-2)) + &SpherePolynomial::zero();
        assert_eq!(ad2_h0(&x(), &y()), expected);
    }

    #[test]
    fn ad3_vanishes() {
        assert!(ad3_h0(&z(), &SpherePolynomial::one()).is_zero());
        assert!(ad3_h0(&(&x() + &y()), &z()).is_zero());
        assert!(ad3_h0(&SpherePolynomial::one(), &x()).is_zero());
    }

    #[test]
    fn conjugation_expansion_coefficients() {
        let phi = SpherePolynomial::from_raw_terms([((1, 0, 1), int(1)), ((0, 2, 0), rat(1, 3))]);
        let psi = SpherePolynomial::from_raw_terms([((0, 1, 1), int(2)), ((1, 0, 0), int(-1))]);

        assert_eq!(phase_conjugation_term(0, &phi, &psi), laplace_beltrami(&psi));

        let order_one = &(&laplace_beltrami(&phi) * &psi) + &grad_inner(&phi, &psi).scale(&int(2));
        assert_eq!(phase_conjugation_term(1, &phi, &psi), order_one);

        let order_two = &grad_inner(&phi, &phi) * &psi;
        assert_eq!(phase_conjugation_term(2, &phi, &psi), order_two);

        assert!(phase_conjugation_term(3, &phi, &psi).is_zero());
        assert!(phase_conjugation_term(4, &phi, &psi).is_zero());
    }

    #[test]
    fn squared_gradient_degree_bound() {
        let p = SpherePolynomial::from_raw_terms([((2, 1, 1), int(5)), ((1, 0, 0), int(1))]);
        assert!(grad_inner(&p, &p).degree() <= 2 * p.degree());
    }

    #[test]
    fn gradient_ignores_representative() {
        // p and p + (x²+y²+z²−1)·q define the same function on the sphere;
        // running the operators on the dirty representative (reducing only
        // at the end) must reproduce the canonical-route results.
        use crate::poly::raw::RawPoly;
        let p = SpherePolynomial::from_raw_terms([((1, 1, 1), int(1)), ((2, 0, 0), rat(1, 2))]);
        let q = RawPoly::from_terms([((0, 1, 1), int(3)), ((1, 0, 0), int(-2))]);
        let dirty = RawPoly::from_canonical(&p).add(&RawPoly::sphere_relation().mul(&q));

        assert_eq!(dirty.reduce(), p);
        assert_eq!(
            dirty.tangential_gradient_reduced(),
            tangential_gradient(&p).components
        );
        assert_eq!(dirty.laplace_beltrami_reduced(), laplace_beltrami(&p));
        let _ = Monomial::new(0, 0, 0);
    }
}
