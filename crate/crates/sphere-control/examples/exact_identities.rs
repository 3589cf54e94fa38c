//! Exact quotient-ring algebra on S²: gradients, the squared-gradient form,
//! the Laplacian and the commutator identities, all with rational equality.
//!
//! ```bash
//! cargo run -p sphere-control --example exact_identities
//! ```

use sphere_control::poly::{
    ad2_h0, ad3_h0, grad_inner, int, laplace_beltrami, tangential_gradient, SpherePolynomial,
};

fn main() {
    let x = SpherePolynomial::x();
    let y = SpherePolynomial::y();
    let z = SpherePolynomial::z();

    println!("quotient ring: polynomials modulo x^2 + y^2 + z^2 = 1");
    let relation = SpherePolynomial::from_raw_terms([
        ((2, 0, 0), int(1)),
        ((0, 2, 0), int(1)),
        ((0, 0, 2), int(1)),
    ]);
    println!("  x^2 + y^2 + z^2      -> {relation}");
    println!("  z^3 - z              -> {}", {
        
        SpherePolynomial::from_raw_terms([((0, 0, 3), int(1)), ((0, 0, 1), int(-1))])
    });

    println!("\ntangential gradients (projection of the ambient gradient):");
    let grad_z = tangential_gradient(&z);
    println!(
        "  grad z               -> ({}, {}, {})",
        grad_z.components[0], grad_z.components[1], grad_z.components[2]
    );
    assert!(grad_z.is_tangent());

    println!("\nsquared-gradient identities:");
    let g_zz = grad_inner(&z, &z);
    println!("  g(grad z, grad z)    -> {g_zz}");
    let sum = &(&grad_inner(&x, &x) + &grad_inner(&y, &y)) + &grad_inner(&z, &z);
    println!("  sum over coordinates -> {sum}");
    let minus = &x - &z;
    let plus = &x + &z;
    let polarization = &grad_inner(&minus, &minus) - &grad_inner(&plus, &plus);
    println!("  g(x-z)^2 - g(x+z)^2  -> {polarization}");
    assert_eq!(polarization, SpherePolynomial::monomial(1, 0, 1).scale(&int(4)));

    println!("\nLaplace-Beltrami on low harmonics:");
    println!("  lap(1)               -> {}", laplace_beltrami(&SpherePolynomial::one()));
    println!("  lap(z)               -> {}", laplace_beltrami(&z));
    println!(
        "  lap(z^2)             -> {}",
        laplace_beltrami(&SpherePolynomial::monomial(0, 0, 2))
    );

    println!("\ncommutators with the kinetic operator (S = multiplication by phi):");
    let ad2 = ad2_h0(&z, &SpherePolynomial::one());
    println!("  ad_z^2(-lap) 1       -> {ad2}   (equals -2 g(grad z, grad z))");
    assert_eq!(ad2, g_zz.scale(&int(-2)));
    let ad3 = ad3_h0(&(&x + &y), &z);
    println!("  ad_(x+y)^3(-lap) z   -> {ad3}   (multiplications commute)");
    assert!(ad3.is_zero());

    println!("\nall identities hold with exact rational equality");
}
