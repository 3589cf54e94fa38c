//! Builds the chain H₁ ⊂ H₂ ⊂ … generated by the dipole potentials x, y, z,
//! queries memberships with exact certificates, and certifies that every
//! polynomial of degree ≤ n lies in the level-n space.
//!
//! ```bash
//! cargo run -p sphere-control --example saturation_chain
//! ```

use sphere_control::poly::SpherePolynomial;
use sphere_control::saturation::{membership, saturate, verify_pn_subset, Membership};

fn main() {
    let seeds = [
        SpherePolynomial::x(),
        SpherePolynomial::y(),
        SpherePolynomial::z(),
    ];

    let chain = saturate(&seeds, 4, 4).unwrap();
    println!("saturation chain over span{{x, y, z}} with degree cap 4:");
    for space in &chain {
        println!(
            "  H_{}: dimension {:2}   (dropped {} over-cap generators)",
            space.level(),
            space.dimension(),
            space.dropped_generators()
        );
    }

    println!("\nmembership queries against H_2:");
    let h2 = &chain[1];
    for poly in [
        SpherePolynomial::monomial(1, 0, 1),
        SpherePolynomial::monomial(0, 0, 3),
    ] {
        match membership(&poly, h2) {
            Membership::Member(cert) => {
                println!(
                    "  {poly}  is a member; certificate over {} basis vectors",
                    cert.coefficients.len()
                );
                assert_eq!(cert.recombine(h2), poly);
            }
            Membership::NotMember { residual } => {
                println!("  {poly}  is not a member; residual {residual}");
            }
        }
    }

    println!("\npolynomial inclusion at small levels:");
    for n in 2..=5 {
        let report = verify_pn_subset(n).unwrap();
        println!(
            "  n = {n}: {} canonical monomials certified in H_{n} ({} ms), chain dims {:?}",
            report.certified.len(),
            report.elapsed_ms,
            report.chain_dimensions
        );
        assert!(report.all_certified());
    }
}
