//! Compiles target phases into pulse/conjugation schedules, checks them
//! statically, serializes them, and executes one to confirm the small-δ
//! limit lands on the idealized phase multiplication.
//!
//! ```bash
//! cargo run --release -p sphere-control --example synthesis_plan
//! ```

use sphere_control::poly::{grad_inner, int, SpherePolynomial};
use sphere_control::propagator::{execute_plan, KickMode, Propagator};
use sphere_control::saturation::{saturate, synthesis_plan, SynthesisPlan};
use sphere_control::spectral::{PhaseFn, WaveFunction};

fn main() {
    let seeds = [
        SpherePolynomial::x(),
        SpherePolynomial::y(),
        SpherePolynomial::z(),
    ];
    let chain = saturate(&seeds, 2, 2).unwrap();

    // The polarization target 4xz needs a pair of conjugate blocks.
    let target = SpherePolynomial::monomial(1, 0, 1).scale(&int(4));
    let plan = synthesis_plan(&target, &chain).unwrap();
    println!("plan for target {target}:");
    print!("{plan}");
    println!("depth {}, statically sound: {}", plan.depth(), plan.is_sound());

    let round_trip = SynthesisPlan::parse(&plan.to_string()).unwrap();
    assert_eq!(round_trip, plan);

    // Execute the plan for 1 - z^2 and compare with the idealized phase.
    let g = grad_inner(&SpherePolynomial::z(), &SpherePolynomial::z());
    let plan_g = synthesis_plan(&g, &chain).unwrap();
    println!("\nexecuting the plan for {g} at decreasing step sizes:");
    let j_max = 48;
    let propagator = Propagator::new(j_max, 2, None);
    let psi0 = WaveFunction::basis_state(j_max, 0, 0);
    let (ideal, _) = propagator.kick(&psi0, &PhaseFn::Poly(&g), 1.0);
    for delta in [1e-1, 1e-2, 1e-3] {
        let (state, diag) = execute_plan(&propagator, &psi0, &plan_g, delta, KickMode::Idealized);
        println!(
            "  delta {delta:8.0e}: |plan - idealized| = {:.3e}   (adjoint segments: {})",
            state.sub(&ideal).norm(),
            diag.evolve.nonphysical_segments
        );
    }
    println!("the positive weight runs one adjoint (backward-time) drift segment");
}
