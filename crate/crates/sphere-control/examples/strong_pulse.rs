//! The strong-pulse limit: a single segment with controls u/δ over time δ
//! approaches multiplication by e^{−i(u₁x + u₂y + u₃z)} at first order.
//!
//! ```bash
//! cargo run --release -p sphere-control --example strong_pulse
//! ```

use sphere_control::poly::SpherePolynomial;
use sphere_control::propagator::convergence::{convergence_study, geometric_deltas};
use sphere_control::propagator::Propagator;
use sphere_control::spectral::WaveFunction;

fn main() {
    let j_max = 16;
    let propagator = Propagator::new(j_max, 2, None);
    let psi0 = WaveFunction::basis_state(j_max, 0, 0);
    let u = [1.0, 0.0, 0.0];
    let zero_phase = SpherePolynomial::zero();

    let deltas = geometric_deltas(1e-1, 1e-4, 13);
    let record = convergence_study(&propagator, &psi0, &zero_phase, u, &deltas).unwrap();
    println!("strong pulse toward e^(-i x) psi0 at band limit {j_max}:");
    for row in &record.rows {
        println!("  delta {:>10.4e}: error {:.4e}", row.delta, row.error);
    }
    println!("fitted slope {:.4} (first-order rate)", record.slope);

    let (state, _) = propagator.three_exponential(&psi0, &zero_phase, u, 1e-4);
    let (target, _) = propagator.limit_target(&psi0, &zero_phase, u);
    println!(
        "at delta = 1e-4 the distance to the limit is {:.3e}",
        state.sub(&target).norm()
    );
}
