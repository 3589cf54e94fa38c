//! Least-squares polynomial fits of phase profiles in the grid L² inner
//! product, including the discontinuous azimuthal sawtooth.
//!
//! ```bash
//! cargo run -p sphere-control --example phase_fit
//! ```

use sphere_control::spectral::{l2_fit_phase, PhaseFn, SphereGrid};

fn main() {
    // A target already inside the space fits exactly.
    let grid = SphereGrid::for_design_degree(80, 80);
    let z_values = grid.sample(|[_, _, z]| z);
    let fit = l2_fit_phase(&grid, &z_values, 1).unwrap();
    println!("target z at degree 1: residual {:.3e}", fit.residual);
    println!("  cartesian form: {:?}", fit.cartesian());

    // The sawtooth 2α is discontinuous; the residual decays slowly but
    // strictly with the degree.
    let sawtooth = PhaseFn::Azimuthal { factor: 2.0 }.values_on(&grid);
    println!("\ntarget 2*alpha (sawtooth):");
    println!("{:>8}  {:>12}", "degree", "L2 residual");
    for degree in [0u32, 1, 2, 4, 8, 16, 32] {
        let fit = l2_fit_phase(&grid, &sawtooth, degree).unwrap();
        println!("{degree:>8}  {:>12.6}", fit.residual);
    }

    // Asking for more degrees than the grid resolves is the rank-deficient
    // regime and is refused rather than silently solved.
    let tiny = SphereGrid::new(4, 1);
    let target = tiny.sample(|[x, _, _]| x);
    match l2_fit_phase(&tiny, &target, 40) {
        Err(err) => println!("\ndegree 40 on a band-4 grid: {err}"),
        Ok(_) => unreachable!("the rank check must reject this"),
    }
}
