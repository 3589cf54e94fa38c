//! Property tests for the spectral layer: transform consistency, operator
//! structure and unitary evolution.

use num_complex::Complex64;
use proptest::prelude::*;
use sphere_control::poly::SpherePolynomial;
use sphere_control::propagator::Propagator;
use sphere_control::spectral::{analyze, basis_dim, synthesize, SphereGrid, WaveFunction};

fn state(j_max: u32) -> impl Strategy<Value = WaveFunction> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), basis_dim(j_max))
        .prop_filter_map("needs nonzero norm", move |parts| {
            let coeffs: Vec<Complex64> = parts
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            let wf = WaveFunction::from_coeffs(j_max, coeffs);
            if wf.norm() > 1e-6 {
                Some(wf.normalized())
            } else {
                None
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transform_round_trip_and_parseval(psi in state(8)) {
        let grid = SphereGrid::new(8, 2);
        let values = synthesize(&psi, &grid);
        let back = analyze(&grid, &values, 8).unwrap();
        prop_assert!(back.sub(&psi).norm() < 1e-10);
        prop_assert!((grid.norm(&values) - psi.norm()).abs() < 1e-10);
    }

    #[test]
    fn evolution_is_unitary_and_reversible(
        psi in state(6),
        ux in -2.0f64..2.0,
        uz in -2.0f64..2.0,
        t in 0.01f64..1.0,
    ) {
        let propagator = Propagator::new(6, 2, None);
        let u = [ux, 0.0, uz];
        let forward = propagator.step(&psi, u, t);
        prop_assert!((forward.norm() - 1.0).abs() < 1e-10);
        let back = propagator.step(&forward, u, -t);
        prop_assert!(back.sub(&psi).norm() < 1e-10);
    }

    #[test]
    fn hamiltonian_is_hermitian(ux in -3.0f64..3.0, uy in -3.0f64..3.0, uz in -3.0f64..3.0) {
        let propagator = Propagator::new(5, 2, None);
        let h = propagator.hamiltonian([ux, uy, uz]);
        prop_assert!(h.hermiticity_error() < 1e-12);
    }

    #[test]
    fn group_law_in_time(psi in state(5), s in 0.05f64..0.5, t in 0.05f64..0.5) {
        let propagator = Propagator::new(5, 2, None);
        let u = [0.7, -0.3, 1.1];
        let once = propagator.step(&psi, u, s + t);
        let twice = propagator.step(&propagator.step(&psi, u, t), u, s);
        prop_assert!(once.sub(&twice).norm() < 1e-10);
    }
}

#[test]
fn poly_operator_matches_pointwise_multiplication() {
    // Multiplication operator consistency: applying the matrix of p equals
    // multiplying on the grid and projecting, for band-interior states.
    let j_max = 6;
    let p = SpherePolynomial::monomial(1, 0, 1); // xz, degree 2
    let op = sphere_control::spectral::poly_operator_matrix(&p, j_max);
    let grid = SphereGrid::for_design_degree(2 * j_max + 2, 2 * j_max + 2);
    let psi = WaveFunction::basis_state(j_max, 2, -1);

    let matrix_route = op.apply(&psi);
    let mut values = synthesize(&psi, &grid);
    let samples = grid.sample(|pt| p.evaluate_unchecked(pt));
    for (v, s) in values.iter_mut().zip(&samples) {
        *v *= s;
    }
    let grid_route = analyze(&grid, &values, j_max).unwrap();
    assert!(matrix_route.sub(&grid_route).norm() < 1e-12);
}
