//! Least-squares polynomial phase fits in the grid L² inner product.
//!
//! Polynomials of degree ≤ d on the sphere are exactly the harmonics of
//! band ≤ d, and on a grid whose design covers band d those harmonics are
//! orthonormal in the discrete inner product. The normal system is then the
//! identity and the least-squares fit is the plain discrete projection,
//! numerically perfectly conditioned. A grid too small for the requested
//! degree is the ill-conditioned regime and is rejected with the usable
//! rank instead.

use super::grid::SphereGrid;
use super::harmonics::{basis_dim, harmonic_cartesian, index_to_jm};
use super::transform::{analyze, synthesize};
use super::WaveFunction;
use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum FitError {
    #[error(
        "fit grid supports exact projection only up to degree {usable}; requested {requested} \
         (the discrete normal system would be rank-deficient)"
    )]
    GridTooSmall { requested: u32, usable: u32 },
}

/// Best polynomial approximation of a real grid function, held in the
/// harmonic basis (where the fit is computed), with its grid-L² residual.
#[derive(Debug, Clone)]
pub struct FittedPhase {
    pub degree: u32,
    pub coeffs: WaveFunction,
    pub residual: f64,
}

impl FittedPhase {
    /// Real samples of the fitted polynomial on an arbitrary grid.
    pub fn values_on(&self, grid: &SphereGrid) -> Vec<f64> {
        synthesize(&self.coeffs, grid)
            .into_iter()
            .map(|v| v.re)
            .collect()
    }

    /// Cartesian monomial rendering with floating coefficients.
    ///
    /// Intended for display and for hand-off to the exact side at modest
    /// degree; the harmonic form is the numerical source of truth.
    pub fn cartesian(&self) -> Vec<((u32, u32, u32), f64)> {
        let mut acc: std::collections::BTreeMap<(u32, u32, u32), Complex64> =
            std::collections::BTreeMap::new();
        for (index, c) in self.coeffs.coeffs().iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let jm = index_to_jm(index);
            for (exps, coeff) in harmonic_cartesian(jm.j, jm.m) {
                let entry = acc.entry(exps).or_insert(Complex64::new(0.0, 0.0));
                *entry += c * coeff;
            }
        }
        acc.into_iter()
            .map(|(exps, c)| (exps, c.re))
            .filter(|(_, c)| c.abs() > 1e-13)
            .collect()
    }
}

/// Discrete least-squares fit of `target` by a polynomial of degree ≤ d.
pub fn l2_fit_phase(
    grid: &SphereGrid,
    target: &[f64],
    degree: u32,
) -> Result<FittedPhase, FitError> {
    if grid.max_exact_band() < degree {
        return Err(FitError::GridTooSmall {
            requested: degree,
            usable: grid.max_exact_band(),
        });
    }
    let complex_target: Vec<Complex64> =
        target.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let coeffs = analyze(grid, &complex_target, degree)
        .expect("band checked against the grid design above");
    debug_assert_eq!(coeffs.dim(), basis_dim(degree));

    let fit_values = synthesize(&coeffs, grid);
    let mut residual_sq = 0.0;
    for k in 0..grid.n_beta() {
        let w = grid.weight(k);
        for l in 0..grid.n_alpha() {
            let idx = grid.index(k, l);
            let diff = complex_target[idx] - fit_values[idx];
            residual_sq += w * diff.norm_sqr();
        }
    }
    Ok(FittedPhase {
        degree,
        coeffs,
        residual: residual_sq.max(0.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::transform::PhaseFn;

    #[test]
    fn target_inside_the_space_fits_exactly() {
        let grid = SphereGrid::new(8, 2);
        let target = grid.sample(|[_, _, z]| z);
        let fit = l2_fit_phase(&grid, &target, 1).unwrap();
        assert!(fit.residual < 1e-12, "residual {}", fit.residual);
        let values = fit.values_on(&grid);
        for (a, b) in values.iter().zip(&target) {
            assert!((a - b).abs() < 1e-12);
        }
        // Cartesian rendering recovers the plain coordinate z.
        let cart = fit.cartesian();
        assert_eq!(cart.len(), 1);
        assert_eq!(cart[0].0, (0, 0, 1));
        assert!((cart[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_target_with_degree_zero() {
        let grid = SphereGrid::new(4, 2);
        let target = vec![5.0; grid.num_points()];
        let fit = l2_fit_phase(&grid, &target, 0).unwrap();
        assert!(fit.residual < 1e-12);
        let values = fit.values_on(&grid);
        assert!(values.iter().all(|v| (v - 5.0).abs() < 1e-12));
    }

    #[test]
    fn sawtooth_residual_strictly_decreases_with_degree() {
        // The azimuthal sawtooth 2α is discontinuous; nested polynomial
        // spaces must strictly improve the fit.
        let grid = SphereGrid::for_design_degree(40, 40);
        let target = PhaseFn::Azimuthal { factor: 2.0 }.values_on(&grid);
        let mut previous = f64::INFINITY;
        for degree in [0u32, 1, 2, 4, 8, 16] {
            let fit = l2_fit_phase(&grid, &target, degree).unwrap();
            assert!(
                fit.residual < previous,
                "residual did not decrease at degree {degree}: {} vs {previous}",
                fit.residual
            );
            previous = fit.residual;
        }
    }

    #[test]
    fn rejects_rank_deficient_requests() {
        let grid = SphereGrid::new(4, 1);
        let target = vec![0.0; grid.num_points()];
        assert!(matches!(
            l2_fit_phase(&grid, &target, 40),
            Err(FitError::GridTooSmall { requested: 40, .. })
        ));
    }
}
