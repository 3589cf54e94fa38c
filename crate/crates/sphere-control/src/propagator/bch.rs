//! Numeric commutator checks of the multiplication-operator relations.
//!
//! With S = multiplication by φ and H₀ = −Δ on the truncated basis:
//! S commutes with every dipole ([S, W] = 0), the second commutator
//! ad²_S(H₀) acts as multiplication by −2·g(∇φ,∇φ), and the third
//! commutator vanishes. Truncation breaks these identities near the band
//! edge, so the checks run on test states supported in the interior band
//! j ≤ j_max − 3·deg(φ), where every product in the chain is
//! truncation-free.

use crate::poly::{grad_inner, SpherePolynomial};
use crate::spectral::{
    basis_dim, dipole_matrices, index_to_jm, laplacian_diag, poly_operator_matrix,
};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum BchError {
    #[error(
        "band limit {j_max} leaves no interior test band for degree {degree} \
         (need j_max ≥ 3·degree + 1)"
    )]
    InsufficientBand { j_max: u32, degree: u32 },
}

/// Measured deviations of the three commutator relations.
#[derive(Debug, Clone)]
pub struct BchReport {
    pub j_max: u32,
    pub phi: SpherePolynomial,
    /// Largest j of the test states (j_max − 3·deg φ).
    pub interior_band: u32,
    /// max over W ∈ {X, Y, Z} and interior states of ‖[S, W]ψ‖.
    pub max_dipole_commutator: f64,
    /// max over interior states of ‖ad²_S(H₀)ψ + 2·g(∇φ,∇φ)ψ‖.
    pub max_ad2_deviation: f64,
    /// max over interior states of ‖ad³_S(H₀)ψ‖.
    pub max_ad3_norm: f64,
}

impl BchReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_dipole_commutator <= tolerance
            && self.max_ad2_deviation <= tolerance
            && self.max_ad3_norm <= tolerance
    }
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

fn max_interior_column_norm(m: &DMatrix<Complex64>, interior_band: u32) -> f64 {
    let mut max_norm: f64 = 0.0;
    for col in 0..m.ncols() {
        if index_to_jm(col).j <= interior_band {
            max_norm = max_norm.max(m.column(col).norm());
        }
    }
    max_norm
}

/// Verifies the commutator relations for φ at the given band limit.
pub fn bch_matrix_check(phi: &SpherePolynomial, j_max: u32) -> Result<BchReport, BchError> {
    let degree = phi.degree();
    if j_max < 3 * degree + 1 {
        return Err(BchError::InsufficientBand { j_max, degree });
    }
    let interior_band = j_max - 3 * degree;

    let s = poly_operator_matrix(phi, j_max).to_dense();
    let h0 = laplacian_diag(j_max).to_dense();
    let squared_gradient = poly_operator_matrix(&grad_inner(phi, phi), j_max).to_dense();
    let (x_op, y_op, z_op) = dipole_matrices(j_max);

    let mut max_dipole_commutator: f64 = 0.0;
    for w in [x_op.to_dense(), y_op.to_dense(), z_op.to_dense()] {
        let c = commutator(&s, &w);
        max_dipole_commutator =
            max_dipole_commutator.max(max_interior_column_norm(&c, interior_band));
    }

    let ad1 = commutator(&s, &h0);
    let ad2 = commutator(&s, &ad1);
    let ad3 = commutator(&s, &ad2);

    // ad²_S(H₀) = −2·g(∇φ,∇φ) as operators on the interior band.
    let ad2_deviation = &ad2 + &squared_gradient * Complex64::new(2.0, 0.0);
    let max_ad2_deviation = max_interior_column_norm(&ad2_deviation, interior_band);
    let max_ad3_norm = max_interior_column_norm(&ad3, interior_band);

    debug_assert_eq!(s.ncols(), basis_dim(j_max));
    Ok(BchReport {
        j_max,
        phi: phi.clone(),
        interior_band,
        max_dipole_commutator,
        max_ad2_deviation,
        max_ad3_norm,
    })
}
