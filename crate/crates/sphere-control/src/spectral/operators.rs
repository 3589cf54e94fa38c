//! Operators on the truncated harmonic basis.
//!
//! The Laplacian is diagonal with entries j(j+1) (the stored operator is
//! −Δ, positive semidefinite). Multiplication operators (the dipoles x, y,
//! z and general polynomial potentials) are built column by column through
//! exact quadrature: each matrix element is an integral of a polynomial of
//! degree ≤ 2·j_max + deg(p), and the grid is sized to integrate that
//! exactly. One mechanism covers every polynomial, so no coupling-coefficient
//! recurrences are needed.

use super::grid::SphereGrid;
use super::harmonics::{basis_dim, index_to_jm, LegendreTable};
use super::transform::analyze;
use super::WaveFunction;
use crate::poly::SpherePolynomial;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Hermitian operator, stored diagonally when possible.
#[derive(Debug, Clone)]
pub enum OperatorMatrix {
    Diagonal { j_max: u32, entries: Vec<f64> },
    Dense { j_max: u32, matrix: DMatrix<Complex64> },
}

impl OperatorMatrix {
    pub fn j_max(&self) -> u32 {
        match self {
            OperatorMatrix::Diagonal { j_max, .. } | OperatorMatrix::Dense { j_max, .. } => *j_max,
        }
    }

    pub fn dim(&self) -> usize {
        basis_dim(self.j_max())
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match self {
            OperatorMatrix::Diagonal { entries, .. } => {
                if row == col {
                    Complex64::new(entries[row], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            OperatorMatrix::Dense { matrix, .. } => matrix[(row, col)],
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match self {
            OperatorMatrix::Diagonal { entries, .. } => DMatrix::from_diagonal(
                &nalgebra::DVector::from_iterator(
                    entries.len(),
                    entries.iter().map(|&e| Complex64::new(e, 0.0)),
                ),
            ),
            OperatorMatrix::Dense { matrix, .. } => matrix.clone(),
        }
    }

    pub fn apply(&self, psi: &WaveFunction) -> WaveFunction {
        assert_eq!(psi.j_max(), self.j_max());
        match self {
            OperatorMatrix::Diagonal { entries, .. } => {
                let coeffs = psi
                    .coeffs()
                    .iter()
                    .zip(entries)
                    .map(|(c, &e)| c * e)
                    .collect();
                WaveFunction::from_coeffs(psi.j_max(), coeffs)
            }
            OperatorMatrix::Dense { matrix, .. } => {
                let v = nalgebra::DVector::from_column_slice(psi.coeffs());
                let out = matrix * v;
                WaveFunction::from_coeffs(psi.j_max(), out.iter().cloned().collect())
            }
        }
    }

    /// Largest deviation |A_ij − conj(A_ji)|, relative to the largest entry.
    pub fn hermiticity_error(&self) -> f64 {
        match self {
            OperatorMatrix::Diagonal { .. } => 0.0,
            OperatorMatrix::Dense { matrix, .. } => {
                let mut max_dev: f64 = 0.0;
                let mut max_entry: f64 = 0.0;
                for i in 0..matrix.nrows() {
                    for j in 0..matrix.ncols() {
                        max_entry = max_entry.max(matrix[(i, j)].norm());
                        let dev = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                        max_dev = max_dev.max(dev);
                    }
                }
                max_dev / max_entry.max(1.0)
            }
        }
    }

    /// A + factor·B as a dense operator.
    pub fn add_scaled(&self, other: &OperatorMatrix, factor: f64) -> OperatorMatrix {
        assert_eq!(self.j_max(), other.j_max());
        let matrix = self.to_dense() + other.to_dense() * Complex64::new(factor, 0.0);
        OperatorMatrix::Dense {
            j_max: self.j_max(),
            matrix,
        }
    }

    /// Operator norm bound through Hermitian eigenvalues.
    pub fn spectral_norm(&self) -> f64 {
        match self {
            OperatorMatrix::Diagonal { entries, .. } => {
                entries.iter().fold(0.0f64, |acc, e| acc.max(e.abs()))
            }
            OperatorMatrix::Dense { matrix, .. } => {
                let eig = matrix.clone().symmetric_eigen();
                eig.eigenvalues.iter().fold(0.0f64, |acc, e| acc.max(e.abs()))
            }
        }
    }
}

/// The positive-semidefinite operator −Δ, diagonal with entries j(j+1).
pub fn laplacian_diag(j_max: u32) -> OperatorMatrix {
    let mut entries = Vec::with_capacity(basis_dim(j_max));
    for index in 0..basis_dim(j_max) {
        let jm = index_to_jm(index);
        entries.push((jm.j * (jm.j + 1)) as f64);
    }
    OperatorMatrix::Diagonal { j_max, entries }
}

/// Multiplication by a polynomial on the truncated basis, by exact
/// quadrature (grid design covers degree(p) + 2·j_max).
pub fn poly_operator_matrix(p: &SpherePolynomial, j_max: u32) -> OperatorMatrix {
    let degree = p.degree();
    let grid = SphereGrid::for_design_degree(2 * j_max + degree, 2 * j_max + degree);
    let table = LegendreTable::build(j_max, grid.cos_beta(), grid.sin_beta());
    let p_values = grid.sample(|point| p.evaluate_unchecked(point));

    let dim = basis_dim(j_max);
    let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let mut column_values = vec![Complex64::new(0.0, 0.0); grid.num_points()];
    for col in 0..dim {
        let jm = index_to_jm(col);
        for k in 0..grid.n_beta() {
            let legendre = table.value(jm.j, jm.m, k);
            for (l, alpha) in grid.alphas().iter().enumerate() {
                let idx = grid.index(k, l);
                let harmonic = legendre * Complex64::from_polar(1.0, jm.m as f64 * alpha);
                column_values[idx] = p_values[idx] * harmonic;
            }
        }
        let coeffs = analyze(&grid, &column_values, j_max)
            .expect("operator grid is sized for the band limit");
        for (row, value) in coeffs.coeffs().iter().enumerate() {
            matrix[(row, col)] = *value;
        }
    }
    OperatorMatrix::Dense { j_max, matrix }
}

/// The dipole triple (X, Y, Z): multiplication by the coordinates.
pub fn dipole_matrices(j_max: u32) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    assert!(j_max >= 1, "dipole operators need at least band limit 1");
    (
        poly_operator_matrix(&SpherePolynomial::x(), j_max),
        poly_operator_matrix(&SpherePolynomial::y(), j_max),
        poly_operator_matrix(&SpherePolynomial::z(), j_max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{grad_inner, SpherePolynomial};
    use crate::spectral::harmonics::flat_index;

    #[test]
    fn laplacian_entries() {
        let lap = laplacian_diag(3);
        assert_eq!(lap.entry(0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(lap.entry(flat_index(1, 0), flat_index(1, 0)).re, 2.0);
        assert_eq!(lap.entry(flat_index(3, -2), flat_index(3, -2)).re, 12.0);
        let single = laplacian_diag(0);
        assert_eq!(single.dim(), 1);
        assert_eq!(single.entry(0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn identity_from_constant_polynomial() {
        let one = SpherePolynomial::one();
        let op = poly_operator_matrix(&one, 3);
        let dense = op.to_dense();
        for i in 0..op.dim() {
            for j in 0..op.dim() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dense[(i, j)] - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn z_matrix_element_against_quadrature_oracle() {
        // <Y_1^0 | z | Y_0^0> = 1/sqrt(3), forced by z·(4π)^{-1/2} ∝ Y_1^0.
        let (_, _, z_op) = dipole_matrices(2);
        let elem = z_op.entry(flat_index(1, 0), flat_index(0, 0));
        assert!((elem.re - 3.0f64.powf(-0.5)).abs() < 1e-12, "{elem}");
        assert!(elem.im.abs() < 1e-14);
        // Δj = 2 selection rule.
        let forbidden = z_op.entry(flat_index(2, 0), flat_index(0, 0));
        assert!(forbidden.norm() < 1e-12);
    }

    #[test]
    fn dipole_z_and_polynomial_route_coincide() {
        let z_direct = poly_operator_matrix(&SpherePolynomial::z(), 4);
        let (_, _, z_op) = dipole_matrices(4);
        let diff = (z_direct.to_dense() - z_op.to_dense()).norm();
        assert!(diff < 1e-14);
    }

    #[test]
    fn symbolic_laplacian_matches_spectral_diagonal() {
        // Dual route: the exact Laplace–Beltrami of a polynomial, sampled
        // and analyzed, must equal −(the diagonal operator) applied to the
        // analyzed polynomial. Checks the symbolic operator against the
        // eigenvalue route on several non-eigenfunction inputs.
        use crate::poly::laplace_beltrami;
        use crate::spectral::transform::analyze;
        let j_max = 8;
        let grid = SphereGrid::for_design_degree(2 * j_max + 4, 2 * j_max + 4);
        let lap = laplacian_diag(j_max);
        for p in [
            SpherePolynomial::z(),
            SpherePolynomial::monomial(0, 0, 2),
            SpherePolynomial::monomial(1, 1, 0),
            &SpherePolynomial::monomial(2, 0, 1) + &SpherePolynomial::x(),
        ] {
            let to_coeffs = |poly: &SpherePolynomial| {
                let samples: Vec<Complex64> = grid
                    .sample(|pt| poly.evaluate_unchecked(pt))
                    .into_iter()
                    .map(|v| Complex64::new(v, 0.0))
                    .collect();
                analyze(&grid, &samples, j_max).unwrap()
            };
            let symbolic_route = to_coeffs(&laplace_beltrami(&p));
            let spectral_route = lap.apply(&to_coeffs(&p)).scaled(Complex64::new(-1.0, 0.0));
            let diff = symbolic_route.sub(&spectral_route).norm();
            assert!(diff < 1e-10, "laplacian routes disagree for {p}: {diff}");
        }
    }

    #[test]
    fn dipoles_are_hermitian_banded_contractions() {
        let j_max = 6;
        let (x_op, y_op, z_op) = dipole_matrices(j_max);
        for (name, op) in [("x", &x_op), ("y", &y_op), ("z", &z_op)] {
            assert!(op.hermiticity_error() < 1e-12, "{name} not Hermitian");
            assert!(op.spectral_norm() <= 1.0 + 1e-12, "{name} norm too large");
            // Selection rules: Δj = ±1 and the respective Δm.
            let dense = op.to_dense();
            for row in 0..op.dim() {
                for col in 0..op.dim() {
                    let a = index_to_jm(row);
                    let b = index_to_jm(col);
                    let dj = a.j.abs_diff(b.j);
                    let dm = (a.m - b.m).abs();
                    let allowed = dj == 1
                        && match name {
                            "z" => dm == 0,
                            _ => dm == 1,
                        };
                    if !allowed {
                        assert!(
                            dense[(row, col)].norm() < 1e-12,
                            "{name}[{row},{col}] = {} violates selection rules",
                            dense[(row, col)]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn z_squared_agrees_with_z_composed_on_interior_block() {
        let j_max = 5;
        let z2 = poly_operator_matrix(&SpherePolynomial::monomial(0, 0, 2), j_max);
        let (_, _, z_op) = dipole_matrices(j_max);
        let z_dense = z_op.to_dense();
        let composed = &z_dense * &z_dense;
        let direct = z2.to_dense();
        // Multiplication by z raises the band by one, so the composition is
        // truncation-exact only away from the band edge.
        for row in 0..z2.dim() {
            for col in 0..z2.dim() {
                let a = index_to_jm(row);
                let b = index_to_jm(col);
                if a.j < j_max && b.j < j_max {
                    assert!(
                        (composed[(row, col)] - direct[(row, col)]).norm() < 1e-10,
                        "interior mismatch at ({row}, {col})"
                    );
                }
            }
        }
    }

    #[test]
    fn triangle_consistency_one_minus_z_squared() {
        let j_max = 5;
        let g = grad_inner(&SpherePolynomial::z(), &SpherePolynomial::z());
        let g_op = poly_operator_matrix(&g, j_max);
        let (_, _, z_op) = dipole_matrices(j_max);
        let z_dense = z_op.to_dense();
        let expected = DMatrix::identity(g_op.dim(), g_op.dim()) - &z_dense * &z_dense;
        let direct = g_op.to_dense();
        for row in 0..g_op.dim() {
            for col in 0..g_op.dim() {
                let a = index_to_jm(row);
                let b = index_to_jm(col);
                if a.j < j_max && b.j < j_max {
                    assert!((expected[(row, col)] - direct[(row, col)]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn diagonal_apply_matches_dense_apply() {
        let lap = laplacian_diag(4);
        let dense = OperatorMatrix::Dense {
            j_max: 4,
            matrix: lap.to_dense(),
        };
        let psi = WaveFunction::basis_state(4, 3, 1);
        let a = lap.apply(&psi);
        let b = dense.apply(&psi);
        assert!(a.sub(&b).norm() < 1e-14);
        assert_eq!(a.coeff(3, 1).re, 12.0);
    }

    #[test]
    fn scaled_sum_assembles() {
        let lap = laplacian_diag(2);
        let (_, _, z_op) = dipole_matrices(2);
        let h = lap.add_scaled(&z_op, 2.0);
        let expected = h.entry(flat_index(1, 0), flat_index(0, 0));
        let direct = z_op.entry(flat_index(1, 0), flat_index(0, 0));
        assert!((expected - direct * Complex64::new(2.0, 0.0)).norm() < 1e-13);
    }
}
