//! Truncated spherical-harmonic representation of states and operators.
//!
//! States live in the span of Y_j^m with j ≤ j_max, stored as complex
//! coefficient vectors in j-major order (m running −j..j inside each block).
//! Operators are either diagonal (the Laplacian) or dense Hermitian
//! matrices built by exact quadrature; grids oversample far enough that
//! every matrix element is an exactly integrated polynomial.

pub mod fit;
pub mod grid;
pub mod harmonics;
pub mod operators;
pub mod transform;

pub use fit::{l2_fit_phase, FitError, FittedPhase};
pub use grid::{gauss_legendre, grid_values_to_csv, SphereGrid};
pub use harmonics::{
    basis_dim, eval_harmonic, flat_index, harmonic_cartesian, index_to_jm, HarmonicIndex,
    LegendreTable,
};
pub use operators::{dipole_matrices, laplacian_diag, poly_operator_matrix, OperatorMatrix};
pub use transform::{analyze, apply_phase, synthesize, PhaseFn};

use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("grid supports exact analysis only up to band {supported}, requested {requested}")]
    GridTooSmall { requested: u32, supported: u32 },
    #[error("band limits differ: {left} vs {right}")]
    BandMismatch { left: u32, right: u32 },
    #[error("malformed wave-function record at line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
}

/// A state in the truncated harmonic basis.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    j_max: u32,
    coeffs: Vec<Complex64>,
}

impl WaveFunction {
    pub fn zero(j_max: u32) -> Self {
        WaveFunction {
            j_max,
            coeffs: vec![Complex64::new(0.0, 0.0); basis_dim(j_max)],
        }
    }

    /// The basis state Y_j^m.
    pub fn basis_state(j_max: u32, j: u32, m: i32) -> Self {
        assert!(j <= j_max && m.unsigned_abs() <= j);
        let mut wf = WaveFunction::zero(j_max);
        wf.coeffs[flat_index(j, m)] = Complex64::new(1.0, 0.0);
        wf
    }

    pub fn from_coeffs(j_max: u32, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), basis_dim(j_max));
        WaveFunction { j_max, coeffs }
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, j: u32, m: i32) -> Complex64 {
        self.coeffs[flat_index(j, m)]
    }

    pub fn set_coeff(&mut self, j: u32, m: i32, value: Complex64) {
        self.coeffs[flat_index(j, m)] = value;
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// L² inner product ⟨self, other⟩ (conjugate-linear in self).
    pub fn inner(&self, other: &WaveFunction) -> Complex64 {
        assert_eq!(self.j_max, other.j_max);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, factor: Complex64) -> WaveFunction {
        WaveFunction {
            j_max: self.j_max,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &WaveFunction) -> WaveFunction {
        assert_eq!(self.j_max, other.j_max);
        WaveFunction {
            j_max: self.j_max,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &WaveFunction) -> WaveFunction {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn normalized(&self) -> WaveFunction {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero state");
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    /// Projection onto the band j ≤ new_j_max (or zero-padded extension).
    pub fn with_band(&self, new_j_max: u32) -> WaveFunction {
        let mut out = WaveFunction::zero(new_j_max);
        let shared = self.j_max.min(new_j_max);
        for j in 0..=shared {
            for m in -(j as i32)..=(j as i32) {
                out.coeffs[flat_index(j, m)] = self.coeffs[flat_index(j, m)];
            }
        }
        out
    }

    /// Structured text records: a header line followed by one
    /// `j,m,re,im` line per coefficient.
    pub fn to_records(&self) -> String {
        let mut out = String::from("j,m,re,im\n");
        for (index, c) in self.coeffs.iter().enumerate() {
            let jm = index_to_jm(index);
            out.push_str(&format!("{},{},{},{}\n", jm.j, jm.m, c.re, c.im));
        }
        out
    }

    /// Parses the record form produced by [`WaveFunction::to_records`].
    pub fn from_records(text: &str) -> Result<WaveFunction, SpectralError> {
        let mut entries: Vec<(u32, i32, Complex64)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line == "j,m,re,im" {
                continue;
            }
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(SpectralError::BadRecord {
                    line: lineno + 1,
                    reason: format!("expected 4 fields, found {}", parts.len()),
                });
            }
            let parse = |s: &str, what: &str| -> Result<f64, SpectralError> {
                s.parse().map_err(|_| SpectralError::BadRecord {
                    line: lineno + 1,
                    reason: format!("bad {what}: {s:?}"),
                })
            };
            let j: u32 = parts[0].parse().map_err(|_| SpectralError::BadRecord {
                line: lineno + 1,
                reason: format!("bad degree: {:?}", parts[0]),
            })?;
            let m: i32 = parts[1].parse().map_err(|_| SpectralError::BadRecord {
                line: lineno + 1,
                reason: format!("bad order: {:?}", parts[1]),
            })?;
            if m.unsigned_abs() > j {
                return Err(SpectralError::BadRecord {
                    line: lineno + 1,
                    reason: format!("|m| > j for ({j}, {m})"),
                });
            }
            let re = parse(parts[2], "re")?;
            let im = parse(parts[3], "im")?;
            entries.push((j, m, Complex64::new(re, im)));
        }
        let j_max = entries.iter().map(|&(j, _, _)| j).max().unwrap_or(0);
        let mut wf = WaveFunction::zero(j_max);
        for (j, m, c) in entries {
            wf.coeffs[flat_index(j, m)] = c;
        }
        Ok(wf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_has_unit_norm() {
        let wf = WaveFunction::basis_state(4, 2, -1);
        assert!((wf.norm() - 1.0).abs() < 1e-15);
        assert_eq!(wf.coeff(2, -1), Complex64::new(1.0, 0.0));
        assert_eq!(wf.coeff(2, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn inner_product_is_conjugate_linear_on_the_left() {
        let mut a = WaveFunction::zero(1);
        let mut b = WaveFunction::zero(1);
        a.set_coeff(1, 0, Complex64::new(0.0, 2.0));
        b.set_coeff(1, 0, Complex64::new(3.0, 0.0));
        assert_eq!(a.inner(&b), Complex64::new(0.0, -6.0));
    }

    #[test]
    fn record_round_trip() {
        let mut wf = WaveFunction::zero(3);
        wf.set_coeff(0, 0, Complex64::new(0.25, -1.5));
        wf.set_coeff(3, -2, Complex64::new(1.0 / 3.0, 2.0e-17));
        let text = wf.to_records();
        let back = WaveFunction::from_records(&text).unwrap();
        assert_eq!(back, wf);
    }

    #[test]
    fn from_records_rejects_bad_rows() {
        assert!(WaveFunction::from_records("j,m,re,im\n1,2,0.0,0.0\n").is_err());
        assert!(WaveFunction::from_records("0,0,zero,0\n").is_err());
        assert!(WaveFunction::from_records("0,0,0\n").is_err());
    }

    #[test]
    fn band_change_preserves_shared_coefficients() {
        let mut wf = WaveFunction::zero(2);
        wf.set_coeff(2, 2, Complex64::new(0.5, 0.5));
        wf.set_coeff(1, 0, Complex64::new(-1.0, 0.0));
        let wide = wf.with_band(4);
        let narrow = wide.with_band(1);
        assert_eq!(wide.coeff(2, 2), Complex64::new(0.5, 0.5));
        assert_eq!(narrow.coeff(1, 0), Complex64::new(-1.0, 0.0));
        assert_eq!(narrow.dim(), 4);
    }
}
