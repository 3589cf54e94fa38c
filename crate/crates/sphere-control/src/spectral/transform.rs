//! Dense spherical-harmonic transforms and phase application.

use super::grid::SphereGrid;
use super::harmonics::{basis_dim, flat_index, LegendreTable};
use super::{SpectralError, WaveFunction};
use crate::poly::SpherePolynomial;
use num_complex::Complex64;

/// Forward transform: harmonic coefficients of grid samples.
///
/// Exact for integrands band-limited within the grid design; for anything
/// else the coefficients are the grid-quadrature inner products, which is
/// precisely the discrete L² projection.
pub fn analyze(
    grid: &SphereGrid,
    values: &[Complex64],
    j_max: u32,
) -> Result<WaveFunction, SpectralError> {
    if grid.max_exact_band() < j_max {
        return Err(SpectralError::GridTooSmall {
            requested: j_max,
            supported: grid.max_exact_band(),
        });
    }
    assert_eq!(values.len(), grid.num_points());
    let table = LegendreTable::build(j_max, grid.cos_beta(), grid.sin_beta());
    let n_alpha = grid.n_alpha();
    let two_pi_over_n = 2.0 * std::f64::consts::PI / n_alpha as f64;

    // Azimuthal stage: F[k][m + j_max] = Σ_l f(k, l) e^{−imα_l} · 2π/n_alpha.
    // The phase factors are tabulated once (trig per element would dominate
    // the whole transform at large band limits).
    let m_count = (2 * j_max + 1) as usize;
    let phases = phase_table(grid.alphas(), j_max);
    let mut fourier = vec![Complex64::new(0.0, 0.0); grid.n_beta() * m_count];
    for k in 0..grid.n_beta() {
        for m_slot in 0..m_count {
            let row = &phases[m_slot * n_alpha..(m_slot + 1) * n_alpha];
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..n_alpha {
                // conj: the analysis pairs against e^{−imα}.
                acc += values[grid.index(k, l)] * row[l].conj();
            }
            fourier[k * m_count + m_slot] = acc * two_pi_over_n;
        }
    }

    // Legendre stage: c_{jm} = Σ_k w_k P̄_j^m(x_k) F[k][m].
    let mut coeffs = vec![Complex64::new(0.0, 0.0); basis_dim(j_max)];
    for j in 0..=j_max {
        for m in -(j as i32)..=(j as i32) {
            let m_slot = (m + j_max as i32) as usize;
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..grid.n_beta() {
                // grid.weight already carries the 2π/n_alpha azimuth factor
                // folded into the Fourier stage; divide it back out.
                acc += grid.weight(k) / two_pi_over_n
                    * table.value(j, m, k)
                    * fourier[k * m_count + m_slot];
            }
            coeffs[flat_index(j, m)] = acc;
        }
    }
    Ok(WaveFunction::from_coeffs(j_max, coeffs))
}

/// Inverse transform: grid samples of a coefficient vector.
pub fn synthesize(wf: &WaveFunction, grid: &SphereGrid) -> Vec<Complex64> {
    let j_max = wf.j_max();
    let table = LegendreTable::build(j_max, grid.cos_beta(), grid.sin_beta());
    let m_count = (2 * j_max + 1) as usize;

    // Legendre stage: S[k][m] = Σ_j c_{jm} P̄_j^m(x_k).
    let mut partial = vec![Complex64::new(0.0, 0.0); grid.n_beta() * m_count];
    for j in 0..=j_max {
        for m in -(j as i32)..=(j as i32) {
            let c = wf.coeff(j, m);
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let m_slot = (m + j_max as i32) as usize;
            for k in 0..grid.n_beta() {
                partial[k * m_count + m_slot] += c * table.value(j, m, k);
            }
        }
    }

    // Azimuthal stage.
    let n_alpha = grid.n_alpha();
    let phases = phase_table(grid.alphas(), j_max);
    let mut values = vec![Complex64::new(0.0, 0.0); grid.num_points()];
    for k in 0..grid.n_beta() {
        for m_slot in 0..m_count {
            let s = partial[k * m_count + m_slot];
            if s == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &phases[m_slot * n_alpha..(m_slot + 1) * n_alpha];
            for l in 0..n_alpha {
                values[grid.index(k, l)] += s * row[l];
            }
        }
    }
    values
}

// e^{imα_l} for m ∈ −j_max..=j_max (slot-major), built by recurrence.
fn phase_table(alphas: &[f64], j_max: u32) -> Vec<Complex64> {
    let n_alpha = alphas.len();
    let m_count = (2 * j_max + 1) as usize;
    let mut table = vec![Complex64::new(0.0, 0.0); m_count * n_alpha];
    let unit: Vec<Complex64> = alphas
        .iter()
        .map(|&a| Complex64::from_polar(1.0, a))
        .collect();
    // Start at m = −j_max and multiply up by e^{iα}.
    let mut current: Vec<Complex64> = alphas
        .iter()
        .map(|&a| Complex64::from_polar(1.0, -(j_max as f64) * a))
        .collect();
    for m_slot in 0..m_count {
        table[m_slot * n_alpha..(m_slot + 1) * n_alpha].copy_from_slice(&current);
        if m_slot + 1 < m_count {
            for (c, u) in current.iter_mut().zip(&unit) {
                *c *= *u;
            }
        }
    }
    table
}

/// The phase function of a multiplicative kick e^{i·scale·φ}.
#[derive(Debug, Clone)]
pub enum PhaseFn<'a> {
    /// An exact polynomial phase.
    Poly(&'a SpherePolynomial),
    /// Arbitrary real samples on the application grid.
    Samples(&'a [f64]),
    /// φ(α, β) = factor · α, the (discontinuous) azimuthal profile used by
    /// the eigenfunction-transfer experiments.
    Azimuthal { factor: f64 },
}

impl PhaseFn<'_> {
    pub fn values_on(&self, grid: &SphereGrid) -> Vec<f64> {
        match self {
            PhaseFn::Poly(p) => grid.sample(|point| p.evaluate_unchecked(point)),
            PhaseFn::Samples(values) => {
                assert_eq!(values.len(), grid.num_points());
                values.to_vec()
            }
            PhaseFn::Azimuthal { factor } => {
                let mut out = Vec::with_capacity(grid.num_points());
                for _k in 0..grid.n_beta() {
                    for alpha in grid.alphas() {
                        out.push(factor * alpha);
                    }
                }
                out
            }
        }
    }
}

/// Band-limited projection of e^{i·scale·φ} ψ, with the projection residual.
///
/// The product is synthesized on `grid`, multiplied pointwise, and analyzed
/// back at the band limit of ψ. The residual is the norm lost to the
/// projection (an aliasing estimate); the output never exceeds the input
/// norm.
pub fn apply_phase(
    phase: &PhaseFn<'_>,
    scale: f64,
    psi: &WaveFunction,
    grid: &SphereGrid,
) -> Result<(WaveFunction, f64), SpectralError> {
    if grid.max_exact_band() < psi.j_max() {
        return Err(SpectralError::GridTooSmall {
            requested: psi.j_max(),
            supported: grid.max_exact_band(),
        });
    }
    if scale == 0.0 {
        return Ok((psi.clone(), 0.0));
    }
    let phase_values = phase.values_on(grid);
    let mut values = synthesize(psi, grid);
    for (v, phi) in values.iter_mut().zip(&phase_values) {
        *v *= Complex64::from_polar(1.0, scale * phi);
    }
    let mut projected = analyze(grid, &values, psi.j_max())?;

    let norm_in = psi.norm();
    let norm_out = projected.norm();
    let residual = if norm_out > norm_in {
        // Quadrature aliasing can only inflate the projection; clamp back so
        // the contraction property of a band-limit projection holds.
        projected = projected.scaled(Complex64::new(norm_in / norm_out, 0.0));
        0.0
    } else {
        (norm_in * norm_in - norm_out * norm_out).max(0.0).sqrt()
    };
    Ok((projected, residual))
}
