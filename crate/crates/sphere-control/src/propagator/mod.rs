//! Unitary time evolution under piecewise-constant controls, and the
//! conjugated-pulse compositions whose small-δ limits generate new phase
//! directions.
//!
//! Propagation is by Hermitian eigendecomposition of the assembled
//! Hamiltonian −Δ + V + u·(x, y, z), cached per control vector: exact
//! unitarity at this scale, and the convergence studies reuse few distinct
//! Hamiltonians. Negative durations are legal and labeled: they implement
//! the adjoint (backward-time) evolution that realizes negative saturation
//! weights, and every diagnostic that sees one reports it as nonphysical.

pub mod bch;
pub mod convergence;
pub mod exec;
pub mod transfer;

pub use bch::{bch_matrix_check, BchReport};
pub use convergence::{convergence_study, ConvergenceError, ConvergenceRecord, ConvergenceRow};
pub use exec::{execute_plan, ExecDiagnostics, KickMode};
pub use transfer::{transfer_experiment, TransferError, TransferMode, TransferResult};

use crate::poly::{grad_inner, SpherePolynomial};
use crate::spectral::{
    apply_phase, dipole_matrices, laplacian_diag, poly_operator_matrix, OperatorMatrix, PhaseFn,
    SphereGrid, WaveFunction,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// One piecewise-constant control pulse.
///
/// `duration < 0` is the adjoint (backward-time) segment used by the
/// sign-reversal device; it is mathematically exact and physically
/// idealized, and counted separately in diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlSegment {
    pub duration: f64,
    pub u: [f64; 3],
}

impl ControlSegment {
    pub fn new(duration: f64, u: [f64; 3]) -> Self {
        assert!(duration != 0.0 && duration.is_finite(), "bad duration");
        assert!(u.iter().all(|v| v.is_finite()), "bad control vector");
        ControlSegment { duration, u }
    }
}

/// A step of a schedule: a control segment or an instantaneous phase kick.
pub enum ScheduleStep<'a> {
    Segment(ControlSegment),
    Kick { phase: PhaseFn<'a>, scale: f64 },
}

/// Accumulated evolution diagnostics.
#[derive(Debug, Clone, Default)]
pub struct EvolveDiagnostics {
    /// Sum of the band-limit projection residuals of all phase kicks.
    pub kick_residual: f64,
    /// Largest relative norm drift observed after any control segment.
    pub max_norm_drift: f64,
    /// Number of negative-duration (adjoint, nonphysical) segments.
    pub nonphysical_segments: usize,
}

impl EvolveDiagnostics {
    pub fn absorb(&mut self, other: &EvolveDiagnostics) {
        self.kick_residual += other.kick_residual;
        self.max_norm_drift = self.max_norm_drift.max(other.max_norm_drift);
        self.nonphysical_segments += other.nonphysical_segments;
    }
}

struct EigenPair {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// Evolution engine for a fixed band limit and free potential.
pub struct Propagator {
    j_max: u32,
    oversample: u32,
    laplacian: OperatorMatrix,
    potential_op: Option<OperatorMatrix>,
    // Dipole operators are only needed when controls are nonzero; kick-only
    // experiments at large band limits never pay for them.
    dipoles: OnceLock<(OperatorMatrix, OperatorMatrix, OperatorMatrix)>,
    kick_grid: SphereGrid,
    eigen_cache: Mutex<HashMap<[u64; 3], Arc<EigenPair>>>,
}

impl Propagator {
    /// Builds the operator set at a band limit; `oversample` controls the
    /// phase-kick grid (factor 2 is the default used by the experiments).
    pub fn new(j_max: u32, oversample: u32, potential: Option<&SpherePolynomial>) -> Self {
        let laplacian = laplacian_diag(j_max);
        let potential_op = potential.map(|v| poly_operator_matrix(v, j_max));
        let kick_grid = SphereGrid::new(j_max, oversample.max(1));
        Propagator {
            j_max,
            oversample,
            laplacian,
            potential_op,
            dipoles: OnceLock::new(),
            kick_grid,
            eigen_cache: Mutex::new(HashMap::new()),
        }
    }

    fn dipoles(&self) -> &(OperatorMatrix, OperatorMatrix, OperatorMatrix) {
        self.dipoles.get_or_init(|| dipole_matrices(self.j_max))
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn oversample(&self) -> u32 {
        self.oversample
    }

    pub fn kick_grid(&self) -> &SphereGrid {
        &self.kick_grid
    }

    /// H(u) = −Δ + V + u₁X + u₂Y + u₃Z.
    pub fn hamiltonian(&self, u: [f64; 3]) -> OperatorMatrix {
        if u == [0.0; 3] && self.potential_op.is_none() {
            return self.laplacian.clone();
        }
        let mut h = match &self.potential_op {
            Some(v) => self.laplacian.add_scaled(v, 1.0),
            None => OperatorMatrix::Dense {
                j_max: self.j_max,
                matrix: self.laplacian.to_dense(),
            },
        };
        let dipoles = self.dipoles();
        let parts = [&dipoles.0, &dipoles.1, &dipoles.2];
        for (coeff, op) in u.iter().zip(parts) {
            if *coeff != 0.0 {
                h = h.add_scaled(op, *coeff);
            }
        }
        h
    }

    fn eigen_for(&self, u: [f64; 3]) -> Arc<EigenPair> {
        let key = [u[0].to_bits(), u[1].to_bits(), u[2].to_bits()];
        if let Some(found) = self.eigen_cache.lock().unwrap().get(&key) {
            return Arc::clone(found);
        }
        let h = self.hamiltonian(u).to_dense();
        let eig = h.symmetric_eigen();
        let pair = Arc::new(EigenPair {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        });
        self.eigen_cache
            .lock()
            .unwrap()
            .insert(key, Arc::clone(&pair));
        pair
    }

    /// ψ ↦ e^{−i t H(u)} ψ. Negative t is the adjoint evolution.
    pub fn step(&self, psi: &WaveFunction, u: [f64; 3], t: f64) -> WaveFunction {
        assert_eq!(psi.j_max(), self.j_max);
        if t == 0.0 {
            return psi.clone();
        }
        if u == [0.0; 3] && self.potential_op.is_none() {
            // Free drift is diagonal: phases e^{−i t j(j+1)}.
            let mut out = psi.clone();
            for (index, c) in out.coeffs_mut().iter_mut().enumerate() {
                let j = crate::spectral::index_to_jm(index).j;
                *c *= Complex64::from_polar(1.0, -t * (j * (j + 1)) as f64);
            }
            return out;
        }
        let pair = self.eigen_for(u);
        let v = DVector::from_column_slice(psi.coeffs());
        let modal = pair.eigenvectors.adjoint() * v;
        let evolved = DVector::from_iterator(
            modal.len(),
            modal
                .iter()
                .zip(pair.eigenvalues.iter())
                .map(|(c, &e)| c * Complex64::from_polar(1.0, -t * e)),
        );
        let out = &pair.eigenvectors * evolved;
        WaveFunction::from_coeffs(self.j_max, out.iter().cloned().collect())
    }

    /// Band-limit projection of e^{i·scale·φ} ψ on the kick grid.
    pub fn kick(
        &self,
        psi: &WaveFunction,
        phase: &PhaseFn<'_>,
        scale: f64,
    ) -> (WaveFunction, f64) {
        apply_phase(phase, scale, psi, &self.kick_grid)
            .expect("kick grid is sized for the propagator band limit")
    }

    /// Sequential application of a schedule.
    pub fn evolve(
        &self,
        psi0: &WaveFunction,
        schedule: &[ScheduleStep<'_>],
    ) -> (WaveFunction, EvolveDiagnostics) {
        let mut psi = psi0.clone();
        let mut diag = EvolveDiagnostics::default();
        for step in schedule {
            match step {
                ScheduleStep::Segment(segment) => {
                    assert!(
                        segment.duration != 0.0 && segment.duration.is_finite(),
                        "control segments must have nonzero finite duration"
                    );
                    if segment.duration < 0.0 {
                        diag.nonphysical_segments += 1;
                    }
                    let before = psi.norm();
                    psi = self.step(&psi, segment.u, segment.duration);
                    if before > 0.0 {
                        let drift = (psi.norm() - before).abs() / before;
                        diag.max_norm_drift = diag.max_norm_drift.max(drift);
                    }
                }
                ScheduleStep::Kick { phase, scale } => {
                    let (kicked, residual) = self.kick(&psi, phase, *scale);
                    psi = kicked;
                    diag.kick_residual += residual;
                }
            }
        }
        (psi, diag)
    }

    /// The conjugated pulse composition:
    /// e^{−i|δ|^{−1/2}φ} · e^{−iδ(H₀ + Σ (u_j/δ) W_j)} · e^{+i|δ|^{−1/2}φ} ψ.
    ///
    /// Negative δ runs the middle segment backward (the sign-reversal
    /// device); the kick scale always uses |δ|.
    pub fn three_exponential(
        &self,
        psi0: &WaveFunction,
        phi: &SpherePolynomial,
        u: [f64; 3],
        delta: f64,
    ) -> (WaveFunction, EvolveDiagnostics) {
        assert!(delta != 0.0, "three_exponential needs δ ≠ 0");
        let scale = delta.abs().powf(-0.5);
        let controls = [u[0] / delta, u[1] / delta, u[2] / delta];
        let schedule = [
            ScheduleStep::Kick {
                phase: PhaseFn::Poly(phi),
                scale,
            },
            ScheduleStep::Segment(ControlSegment::new(delta, controls)),
            ScheduleStep::Kick {
                phase: PhaseFn::Poly(phi),
                scale: -scale,
            },
        ];
        self.evolve(psi0, &schedule)
    }

    /// The limit state e^{−i(g(∇φ,∇φ) + u·W)} ψ, with the projection
    /// residual of the single idealized phase application.
    pub fn limit_target(
        &self,
        psi0: &WaveFunction,
        phi: &SpherePolynomial,
        u: [f64; 3],
    ) -> (WaveFunction, f64) {
        let squared_gradient = grad_inner(phi, phi);
        let values: Vec<f64> = {
            let base = self
                .kick_grid
                .sample(|point| squared_gradient.evaluate_unchecked(point));
            let mut out = Vec::with_capacity(base.len());
            let mut idx = 0;
            for k in 0..self.kick_grid.n_beta() {
                for l in 0..self.kick_grid.n_alpha() {
                    let [x, y, z] = self.kick_grid.point(k, l);
                    out.push(base[idx] + u[0] * x + u[1] * y + u[2] * z);
                    idx += 1;
                }
            }
            out
        };
        self.kick(psi0, &PhaseFn::Samples(&values), -1.0)
    }
}

/// Overlap modulus |⟨ψ, target⟩| and the phase-sensitive L² distance
/// ‖ψ − target‖ (the reachability metric; the distance is primary).
pub fn fidelity(psi: &WaveFunction, target: &WaveFunction) -> (f64, f64) {
    assert_eq!(psi.j_max(), target.j_max(), "band limits must match");
    let overlap = psi.inner(target).norm();
    let distance = psi.sub(target).norm();
    (overlap, distance)
}
