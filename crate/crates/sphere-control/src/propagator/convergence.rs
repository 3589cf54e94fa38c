//! Empirical convergence of the conjugated composition toward its limit.
//!
//! For a δ schedule the study records ‖three_exponential(δ) − limit_target‖
//! and fits a log-log slope. At small δ the kick scale |δ|^{−1/2} pushes the
//! conjugated state far beyond the band limit and the projection loss
//! dominates the limit error; such rows are flagged (residual-dominated or
//! no longer decreasing) and excluded from the slope fit, but always kept in
//! the emitted data.

use super::Propagator;
use crate::poly::SpherePolynomial;
use crate::spectral::WaveFunction;

#[derive(Debug, thiserror::Error)]
pub enum ConvergenceError {
    #[error("δ list must be strictly decreasing and positive")]
    BadDeltaList,
    #[error("only {usable} rows survive truncation-floor flagging; at least 3 needed for a fit")]
    TooFewUsableRows { usable: usize },
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub delta: f64,
    pub error: f64,
    /// Accumulated phase-kick projection residual at this δ.
    pub residual: f64,
    /// Excluded from the slope fit (truncation floor reached).
    pub flagged: bool,
}

/// The (δ, error) table with its fitted log-log line.
#[derive(Debug, Clone)]
pub struct ConvergenceRecord {
    pub rows: Vec<ConvergenceRow>,
    pub slope: f64,
    pub intercept: f64,
    pub j_max: u32,
    pub oversample: u32,
    /// Projection residual of the limit target itself.
    pub target_residual: f64,
}

impl ConvergenceRecord {
    /// CSV rows `delta,error,flagged`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta,error,flagged\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{}\n", row.delta, row.error, row.flagged));
        }
        out
    }

    pub fn usable_rows(&self) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(|r| !r.flagged)
    }
}

/// Runs the δ sweep and fits the unflagged rows.
pub fn convergence_study(
    propagator: &Propagator,
    psi0: &WaveFunction,
    phi: &SpherePolynomial,
    u: [f64; 3],
    deltas: &[f64],
) -> Result<ConvergenceRecord, ConvergenceError> {
    if deltas.is_empty()
        || deltas.iter().any(|&d| d <= 0.0 || !d.is_finite())
        || deltas.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(ConvergenceError::BadDeltaList);
    }

    let (target, target_residual) = propagator.limit_target(psi0, phi, u);

    // The per-δ runs are independent; operator construction is read-shared
    // and each run owns its state, so they execute in parallel and are
    // collected in schedule order (aggregation is order-independent).
    let mut rows: Vec<ConvergenceRow> = std::thread::scope(|scope| {
        let handles: Vec<_> = deltas
            .iter()
            .map(|&delta| {
                let target = &target;
                scope.spawn(move || {
                    let (state, diag) = propagator.three_exponential(psi0, phi, u, delta);
                    ConvergenceRow {
                        delta,
                        error: state.sub(target).norm(),
                        residual: diag.kick_residual,
                        flagged: false,
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|handle| handle.join().expect("convergence worker"))
            .collect()
    });

    // Truncation-floor detection: a row is flagged when the projection
    // residual dominates its error, or when the error has stopped
    // decreasing while the residual is non-negligible. Once the floor is
    // reached every smaller δ stays flagged.
    let mut floor_reached = false;
    let mut last_good_error = f64::INFINITY;
    for row in rows.iter_mut() {
        let residual_dominates = row.residual > 0.5 * row.error;
        let stopped_decreasing = row.error >= last_good_error && row.residual > 0.1 * row.error;
        if floor_reached || residual_dominates || stopped_decreasing {
            row.flagged = true;
            floor_reached = floor_reached || residual_dominates || stopped_decreasing;
        } else {
            last_good_error = row.error;
        }
    }

    let usable: Vec<&ConvergenceRow> = rows.iter().filter(|r| !r.flagged).collect();
    if usable.len() < 3 {
        return Err(ConvergenceError::TooFewUsableRows {
            usable: usable.len(),
        });
    }
    let (slope, intercept) = fit_loglog(
        &usable.iter().map(|r| r.delta).collect::<Vec<_>>(),
        &usable.iter().map(|r| r.error).collect::<Vec<_>>(),
    );

    Ok(ConvergenceRecord {
        rows,
        slope,
        intercept,
        j_max: propagator.j_max(),
        oversample: propagator.oversample(),
        target_residual,
    })
}

/// Least-squares line through (ln x, ln y); returns (slope, intercept).
pub fn fit_loglog(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.max(1e-300).ln()).collect();
    let mean_x = lx.iter().sum::<f64>() / n;
    let mean_y = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in lx.iter().zip(&ly) {
        sxx += (a - mean_x) * (a - mean_x);
        sxy += (a - mean_x) * (b - mean_y);
    }
    let slope = sxy / sxx;
    (slope, mean_y - slope * mean_x)
}

/// The default experiment schedule: 13 geometric points from 1e−1 to 1e−4.
pub fn default_delta_schedule() -> Vec<f64> {
    geometric_deltas(1e-1, 1e-4, 13)
}

/// Strictly decreasing geometric schedule from `first` to `last`.
pub fn geometric_deltas(first: f64, last: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && first > last && last > 0.0);
    let ratio = (last / first).powf(1.0 / (count as f64 - 1.0));
    (0..count).map(|i| first * ratio.powi(i as i32)).collect()
}
