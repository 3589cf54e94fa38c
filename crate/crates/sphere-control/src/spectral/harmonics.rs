//! Complex spherical harmonics in the Condon–Shortley convention.
//!
//! Y_j^m(β, α) = P̄_j^m(cos β) e^{imα} with P̄ the fully normalized
//! associated Legendre function, so ∫ |Y_j^m|² dσ = 1 and
//! Y_j^{−m} = (−1)^m conj(Y_j^m). The extremal orders have the closed form
//! Y_j^{±j} = ((∓1)^j / (2^j j!)) √((2j+1)!/4π) sin^j β e^{±ijα}, which the
//! tests pin against the recurrences.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Degree/order pair (j, m) with |m| ≤ j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    pub j: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(j: u32, m: i32) -> Self {
        assert!(m.unsigned_abs() <= j, "harmonic order out of range: |{m}| > {j}");
        HarmonicIndex { j, m }
    }
}

/// Flattened position of (j, m) in the j-major, m ∈ −j..=j layout.
pub fn flat_index(j: u32, m: i32) -> usize {
    debug_assert!(m.unsigned_abs() <= j);
    (j as usize) * (j as usize) + (j as i64 + m as i64) as usize
}

/// Dimension of the truncated basis, (j_max + 1)².
pub fn basis_dim(j_max: u32) -> usize {
    ((j_max + 1) * (j_max + 1)) as usize
}

/// Inverse of [`flat_index`].
pub fn index_to_jm(index: usize) -> HarmonicIndex {
    let j = (index as f64).sqrt() as u32;
    let m = index as i64 - (j as i64) * (j as i64) - j as i64;
    HarmonicIndex::new(j, m as i32)
}

// Recurrence coefficients for the normalized Legendre functions.
fn coeff_a(j: u32, m: u32) -> f64 {
    let j = j as f64;
    let m = m as f64;
    (((2.0 * j - 1.0) * (2.0 * j + 1.0)) / ((j - m) * (j + m))).sqrt()
}

fn coeff_b(j: u32, m: u32) -> f64 {
    let j = j as f64;
    let m = m as f64;
    (((2.0 * j + 1.0) * (j + m - 1.0) * (j - m - 1.0)) / ((j - m) * (j + m) * (2.0 * j - 3.0)))
        .sqrt()
}

/// Table of P̄_j^m(x_k) for 0 ≤ m ≤ j ≤ j_max over a set of nodes.
///
/// Negative orders are recovered through P̄_j^{−m} = (−1)^m P̄_j^m.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    j_max: u32,
    n_nodes: usize,
    // values[row(j, m) * n_nodes + k] with row over m ≤ j only.
    values: Vec<f64>,
}

fn table_row(j: u32, m: u32) -> usize {
    debug_assert!(m <= j);
    (j as usize) * (j as usize + 1) / 2 + m as usize
}

impl LegendreTable {
    pub fn build(j_max: u32, cos_nodes: &[f64], sin_nodes: &[f64]) -> Self {
        assert_eq!(cos_nodes.len(), sin_nodes.len());
        let n = cos_nodes.len();
        let rows = (j_max as usize + 1) * (j_max as usize + 2) / 2;
        let mut values = vec![0.0; rows * n];

        let p00 = (1.0 / (4.0 * PI)).sqrt();
        for k in 0..n {
            values[table_row(0, 0) * n + k] = p00;
        }
        // Diagonal P̄_m^m, with the Condon–Shortley sign in the recurrence.
        for m in 1..=j_max {
            let factor = -((2.0 * m as f64 + 1.0) / (2.0 * m as f64)).sqrt();
            for k in 0..n {
                values[table_row(m, m) * n + k] =
                    factor * sin_nodes[k] * values[table_row(m - 1, m - 1) * n + k];
            }
        }
        // First off-diagonal P̄_{m+1}^m.
        for m in 0..j_max {
            let factor = (2.0 * m as f64 + 3.0).sqrt();
            for k in 0..n {
                values[table_row(m + 1, m) * n + k] =
                    factor * cos_nodes[k] * values[table_row(m, m) * n + k];
            }
        }
        // Upward recurrence in j.
        for m in 0..=j_max {
            for j in (m + 2)..=j_max {
                let a = coeff_a(j, m);
                let b = coeff_b(j, m);
                for k in 0..n {
                    values[table_row(j, m) * n + k] = a
                        * cos_nodes[k]
                        * values[table_row(j - 1, m) * n + k]
                        - b * values[table_row(j - 2, m) * n + k];
                }
            }
        }

        LegendreTable {
            j_max,
            n_nodes: n,
            values,
        }
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    /// P̄_j^m at node k, for signed m.
    pub fn value(&self, j: u32, m: i32, k: usize) -> f64 {
        let abs_m = m.unsigned_abs();
        let v = self.values[table_row(j, abs_m) * self.n_nodes + k];
        if m < 0 && abs_m % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// Row slice of P̄_j^m over all nodes, for m ≥ 0.
    pub fn row(&self, j: u32, m: u32) -> &[f64] {
        &self.values[table_row(j, m) * self.n_nodes..(table_row(j, m) + 1) * self.n_nodes]
    }
}

/// Evaluates Y_j^m at explicit (α, β) points.
pub fn eval_harmonic(j: u32, m: i32, points: &[(f64, f64)]) -> Vec<Complex64> {
    assert!(m.unsigned_abs() <= j, "invalid harmonic index ({j}, {m})");
    let cos: Vec<f64> = points.iter().map(|&(_, beta)| beta.cos()).collect();
    let sin: Vec<f64> = points.iter().map(|&(_, beta)| beta.sin()).collect();
    let table = LegendreTable::build(j, &cos, &sin);
    points
        .iter()
        .enumerate()
        .map(|(k, &(alpha, _))| {
            let phase = Complex64::new(0.0, m as f64 * alpha).exp();
            table.value(j, m, k) * phase
        })
        .collect()
}

/// Closed form of the extremal-order harmonic Y_j^{±j} at (α, β):
/// ((∓1)^j / (2^j j!)) √((2j+1)!/4π) sin^j β e^{±ijα}.
pub fn extremal_harmonic_closed_form(j: u32, upper_sign: bool, alpha: f64, beta: f64) -> Complex64 {
    let mut prefactor = ((1..=(2 * j as u64 + 1)).map(|v| v as f64).product::<f64>()
        / (4.0 * PI))
        .sqrt();
    for v in 1..=j as u64 {
        prefactor /= 2.0 * v as f64;
    }
    if upper_sign && j % 2 == 1 {
        prefactor = -prefactor;
    }
    let m = if upper_sign { j as f64 } else { -(j as f64) };
    prefactor * beta.sin().powi(j as i32) * Complex64::new(0.0, m * alpha).exp()
}

/// Cartesian polynomial form of Y_j^m as (exponent, complex coefficient)
/// pairs over canonical monomials x^a y^b z^c (c ≤ 1).
///
/// Exact in structure (floating coefficients): Y_j^m = Q(z)·(x+iy)^m for
/// m ≥ 0 with Q from the same normalized recurrences, and conjugation for
/// m < 0. Intended for rendering fitted phases and for cross-checks at
/// moderate degree; numerics should stay in the harmonic basis.
pub fn harmonic_cartesian(j: u32, m: i32) -> Vec<((u32, u32, u32), Complex64)> {
    let abs_m = m.unsigned_abs();
    assert!(abs_m <= j);

    // Q polynomials in z: coefficient vectors, degree j − m.
    // Q_m^m is the constant (−1)^m sqrt((2m+1)!!/(4π (2m)!!)).
    let mut q_prev: Vec<f64> = vec![(1.0 / (4.0 * PI)).sqrt()];
    for mm in 1..=abs_m {
        q_prev[0] *= -((2.0 * mm as f64 + 1.0) / (2.0 * mm as f64)).sqrt();
    }
    // Upward in j at fixed order abs_m.
    let mut q_curr: Vec<f64> = Vec::new();
    if j > abs_m {
        // Q_{m+1}^m = sqrt(2m+3) · z · Q_m^m
        q_curr = vec![0.0, (2.0 * abs_m as f64 + 3.0).sqrt() * q_prev[0]];
        for jj in (abs_m + 2)..=j {
            let a = coeff_a(jj, abs_m);
            let b = coeff_b(jj, abs_m);
            let mut next = vec![0.0; q_curr.len() + 1];
            for (p, &coeff) in q_curr.iter().enumerate() {
                next[p + 1] += a * coeff;
            }
            for (p, &coeff) in q_prev.iter().enumerate() {
                next[p] -= b * coeff;
            }
            q_prev = std::mem::take(&mut q_curr);
            q_curr = next;
        }
    }
    let q = if j == abs_m { &q_prev } else { &q_curr };

    // Expand Q(z) · (x ± iy)^m into canonical monomials.
    let mut terms: std::collections::BTreeMap<(u32, u32, u32), Complex64> =
        std::collections::BTreeMap::new();
    let i_factor = if m >= 0 {
        Complex64::new(0.0, 1.0)
    } else {
        Complex64::new(0.0, -1.0)
    };
    for (p, &qc) in q.iter().enumerate() {
        if qc == 0.0 {
            continue;
        }
        // z^p with p ≥ 2 reduced through (1 − x² − y²)^(p/2).
        let halves = (p / 2) as u32;
        let rem = (p % 2) as u32;
        for i in 0..=halves {
            for jj in 0..=(halves - i) {
                let mult = multinomial_f64(halves, i, jj)
                    * if (i + jj) % 2 == 1 { -1.0 } else { 1.0 };
                // times (x ± iy)^m binomial
                for kk in 0..=abs_m {
                    let binom = binomial_f64(abs_m, kk);
                    let coeff = qc * mult * binom * i_factor.powu(kk);
                    let key = (2 * i + (abs_m - kk), 2 * jj + kk, rem);
                    let entry = terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
                    *entry += coeff;
                }
            }
        }
    }
    if m < 0 && abs_m % 2 == 1 {
        // Y_{j,−m} = (−1)^m conj(Y_jm); the conjugation is already in
        // i_factor, apply the sign.
        for value in terms.values_mut() {
            *value = -*value;
        }
    }
    terms.into_iter().filter(|(_, c)| c.norm() > 0.0).collect()
}

fn multinomial_f64(k: u32, i: u32, j: u32) -> f64 {
    let mut acc = 1.0;
    let mut used = 0;
    for (count, _) in [(i, 0), (j, 0), (k - i - j, 0)] {
        for v in 1..=count {
            used += 1;
            acc = acc * used as f64 / v as f64;
        }
    }
    acc
}

fn binomial_f64(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for v in 1..=k {
        acc = acc * (n - k + v) as f64 / v as f64;
    }
    acc
}
