//! Quadrature grids on S²: Gauss–Legendre in cos β crossed with a uniform
//! azimuth, so that band-limited integrands are integrated exactly.
//!
//! A grid built for band limit J with oversampling factor s has
//! n_beta = s·J + 1 Legendre nodes (exact for cos-degree ≤ 2·n_beta − 1) and
//! n_alpha = 2·s·J + 1 azimuth nodes (exact for Fourier modes |m| < n_alpha).

use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct SphereGrid {
    n_beta: usize,
    n_alpha: usize,
    cos_beta: Vec<f64>,
    sin_beta: Vec<f64>,
    gl_weight: Vec<f64>,
    alpha: Vec<f64>,
}

impl SphereGrid {
    /// Grid sized for band limit `j_max` with the given oversampling factor
    /// (`oversample >= 1`).
    pub fn new(j_max: u32, oversample: u32) -> Self {
        assert!(oversample >= 1, "oversample factor must be at least 1");
        let n_beta = (oversample * j_max + 1) as usize;
        let n_alpha = (2 * oversample * j_max + 1) as usize;
        Self::with_counts(n_beta, n_alpha)
    }

    /// Grid that integrates cos-degree ≤ `cos_degree` and Fourier modes
    /// |m| ≤ `fourier_degree` exactly.
    pub fn for_design_degree(cos_degree: u32, fourier_degree: u32) -> Self {
        let n_beta = (cos_degree as usize) / 2 + 1;
        let n_alpha = fourier_degree as usize + 1;
        Self::with_counts(n_beta.max(1), n_alpha.max(1))
    }

    fn with_counts(n_beta: usize, n_alpha: usize) -> Self {
        let (cos_beta, gl_weight) = gauss_legendre(n_beta);
        let sin_beta = cos_beta.iter().map(|x| (1.0 - x * x).sqrt()).collect();
        let alpha = (0..n_alpha)
            .map(|l| 2.0 * PI * l as f64 / n_alpha as f64)
            .collect();
        SphereGrid {
            n_beta,
            n_alpha,
            cos_beta,
            sin_beta,
            gl_weight,
            alpha,
        }
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn num_points(&self) -> usize {
        self.n_beta * self.n_alpha
    }

    pub fn cos_beta(&self) -> &[f64] {
        &self.cos_beta
    }

    pub fn sin_beta(&self) -> &[f64] {
        &self.sin_beta
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    /// Largest polynomial degree in cos β integrated exactly.
    pub fn cos_design_degree(&self) -> u32 {
        (2 * self.n_beta - 1) as u32
    }

    /// Largest azimuthal Fourier mode integrated exactly.
    pub fn fourier_design_degree(&self) -> u32 {
        (self.n_alpha - 1) as u32
    }

    /// Band limit for which the analysis transform is exact.
    pub fn max_exact_band(&self) -> u32 {
        let from_beta = (self.n_beta as u32).saturating_sub(1);
        let from_alpha = ((self.n_alpha as u32).saturating_sub(1)) / 2;
        from_beta.min(from_alpha)
    }

    /// Full quadrature weight of point (k, l): GL weight times 2π/n_alpha.
    pub fn weight(&self, beta_index: usize) -> f64 {
        self.gl_weight[beta_index] * 2.0 * PI / self.n_alpha as f64
    }

    /// Flattened index of point (k, l), row-major with l fastest.
    pub fn index(&self, beta_index: usize, alpha_index: usize) -> usize {
        beta_index * self.n_alpha + alpha_index
    }

    /// Cartesian coordinates of grid point (k, l).
    pub fn point(&self, beta_index: usize, alpha_index: usize) -> [f64; 3] {
        let sb = self.sin_beta[beta_index];
        [
            self.alpha[alpha_index].cos() * sb,
            self.alpha[alpha_index].sin() * sb,
            self.cos_beta[beta_index],
        ]
    }

    /// Quadrature of complex samples over the sphere.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.num_points());
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..self.n_beta {
            let w = self.weight(k);
            let mut row = Complex64::new(0.0, 0.0);
            for l in 0..self.n_alpha {
                row += values[self.index(k, l)];
            }
            acc += w * row;
        }
        acc
    }

    /// Grid L² norm (quadrature of |f|²) of complex samples.
    pub fn norm(&self, values: &[Complex64]) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.n_beta {
            let w = self.weight(k);
            for l in 0..self.n_alpha {
                acc += w * values[self.index(k, l)].norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Samples a real function of the Cartesian coordinates over the grid.
    pub fn sample(&self, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_points());
        for k in 0..self.n_beta {
            for l in 0..self.n_alpha {
                out.push(f(self.point(k, l)));
            }
        }
        out
    }
}

/// Renders complex grid samples as CSV records (beta_index, alpha_index,
/// re, im).
pub fn grid_values_to_csv(grid: &SphereGrid, values: &[Complex64]) -> String {
    let mut out = String::from("beta_index,alpha_index,re,im\n");
    for k in 0..grid.n_beta() {
        for l in 0..grid.n_alpha() {
            let v = values[grid.index(k, l)];
            out.push_str(&format!("{k},{l},{},{}\n", v.re, v.im));
        }
    }
    out
}

/// Gauss–Legendre nodes (ascending) and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..60 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (p2, d2) = legendre_and_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
