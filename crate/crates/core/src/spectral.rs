//! Adjacency spectral gap `d - max_{i>=2} |lambda_i|` of a d-regular graph.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest `n` handled by the dense solver when the mode is `Auto`.
pub const DENSE_LIMIT: usize = 2000;
/// Tolerance reported for the dense eigensolver.
pub const DENSE_TOLERANCE: f64 = 1e-9;
/// Relative convergence tolerance of the Lanczos iteration.
pub const ITERATIVE_TOLERANCE: f64 = 1e-6;
const LANCZOS_MAX_STEPS: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMode {
    ExactDense,
    Iterative,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGap {
    pub degree: usize,
    /// Largest absolute adjacency eigenvalue after removing the trivial one.
    pub second_eigenvalue: f64,
    pub gap: f64,
    pub mode: SpectralMode,
    pub tolerance: f64,
}

/// Spectral gap of `g` (of its underlying undirected graph when directed).
pub fn spectral_gap(g: &Graph, mode: SpectralMode) -> Result<SpectralGap> {
    let h = g.underlying();
    let d = h.regular_degree().ok_or_else(|| Error::NotRegular {
        histogram: h.degree_histogram(),
    })?;
    let n = h.n();
    if n < 2 {
        return Err(Error::InvalidParameters(
            "spectral gap needs at least two vertices".into(),
        ));
    }
    let mode = match mode {
        SpectralMode::Auto if n <= DENSE_LIMIT => SpectralMode::ExactDense,
        SpectralMode::Auto => SpectralMode::Iterative,
        m => m,
    };
    let (lambda, tolerance) = match mode {
        SpectralMode::ExactDense => (dense_second(&h, d), DENSE_TOLERANCE),
        _ => (lanczos_second(&h), ITERATIVE_TOLERANCE),
    };
    Ok(SpectralGap {
        degree: d,
        second_eigenvalue: lambda,
        gap: d as f64 - lambda,
        mode,
        tolerance,
    })
}

fn dense_second(h: &Graph, d: usize) -> f64 {
    let n = h.n();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(u, v) in h.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let eig = SymmetricEigen::new(a);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| y.total_cmp(x));
    // vals[0] is d for a d-regular graph; drop exactly one copy of it.
    debug_assert!((vals[0] - d as f64).abs() < 1e-6);
    vals[1..].iter().map(|x| x.abs()).fold(0.0, f64::max)
}

fn matvec(h: &Graph, x: &[f64], y: &mut [f64]) {
    for (u, yu) in y.iter_mut().enumerate() {
        *yu = h.out_neighbors(u).iter().map(|&v| x[v]).sum();
    }
}

fn project_out_ones(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for xi in x.iter_mut() {
        *xi -= mean;
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Extreme eigenvalues of A restricted to the complement of the all-ones
/// vector, by Lanczos without reorthogonalization (extreme Ritz values are
/// unaffected by ghost copies).
fn lanczos_second(h: &Graph) -> f64 {
    let n = h.n();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    project_out_ones(&mut q);
    let nq = norm(&q);
    if nq == 0.0 {
        return 0.0;
    }
    q.iter_mut().for_each(|v| *v /= nq);

    let mut q_prev = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last_estimate = f64::NAN;
    let mut estimate = 0.0;

    for step in 0..LANCZOS_MAX_STEPS.min(n - 1) {
        matvec(h, &q, &mut w);
        project_out_ones(&mut w);
        let alpha: f64 = w.iter().zip(&q).map(|(a, b)| a * b).sum();
        let beta_prev = betas.last().copied().unwrap_or(0.0);
        for i in 0..n {
            w[i] -= alpha * q[i] + beta_prev * q_prev[i];
        }
        alphas.push(alpha);
        let beta = norm(&w);

        if step % 5 == 4 || beta < 1e-12 || step + 1 == LANCZOS_MAX_STEPS.min(n - 1) {
            estimate = tridiagonal_extreme_abs(&alphas, &betas);
            if beta < 1e-12
                || (last_estimate.is_finite()
                    && (estimate - last_estimate).abs() <= ITERATIVE_TOLERANCE * estimate.max(1.0))
            {
                break;
            }
            last_estimate = estimate;
        }
        betas.push(beta);
        std::mem::swap(&mut q_prev, &mut q);
        for i in 0..n {
            q[i] = w[i] / beta;
        }
    }
    estimate
}

fn tridiagonal_extreme_abs(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let vals: DVector<f64> = SymmetricEigen::new(t).eigenvalues;
    vals.iter().map(|x| x.abs()).fold(0.0, f64::max)
}
