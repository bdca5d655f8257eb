//! Resolvent norms, pseudospectrum sweeps, the h-scaling study for the
//! O(1/h) resolvent bound, and eigenvalue-vs-lattice comparisons.

use crate::error::{Result, SemiError};
use crate::operator::{discretize, low_eigenvalues, GridSpec, OperatorMatrix};
use crate::quadmodel::{quad_spectrum, quadratic_model};
use crate::symbols::SymbolSpec;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Factorize, Norm, Solve, SVD};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

const SPECTRAL_HIT_TOL: f64 = 1e-14;
/// Dense SVD below this dimension; LU-based inverse iteration above.
const SVD_DIM_LIMIT: usize = 256;

fn sigma_min_svd(a: &Array2<Complex64>) -> Result<f64> {
    let (_, s, _) = a.svd(false, false).map_err(|e| SemiError::Linalg(e.to_string()))?;
    Ok(s.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// σ_min via inverse iteration on (A†A)⁻¹ = A⁻¹A⁻†, reusing one LU
/// factorization of A. Falls back to SVD if A is numerically singular.
fn sigma_min_inverse_iteration(a: &Array2<Complex64>) -> Result<f64> {
    let lu = match a.factorize() {
        Ok(f) => f,
        Err(_) => return sigma_min_svd(a),
    };
    let dim = a.nrows();
    let mut v = Array1::<Complex64>::from_elem(dim, Complex64::new(1.0, 0.3));
    let nrm = v.norm_l2();
    v.mapv_inplace(|z| z / nrm);
    let mut mu_prev = 0.0f64;
    for iter in 0..200 {
        // w = A⁻¹ A⁻† v
        let u = match lu.solve_h(&v) {
            Ok(u) => u,
            Err(_) => return sigma_min_svd(a),
        };
        let w = match lu.solve(&u) {
            Ok(w) => w,
            Err(_) => return sigma_min_svd(a),
        };
        let mu = w.norm_l2();
        if mu == 0.0 || !mu.is_finite() {
            return sigma_min_svd(a);
        }
        v = w.mapv(|z| z / mu);
        if iter > 4 && (mu - mu_prev).abs() <= 1e-12 * mu {
            mu_prev = mu;
            break;
        }
        mu_prev = mu;
    }
    Ok(1.0 / mu_prev.sqrt())
}

/// Smallest singular value of P - λ.
pub fn sigma_min(op: &OperatorMatrix, lambda: Complex64) -> Result<f64> {
    let mut a = op.matrix.clone();
    let dim = a.nrows();
    for i in 0..dim {
        a[[i, i]] -= lambda;
    }
    if dim <= SVD_DIM_LIMIT {
        sigma_min_svd(&a)
    } else {
        sigma_min_inverse_iteration(&a)
    }
}

/// ‖(P - λ)⁻¹‖ = 1/σ_min(P - λ); +∞ at a spectral hit.
pub fn resolvent_norm(op: &OperatorMatrix, lambda: Complex64) -> Result<f64> {
    let s = sigma_min(op, lambda)?;
    Ok(if s < SPECTRAL_HIT_TOL { f64::INFINITY } else { 1.0 / s })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PseudospectrumField {
    pub lambda_grid: Vec<(f64, f64)>,
    pub sigma_min: Vec<f64>,
    pub re_points: usize,
    pub im_points: usize,
}

impl PseudospectrumField {
    pub fn resolvent_norm(&self, idx: usize) -> f64 {
        let s = self.sigma_min[idx];
        if s < SPECTRAL_HIT_TOL {
            f64::INFINITY
        } else {
            1.0 / s
        }
    }

    /// CSV columns: Re λ, Im λ, sigma_min.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re_lambda,im_lambda,sigma_min")?;
        for ((re, im), s) in self.lambda_grid.iter().zip(&self.sigma_min) {
            writeln!(out, "{re},{im},{s}")?;
        }
        Ok(())
    }
}

/// σ_min sweep over a rectangular λ-grid; rows computed in parallel.
pub fn pseudospectrum(
    op: &OperatorMatrix,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: usize,
) -> Result<PseudospectrumField> {
    if resolution > 512 || resolution < 2 {
        return Err(SemiError::Config {
            field: "resolution".into(),
            message: format!("need 2 ≤ resolution ≤ 512, got {resolution}"),
        });
    }
    let res = resolution;
    let lambdas: Vec<Complex64> = (0..res * res)
        .map(|idx| {
            let i = idx / res;
            let j = idx % res;
            let re = re_range.0 + (re_range.1 - re_range.0) * j as f64 / (res - 1) as f64;
            let im = im_range.0 + (im_range.1 - im_range.0) * i as f64 / (res - 1) as f64;
            Complex64::new(re, im)
        })
        .collect();
    let sigmas: Vec<Result<f64>> = lambdas.par_iter().map(|&l| sigma_min(op, l)).collect();
    let mut sigma_min_out = Vec::with_capacity(sigmas.len());
    for s in sigmas {
        sigma_min_out.push(s?);
    }
    Ok(PseudospectrumField {
        lambda_grid: lambdas.iter().map(|z| (z.re, z.im)).collect(),
        sigma_min: sigma_min_out,
        re_points: res,
        im_points: res,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingEntry {
    pub h: f64,
    pub samples: usize,
    pub sup_h_norm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingReport {
    pub entries: Vec<ScalingEntry>,
    /// Unshifted lattice points E_j used for the exclusion disks.
    pub lattice: Vec<(f64, f64)>,
    pub ratio: f64,
    pub pass: bool,
}

/// λ samples on D(0,Ch) \ hΩ: rings {0.25, 0.5, 0.75, 1}·Ch at 64 angles
/// plus midpoints between adjacent lattice points, minus disks of radius
/// ρh around each shifted lattice point h(E_j + p₁(0,0)).
fn sample_plan(
    h: f64,
    c: f64,
    rho: f64,
    lattice_shifted: &[Complex64],
) -> Result<Vec<Complex64>> {
    let mut raw: Vec<Complex64> = Vec::new();
    for &frac in &[0.25, 0.5, 0.75, 1.0] {
        let r = frac * c * h;
        for k in 0..64 {
            let th = 2.0 * PI * k as f64 / 64.0;
            raw.push(Complex64::from_polar(r, th));
        }
    }
    for pair in lattice_shifted.windows(2) {
        let mid = (pair[0] + pair[1]) * h / 2.0;
        if mid.norm() <= c * h {
            raw.push(mid);
        }
    }
    let kept: Vec<Complex64> = raw
        .into_iter()
        .filter(|l| {
            lattice_shifted
                .iter()
                .all(|&e| (*l - e * h).norm() >= rho * h)
        })
        .collect();
    if kept.is_empty() {
        return Err(SemiError::EmptySamplePlan(format!(
            "all λ-samples fall inside the excluded disks (C = {c}, ρ = {rho})"
        )));
    }
    Ok(kept)
}

/// Verify the O(1/h) resolvent bound on D(0,Ch) \ hΩ across an h-list:
/// PASS when sup_λ h‖(P-λ)⁻¹‖ stays within a factor 2 over h_list.
pub fn scaling_study(
    spec: &SymbolSpec,
    grid: &GridSpec,
    h_list: &[f64],
    c: f64,
    rho: f64,
) -> Result<ScalingReport> {
    if h_list.len() < 2 || h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SemiError::Config {
            field: "h_list".into(),
            message: "need a strictly decreasing list of at least 2 values".into(),
        });
    }
    let qm = quadratic_model(spec)?;
    // enough lattice points to cover D(0, C(1+ρ))
    let mut count = 16;
    let lattice = loop {
        let lat = quad_spectrum(&qm, count)?;
        let eigs = lat.eigenvalues();
        if eigs.last().map(|e| e.norm() > c * (1.0 + rho)).unwrap_or(true) || count >= 256 {
            break lat;
        }
        count *= 2;
    };
    let p1 = spec.p1_at_origin();
    let shifted: Vec<Complex64> = lattice.eigenvalues().iter().map(|&e| e + p1).collect();

    let mut entries = Vec::new();
    for &h in h_list {
        let op = discretize(spec, h, grid)?;
        let plan = sample_plan(h, c, rho, &shifted)?;
        let norms: Vec<Result<f64>> = plan
            .par_iter()
            .map(|&l| {
                let s = sigma_min(&op, l)?;
                if s < 100.0 * SPECTRAL_HIT_TOL {
                    return Err(SemiError::SpectralHit { re: l.re, im: l.im, sigma: s });
                }
                Ok(1.0 / s)
            })
            .collect();
        let mut sup = 0.0f64;
        for r in norms {
            sup = sup.max(h * r?);
        }
        entries.push(ScalingEntry { h, samples: plan.len(), sup_h_norm: sup });
    }
    let max = entries.iter().map(|e| e.sup_h_norm).fold(0.0, f64::max);
    let min = entries.iter().map(|e| e.sup_h_norm).fold(f64::INFINITY, f64::min);
    let ratio = max / min;
    Ok(ScalingReport {
        entries,
        lattice: lattice.eigenvalues().iter().map(|z| (z.re, z.im)).collect(),
        ratio,
        pass: ratio <= 2.0,
    })
}

/// Deviations below this count as converged: exactly-quadratic problems hit
/// discretization noise immediately and have nothing left to decrease.
const CONVERGENCE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeCompareReport {
    pub h_list: Vec<f64>,
    /// deviations[i][j] = |λ_j(h_i)/h_i − (E_j + p₁(0,0))|.
    pub deviations: Vec<Vec<f64>>,
    pub pass: bool,
}

/// Compare low eigenvalues of the discretized operator against the rescaled
/// lattice h(E_j + p₁(0,0)); PASS when each deviation either decreases along
/// the h-list (10% slack) or sits below the convergence floor.
pub fn lattice_compare(
    spec: &SymbolSpec,
    grid: &GridSpec,
    h_list: &[f64],
    count: usize,
) -> Result<LatticeCompareReport> {
    let qm = quadratic_model(spec)?;
    let lattice = quad_spectrum(&qm, count)?;
    let p1 = spec.p1_at_origin();
    let targets: Vec<Complex64> = lattice
        .eigenvalues()
        .iter()
        .take(count)
        .map(|&e| e + p1)
        .collect();

    let mut deviations = Vec::new();
    for &h in h_list {
        let op = discretize(spec, h, grid)?;
        let eigs = low_eigenvalues(&op, targets.len())?;
        let row: Vec<f64> = eigs
            .iter()
            .zip(&targets)
            .map(|(l, t)| (l / h - t).norm())
            .collect();
        deviations.push(row);
    }
    let mut pass = true;
    for j in 0..targets.len() {
        for i in 1..h_list.len() {
            let prev = deviations[i - 1][j];
            let cur = deviations[i][j];
            if cur > CONVERGENCE_FLOOR && cur > 1.1 * prev {
                pass = false;
            }
        }
    }
    Ok(LatticeCompareReport { h_list: h_list.to_vec(), deviations, pass })
}
