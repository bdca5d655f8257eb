//! FBI transform at n = 1: Tu(z) = c·h^{-3/4}∫e^{-(z-y)²/(2h)}u(y)dy onto
//! the Bargmann space with weight Φ₀ = ½(Im z)², plus unitarity and
//! quantization-multiplication checks.

use crate::error::{Result, SemiError};
use crate::fields::ScalarField;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const DECAY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LineGrid {
    pub half_width: f64,
    pub n: usize,
}

impl LineGrid {
    pub fn new(half_width: f64, n: usize) -> Self {
        LineGrid { half_width, n }
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let dy = self.dy();
        (0..self.n).map(|j| -self.half_width + (j as f64 + 0.5) * dy).collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BargmannGrid {
    pub half_re: f64,
    pub half_im: f64,
    pub n_re: usize,
    pub n_im: usize,
    pub h: f64,
}

impl BargmannGrid {
    pub fn new(half_re: f64, half_im: f64, n_re: usize, n_im: usize, h: f64) -> Self {
        BargmannGrid { half_re, half_im, n_re, n_im, h }
    }

    /// Φ₀(z) = ½(Im z)².
    pub fn phi0(z: Complex64) -> f64 {
        0.5 * z.im * z.im
    }

    pub fn re_axis(&self) -> Vec<f64> {
        let d = 2.0 * self.half_re / self.n_re as f64;
        (0..self.n_re).map(|j| -self.half_re + (j as f64 + 0.5) * d).collect()
    }

    /// Symmetric about the real axis by construction.
    pub fn im_axis(&self) -> Vec<f64> {
        let d = 2.0 * self.half_im / self.n_im as f64;
        (0..self.n_im).map(|j| -self.half_im + (j as f64 + 0.5) * d).collect()
    }

    pub fn cell_area(&self) -> f64 {
        (2.0 * self.half_re / self.n_re as f64) * (2.0 * self.half_im / self.n_im as f64)
    }
}

/// A function sampled on a Bargmann grid; values[i][j] = F(re_j + i·im_i).
#[derive(Debug, Clone)]
pub struct BargmannFunction {
    pub grid: BargmannGrid,
    pub values: Array2<Complex64>,
}

impl BargmannFunction {
    /// ‖F‖²_{Φ₀} = ∫|F|²e^{-2Φ₀/h}dm.
    pub fn norm_sq(&self) -> f64 {
        self.inner(self).re
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// ⟨F, G⟩_{Φ₀} = ∫F·Ḡ·e^{-2Φ₀/h}dm.
    pub fn inner(&self, other: &BargmannFunction) -> Complex64 {
        let h = self.grid.h;
        let ims = self.grid.im_axis();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &im) in ims.iter().enumerate() {
            let w = (-(im * im) / h).exp();
            for j in 0..self.grid.n_re {
                acc += self.values[[i, j]] * other.values[[i, j]].conj() * w;
            }
        }
        acc * self.grid.cell_area()
    }
}

pub fn line_norm(u: &[Complex64], grid: &LineGrid) -> f64 {
    (u.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dy()).sqrt()
}

/// Calibrated FBI transform for a fixed h and pair of grids.
#[derive(Debug, Clone)]
pub struct FbiTransform {
    pub h: f64,
    pub ygrid: LineGrid,
    pub zgrid: BargmannGrid,
    /// Normalization fixed by ‖Tu‖_{Φ₀} = ‖u‖ on the reference Gaussian.
    pub c: f64,
}

fn raw_transform(
    u: &[Complex64],
    ygrid: &LineGrid,
    zgrid: &BargmannGrid,
    h: f64,
    c: f64,
) -> Result<BargmannFunction> {
    if u.len() != ygrid.n {
        return Err(SemiError::DimensionMismatch { expected: ygrid.n, got: u.len() });
    }
    let edge = u[0].norm().max(u[u.len() - 1].norm());
    if edge > DECAY_TOL {
        return Err(SemiError::InsufficientDecay(edge));
    }
    let ys = ygrid.points();
    let dy = ygrid.dy();
    let res = zgrid.re_axis();
    let ims = zgrid.im_axis();
    let scale = c * h.powf(-0.75) * dy;
    let rows: Vec<Vec<Complex64>> = ims
        .par_iter()
        .map(|&im| {
            res.iter()
                .map(|&re| {
                    let z = Complex64::new(re, im);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, &y) in ys.iter().enumerate() {
                        let d = z - y;
                        acc += (-(d * d) / (2.0 * h)).exp() * u[k];
                    }
                    acc * scale
                })
                .collect()
        })
        .collect();
    let mut values = Array2::<Complex64>::zeros((zgrid.n_im, zgrid.n_re));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            values[[i, j]] = v;
        }
    }
    Ok(BargmannFunction { grid: *zgrid, values })
}

/// Reference Gaussian (πh)^{-1/4}e^{-y²/(2h)}, the calibration target.
pub fn reference_gaussian(h: f64, ygrid: &LineGrid) -> Vec<Complex64> {
    let norm = (PI * h).powf(-0.25);
    ygrid
        .points()
        .iter()
        .map(|&y| Complex64::new(norm * (-y * y / (2.0 * h)).exp(), 0.0))
        .collect()
}

/// Hermite function k on the h-scale: ψ_k(y) ∝ H_k(y/√h)e^{-y²/(2h)},
/// L²-normalized.
pub fn hermite_function(k: usize, h: f64, ygrid: &LineGrid) -> Vec<Complex64> {
    let mut fact = 1.0f64;
    for j in 1..=k {
        fact *= j as f64;
    }
    let norm = (PI * h).powf(-0.25) / (2.0f64.powi(k as i32) * fact).sqrt();
    ygrid
        .points()
        .iter()
        .map(|&y| {
            let t = y / h.sqrt();
            // H_k by recurrence
            let (mut hm, mut hc) = (0.0f64, 1.0f64);
            for j in 0..k {
                let hn = 2.0 * t * hc - 2.0 * j as f64 * hm;
                hm = hc;
                hc = hn;
            }
            Complex64::new(norm * hc * (-y * y / (2.0 * h)).exp(), 0.0)
        })
        .collect()
}

impl FbiTransform {
    /// Build the transform and calibrate c on the reference Gaussian.
    pub fn new(h: f64, ygrid: LineGrid, zgrid: BargmannGrid) -> Result<Self> {
        let u0 = reference_gaussian(h, &ygrid);
        let trial = raw_transform(&u0, &ygrid, &zgrid, h, 1.0)?;
        let target = line_norm(&u0, &ygrid);
        let got = trial.norm();
        if got == 0.0 || !got.is_finite() {
            return Err(SemiError::Linalg("calibration transform degenerate".into()));
        }
        Ok(FbiTransform { h, ygrid, zgrid, c: target / got })
    }

    pub fn apply(&self, u: &[Complex64]) -> Result<BargmannFunction> {
        raw_transform(u, &self.ygrid, &self.zgrid, self.h, self.c)
    }
}

/// Grids sized for h ∈ [0.05, 1]: the y-box covers Gaussian tails below the
/// decay tolerance, the z-box covers the Φ₀-weighted mass.
pub fn default_grids(h: f64) -> (LineGrid, BargmannGrid) {
    let ygrid = LineGrid::new(8.0, 512);
    // covers the Φ₀-weighted mass of Hermite inputs through k = 5, whose
    // images center at |Im z| ≈ √(2kh) with width √h
    let zgrid = BargmannGrid::new(8.0 * h.sqrt() + 1.0, 8.0 * h.sqrt(), 96, 96, h);
    (ygrid, zgrid)
}

/// Max over Hermite inputs 0..=k_max and the h-list of |‖Tu‖_{Φ₀}/‖u‖ − 1|.
pub fn check_unitarity(h_list: &[f64], k_max: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for &h in h_list {
        let (ygrid, zgrid) = default_grids(h);
        let fbi = FbiTransform::new(h, ygrid, zgrid)?;
        for k in 0..=k_max {
            let u = hermite_function(k, h, &ygrid);
            let ratio = fbi.apply(&u)?.norm() / line_norm(&u, &ygrid);
            worst = worst.max((ratio - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Real-side symbol a(x) (+ ξ² when `kinetic`): a^w u is multiplication plus
/// the spectral Laplacian.
#[derive(Debug, Clone)]
pub struct RealSymbol {
    pub a_x: ScalarField,
    pub kinetic: bool,
}

impl RealSymbol {
    pub fn x_squared() -> Self {
        RealSymbol { a_x: ScalarField::monomial(1, 0, 2, 1.0), kinetic: false }
    }

    pub fn harmonic() -> Self {
        RealSymbol { a_x: ScalarField::monomial(1, 0, 2, 1.0), kinetic: true }
    }

    pub fn one() -> Self {
        RealSymbol { a_x: ScalarField::from_terms(1, vec![(vec![0], 1.0)]), kinetic: false }
    }

    /// Restriction to Λ_{Φ₀}: z ↔ (y, η) = (Re z, −Im z).
    pub fn on_lambda(&self, z: Complex64) -> Result<f64> {
        let mut v = self.a_x.eval(&[z.re])?.re;
        if self.kinetic {
            v += z.im * z.im;
        }
        Ok(v)
    }
}

/// a^w u on the sampled line: multiplication by a(y), plus −h²u″ by Fourier
/// differentiation when the symbol carries ξ².
pub fn weyl_apply(sym: &RealSymbol, u: &[Complex64], ygrid: &LineGrid, h: f64) -> Result<Vec<Complex64>> {
    let ys = ygrid.points();
    let mut out: Vec<Complex64> = Vec::with_capacity(u.len());
    for (j, &y) in ys.iter().enumerate() {
        out.push(sym.a_x.eval(&[y])? * u[j]);
    }
    if sym.kinetic {
        let n = ygrid.n;
        let l = ygrid.half_width;
        // û_m = Σ_j u_j e^{-ik_m y_j}, k_m = πm/L; then add h²k²û back
        let ks: Vec<f64> = (0..n)
            .map(|m| PI * (m as i64 - (n / 2) as i64) as f64 / l)
            .collect();
        let mut hatu = vec![Complex64::new(0.0, 0.0); n];
        for (m, &k) in ks.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                hatu[m] += u[j] * Complex64::from_polar(1.0, -k * y);
            }
        }
        // drop roundoff-level modes: h²k² would otherwise amplify them
        // past the decay guard at the grid edges
        let peak = hatu.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for v in hatu.iter_mut() {
            if v.norm() < 1e-14 * peak {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        let scale = 1.0 / n as f64;
        for (j, &y) in ys.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, &k) in ks.iter().enumerate() {
                acc += hatu[m] * Complex64::from_polar(1.0, k * y) * (h * h * k * k);
            }
            // taper the reconstruction near the box edge: there the true
            // field is below machine relevance but the truncated Fourier
            // tail rings at ~1e-14 and would trip the decay guard
            let taper = crate::util::smoothstep(((l - y.abs()) / (0.1 * l)).clamp(0.0, 1.0));
            out[j] += acc * scale * taper;
        }
    }
    Ok(out)
}

/// Residual of the quantization-multiplication formula at one h:
/// |⟨T(a^w u), Tu⟩_{Φ₀} − ∫ã|Tu|²e^{-2Φ₀/h}dm| for the ground Gaussian u.
pub fn quant_mult_residual(sym: &RealSymbol, h: f64) -> Result<f64> {
    let (ygrid, zgrid) = default_grids(h);
    let fbi = FbiTransform::new(h, ygrid, zgrid)?;
    let u = reference_gaussian(h, &ygrid);
    let au = weyl_apply(sym, &u, &ygrid, h)?;
    let tu = fbi.apply(&u)?;
    let tau = fbi.apply(&au)?;
    let lhs = tau.inner(&tu);

    let ims = zgrid.im_axis();
    let res = zgrid.re_axis();
    let mut rhs = 0.0f64;
    for (i, &im) in ims.iter().enumerate() {
        let w = (-(im * im) / h).exp();
        for (j, &re) in res.iter().enumerate() {
            let z = Complex64::new(re, im);
            rhs += sym.on_lambda(z)? * tu.values[[i, j]].norm_sqr() * w;
        }
    }
    rhs *= zgrid.cell_area();
    Ok((lhs - Complex64::new(rhs, 0.0)).norm())
}

/// Log-log slope of the residual against h over the list; the formula's O(h)
/// remainder shows as slope ≥ 0.9.
pub fn quant_mult_check(sym: &RealSymbol, h_list: &[f64]) -> Result<f64> {
    if h_list.len() < 2 {
        return Err(SemiError::Config {
            field: "h_list".into(),
            message: "need at least 2 values for a slope".into(),
        });
    }
    let pts: Vec<(f64, f64)> = h_list
        .iter()
        .map(|&h| quant_mult_residual(sym, h).map(|r| (h.ln(), r.max(1e-300).ln())))
        .collect::<Result<_>>()?;
    // least-squares slope
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((m * sxy - sx * sy) / (m * sxx - sx * sx))
}

/// Max relative discrete Cauchy-Riemann residual of Tu in the grid interior.
pub fn holomorphy_residual(f: &BargmannFunction) -> f64 {
    let d_re = 2.0 * f.grid.half_re / f.grid.n_re as f64;
    let d_im = 2.0 * f.grid.half_im / f.grid.n_im as f64;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 1..f.grid.n_im - 1 {
        for j in 1..f.grid.n_re - 1 {
            let fx = (f.values[[i, j + 1]] - f.values[[i, j - 1]]) / (2.0 * d_re);
            let fy = (f.values[[i + 1, j]] - f.values[[i - 1, j]]) / (2.0 * d_im);
            let cr = fx + Complex64::new(0.0, 1.0) * fy;
            worst = worst.max(cr.norm());
            scale = scale.max(fx.norm());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}
