//! The modified symbol (Re p₀)_ε, the bounded weight G_ε, its quadratic
//! shadow G₀, the cohomological identity, and the four-region ellipticity of
//! the deformed symbol.

use crate::dynamics::{flow, time_average, FlowConfig};
use crate::error::{Result, SemiError};
use crate::quadmodel::{linear_flow_matrix, QuadraticModel};
use crate::symbols::{annulus_samples, cutoff, PhasePoint, SymbolSpec};
use crate::util::{gauss_legendre, smoothstep};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightParams {
    pub epsilon: f64,
    pub delta: f64,
    pub t_window: f64,
    /// Coupling ε = A·h when driven from the resolvent side.
    pub a_coupling: f64,
    pub chi0_radius: f64,
}

impl WeightParams {
    pub fn new(epsilon: f64, delta: f64, t_window: f64) -> Self {
        WeightParams { epsilon, delta, t_window, a_coupling: 1.0, chi0_radius: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, message: String| SemiError::Config { field: field.into(), message };
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(bad("epsilon", format!("need 0 < ε ≤ 1, got {}", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta <= 0.5) {
            return Err(bad("delta", format!("need 0 < δ ≤ 0.5, got {}", self.delta)));
        }
        if self.t_window <= 0.0 {
            return Err(bad("t_window", format!("need T > 0, got {}", self.t_window)));
        }
        if self.chi0_radius <= 0.0 {
            return Err(bad("chi0_radius", format!("need r₀ > 0, got {}", self.chi0_radius)));
        }
        Ok(())
    }
}

/// Decreasing profile: 1 on [0,1], 1/t on [2,∞), smooth monotone bridge on
/// (1,2) via g(t) = 1 + (1/t - 1)·s(t-1).
pub fn g_profile(t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(SemiError::Config {
            field: "t".into(),
            message: format!("g_profile needs t ≥ 0, got {t}"),
        });
    }
    Ok(if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        1.0 / t
    } else {
        1.0 + (1.0 / t - 1.0) * smoothstep(t - 1.0)
    })
}

/// Compactly supported piecewise-linear antiderivative of δ(t) - ½χ_{[-1,1]}.
/// Odd, with a unit jump at 0: J(0⁻) = -½, J(0⁺) = ½.
pub fn j_profile(t: f64) -> f64 {
    if t <= -1.0 || t >= 1.0 {
        0.0
    } else if t < 0.0 {
        -(1.0 + t) / 2.0
    } else {
        (1.0 - t) / 2.0
    }
}

/// (Re p₀)_ε(X) = χ₀(X)·g(|X|²/ε)·Re p₀(X) + ε(1-χ₀(X))·Re p₀(X).
pub fn modified_symbol(spec: &SymbolSpec, params: &WeightParams, pt: &PhasePoint) -> Result<f64> {
    params.validate()?;
    let re_p0 = spec.p0_value(pt)?.re;
    let (chi0, _) = cutoff(pt.norm(), params.chi0_radius);
    let g = g_profile(pt.norm().powi(2) / params.epsilon)?;
    Ok(chi0 * g * re_p0 + params.epsilon * (1.0 - chi0) * re_p0)
}

/// Panels per half-window for the t-quadrature. The integrand jumps at t = 0
/// (the δ part of J'), so the two halves are integrated separately.
const WEIGHT_PANELS: usize = 128;

/// G_ε(X) = ∫ J(t/T)·(Re p₀)_ε(e^{tH_{Im p₀}}X) dt.
pub fn weight_g(spec: &SymbolSpec, params: &WeightParams, pt: &PhasePoint) -> Result<f64> {
    params.validate()?;
    let t_win = params.t_window;
    let cfg = FlowConfig::for_spec(spec, t_win);
    let mut err: Option<SemiError> = None;
    let mut half = |a: f64, b: f64| {
        gauss_legendre(a, b, WEIGHT_PANELS, |t| {
            if err.is_some() {
                return 0.0;
            }
            let v = flow(spec, pt, t, &cfg)
                .and_then(|moved| modified_symbol(spec, params, &moved));
            match v {
                Ok(v) => j_profile(t / t_win) * v,
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            }
        })
    };
    let total = half(-t_win, 0.0) + half(0.0, t_win);
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// G₀(X) = ∫ J(t/T)·Re q(e^{tH_{Im q}}X) dt, with the exact linear flow.
pub fn weight_g0(qm: &QuadraticModel, t_window: f64, pt: &PhasePoint) -> f64 {
    let coords = pt.coords();
    let eval = |t: f64| {
        let phi = linear_flow_matrix(&qm.im_q, t);
        let moved: Vec<f64> = (0..coords.len())
            .map(|i| (0..coords.len()).map(|j| phi[[i, j]] * coords[j]).sum())
            .collect();
        j_profile(t / t_window) * qm.re_value(&PhasePoint::from_coords(&moved))
    };
    gauss_legendre(-t_window, 0.0, WEIGHT_PANELS, eval)
        + gauss_legendre(0.0, t_window, WEIGHT_PANELS, eval)
}

const FD_STEP: f64 = 1e-4;

/// d/ds G_ε(e^{sH_{Im p₀}}X)|_{s=0} by central differences along the flow.
pub fn weight_g_flow_derivative(
    spec: &SymbolSpec,
    params: &WeightParams,
    pt: &PhasePoint,
) -> Result<f64> {
    let cfg = FlowConfig::for_spec(spec, params.t_window);
    let plus = weight_g(spec, params, &flow(spec, pt, FD_STEP, &cfg)?)?;
    let minus = weight_g(spec, params, &flow(spec, pt, -FD_STEP, &cfg)?)?;
    Ok((plus - minus) / (2.0 * FD_STEP))
}

/// Max over samples of |H_{Im p₀}G_ε - (⟨(Re p₀)_ε⟩ - (Re p₀)_ε)|.
pub fn verify_cohomology(
    spec: &SymbolSpec,
    params: &WeightParams,
    samples: &[PhasePoint],
) -> Result<f64> {
    params.validate()?;
    let mut cfg = FlowConfig::for_spec(spec, params.t_window);
    cfg.panels = WEIGHT_PANELS;
    let mut worst = 0.0f64;
    for pt in samples {
        let lhs = weight_g_flow_derivative(spec, params, pt)?;
        let avg = time_average(|y| modified_symbol(spec, params, y), spec, pt, &cfg)?;
        let rhs = avg - modified_symbol(spec, params, pt)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Hamilton field of G_ε, (∂_ξ G, -∂_x G), by central differences of the
/// weight in each phase-space direction.
pub fn hamilton_g(spec: &SymbolSpec, params: &WeightParams, pt: &PhasePoint) -> Result<Vec<f64>> {
    let n = spec.n;
    let coords = pt.coords();
    let mut grad = vec![0.0; 2 * n];
    for j in 0..2 * n {
        let mut up = coords.clone();
        let mut dn = coords.clone();
        up[j] += FD_STEP;
        dn[j] -= FD_STEP;
        let gp = weight_g(spec, params, &PhasePoint::from_coords(&up))?;
        let gm = weight_g(spec, params, &PhasePoint::from_coords(&dn))?;
        grad[j] = (gp - gm) / (2.0 * FD_STEP);
    }
    let mut ham = vec![0.0; 2 * n];
    for j in 0..n {
        ham[j] = grad[n + j]; // ∂_ξ G
        ham[n + j] = -grad[j]; // -∂_x G
    }
    Ok(ham)
}

/// Re p̃₀(X + iδH_{G_ε}(X)).
pub fn deformed_real_part(
    spec: &SymbolSpec,
    params: &WeightParams,
    pt: &PhasePoint,
) -> Result<f64> {
    let ham = hamilton_g(spec, params, pt)?;
    let y: Vec<f64> = ham.iter().map(|&v| params.delta * v).collect();
    Ok(spec.eval_extension(pt, &y)?.re)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionResult {
    pub tag: String,
    pub min_value: f64,
    /// Constant making the relevant lower bound (δ|X|²/C locally, δε/C
    /// outward) hold at every sample.
    pub fitted_c: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EllipticityReport {
    pub regions: Vec<RegionResult>,
    pub pass: bool,
}

/// Region-splitting constant from the four-region argument.
const REGION_C: f64 = 10.0;

/// Sample Re p̃₀(X + iδH_{G_ε})(X) over the four regions
/// |X|² ≤ ε/C, [ε/C, Cε], [Cε, 1/C], [1/C, R²] and report per-region minima.
pub fn verify_ellipticity(
    spec: &SymbolSpec,
    params: &WeightParams,
    r_max: f64,
    per_shell: usize,
) -> Result<EllipticityReport> {
    params.validate()?;
    let eps = params.epsilon;
    let c = REGION_C;
    let bands: [(&str, f64, f64); 4] = [
        ("local", 0.0, (eps / c).sqrt()),
        ("transition", (eps / c).sqrt(), (c * eps).sqrt()),
        ("intermediate", (c * eps).sqrt(), (1.0 / c).sqrt()),
        ("exterior", (1.0 / c).sqrt(), r_max),
    ];
    let mut regions = Vec::new();
    for (tag, r_in, r_out) in bands {
        let pts = annulus_samples(spec.n, r_in.max(1e-3 * r_out), r_out, per_shell);
        let mut min_value = f64::INFINITY;
        let mut fitted_c = 0.0f64;
        let mut count = 0usize;
        for pt in &pts {
            let v = deformed_real_part(spec, params, pt)?;
            min_value = min_value.min(v);
            let lower = if tag == "local" || tag == "transition" {
                params.delta * pt.norm().powi(2)
            } else {
                params.delta * eps
            };
            if v > 0.0 {
                fitted_c = fitted_c.max(lower / v);
            }
            count += 1;
        }
        regions.push(RegionResult {
            tag: tag.into(),
            min_value,
            fitted_c,
            samples: count,
        });
    }
    let pass = regions.iter().all(|r| r.min_value > 0.0);
    Ok(EllipticityReport { regions, pass })
}
