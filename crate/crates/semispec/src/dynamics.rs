//! Hamiltonian flow of Im p₀, time averages ⟨a⟩_{b,T} along it, and the
//! dynamical conditions on the averaged symbol.

use crate::error::{Result, SemiError};
use crate::quadmodel::{linear_flow_matrix, QuadraticModel};
use crate::symbols::{annulus_samples, PhasePoint, SymbolForm, SymbolSpec};
use crate::util::gauss_legendre;
use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowMethod {
    /// (x, ξ) ↦ (x, ξ - t∇W(x)); exact for Schrödinger symbols.
    ClosedFormSchrodinger,
    Rk4,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowConfig {
    pub method: FlowMethod,
    /// rk4 step.
    pub dt: f64,
    /// Averaging window [-T, T].
    pub t_window: f64,
    /// Quadrature panels per half-window.
    pub panels: usize,
}

impl FlowConfig {
    pub fn closed_form(t_window: f64) -> Self {
        FlowConfig {
            method: FlowMethod::ClosedFormSchrodinger,
            dt: t_window / 1000.0,
            t_window,
            panels: 64,
        }
    }

    pub fn rk4(t_window: f64) -> Self {
        FlowConfig { method: FlowMethod::Rk4, dt: t_window / 1000.0, t_window, panels: 64 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.method == FlowMethod::Rk4 && self.dt > self.t_window / 50.0 {
            return Err(SemiError::Config {
                field: "dt".into(),
                message: format!("rk4 requires dt ≤ T/50, got dt = {}, T = {}", self.dt, self.t_window),
            });
        }
        Ok(())
    }

    /// Default method for a spec: closed form whenever the symbol is (built
    /// from) a Schrödinger form.
    pub fn for_spec(spec: &SymbolSpec, t_window: f64) -> Self {
        fn schrod(form: &SymbolForm) -> bool {
            match form {
                SymbolForm::Schrodinger { .. } => true,
                SymbolForm::Flattened { base, .. } => schrod(&base.form),
                SymbolForm::General { .. } => false,
            }
        }
        if schrod(&spec.form) {
            Self::closed_form(t_window)
        } else {
            Self::rk4(t_window)
        }
    }
}

const DIVERGENCE_GUARD: f64 = 1e6;

fn base_w(spec: &SymbolSpec) -> Result<&crate::fields::ScalarField> {
    match &spec.form {
        SymbolForm::Schrodinger { w, .. } => Ok(w),
        SymbolForm::Flattened { base, .. } => base_w(base),
        SymbolForm::General { .. } => Err(SemiError::NotSchrodinger(
            "closed-form flow needs a Schrödinger symbol".into(),
        )),
    }
}

/// e^{tH_{Im p₀}}(X).
pub fn flow(spec: &SymbolSpec, start: &PhasePoint, t: f64, cfg: &FlowConfig) -> Result<PhasePoint> {
    spec.check_dim(start)?;
    cfg.validate()?;
    match cfg.method {
        FlowMethod::ClosedFormSchrodinger => {
            let w = base_w(spec)?;
            let gw = w.grad(&start.x)?;
            let xi: Vec<f64> = start
                .xi
                .iter()
                .zip(&gw)
                .map(|(&xi_j, g)| xi_j - t * g.re)
                .collect();
            let out = PhasePoint::new(start.x.clone(), xi);
            if out.norm() > DIVERGENCE_GUARD {
                return Err(SemiError::FlowDiverged { start: start.clone(), t, norm: out.norm() });
            }
            Ok(out)
        }
        FlowMethod::Rk4 => {
            let steps = (t.abs() / cfg.dt).ceil().max(1.0) as usize;
            let h = t / steps as f64;
            let mut y = start.coords();
            for _ in 0..steps {
                let f = |v: &[f64]| -> Result<Vec<f64>> {
                    spec.hamilton_im(&PhasePoint::from_coords(v))
                };
                let k1 = f(&y)?;
                let y2: Vec<f64> = y.iter().zip(&k1).map(|(a, b)| a + 0.5 * h * b).collect();
                let k2 = f(&y2)?;
                let y3: Vec<f64> = y.iter().zip(&k2).map(|(a, b)| a + 0.5 * h * b).collect();
                let k3 = f(&y3)?;
                let y4: Vec<f64> = y.iter().zip(&k3).map(|(a, b)| a + h * b).collect();
                let k4 = f(&y4)?;
                for j in 0..y.len() {
                    y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
                }
                let norm = y.iter().map(|c| c * c).sum::<f64>().sqrt();
                if norm > DIVERGENCE_GUARD {
                    return Err(SemiError::FlowDiverged { start: start.clone(), t, norm });
                }
            }
            Ok(PhasePoint::from_coords(&y))
        }
    }
}

/// ⟨a⟩_{Im p₀,T}(X) = (1/2T)∫_{-T}^{T} a(e^{tH_{Im p₀}}X) dt by composite
/// Gauss-Legendre quadrature along the flow of `spec`.
pub fn time_average<F>(a: F, spec: &SymbolSpec, start: &PhasePoint, cfg: &FlowConfig) -> Result<f64>
where
    F: Fn(&PhasePoint) -> Result<f64>,
{
    let t = cfg.t_window;
    let mut err: Option<SemiError> = None;
    let integral = gauss_legendre(-t, t, 2 * cfg.panels.max(1), |s| {
        if err.is_some() {
            return 0.0;
        }
        match flow(spec, start, s, cfg).and_then(|pt| a(&pt)) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                0.0
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(integral / (2.0 * t)),
    }
}

/// ⟨Re p₀⟩_{Im p₀,T}(X).
pub fn average_re_p0(spec: &SymbolSpec, start: &PhasePoint, cfg: &FlowConfig) -> Result<f64> {
    time_average(|pt| Ok(spec.p0_value(pt)?.re), spec, start, cfg)
}

/// ⟨Re q⟩_{Im q,T} assembled as a 2n×2n matrix by averaging the exactly
/// linear flow of Im q.
pub fn averaged_quadratic_form(qm: &QuadraticModel, t_window: f64, panels: usize) -> Array2<f64> {
    let dim = 2 * qm.n;
    let mut acc = Array2::<f64>::zeros((dim, dim));
    // accumulate Φ(t)ᵀ ReQ Φ(t) entrywise through shared quadrature weights
    let mut entries: Vec<(usize, usize)> = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            entries.push((i, j));
        }
    }
    for &(i, j) in &entries {
        let v = gauss_legendre(-t_window, t_window, panels, |t| {
            let phi = linear_flow_matrix(&qm.im_q, t);
            let m = phi.t().dot(&qm.re_q).dot(&phi);
            m[[i, j]]
        });
        acc[[i, j]] = v / (2.0 * t_window);
    }
    acc
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DynReport {
    /// Smallest eigenvalue of ⟨Re q⟩_{Im q,T}.
    pub quad_avg_eigmin: f64,
    /// δ ↦ min of ⟨Re p₀⟩ over sampled annuli δ < |X| ≤ R_max.
    pub exterior_min: Vec<(f64, f64)>,
    pub quad_condition_ok: bool,
    pub exterior_condition_ok: bool,
    pub pass: bool,
}

/// Check the dynamical conditions: ellipticity of the averaged quadratic form
/// and positivity of ⟨Re p₀⟩ on exterior annuli up to R_max.
pub fn check_dyn_conditions(
    spec: &SymbolSpec,
    qm: &QuadraticModel,
    t_window: f64,
    deltas: &[f64],
    r_max: f64,
    per_shell: usize,
) -> Result<DynReport> {
    let avg = averaged_quadratic_form(qm, t_window, 64);
    let sym = (&avg + &avg.t()) * 0.5;
    let (eigs, _) = sym
        .eigh(UPLO::Lower)
        .map_err(|e| SemiError::Linalg(e.to_string()))?;
    let quad_avg_eigmin = eigs.iter().cloned().fold(f64::INFINITY, f64::min);

    let cfg = FlowConfig::for_spec(spec, t_window);
    let mut exterior_min = Vec::new();
    for &delta in deltas {
        let mut min_avg = f64::INFINITY;
        for pt in annulus_samples(spec.n, delta, r_max, per_shell.max(8)) {
            if pt.norm() <= delta {
                continue;
            }
            min_avg = min_avg.min(average_re_p0(spec, &pt, &cfg)?);
        }
        exterior_min.push((delta, min_avg));
    }

    let quad_condition_ok = quad_avg_eigmin > 0.0;
    let exterior_condition_ok = exterior_min.iter().all(|&(_, m)| m > 0.0);
    Ok(DynReport {
        quad_avg_eigmin,
        exterior_min,
        quad_condition_ok,
        exterior_condition_ok,
        pass: quad_condition_ok && exterior_condition_ok,
    })
}

/// Fit the flow-displacement constant: max over samples and a t-grid of
/// |e^{tH}(X) - X| / (t|X|). The origin (a fixed point) is skipped.
pub fn check_gronwall(
    spec: &SymbolSpec,
    t_window: f64,
    samples: &[PhasePoint],
    t_steps: usize,
) -> Result<f64> {
    let cfg = FlowConfig::for_spec(spec, t_window);
    let mut c_fit = 0.0f64;
    for pt in samples {
        let r = pt.norm();
        if r < 1e-12 {
            continue;
        }
        for k in 1..=t_steps {
            let t = t_window * k as f64 / t_steps as f64;
            let moved = flow(spec, pt, t, &cfg)?;
            let disp: f64 = moved
                .coords()
                .iter()
                .zip(pt.coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            c_fit = c_fit.max(disp / (t * r));
        }
    }
    Ok(c_fit)
}
