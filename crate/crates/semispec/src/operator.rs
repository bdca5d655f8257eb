//! Grid discretization of P = -h²Δ + V + iW + h·p₁(0,0).

use crate::error::{Result, SemiError};
use crate::fields::ScalarField;
use crate::symbols::{cutoff, SymbolForm, SymbolSpec};
use ndarray::Array2;
use ndarray_linalg::Eig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    PeriodicFourier,
    DirichletFd,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    /// Box half-width: x ∈ [-L, L)ⁿ.
    pub l: f64,
    /// Points per axis.
    pub n_points: usize,
    pub bc: BoundaryCondition,
}

impl GridSpec {
    pub fn periodic(n: usize, l: f64, n_points: usize) -> Self {
        GridSpec { n, l, n_points, bc: BoundaryCondition::PeriodicFourier }
    }

    pub fn dirichlet(n: usize, l: f64, n_points: usize) -> Self {
        GridSpec { n, l, n_points, bc: BoundaryCondition::DirichletFd }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bc == BoundaryCondition::PeriodicFourier && !self.n_points.is_power_of_two() {
            return Err(SemiError::Config {
                field: "n_points".into(),
                message: format!("periodic grid needs a power of two, got {}", self.n_points),
            });
        }
        if self.l <= 0.0 || self.n_points < 4 {
            return Err(SemiError::Config {
                field: "grid".into(),
                message: format!("need L > 0 and N ≥ 4, got L = {}, N = {}", self.l, self.n_points),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n_points.pow(self.n as u32)
    }

    /// Grid coordinates along one axis.
    pub fn axis(&self) -> Vec<f64> {
        let nn = self.n_points;
        match self.bc {
            BoundaryCondition::PeriodicFourier => {
                let dx = 2.0 * self.l / nn as f64;
                (0..nn).map(|j| -self.l + j as f64 * dx).collect()
            }
            BoundaryCondition::DirichletFd => {
                let dx = 2.0 * self.l / (nn + 1) as f64;
                (1..=nn).map(|j| -self.l + j as f64 * dx).collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub matrix: Array2<Complex64>,
    pub h: f64,
    pub grid: GridSpec,
}

fn schrodinger_parts(spec: &SymbolSpec) -> Result<(&ScalarField, &ScalarField, Option<f64>)> {
    match &spec.form {
        SymbolForm::Schrodinger { v, w } => Ok((v, w, spec.flatten_radius)),
        SymbolForm::Flattened { base, radius } => {
            let (v, w, _) = schrodinger_parts(base)?;
            Ok((v, w, Some(*radius)))
        }
        SymbolForm::General { .. } => Err(SemiError::NotSchrodinger(
            "grid discretization supports Schrödinger symbols only".into(),
        )),
    }
}

/// Potential sample, flattened in x when a radius is set:
/// χ_R(|x|)(V + iW) + (1 - χ_R)·1 so the periodic wrap sees a constant.
fn potential_at(
    v: &ScalarField,
    w: &ScalarField,
    radius: Option<f64>,
    x: &[f64],
) -> Result<Complex64> {
    let raw = v.eval(x)? + Complex64::new(0.0, 1.0) * w.eval(x)?;
    Ok(match radius {
        Some(r) => {
            let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            let (chi, _) = cutoff(norm, r);
            chi * raw + Complex64::new(1.0 - chi, 0.0)
        }
        None => raw,
    })
}

/// 1D kinetic block -h²∂² on the chosen grid.
fn kinetic_1d(grid: &GridSpec, h: f64) -> Array2<Complex64> {
    let nn = grid.n_points;
    match grid.bc {
        BoundaryCondition::PeriodicFourier => {
            // K = C† diag(h²k²) C with k_m = πm/L, m ∈ [-N/2, N/2)
            let xs = grid.axis();
            let mut c = Array2::<Complex64>::zeros((nn, nn));
            let scale = 1.0 / (nn as f64).sqrt();
            let ks: Vec<f64> = (0..nn)
                .map(|m| {
                    let shifted = m as i64 - (nn / 2) as i64;
                    PI * shifted as f64 / grid.l
                })
                .collect();
            for (m, &k) in ks.iter().enumerate() {
                for (j, &x) in xs.iter().enumerate() {
                    c[[m, j]] = Complex64::from_polar(scale, -k * x);
                }
            }
            let mut diag_c = c.clone();
            for (m, &k) in ks.iter().enumerate() {
                let e = Complex64::new(h * h * k * k, 0.0);
                for j in 0..nn {
                    diag_c[[m, j]] *= e;
                }
            }
            let mut ch = Array2::<Complex64>::zeros((nn, nn));
            for i in 0..nn {
                for j in 0..nn {
                    ch[[i, j]] = c[[j, i]].conj();
                }
            }
            ch.dot(&diag_c)
        }
        BoundaryCondition::DirichletFd => {
            let dx = 2.0 * grid.l / (nn + 1) as f64;
            let coeff = h * h / (dx * dx);
            let mut k = Array2::<Complex64>::zeros((nn, nn));
            for i in 0..nn {
                k[[i, i]] = Complex64::new(2.0 * coeff, 0.0);
                if i + 1 < nn {
                    k[[i, i + 1]] = Complex64::new(-coeff, 0.0);
                    k[[i + 1, i]] = Complex64::new(-coeff, 0.0);
                }
            }
            k
        }
    }
}

/// Assemble the dense matrix of -h²Δ + V + iW + h·p₁(0,0) on the grid.
pub fn discretize(spec: &SymbolSpec, h: f64, grid: &GridSpec) -> Result<OperatorMatrix> {
    grid.validate()?;
    if grid.n != spec.n {
        return Err(SemiError::DimensionMismatch { expected: spec.n, got: grid.n });
    }
    let (v, w, radius) = schrodinger_parts(spec)?;
    let nn = grid.n_points;
    let dim = grid.dim();
    let k1 = kinetic_1d(grid, h);
    let xs = grid.axis();

    let mut mat = Array2::<Complex64>::zeros((dim, dim));
    match grid.n {
        1 => {
            mat.assign(&k1);
            for (j, &x) in xs.iter().enumerate() {
                mat[[j, j]] += potential_at(v, w, radius, &[x])?;
            }
        }
        2 => {
            // K₁⊗I + I⊗K₁, row-major index i = a·N + b
            for a in 0..nn {
                for ap in 0..nn {
                    let kv = k1[[a, ap]];
                    if kv.norm() == 0.0 {
                        continue;
                    }
                    for b in 0..nn {
                        mat[[a * nn + b, ap * nn + b]] += kv;
                    }
                }
            }
            for b in 0..nn {
                for bp in 0..nn {
                    let kv = k1[[b, bp]];
                    if kv.norm() == 0.0 {
                        continue;
                    }
                    for a in 0..nn {
                        mat[[a * nn + b, a * nn + bp]] += kv;
                    }
                }
            }
            for a in 0..nn {
                for b in 0..nn {
                    let i = a * nn + b;
                    mat[[i, i]] += potential_at(v, w, radius, &[xs[a], xs[b]])?;
                }
            }
        }
        d => {
            return Err(SemiError::Config {
                field: "n".into(),
                message: format!("dense discretization supports n ≤ 2, got {d}"),
            });
        }
    }
    let shift = spec.p1_at_origin() * h;
    for i in 0..dim {
        mat[[i, i]] += shift;
    }
    Ok(OperatorMatrix { matrix: mat, h, grid: grid.clone() })
}

/// k eigenvalues of smallest modulus by dense eigendecomposition.
pub fn low_eigenvalues(op: &OperatorMatrix, k: usize) -> Result<Vec<Complex64>> {
    let dim = op.matrix.nrows();
    if k > dim / 4 {
        return Err(SemiError::Config {
            field: "k".into(),
            message: format!("need k ≤ dim/4: k = {k}, dim = {dim}"),
        });
    }
    let (eigs, _) = op
        .matrix
        .eig()
        .map_err(|e| SemiError::Linalg(e.to_string()))?;
    let mut all: Vec<Complex64> = eigs.iter().cloned().collect();
    all.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    Ok(all.into_iter().take(k).collect())
}
