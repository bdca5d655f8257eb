//! Scalar fields over ℝ^k: exact polynomials with complex coefficients and a
//! small catalog of closed-form non-polynomial profiles.

use crate::error::{Result, SemiError};
use crate::util::bump;
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A single monomial term: coeff * prod_j v_j^exps[j].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exps: Vec<u32>,
    /// Complex coefficient serialized as [re, im].
    #[serde(with = "complex_pair")]
    pub coeff: Complex64,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarField {
    Polynomial { nvars: usize, terms: Vec<Term> },
    Catalog {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

impl ScalarField {
    pub fn zero(nvars: usize) -> Self {
        ScalarField::Polynomial { nvars, terms: vec![] }
    }

    /// coeff * v_j^power
    pub fn monomial(nvars: usize, var: usize, power: u32, coeff: f64) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = power;
        ScalarField::Polynomial {
            nvars,
            terms: vec![Term { exps, coeff: Complex64::new(coeff, 0.0) }],
        }
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, f64)>) -> Self {
        ScalarField::Polynomial {
            nvars,
            terms: terms
                .into_iter()
                .map(|(exps, c)| Term { exps, coeff: Complex64::new(c, 0.0) })
                .collect(),
        }
    }

    /// The flat-well profile θ(x² - 1), θ(s) = exp(-1/s) for s > 0 and 0
    /// otherwise. Vanishes identically on [-1, 1] and tends to 1 at infinity.
    pub fn flat_well() -> Self {
        ScalarField::Catalog { name: "flat_well".into(), params: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        match self {
            ScalarField::Polynomial { nvars, .. } => *nvars,
            ScalarField::Catalog { .. } => 1,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, ScalarField::Polynomial { .. })
    }

    /// True when every coefficient is real (catalog entries are real-valued).
    pub fn is_real(&self) -> bool {
        match self {
            ScalarField::Polynomial { terms, .. } => terms.iter().all(|t| t.coeff.im == 0.0),
            ScalarField::Catalog { .. } => true,
        }
    }

    pub fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.nvars() {
            return Err(SemiError::DimensionMismatch { expected: self.nvars(), got: len });
        }
        Ok(())
    }

    pub fn eval(&self, v: &[f64]) -> Result<Complex64> {
        self.check_dim(v.len())?;
        match self {
            ScalarField::Polynomial { terms, .. } => Ok(terms
                .iter()
                .map(|t| {
                    t.coeff
                        * t.exps
                            .iter()
                            .zip(v)
                            .map(|(&e, &x)| x.powi(e as i32))
                            .product::<f64>()
                })
                .sum()),
            ScalarField::Catalog { name, .. } => match name.as_str() {
                "flat_well" => Ok(Complex64::new(bump(v[0] * v[0] - 1.0), 0.0)),
                other => Err(SemiError::Config {
                    field: "catalog".into(),
                    message: format!("unknown catalog field `{other}`"),
                }),
            },
        }
    }

    /// Evaluate at a complex point. Exact for polynomials; for `flat_well`
    /// only the region where the profile is real-analytic is continued, the
    /// flat region is extended by zero.
    pub fn eval_complex(&self, v: &[Complex64]) -> Result<Complex64> {
        self.check_dim(v.len())?;
        match self {
            ScalarField::Polynomial { terms, .. } => Ok(terms
                .iter()
                .map(|t| {
                    t.coeff
                        * t.exps
                            .iter()
                            .zip(v)
                            .map(|(&e, &z)| z.powu(e))
                            .product::<Complex64>()
                })
                .sum()),
            ScalarField::Catalog { name, .. } => match name.as_str() {
                "flat_well" => {
                    let s = v[0] * v[0] - Complex64::new(1.0, 0.0);
                    if s.re > 0.0 {
                        Ok((-s.inv()).exp())
                    } else {
                        Ok(Complex64::new(0.0, 0.0))
                    }
                }
                other => Err(SemiError::Config {
                    field: "catalog".into(),
                    message: format!("unknown catalog field `{other}`"),
                }),
            },
        }
    }

    pub fn grad(&self, v: &[f64]) -> Result<Vec<Complex64>> {
        self.check_dim(v.len())?;
        match self {
            ScalarField::Polynomial { nvars, terms } => {
                let mut g = vec![Complex64::new(0.0, 0.0); *nvars];
                for t in terms {
                    for (j, gj) in g.iter_mut().enumerate() {
                        let e = t.exps[j];
                        if e == 0 {
                            continue;
                        }
                        let mut prod = t.coeff * e as f64;
                        for (k, (&ek, &x)) in t.exps.iter().zip(v).enumerate() {
                            let p = if k == j { ek - 1 } else { ek };
                            prod *= x.powi(p as i32);
                        }
                        *gj += prod;
                    }
                }
                Ok(g)
            }
            ScalarField::Catalog { name, .. } => match name.as_str() {
                "flat_well" => {
                    let x = v[0];
                    let s = x * x - 1.0;
                    let d = if s > 0.0 {
                        // d/dx θ(x²-1) = θ'(s)·2x, θ'(s) = e^{-1/s}/s²
                        (-1.0 / s).exp() / (s * s) * 2.0 * x
                    } else {
                        0.0
                    };
                    Ok(vec![Complex64::new(d, 0.0)])
                }
                other => Err(SemiError::Config {
                    field: "catalog".into(),
                    message: format!("unknown catalog field `{other}`"),
                }),
            },
        }
    }

    pub fn hessian(&self, v: &[f64]) -> Result<Array2<Complex64>> {
        self.check_dim(v.len())?;
        match self {
            ScalarField::Polynomial { nvars, terms } => {
                let mut h = Array2::from_elem((*nvars, *nvars), Complex64::new(0.0, 0.0));
                for t in terms {
                    for j in 0..*nvars {
                        for k in 0..*nvars {
                            let (ej, ek) = (t.exps[j], t.exps[k]);
                            let factor = if j == k {
                                if ej < 2 {
                                    continue;
                                }
                                (ej * (ej - 1)) as f64
                            } else {
                                if ej == 0 || ek == 0 {
                                    continue;
                                }
                                (ej * ek) as f64
                            };
                            let mut prod = t.coeff * factor;
                            for (m, (&em, &x)) in t.exps.iter().zip(v).enumerate() {
                                let mut p = em;
                                if m == j {
                                    p -= 1;
                                }
                                if m == k {
                                    p -= 1;
                                }
                                prod *= x.powi(p as i32);
                            }
                            h[[j, k]] += prod;
                        }
                    }
                }
                Ok(h)
            }
            ScalarField::Catalog { name, .. } => match name.as_str() {
                "flat_well" => {
                    let x = v[0];
                    let s = x * x - 1.0;
                    let d2 = if s > 0.0 {
                        let e = (-1.0 / s).exp();
                        let th1 = e / (s * s);
                        let th2 = e * (1.0 / s.powi(4) - 2.0 / s.powi(3));
                        th2 * 4.0 * x * x + th1 * 2.0
                    } else {
                        0.0
                    };
                    let mut h = Array2::from_elem((1, 1), Complex64::new(0.0, 0.0));
                    h[[0, 0]] = Complex64::new(d2, 0.0);
                    Ok(h)
                }
                other => Err(SemiError::Config {
                    field: "catalog".into(),
                    message: format!("unknown catalog field `{other}`"),
                }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fd_grad(f: &ScalarField, v: &[f64], step: f64) -> Vec<f64> {
        (0..v.len())
            .map(|j| {
                let mut vp = v.to_vec();
                let mut vm = v.to_vec();
                vp[j] += step;
                vm[j] -= step;
                (f.eval(&vp).unwrap().re - f.eval(&vm).unwrap().re) / (2.0 * step)
            })
            .collect()
    }

    #[test]
    fn polynomial_eval_and_grad() {
        // f = x^2 y + 3y
        let f = ScalarField::from_terms(2, vec![(vec![2, 1], 1.0), (vec![0, 1], 3.0)]);
        let v = [2.0, -1.0];
        assert_relative_eq!(f.eval(&v).unwrap().re, -7.0);
        let g = f.grad(&v).unwrap();
        assert_relative_eq!(g[0].re, -4.0);
        assert_relative_eq!(g[1].re, 7.0);
        let h = f.hessian(&v).unwrap();
        assert_relative_eq!(h[[0, 0]].re, -2.0);
        assert_relative_eq!(h[[0, 1]].re, 4.0);
        assert_relative_eq!(h[[1, 0]].re, 4.0);
    }

    #[test]
    fn flat_well_values_and_derivatives() {
        let f = ScalarField::flat_well();
        assert_eq!(f.eval(&[0.5]).unwrap().re, 0.0);
        assert_eq!(f.eval(&[1.0]).unwrap().re, 0.0);
        let v3 = f.eval(&[2.0]).unwrap().re;
        assert_relative_eq!(v3, (-1.0f64 / 3.0).exp(), epsilon = 1e-15);
        // analytic derivatives vs finite differences
        for &x in &[1.5, 2.0, 3.0] {
            let g = f.grad(&[x]).unwrap()[0].re;
            let gfd = fd_grad(&f, &[x], 1e-6)[0];
            assert_relative_eq!(g, gfd, max_relative = 1e-7);
            let h = f.hessian(&[x]).unwrap()[[0, 0]].re;
            let hfd = (f.grad(&[x + 1e-6]).unwrap()[0].re - f.grad(&[x - 1e-6]).unwrap()[0].re)
                / 2e-6;
            assert_relative_eq!(h, hfd, max_relative = 1e-6);
        }
        // vanishes to second order on the flat region
        assert_eq!(f.grad(&[0.9]).unwrap()[0].re, 0.0);
        assert_eq!(f.hessian(&[0.0]).unwrap()[[0, 0]].re, 0.0);
    }

    #[test]
    fn complex_eval_matches_real_axis() {
        let f = ScalarField::from_terms(1, vec![(vec![3], 2.0)]);
        let z = [Complex64::new(1.5, 0.0)];
        assert_relative_eq!(f.eval_complex(&z).unwrap().re, 2.0 * 1.5f64.powi(3));
    }

    #[test]
    fn serde_round_trip() {
        let f = ScalarField::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0)]);
        let s = serde_json::to_string(&f).unwrap();
        let back: ScalarField = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
    }
}
