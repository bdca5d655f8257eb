//! The quadratic approximation q of p₀ at the origin, its Hamilton map, and
//! the eigenvalue lattice of the quantization Q = q^w(x,D), cross-checked by
//! a brute-force Hermite-Galerkin oracle.

use crate::error::{Result, SemiError};
use crate::symbols::{PhasePoint, SymbolSpec};
use ndarray::{Array2, ArrayView2};
use ndarray_linalg::{Eig, Eigh, UPLO};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

type C64 = Complex64;

/// Hessian data of q at the origin: q(X) = ⟨ReQ·X,X⟩ + i⟨ImQ·X,X⟩.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadraticModel {
    pub n: usize,
    pub re_q: Array2<f64>,
    pub im_q: Array2<f64>,
}

impl QuadraticModel {
    pub fn from_matrices(re_q: Array2<f64>, im_q: Array2<f64>) -> Self {
        let n = re_q.nrows() / 2;
        QuadraticModel { n, re_q, im_q }
    }

    /// 1D model q = ξ² + c·x² for a complex coefficient c.
    pub fn oscillator_1d(c: C64) -> Self {
        let mut re_q = Array2::zeros((2, 2));
        let mut im_q = Array2::zeros((2, 2));
        re_q[[0, 0]] = c.re;
        re_q[[1, 1]] = 1.0;
        im_q[[0, 0]] = c.im;
        QuadraticModel { n: 1, re_q, im_q }
    }

    pub fn re_value(&self, pt: &PhasePoint) -> f64 {
        quad_form(&self.re_q.view(), &pt.coords())
    }

    pub fn im_value(&self, pt: &PhasePoint) -> f64 {
        quad_form(&self.im_q.view(), &pt.coords())
    }
}

fn quad_form(m: &ArrayView2<f64>, v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        for j in 0..v.len() {
            s += m[[i, j]] * v[i] * v[j];
        }
    }
    s
}

/// Standard symplectic matrix J = [[0, I], [-I, 0]] in (x, ξ) ordering.
pub fn symplectic_j(n: usize) -> Array2<f64> {
    let mut j = Array2::zeros((2 * n, 2 * n));
    for k in 0..n {
        j[[k, n + k]] = 1.0;
        j[[n + k, k]] = -1.0;
    }
    j
}

/// exp(A) by scaling and squaring with a Taylor series; adequate for the
/// small (2n × 2n) matrices handled here.
pub fn expm(a: &Array2<f64>) -> Array2<f64> {
    let norm = a.iter().map(|v| v.abs()).fold(0.0f64, f64::max) * a.nrows() as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / 2.0f64.powi(squarings as i32);
    let dim = a.nrows();
    let mut result = Array2::eye(dim);
    let mut term = Array2::eye(dim);
    for k in 1..=20 {
        term = term.dot(&scaled) / k as f64;
        result = result + &term;
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Flow matrix of the linear Hamiltonian flow of the quadratic form with
/// Hessian/2 matrix `b`: e^{tH_b} = exp(2tJb).
pub fn linear_flow_matrix(b: &Array2<f64>, t: f64) -> Array2<f64> {
    let n = b.nrows() / 2;
    let j = symplectic_j(n);
    expm(&(j.dot(b) * (2.0 * t)))
}

/// Build the quadratic model from exact Hessians of p₀ at the origin.
pub fn quadratic_model(spec: &SymbolSpec) -> Result<QuadraticModel> {
    let origin = PhasePoint::from_coords(&vec![0.0; 2 * spec.n]);
    let value = spec.p0_value(&origin)?;
    let grad = spec.p0_grad(&origin)?;
    let grad_norm: f64 = grad.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if value.norm() > 1e-10 || grad_norm > 1e-10 {
        return Err(SemiError::OriginNotCritical { value: value.norm(), grad: grad_norm });
    }
    let h = spec.p0_hessian(&origin)?;
    let dim = 2 * spec.n;
    let mut re_q = Array2::zeros((dim, dim));
    let mut im_q = Array2::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            let sym = 0.25 * (h[[i, j]] + h[[j, i]]);
            re_q[[i, j]] = sym.re;
            im_q[[i, j]] = sym.im;
        }
    }
    // Re q must be positive semi-definite
    let (eigs, _) = re_q
        .eigh(UPLO::Lower)
        .map_err(|e| SemiError::Linalg(e.to_string()))?;
    if eigs.iter().any(|&e| e < -1e-8) {
        return Err(SemiError::Linalg(format!(
            "Re q not positive semi-definite: eigmin = {:.3e}",
            eigs.iter().cloned().fold(f64::INFINITY, f64::min)
        )));
    }
    Ok(QuadraticModel { n: spec.n, re_q, im_q })
}

/// Hamilton map F of q with the selected eigenvalues μ_j, one per ± pair,
/// chosen so that Re(-iμ_j) > 0.
#[derive(Debug, Clone)]
pub struct HamiltonMap {
    pub f: Array2<C64>,
    pub mu: Vec<C64>,
}

impl HamiltonMap {
    /// The lattice generators ν_j = -iμ_j, Re ν_j > 0.
    pub fn generators(&self) -> Vec<C64> {
        self.mu.iter().map(|&m| -C64::i() * m).collect()
    }
}

pub fn hamilton_map(qm: &QuadraticModel) -> Result<HamiltonMap> {
    let dim = 2 * qm.n;
    let j = symplectic_j(qm.n);
    let mut f = Array2::from_elem((dim, dim), C64::new(0.0, 0.0));
    let jb_re = j.dot(&qm.re_q);
    let jb_im = j.dot(&qm.im_q);
    for r in 0..dim {
        for c in 0..dim {
            f[[r, c]] = C64::new(2.0 * jb_re[[r, c]], 2.0 * jb_im[[r, c]]);
        }
    }
    let (eigs, _) = f.eig().map_err(|e| SemiError::Linalg(e.to_string()))?;
    let scale = eigs.iter().map(|e| e.norm()).fold(0.0f64, f64::max).max(1.0);
    let mut mu: Vec<C64> = Vec::new();
    for &e in eigs.iter() {
        if e.im.abs() <= 1e-10 * scale {
            return Err(SemiError::SectorDegenerate(format!("{e}")));
        }
        if e.im > 0.0 {
            mu.push(e);
        }
    }
    if mu.len() != qm.n {
        return Err(SemiError::Linalg(format!(
            "expected {} eigenvalue pairs, found {} with Im μ > 0",
            qm.n,
            mu.len()
        )));
    }
    mu.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    Ok(HamiltonMap { f, mu })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticePoint {
    pub value: (f64, f64),
    pub multiplicity: usize,
}

impl LatticePoint {
    pub fn complex(&self) -> C64 {
        C64::new(self.value.0, self.value.1)
    }
}

/// The eigenvalue lattice of Q = q^w(x,D), sorted by modulus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lattice {
    pub points: Vec<LatticePoint>,
    pub sector_angle: f64,
}

impl Lattice {
    /// Flat eigenvalue list with multiplicities expanded, sorted by modulus.
    pub fn eigenvalues(&self) -> Vec<C64> {
        let mut out = Vec::new();
        for p in &self.points {
            for _ in 0..p.multiplicity {
                out.push(p.complex());
            }
        }
        out
    }
}

struct HeapEntry {
    abs: f64,
    value: C64,
    index: Vec<u32>,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.abs == other.abs
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on |E|
        other.abs.partial_cmp(&self.abs).unwrap_or(Ordering::Equal)
    }
}

/// Enumerate E(r) = Σ_j (r_j + ½)·(-iμ_j) over multi-indices r in order of
/// increasing modulus via best-first search.
pub fn quad_spectrum(qm: &QuadraticModel, count: usize) -> Result<Lattice> {
    let hm = hamilton_map(qm)?;
    let gen = hm.generators();
    let base: C64 = gen.iter().map(|g| 0.5 * g).sum();

    let mut heap = BinaryHeap::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let start = vec![0u32; qm.n];
    heap.push(HeapEntry { abs: base.norm(), value: base, index: start.clone() });
    seen.insert(start);

    let mut raw: Vec<C64> = Vec::new();
    while raw.len() < count {
        let entry = match heap.pop() {
            Some(e) => e,
            None => break,
        };
        raw.push(entry.value);
        for j in 0..qm.n {
            let mut next = entry.index.clone();
            next[j] += 1;
            if seen.insert(next.clone()) {
                let v = entry.value + gen[j];
                heap.push(HeapEntry { abs: v.norm(), value: v, index: next });
            }
        }
    }

    let mut points: Vec<LatticePoint> = Vec::new();
    for e in raw {
        match points
            .iter_mut()
            .find(|p| (p.complex() - e).norm() <= 1e-9 * (1.0 + e.norm()))
        {
            Some(p) => p.multiplicity += 1,
            None => points.push(LatticePoint { value: (e.re, e.im), multiplicity: 1 }),
        }
    }
    let sector_angle = points
        .iter()
        .map(|p| p.complex().arg().abs())
        .fold(0.0f64, f64::max);
    Ok(Lattice { points, sector_angle })
}

// ---------------------------------------------------------------------------
// Hermite-Galerkin oracle
// ---------------------------------------------------------------------------

/// Ladder-operator matrix of x² in the Hermite-function basis.
fn x2_matrix(n: usize) -> Array2<C64> {
    let mut m = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for k in 0..n {
        m[[k, k]] = C64::new(k as f64 + 0.5, 0.0);
        if k + 2 < n {
            let v = (((k + 1) * (k + 2)) as f64).sqrt() / 2.0;
            m[[k, k + 2]] = C64::new(v, 0.0);
            m[[k + 2, k]] = C64::new(v, 0.0);
        }
    }
    m
}

/// Matrix of D² = -d²/dx² (quantization of ξ²).
fn d2_matrix(n: usize) -> Array2<C64> {
    let mut m = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for k in 0..n {
        m[[k, k]] = C64::new(k as f64 + 0.5, 0.0);
        if k + 2 < n {
            let v = -(((k + 1) * (k + 2)) as f64).sqrt() / 2.0;
            m[[k, k + 2]] = C64::new(v, 0.0);
            m[[k + 2, k]] = C64::new(v, 0.0);
        }
    }
    m
}

/// Matrix of x (single ladder step).
fn x_matrix(n: usize) -> Array2<C64> {
    let mut m = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for k in 0..n.saturating_sub(1) {
        let v = ((k + 1) as f64 / 2.0).sqrt();
        m[[k, k + 1]] = C64::new(v, 0.0);
        m[[k + 1, k]] = C64::new(v, 0.0);
    }
    m
}

/// Matrix of D = -i d/dx (quantization of ξ).
fn d_matrix(n: usize) -> Array2<C64> {
    let mut m = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for k in 0..n.saturating_sub(1) {
        let v = ((k + 1) as f64 / 2.0).sqrt();
        // D = (a - a†)/(i√2)
        m[[k, k + 1]] = C64::new(0.0, v);
        m[[k + 1, k]] = C64::new(0.0, -v);
    }
    m
}

/// Weyl quantization of xξ: (xD + Dx)/2 = (a² - a†²)/(2i).
fn xd_sym_matrix(n: usize) -> Array2<C64> {
    let mut m = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for k in 0..n.saturating_sub(2) {
        let v = (((k + 1) * (k + 2)) as f64).sqrt() / 2.0;
        m[[k, k + 2]] = C64::new(0.0, -v);
        m[[k + 2, k]] = C64::new(0.0, v);
    }
    m
}

fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::from_elem((ra * rb, ca * cb), C64::new(0.0, 0.0));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[[i, j]];
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[[i * rb + k, j * cb + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Lift a 1D operator acting on factor `dim_index` to the N^n tensor basis.
fn lift(op: &Array2<C64>, dim_index: usize, n_dims: usize, basis: usize) -> Array2<C64> {
    let id = Array2::<C64>::eye(basis);
    let mut out: Option<Array2<C64>> = None;
    for d in 0..n_dims {
        let factor = if d == dim_index { op.clone() } else { id.clone() };
        out = Some(match out {
            None => factor,
            Some(acc) => kron(&acc, &factor),
        });
    }
    out.unwrap()
}

/// Assemble q^w(x,D) in the N^n Hermite-function basis and return the `count`
/// eigenvalues of smallest modulus.
pub fn galerkin_oracle(qm: &QuadraticModel, basis: usize, count: usize) -> Result<Vec<C64>> {
    if basis < 4 * count {
        return Err(SemiError::BasisTooSmall { n: basis, need: 4 * count });
    }
    let n = qm.n;
    let dim = basis.pow(n as u32);
    let mut op = Array2::from_elem((dim, dim), C64::new(0.0, 0.0));
    let qc = |a: usize, b: usize| C64::new(qm.re_q[[a, b]], qm.im_q[[a, b]]);

    for a in 0..2 * n {
        for b in 0..2 * n {
            let coeff = qc(a, b);
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            let factor: Array2<C64> = match (a < n, b < n) {
                (true, true) => {
                    // x_a x_b
                    if a == b {
                        lift(&x2_matrix(basis), a, n, basis)
                    } else {
                        lift(&x_matrix(basis), a, n, basis)
                            .dot(&lift(&x_matrix(basis), b, n, basis))
                    }
                }
                (false, false) => {
                    let (ja, jb) = (a - n, b - n);
                    if ja == jb {
                        lift(&d2_matrix(basis), ja, n, basis)
                    } else {
                        lift(&d_matrix(basis), ja, n, basis)
                            .dot(&lift(&d_matrix(basis), jb, n, basis))
                    }
                }
                (true, false) => {
                    let jb = b - n;
                    if a == jb {
                        lift(&xd_sym_matrix(basis), a, n, basis)
                    } else {
                        lift(&x_matrix(basis), a, n, basis)
                            .dot(&lift(&d_matrix(basis), jb, n, basis))
                    }
                }
                (false, true) => {
                    let ja = a - n;
                    if ja == b {
                        lift(&xd_sym_matrix(basis), b, n, basis)
                    } else {
                        lift(&d_matrix(basis), ja, n, basis)
                            .dot(&lift(&x_matrix(basis), b, n, basis))
                    }
                }
            };
            op = op + &(factor * coeff);
        }
    }

    let (eigs, _) = op.eig().map_err(|e| SemiError::Linalg(e.to_string()))?;
    let mut vals: Vec<C64> = eigs.to_vec();
    vals.sort_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap());
    Ok(vals.into_iter().take(count).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::ScalarField;
    use approx::assert_relative_eq;

    fn harmonic() -> QuadraticModel {
        QuadraticModel::oscillator_1d(C64::new(1.0, 0.0))
    }

    #[test]
    fn quadratic_model_from_spec() {
        // V = x², W = x²: ReQ = diag(1,1), ImQ = diag(1,0)
        let spec = SymbolSpec::schrodinger(
            1,
            ScalarField::monomial(1, 0, 2, 1.0),
            ScalarField::monomial(1, 0, 2, 1.0),
        );
        let qm = quadratic_model(&spec).unwrap();
        assert_relative_eq!(qm.re_q[[0, 0]], 1.0);
        assert_relative_eq!(qm.re_q[[1, 1]], 1.0);
        assert_relative_eq!(qm.im_q[[0, 0]], 1.0);
        assert_relative_eq!(qm.im_q[[1, 1]], 0.0);
    }

    #[test]
    fn quadratic_model_flat_well() {
        // V flat at 0: q = ξ² + ix²
        let spec = SymbolSpec::schrodinger(
            1,
            ScalarField::flat_well(),
            ScalarField::monomial(1, 0, 2, 1.0),
        );
        let qm = quadratic_model(&spec).unwrap();
        assert_relative_eq!(qm.re_q[[0, 0]], 0.0);
        assert_relative_eq!(qm.re_q[[1, 1]], 1.0);
        assert_relative_eq!(qm.im_q[[0, 0]], 1.0);
    }

    #[test]
    fn quadratic_model_rejects_noncritical_origin() {
        // V = x has a nonzero gradient at 0
        let spec = SymbolSpec::schrodinger(
            1,
            ScalarField::monomial(1, 0, 1, 1.0),
            ScalarField::zero(1),
        );
        assert!(matches!(
            quadratic_model(&spec),
            Err(SemiError::OriginNotCritical { .. })
        ));
    }

    #[test]
    fn hamilton_map_harmonic() {
        let hm = hamilton_map(&harmonic()).unwrap();
        assert_eq!(hm.mu.len(), 1);
        assert_relative_eq!(hm.mu[0].re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(hm.mu[0].im, 2.0, epsilon = 1e-12);
        let nu = hm.generators()[0];
        assert_relative_eq!(nu.re, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn hamilton_map_complex_oscillators() {
        // q = ξ² + (1+i)x²: -iμ = 2·2^{1/4}·e^{iπ/8}
        let hm = hamilton_map(&QuadraticModel::oscillator_1d(C64::new(1.0, 1.0))).unwrap();
        let nu = hm.generators()[0];
        let expect = 2.0 * 2.0f64.powf(0.25)
            * C64::from_polar(1.0, std::f64::consts::PI / 8.0);
        assert_relative_eq!(nu.re, expect.re, epsilon = 1e-10);
        assert_relative_eq!(nu.im, expect.im, epsilon = 1e-10);

        // q = ξ² + ix²: -iμ = 2e^{iπ/4}
        let hm = hamilton_map(&QuadraticModel::oscillator_1d(C64::new(0.0, 1.0))).unwrap();
        let nu = hm.generators()[0];
        let expect = 2.0 * C64::from_polar(1.0, std::f64::consts::PI / 4.0);
        assert_relative_eq!(nu.re, expect.re, epsilon = 1e-10);
        assert_relative_eq!(nu.im, expect.im, epsilon = 1e-10);
    }

    #[test]
    fn sector_degenerate_rejected() {
        // q = ξ² - x²: Hamilton map eigenvalues ±2 are real
        let qm = QuadraticModel::oscillator_1d(C64::new(-1.0, 0.0));
        assert!(matches!(hamilton_map(&qm), Err(SemiError::SectorDegenerate(_))));
    }

    #[test]
    fn harmonic_spectrum() {
        let lat = quad_spectrum(&harmonic(), 3).unwrap();
        let e = lat.eigenvalues();
        assert_relative_eq!(e[0].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(e[1].re, 3.0, epsilon = 1e-12);
        assert_relative_eq!(e[2].re, 5.0, epsilon = 1e-12);
        assert!(lat.sector_angle < 1e-12);
    }

    #[test]
    fn lattice_closure() {
        // E(r) + ν_j stays in the lattice when r_j is incremented
        let qm = QuadraticModel::oscillator_1d(C64::new(1.0, 1.0));
        let hm = hamilton_map(&qm).unwrap();
        let nu = hm.generators()[0];
        let lat = quad_spectrum(&qm, 6).unwrap();
        let e = lat.eigenvalues();
        for k in 0..4 {
            let shifted = e[k] + nu;
            assert!(
                e.iter().any(|&v| (v - shifted).norm() < 1e-12),
                "lattice closure failed at k = {k}"
            );
        }
    }

    #[test]
    fn galerkin_diagonal_for_harmonic() {
        let vals = galerkin_oracle(&harmonic(), 20, 5).unwrap();
        for (k, v) in vals.iter().enumerate() {
            assert_relative_eq!(v.re, (2 * k + 1) as f64, epsilon = 1e-12);
            assert_relative_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn galerkin_basis_guard() {
        assert!(matches!(
            galerkin_oracle(&harmonic(), 10, 5),
            Err(SemiError::BasisTooSmall { .. })
        ));
    }

    #[test]
    fn oracle_matches_lattice_complex() {
        // q = ξ² + (1+i)x²
        let qm = QuadraticModel::oscillator_1d(C64::new(1.0, 1.0));
        let lat = quad_spectrum(&qm, 5).unwrap().eigenvalues();
        let oracle = galerkin_oracle(&qm, 60, 5).unwrap();
        for k in 0..5 {
            assert!(
                (lat[k] - oracle[k]).norm() < 1e-6,
                "k={k}: lattice {} vs oracle {}",
                lat[k],
                oracle[k]
            );
        }
        // q = ξ² + ix² against the closed form (2r+1)e^{iπ/4}
        let qm = QuadraticModel::oscillator_1d(C64::new(0.0, 1.0));
        let oracle = galerkin_oracle(&qm, 80, 5).unwrap();
        for (r, v) in oracle.iter().enumerate() {
            let expect =
                (2 * r + 1) as f64 * C64::from_polar(1.0, std::f64::consts::PI / 4.0);
            assert!((v - expect).norm() < 1e-6, "r={r}: {v} vs {expect}");
        }
    }

    #[test]
    fn self_adjoint_reduction_real_lattice() {
        let qm = QuadraticModel::oscillator_1d(C64::new(2.5, 0.0));
        let lat = quad_spectrum(&qm, 6).unwrap();
        for p in &lat.points {
            assert!(p.value.1.abs() < 1e-12);
            assert!(p.value.0 > 0.0);
        }
    }

    #[test]
    fn expm_rotation() {
        // exp(tJ) is a rotation in 2D
        let j = symplectic_j(1);
        let t = 0.7f64;
        let m = expm(&(j.clone() * t));
        assert_relative_eq!(m[[0, 0]], t.cos(), epsilon = 1e-12);
        assert_relative_eq!(m[[0, 1]], t.sin(), epsilon = 1e-12);
        assert_relative_eq!(m[[1, 0]], -t.sin(), epsilon = 1e-12);
    }
}
