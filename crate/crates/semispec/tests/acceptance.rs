//! Acceptance gate: the ten headline criteria, one pass/fail line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semispec::bargmann::{check_unitarity, quant_mult_check, RealSymbol};
use semispec::config::{catalog, CATALOG};
use semispec::dynamics::{check_gronwall, time_average, FlowConfig};
use semispec::operator::{discretize, low_eigenvalues, GridSpec};
use semispec::quadmodel::{
    galerkin_oracle, quad_spectrum, quadratic_model, QuadraticModel,
};
use semispec::resolvent::{lattice_compare, resolvent_norm, scaling_study};
use semispec::symbols::{annulus_samples, flatten_symbol, PhasePoint, SymbolSpec};
use semispec::weight::{verify_cohomology, verify_ellipticity, weight_g, WeightParams};

fn verdict(number: u32, name: &str, pass: bool) {
    println!("criterion {number:>2} ({name}): {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {number} ({name}) failed");
}

fn random_points(n: usize, count: usize, radius: f64, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coords: Vec<f64> =
                (0..2 * n).map(|_| rng.gen_range(-radius..radius)).collect();
            PhasePoint::from_coords(&coords)
        })
        .collect()
}

fn flat(spec: &SymbolSpec) -> SymbolSpec {
    flatten_symbol(spec, spec.flatten_radius.unwrap_or(4.0)).unwrap()
}

/// ⟨Re p₀⟩_T = |ξ|² + V + (T²/3)|∇W|² at 100 random points, all catalog
/// problems, T ∈ {0.5, 1, 2}.
#[test]
fn criterion_01_closed_form_average() {
    let mut pass = true;
    for &name in CATALOG {
        let cfg = catalog(name).unwrap();
        let spec = &cfg.spec;
        for &t in &[0.5, 1.0, 2.0] {
            let fc = FlowConfig::for_spec(spec, t);
            for pt in random_points(spec.n, 100, 3.0, 7) {
                let avg =
                    time_average(|y| Ok(spec.p0_value(y)?.re), spec, &pt, &fc).unwrap();
                let jet = semispec::symbols::eval_symbol(spec, &pt, 1).unwrap();
                let grad_w_sq: f64 = jet.grad.as_ref().unwrap()[..spec.n]
                    .iter()
                    .map(|g| g.im * g.im)
                    .sum();
                let exact = jet.value.re + t * t / 3.0 * grad_w_sq;
                let rel = (avg - exact).abs() / exact.abs().max(1.0);
                if rel > 1e-6 {
                    eprintln!("{name} T={t} at {pt}: rel {rel:.2e}");
                    pass = false;
                }
            }
        }
    }
    verdict(1, "closed-form average identity", pass);
}

/// Cohomology residual ≤ 1e-5 over 50 samples per catalog problem, ε = 1e-2.
#[test]
fn criterion_02_cohomological_identity() {
    let mut pass = true;
    for &name in CATALOG {
        let cfg = catalog(name).unwrap();
        let spec = flat(&cfg.spec);
        let params = WeightParams::new(1e-2, 0.1, 1.0);
        let samples = annulus_samples(spec.n, 1e-2, 1.0, if spec.n == 1 { 12 } else { 6 });
        let take = 50.min(samples.len());
        let residual = verify_cohomology(&spec, &params, &samples[..take]).unwrap();
        if residual > 1e-5 {
            eprintln!("{name}: residual {residual:.2e}");
            pass = false;
        }
    }
    verdict(2, "cohomological identity", pass);
}

fn weight_sups(spec: &SymbolSpec, eps: f64) -> (f64, f64, f64) {
    let params = WeightParams::new(eps, 0.1, 1.0);
    let step = 1e-4;
    let mut sup0 = 0.0f64;
    let mut sup1 = 0.0f64;
    let mut sup2 = 0.0f64;
    let se = eps.sqrt();
    let mut radii = vec![0.5 * se, se, 2.0 * se, 4.0 * se, 0.1, 0.3, 1.0];
    radii.retain(|&r| r > 2.0 * step);
    for r in radii {
        for k in 0..8 {
            let th = std::f64::consts::PI * k as f64 / 4.0;
            let pt = PhasePoint::dim1(r * th.cos(), r * th.sin());
            let g0 = weight_g(spec, &params, &pt).unwrap();
            sup0 = sup0.max(g0.abs());
            let coords = pt.coords();
            for dir in 0..2 {
                let mut up = coords.clone();
                let mut dn = coords.clone();
                up[dir] += step;
                dn[dir] -= step;
                let gp = weight_g(spec, &params, &PhasePoint::from_coords(&up)).unwrap();
                let gm = weight_g(spec, &params, &PhasePoint::from_coords(&dn)).unwrap();
                sup1 = sup1.max(((gp - gm) / (2.0 * step)).abs());
                sup2 = sup2.max(((gp - 2.0 * g0 + gm) / (step * step)).abs());
            }
        }
    }
    (sup0, sup1, sup2)
}

/// sup|∂^α G_ε| scales like ε^{1-|α|/2}: fitted exponents within ±0.15 of
/// (1, ½, 0) over ε ∈ {1e-2, 1e-3, 1e-4}.
#[test]
fn criterion_03_weight_scaling_exponents() {
    let cfg = catalog("harmonic-complex-1d").unwrap();
    let spec = flat(&cfg.spec);
    let eps_list = [1e-2, 1e-3, 1e-4];
    let sups: Vec<(f64, f64, f64)> =
        eps_list.iter().map(|&e| weight_sups(&spec, e)).collect();
    let slope = |f: &dyn Fn(&(f64, f64, f64)) -> f64| -> f64 {
        let y0 = f(&sups[0]).ln();
        let y2 = f(&sups[2]).ln();
        (y2 - y0) / (eps_list[2].ln() - eps_list[0].ln())
    };
    let e0 = slope(&|s| s.0);
    let e1 = slope(&|s| s.1);
    let e2 = slope(&|s| s.2);
    let pass =
        (e0 - 1.0).abs() <= 0.15 && (e1 - 0.5).abs() <= 0.15 && e2.abs() <= 0.15;
    if !pass {
        eprintln!("exponents: ({e0:.3}, {e1:.3}, {e2:.3})");
    }
    verdict(3, "weight scaling exponents", pass);
}

/// Strictly positive minima in all four ellipticity regions, both 1-D
/// problems, ε = 1e-2, δ = 0.1.
#[test]
fn criterion_04_four_region_ellipticity() {
    let mut pass = true;
    for name in ["harmonic-complex-1d", "flat-well-1d"] {
        let cfg = catalog(name).unwrap();
        let spec = flat(&cfg.spec);
        let params = WeightParams::new(1e-2, 0.1, 1.0);
        let report = verify_ellipticity(&spec, &params, 8.0, 16).unwrap();
        if !report.pass {
            eprintln!("{name}: {report:?}");
            pass = false;
        }
    }
    verdict(4, "four-region ellipticity", pass);
}

/// quad_spectrum matches the Hermite Galerkin oracle to 1e-6 on four models;
/// the harmonic case is {1,3,5,7,9} to 1e-12.
#[test]
fn criterion_05_quadratic_lattice_vs_oracle() {
    let mut pass = true;
    let aniso = quadratic_model(&catalog("anisotropic-2d").unwrap().spec).unwrap();
    let models: Vec<(&str, QuadraticModel)> = vec![
        ("xi2+x2", QuadraticModel::oscillator_1d(Complex64::new(1.0, 0.0))),
        ("xi2+(1+i)x2", QuadraticModel::oscillator_1d(Complex64::new(1.0, 1.0))),
        ("xi2+ix2", QuadraticModel::oscillator_1d(Complex64::new(0.0, 1.0))),
        ("anisotropic-2d", aniso),
    ];
    for (label, qm) in &models {
        let lattice = quad_spectrum(qm, 5).unwrap();
        let basis = if qm.n == 1 { 60 } else { 24 };
        let mut oracle = galerkin_oracle(qm, basis, 5).unwrap();
        // degenerate-modulus conjugate pairs may come back in either order
        let mut lat: Vec<Complex64> = lattice.eigenvalues().to_vec();
        let key = |z: &Complex64| (z.re, z.im);
        lat.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        oracle.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (l, o) in lat.iter().zip(&oracle) {
            if (l - o).norm() > 1e-6 {
                eprintln!("{label}: lattice {l} vs oracle {o}");
                pass = false;
            }
        }
    }
    let harmonic = quad_spectrum(&models[0].1, 5).unwrap();
    for (k, e) in harmonic.eigenvalues().iter().enumerate() {
        let expect = (2 * k + 1) as f64;
        if (e - Complex64::new(expect, 0.0)).norm() > 1e-12 {
            eprintln!("harmonic level {k}: {e}");
            pass = false;
        }
    }
    verdict(5, "quadratic lattice vs oracle", pass);
}

/// sup h‖(P-λ)⁻¹‖ bounded (ratio ≤ 2) over h ∈ {0.1, 0.05, 0.025, 0.0125}
/// on D(0, 4h) \ hΩ at N = 512, both 1-D problems.
#[test]
fn criterion_06_resolvent_scaling() {
    let mut pass = true;
    for name in ["harmonic-complex-1d", "flat-well-1d"] {
        let cfg = catalog(name).unwrap();
        let report = scaling_study(
            &cfg.spec,
            &cfg.grid,
            &cfg.study.h_list,
            cfg.study.c,
            cfg.study.rho,
        )
        .unwrap();
        if !report.pass {
            eprintln!("{name}: ratio {:.3}", report.ratio);
            pass = false;
        }
    }
    verdict(6, "resolvent scaling study", pass);
}

/// Lattice deviations |λ_num/h − E_j| decrease along the h-list (10% slack,
/// converged values below the floor count as decreased), j ≤ 3.
#[test]
fn criterion_07_spectral_localization() {
    let mut pass = true;
    for name in ["harmonic-complex-1d", "flat-well-1d"] {
        let cfg = catalog(name).unwrap();
        let report =
            lattice_compare(&cfg.spec, &cfg.grid, &cfg.study.h_list, 3).unwrap();
        if !report.pass {
            eprintln!("{name}: {:?}", report.deviations);
            pass = false;
        }
    }
    verdict(7, "O(h) spectral localization", pass);
}

/// Fitted Gronwall constant finite and stable (±20%) under sample doubling,
/// all catalog problems, T = 1.
#[test]
fn criterion_08_gronwall_constant() {
    let mut pass = true;
    for &name in CATALOG {
        let cfg = catalog(name).unwrap();
        let spec = flat(&cfg.spec);
        let base = check_gronwall(&spec, 1.0, &annulus_samples(spec.n, 0.1, 3.0, 20), 10)
            .unwrap();
        let doubled =
            check_gronwall(&spec, 1.0, &annulus_samples(spec.n, 0.1, 3.0, 40), 20).unwrap();
        let stable = base.is_finite()
            && doubled.is_finite()
            && (doubled - base).abs() <= 0.2 * base.max(doubled);
        if !stable {
            eprintln!("{name}: C_T {base:.4} vs doubled {doubled:.4}");
            pass = false;
        }
    }
    verdict(8, "Gronwall constant stability", pass);
}

/// FBI unitarity ≤ 1e-5 on Hermite inputs; quantization-multiplication
/// residual slope ≥ 0.9 for a ∈ {x², x²+ξ²}.
#[test]
fn criterion_09_fbi_checks() {
    let dev = check_unitarity(&[0.5, 0.25], 5).unwrap();
    let hs = [0.4, 0.2, 0.1, 0.05];
    let s1 = quant_mult_check(&RealSymbol::x_squared(), &hs).unwrap();
    let s2 = quant_mult_check(&RealSymbol::harmonic(), &hs).unwrap();
    let pass = dev <= 1e-5 && s1 >= 0.9 && s2 >= 0.9;
    if !pass {
        eprintln!("unitarity {dev:.2e}, slopes {s1:.3}/{s2:.3}");
    }
    verdict(9, "FBI unitarity and quantization-multiplication", pass);
}

/// resolvent_norm·dist(λ, Spec) = 1 ± 1e-8 on a Hermitian discretization
/// over 100 λ-samples.
#[test]
fn criterion_10_normal_pseudospectrum_identity() {
    let spec = SymbolSpec::schrodinger(
        1,
        semispec::fields::ScalarField::monomial(1, 0, 2, 1.0),
        semispec::fields::ScalarField::zero(1),
    );
    let op = discretize(&spec, 1.0, &GridSpec::periodic(1, 10.0, 128)).unwrap();
    let eigs = low_eigenvalues(&op, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut pass = true;
    for _ in 0..100 {
        let l = Complex64::new(rng.gen_range(0.0..8.0), rng.gen_range(0.1..1.0));
        let dist = eigs.iter().map(|&e| (e - l).norm()).fold(f64::INFINITY, f64::min);
        let prod = resolvent_norm(&op, l).unwrap() * dist;
        if (prod - 1.0).abs() > 1e-8 {
            eprintln!("λ = {l}: product {prod:.12}");
            pass = false;
        }
    }
    verdict(10, "normal-operator pseudospectrum identity", pass);
}
