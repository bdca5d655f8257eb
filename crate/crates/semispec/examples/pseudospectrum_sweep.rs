//! σ_min sweep over an h-scaled λ-box; the local minima sit near the
//! rescaled lattice points hE_j.

use semispec::config::catalog;
use semispec::operator::{discretize, GridSpec};
use semispec::quadmodel::{quad_spectrum, quadratic_model};
use semispec::resolvent::pseudospectrum;

fn main() {
    let cfg = catalog("harmonic-complex-1d").unwrap();
    let h = 0.05;
    let op = discretize(&cfg.spec, h, &GridSpec::periodic(1, 10.0, 256)).unwrap();
    let field = pseudospectrum(&op, (0.0, 6.0 * h), (0.0, 3.0 * h), 48).unwrap();

    // report the grid point of smallest σ_min near each lattice target
    let qm = quadratic_model(&cfg.spec).unwrap();
    for e in quad_spectrum(&qm, 2).unwrap().eigenvalues() {
        let target = (e.re * h, e.im * h);
        let mut best = (f64::INFINITY, (0.0, 0.0));
        for (i, &(re, im)) in field.lambda_grid.iter().enumerate() {
            let d = ((re - target.0).powi(2) + (im - target.1).powi(2)).sqrt();
            if d < 2.0 * h * 6.0 / 48.0 && field.sigma_min[i] < best.0 {
                best = (field.sigma_min[i], (re, im));
            }
        }
        println!(
            "hE_j = ({:.4}, {:.4}): nearby σ_min {:.3e} at ({:.4}, {:.4})",
            target.0, target.1, best.0, best.1 .0, best.1 .1
        );
    }
    println!("grid points: {}", field.sigma_min.len());
}
