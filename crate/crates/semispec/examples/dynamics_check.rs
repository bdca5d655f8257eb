//! Dynamical conditions: ellipticity of the averaged quadratic form and
//! positivity of the flow average on exterior annuli, plus the Gronwall
//! displacement constant.

use semispec::config::catalog;
use semispec::dynamics::{check_dyn_conditions, check_gronwall};
use semispec::quadmodel::quadratic_model;
use semispec::symbols::{annulus_samples, flatten_symbol};

fn main() {
    for name in ["harmonic-complex-1d", "flat-well-1d", "anisotropic-2d"] {
        let cfg = catalog(name).unwrap();
        let spec = flatten_symbol(&cfg.spec, cfg.spec.flatten_radius.unwrap()).unwrap();
        let qm = quadratic_model(&cfg.spec).unwrap();
        let report = check_dyn_conditions(&spec, &qm, 1.0, &[0.5, 1.0, 2.0], 8.0, 16).unwrap();
        let c_t = check_gronwall(&spec, 1.0, &annulus_samples(spec.n, 0.1, 3.0, 30), 10).unwrap();
        println!("{name}:");
        println!("  eigmin ⟨Re q⟩ = {:.6}", report.quad_avg_eigmin);
        for (delta, min) in &report.exterior_min {
            println!("  min ⟨Re p0⟩ on {delta} < |X| ≤ 8: {min:.6}");
        }
        println!("  Gronwall constant C_T = {c_t:.4}, pass = {}", report.pass);
    }
}
