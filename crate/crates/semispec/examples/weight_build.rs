//! Weight-function construction: cohomological identity residual and the
//! four-region ellipticity of the deformed symbol.

use semispec::config::catalog;
use semispec::symbols::{annulus_samples, flatten_symbol};
use semispec::weight::{verify_cohomology, verify_ellipticity};

fn main() {
    for name in ["harmonic-complex-1d", "flat-well-1d"] {
        let cfg = catalog(name).unwrap();
        let spec = flatten_symbol(&cfg.spec, cfg.spec.flatten_radius.unwrap()).unwrap();
        let params = cfg.weight.clone();

        let samples = annulus_samples(spec.n, 1e-2, 1.0, 12);
        let residual = verify_cohomology(&spec, &params, &samples[..50]).unwrap();
        println!("{name}: cohomology residual {residual:.3e} over 50 samples");

        let report = verify_ellipticity(&spec, &params, 8.0, 16).unwrap();
        for region in &report.regions {
            println!(
                "  {:<13} min Re p~0 = {:+.4e}  fitted C = {:.2}",
                region.tag, region.min_value, region.fitted_c
            );
        }
        println!("  ellipticity pass = {}", report.pass);
    }
}
