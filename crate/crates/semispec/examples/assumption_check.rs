//! Standing assumptions (positivity, ellipticity at infinity, critical set,
//! growth bounds) verified on sampled boxes for the bundled problems.

use semispec::config::{catalog, CATALOG};
use semispec::symbols::{check_assumptions, SampleBox};

fn main() {
    for &name in CATALOG {
        let cfg = catalog(name).unwrap();
        let ppa = if cfg.spec.n == 1 { 21 } else { 7 };
        let sample_box = SampleBox { half_width: 3.0, points_per_axis: ppa };
        let report = check_assumptions(&cfg.spec, &sample_box).unwrap();
        println!("{name}: all_ok = {}", report.all_ok());
        println!("  positivity            {}", report.positivity_ok.ok);
        println!("  elliptic at infinity  {}", report.elliptic_at_infinity_ok.ok);
        println!("  critical set = origin {}", report.critical_set_ok.ok);
        println!("  quadratic growth      {}", report.quadratic_growth_ok.ok);
        println!("  |Im p0| ≤ C(1+Re p0)  C = {:.3}", report.im_bound_constant);
    }
}
