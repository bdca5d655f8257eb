//! The O(1/h) resolvent bound as a ratio test: sup h‖(P−λ)⁻¹‖ over
//! D(0,Ch) \ hΩ should stay bounded as h shrinks.

use semispec::config::catalog;
use semispec::operator::GridSpec;
use semispec::resolvent::scaling_study;

fn main() {
    let cfg = catalog("harmonic-complex-1d").unwrap();
    // N = 256 keeps this demo quick; the acceptance run uses N = 512
    let grid = GridSpec::periodic(1, 10.0, 256);
    let report = scaling_study(&cfg.spec, &grid, &[0.1, 0.05, 0.025], 4.0, 0.3).unwrap();
    for e in &report.entries {
        println!(
            "h = {:<7} samples = {:<4} sup h·‖R‖ = {:.6}",
            e.h, e.samples, e.sup_h_norm
        );
    }
    println!("max/min ratio {:.6}, pass = {}", report.ratio, report.pass);
}
