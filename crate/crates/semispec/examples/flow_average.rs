//! Time averages along the Im p₀ flow, checked against the closed form
//! ⟨Re p₀⟩_T = |ξ|² + V + (T²/3)|∇W|².

use semispec::config::catalog;
use semispec::dynamics::{average_re_p0, FlowConfig};
use semispec::symbols::PhasePoint;

fn main() {
    let cfg = catalog("harmonic-complex-1d").unwrap();
    let spec = &cfg.spec;
    for &t in &[0.5, 1.0, 2.0] {
        let flow_cfg = FlowConfig::for_spec(spec, t);
        let pt = PhasePoint::dim1(1.0, 0.5);
        let avg = average_re_p0(spec, &pt, &flow_cfg).unwrap();
        // V = x², W = x² at (1, 0.5): 0.25 + 1 + T²/3·4
        let exact = 0.25 + 1.0 + t * t / 3.0 * 4.0;
        println!(
            "T = {t}: quadrature {avg:.12}, closed form {exact:.12}, diff {:.2e}",
            (avg - exact).abs()
        );
    }
}
