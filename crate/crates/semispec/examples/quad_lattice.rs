//! Eigenvalue lattice of the quadratic model vs an independent Hermite
//! Galerkin computation.

use semispec::config::catalog;
use semispec::quadmodel::{galerkin_oracle, quad_spectrum, quadratic_model};

fn main() {
    for name in ["harmonic-complex-1d", "flat-well-1d", "anisotropic-2d"] {
        let cfg = catalog(name).unwrap();
        let qm = quadratic_model(&cfg.spec).unwrap();
        let lattice = quad_spectrum(&qm, 5).unwrap();
        let basis = if qm.n == 1 { 60 } else { 24 };
        let oracle = galerkin_oracle(&qm, basis, 5).unwrap();
        println!("{name}:");
        for (l, o) in lattice.eigenvalues().iter().zip(&oracle) {
            println!(
                "  lattice {:+.8} {:+.8}i   galerkin {:+.8} {:+.8}i   |diff| {:.1e}",
                l.re,
                l.im,
                o.re,
                o.im,
                (l - o).norm()
            );
        }
    }
}
