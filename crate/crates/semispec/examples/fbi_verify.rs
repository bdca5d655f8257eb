//! FBI transform checks: unitarity on Hermite inputs and the O(h) remainder
//! of the quantization-multiplication formula.

use semispec::bargmann::{check_unitarity, quant_mult_check, quant_mult_residual, RealSymbol};

fn main() {
    let dev = check_unitarity(&[0.5, 0.25], 5).unwrap();
    println!("unitarity deviation (Hermite 0..5, h ∈ {{0.5, 0.25}}): {dev:.3e}");

    let hs = [0.4, 0.2, 0.1, 0.05];
    for (label, sym) in [("a = x²", RealSymbol::x_squared()), ("a = x²+ξ²", RealSymbol::harmonic())]
    {
        for &h in &hs {
            let r = quant_mult_residual(&sym, h).unwrap();
            println!("  {label}, h = {h}: residual {r:.4e}");
        }
        let slope = quant_mult_check(&sym, &hs).unwrap();
        println!("{label}: log-log slope {slope:.4}");
    }
}
