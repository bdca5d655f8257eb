//! Smooth bridge profiles and quadrature helpers shared across modules.

/// exp(-1/u) for u > 0, extended by 0 for u <= 0. Smooth, flat to infinite
/// order at u = 0.
pub fn bump(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Derivative of `bump`: exp(-1/u)/u^2 for u > 0.
pub fn bump_deriv(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp() / (u * u)
    } else {
        0.0
    }
}

/// Smoothstep s: [0,1] -> [0,1] built from `bump`, with s(0) = 0, s(1) = 1 and
/// all derivatives vanishing at both endpoints. Monotone increasing.
pub fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = bump(u);
        let b = bump(1.0 - u);
        a / (a + b)
    }
}

/// Derivative of `smoothstep`.
pub fn smoothstep_deriv(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        let a = bump(u);
        let b = bump(1.0 - u);
        let da = bump_deriv(u);
        let db = -bump_deriv(1.0 - u);
        (da * b - a * db) / ((a + b) * (a + b))
    }
}

/// 5-point Gauss-Legendre nodes/weights on [-1, 1].
const GL5_NODES: [f64; 5] = [
    -0.906179845938664,
    -0.538469310105683,
    0.0,
    0.538469310105683,
    0.906179845938664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236926885056189,
    0.478628670499366,
    0.568888888888889,
    0.478628670499366,
    0.236926885056189,
];

/// Composite 5-point Gauss-Legendre quadrature of `f` on [a, b] with `panels`
/// equal subintervals.
pub fn gauss_legendre<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * w;
        let mid = lo + 0.5 * w;
        let half = 0.5 * w;
        for i in 0..5 {
            total += GL5_WEIGHTS[i] * half * f(mid + half * GL5_NODES[i]);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_endpoints_and_monotone() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(1.0), 1.0);
        let mut prev = 0.0;
        for i in 1..=100 {
            let s = smoothstep(i as f64 / 100.0);
            assert!(s >= prev);
            prev = s;
        }
        assert!((smoothstep(0.5) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn gl_exact_on_polynomials() {
        // 5-point rule is exact through degree 9 per panel
        let v = gauss_legendre(0.0, 2.0, 1, |t| t.powi(9));
        assert!((v - 2.0f64.powi(10) / 10.0).abs() < 1e-12);
    }

    #[test]
    fn gl_smooth_convergence() {
        let a = gauss_legendre(-1.0, 1.0, 16, |t| (t * t).cos());
        let b = gauss_legendre(-1.0, 1.0, 32, |t| (t * t).cos());
        assert!((a - b).abs() < 1e-14);
    }
}
