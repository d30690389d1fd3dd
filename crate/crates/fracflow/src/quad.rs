//! Quadrature building blocks: Gauss-Legendre panels, dyadically graded
//! meshes for endpoint singularities, and the Dawson integral.

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; accurate to ~1e-15 for the
/// orders used here (<= 64).
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrate `f` over [a, b] with a single Gauss-Legendre panel.
pub fn gl_panel(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// Integrate `f` over (0, upper] on a mesh graded dyadically toward 0.
///
/// Panels are [upper/2^{m+1}, upper/2^m] for m = 0..levels, each handled by
/// one Gauss-Legendre rule, plus the closing panel (0, upper/2^levels] which
/// is dropped (the grading depth is chosen so the integrand there is
/// negligible for the algebraic singularities we integrate).
pub fn graded_to_zero(f: &mut dyn FnMut(f64) -> f64, upper: f64, levels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mut total = 0.0;
    let mut hi = upper;
    for _ in 0..levels {
        let lo = 0.5 * hi;
        total += gl_panel(f, lo, hi, &nodes, &weights);
        hi = lo;
    }
    total
}

/// Integrate `f` over [lower, upper] with panels graded geometrically
/// (ratio 2) from `lower` upward; suited to slowly decaying tails.
pub fn graded_tail(f: &mut dyn FnMut(f64) -> f64, lower: f64, upper: f64, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mut total = 0.0;
    let mut lo = lower;
    while lo < upper {
        let hi = (2.0 * lo).min(upper);
        total += gl_panel(f, lo, hi, &nodes, &weights);
        lo = hi;
    }
    total
}

/// Dawson integral D(x) = exp(-x^2) int_0^x exp(t^2) dt.
///
/// Maclaurin series for small |x|, Rybicki's sampling expansion
/// (step h = 0.25, 14 terms, good to ~1e-16) elsewhere.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 0.2 {
        // x - 2x^3/3 + 4x^5/15 - ...
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for k in 1..30 {
            term *= -2.0 * x2 / (2.0 * k as f64 + 1.0);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    const H: f64 = 0.25;
    const NMAX: usize = 14;
    let n0 = 2 * ((0.5 * ax / H + 0.5).floor() as i64);
    let xp = ax - n0 as f64 * H;
    let e1 = (2.0 * xp * H).exp();
    let e2 = e1 * e1;
    let mut d1 = (n0 + 1) as f64;
    let mut d2 = d1 - 2.0;
    let mut en = e1;
    let mut sum = 0.0;
    for i in 1..=NMAX {
        let c = (-((2.0 * i as f64 - 1.0) * H).powi(2)).exp();
        sum += c * (en / d1 + 1.0 / (d2 * en));
        d1 += 2.0;
        d2 -= 2.0;
        en *= e2;
    }
    let v = (1.0 / std::f64::consts::PI.sqrt()) * (-xp * xp).exp() * sum;
    if x < 0.0 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let (nodes, weights) = gauss_legendre(8);
        // degree-15 polynomial is exact for an 8-point rule
        let val = gl_panel(&mut |x| x.powi(14), -1.0, 1.0, &nodes, &weights);
        assert_abs_diff_eq!(val, 2.0 / 15.0, epsilon = 1e-14);
    }

    #[test]
    fn gl_weights_sum_to_interval() {
        for order in [4, 16, 32, 64] {
            let (_, weights) = gauss_legendre(order);
            let s: f64 = weights.iter().sum();
            assert_abs_diff_eq!(s, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn graded_mesh_handles_algebraic_singularity() {
        // int_0^1 s^{-0.7} ds = 1/0.3
        let val = graded_to_zero(&mut |s| s.powf(-0.7), 1.0, 160, 16);
        assert_abs_diff_eq!(val, 1.0 / 0.3, epsilon = 1e-9);
    }

    #[test]
    fn dawson_reference_values() {
        // Abramowitz & Stegun table 7.5
        assert_abs_diff_eq!(dawson(0.5), 0.4244363835020223, epsilon = 1e-12);
        assert_abs_diff_eq!(dawson(1.0), 0.5380795069127684, epsilon = 1e-12);
        assert_abs_diff_eq!(dawson(2.0), 0.3013403889237920, epsilon = 1e-12);
        assert_abs_diff_eq!(dawson(10.0), 0.05025384718759854, epsilon = 1e-10);
        assert_abs_diff_eq!(dawson(-1.0), -0.5380795069127684, epsilon = 1e-12);
    }
}
