//! Slow, independent reference computations used by the test suites.
//!
//! Nothing here is used by the solvers.

use crate::quadrature::GaussLegendre;
use crate::specfun::gamma_positive;

/// Caputo derivative of order `1 < α < 2` at `t`,
/// `1/Γ(2−α) ∫_0^t (t−s)^{1−α} u''(s) ds`, by product-trapezoid quadrature
/// on an `m`-interval mesh graded toward `s = 0` (`s_j = t (j/m)²`).
///
/// The kernel is integrated exactly against the piecewise-linear interpolant
/// of `u''`; intervals well away from `s = t` use an 8-point Gauss rule for
/// the same moments to avoid cancellation.
pub fn caputo_derivative(second_derivative: impl Fn(f64) -> f64, alpha: f64, t: f64, m: usize) -> f64 {
    assert!(alpha > 1.0 && alpha < 2.0, "order must lie in (1, 2)");
    assert!(m >= 1);
    if t == 0.0 {
        return 0.0;
    }
    let beta = 2.0 - alpha;
    let gauss = GaussLegendre::new(8);
    let node = |j: usize| t * (j as f64 / m as f64).powi(2);
    let mut total = 0.0;
    let mut f_left = second_derivative(0.0);
    for j in 0..m {
        let (s0, s1) = (node(j), node(j + 1));
        let f_right = second_derivative(s1);
        // v = t − s runs from a down to b.
        let (a, b) = (t - s0, t - s1);
        let width = a - b;
        let (w_left, w_right) = if b > 2.0 * width {
            let left = gauss.integrate(b, a, |v| v.powf(beta - 1.0) * (v - b) / width);
            let right = gauss.integrate(b, a, |v| v.powf(beta - 1.0) * (a - v) / width);
            (left, right)
        } else {
            let i0 = (a.powf(beta) - b.powf(beta)) / beta;
            let i1 = (a.powf(beta + 1.0) - b.powf(beta + 1.0)) / (beta + 1.0);
            ((i1 - b * i0) / width, (a * i0 - i1) / width)
        };
        total += w_left * f_left + w_right * f_right;
        f_left = f_right;
    }
    total / gamma_positive(beta)
}

/// Adaptive bisection with a 10-point Gauss rule, accepting a panel when
/// its two halves agree with the whole to `tol`. Endpoint singularities
/// such as `ln s` are resolved by repeated halving.
pub fn integrate_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let rule = GaussLegendre::new(10);
    let whole = rule.integrate(a, b, f);
    refine(f, &rule, a, b, whole, tol, 0)
}

fn refine(f: &impl Fn(f64) -> f64, rule: &GaussLegendre, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    if (left + right - whole).abs() <= tol || depth >= 60 {
        return left + right;
    }
    refine(f, rule, a, mid, left, 0.5 * tol, depth + 1) + refine(f, rule, mid, b, right, 0.5 * tol, depth + 1)
}

/// `∫_{−ℓ/2}^{ℓ/2} k(|s|) ds` for a kernel with an integrable singularity at
/// `s = 0`, split at the singular point.
pub fn singular_line_integral(kernel: impl Fn(f64) -> f64, length: f64, tol: f64) -> f64 {
    2.0 * integrate_adaptive(&kernel, 0.0, 0.5 * length, 0.5 * tol)
}
