//! Scalar quadrature helpers: adaptive Simpson integration on a finite
//! interval, and trapezoid refinement for smooth periodic integrands.
//!
//! These are deliberately small and deterministic; they back the period
//! integral in [`crate::elliptic`] and the circle averages in
//! [`crate::nevanlinna`].

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error(
        "adaptive Simpson did not converge on [{a}, {b}] at tolerance {tolerance:.3e} \
         (depth limit {max_depth})"
    )]
    SimpsonNonConvergence { a: f64, b: f64, tolerance: f64, max_depth: u32 },
    #[error(
        "periodic trapezoid did not converge: n = {n}, last refinement delta {delta:.3e}"
    )]
    TrapezoidNonConvergence { n: usize, delta: f64 },
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tolerance`, with the usual Richardson end correction.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tolerance: f64,
    max_depth: u32,
) -> Result<f64, QuadratureError> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_rule(a, b, fa, fm, fb);
    simpson_recurse(f, a, b, fa, fm, fb, whole, tolerance, max_depth).ok_or(
        QuadratureError::SimpsonNonConvergence { a, b, tolerance, max_depth },
    )
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tolerance: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tolerance {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let lv = simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tolerance, depth - 1)?;
    let rv = simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tolerance, depth - 1)?;
    Some(lv + rv)
}

/// Result of a periodic-trapezoid refinement: the mean of `f` over one period
/// and the number of nodes at which convergence was declared.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicMean {
    pub value: f64,
    pub nodes: usize,
}

/// Mean of `f` over one period `[0, period)` by the trapezoid rule with
/// interval doubling. For a periodic integrand the trapezoid rule on uniform
/// nodes is spectrally accurate wherever `f` is smooth; doubling reuses all
/// previous evaluations (the refined mean is the average of the current mean
/// and the mean over midpoints).
///
/// Stops when successive refinements differ by less than
/// `max(rel_tol * |value|, abs_tol)`; errors out at `max_n` nodes.
pub fn periodic_mean(
    f: &dyn Fn(f64) -> f64,
    period: f64,
    start_n: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_n: usize,
) -> Result<PeriodicMean, QuadratureError> {
    let mut n = start_n.max(4);
    let mut mean = {
        let mut acc = 0.0;
        for k in 0..n {
            acc += f(period * k as f64 / n as f64);
        }
        acc / n as f64
    };
    let mut delta = f64::INFINITY;
    while n < max_n {
        let mut acc = 0.0;
        for k in 0..n {
            acc += f(period * (k as f64 + 0.5) / n as f64);
        }
        let refined = 0.5 * (mean + acc / n as f64);
        delta = (refined - mean).abs();
        mean = refined;
        n *= 2;
        if delta <= rel_tol * mean.abs() || delta <= abs_tol {
            return Ok(PeriodicMean { value: mean, nodes: n });
        }
    }
    Err(QuadratureError::TrapezoidNonConvergence { n, delta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_sine() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13, 40)
            .expect("convergence");
        assert!((v - 2.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn simpson_integrates_decaying_tail() {
        // ∫_0^1 1/sqrt(x) dx handled badly is a classic failure; use a shifted
        // smooth integrand instead and compare against the closed form.
        let v = adaptive_simpson(&|x: f64| (2.0 * x + 1.0).recip(), 0.0, 1.0, 1e-13, 40)
            .expect("convergence");
        assert!((v - 0.5 * 3.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn simpson_reports_depth_exhaustion() {
        // A step discontinuity cannot meet an extreme tolerance at depth 2.
        let f = |x: f64| if x < 0.3 { 0.0 } else { 1.0 };
        let err = adaptive_simpson(&f, 0.0, 1.0, 1e-15, 2).unwrap_err();
        assert!(matches!(err, QuadratureError::SimpsonNonConvergence { .. }));
    }

    #[test]
    fn periodic_mean_of_cos_squared() {
        let two_pi = std::f64::consts::TAU;
        let m = periodic_mean(&|t: f64| t.cos().powi(2), two_pi, 8, 1e-12, 1e-14, 1 << 20)
            .expect("convergence");
        assert!((m.value - 0.5).abs() < 1e-13, "got {}", m.value);
    }

    #[test]
    fn periodic_mean_respects_node_cap() {
        // A kink converges only at O(h^2); an absurd tolerance with a tiny cap
        // must surface as non-convergence rather than a silent wrong answer.
        let two_pi = std::f64::consts::TAU;
        let err = periodic_mean(&|t: f64| t.sin().abs(), two_pi, 8, 1e-15, 0.0, 64).unwrap_err();
        assert!(matches!(err, QuadratureError::TrapezoidNonConvergence { .. }));
    }
}
