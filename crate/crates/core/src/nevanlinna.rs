//! Numerical Nevanlinna functionals: proximity m(r,·), counting N(r,·),
//! characteristic T = m + N, growth order, and growth desk-checks for shifts
//! and polynomial compositions.
//!
//! Functions are supplied as [`MeromorphicEvaluator`]s: a point evaluator plus
//! an analytic pole inventory (lattice points for ℘, the denominator zeros for
//! a rational function, nothing for an entire function). The proximity
//! integral is the only quadrature; counting telescopes to an exact sum over
//! the declared poles.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::elliptic::{self, EvaluationSettings, Lattice};
use crate::quadrature::{self, QuadratureError};

#[derive(Debug, Error)]
pub enum NevanlinnaError {
    #[error(
        "circle |z| = {r} passes within {distance:.6e} of the pole at \
         {pole} (guard margin {margin:.6e})"
    )]
    CircleNearPole { r: f64, pole: Complex64, distance: f64, margin: f64 },
    #[error("proximity quadrature did not converge: {0}")]
    Proximity(#[from] QuadratureError),
    #[error("radius must be positive, got {r}")]
    InvalidRadius { r: f64 },
    #[error("order estimate needs at least {needed} samples with T > 0, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid polynomial composition: {detail}")]
    InvalidComposition { detail: String },
    #[error("evaluator construction failed: {detail}")]
    Evaluator { detail: String },
}

type EvalFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;
type PolesFn = dyn Fn(f64) -> Vec<(Complex64, u32)> + Send + Sync;

/// A meromorphic function presented as a point evaluator together with its
/// pole inventory `known_poles(r)` = all poles of modulus ≤ r with
/// multiplicities. The inventory is analytic input, not something detected
/// numerically, so counting is exact; `lemma_checks` probes it against the
/// evaluator as a consistency diagnostic.
#[derive(Clone)]
pub struct MeromorphicEvaluator {
    label: String,
    evaluate: Arc<EvalFn>,
    known_poles: Arc<PolesFn>,
    circle_margin: f64,
}

impl std::fmt::Debug for MeromorphicEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeromorphicEvaluator")
            .field("label", &self.label)
            .field("circle_margin", &self.circle_margin)
            .finish_non_exhaustive()
    }
}

impl MeromorphicEvaluator {
    pub fn new(
        label: impl Into<String>,
        evaluate: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        known_poles: impl Fn(f64) -> Vec<(Complex64, u32)> + Send + Sync + 'static,
        circle_margin: f64,
    ) -> Self {
        MeromorphicEvaluator {
            label: label.into(),
            evaluate: Arc::new(evaluate),
            known_poles: Arc::new(known_poles),
            circle_margin,
        }
    }

    /// An entire function: empty pole inventory, no circle guard needed.
    pub fn entire(
        label: impl Into<String>,
        evaluate: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, evaluate, |_| Vec::new(), 0.0)
    }

    pub fn constant(value: Complex64) -> Self {
        Self::entire(format!("const({value})"), move |_| value)
    }

    /// A function with a finite, explicitly listed pole set (e.g. a rational
    /// function). Poles are stored sorted by (modulus, re, im).
    pub fn with_poles(
        label: impl Into<String>,
        evaluate: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        mut poles: Vec<(Complex64, u32)>,
        circle_margin: f64,
    ) -> Self {
        poles.sort_by(|a, b| {
            a.0.norm()
                .total_cmp(&b.0.norm())
                .then(a.0.re.total_cmp(&b.0.re))
                .then(a.0.im.total_cmp(&b.0.im))
        });
        Self::new(
            label,
            evaluate,
            move |r| poles.iter().filter(|(p, _)| p.norm() <= r).copied().collect(),
            circle_margin,
        )
    }

    /// The equianharmonic ℘ as an evaluator: unguarded series evaluation (the
    /// Laurent expansion is exact at the pole, merely huge nearby) with the
    /// lattice points as double poles. `circle_margin` is the caller-declared
    /// guard for admissible radii; `Lattice::default_circle_margin` is the
    /// conservative default.
    pub fn weierstrass(
        lattice: &Lattice,
        settings: &EvaluationSettings,
        circle_margin: f64,
    ) -> Result<Self, NevanlinnaError> {
        settings
            .validate()
            .map_err(|e| NevanlinnaError::Evaluator { detail: e.to_string() })?;
        let lat_eval = lattice.clone();
        let lat_poles = lattice.clone();
        let settings = *settings;
        Ok(Self::new(
            "wp",
            move |z| match elliptic::wp_eval_unguarded(z, &lat_eval, &settings) {
                Ok(v) => v.p,
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            },
            move |r| elliptic::enumerate_poles(r, &lat_poles),
            circle_margin,
        ))
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        (self.evaluate)(z)
    }

    /// All declared poles of modulus ≤ r.
    pub fn poles_within(&self, r: f64) -> Vec<(Complex64, u32)> {
        (self.known_poles)(r)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn circle_margin(&self) -> f64 {
        self.circle_margin
    }

    /// The shifted function z ↦ f(z + c). Poles move to p − c.
    pub fn shifted(&self, c: Complex64) -> Self {
        let eval = Arc::clone(&self.evaluate);
        let poles = Arc::clone(&self.known_poles);
        Self::new(
            format!("shift[{c}]({})", self.label),
            move |z| eval(z + c),
            move |r| {
                let mut out: Vec<(Complex64, u32)> = poles(r + c.norm())
                    .into_iter()
                    .map(|(p, k)| (p - c, k))
                    .filter(|(p, _)| p.norm() <= r)
                    .collect();
                out.sort_by(|a, b| {
                    a.0.norm()
                        .total_cmp(&b.0.norm())
                        .then(a.0.re.total_cmp(&b.0.re))
                        .then(a.0.im.total_cmp(&b.0.im))
                });
                out
            },
            self.circle_margin,
        )
    }

    /// The polynomial composition z ↦ Σ aⱼ·f(z)ʲ for constant coefficients
    /// a₀..a_p (ascending, a_p ≠ 0, p ≥ 1). Every pole of f of multiplicity k
    /// becomes a pole of multiplicity p·k.
    pub fn polynomial_comp(
        &self,
        coefficients: &[Complex64],
    ) -> Result<Self, NevanlinnaError> {
        if coefficients.len() < 2 {
            return Err(NevanlinnaError::InvalidComposition {
                detail: "need degree >= 1 (at least two coefficients)".to_string(),
            });
        }
        let Some(lead) = coefficients.last() else { unreachable!() };
        if lead.norm() == 0.0 {
            return Err(NevanlinnaError::InvalidComposition {
                detail: "leading coefficient must be nonzero".to_string(),
            });
        }
        let degree = (coefficients.len() - 1) as u32;
        let coeffs: Vec<Complex64> = coefficients.to_vec();
        let eval = Arc::clone(&self.evaluate);
        let poles = Arc::clone(&self.known_poles);
        Ok(Self::new(
            format!("comp[deg={degree}]({})", self.label),
            move |z| {
                let w = eval(z);
                let mut acc = Complex64::new(0.0, 0.0);
                for &a in coeffs.iter().rev() {
                    acc = acc * w + a;
                }
                acc
            },
            move |r| poles(r).into_iter().map(|(p, k)| (p, k * degree)).collect(),
            self.circle_margin,
        ))
    }

    /// Distance from the circle |z| = r to the nearest declared pole, and that
    /// pole. `None` when there are no poles within r + margin (every pole
    /// further out clears the margin automatically).
    fn nearest_pole_to_circle(&self, r: f64) -> Option<(Complex64, f64)> {
        self.poles_within(r + self.circle_margin)
            .into_iter()
            .map(|(p, _)| (p, (p.norm() - r).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.re.total_cmp(&b.0.re)))
    }

    fn check_circle(&self, r: f64) -> Result<(), NevanlinnaError> {
        if self.circle_margin <= 0.0 {
            return Ok(());
        }
        if let Some((pole, distance)) = self.nearest_pole_to_circle(r) {
            if distance < self.circle_margin {
                return Err(NevanlinnaError::CircleNearPole {
                    r,
                    pole,
                    distance,
                    margin: self.circle_margin,
                });
            }
        }
        Ok(())
    }
}

fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Proximity function m(r,f) = (1/2π)∫₀^{2π} log⁺|f(re^{iθ})| dθ by the
/// trapezoid rule with interval doubling (spectrally accurate for periodic
/// integrands), refined until successive passes differ by less than 1e−4
/// relative or 1e−8 absolute. `n_theta` seeds the initial node count and is
/// clamped up to 256.
pub fn proximity(
    f: &MeromorphicEvaluator,
    r: f64,
    n_theta: usize,
) -> Result<f64, NevanlinnaError> {
    if r.is_nan() || r <= 0.0 {
        return Err(NevanlinnaError::InvalidRadius { r });
    }
    f.check_circle(r)?;
    let integrand = |theta: f64| log_plus(f.evaluate(Complex64::from_polar(r, theta)).norm());
    let mean = quadrature::periodic_mean(&integrand, TAU, n_theta.max(256), 1e-4, 1e-8, 1 << 21)?;
    Ok(mean.value)
}

/// Counting function N(r,f) = n(0)·log r + Σ_{0 < |p| ≤ r} mult·log(r/|p|),
/// the exact (telescoped) form of n(0)·log r + ∫₀^r (n(t) − n(0))/t dt.
/// Requires r > 0 (enforced upstream by `proximity`/`characteristic_curve`).
pub fn counting(f: &MeromorphicEvaluator, r: f64) -> f64 {
    debug_assert!(r > 0.0, "counting needs a positive radius");
    let origin_tol = 1e-12 * (1.0 + r);
    let mut total = 0.0;
    for (p, mult) in f.poles_within(r) {
        let modulus = p.norm();
        if modulus <= origin_tol {
            total += mult as f64 * r.ln();
        } else {
            total += mult as f64 * (r / modulus).ln();
        }
    }
    total
}

/// One characteristic sample: T = m + N at radius r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub r: f64,
    pub m: f64,
    pub n: f64,
    pub t: f64,
}

/// Sampled (r, m, N, T) data for one evaluator. Radii are strictly
/// increasing; inadmissible radii (circle too close to a pole) are recorded
/// in `excluded` rather than silently dropped.
#[derive(Debug, Clone)]
pub struct NevanlinnaCurve {
    pub label: String,
    pub samples: Vec<CurveSample>,
    pub excluded: Vec<(f64, String)>,
    pub notes: Vec<String>,
}

/// Compute the characteristic curve over `r_grid`. Radii for which the
/// proximity circle violates the pole margin are skipped and reported in
/// `excluded`; non-monotone T beyond 1e−6 is flagged in `notes`. Duplicate
/// radii are collapsed.
pub fn characteristic_curve(
    f: &MeromorphicEvaluator,
    r_grid: &[f64],
    n_theta: usize,
) -> Result<NevanlinnaCurve, NevanlinnaError> {
    let mut radii: Vec<f64> = r_grid.to_vec();
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let mut samples = Vec::new();
    let mut excluded = Vec::new();
    let mut notes = Vec::new();
    for &r in &radii {
        if r.is_nan() || r <= 0.0 {
            return Err(NevanlinnaError::InvalidRadius { r });
        }
        match proximity(f, r, n_theta) {
            Ok(m) => {
                let n = counting(f, r);
                samples.push(CurveSample { r, m, n, t: m + n });
            }
            Err(e @ NevanlinnaError::CircleNearPole { .. }) => {
                excluded.push((r, e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    for w in samples.windows(2) {
        if w[1].t < w[0].t - 1e-6 * (1.0 + w[0].t.abs()) {
            notes.push(format!(
                "T decreases from {:.6e} at r = {} to {:.6e} at r = {}",
                w[0].t, w[0].r, w[1].t, w[1].r
            ));
        }
    }
    Ok(NevanlinnaCurve {
        label: f.label().to_string(),
        samples,
        excluded,
        notes,
    })
}

/// For a ℘ curve, the ratio T(r,℘)·A/(πr²) at each sample; the asymptotic
/// T(r,℘) = (π/A)·r²·(1 + o(1)) drives these to 1 as r grows.
pub fn wp_asymptotic_check(curve: &NevanlinnaCurve, lattice: &Lattice) -> Vec<(f64, f64)> {
    curve
        .samples
        .iter()
        .map(|s| (s.r, s.t * lattice.area / (PI * s.r * s.r)))
        .collect()
}

/// Least-squares growth-order estimate from a characteristic curve.
#[derive(Debug, Clone)]
pub struct OrderEstimate {
    /// Estimated order ρ̂ ≥ 0 (slope of log T against log r, clamped at 0).
    pub rho_hat: f64,
    /// Radii actually used by the fit (smallest, largest).
    pub fit_range: (f64, f64),
    /// Coefficient of determination of the fit, in [0, 1].
    pub fit_quality: f64,
    pub notes: Vec<String>,
}

/// Estimate the order as the least-squares slope of log T versus log r over
/// the largest-r half of the positive-T samples (the order is an asymptotic
/// quantity; small radii bias the slope). Needs at least 6 samples with
/// T > 0; a curve with every T ≤ 0 is a bounded function and reports order 0
/// directly.
pub fn order_estimate(curve: &NevanlinnaCurve) -> Result<OrderEstimate, NevanlinnaError> {
    let positive: Vec<&CurveSample> =
        curve.samples.iter().filter(|s| s.t > 0.0).collect();
    if positive.is_empty() && !curve.samples.is_empty() {
        return Ok(OrderEstimate {
            rho_hat: 0.0,
            fit_range: (
                curve.samples.first().map(|s| s.r).unwrap_or(0.0),
                curve.samples.last().map(|s| s.r).unwrap_or(0.0),
            ),
            fit_quality: 1.0,
            notes: vec!["all T <= 0: bounded function, order 0 by definition".to_string()],
        });
    }
    if positive.len() < 6 {
        return Err(NevanlinnaError::InsufficientSamples {
            needed: 6,
            got: positive.len(),
        });
    }

    let fit_count = positive.len().div_ceil(2);
    let fit = &positive[positive.len() - fit_count..];
    let xs: Vec<f64> = fit.iter().map(|s| s.r.ln()).collect();
    let ys: Vec<f64> = fit.iter().map(|s| s.t.ln()).collect();
    let n = xs.len() as f64;
    let x_bar = xs.iter().sum::<f64>() / n;
    let y_bar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_bar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_bar) * (y - y_bar)).sum();
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - y_bar).powi(2)).sum();
    let quality = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    let mut notes = Vec::new();
    if slope < 0.0 {
        notes.push(format!(
            "raw slope {slope:.6e} is negative (sub-logarithmic growth); clamped to 0"
        ));
    }
    Ok(OrderEstimate {
        rho_hat: slope.max(0.0),
        fit_range: (fit[0].r, fit[fit.len() - 1].r),
        fit_quality: quality,
        notes,
    })
}

/// Which growth desk-check to run.
#[derive(Debug, Clone)]
pub enum LemmaMode {
    /// Compare T(r, f(·+c)) against T(r, f): the gap is O(r^{ρ−1+ε}) + O(log r),
    /// checked with ε = 0.1.
    Shift { c: Complex64 },
    /// Compare T(r, Σ aⱼ fʲ) against p·T(r, f) for constant coefficients.
    PolynomialComp { coefficients: Vec<Complex64> },
}

#[derive(Debug, Clone, Copy)]
pub struct LemmaRow {
    pub r: f64,
    pub t_base: f64,
    pub t_variant: f64,
    /// Shift mode: |ΔT| / r^{ρ̂−1+0.1}. Composition mode: |T_comp − p·T| / T.
    pub normalized: f64,
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub mode: String,
    pub base_label: String,
    pub variant_label: String,
    pub rows: Vec<LemmaRow>,
    /// Shift mode: max normalized gap over all rows. Composition mode: max
    /// over the largest-r half of the rows (the lemma is asymptotic).
    pub max_normalized: f64,
    /// Order estimate of the base function (used by the shift normalization).
    pub rho_hat: f64,
    pub notes: Vec<String>,
}

/// Desk-check the growth lemmas on a concrete evaluator and grid.
///
/// Shift mode reports max |T(r,f_c) − T(r,f)| / r^{ρ̂−1+0.1}; composition mode
/// reports max |T(r, Σaⱼfʲ) − p·T(r,f)| / T(r,f) over the largest-r half of
/// the grid. Declared poles are probed against the evaluator (|f| should be
/// large just off a pole); inconsistencies become notes, not errors.
pub fn lemma_checks(
    f: &MeromorphicEvaluator,
    mode: &LemmaMode,
    r_grid: &[f64],
    n_theta: usize,
) -> Result<LemmaReport, NevanlinnaError> {
    let base = characteristic_curve(f, r_grid, n_theta)?;
    let rho_hat = order_estimate(&base)?.rho_hat;

    let variant_eval = match mode {
        LemmaMode::Shift { c } => f.shifted(*c),
        LemmaMode::PolynomialComp { coefficients } => f.polynomial_comp(coefficients)?,
    };
    let variant = characteristic_curve(&variant_eval, r_grid, n_theta)?;

    let mut notes = Vec::new();
    for (r, why) in base.excluded.iter().chain(variant.excluded.iter()) {
        notes.push(format!("radius {r} excluded: {why}"));
    }

    // Pole-bookkeeping probe: just off a declared pole the evaluator should
    // blow up. A modest |f| there means the inventory and the evaluator
    // disagree.
    let r_max = r_grid.iter().copied().fold(0.0, f64::max);
    for (p, _) in f.poles_within(r_max).into_iter().take(8) {
        let delta = 1e-4 * (1.0 + p.norm());
        let probe = f.evaluate(p + Complex64::new(delta, 0.0)).norm();
        if probe.is_nan() || probe <= 1e2 {
            notes.push(format!(
                "declared pole at {p} not reflected by the evaluator: |f(pole + {delta:.1e})| = {probe:.3e}"
            ));
        }
    }

    let mut rows = Vec::new();
    for b in &base.samples {
        let Some(v) = variant.samples.iter().find(|v| v.r == b.r) else {
            continue;
        };
        let normalized = match mode {
            LemmaMode::Shift { .. } => {
                (v.t - b.t).abs() / b.r.powf(rho_hat - 1.0 + 0.1)
            }
            LemmaMode::PolynomialComp { coefficients } => {
                let p = (coefficients.len() - 1) as f64;
                (v.t - p * b.t).abs() / b.t
            }
        };
        rows.push(LemmaRow { r: b.r, t_base: b.t, t_variant: v.t, normalized });
    }

    let max_normalized = match mode {
        LemmaMode::Shift { .. } => rows
            .iter()
            .map(|row| row.normalized)
            .fold(0.0, f64::max),
        LemmaMode::PolynomialComp { .. } => {
            let top = rows.len().div_ceil(2);
            notes.push(format!(
                "composition gap maximized over the largest-r {top} of {} rows",
                rows.len()
            ));
            rows[rows.len() - top..]
                .iter()
                .map(|row| row.normalized)
                .fold(0.0, f64::max)
        }
    };

    Ok(LemmaReport {
        mode: match mode {
            LemmaMode::Shift { .. } => "shift".to_string(),
            LemmaMode::PolynomialComp { .. } => "polynomial_comp".to_string(),
        },
        base_label: base.label.clone(),
        variant_label: variant.label.clone(),
        rows,
        max_normalized,
        rho_hat,
        notes,
    })
}
