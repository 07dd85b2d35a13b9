//! The equianharmonic Weierstrass elliptic function.
//!
//! Everything in this crate is pinned to the normalization g₂ = 0, g₃ = 1,
//! i.e. the differential equation (℘')² = 4℘³ − 1. The period lattice is then
//! hexagonal: a real period ω₁ and ω₂ = ω₁·e^{iπ/3}. This module builds that
//! lattice from the defining period integral, reduces arguments into the
//! fundamental cell, evaluates ℘ and ℘' by Laurent series (with one algebraic
//! duplication step for arguments near the cell boundary), and enumerates
//! poles and zeros.
//!
//! All functions are pure and deterministic: the same inputs produce
//! bit-identical outputs.

use std::sync::LazyLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::{self, QuadratureError};

/// Fraction of |ω₁| beyond which a reduced argument is evaluated at z/2 and
/// doubled back algebraically. The cell corner sits at |z| ≈ 0.866·|ω₁|, so
/// halving always lands strictly inside the series' comfort zone.
const DUPLICATION_CUTOFF: f64 = 0.45;

/// Real two-torsion value e₁ = ℘(ω₁/2), the real root of 4t³ − 1 = 0.
pub fn e1() -> f64 {
    0.25_f64.cbrt()
}

#[derive(Debug, Error)]
pub enum EllipticError {
    #[error("period quadrature failed: {0}")]
    PeriodQuadrature(#[from] QuadratureError),
    #[error("lattice self-check failed: {detail}")]
    LatticeSelfCheck { detail: String },
    #[error(
        "z = {z} lies within {distance:.6e} of lattice point {lattice_point} \
         (pole guard {guard:.6e})"
    )]
    PoleProximity { z: Complex64, lattice_point: Complex64, distance: f64, guard: f64 },
    #[error(
        "Laurent series did not reach tolerance {tolerance:.3e} within {max_terms} terms \
         (last term magnitude {last_term:.3e})"
    )]
    SeriesNonConvergence { tolerance: f64, max_terms: usize, last_term: f64 },
    #[error("invalid evaluation settings: {detail}")]
    InvalidSettings { detail: String },
    #[error("zero search found {found} distinct zeros in the cell, expected 2")]
    ZeroSearch { found: usize },
}

/// The hexagonal period lattice of the equianharmonic ℘.
#[derive(Debug, Clone)]
pub struct Lattice {
    /// Real period.
    pub omega1: Complex64,
    /// ω₂ = ω₁·e^{iπ/3}.
    pub omega2: Complex64,
    /// Area of the fundamental parallelogram, |Im(conj(ω₁)·ω₂)|.
    pub area: f64,
    /// ω₁/2, ω₂/2, (ω₁+ω₂)/2.
    pub half_periods: [Complex64; 3],
}

impl Lattice {
    /// Evaluation settings matched to this lattice: machine-epsilon series
    /// cutoff and a pole guard of 10⁻³·|ω₁|.
    pub fn default_settings(&self) -> EvaluationSettings {
        EvaluationSettings {
            series_tolerance: f64::EPSILON,
            max_terms: 64,
            pole_guard: 1e-3 * self.omega1.norm(),
        }
    }

    /// Default guard half-width for circle integrals near pole rings
    /// (see `nevanlinna`): 0.05·|ω₁|. Callers may declare a tighter margin.
    pub fn default_circle_margin(&self) -> f64 {
        0.05 * self.omega1.norm()
    }
}

/// Knobs for the Laurent evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvaluationSettings {
    /// Relative term-size cutoff for the series; at least machine epsilon.
    pub series_tolerance: f64,
    /// Maximum number of Laurent coefficients consumed.
    pub max_terms: usize,
    /// Minimum distance from lattice points at which evaluation is attempted.
    pub pole_guard: f64,
}

impl Default for EvaluationSettings {
    fn default() -> Self {
        // Pole guard 10⁻³·ω₁ for the (only) lattice this crate works with.
        EvaluationSettings {
            series_tolerance: f64::EPSILON,
            max_terms: 64,
            pole_guard: 3.0599080741143857e-3,
        }
    }
}

impl EvaluationSettings {
    /// Check the settings invariants: tolerance at or above machine epsilon,
    /// a positive pole guard, and a term cap within the tabulated range.
    pub fn validate(&self) -> Result<(), EllipticError> {
        if self.series_tolerance.is_nan() || self.series_tolerance < f64::EPSILON {
            return Err(EllipticError::InvalidSettings {
                detail: format!(
                    "series_tolerance {} is below machine epsilon",
                    self.series_tolerance
                ),
            });
        }
        if self.pole_guard.is_nan() || self.pole_guard <= 0.0 {
            return Err(EllipticError::InvalidSettings {
                detail: format!("pole_guard {} must be positive", self.pole_guard),
            });
        }
        if self.max_terms < 8 || self.max_terms > MAX_COEFF {
            return Err(EllipticError::InvalidSettings {
                detail: format!("max_terms {} outside [8, {MAX_COEFF}]", self.max_terms),
            });
        }
        Ok(())
    }
}

/// A value of ℘ together with ℘' at the same point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpValue {
    pub p: Complex64,
    pub p_prime: Complex64,
}

impl WpValue {
    /// Scaled residual of the defining curve, |℘'² − 4℘³ + 1| / (1 + |℘|³).
    pub fn ode_residual(&self) -> f64 {
        let lhs = self.p_prime * self.p_prime;
        let rhs = 4.0 * self.p * self.p * self.p - Complex64::new(1.0, 0.0);
        (lhs - rhs).norm() / (1.0 + self.p.norm().powi(3))
    }
}

/// Highest Laurent index k stored; coefficients are c_k for k = 2..=MAX_COEFF.
const MAX_COEFF: usize = 66;

/// Laurent coefficients of ℘ about 0: ℘(z) = z⁻² + Σ_{k≥2} c_k·z^{2k−2},
/// with c₂ = g₂/20 = 0, c₃ = g₃/28 = 1/28 and
/// c_k = 3·Σ_{m=2}^{k−2} c_m·c_{k−m} / ((2k+1)(k−3)) for k ≥ 4.
/// With g₂ = 0 only every third coefficient survives (k ≡ 0 mod 3).
static LAURENT: LazyLock<[f64; MAX_COEFF + 1]> = LazyLock::new(|| {
    let mut c = [0.0_f64; MAX_COEFF + 1];
    c[3] = 1.0 / 28.0;
    for k in 4..=MAX_COEFF {
        let mut s = 0.0;
        for m in 2..=(k - 2) {
            s += c[m] * c[k - m];
        }
        c[k] = 3.0 * s / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    c
});

/// Build the equianharmonic lattice. The real period is computed from the
/// defining integral ω₁ = 2·∫_{e₁}^{∞} dt/√(4t³−1) by adaptive quadrature
/// under the substitution t = e₁ + tan²φ, which maps [0, π/2) onto [e₁, ∞)
/// and turns the integrand into the bounded, smooth sec²φ/√(t² + t·e₁ + e₁²).
/// The result is self-checked through the half-period identities before the
/// lattice is returned.
pub fn compute_lattice() -> Result<Lattice, EllipticError> {
    let e1 = e1();
    let integrand = move |phi: f64| {
        let c = phi.cos();
        if c <= 1e-12 {
            // Limit of the transformed integrand as φ → π/2.
            return 1.0;
        }
        let tan = phi.sin() / c;
        let t = e1 + tan * tan;
        1.0 / (c * c * (t * (t + e1) + e1 * e1).sqrt())
    };
    let half = quadrature::adaptive_simpson(
        &integrand,
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-14,
        48,
    )?;
    let omega1 = Complex64::new(2.0 * half, 0.0);
    let omega2 = omega1 * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let area = (omega1.conj() * omega2).im.abs();
    let lattice = Lattice {
        omega1,
        omega2,
        area,
        half_periods: [0.5 * omega1, 0.5 * omega2, 0.5 * (omega1 + omega2)],
    };
    self_check(&lattice)?;
    Ok(lattice)
}

/// Validate the computed period: ω₁/2 must be a genuine half-period
/// (℘'(ω₁/2) = 0, ℘(ω₁/2) = e₁ — this pins the period length), and the
/// duplication identity must agree with direct series evaluation.
fn self_check(lattice: &Lattice) -> Result<(), EllipticError> {
    let settings = lattice.default_settings();
    let half = lattice.half_periods[0];
    let v = raw_series(half, &settings)?;
    if v.p_prime.norm() > 1e-9 || (v.p - e1()).norm() > 1e-9 {
        return Err(EllipticError::LatticeSelfCheck {
            detail: format!(
                "half-period identities violated: |p'(w1/2)| = {:.3e}, |p(w1/2) - e1| = {:.3e}",
                v.p_prime.norm(),
                (v.p - e1()).norm()
            ),
        });
    }
    let probe = Complex64::new(0.31, 0.22);
    let direct = raw_series(2.0 * probe, &settings)?;
    let mut halved = raw_series(probe, &settings)?;
    project_onto_curve(&mut halved);
    let doubled = duplicate(&halved);
    let scale = 1.0 + direct.p.norm();
    if (doubled.p - direct.p).norm() > 1e-10 * scale {
        return Err(EllipticError::LatticeSelfCheck {
            detail: format!(
                "duplication disagrees with direct series by {:.3e}",
                (doubled.p - direct.p).norm()
            ),
        });
    }
    Ok(())
}

/// Oriented cross product Im(conj(a)·b); the lattice-coordinate workhorse.
fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Write z = z_red + m·ω₁ + n·ω₂ with both lattice coordinates of z_red in
/// the half-open square [−1/2, 1/2).
pub fn reduce_to_cell(z: Complex64, lattice: &Lattice) -> (Complex64, i64, i64) {
    let den = cross(lattice.omega1, lattice.omega2);
    let x = cross(z, lattice.omega2) / den;
    let y = cross(lattice.omega1, z) / den;
    let m = (x + 0.5).floor();
    let n = (y + 0.5).floor();
    let z_red = z - m * lattice.omega1 - n * lattice.omega2;
    (z_red, m as i64, n as i64)
}

/// ℘ and ℘' by straight Laurent summation. Caller must keep |z| well inside
/// the convergence disc |z| < |ω₁|; `wp_eval` guarantees that via reduction
/// and duplication.
fn raw_series(z: Complex64, settings: &EvaluationSettings) -> Result<WpValue, EllipticError> {
    let z2 = z * z;
    let mut p = z2.inv();
    let mut pp = -2.0 * p / z;
    // w tracks z^{2k−3}; the k-th series terms are c_k·w·z and (2k−2)·c_k·w.
    let mut w = z;
    let mut below = 0u32;
    let mut last = f64::INFINITY;
    for k in 2..=settings.max_terms {
        let ck = LAURENT[k];
        p += ck * w * z;
        pp += ((2 * k - 2) as f64 * ck) * w;
        last = ck.abs() * w.norm() * z.norm();
        // Two of every three coefficients vanish identically, so demand three
        // consecutive small terms before declaring convergence.
        if last <= settings.series_tolerance * p.norm().max(1.0) {
            below += 1;
            if below >= 3 {
                return Ok(WpValue { p, p_prime: pp });
            }
        } else {
            below = 0;
        }
        w *= z2;
    }
    Err(EllipticError::SeriesNonConvergence {
        tolerance: settings.series_tolerance,
        max_terms: settings.max_terms,
        last_term: last,
    })
}

/// One Newton step moving ℘' onto (℘')² = 4℘³ − 1. Skipped near the branch
/// locus ℘' ≈ 0, where the correction is ill-conditioned.
fn project_onto_curve(v: &mut WpValue) {
    let target = 4.0 * v.p * v.p * v.p - Complex64::new(1.0, 0.0);
    if v.p_prime.norm_sqr() >= 1e-2 * (1.0 + v.p.norm().powi(3)) {
        v.p_prime = 0.5 * (v.p_prime + target / v.p_prime);
    }
}

/// Algebraic duplication for g₂ = 0: given (℘, ℘') at u, produce the values
/// at 2u via ℘(2u) = 9℘⁴/℘'² − 2℘ and
/// ℘'(2u) = 18℘³/℘' − 54℘⁶/℘'³ − ℘'.
fn duplicate(v: &WpValue) -> WpValue {
    let p = v.p;
    let pp = v.p_prime;
    let p2 = p * p;
    let p3 = p2 * p;
    let pp2 = pp * pp;
    WpValue {
        p: 9.0 * p2 * p2 / pp2 - 2.0 * p,
        p_prime: 18.0 * p3 / pp - 54.0 * p3 * p3 / (pp2 * pp) - pp,
    }
}

fn eval_reduced(
    z_red: Complex64,
    lattice: &Lattice,
    settings: &EvaluationSettings,
) -> Result<WpValue, EllipticError> {
    if z_red.norm() > DUPLICATION_CUTOFF * lattice.omega1.norm() {
        let mut halved = raw_series(0.5 * z_red, settings)?;
        project_onto_curve(&mut halved);
        Ok(duplicate(&halved))
    } else {
        raw_series(z_red, settings)
    }
}

/// Distance from a reduced point to the nearest lattice point, along with
/// that point (searching the 3×3 block of neighbors suffices inside the cell).
fn nearest_lattice_point(z_red: Complex64, lattice: &Lattice) -> (f64, Complex64) {
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for mu in -1..=1 {
        for nu in -1..=1 {
            let lp = mu as f64 * lattice.omega1 + nu as f64 * lattice.omega2;
            let d = (z_red - lp).norm();
            if d < best.0 {
                best = (d, lp);
            }
        }
    }
    best
}

/// Evaluate ℘(z), ℘'(z).
///
/// Arguments are reduced into the fundamental cell; if the reduced point is
/// near the cell boundary the series is evaluated at half the argument and
/// doubled back through the duplication identity. Points within
/// `settings.pole_guard` of a lattice point are rejected.
pub fn wp_eval(
    z: Complex64,
    lattice: &Lattice,
    settings: &EvaluationSettings,
) -> Result<WpValue, EllipticError> {
    settings.validate()?;
    let (z_red, m, n) = reduce_to_cell(z, lattice);
    let (distance, lp) = nearest_lattice_point(z_red, lattice);
    if distance < settings.pole_guard {
        return Err(EllipticError::PoleProximity {
            z,
            lattice_point: lp + m as f64 * lattice.omega1 + n as f64 * lattice.omega2,
            distance,
            guard: settings.pole_guard,
        });
    }
    eval_reduced(z_red, lattice, settings)
}

/// Evaluation without the pole guard, for integrands that merely need huge
/// values near poles rather than an error. The Laurent series *is* the pole
/// expansion, so values arbitrarily close to lattice points are still
/// meaningful (they just lose relative accuracy in the regular part).
pub(crate) fn wp_eval_unguarded(
    z: Complex64,
    lattice: &Lattice,
    settings: &EvaluationSettings,
) -> Result<WpValue, EllipticError> {
    let (z_red, _, _) = reduce_to_cell(z, lattice);
    eval_reduced(z_red, lattice, settings)
}

/// All poles of ℘ of modulus ≤ radius: the lattice points, each of
/// multiplicity 2. Sorted by (modulus, re, im) for reproducible output.
pub fn enumerate_poles(radius: f64, lattice: &Lattice) -> Vec<(Complex64, u32)> {
    let om = lattice.omega1.norm();
    // |μω₁ + νω₂|² = |ω₁|²(μ² + μν + ν²) ≥ (3/4)|ω₁|²·max(μ², ν²).
    let bound = (2.0 * radius / (3.0_f64.sqrt() * om)).ceil() as i64 + 1;
    let mut out = Vec::new();
    for mu in -bound..=bound {
        for nu in -bound..=bound {
            let p = mu as f64 * lattice.omega1 + nu as f64 * lattice.omega2;
            if p.norm() <= radius {
                out.push((p, 2u32));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.norm()
            .total_cmp(&b.0.norm())
            .then(a.0.re.total_cmp(&b.0.re))
            .then(a.0.im.total_cmp(&b.0.im))
    });
    out
}

/// Locate the zeros of ℘ in the fundamental cell by Newton iteration from a
/// grid of seeds. The equianharmonic ℘ has exactly two simple zeros per cell,
/// a ± pair; anything else is reported as a consistency error.
pub fn find_zeros_in_cell(
    lattice: &Lattice,
    settings: &EvaluationSettings,
) -> Result<Vec<Complex64>, EllipticError> {
    settings.validate()?;
    const GRID: usize = 6;
    let mut found: Vec<Complex64> = Vec::new();
    for i in 0..GRID {
        for j in 0..GRID {
            let x = (i as f64 + 0.5) / GRID as f64 - 0.5;
            let y = (j as f64 + 0.5) / GRID as f64 - 0.5;
            let mut z = x * lattice.omega1 + y * lattice.omega2;
            let mut converged = false;
            for _ in 0..60 {
                let Ok(v) = wp_eval(z, lattice, settings) else { break };
                if v.p_prime.norm() < 1e-8 {
                    // Seed drifted toward a half-period; Newton on ℘/℘' is
                    // hopeless there.
                    break;
                }
                let step = v.p / v.p_prime;
                z -= step;
                if step.norm() < 1e-13 * (1.0 + z.norm()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                continue;
            }
            let (zc, _, _) = reduce_to_cell(z, lattice);
            let Ok(v) = wp_eval(zc, lattice, settings) else { continue };
            if v.p.norm() > 1e-10 || v.p_prime.norm() < 0.1 {
                continue;
            }
            let duplicate_of_known = found.iter().any(|&w| {
                let (d, _, _) = reduce_to_cell(zc - w, lattice);
                d.norm() < 1e-6
            });
            if !duplicate_of_known {
                found.push(zc);
            }
        }
    }
    if found.len() != 2 {
        return Err(EllipticError::ZeroSearch { found: found.len() });
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(found)
}
