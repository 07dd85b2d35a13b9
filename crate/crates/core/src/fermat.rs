//! Parametrizations of the Fermat curves x² + y² = 1 and x³ + y³ = 1 by
//! meromorphic functions, and the composed (Baker-style) solution pairs
//! F = f∘h, G = η·(g∘h) built from them.
//!
//! The cubic pair is Gross's: with the equianharmonic ℘ of
//! [`crate::elliptic`],
//!
//! ```text
//! f = (1 + ℘'/√3) / (2℘),    g = (1 − ℘'/√3) / (2℘),
//! ```
//!
//! and f³ + g³ = 1 follows from (℘')² = 4℘³ − 1. The quadratic pair is the
//! rational circle parametrization f = 2w/(1+w²), g = (1−w²)/(1+w²).

use num_complex::Complex64;
use thiserror::Error;

use crate::elliptic::{self, EllipticError, EvaluationSettings, Lattice, WpValue};

#[derive(Debug, Error)]
pub enum FermatError {
    #[error(
        "parametrization has a pole at z = {z}: |wp(z)| = {wp_magnitude:.3e} is below the \
         zero guard {guard:.3e}"
    )]
    PoleOfParametrization { z: Complex64, wp_magnitude: f64, guard: f64 },
    #[error("degenerate parameter w = {w}: 1 + w² vanishes")]
    DegenerateParameter { w: Complex64 },
    #[error("polynomial must have a nonzero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Guard against evaluating the cubic pair at zeros of ℘, where f and g
/// themselves have poles.
const WP_ZERO_GUARD: f64 = 1e-6;

/// A polynomial with complex coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialH {
    coefficients: Vec<Complex64>,
}

impl PolynomialH {
    /// Build from ascending coefficients; trailing zero coefficients are
    /// rejected rather than trimmed so the declared degree is honest.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self, FermatError> {
        if coefficients.is_empty() {
            return Err(FermatError::ZeroLeadingCoefficient);
        }
        if coefficients.len() > 1 && coefficients.last().unwrap().norm() == 0.0 {
            return Err(FermatError::ZeroLeadingCoefficient);
        }
        Ok(PolynomialH { coefficients })
    }

    /// h(z) = z.
    pub fn identity() -> Self {
        PolynomialH {
            coefficients: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// η = e^{2πi·index/3}, index ∈ {0, 1, 2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeRootOfUnity {
    pub eta: Complex64,
    pub index: u8,
}

impl CubeRootOfUnity {
    pub fn new(index: u8) -> Self {
        let index = index % 3;
        let half_sqrt3 = 0.5 * 3.0_f64.sqrt();
        let eta = match index {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(-0.5, half_sqrt3),
            _ => Complex64::new(-0.5, -half_sqrt3),
        };
        CubeRootOfUnity { eta, index }
    }

    pub fn all() -> [CubeRootOfUnity; 3] {
        [Self::new(0), Self::new(1), Self::new(2)]
    }
}

/// Gross's elliptic parametrization of f³ + g³ = 1 at the point z.
pub fn gross_pair_n3(
    z: Complex64,
    lattice: &Lattice,
    settings: &EvaluationSettings,
) -> Result<(Complex64, Complex64), FermatError> {
    let v = elliptic::wp_eval(z, lattice, settings)?;
    pair_from_wp(z, &v)
}

/// The same pair expressed directly in terms of an already-computed (℘, ℘').
pub fn pair_from_wp(z: Complex64, v: &WpValue) -> Result<(Complex64, Complex64), FermatError> {
    if v.p.norm() < WP_ZERO_GUARD {
        return Err(FermatError::PoleOfParametrization {
            z,
            wp_magnitude: v.p.norm(),
            guard: WP_ZERO_GUARD,
        });
    }
    let s = v.p_prime / 3.0_f64.sqrt();
    let den = 2.0 * v.p;
    Ok(((1.0 + s) / den, (1.0 - s) / den))
}

/// Rational parametrization of f² + g² = 1.
pub fn gross_pair_n2(w: Complex64) -> Result<(Complex64, Complex64), FermatError> {
    let den = 1.0 + w * w;
    if den.norm() <= 1e-12 * (1.0 + w.norm_sqr()) {
        return Err(FermatError::DegenerateParameter { w });
    }
    Ok((2.0 * w / den, (1.0 - w * w) / den))
}

/// Composed solution pair F = f(h(z)), G = η·g(h(z)) of F³ + G³ = 1.
pub fn baker_compose(
    h: &PolynomialH,
    eta: CubeRootOfUnity,
    z: Complex64,
    lattice: &Lattice,
    settings: &EvaluationSettings,
) -> Result<(Complex64, Complex64), FermatError> {
    let (f, g) = gross_pair_n3(h.eval(z), lattice, settings)?;
    Ok((f, eta.eta * g))
}

/// Residuals of the algebraic identities tying F to (℘, ℘') at the same
/// point: the cubic relation ℘³ = 3F²℘² − 3F℘ + 1 and the solved derivative
/// relation ℘' = √3·(2F℘ − 1). Returns magnitudes; the caller judges them
/// against a scale like 1 + |℘|³.
pub fn identity_residuals(f_value: Complex64, wp_at_h: &WpValue) -> (f64, f64) {
    let p = wp_at_h.p;
    let pp = wp_at_h.p_prime;
    let one = Complex64::new(1.0, 0.0);
    let cubic = (p * p * p - (3.0 * f_value * f_value * p * p - 3.0 * f_value * p + one)).norm();
    let relation = (pp - 3.0_f64.sqrt() * (2.0 * f_value * p - one)).norm();
    (cubic, relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::compute_lattice;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup() -> (Lattice, EvaluationSettings) {
        let l = compute_lattice().expect("lattice");
        let s = l.default_settings();
        (l, s)
    }

    /// Deterministic scatter of points that keep both ℘ and the pair finite:
    /// pole distance ≥ 0.1·|ω₁| and |℘| ≥ 0.01.
    fn sample_points(l: &Lattice, s: &EvaluationSettings, count: usize) -> Vec<Complex64> {
        let mut state = 0xDA3E39CB94B95BDB_u64;
        let mut next = move || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let z = c((next() - 0.5) * 9.0, (next() - 0.5) * 9.0);
            let Ok(v) = elliptic::wp_eval(z, l, s) else { continue };
            let (z_red, _, _) = elliptic::reduce_to_cell(z, l);
            if z_red.norm() < 0.1 * l.omega1.norm() || v.p.norm() < 0.01 {
                continue;
            }
            out.push(z);
        }
        out
    }

    #[test]
    fn quadratic_pair_examples() {
        let (f0, g0) = gross_pair_n2(c(0.0, 0.0)).unwrap();
        assert_eq!((f0, g0), (c(0.0, 0.0), c(1.0, 0.0)));
        let (f1, g1) = gross_pair_n2(c(1.0, 0.0)).unwrap();
        assert!((f1 - c(1.0, 0.0)).norm() < 1e-15);
        assert!(g1.norm() < 1e-15);
        let (f2, g2) = gross_pair_n2(c(2.0, 0.0)).unwrap();
        assert!((f2 - c(0.8, 0.0)).norm() < 1e-15);
        assert!((g2 - c(-0.6, 0.0)).norm() < 1e-15);
        assert!(matches!(
            gross_pair_n2(c(0.0, 1.0)),
            Err(FermatError::DegenerateParameter { .. })
        ));
        assert!(matches!(
            gross_pair_n2(c(0.0, -1.0)),
            Err(FermatError::DegenerateParameter { .. })
        ));
    }

    #[test]
    fn quadratic_pair_satisfies_circle() {
        let mut state = 0xA0761D6478BD642F_u64;
        let mut next = move || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let w = c((next() - 0.5) * 6.0, (next() - 0.5) * 6.0);
            let Ok((f, g)) = gross_pair_n2(w) else { continue };
            let res = (f * f + g * g - c(1.0, 0.0)).norm();
            assert!(res <= 1e-12 * (1.0 + f.norm_sqr() + g.norm_sqr()), "residual {res} at {w}");
        }
    }

    #[test]
    fn cubic_pair_at_half_period() {
        let (l, s) = setup();
        let (f, g) = gross_pair_n3(l.half_periods[0], &l, &s).unwrap();
        // ℘' = 0 and ℘ = e₁ there, so f = g = 1/(2e₁) = 2^{−1/3}.
        let expected = 0.5_f64.cbrt();
        assert!((f - c(expected, 0.0)).norm() < 1e-12, "f = {f}");
        assert!((g - c(expected, 0.0)).norm() < 1e-12, "g = {g}");
    }

    #[test]
    fn cubic_pair_satisfies_fermat_cubic() {
        let (l, s) = setup();
        for z in sample_points(&l, &s, 100) {
            let (f, g) = gross_pair_n3(z, &l, &s).unwrap();
            let res = (f * f * f + g * g * g - c(1.0, 0.0)).norm();
            assert!(res <= 1e-9, "residual {res} at {z}");
        }
    }

    #[test]
    fn cubic_pair_swaps_under_negation() {
        let (l, s) = setup();
        for z in sample_points(&l, &s, 50) {
            let (f, g) = gross_pair_n3(z, &l, &s).unwrap();
            let (fm, gm) = gross_pair_n3(-z, &l, &s).unwrap();
            assert!((fm - g).norm() <= 1e-12 * (1.0 + g.norm()));
            assert!((gm - f).norm() <= 1e-12 * (1.0 + f.norm()));
        }
    }

    #[test]
    fn cubic_pair_rejects_zeros_of_wp() {
        let (l, s) = setup();
        let zero = (l.omega1 + l.omega2) / 3.0;
        let err = gross_pair_n3(zero, &l, &s).unwrap_err();
        assert!(matches!(err, FermatError::PoleOfParametrization { .. }));
    }

    #[test]
    fn polynomial_basics() {
        let h = PolynomialH::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(h.degree(), 2);
        assert_eq!(h.eval(c(2.0, 0.0)), c(5.0, 0.0));
        assert!(PolynomialH::new(vec![]).is_err());
        assert!(PolynomialH::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        let id = PolynomialH::identity();
        assert_eq!(id.eval(c(0.3, -0.7)), c(0.3, -0.7));
    }

    #[test]
    fn eta_is_a_cube_root_of_unity() {
        for eta in CubeRootOfUnity::all() {
            let cube = eta.eta * eta.eta * eta.eta;
            assert!((cube - c(1.0, 0.0)).norm() <= 1e-14, "eta^3 = {cube}");
        }
    }

    #[test]
    fn identity_composition_reduces_to_gross_pair() {
        let (l, s) = setup();
        let h = PolynomialH::identity();
        let eta0 = CubeRootOfUnity::new(0);
        for z in sample_points(&l, &s, 20) {
            let (bf, bg) = baker_compose(&h, eta0, z, &l, &s).unwrap();
            let (f, g) = gross_pair_n3(z, &l, &s).unwrap();
            assert_eq!((bf, bg), (f, g));
        }
    }

    #[test]
    fn composed_pairs_satisfy_fermat_cubic() {
        let (l, s) = setup();
        let h = PolynomialH::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let mut accepted = 0;
        let mut state = 0x853C49E6748FEA9B_u64;
        let mut next = move || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        };
        while accepted < 50 {
            let z = c((next() - 0.5) * 4.0, (next() - 0.5) * 4.0);
            let w = h.eval(z);
            let Ok(v) = elliptic::wp_eval(w, &l, &s) else { continue };
            let (w_red, _, _) = elliptic::reduce_to_cell(w, &l);
            if w_red.norm() < 0.1 * l.omega1.norm() || v.p.norm() < 0.01 {
                continue;
            }
            for eta in CubeRootOfUnity::all() {
                let (bf, bg) = baker_compose(&h, eta, z, &l, &s).unwrap();
                let res = (bf * bf * bf + bg * bg * bg - c(1.0, 0.0)).norm();
                assert!(res <= 1e-9, "residual {res} at z = {z}, eta = {}", eta.index);
                // Second representation: G = η·f(−h(z)).
                let (f_neg, _) = gross_pair_n3(-w, &l, &s).unwrap();
                assert!((bg - eta.eta * f_neg).norm() <= 1e-9);
            }
            accepted += 1;
        }
    }

    #[test]
    fn identity_residuals_on_consistent_pairs() {
        let (l, s) = setup();
        for z in sample_points(&l, &s, 50) {
            let v = elliptic::wp_eval(z, &l, &s).unwrap();
            let (f, _) = pair_from_wp(z, &v).unwrap();
            let (cubic, relation) = identity_residuals(f, &v);
            let scale = 1.0 + v.p.norm().powi(3);
            assert!(cubic <= 1e-8 * scale, "cubic residual {cubic} at {z}");
            assert!(relation <= 1e-8 * scale, "relation residual {relation} at {z}");
        }
    }

    #[test]
    fn identity_residuals_detect_perturbation() {
        let (l, s) = setup();
        for z in sample_points(&l, &s, 20) {
            let v = elliptic::wp_eval(z, &l, &s).unwrap();
            if v.p.norm() < 0.05 || v.p_prime.norm() < 0.1 {
                // Keep the point generic: near ℘' = 0 the cubic is flat in F
                // and a first-order perturbation is invisible.
                continue;
            }
            let (f, _) = pair_from_wp(z, &v).unwrap();
            let (cubic, _) = identity_residuals(f + c(1e-3, 0.0), &v);
            let scale = 1.0 + v.p.norm().powi(3);
            assert!(cubic > 1e-6 * scale, "perturbed cubic residual only {cubic} at {z}");
        }
    }

    #[test]
    fn identity_residuals_at_branch_point() {
        let (l, s) = setup();
        let v = elliptic::wp_eval(l.half_periods[0], &l, &s).unwrap();
        // With ℘' = 0 the derivative relation is satisfied by F = 1/(2℘).
        let f = (2.0 * v.p).inv();
        let (_, relation) = identity_residuals(f, &v);
        assert!(relation <= 1e-10, "relation residual {relation}");
    }
}
