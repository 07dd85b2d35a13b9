//! Meromorphic solutions of Fermat-type functional equations — numerical
//! laboratory.
//!
//! The crate studies the cubic functional equation
//!
//! ```text
//! {a₀·f(z) + a₁·f(z+c) + a₂·f′(z)}³ + {b₀·f(z) + b₁·f(z+c) + b₂·f′(z)}³ = e^{αz+β}
//! ```
//!
//! and the classical machinery around it:
//!
//! - [`elliptic`] — the equianharmonic Weierstrass ℘ (the g₂ = 0, g₃ = 1
//!   curve (℘′)² = 4℘³ − 1): lattice construction by quadrature, reduction to
//!   the fundamental cell, Laurent-series evaluation with a duplication step,
//!   pole enumeration and the zeros of ℘ in a cell.
//! - [`fermat`] — Gross-style parametrizations of the Fermat curves xⁿ + yⁿ = 1
//!   for n = 2, 3 and Baker-style compositions f = F∘h, g = η·G∘h, with
//!   residual checks of the defining identities.
//! - [`solver`] — closed-form exponential solutions f = A·e^{(αz+β)/3} + C·e^{Dz}
//!   of the functional equation: rank validation, the three-case
//!   classification by coefficient minors, candidate constants, cross-checks,
//!   and residual verification with verdicts.
//! - [`nevanlinna`] — numerical proximity/counting/characteristic functionals,
//!   the T(r,℘) ~ (π/A)r² asymptotic check, growth-order estimation, and
//!   shift/composition growth desk-checks.
//! - [`quadrature`] — the adaptive Simpson and periodic-trapezoid rules the
//!   other modules build on.
//!
//! Everything is deterministic: identical inputs produce bit-identical
//! outputs, with no hidden global state.

pub mod elliptic;
pub mod fermat;
pub mod nevanlinna;
pub mod quadrature;
pub mod solver;

pub use num_complex::Complex64;

pub use elliptic::{EvaluationSettings, Lattice, WpValue};
pub use fermat::{CubeRootOfUnity, PolynomialH};
pub use nevanlinna::{MeromorphicEvaluator, NevanlinnaCurve, OrderEstimate};
pub use solver::{
    CandidateSolution, CaseTag, EquationInstance, FermatPair, VerificationReport, Verdict,
};
