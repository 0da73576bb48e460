use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoulombError>;

/// Everything that can go wrong while evaluating Coulomb functions or their
/// building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoulombError {
    #[error("gamma function pole at {0}")]
    Pole(Complex64),

    #[error("{function} evaluated at its branch point {z}")]
    BranchPoint { function: &'static str, z: Complex64 },

    #[error("{0}")]
    Domain(String),

    #[error("square-root argument {0} lies on the principal cut; turning point is ambiguous")]
    BranchAmbiguity(Complex64),

    #[error("Airy function overflow at z = {z} (|Re ζ| = {exponent:.1})")]
    Overflow { z: Complex64, exponent: f64 },

    #[error("coordinate singularity at x = -1 (rho = 0)")]
    Singularity,

    #[error("finite-difference stencil around x = {0} is ill-conditioned")]
    Conditioning(Complex64),

    #[error("series did not converge after {terms} terms (last term ratio {ratio:e})")]
    NonConvergence { terms: usize, ratio: f64 },

    #[error("series cancellation: term magnitudes exceed the sum by {0:e}")]
    Cancellation(f64),

    #[error("asymptotic series smallest term {smallest:e} above tolerance at rho = {rho}")]
    AsymptoticFailure { rho: Complex64, smallest: f64 },

    #[error("integration path from {start} to {end} passes through rho = 0 or the negative real axis")]
    PathThroughSingularity { start: Complex64, end: Complex64 },

    #[error("ODE step size underflow near rho = {0}")]
    StepUnderflow(Complex64),

    #[error("no evaluation strategy succeeded at rho = {rho}: {detail}")]
    NoStrategy { rho: Complex64, detail: String },

    #[error("contour step at rho = {0} still discontinuous after maximal refinement")]
    StepTooLarge(Complex64),

    #[error("contour point {0} lies on the negative real axis")]
    CutRay(Complex64),
}
