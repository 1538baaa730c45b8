//! Error conditions shared across the solver pipeline.

use crate::assembly::MatchReport;

/// Crate-wide error type.
///
/// Variants carry the position or parameter that triggered the failure so
/// callers can report where a run went wrong, not just that it did.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Evaluation or interpolation requested outside the model domain.
    #[error("position {x} outside domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    /// The energy does not produce exactly two turning points.
    #[error("expected exactly two turning points at E = {energy}, found {found}")]
    UnsupportedPotentialShape { energy: f64, found: usize },

    /// A bracketed root refinement failed to converge.
    #[error("root refinement did not converge near x = {x}")]
    RootFind { x: f64 },

    /// The model carries no analytic eigen-data.
    #[error("no analytic eigenfunctions/energies for this potential")]
    NotAvailable,

    /// Classical momentum requested where E < V.
    #[error("x = {x} lies outside the classically allowed region")]
    OutsideAllowedRegion { x: f64 },

    /// An eigenvalue bracket with no sign change of the mismatch.
    #[error("bracket [{lo}, {hi}] does not contain a sign change")]
    Bracket { lo: f64, hi: f64 },

    /// Initial-phase data degenerate: sin(X0 + phi) = 0 or psi(x1) = 0.
    #[error("degenerate phase initialization: {reason} (shift X0)")]
    DegenerateInit { reason: String },

    /// The positive branch X' > 0 was requested with a non-positive slope.
    #[error("initial slope Xp0 = {xp0} is not positive")]
    Branch { xp0: f64 },

    /// The integrated phase slope X' dropped to zero or below.
    #[error("X' collapsed to the non-positive branch at x = {x}")]
    BranchCollapse { x: f64 },

    /// Adaptive step size underflowed.
    #[error("step size underflow at x = {x}")]
    Stiffness { x: f64 },

    /// The forbidden-region seed point is not asymptotic enough.
    #[error(
        "far point {x} not asymptotic: projected seed error {projected:.3e} exceeds {limit:.3e}"
    )]
    Asymptotics { x: f64, projected: f64, limit: f64 },

    /// Smooth join at the right turning point failed at an alleged eigen-energy.
    #[error("cannot smoothly join regions at E = {}: log-derivative mismatch {:.3e}", report.energy, report.logderiv_mismatch)]
    Join { report: MatchReport },

    /// Comparison grids overlap on less than 90% of the reference span.
    #[error("grids overlap on only {overlap_fraction:.1}% of the reference span")]
    IncomparableGrids { overlap_fraction: f64 },

    /// Invalid run configuration; lists every problem found.
    #[error("invalid configuration:\n{}", problems.join("\n"))]
    Config { problems: Vec<String> },

    /// Malformed tabulated potential data.
    #[error("bad tabulated potential: {0}")]
    Tabulation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
