//! Bound-state wavefunctions from the quantum Hamilton-Jacobi equation.
//!
//! In the classically allowed region the wavefunction is represented as
//! `psi = B sin(X + phi) / sqrt(X')`, where the real phase X solves a
//! third-order nonlinear ODE; in the forbidden regions `psi = B e^{-Y/hbar}`
//! with Y obtained from a Riccati equation integrated along its stable
//! direction. The crate integrates both equations exactly (to solver
//! tolerance), assembles the three-region wavefunction, locates eigenvalues
//! from the smooth-join residual at the right turning point, and validates
//! everything against an independent Numerov/shooting Schrödinger solver and
//! against analytic states.

pub mod assembly;
pub mod classical;
pub mod error;
pub mod interp;
pub mod numeric;
pub mod ode;
pub mod oracle;
pub mod output;
pub mod potentials;
pub mod qhje;
pub mod quad;
pub mod reference;
pub mod wkb;

pub use assembly::{MatchReport, WavefunctionTable};
pub use error::{Error, Result};
pub use potentials::{
    analytic_eigenfunction, analytic_energy, evaluate_potential, find_turning_points, Constants,
    PotentialModel, PotentialSpec, QuantumNumbers, TurningPair,
};
pub use qhje::{ActionSolution, Conventions, ForbiddenSolution, PhaseInit, Region};
