//! Core solver: the third-order phase equation on the allowed region, the
//! Riccati equation on the forbidden regions, and the construction of initial
//! conditions from wavefunction boundary data.
//!
//! With W = X + iY on the allowed region, the imaginary part is fixed by
//! Y = hbar ln sqrt(X') + const, and X satisfies
//!
//!   X'^2 - (3/4) hbar^2 X''^2/X'^2 + (1/2) hbar^2 X'''/X' = 2m (E - V(x)),
//!
//! integrated here in the explicit form solved for X'''. In the forbidden
//! regions the purely imaginary phase obeys -Y'^2 + hbar Y'' = 2m(E - V);
//! the Riccati variable Q = Y' is integrated from a far asymptotic point
//! toward the turning point, the only direction in which the decaying branch
//! is attracting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linspace;
use crate::ode::{Dopri5, OdeError};
use crate::potentials::{find_turning_points, PotentialModel, TurningPair};
use crate::quad;

/// Forbidden-region label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// Left of the first turning point.
    I,
    /// Right of the second turning point.
    III,
}

/// Sampling request for dense solver output.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    pub samples: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { samples: 2001 }
    }
}

impl GridSpec {
    pub fn forbidden_default() -> Self {
        Self { samples: 801 }
    }
}

/// Policy for the free initial-slope gauge parameter X'(x1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Xp0Policy {
    /// 2m(E - V(x1 + w/10)) floor-clamped to 0.1, a classical-momentum scale.
    Heuristic,
    Fixed(f64),
}

/// The free choices of a phase-equation run. Any valid combination assembles
/// into the same wavefunction; these defaults reproduce the staircase runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    /// X(x1).
    pub x0: f64,
    /// Initial phase of the sine in the allowed-region representation.
    pub phi: f64,
    pub xp0: Xp0Policy,
}

impl Default for Conventions {
    fn default() -> Self {
        Self { x0: 0.0, phi: std::f64::consts::FRAC_PI_4, xp0: Xp0Policy::Heuristic }
    }
}

impl Conventions {
    pub fn with_phi(phi: f64) -> Self {
        Self { phi, ..Self::default() }
    }

    pub fn resolve_xp0(&self, model: &PotentialModel, energy: f64, turning: &TurningPair) -> f64 {
        match self.xp0 {
            Xp0Policy::Fixed(v) => v,
            Xp0Policy::Heuristic => {
                let probe = turning.x1 + 0.1 * turning.width();
                model.p_squared(energy, probe).max(0.1)
            }
        }
    }
}

/// Initial data for the third-order phase equation at the left turning point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhaseInit {
    pub x_start: f64,
    /// X(x1), the free family parameter.
    pub x0: f64,
    pub phi: f64,
    /// X'(x1) > 0, the free slope gauge.
    pub xp0: f64,
    pub xpp0: f64,
    /// Amplitude of the sine representation.
    pub amplitude: f64,
}

/// Build phase-equation initial data from psi(x1), psi'(x1) and the free
/// choices X0, phi, Xp0.
///
/// From psi = B sin(X + phi)/sqrt(X'):
///   B    = psi1 sqrt(Xp0) / sin(X0 + phi)
///   X''0 = 2 Xp0 [Xp0 cot(X0 + phi) - psi1'/psi1]
pub fn build_phase_init(
    x_start: f64,
    psi1: f64,
    dpsi1: f64,
    x0: f64,
    phi: f64,
    xp0: f64,
) -> Result<PhaseInit> {
    if xp0 <= 0.0 {
        return Err(Error::Branch { xp0 });
    }
    let s = (x0 + phi).sin();
    if s.abs() < 1e-12 {
        return Err(Error::DegenerateInit { reason: format!("sin(X0 + phi) = {s:.3e}") });
    }
    if psi1 == 0.0 && dpsi1 == 0.0 {
        return Err(Error::DegenerateInit { reason: "psi(x1) = psi'(x1) = 0".into() });
    }
    if psi1 == 0.0 {
        // a node exactly at x1 would force sin(X0 + phi) = 0
        return Err(Error::DegenerateInit {
            reason: "psi(x1) = 0 is incompatible with sin(X0 + phi) != 0".into(),
        });
    }
    let amplitude = psi1 * xp0.sqrt() / s;
    let cot = (x0 + phi).cos() / s;
    let xpp0 = 2.0 * xp0 * (xp0 * cot - dpsi1 / psi1);
    Ok(PhaseInit { x_start, x0, phi, xp0, xpp0, amplitude })
}

/// Solution of the phase equation sampled over the allowed region.
#[derive(Debug, Clone)]
pub struct ActionSolution {
    pub grid: Vec<f64>,
    pub x: Vec<f64>,
    pub xp: Vec<f64>,
    pub xpp: Vec<f64>,
    /// Imaginary part Y = hbar ln sqrt(X'/Xp0), zero at x1.
    pub y: Vec<f64>,
    pub energy: f64,
    pub init: PhaseInit,
}

impl ActionSolution {
    pub fn x1(&self) -> f64 {
        self.grid[0]
    }

    pub fn x2(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// psi value of the representation at sample `i` (amplitude included).
    pub fn psi_at(&self, i: usize) -> f64 {
        self.init.amplitude * (self.x[i] + self.init.phi).sin() / self.xp[i].sqrt()
    }

    /// Log-derivative psi'/psi of the representation at sample `i`.
    pub fn psi_logderiv_at(&self, i: usize) -> f64 {
        let phase = self.x[i] + self.init.phi;
        self.xp[i] * phase.cos() / phase.sin() - 0.5 * self.xpp[i] / self.xp[i]
    }

    /// psi' of the representation at sample `i`.
    pub fn dpsi_at(&self, i: usize) -> f64 {
        let phase = self.x[i] + self.init.phi;
        self.init.amplitude
            * (self.xp[i].sqrt() * phase.cos()
                - 0.5 * self.xpp[i] * phase.sin() / self.xp[i].powf(1.5))
    }
}

/// Right-hand side of the phase equation solved for X'''.
fn phase_rhs(model: &PotentialModel, energy: f64) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + '_ {
    let hbar2 = model.hbar() * model.hbar();
    move |t, y| {
        let (xp, xpp) = (y[1], y[2]);
        let p2 = model.p_squared(energy, t);
        let xppp = (2.0 * xp / hbar2) * (p2 - xp * xp) + 1.5 * xpp * xpp / xp;
        [xp, xpp, xppp]
    }
}

/// Integrate the phase equation across [x1, x2] with dense output.
pub fn integrate_phase_ode(
    model: &PotentialModel,
    energy: f64,
    init: &PhaseInit,
    grid: GridSpec,
) -> Result<ActionSolution> {
    let turning = find_turning_points(model, energy)?;
    integrate_phase_between(model, energy, init, turning.x1, turning.x2, grid)
}

/// Phase integration between explicit endpoints (the turning points for the
/// standard pipeline; tests may use other spans on custom potentials).
pub fn integrate_phase_between(
    model: &PotentialModel,
    energy: f64,
    init: &PhaseInit,
    x1: f64,
    x2: f64,
    grid: GridSpec,
) -> Result<ActionSolution> {
    if init.xp0 <= 0.0 {
        return Err(Error::Branch { xp0: init.xp0 });
    }
    let samples = linspace(x1, x2, grid.samples);
    let solver = Dopri5::default();
    let out = solver
        .solve(
            phase_rhs(model, energy),
            x1,
            x2,
            [init.x0, init.xp0, init.xpp0],
            &samples,
            |_, y| y[1] > 0.0,
        )
        .map_err(|e| match e {
            OdeError::Guard { t } => Error::BranchCollapse { x: t },
            OdeError::StepUnderflow { t } | OdeError::MaxSteps { t } => Error::Stiffness { x: t },
        })?;
    let hbar = model.hbar();
    let x: Vec<f64> = out.states.iter().map(|s| s[0]).collect();
    let xp: Vec<f64> = out.states.iter().map(|s| s[1]).collect();
    let xpp: Vec<f64> = out.states.iter().map(|s| s[2]).collect();
    let y: Vec<f64> = xp.iter().map(|&v| hbar * (v / init.xp0).sqrt().ln()).collect();
    Ok(ActionSolution { grid: samples, x, xp, xpp, y, energy, init: *init })
}

/// Residual of the phase equation at each interior sample, with X''' taken
/// from the ODE right-hand side.
pub fn phase_residuals(model: &PotentialModel, sol: &ActionSolution) -> Vec<f64> {
    let hbar2 = model.hbar() * model.hbar();
    let rhs = phase_rhs(model, sol.energy);
    (1..sol.grid.len() - 1)
        .map(|i| {
            let y = [sol.x[i], sol.xp[i], sol.xpp[i]];
            let xppp = rhs(sol.grid[i], &y)[2];
            sol.xp[i] * sol.xp[i] - 0.75 * hbar2 * (sol.xpp[i] / sol.xp[i]).powi(2)
                + 0.5 * hbar2 * xppp / sol.xp[i]
                - model.p_squared(sol.energy, sol.grid[i])
        })
        .collect()
}

/// One member of a family scan: the X(x1) value tried and its outcome.
#[derive(Debug)]
pub struct FamilyMember {
    pub x0: f64,
    pub solution: Result<ActionSolution>,
}

/// Integrate one phase solution per X(x1) value, all sharing the same
/// boundary data, phase and slope gauge. Downstream assembly must produce
/// identical wavefunctions for every member.
pub fn family_scan(
    model: &PotentialModel,
    energy: f64,
    boundary: (f64, f64),
    x0_values: &[f64],
    phi: f64,
    xp0: f64,
    grid: GridSpec,
) -> Result<Vec<FamilyMember>> {
    use rayon::prelude::*;
    let turning = find_turning_points(model, energy)?;
    Ok(x0_values
        .par_iter()
        .map(|&x0| {
            let solution = build_phase_init(turning.x1, boundary.0, boundary.1, x0, phi, xp0)
                .and_then(|init| integrate_phase_ode(model, energy, &init, grid));
            FamilyMember { x0, solution }
        })
        .collect())
}

/// Solution of the forbidden-region equation on one side of the well.
#[derive(Debug, Clone)]
pub struct ForbiddenSolution {
    pub region: Region,
    /// Grid ordered from the turning point outward... see `grid` docs.
    pub grid: Vec<f64>,
    /// Y with Y = 0 at the turning-point end; e^{-Y/hbar} decays outward.
    pub y: Vec<f64>,
    /// Q = Y', the Riccati variable.
    pub yp: Vec<f64>,
    pub energy: f64,
    pub far_point: f64,
    pub inner: f64,
}

impl ForbiddenSolution {
    /// Q at the turning-point end.
    pub fn q_inner(&self) -> f64 {
        match self.region {
            Region::I => *self.yp.last().unwrap(),
            Region::III => self.yp[0],
        }
    }
}

/// Projected error of the WKB seed Q = sqrt(2m(V-E)) delivered to the turning
/// point: the next-order WKB correction at the seed, contracted by the
/// linearized Riccati flow exp(-2 int |p~|/hbar) along the inward path.
pub fn projected_seed_error(
    model: &PotentialModel,
    energy: f64,
    inner: f64,
    far_point: f64,
) -> f64 {
    let hbar = model.hbar();
    let p_forb = |x: f64| (-model.p_squared(energy, x)).max(0.0).sqrt();
    let p_far = p_forb(far_point);
    if p_far == 0.0 {
        return f64::INFINITY;
    }
    let dp = {
        let d = 1e-6 * (1.0 + far_point.abs());
        (p_forb(far_point + d) - p_forb(far_point - d)) / (2.0 * d)
    };
    let seed_err = (hbar * dp / (2.0 * p_far)).abs();
    let exponent = quad::from_turning_point(&p_forb, inner, far_point, 1e-9).abs() / hbar;
    seed_err * (-2.0 * exponent).min(0.0).exp()
}

const SEED_ERROR_LIMIT: f64 = 1e-9;
/// Literal WKB flatness criterion at the seed point.
const WKB_FLATNESS: f64 = 1e-3;

fn wkb_flatness(model: &PotentialModel, energy: f64, x: f64) -> f64 {
    let p_forb = |x: f64| (-model.p_squared(energy, x)).max(0.0).sqrt();
    let p = p_forb(x);
    if p == 0.0 {
        return f64::INFINITY;
    }
    let d = 1e-6 * (1.0 + x.abs());
    let dp = (p_forb(x + d) - p_forb(x - d)) / (2.0 * d);
    (model.hbar() * dp / (p * p)).abs()
}

/// Pick a far point for `region`: the nearest distance at which the WKB
/// flatness criterion holds, falling back (within the domain) to the point
/// where the projected seed error is negligible.
pub fn choose_far_point(
    model: &PotentialModel,
    energy: f64,
    region: Region,
    turning: &TurningPair,
) -> Result<f64> {
    let (inner, bound, dir) = match region {
        Region::I => (turning.x1, model.domain.0, -1.0),
        Region::III => (turning.x2, model.domain.1, 1.0),
    };
    let width = turning.width();
    let mut candidate = inner;
    for j in 1..=400 {
        candidate = inner + dir * 0.25 * width * j as f64;
        if (dir > 0.0 && candidate >= bound) || (dir < 0.0 && candidate <= bound) {
            candidate = bound;
            break;
        }
        if wkb_flatness(model, energy, candidate) < WKB_FLATNESS {
            return Ok(candidate);
        }
        if projected_seed_error(model, energy, inner, candidate) < SEED_ERROR_LIMIT * 1e-3 {
            return Ok(candidate);
        }
    }
    let projected = projected_seed_error(model, energy, inner, candidate);
    if projected < SEED_ERROR_LIMIT {
        Ok(candidate)
    } else {
        Err(Error::Asymptotics { x: candidate, projected, limit: SEED_ERROR_LIMIT })
    }
}

/// Integrate the forbidden-region equation for `region`, seeding the decaying
/// branch at `far_point` and marching toward the turning point.
pub fn integrate_forbidden(
    model: &PotentialModel,
    energy: f64,
    region: Region,
    far_point: f64,
    grid: GridSpec,
) -> Result<ForbiddenSolution> {
    let turning = find_turning_points(model, energy)?;
    let inner = match region {
        Region::I => turning.x1,
        Region::III => turning.x2,
    };
    riccati_inward(model, energy, region, inner, far_point, grid)
}

/// Forbidden-region integration with an explicit inner endpoint, for
/// potentials that do not have two turning points (barrier tests).
pub fn riccati_inward(
    model: &PotentialModel,
    energy: f64,
    region: Region,
    inner: f64,
    far_point: f64,
    grid: GridSpec,
) -> Result<ForbiddenSolution> {
    match region {
        Region::I if far_point >= inner => {
            return Err(Error::Domain { x: far_point, lo: model.domain.0, hi: inner })
        }
        Region::III if far_point <= inner => {
            return Err(Error::Domain { x: far_point, lo: inner, hi: model.domain.1 })
        }
        _ => {}
    }
    // seed-quality precondition: WKB flatness or projected-error fallback
    if wkb_flatness(model, energy, far_point) >= WKB_FLATNESS {
        let projected = projected_seed_error(model, energy, inner, far_point);
        if projected >= SEED_ERROR_LIMIT {
            return Err(Error::Asymptotics { x: far_point, projected, limit: SEED_ERROR_LIMIT });
        }
    }

    let hbar = model.hbar();
    let p_far = (-model.p_squared(energy, far_point)).max(0.0).sqrt();
    let q_seed = match region {
        Region::I => -p_far,
        Region::III => p_far,
    };

    // state (Q, Y); Y accumulated from the far point, shifted afterwards
    let rhs = move |t: f64, y: &[f64; 2]| {
        let q = y[0];
        [(q * q + model.p_squared(energy, t)) / hbar, q]
    };
    // samples ordered in the direction of integration (far -> inner)
    let samples_march = linspace(far_point, inner, grid.samples);
    let solver = Dopri5::default();
    let q_cap = 1e8 * (1.0 + q_seed.abs());
    let out = solver
        .solve(rhs, far_point, inner, [q_seed, 0.0], &samples_march, |_, y| y[0].abs() < q_cap)
        .map_err(|e| match e {
            OdeError::Guard { t } => Error::BranchCollapse { x: t },
            OdeError::StepUnderflow { t } | OdeError::MaxSteps { t } => Error::Stiffness { x: t },
        })?;

    let y_inner = out.final_state[1];
    // reorder ascending in x and anchor Y(inner) = 0
    let mut grid_x: Vec<f64> = samples_march;
    let mut yp: Vec<f64> = out.states.iter().map(|s| s[0]).collect();
    let mut y: Vec<f64> = out.states.iter().map(|s| s[1] - y_inner).collect();
    if matches!(region, Region::III) {
        grid_x.reverse();
        yp.reverse();
        y.reverse();
    }
    Ok(ForbiddenSolution { region, grid: grid_x, y, yp, energy, far_point, inner })
}

/// Residual of the forbidden-region equation at each interior sample, with
/// Y'' taken from the Riccati right-hand side.
pub fn forbidden_residuals(model: &PotentialModel, sol: &ForbiddenSolution) -> Vec<f64> {
    let hbar = model.hbar();
    (1..sol.grid.len() - 1)
        .map(|i| {
            let q = sol.yp[i];
            let ypp = (q * q + model.p_squared(sol.energy, sol.grid[i])) / hbar;
            -q * q + hbar * ypp - model.p_squared(sol.energy, sol.grid[i])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::CubicSpline;
    use crate::numeric::{linspace, local_maxima};
    use crate::oracle;
    use crate::potentials::Constants;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn harmonic() -> PotentialModel {
        PotentialModel::harmonic(1.0, Constants::default())
    }

    fn flat_potential(v0: f64, lo: f64, hi: f64) -> PotentialModel {
        let xs = linspace(lo, hi, 24);
        let vs = vec![v0; 24];
        PotentialModel::custom(CubicSpline::new(xs, vs).unwrap(), Constants::default())
    }

    fn linear_potential(lo: f64, hi: f64) -> PotentialModel {
        let xs = linspace(lo, hi, 24);
        let vs = xs.clone();
        PotentialModel::custom(CubicSpline::new(xs, vs).unwrap(), Constants::default())
    }

    #[test]
    fn init_with_zero_derivative() {
        let init = build_phase_init(0.0, 1.0, 0.0, 0.0, FRAC_PI_2, 1.0).unwrap();
        assert_abs_diff_eq!(init.amplitude, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(init.xpp0, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn init_free_particle_plane_phase() {
        // psi = sin(x + pi/4) at x = 0 with X0 = 0, phi = pi/4, Xp0 = 1
        let psi = FRAC_PI_4.sin();
        let dpsi = FRAC_PI_4.cos();
        let init = build_phase_init(0.0, psi, dpsi, 0.0, FRAC_PI_4, 1.0).unwrap();
        assert_abs_diff_eq!(init.amplitude, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(init.xpp0, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn init_consistency_with_boundary_data() {
        // representation and its derivative reproduce the input data
        let (psi1, dpsi1) = (0.3, -0.8);
        let (x0, phi, xp0) = (0.7, FRAC_PI_4, 2.3);
        let init = build_phase_init(-1.0, psi1, dpsi1, x0, phi, xp0).unwrap();
        let b = init.amplitude;
        let value = b * (x0 + phi).sin() / xp0.sqrt();
        let deriv = b
            * (xp0.sqrt() * (x0 + phi).cos()
                - 0.5 * init.xpp0 * (x0 + phi).sin() / xp0.powf(1.5));
        assert_abs_diff_eq!(value, psi1, epsilon = 1e-12);
        assert_abs_diff_eq!(deriv, dpsi1, epsilon = 1e-12);
    }

    #[test]
    fn init_rejects_degenerate_choices() {
        assert!(matches!(
            build_phase_init(0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
            Err(Error::DegenerateInit { .. })
        ));
        assert!(matches!(
            build_phase_init(0.0, 1.0, 0.0, 0.0, FRAC_PI_4, -1.0),
            Err(Error::Branch { .. })
        ));
        assert!(matches!(
            build_phase_init(0.0, 0.0, 1.0, 0.0, FRAC_PI_4, 1.0),
            Err(Error::DegenerateInit { .. })
        ));
    }

    #[test]
    fn free_particle_phase_is_linear() {
        // V = 0, E = 1/2, m = hbar = 1: X(x) = x solves the phase equation
        let model = flat_potential(0.0, -1.0, 8.0);
        let init = PhaseInit {
            x_start: 0.0,
            x0: 0.0,
            phi: FRAC_PI_4,
            xp0: 1.0,
            xpp0: 0.0,
            amplitude: 1.0,
        };
        let sol =
            integrate_phase_between(&model, 0.5, &init, 0.0, 2.0 * PI, GridSpec::default())
                .unwrap();
        for (i, &x) in sol.grid.iter().enumerate() {
            assert_abs_diff_eq!(sol.x[i], x, epsilon = 1e-10);
            assert_abs_diff_eq!(sol.xp[i], 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(sol.xpp[i], 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn harmonic_n8_staircase() {
        let model = harmonic();
        let energy = 8.5;
        let orc = oracle::eigen_solution(&model, (8.3, 8.7)).unwrap();
        let turning = find_turning_points(&model, energy).unwrap();
        let (psi1, dpsi1) = orc.boundary_data(turning.x1).unwrap();
        let conv = Conventions::default();
        let xp0 = conv.resolve_xp0(&model, energy, &turning);
        let init = build_phase_init(turning.x1, psi1, dpsi1, 0.0, conv.phi, xp0).unwrap();
        let sol = integrate_phase_ode(&model, energy, &init, GridSpec::default()).unwrap();

        // monotone staircase
        assert!(sol.xp.iter().all(|&v| v > 0.0));
        // total phase accommodates 8 nodes plus the two pi/4 edge phases
        assert_abs_diff_eq!(sol.x.last().unwrap() - sol.x[0], 8.5 * PI, epsilon = 1e-6);
        // peak count n + 1
        assert_eq!(local_maxima(&sol.xp).len(), 9);
        // Y anchored at zero and tied to X'
        assert_eq!(sol.y[0], 0.0);
        for i in 0..sol.grid.len() {
            let expect = (sol.xp[i] / init.xp0).sqrt().ln();
            assert_abs_diff_eq!(sol.y[i], expect, epsilon = 1e-12);
        }
        // residual with X''' from the RHS
        let res = phase_residuals(&model, &sol);
        assert!(res.iter().all(|r| r.abs() < 1e-6));
    }

    #[test]
    fn sampled_derivative_tables_are_consistent() {
        // X' and X'' sampled from dense output must match derivatives of the
        // interpolated X itself
        let model = harmonic();
        let energy = 8.5;
        let orc = oracle::eigen_solution(&model, (8.3, 8.7)).unwrap();
        let turning = find_turning_points(&model, energy).unwrap();
        let (psi1, dpsi1) = orc.boundary_data(turning.x1).unwrap();
        let init = build_phase_init(turning.x1, psi1, dpsi1, 0.0, FRAC_PI_4, 3.0).unwrap();
        let sol = integrate_phase_ode(&model, energy, &init, GridSpec::default()).unwrap();
        let h = sol.grid[1] - sol.grid[0];
        let interp = crate::interp::QuinticUniform::new(sol.grid[0], h, sol.x.clone());
        for i in (10..sol.grid.len() - 10).step_by(37) {
            let (_, d) = interp.eval(sol.grid[i]).unwrap();
            assert_abs_diff_eq!(d, sol.xp[i], epsilon = 1e-7);
        }
    }

    #[test]
    fn family_scan_produces_distinct_actions() {
        let model = harmonic();
        let energy = 8.5;
        let orc = oracle::eigen_solution(&model, (8.3, 8.7)).unwrap();
        let turning = find_turning_points(&model, energy).unwrap();
        let boundary = orc.boundary_data(turning.x1).unwrap();
        let x0s = [0.0, 0.3, 0.7, 1.2, 2.0];
        let fam =
            family_scan(&model, energy, boundary, &x0s, FRAC_PI_4, 2.0, GridSpec::default())
                .unwrap();
        assert_eq!(fam.len(), 5);
        let sols: Vec<&ActionSolution> =
            fam.iter().map(|m| m.solution.as_ref().unwrap()).collect();
        // distinct phase curves (they differ by more than the X0 offset)
        let mid = sols[0].grid.len() / 2;
        for pair in sols.windows(2) {
            let shifted = (pair[1].x[mid] - pair[1].init.x0) - (pair[0].x[mid] - pair[0].init.x0);
            assert!(shifted.abs() > 1e-3, "family members should differ beyond the offset");
        }
        // degenerate member surfaces its own error
        let bad = family_scan(
            &model,
            energy,
            boundary,
            &[0.0, PI - FRAC_PI_4],
            FRAC_PI_4,
            2.0,
            GridSpec::default(),
        )
        .unwrap();
        assert!(bad[0].solution.is_ok());
        assert!(matches!(bad[1].solution, Err(Error::DegenerateInit { .. })));
    }

    #[test]
    fn constant_barrier_is_a_riccati_fixed_point() {
        let model = flat_potential(2.0, 0.0, 30.0);
        let energy = 0.5;
        let q_star = (2.0_f64 * (2.0 - 0.5)).sqrt();
        let sol = riccati_inward(
            &model,
            energy,
            Region::III,
            5.0,
            25.0,
            GridSpec::forbidden_default(),
        )
        .unwrap();
        for (x, q) in sol.grid.iter().zip(&sol.yp) {
            assert_abs_diff_eq!(*q, q_star, epsilon = 1e-12);
            // Y linear: Y = q* (x - inner)
            let i = sol.grid.iter().position(|g| g == x).unwrap();
            assert_abs_diff_eq!(sol.y[i], q_star * (x - 5.0), epsilon = 1e-9);
        }
        let res = forbidden_residuals(&model, &sol);
        assert!(res.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn forbidden_decay_matches_oracle_tail() {
        // e^{-Y/hbar} must be proportional to the Schrödinger solution in the
        // deep right tail
        let model = harmonic();
        let energy = 8.5;
        let turning = find_turning_points(&model, energy).unwrap();
        let far = choose_far_point(&model, energy, Region::III, &turning).unwrap();
        let forb = integrate_forbidden(
            &model,
            energy,
            Region::III,
            far,
            GridSpec { samples: 1601 },
        )
        .unwrap();
        let orc = oracle::eigen_solution(&model, (8.3, 8.7)).unwrap();
        let mut ratios = Vec::new();
        for (x, y) in forb.grid.iter().zip(&forb.y) {
            if *x < turning.x2 + 0.5 || *x > turning.x2 + 4.0 {
                continue;
            }
            let (psi, _) = orc.boundary_data(*x).unwrap();
            ratios.push(psi / (-y).exp());
        }
        assert!(ratios.len() > 100);
        let first = ratios[0];
        for r in &ratios {
            assert_relative_eq!(*r, first, max_relative = 1e-6);
        }
    }

    #[test]
    fn riccati_needs_an_asymptotic_seed() {
        // a single tabulated bump too narrow for any asymptotic far point
        let xs = linspace(0.0, 2.0, 40);
        let vs: Vec<f64> = xs.iter().map(|x| 1.0 + 0.5 * (3.0 * x).sin()).collect();
        let model = PotentialModel::custom(CubicSpline::new(xs, vs).unwrap(), Constants::default());
        let res = riccati_inward(&model, 0.2, Region::III, 0.5, 1.9, GridSpec::forbidden_default());
        assert!(matches!(res, Err(Error::Asymptotics { .. })));
    }

    #[test]
    fn airy_barrier_log_derivative() {
        // V = x, E = 0: psi ~ Ai(2^{1/3} x), so Q = -hbar 2^{1/3} Ai'/Ai
        let model = linear_potential(-10.0, 40.0);
        let sol = riccati_inward(
            &model,
            0.0,
            Region::III,
            0.0,
            14.0,
            GridSpec { samples: 2801 },
        )
        .unwrap();
        let cbrt2 = 2.0_f64.cbrt();
        for (x, q) in sol.grid.iter().zip(&sol.yp) {
            if *x < 0.8 || *x > 6.0 {
                continue;
            }
            let (ai, dai) = crate::reference::airy_ai_with_derivative(cbrt2 * x);
            let exact = -cbrt2 * dai / ai;
            assert_abs_diff_eq!(*q, exact, epsilon = 1e-6);
        }
    }
}
