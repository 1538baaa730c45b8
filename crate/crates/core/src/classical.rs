//! Classical characteristic function W0(x) and momentum p(x) on the allowed
//! region, used for comparison curves and scale heuristics.

use crate::error::{Error, Result};
use crate::numeric::linspace;
use crate::potentials::{PotentialModel, TurningPair};
use crate::quad;

/// Sampled classical action and momentum over [x1, x2].
#[derive(Debug, Clone)]
pub struct ClassicalAction {
    pub grid: Vec<f64>,
    pub w0: Vec<f64>,
    pub p: Vec<f64>,
}

/// Positive branch of the classical momentum, +sqrt(2m(E - V)).
pub fn classical_momentum(model: &PotentialModel, energy: f64, x: f64) -> Result<f64> {
    let p2 = model.p_squared(energy, x);
    // tolerate rounding right at a turning point
    if p2 < -1e-12 * (1.0 + energy.abs()) {
        return Err(Error::OutsideAllowedRegion { x });
    }
    Ok(p2.max(0.0).sqrt())
}

fn momentum_clamped(model: &PotentialModel, energy: f64, x: f64) -> f64 {
    model.p_squared(energy, x).max(0.0).sqrt()
}

/// W0(x) = int_{x1}^{x} p(t) dt.
///
/// The momentum vanishes like sqrt(x - x1) and sqrt(x2 - x) at the endpoints,
/// so the integral is split at the well midpoint and each half is computed
/// with the square-root substitution anchored at its own turning point.
pub fn classical_action(
    model: &PotentialModel,
    energy: f64,
    turning: &TurningPair,
    x: f64,
) -> Result<f64> {
    let TurningPair { x1, x2 } = *turning;
    let tol = 1e-9 * (1.0 + turning.width());
    if x < x1 - tol || x > x2 + tol {
        return Err(Error::OutsideAllowedRegion { x });
    }
    let x = x.clamp(x1, x2);
    let p = |t: f64| momentum_clamped(model, energy, t);
    let mid = 0.5 * (x1 + x2);
    const RTOL: f64 = 1e-12;
    if x <= mid {
        Ok(quad::from_turning_point(&p, x1, x, RTOL))
    } else {
        let left = quad::from_turning_point(&p, x1, mid, RTOL);
        let right =
            quad::from_turning_point(&p, x2, x, RTOL) - quad::from_turning_point(&p, x2, mid, RTOL);
        Ok(left + right)
    }
}

/// Sample W0 and p on `n` evenly spaced points across the allowed region.
pub fn classical_action_table(
    model: &PotentialModel,
    energy: f64,
    turning: &TurningPair,
    n: usize,
) -> Result<ClassicalAction> {
    let grid = linspace(turning.x1, turning.x2, n);
    let mut w0 = Vec::with_capacity(n);
    let mut p = Vec::with_capacity(n);
    for &x in &grid {
        w0.push(classical_action(model, energy, turning, x)?);
        p.push(momentum_clamped(model, energy, x));
    }
    Ok(ClassicalAction { grid, w0, p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::derivative_5pt;
    use crate::potentials::{find_turning_points, Constants, PotentialModel};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn harmonic() -> PotentialModel {
        PotentialModel::harmonic(1.0, Constants::default())
    }

    #[test]
    fn momentum_values() {
        let m = harmonic();
        assert_relative_eq!(
            classical_momentum(&m, 8.5, 0.0).unwrap(),
            17.0_f64.sqrt(),
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(classical_momentum(&m, 0.5, 0.0).unwrap(), 1.0, epsilon = 1e-14);
        let tp = find_turning_points(&m, 8.5).unwrap();
        assert_abs_diff_eq!(classical_momentum(&m, 8.5, tp.x2).unwrap(), 0.0, epsilon = 1e-5);
        assert!(matches!(
            classical_momentum(&m, 0.5, 3.0),
            Err(Error::OutsideAllowedRegion { .. })
        ));
    }

    #[test]
    fn action_at_lower_limit_is_zero() {
        let m = harmonic();
        let tp = find_turning_points(&m, 8.5).unwrap();
        assert_eq!(classical_action(&m, 8.5, &tp, tp.x1).unwrap(), 0.0);
    }

    #[test]
    fn full_well_action_is_pi_e_over_omega() {
        let m = harmonic();
        for &e in &[0.5, 2.5, 8.5] {
            let tp = find_turning_points(&m, e).unwrap();
            let full = classical_action(&m, e, &tp, tp.x2).unwrap();
            assert_abs_diff_eq!(full, PI * e, epsilon = 1e-9);
        }
    }

    #[test]
    fn coulomb_full_well_action_closed_form() {
        // int p dr over the well = pi (Z sqrt(m / (2|E|)) - hbar sqrt(l(l+1)))
        let m = PotentialModel::coulomb_radial(1.0, 1, Constants::default());
        let e: f64 = -1.0 / 18.0;
        let tp = find_turning_points(&m, e).unwrap();
        let full = classical_action(&m, e, &tp, tp.x2).unwrap();
        let exact = PI * ((1.0 / (2.0 * e.abs())).sqrt() - 2.0_f64.sqrt());
        assert_abs_diff_eq!(full, exact, epsilon = 1e-9);
    }

    #[test]
    fn sampled_action_derivative_matches_momentum() {
        let m = harmonic();
        let e = 8.5;
        let tp = find_turning_points(&m, e).unwrap();
        let table = classical_action_table(&m, e, &tp, 2001).unwrap();
        assert_eq!(table.w0[0], 0.0);
        assert!(table.w0.windows(2).all(|w| w[1] >= w[0]));
        let h = table.grid[1] - table.grid[0];
        let dw = derivative_5pt(h, &table.w0);
        // away from the turning points, where p is smooth
        let n = table.grid.len();
        for i in (n / 10)..(9 * n / 10) {
            assert_abs_diff_eq!(dw[i], table.p[i], epsilon = 1e-6);
        }
    }
}
