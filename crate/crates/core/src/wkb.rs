//! First-order WKB baseline: psi = A sin(W0/hbar + pi/4)/sqrt(|p|), divergent
//! at the turning points, kept as a transparent comparison target for the
//! exact representation.

use crate::classical::{classical_action, classical_momentum};
use crate::error::{Error, Result};
use crate::numeric::trapezoid;
use crate::potentials::{find_turning_points, PotentialModel};
use crate::quad;

/// Sampled WKB wavefunction with a validity mask.
#[derive(Debug, Clone)]
pub struct WkbSolution {
    pub grid: Vec<f64>,
    pub psi_wkb: Vec<f64>,
    /// True where hbar |p'| / p^2 < 0.1; masked samples are meaningless.
    pub validity_mask: Vec<bool>,
    pub energy: f64,
    pub amplitude: f64,
}

/// Evaluate the WKB representation on a grid strictly inside (x1, x2).
///
/// The amplitude A is fixed by L2-normalizing over the unmasked samples.
pub fn wkb_wavefunction(model: &PotentialModel, energy: f64, grid: &[f64]) -> Result<WkbSolution> {
    let turning = find_turning_points(model, energy)?;
    for &x in &[grid[0], *grid.last().unwrap()] {
        if x <= turning.x1 || x >= turning.x2 {
            return Err(Error::Domain { x, lo: turning.x1, hi: turning.x2 });
        }
    }
    let hbar = model.hbar();
    let mut psi = Vec::with_capacity(grid.len());
    let mut mask = Vec::with_capacity(grid.len());
    for &x in grid {
        let p = classical_momentum(model, energy, x)?;
        let w0 = classical_action(model, energy, &turning, x)?;
        psi.push((w0 / hbar + std::f64::consts::FRAC_PI_4).sin() / p.sqrt());
        let d = 1e-6 * (1.0 + x.abs());
        let dp = (classical_momentum(model, energy, (x + d).min(turning.x2))?
            - classical_momentum(model, energy, (x - d).max(turning.x1))?)
            / (2.0 * d);
        mask.push((hbar * dp / (p * p)).abs() < 0.1);
    }
    // interior L2 normalization over the unmasked span
    let mut xs_ok = Vec::new();
    let mut sq_ok = Vec::new();
    for ((x, v), ok) in grid.iter().zip(&psi).zip(&mask) {
        if *ok {
            xs_ok.push(*x);
            sq_ok.push(v * v);
        }
    }
    if xs_ok.len() < 2 {
        return Err(Error::Domain { x: grid[0], lo: turning.x1, hi: turning.x2 });
    }
    let amplitude = 1.0 / trapezoid(&xs_ok, &sq_ok).sqrt();
    for v in &mut psi {
        *v *= amplitude;
    }
    Ok(WkbSolution { grid: grid.to_vec(), psi_wkb: psi, validity_mask: mask, energy, amplitude })
}

/// Solve the half-well action condition int p dx = pi hbar (n + 1/2) for E
/// by bisection on the monotone action integral.
pub fn wkb_quantization(model: &PotentialModel, n: u32) -> Result<f64> {
    let hbar = model.hbar();
    let target = std::f64::consts::PI * hbar * (n as f64 + 0.5);

    // potential minimum by coarse scan
    let (lo_d, hi_d) = model.domain;
    let mut v_min = f64::INFINITY;
    for i in 0..=10_000 {
        let x = lo_d + (hi_d - lo_d) * i as f64 / 10_000.0;
        v_min = v_min.min(model.v(x));
    }

    let half_action = |e: f64| -> Result<f64> {
        let tp = find_turning_points(model, e)?;
        let p = |x: f64| model.p_squared(e, x).max(0.0).sqrt();
        let mid = 0.5 * (tp.x1 + tp.x2);
        Ok(quad::from_turning_point(&p, tp.x1, mid, 1e-12)
            - quad::from_turning_point(&p, tp.x2, mid, 1e-12))
    };

    // Expand an energy bracket above the minimum until the action crosses the
    // target. Evaluation can fail both at the bottom (well too narrow for the
    // turning-point scan) and at the top (well opens up); climb through the
    // former, back off from the latter.
    let mut step = 1e-3 * (1.0 + v_min.abs());
    let mut e_lo = v_min;
    let mut have_anchor = false;
    let mut bracket = None;
    for _ in 0..300 {
        let cand = e_lo + step;
        match half_action(cand) {
            Ok(a) if a >= target => {
                if !have_anchor {
                    return Err(Error::Bracket { lo: v_min, hi: cand });
                }
                bracket = Some((e_lo, cand));
                break;
            }
            Ok(_) => {
                e_lo = cand;
                have_anchor = true;
                step *= 2.0;
            }
            Err(_) if !have_anchor => {
                e_lo = cand;
                step *= 2.0;
            }
            Err(_) => {
                step *= 0.5;
                if step < 1e-14 * (1.0 + e_lo.abs()) {
                    break;
                }
            }
        }
    }
    let Some((lo, hi)) = bracket else {
        return Err(Error::Bracket { lo: e_lo, hi: e_lo + step });
    };
    let f = |e: f64| half_action(e).map(|a| a - target).unwrap_or(f64::NAN);
    crate::numeric::bisect(f, lo, hi, 1e-12 * (1.0 + hi.abs()))
        .ok_or(Error::RootFind { x: 0.5 * (lo + hi) })
}
