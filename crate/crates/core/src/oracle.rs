//! Independent Schrödinger-equation solver: Numerov integration on a uniform
//! working grid plus a two-sided shooting eigenvalue search.
//!
//! This module supplies the boundary data that seeds the phase equation and
//! the ground-truth wavefunctions the assembled representation is checked
//! against. For radial potentials the integration runs on a log-spaced grid
//! through the substitution r = e^t, u = sqrt(r) v(t), which keeps the
//! centrifugal core resolvable with a uniform step in t.

use crate::error::{Error, Result};
use crate::interp::QuinticUniform;
use crate::numeric::simpson_uniform;
use crate::potentials::{find_turning_points, PotentialKind, PotentialModel};
use crate::quad;

/// Integration direction along the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A uniform grid in the physical coordinate.
#[derive(Debug, Clone, Copy)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.start + self.step * i as f64).collect()
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.n - 1) as f64
    }
}

/// Raw Numerov output: unnormalized values plus any rescales applied to keep
/// the recurrence inside floating-point range.
#[derive(Debug, Clone)]
pub struct NumerovTable {
    pub psi: Vec<f64>,
    /// (index, factor) pairs: all values up to `index` were divided by `factor`.
    pub rescales: Vec<(usize, f64)>,
}

/// Three-term Numerov recurrence for y'' = g(x) y with local error O(h^6).
///
/// Fills `out[from..=to]` (in either index direction), seeded with the two
/// values at `from` and `from +/- 1`. Rescales by the running magnitude when
/// values threaten to overflow, recording each factor, and never aborts.
fn numerov_span(
    g: &[f64],
    h: f64,
    from: usize,
    to: usize,
    seeds: (f64, f64),
    out: &mut [f64],
    rescales: &mut Vec<(usize, f64)>,
) {
    let step: isize = if to >= from { 1 } else { -1 };
    let f = |i: usize| 1.0 - h * h * g[i] / 12.0;
    let mut i_prev = from;
    let mut i_cur = (from as isize + step) as usize;
    out[i_prev] = seeds.0;
    if from == to {
        return;
    }
    out[i_cur] = seeds.1;
    while i_cur != to {
        let i_next = (i_cur as isize + step) as usize;
        let w = ((12.0 - 10.0 * f(i_cur)) * out[i_cur] - f(i_prev) * out[i_prev]) / f(i_next);
        out[i_next] = w;
        if w.abs() > 1e250 {
            let s = w.abs();
            let (lo, hi) = (from.min(i_next), from.max(i_next));
            for v in &mut out[lo..=hi] {
                *v /= s;
            }
            rescales.push((i_next, s));
        }
        i_prev = i_cur;
        i_cur = i_next;
    }
}

/// Numerov integration of the Schrödinger equation on a uniform grid in x.
///
/// `seeds` are the two wavefunction values at the starting edge (the first
/// two grid points for `Forward`, the last two for `Backward`). No
/// normalization is applied.
pub fn numerov_integrate(
    model: &PotentialModel,
    energy: f64,
    grid: &UniformGrid,
    direction: Direction,
    seeds: (f64, f64),
) -> Result<NumerovTable> {
    for &x in &[grid.start, grid.end()] {
        if !model.contains(x) {
            return Err(Error::Domain { x, lo: model.domain.0, hi: model.domain.1 });
        }
    }
    let c = 2.0 * model.mass() / (model.hbar() * model.hbar());
    let g: Vec<f64> =
        grid.positions().iter().map(|&x| c * (model.v(x) - energy)).collect();
    let mut psi = vec![0.0; grid.n];
    let mut rescales = Vec::new();
    let (from, to) = match direction {
        Direction::Forward => (0, grid.n - 1),
        Direction::Backward => (grid.n - 1, 0),
    };
    numerov_span(&g, grid.step, from, to, seeds, &mut psi, &mut rescales);
    Ok(NumerovTable { psi, rescales })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coord {
    Linear,
    /// x = e^t with psi_phys = e^{t/2} v(t).
    LogRadial,
}

/// Working grid: uniform in the integration coordinate, with the effective
/// g(t) split as g = a - E b so energy scans reuse the sampled potential.
struct Working {
    coord: Coord,
    t0: f64,
    h: f64,
    /// physical positions
    xs: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Working {
    fn n(&self) -> usize {
        self.xs.len()
    }

    fn g_at(&self, energy: f64) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(a, b)| a - energy * b).collect()
    }

    fn index_of_physical(&self, x: f64) -> usize {
        let t = match self.coord {
            Coord::Linear => x,
            Coord::LogRadial => x.ln(),
        };
        (((t - self.t0) / self.h).round() as usize).clamp(0, self.n() - 1)
    }
}

/// Magnitude of the WKB decay exponent accumulated from a turning point out
/// to `edge`: (1/hbar) |int |p~| dx|.
fn tail_exponent(model: &PotentialModel, energy: f64, tp: f64, edge: f64) -> f64 {
    let p_forb = |x: f64| (-model.p_squared(energy, x)).max(0.0).sqrt();
    quad::from_turning_point(&p_forb, tp, edge, 1e-9).abs() / model.hbar()
}

/// Extend an edge outward from a turning point until the WKB tail exponent
/// reaches `target` (so the wavefunction magnitude there is below
/// e^{-target} of its turning-point scale), capped by the domain.
fn expand_edge(
    model: &PotentialModel,
    energy: f64,
    tp: f64,
    width: f64,
    outward: f64,
    target: f64,
) -> f64 {
    let bound = if outward > 0.0 { model.domain.1 } else { model.domain.0 };
    let mut edge;
    for j in 1..=400 {
        edge = tp + outward * 0.25 * width * j as f64;
        if (outward > 0.0 && edge >= bound) || (outward < 0.0 && edge <= bound) {
            return bound;
        }
        if tail_exponent(model, energy, tp, edge) >= target {
            return edge;
        }
    }
    bound
}

const TAIL_EXPONENT: f64 = 22.0;
/// Step criterion: h^2 max|g| below this keeps the Numerov error budget.
const STEP_CRITERION: f64 = 1e-4;

fn working_grid(model: &PotentialModel, e_ref: f64) -> Result<Working> {
    let tp = find_turning_points(model, e_ref)?;
    let width = tp.width();
    let c = 2.0 * model.mass() / (model.hbar() * model.hbar());
    let coord = match model.kind {
        PotentialKind::CoulombRadialEffective { .. } => Coord::LogRadial,
        _ => Coord::Linear,
    };
    match coord {
        Coord::Linear => {
            let lo = expand_edge(model, e_ref, tp.x1, width, -1.0, TAIL_EXPONENT);
            let hi = expand_edge(model, e_ref, tp.x2, width, 1.0, TAIL_EXPONENT);
            let mut max_g: f64 = 0.0;
            for i in 0..=4096 {
                let x = lo + (hi - lo) * i as f64 / 4096.0;
                max_g = max_g.max((c * (model.v(x) - e_ref)).abs());
            }
            let h = 1e-3_f64.min((STEP_CRITERION / max_g).sqrt());
            let n = ((hi - lo) / h).ceil() as usize + 1;
            let h = (hi - lo) / (n - 1) as f64;
            let xs: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
            let a = xs.iter().map(|&x| c * model.v(x)).collect();
            let b = vec![c; n];
            Ok(Working { coord, t0: lo, h, xs, a, b })
        }
        Coord::LogRadial => {
            let l_is_zero = matches!(model.kind, PotentialKind::CoulombRadialEffective { l: 0, .. });
            let r_lo = model.domain.0.max(if l_is_zero { 1e-10 } else { 1e-6 });
            let r_hi = expand_edge(model, e_ref, tp.x2, width, 1.0, TAIL_EXPONENT);
            let (t_lo, t_hi) = (r_lo.ln(), r_hi.ln());
            let geff = |r: f64| c * r * r * (model.v(r) - e_ref) + 0.25;
            let mut max_g: f64 = 0.0;
            for i in 0..=4096 {
                let t = t_lo + (t_hi - t_lo) * i as f64 / 4096.0;
                max_g = max_g.max(geff(t.exp()).abs());
            }
            let h = 1e-3_f64.min((STEP_CRITERION / max_g).sqrt());
            let n = ((t_hi - t_lo) / h).ceil() as usize + 1;
            let h = (t_hi - t_lo) / (n - 1) as f64;
            let ts: Vec<f64> = (0..n).map(|i| t_lo + h * i as f64).collect();
            let xs: Vec<f64> = ts.iter().map(|&t| t.exp()).collect();
            let a = xs.iter().map(|&r| c * r * r * model.v(r) + 0.25).collect();
            let b = xs.iter().map(|&r| c * r * r).collect();
            Ok(Working { coord, t0: t_lo, h, xs, a, b })
        }
    }
}

/// WKB-decay seed ratio across the first panel of a forbidden edge.
fn seed_pair(g: &[f64], h: f64, i0: usize, i1: usize) -> (f64, f64) {
    let grow = (0.5 * h * (g[i0].max(0.0).sqrt() + g[i1].max(0.0).sqrt())).exp();
    let w0 = 1e-20;
    (w0, w0 * grow)
}

/// Scale-free matching residual at index `im`: the normalized cross product
/// of the (value, slope) pairs of the left- and right-integrated solutions.
/// Zero exactly when the log-derivatives agree, smooth in E, bounded by 1.
fn matching_residual(working: &Working, energy: f64, im: usize) -> f64 {
    let g = working.g_at(energy);
    let n = working.n();
    let h = working.h;
    let mut left = vec![0.0; n];
    let mut right = vec![0.0; n];
    let mut rescales = Vec::new();
    let seeds = seed_pair(&g, h, 0, 1);
    numerov_span(&g, h, 0, im + 2, seeds, &mut left, &mut rescales);
    let seeds = seed_pair(&g, h, n - 1, n - 2);
    numerov_span(&g, h, n - 1, im - 2, seeds, &mut right, &mut rescales);

    let deriv = |w: &[f64]| {
        (w[im - 2] - 8.0 * w[im - 1] + 8.0 * w[im + 1] - w[im + 2]) / (12.0 * h)
    };
    let (ul, dl) = (left[im], deriv(&left));
    let (ur, dr) = (right[im], deriv(&right));
    let nl = (ul * ul + dl * dl).sqrt();
    let nr = (ur * ur + dr * dr).sqrt();
    (ul / nl) * (dr / nr) - (dl / nl) * (ur / nr)
}

/// Shooting eigenvalue search inside a bracket that isolates one eigenvalue.
///
/// Bisection with secant acceleration on the matching residual, refined until
/// |residual| < 1e-12 or the bracket is exhausted.
pub fn shoot_eigenvalue(model: &PotentialModel, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    let working = working_grid(model, hi.max(lo))?;
    let tp_mid = find_turning_points(model, 0.5 * (lo + hi))?;
    let im = working.index_of_physical(0.5 * (tp_mid.x1 + tp_mid.x2)).clamp(2, working.n() - 3);
    shoot_on(&working, im, lo, hi)
}

fn shoot_on(working: &Working, im: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = matching_residual(working, lo, im);
    let mut fhi = matching_residual(working, hi, im);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    let mut best = (lo, flo.abs());
    for iter in 0..220 {
        let width = hi - lo;
        if width < 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        // secant proposal, falling back to the midpoint when it stalls
        let secant = lo - flo * width / (fhi - flo);
        let mid = 0.5 * (lo + hi);
        let cand = if iter % 2 == 0 && secant > lo + 0.01 * width && secant < hi - 0.01 * width {
            secant
        } else {
            mid
        };
        let fc = matching_residual(working, cand, im);
        if fc.abs() < best.1 {
            best = (cand, fc.abs());
        }
        if fc.abs() < 1e-12 {
            return Ok(cand);
        }
        if fc == 0.0 {
            return Ok(cand);
        }
        if fc.signum() == flo.signum() {
            lo = cand;
            flo = fc;
        } else {
            hi = cand;
            fhi = fc;
        }
    }
    Ok(best.0)
}

/// A normalized two-sided shooting solution.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    /// Physical positions (uniform for 1-d potentials, log-spaced for radial).
    pub grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub energy: f64,
    pub node_count: usize,
    /// Independent quadrature residual of int psi^2 - 1 after normalization.
    pub norm_check: f64,
    coord: Coord,
    t0: f64,
    h: f64,
    /// psi in the working coordinate, for interpolation.
    work_psi: Vec<f64>,
}

/// Shoot inside `bracket` and assemble the normalized eigenfunction.
pub fn eigen_solution(model: &PotentialModel, bracket: (f64, f64)) -> Result<OracleSolution> {
    let (lo, hi) = bracket;
    let working = working_grid(model, hi.max(lo))?;
    let tp_mid = find_turning_points(model, 0.5 * (lo + hi))?;
    let im = working.index_of_physical(0.5 * (tp_mid.x1 + tp_mid.x2)).clamp(2, working.n() - 3);
    let energy = shoot_on(&working, im, lo, hi)?;

    let g = working.g_at(energy);
    let n = working.n();
    let h = working.h;
    let mut left = vec![0.0; n];
    let mut right = vec![0.0; n];
    let mut rescales = Vec::new();
    numerov_span(&g, h, 0, im + 2, seed_pair(&g, h, 0, 1), &mut left, &mut rescales);
    numerov_span(&g, h, n - 1, im - 2, seed_pair(&g, h, n - 1, n - 2), &mut right, &mut rescales);

    // splice the right branch onto the left at the matching point
    let scale = if left[im].abs() > 1e-8 * right[im].abs().max(left[im].abs()) {
        left[im] / right[im]
    } else {
        // node at the match point: scale by slopes instead
        let dl = (left[im - 2] - 8.0 * left[im - 1] + 8.0 * left[im + 1] - left[im + 2]) / (12.0 * h);
        let dr =
            (right[im - 2] - 8.0 * right[im - 1] + 8.0 * right[im + 1] - right[im + 2]) / (12.0 * h);
        dl / dr
    };
    let mut work_psi: Vec<f64> = (0..n)
        .map(|i| if i <= im { left[i] } else { scale * right[i] })
        .collect();

    // physical wavefunction
    let mut psi: Vec<f64> = match working.coord {
        Coord::Linear => work_psi.clone(),
        Coord::LogRadial => {
            work_psi.iter().zip(&working.xs).map(|(v, r)| v * r.sqrt()).collect()
        }
    };

    // normalize: int psi^2 dx = int psi^2 (dx/dt) dt on the uniform t grid
    let weight = |i: usize| match working.coord {
        Coord::Linear => 1.0,
        Coord::LogRadial => working.xs[i],
    };
    let sq: Vec<f64> = (0..n).map(|i| psi[i] * psi[i] * weight(i)).collect();
    let mut norm = 0.0;
    for i in 1..n {
        norm += 0.5 * (sq[i] + sq[i - 1]) * h;
    }
    let inv = 1.0 / norm.sqrt();
    for v in psi.iter_mut().chain(work_psi.iter_mut()) {
        *v *= inv;
    }

    // sign convention: first antinode right of the left turning point positive
    let tp = find_turning_points(model, energy)?;
    let i1 = working.index_of_physical(tp.x1);
    let mut flip = 1.0;
    for i in (i1 + 1).max(1)..n - 1 {
        if psi[i].abs() > psi[i - 1].abs() && psi[i].abs() > psi[i + 1].abs() {
            if psi[i] < 0.0 {
                flip = -1.0;
            }
            break;
        }
    }
    if flip < 0.0 {
        for v in psi.iter_mut().chain(work_psi.iter_mut()) {
            *v = -*v;
        }
    }

    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut node_count = 0;
    let mut last_sign = 0.0;
    for &v in &psi {
        if v.abs() < 1e-9 * peak {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            node_count += 1;
        }
        last_sign = s;
    }

    let sq: Vec<f64> = (0..n).map(|i| psi[i] * psi[i] * weight(i)).collect();
    let norm_check = (simpson_uniform(h, &sq) - 1.0).abs();

    Ok(OracleSolution {
        grid: working.xs,
        psi,
        energy,
        node_count,
        norm_check,
        coord: working.coord,
        t0: working.t0,
        h,
        work_psi,
    })
}

impl OracleSolution {
    /// psi(x) and psi'(x) by quintic interpolation of the solution table.
    pub fn boundary_data(&self, x: f64) -> Result<(f64, f64)> {
        let t = match self.coord {
            Coord::Linear => x,
            Coord::LogRadial => {
                if x <= 0.0 {
                    return Err(Error::Domain {
                        x,
                        lo: self.grid[0],
                        hi: *self.grid.last().unwrap(),
                    });
                }
                x.ln()
            }
        };
        let interp = QuinticUniform::new(self.t0, self.h, self.work_psi.clone());
        let (v, dv_dt) = interp.eval(t).map_err(|_| Error::Domain {
            x,
            lo: self.grid[0],
            hi: *self.grid.last().unwrap(),
        })?;
        match self.coord {
            Coord::Linear => Ok((v, dv_dt)),
            Coord::LogRadial => {
                // u = sqrt(r) v(ln r)  =>  u' = (v/2 + dv/dt) / sqrt(r)
                let r = x;
                let u = r.sqrt() * v;
                let du = (0.5 * v + dv_dt) / r.sqrt();
                Ok((u, du))
            }
        }
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }
}
