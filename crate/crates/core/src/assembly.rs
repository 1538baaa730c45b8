//! Three-region wavefunction assembly, node extraction, smooth-join
//! quantization residual, and comparison metrics.
//!
//! The allowed-region representation `B sin(X + phi)/sqrt(X')` and the two
//! forbidden-region exponentials `B e^{-Y/hbar}` are glued by value at the
//! turning points; at an eigen-energy the derivatives match as well. The
//! failure of that derivative match at the right turning point, as a smooth
//! function of E, is the quantization residual this module roots for
//! eigenvalues.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::QuinticUniform;
use crate::numeric::{linspace, simpson_uniform, trapezoid};
use crate::oracle::OracleSolution;
use crate::potentials::{find_turning_points, PotentialModel, TurningPair};
use crate::qhje::{
    build_phase_init, choose_far_point, integrate_forbidden, integrate_phase_ode, ActionSolution,
    Conventions, ForbiddenSolution, GridSpec, Region,
};

/// Join diagnostics at the right turning point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MatchReport {
    pub energy: f64,
    /// Scale-free value-level residual: the normalized cross product of the
    /// (psi, psi') pairs of region II and region III at x2. Smooth in E and
    /// zero exactly at eigenvalues; this is the function the eigenvalue scan
    /// roots.
    pub value_mismatch: f64,
    /// Difference of log-derivatives psi'/psi at x2.
    pub logderiv_mismatch: f64,
    pub joined: bool,
}

const JOIN_TOL: f64 = 1e-8;

fn join_report(action: &ActionSolution, forb_iii: &ForbiddenSolution, hbar: f64) -> MatchReport {
    let last = action.grid.len() - 1;
    let psi_ii = action.psi_at(last);
    let dpsi_ii = action.dpsi_at(last);
    let q3 = forb_iii.q_inner();
    // unit-amplitude decaying solution at x2: psi = 1, psi' = -Q/hbar
    let psi_iii = 1.0;
    let dpsi_iii = -q3 / hbar;
    let cross = psi_ii * dpsi_iii - dpsi_ii * psi_iii;
    let norm = (psi_ii * psi_ii + dpsi_ii * dpsi_ii).sqrt()
        * (psi_iii * psi_iii + dpsi_iii * dpsi_iii).sqrt();
    let value_mismatch = cross / norm;
    let logderiv_mismatch = action.psi_logderiv_at(last) - dpsi_iii;
    MatchReport {
        energy: action.energy,
        value_mismatch,
        logderiv_mismatch,
        joined: value_mismatch.abs() < JOIN_TOL && logderiv_mismatch.abs() < JOIN_TOL,
    }
}

/// One uniform slice of an assembled grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct Segment {
    x0: f64,
    h: f64,
    start: usize,
    len: usize,
}

/// The assembled three-region wavefunction.
#[derive(Debug, Clone)]
pub struct WavefunctionTable {
    pub grid: Vec<f64>,
    pub psi: Vec<f64>,
    /// Trapezoid norm after normalization (1 by construction).
    pub norm: f64,
    /// Independent Simpson residual of int psi^2 - 1.
    pub norm_residual: f64,
    pub nodes: Vec<f64>,
    /// (B_I, B_II, B_III) after normalization and sign fixing.
    pub segment_constants: (f64, f64, f64),
    pub energy: f64,
    pub turning: TurningPair,
    segments: Vec<Segment>,
}

impl WavefunctionTable {
    /// Interpolated value at `x` (quintic within the containing segment).
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.span();
        for seg in &self.segments {
            let end = seg.x0 + seg.h * (seg.len - 1) as f64;
            let tol = 1e-9 * (1.0 + x.abs());
            if x >= seg.x0 - tol && x <= end + tol {
                let ys = self.psi[seg.start..seg.start + seg.len].to_vec();
                return QuinticUniform::new(seg.x0, seg.h, ys)
                    .value(x.clamp(seg.x0, end))
                    .map_err(|_| Error::Domain { x, lo, hi });
            }
        }
        Err(Error::Domain { x, lo, hi })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    /// Build a single-segment table by sampling a closed-form reference.
    pub fn from_function(
        xs: &[f64],
        f: impl Fn(f64) -> f64,
        energy: f64,
        turning: TurningPair,
    ) -> Self {
        let psi: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let h = xs[1] - xs[0];
        let norm = trapezoid(xs, &psi.iter().map(|v| v * v).collect::<Vec<_>>());
        let segments = vec![Segment { x0: xs[0], h, start: 0, len: xs.len() }];
        Self {
            grid: xs.to_vec(),
            psi,
            norm,
            norm_residual: 0.0,
            nodes: Vec::new(),
            segment_constants: (0.0, 0.0, 0.0),
            energy,
            turning,
            segments,
        }
    }
}

/// Node positions from phase crossings X(x) + phi = k pi.
///
/// X is monotone, so each crossing is bracketed on the dense samples and
/// refined by bisection on the quintic interpolant of X.
pub fn node_positions(action: &ActionSolution) -> Vec<f64> {
    let phi = action.init.phi;
    let h = action.grid[1] - action.grid[0];
    let interp = QuinticUniform::new(action.grid[0], h, action.x.clone());
    let phase_lo = action.x[0] + phi;
    let phase_hi = action.x.last().unwrap() + phi;
    let pi = std::f64::consts::PI;
    let mut nodes = Vec::new();
    let mut k = (phase_lo / pi).floor() as i64 + 1;
    while (k as f64) * pi < phase_hi {
        let target = k as f64 * pi - phi;
        // binary search for the bracketing samples of the monotone X
        let idx = action.x.partition_point(|&v| v < target);
        if idx > 0 && idx < action.x.len() {
            let (a, b) = (action.grid[idx - 1], action.grid[idx]);
            let f = |x: f64| interp.value(x).unwrap() - target;
            if let Some(root) = crate::numeric::bisect(f, a, b, 1e-13 * (1.0 + b.abs())) {
                nodes.push(root);
            }
        }
        k += 1;
    }
    nodes
}

/// Glue the three regions, normalize, and fix the sign convention.
///
/// Value continuity at the turning points is exact by construction of the
/// segment constants; the derivative joins are checked against the
/// eigen-energy tolerance and a `Join` error carries the report when they
/// fail.
pub fn assemble(
    model: &PotentialModel,
    action: &ActionSolution,
    forb_i: &ForbiddenSolution,
    forb_iii: &ForbiddenSolution,
) -> Result<WavefunctionTable> {
    let hbar = model.hbar();
    let x1 = action.x1();
    let x2 = action.x2();
    let tol = 1e-9 * (1.0 + x1.abs().max(x2.abs()));
    let abut_i = (forb_i.inner - x1).abs();
    let abut_iii = (forb_iii.inner - x2).abs();
    if abut_i > tol || abut_iii > tol {
        return Err(Error::IncomparableGrids {
            overlap_fraction: 100.0 * (1.0 - abut_i.max(abut_iii)),
        });
    }

    // value matching
    let b_i = action.psi_at(0);
    let b_iii = action.psi_at(action.grid.len() - 1);

    // derivative matching at both turning points
    let report = join_report(action, forb_iii, hbar);
    let left_ld_mismatch =
        action.psi_logderiv_at(0) - (-forb_i.q_inner() / hbar);
    if !report.joined || left_ld_mismatch.abs() > JOIN_TOL {
        return Err(Error::Join { report });
    }

    // concatenate, dropping duplicated junction points
    let n_i = forb_i.grid.len();
    let n_ii = action.grid.len();
    let mut grid = Vec::with_capacity(n_i + n_ii + forb_iii.grid.len());
    let mut psi = Vec::with_capacity(grid.capacity());
    for i in 0..n_i - 1 {
        grid.push(forb_i.grid[i]);
        psi.push(b_i * (-forb_i.y[i] / hbar).exp());
    }
    let seg_i = Segment { x0: forb_i.grid[0], h: forb_i.grid[1] - forb_i.grid[0], start: 0, len: n_i };
    for i in 0..n_ii {
        grid.push(action.grid[i]);
        psi.push(action.psi_at(i));
    }
    let seg_ii = Segment {
        x0: action.grid[0],
        h: action.grid[1] - action.grid[0],
        start: n_i - 1,
        len: n_ii,
    };
    for i in 1..forb_iii.grid.len() {
        grid.push(forb_iii.grid[i]);
        psi.push(b_iii * (-forb_iii.y[i] / hbar).exp());
    }
    let seg_iii = Segment {
        x0: forb_iii.grid[0],
        h: forb_iii.grid[1] - forb_iii.grid[0],
        start: n_i + n_ii - 2,
        len: forb_iii.grid.len(),
    };

    // normalize by the trapezoid rule on the assembled grid
    let sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
    let norm = trapezoid(&grid, &sq);
    let mut scale = 1.0 / norm.sqrt();

    // positive first antinode right of x1
    let i1 = seg_ii.start;
    for i in i1 + 1..grid.len() - 1 {
        if psi[i].abs() > psi[i - 1].abs() && psi[i].abs() > psi[i + 1].abs() {
            if psi[i] < 0.0 {
                scale = -scale;
            }
            break;
        }
    }
    for v in &mut psi {
        *v *= scale;
    }

    // independent quadrature check: per-segment Simpson of the normalized psi^2
    let mut simpson = 0.0;
    for seg in [&seg_i, &seg_ii, &seg_iii] {
        let sq: Vec<f64> =
            psi[seg.start..seg.start + seg.len].iter().map(|v| v * v).collect();
        simpson += simpson_uniform(seg.h, &sq);
    }

    let turning = TurningPair { x1, x2 };
    Ok(WavefunctionTable {
        grid,
        psi,
        norm: 1.0,
        norm_residual: (simpson - 1.0).abs(),
        nodes: node_positions(action),
        segment_constants: (b_i * scale, action.init.amplitude * scale, b_iii * scale),
        energy: action.energy,
        turning,
        segments: vec![seg_i, seg_ii, seg_iii],
    })
}

/// Everything one solver run produces.
#[derive(Debug)]
pub struct AssembledRun {
    pub wavefunction: WavefunctionTable,
    pub report: MatchReport,
    pub action: ActionSolution,
    pub forbidden_i: ForbiddenSolution,
    pub forbidden_iii: ForbiddenSolution,
    pub far_points: (f64, f64),
}

fn forbidden_pair(
    model: &PotentialModel,
    energy: f64,
    turning: &TurningPair,
    grid: GridSpec,
) -> Result<(ForbiddenSolution, ForbiddenSolution, (f64, f64))> {
    let far_i = choose_far_point(model, energy, Region::I, turning)?;
    let far_iii = choose_far_point(model, energy, Region::III, turning)?;
    let forb_i = integrate_forbidden(model, energy, Region::I, far_i, grid)?;
    let forb_iii = integrate_forbidden(model, energy, Region::III, far_iii, grid)?;
    Ok((forb_i, forb_iii, (far_i, far_iii)))
}

/// Full pipeline at `energy` with boundary data supplied by the caller
/// (typically from the Schrödinger oracle at the left turning point).
pub fn solve_with_boundary(
    model: &PotentialModel,
    energy: f64,
    boundary: (f64, f64),
    conventions: &Conventions,
    action_grid: GridSpec,
    forbidden_grid: GridSpec,
) -> Result<AssembledRun> {
    let turning = find_turning_points(model, energy)?;
    let xp0 = conventions.resolve_xp0(model, energy, &turning);
    let init = build_phase_init(
        turning.x1,
        boundary.0,
        boundary.1,
        conventions.x0,
        conventions.phi,
        xp0,
    )?;
    let action = integrate_phase_ode(model, energy, &init, action_grid)?;
    let (forb_i, forb_iii, far_points) = forbidden_pair(model, energy, &turning, forbidden_grid)?;
    let report = join_report(&action, &forb_iii, model.hbar());
    let wavefunction = assemble(model, &action, &forb_i, &forb_iii)?;
    Ok(AssembledRun { wavefunction, report, action, forbidden_i: forb_i, forbidden_iii: forb_iii, far_points })
}

/// Full pipeline at `energy` with no oracle involved: boundary data at x1
/// comes from the region I Riccati solution (psi = B_I, psi' = -B_I Y'/hbar).
pub fn solve_self_consistent(
    model: &PotentialModel,
    energy: f64,
    conventions: &Conventions,
    action_grid: GridSpec,
    forbidden_grid: GridSpec,
) -> Result<AssembledRun> {
    let turning = find_turning_points(model, energy)?;
    let (forb_i, forb_iii, far_points) = forbidden_pair(model, energy, &turning, forbidden_grid)?;
    let boundary = (1.0, -forb_i.q_inner() / model.hbar());
    let xp0 = conventions.resolve_xp0(model, energy, &turning);
    let init = build_phase_init(
        turning.x1,
        boundary.0,
        boundary.1,
        conventions.x0,
        conventions.phi,
        xp0,
    )?;
    let action = integrate_phase_ode(model, energy, &init, action_grid)?;
    let report = join_report(&action, &forb_iii, model.hbar());
    let wavefunction = assemble(model, &action, &forb_i, &forb_iii)?;
    Ok(AssembledRun { wavefunction, report, action, forbidden_i: forb_i, forbidden_iii: forb_iii, far_points })
}

/// Boundary data for the paper-style run: the oracle solution and its
/// (psi, psi') at the left turning point.
pub fn oracle_boundary(
    oracle_sol: &OracleSolution,
    turning: &TurningPair,
) -> Result<(f64, f64)> {
    oracle_sol.boundary_data(turning.x1)
}

/// Run the pipeline at `energy` and report the smooth-join residual at x2.
///
/// Self-contained: the left boundary data comes from the region I Riccati
/// solution, so no Schrödinger solution enters. The `value_mismatch` field is
/// a continuous function of E crossing zero exactly at eigenvalues.
pub fn quantization_residual(
    model: &PotentialModel,
    energy: f64,
    conventions: &Conventions,
) -> Result<MatchReport> {
    let turning = find_turning_points(model, energy)?;
    let lean = GridSpec { samples: 9 };
    let far_i = choose_far_point(model, energy, Region::I, &turning)?;
    let forb_i = integrate_forbidden(model, energy, Region::I, far_i, lean)?;
    let boundary = (1.0, -forb_i.q_inner() / model.hbar());
    let xp0 = conventions.resolve_xp0(model, energy, &turning);
    let init = build_phase_init(
        turning.x1,
        boundary.0,
        boundary.1,
        conventions.x0,
        conventions.phi,
        xp0,
    )?;
    let action = integrate_phase_ode(model, energy, &init, GridSpec { samples: 2 })?;
    let far_iii = choose_far_point(model, energy, Region::III, &turning)?;
    let forb_iii = integrate_forbidden(model, energy, Region::III, far_iii, lean)?;
    Ok(join_report(&action, &forb_iii, model.hbar()))
}

/// Scan `quantization_residual` over `[lo, hi]` on a `mesh`-point grid,
/// bracket sign changes of the residual, and refine each by bisection.
///
/// Mesh points where the pipeline fails (no turning points, degenerate
/// initialization) are skipped; an empty result means no sign change was
/// found, which is not an error.
pub fn find_eigenvalues(
    model: &PotentialModel,
    range: (f64, f64),
    conventions: &Conventions,
    mesh: usize,
) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    let (lo, hi) = range;
    if !(lo < hi) {
        return Err(Error::Config { problems: vec![format!("empty energy range [{lo}, {hi}]")] });
    }
    let es = linspace(lo, hi, mesh.max(8));
    let residuals: Vec<Option<f64>> = es
        .par_iter()
        .map(|&e| quantization_residual(model, e, conventions).ok().map(|r| r.value_mismatch))
        .collect();

    let mut eigenvalues = Vec::new();
    for i in 1..es.len() {
        let (Some(fa), Some(fb)) = (residuals[i - 1], residuals[i]) else { continue };
        if fa == 0.0 {
            eigenvalues.push(es[i - 1]);
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        let f = |e: f64| {
            quantization_residual(model, e, conventions)
                .map(|r| r.value_mismatch)
                .unwrap_or(f64::NAN)
        };
        let xtol = 1e-10 * (1.0 + es[i].abs());
        if let Some(root) = crate::numeric::bisect(f, es[i - 1], es[i], xtol) {
            eigenvalues.push(root);
        }
    }
    Ok(eigenvalues)
}

/// Pointwise comparison metrics between two wavefunction tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareMetrics {
    pub max_abs_error: f64,
    pub l2_error: f64,
    /// Pairwise |node - node| when both tables carry the same node count.
    pub node_position_errors: Option<Vec<f64>>,
}

/// Resample `wf` onto the reference grid (quintic), align the global sign,
/// and report max-abs and L2 deviations.
pub fn compare(wf: &WavefunctionTable, reference: &WavefunctionTable) -> Result<CompareMetrics> {
    let (lo_w, hi_w) = wf.span();
    let (lo_r, hi_r) = reference.span();
    let lo = lo_w.max(lo_r);
    let hi = hi_w.min(hi_r);
    let overlap_fraction = 100.0 * ((hi - lo) / (hi_r - lo_r)).max(0.0);
    if overlap_fraction < 90.0 {
        return Err(Error::IncomparableGrids { overlap_fraction });
    }

    let mut xs = Vec::new();
    let mut ours = Vec::new();
    let mut theirs = Vec::new();
    for (x, r) in reference.grid.iter().zip(&reference.psi) {
        if *x < lo || *x > hi {
            continue;
        }
        xs.push(*x);
        ours.push(wf.eval(*x)?);
        theirs.push(*r);
    }
    let dot: f64 = ours.iter().zip(&theirs).map(|(a, b)| a * b).sum();
    let sign = if dot < 0.0 { -1.0 } else { 1.0 };
    let diff: Vec<f64> = ours.iter().zip(&theirs).map(|(a, b)| sign * a - b).collect();
    let max_abs_error = diff.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let sq: Vec<f64> = diff.iter().map(|d| d * d).collect();
    let l2_error = trapezoid(&xs, &sq).max(0.0).sqrt();

    let node_position_errors = if !wf.nodes.is_empty() && wf.nodes.len() == reference.nodes.len() {
        Some(
            wf.nodes
                .iter()
                .zip(&reference.nodes)
                .map(|(a, b)| (a - b).abs())
                .collect(),
        )
    } else {
        None
    };
    Ok(CompareMetrics { max_abs_error, l2_error, node_position_errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::second_derivative_5pt;
    use crate::oracle;
    use crate::potentials::{analytic_eigenfunction, Constants, QuantumNumbers};
    use approx::assert_abs_diff_eq;

    fn harmonic() -> PotentialModel {
        PotentialModel::harmonic(1.0, Constants::default())
    }

    fn paper_run(n: u32) -> AssembledRun {
        let model = harmonic();
        let energy = n as f64 + 0.5;
        let orc = oracle::eigen_solution(&model, (energy - 0.2, energy + 0.2)).unwrap();
        let turning = find_turning_points(&model, energy).unwrap();
        let boundary = orc.boundary_data(turning.x1).unwrap();
        solve_with_boundary(
            &model,
            energy,
            boundary,
            &Conventions::default(),
            GridSpec::default(),
            GridSpec::forbidden_default(),
        )
        .unwrap()
    }

    #[test]
    fn n8_reproduces_analytic_state() {
        let model = harmonic();
        let run = paper_run(8);
        let wf = &run.wavefunction;
        assert!(run.report.joined);
        assert!(wf.norm_residual < 1e-8, "norm residual {:.3e}", wf.norm_residual);
        assert_eq!(wf.nodes.len(), 8);
        let mut worst = 0.0f64;
        for (x, v) in wf.grid.iter().zip(&wf.psi) {
            let exact = analytic_eigenfunction(&model, QuantumNumbers::new(8), *x).unwrap();
            worst = worst.max((v - exact).abs());
        }
        assert!(worst < 1e-7, "max abs deviation {worst:.3e}");
    }

    #[test]
    fn ground_state_is_a_nodeless_gaussian() {
        let model = harmonic();
        let run = paper_run(0);
        let wf = &run.wavefunction;
        assert!(wf.nodes.is_empty());
        let mut worst = 0.0f64;
        for (x, v) in wf.grid.iter().zip(&wf.psi) {
            let exact = analytic_eigenfunction(&model, QuantumNumbers::new(0), *x).unwrap();
            worst = worst.max((v - exact).abs());
        }
        assert!(worst < 1e-7, "max abs deviation {worst:.3e}");
    }

    #[test]
    fn single_node_of_n1_sits_at_origin() {
        let run = paper_run(1);
        assert_eq!(run.wavefunction.nodes.len(), 1);
        assert_abs_diff_eq!(run.wavefunction.nodes[0], 0.0, epsilon = 1e-8);
    }

    #[test]
    fn n8_nodes_are_symmetric_and_match_sign_changes() {
        let run = paper_run(8);
        let wf = &run.wavefunction;
        let nodes = &wf.nodes;
        assert_eq!(nodes.len(), 8);
        for i in 0..4 {
            assert_abs_diff_eq!(nodes[i], -nodes[7 - i], epsilon = 1e-6);
        }
        // bijection with sign changes of the assembled wavefunction
        let peak = wf.psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut crossings = Vec::new();
        for i in 1..wf.grid.len() {
            let (a, b) = (wf.psi[i - 1], wf.psi[i]);
            if a.abs() > 1e-9 * peak && b.abs() > 1e-9 * peak && a.signum() != b.signum() {
                crossings.push(0.5 * (wf.grid[i - 1] + wf.grid[i]));
            }
        }
        assert_eq!(crossings.len(), nodes.len());
        let h = wf.grid[wf.segments[1].start + 1] - wf.grid[wf.segments[1].start];
        for (c, n) in crossings.iter().zip(nodes) {
            assert!((c - n).abs() < h, "crossing {c} vs node {n}");
        }
    }

    #[test]
    fn assembled_psi_satisfies_the_schrodinger_equation() {
        let model = harmonic();
        let run = paper_run(8);
        let wf = &run.wavefunction;
        let seg = wf.segments[1];
        let slice = &wf.psi[seg.start..seg.start + seg.len];
        let xs = &wf.grid[seg.start..seg.start + seg.len];
        let dd = second_derivative_5pt(seg.h, slice);
        let peak = slice.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 4..seg.len - 4 {
            let residual = dd[i] + model.p_squared(wf.energy, xs[i]) * slice[i];
            assert!(
                residual.abs() < 1e-5 * peak,
                "x = {}: residual {:.3e}",
                xs[i],
                residual
            );
        }
    }

    #[test]
    fn continuity_at_turning_points() {
        let model = harmonic();
        let run = paper_run(8);
        let wf = &run.wavefunction;
        let hbar = model.hbar();
        // value continuity is by construction; derivative via the segments
        let last = run.action.grid.len() - 1;
        let d_ii_x1 = run.action.dpsi_at(0);
        let d_i_x1 = -run.action.psi_at(0) * run.forbidden_i.q_inner() / hbar;
        assert_abs_diff_eq!(d_ii_x1, d_i_x1, epsilon = 1e-8);
        let d_ii_x2 = run.action.dpsi_at(last);
        let d_iii_x2 = -run.action.psi_at(last) * run.forbidden_iii.q_inner() / hbar;
        assert_abs_diff_eq!(d_ii_x2, d_iii_x2, epsilon = 1e-8);
        assert!(wf.norm_residual < 1e-8);
    }

    #[test]
    fn residual_crosses_zero_at_the_eigenvalue() {
        let model = harmonic();
        let conv = Conventions::default();
        let at = |e: f64| quantization_residual(&model, e, &conv).unwrap();
        let r85 = at(8.5);
        assert!(r85.joined, "E = 8.5 must join: {r85:?}");
        assert!(r85.logderiv_mismatch.abs() < 1e-8);
        let r80 = at(8.0);
        let r90 = at(9.0);
        assert!(!r80.joined);
        assert!(!r90.joined);
        assert!(r80.value_mismatch.signum() != r90.value_mismatch.signum());
    }

    #[test]
    fn eigenvalue_scan_on_a_gap_is_empty() {
        let model = harmonic();
        let found =
            find_eigenvalues(&model, (0.6, 1.4), &Conventions::default(), 32).unwrap();
        assert!(found.is_empty(), "found {found:?}");
    }

    #[test]
    fn eigenvalue_scan_finds_one_level() {
        let model = harmonic();
        let found =
            find_eigenvalues(&model, (1.2, 1.8), &Conventions::default(), 16).unwrap();
        assert_eq!(found.len(), 1);
        assert_abs_diff_eq!(found[0], 1.5, epsilon = 1e-8);
    }

    #[test]
    fn self_consistent_run_matches_analytic_without_oracle() {
        let model = harmonic();
        let run = solve_self_consistent(
            &model,
            8.5,
            &Conventions::default(),
            GridSpec::default(),
            GridSpec::forbidden_default(),
        )
        .unwrap();
        let mut worst = 0.0f64;
        for (x, v) in run.wavefunction.grid.iter().zip(&run.wavefunction.psi) {
            let exact = analytic_eigenfunction(&model, QuantumNumbers::new(8), *x).unwrap();
            worst = worst.max((v - exact).abs());
        }
        assert!(worst < 1e-7, "max abs deviation {worst:.3e}");
    }

    #[test]
    fn comparison_with_itself_is_exact() {
        let run = paper_run(3);
        let m = compare(&run.wavefunction, &run.wavefunction).unwrap();
        assert_eq!(m.max_abs_error, 0.0);
        assert_eq!(m.l2_error, 0.0);
        assert_eq!(m.node_position_errors, Some(vec![0.0, 0.0, 0.0]));
    }

    #[test]
    fn comparison_rejects_disjoint_grids() {
        let run = paper_run(0);
        let xs = linspace(50.0, 60.0, 101);
        let reference = WavefunctionTable::from_function(
            &xs,
            |_| 0.0,
            0.5,
            TurningPair { x1: -1.0, x2: 1.0 },
        );
        assert!(matches!(
            compare(&run.wavefunction, &reference),
            Err(Error::IncomparableGrids { .. })
        ));
    }

    #[test]
    fn assemble_rejects_non_eigen_energy() {
        let model = harmonic();
        let res = solve_self_consistent(
            &model,
            8.0,
            &Conventions::default(),
            GridSpec { samples: 201 },
            GridSpec { samples: 65 },
        );
        match res {
            Err(Error::Join { report }) => {
                assert!(!report.joined);
                assert!(report.logderiv_mismatch.abs() > 1e-4);
            }
            other => panic!("expected Join error, got {other:?}"),
        }
    }

    #[test]
    fn family_members_assemble_to_the_same_wavefunction() {
        let model = harmonic();
        let energy = 8.5;
        let orc = oracle::eigen_solution(&model, (8.3, 8.7)).unwrap();
        let turning = find_turning_points(&model, energy).unwrap();
        let boundary = orc.boundary_data(turning.x1).unwrap();
        let mut tables = Vec::new();
        for (x0, xp0) in [(0.0, 2.0), (0.7, 2.0), (0.0, 0.8)] {
            let conv = Conventions {
                x0,
                phi: std::f64::consts::FRAC_PI_4,
                xp0: crate::qhje::Xp0Policy::Fixed(xp0),
            };
            let run = solve_with_boundary(
                &model,
                energy,
                boundary,
                &conv,
                GridSpec::default(),
                GridSpec::forbidden_default(),
            )
            .unwrap();
            tables.push(run.wavefunction);
        }
        for pair in tables.windows(2) {
            let m = compare(&pair[1], &pair[0]).unwrap();
            assert!(m.max_abs_error < 1e-8, "gauge members differ by {:.3e}", m.max_abs_error);
        }
    }
}
