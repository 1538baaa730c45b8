//! Deterministic CSV and JSON artifact writers.
//!
//! CSV files carry a header row, comma separators, LF endings, and numbers
//! printed with 17 significant digits so round-trips are lossless and reruns
//! are byte-identical.

use std::fs::File;
use std::io::{BufWriter, Result as IoResult, Write};
use std::path::Path;

use serde::Serialize;

use crate::assembly::{CompareMetrics, MatchReport, WavefunctionTable};
use crate::classical::ClassicalAction;
use crate::oracle::OracleSolution;
use crate::qhje::{ActionSolution, ForbiddenSolution, Region};
use crate::wkb::WkbSolution;

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<P: AsRef<Path>>(
    path: P,
    header: &str,
    rows: impl Iterator<Item = Vec<f64>>,
) -> IoResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
        out.write_all(line.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// (x, psi) of an assembled wavefunction.
pub fn wavefunction_csv<P: AsRef<Path>>(path: P, wf: &WavefunctionTable) -> IoResult<()> {
    write_csv(
        path,
        "x,psi",
        wf.grid.iter().zip(&wf.psi).map(|(&x, &p)| vec![x, p]),
    )
}

/// (x, X, X', X'', Y) of an allowed-region phase solution.
pub fn action_csv<P: AsRef<Path>>(path: P, sol: &ActionSolution) -> IoResult<()> {
    write_csv(
        path,
        "x,X,Xp,Xpp,Y",
        (0..sol.grid.len())
            .map(|i| vec![sol.grid[i], sol.x[i], sol.xp[i], sol.xpp[i], sol.y[i]]),
    )
}

/// (x, W0, p) of the classical action, the dashed curves of the first two
/// figure datasets.
pub fn classical_csv<P: AsRef<Path>>(path: P, table: &ClassicalAction) -> IoResult<()> {
    write_csv(
        path,
        "x,W0,p",
        (0..table.grid.len()).map(|i| vec![table.grid[i], table.w0[i], table.p[i]]),
    )
}

/// (x, psi) of an oracle solution.
pub fn oracle_csv<P: AsRef<Path>>(path: P, sol: &OracleSolution) -> IoResult<()> {
    write_csv(
        path,
        "x,psi",
        sol.grid.iter().zip(&sol.psi).map(|(&x, &p)| vec![x, p]),
    )
}

/// (x, envelope, sine, product): the three factors of the allowed-region
/// representation.
pub fn factors_csv<P: AsRef<Path>>(path: P, sol: &ActionSolution) -> IoResult<()> {
    write_csv(
        path,
        "x,inv_sqrt_Xp,sin_phase,product",
        (0..sol.grid.len()).map(|i| {
            let envelope = 1.0 / sol.xp[i].sqrt();
            let sine = (sol.x[i] + sol.init.phi).sin();
            vec![sol.grid[i], envelope, sine, sol.init.amplitude * envelope * sine]
        }),
    )
}

/// Long-format three-region dataset: (region, x, value), where the value is
/// Y in the forbidden regions and X in the allowed one.
pub fn three_region_csv<P: AsRef<Path>>(
    path: P,
    forb_i: &ForbiddenSolution,
    action: &ActionSolution,
    forb_iii: &ForbiddenSolution,
) -> IoResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(b"region,x,value\n")?;
    let mut dump = |label: &str, xs: &[f64], vs: &[f64]| -> IoResult<()> {
        for (x, v) in xs.iter().zip(vs) {
            out.write_all(format!("{label},{},{}\n", fmt(*x), fmt(*v)).as_bytes())?;
        }
        Ok(())
    };
    debug_assert!(matches!(forb_i.region, Region::I) && matches!(forb_iii.region, Region::III));
    dump("I", &forb_i.grid, &forb_i.y)?;
    dump("II", &action.grid, &action.x)?;
    dump("III", &forb_iii.grid, &forb_iii.y)?;
    out.flush()
}

/// (E, value_mismatch, logderiv_mismatch) rows of a quantization scan.
pub fn residual_scan_csv<P: AsRef<Path>>(path: P, reports: &[MatchReport]) -> IoResult<()> {
    write_csv(
        path,
        "E,value_mismatch,logderiv_mismatch",
        reports.iter().map(|r| vec![r.energy, r.value_mismatch, r.logderiv_mismatch]),
    )
}

pub fn eigenvalues_csv<P: AsRef<Path>>(path: P, energies: &[f64]) -> IoResult<()> {
    write_csv(path, "E", energies.iter().map(|&e| vec![e]))
}

/// (x, psi_wkb, valid flag) of the WKB baseline.
pub fn wkb_csv<P: AsRef<Path>>(path: P, sol: &WkbSolution) -> IoResult<()> {
    write_csv(
        path,
        "x,psi_wkb,valid",
        (0..sol.grid.len()).map(|i| {
            vec![sol.grid[i], sol.psi_wkb[i], if sol.validity_mask[i] { 1.0 } else { 0.0 }]
        }),
    )
}

pub fn write_json<P: AsRef<Path>, T: Serialize>(path: P, value: &T) -> IoResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()
}

/// Per-run summary, including the phase and slope at both turning points so
/// the join data is inspectable downstream.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub energy: f64,
    pub node_count: usize,
    pub nodes: Vec<f64>,
    pub norm_residual: f64,
    pub value_mismatch: f64,
    pub logderiv_mismatch: f64,
    pub joined: bool,
    pub turning_points: [f64; 2],
    pub phase_at_turning: [f64; 2],
    pub slope_at_turning: [f64; 2],
    pub family: FamilyParams,
    pub far_points: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<CompareMetrics>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyParams {
    pub x0: f64,
    pub phi: f64,
    pub xp0: f64,
    pub amplitude: f64,
}

impl RunSummary {
    pub fn new(
        run: &crate::assembly::AssembledRun,
        comparison: Option<CompareMetrics>,
    ) -> Self {
        let action = &run.action;
        let last = action.grid.len() - 1;
        Self {
            energy: run.wavefunction.energy,
            node_count: run.wavefunction.nodes.len(),
            nodes: run.wavefunction.nodes.clone(),
            norm_residual: run.wavefunction.norm_residual,
            value_mismatch: run.report.value_mismatch,
            logderiv_mismatch: run.report.logderiv_mismatch,
            joined: run.report.joined,
            turning_points: [run.wavefunction.turning.x1, run.wavefunction.turning.x2],
            phase_at_turning: [action.x[0], action.x[last]],
            slope_at_turning: [action.xp[0], action.xp[last]],
            family: FamilyParams {
                x0: action.init.x0,
                phi: action.init.phi,
                xp0: action.init.xp0,
                amplitude: action.init.amplitude,
            },
            far_points: [run.far_points.0, run.far_points.1],
            comparison,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_lossless_and_stable() {
        for &v in &[0.1, -17.0_f64.sqrt(), 2.0 / 3.0, 1e-300, 8.5] {
            let s = fmt(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "round-trip of {s}");
            assert_eq!(s, fmt(v));
        }
    }

    #[test]
    fn csv_layout() {
        let dir = std::env::temp_dir().join("qhje-output-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        write_csv(&path, "a,b", [vec![1.0, 2.0], vec![3.0, 4.5]].into_iter()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("a,b"));
        assert!(lines.next().unwrap().split(',').count() == 2);
        assert!(!text.contains('\r'));
        std::fs::remove_dir_all(&dir).ok();
    }
}
