//! Potential models, their turning points, and analytic reference
//! eigenfunctions/energies used as ground truth.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::CubicSpline;
use crate::numeric::bisect;

/// Physical constants of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

/// Quantum numbers addressing an analytic eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: u32,
    /// Orbital angular momentum; ignored by one-dimensional potentials.
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32) -> Self {
        Self { n, l: 0 }
    }

    pub fn radial(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

#[derive(Debug, Clone)]
pub enum PotentialKind {
    /// V(x) = k x^2 / 2
    Harmonic { k: f64 },
    /// V(r) = -Z/r + hbar^2 l(l+1) / (2 m r^2); the attractive sign is the
    /// one that produces a bound well with two turning points.
    CoulombRadialEffective { z: f64, l: u32 },
    /// Tabulated (x, V) pairs interpolated with a natural cubic spline.
    Custom { spline: CubicSpline },
}

/// An evaluable potential with its domain and physical constants.
#[derive(Debug, Clone)]
pub struct PotentialModel {
    pub kind: PotentialKind,
    pub domain: (f64, f64),
    pub constants: Constants,
}

/// The pair of classical turning points bracketing the allowed region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPair {
    pub x1: f64,
    pub x2: f64,
}

impl TurningPair {
    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }
}

impl PotentialModel {
    pub fn harmonic(k: f64, constants: Constants) -> Self {
        Self { kind: PotentialKind::Harmonic { k }, domain: (-40.0, 40.0), constants }
    }

    pub fn coulomb_radial(z: f64, l: u32, constants: Constants) -> Self {
        Self {
            kind: PotentialKind::CoulombRadialEffective { z, l },
            domain: (1e-6, 1000.0),
            constants,
        }
    }

    /// Tabulated potential; the domain is the tabulated range.
    pub fn custom(spline: CubicSpline, constants: Constants) -> Self {
        let domain = spline.domain();
        Self { kind: PotentialKind::Custom { spline }, domain, constants }
    }

    /// Parse "x,V" lines (optional header, `#` comments) into a custom model.
    pub fn custom_from_csv(text: &str, constants: Constants) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let (Some(a), Some(b)) = (fields.next(), fields.next()) else {
                return Err(Error::Tabulation(format!("line {}: expected two columns", lineno + 1)));
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(v)) => {
                    xs.push(x);
                    vs.push(v);
                }
                // a single non-numeric row is treated as the header
                _ if xs.is_empty() => continue,
                _ => {
                    return Err(Error::Tabulation(format!("line {}: non-numeric entry", lineno + 1)))
                }
            }
        }
        Ok(Self::custom(CubicSpline::new(xs, vs)?, constants))
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Config { problems: vec![format!("empty domain [{lo}, {hi}]")] });
        }
        if matches!(self.kind, PotentialKind::CoulombRadialEffective { .. }) && lo <= 0.0 {
            return Err(Error::Config {
                problems: vec!["radial domain lower bound must be strictly positive".into()],
            });
        }
        self.domain = (lo, hi);
        Ok(self)
    }

    /// Unchecked evaluation; callers must stay inside the domain.
    pub(crate) fn v(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Harmonic { k } => 0.5 * k * x * x,
            PotentialKind::CoulombRadialEffective { z, l } => {
                let Constants { hbar, mass } = self.constants;
                let lf = *l as f64;
                -z / x + hbar * hbar * lf * (lf + 1.0) / (2.0 * mass * x * x)
            }
            PotentialKind::Custom { spline } => spline.value(x),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let tol = 1e-12 * (1.0 + self.domain.1.abs().max(self.domain.0.abs()));
        x >= self.domain.0 - tol && x <= self.domain.1 + tol
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar
    }

    pub fn mass(&self) -> f64 {
        self.constants.mass
    }

    /// 2 m (E - V(x)), the squared classical momentum.
    pub(crate) fn p_squared(&self, energy: f64, x: f64) -> f64 {
        2.0 * self.mass() * (energy - self.v(x))
    }
}

/// V(x), with a domain check.
pub fn evaluate_potential(model: &PotentialModel, x: f64) -> Result<f64> {
    if !model.contains(x) {
        return Err(Error::Domain { x, lo: model.domain.0, hi: model.domain.1 });
    }
    Ok(model.v(x))
}

/// Locate the two roots of E - V(x) = 0.
///
/// A uniform 10^4-panel sign-change scan brackets the roots, then bisection
/// tightens each bracket to a relative width of 1e-12.
pub fn find_turning_points(model: &PotentialModel, energy: f64) -> Result<TurningPair> {
    const PANELS: usize = 10_000;
    let (lo, hi) = model.domain;
    let h = (hi - lo) / PANELS as f64;
    let f = |x: f64| energy - model.v(x);

    let mut brackets = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=PANELS {
        let x = if i == PANELS { hi } else { lo + h * i as f64 };
        let fx = f(x);
        if f_prev == 0.0 || f_prev.signum() != fx.signum() {
            brackets.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    if brackets.len() != 2 {
        return Err(Error::UnsupportedPotentialShape { energy, found: brackets.len() });
    }

    let mut roots = [0.0; 2];
    for (slot, (a, b)) in roots.iter_mut().zip(brackets) {
        let xtol = 1e-12 * (1.0 + a.abs().max(b.abs()));
        *slot = bisect(f, a, b, xtol).ok_or(Error::RootFind { x: 0.5 * (a + b) })?;
    }
    Ok(TurningPair { x1: roots[0], x2: roots[1] })
}

/// Exact eigen-energy, when the model has analytic data.
pub fn analytic_energy(model: &PotentialModel, qn: QuantumNumbers) -> Result<f64> {
    let Constants { hbar, mass } = model.constants;
    match &model.kind {
        PotentialKind::Harmonic { k } => {
            let omega = (k / mass).sqrt();
            Ok((qn.n as f64 + 0.5) * hbar * omega)
        }
        PotentialKind::CoulombRadialEffective { z, l } => {
            if qn.n < l + 1 || qn.l != *l {
                return Err(Error::NotAvailable);
            }
            let nf = qn.n as f64;
            Ok(-mass * z * z / (2.0 * hbar * hbar * nf * nf))
        }
        PotentialKind::Custom { .. } => Err(Error::NotAvailable),
    }
}

/// Unit-normalized exact eigenfunction value at `x`.
///
/// Sign convention: the wavefunction is positive approaching the well from the
/// left tail, i.e. positive at its first antinode.
pub fn analytic_eigenfunction(model: &PotentialModel, qn: QuantumNumbers, x: f64) -> Result<f64> {
    let Constants { hbar, mass } = model.constants;
    match &model.kind {
        PotentialKind::Harmonic { k } => {
            let omega = (k / mass).sqrt();
            let alpha = mass * omega / hbar;
            let xi = alpha.sqrt() * x;
            let n = qn.n;
            // physicists' Hermite recurrence
            let mut h_prev = 1.0f64;
            let mut h_cur = 2.0 * xi;
            let h_n = match n {
                0 => h_prev,
                1 => h_cur,
                _ => {
                    for j in 1..n {
                        let next = 2.0 * xi * h_cur - 2.0 * j as f64 * h_prev;
                        h_prev = h_cur;
                        h_cur = next;
                    }
                    h_cur
                }
            };
            let mut log_norm = 0.25 * (alpha / std::f64::consts::PI).ln();
            for j in 1..=n {
                log_norm -= 0.5 * (2.0 * j as f64).ln();
            }
            let orient = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(orient * log_norm.exp() * h_n * (-0.5 * xi * xi).exp())
        }
        PotentialKind::CoulombRadialEffective { z, l } => {
            if qn.n < l + 1 || qn.l != *l {
                return Err(Error::NotAvailable);
            }
            let n = qn.n as f64;
            let lf = *l as f64;
            let kappa = mass * z / (hbar * hbar * n);
            let rho = 2.0 * kappa * x;
            let k_rad = qn.n - l - 1; // radial node count
            let alpha = 2.0 * lf + 1.0;
            // generalized Laguerre recurrence
            let mut l_prev = 1.0f64;
            let mut l_cur = 1.0 + alpha - rho;
            let l_k = match k_rad {
                0 => l_prev,
                1 => l_cur,
                _ => {
                    for j in 1..k_rad {
                        let jf = j as f64;
                        let next = ((2.0 * jf + 1.0 + alpha - rho) * l_cur
                            - (jf + alpha) * l_prev)
                            / (jf + 1.0);
                        l_prev = l_cur;
                        l_cur = next;
                    }
                    l_cur
                }
            };
            // norm: u(r) = sqrt(kappa (n-l-1)! / (n (n+l)!)) rho^{l+1} e^{-rho/2} L
            let mut log_fac = 0.0;
            for j in (k_rad + 1)..=(qn.n + l) {
                log_fac += (j as f64).ln();
            }
            let norm = (kappa / n).sqrt() * (-0.5 * log_fac).exp();
            Ok(norm * rho.powi(*l as i32 + 1) * (-0.5 * rho).exp() * l_k)
        }
        PotentialKind::Custom { .. } => Err(Error::NotAvailable),
    }
}

/// Declarative potential description as found in config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub domain: Option<[f64; 2]>,
    /// Path of a CSV table of (x, V) pairs, for kind = "custom".
    #[serde(default)]
    pub table: Option<String>,
}

impl PotentialSpec {
    pub fn harmonic() -> Self {
        Self { kind: "harmonic".into(), params: BTreeMap::new(), domain: None, table: None }
    }

    pub fn build(&self, constants: Constants) -> Result<PotentialModel> {
        let model = match self.kind.as_str() {
            "harmonic" => {
                let k = self.params.get("k").copied().unwrap_or(1.0);
                PotentialModel::harmonic(k, constants)
            }
            "coulomb" | "coulomb_radial_effective" => {
                let z = self.params.get("z").copied().unwrap_or(1.0);
                let l = self.params.get("l").copied().unwrap_or(0.0) as u32;
                PotentialModel::coulomb_radial(z, l, constants)
            }
            "custom" => {
                let path = self.table.as_ref().ok_or_else(|| Error::Config {
                    problems: vec!["custom potential needs a `table` CSV path".into()],
                })?;
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                    problems: vec![format!("cannot read table {path}: {e}")],
                })?;
                PotentialModel::custom_from_csv(&text, constants)?
            }
            other => {
                return Err(Error::Config {
                    problems: vec![format!("unknown potential kind `{other}`")],
                })
            }
        };
        match self.domain {
            Some([lo, hi]) => model.with_domain(lo, hi),
            None => Ok(model),
        }
    }
}
