//! Input parsing and report records shared by the command-line driver.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::circle::{CircleLift, GhysReport};
use crate::error::{Error, Result};
use crate::symplectic::{SigmaValue, SymplecticMatrix, TheoremReport};

/// Parse a lift specification.
///
/// Accepted forms: `rigid:α`, `arnold:ω:K` and `pl:PATH`, where `PATH` names a
/// CSV file of knots `x,F(x)` (an optional non-numeric header line is
/// skipped).
pub fn parse_lift_spec(spec: &str) -> Result<CircleLift> {
    let mut parts = spec.trim().splitn(2, ':');
    let kind = parts.next().unwrap_or_default();
    let rest = parts.next().ok_or_else(|| Error::Parse(format!("lift spec `{spec}` has no parameters")))?;
    match kind {
        "rigid" => CircleLift::rigid(parse_real(rest, spec)?),
        "arnold" => {
            let (omega, k) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected arnold:ω:K, got `{spec}`")))?;
            CircleLift::arnold(parse_real(omega, spec)?, parse_real(k, spec)?)
        }
        "pl" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| Error::Parse(format!("cannot read knot file `{rest}`: {e}")))?;
            CircleLift::piecewise_linear(parse_knots(&text)?)
        }
        _ => Err(Error::Parse(format!("unknown lift kind `{kind}` in `{spec}`"))),
    }
}

fn parse_real(s: &str, context: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not a number in `{context}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(v))
    }
}

pub fn parse_knots(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut knots = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match fields.as_slice() {
            [x, y] => x.parse::<f64>().ok().zip(y.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some(knot) => knots.push(knot),
            None if i == 0 && knots.is_empty() => continue,
            None => return Err(Error::Parse(format!("line {}: expected `x,F(x)`, got `{line}`", i + 1))),
        }
    }
    Ok(knots)
}

/// Parse whitespace-separated rows, one per line. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: `{t}` is not a number", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse("matrix file is empty".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::BadDimension { rows: n, cols: bad.len() });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn read_symplectic(path: &Path, tol: f64) -> Result<SymplecticMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read `{}`: {e}", path.display())))?;
    SymplecticMatrix::new(parse_matrix(&text)?, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhysCase {
    pub spec: String,
    pub rho: f64,
    pub rho_error: f64,
    pub class: f64,
    pub class_error: f64,
    pub diff_mod1: f64,
    pub chi_max_abs: u64,
    pub window: u64,
    #[serde(rename = "N")]
    pub n_extract: u64,
    pub n_iter: u64,
    pub pass: bool,
}

impl GhysCase {
    pub fn new(spec: &str, r: &GhysReport, window: u64, n_extract: u64, n_iter: u64, tol_diff: f64) -> Self {
        Self {
            spec: spec.to_owned(),
            rho: r.rho.value,
            rho_error: r.rho.error_radius,
            class: r.class.value,
            class_error: r.class.error_radius,
            diff_mod1: r.difference_mod1,
            chi_max_abs: r.chi_max_abs,
            window,
            n_extract,
            n_iter,
            pass: r.difference_mod1 <= tol_diff,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpCase {
    pub n: usize,
    pub matrix_hash: String,
    pub rho: f64,
    pub rho_error: f64,
    pub class: f64,
    pub class_error: f64,
    pub diff_mod1: f64,
    pub sigma_max_abs: u64,
    pub k_max: u64,
    pub window: u64,
    #[serde(rename = "N")]
    pub n_extract: u64,
    pub r_hat: f64,
    pub cocycle_holds: bool,
    pub table_flagged: usize,
    pub table_mismatches: usize,
    /// Eigenvalue formula, present when the matrix is semisimple.
    pub eigen_rho: Option<f64>,
    pub eigen_diff_mod1: Option<f64>,
    /// `σ(g, g)` computed directly from section lifts.
    pub sigma_self: i64,
    pub sigma_residual: f64,
    pub pass: bool,
}

/// Pass thresholds for a symplectic case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpTolerances {
    pub diff_mod1: f64,
    pub sigma_residual: f64,
}

impl SpCase {
    /// `eigen` is the eigenvalue rotation number when it is defined. It must
    /// agree with `rho` within `tol.diff_mod1` plus the radius of `rho`.
    pub fn new(
        g: &SymplecticMatrix,
        r: &TheoremReport,
        eigen: Option<f64>,
        sigma: SigmaValue,
        tol: SpTolerances,
    ) -> Self {
        let eigen_diff = eigen.map(|e| crate::cohomology::circle_distance(e, r.rho.value));
        let eigen_ok = eigen_diff.is_none_or(|d| d <= tol.diff_mod1 + r.rho.error_radius);
        let pass = r.difference_mod1 <= tol.diff_mod1
            && r.cocycle_holds
            && r.table_mismatches == 0
            && eigen_ok
            && sigma.residual <= tol.sigma_residual;
        Self {
            n: g.n(),
            matrix_hash: g.hash_hex(),
            rho: r.rho.value,
            rho_error: r.rho.error_radius,
            class: r.class.value,
            class_error: r.class.error_radius,
            diff_mod1: r.difference_mod1,
            sigma_max_abs: r.sigma_max_abs,
            k_max: r.options.k_max,
            window: r.options.window,
            n_extract: r.options.n,
            r_hat: r.r_hat.value(),
            cocycle_holds: r.cocycle_holds,
            table_flagged: r.table_flagged,
            table_mismatches: r.table_mismatches,
            eigen_rho: eigen,
            eigen_diff_mod1: eigen_diff,
            sigma_self: sigma.value,
            sigma_residual: sigma.residual,
            pass,
        }
    }
}

/// Anything a case record must expose for the summary.
pub trait CaseRecord {
    fn passed(&self) -> bool;
    fn diff_mod1(&self) -> f64;
    fn cocycle_max_abs(&self) -> u64;
}

impl CaseRecord for GhysCase {
    fn passed(&self) -> bool {
        self.pass
    }
    fn diff_mod1(&self) -> f64 {
        self.diff_mod1
    }
    fn cocycle_max_abs(&self) -> u64 {
        self.chi_max_abs
    }
}

impl CaseRecord for SpCase {
    fn passed(&self) -> bool {
        self.pass
    }
    fn diff_mod1(&self) -> f64 {
        self.diff_mod1
    }
    fn cocycle_max_abs(&self) -> u64 {
        self.sigma_max_abs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass_count: usize,
    pub fail_count: usize,
    pub max_diff_mod1: f64,
    pub max_sigma_abs: u64,
}

/// Run metadata that differs between otherwise identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub timestamp: u64,
    pub wall_time: f64,
}

/// A case whose computation failed before it could be judged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseError {
    pub index: usize,
    pub label: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport<C> {
    pub cases: Vec<C>,
    pub errors: Vec<CaseError>,
    pub summary: Summary,
    pub run: RunInfo,
}

impl<C: CaseRecord> SuiteReport<C> {
    pub fn new(cases: Vec<C>, errors: Vec<CaseError>, run: RunInfo) -> Self {
        let pass_count = cases.iter().filter(|c| c.passed()).count();
        let summary = Summary {
            pass_count,
            fail_count: cases.len() - pass_count + errors.len(),
            max_diff_mod1: cases.iter().map(CaseRecord::diff_mod1).fold(0.0, f64::max),
            max_sigma_abs: cases.iter().map(CaseRecord::cocycle_max_abs).max().unwrap_or(0),
        };
        Self {
            cases,
            errors,
            summary,
            run,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail_count == 0
    }
}
