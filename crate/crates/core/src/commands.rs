//   Copyright 2026 rpi-core developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

//! Command implementations behind the `rpi-csf` binary. Each returns the
//! text written to stdout and writes any requested files itself.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::config::Expected;
use crate::corpus::corpus;
use crate::csf::{csf_approx, CsfConfig, CsfResult};
use crate::error::{Error, Result};
use crate::invariant::{boundary_contact, mci_sequence_2d, mrpi, MrpiOutcome, SystemSpec};
use crate::sets::{h_to_v_2d, padded_window, polygon_csv, HPolytope, Scene, Style};

/// Tolerance on the bracket bounds in the corpus comparison.
pub const TABLE_TOL: f64 = 1e-5;

/// Default number of fractional digits in CSV output.
pub const DEFAULT_PRECISION: usize = 6;

fn require_rpi(sys: &SystemSpec) -> Result<()> {
    let report = sys.structure()?;
    if !report.passes() {
        return Err(Error::Structure(report.failures().join("; ")));
    }
    Ok(())
}

pub fn cmd_csf(sys: &SystemSpec, cfg: &CsfConfig, precision: usize) -> Result<String> {
    let start = Instant::now();
    let res = csf_approx(sys, cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(format!(
        "label,M,N,k,alpha_lb,alpha_ub,eps,wall_ms\n{},{},{},{},{:.p$},{:.p$},{:e},{:.3}\n",
        sys.label,
        res.m,
        res.n,
        res.k,
        res.alpha_lb,
        res.alpha_ub,
        res.eps,
        wall_ms,
        p = precision
    ))
}

fn contact(outcome: &MrpiOutcome, sys: &SystemSpec) -> Result<Option<bool>> {
    outcome.set().map(|p| boundary_contact(p, &sys.x)).transpose()
}

fn window(sys: &SystemSpec) -> Result<[f64; 4]> {
    Ok(padded_window(&sys.x.bounding_box()?, 0.05))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn h_rep_csv(p: &HPolytope, precision: usize) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=p.dim()).map(|i| format!("h{i}")).collect();
    let _ = writeln!(out, "{},b", header.join(","));
    for (row, b) in p.h().row_iter().zip(p.b()) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.precision$e}")).collect();
        let _ = writeln!(out, "{},{b:.precision$e}", cells.join(","));
    }
    out
}

/// Status line followed by the H-representation of the resulting set.
pub fn cmd_mrpi(sys: &SystemSpec, alpha: f64, k_max: usize, svg: Option<&Path>, precision: usize) -> Result<String> {
    require_rpi(sys)?;
    let outcome = mrpi(sys, alpha, k_max)?;
    let touches = contact(&outcome, sys)?;
    let mut out = format!(
        "# label {} alpha {alpha} status {} k {} touches_boundary {}\n",
        sys.label,
        outcome.status(),
        outcome.k(),
        touches.map_or("-".to_string(), |t| t.to_string())
    );
    if let Some(p) = outcome.set() {
        out.push_str(&h_rep_csv(p, precision));
    }
    if let Some(path) = svg {
        if sys.dim() != 2 {
            return Err(Error::Unsupported(format!("SVG output needs a planar system, got R^{}", sys.dim())));
        }
        let mut scene = Scene::new();
        scene.add("X", h_to_v_2d(&sys.x)?, Style::filled("#555555", "#dddddd", 1.0));
        if let Some(p) = outcome.set() {
            scene.add("P", h_to_v_2d(p)?, Style::filled("#1f4e99", "#6f9fdf", 0.6));
        }
        write_file(path, &scene.to_svg(window(sys)?, 480))?;
    }
    Ok(out)
}

/// One CSV line per `alpha`, in input order; the runs are independent and
/// execute on separate threads.
pub fn cmd_mrpi_sweep(sys: &SystemSpec, alphas: &[f64], k_max: usize) -> Result<String> {
    require_rpi(sys)?;
    let results: Vec<Result<(MrpiOutcome, Option<bool>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = alphas
            .iter()
            .map(|&alpha| {
                s.spawn(move || {
                    let outcome = mrpi(sys, alpha, k_max)?;
                    let touches = contact(&outcome, sys)?;
                    Ok((outcome, touches))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut out = String::from("alpha,status,k,touches_boundary\n");
    for (alpha, res) in alphas.iter().zip(results) {
        let (outcome, touches) = res?;
        let _ = writeln!(
            out,
            "{alpha},{},{},{}",
            outcome.status(),
            outcome.k(),
            touches.map_or("-".to_string(), |t| t.to_string())
        );
    }
    Ok(out)
}

/// Vertices of `Q_steps`; the SVG shows `X` first, then `Q_1 ... Q_steps`
/// from outer to inner.
pub fn cmd_mci2d(sys: &SystemSpec, alpha: f64, steps: usize, svg: &Path) -> Result<String> {
    let report = sys.structure()?;
    if !report.passes_for_mci() {
        let mut why = Vec::new();
        for check in [&report.block_structure, &report.controllable] {
            if !check.passed {
                why.push(check.detail.clone());
            }
        }
        if !report.a22.stable {
            why.push(format!("A22 spectral radius {:.6} exceeds 1", report.a22.spectral_radius));
        }
        return Err(Error::Structure(why.join("; ")));
    }
    let seq = mci_sequence_2d(sys, alpha, steps)?;
    let mut scene = Scene::new();
    scene.add("X", h_to_v_2d(&sys.x)?, Style::filled("#555555", "#dddddd", 1.0));
    for (k, q) in seq.iter().enumerate().skip(1) {
        let style = if k == steps { Style::filled("#1f4e99", "#6f9fdf", 0.6) } else { Style::outline("#1f4e99").dashed() };
        scene.add(&format!("Q{k}"), h_to_v_2d(q)?, style);
    }
    write_file(svg, &scene.to_svg(window(sys)?, 480))?;
    let last = h_to_v_2d(seq.last().expect("Q_0 present"))?;
    Ok(polygon_csv(&last))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub row: usize,
    pub label: String,
    pub expected: Expected,
    pub result: std::result::Result<CsfResult, String>,
    pub wall_ms: f64,
}

impl TableRow {
    /// `M` must match; `N` must match or be off by one with both bounds
    /// still within [`TABLE_TOL`].
    pub fn passes(&self) -> bool {
        let Ok(res) = &self.result else { return false };
        let bounds = (res.alpha_lb - self.expected.alpha_lb).abs() <= TABLE_TOL
            && (res.alpha_ub - self.expected.alpha_ub).abs() <= TABLE_TOL;
        res.m == self.expected.m && res.n.abs_diff(self.expected.n) <= 1 && bounds
    }
}

/// Runs the bracketing search on every corpus row in parallel; rows come back in
/// corpus order.
pub fn table1(eps: f64) -> Result<Vec<TableRow>> {
    let entries = corpus()?;
    let cfg = CsfConfig::with_eps(eps);
    Ok(std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| {
                s.spawn(move || {
                    let start = Instant::now();
                    let result = csf_approx(&e.system, &cfg).map_err(|err| err.to_string());
                    TableRow {
                        row: e.row,
                        label: e.system.label.clone(),
                        expected: e.expected,
                        result,
                        wall_ms: start.elapsed().as_secs_f64() * 1e3,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("table worker panicked")).collect()
    }))
}

pub fn table1_csv(rows: &[TableRow], precision: usize) -> String {
    let mut out = String::from("row,label,M,N,alpha_lb,alpha_ub,expected_M,expected_N,expected_lb,expected_ub,pass\n");
    for r in rows {
        let e = &r.expected;
        let computed = match &r.result {
            Ok(res) => format!("{},{},{:.p$},{:.p$}", res.m, res.n, res.alpha_lb, res.alpha_ub, p = precision),
            Err(_) => ",,,".to_string(),
        };
        let _ = writeln!(
            out,
            "{},{},{computed},{},{},{:.6},{:.6},{}",
            r.row,
            r.label,
            e.m,
            e.n,
            e.alpha_lb,
            e.alpha_ub,
            if r.passes() { "pass" } else { "fail" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::corpus::row_source;

    #[test]
    fn scalar_mrpi_report() {
        let sys = parse_config(row_source(1).unwrap()).unwrap().system;
        let out = cmd_mrpi(&sys, 0.5, 500, None, 6).unwrap();
        assert!(out.starts_with("# label row01 alpha 0.5 status determined"));
        assert!(out.contains("touches_boundary true"));
        assert_eq!(out.lines().count(), 4);
    }

    #[test]
    fn sweep_keeps_order() {
        let sys = parse_config(row_source(1).unwrap()).unwrap().system;
        let out = cmd_mrpi_sweep(&sys, &[0.5, 0.9, 0.99, 1.01, 2.0], 500).unwrap();
        let status: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(status, ["determined", "determined", "determined", "empty", "empty"]);
    }

    #[test]
    fn row_pass_rule() {
        let expected = Expected { m: 1, n: 14, alpha_lb: 0.999961, alpha_ub: 1.000061 };
        let res = CsfResult {
            m: 1,
            n: 15,
            k: 15,
            alpha_lb: 0.999965,
            alpha_ub: 1.000065,
            eps: 1e-4,
            method: crate::csf::CsfMethod::Algorithm1,
        };
        let mut row = TableRow { row: 1, label: "r".into(), expected, result: Ok(res), wall_ms: 0.0 };
        assert!(row.passes());
        row.result = Ok(CsfResult { n: 16, ..res });
        assert!(!row.passes());
        row.result = Ok(CsfResult { alpha_ub: 1.00008, ..res });
        assert!(!row.passes());
        row.result = Err("x".into());
        assert!(!row.passes());
    }
}
