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

//! TOML system descriptions.
//!
//! ```toml
//! label = "scalar"
//! r = 1
//! A = [[0.5]]
//! E = [[1.0]]
//!
//! [X]
//! box = [2.0]
//!
//! [D]
//! box = [1.0]
//! ```
//!
//! `X` stacks every form it is given (`H`/`b`, `box`, `lo`/`hi`, `rows`,
//! `gains`) and is normalized to unit offsets. `D` takes exactly one of
//! `box`, `vrep` or `zonotope` (generators as rows).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::SystemSpec;
use crate::matrix::Matrix;
use crate::sets::{HPolytope, SupportSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub m: usize,
    pub n: usize,
    pub alpha_lb: f64,
    pub alpha_ub: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemSpec,
    /// Reference values, present in corpus files.
    pub expected: Option<Expected>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    label: String,
    r: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "E")]
    e: Vec<Vec<f64>>,
    #[serde(rename = "X")]
    x: RawX,
    #[serde(rename = "D")]
    d: RawD,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<Expected>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawX {
    #[serde(rename = "H", skip_serializing_if = "Option::is_none")]
    h: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<Vec<f64>>,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    half_widths: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lo: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    rows: Vec<RawRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    gains: Vec<RawGain>,
}

/// `lo <= c . x <= hi`; either side may be omitted.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    c: Vec<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
}

/// `|k . x| <= bound`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGain {
    k: Vec<f64>,
    bound: f64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawD {
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    half_widths: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vrep: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zonotope: Option<Vec<Vec<f64>>>,
}

fn cfg_err(field: &str, err: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {err}"))
}

fn matrix(field: &str, rows: &[Vec<f64>]) -> Result<Matrix> {
    if rows.is_empty() {
        return Err(cfg_err(field, "matrix has no rows"));
    }
    Matrix::from_rows(rows).map_err(|e| cfg_err(field, e))
}

fn check_len(field: &str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(cfg_err(field, format!("expected {n} entries, got {}", v.len())));
    }
    Ok(())
}

fn build_x(raw: &RawX, n: usize) -> Result<HPolytope> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut b = Vec::new();
    let mut bounded = |field: &str, c: &[f64], lo: Option<f64>, hi: Option<f64>| -> Result<()> {
        check_len(field, c, n)?;
        if let Some(hi) = hi {
            rows.push(c.to_vec());
            b.push(hi);
        }
        if let Some(lo) = lo {
            rows.push(c.iter().map(|v| -v).collect());
            b.push(-lo);
        }
        Ok(())
    };
    match (&raw.h, &raw.b) {
        (Some(h), Some(hb)) => {
            if h.len() != hb.len() {
                return Err(cfg_err("X.H", format!("{} rows but X.b has {}", h.len(), hb.len())));
            }
            for (i, (row, bi)) in h.iter().zip(hb).enumerate() {
                bounded(&format!("X.H[{i}]"), row, None, Some(*bi))?;
            }
        }
        (None, None) => {}
        _ => return Err(cfg_err("X", "H and b must be given together")),
    }
    if let Some(w) = &raw.half_widths {
        check_len("X.box", w, n)?;
        for (i, wi) in w.iter().enumerate() {
            let mut c = vec![0.0; n];
            c[i] = 1.0;
            bounded("X.box", &c, Some(-wi), Some(*wi))?;
        }
    }
    match (&raw.lo, &raw.hi) {
        (Some(lo), Some(hi)) => {
            check_len("X.lo", lo, n)?;
            check_len("X.hi", hi, n)?;
            for i in 0..n {
                let mut c = vec![0.0; n];
                c[i] = 1.0;
                bounded("X.lo", &c, Some(lo[i]), Some(hi[i]))?;
            }
        }
        (None, None) => {}
        _ => return Err(cfg_err("X", "lo and hi must be given together")),
    }
    for (i, row) in raw.rows.iter().enumerate() {
        if row.lo.is_none() && row.hi.is_none() {
            return Err(cfg_err(&format!("X.rows[{i}]"), "needs lo, hi or both"));
        }
        bounded(&format!("X.rows[{i}]"), &row.c, row.lo, row.hi)?;
    }
    for (i, g) in raw.gains.iter().enumerate() {
        bounded(&format!("X.gains[{i}]"), &g.k, Some(-g.bound), Some(g.bound))?;
    }
    if rows.is_empty() {
        return Err(cfg_err("X", "no constraints given"));
    }
    if let Some(i) = b.iter().position(|bi| !(*bi > 0.0)) {
        return Err(cfg_err("X", format!("constraint {i} has offset {} so the origin is not interior", b[i])));
    }
    let h = matrix("X", &rows)?;
    HPolytope::c_set(h, b).map_err(|e| cfg_err("X", e))
}

fn build_d(raw: &RawD) -> Result<SupportSet> {
    let given = [raw.half_widths.is_some(), raw.vrep.is_some(), raw.zonotope.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(cfg_err("D", "give exactly one of box, vrep, zonotope"));
    }
    if let Some(w) = &raw.half_widths {
        return SupportSet::boxed(w).map_err(|e| cfg_err("D.box", e));
    }
    if let Some(v) = &raw.vrep {
        let dim = v.first().map_or(0, Vec::len);
        return SupportSet::vpolytope(dim, v.clone()).map_err(|e| cfg_err("D.vrep", e));
    }
    let g = raw.zonotope.as_ref().expect("one form present");
    let dim = g.first().map_or(0, Vec::len);
    SupportSet::zonotope(dim, g.clone()).map_err(|e| cfg_err("D.zonotope", e))
}

/// Parse and validate a system. Shapes, the C-set property of `X`, the
/// block structure and controllability are checked here; stability is
/// left to the commands since the controlled-invariance iteration accepts
/// marginally stable systems.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let a = matrix("A", &raw.a)?;
    let e = matrix("E", &raw.e)?;
    let x = build_x(&raw.x, a.rows())?;
    let d = build_d(&raw.d)?;
    let system = SystemSpec::new(&raw.label, a, e, raw.r, x, d).map_err(|e| Error::Config(e.to_string()))?;
    let report = system.structure().map_err(|e| Error::Config(e.to_string()))?;
    if !report.structure_ok() {
        let mut why = Vec::new();
        for check in [&report.block_structure, &report.controllable] {
            if !check.passed {
                why.push(check.detail.clone());
            }
        }
        return Err(Error::Config(why.join("; ")));
    }
    Ok(RunConfig { system, expected: raw.expected })
}

pub fn load_config(path: &std::path::Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Serialize a system with `X` in `H`/`b` form.
pub fn emit_config(sys: &SystemSpec) -> Result<String> {
    let d = match &sys.d {
        SupportSet::Box { half_widths } => RawD { half_widths: Some(half_widths.clone()), ..RawD::default() },
        SupportSet::Zonotope { generators, .. } => RawD { zonotope: Some(generators.clone()), ..RawD::default() },
        SupportSet::VPolytope { vertices, .. } => RawD { vrep: Some(vertices.clone()), ..RawD::default() },
        other => match other.generators() {
            Some(g) => RawD { zonotope: Some(g), ..RawD::default() },
            None => RawD { vrep: Some(other.candidate_points()), ..RawD::default() },
        },
    };
    let raw = RawConfig {
        label: sys.label.clone(),
        r: sys.r,
        a: sys.a.to_rows(),
        e: sys.e.to_rows(),
        x: RawX { h: Some(sys.x.h().to_rows()), b: Some(sys.x.b().to_vec()), ..RawX::default() },
        d,
        expected: None,
    };
    toml::to_string(&raw).map_err(|e| Error::Config(e.to_string()))
}
