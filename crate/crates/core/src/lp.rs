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

//! Small dense linear programs over `{x : H x <= b}` with free variables.
//!
//! Two-phase tableau simplex with Bland's rule. The free vector is split as
//! `x = u - v` with `u, v >= 0`, every row gets a slack, and rows with a
//! negative right-hand side start from an artificial variable.

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
/// Hard cap on simplex pivots (both phases together).
pub const MAX_PIVOTS: usize = 10_000;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub h: Matrix,
    pub b: Vec<f64>,
    pub sense: Sense,
}

impl LpProblem {
    pub fn maximize(objective: &[f64], h: &Matrix, b: &[f64]) -> Self {
        Self { objective: objective.to_vec(), h: h.clone(), b: b.to_vec(), sense: Sense::Maximize }
    }

    pub fn minimize(objective: &[f64], h: &Matrix, b: &[f64]) -> Self {
        Self { objective: objective.to_vec(), h: h.clone(), b: b.to_vec(), sense: Sense::Minimize }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

pub fn lp_solve(problem: &LpProblem) -> Result<LpOutcome> {
    let LpProblem { objective, h, b, sense } = problem;
    if h.rows() != b.len() || h.cols() != objective.len() {
        return Err(Error::Dimension(format!(
            "LP with {}x{} constraints, {} offsets and {} objective entries",
            h.rows(),
            h.cols(),
            b.len(),
            objective.len()
        )));
    }
    if objective.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Dimension("non-finite LP data".into()));
    }
    let sign = match sense {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let c: Vec<f64> = objective.iter().map(|v| sign * v).collect();
    let mut tableau = Tableau::new(h, b);
    let outcome = tableau.solve(&c)?;
    Ok(match outcome {
        LpOutcome::Optimal { point, .. } => {
            let value = dot(objective, &point);
            LpOutcome::Optimal { point, value }
        }
        other => other,
    })
}

/// Phase-one feasibility of `{x : H x <= b}`.
pub fn is_feasible(h: &Matrix, b: &[f64]) -> Result<bool> {
    let zero = vec![0.0; h.cols()];
    Ok(!matches!(lp_solve(&LpProblem::maximize(&zero, h, b))?, LpOutcome::Infeasible))
}

/// Whether row `i` can be dropped without changing `{x : H x <= b}`.
/// An unbounded objective over the remaining rows counts as not redundant.
pub fn is_redundant(h: &Matrix, b: &[f64], i: usize) -> Result<bool> {
    let keep: Vec<usize> = (0..h.rows()).filter(|&k| k != i).collect();
    let (rest_h, rest_b) = select_rows(h, b, &keep);
    match lp_solve(&LpProblem::maximize(h.row(i), &rest_h, &rest_b))? {
        LpOutcome::Optimal { value, .. } => Ok(value <= b[i] + FEAS_TOL),
        LpOutcome::Unbounded => Ok(false),
        // Remaining rows already empty: dropping row i keeps the set empty.
        LpOutcome::Infeasible => Ok(true),
    }
}

pub(crate) fn select_rows(h: &Matrix, b: &[f64], keep: &[usize]) -> (Matrix, Vec<f64>) {
    let mut data = Vec::with_capacity(keep.len() * h.cols());
    for &k in keep {
        data.extend_from_slice(h.row(k));
    }
    let m = Matrix::new(keep.len(), h.cols(), data).expect("rows of a valid matrix");
    (m, keep.iter().map(|&k| b[k]).collect())
}

struct Tableau {
    /// m rows of `width` coefficients followed by the right-hand side.
    t: Vec<f64>,
    m: usize,
    /// Number of structural variables (`p` in `x = u - v`).
    p: usize,
    /// Total columns excluding rhs.
    width: usize,
    /// First artificial column.
    art_start: usize,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn new(h: &Matrix, b: &[f64]) -> Self {
        let (m, p) = (h.rows(), h.cols());
        let n_art = b.iter().filter(|v| **v < 0.0).count();
        let art_start = 2 * p + m;
        let width = art_start + n_art;
        let stride = width + 1;
        let mut t = vec![0.0; m * stride];
        let mut basis = vec![0; m];
        let mut next_art = art_start;
        for i in 0..m {
            let sgn = if b[i] < 0.0 { -1.0 } else { 1.0 };
            let row = &mut t[i * stride..(i + 1) * stride];
            for (j, hij) in h.row(i).iter().enumerate() {
                row[j] = sgn * hij;
                row[p + j] = -sgn * hij;
            }
            row[2 * p + i] = sgn;
            row[width] = sgn * b[i];
            if b[i] < 0.0 {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            } else {
                basis[i] = 2 * p + i;
            }
        }
        Self { t, m, p, width, art_start, basis, pivots: 0 }
    }

    fn stride(&self) -> usize {
        self.width + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.stride() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width)
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > MAX_PIVOTS {
            return Err(Error::IterationLimit { pivots: MAX_PIVOTS });
        }
        let stride = self.stride();
        let p = self.at(row, col);
        for v in &mut self.t[row * stride..(row + 1) * stride] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.t[row * stride..(row + 1) * stride].to_vec();
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.t[i * stride + col];
            if f == 0.0 {
                continue;
            }
            let dst = &mut self.t[i * stride..(i + 1) * stride];
            for (d, s) in dst.iter_mut().zip(&pivot_row) {
                *d -= f * s;
            }
            dst[col] = 0.0;
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Reduced costs of `cost` (maximization) for the current basis.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                *dj -= cb * self.at(i, j);
            }
        }
        d
    }

    /// Maximizes `cost` over columns `< allowed`; returns false when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<bool> {
        loop {
            let d = self.reduced_costs(cost);
            // Bland: lowest-index improving column.
            let Some(enter) = (0..allowed).find(|&j| d[j] > COST_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, enter);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                        if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match leave {
                Some((row, _)) => self.pivot(row, enter)?,
                None => return Ok(false),
            }
        }
    }

    fn solve(&mut self, c: &[f64]) -> Result<LpOutcome> {
        let width = self.width;
        if self.art_start < width {
            let mut phase1 = vec![0.0; width];
            for v in &mut phase1[self.art_start..] {
                *v = -1.0;
            }
            self.optimize(&phase1, width)?;
            let infeasibility: f64 = (0..self.m)
                .filter(|&i| self.basis[i] >= self.art_start)
                .map(|i| self.rhs(i).max(0.0))
                .sum();
            if infeasibility > FEAS_TOL {
                return Ok(LpOutcome::Infeasible);
            }
            self.drive_out_artificials()?;
        }

        let mut cost = vec![0.0; width];
        for (j, cj) in c.iter().enumerate() {
            cost[j] = *cj;
            cost[self.p + j] = -cj;
        }
        if !self.optimize(&cost, self.art_start)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut point = vec![0.0; self.p];
        for i in 0..self.m {
            let var = self.basis[i];
            let val = self.rhs(i);
            if var < self.p {
                point[var] += val;
            } else if var < 2 * self.p {
                point[var - self.p] -= val;
            }
        }
        Ok(LpOutcome::Optimal { value: dot(c, &point), point })
    }

    fn drive_out_artificials(&mut self) -> Result<()> {
        for i in 0..self.m {
            if self.basis[i] < self.art_start {
                continue;
            }
            let col = (0..self.art_start)
                .filter(|&j| self.at(i, j).abs() > 1e-9)
                .max_by(|&a, &b| self.at(i, a).abs().total_cmp(&self.at(i, b).abs()));
            if let Some(col) = col {
                self.pivot(i, col)?;
            }
            // Otherwise the row is linearly dependent; its artificial stays
            // basic at zero and never re-enters.
        }
        Ok(())
    }
}
