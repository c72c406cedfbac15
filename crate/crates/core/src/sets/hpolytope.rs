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

//! Half-space polytopes `{x : H x <= b}`.

use crate::error::{Error, Result};
use crate::lp::{is_feasible, is_redundant, lp_solve, select_rows, LpOutcome, LpProblem};
use crate::matrix::{norm2, Matrix, DEFAULT_TOL};

use super::support::SupportSet;

/// Rows whose largest entry is below this are treated as zero.
pub const ZERO_ROW_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    h: Matrix,
    b: Vec<f64>,
}

impl HPolytope {
    pub fn new(h: Matrix, b: Vec<f64>) -> Result<Self> {
        if h.rows() != b.len() {
            return Err(Error::Dimension(format!("H has {} rows but b has {}", h.rows(), b.len())));
        }
        if let Some(i) = b.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: h.cols() });
        }
        Ok(HPolytope { h, b })
    }

    /// A C-set given by `H x <= b` with `b > 0`, returned with unit offsets.
    pub fn c_set(h: Matrix, b: Vec<f64>) -> Result<Self> {
        let p = HPolytope::new(h, b)?;
        let p = p.normalized()?;
        for (i, row) in p.h.row_iter().enumerate() {
            if row.iter().all(|v| v.abs() <= ZERO_ROW_TOL) {
                return Err(Error::NotCSet(format!("row {i} is zero")));
            }
        }
        let n = p.dim();
        for j in 0..n {
            for sign in [1.0, -1.0] {
                let mut v = vec![0.0; n];
                v[j] = sign;
                p.support(&v)?;
            }
        }
        Ok(p)
    }

    /// `{x : |x_i| <= half_widths[i]}`, normalized.
    pub fn from_box(half_widths: &[f64]) -> Result<Self> {
        let lo: Vec<f64> = half_widths.iter().map(|w| -w).collect();
        HPolytope::from_bounds(&lo, half_widths)
    }

    /// `{x : lo <= x <= hi}`, normalized; needs `lo < 0 < hi`.
    pub fn from_bounds(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let n = lo.len();
        if hi.len() != n {
            return Err(Error::Dimension("bound vectors differ in length".into()));
        }
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..n {
            if !(lo[i] < 0.0 && hi[i] > 0.0) {
                return Err(Error::NotCSet(format!("bounds [{}, {}] must straddle zero", lo[i], hi[i])));
            }
            let mut up = vec![0.0; n];
            up[i] = 1.0 / hi[i];
            let mut down = vec![0.0; n];
            down[i] = 1.0 / lo[i];
            rows.push(up);
            rows.push(down);
        }
        HPolytope::new(Matrix::from_rows(&rows)?, vec![1.0; 2 * n])
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.h.cols()
    }

    pub fn n_rows(&self) -> usize {
        self.h.rows()
    }

    pub fn is_normalized(&self) -> bool {
        self.b.iter().all(|v| *v == 1.0)
    }

    /// Divide each row by its (positive) offset.
    pub fn normalized(&self) -> Result<Self> {
        let mut rows = Vec::with_capacity(self.n_rows());
        for (i, row) in self.h.row_iter().enumerate() {
            let bi = self.b[i];
            if !(bi > 0.0) {
                return Err(Error::NotCSet(format!("offset {i} is {bi}, expected positive")));
            }
            rows.push(row.iter().map(|v| v / bi).collect::<Vec<f64>>());
        }
        HPolytope::new(rows_matrix(rows, self.dim())?, vec![1.0; self.n_rows()])
    }

    /// `beta * P`.
    pub fn scale(&self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Dimension(format!("scale factor {beta} must be positive")));
        }
        HPolytope::new(self.h.clone(), self.b.iter().map(|v| v * beta).collect())
    }

    pub fn is_feasible(&self) -> Result<bool> {
        is_feasible(&self.h, &self.b)
    }

    /// `max v . x` over the polytope.
    pub fn support(&self, v: &[f64]) -> Result<f64> {
        match lp_solve(&LpProblem::maximize(v, &self.h, &self.b))? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Infeasible => Err(Error::EmptySet),
            LpOutcome::Unbounded => Err(Error::UnboundedSupport),
        }
    }

    pub fn contains_point(&self, x: &[f64], tol: f64) -> bool {
        self.h
            .row_iter()
            .zip(&self.b)
            .all(|(row, bi)| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() <= bi + tol)
    }

    /// `(lo, hi)` per coordinate.
    pub fn bounding_box(&self) -> Result<Vec<(f64, f64)>> {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let mut v = vec![0.0; n];
                v[j] = 1.0;
                let hi = self.support(&v)?;
                v[j] = -1.0;
                let lo = -self.support(&v)?;
                Ok((lo, hi))
            })
            .collect()
    }

    /// `P ⊖ S = {x : H x <= b - h_S(H_i)}`.
    pub fn pontryagin_diff(&self, s: &SupportSet) -> Result<Self> {
        if s.dim() != self.dim() {
            return Err(Error::Dimension(format!("set in R^{} vs polytope in R^{}", s.dim(), self.dim())));
        }
        let b = self.h.row_iter().zip(&self.b).map(|(row, bi)| bi - s.support(row)).collect();
        HPolytope::new(self.h.clone(), b)
    }

    /// `{x : m x in P} = {x : H m x <= b}`. Rows that vanish are dropped
    /// when their offset is non-negative (up to the default tolerance) and
    /// kept otherwise, which leaves an infeasible description.
    pub fn preimage(&self, m: &Matrix) -> Result<Self> {
        let hm = self.h.mul(m)?;
        let mut rows = Vec::with_capacity(hm.rows());
        let mut b = Vec::with_capacity(hm.rows());
        for (row, bi) in hm.row_iter().zip(&self.b) {
            if row.iter().all(|v| v.abs() <= ZERO_ROW_TOL) {
                if *bi >= -DEFAULT_TOL {
                    continue;
                }
                rows.push(vec![0.0; row.len()]);
                b.push(*bi);
                continue;
            }
            rows.push(row.to_vec());
            b.push(*bi);
        }
        HPolytope::new(rows_matrix(rows, m.cols())?, b)
    }

    /// Stacked description of `P ∩ Q`.
    pub fn intersect(&self, other: &HPolytope) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::Dimension(format!("R^{} vs R^{}", self.dim(), other.dim())));
        }
        let mut rows = self.h.to_rows();
        rows.extend(other.h.to_rows());
        let mut b = self.b.clone();
        b.extend_from_slice(&other.b);
        HPolytope::new(rows_matrix(rows, self.dim())?, b)
    }

    /// Remove rows implied by the others. Fails with `EmptySet` when the
    /// description is infeasible.
    pub fn reduce(&self) -> Result<Self> {
        let n = self.dim();
        let mut rows = Vec::new();
        let mut b = Vec::new();
        for (row, bi) in self.h.row_iter().zip(&self.b) {
            let len = norm2(row);
            if len <= ZERO_ROW_TOL {
                if *bi < -DEFAULT_TOL {
                    return Err(Error::EmptySet);
                }
                continue;
            }
            rows.push((row.to_vec(), *bi, len));
        }
        // Redundancy is judged on unit-norm rows so the tolerance is geometric.
        let unit: Vec<Vec<f64>> = rows.iter().map(|(r, _, l)| r.iter().map(|v| v / l).collect()).collect();
        let ub: Vec<f64> = rows.iter().map(|(_, bi, l)| bi / l).collect();
        let unit_h = rows_matrix(unit, n)?;
        if !is_feasible(&unit_h, &ub)? {
            return Err(Error::EmptySet);
        }
        let mut keep: Vec<usize> = (0..rows.len()).collect();
        let mut idx = 0;
        while idx < keep.len() {
            let (sub, sub_b) = select_rows(&unit_h, &ub, &keep);
            if is_redundant(&sub, &sub_b, idx)? {
                keep.remove(idx);
            } else {
                idx += 1;
            }
        }
        for &i in &keep {
            b.push(rows[i].1);
        }
        let kept = keep.iter().map(|&i| rows[i].0.clone()).collect();
        HPolytope::new(rows_matrix(kept, n)?, b)
    }

    /// `inner ⊆ self`, with the comparison made on unit-norm rows.
    pub fn contains_tol(&self, inner: &HPolytope, tol: f64) -> Result<bool> {
        if !inner.is_feasible()? {
            return Ok(true);
        }
        for (row, bi) in self.h.row_iter().zip(&self.b) {
            let len = norm2(row);
            if len <= ZERO_ROW_TOL {
                if *bi < -tol {
                    return Ok(false);
                }
                continue;
            }
            let h = match inner.support(row) {
                Ok(h) => h,
                Err(Error::UnboundedSupport) => return Ok(false),
                Err(e) => return Err(e),
            };
            if (h - bi) / len > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains(&self, inner: &HPolytope) -> Result<bool> {
        self.contains_tol(inner, DEFAULT_TOL)
    }

    /// Keep the columns of the first `r` coordinates, drop rows that vanish
    /// and remove redundancy. For a normalized C-set this is
    /// `{x1 : (x1, 0) in P}`.
    pub fn project_controllable(&self, r: usize) -> Result<Self> {
        let n = self.dim();
        if r == 0 || r > n {
            return Err(Error::Dimension(format!("controllable dimension {r} outside 1..={n}")));
        }
        if r == n {
            return Ok(self.clone());
        }
        let mut rows = Vec::new();
        let mut b = Vec::new();
        for (row, bi) in self.h.row_iter().zip(&self.b) {
            let head = &row[..r];
            if head.iter().all(|v| v.abs() <= ZERO_ROW_TOL) {
                continue;
            }
            rows.push(head.to_vec());
            b.push(*bi);
        }
        HPolytope::new(rows_matrix(rows, r)?, b)?.reduce()
    }
}

fn rows_matrix(rows: Vec<Vec<f64>>, cols: usize) -> Result<Matrix> {
    let data: Vec<f64> = rows.iter().flatten().copied().collect();
    Matrix::new(rows.len(), cols, data)
}
