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

//! Dense real matrices at desk scale, together with the spectral and
//! structural checks that gate every invariant-set computation.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for rank, structure and stability decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

const ROOT_RESIDUAL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 500;

/// Dense real matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape { rows, cols, len: data.len() });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: pos / cols.max(1), col: pos % cols.max(1) });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn column(values: &[f64]) -> Self {
        Self { rows: values.len(), cols: 1, data: values.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.row_iter().map(<[f64]>::to_vec).collect()
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let src = rhs.row(k);
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    /// `self^j` with `self^0 = I`, by repeated squaring.
    pub fn pow(&self, j: usize) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = j;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Row vector times matrix, `v * self`.
    pub fn vec_mul(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            if *vi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += vi * a;
            }
        }
        out
    }

    /// Matrix times column vector, `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        self.row_iter().map(|r| dot(r, x)).collect()
    }

    /// Sub-block with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j));
            }
        }
        out
    }

    /// Horizontal concatenation `[self, rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot stack {} rows next to {} rows",
                self.rows, rhs.rows
            )));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + rhs.cols));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Ok(Matrix { rows: self.rows, cols: self.cols + rhs.cols, data })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Numerical rank by Gaussian elimination with partial pivoting. Pivots
    /// below `tol` times the largest entry of the input count as zero.
    pub fn rank(&self, tol: f64) -> usize {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0;
        }
        let threshold = tol * scale;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let (pivot_row, pivot) = (rank..m.rows)
                .map(|i| (i, m.get(i, col).abs()))
                .fold((rank, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= threshold {
                continue;
            }
            m.swap_rows(rank, pivot_row);
            let p = m.get(rank, col);
            for i in rank + 1..m.rows {
                let factor = m.get(i, col) / p;
                if factor == 0.0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(i, j) - factor * m.get(rank, j);
                    m.set(i, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Inverse by Gauss-Jordan elimination; `None` when numerically singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(n)).ok()?;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (pr, pv) = (col..n)
                .map(|i| (i, aug.get(i, col).abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pv <= 1e-14 * scale {
                return None;
            }
            aug.swap_rows(col, pr);
            let p = aug.get(col, col);
            for j in 0..2 * n {
                aug.set(col, j, aug.get(col, j) / p);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = aug.get(i, col);
                if f == 0.0 {
                    continue;
                }
                for j in 0..2 * n {
                    let v = aug.get(i, j) - f * aug.get(col, j);
                    aug.set(i, j, v);
                }
            }
        }
        Some(aug.block(0, n, n, 2 * n))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Coefficients `c_0..c_n` of the monic characteristic polynomial
    /// `det(zI - A) = sum c_k z^k`, via Faddeev-LeVerrier.
    pub fn characteristic_polynomial(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m)?;
            for i in 0..n {
                let v = next.get(i, i) + coeffs[n - k + 1];
                next.set(i, i, v);
            }
            m = next;
            coeffs[n - k] = -self.mul(&m)?.trace() / k as f64;
        }
        Ok(coeffs)
    }

    /// All eigenvalues, from the characteristic polynomial.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let coeffs = self.characteristic_polynomial()?;
        polynomial_roots(&coeffs)
    }

    /// Eigenvalue magnitudes and the derived stability flags.
    pub fn eigen_magnitudes(&self, tol: f64) -> Result<StabilityReport> {
        let mut magnitudes: Vec<f64> = self.eigenvalues()?.iter().map(|z| z.norm()).collect();
        magnitudes.sort_by(|a, b| a.total_cmp(b));
        Ok(StabilityReport::from_magnitudes(magnitudes, tol))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.to_rows())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Projection onto the first `r` coordinates, `(I_r 0)`.
pub fn leading_projection(r: usize, n: usize) -> Matrix {
    let mut p = Matrix::zeros(r, n);
    for i in 0..r {
        p.set(i, i, 1.0);
    }
    p
}

/// Projection onto the last `n - r` coordinates, `(0 I_{n-r})`.
pub fn trailing_projection(r: usize, n: usize) -> Matrix {
    let mut p = Matrix::zeros(n - r, n);
    for i in 0..n - r {
        p.set(i, r + i, 1.0);
    }
    p
}

/// Roots of `sum c_k z^k` (coefficients lowest degree first, leading
/// coefficient nonzero) by Durand-Kerner simultaneous iteration. Exact zero
/// roots are deflated first.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len().saturating_sub(1);
    let lead = coeffs[degree];
    let zeros = coeffs.iter().take_while(|c| **c == 0.0).count().min(degree);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let poly: Vec<f64> = coeffs[zeros..].iter().map(|c| c / lead).collect();
    let deg = poly.len() - 1;
    if deg == 0 {
        return Ok(roots);
    }
    if deg == 1 {
        roots.push(Complex64::new(-poly[0], 0.0));
        return Ok(roots);
    }

    let eval = |z: Complex64| poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    // Cauchy bound keeps the initial circle around all roots.
    let radius = 1.0 + poly[..deg].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / deg as f64))
        .collect();

    let residual = |z: &[Complex64]| z.iter().map(|zi| eval(*zi).norm()).fold(0.0, f64::max);
    let mut best = residual(&z);
    for _ in 0..ROOT_MAX_ITER {
        if best < ROOT_RESIDUAL {
            break;
        }
        let mut max_step = 0.0_f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        best = residual(&z);
        if max_step < 1e-16 * radius {
            break;
        }
    }
    if best >= ROOT_RESIDUAL && !(best < 1e-9 && converged_cluster(&z, &poly)) {
        return Err(Error::RootFinder { residual: best });
    }
    roots.extend(z);
    Ok(roots)
}

// Multiple roots converge only linearly and their residual bottoms out near
// machine precision; accept when the residual is small relative to the
// polynomial's scale.
fn converged_cluster(z: &[Complex64], poly: &[f64]) -> bool {
    let scale: f64 = poly.iter().map(|c| c.abs()).sum();
    z.iter().all(|zi| {
        let r = zi.norm().max(1.0).powi(poly.len() as i32 - 1);
        let val = poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * zi + c);
        val.norm() <= 1e-9 * scale * r
    })
}

/// Spectral summary of a square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub spectral_radius: f64,
    /// Sorted ascending.
    pub eigenvalue_magnitudes: Vec<f64>,
    /// All magnitudes below `1 - tol`.
    pub strictly_stable: bool,
    /// All magnitudes at most `1 + tol`.
    pub stable: bool,
}

impl StabilityReport {
    fn from_magnitudes(eigenvalue_magnitudes: Vec<f64>, tol: f64) -> Self {
        let spectral_radius = eigenvalue_magnitudes.iter().copied().fold(0.0, f64::max);
        Self {
            spectral_radius,
            strictly_stable: spectral_radius < 1.0 - tol,
            stable: spectral_radius <= 1.0 + tol,
            eigenvalue_magnitudes,
        }
    }

    /// Report for an empty (0x0) block, which is vacuously stable.
    fn vacuous() -> Self {
        Self::from_magnitudes(Vec::new(), DEFAULT_TOL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

/// Outcome of the staircase-structure, controllability and stability checks
/// on `(A, E, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub block_structure: Check,
    pub controllable: Check,
    pub a11: StabilityReport,
    pub a22: StabilityReport,
}

impl StructureReport {
    /// Block structure plus controllability of `(A11, E1)`.
    pub fn structure_ok(&self) -> bool {
        self.block_structure.passed && self.controllable.passed
    }

    /// Both diagonal blocks strictly stable.
    pub fn strictly_stable(&self) -> bool {
        self.a11.strictly_stable && self.a22.strictly_stable
    }

    /// Everything needed by the RPI computations.
    pub fn passes(&self) -> bool {
        self.structure_ok() && self.strictly_stable()
    }

    /// Everything needed by the controlled-invariance iteration: structure and
    /// a (not necessarily strictly) stable `A22`.
    pub fn passes_for_mci(&self) -> bool {
        self.structure_ok() && self.a22.stable
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.block_structure.passed {
            out.push(self.block_structure.detail.clone());
        }
        if !self.controllable.passed {
            out.push(self.controllable.detail.clone());
        }
        if !self.a11.strictly_stable {
            out.push(format!("A11 spectral radius {:.6} is not below 1", self.a11.spectral_radius));
        }
        if !self.a22.strictly_stable {
            out.push(format!("A22 spectral radius {:.6} is not below 1", self.a22.spectral_radius));
        }
        out
    }
}

/// Checks that `A = [A11 A12; 0 A22]`, `E = [E1; 0]` with `A11` of size
/// `r`, that `(A11, E1)` is controllable, and reports the spectra of both
/// diagonal blocks.
pub fn verify_structure(a: &Matrix, e: &Matrix, r: usize, tol: f64) -> Result<StructureReport> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if e.rows() != n {
        return Err(Error::Dimension(format!("E has {} rows, A is {n}x{n}", e.rows())));
    }
    if r == 0 || r > n {
        return Err(Error::Dimension(format!("r = {r} outside 1..={n}")));
    }

    let scale = a.max_abs().max(e.max_abs()).max(1.0);
    let lower_left = a.block(r, n, 0, r);
    let lower_e = e.block(r, n, 0, e.cols());
    let off = lower_left.max_abs().max(lower_e.max_abs());
    let block_structure = Check::new(
        off <= tol * scale,
        if off <= tol * scale {
            "staircase structure holds".to_string()
        } else {
            format!("lower-left block of A or lower block of E has entry of size {off:e}")
        },
    );

    let a11 = a.block(0, r, 0, r);
    let e1 = e.block(0, r, 0, e.cols());
    let gamma = controllability_matrix(&a11, &e1, r)?;
    let rk = gamma.rank(tol);
    let controllable = Check::new(
        rk == r,
        if rk == r {
            "(A11, E1) controllable".to_string()
        } else {
            format!("controllability matrix has rank {rk} < {r}")
        },
    );

    let a22 = a.block(r, n, r, n);
    let a11_report = a11.eigen_magnitudes(tol)?;
    let a22_report = if n == r { StabilityReport::vacuous() } else { a22.eigen_magnitudes(tol)? };
    Ok(StructureReport { block_structure, controllable, a11: a11_report, a22: a22_report })
}

/// `[E1, A11 E1, ..., A11^{blocks-1} E1]`.
pub fn controllability_matrix(a11: &Matrix, e1: &Matrix, blocks: usize) -> Result<Matrix> {
    let mut gamma = e1.clone();
    let mut term = e1.clone();
    for _ in 1..blocks {
        term = a11.mul(&term)?;
        gamma = gamma.hstack(&term)?;
    }
    Ok(gamma)
}
