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

//! Convex sets described by an exactly computable support function.
//!
//! Every variant contains the origin. Boxes and zonotopes have closed-form
//! support functions, vertex sets are maximized by enumeration, and
//! aggregates `⊕_t M_t B_t` sum the supports of their terms, so reachable
//! sets never need to be formed explicitly.

use crate::error::{Error, Result};
use crate::lp::{lp_solve, LpOutcome, LpProblem};
use crate::matrix::{dot, norm2, Matrix};

use super::hpolytope::HPolytope;
use super::planar::{hull_2d, v_to_h_2d};

#[derive(Debug, Clone, PartialEq)]
pub enum SupportSet {
    /// Axis-aligned box `{x : |x_i| <= half_widths[i]}`.
    Box { half_widths: Vec<f64> },
    /// `{sum_i beta_i z_i : beta_i in [-1, 1]}`.
    Zonotope { dim: usize, generators: Vec<Vec<f64>> },
    /// Convex hull of `vertices`, which must contain the origin.
    VPolytope { dim: usize, vertices: Vec<Vec<f64>> },
    /// Minkowski sum of linear images `map_t * base_t`.
    Aggregate { dim: usize, terms: Vec<(Matrix, SupportSet)> },
    /// `factor * base`.
    Scaled { factor: f64, base: Box<SupportSet> },
}

impl SupportSet {
    pub fn boxed(half_widths: &[f64]) -> Result<Self> {
        if half_widths.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::NotCSet("box half-widths must be finite and non-negative".into()));
        }
        Ok(SupportSet::Box { half_widths: half_widths.to_vec() })
    }

    pub fn zonotope(dim: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != dim || g.iter().any(|v| !v.is_finite())) {
            return Err(Error::Dimension(format!("zonotope generators must have length {dim}")));
        }
        Ok(SupportSet::Zonotope { dim, generators })
    }

    /// Vertex representation; fails unless the origin lies in the hull.
    pub fn vpolytope(dim: usize, vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.is_empty() || vertices.iter().any(|v| v.len() != dim || v.iter().any(|x| !x.is_finite())) {
            return Err(Error::Dimension(format!("vertices must be non-empty with length {dim}")));
        }
        if !origin_in_hull(dim, &vertices)? {
            return Err(Error::NotCSet("origin is not in the convex hull of the vertices".into()));
        }
        Ok(SupportSet::VPolytope { dim, vertices })
    }

    pub fn aggregate(dim: usize, terms: Vec<(Matrix, SupportSet)>) -> Result<Self> {
        for (map, base) in &terms {
            if map.rows() != dim || map.cols() != base.dim() {
                return Err(Error::Dimension(format!(
                    "term map is {}x{}, expected {dim}x{}",
                    map.rows(),
                    map.cols(),
                    base.dim()
                )));
            }
        }
        Ok(SupportSet::Aggregate { dim, terms })
    }

    /// Linear image `map * self`.
    pub fn image(&self, map: &Matrix) -> Result<Self> {
        SupportSet::aggregate(map.rows(), vec![(map.clone(), self.clone())])
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Dimension(format!("scaling factor {factor} must be positive")));
        }
        Ok(SupportSet::Scaled { factor, base: Box::new(self.clone()) })
    }

    /// The singleton `{0}` in `R^dim`.
    pub fn origin(dim: usize) -> Self {
        SupportSet::Aggregate { dim, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        match self {
            SupportSet::Box { half_widths } => half_widths.len(),
            SupportSet::Zonotope { dim, .. }
            | SupportSet::VPolytope { dim, .. }
            | SupportSet::Aggregate { dim, .. } => *dim,
            SupportSet::Scaled { base, .. } => base.dim(),
        }
    }

    /// `sup { v . w : w in self }`.
    pub fn support(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim());
        match self {
            SupportSet::Box { half_widths } => v.iter().zip(half_widths).map(|(a, w)| a.abs() * w).sum(),
            SupportSet::Zonotope { generators, .. } => generators.iter().map(|z| dot(v, z).abs()).sum(),
            SupportSet::VPolytope { vertices, .. } => {
                vertices.iter().map(|x| dot(v, x)).fold(f64::NEG_INFINITY, f64::max)
            }
            SupportSet::Aggregate { terms, .. } => {
                terms.iter().map(|(map, base)| base.support(&map.vec_mul(v))).sum()
            }
            SupportSet::Scaled { factor, base } => factor * base.support(v),
        }
    }

    /// Generators when the set is a zonotope (boxes, zonotopes, and their
    /// scaled sums and linear images); `None` if a vertex set is involved.
    pub fn generators(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            SupportSet::Box { half_widths } => Some(
                half_widths
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| **w > 0.0)
                    .map(|(i, w)| {
                        let mut g = vec![0.0; half_widths.len()];
                        g[i] = *w;
                        g
                    })
                    .collect(),
            ),
            SupportSet::Zonotope { generators, .. } => Some(generators.clone()),
            SupportSet::VPolytope { .. } => None,
            SupportSet::Aggregate { terms, .. } => {
                let mut out = Vec::new();
                for (map, base) in terms {
                    out.extend(base.generators()?.iter().map(|g| map.mul_vec(g)));
                }
                Some(out)
            }
            SupportSet::Scaled { factor, base } => {
                Some(base.generators()?.into_iter().map(|g| g.iter().map(|x| x * factor).collect()).collect())
            }
        }
    }

    /// A finite point set whose convex hull is the set. For zonotopes this
    /// enumerates all sign combinations, so it is only meant for a handful
    /// of generators.
    pub fn candidate_points(&self) -> Vec<Vec<f64>> {
        match self {
            SupportSet::VPolytope { vertices, .. } => vertices.clone(),
            SupportSet::Aggregate { dim, terms } => {
                let mut acc = vec![vec![0.0; *dim]];
                for (map, base) in terms {
                    let pts: Vec<Vec<f64>> = base.candidate_points().iter().map(|p| map.mul_vec(p)).collect();
                    let mut next = Vec::with_capacity(acc.len() * pts.len());
                    for a in &acc {
                        for p in &pts {
                            next.push(a.iter().zip(p).map(|(x, y)| x + y).collect());
                        }
                    }
                    acc = prune_planar(*dim, next);
                }
                acc
            }
            SupportSet::Scaled { factor, base } => {
                base.candidate_points().into_iter().map(|p| p.iter().map(|x| x * factor).collect()).collect()
            }
            _ => {
                let gens = self.generators().unwrap_or_default();
                let mut acc = vec![vec![0.0; self.dim()]];
                for g in gens {
                    let mut next = Vec::with_capacity(acc.len() * 2);
                    for a in &acc {
                        next.push(a.iter().zip(&g).map(|(x, y)| x + y).collect());
                        next.push(a.iter().zip(&g).map(|(x, y)| x - y).collect());
                    }
                    acc = prune_planar(self.dim(), next);
                }
                acc
            }
        }
    }
}

fn prune_planar(dim: usize, points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if dim != 2 {
        return points;
    }
    let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    hull_2d(&pts).vertices().iter().map(|v| v.to_vec()).collect()
}

fn origin_in_hull(dim: usize, vertices: &[Vec<f64>]) -> Result<bool> {
    // lambda >= 0, sum lambda = 1, V lambda = 0.
    let k = vertices.len();
    let mut rows = Vec::new();
    let mut b = Vec::new();
    for i in 0..k {
        let mut r = vec![0.0; k];
        r[i] = -1.0;
        rows.push(r);
        b.push(0.0);
    }
    rows.push(vec![1.0; k]);
    b.push(1.0);
    rows.push(vec![-1.0; k]);
    b.push(-1.0);
    for d in 0..dim {
        let r: Vec<f64> = vertices.iter().map(|v| v[d]).collect();
        rows.push(r.clone());
        b.push(1e-12);
        rows.push(r.iter().map(|x| -x).collect());
        b.push(1e-12);
    }
    let h = Matrix::from_rows(&rows)?;
    Ok(!matches!(lp_solve(&LpProblem::maximize(&vec![0.0; k], &h, &b))?, LpOutcome::Infeasible))
}

/// Largest `alpha` with `alpha * s ⊆ p` for a normalized polytope
/// `p = {x : H x <= 1}`: the minimum of `1 / h_s(H_i)` over rows with
/// positive support, or infinity when `s` is invisible to every row.
pub fn max_scaling(s: &SupportSet, p: &HPolytope) -> Result<f64> {
    if !p.is_normalized() {
        return Err(Error::NotCSet("max_scaling needs a polytope with unit offsets".into()));
    }
    if s.dim() != p.dim() {
        return Err(Error::Dimension(format!("set in R^{} vs polytope in R^{}", s.dim(), p.dim())));
    }
    Ok(p.h()
        .row_iter()
        .map(|row| s.support(row))
        .filter(|h| *h > 0.0)
        .map(|h| 1.0 / h)
        .fold(f64::INFINITY, f64::min))
}

/// Exact normalized facet description `{w : H_w w <= 1}` of a box, zonotope
/// or vertex set in one to three dimensions. Three-dimensional inputs must be
/// zonotopic; their facet normals are the cross products of generator pairs.
pub fn zonotope_facets(z: &SupportSet) -> Result<HPolytope> {
    let dim = z.dim();
    match dim {
        1 => {
            let hi = z.support(&[1.0]);
            let lo = z.support(&[-1.0]);
            if hi <= 0.0 || lo <= 0.0 {
                return Err(Error::NotCSet("interval does not contain the origin in its interior".into()));
            }
            HPolytope::new(Matrix::from_rows(&[[1.0 / hi], [-1.0 / lo]])?, vec![1.0, 1.0])
        }
        2 => match z.generators() {
            Some(gens) => {
                let normals: Vec<Vec<f64>> = gens.iter().map(|g| vec![-g[1], g[0]]).collect();
                facets_from_normals(z, normals)
            }
            None => {
                let pts: Vec<[f64; 2]> = z.candidate_points().iter().map(|p| [p[0], p[1]]).collect();
                let hull = hull_2d(&pts);
                if hull.len() < 3 {
                    return Err(Error::NotCSet("planar set is not full-dimensional".into()));
                }
                let p = v_to_h_2d(&hull)?;
                if !p.is_normalized() {
                    return Err(Error::NotCSet("origin is not interior to the planar set".into()));
                }
                Ok(p)
            }
        },
        3 => {
            let gens = z.generators().ok_or_else(|| {
                Error::Unsupported("facet enumeration in R^3 needs a box or zonotope".into())
            })?;
            let mut normals = Vec::new();
            for i in 0..gens.len() {
                for j in i + 1..gens.len() {
                    let (a, b) = (&gens[i], &gens[j]);
                    normals.push(vec![
                        a[1] * b[2] - a[2] * b[1],
                        a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0],
                    ]);
                }
            }
            facets_from_normals(z, normals)
        }
        _ => Err(Error::Unsupported(format!("facet enumeration in R^{dim}"))),
    }
}

fn facets_from_normals(z: &SupportSet, normals: Vec<Vec<f64>>) -> Result<HPolytope> {
    let mut unit: Vec<Vec<f64>> = Vec::new();
    for n in normals {
        let len = norm2(&n);
        if len <= 1e-12 {
            continue;
        }
        let n: Vec<f64> = n.iter().map(|x| x / len).collect();
        // Parallel generators give the same facet pair.
        let dup = unit.iter().any(|u| (dot(u, &n).abs() - 1.0).abs() < 1e-12);
        if !dup {
            unit.push(n);
        }
    }
    if unit.len() < z.dim() {
        return Err(Error::NotCSet("zonotope is not full-dimensional".into()));
    }
    let mut rows = Vec::with_capacity(2 * unit.len());
    for n in unit {
        for sign in [1.0, -1.0] {
            let dir: Vec<f64> = n.iter().map(|x| sign * x).collect();
            let h = z.support(&dir);
            if h <= 1e-12 {
                return Err(Error::NotCSet("zonotope is not full-dimensional".into()));
            }
            rows.push(dir.iter().map(|x| x / h).collect::<Vec<f64>>());
        }
    }
    let b = vec![1.0; rows.len()];
    HPolytope::new(Matrix::from_rows(&rows)?, b)
}
