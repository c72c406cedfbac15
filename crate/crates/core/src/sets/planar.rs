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

//! Planar polygons: hulls, vertex/facet conversion and Minkowski sums.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

use super::hpolytope::HPolytope;

/// Convex polygon with counter-clockwise vertices and no repeated or
/// collinear points. Degenerate hulls (a segment or a point) have fewer
/// than three vertices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

impl Polygon {
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
                p[0] * q[1] - p[1] * q[0]
            })
            .sum::<f64>()
            / 2.0
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain. Points closer than a relative `1e-12` are
/// merged, and vertices within that distance of the chord between their
/// neighbours are dropped afterwards.
///
/// The chain itself uses the exact sign of the turn: with a tolerance,
/// near-vertical edges whose abscissae differ by rounding noise can make
/// the chain backtrack and discard the far end of an edge.
pub fn hull_2d(points: &[[f64; 2]]) -> Polygon {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let scale = pts.iter().map(|p| p[0].abs().max(p[1].abs())).fold(0.0, f64::max).max(1e-300);
    let eps = 1e-12 * scale;
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= eps && (a[1] - b[1]).abs() <= eps);
    if pts.len() < 3 {
        return Polygon { vertices: pts };
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    drop_flat_vertices(&mut lower, eps);
    Polygon { vertices: lower }
}

fn drop_flat_vertices(v: &mut Vec<[f64; 2]>, eps: f64) {
    // Stop after a full lap without removals.
    let mut i = 0;
    let mut stable = 0;
    while v.len() >= 3 && stable < v.len() {
        let n = v.len();
        i %= n;
        let (prev, cur, next) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
        let chord = (next[0] - prev[0]).hypot(next[1] - prev[1]);
        if chord <= eps || cross(prev, cur, next) <= eps * chord {
            v.remove(i);
            stable = 0;
        } else {
            i += 1;
            stable += 1;
        }
    }
    if v.len() == 2 && (v[0][0] - v[1][0]).abs() <= eps && (v[0][1] - v[1][1]).abs() <= eps {
        v.pop();
    }
}

/// `conv(a ⊕ b)` of two vertex sets.
pub fn minkowski_v_2d(a: &[[f64; 2]], b: &[[f64; 2]]) -> Polygon {
    let mut sums = Vec::with_capacity(a.len() * b.len());
    for p in a {
        for q in b {
            sums.push([p[0] + q[0], p[1] + q[1]]);
        }
    }
    hull_2d(&sums)
}

/// Vertices of a bounded planar polytope. Rows are reduced and sorted by
/// normal angle and adjacent facet lines are intersected; if that fails a
/// check against every row, all pairwise intersections are tried instead.
pub fn h_to_v_2d(p: &HPolytope) -> Result<Polygon> {
    if p.dim() != 2 {
        return Err(Error::Dimension(format!("expected a planar polytope, got R^{}", p.dim())));
    }
    let p = p.reduce()?;
    p.bounding_box()?;
    let mut rows: Vec<([f64; 2], f64)> =
        p.h().row_iter().zip(p.b()).map(|(r, bi)| ([r[0], r[1]], *bi)).collect();
    rows.sort_by(|a, b| a.0[1].atan2(a.0[0]).total_cmp(&b.0[1].atan2(b.0[0])));
    let tol = 1e-7;
    let feasible = |x: [f64; 2]| {
        rows.iter().all(|(n, bi)| {
            let len = n[0].hypot(n[1]);
            (n[0] * x[0] + n[1] * x[1] - bi) / len <= tol * (1.0 + bi.abs() / len)
        })
    };
    let k = rows.len();
    let mut pts = Vec::with_capacity(k);
    let mut ok = k >= 3;
    if ok {
        for i in 0..k {
            match line_intersection(rows[i], rows[(i + 1) % k]) {
                Some(x) if feasible(x) => pts.push(x),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
    }
    if !ok {
        pts.clear();
        for i in 0..k {
            for j in i + 1..k {
                if let Some(x) = line_intersection(rows[i], rows[j]) {
                    if feasible(x) {
                        pts.push(x);
                    }
                }
            }
        }
        if pts.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    Ok(hull_2d(&pts))
}

fn line_intersection(a: ([f64; 2], f64), b: ([f64; 2], f64)) -> Option<[f64; 2]> {
    let det = a.0[0] * b.0[1] - a.0[1] * b.0[0];
    let scale = a.0[0].hypot(a.0[1]) * b.0[0].hypot(b.0[1]);
    if det.abs() <= 1e-14 * scale {
        return None;
    }
    Some([(a.1 * b.0[1] - a.0[1] * b.1) / det, (a.0[0] * b.1 - a.1 * b.0[0]) / det])
}

/// Facet description of a polygon. When the origin is strictly inside,
/// rows are returned with unit offsets; otherwise rows have unit norm.
/// Segments and points get a description with two opposing rows per
/// missing dimension.
pub fn v_to_h_2d(poly: &Polygon) -> Result<HPolytope> {
    let v = poly.vertices();
    let mut rows: Vec<[f64; 2]> = Vec::new();
    let mut b = Vec::new();
    let mut push = |n: [f64; 2], at: [f64; 2]| {
        let len = n[0].hypot(n[1]);
        let n = [n[0] / len, n[1] / len];
        rows.push(n);
        b.push(n[0] * at[0] + n[1] * at[1]);
    };
    match v.len() {
        0 => return Err(Error::EmptySet),
        1 => {
            for n in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
                push(n, v[0]);
            }
        }
        2 => {
            let d = [v[1][0] - v[0][0], v[1][1] - v[0][1]];
            push([d[1], -d[0]], v[0]);
            push([-d[1], d[0]], v[0]);
            push(d, v[1]);
            push([-d[0], -d[1]], v[0]);
        }
        n => {
            for i in 0..n {
                let (p, q) = (v[i], v[(i + 1) % n]);
                push([q[1] - p[1], p[0] - q[0]], p);
            }
        }
    }
    if b.iter().all(|bi| *bi > 0.0) {
        let rows: Vec<[f64; 2]> = rows.iter().zip(&b).map(|(r, bi)| [r[0] / bi, r[1] / bi]).collect();
        let len = rows.len();
        return HPolytope::new(Matrix::from_rows(&rows)?, vec![1.0; len]);
    }
    HPolytope::new(Matrix::from_rows(&rows)?, b)
}
