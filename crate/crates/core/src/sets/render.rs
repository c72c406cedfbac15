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

//! SVG and CSV output for planar sets.

use std::fmt::Write as _;

use super::planar::Polygon;

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub stroke: String,
    pub fill: String,
    pub fill_opacity: f64,
    pub dashed: bool,
}

impl Style {
    pub fn outline(stroke: &str) -> Self {
        Style { stroke: stroke.into(), fill: "none".into(), fill_opacity: 0.0, dashed: false }
    }

    pub fn filled(stroke: &str, fill: &str, opacity: f64) -> Self {
        Style { stroke: stroke.into(), fill: fill.into(), fill_opacity: opacity, dashed: false }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

/// Layers of polygons drawn in order over a fixed window.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    layers: Vec<(String, Polygon, Style)>,
}

impl Scene {
    pub fn new() -> Self {
        Scene::default()
    }

    pub fn add(&mut self, label: &str, polygon: Polygon, style: Style) {
        self.layers.push((label.into(), polygon, style));
    }

    /// Render into a `width`-pixel-wide SVG with the window
    /// `[xmin, xmax] x [ymin, ymax]` and the y axis pointing up.
    pub fn to_svg(&self, window: [f64; 4], width: u32) -> String {
        let [xmin, xmax, ymin, ymax] = window;
        let (w, h) = (xmax - xmin, ymax - ymin);
        let height = (width as f64 * h / w).round().max(1.0) as u32;
        let stroke_width = 1.5 * w / width as f64;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="{xmin} {} {w} {h}">"#,
            -ymax
        );
        let _ = writeln!(out, r#"<g transform="scale(1,-1)">"#);
        for (label, poly, style) in &self.layers {
            if poly.is_empty() {
                continue;
            }
            let mut d = String::new();
            for (i, v) in poly.vertices().iter().enumerate() {
                let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, v[0], v[1]);
            }
            d.push('Z');
            let dash = if style.dashed { format!(r#" stroke-dasharray="{} {}""#, 4.0 * stroke_width, 3.0 * stroke_width) } else { String::new() };
            let _ = writeln!(
                out,
                r#"<path id="{label}" d="{d}" stroke="{}" stroke-width="{stroke_width}" fill="{}" fill-opacity="{}"{dash}/>"#,
                style.stroke, style.fill, style.fill_opacity
            );
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

/// One `x1,x2` line per vertex, counter-clockwise, with a header.
pub fn polygon_csv(poly: &Polygon) -> String {
    let mut out = String::from("x1,x2\n");
    for v in poly.vertices() {
        let _ = writeln!(out, "{},{}", v[0], v[1]);
    }
    out
}

/// Window around `[lo, hi]` bounds padded by a fraction of its extent.
pub fn padded_window(bounds: &[(f64, f64)], pad: f64) -> [f64; 4] {
    let (x, y) = (bounds[0], bounds[1]);
    let (px, py) = (pad * (x.1 - x.0), pad * (y.1 - y.0));
    [x.0 - px, x.1 + px, y.0 - py, y.1 + py]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::planar::hull_2d;

    #[test]
    fn svg_has_one_path_per_layer() {
        let mut scene = Scene::new();
        let sq = hull_2d(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]);
        scene.add("x", sq.clone(), Style::outline("black"));
        scene.add("s", sq, Style::filled("blue", "blue", 0.3).dashed());
        scene.add("empty", Polygon::default(), Style::outline("red"));
        let svg = scene.to_svg(padded_window(&[(-1.0, 1.0), (-1.0, 1.0)], 0.05), 400);
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn csv_lists_vertices() {
        let tri = hull_2d(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(polygon_csv(&tri), "x1,x2\n0,0\n1,0\n0,1\n");
    }
}
