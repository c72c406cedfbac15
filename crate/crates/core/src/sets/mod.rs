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

//! Polytopes, support-function sets and planar geometry.

mod hpolytope;
mod planar;
mod render;
mod support;

pub use hpolytope::{HPolytope, ZERO_ROW_TOL};
pub use planar::{h_to_v_2d, hull_2d, minkowski_v_2d, v_to_h_2d, Polygon};
pub use render::{padded_window, polygon_csv, Scene, Style};
pub use support::{max_scaling, zonotope_facets, SupportSet};
