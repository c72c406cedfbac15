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

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix has {len} entries, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("root finder did not converge (best residual {residual:e})")]
    RootFinder { residual: f64 },

    #[error("simplex exceeded {pivots} pivots")]
    IterationLimit { pivots: usize },

    #[error("support function is unbounded in the requested direction")]
    UnboundedSupport,

    #[error("set is empty")]
    EmptySet,

    #[error("not a C-set: {0}")]
    NotCSet(String),

    #[error("unsupported set operation: {0}")]
    Unsupported(String),

    #[error("system violates the structural assumptions: {0}")]
    Structure(String),

    #[error("no N <= {n_max} satisfies the contraction condition (spectral radius of the reduced dynamics {spectral_radius:.6})")]
    NSearchExhausted { n_max: usize, spectral_radius: f64 },

    #[error("disturbance does not reach any state constraint")]
    InvisibleDisturbance,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
