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

//! Robust positively invariant sets and the critical scaling factor of
//! disturbed linear systems `x+ = A x + E d`.

pub mod csf;
pub mod error;
pub mod invariant;
pub mod config;
pub mod corpus;
pub mod commands;
pub mod lp;
pub mod matrix;
pub mod sets;

pub use error::{Error, Result};
pub use matrix::Matrix;
