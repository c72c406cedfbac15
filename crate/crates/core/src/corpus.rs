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

//! The embedded benchmark systems with their reference bracket values.

use crate::config::{parse_config, Expected, RunConfig};
use crate::error::Result;
use crate::invariant::SystemSpec;

const ROWS: [&str; 11] = [
    include_str!("../corpus/row01.toml"),
    include_str!("../corpus/row02.toml"),
    include_str!("../corpus/row03.toml"),
    include_str!("../corpus/row04.toml"),
    include_str!("../corpus/row05.toml"),
    include_str!("../corpus/row06.toml"),
    include_str!("../corpus/row07.toml"),
    include_str!("../corpus/row08.toml"),
    include_str!("../corpus/row09.toml"),
    include_str!("../corpus/row10.toml"),
    include_str!("../corpus/row11.toml"),
];

const EXMP4: &str = include_str!("../corpus/exmp4.toml");

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    /// 1-based row number.
    pub row: usize,
    pub system: SystemSpec,
    pub expected: Expected,
    /// Leading comment of the source file.
    pub note: String,
}

fn leading_comment(text: &str) -> String {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Raw TOML of row `row` (1-based).
pub fn row_source(row: usize) -> Option<&'static str> {
    ROWS.get(row.checked_sub(1)?).copied()
}

pub fn corpus() -> Result<Vec<CorpusEntry>> {
    ROWS.iter()
        .enumerate()
        .map(|(i, text)| {
            let RunConfig { system, expected } = parse_config(text)?;
            let expected = expected.expect("corpus rows carry reference values");
            Ok(CorpusEntry { row: i + 1, system, expected, note: leading_comment(text) })
        })
        .collect()
}

/// Planar unstable system used for the controlled-invariance iteration.
pub fn exmp4() -> Result<SystemSpec> {
    Ok(parse_config(EXMP4)?.system)
}

pub fn exmp4_source() -> &'static str {
    EXMP4
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses() {
        let rows = corpus().unwrap();
        assert_eq!(rows.len(), 11);
        for e in &rows {
            assert!(e.system.structure().unwrap().passes(), "row {}", e.row);
            assert!(e.expected.alpha_lb < e.expected.alpha_ub);
        }
        assert!(rows[10].note.contains("0.7841"));
        assert_eq!(rows[7].system.x.n_rows(), 4);
        assert_eq!(rows[9].system.x.n_rows(), 6);
        let ex4 = exmp4().unwrap();
        let rep = ex4.structure().unwrap();
        assert!(rep.passes_for_mci() && !rep.passes());
    }
}
