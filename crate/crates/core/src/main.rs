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

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rpi_core::commands::{cmd_csf, cmd_mci2d, cmd_mrpi, cmd_mrpi_sweep, table1, table1_csv, DEFAULT_PRECISION};
use rpi_core::config::load_config;
use rpi_core::csf::CsfConfig;
use rpi_core::invariant::DEFAULT_K_MAX;
use rpi_core::Result;

/// Invariant sets and critical disturbance scaling for linear systems.
#[derive(Parser)]
#[command(name = "rpi-csf", version)]
struct Cli {
    /// Fractional digits in CSV output.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket the critical scaling factor.
    Csf {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
    },
    /// Maximal RPI set for one scaling.
    Mrpi {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// MRPI status over several scalings.
    MrpiSweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: usize,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Planar controlled-invariance iteration.
    Mci2d {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Run the embedded benchmark corpus.
    Table1 {
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long)]
        csv: PathBuf,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let p = cli.precision;
    match cli.command {
        Command::Csf { config, eps } => {
            let sys = load_config(&config)?.system;
            print!("{}", cmd_csf(&sys, &CsfConfig::with_eps(eps), p)?);
        }
        Command::Mrpi { config, alpha, kmax, svg } => {
            let sys = load_config(&config)?.system;
            print!("{}", cmd_mrpi(&sys, alpha, kmax, svg.as_deref(), p)?);
        }
        Command::MrpiSweep { config, alphas, kmax, csv } => {
            let sys = load_config(&config)?.system;
            let out = cmd_mrpi_sweep(&sys, &alphas, kmax)?;
            std::fs::write(&csv, &out)?;
            print!("{out}");
        }
        Command::Mci2d { config, alpha, steps, svg } => {
            let sys = load_config(&config)?.system;
            print!("{}", cmd_mci2d(&sys, alpha, steps, &svg)?);
        }
        Command::Table1 { eps, csv } => {
            let rows = table1(eps)?;
            let out = table1_csv(&rows, p);
            std::fs::write(&csv, &out)?;
            print!("{out}");
            for r in rows.iter().filter(|r| !r.passes()) {
                match &r.result {
                    Ok(_) => eprintln!("row {} ({}) outside tolerance", r.row, r.label),
                    Err(e) => eprintln!("row {} ({}) failed: {e}", r.row, r.label),
                }
            }
            return Ok(rows.iter().all(|r| r.passes()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
