// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use clap::Parser;
use mzi_thermo::error::EXIT_USAGE;
use mzi_thermo::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli.command) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mzi-thermo {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
