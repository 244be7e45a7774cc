//! `qschmidt`: analyze, sweep and dump Schmidt modes of two-mode states.
//!
//! Exit codes: 0 success, 1 output failure, 2 parse failure,
//! 3 normalization failure, 4 numeric failure.

mod args;
mod commands;
mod failure;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{cmd_analyze, cmd_dump_modes, cmd_sweep, SweepRequest};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            spec,
            run,
            numeric: _,
            no_numeric,
            format,
            out,
        } => cmd_analyze(&spec, &run, !no_numeric, format, out.as_deref()),
        Command::Sweep {
            param,
            from,
            to,
            steps,
            alpha,
            phi,
            theta,
            spec,
            numeric,
            run,
            out,
        } => {
            let req = SweepRequest {
                param,
                from,
                to,
                steps,
                alpha,
                phi,
                theta,
                spec,
                numeric,
            };
            cmd_sweep(&req, &run, out.as_deref())
        }
        Command::DumpModes {
            spec,
            run,
            out_dir,
            modes,
        } => cmd_dump_modes(&spec, &run, &out_dir, modes),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qschmidt: {f}");
            f.exit_code()
        }
    }
}
