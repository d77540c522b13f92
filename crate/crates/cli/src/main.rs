mod args;
mod commands;
mod error;
mod files;
mod number;

use std::process::ExitCode;

use clap::Parser;
use qcharge::Tolerances;

use args::{Cli, Command};
use commands::path_ref;
use error::{CliError, EXIT_OK, EXIT_PARSE};

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Distance {
            rho,
            sigma,
            opt,
            oracle_samples,
            json,
            drive_out,
        } => commands::distance(
            &rho,
            &sigma,
            &opt,
            oracle_samples,
            json,
            path_ref(&drive_out),
        ),
        Command::Fig3 {
            n,
            dim,
            seed,
            starts,
            timing,
            out,
        } => commands::fig3(n, dim, seed, starts, timing, path_ref(&out)),
        Command::Race {
            n_qubits,
            steps,
            out,
        } => commands::race(n_qubits, steps, path_ref(&out)),
        Command::Gen {
            kind,
            dim,
            seed,
            spectrum,
            out,
            out_sigma,
        } => commands::gen(
            kind,
            dim,
            seed,
            spectrum,
            path_ref(&out),
            path_ref(&out_sigma),
        ),
        Command::Bounds { rho, sigma, json } => commands::bounds(&rho, &sigma, json),
        Command::Power {
            hamiltonian,
            rho,
            sigma,
            json,
        } => commands::power(&hamiltonian, &rho, &sigma, json),
        Command::Qsl {
            protocol,
            rho,
            json,
        } => commands::qsl(&protocol, &rho, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the parse-error code; exit 2 is reserved for spectra mismatch
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK });
        }
    };
    match Tolerances::from_env() {
        Ok(tol) => {
            Tolerances::install(tol);
        }
        Err(e) => {
            eprintln!("qcharge: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("qcharge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
