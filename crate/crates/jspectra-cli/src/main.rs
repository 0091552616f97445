//! Command-line frontend for forward spectra, two-spectra inversion,
//! isospectral families, chain conversions, and invariant verification.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Input;

#[derive(Parser)]
#[command(
    name = "jspectra",
    version,
    about = "Spectra of mass-spring chains under first-mass/first-spring perturbations: \
             forward problems, two-spectra inversion, isospectral families, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigendecompose a chain or matrix; with --params, also the perturbed
    /// spectrum and gamma.
    Forward {
        /// Chain file {"masses":[...],"springs":[...]}
        #[arg(long)]
        system: Option<PathBuf>,
        /// Matrix file {"q":[...],"b":[...]}
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Parameter file {"theta":...,"h":...}; requires theta != 1 here
        #[arg(long)]
        params: Option<PathBuf>,
        /// Output path
        #[arg(long)]
        out: PathBuf,
        /// json | csv
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Apply the corner perturbation and write the perturbed matrix.
    Perturb {
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover matrix and parameters from two spectra.
    #[command(allow_negative_numbers = true)]
    Invert {
        /// Spectra file {"lambda":[...],"mu":[...]} (optionally omega, mode)
        #[arg(long)]
        spectra: PathBuf,
        /// disjoint | shared-theta | shared-h | shared-alpha | known-theta
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the isospectral family at several omegas.
    #[command(allow_negative_numbers = true)]
    Family {
        #[arg(long)]
        spectra: PathBuf,
        /// Repeatable: one family member per omega
        #[arg(long = "omega", required = true)]
        omegas: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite and report residuals.
    Verify {
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
        /// Verify a spectra pair instead of a chain/matrix
        #[arg(long)]
        spectra: Option<PathBuf>,
        /// Base residual threshold
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Convert between chains and matrices, or read (theta, h) physically.
    #[command(allow_negative_numbers = true)]
    Masses {
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
        /// First mass seed (matrix or params input)
        #[arg(long)]
        m1: Option<f64>,
        /// First spring seed (matrix input)
        #[arg(long)]
        k1: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), error::CliError> {
    match cli.command {
        Command::Forward {
            system,
            matrix,
            params,
            out,
            format,
        } => {
            let input = Input::from_flags(system, matrix)?;
            commands::run_forward(&input, params.as_deref(), &out, &format)
        }
        Command::Perturb {
            system,
            matrix,
            params,
            out,
        } => {
            let input = Input::from_flags(system, matrix)?;
            commands::run_perturb(&input, &params, &out)
        }
        Command::Invert {
            spectra,
            mode,
            omega,
            theta,
            h,
            alpha,
            out,
        } => commands::run_invert(&spectra, mode, omega, theta, h, alpha, out.as_deref()),
        Command::Family {
            spectra,
            omegas,
            out,
        } => commands::run_family(&spectra, &omegas, out.as_deref()),
        Command::Verify {
            system,
            matrix,
            params,
            spectra,
            tolerance,
        } => match (spectra, params) {
            (Some(sp), None) => commands::run_verify_spectra(&sp, tolerance),
            (None, Some(pp)) => {
                let input = Input::from_flags(system, matrix)?;
                commands::run_verify_system(&input, &pp, tolerance)
            }
            _ => Err(error::CliError::Schema(
                "verify takes either --spectra, or --system/--matrix with --params".into(),
            )),
        },
        Command::Masses {
            system,
            matrix,
            params,
            m1,
            k1,
            out,
        } => commands::run_masses(
            system.as_deref(),
            matrix.as_deref(),
            params.as_deref(),
            m1,
            k1,
            out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
