//! `sullivan`: cohomology, minimal models and KS-extension checks for CDGAs
//! described in JSON.
//!
//! Exit codes: 0 success, 1 parse/validation/usage failure or failed check,
//! 2 internal invariant breach, 3 kill cap exceeded.

mod report;

use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sullivan_core::format::{full_validation_degree, LieDescription, TwistDescription};
use sullivan_core::{
    chevalley_eilenberg, construct_minimal_model, heisenberg_model, parse_model, projective_model, sphere_model,
    torus_model, validate, Error, KsExtension, LieAlgebra, ModelDescription, PresentedCdga, DEFAULT_KILL_CAP,
};

use report::{CohomologyOutput, HomotopyOutput, KsOutput, MinimalModelOutput, ValidateOutput};

#[derive(Parser)]
#[command(name = "sullivan", version, about = "Sullivan minimal models of rational CDGAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check degrees, d^2 = 0 and ideal preservation
    Validate {
        /// Model description (stdin if omitted or `-`)
        file: Option<PathBuf>,
        /// Defaults to the top generator or relation degree
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Betti numbers and class representatives
    Cohomology {
        file: Option<PathBuf>,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Minimal model with generators in degrees 1..=max-degree
    MinimalModel {
        file: Option<PathBuf>,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, default_value_t = DEFAULT_KILL_CAP)]
        kill_cap: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// dim V^k for k >= 2, with the hypotheses needed to read them as homotopy ranks
    Homotopy {
        file: Option<PathBuf>,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, default_value_t = DEFAULT_KILL_CAP)]
        kill_cap: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Triangularity and minimality of a twisted tensor product
    KsCheck {
        base: PathBuf,
        fiber: PathBuf,
        twist: PathBuf,
        /// Top degree for the total-space dims (defaults to the top generator degree)
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print a built-in model description
    Library {
        #[command(subcommand)]
        model: LibraryModel,
    },
}

#[derive(Subcommand)]
enum LibraryModel {
    Sphere {
        n: u32,
    },
    Cpn {
        n: u32,
    },
    Torus {
        n: usize,
    },
    Heisenberg,
    /// Chevalley–Eilenberg algebra of a Lie algebra description
    Ce {
        file: PathBuf,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) | Error::UnknownGenerator(_) => 2,
            Error::KillCapExceeded { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(what: &str, e: io::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("cannot read {what}: {e}"),
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| io_failure(&p.display().to_string(), e))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| io_failure("stdin", e))?;
            Ok(s)
        }
    }
}

fn load(path: Option<&PathBuf>) -> Result<PresentedCdga, Failure> {
    Ok(parse_model(&read_input(path)?)?)
}

fn render<T: Serialize + std::fmt::Display>(value: &T, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("outputs serialize") + "\n",
        Format::Text => value.to_string(),
    }
}

/// Output text and whether the command's check passed.
fn run(command: Command) -> Result<(String, bool), Failure> {
    match command {
        Command::Validate {
            file,
            max_degree,
            format,
        } => {
            let a = ModelDescription::from_json(&read_input(file.as_ref())?)?.to_cdga();
            let a = match a {
                Ok(a) => a,
                Err(Error::Validation(report)) => {
                    let out = ValidateOutput {
                        name: String::new(),
                        passed: false,
                        report,
                    };
                    return Ok((render(&out, format), false));
                }
                Err(e) => return Err(e.into()),
            };
            let n = max_degree.unwrap_or_else(|| full_validation_degree(&a));
            let report = validate(&a, n)?;
            let passed = report.passed();
            let out = ValidateOutput {
                name: a.name().to_string(),
                report,
                passed,
            };
            Ok((render(&out, format), passed))
        }
        Command::Cohomology {
            file,
            max_degree,
            format,
        } => {
            let a = load(file.as_ref())?;
            Ok((render(&CohomologyOutput::compute(&a, max_degree)?, format), true))
        }
        Command::MinimalModel {
            file,
            max_degree,
            kill_cap,
            format,
        } => {
            let a = Arc::new(load(file.as_ref())?);
            let r = construct_minimal_model(a.clone(), max_degree, kill_cap)?;
            Ok((render(&MinimalModelOutput::new(&a, &r, kill_cap), format), true))
        }
        Command::Homotopy {
            file,
            max_degree,
            kill_cap,
            format,
        } => {
            let a = Arc::new(load(file.as_ref())?);
            let r = construct_minimal_model(a.clone(), max_degree, kill_cap)?;
            Ok((render(&HomotopyOutput::new(&a, &r), format), true))
        }
        Command::KsCheck {
            base,
            fiber,
            twist,
            max_degree,
            format,
        } => {
            let b = load(Some(&base))?;
            let f = load(Some(&fiber))?;
            let t = TwistDescription::from_json(&read_input(Some(&twist))?)?;
            let e = KsExtension::from_descriptions(&b, &f, &t)?;
            let out = KsOutput::new(&e, max_degree)?;
            let passed = out.passed();
            Ok((render(&out, format), passed))
        }
        Command::Library { model } => {
            let a = match model {
                LibraryModel::Sphere { n } => sphere_model(n)?,
                LibraryModel::Cpn { n } => projective_model(n)?,
                LibraryModel::Torus { n } => torus_model(n).into_presented().with_name(format!("T^{n}")),
                LibraryModel::Heisenberg => heisenberg_model(),
                LibraryModel::Ce { file } => {
                    let lie = LieAlgebra::from_description(&LieDescription::from_json(&read_input(Some(&file))?)?)?;
                    chevalley_eilenberg(&lie)?
                        .into_presented()
                        .with_name(format!("CE({})", lie.name()))
                }
            };
            Ok((ModelDescription::from_cdga(&a).to_json() + "\n", true))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
