use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use jacobson_core::drazin::drazin;
use jacobson_core::generate::{Corpus, Family, GeneratorSpec, DEFAULT_MAX_ATTEMPTS};
use jacobson_core::jacobson::{
    check_conditions, power_instance, transfer_drazin, transfer_gdrazin, transfer_group, Quadruple, TransferMode,
    TransferOutcome,
};
use jacobson_core::verify::{verify_corpus, VerifyOptions};
use jacobson_core::{Error, Matrix};

/// Exact Drazin/group inverses and generalized Jacobson transfer checks.
#[derive(Parser)]
#[command(name = "jacobson", version)]
struct Cli {
    #[command(flatten)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputFormat {
    /// Compact JSON output (default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args, Clone)]
struct SpecArgs {
    #[arg(long, value_enum, default_value = "classic")]
    family: Family,
    #[arg(long, default_value_t = 3)]
    size: usize,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Construction attempts per instance before giving up.
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
}

impl SpecArgs {
    fn spec(&self) -> GeneratorSpec {
        GeneratorSpec {
            family: self.family,
            size: self.size,
            seed: self.seed,
            count: self.count,
            max_attempts: self.max_attempts,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Drazin inverse, index and spectral idempotent of a matrix.
    Drazin {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check the four side conditions of a quadruple (or triple, with d := a).
    CheckConditions {
        #[arg(long)]
        input: PathBuf,
    },
    /// Evaluate a transfer formula and compare with the direct computation.
    Transfer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "drazin")]
        mode: TransferMode,
    },
    /// Build the power quadruple (a, b', c', d) and re-verify the transfer on it.
    Power {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Write a generated corpus file.
    Gen {
        #[command(flatten)]
        spec: SpecArgs,
        /// Output path; stdout if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the full property battery over a generated or supplied corpus.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Corpus file or single quadruple; overrides the generator flags.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        commutant_samples: usize,
    },
}

/// Exit statuses: 0 all properties hold, 1 a property was falsified,
/// 2 usage or input error.
enum Failure {
    Falsified(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsified(_) | Error::InternalInvertibilityFailure => Failure::Falsified(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_instances(path: &Path) -> Result<Vec<Quadruple>, Failure> {
    let value: serde_json::Value =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let result = if value.get("instances").is_some() {
        serde_json::from_value::<Corpus>(value).map(|c| c.instances)
    } else {
        serde_json::from_value::<Quadruple>(value).map(|q| vec![q])
    };
    result.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T, fmt: &OutputFormat) -> String {
    if fmt.pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serializable")
}

fn transfer(q: &Quadruple, mode: TransferMode) -> Result<TransferOutcome, Error> {
    match mode {
        TransferMode::Gdrazin => transfer_gdrazin(q),
        TransferMode::Drazin => transfer_drazin(q),
        TransferMode::Group => transfer_group(q),
    }
}

fn agreement(out: &TransferOutcome) -> Result<(), Failure> {
    if out.agrees {
        Ok(())
    } else {
        Err(Failure::Falsified("transfer formula disagrees with the direct Drazin inverse".into()))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let fmt = &cli.output;
    match &cli.command {
        Command::Drazin { input } => {
            let a: Matrix = parse(input)?;
            println!("{}", emit(&drazin(&a)?, fmt));
        }
        Command::CheckConditions { input } => {
            let q: Quadruple = parse(input)?;
            println!("{}", emit(&check_conditions(&q), fmt));
        }
        Command::Transfer { input, mode } => {
            let q: Quadruple = parse(input)?;
            let out = transfer(&q, *mode)?;
            println!("{}", emit(&out, fmt));
            agreement(&out)?;
        }
        Command::Power { input, n } => {
            let q: Quadruple = parse(input)?;
            let powered = power_instance(&q, *n)?;
            let out = transfer_drazin(&powered)?;
            #[derive(Serialize)]
            struct PowerOutput<'a> {
                n: u32,
                quadruple: &'a Quadruple,
                transfer: &'a TransferOutcome,
            }
            let shown = PowerOutput {
                n: *n,
                quadruple: &powered,
                transfer: &out,
            };
            println!("{}", emit(&shown, fmt));
            agreement(&out)?;
        }
        Command::Gen { spec, output } => {
            let corpus = Corpus::generate(spec.spec())?;
            let text = emit(&corpus, fmt);
            match output {
                Some(path) => fs::write(path, text + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => println!("{text}"),
            }
        }
        Command::Verify {
            spec,
            input,
            commutant_samples,
        } => {
            let (instances, seed) = match input {
                Some(path) => (load_instances(path)?, 0),
                None => {
                    let spec = spec.spec();
                    spec.validate()?;
                    (Corpus::generate(spec.clone())?.instances, spec.seed)
                }
            };
            let opts = VerifyOptions {
                commutant_samples: *commutant_samples,
                seed,
                ..VerifyOptions::default()
            };
            let report = verify_corpus(&instances, &opts);
            println!("{}", emit(&report, fmt));
            eprint!("{}", report.human_summary());
            if !report.all_passed() {
                return Err(Failure::Falsified(format!("{} instance(s) failed", report.failures.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Falsified(msg)) => {
            eprintln!("falsified: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
