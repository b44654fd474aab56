use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use losmimo_cli::validate::{self, ValidateOptions};
use losmimo_cli::{commands, resolve, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "losmimo", version, about = "Line-of-sight MIMO satellite capacity simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ergodic and outage capacity by Monte Carlo, next to the moment series.
    Simulate(RunArgs),
    /// Closed-form trace moments against their Monte Carlo estimates.
    Moments(RunArgs),
    /// Run the built-in oracle checks.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Receive array elements.
    #[arg(long)]
    nr: Option<String>,
    /// Transmitting satellites.
    #[arg(long)]
    nt: Option<String>,
    /// Element spacing in wavelengths [default: 0.5].
    #[arg(long)]
    spacing_over_lambda: Option<String>,
    /// SNR points in dB: `a,b,c` or `start:step:stop`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "snr")]
    snr_db: Option<String>,
    /// SNR points as linear P/sigma^2 [default: 0.05:0.05:1.0].
    #[arg(long)]
    snr: Option<String>,
    /// Channel realizations [default: 10000].
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Terms of the capacity series [default: 3].
    #[arg(long)]
    terms: Option<String>,
    /// Outage levels q in (0, 1), comma separated [default: 0.1,0.5].
    #[arg(long)]
    outage: Option<String>,
    /// Reject SNR points where the capacity series diverges (rho > 1).
    #[arg(long)]
    strict_convergence: bool,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file [default: standard output].
    #[arg(long)]
    out: Option<String>,
    /// csv or json [default: csv].
    #[arg(long)]
    format: Option<String>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    workers: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut flags: Vec<(&str, String)> = Vec::new();
        let options = [
            ("nr", &self.nr),
            ("nt", &self.nt),
            ("spacing-over-lambda", &self.spacing_over_lambda),
            ("snr-db", &self.snr_db),
            ("snr", &self.snr),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("terms", &self.terms),
            ("outage", &self.outage),
            ("out", &self.out),
            ("format", &self.format),
            ("workers", &self.workers),
        ];
        for (key, value) in options {
            if let Some(v) = value {
                flags.push((key, v.clone()));
            }
        }
        if self.strict_convergence {
            flags.push(("strict-convergence", "true".into()));
        }
        resolve(self.config.as_deref(), &flags)
    }
}

#[derive(Args)]
struct ValidateArgs {
    /// Realizations per Monte Carlo moment check.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    /// Replace J0 with a perturbed version to exercise the failure path.
    #[arg(long, hide = true)]
    corrupt_j0: bool,
}

fn run_and_write(args: &RunArgs, body: fn(&RunConfig) -> Result<String, CliError>) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let text = body(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => run_and_write(args, commands::simulate),
        Command::Moments(args) => run_and_write(args, commands::moments),
        Command::Validate(args) => {
            let opts = ValidateOptions {
                j0: if args.corrupt_j0 {
                    validate::corrupted_j0
                } else {
                    losmimo::specialfn::bessel_j0
                },
                samples: args.samples.max(2),
                seed: args.seed,
            };
            let checks = validate::run_suite(&opts);
            print!("{}", validate::render(&checks));
            return ExitCode::from(validate::exit_code(&checks) as u8);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
