use clap::{Args, Parser, Subcommand};
use grushin::cli::{self, ConstantsArgs, Format, ReportArgs, SpectrumArgs, VerifyArgs};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "grushin", version, about = "Verify Hardy, Rellich and uncertainty identities on Baouendi-Grushin space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Suite configuration (TOML); the shipped default when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write records here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured suite.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Measured and sharp uncertainty constants for an extremizer family.
    Constants {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// heisenberg, hydrogen or ckn.
        #[arg(long)]
        family: String,
        /// CKN exponents (ckn only).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        b: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        beta: Vec<f64>,
    },
    /// Eigenvalues, annihilation residuals and Gram deviations of the harmonics.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Highest harmonic order.
        #[arg(long, short = 'k', default_value_t = 4)]
        k: usize,
    },
    /// Summarize a saved JSON-lines report.
    Report {
        #[command(flatten)]
        common: Common,
        input: PathBuf,
    },
    /// List the registered checks.
    Checks,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: grushin::Error| e.to_string())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_ERROR } else { cli::EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = match cli.command {
        Command::Verify { common: c } => {
            cli::cmd_verify(&VerifyArgs { config: c.config, out: c.out, format: c.format, seed: c.seed, jobs: c.jobs }, &mut out, &mut err)
        }
        Command::Constants { common: c, n, family, b, beta } => cli::cmd_constants(
            &ConstantsArgs { n, family, b, beta, config: c.config, out: c.out, format: c.format },
            &mut out,
            &mut err,
        ),
        Command::Spectrum { common: c, n, k } => {
            cli::cmd_spectrum(&SpectrumArgs { n, k, seed: c.seed.unwrap_or(0), out: c.out, format: c.format }, &mut out, &mut err)
        }
        Command::Report { common: c, input } => cli::cmd_report(&ReportArgs { input, out: c.out, format: c.format }, &mut out, &mut err),
        Command::Checks => {
            print!("{}", cli::list_checks());
            cli::EXIT_OK
        }
    };
    std::process::exit(code);
}
