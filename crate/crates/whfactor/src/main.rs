use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use whfactor::cli::{Delta0Choice, PathChoice, RunConfig};
use whfactor::report::InputFile;
use whfactor::scalar::Precision;
use whfactor::Error;

/// Wiener-Hopf factorization of a scalar complex polynomial nonvanishing on
/// the unit circle, with a certified accuracy report.
#[derive(Parser, Debug)]
#[command(name = "whfactor", version, about)]
struct Args {
    /// Input JSON file: {"coefficients": [[re, im], ...], "rho": ..., "delta": ...}
    #[arg(long)]
    input: PathBuf,

    /// Annulus parameter in (0, 1); overrides the input file.
    #[arg(long)]
    rho: Option<String>,

    /// Inner annulus radius r in (0, 1); requires --annulus-R.
    #[arg(long, value_name = "r")]
    annulus_r: Option<String>,

    /// Outer annulus radius R > 1; requires --annulus-r.
    #[arg(long = "annulus-R", value_name = "R")]
    annulus_big_r: Option<String>,

    /// Input accuracy for the coefficients; overrides the input file.
    #[arg(long)]
    delta: Option<String>,

    /// Contraction parameter of the perturbation bounds.
    #[arg(long, default_value = "0.5")]
    q: String,

    /// Window half-length; `auto` means degree + 1.
    #[arg(long, default_value = "auto")]
    n: String,

    /// delta0 policy: auto | general | self-inversive | one | <value>.
    #[arg(long, default_value = "auto")]
    delta0: String,

    /// Demanded accuracy of the window entries; `auto` follows the
    /// 10^(-d-d~) recipe.
    #[arg(long, default_value = "auto")]
    eps_tilde: String,

    /// Solution route: kernel | direct | both.
    #[arg(long, default_value = "kernel")]
    path: String,

    /// Numeric backend: native | ext:<digits>.
    #[arg(long, default_value = "native")]
    precision: String,

    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Verify root-based hypotheses (delta0 auto/one) with the naive oracle.
    #[arg(long, default_value_t = false)]
    oracle_check: bool,
}

fn build_config(args: &Args) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(&args.input)?;
    let input = InputFile::from_json(&text)?;
    let mut config = RunConfig::new(input);
    config.rho = args.rho.clone();
    config.annulus = match (&args.annulus_r, &args.annulus_big_r) {
        (Some(r), Some(big_r)) => Some((r.clone(), big_r.clone())),
        (None, None) => None,
        _ => {
            return Err(Error::InvalidInput(
                "--annulus-r and --annulus-R must be given together".into(),
            ))
        }
    };
    config.delta = args.delta.clone();
    config.q = args.q.clone();
    config.n = match args.n.as_str() {
        "auto" => None,
        s => Some(
            s.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad n `{s}`")))?,
        ),
    };
    config.delta0 = Delta0Choice::parse(&args.delta0)?;
    config.eps_tilde = match args.eps_tilde.as_str() {
        "auto" => None,
        s => Some(s.to_string()),
    };
    config.path = PathChoice::parse(&args.path)?;
    config.precision = Precision::parse(&args.precision)?;
    config.oracle_check = args.oracle_check;
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = build_config(&args).and_then(|config| {
        let report = whfactor::cli::run(&config)?;
        let json = report.to_json();
        match &args.output {
            Some(path) => std::fs::write(path, &json)?,
            None => print!("{json}"),
        }
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("whfactor: {err}");
            match &err {
                Error::RankAmbiguous { .. } | Error::TrimViolation { .. } => {
                    eprintln!("whfactor: hint: raise --eps-tilde demand (smaller value), ell, or --precision");
                }
                _ => {}
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
