//! `lensdimer`: data files for the lens-coupled emitter pair.

// negated comparisons reject NaN arguments along with out-of-range ones
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod output;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::{Parser, Subcommand};

use commands::{Outcome, OutputArgs};
use error::{CliError, CliResult};
use output::{Clock, Emitter, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "lensdimer", version, about = "Two emitters coupled by a lens with propagation delay")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Free decay traces of a single shared excitation.
    Decay(commands::DecayArgs),
    /// Emission spectra at finite or infinite time, optionally resolved in angle.
    Spectrum(commands::SpectrumArgs),
    /// Weakly driven transients and steady state.
    Driven(commands::DrivenArgs),
    /// Elastic scattering rates along a phase scan, with visibility extraction.
    Rates(commands::RatesArgs),
    /// Two-detector intensity correlations against delay.
    G2(commands::G2Args),
    /// Coupling fraction collected by a lens of given opening angle.
    Kappa(commands::KappaArgs),
    /// Run the verification suite; exits nonzero if any check fails.
    Verify(commands::VerifyArgs),
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::Decay(a) => &a.output,
            Command::Spectrum(a) => &a.output,
            Command::Driven(a) => &a.output,
            Command::Rates(a) => &a.output,
            Command::G2(a) => &a.output,
            Command::Kappa(a) => &a.output,
            Command::Verify(a) => &a.output,
        }
    }

    fn run(&self) -> CliResult<Outcome> {
        match self {
            Command::Decay(a) => commands::decay(a),
            Command::Spectrum(a) => commands::spectrum(a),
            Command::Driven(a) => commands::driven(a),
            Command::Rates(a) => commands::rates(a),
            Command::G2(a) => commands::g2(a),
            Command::Kappa(a) => commands::kappa(a),
            Command::Verify(a) => commands::verify(a),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Decay(_) => "decay",
            Command::Spectrum(_) => "spectrum",
            Command::Driven(_) => "driven",
            Command::Rates(_) => "rates",
            Command::G2(_) => "g2",
            Command::Kappa(_) => "kappa",
            Command::Verify(_) => "verify",
        }
    }
}

/// Caps the worker pool from `RD_THREADS`.
fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("RD_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("RD_THREADS must be a positive integer, got `{value}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn execute(cmd: &Command) -> CliResult<()> {
    configure_threads()?;
    let started = SystemTime::now();
    let clock = Instant::now();
    let out_args = cmd.output();
    let precision = out_args.precision as usize;
    let outcome = cmd.run()?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }

    let write_files = !outcome.files_optional || out_args.out_dir.is_some();
    if write_files {
        let emitter = Emitter {
            out_dir: out_args.out_dir.clone().unwrap_or_else(|| PathBuf::from(".")),
            format: out_args.format,
            precision,
        };
        emitter.prepare()?;
        let record = emitter.write_table(&outcome.stem, &outcome.table)?;
        let mut warnings = outcome.warnings.clone();
        if let Some(system) = outcome.parameters.get("system") {
            if let Ok(p) = serde_json::from_value::<lensdimer::SystemParams>(system.clone()) {
                warnings.extend(p.warnings().iter().map(ToString::to_string));
            }
        }
        let manifest = RunManifest {
            subcommand: cmd.name().into(),
            library_version: lensdimer::VERSION.into(),
            parameters: outcome.parameters.clone(),
            outputs: vec![record],
            summary: commands::summary_json(&outcome, precision),
            warnings,
            clock: Clock {
                started_unix_s: output::unix_seconds(started),
                elapsed_s: clock.elapsed().as_secs_f64(),
                check_runtimes_s: outcome.check_runtimes.clone(),
            },
        };
        let path = emitter.write_manifest(&outcome.stem, &manifest)?;
        if outcome.stdout.is_none() {
            println!("wrote {}", emitter.out_dir.join(&manifest.outputs[0].file).display());
            println!("wrote {}", path.display());
        }
    }

    match &outcome.stdout {
        Some(text) => print!("{text}"),
        None => {
            for (k, v) in commands::summary_json(&outcome, precision).as_object().into_iter().flatten() {
                println!("{k} = {v}");
            }
        }
    }
    if outcome.failed_checks > 0 {
        return Err(CliError::VerifyFailed(outcome.failed_checks));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
