mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{Common, Context, Output};
use report::{CliError, ErrorReport, Report, Timing, VERSION};

/// Hilbert-Kunz function calculator.
///
/// Every command reads a problem file and prints a JSON report to stdout.
/// Exit codes: 0 success, 1 input or verification failure, 2 budget exceeded.
#[derive(Parser, Debug)]
#[command(name = "hkcalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute e_n(M, I) for n = 0..=nmax.
    Series(Common),
    /// Extract leading coefficients from a computed or stored series.
    Fit(Common),
    /// Check a closed form against the computed series.
    Verify(Common),
    /// Lengths of Tor_1(M, R/I^[q]).
    Tor(Common),
    /// Gröbner basis of Q + I, or of a module's presentation.
    Gb(Common),
    /// Validate the problem: m-primary ideal, dimension, module ranks.
    Check(Common),
    /// delta_n = e_n(M) - rank(M) e_n(R).
    Delta(Common),
}

impl Command {
    fn split(self) -> (&'static str, Common) {
        match self {
            Command::Series(c) => ("series", c),
            Command::Fit(c) => ("fit", c),
            Command::Verify(c) => ("verify", c),
            Command::Tor(c) => ("tor", c),
            Command::Gb(c) => ("gb", c),
            Command::Check(c) => ("check", c),
            Command::Delta(c) => ("delta", c),
        }
    }
}

fn print_json(value: &impl serde::Serialize, path: Option<&std::path::Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    if let Some(path) = path {
        std::fs::write(path, &text)
            .map_err(|e| CliError::input("io", format!("cannot write {}: {e}", path.display())))?;
    }
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    Ok(())
}

fn fail(command: &'static str, error: CliError) -> ExitCode {
    let code = error.exit_code;
    let _ = print_json(&ErrorReport { command, version: VERSION, error }, None);
    ExitCode::from(code)
}

fn run(command: &'static str, args: Common) -> ExitCode {
    let start = Instant::now();
    let json_path = args.json.clone();
    let no_timing = args.no_timing;
    let mut ctx = match Context::load(args) {
        Ok(c) => c,
        Err(e) => return fail(command, e),
    };
    let result = match command {
        "series" => commands::cmd_series(&mut ctx),
        "fit" => commands::cmd_fit(&mut ctx),
        "verify" => commands::cmd_verify(&mut ctx),
        "tor" => commands::cmd_tor(&mut ctx),
        "gb" => commands::cmd_gb(&mut ctx),
        "check" => commands::cmd_check(&mut ctx),
        "delta" => commands::cmd_delta(&mut ctx),
        _ => unreachable!("clap only yields known subcommands"),
    };
    let Output {
        results,
        analysis,
        failures,
        error,
    } = match result {
        Ok(o) => o,
        Err(e) => return fail(command, e),
    };
    let report = Report {
        command,
        version: VERSION,
        input_digest: report::hex_digest(&ctx.raw),
        input: ctx.file.to_text(),
        ring: ctx.ring_info(),
        parameters: ctx.parameters(),
        results,
        analysis,
        diagnostics: ctx.diagnostics(failures),
        timing: (!no_timing).then(|| Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        }),
        error,
    };
    if let Err(e) = print_json(&report, json_path.as_deref()) {
        return fail(command, e);
    }
    ExitCode::from(report.error.map_or(0, |e| e.exit_code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return fail("usage", CliError::input("usage", e.kind().to_string()));
        }
    };
    let (name, args) = cli.command.split();
    run(name, args)
}
