mod args;
mod commands;
mod report;

use std::process::ExitCode;

use chebotarev_core::selftest::{self, Suite};
use chebotarev_core::Catalog;
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use report::{emit, CliResult, Failure, Report, Table};

fn load_catalog(cli: &Cli) -> CliResult<Catalog> {
    match &cli.common.catalog {
        None => Ok(Catalog::builtin()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Failure::validation("catalog_io", format!("{}: {e}", path.display()))
            })?;
            Ok(Catalog::parse(&text)?)
        }
    }
}

fn suite(command: &Command) -> Suite {
    match command {
        Command::Coeffs(_) => Suite::Coeffs,
        Command::Splitting(_) => Suite::Splitting,
        Command::LargeSieve(_) => Suite::LargeSieve,
        Command::Weights(_) => Suite::Weights,
        Command::Eta(_) => Suite::Eta,
        Command::Chebotarev(_) => Suite::Chebotarev,
        Command::Family(_) => Suite::Family,
    }
}

fn run_selftest(suite: Suite, catalog: &Catalog, seed: u64) -> CliResult<Report> {
    let result = selftest::run(suite, catalog, seed);
    let mut table = Table::new(&["suite", "check", "pass", "detail"]);
    for c in &result.checks {
        table.push(vec![
            result.suite.clone(),
            c.name.clone(),
            c.pass.to_string(),
            c.detail.clone(),
        ]);
    }
    let json = serde_json::to_value(&result)
        .map_err(|e| Failure::computation("serialization", e.to_string()))?;
    let mut report = Report::both(json, table, Format::Json);
    report.failed = !result.passed;
    Ok(report)
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(Failure::validation(
                "parameter_out_of_range",
                "--threads must be positive",
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::computation("threads", e.to_string()))?;
    }
    let catalog = load_catalog(cli)?;
    let seed = cli.common.seed;
    let mut format = cli.common.format;
    let report = if cli.common.selftest {
        run_selftest(suite(&cli.command), &catalog, seed)?
    } else {
        match &cli.command {
            Command::Coeffs(a) => commands::coeffs(&catalog, a)?,
            Command::Splitting(a) => commands::splitting(&catalog, a)?,
            Command::LargeSieve(a) => commands::large_sieve(&catalog, a, seed)?,
            Command::Weights(a) => commands::weights(a)?,
            Command::Eta(a) => commands::eta(&catalog, a)?,
            Command::Chebotarev(a) => {
                format = a.report.or(format);
                commands::chebotarev(&catalog, a)?
            }
            Command::Family(a) => commands::family(&catalog, a)?,
        }
    };
    emit(&report.render(format)?, &cli.common.output)?;
    if report.failed {
        return Err(Failure::computation(
            "selftest_failed",
            "one or more self-test checks failed",
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
