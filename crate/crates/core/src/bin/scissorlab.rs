use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use scissorlab::experiments::{self, CheckOutcome, Report, SweepConfig};
use scissorlab::{Error, Result};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scenario {
    Fig3,
    Fig4,
    Fig5,
    Fig8,
    Fig9,
    Sweep,
}

/// Reproduce the scissor/NLA figure scenarios and write CSV tables and SVG panels.
#[derive(Parser, Debug)]
#[command(version)]
struct Cli {
    scenario: Scenario,
    /// TOML configuration; built-in defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit with status 2 if any enabled check fails.
    #[arg(long)]
    check: bool,
    /// Output directory (overrides `out_dir` in the configuration).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Fock cutoff per mode for every scenario.
    #[arg(long)]
    cutoff: Option<usize>,
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Io(format!("{}: {e}", path.display()))
}

fn load(cli: &Cli) -> Result<SweepConfig> {
    let mut config = match &cli.config {
        Some(p) => SweepConfig::parse(&std::fs::read_to_string(p).map_err(io(p))?)?,
        None => SweepConfig::default(),
    };
    if let Some(n) = cli.cutoff {
        config = config.with_cutoff(n);
        config.validate()?;
    }
    Ok(config)
}

fn write(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    let csv = dir.join(format!("{}.csv", report.name));
    std::fs::write(&csv, report.table.to_csv()?).map_err(io(&csv))?;
    written.push(csv);
    for panel in &report.panels {
        let svg = dir.join(format!("{}_{}.svg", report.name, panel.name));
        std::fs::write(&svg, panel.to_svg()?).map_err(io(&svg))?;
        written.push(svg);
    }
    Ok(written)
}

fn run(cli: &Cli) -> Result<bool> {
    let config = load(cli)?;
    let report = match cli.scenario {
        Scenario::Fig3 => experiments::run_fig3(&config.fig3)?,
        Scenario::Fig4 => experiments::run_fig4(&config.fig4)?,
        Scenario::Fig5 => experiments::run_fig5(&config.fig5)?,
        Scenario::Fig8 => experiments::run_fig8(&config.fig8)?,
        Scenario::Fig9 => experiments::run_fig9(&config.fig9)?,
        Scenario::Sweep => experiments::sweep(&config.sweep)?,
    };
    let dir = cli
        .out_dir
        .clone()
        .or(config.out_dir)
        .unwrap_or_else(|| PathBuf::from("out"));
    for path in write(&report, &dir)? {
        println!("wrote {}", path.display());
    }
    for c in &report.checks {
        match &c.outcome {
            CheckOutcome::Passed => println!("PASS {}: {}", c.name, c.description),
            CheckOutcome::Failed(why) => println!("FAIL {}: {} ({why})", c.name, c.description),
            CheckOutcome::Disabled => println!("SKIP {}", c.name),
        }
    }
    let ok = report.failed_checks().next().is_none();
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors share exit status 1 with runtime errors; 2 is reserved for checks.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(ok) if ok || !cli.check => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
