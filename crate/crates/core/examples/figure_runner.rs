//! Runs a scenario from a TOML snippet and writes its CSV and SVG panels.

use scissorlab::experiments::{run_fig9, CheckOutcome, SweepConfig};

fn main() -> scissorlab::Result<()> {
    let config = SweepConfig::parse("[fig9]\ngain = 4.0\ntau_s = { min = 0.1, max = 1.0, steps = 10 }\n")?;
    let report = run_fig9(&config.fig9)?;
    let dir = std::env::temp_dir().join("scissorlab-example");
    std::fs::create_dir_all(&dir).map_err(|e| scissorlab::Error::Io(e.to_string()))?;
    let csv = dir.join(format!("{}.csv", report.name));
    std::fs::write(&csv, report.table.to_csv()?).map_err(|e| scissorlab::Error::Io(e.to_string()))?;
    println!("wrote {}", csv.display());
    for panel in &report.panels {
        let path = dir.join(format!("{}_{}.svg", report.name, panel.name));
        std::fs::write(&path, panel.to_svg()?).map_err(|e| scissorlab::Error::Io(e.to_string()))?;
        println!("wrote {}", path.display());
    }
    for check in &report.checks {
        let verdict = match &check.outcome {
            CheckOutcome::Passed => "pass".to_string(),
            CheckOutcome::Failed(why) => format!("fail: {why}"),
            CheckOutcome::Disabled => "disabled".to_string(),
        };
        println!("{}: {verdict}", check.name);
    }
    Ok(())
}
