//! Configuration-driven reproduction of the figure scenarios.
//!
//! Each runner evaluates its grid points in parallel, gathers them in grid
//! order and returns a [`Report`] holding one CSV table, the SVG panels and
//! the outcome of every claim check. Nothing here touches the filesystem.

mod config;
mod figures;
mod plot;

pub use config::{
    Detector, Fig3Config, Fig4Config, Fig5Config, Fig8Config, Fig9Config, GridConfig, Imperfection,
    InputKind, Range, SweepConfig,
};
pub use figures::{run_fig3, run_fig4, run_fig5, run_fig8, run_fig9, sweep};
pub use plot::{Panel, Series};

use crate::error::{Error, Result};

pub const FIG3_CHECKS: &[&str] = &["beats_three_parallel", "beats_four_parallel"];
pub const FIG4_CHECKS: &[&str] = &["three_above_one", "three_crosses_bound", "one_below_bound"];
pub const FIG5_CHECKS: &[&str] = &["less_non_gaussianity"];
pub const FIG8_CHECKS: &[&str] = &["on_off_small"];
pub const FIG9_CHECKS: &[&str] = &["resource_loss_degrades", "three_beats_one"];

/// Smallest margin by which a strict inequality between GEOF values must hold.
pub const GEOF_MARGIN: f64 = 1e-6;

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Number(v) => format!("{v:.14e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Number(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Numeric values of the column called `name`, `NaN` for empty cells.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[i] {
                    Cell::Number(v) => *v,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }

    /// UTF-8 CSV with a header row, LF line endings and 15 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckOutcome {
    Passed,
    Failed(String),
    Disabled,
}

/// A claim about the scenario, evaluated on its data.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub description: &'static str,
    pub outcome: CheckOutcome,
}

impl Check {
    fn evaluate(
        name: &'static str,
        description: &'static str,
        disabled: &[String],
        test: impl FnOnce() -> std::result::Result<(), String>,
    ) -> Self {
        let outcome = if disabled.iter().any(|d| d == name) {
            CheckOutcome::Disabled
        } else {
            match test() {
                Ok(()) => CheckOutcome::Passed,
                Err(why) => CheckOutcome::Failed(why),
            }
        };
        Self {
            name,
            description,
            outcome,
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self.outcome, CheckOutcome::Failed(_))
    }
}

/// Output of one scenario run.
#[derive(Debug, Clone)]
pub struct Report {
    /// File stem for the CSV and the panel files.
    pub name: String,
    pub table: Table,
    pub panels: Vec<Panel>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }
}
