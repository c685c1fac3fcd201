use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::DetectorKind;

/// Evenly spaced samples `min, …, max`; a single step yields `min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub const fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        (0..self.steps)
            .map(|i| self.min + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn validate(&self, name: &str, lo: f64, hi: f64) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config(format!("{name}: steps must be positive")));
        }
        if !(self.min <= self.max) {
            return Err(Error::Config(format!("{name}: min exceeds max")));
        }
        for v in [self.min, self.max] {
            in_range(name, v, lo, hi)?;
        }
        Ok(())
    }
}

/// Detector family as spelled in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Detector {
    Pnr,
    OnOff,
}

impl Detector {
    pub fn kind(self) -> DetectorKind {
        match self {
            Detector::Pnr => DetectorKind::Pnr,
            Detector::OnOff => DetectorKind::OnOff,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Detector::Pnr => "pnr",
            Detector::OnOff => "on-off",
        }
    }
}

/// Resource transmissivity `τ_s` and detector efficiency `τ_d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Imperfection {
    pub tau_s: f64,
    pub tau_d: f64,
}

impl Imperfection {
    pub const PERFECT: Self = Self { tau_s: 1.0, tau_d: 1.0 };

    pub fn label(&self) -> String {
        if *self == Self::PERFECT {
            "perfect".into()
        } else {
            format!("ts{}_td{}", self.tau_s, self.tau_d)
        }
    }
}

/// Input family of a free sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    Coherent,
    Epr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3Config {
    pub name: String,
    pub gamma: f64,
    pub gain: Range,
    /// Numbers of parallel 1-scissors compared against the generalized scissor.
    pub nla: Vec<usize>,
    pub order: usize,
    pub cutoff: usize,
    pub disabled_checks: Vec<String>,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            name: "fig3".into(),
            gamma: 0.1,
            gain: Range::new(1.0, 10.0, 20),
            nla: vec![1, 2, 3, 4],
            order: 3,
            cutoff: 12,
            disabled_checks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig4Config {
    pub name: String,
    pub chi: f64,
    pub transmissivity: f64,
    pub gain: Range,
    pub orders: Vec<usize>,
    pub settings: Vec<Imperfection>,
    pub cutoff: usize,
    pub disabled_checks: Vec<String>,
}

impl Default for Fig4Config {
    fn default() -> Self {
        Self {
            name: "fig4".into(),
            chi: 0.3,
            transmissivity: 0.1,
            gain: Range::new(1.0, 6.0, 12),
            orders: vec![1, 3],
            settings: vec![Imperfection::PERFECT, Imperfection { tau_s: 0.7, tau_d: 0.7 }],
            cutoff: 12,
            disabled_checks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig5Config {
    pub name: String,
    pub chi: f64,
    pub transmissivity: f64,
    pub gain: Range,
    pub orders: Vec<usize>,
    pub cutoff: usize,
    pub disabled_checks: Vec<String>,
}

impl Default for Fig5Config {
    fn default() -> Self {
        Self {
            name: "fig5".into(),
            chi: 0.3,
            transmissivity: 0.1,
            gain: Range::new(1.0, 6.0, 12),
            orders: vec![1, 3],
            cutoff: 12,
            disabled_checks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig8Config {
    pub name: String,
    pub gamma: f64,
    pub gain: Range,
    pub orders: Vec<usize>,
    pub detectors: Vec<Detector>,
    /// Largest accepted `|F_on-off − F_PNR|`.
    pub threshold: f64,
    pub cutoff: usize,
    pub disabled_checks: Vec<String>,
}

impl Default for Fig8Config {
    fn default() -> Self {
        Self {
            name: "fig8".into(),
            gamma: 0.1,
            gain: Range::new(1.0, 10.0, 20),
            orders: vec![1, 3],
            detectors: vec![Detector::Pnr, Detector::OnOff],
            threshold: 1e-2,
            cutoff: 12,
            disabled_checks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig9Config {
    pub name: String,
    pub gamma: f64,
    pub gain: f64,
    pub tau_s: Range,
    pub orders: Vec<usize>,
    pub cutoff: usize,
    pub disabled_checks: Vec<String>,
}

impl Default for Fig9Config {
    fn default() -> Self {
        Self {
            name: "fig9".into(),
            gamma: 0.1,
            gain: 4.0,
            tau_s: Range::new(0.05, 1.0, 20),
            orders: vec![1, 3],
            cutoff: 12,
            disabled_checks: Vec::new(),
        }
    }
}

/// Free grid over every exposed parameter. Coherent inputs use `gamma`,
/// EPR inputs use `chi` and `transmissivity`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub name: String,
    pub input: InputKind,
    pub gain: Range,
    pub gamma: Vec<f64>,
    pub chi: Vec<f64>,
    pub transmissivity: Vec<f64>,
    pub tau_s: Vec<f64>,
    pub tau_d: Vec<f64>,
    pub detectors: Vec<Detector>,
    pub orders: Vec<usize>,
    pub cutoff: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            name: "sweep".into(),
            input: InputKind::Coherent,
            gain: Range::new(1.0, 10.0, 10),
            gamma: vec![0.1],
            chi: vec![0.3],
            transmissivity: vec![0.1],
            tau_s: vec![1.0],
            tau_d: vec![1.0],
            detectors: vec![Detector::Pnr],
            orders: vec![1, 3],
            cutoff: 12,
        }
    }
}

/// Every scenario with its parameters; missing keys take the defaults of
/// the corresponding figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub out_dir: Option<PathBuf>,
    pub fig3: Fig3Config,
    pub fig4: Fig4Config,
    pub fig5: Fig5Config,
    pub fig8: Fig8Config,
    pub fig9: Fig9Config,
    pub sweep: GridConfig,
}

fn in_range(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} = {v} outside [{lo}, {hi}]")))
    }
}

fn non_empty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(Error::Config(format!("{name} must not be empty")))
    } else {
        Ok(())
    }
}

fn check_orders(name: &str, orders: &[usize]) -> Result<()> {
    non_empty(name, orders)?;
    for &o in orders {
        if !matches!(o, 1 | 2 | 3 | 7) {
            return Err(Error::Config(format!("{name}: unsupported scissor order {o}")));
        }
    }
    Ok(())
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if (1..=40).contains(&cutoff) {
        Ok(())
    } else {
        Err(Error::Config(format!("cutoff {cutoff} outside [1, 40]")))
    }
}

const MAX_GAIN: f64 = 1e3;

impl SweepConfig {
    /// Parses TOML text and validates every section.
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Overrides the cutoff of every scenario.
    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.fig3.cutoff = cutoff;
        self.fig4.cutoff = cutoff;
        self.fig5.cutoff = cutoff;
        self.fig8.cutoff = cutoff;
        self.fig9.cutoff = cutoff;
        self.sweep.cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.fig3;
        in_range("fig3.gamma", f.gamma, 0.0, 5.0)?;
        f.gain.validate("fig3.gain", 0.0, MAX_GAIN)?;
        non_empty("fig3.nla", &f.nla)?;
        if f.nla.iter().any(|&n| n == 0 || n > 12) {
            return Err(Error::Config("fig3.nla entries must lie in [1, 12]".into()));
        }
        check_orders("fig3.order", &[f.order])?;
        check_cutoff(f.cutoff)?;

        let f = &self.fig4;
        in_range("fig4.chi", f.chi, 0.0, 0.99)?;
        in_range("fig4.transmissivity", f.transmissivity, 1e-6, 1.0 - 1e-6)?;
        f.gain.validate("fig4.gain", 0.0, MAX_GAIN)?;
        check_orders("fig4.orders", &f.orders)?;
        non_empty("fig4.settings", &f.settings)?;
        for s in &f.settings {
            in_range("fig4.settings.tau_s", s.tau_s, 0.0, 1.0)?;
            in_range("fig4.settings.tau_d", s.tau_d, 0.0, 1.0)?;
        }
        check_cutoff(f.cutoff)?;

        let f = &self.fig5;
        in_range("fig5.chi", f.chi, 0.0, 0.99)?;
        in_range("fig5.transmissivity", f.transmissivity, 0.0, 1.0)?;
        f.gain.validate("fig5.gain", 0.0, MAX_GAIN)?;
        check_orders("fig5.orders", &f.orders)?;
        check_cutoff(f.cutoff)?;

        let f = &self.fig8;
        in_range("fig8.gamma", f.gamma, 0.0, 5.0)?;
        f.gain.validate("fig8.gain", 0.0, MAX_GAIN)?;
        check_orders("fig8.orders", &f.orders)?;
        non_empty("fig8.detectors", &f.detectors)?;
        in_range("fig8.threshold", f.threshold, 0.0, 1.0)?;
        check_cutoff(f.cutoff)?;

        let f = &self.fig9;
        in_range("fig9.gamma", f.gamma, 0.0, 5.0)?;
        in_range("fig9.gain", f.gain, 0.0, MAX_GAIN)?;
        f.tau_s.validate("fig9.tau_s", 0.0, 1.0)?;
        check_orders("fig9.orders", &f.orders)?;
        check_cutoff(f.cutoff)?;

        let f = &self.sweep;
        f.gain.validate("sweep.gain", 0.0, MAX_GAIN)?;
        non_empty("sweep.gamma", &f.gamma)?;
        non_empty("sweep.chi", &f.chi)?;
        non_empty("sweep.transmissivity", &f.transmissivity)?;
        non_empty("sweep.tau_s", &f.tau_s)?;
        non_empty("sweep.tau_d", &f.tau_d)?;
        non_empty("sweep.detectors", &f.detectors)?;
        for &v in &f.gamma {
            in_range("sweep.gamma", v, 0.0, 5.0)?;
        }
        for &v in &f.chi {
            in_range("sweep.chi", v, 0.0, 0.99)?;
        }
        for &v in &f.transmissivity {
            in_range("sweep.transmissivity", v, 0.0, 1.0)?;
        }
        for &v in f.tau_s.iter().chain(&f.tau_d) {
            in_range("sweep.tau", v, 0.0, 1.0)?;
        }
        check_orders("sweep.orders", &f.orders)?;
        check_cutoff(f.cutoff)?;

        for (section, disabled, known) in [
            ("fig3", &self.fig3.disabled_checks, super::FIG3_CHECKS),
            ("fig4", &self.fig4.disabled_checks, super::FIG4_CHECKS),
            ("fig5", &self.fig5.disabled_checks, super::FIG5_CHECKS),
            ("fig8", &self.fig8.disabled_checks, super::FIG8_CHECKS),
            ("fig9", &self.fig9.disabled_checks, super::FIG9_CHECKS),
        ] {
            if let Some(bad) = disabled.iter().find(|d| !known.contains(&d.as_str())) {
                return Err(Error::Config(format!("{section}: unknown check `{bad}`")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(SweepConfig::parse("").unwrap(), SweepConfig::default());
    }

    #[test]
    fn round_trips_through_toml() {
        let mut c = SweepConfig::default();
        c.fig3.gamma = 0.123456789012345;
        c.fig4.settings.push(Imperfection { tau_s: 0.9, tau_d: 0.8 });
        c.sweep.detectors = vec![Detector::OnOff, Detector::Pnr];
        c.sweep.input = InputKind::Epr;
        c.out_dir = Some("somewhere/else".into());
        let text = c.to_toml().unwrap();
        assert_eq!(SweepConfig::parse(&text).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(SweepConfig::parse("[fig3]\ngama = 0.1"), Err(Error::Config(_))));
        assert!(matches!(SweepConfig::parse("colour = 1"), Err(Error::Config(_))));
        assert!(SweepConfig::parse("[fig4]\nchi = 1.5").is_err());
        assert!(SweepConfig::parse("[fig3]\ngain = { min = 1.0, max = 2.0, steps = 0 }").is_err());
        assert!(SweepConfig::parse("[fig8]\norders = []").is_err());
        assert!(SweepConfig::parse("[fig9]\norders = [5]").is_err());
        assert!(SweepConfig::parse("[fig3]\ndisabled_checks = [\"nope\"]").is_err());
        let ok = SweepConfig::parse("[fig3]\ndisabled_checks = [\"beats_three_parallel\"]").unwrap();
        assert_eq!(ok.fig3.disabled_checks.len(), 1);
    }

    #[test]
    fn range_points() {
        assert_eq!(Range::new(2.0, 5.0, 1).points(), vec![2.0]);
        let p = Range::new(1.0, 10.0, 20).points();
        assert_eq!(p.len(), 20);
        assert_eq!((p[0], p[19]), (1.0, 10.0));
    }
}
