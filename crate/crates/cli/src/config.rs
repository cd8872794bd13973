//! Command-line flags, the key=value config file, and their merge into a
//! validated [`RunConfig`]. Flags win over the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use morsept_core::potentials::{MorseParams, PtParams};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    PotentialCurve,
    Spectrum,
    Isospectral,
    GammaSweep,
    Riccati,
    HankelVerify,
    WavefunctionMap,
    EnergyShift,
    PotentialTermMap,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::PotentialCurve => "potential-curve",
            Experiment::Spectrum => "spectrum",
            Experiment::Isospectral => "isospectral",
            Experiment::GammaSweep => "gamma-sweep",
            Experiment::Riccati => "riccati",
            Experiment::HankelVerify => "hankel-verify",
            Experiment::WavefunctionMap => "wavefunction-map",
            Experiment::EnergyShift => "energy-shift",
            Experiment::PotentialTermMap => "potential-term-map",
        }
    }

    pub fn all() -> &'static [Experiment] {
        Experiment::value_variants()
    }

    /// Experiments that always involve both families.
    fn pairs_families(self) -> bool {
        matches!(
            self,
            Experiment::WavefunctionMap | Experiment::EnergyShift | Experiment::PotentialTermMap
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyChoice {
    Morse,
    Pt,
    Both,
}

impl FamilyChoice {
    pub fn name(self) -> &'static str {
        match self {
            FamilyChoice::Morse => "morse",
            FamilyChoice::Pt => "pt",
            FamilyChoice::Both => "both",
        }
    }

    pub fn morse(self) -> bool {
        self != FamilyChoice::Pt
    }

    pub fn pt(self) -> bool {
        self != FamilyChoice::Morse
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "morsept", version, about = "Generalized Morse / Pöschl-Teller experiments")]
pub struct Cli {
    /// Experiment to run (may come from the config file instead).
    #[arg(value_enum)]
    pub experiment: Option<Experiment>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyChoice>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Defaults to λ − 1/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Bessel order; selects the Morse level n = λ − 1/2 − m.
    #[arg(long)]
    pub order_m: Option<u32>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long)]
    pub reproducible: bool,
    /// Flat key=value file; keys are the long flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridOverride {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub n: Option<usize>,
}

impl GridOverride {
    pub fn is_empty(&self) -> bool {
        self.min.is_none() && self.max.is_none() && self.n.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub family: FamilyChoice,
    pub lambda: f64,
    pub mu: f64,
    pub gamma: f64,
    pub grid: GridOverride,
    pub order_m: Option<u32>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub reproducible: bool,
}

pub const DEFAULT_LAMBDA: f64 = 4.5;
pub const DEFAULT_GAMMA: f64 = 1.0;

const KEYS: &[&str] = &[
    "experiment",
    "family",
    "lambda",
    "mu",
    "gamma",
    "grid-min",
    "grid-max",
    "grid-n",
    "order-m",
    "output",
    "format",
    "reproducible",
];

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got {line:?}", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!("config line {}: duplicate key {key:?}", i + 1)));
        }
    }
    if map.is_empty() {
        return Err(CliError::Usage("config file has no settings".into()));
    }
    Ok(map)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn from_file<T>(
    file: &BTreeMap<String, String>,
    key: &str,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Option<T>, CliError> {
    file.get(key)
        .map(|v| parse(v).map_err(|e| CliError::Usage(format!("config {key}: {e}"))))
        .transpose()
}

fn number<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| format!("{s:?}: {e}"))
}

fn choice<T: ValueEnum>(s: &str) -> Result<T, String> {
    T::from_str(s, true)
}

fn boolean(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("{s:?} is not a boolean")),
    }
}

impl RunConfig {
    /// Merges flags over the config file, fills defaults and validates.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let experiment = match cli.experiment {
            Some(e) => e,
            None => from_file(&file, "experiment", choice)?
                .ok_or_else(|| CliError::Usage("experiment: none given".into()))?,
        };
        let lambda = cli.lambda.or(from_file(&file, "lambda", number)?).unwrap_or(DEFAULT_LAMBDA);
        let config = RunConfig {
            experiment,
            family: cli
                .family
                .or(from_file(&file, "family", choice)?)
                .unwrap_or(FamilyChoice::Both),
            lambda,
            // Paired with λ by default, where the two spectra coincide.
            mu: cli.mu.or(from_file(&file, "mu", number)?).unwrap_or(lambda - 0.5),
            gamma: cli.gamma.or(from_file(&file, "gamma", number)?).unwrap_or(DEFAULT_GAMMA),
            grid: GridOverride {
                min: cli.grid_min.or(from_file(&file, "grid-min", number)?),
                max: cli.grid_max.or(from_file(&file, "grid-max", number)?),
                n: cli.grid_n.or(from_file(&file, "grid-n", number)?),
            },
            order_m: cli.order_m.or(from_file(&file, "order-m", number)?),
            output: cli.output.or(from_file(&file, "output", |s| Ok(PathBuf::from(s)))?),
            format: cli.format.or(from_file(&file, "format", choice)?).unwrap_or(Format::Csv),
            reproducible: cli.reproducible || from_file(&file, "reproducible", boolean)?.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |e: morsept_core::Error| CliError::Usage(e.to_string());
        let both = self.experiment.pairs_families();
        if both || self.family.morse() {
            self.morse().map_err(usage)?;
        }
        if both || self.family.pt() {
            self.pt().map_err(usage)?;
        }
        if matches!(self.experiment, Experiment::WavefunctionMap | Experiment::PotentialTermMap) {
            let a = self.lambda - 0.5;
            if a.fract() != 0.0 {
                return Err(CliError::Usage(format!(
                    "lambda: {} must make lambda - 1/2 an integer for {}",
                    self.lambda,
                    self.experiment.name()
                )));
            }
            if (self.mu - a).abs() > 1e-12 {
                return Err(CliError::Usage(format!(
                    "mu: {} must equal lambda - 1/2 = {a} for {}",
                    self.mu,
                    self.experiment.name()
                )));
            }
        }
        if let Some(n) = self.grid.n {
            if n < 16 {
                return Err(CliError::Usage(format!("grid-n: {n} is below the minimum of 16")));
            }
        }
        if let (Some(lo), Some(hi)) = (self.grid.min, self.grid.max) {
            if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                return Err(CliError::Usage(format!("grid-min {lo} must be below grid-max {hi}")));
            }
        }
        Ok(())
    }

    pub fn morse(&self) -> morsept_core::Result<MorseParams> {
        MorseParams::new(self.lambda, self.gamma)
    }

    pub fn pt(&self) -> morsept_core::Result<PtParams> {
        PtParams::new(self.mu, self.gamma)
    }
}
