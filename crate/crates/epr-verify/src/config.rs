//! `key = value` configuration files.

use epr_phase::{Axes, ComplexGrid};
use serde::Serialize;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`; known keys: {}", KNOWN_KEYS.join(", "))]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("`{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("unknown suite `{0}`; known suites: all, fock, states, weyl, xform, ordering")]
    UnknownSuite(String),
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), reason: reason.into() }
}

/// Suites in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fock,
    States,
    Weyl,
    Xform,
    Ordering,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Fock, Suite::States, Suite::Weyl, Suite::Xform, Suite::Ordering];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fock => "fock",
            Suite::States => "states",
            Suite::Weyl => "weyl",
            Suite::Xform => "xform",
            Suite::Ordering => "ordering",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses one suite name; `all` expands to every suite.
pub fn parse_suites(text: &str) -> Result<Vec<Suite>, ConfigError> {
    let mut out = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(*Suite::ALL.iter().find(|s| s.name() == name).ok_or_else(|| ConfigError::UnknownSuite(name.into()))?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parallelism {
    Auto,
    Fixed(usize),
}

impl Parallelism {
    pub fn threads(self) -> usize {
        match self {
            Parallelism::Auto => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            Parallelism::Fixed(n) => n,
        }
    }
}

/// Point count and half-extent of one plane grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub points: usize,
    pub extent: f64,
}

impl GridSpec {
    pub const fn new(points: usize, extent: f64) -> Self {
        GridSpec { points, extent }
    }

    pub fn plane(self) -> ComplexGrid {
        ComplexGrid::plane(self.points, self.extent).expect("validated grid")
    }

    pub fn planes(self) -> ComplexGrid {
        ComplexGrid::new(Axes::Four, self.points, self.extent).expect("validated grid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub cutoff: usize,
    pub scalar_cutoff: usize,
    pub block_level: usize,
    pub inner: GridSpec,
    pub outer: GridSpec,
    pub refined_inner: GridSpec,
    pub refined_outer: GridSpec,
    pub symbol_grid: GridSpec,
    pub oracle_cutoff: usize,
    pub oracle_grid: GridSpec,
    pub coherent_grid: GridSpec,
    pub resolution_cutoff: usize,
    pub resolution_grid: GridSpec,
    pub resolution_level: usize,
    pub hermite_grid: GridSpec,
    pub suites: Vec<Suite>,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub csv: Option<PathBuf>,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cutoff: 10,
            scalar_cutoff: 30,
            block_level: 3,
            inner: GridSpec::new(41, 4.5),
            outer: GridSpec::new(21, 3.5),
            refined_inner: GridSpec::new(49, 5.5),
            refined_outer: GridSpec::new(27, 4.5),
            symbol_grid: GridSpec::new(19, 4.5),
            oracle_cutoff: 18,
            oracle_grid: GridSpec::new(57, 7.0),
            coherent_grid: GridSpec::new(71, 7.0),
            resolution_cutoff: 12,
            resolution_grid: GridSpec::new(61, 5.0),
            resolution_level: 4,
            hermite_grid: GridSpec::new(1901, 38.0),
            suites: Suite::ALL.to_vec(),
            output: None,
            csv: None,
            parallelism: Parallelism::Auto,
        }
    }
}

pub const KNOWN_KEYS: &[&str] = &[
    "cutoff",
    "scalar_cutoff",
    "block_level",
    "inner_points",
    "inner_extent",
    "outer_points",
    "outer_extent",
    "refined_inner_points",
    "refined_inner_extent",
    "refined_outer_points",
    "refined_outer_extent",
    "symbol_points",
    "symbol_extent",
    "oracle_cutoff",
    "oracle_points",
    "oracle_extent",
    "coherent_points",
    "coherent_extent",
    "resolution_cutoff",
    "resolution_points",
    "resolution_extent",
    "resolution_level",
    "hermite_points",
    "hermite_extent",
    "suites",
    "output",
    "csv",
    "parallelism",
];

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| invalid(key, format!("cannot parse `{value}`")))
}

impl SuiteConfig {
    /// Applies one setting without validating cross-field invariants.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "cutoff" => self.cutoff = number(key, value)?,
            "scalar_cutoff" => self.scalar_cutoff = number(key, value)?,
            "block_level" => self.block_level = number(key, value)?,
            "inner_points" => self.inner.points = number(key, value)?,
            "inner_extent" => self.inner.extent = number(key, value)?,
            "outer_points" => self.outer.points = number(key, value)?,
            "outer_extent" => self.outer.extent = number(key, value)?,
            "refined_inner_points" => self.refined_inner.points = number(key, value)?,
            "refined_inner_extent" => self.refined_inner.extent = number(key, value)?,
            "refined_outer_points" => self.refined_outer.points = number(key, value)?,
            "refined_outer_extent" => self.refined_outer.extent = number(key, value)?,
            "symbol_points" => self.symbol_grid.points = number(key, value)?,
            "symbol_extent" => self.symbol_grid.extent = number(key, value)?,
            "oracle_cutoff" => self.oracle_cutoff = number(key, value)?,
            "oracle_points" => self.oracle_grid.points = number(key, value)?,
            "oracle_extent" => self.oracle_grid.extent = number(key, value)?,
            "coherent_points" => self.coherent_grid.points = number(key, value)?,
            "coherent_extent" => self.coherent_grid.extent = number(key, value)?,
            "resolution_cutoff" => self.resolution_cutoff = number(key, value)?,
            "resolution_points" => self.resolution_grid.points = number(key, value)?,
            "resolution_extent" => self.resolution_grid.extent = number(key, value)?,
            "resolution_level" => self.resolution_level = number(key, value)?,
            "hermite_points" => self.hermite_grid.points = number(key, value)?,
            "hermite_extent" => self.hermite_grid.extent = number(key, value)?,
            "suites" => self.suites = parse_suites(value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            "csv" => self.csv = Some(PathBuf::from(value)),
            "parallelism" => {
                self.parallelism = if value == "auto" { Parallelism::Auto } else { Parallelism::Fixed(number(key, value)?) }
            }
            _ => return Err(ConfigError::UnknownKey { line: 0, key: key.into() }),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let grids = [
            ("inner", self.inner),
            ("outer", self.outer),
            ("refined_inner", self.refined_inner),
            ("refined_outer", self.refined_outer),
            ("symbol", self.symbol_grid),
            ("oracle", self.oracle_grid),
            ("coherent", self.coherent_grid),
            ("resolution", self.resolution_grid),
            ("hermite", self.hermite_grid),
        ];
        for (name, g) in grids {
            if g.points < 5 || g.points % 2 == 0 {
                return Err(invalid(&format!("{name}_points"), "G must be odd >= 5"));
            }
            if !(g.extent.is_finite() && g.extent > 0.0) {
                return Err(invalid(&format!("{name}_extent"), "L must be positive"));
            }
        }
        let cutoffs = [
            ("cutoff", self.cutoff, 2),
            ("scalar_cutoff", self.scalar_cutoff, 3),
            ("oracle_cutoff", self.oracle_cutoff, 5),
            ("resolution_cutoff", self.resolution_cutoff, 1),
        ];
        for (name, c, min) in cutoffs {
            if !(min..=170).contains(&c) {
                return Err(invalid(name, format!("must lie in {min}..=170")));
            }
        }
        if self.block_level == 0 || self.block_level >= self.cutoff {
            return Err(invalid("block_level", "must lie in 1..cutoff"));
        }
        if self.resolution_level > self.resolution_cutoff {
            return Err(invalid("resolution_level", "must not exceed resolution_cutoff"));
        }
        if self.suites.is_empty() {
            return Err(invalid("suites", "no suite selected"));
        }
        if self.parallelism == Parallelism::Fixed(0) {
            return Err(invalid("parallelism", "must be at least 1"));
        }
        Ok(())
    }
}

/// Parses `key = value` lines; `#` starts a comment. Missing keys keep their
/// defaults.
pub fn parse_config(text: &str) -> Result<SuiteConfig, ConfigError> {
    let mut config = SuiteConfig::default();
    let mut seen = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { line, key: key.into() });
        }
        if seen.contains(&key) {
            return Err(ConfigError::Duplicate { line, key: key.into() });
        }
        seen.push(key);
        config.set(key, value)?;
    }
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(parse_config("").unwrap(), SuiteConfig::default());
        assert_eq!(parse_config("# nothing\n\n").unwrap(), SuiteConfig::default());
    }

    #[test]
    fn single_override() {
        let c = parse_config("cutoff = 12").unwrap();
        assert_eq!(c.cutoff, 12);
        assert_eq!(SuiteConfig { cutoff: 10, ..c }, SuiteConfig::default());
    }

    #[test]
    fn even_point_count_is_rejected() {
        let err = parse_config("outer_points = 4").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { ref field, .. } if field == "outer_points"), "{err}");
    }

    #[test]
    fn zero_cutoff_is_rejected() {
        assert!(matches!(parse_config("cutoff = 0"), Err(ConfigError::Invalid { ref field, .. }) if field == "cutoff"));
    }

    #[test]
    fn unknown_key_lists_known_keys() {
        let err = parse_config("cutof = 3").unwrap_err();
        assert!(err.to_string().contains("scalar_cutoff"));
        assert!(matches!(err, ConfigError::UnknownKey { line: 1, .. }));
    }

    #[test]
    fn suites_and_comments() {
        let c = parse_config("suites = ordering, fock # trailing\nparallelism = 3\n").unwrap();
        assert_eq!(c.suites, vec![Suite::Fock, Suite::Ordering]);
        assert_eq!(c.parallelism, Parallelism::Fixed(3));
        assert!(parse_config("suites = bogus").is_err());
        assert!(parse_config("cutoff = 4\ncutoff = 5").is_err());
        assert!(parse_config("cutoff 4").is_err());
    }
}
