//! Flag types and the merge of `--config` files with command-line values.

use std::collections::BTreeMap;
use std::str::FromStr;

use clap::parser::ValueSource;
use clap::ArgMatches;
use floquet_core::model::key_value_pairs;
use floquet_core::sambe::linspace;

use crate::{CliError, Common};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Units {
    /// Energies are multiples of omega
    Omega,
    /// Energies are absolute
    Absolute,
}

impl FromStr for Units {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "omega" => Ok(Units::Omega),
            "absolute" => Ok(Units::Absolute),
            other => Err(format!("unknown units `{other}` (expected omega or absolute)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `lo:hi:n`, inclusive; a bare number is a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("bad number `{p}` in range `{s}`"));
        let range = match parts.as_slice() {
            [x] => {
                let x = num(x)?;
                Range { lo: x, hi: x, n: 1 }
            }
            [lo, hi, n] => Range {
                lo: num(lo)?,
                hi: num(hi)?,
                n: n.trim().parse().map_err(|_| format!("bad point count `{n}` in range `{s}`"))?,
            },
            _ => return Err(format!("range `{s}` must look like lo:hi:n")),
        };
        if !range.lo.is_finite() || !range.hi.is_finite() || range.lo > range.hi {
            return Err(format!("range `{s}` needs finite lo <= hi"));
        }
        match range.n {
            0 => Err(format!("range `{s}` has no points")),
            1 if range.lo != range.hi => Err(format!("range `{s}` needs at least 2 points")),
            _ => Ok(range),
        }
    }
}

impl Range {
    pub fn values(&self, scale: f64) -> Vec<f64> {
        linspace(self.lo * scale, self.hi * scale, self.n)
    }
}

/// Values read from `--config`.
#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

const KNOWN_KEYS: [&str; 5] = ["epsilon", "beta", "alpha", "omega", "units"];

impl Settings {
    pub fn load(common: &Common) -> Result<Self, CliError> {
        let Some(path) = &common.config else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = BTreeMap::new();
        for (key, value) in key_value_pairs(&text)? {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("unknown key `{key}` in {}", path.display())));
            }
            values.insert(key, value);
        }
        Ok(Self { values })
    }

    /// The command-line value if given explicitly, else the config value,
    /// else the flag default.
    pub fn resolve<T>(&self, matches: &ArgMatches, id: &str, flag: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if matches.value_source(id) == Some(ValueSource::CommandLine) {
            return Ok(flag);
        }
        match self.values.get(id) {
            Some(v) => v
                .parse()
                .map_err(|e| CliError::Usage(format!("config value for `{id}`: {e}"))),
            None => Ok(flag),
        }
    }

    /// `(Ω, energy scale)` after merging units and omega.
    pub fn frequency(&self, matches: &ArgMatches, common: &Common) -> Result<(f64, f64), CliError> {
        let units: Units = self.resolve(matches, "units", common.units)?;
        let omega: f64 = self.resolve(matches, "omega", common.omega)?;
        if !omega.is_finite() || omega <= 0.0 {
            return Err(CliError::Usage(format!("omega must be positive, got {omega}")));
        }
        Ok((omega, if units == Units::Omega { omega } else { 1.0 }))
    }
}
