//! `key = value` configuration for the suites.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! rejected so a typo cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CliError, Result};

/// Keys, defaults and one-line descriptions.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("samples", "1000", "random cases per sampled check"),
    ("lattice_samples", "500", "random regions per separation mode"),
    ("grid", "41x41", "lattice grid, cells per axis (time first)"),
    ("fd_step", "1e-3", "finite-difference step"),
    ("fd_tol", "1e-5", "tolerance on finite-difference kinematics"),
    ("curvature_tol", "1e-4", "tolerance on the projected curvature identity"),
    ("accel_step", "1e-4", "finite-difference step for the acceleration norm"),
    ("fl_radius", "10", "length scale R of the Fock-Lorentz checks"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Default for Config {
    fn default() -> Self {
        Self { values: KEYS.iter().map(|(k, v, _)| (k.to_string(), v.to_string())).collect() }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets a known key after validating the value's type.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.iter().any(|(k, _, _)| *k == key) {
            return Err(CliError::Config(format!("unknown key {key}")));
        }
        match key {
            "grid" => {
                parse_grid(value)?;
            }
            "samples" | "lattice_samples" => {
                value.parse::<usize>().map_err(|_| bad(key, value))?;
            }
            _ => {
                let x: f64 = value.parse().map_err(|_| bad(key, value))?;
                if !(x > 0.0 && x.is_finite()) {
                    return Err(bad(key, value));
                }
            }
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn echo(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn usize(&self, key: &str) -> usize {
        self.values[key].parse().expect("validated in set")
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.values[key].parse().expect("validated in set")
    }

    pub fn grid(&self) -> Vec<usize> {
        parse_grid(&self.values["grid"]).expect("validated in set")
    }
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Config(format!("bad value {value:?} for {key}"))
}

/// `41x41` or `9x9x9`; every axis needs at least one cell.
pub fn parse_grid(s: &str) -> Result<Vec<usize>> {
    let sizes: Option<Vec<usize>> = s.split('x').map(|p| p.trim().parse().ok().filter(|&n| n > 0)).collect();
    match sizes {
        Some(v) if v.len() >= 2 => Ok(v),
        _ => Err(CliError::Config(format!("bad grid {s:?}, expected WxH"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let c = Config::parse("# comment\n\nsamples = 20\nfd_step=2e-3\n").unwrap();
        assert_eq!(c.usize("samples"), 20);
        assert_eq!(c.f64("fd_step"), 2e-3);
        assert_eq!(c.grid(), vec![41, 41]);
        assert!(Config::parse("nope = 1").is_err());
        assert!(Config::parse("samples").is_err());
        assert!(Config::parse("fd_step = -1").is_err());
        assert!(Config::parse("grid = 4x").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("61x61").unwrap(), vec![61, 61]);
        assert_eq!(parse_grid("9x9x9").unwrap(), vec![9, 9, 9]);
        assert!(parse_grid("41").is_err() && parse_grid("0x5").is_err());
    }
}
