//! Study configuration: flat `key=value` text, one key per line, `#`
//! comments. Command-line flags override file values.

use std::fs;
use std::path::Path;

use weilfit_core::study::{CellSpec, GridKind, ScalingRule};
use weilfit_core::targets::{
    random_coefficients, standard_coefficients, Target, TargetKind, STANDARD_DIM,
};
use weilfit_core::{BasisSpec, IndexKind, WeightScheme};

use crate::csvio::{fmt_f64, io_error};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub space: IndexKind,
    pub d: usize,
    pub q_min: u32,
    pub q_max: u32,
    pub scaling: String,
    pub c: f64,
    pub basis: BasisSpec,
    pub weights: WeightScheme,
    pub grid: GridKind,
    pub repetitions: u32,
    pub seed: u64,
    pub target: TargetKind,
    pub target_coefficients: Option<Vec<f64>>,
    pub target_seed: Option<u64>,
    pub n_test: usize,
    pub test_seed: Option<u64>,
    pub threads: Option<usize>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            space: IndexKind::TotalDegree,
            d: 2,
            q_min: 1,
            q_max: 10,
            scaling: "quadratic".into(),
            c: 0.5,
            basis: BasisSpec::CHEBYSHEV_ORTHONORMAL,
            weights: WeightScheme::Unit,
            grid: GridKind::Weil,
            repetitions: 1,
            seed: 0,
            target: TargetKind::ExpSum,
            target_coefficients: None,
            target_seed: None,
            n_test: 2000,
            test_seed: None,
            threads: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "space",
    "d",
    "q_range",
    "q_min",
    "q_max",
    "scaling",
    "c",
    "basis",
    "weights",
    "grid",
    "repetitions",
    "seed",
    "target",
    "target_coefficients",
    "target_seed",
    "n_test",
    "test_seed",
    "threads",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::invalid(format!("invalid value `{value}` for `{key}`")))
}

fn parse_list(key: &str, value: &str) -> CliResult<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse::<f64>(key, v.trim()))
        .collect()
}

/// `a..b`, `a..=b` (both inclusive) or a single order.
pub fn parse_range(value: &str) -> CliResult<(u32, u32)> {
    let (lo, hi) = match value.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (value, value),
    };
    let (lo, hi) = (parse("q_range", lo.trim())?, parse("q_range", hi.trim())?);
    if lo > hi {
        return Err(CliError::invalid(format!("empty q range {value}")));
    }
    Ok((lo, hi))
}

impl StudyConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let mut cfg = StudyConfig::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_error = |message: String| CliError::Parse {
                path: path.to_path_buf(),
                line: no as u64 + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_error(format!("expected key=value, got `{line}`")))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| parse_error(e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "space" => self.space = value.parse()?,
            "d" => self.d = parse(key, value)?,
            "q_range" => (self.q_min, self.q_max) = parse_range(value)?,
            "q_min" => self.q_min = parse(key, value)?,
            "q_max" => self.q_max = parse(key, value)?,
            "scaling" => self.scaling = value.to_string(),
            "c" => self.c = parse(key, value)?,
            "basis" => self.basis = value.parse()?,
            "weights" => self.weights = value.parse()?,
            "grid" => self.grid = value.parse()?,
            "repetitions" => self.repetitions = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "target" => self.target = value.parse()?,
            "target_coefficients" => self.target_coefficients = Some(parse_list(key, value)?),
            "target_seed" => self.target_seed = Some(parse(key, value)?),
            "n_test" => self.n_test = parse(key, value)?,
            "test_seed" => self.test_seed = Some(parse(key, value)?),
            "threads" => self.threads = Some(parse(key, value)?),
            other => {
                return Err(CliError::invalid(format!(
                    "unknown config key `{other}`; known keys: {}",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Checks consistency and applies forced values.
    pub fn resolve(mut self) -> CliResult<Self> {
        if self.d == 0 {
            return Err(CliError::invalid("d must be at least 1"));
        }
        if self.q_min > self.q_max {
            return Err(CliError::invalid(format!(
                "empty q range {}..{}",
                self.q_min, self.q_max
            )));
        }
        if self.n_test == 0 {
            return Err(CliError::invalid("n_test must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(CliError::invalid("repetitions must be at least 1"));
        }
        if self.grid.is_deterministic() {
            self.repetitions = 1;
        }
        if self.threads == Some(0) {
            return Err(CliError::invalid("threads must be at least 1"));
        }
        if let Some(c) = &self.target_coefficients {
            if c.len() != self.d {
                return Err(CliError::invalid(format!(
                    "{} target coefficients for d = {}",
                    c.len(),
                    self.d
                )));
            }
        }
        self.rule()?;
        Ok(self)
    }

    pub fn rule(&self) -> CliResult<ScalingRule> {
        Ok(ScalingRule::new(&self.scaling, self.c)?)
    }

    pub fn cell_spec(&self) -> CliResult<CellSpec> {
        Ok(CellSpec {
            space: self.space,
            d: self.d,
            basis: self.basis,
            weights: self.weights,
            grid: self.grid,
            rule: self.rule()?,
        })
    }

    pub fn test_seed(&self) -> u64 {
        self.test_seed.unwrap_or(self.seed)
    }

    /// Explicit coefficients, else seeded ones, else the standard set.
    pub fn target_function(&self) -> CliResult<Target> {
        let coefficients = match (&self.target_coefficients, self.target_seed) {
            (Some(c), _) => c.clone(),
            (None, Some(seed)) => random_coefficients(self.d, seed),
            (None, None) => standard_coefficients(self.target, self.d).map_err(|_| {
                CliError::invalid(format!(
                    "standard coefficients cover d <= {STANDARD_DIM}; set target_seed or target_coefficients"
                ))
            })?,
        };
        Ok(Target::new(self.target, coefficients))
    }

    /// Resolved configuration as `key=value` lines.
    pub fn echo(&self, with_target: bool) -> CliResult<Vec<String>> {
        let mut lines = vec![
            format!("space={}", self.space.as_str()),
            format!("d={}", self.d),
            format!("q_range={}..{}", self.q_min, self.q_max),
            format!("scaling={}", self.scaling),
            format!("c={}", fmt_f64(self.c)),
            format!("basis={}", self.basis),
            format!("weights={}", self.weights),
            format!("grid={}", self.grid),
            format!("repetitions={}", self.repetitions),
            format!("seed={}", self.seed),
        ];
        if with_target {
            let target = self.target_function()?;
            lines.push(format!("target={}", self.target));
            lines.push(format!(
                "target_coefficients={}",
                target
                    .coefficients
                    .iter()
                    .map(|c| fmt_f64(*c))
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            lines.push(format!("n_test={}", self.n_test));
            lines.push(format!("test_seed={}", self.test_seed()));
        }
        Ok(lines)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use weilfit_core::Measure;

    #[test]
    fn defaults_resolve() {
        let cfg = StudyConfig::default().resolve().unwrap();
        assert_eq!(cfg.rule().unwrap(), ScalingRule::Quadratic(0.5));
    }

    #[test]
    fn set_every_key() {
        let mut cfg = StudyConfig::default();
        for (k, v) in [
            ("space", "tp"),
            ("d", "3"),
            ("q_range", "2..=5"),
            ("scaling", "linear"),
            ("c", "2"),
            ("basis", "legendre/orthonormal"),
            ("weights", "density_ratio"),
            ("grid", "mc_uniform"),
            ("repetitions", "4"),
            ("seed", "9"),
            ("target", "cossum"),
            ("target_coefficients", "0.1, 0.2,0.3"),
            ("n_test", "100"),
            ("test_seed", "5"),
            ("threads", "2"),
        ] {
            cfg.set(k, v).unwrap();
        }
        let cfg = cfg.resolve().unwrap();
        assert_eq!((cfg.q_min, cfg.q_max), (2, 5));
        assert_eq!(cfg.grid, GridKind::MonteCarlo(Measure::Uniform));
        assert_eq!(cfg.weights, WeightScheme::DensityRatio(Measure::Uniform));
        assert_eq!(cfg.repetitions, 4);
        assert_eq!(
            cfg.target_function().unwrap().coefficients,
            vec![0.1, 0.2, 0.3]
        );
    }

    #[test]
    fn weil_forces_single_repetition() {
        let mut cfg = StudyConfig::default();
        cfg.set("repetitions", "10").unwrap();
        assert_eq!(cfg.resolve().unwrap().repetitions, 1);
    }

    #[test]
    fn rejects_bad_input() {
        let mut cfg = StudyConfig::default();
        assert!(cfg.set("colour", "red").is_err());
        assert!(cfg.set("d", "two").is_err());
        assert!(cfg.set("basis", "legendre/paper").is_err());
        assert!(parse_range("5..2").is_err());
        cfg.set("c", "-1").unwrap();
        assert!(cfg.resolve().is_err());
    }

    #[test]
    fn echo_round_trips() {
        let mut cfg = StudyConfig::default();
        cfg.set("target_seed", "3").unwrap();
        let cfg = cfg.resolve().unwrap();
        let mut again = StudyConfig::default();
        for line in cfg.echo(true).unwrap() {
            let (k, v) = line.split_once('=').unwrap();
            again.set(k, v).unwrap();
        }
        let again = again.resolve().unwrap();
        assert_eq!(
            again.target_function().unwrap(),
            cfg.target_function().unwrap()
        );
        assert_eq!(again.cell_spec().unwrap(), cfg.cell_spec().unwrap());
    }
}
