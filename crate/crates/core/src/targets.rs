//! Test functions for convergence studies, with a fixed standard coefficient
//! table and a seeded generator.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetKind {
    /// `exp(-Σ c_i y_i)`
    ExpSum,
    /// `cos(Σ c_i y_i)`
    CosSum,
    /// `|Σ c_i y_i|³`
    AbsCube,
}

impl TargetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetKind::ExpSum => "expsum",
            TargetKind::CosSum => "cossum",
            TargetKind::AbsCube => "abscube",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "expsum" => Ok(TargetKind::ExpSum),
            "cossum" => Ok(TargetKind::CosSum),
            "abscube" => Ok(TargetKind::AbsCube),
            other => Err(invalid(format!("unknown target `{other}`"))),
        }
    }
}

/// Longest coefficient vector in the standard tables.
pub const STANDARD_DIM: usize = 8;

const EXPSUM_COEFFS: [f64; STANDARD_DIM] = [0.73, 0.41, 0.58, 0.26, 0.92, 0.35, 0.67, 0.19];
const COSSUM_COEFFS: [f64; STANDARD_DIM] = [0.52, 0.87, 0.31, 0.64, 0.45, 0.78, 0.23, 0.96];
const ABSCUBE_COEFFS: [f64; STANDARD_DIM] = [0.45, 0.78, 0.23, 0.61, 0.84, 0.37, 0.56, 0.29];

/// The repository's fixed coefficients for `kind` in `d` variables.
pub fn standard_coefficients(kind: TargetKind, d: usize) -> Result<Vec<f64>> {
    if d == 0 || d > STANDARD_DIM {
        return Err(invalid(format!(
            "standard coefficients exist for 1 <= d <= {STANDARD_DIM}, not d = {d}"
        )));
    }
    let table = match kind {
        TargetKind::ExpSum => &EXPSUM_COEFFS,
        TargetKind::CosSum => &COSSUM_COEFFS,
        TargetKind::AbsCube => &ABSCUBE_COEFFS,
    };
    Ok(table[..d].to_vec())
}

/// `d` coefficients drawn uniformly from `[0, 1)`.
pub fn random_coefficients(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = SeededRng::new(seed);
    (0..d).map(|_| rng.unit()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Target {
    pub kind: TargetKind,
    pub coefficients: Vec<f64>,
}

impl Target {
    pub fn new(kind: TargetKind, coefficients: Vec<f64>) -> Self {
        Target { kind, coefficients }
    }

    pub fn standard(kind: TargetKind, d: usize) -> Result<Self> {
        Ok(Target::new(kind, standard_coefficients(kind, d)?))
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        let s: f64 = self.coefficients.iter().zip(y).map(|(c, v)| c * v).sum();
        match self.kind {
            TargetKind::ExpSum => libm::exp(-s),
            TargetKind::CosSum => libm::cos(s),
            TargetKind::AbsCube => {
                let a = s.abs();
                a * a * a
            }
        }
    }
}
