//! Collocation point sets: the deterministic Weil grid and seeded Monte Carlo
//! samplers, plus the exponential sums and box counts used to study how the
//! grid distributes.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::primes::is_prime;
use crate::rng::SeededRng;

/// Product probability measures on `[-1, 1]^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Arcsine density `π^{-d} ∏ (1 - y²)^{-1/2}`.
    Chebyshev,
    /// Uniform density `2^{-d}`.
    Uniform,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Chebyshev => "chebyshev",
            Measure::Uniform => "uniform",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chebyshev" | "arcsine" => Ok(Measure::Chebyshev),
            "uniform" => Ok(Measure::Uniform),
            other => Err(invalid(format!("unknown measure `{other}`"))),
        }
    }
}

/// The grid `Θ_M`: rows `j = 0..=⌊M/2⌋`, row `j` being
/// `cos(2π (j mod M, j² mod M, …, j^d mod M) / M)`.
///
/// Rows past `⌊M/2⌋` repeat earlier ones and are never generated.
#[derive(Clone, Debug, PartialEq)]
pub struct WeilGrid {
    modulus: u64,
    dim: usize,
    residues: Vec<u64>,
    points: Vec<f64>,
}

/// `cos(2π r / M)` for `0 ≤ r < M`, evaluated with the argument folded into
/// `[0, π]` so that `r` and `M - r` give identical values.
fn cos_residue(r: u64, modulus: u64) -> f64 {
    let folded = r.min(modulus - r);
    libm::cos(2.0 * PI * folded as f64 / modulus as f64)
}

impl WeilGrid {
    pub fn new(modulus: u64, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("dimension d must be at least 1"));
        }
        if !is_prime(modulus) {
            return Err(invalid(format!("Weil grid modulus {modulus} is not prime")));
        }
        let rows = (modulus / 2 + 1) as usize;
        let m = u128::from(modulus);
        let mut residues = Vec::with_capacity(rows * d);
        for j in 0..rows as u64 {
            let base = u128::from(j) % m;
            let mut r = base;
            for _ in 0..d {
                residues.push(r as u64);
                r = r * base % m;
            }
        }
        let points = residues.iter().map(|&r| cos_residue(r, modulus)).collect();
        Ok(WeilGrid {
            modulus,
            dim: d,
            residues,
            points,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `⌊M/2⌋`; the grid has `half() + 1` rows.
    pub fn half(&self) -> u64 {
        self.modulus / 2
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn residues(&self, j: usize) -> &[u64] {
        &self.residues[j * self.dim..(j + 1) * self.dim]
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.points[j * self.dim..(j + 1) * self.dim]
    }

    pub fn to_sample_set(&self) -> SampleSet {
        SampleSet {
            points: self.points.clone(),
            dim: self.dim,
            provenance: Provenance::Weil {
                modulus: self.modulus,
            },
            seed: None,
        }
    }

    pub fn into_sample_set(self) -> SampleSet {
        SampleSet {
            points: self.points,
            dim: self.dim,
            provenance: Provenance::Weil {
                modulus: self.modulus,
            },
            seed: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Weil {
        modulus: u64,
    },
    MonteCarlo(Measure),
    /// Points supplied from outside, e.g. read from a file.
    External,
}

/// A table of `n` points in `[-1, 1]^d`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    points: Vec<f64>,
    dim: usize,
    provenance: Provenance,
    seed: Option<u64>,
}

impl SampleSet {
    /// Wrap caller-supplied points. Every coordinate must lie in `[-1, 1]`.
    pub fn from_points(points: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension d must be at least 1"));
        }
        if points.len() % dim != 0 {
            return Err(invalid(format!(
                "{} coordinates do not form rows of dimension {dim}",
                points.len()
            )));
        }
        if let Some(&value) = points.iter().find(|y| !(-1.0..=1.0).contains(*y)) {
            return Err(Error::Domain { value });
        }
        Ok(SampleSet {
            points,
            dim,
            provenance: Provenance::External,
            seed: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    pub fn iter(&self) -> core::slice::ChunksExact<'_, f64> {
        self.points.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.points
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// `n` independent points from `measure`, reproducible per seed.
///
/// Uniform coordinates are `2u - 1`; Chebyshev coordinates are `cos(πu)`, with
/// `u` the [`SeededRng::unit`] stream consumed row by row.
pub fn mc_sample(measure: Measure, n: usize, d: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 || d == 0 {
        return Err(invalid("Monte Carlo sample needs n >= 1 and d >= 1"));
    }
    let mut rng = SeededRng::new(seed);
    let points = (0..n * d)
        .map(|_| {
            let u = rng.unit();
            match measure {
                Measure::Uniform => 2.0 * u - 1.0,
                Measure::Chebyshev => libm::cos(PI * u),
            }
        })
        .collect();
    Ok(SampleSet {
        points,
        dim: d,
        provenance: Provenance::MonteCarlo(measure),
        seed: Some(seed),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn norm(self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

/// `Σ_{j=0}^{M-1} exp(2πi f(j)/M)` for `f(x) = c₁x + c₂x² + … + c_d x^d`.
///
/// `f(j) mod M` is evaluated exactly. Requires a prime `M` larger than the
/// number of coefficients and at least one coefficient not divisible by `M`.
pub fn weil_exponential_sum(coeffs: &[i64], modulus: u64) -> Result<Complex> {
    if !is_prime(modulus) {
        return Err(invalid(format!("modulus {modulus} is not prime")));
    }
    if coeffs.is_empty() {
        return Err(invalid("exponential sum needs at least one coefficient"));
    }
    if modulus <= coeffs.len() as u64 {
        return Err(Error::Precondition(format!(
            "modulus {modulus} must exceed the polynomial degree {}",
            coeffs.len()
        )));
    }
    let m = i128::from(modulus);
    let reduced: Vec<u128> = coeffs
        .iter()
        .map(|&c| i128::from(c).rem_euclid(m) as u128)
        .collect();
    if reduced.iter().all(|&c| c == 0) {
        return Err(Error::Precondition(
            "every coefficient is divisible by the modulus".into(),
        ));
    }
    let m = m as u128;
    let mut sum = Complex::default();
    for j in 0..modulus {
        let j = u128::from(j);
        // Horner on c_d x^{d-1} + … + c_1, then one more factor of x.
        let mut acc = 0u128;
        for &c in reduced.iter().rev() {
            acc = (acc * j + c) % m;
        }
        let r = (acc * j % m) as u64;
        let folded = r.min(modulus - r);
        let angle = 2.0 * PI * folded as f64 / modulus as f64;
        let sin = libm::sin(angle);
        sum.re += libm::cos(angle);
        sum.im += if r == folded { sin } else { -sin };
    }
    Ok(sum)
}

/// Axis-aligned closed box inside `[-1, 1]^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxRegion {
    intervals: Vec<(f64, f64)>,
}

impl BoxRegion {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(invalid("box needs at least one interval"));
        }
        for &(a, b) in &intervals {
            if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) || a > b {
                return Err(invalid(format!("invalid box interval [{a}, {b}]")));
            }
        }
        Ok(BoxRegion { intervals })
    }

    /// The whole cube `[-1, 1]^d`.
    pub fn full(d: usize) -> Self {
        BoxRegion {
            intervals: alloc::vec![(-1.0, 1.0); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.intervals
            .iter()
            .zip(y)
            .all(|(&(a, b), &v)| a <= v && v <= b)
    }

    /// Mass of the box under the product arcsine measure,
    /// `∏ (asin b - asin a) / π`.
    pub fn arcsine_measure(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(a, b)| (libm::asin(b) - libm::asin(a)) / PI)
            .product()
    }
}

impl fmt::Display for BoxRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "[{a:?},{b:?}]")?;
        }
        Ok(())
    }
}

/// Fraction of the sample lying in the closed box.
pub fn equidist_box_fraction(samples: &SampleSet, region: &BoxRegion) -> Result<f64> {
    if samples.is_empty() {
        return Err(invalid("empty sample set"));
    }
    if region.dim() != samples.dim() {
        return Err(invalid(format!(
            "box of dimension {} for points of dimension {}",
            region.dim(),
            samples.dim()
        )));
    }
    let inside = samples.iter().filter(|y| region.contains(y)).count();
    Ok(inside as f64 / samples.len() as f64)
}
