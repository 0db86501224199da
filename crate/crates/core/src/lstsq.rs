//! Weighted discrete least squares on a collocation grid.
//!
//! The problem `min_c Σ_k w_k (f(y_k) - Σ_j c_j Φ_j(y_k))²` is solved by a
//! Householder QR of the row-scaled design matrix `diag(√w) D`. The Gram
//! matrix `A = Dᵀ diag(w) D` is never formed by the solver; [`gram`] builds it
//! for diagnostics only.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::indexsets::IndexSet;
use crate::linalg::{singular_values, Matrix, Qr};
use crate::pointgen::{Measure, SampleSet};
use crate::polybasis::{basis_matrix, BasisEvaluator, BasisSpec};

/// Relative singular-value threshold below which a system counts as singular.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// How collocation rows are weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    Unit,
    /// `w = ρ / ρ_c`: makes a Chebyshev-distributed grid emulate the
    /// `ρ`-weighted norm of the given target measure.
    DensityRatio(Measure),
}

impl WeightScheme {
    pub fn weight(&self, y: &[f64]) -> f64 {
        match self {
            WeightScheme::Unit | WeightScheme::DensityRatio(Measure::Chebyshev) => 1.0,
            WeightScheme::DensityRatio(Measure::Uniform) => y
                .iter()
                .map(|&v| FRAC_PI_2 * libm::sqrt((1.0 - v * v).max(0.0)))
                .product(),
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::Unit => f.write_str("unit"),
            WeightScheme::DensityRatio(m) => write!(f, "density_ratio:{m}"),
        }
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    /// `unit`, `density_ratio` (uniform target) or `density_ratio:<measure>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.split_once(':') {
            None if s == "unit" => Ok(WeightScheme::Unit),
            None if s == "density_ratio" || s == "weighted" => {
                Ok(WeightScheme::DensityRatio(Measure::Uniform))
            }
            Some(("density_ratio", target)) => Ok(WeightScheme::DensityRatio(target.parse()?)),
            _ => Err(invalid(format!("unknown weight scheme `{s}`"))),
        }
    }
}

/// Collocation weights for every point of `pts`.
///
/// Under the uniform density ratio a point with some `|y| = 1` gets weight 0.
pub fn compute_weights(scheme: &WeightScheme, pts: &SampleSet) -> Result<Vec<f64>> {
    if let Some(&value) = pts.as_flat().iter().find(|y| !(-1.0..=1.0).contains(*y)) {
        return Err(Error::Domain { value });
    }
    Ok(pts.iter().map(|y| scheme.weight(y)).collect())
}

/// Singular-value summary of `diag(√w) D`; `cond_a = cond_d²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionReport {
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub cond_d: f64,
    pub cond_a: f64,
}

impl ConditionReport {
    pub fn from_singular_values(sv: &[f64]) -> Self {
        let sigma_max = sv.iter().copied().fold(0.0, f64::max);
        let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        let cond_d = if sigma_min > 0.0 {
            sigma_max / sigma_min
        } else {
            f64::INFINITY
        };
        ConditionReport {
            sigma_max,
            sigma_min,
            cond_d,
            cond_a: cond_d * cond_d,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.sigma_min.is_nan()
            || self.sigma_min < SINGULAR_RTOL * self.sigma_max
            || self.sigma_max == 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub index_set: IndexSet,
    pub basis: BasisSpec,
    pub weights: WeightScheme,
    /// `(Σ_k w_k (f(y_k) - fit(y_k))²)^{1/2}` over the collocation points.
    pub residual_norm: f64,
    pub condition: ConditionReport,
}

impl FitResult {
    /// Value of the fitted polynomial at one point.
    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        let mut row = alloc::vec![0.0; self.index_set.len()];
        BasisEvaluator::new(self.basis, &self.index_set).eval_row(y, &mut row)?;
        Ok(dot(&row, &self.coefficients))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_problem(pts: &SampleSet, fvals: &[f64], set: &IndexSet) -> Result<()> {
    if set.is_empty() || pts.is_empty() {
        return Err(invalid(
            "least squares needs a nonempty index set and point set",
        ));
    }
    if set.dim() != pts.dim() {
        return Err(invalid(format!(
            "index set of dimension {} with points of dimension {}",
            set.dim(),
            pts.dim()
        )));
    }
    if fvals.len() != pts.len() {
        return Err(invalid(format!(
            "{} function values for {} points",
            fvals.len(),
            pts.len()
        )));
    }
    if pts.len() < set.len() {
        return Err(Error::Underdetermined {
            points: pts.len(),
            unknowns: set.len(),
        });
    }
    Ok(())
}

/// Weighted least-squares fit of `fvals` at `pts` in the span of `set`.
pub fn solve(
    pts: &SampleSet,
    fvals: &[f64],
    set: &IndexSet,
    spec: &BasisSpec,
    scheme: &WeightScheme,
) -> Result<FitResult> {
    check_problem(pts, fvals, set)?;
    let weights = compute_weights(scheme, pts)?;
    let mut fit = solve_with_weights(pts, fvals, set, spec, &weights)?;
    fit.weights = *scheme;
    Ok(fit)
}

/// As [`solve`], with an explicit nonnegative weight per point.
///
/// The returned fit reports [`WeightScheme::Unit`]; callers supplying their
/// own weights know what they passed.
pub fn solve_with_weights(
    pts: &SampleSet,
    fvals: &[f64],
    set: &IndexSet,
    spec: &BasisSpec,
    weights: &[f64],
) -> Result<FitResult> {
    check_problem(pts, fvals, set)?;
    if weights.len() != pts.len() {
        return Err(invalid(format!(
            "{} weights for {} points",
            weights.len(),
            pts.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(invalid(format!(
            "weight {w} is not a finite nonnegative number"
        )));
    }

    let mut scaled = basis_matrix(spec, set, pts)?;
    let roots: Vec<f64> = weights.iter().map(|&w| libm::sqrt(w)).collect();
    for (k, &r) in roots.iter().enumerate() {
        for v in scaled.row_mut(k) {
            *v *= r;
        }
    }
    let rhs: Vec<f64> = fvals.iter().zip(&roots).map(|(f, r)| f * r).collect();

    let qr = Qr::new(&scaled);
    let condition = ConditionReport::from_singular_values(&singular_values(&qr.r()));
    if condition.is_singular() {
        return Err(Error::Singular { report: condition });
    }
    let coefficients = qr.solve_least_squares(&rhs);

    let fitted = scaled.mul_vec(&coefficients);
    let residual_norm = libm::sqrt(
        rhs.iter()
            .zip(&fitted)
            .map(|(b, v)| (b - v) * (b - v))
            .sum(),
    );

    Ok(FitResult {
        coefficients,
        index_set: set.clone(),
        basis: *spec,
        weights: WeightScheme::Unit,
        residual_norm,
        condition,
    })
}

/// Condition report of `diag(√w) D` without solving anything.
pub fn condition_report(
    pts: &SampleSet,
    set: &IndexSet,
    spec: &BasisSpec,
    scheme: &WeightScheme,
) -> Result<ConditionReport> {
    if pts.len() < set.len() {
        return Err(Error::Underdetermined {
            points: pts.len(),
            unknowns: set.len(),
        });
    }
    let weights = compute_weights(scheme, pts)?;
    let mut scaled = basis_matrix(spec, set, pts)?;
    for (k, &w) in weights.iter().enumerate() {
        let r = libm::sqrt(w);
        for v in scaled.row_mut(k) {
            *v *= r;
        }
    }
    Ok(ConditionReport::from_singular_values(&singular_values(
        &Qr::new(&scaled).r(),
    )))
}

/// `Σ_j c_j Φ_j(y)` at every point.
pub fn evaluate_fit(fit: &FitResult, pts: &SampleSet) -> Result<Vec<f64>> {
    if pts.dim() != fit.index_set.dim() {
        return Err(invalid(format!(
            "fit of dimension {} evaluated at points of dimension {}",
            fit.index_set.dim(),
            pts.dim()
        )));
    }
    let mut eval = BasisEvaluator::new(fit.basis, &fit.index_set);
    let mut row = alloc::vec![0.0; fit.index_set.len()];
    pts.iter()
        .map(|y| {
            eval.eval_row(y, &mut row)?;
            Ok(dot(&row, &fit.coefficients))
        })
        .collect()
}

/// Weighted Gram matrix `A_ij = Σ_k w_k Φ_i(y_k) Φ_j(y_k)`, exactly symmetric.
pub fn gram(
    pts: &SampleSet,
    set: &IndexSet,
    spec: &BasisSpec,
    scheme: &WeightScheme,
) -> Result<Matrix> {
    let weights = compute_weights(scheme, pts)?;
    let d = basis_matrix(spec, set, pts)?;
    let n = set.len();
    let mut a = Matrix::zeros(n, n);
    for (k, &w) in weights.iter().enumerate() {
        let row = d.row(k);
        for i in 0..n {
            let wi = w * row[i];
            for j in i..n {
                a[(i, j)] += wi * row[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = a[(j, i)];
        }
    }
    Ok(a)
}
