//! Numerical checks of the grid's stability guarantees and the error metrics
//! used by convergence studies.
//!
//! All Gram-based checks use the unweighted, unnormalized Chebyshev basis
//! `Φ_n(y) = ∏ cos(n_i arccos y_i)` on the Weil grid `Θ_M`, with
//! `m = ⌊M/2⌋`:
//!
//! * off-diagonal entries: `|A_nk| ≤ ((d-1)√M + 1) / 2`,
//! * diagonal entries of all-nonzero indices:
//!   `|A_nn - M/2^{d+1}| ≤ (d-1)√M / 2`,
//! * `‖(2^{d+1}/M) A - I‖₂ ≤ 1/2` once `M ≥ 4^{d+1} d² N²`.
//!
//! The nominal diagonal bound ignores the `j = 0` row, which adds exactly
//! `1/2` to the half-sum. For `d = 1` the bound has zero width and fails by
//! that amount; [`check_generalized_diagonal`] reports both the nominal width
//! and the width `((d-1)√M + 1) / 2` that absorbs the extra term.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::indexsets::IndexSet;
use crate::linalg::{symmetric_spectral_norm, Matrix};
use crate::lstsq::{gram, solve, FitResult, WeightScheme};
use crate::pointgen::{equidist_box_fraction, mc_sample, BoxRegion, Measure, SampleSet, WeilGrid};
use crate::polybasis::{BasisEvaluator, BasisSpec};
use crate::primes::is_prime;
use crate::quadrature::{for_each_tensor_node, Rule};
use crate::study::ScalingRule;

/// Floating-point slack on every inequality check.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Default size of the uniform test set for discrete L² errors.
pub const DEFAULT_TEST_POINTS: usize = 2000;

fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `((d-1)√M + 1) / 2`
pub fn offdiag_bound(modulus: u64, d: usize) -> f64 {
    ((d as f64 - 1.0) * sqrt(modulus as f64) + 1.0) / 2.0
}

/// `[M/2^{d+1} - (d-1)√M/2, M/2^{d+1} + (d-1)√M/2]`
pub fn diag_bounds(modulus: u64, d: usize) -> (f64, f64) {
    let centre = modulus as f64 / libm::pow(2.0, d as f64 + 1.0);
    let half = (d as f64 - 1.0) * sqrt(modulus as f64) / 2.0;
    (centre - half, centre + half)
}

/// `δ = 2^d ((d-1)√M + 1) / M`, the entrywise bound on the normalized Gram.
pub fn delta(modulus: u64, d: usize) -> f64 {
    libm::pow(2.0, d as f64) * ((d as f64 - 1.0) * sqrt(modulus as f64) + 1.0) / modulus as f64
}

/// `4^{d+1} d² N²`, the grid size guaranteeing the spectral bound; `None` on
/// overflow.
pub fn stability_threshold(d: usize, n: usize) -> Option<u128> {
    let d = u32::try_from(d).ok()?;
    4u128
        .checked_pow(d.checked_add(1)?)?
        .checked_mul(u128::from(d) * u128::from(d))?
        .checked_mul((n as u128).checked_mul(n as u128)?)
}

fn weil_gram(modulus: u64, d: usize, set: &IndexSet) -> Result<Matrix> {
    if set.dim() != d {
        return Err(invalid(format!(
            "index set of dimension {} for d = {d}",
            set.dim()
        )));
    }
    let grid = WeilGrid::new(modulus, d)?.into_sample_set();
    gram(&grid, set, &BasisSpec::CHEBYSHEV_PAPER, &WeightScheme::Unit)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramBoundReport {
    pub modulus: u64,
    pub d: usize,
    pub q: u32,
    pub max_offdiag_abs: f64,
    pub offdiag_bound: f64,
    /// `+∞` / `-∞` when no index took part in the diagonal check.
    pub diag_min: f64,
    pub diag_max: f64,
    pub diag_bounds: (f64, f64),
    /// Number of diagonal entries checked.
    pub diag_checked: usize,
    pub restricted_to_nonzero_indices: bool,
    pub offdiag_pass: bool,
    pub diag_pass: bool,
    pub pass: bool,
}

/// Compares every Gram entry over `set` on `Θ_M` against the nominal bounds.
///
/// With `restrict_nonzero`, only indices whose components are all positive
/// enter the diagonal check; off-diagonal pairs always range over the whole
/// set.
pub fn check_gram_bounds(
    modulus: u64,
    d: usize,
    q: u32,
    set: &IndexSet,
    restrict_nonzero: bool,
) -> Result<GramBoundReport> {
    if !is_prime(modulus) {
        return Err(invalid(format!("modulus {modulus} is not prime")));
    }
    if modulus <= 2 * u64::from(q) + 1 {
        return Err(Error::Precondition(format!(
            "Gram bounds need M > 2q + 1, got M = {modulus}, q = {q}"
        )));
    }
    if set.max_degree() > q {
        return Err(invalid(format!(
            "index set has degree {} above q = {q}",
            set.max_degree()
        )));
    }
    let a = weil_gram(modulus, d, set)?;
    let n = set.len();

    let mut max_offdiag_abs: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            max_offdiag_abs = max_offdiag_abs.max(a[(i, j)].abs());
        }
    }
    let (mut diag_min, mut diag_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut diag_checked = 0;
    for (i, idx) in set.iter().enumerate() {
        if restrict_nonzero && !idx.all_nonzero() {
            continue;
        }
        diag_min = diag_min.min(a[(i, i)]);
        diag_max = diag_max.max(a[(i, i)]);
        diag_checked += 1;
    }

    let offdiag_bound = offdiag_bound(modulus, d);
    let diag_bounds = diag_bounds(modulus, d);
    let offdiag_pass = max_offdiag_abs <= offdiag_bound + BOUND_TOLERANCE;
    let diag_pass = diag_checked == 0
        || (diag_min >= diag_bounds.0 - BOUND_TOLERANCE
            && diag_max <= diag_bounds.1 + BOUND_TOLERANCE);
    Ok(GramBoundReport {
        modulus,
        d,
        q,
        max_offdiag_abs,
        offdiag_bound,
        diag_min,
        diag_max,
        diag_bounds,
        diag_checked,
        restricted_to_nonzero_indices: restrict_nonzero,
        offdiag_pass,
        diag_pass,
        pass: offdiag_pass && diag_pass,
    })
}

/// Diagonal entries against `M / 2^{z(n)+1}`, `z(n)` the number of nonzero
/// components of `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedDiagonalReport {
    pub modulus: u64,
    pub d: usize,
    /// `max_n |A_nn - M/2^{z(n)+1}|`
    pub max_deviation: f64,
    /// `(d-1)√M / 2`
    pub nominal_half_width: f64,
    /// `((d-1)√M + 1) / 2`
    pub corrected_half_width: f64,
    pub nominal_pass: bool,
    pub corrected_pass: bool,
}

pub fn check_generalized_diagonal(
    modulus: u64,
    d: usize,
    set: &IndexSet,
) -> Result<GeneralizedDiagonalReport> {
    let a = weil_gram(modulus, d, set)?;
    let max_deviation = set
        .iter()
        .enumerate()
        .map(|(i, idx)| {
            let target = modulus as f64 / libm::pow(2.0, idx.nonzero_count() as f64 + 1.0);
            (a[(i, i)] - target).abs()
        })
        .fold(0.0, f64::max);
    let nominal_half_width = (d as f64 - 1.0) * sqrt(modulus as f64) / 2.0;
    let corrected_half_width = offdiag_bound(modulus, d);
    Ok(GeneralizedDiagonalReport {
        modulus,
        d,
        max_deviation,
        nominal_half_width,
        corrected_half_width,
        nominal_pass: max_deviation <= nominal_half_width + BOUND_TOLERANCE,
        corrected_pass: max_deviation <= corrected_half_width + BOUND_TOLERANCE,
    })
}

/// `‖(2^{d+1}/M) A - I‖₂` for the unweighted cosine basis on `Θ_M`.
///
/// `set` must contain only indices with every component nonzero, where the
/// `2^{d+1}/M` normalization is the right one.
pub fn spectral_gap(modulus: u64, d: usize, set: &IndexSet) -> Result<f64> {
    if let Some(bad) = set.iter().find(|n| !n.all_nonzero()) {
        return Err(Error::Precondition(format!(
            "spectral gap needs all-nonzero indices, found {bad}"
        )));
    }
    let mut a = weil_gram(modulus, d, set)?;
    let scale = libm::pow(2.0, d as f64 + 1.0) / modulus as f64;
    let n = set.len();
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] *= scale;
        }
        a[(i, i)] -= 1.0;
    }
    Ok(symmetric_spectral_norm(&a))
}

/// Coefficients of the orthogonal projection of `target` onto `span(set)`
/// under the basis's natural measure, by a `level`-point tensor Gauss rule.
///
/// `level` must be at least `max_degree + 1`, so that the rule is exact for
/// products of two basis functions.
pub fn reference_projection(
    target: &dyn Fn(&[f64]) -> f64,
    set: &IndexSet,
    spec: &BasisSpec,
    level: usize,
) -> Result<Vec<f64>> {
    let needed = set.max_degree() as usize + 1;
    if level < needed {
        return Err(invalid(format!(
            "quadrature level {level} is not exact for degree {}; need at least {needed}",
            2 * set.max_degree() + 1
        )));
    }
    let rule = Rule::for_measure(spec.natural_measure(), level);
    let mut eval = BasisEvaluator::new(*spec, set);
    let mut row = vec![0.0; set.len()];
    let mut coeffs = vec![0.0; set.len()];
    let mut failure = None;
    for_each_tensor_node(&rule, set.dim(), |y, w| {
        if failure.is_some() {
            return;
        }
        if let Err(e) = eval.eval_row(y, &mut row) {
            failure = Some(e);
            return;
        }
        let fw = w * target(y);
        for (c, &phi) in coeffs.iter_mut().zip(&row) {
            *c += fw * phi;
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    for (c, idx) in coeffs.iter_mut().zip(set.iter()) {
        let norm_sq: f64 = idx.entries().iter().map(|&k| spec.norm_sq_1d(k)).product();
        *c /= norm_sq;
    }
    Ok(coeffs)
}

/// `‖h‖_{L²(measure)}` on `[-1, 1]^d` by a `level`-point tensor Gauss rule.
pub fn quadrature_l2_norm(
    h: &dyn Fn(&[f64]) -> f64,
    measure: Measure,
    d: usize,
    level: usize,
) -> f64 {
    let rule = Rule::for_measure(measure, level);
    let mut acc = 0.0;
    for_each_tensor_node(&rule, d, |y, w| {
        let v = h(y);
        acc += w * v * v;
    });
    sqrt(acc)
}

/// `max |h|` over `n` seeded uniform points: a lower estimate of `‖h‖_∞`.
pub fn sup_norm_estimate(h: &dyn Fn(&[f64]) -> f64, d: usize, n: usize, seed: u64) -> Result<f64> {
    let pts = mc_sample(Measure::Uniform, n, d, seed)?;
    Ok(pts.iter().map(|y| h(y).abs()).fold(0.0, f64::max))
}

/// Root-mean-square error of `fit` against `target` over `n_test` seeded
/// uniform points.
pub fn l2_error(
    fit: &FitResult,
    target: &dyn Fn(&[f64]) -> f64,
    n_test: usize,
    seed: u64,
) -> Result<f64> {
    if n_test == 0 {
        return Err(invalid("error metric needs at least one test point"));
    }
    let test = mc_sample(Measure::Uniform, n_test, fit.index_set.dim(), seed)?;
    rms_error(fit, target, &test)
}

/// Root-mean-square error over an explicit test set.
pub fn rms_error(fit: &FitResult, target: &dyn Fn(&[f64]) -> f64, test: &SampleSet) -> Result<f64> {
    let mut eval = BasisEvaluator::new(fit.basis, &fit.index_set);
    let mut row = vec![0.0; fit.index_set.len()];
    let mut acc = 0.0;
    for y in test.iter() {
        eval.eval_row(y, &mut row)?;
        let approx: f64 = row.iter().zip(&fit.coefficients).map(|(a, b)| a * b).sum();
        let e = target(y) - approx;
        acc += e * e;
    }
    Ok(sqrt(acc / test.len() as f64))
}

/// One row of a convergence study.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub q: u32,
    pub d: usize,
    pub scaling_rule: ScalingRule,
    /// Collocation points used.
    pub m: usize,
    /// Realized prime for Weil grids.
    pub modulus: Option<u64>,
    pub l2_error: f64,
    pub test_count: usize,
    pub test_seed: u64,
}

/// Both sides of `‖f - P_m f‖_{L²(ρ_c)} ≤ (1 + 4/(d²N)) ‖f - P f‖_∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceBoundReport {
    pub modulus: u64,
    pub n_basis: usize,
    /// Whether `M ≥ 4^{d+1} d² N²`.
    pub premise_met: bool,
    pub discrete_error: f64,
    pub best_sup_estimate: f64,
    pub sup_sample_size: usize,
    pub factor: f64,
    pub holds: bool,
}

/// Fits `target` on `Θ_M` with the orthonormal Chebyshev basis and compares
/// the `L²(ρ_c)` error with the best-approximation sup error.
///
/// The sup norm is estimated from `sup_samples` seeded uniform points, which
/// can only underestimate it; `level` sets both the projection and the
/// `L²` quadrature.
pub fn check_convergence_bound(
    target: &dyn Fn(&[f64]) -> f64,
    set: &IndexSet,
    modulus: u64,
    level: usize,
    sup_samples: usize,
    seed: u64,
) -> Result<ConvergenceBoundReport> {
    let d = set.dim();
    let spec = BasisSpec::CHEBYSHEV_ORTHONORMAL;
    let grid = WeilGrid::new(modulus, d)?.into_sample_set();
    let fvals: Vec<f64> = grid.iter().map(target).collect();
    let fit = solve(&grid, &fvals, set, &spec, &WeightScheme::Unit)?;
    let best = reference_projection(target, set, &spec, level)?;
    let best_fit = FitResult {
        coefficients: best,
        ..fit.clone()
    };

    let discrete_error = quadrature_l2_norm(
        &|y| target(y) - fit.eval(y).unwrap_or(f64::NAN),
        Measure::Chebyshev,
        d,
        level,
    );
    let best_sup_estimate = sup_norm_estimate(
        &|y| target(y) - best_fit.eval(y).unwrap_or(f64::NAN),
        d,
        sup_samples,
        seed,
    )?;
    let n = set.len();
    let factor = 1.0 + 4.0 / ((d * d * n) as f64);
    let premise_met = stability_threshold(d, n).is_some_and(|t| u128::from(modulus) >= t);
    Ok(ConvergenceBoundReport {
        modulus,
        n_basis: n,
        premise_met,
        discrete_error,
        best_sup_estimate,
        sup_sample_size: sup_samples,
        factor,
        holds: discrete_error <= factor * best_sup_estimate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeilSumReport {
    pub modulus: u64,
    pub degree: usize,
    pub abs_sum: f64,
    /// `(d-1)√M`
    pub bound: f64,
    pub holds: bool,
}

/// Evaluates the exponential sum for `coeffs` and compares it with the
/// `(d-1)√M` bound, `d` the number of coefficients.
pub fn check_weil_sum(coeffs: &[i64], modulus: u64) -> Result<WeilSumReport> {
    let s = crate::pointgen::weil_exponential_sum(coeffs, modulus)?;
    let degree = coeffs.len();
    let bound = (degree as f64 - 1.0) * sqrt(modulus as f64);
    let abs_sum = s.norm();
    Ok(WeilSumReport {
        modulus,
        degree,
        abs_sum,
        bound,
        holds: abs_sum <= bound + BOUND_TOLERANCE,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquidistRow {
    pub region: BoxRegion,
    pub observed: f64,
    pub arcsine: f64,
    pub abs_deviation: f64,
}

/// Box fractions of `samples` against the product arcsine measure.
pub fn equidist_report(samples: &SampleSet, regions: &[BoxRegion]) -> Result<Vec<EquidistRow>> {
    regions
        .iter()
        .map(|r| {
            let observed = equidist_box_fraction(samples, r)?;
            let arcsine = r.arcsine_measure();
            Ok(EquidistRow {
                region: r.clone(),
                observed,
                arcsine,
                abs_deviation: (observed - arcsine).abs(),
            })
        })
        .collect()
}
