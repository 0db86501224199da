//! Single cells of conditioning and convergence studies.
//!
//! A cell is one polynomial order `q` of a study: it fixes the index set,
//! realizes a point count from the scaling rule, draws the grid and either
//! reports `cond(A)` or fits a target and scores it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::diagnostics::l2_error;
use crate::error::{invalid, Error, Result};
use crate::indexsets::{IndexKind, IndexSet};
use crate::lstsq::{condition_report, solve, FitResult, WeightScheme};
use crate::pointgen::{mc_sample, Measure, SampleSet, WeilGrid};
use crate::polybasis::BasisSpec;
use crate::primes::{is_prime, nearest_prime};
use crate::rng::mix_seed;

/// Point count as a function of the basis size `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalingRule {
    /// `m = round(c N)`
    Linear(f64),
    /// `m = round(c N²)`
    Quadratic(f64),
}

impl ScalingRule {
    pub fn new(name: &str, c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(invalid(format!(
                "scaling coefficient must be positive, got {c}"
            )));
        }
        match name {
            "linear" => Ok(Self::Linear(c)),
            "quadratic" => Ok(Self::Quadratic(c)),
            other => Err(invalid(format!("unknown scaling rule '{other}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear(_) => "linear",
            Self::Quadratic(_) => "quadratic",
        }
    }

    pub fn coefficient(self) -> f64 {
        match self {
            Self::Linear(c) | Self::Quadratic(c) => c,
        }
    }

    /// Target point count for a basis of size `n`, at least 1.
    pub fn target_points(self, n: usize) -> u64 {
        let n = n as f64;
        let m = match self {
            Self::Linear(c) => c * n,
            Self::Quadratic(c) => c * n * n,
        };
        libm::round(m).max(1.0) as u64
    }
}

impl fmt::Display for ScalingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.coefficient())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Weil,
    MonteCarlo(Measure),
}

impl GridKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Weil => "weil",
            Self::MonteCarlo(Measure::Chebyshev) => "mc_chebyshev",
            Self::MonteCarlo(Measure::Uniform) => "mc_uniform",
        }
    }

    pub fn is_deterministic(self) -> bool {
        self == Self::Weil
    }
}

impl FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weil" => Ok(Self::Weil),
            "mc_chebyshev" => Ok(Self::MonteCarlo(Measure::Chebyshev)),
            "mc_uniform" => Ok(Self::MonteCarlo(Measure::Uniform)),
            other => Err(invalid(format!(
                "unknown grid '{other}'; expected weil, mc_chebyshev or mc_uniform"
            ))),
        }
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Prime realizing a target point count: `nearest_prime(2m - 1)`.
pub fn realize_weil_modulus(m_target: u64) -> Result<u64> {
    nearest_prime(m_target.saturating_mul(2).saturating_sub(1).max(2))
}

/// Number of Weil points for modulus `M`: `⌊M/2⌋ + 1`.
pub fn weil_point_count(modulus: u64) -> u64 {
    modulus / 2 + 1
}

/// Everything a study fixes except `q` and the random stream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellSpec {
    pub space: IndexKind,
    pub d: usize,
    pub basis: BasisSpec,
    pub weights: WeightScheme,
    pub grid: GridKind,
    pub rule: ScalingRule,
}

/// Realized sizes of one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellPlan {
    pub q: u32,
    /// Basis size.
    pub n: usize,
    /// Point count requested by the scaling rule.
    pub m_target: u64,
    /// Point count actually used.
    pub m: usize,
    /// Realized prime for Weil grids.
    pub modulus: Option<u64>,
}

impl CellPlan {
    /// Re-checks `m = ⌊M/2⌋ + 1` and primality of `M` for Weil cells.
    pub fn validate(&self) -> Result<()> {
        if let Some(modulus) = self.modulus {
            if !is_prime(modulus) || weil_point_count(modulus) != self.m as u64 {
                return Err(invalid(format!(
                    "inconsistent Weil cell: m = {}, M = {modulus}",
                    self.m
                )));
            }
        }
        Ok(())
    }
}

impl CellSpec {
    pub fn index_set(&self, q: u32) -> Result<IndexSet> {
        IndexSet::build(self.space, q, self.d)
    }

    pub fn plan(&self, q: u32) -> Result<CellPlan> {
        let n = self.index_set(q)?.len();
        let m_target = self.rule.target_points(n);
        let (m, modulus) = match self.grid {
            GridKind::Weil => {
                let modulus = realize_weil_modulus(m_target)?;
                (weil_point_count(modulus), Some(modulus))
            }
            GridKind::MonteCarlo(_) => (m_target, None),
        };
        let m = usize::try_from(m).map_err(|_| invalid(format!("point count {m} is too large")))?;
        Ok(CellPlan {
            q,
            n,
            m_target,
            m,
            modulus,
        })
    }

    /// Collocation points of a planned cell; `seed` is ignored for Weil grids.
    pub fn sample(&self, plan: &CellPlan, seed: u64) -> Result<SampleSet> {
        match (self.grid, plan.modulus) {
            (GridKind::Weil, Some(modulus)) => {
                Ok(WeilGrid::new(modulus, self.d)?.into_sample_set())
            }
            (GridKind::MonteCarlo(measure), None) => mc_sample(measure, plan.m, self.d, seed),
            _ => Err(invalid("cell plan does not match the grid kind")),
        }
    }
}

/// Seed for repetition `rep` of order `q` in a study seeded with `base`.
pub fn cell_seed(base: u64, q: u32, rep: u32) -> u64 {
    mix_seed(base, &[u64::from(q), u64::from(rep)])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CondOutcome {
    pub plan: CellPlan,
    /// `+∞` for singular or under-determined systems.
    pub cond_a: f64,
}

pub fn cond_cell(spec: &CellSpec, q: u32, seed: u64) -> Result<CondOutcome> {
    let plan = spec.plan(q)?;
    let set = spec.index_set(q)?;
    let pts = spec.sample(&plan, seed)?;
    let cond_a = match condition_report(&pts, &set, &spec.basis, &spec.weights) {
        Ok(report) if report.is_singular() => f64::INFINITY,
        Ok(report) => report.cond_a,
        Err(Error::Underdetermined { .. }) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(CondOutcome { plan, cond_a })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvOutcome {
    pub plan: CellPlan,
    /// `+∞` for singular or under-determined systems.
    pub l2_error: f64,
    pub fit: Option<FitResult>,
}

/// Fits `target` on the cell's grid and scores it on `n_test` uniform points
/// drawn from `test_seed`.
pub fn conv_cell(
    spec: &CellSpec,
    q: u32,
    target: &dyn Fn(&[f64]) -> f64,
    seed: u64,
    n_test: usize,
    test_seed: u64,
) -> Result<ConvOutcome> {
    let plan = spec.plan(q)?;
    let set = spec.index_set(q)?;
    let pts = spec.sample(&plan, seed)?;
    let fvals: Vec<f64> = pts.iter().map(target).collect();
    match solve(&pts, &fvals, &set, &spec.basis, &spec.weights) {
        Ok(fit) => {
            let err = l2_error(&fit, target, n_test, test_seed)?;
            Ok(ConvOutcome {
                plan,
                l2_error: err,
                fit: Some(fit),
            })
        }
        Err(Error::Singular { .. } | Error::Underdetermined { .. }) => Ok(ConvOutcome {
            plan,
            l2_error: f64::INFINITY,
            fit: None,
        }),
        Err(e) => Err(e),
    }
}

/// Arithmetic mean; `+∞` if any entry is infinite.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// One-line description of a cell spec, `key=value` separated by spaces.
pub fn describe(spec: &CellSpec) -> String {
    format!(
        "space={} d={} basis={} weights={} grid={} scaling={} c={}",
        spec.space.as_str(),
        spec.d,
        spec.basis,
        spec.weights,
        spec.grid,
        spec.rule.name(),
        spec.rule.coefficient()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weil_spec(rule: ScalingRule) -> CellSpec {
        CellSpec {
            space: IndexKind::TotalDegree,
            d: 2,
            basis: BasisSpec::CHEBYSHEV_ORTHONORMAL,
            weights: WeightScheme::Unit,
            grid: GridKind::Weil,
            rule,
        }
    }

    #[test]
    fn scaling_rules() {
        assert_eq!(ScalingRule::Linear(2.0).target_points(6), 12);
        assert_eq!(ScalingRule::Quadratic(0.5).target_points(6), 18);
        assert_eq!(ScalingRule::Quadratic(0.5).target_points(1), 1);
        assert_eq!(ScalingRule::Linear(0.01).target_points(3), 1);
        assert!(ScalingRule::new("linear", 0.0).is_err());
        assert!(ScalingRule::new("cubic", 1.0).is_err());
    }

    #[test]
    fn weil_realization() {
        assert_eq!(realize_weil_modulus(1).unwrap(), 2);
        assert_eq!(realize_weil_modulus(18).unwrap(), 37);
        assert_eq!(realize_weil_modulus(50).unwrap(), 101);
        let plan = weil_spec(ScalingRule::Quadratic(0.5)).plan(2).unwrap();
        assert_eq!(
            (plan.n, plan.m_target, plan.modulus, plan.m),
            (6, 18, Some(37), 19)
        );
        plan.validate().unwrap();
    }

    #[test]
    fn grid_kind_round_trip() {
        for s in ["weil", "mc_chebyshev", "mc_uniform"] {
            assert_eq!(s.parse::<GridKind>().unwrap().as_str(), s);
        }
        assert!("sobol".parse::<GridKind>().is_err());
    }

    #[test]
    fn cond_cell_is_finite_on_well_sampled_grids() {
        let out = cond_cell(&weil_spec(ScalingRule::Quadratic(1.0)), 3, 0).unwrap();
        assert!(out.cond_a.is_finite() && out.cond_a >= 1.0);
    }

    #[test]
    fn underdetermined_cells_report_infinity() {
        let spec = CellSpec {
            grid: GridKind::MonteCarlo(Measure::Uniform),
            rule: ScalingRule::Linear(0.5),
            ..weil_spec(ScalingRule::Linear(0.5))
        };
        assert_eq!(cond_cell(&spec, 3, 7).unwrap().cond_a, f64::INFINITY);
    }

    #[test]
    fn conv_cell_recovers_polynomials() {
        let target = |y: &[f64]| 1.0 + y[0] * y[1] - 0.5 * y[1] * y[1];
        let out = conv_cell(
            &weil_spec(ScalingRule::Quadratic(0.5)),
            2,
            &target,
            0,
            500,
            3,
        )
        .unwrap();
        assert!(out.l2_error < 1e-12, "{}", out.l2_error);
    }

    #[test]
    fn cell_seeds_differ() {
        assert_ne!(cell_seed(1, 2, 0), cell_seed(1, 2, 1));
        assert_ne!(cell_seed(1, 2, 0), cell_seed(1, 3, 0));
        assert_eq!(cell_seed(9, 4, 5), cell_seed(9, 4, 5));
    }
}
