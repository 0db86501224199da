//! Univariate and tensor-product Chebyshev and Legendre polynomials.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::indexsets::{IndexSet, MultiIndex};
use crate::linalg::Matrix;
use crate::pointgen::{Measure, SampleSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Chebyshev,
    Legendre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// `cos(n arccos y)` without scaling; only defined for Chebyshev.
    Paper,
    /// Unit norm under the family's probability measure.
    Orthonormal,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Chebyshev => "chebyshev",
            Family::Legendre => "legendre",
        })
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Paper => "paper",
            Normalization::Orthonormal => "orthonormal",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chebyshev" => Ok(Family::Chebyshev),
            "legendre" => Ok(Family::Legendre),
            other => Err(invalid(format!("unknown polynomial family `{other}`"))),
        }
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" | "cosine" | "unnormalized" => Ok(Normalization::Paper),
            "orthonormal" => Ok(Normalization::Orthonormal),
            other => Err(invalid(format!("unknown normalization `{other}`"))),
        }
    }
}

/// A polynomial family together with its normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    family: Family,
    normalization: Normalization,
}

impl BasisSpec {
    pub const CHEBYSHEV_PAPER: BasisSpec = BasisSpec {
        family: Family::Chebyshev,
        normalization: Normalization::Paper,
    };
    pub const CHEBYSHEV_ORTHONORMAL: BasisSpec = BasisSpec {
        family: Family::Chebyshev,
        normalization: Normalization::Orthonormal,
    };
    pub const LEGENDRE_ORTHONORMAL: BasisSpec = BasisSpec {
        family: Family::Legendre,
        normalization: Normalization::Orthonormal,
    };

    pub fn new(family: Family, normalization: Normalization) -> Result<Self> {
        if family == Family::Legendre && normalization == Normalization::Paper {
            return Err(invalid(
                "the unnormalized cosine convention only exists for Chebyshev polynomials",
            ));
        }
        Ok(BasisSpec {
            family,
            normalization,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Measure under which the family is orthogonal.
    pub fn natural_measure(&self) -> Measure {
        match self.family {
            Family::Chebyshev => Measure::Chebyshev,
            Family::Legendre => Measure::Uniform,
        }
    }

    /// Squared norm of the univariate degree-`n` element under
    /// [`natural_measure`](Self::natural_measure).
    pub fn norm_sq_1d(&self, n: u32) -> f64 {
        match (self.normalization, n) {
            (Normalization::Orthonormal, _) | (Normalization::Paper, 0) => 1.0,
            (Normalization::Paper, _) => 0.5,
        }
    }

    /// Values of degrees `0..=max_degree` at `y`, written into `out`.
    ///
    /// Entry `n` is bit-identical to [`eval_1d`] at degree `n`. `y` must
    /// already be known to lie in `[-1, 1]`.
    pub fn fill_1d(&self, y: f64, out: &mut [f64]) {
        match self.family {
            Family::Chebyshev => {
                let theta = libm::acos(y);
                for (n, slot) in out.iter_mut().enumerate() {
                    *slot = chebyshev_value(self.normalization, n as u32, theta);
                }
            }
            Family::Legendre => {
                let mut prev = 0.0;
                let mut cur = 1.0;
                for (n, slot) in out.iter_mut().enumerate() {
                    *slot = cur * libm::sqrt(2.0 * n as f64 + 1.0);
                    let next = legendre_step(n as u32, y, cur, prev);
                    prev = cur;
                    cur = next;
                }
            }
        }
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.family, self.normalization)
    }
}

impl FromStr for BasisSpec {
    type Err = Error;

    /// `family/normalization`, or a bare family for the orthonormal variant.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((family, norm)) => BasisSpec::new(family.parse()?, norm.parse()?),
            None => BasisSpec::new(s.parse()?, Normalization::Orthonormal),
        }
    }
}

fn chebyshev_value(normalization: Normalization, n: u32, theta: f64) -> f64 {
    let c = libm::cos(n as f64 * theta);
    match normalization {
        Normalization::Orthonormal if n > 0 => core::f64::consts::SQRT_2 * c,
        _ => c,
    }
}

/// `P_{n+1}(y)` from `P_n = cur` and `P_{n-1} = prev`.
fn legendre_step(n: u32, y: f64, cur: f64, prev: f64) -> f64 {
    let n = n as f64;
    ((2.0 * n + 1.0) * y * cur - n * prev) / (n + 1.0)
}

fn check_domain(y: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::Domain { value: y })
    }
}

/// Degree-`n` univariate basis polynomial at `y ∈ [-1, 1]`.
pub fn eval_1d(family: Family, normalization: Normalization, n: u32, y: f64) -> Result<f64> {
    BasisSpec::new(family, normalization)?;
    check_domain(y)?;
    Ok(match family {
        Family::Chebyshev => chebyshev_value(normalization, n, libm::acos(y)),
        Family::Legendre => {
            let mut prev = 0.0;
            let mut cur = 1.0;
            for k in 0..n {
                let next = legendre_step(k, y, cur, prev);
                prev = cur;
                cur = next;
            }
            cur * libm::sqrt(2.0 * n as f64 + 1.0)
        }
    })
}

/// `Φ_n(y) = ∏_i φ_{n_i}(y_i)`.
pub fn eval_tensor(spec: &BasisSpec, n: &MultiIndex, y: &[f64]) -> Result<f64> {
    if n.dim() != y.len() {
        return Err(invalid(format!(
            "multi-index of dimension {} evaluated at a point of dimension {}",
            n.dim(),
            y.len()
        )));
    }
    let mut acc = 1.0;
    for (&k, &yi) in n.entries().iter().zip(y) {
        acc *= eval_1d(spec.family, spec.normalization, k, yi)?;
    }
    Ok(acc)
}

/// Evaluates every basis function of an index set at one point at a time,
/// reusing a per-coordinate table of univariate values.
pub struct BasisEvaluator<'a> {
    spec: BasisSpec,
    set: &'a IndexSet,
    stride: usize,
    table: Vec<f64>,
}

impl<'a> BasisEvaluator<'a> {
    pub fn new(spec: BasisSpec, set: &'a IndexSet) -> Self {
        let stride = set.max_degree() as usize + 1;
        BasisEvaluator {
            spec,
            set,
            stride,
            table: vec![0.0; stride * set.dim()],
        }
    }

    /// Writes `Φ_j(y)` for every column `j` into `out`.
    pub fn eval_row(&mut self, y: &[f64], out: &mut [f64]) -> Result<()> {
        debug_assert_eq!(out.len(), self.set.len());
        if y.len() != self.set.dim() {
            return Err(invalid(format!(
                "point of dimension {} for an index set of dimension {}",
                y.len(),
                self.set.dim()
            )));
        }
        for (i, &yi) in y.iter().enumerate() {
            check_domain(yi)?;
            self.spec
                .fill_1d(yi, &mut self.table[i * self.stride..(i + 1) * self.stride]);
        }
        for (slot, n) in out.iter_mut().zip(self.set.iter()) {
            let mut acc = 1.0;
            for (i, &k) in n.entries().iter().enumerate() {
                acc *= self.table[i * self.stride + k as usize];
            }
            *slot = acc;
        }
        Ok(())
    }
}

/// Design matrix `D_{k,j} = Φ_j(y_k)`, columns in index-set order.
pub fn basis_matrix(spec: &BasisSpec, set: &IndexSet, pts: &SampleSet) -> Result<Matrix> {
    if set.is_empty() || pts.is_empty() {
        return Err(invalid(
            "basis matrix needs a nonempty index set and point set",
        ));
    }
    if set.dim() != pts.dim() {
        return Err(invalid(format!(
            "index set of dimension {} with points of dimension {}",
            set.dim(),
            pts.dim()
        )));
    }
    let cols = set.len();
    let mut d = Matrix::zeros(pts.len(), cols);
    let mut eval = BasisEvaluator::new(*spec, set);
    for (k, y) in pts.iter().enumerate() {
        eval.eval_row(y, d.row_mut(k))?;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexsets::IndexKind;
    use crate::pointgen::mc_sample;
    use core::f64::consts::PI;

    /// `T_n` by the three-term recurrence, independent of the cosine route.
    fn chebyshev_recurrence(n: u32, y: f64) -> f64 {
        let (mut a, mut b) = (1.0, y);
        if n == 0 {
            return a;
        }
        for _ in 1..n {
            let c = 2.0 * y * b - a;
            a = b;
            b = c;
        }
        b
    }

    /// Orthonormal Legendre values from explicit monomial coefficients.
    fn legendre_monomial(n: u32, y: f64) -> f64 {
        let p = match n {
            0 => 1.0,
            1 => y,
            2 => (3.0 * y * y - 1.0) / 2.0,
            3 => (5.0 * y * y * y - 3.0 * y) / 2.0,
            4 => (35.0 * y.powi(4) - 30.0 * y * y + 3.0) / 8.0,
            _ => unreachable!(),
        };
        p * (2.0 * n as f64 + 1.0).sqrt()
    }

    #[test]
    fn spec_parsing() {
        for spec in [
            BasisSpec::CHEBYSHEV_PAPER,
            BasisSpec::CHEBYSHEV_ORTHONORMAL,
            BasisSpec::LEGENDRE_ORTHONORMAL,
        ] {
            assert_eq!(alloc::format!("{spec}").parse::<BasisSpec>().unwrap(), spec);
        }
        assert_eq!(
            "legendre".parse::<BasisSpec>().unwrap(),
            BasisSpec::LEGENDRE_ORTHONORMAL
        );
        assert!("legendre/paper".parse::<BasisSpec>().is_err());
        assert!("hermite/paper".parse::<BasisSpec>().is_err());
    }

    #[test]
    fn scalar_examples() {
        let v = eval_1d(Family::Chebyshev, Normalization::Paper, 2, 0.5).unwrap();
        assert!((v + 0.5).abs() < 1e-15);
        assert_eq!(
            eval_1d(Family::Chebyshev, Normalization::Orthonormal, 0, 0.3).unwrap(),
            1.0
        );
        let v = eval_1d(Family::Legendre, Normalization::Orthonormal, 1, 1.0).unwrap();
        assert!((v - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn domain_and_spec_errors() {
        assert!(matches!(
            eval_1d(Family::Chebyshev, Normalization::Paper, 1, 1.0 + 1e-12),
            Err(Error::Domain { .. })
        ));
        assert!(eval_1d(Family::Chebyshev, Normalization::Paper, 1, f64::NAN).is_err());
        assert!(eval_1d(Family::Legendre, Normalization::Paper, 1, 0.0).is_err());
        assert!(BasisSpec::new(Family::Legendre, Normalization::Paper).is_err());
    }

    #[test]
    fn chebyshev_cosine_identity() {
        for n in 0..=50u32 {
            for i in 0..1000 {
                let theta = PI * i as f64 / 999.0;
                let v =
                    eval_1d(Family::Chebyshev, Normalization::Paper, n, libm::cos(theta)).unwrap();
                assert!(
                    (v - libm::cos(n as f64 * theta)).abs() < 1e-12,
                    "n={n} theta={theta}"
                );
            }
        }
    }

    #[test]
    fn chebyshev_matches_recurrence() {
        for n in 0..=20u32 {
            for i in 0..=200 {
                let y = -1.0 + 2.0 * i as f64 / 200.0;
                let v = eval_1d(Family::Chebyshev, Normalization::Paper, n, y).unwrap();
                assert!((v - chebyshev_recurrence(n, y)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn legendre_matches_monomial_form() {
        for n in 0..=4u32 {
            for i in 0..=100 {
                let y = -1.0 + 2.0 * i as f64 / 100.0;
                let v = eval_1d(Family::Legendre, Normalization::Orthonormal, n, y).unwrap();
                assert!((v - legendre_monomial(n, y)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn legendre_max_norm_bound() {
        for n in 0..=50u32 {
            let bound = (2.0 * n as f64 + 1.0).sqrt();
            for i in 0..=2000 {
                let y = -1.0 + 2.0 * i as f64 / 2000.0;
                let v = eval_1d(Family::Legendre, Normalization::Orthonormal, n, y).unwrap();
                assert!(v.abs() <= bound * (1.0 + 1e-12), "n={n} y={y} v={v}");
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let spec = BasisSpec::CHEBYSHEV_PAPER;
        assert_eq!(
            eval_tensor(&spec, &MultiIndex::zeros(3), &[0.1, -0.4, 0.9]).unwrap(),
            1.0
        );
        let v = eval_tensor(&spec, &MultiIndex::new(vec![2, 2]), &[0.5, 0.5]).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        assert!(eval_tensor(&spec, &MultiIndex::new(vec![1, 1]), &[0.5]).is_err());
    }

    #[test]
    fn tensor_legendre_against_monomials() {
        let spec = BasisSpec::LEGENDRE_ORTHONORMAL;
        let n = MultiIndex::new(vec![1, 2]);
        let pts = mc_sample(Measure::Uniform, 64, 2, 3).unwrap();
        for y in pts.iter() {
            let v = eval_tensor(&spec, &n, y).unwrap();
            let oracle = legendre_monomial(1, y[0]) * legendre_monomial(2, y[1]);
            assert!((v - oracle).abs() < 1e-12);
        }
        let v = eval_tensor(&spec, &n, &[0.3, -0.7]).unwrap();
        assert!((v - legendre_monomial(1, 0.3) * legendre_monomial(2, -0.7)).abs() < 1e-14);
    }

    #[test]
    fn fill_1d_is_bit_identical_to_eval_1d() {
        for spec in [
            BasisSpec::CHEBYSHEV_PAPER,
            BasisSpec::CHEBYSHEV_ORTHONORMAL,
            BasisSpec::LEGENDRE_ORTHONORMAL,
        ] {
            let mut table = [0.0; 31];
            for i in 0..=50 {
                let y = -1.0 + i as f64 / 25.0;
                spec.fill_1d(y, &mut table);
                for (n, &t) in table.iter().enumerate() {
                    let v = eval_1d(spec.family(), spec.normalization(), n as u32, y).unwrap();
                    assert_eq!(t.to_bits(), v.to_bits());
                }
            }
        }
    }

    #[test]
    fn basis_matrix_examples() {
        let spec = BasisSpec::CHEBYSHEV_PAPER;
        let zero = IndexSet::build(IndexKind::TotalDegree, 0, 2).unwrap();
        let pts = mc_sample(Measure::Uniform, 5, 2, 0).unwrap();
        let d = basis_matrix(&spec, &zero, &pts).unwrap();
        assert_eq!((d.rows(), d.cols()), (5, 1));
        assert!((0..5).all(|k| d[(k, 0)] == 1.0));

        let lin = IndexSet::build(IndexKind::TotalDegree, 1, 1).unwrap();
        let pts = SampleSet::from_points(vec![-1.0, 0.0, 1.0], 1).unwrap();
        let d = basis_matrix(&spec, &lin, &pts).unwrap();
        let expected = [[1.0, -1.0], [1.0, 0.0], [1.0, 1.0]];
        for (k, row) in expected.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert!((d[(k, j)] - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn basis_matrix_rejects_mismatch() {
        let set = IndexSet::build(IndexKind::TotalDegree, 1, 2).unwrap();
        let pts = SampleSet::from_points(vec![0.0, 0.5, 0.2], 3).unwrap();
        assert!(basis_matrix(&BasisSpec::CHEBYSHEV_PAPER, &set, &pts).is_err());
    }
}
