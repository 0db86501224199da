use weilfit_core::diagnostics::{check_convergence_bound, reference_projection};
use weilfit_core::primes::prime_at_least;
use weilfit_core::study::{conv_cell, CellSpec, GridKind, ScalingRule};
use weilfit_core::targets::{Target, TargetKind};
use weilfit_core::{BasisSpec, IndexKind, IndexSet, WeightScheme};

fn expsum_weil(q: u32) -> f64 {
    let spec = CellSpec {
        space: IndexKind::TotalDegree,
        d: 2,
        basis: BasisSpec::CHEBYSHEV_ORTHONORMAL,
        weights: WeightScheme::Unit,
        grid: GridKind::Weil,
        rule: ScalingRule::Quadratic(0.5),
    };
    let target = Target::standard(TargetKind::ExpSum, 2).unwrap();
    conv_cell(&spec, q, &|y| target.eval(y), 0, 2000, 1)
        .unwrap()
        .l2_error
}

#[test]
fn expsum_error_at_q8_is_small() {
    assert!(expsum_weil(8) < 1e-6);
}

#[test]
fn expsum_error_decreases_from_q4_to_q8() {
    assert!(expsum_weil(8) < expsum_weil(4));
}

#[test]
fn exponential_coefficients_decay_geometrically() {
    let set = IndexSet::build(IndexKind::TotalDegree, 10, 1).unwrap();
    let c =
        reference_projection(&|y| (-y[0]).exp(), &set, &BasisSpec::CHEBYSHEV_PAPER, 40).unwrap();
    let ratios: Vec<f64> = c.windows(2).map(|w| (w[1] / w[0]).abs()).collect();
    // exp(-y) has Chebyshev coefficients I_0(1) and 2 (-1)^n I_n(1), whose
    // ratios shrink like 1/(2n).
    assert!(ratios.iter().all(|r| *r < 0.9), "{ratios:?}");
    assert!(ratios[1..].iter().all(|r| *r < 0.5), "{ratios:?}");
    assert!((c[0] - 1.2660658777520082).abs() < 1e-13);
}

#[test]
fn convergence_bound_holds_above_the_stability_threshold() {
    let target = Target::standard(TargetKind::CosSum, 2).unwrap();
    let set = IndexSet::build(IndexKind::TotalDegree, 2, 2).unwrap();
    let m = prime_at_least(64 * 4 * 36);
    let r = check_convergence_bound(&|y| target.eval(y), &set, m, 40, 100_000, 5).unwrap();
    assert!(r.premise_met);
    assert!(r.holds, "{r:?}");
}
