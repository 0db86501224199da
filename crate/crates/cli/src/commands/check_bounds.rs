use clap::{Args, ValueEnum};
use weilfit_core::diagnostics::{
    check_gram_bounds, check_weil_sum, spectral_gap, stability_threshold,
};
use weilfit_core::primes::prime_at_least;
use weilfit_core::rng::SeededRng;
use weilfit_core::study::{cell_seed, conv_cell, mean};
use weilfit_core::{IndexKind, IndexSet};

use super::study::{build_config, StudyFlags};
use crate::csvio::{fmt_f64, Table};
use crate::error::{CliError, CliResult};
use crate::Common;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Gram entry bounds over total-degree sets.
    Gram,
    /// Normalized Gram spectral gap above the stability threshold.
    Spectral,
    /// Exponential sums against (d-1)√M.
    Weil,
    /// Error report of a convergence study.
    Error,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value = "gram")]
    pub suite: Suite,

    /// Dimensions to sweep (gram, spectral).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,

    /// Orders to sweep (gram, spectral).
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<u32>>,

    /// Primes to use instead of the defaults (gram, spectral).
    #[arg(long, value_delimiter = ',')]
    pub moduli: Option<Vec<u64>>,

    /// Check the diagonal over every index, not only all-nonzero ones (gram).
    #[arg(long)]
    pub all_indices: bool,

    /// Number of random coefficient vectors (weil).
    #[arg(long, default_value_t = 200)]
    pub samples: usize,

    /// Largest modulus drawn (weil).
    #[arg(long, default_value_t = 10_007)]
    pub max_modulus: u64,

    #[command(flatten)]
    pub flags: StudyFlags,

    #[command(flatten)]
    pub common: Common,
}

pub fn run(args: &CheckArgs) -> CliResult<()> {
    let (table, failures) = match args.suite {
        Suite::Gram => gram_suite(args)?,
        Suite::Spectral => spectral_suite(args)?,
        Suite::Weil => weil_suite(args)?,
        Suite::Error => return error_suite(args),
    };
    table.write_to(args.common.out.as_deref())?;
    eprintln!("{failures} of {} checks failed", table.rows.len());
    Ok(())
}

fn gram_suite(args: &CheckArgs) -> CliResult<(Table, usize)> {
    let dims = args.dims.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let orders = args.orders.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let mut table = Table::new(
        vec![
            "command=check-bounds".into(),
            "suite=gram".into(),
            format!("restricted_to_nonzero_indices={}", !args.all_indices),
        ],
        &[
            "M",
            "d",
            "q",
            "max_offdiag",
            "offdiag_bound",
            "diag_min",
            "diag_max",
            "pass",
        ],
    );
    let mut failures = 0;
    for &d in &dims {
        for &q in &orders {
            let moduli = args
                .moduli
                .clone()
                .unwrap_or_else(|| vec![prime_at_least(2 * u64::from(q) + 2), 97, 997]);
            let set = IndexSet::build(IndexKind::TotalDegree, q, d)?;
            for m in moduli {
                let r = check_gram_bounds(m, d, q, &set, !args.all_indices)?;
                failures += usize::from(!r.pass);
                table.push(vec![
                    m.to_string(),
                    d.to_string(),
                    q.to_string(),
                    fmt_f64(r.max_offdiag_abs),
                    fmt_f64(r.offdiag_bound),
                    fmt_f64(r.diag_min),
                    fmt_f64(r.diag_max),
                    r.pass.to_string(),
                ]);
            }
        }
    }
    Ok((table, failures))
}

fn spectral_suite(args: &CheckArgs) -> CliResult<(Table, usize)> {
    let dims = args.dims.clone().unwrap_or_else(|| vec![1, 2]);
    let orders = args.orders.clone().unwrap_or_else(|| vec![1, 2]);
    let mut table = Table::new(
        vec!["command=check-bounds".into(), "suite=spectral".into()],
        &["M", "d", "q", "N", "gap", "premise_met", "pass"],
    );
    let mut failures = 0;
    for &d in &dims {
        for &q in &orders {
            if q == 0 {
                return Err(CliError::invalid("spectral suite needs orders >= 1"));
            }
            let set = IndexSet::build(IndexKind::TensorProduct, q, d)?
                .all_nonzero_subset()
                .ok_or_else(|| CliError::invalid("empty all-nonzero index set"))?;
            let threshold = stability_threshold(d, set.len())
                .and_then(|t| u64::try_from(t).ok())
                .ok_or_else(|| {
                    CliError::invalid(format!("stability threshold overflows for d={d} q={q}"))
                })?;
            let moduli = args
                .moduli
                .clone()
                .unwrap_or_else(|| vec![prime_at_least(threshold)]);
            for m in moduli {
                let gap = spectral_gap(m, d, &set)?;
                let premise = m >= threshold;
                let pass = !premise || gap <= 0.5;
                failures += usize::from(!pass);
                table.push(vec![
                    m.to_string(),
                    d.to_string(),
                    q.to_string(),
                    set.len().to_string(),
                    fmt_f64(gap),
                    premise.to_string(),
                    pass.to_string(),
                ]);
            }
        }
    }
    Ok((table, failures))
}

fn weil_suite(args: &CheckArgs) -> CliResult<(Table, usize)> {
    if args.max_modulus < 7 {
        return Err(CliError::invalid("max modulus must be at least 7"));
    }
    let seed = args.common.seed.unwrap_or(0);
    let mut rng = SeededRng::new(seed);
    let mut primes = Vec::new();
    let mut p = 7;
    while p <= args.max_modulus {
        primes.push(p);
        p = prime_at_least(p + 1);
    }
    let mut table = Table::new(
        vec![
            "command=check-bounds".into(),
            "suite=weil".into(),
            format!("seed={seed}"),
            format!("samples={}", args.samples),
            format!("max_modulus={}", args.max_modulus),
        ],
        &["M", "degree", "coefficients", "abs_sum", "bound", "pass"],
    );
    let mut failures = 0;
    while table.rows.len() < args.samples {
        let m = primes[rng.below(primes.len() as u64) as usize];
        let degree = 1 + rng.below(6) as usize;
        let coeffs: Vec<i64> = (0..degree).map(|_| rng.below(m) as i64).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let r = check_weil_sum(&coeffs, m)?;
        failures += usize::from(!r.holds);
        table.push(vec![
            m.to_string(),
            degree.to_string(),
            coeffs
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(" "),
            fmt_f64(r.abs_sum),
            fmt_f64(r.bound),
            r.holds.to_string(),
        ]);
    }
    Ok((table, failures))
}

fn error_suite(args: &CheckArgs) -> CliResult<()> {
    let cfg = build_config(&args.common, &args.flags)?;
    let spec = cfg.cell_spec()?;
    let rule = cfg.rule()?;
    let target = cfg.target_function()?;
    let f = |y: &[f64]| target.eval(y);
    let mut comments = vec![
        "command=check-bounds".to_string(),
        "suite=error".to_string(),
    ];
    comments.extend(cfg.echo(true)?);
    let mut table = Table::new(comments, &["d", "q", "rule", "c", "m", "M", "l2_error"]);
    for q in cfg.q_min..=cfg.q_max {
        let mut errors = Vec::new();
        let mut plan = None;
        for rep in 0..cfg.repetitions {
            let out = conv_cell(
                &spec,
                q,
                &f,
                cell_seed(cfg.seed, q, rep),
                cfg.n_test,
                cfg.test_seed(),
            )?;
            out.plan.validate()?;
            plan = Some(out.plan);
            errors.push(out.l2_error);
        }
        let plan = plan.expect("at least one repetition");
        table.push(vec![
            cfg.d.to_string(),
            q.to_string(),
            rule.name().to_string(),
            fmt_f64(rule.coefficient()),
            plan.m.to_string(),
            plan.modulus.map_or_else(String::new, |m| m.to_string()),
            fmt_f64(mean(&errors)),
        ]);
    }
    table.write_to(args.common.out.as_deref())
}
