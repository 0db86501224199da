use clap::Args;
use rayon::prelude::*;
use weilfit_core::study::{cell_seed, cond_cell, conv_cell, mean, CellPlan};

use crate::config::StudyConfig;
use crate::csvio::{fmt_f64, sidecar, Table};
use crate::error::{CliError, CliResult};
use crate::Common;

/// Study settings; each flag overrides the config file key of the same name.
#[derive(Debug, Args, Clone, Default)]
pub struct StudyFlags {
    /// td or tp.
    #[arg(long)]
    pub space: Option<String>,
    /// Dimension d.
    #[arg(long = "dim", short = 'd')]
    pub d: Option<String>,
    /// Inclusive order range, e.g. 1..10.
    #[arg(long)]
    pub q_range: Option<String>,
    /// linear or quadratic.
    #[arg(long)]
    pub scaling: Option<String>,
    /// Scaling coefficient c.
    #[arg(long)]
    pub c: Option<String>,
    /// Basis as family/normalization.
    #[arg(long)]
    pub basis: Option<String>,
    /// unit, density_ratio or density_ratio:<measure>.
    #[arg(long)]
    pub weights: Option<String>,
    /// weil, mc_chebyshev or mc_uniform.
    #[arg(long)]
    pub grid: Option<String>,
    /// Repetitions per order (Monte Carlo grids only).
    #[arg(long)]
    pub repetitions: Option<String>,
    /// expsum, cossum or abscube.
    #[arg(long)]
    pub target: Option<String>,
    /// Comma-separated target coefficients.
    #[arg(long)]
    pub target_coefficients: Option<String>,
    /// Seed for random target coefficients.
    #[arg(long)]
    pub target_seed: Option<String>,
    /// Number of uniform test points.
    #[arg(long)]
    pub n_test: Option<String>,
    /// Seed of the test set; defaults to --seed.
    #[arg(long)]
    pub test_seed: Option<String>,
    /// Worker threads.
    #[arg(long)]
    pub threads: Option<String>,
    /// Extra KEY=VALUE overrides.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[command(flatten)]
    pub flags: StudyFlags,

    #[command(flatten)]
    pub common: Common,
}

/// Config file, then flags, then `--seed`.
pub fn build_config(common: &Common, flags: &StudyFlags) -> CliResult<StudyConfig> {
    let mut cfg = match &common.config {
        Some(path) => StudyConfig::load(path)?,
        None => StudyConfig::default(),
    };
    let pairs = [
        ("space", &flags.space),
        ("d", &flags.d),
        ("q_range", &flags.q_range),
        ("scaling", &flags.scaling),
        ("c", &flags.c),
        ("basis", &flags.basis),
        ("weights", &flags.weights),
        ("grid", &flags.grid),
        ("repetitions", &flags.repetitions),
        ("target", &flags.target),
        ("target_coefficients", &flags.target_coefficients),
        ("target_seed", &flags.target_seed),
        ("n_test", &flags.n_test),
        ("test_seed", &flags.test_seed),
        ("threads", &flags.threads),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    for kv in &flags.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.resolve()
}

/// Runs `cell` for every (q, repetition) in parallel, returning results in
/// (q, repetition) order.
fn run_cells<T: Send>(
    cfg: &StudyConfig,
    cell: impl Fn(u32, u64) -> CliResult<T> + Sync,
) -> CliResult<Vec<(u32, u32, u64, T)>> {
    let cells: Vec<(u32, u32, u64)> = (cfg.q_min..=cfg.q_max)
        .flat_map(|q| (0..cfg.repetitions).map(move |r| (q, r, cell_seed(cfg.seed, q, r))))
        .collect();
    let work = || {
        cells
            .par_iter()
            .map(|&(q, r, seed)| cell(q, seed).map(|t| (q, r, seed, t)))
            .collect::<CliResult<Vec<_>>>()
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::invalid(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

fn cell_comment(plan: &CellPlan) -> String {
    format!(
        "cell q={} N={} m_target={} m={} M={}",
        plan.q,
        plan.n,
        plan.m_target,
        plan.m,
        plan.modulus.map_or_else(String::new, |m| m.to_string())
    )
}

/// Groups per-repetition values by order and writes the main and sidecar
/// tables.
fn emit(
    args: &StudyArgs,
    mut comments: Vec<String>,
    value_name: &str,
    results: Vec<(u32, u32, u64, (CellPlan, f64))>,
) -> CliResult<()> {
    let mut main = Vec::new();
    let mut reps = Table::new(comments.clone(), &["q", "rep", "seed", value_name]);
    for chunk in results.chunk_by(|a, b| a.0 == b.0) {
        let plan = chunk[0].3 .0;
        plan.validate()?;
        comments.push(cell_comment(&plan));
        let values: Vec<f64> = chunk.iter().map(|c| c.3 .1).collect();
        for &(q, r, seed, (_, v)) in chunk {
            reps.push(vec![
                q.to_string(),
                r.to_string(),
                seed.to_string(),
                fmt_f64(v),
            ]);
        }
        main.push(vec![
            plan.q.to_string(),
            plan.n.to_string(),
            plan.m.to_string(),
            plan.modulus.map_or_else(String::new, |m| m.to_string()),
            fmt_f64(mean(&values)),
        ]);
    }
    let mut table = Table::new(comments, &["q", "N", "m", "M", value_name]);
    table.rows = main;
    table.write_to(args.common.out.as_deref())?;
    if let Some(out) = &args.common.out {
        reps.write_to(Some(&sidecar(out, ".reps.csv")))?;
    }
    Ok(())
}

pub fn run_cond(args: &StudyArgs) -> CliResult<()> {
    let cfg = build_config(&args.common, &args.flags)?;
    let spec = cfg.cell_spec()?;
    let results = run_cells(&cfg, |q, seed| {
        let out = cond_cell(&spec, q, seed)?;
        Ok((out.plan, out.cond_a))
    })?;
    let mut comments = vec!["command=cond-study".to_string()];
    comments.extend(cfg.echo(false)?);
    emit(args, comments, "cond_A", results)
}

pub fn run_conv(args: &StudyArgs) -> CliResult<()> {
    let cfg = build_config(&args.common, &args.flags)?;
    let spec = cfg.cell_spec()?;
    let target = cfg.target_function()?;
    let f = |y: &[f64]| target.eval(y);
    let test_seed = cfg.test_seed();
    let results = run_cells(&cfg, |q, seed| {
        let out = conv_cell(&spec, q, &f, seed, cfg.n_test, test_seed)?;
        Ok((out.plan, out.l2_error))
    })?;
    let mut comments = vec!["command=conv-study".to_string()];
    comments.extend(cfg.echo(true)?);
    emit(args, comments, "l2_error", results)
}
