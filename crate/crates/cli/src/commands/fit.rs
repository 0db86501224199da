use std::path::{Path, PathBuf};

use clap::Args;
use weilfit_core::lstsq::solve;
use weilfit_core::{BasisSpec, Error as CoreError, IndexKind, IndexSet, SampleSet, WeightScheme};

use super::reject_unused;
use crate::csvio::{fmt_f64, read_numeric, sidecar, Table};
use crate::error::{CliError, CliResult};
use crate::Common;

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Points CSV: one row per point; a leading `j` column is skipped.
    #[arg(long)]
    pub points: PathBuf,

    /// Values CSV: the last column holds the sampled value.
    #[arg(long)]
    pub values: PathBuf,

    /// Polynomial space: td or tp.
    #[arg(long, default_value = "td")]
    pub space: IndexKind,

    /// Polynomial order q.
    #[arg(long)]
    pub q: u32,

    /// Basis as family/normalization.
    #[arg(long, default_value = "chebyshev/orthonormal")]
    pub basis: BasisSpec,

    /// unit, density_ratio or density_ratio:<measure>.
    #[arg(long, default_value = "unit")]
    pub weights: WeightScheme,

    #[command(flatten)]
    pub common: Common,
}

/// Reads a points CSV into a sample set.
pub fn read_points(path: &Path) -> CliResult<SampleSet> {
    let table = read_numeric(path)?;
    let skip = usize::from(
        table
            .header
            .as_ref()
            .and_then(|h| h.first())
            .is_some_and(|c| c == "j"),
    );
    let d = table
        .rows
        .first()
        .map(|r| r.len().saturating_sub(skip))
        .ok_or_else(|| CliError::invalid(format!("{}: no points", path.display())))?;
    if d == 0 {
        return Err(CliError::invalid(format!(
            "{}: no coordinate columns",
            path.display()
        )));
    }
    let mut flat = Vec::with_capacity(table.rows.len() * d);
    for (row, &line) in table.rows.iter().zip(&table.lines) {
        for &y in &row[skip..] {
            if !(-1.0..=1.0).contains(&y) {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("coordinate {y} lies outside [-1, 1]"),
                });
            }
        }
        flat.extend_from_slice(&row[skip..]);
    }
    Ok(SampleSet::from_points(flat, d)?)
}

pub fn read_values(path: &Path) -> CliResult<Vec<f64>> {
    let table = read_numeric(path)?;
    Ok(table
        .rows
        .iter()
        .map(|r| *r.last().unwrap_or(&f64::NAN))
        .collect())
}

pub fn run(args: &FitArgs) -> CliResult<()> {
    reject_unused(&args.common, "fit", false)?;
    let pts = read_points(&args.points)?;
    let values = read_values(&args.values)?;
    if values.len() != pts.len() {
        return Err(CliError::invalid(format!(
            "{} has {} rows but {} has {} rows",
            args.points.display(),
            pts.len(),
            args.values.display(),
            values.len()
        )));
    }
    let set = IndexSet::build(args.space, args.q, pts.dim())?;
    let comments = vec![
        "command=fit".into(),
        format!("points={}", args.points.display()),
        format!("values={}", args.values.display()),
        format!("space={}", args.space.as_str()),
        format!("d={}", pts.dim()),
        format!("q={}", args.q),
        format!("basis={}", args.basis),
        format!("weights={}", args.weights),
        format!("N={}", set.len()),
        format!("m={}", pts.len()),
    ];

    let outcome = solve(&pts, &values, &set, &args.basis, &args.weights);
    let report = match &outcome {
        Ok(fit) => Some(fit.condition),
        Err(CoreError::Singular { report }) => Some(*report),
        Err(_) => None,
    };
    if let (Some(report), Some(out)) = (report, &args.common.out) {
        let mut cond = Table::new(comments.clone(), &["cond_D", "cond_A"]);
        cond.push(vec![fmt_f64(report.cond_d), fmt_f64(report.cond_a)]);
        cond.write_to(Some(&sidecar(out, ".cond.csv")))?;
    }
    let fit = outcome?;

    let mut table = Table::new(comments, &["index_tuple", "coefficient"]);
    if args.common.out.is_none() {
        table.comments.push(format!(
            "cond_D={} cond_A={}",
            fmt_f64(fit.condition.cond_d),
            fmt_f64(fit.condition.cond_a)
        ));
    }
    for (n, c) in set.iter().zip(&fit.coefficients) {
        table.push(vec![n.to_string(), fmt_f64(*c)]);
    }
    table.write_to(args.common.out.as_deref())
}

/// Parses an `index_tuple,coefficient` file written by [`run`].
pub fn read_coefficients(path: &Path) -> CliResult<Vec<(Vec<u32>, f64)>> {
    let file = std::fs::File::open(path).map_err(|e| crate::csvio::io_error(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(file);
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let tuple = record.get(0).unwrap_or_default();
        let index = tuple
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|v| v.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad(format!("bad index tuple `{tuple}`")))?;
        let value = record.get(1).unwrap_or_default();
        let c = value
            .parse::<f64>()
            .map_err(|_| bad(format!("bad coefficient `{value}`")))?;
        out.push((index, c));
    }
    Ok(out)
}
