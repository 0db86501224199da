use clap::Args;
use weilfit_core::diagnostics::equidist_report;
use weilfit_core::primes::nearest_prime;
use weilfit_core::{BoxRegion, WeilGrid};

use super::reject_unused;
use crate::csvio::{fmt_f64, Table};
use crate::error::{CliError, CliResult};
use crate::Common;

#[derive(Debug, Args)]
pub struct EquidistArgs {
    /// Target modulus; the nearest prime is used.
    #[arg(long = "modulus", short = 'M')]
    pub m_target: u64,

    /// Dimension d.
    #[arg(long = "dim", short = 'd')]
    pub d: usize,

    /// Boxes separated by `;`, intervals by `,`, bounds by `:`,
    /// e.g. `0:0.5,0:0.5;-1:0,-1:1`. Defaults to the full cube.
    #[arg(long, allow_hyphen_values = true)]
    pub boxes: Option<String>,

    #[command(flatten)]
    pub common: Common,
}

pub fn parse_boxes(spec: &str, d: usize) -> CliResult<Vec<BoxRegion>> {
    spec.split(';')
        .map(|b| {
            let intervals = b
                .split(',')
                .map(|iv| {
                    let (a, c) = iv
                        .split_once(':')
                        .ok_or_else(|| CliError::invalid(format!("interval `{iv}` is not a:b")))?;
                    let parse = |v: &str| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| CliError::invalid(format!("bad interval bound `{v}`")))
                    };
                    Ok((parse(a)?, parse(c)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            if intervals.len() != d {
                return Err(CliError::invalid(format!(
                    "box `{b}` has {} intervals for d = {d}",
                    intervals.len()
                )));
            }
            Ok(BoxRegion::new(intervals)?)
        })
        .collect()
}

pub fn run(args: &EquidistArgs) -> CliResult<()> {
    reject_unused(&args.common, "equidist", false)?;
    let boxes = match &args.boxes {
        Some(spec) => parse_boxes(spec, args.d)?,
        None => vec![BoxRegion::full(args.d)],
    };
    let modulus = nearest_prime(args.m_target)?;
    let grid = WeilGrid::new(modulus, args.d)?.into_sample_set();
    let mut table = Table::new(
        vec![
            "command=equidist".into(),
            format!("modulus_target={}", args.m_target),
            format!("M={modulus}"),
            format!("d={}", args.d),
            format!("points={}", grid.len()),
        ],
        &[
            "box",
            "observed_fraction",
            "arcsine_measure",
            "abs_deviation",
        ],
    );
    for row in equidist_report(&grid, &boxes)? {
        table.push(vec![
            row.region.to_string(),
            fmt_f64(row.observed),
            fmt_f64(row.arcsine),
            fmt_f64(row.abs_deviation),
        ]);
    }
    table.write_to(args.common.out.as_deref())
}
