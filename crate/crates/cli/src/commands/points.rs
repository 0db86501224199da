use clap::Args;
use weilfit_core::primes::nearest_prime;
use weilfit_core::WeilGrid;

use super::reject_unused;
use crate::csvio::{fmt_f64, Table};
use crate::error::CliResult;
use crate::Common;

#[derive(Debug, Args)]
pub struct PointsArgs {
    /// Target modulus; the nearest prime is used.
    #[arg(long = "modulus", short = 'M')]
    pub m_target: u64,

    /// Dimension d.
    #[arg(long = "dim", short = 'd')]
    pub d: usize,

    #[command(flatten)]
    pub common: Common,
}

pub fn run(args: &PointsArgs) -> CliResult<()> {
    reject_unused(&args.common, "points", false)?;
    let modulus = nearest_prime(args.m_target)?;
    let grid = WeilGrid::new(modulus, args.d)?;

    let mut header = vec!["j".to_string()];
    header.extend((1..=args.d).map(|i| format!("y{i}")));
    let mut table = Table::new(
        vec![
            "command=points".into(),
            format!("modulus_target={}", args.m_target),
            format!("M={modulus}"),
            format!("d={}", args.d),
            format!("rows={}", grid.len()),
        ],
        &[],
    );
    table.header = header;
    for j in 0..grid.len() {
        let mut row = vec![j.to_string()];
        row.extend(grid.point(j).iter().map(|y| fmt_f64(*y)));
        table.push(row);
    }
    table.write_to(args.common.out.as_deref())?;
    if args.common.out.is_some() {
        println!("{modulus}");
    }
    Ok(())
}
