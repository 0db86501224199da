pub mod check_bounds;
pub mod equidist;
pub mod fit;
pub mod points;
pub mod study;

use crate::error::{CliError, CliResult};
use crate::Common;

/// Rejects common flags that a command has no use for.
pub(crate) fn reject_unused(common: &Common, command: &str, seed_used: bool) -> CliResult<()> {
    if common.config.is_some() {
        return Err(CliError::invalid(format!(
            "{command} does not read a config file"
        )));
    }
    if !seed_used && common.seed.is_some() {
        return Err(CliError::invalid(format!("{command} does not use a seed")));
    }
    Ok(())
}
