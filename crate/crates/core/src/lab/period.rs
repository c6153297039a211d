use serde::Serialize;

use super::require_covers;
use crate::error::{Error, Result};
use crate::sg::SgTable;

/// Eventual period-`2^k` behaviour of `x2 -> u - G` on the row `(x0, x1, .)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityReport {
    pub x0: u64,
    pub x1: u64,
    pub k: u32,
    /// Last `x2` whose value disagrees with the one a period later; the row
    /// is periodic on `(threshold, verified_to]`. `x1 - 1` if it never
    /// disagrees.
    pub threshold: i64,
    /// One period of values, indexed by `(x2 + 1) mod 2^k`. Empty unless found.
    pub pattern: Vec<u64>,
    pub verified_to: u64,
    /// At least three full periods agree after the threshold.
    pub found: bool,
}

impl PeriodicityReport {
    /// `threshold` as an `x2` value, clamped at zero.
    pub fn start(&self) -> u64 {
        self.threshold.max(0) as u64
    }
}

/// Scans the whole table depth for the last break of period `2^k` in the
/// row `(x0, x1, x2)`, `x2 >= x1`.
pub fn periodicity_detect(x0: u64, x1: u64, k: u32, table: &SgTable) -> Result<PeriodicityReport> {
    detect_within(x0, x1, k, table, table.bounds()[2])
}

/// [`periodicity_detect`] looking only at `x2 <= depth`.
pub(crate) fn detect_within(x0: u64, x1: u64, k: u32, table: &SgTable, depth: u64) -> Result<PeriodicityReport> {
    if k >= 32 {
        return Err(Error::InvalidArgument(format!("period 2^{k} is too long")));
    }
    let period = 1u64 << k;
    require_covers(table, &[x0, x1, depth])?;
    if depth < x1 + 3 * period {
        return Err(Error::OutOfTable {
            pos: format!("{x0},{x1},{}", x1 + 3 * period),
            bounds: super::join(table.bounds()),
        });
    }
    let delta = |x2: u64| {
        let g = table.value_at(&[x0, x1, x2]).expect("row checked against the box");
        x0 + x1 + x2 - g
    };
    let threshold = (x1..=depth - period)
        .rev()
        .find(|&x2| delta(x2) != delta(x2 + period))
        .map_or(x1 as i64 - 1, |t| t as i64);
    let found = depth as i64 - threshold >= 3 * period as i64;
    let mut pattern = Vec::new();
    if found {
        pattern = vec![0; period as usize];
        let first = (threshold + 1) as u64;
        for x2 in first..first + period {
            pattern[((x2 + 1) % period) as usize] = delta(x2);
        }
    }
    Ok(PeriodicityReport { x0, x1, k, threshold, pattern, verified_to: depth, found })
}
