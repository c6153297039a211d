use super::MexScratch;
use crate::error::{Error, Result};
use crate::game::{for_each_move, GameRules, Position};

/// Default cap on the number of cells in one dense table (256 MiB of values).
pub const DEFAULT_CELL_LIMIT: u64 = 1 << 26;

/// Cap on move enumerations for the generic builder.
const GENERIC_WORK_LIMIT: u64 = 1 << 32;

/// SG values for every position in the box `0 <= x <= bounds`.
///
/// Cells are stored row-major in lexicographic order of `(x0, x1, ..., xn)`,
/// which is also a linear extension of the move order: every destination of
/// a move is lexicographically smaller than its source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgTable {
    rules: GameRules,
    bounds: Vec<u64>,
    strides: Vec<usize>,
    values: Vec<u32>,
}

fn cell_count(bounds: &[u64], limit: u64) -> Result<usize> {
    bounds
        .iter()
        .try_fold(1u64, |acc, &b| acc.checked_mul(b + 1).filter(|&c| c <= limit))
        .map(|c| c as usize)
        .ok_or(Error::ResourceLimit { what: "table cells", limit })
}

fn strides_for(bounds: &[u64]) -> Vec<usize> {
    let mut strides = vec![1usize; bounds.len()];
    for i in (0..bounds.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * (bounds[i + 1] as usize + 1);
    }
    strides
}

impl SgTable {
    /// Fills the box with the generic mex recursion over [`for_each_move`].
    pub fn build(rules: GameRules, bounds: &[u64]) -> Result<SgTable> {
        SgTable::build_with_limit(rules, bounds, DEFAULT_CELL_LIMIT)
    }

    pub fn build_with_limit(rules: GameRules, bounds: &[u64], cell_limit: u64) -> Result<SgTable> {
        let shape = Position::from_coords(bounds.to_vec())?;
        rules.check_position(&shape)?;
        let cells = cell_count(bounds, cell_limit)?;
        // each cell enumerates its whole lower box: sum over cells of prod(c_i + 1)
        let work = bounds.iter().try_fold(1u64, |acc, &b| {
            acc.checked_mul((b + 1) * (b + 2) / 2).filter(|&w| w <= GENERIC_WORK_LIMIT)
        });
        if work.is_none() {
            return Err(Error::ResourceLimit { what: "move enumerations", limit: GENERIC_WORK_LIMIT });
        }

        let strides = strides_for(bounds);
        let mut values = vec![0u32; cells];
        let mut scratch = MexScratch::default();
        let mut cur = vec![0u64; bounds.len()];
        for idx in 0..cells {
            scratch.clear();
            for_each_move(&rules, &cur, |dest| {
                let j: usize = dest.iter().zip(&strides).map(|(&c, &s)| c as usize * s).sum();
                scratch.push(values[j] as u64);
            });
            values[idx] = scratch.mex_of_buffered() as u32;
            advance(&mut cur, bounds);
        }
        Ok(SgTable { rules, bounds: bounds.to_vec(), strides, values })
    }

    pub(crate) fn from_parts(rules: GameRules, bounds: Vec<u64>, values: Vec<u32>) -> SgTable {
        let strides = strides_for(&bounds);
        debug_assert_eq!(values.len(), cell_count(&bounds, u64::MAX).unwrap());
        SgTable { rules, bounds, strides, values }
    }

    pub fn rules(&self) -> &GameRules {
        &self.rules
    }

    /// Inclusive upper bounds `(x0max, x1max, ..., xnmax)`.
    pub fn bounds(&self) -> &[u64] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn index(&self, coords: &[u64]) -> Option<usize> {
        if coords.len() != self.bounds.len() || coords.iter().zip(&self.bounds).any(|(c, b)| c > b) {
            return None;
        }
        Some(coords.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum())
    }

    pub fn covers(&self, coords: &[u64]) -> bool {
        self.index(coords).is_some()
    }

    pub fn value_at(&self, coords: &[u64]) -> Option<u64> {
        self.index(coords).map(|i| self.values[i] as u64)
    }

    pub fn get(&self, pos: &Position) -> Option<u64> {
        self.value_at(pos.coords())
    }

    /// Like [`SgTable::get`] but with a descriptive error when out of the box.
    pub fn lookup(&self, pos: &Position) -> Result<u64> {
        self.get(pos).ok_or_else(|| Error::OutOfTable {
            pos: pos.to_string(),
            bounds: self.bounds_string(),
        })
    }

    pub(crate) fn bounds_string(&self) -> String {
        self.bounds.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }

    #[cfg(test)]
    pub(crate) fn raw_values(&self) -> &[u32] {
        &self.values
    }

    /// All `(position, value)` pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Position, u64)> + '_ {
        let mut cur = vec![0u64; self.bounds.len()];
        self.values.iter().map(move |&v| {
            let pos = Position::from_coords(cur.clone()).expect("table coords have n >= 1");
            advance(&mut cur, &self.bounds);
            (pos, v as u64)
        })
    }

    /// Cells whose stored value differs from the mex of their successors'
    /// stored values, as `(position, stored, expected)`.
    pub fn inconsistencies(&self) -> Vec<(Position, u64, u64)> {
        let mut scratch = MexScratch::default();
        let mut out = Vec::new();
        for (pos, stored) in self.iter() {
            scratch.clear();
            for_each_move(&self.rules, pos.coords(), |dest| {
                scratch.push(self.value_at(dest).expect("destinations stay in the box"));
            });
            let expected = scratch.mex_of_buffered();
            if expected != stored {
                out.push((pos, stored, expected));
            }
        }
        out
    }
}

/// Lexicographic odometer step within `bounds`; wraps to all zeros at the end.
fn advance(cur: &mut [u64], bounds: &[u64]) {
    for i in (0..cur.len()).rev() {
        if cur[i] < bounds[i] {
            cur[i] += 1;
            return;
        }
        cur[i] = 0;
    }
}

/// Dense two-pile Exco-Nim table over `[0..=x0max] x [0..=x1max] x [0..=x2max]`.
pub fn sg_table_n2(x0max: u64, x1max: u64, x2max: u64) -> Result<SgTable> {
    sg_table_n2_with_limit(x0max, x1max, x2max, DEFAULT_CELL_LIMIT)
}

/// [`sg_table_n2`] with an explicit cell cap.
///
/// For fixed `(x1, x2)` the successor set of `(x0, x1, x2)` is the successor
/// set of `(x0 - 1, x1, x2)` plus that position itself plus the row `x0` of
/// one-main-pile reductions, so one presence array per `(x1, x2)` column is
/// grown across the whole `x0` loop. Stamps avoid clearing it between columns.
pub fn sg_table_n2_with_limit(x0max: u64, x1max: u64, x2max: u64, cell_limit: u64) -> Result<SgTable> {
    let bounds = vec![x0max, x1max, x2max];
    let cells = cell_count(&bounds, cell_limit)?;
    let max_value = x0max + x1max + x2max;
    if max_value >= u32::MAX as u64 {
        return Err(Error::ResourceLimit { what: "SG value range", limit: u32::MAX as u64 });
    }
    let (d1, d2) = (x1max as usize + 1, x2max as usize + 1);
    let at = |a: usize, b: usize, c: usize| (a * d1 + b) * d2 + c;

    let mut values = vec![0u32; cells];
    let mut stamp_of = vec![0u32; max_value as usize + 2];
    let mut stamp = 0u32;
    for x1 in 0..d1 {
        for x2 in 0..d2 {
            stamp += 1;
            let mut mex = 0usize;
            for x0 in 0..=x0max as usize {
                if x0 > 0 {
                    stamp_of[values[at(x0 - 1, x1, x2)] as usize] = stamp;
                }
                for b in 0..x1 {
                    stamp_of[values[at(x0, b, x2)] as usize] = stamp;
                }
                for c in 0..x2 {
                    stamp_of[values[at(x0, x1, c)] as usize] = stamp;
                }
                while stamp_of[mex] == stamp {
                    mex += 1;
                }
                values[at(x0, x1, x2)] = mex as u32;
            }
        }
    }
    Ok(SgTable::from_parts(GameRules::ExcoNim { n: 2 }, bounds, values))
}
