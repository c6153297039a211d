//! Exact Sprague-Grundy computation.
//!
//! Two evaluators share the same rules: [`Memo`] runs the mex recursion lazily
//! from a single position, while [`SgTable`] fills a dense box bottom-up.
//! [`sg_table_n2`] is the fast path for two-pile Exco-Nim.

mod axioms;
mod cache;
mod memo;
mod table;

pub use axioms::{verify_sg_axioms, Axiom, AxiomReport, AxiomViolation};
pub use cache::{load_cache, load_cache_expecting, load_cache_file, save_cache, save_cache_file};
pub use memo::{best_move, move_to_value, sg_bruteforce, Memo, DEFAULT_VISIT_LIMIT};
pub use table::{sg_table_n2, sg_table_n2_with_limit, SgTable, DEFAULT_CELL_LIMIT};

/// Smallest nonnegative integer not in `values`.
pub fn mex<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    let mut scratch = MexScratch::default();
    scratch.mex_of(values)
}

/// Reusable presence buffer for repeated mex computations.
///
/// The mex of `d` values is at most `d`, so values above the count are ignored.
#[derive(Default)]
pub(crate) struct MexScratch {
    seen: Vec<bool>,
    buf: Vec<u64>,
}

impl MexScratch {
    pub(crate) fn mex_of<I: IntoIterator<Item = u64>>(&mut self, values: I) -> u64 {
        self.buf.clear();
        self.buf.extend(values);
        self.mex_of_buffered()
    }

    pub(crate) fn push(&mut self, v: u64) {
        self.buf.push(v);
    }

    pub(crate) fn clear(&mut self) {
        self.buf.clear();
    }

    pub(crate) fn mex_of_buffered(&mut self) -> u64 {
        let d = self.buf.len();
        self.seen.clear();
        self.seen.resize(d + 1, false);
        for &v in &self.buf {
            if (v as usize) <= d {
                self.seen[v as usize] = true;
            }
        }
        self.seen.iter().position(|&s| !s).unwrap_or(d) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mex_examples() {
        assert_eq!(mex([]), 0);
        assert_eq!(mex([0, 1, 3]), 2);
        assert_eq!(mex([1, 2]), 0);
        assert_eq!(mex([0, 0, 1, 1, 2]), 3);
        assert_eq!(mex([5, 6, 7]), 0);
    }
}
