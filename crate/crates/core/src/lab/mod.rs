//! Two-pile Exco-Nim: shifts by `(0, 2^k, 2^k)`, the bounded SG query, core
//! sets, and empirical checkers for the open conjectures.
//!
//! Every analysis here reads an immutable [`SgTable`] built by
//! [`crate::sg::sg_table_n2`]. Positions are compared with `x1 <= x2`.

mod period;
mod report;

pub use period::{periodicity_detect, PeriodicityReport};
pub use report::{
    check_conjecture, verify_core_reduction, verify_shift_lemma, ConjectureId, ConjectureReport, Counterexample,
    Span, Status, SweepRanges, Threshold,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{is_p_position_exco, Position};
use crate::sg::{sg_table_n2, SgTable};

/// The `k` with `2^(k-1) <= v < 2^k`.
pub fn k_of(v: u64) -> Result<u32> {
    if v == 0 {
        return Err(Error::KOfZero);
    }
    Ok(u64::BITS - v.leading_zeros())
}

/// Number of binary digits of `x` (0 for 0); the smallest `k` with `x < 2^k`.
pub(crate) fn bit_len(x: u64) -> u32 {
    u64::BITS - x.leading_zeros()
}

fn require_n2(pos: &Position) -> Result<()> {
    if pos.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: pos.n() });
    }
    Ok(())
}

/// `pos + lam * (0, 2^k, 2^k)`.
pub fn shift(pos: &Position, k: u32, lam: i64) -> Result<Position> {
    require_n2(pos)?;
    let step = 1i128.checked_shl(k).filter(|_| k < 64).ok_or_else(|| {
        Error::InvalidArgument(format!("shift exponent {k} is too large"))
    })?;
    let moved = |x: u64| -> Result<u64> {
        let r = x as i128 + lam as i128 * step;
        u64::try_from(r).map_err(|_| {
            Error::InvalidArgument(format!("shifting {pos} by {lam} * 2^{k} leaves the nonnegative range"))
        })
    };
    Ok(Position::new(pos.x0(), vec![moved(pos.piles()[0])?, moved(pos.piles()[1])?]))
}

/// Outcome of a bounded SG query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SgAnswer {
    /// `G = w`.
    Exact(u64),
    /// `G >= b`, where `b` exceeds the query bound.
    AtLeast(u64),
}

/// Reduction step shared by [`sg_bounded`] and [`BoundedSolver`]: either a
/// final answer, or the reduced position whose value must be looked up.
enum Reduced {
    Done(SgAnswer),
    Lookup { xhat: [u64; 3], k: u32 },
}

fn reduce(pos: &Position, v: u64) -> Result<Reduced> {
    require_n2(pos)?;
    if v == 0 {
        let ans = if is_p_position_exco(pos) { SgAnswer::Exact(0) } else { SgAnswer::AtLeast(1) };
        return Ok(Reduced::Done(ans));
    }
    let k = k_of(v)?;
    let x0 = pos.x0();
    if x0 > v {
        return Ok(Reduced::Done(SgAnswer::AtLeast(x0)));
    }
    let (a, b) = {
        let p = pos.piles();
        (p[0].min(p[1]), p[0].max(p[1]))
    };
    let step = 1u64 << k;
    let lam = a >> k;
    let xhat = [x0, a - lam * step, b - lam * step];
    if xhat[2] >= step {
        // xhat1 < 2^k <= xhat2 forces xhat1 ^ xhat2 >= 2^k
        return Ok(Reduced::Done(SgAnswer::AtLeast(step)));
    }
    Ok(Reduced::Lookup { xhat, k })
}

fn finish(g_hat: u64, k: u32) -> SgAnswer {
    let step = 1u64 << k;
    if g_hat >= step {
        SgAnswer::AtLeast(step)
    } else {
        SgAnswer::Exact(g_hat)
    }
}

/// Either the exact SG value of a two-pile position or a certificate that it
/// exceeds `v`, using only a table of size `O(v^3)`.
///
/// The position is shifted down by multiples of `(0, 2^k, 2^k)` with
/// `k = k(v)` until the smaller main pile is below `2^k`; the value there
/// transfers back whenever it is below `2^k`.
pub fn sg_bounded(pos: &Position, v: u64) -> Result<SgAnswer> {
    match reduce(pos, v)? {
        Reduced::Done(ans) => Ok(ans),
        Reduced::Lookup { xhat, k } => {
            let t = sg_table_n2(xhat[0], xhat[1], xhat[2])?;
            Ok(finish(t.value_at(&xhat).expect("corner of its own box"), k))
        }
    }
}

/// [`sg_bounded`] with one reusable core table for all bounds up to `vmax`.
pub struct BoundedSolver {
    vmax: u64,
    table: SgTable,
}

impl BoundedSolver {
    pub fn new(vmax: u64) -> Result<Self> {
        let side = match vmax {
            0 => 0,
            v => (1u64 << k_of(v)?) - 1,
        };
        Ok(BoundedSolver { vmax, table: sg_table_n2(vmax, side, side)? })
    }

    pub fn vmax(&self) -> u64 {
        self.vmax
    }

    pub fn query(&self, pos: &Position, v: u64) -> Result<SgAnswer> {
        if v > self.vmax {
            return sg_bounded(pos, v);
        }
        match reduce(pos, v)? {
            Reduced::Done(ans) => Ok(ans),
            Reduced::Lookup { xhat, k } => {
                let g = self.table.value_at(&xhat).expect("reduced positions lie in the core box");
                Ok(finish(g, k))
            }
        }
    }
}

/// Positions of value `v` inside `x0 <= v, x1 < 2^(k-1), x2 < 2^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreSet {
    pub v: u64,
    pub k: u32,
    pub members: Vec<Position>,
}

pub fn core_enumerate(v: u64, table: &SgTable) -> Result<CoreSet> {
    let k = k_of(v)?;
    let corner = [v, (1u64 << (k - 1)) - 1, (1u64 << k) - 1];
    require_covers(table, &corner)?;
    let mut members = Vec::new();
    for x0 in 0..=corner[0] {
        for x1 in 0..=corner[1] {
            for x2 in 0..=corner[2] {
                if table.value_at(&[x0, x1, x2]) == Some(v) {
                    members.push(Position::new(x0, vec![x1, x2]));
                }
            }
        }
    }
    Ok(CoreSet { v, k, members })
}

pub(crate) fn require_covers(table: &SgTable, coords: &[u64]) -> Result<()> {
    if table.covers(coords) {
        Ok(())
    } else {
        Err(Error::OutOfTable { pos: join(coords), bounds: join(table.bounds()) })
    }
}

/// `G(pos)` from a two-pile table, trying the swapped piles if needed.
pub(crate) fn table_g(table: &SgTable, pos: &Position) -> Result<u64> {
    require_n2(pos)?;
    let c = pos.coords();
    table
        .value_at(c)
        .or_else(|| table.value_at(&[c[0], c[2], c[1]]))
        .ok_or_else(|| Error::OutOfTable { pos: pos.to_string(), bounds: join(table.bounds()) })
}

fn join(c: &[u64]) -> String {
    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// `u(pos) - G(pos)`.
pub fn delta_u(pos: &Position, table: &SgTable) -> Result<u64> {
    Ok(pos.total() - table_g(table, pos)?)
}

/// 1 if `c mod a >= b`, else 0.
pub fn f_indicator(a: u64, b: u64, c: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidArgument("f(a, b, c) needs a >= 1".into()));
    }
    Ok(u64::from(c % a >= b))
}

/// Predicted value `u - 2 x1 f(2 x1, x0 + x1, x0 + x2)` for `x1 = 2^k <= x2`:
/// the lower bound inside the periodic window, the upper bound outside it.
pub fn conj1_predict(pos: &Position) -> Result<u64> {
    require_n2(pos)?;
    let (x0, x1, x2) = (pos.x0(), pos.piles()[0], pos.piles()[1]);
    if !x1.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("x1 = {x1} is not a power of two")));
    }
    if x2 < x1 {
        return Err(Error::InvalidArgument(format!("need x1 <= x2, got {pos}")));
    }
    let f = f_indicator(2 * x1, x0 + x1, x0 + x2)?;
    Ok(pos.total() - 2 * x1 * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u64]) -> Position {
        Position::from_coords(c.to_vec()).unwrap()
    }

    #[test]
    fn k_values() {
        assert_eq!(k_of(1).unwrap(), 1);
        assert_eq!(k_of(4).unwrap(), 3);
        assert_eq!(k_of(13).unwrap(), 4);
        assert_eq!(k_of(0), Err(Error::KOfZero));
        assert_eq!(Error::KOfZero.to_string(), "k(0) undefined; caller must special-case v=0");
    }

    #[test]
    fn shifts() {
        assert_eq!(shift(&p(&[1, 0, 0]), 1, 1).unwrap(), p(&[1, 2, 2]));
        assert_eq!(shift(&p(&[1, 2, 3]), 1, 1).unwrap(), p(&[1, 4, 5]));
        assert_eq!(shift(&p(&[0, 5, 5]), 2, -1).unwrap(), p(&[0, 1, 1]));
        assert!(shift(&p(&[0, 1, 5]), 1, -1).is_err());
        assert!(shift(&p(&[0, 1, 5, 5]), 1, 1).is_err());
    }

    #[test]
    fn bounded_examples() {
        assert_eq!(sg_bounded(&p(&[1, 2, 3]), 6).unwrap(), SgAnswer::Exact(6));
        assert_eq!(sg_bounded(&p(&[1, 4, 5]), 3).unwrap(), SgAnswer::Exact(2));
        assert_eq!(sg_bounded(&p(&[1, 5, 6]), 4).unwrap(), SgAnswer::AtLeast(8));
        assert_eq!(sg_bounded(&p(&[0, 3, 3]), 0).unwrap(), SgAnswer::Exact(0));
        assert_eq!(sg_bounded(&p(&[0, 3, 4]), 0).unwrap(), SgAnswer::AtLeast(1));
        assert_eq!(sg_bounded(&p(&[9, 3, 4]), 5).unwrap(), SgAnswer::AtLeast(9));
        let solver = BoundedSolver::new(7).unwrap();
        assert_eq!(solver.query(&p(&[1, 3, 2]), 6).unwrap(), SgAnswer::Exact(6));
        assert_eq!(solver.query(&p(&[1, 5, 6]), 11).unwrap(), SgAnswer::Exact(11));
    }

    #[test]
    fn core_sets() {
        let t = sg_table_n2(4, 8, 8).unwrap();
        let c1 = core_enumerate(1, &t).unwrap();
        assert_eq!(c1.members, vec![p(&[0, 0, 1]), p(&[1, 0, 0])]);
        let c2 = core_enumerate(2, &t).unwrap();
        assert!(c2.members.contains(&p(&[1, 0, 1])));
        assert!(core_enumerate(8, &t).is_err());
    }

    #[test]
    fn indicator_and_prediction() {
        assert_eq!(f_indicator(8, 5, 17).unwrap(), 0);
        assert_eq!(f_indicator(4, 2, 15).unwrap(), 1);
        assert_eq!(f_indicator(2, 3, 7).unwrap(), 0);
        assert!(f_indicator(0, 0, 0).is_err());
        assert_eq!(conj1_predict(&p(&[0, 2, 15])).unwrap(), 13);
        assert_eq!(conj1_predict(&p(&[0, 4, 17])).unwrap(), 21);
        assert_eq!(conj1_predict(&p(&[1, 16, 32])).unwrap(), 49);
        assert!(conj1_predict(&p(&[1, 6, 32])).is_err());
    }

    #[test]
    fn deltas() {
        let t = sg_table_n2(1, 6, 14).unwrap();
        assert_eq!(delta_u(&p(&[1, 5, 14]), &t).unwrap(), 1);
        assert_eq!(delta_u(&p(&[1, 6, 14]), &t).unwrap(), 12);
        assert_eq!(delta_u(&p(&[0, 4, 4]), &t).unwrap(), 8);
        assert!(delta_u(&p(&[2, 4, 4]), &t).is_err());
    }
}
