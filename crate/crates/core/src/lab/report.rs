use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::period::detect_within;
use super::{bit_len, conj1_predict, k_of, require_covers};
use crate::error::{Error, Result};
use crate::game::Position;
use crate::sg::SgTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConjectureId {
    /// `x1 = 2^k`: value is the lower or upper bound by a periodic rule.
    C1,
    /// A power of two in `(x1, x1 + x0]` forces the upper bound.
    C2,
    /// Under `2^(k-1) < x1 < x0 + x1 < 2^k`, `x2` within `x0` of a multiple of
    /// `2^k` forces the upper bound.
    C3,
    /// Upper bound for all large `x2` when `x0 > 1`, or `x0 = 1` with odd `x1`.
    C4,
    /// `x0 = 1`, even `x1`: `u - G` is eventually even and `2^k`-periodic.
    C5,
    /// `x0 >= 2^(k-1)` and `x1 < 2^k` give the upper bound (proven).
    P4,
    /// Values below `2^k` survive a shift by `(0, 2^k, 2^k)` (proven).
    #[serde(rename = "SHIFT")]
    Shift,
    /// Every position of value `v` shifts down into the core box (proven).
    T3,
}

impl ConjectureId {
    /// Proven statements; a counterexample means an engine bug.
    pub fn is_proven(self) -> bool {
        matches!(self, ConjectureId::P4 | ConjectureId::Shift | ConjectureId::T3)
    }
}

impl fmt::Display for ConjectureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConjectureId::C1 => "C1",
            ConjectureId::C2 => "C2",
            ConjectureId::C3 => "C3",
            ConjectureId::C4 => "C4",
            ConjectureId::C5 => "C5",
            ConjectureId::P4 => "P4",
            ConjectureId::Shift => "SHIFT",
            ConjectureId::T3 => "T3",
        };
        f.write_str(s)
    }
}

/// Inclusive integer range `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub lo: u64,
    pub hi: u64,
}

impl Span {
    pub fn new(lo: u64, hi: u64) -> Self {
        Span { lo, hi }
    }

    pub fn single(v: u64) -> Self {
        Span { lo: v, hi: v }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<u64> {
        self.lo..=self.hi
    }
}

/// Sweep domain: every `(x0, x1, x2)` with `x0`, `x1` in their spans and
/// `x1 <= x2 <= x2_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRanges {
    pub x0: Span,
    pub x1: Span,
    pub x2_max: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Supported,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub pos: Position,
    pub expected: u64,
    pub actual: u64,
}

/// Per-row empirical threshold: the row agrees with the claim for every
/// `x2 > threshold` up to `x2_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub x0: u64,
    pub x1: u64,
    pub threshold: i64,
    pub x2_max: u64,
    /// At least three periods of `2^k` follow the threshold inside the sweep.
    pub settled: bool,
    /// Periodic part of `u - G`, for periodicity claims.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub conjecture: ConjectureId,
    pub params: BTreeMap<String, u64>,
    pub range: SweepRanges,
    pub checked: u64,
    pub counterexamples: Vec<Counterexample>,
    pub status: Status,
    pub thresholds: Vec<Threshold>,
}

impl ConjectureReport {
    fn new(conjecture: ConjectureId, range: SweepRanges) -> Self {
        ConjectureReport {
            conjecture,
            params: BTreeMap::new(),
            range,
            checked: 0,
            counterexamples: Vec::new(),
            status: Status::Supported,
            thresholds: Vec::new(),
        }
    }

    fn compare(&mut self, pos: [u64; 3], expected: u64, actual: u64) {
        self.checked += 1;
        if expected != actual {
            self.counterexamples.push(Counterexample { pos: Position::new(pos[0], vec![pos[1], pos[2]]), expected, actual });
        }
    }

    fn finish(mut self) -> Self {
        self.status = if self.counterexamples.is_empty() { Status::Supported } else { Status::Refuted };
        self
    }

    pub fn threshold_for(&self, x0: u64, x1: u64) -> Option<&Threshold> {
        self.thresholds.iter().find(|t| t.x0 == x0 && t.x1 == x1)
    }
}

/// `2^(k-1) < x1 < x0 + x1 < 2^k` for the `k` fixed by `x1`.
fn strictly_inside_octave(x0: u64, x1: u64) -> bool {
    if x1 == 0 || x0 == 0 || x1.is_power_of_two() {
        return false;
    }
    x0 + x1 < 1u64 << bit_len(x1)
}

/// Compares each position of `ranges` with the rule named by `id`.
///
/// C1, C2, C3 and P4 compare `G` to a predicted value. C4 reports, per row,
/// the last `x2` with `G < u`. C5 compares the parity of the detected
/// periodic pattern of `u - G` (expected 0, actual `delta mod 2`) and reports
/// the pattern per row. C4 and C5 never refute a row whose tail is too short
/// to settle; such rows carry `settled = false`.
pub fn check_conjecture(id: ConjectureId, ranges: &SweepRanges, table: &SgTable) -> Result<ConjectureReport> {
    if ranges.x0.is_empty() || ranges.x1.is_empty() {
        return Ok(ConjectureReport::new(id, *ranges));
    }
    require_covers(table, &[ranges.x0.hi, ranges.x1.hi, ranges.x2_max.max(ranges.x1.hi)])?;
    let g = |x0: u64, x1: u64, x2: u64| table.value_at(&[x0, x1, x2]).expect("covered by the sweep check");
    let mut rep = ConjectureReport::new(id, *ranges);
    match id {
        ConjectureId::C1 => {
            for x0 in ranges.x0.iter() {
                for x1 in ranges.x1.iter().filter(|x| x.is_power_of_two()) {
                    for x2 in x1..=ranges.x2_max {
                        let predicted = conj1_predict(&Position::new(x0, vec![x1, x2]))?;
                        rep.compare([x0, x1, x2], predicted, g(x0, x1, x2));
                    }
                }
            }
        }
        ConjectureId::C2 => {
            for x0 in ranges.x0.iter() {
                for x1 in ranges.x1.iter() {
                    let next_pow = 1u64 << bit_len(x1);
                    if next_pow > x1 + x0 {
                        continue;
                    }
                    for x2 in x1..=ranges.x2_max {
                        rep.compare([x0, x1, x2], x0 + x1 + x2, g(x0, x1, x2));
                    }
                }
            }
        }
        ConjectureId::C3 => {
            for x0 in ranges.x0.iter() {
                for x1 in ranges.x1.iter().filter(|&x1| strictly_inside_octave(x0, x1)) {
                    let step = 1u64 << bit_len(x1);
                    for x2 in x1..=ranges.x2_max {
                        let r = x2 % step;
                        if r.min(step - r) <= x0 {
                            rep.compare([x0, x1, x2], x0 + x1 + x2, g(x0, x1, x2));
                        }
                    }
                }
            }
        }
        ConjectureId::C4 => {
            for x0 in ranges.x0.iter() {
                for x1 in ranges.x1.iter() {
                    if !strictly_inside_octave(x0, x1) || !(x0 > 1 || x1 % 2 == 1) {
                        continue;
                    }
                    let period = 1u64 << bit_len(x1);
                    let mut last = x1 as i64 - 1;
                    for x2 in x1..=ranges.x2_max {
                        rep.checked += 1;
                        if g(x0, x1, x2) < x0 + x1 + x2 {
                            last = x2 as i64;
                        }
                    }
                    rep.thresholds.push(Threshold {
                        x0,
                        x1,
                        threshold: last,
                        x2_max: ranges.x2_max,
                        settled: ranges.x2_max as i64 - last >= 3 * period as i64,
                        pattern: None,
                    });
                }
            }
        }
        ConjectureId::C5 => {
            for x1 in ranges.x1.iter() {
                if ranges.x0.lo > 1 || ranges.x0.hi < 1 || x1 % 2 == 1 || !strictly_inside_octave(1, x1) {
                    continue;
                }
                let k = bit_len(x1);
                let period = 1u64 << k;
                if ranges.x2_max < x1 + 3 * period {
                    rep.thresholds.push(Threshold {
                        x0: 1,
                        x1,
                        threshold: x1 as i64 - 1,
                        x2_max: ranges.x2_max,
                        settled: false,
                        pattern: None,
                    });
                    continue;
                }
                let report = detect_within(1, x1, k, table, ranges.x2_max)?;
                if report.found {
                    for (i, &d) in report.pattern.iter().enumerate() {
                        rep.checked += 1;
                        if d % 2 == 1 {
                            // first x2 after the threshold carrying this residue
                            let start = report.start() + 1;
                            let x2 = start + ((i as u64 + period - 1 + period - start % period) % period);
                            rep.counterexamples.push(Counterexample {
                                pos: Position::new(1, vec![x1, x2]),
                                expected: 0,
                                actual: 1,
                            });
                        }
                    }
                }
                rep.thresholds.push(Threshold {
                    x0: 1,
                    x1,
                    threshold: report.threshold,
                    x2_max: ranges.x2_max,
                    settled: report.found,
                    pattern: report.found.then_some(report.pattern),
                });
            }
        }
        ConjectureId::P4 => {
            for x0 in ranges.x0.iter() {
                for x1 in ranges.x1.iter() {
                    // smallest k with x1 < 2^k gives the weakest requirement on x0
                    let k = bit_len(x1);
                    let prop = if k == 0 { x0 >= 1 } else { x0 >= 1u64 << (k - 1) };
                    if !(prop || x0 >= x1) {
                        continue;
                    }
                    for x2 in x1..=ranges.x2_max {
                        rep.compare([x0, x1, x2], x0 + x1 + x2, g(x0, x1, x2));
                    }
                }
            }
        }
        ConjectureId::Shift | ConjectureId::T3 => {
            return Err(Error::InvalidArgument(format!(
                "{id} is checked by its own verifier, not by a sweep"
            )));
        }
    }
    Ok(rep.finish())
}

/// Both shift claims over the box below `bounds`, plus the xor inequality
/// for all `2^(k-1) <= a < 2^k`, `b < 2^k` when `k >= 1`.
pub fn verify_shift_lemma(bounds: [u64; 3], k: u32, table: &SgTable) -> Result<ConjectureReport> {
    if k >= 32 {
        return Err(Error::InvalidArgument(format!("shift exponent {k} is too large")));
    }
    let step = 1u64 << k;
    require_covers(table, &[bounds[0], bounds[1] + step, bounds[2] + step])?;
    let range = SweepRanges { x0: Span::new(0, bounds[0]), x1: Span::new(0, bounds[1]), x2_max: bounds[2] };
    let mut rep = ConjectureReport::new(ConjectureId::Shift, range);
    rep.params.insert("k".into(), k as u64);
    for x0 in 0..=bounds[0] {
        for x1 in 0..=bounds[1] {
            for x2 in 0..=bounds[2] {
                let before = table.value_at(&[x0, x1, x2]).expect("box checked");
                let after = table.value_at(&[x0, x1 + step, x2 + step]).expect("box checked");
                if before < step {
                    rep.compare([x0, x1, x2], before, after);
                } else {
                    rep.checked += 1;
                    if after < step {
                        rep.counterexamples.push(Counterexample {
                            pos: Position::new(x0, vec![x1, x2]),
                            expected: step,
                            actual: after,
                        });
                    }
                }
            }
        }
    }
    if k >= 1 {
        let half = step / 2;
        for a in half..step {
            for b in 0..step {
                rep.checked += 1;
                if ((a ^ b) > b) != (b < half) {
                    rep.counterexamples.push(Counterexample { pos: Position::new(0, vec![a, b]), expected: b, actual: a ^ b });
                }
            }
        }
    }
    Ok(rep.finish())
}

/// For every table position with `x1 <= x2` and value `v >= 1`, removing
/// `floor(x1 / 2^k(v))` copies of `(0, 2^k, 2^k)` lands in the core box with
/// the same value. Counterexamples carry the reduced value as `actual`, or
/// `u64::MAX` when the reduced position leaves the core box.
pub fn verify_core_reduction(table: &SgTable) -> Result<ConjectureReport> {
    let b = table.bounds();
    if b.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 2, found: b.len() - 1 });
    }
    let range = SweepRanges { x0: Span::new(0, b[0]), x1: Span::new(0, b[1]), x2_max: b[2] };
    let mut rep = ConjectureReport::new(ConjectureId::T3, range);
    for (pos, v) in table.iter() {
        let c = pos.coords();
        if v == 0 || c[1] > c[2] {
            continue;
        }
        let k = k_of(v)?;
        let step = 1u64 << k;
        let lam = c[1] >> k;
        let hat = [c[0], c[1] - lam * step, c[2] - lam * step];
        let in_core = hat[0] <= v && hat[1] < step / 2 && hat[2] < step;
        let actual = if in_core { table.value_at(&hat).expect("smaller than a table cell") } else { u64::MAX };
        rep.compare([c[0], c[1], c[2]], v, actual);
    }
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sg::sg_table_n2;

    fn sweep(x0: (u64, u64), x1: (u64, u64), x2_max: u64) -> SweepRanges {
        SweepRanges { x0: Span::new(x0.0, x0.1), x1: Span::new(x1.0, x1.1), x2_max }
    }

    #[test]
    fn octave_condition() {
        assert!(strictly_inside_octave(6, 19));
        assert!(!strictly_inside_octave(13, 19));
        assert!(!strictly_inside_octave(1, 16));
        assert!(!strictly_inside_octave(0, 19));
        assert!(strictly_inside_octave(1, 5));
        assert!(!strictly_inside_octave(3, 5));
    }

    #[test]
    fn small_sweeps() {
        let t = sg_table_n2(3, 16, 64).unwrap();
        let c1 = check_conjecture(ConjectureId::C1, &sweep((0, 3), (1, 16), 64), &t).unwrap();
        assert_eq!(c1.status, Status::Supported);
        assert!(c1.checked > 0);
        let p4 = check_conjecture(ConjectureId::P4, &sweep((0, 3), (0, 16), 64), &t).unwrap();
        assert_eq!(p4.status, Status::Supported);
        let c4 = check_conjecture(ConjectureId::C4, &sweep((1, 1), (5, 5), 64), &t).unwrap();
        assert_eq!(c4.thresholds[0].threshold, 14);
        assert!(c4.thresholds[0].settled);
        assert!(check_conjecture(ConjectureId::C2, &sweep((0, 4), (0, 4), 8), &t).is_err());
    }

    #[test]
    fn proven_verifiers() {
        let t = sg_table_n2(3, 24, 24).unwrap();
        for k in 1..=3 {
            let r = verify_shift_lemma([3, 16, 16], k, &t).unwrap();
            assert_eq!(r.status, Status::Supported, "k = {k}");
        }
        assert!(verify_shift_lemma([3, 16, 16], 4, &t).is_err());
        let r = verify_core_reduction(&t).unwrap();
        assert_eq!(r.status, Status::Supported);
    }
}
