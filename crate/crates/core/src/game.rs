//! Positions, rules and move legality for the Nim family.
//!
//! A [`Position`] always carries the extra pile `x0` in front of the main
//! piles `x1..xn`. Only Exco-Nim lets `x0` be nonzero; every other variant
//! requires it to stay at zero, which keeps a single position type for all
//! four games.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A pile configuration `(x0; x1, ..., xn)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position {
    coords: Vec<u64>,
}

impl Position {
    pub fn new(x0: u64, piles: impl Into<Vec<u64>>) -> Self {
        let piles = piles.into();
        let mut coords = Vec::with_capacity(piles.len() + 1);
        coords.push(x0);
        coords.extend(piles);
        Position { coords }
    }

    /// A position with no extra-pile tokens, as used by every non-Exco variant.
    pub fn main_only(piles: impl Into<Vec<u64>>) -> Self {
        Position::new(0, piles)
    }

    /// Builds a position from the flat `x0, x1, ..., xn` tuple.
    pub fn from_coords(coords: impl Into<Vec<u64>>) -> Result<Self> {
        let coords = coords.into();
        if coords.len() < 2 {
            return Err(Error::InvalidPosition {
                pos: format!("{coords:?}"),
                reason: "need x0 and at least one main pile".into(),
            });
        }
        Ok(Position { coords })
    }

    #[inline]
    pub fn x0(&self) -> u64 {
        self.coords[0]
    }

    #[inline]
    pub fn piles(&self) -> &[u64] {
        &self.coords[1..]
    }

    /// The number of main piles.
    #[inline]
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    /// `(x0, x1, ..., xn)` as one slice.
    #[inline]
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }

    /// Total token count `x0 + x1 + ... + xn`.
    pub fn total(&self) -> u64 {
        self.coords.iter().sum()
    }

    pub fn min_pile(&self) -> u64 {
        self.piles().iter().copied().min().unwrap_or(0)
    }

    /// Main piles sorted ascending; the SG value is unchanged.
    pub fn canonical(&self) -> Position {
        let mut coords = self.coords.clone();
        coords[1..].sort_unstable();
        Position { coords }
    }

    pub fn is_canonical(&self) -> bool {
        self.piles().windows(2).all(|w| w[0] <= w[1])
    }

    /// Componentwise `self <= other`.
    pub fn le_componentwise(&self, other: &Position) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = Error;

    /// Parses the flat `x0,x1,...,xn` syntax.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map_err(|_| Error::InvalidPosition {
                    pos: s.to_string(),
                    reason: format!("{t:?} is not a nonnegative integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Position::from_coords(coords)
    }
}

/// Which member of the Nim family is being played.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant")]
pub enum GameRules {
    /// Bouton's Nim: exactly one pile is reduced.
    StandardNim { n: usize },
    /// Moore's `Nim_{n,<=k}`: between 1 and k piles are reduced.
    MooreNim { n: usize, k: usize },
    /// Moore's Nim with `k = n - 1`.
    CoNim { n: usize },
    /// Co-Nim plus an extra pile `x0` that may always be reduced.
    ExcoNim { n: usize },
}

impl GameRules {
    pub fn n(&self) -> usize {
        match *self {
            GameRules::StandardNim { n }
            | GameRules::MooreNim { n, .. }
            | GameRules::CoNim { n }
            | GameRules::ExcoNim { n } => n,
        }
    }

    /// The most main piles a single move may reduce.
    pub fn max_reduced(&self) -> usize {
        match *self {
            GameRules::StandardNim { .. } => 1,
            GameRules::MooreNim { k, .. } => k,
            GameRules::CoNim { n } | GameRules::ExcoNim { n } => n - 1,
        }
    }

    pub fn has_extra_pile(&self) -> bool {
        matches!(self, GameRules::ExcoNim { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GameRules::StandardNim { n } if n >= 1 => Ok(()),
            GameRules::MooreNim { n, k } if k >= 1 && k < n => Ok(()),
            GameRules::MooreNim { n, k } => Err(Error::InvalidRules(format!(
                "Moore's Nim needs 1 <= k < n (got n = {n}, k = {k})"
            ))),
            GameRules::CoNim { n } | GameRules::ExcoNim { n } if n >= 2 => Ok(()),
            other => Err(Error::InvalidRules(format!("{other} needs more piles"))),
        }
    }

    /// Checks that `pos` has the right shape for these rules.
    pub fn check_position(&self, pos: &Position) -> Result<()> {
        self.validate()?;
        if pos.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: pos.n() });
        }
        if !self.has_extra_pile() && pos.x0() != 0 {
            return Err(Error::InvalidPosition {
                pos: pos.to_string(),
                reason: format!("x0 must be 0 for {self}"),
            });
        }
        Ok(())
    }

    /// Short token used on the command line and in cache headers.
    pub fn token(&self) -> String {
        match *self {
            GameRules::StandardNim { .. } => "nim".into(),
            GameRules::MooreNim { k, .. } => format!("moore:{k}"),
            GameRules::CoNim { .. } => "conim".into(),
            GameRules::ExcoNim { .. } => "exco".into(),
        }
    }

    /// Inverse of [`GameRules::token`] given the pile count.
    pub fn from_token(token: &str, n: usize) -> Result<Self> {
        let rules = match token {
            "nim" => GameRules::StandardNim { n },
            "conim" => GameRules::CoNim { n },
            "exco" => GameRules::ExcoNim { n },
            t => match t.strip_prefix("moore:").map(str::parse::<usize>) {
                Some(Ok(k)) => GameRules::MooreNim { n, k },
                _ => return Err(Error::InvalidRules(format!("unknown variant token {t:?}"))),
            },
        };
        rules.validate()?;
        Ok(rules)
    }
}

impl fmt::Display for GameRules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GameRules::StandardNim { n } => write!(f, "Nim(n={n})"),
            GameRules::MooreNim { n, k } => write!(f, "MooreNim(n={n}, k={k})"),
            GameRules::CoNim { n } => write!(f, "CoNim(n={n})"),
            GameRules::ExcoNim { n } => write!(f, "ExcoNim(n={n})"),
        }
    }
}

/// A single move between two positions of the same game.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub from: Position,
    pub to: Position,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

/// The rule a rejected move breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Pile `index` (0 is the extra pile) grew.
    PileIncreased { index: usize },
    /// No token was removed.
    NothingRemoved,
    /// Exco-Nim: every main pile was reduced; at least one must stay intact.
    NoMainPileKept,
    /// More main piles were reduced than the variant allows.
    TooManyReduced { reduced: usize, max: usize },
    /// A non-Exco variant touched the extra pile.
    ExtraPileUsed,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::PileIncreased { index } => {
                write!(f, "pile x{index} increased; no pile may grow")
            }
            Violation::NothingRemoved => f.write_str("no token removed; a move must take at least one"),
            Violation::NoMainPileKept => {
                f.write_str("every main pile reduced; at least one of x1..xn must stay unchanged")
            }
            Violation::TooManyReduced { reduced, max } => {
                write!(f, "{reduced} piles reduced; at most {max} allowed")
            }
            Violation::ExtraPileUsed => f.write_str("x0 must stay 0 in this variant"),
        }
    }
}

/// Rule check on raw coordinate slices of matching length.
pub(crate) fn violation_raw(rules: &GameRules, from: &[u64], to: &[u64]) -> Option<Violation> {
    if !rules.has_extra_pile() && (from[0] != 0 || to[0] != 0) {
        return Some(Violation::ExtraPileUsed);
    }
    let mut reduced = 0usize;
    let mut removed = false;
    for (i, (&a, &b)) in from.iter().zip(to).enumerate() {
        if b > a {
            return Some(Violation::PileIncreased { index: i });
        }
        if b < a {
            removed = true;
            if i > 0 {
                reduced += 1;
            }
        }
    }
    if !removed {
        return Some(Violation::NothingRemoved);
    }
    let n = from.len() - 1;
    match rules {
        GameRules::ExcoNim { .. } if reduced == n => Some(Violation::NoMainPileKept),
        GameRules::ExcoNim { .. } => None,
        _ => {
            let max = rules.max_reduced();
            (reduced > max).then_some(Violation::TooManyReduced { reduced, max })
        }
    }
}

/// Why `from -> to` is illegal, or `None` if it is a legal move.
pub fn move_violation(rules: &GameRules, from: &Position, to: &Position) -> Result<Option<Violation>> {
    rules.validate()?;
    for p in [from, to] {
        if p.n() != rules.n() {
            return Err(Error::DimensionMismatch { expected: rules.n(), found: p.n() });
        }
    }
    Ok(violation_raw(rules, from.coords(), to.coords()))
}

pub fn is_legal_move(rules: &GameRules, from: &Position, to: &Position) -> Result<bool> {
    Ok(move_violation(rules, from, to)?.is_none())
}

/// Calls `f` on every legal destination from `from`, in lexicographic order.
///
/// Walks the componentwise-below box with an odometer (last coordinate fastest)
/// and filters by [`violation_raw`]; callers must have validated shapes.
pub(crate) fn for_each_move(rules: &GameRules, from: &[u64], mut f: impl FnMut(&[u64])) {
    let len = from.len();
    let mut cur = vec![0u64; len];
    loop {
        if violation_raw(rules, from, &cur).is_none() {
            f(&cur);
        }
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < from[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Every position reachable from `from` in one move, lexicographically ordered.
pub fn legal_moves(rules: &GameRules, from: &Position) -> Result<Vec<Position>> {
    rules.check_position(from)?;
    let mut out = Vec::new();
    for_each_move(rules, from.coords(), |c| out.push(Position { coords: c.to_vec() }));
    Ok(out)
}

pub fn is_terminal(rules: &GameRules, pos: &Position) -> Result<bool> {
    Ok(legal_moves(rules, pos)?.is_empty())
}

/// Exco-Nim P-positions are exactly `x0 = 0` with all main piles equal.
pub fn is_p_position_exco(pos: &Position) -> bool {
    pos.x0() == 0 && pos.piles().windows(2).all(|w| w[0] == w[1])
}

/// The unique move re-entering the Exco-Nim P-set: `x0 -> 0`, every main pile
/// down to the smallest one. `None` when `pos` is already a P-position.
pub fn p_move(pos: &Position) -> Option<Move> {
    if is_p_position_exco(pos) {
        return None;
    }
    let m = pos.min_pile();
    Some(Move { from: pos.clone(), to: Position::new(0, vec![m; pos.n()]) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u64]) -> Position {
        Position::from_coords(c.to_vec()).unwrap()
    }

    const EXCO2: GameRules = GameRules::ExcoNim { n: 2 };

    #[test]
    fn legality_examples() {
        assert!(is_legal_move(&EXCO2, &p(&[1, 2, 3]), &p(&[0, 2, 2])).unwrap());
        assert!(!is_legal_move(&EXCO2, &p(&[0, 2, 2]), &p(&[0, 1, 1])).unwrap());
        let moore = GameRules::MooreNim { n: 3, k: 2 };
        assert!(is_legal_move(&moore, &p(&[0, 3, 5, 6]), &p(&[0, 3, 0, 0])).unwrap());
        assert!(!is_legal_move(&moore, &p(&[0, 3, 5, 6]), &p(&[0, 0, 0, 0])).unwrap());
    }

    #[test]
    fn legality_errors() {
        assert!(matches!(
            is_legal_move(&EXCO2, &p(&[0, 1, 1]), &p(&[0, 1, 1, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad = GameRules::MooreNim { n: 3, k: 3 };
        assert!(matches!(
            is_legal_move(&bad, &p(&[0, 1, 1, 1]), &p(&[0, 0, 1, 1])),
            Err(Error::InvalidRules(_))
        ));
    }

    #[test]
    fn violations_are_named() {
        let v = move_violation(&EXCO2, &p(&[0, 2, 2]), &p(&[0, 3, 3])).unwrap();
        assert_eq!(v, Some(Violation::PileIncreased { index: 1 }));
        let v = move_violation(&EXCO2, &p(&[0, 2, 2]), &p(&[0, 2, 2])).unwrap();
        assert_eq!(v, Some(Violation::NothingRemoved));
        let v = move_violation(&EXCO2, &p(&[1, 2, 2]), &p(&[1, 1, 1])).unwrap();
        assert_eq!(v, Some(Violation::NoMainPileKept));
        let nim = GameRules::StandardNim { n: 2 };
        let v = move_violation(&nim, &p(&[0, 2, 2]), &p(&[0, 1, 1])).unwrap();
        assert_eq!(v, Some(Violation::TooManyReduced { reduced: 2, max: 1 }));
    }

    #[test]
    fn move_lists() {
        assert!(legal_moves(&EXCO2, &p(&[0, 0, 0])).unwrap().is_empty());
        assert_eq!(legal_moves(&EXCO2, &p(&[1, 0, 0])).unwrap(), vec![p(&[0, 0, 0])]);
        assert_eq!(
            legal_moves(&EXCO2, &p(&[0, 1, 1])).unwrap(),
            vec![p(&[0, 0, 1]), p(&[0, 1, 0])]
        );
    }

    #[test]
    fn p_positions() {
        assert!(is_p_position_exco(&p(&[0, 7, 7, 7])));
        assert!(!is_p_position_exco(&p(&[1, 7, 7])));
        assert!(!is_p_position_exco(&p(&[0, 1, 2])));
        assert_eq!(p_move(&p(&[1, 2, 3])).unwrap().to, p(&[0, 2, 2]));
        assert_eq!(p_move(&p(&[0, 5, 5])), None);
        assert_eq!(p_move(&p(&[3, 0, 4, 9])).unwrap().to, p(&[0, 0, 0, 0]));
    }

    #[test]
    fn non_exco_rejects_extra_pile() {
        let nim = GameRules::StandardNim { n: 2 };
        assert!(nim.check_position(&p(&[1, 2, 3])).is_err());
    }

    #[test]
    fn tokens_round_trip() {
        for r in [
            GameRules::StandardNim { n: 3 },
            GameRules::MooreNim { n: 4, k: 2 },
            GameRules::CoNim { n: 3 },
            GameRules::ExcoNim { n: 2 },
        ] {
            assert_eq!(GameRules::from_token(&r.token(), r.n()).unwrap(), r);
        }
    }

    #[test]
    fn parse_and_display() {
        let pos: Position = "1, 2,3".parse().unwrap();
        assert_eq!(pos, p(&[1, 2, 3]));
        assert_eq!(pos.to_string(), "1,2,3");
        assert!("1,x".parse::<Position>().is_err());
        assert!("4".parse::<Position>().is_err());
    }
}
