use std::collections::HashMap;

use super::MexScratch;
use crate::error::{Error, Result};
use crate::game::{for_each_move, GameRules, Move, Position};

/// Default cap on destination visits for one [`Memo`].
pub const DEFAULT_VISIT_LIMIT: u64 = 100_000_000;

/// Lazily filled SG memo keyed on canonical (sorted) positions.
#[derive(Clone, Debug)]
pub struct Memo {
    rules: GameRules,
    values: HashMap<Vec<u64>, u64>,
    visit_limit: u64,
    visits: u64,
}

impl Memo {
    pub fn new(rules: GameRules) -> Self {
        Memo::with_limit(rules, DEFAULT_VISIT_LIMIT)
    }

    pub fn with_limit(rules: GameRules, visit_limit: u64) -> Self {
        Memo { rules, values: HashMap::new(), visit_limit, visits: 0 }
    }

    pub fn rules(&self) -> &GameRules {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Destination visits spent so far.
    pub fn visits(&self) -> u64 {
        self.visits
    }

    pub fn get(&self, pos: &Position) -> Option<u64> {
        self.values.get(pos.canonical().coords()).copied()
    }

    fn check_rules(&self, rules: &GameRules) -> Result<()> {
        if *rules != self.rules {
            return Err(Error::InvalidArgument(format!(
                "memo was built for {}, not {rules}",
                self.rules
            )));
        }
        Ok(())
    }
}

fn canonical_key(coords: &[u64]) -> Vec<u64> {
    let mut key = coords.to_vec();
    key[1..].sort_unstable();
    key
}

/// G(pos) by the mex recursion, memoizing every visited position.
///
/// Uses an explicit stack, so deep positions do not overflow the call stack.
pub fn sg_bruteforce(rules: &GameRules, pos: &Position, memo: &mut Memo) -> Result<u64> {
    rules.check_position(pos)?;
    memo.check_rules(rules)?;
    let root = canonical_key(pos.coords());
    if let Some(&v) = memo.values.get(&root) {
        return Ok(v);
    }

    let mut scratch = MexScratch::default();
    let mut stack = vec![root.clone()];
    let mut missing: Vec<Vec<u64>> = Vec::new();
    while let Some(top) = stack.last() {
        if memo.values.contains_key(top) {
            stack.pop();
            continue;
        }
        scratch.clear();
        missing.clear();
        let mut visits = 0u64;
        for_each_move(rules, top, |dest| {
            visits += 1;
            let key = canonical_key(dest);
            match memo.values.get(&key) {
                Some(&v) => scratch.push(v),
                None => missing.push(key),
            }
        });
        memo.visits += visits;
        if memo.visits > memo.visit_limit {
            return Err(Error::ResourceLimit { what: "SG recursion visits", limit: memo.visit_limit });
        }
        if missing.is_empty() {
            let key = stack.pop().expect("stack is non-empty");
            let g = scratch.mex_of_buffered();
            memo.values.insert(key, g);
        } else {
            missing.sort_unstable();
            missing.dedup();
            stack.append(&mut missing);
        }
    }
    Ok(memo.values[&root])
}

/// First legal move (in lexicographic destination order) to an SG-zero position.
pub fn best_move(rules: &GameRules, pos: &Position, memo: &mut Memo) -> Result<Option<Move>> {
    move_to_value_opt(rules, pos, 0, memo)
}

/// A legal move whose destination has SG value exactly `v`; requires `v < G(pos)`.
pub fn move_to_value(rules: &GameRules, pos: &Position, v: u64, memo: &mut Memo) -> Result<Move> {
    let g = sg_bruteforce(rules, pos, memo)?;
    if v >= g {
        return Err(Error::ValueNotRealizable { pos: pos.to_string(), value: v, sg: g });
    }
    move_to_value_opt(rules, pos, v, memo)?.ok_or_else(|| Error::ValueNotRealizable {
        pos: pos.to_string(),
        value: v,
        sg: g,
    })
}

fn move_to_value_opt(rules: &GameRules, pos: &Position, v: u64, memo: &mut Memo) -> Result<Option<Move>> {
    if sg_bruteforce(rules, pos, memo)? == v {
        return Ok(None);
    }
    let mut found = None;
    for_each_move(rules, pos.coords(), |dest| {
        if found.is_none() && memo.values.get(&canonical_key(dest)) == Some(&v) {
            found = Some(dest.to_vec());
        }
    });
    Ok(found.map(|c| Move {
        from: pos.clone(),
        to: Position::from_coords(c).expect("destination has the same shape"),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_p_position_exco;

    fn p(c: &[u64]) -> Position {
        Position::from_coords(c.to_vec()).unwrap()
    }

    #[test]
    fn reference_values() {
        let nim = GameRules::StandardNim { n: 2 };
        let mut memo = Memo::new(nim);
        assert_eq!(sg_bruteforce(&nim, &p(&[0, 3, 5]), &mut memo).unwrap(), 6);

        let exco = GameRules::ExcoNim { n: 2 };
        let mut memo = Memo::new(exco);
        assert_eq!(sg_bruteforce(&exco, &p(&[1, 1, 2]), &mut memo).unwrap(), 4);
        assert_eq!(sg_bruteforce(&exco, &p(&[2, 1, 3]), &mut memo).unwrap(), 6);
        // idempotent, and served from the memo
        let before = memo.visits();
        assert_eq!(sg_bruteforce(&exco, &p(&[2, 3, 1]), &mut memo).unwrap(), 6);
        assert_eq!(memo.visits(), before);
    }

    #[test]
    fn visit_limit_is_reported() {
        let exco = GameRules::ExcoNim { n: 2 };
        let mut memo = Memo::with_limit(exco, 50);
        let err = sg_bruteforce(&exco, &p(&[3, 6, 7]), &mut memo).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { limit: 50, .. }));
        assert!(err.to_string().contains("50"));
    }

    #[test]
    fn best_moves() {
        let exco = GameRules::ExcoNim { n: 2 };
        let mut memo = Memo::new(exco);
        let mv = best_move(&exco, &p(&[1, 2, 2]), &mut memo).unwrap().unwrap();
        assert_eq!(mv.to, p(&[0, 2, 2]));
        assert!(best_move(&exco, &p(&[0, 5, 5]), &mut memo).unwrap().is_none());

        let nim = GameRules::StandardNim { n: 3 };
        let mut memo = Memo::new(nim);
        assert!(best_move(&nim, &p(&[0, 3, 5, 6]), &mut memo).unwrap().is_none());
    }

    #[test]
    fn moves_to_values() {
        let exco = GameRules::ExcoNim { n: 2 };
        let mut memo = Memo::new(exco);
        let pos = p(&[1, 1, 2]);
        let mv = move_to_value(&exco, &pos, 0, &mut memo).unwrap();
        assert!(is_p_position_exco(&mv.to));
        let mv = move_to_value(&exco, &pos, 3, &mut memo).unwrap();
        assert_eq!(sg_bruteforce(&exco, &mv.to, &mut memo).unwrap(), 3);
        assert!(matches!(
            move_to_value(&exco, &pos, 4, &mut memo),
            Err(Error::ValueNotRealizable { sg: 4, .. })
        ));
    }

    #[test]
    fn rules_mismatch() {
        let mut memo = Memo::new(GameRules::CoNim { n: 3 });
        let nim = GameRules::StandardNim { n: 3 };
        assert!(sg_bruteforce(&nim, &p(&[0, 1, 2, 3]), &mut memo).is_err());
    }
}
