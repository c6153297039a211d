use std::fmt;

use serde::Serialize;

use super::table::SgTable;
use crate::error::Result;
use crate::game::{for_each_move, GameRules, Position};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// Some move keeps the SG value.
    ValuePreserved,
    /// Some `v < G(x)` is not reachable in one move.
    ValueMissing,
    /// `G(x) = 0` disagrees with the win/loss recursion.
    ZeroMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub pos: Position,
    /// The offending destination, value, or P flag depending on `axiom`.
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checked: u64,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} positions checked, {} violations", self.checked, self.violations.len())
    }
}

/// Checks the basic SG properties over the box below `bounds`:
/// no move keeps the value, every smaller value is reachable, and the zeros
/// are exactly the positions lost by the player to move.
pub fn verify_sg_axioms(rules: &GameRules, bounds: &[u64]) -> Result<AxiomReport> {
    let table = SgTable::build(*rules, bounds)?;
    Ok(check_table(&table))
}

pub(crate) fn check_table(table: &SgTable) -> AxiomReport {
    let rules = *table.rules();
    let mut report = AxiomReport::default();
    // losing[i]: the player to move at cell i loses, by plain win/loss recursion
    let mut losing: Vec<bool> = Vec::with_capacity(table.len());
    let mut reached = Vec::new();
    for (pos, g) in table.iter() {
        report.checked += 1;
        reached.clear();
        reached.resize(g as usize, false);
        let mut all_winning = true;
        let mut preserved = None;
        for_each_move(&rules, pos.coords(), |dest| {
            let h = table.value_at(dest).expect("destinations stay in the box");
            if h == g && preserved.is_none() {
                preserved = Some(dest.to_vec());
            }
            if h < g {
                reached[h as usize] = true;
            }
            if losing[lex_index(table.bounds(), dest)] {
                all_winning = false;
            }
        });
        if let Some(dest) = preserved {
            report.violations.push(AxiomViolation {
                axiom: Axiom::ValuePreserved,
                pos: pos.clone(),
                detail: format!("move to {} keeps value {g}", join(&dest)),
            });
        }
        if let Some(v) = reached.iter().position(|&r| !r) {
            report.violations.push(AxiomViolation {
                axiom: Axiom::ValueMissing,
                pos: pos.clone(),
                detail: format!("no move reaches value {v} below {g}"),
            });
        }
        if all_winning != (g == 0) {
            report.violations.push(AxiomViolation {
                axiom: Axiom::ZeroMismatch,
                pos: pos.clone(),
                detail: format!("value {g} but P-recursion says {}", if all_winning { "P" } else { "N" }),
            });
        }
        losing.push(all_winning);
    }
    report
}

fn lex_index(bounds: &[u64], coords: &[u64]) -> usize {
    coords.iter().zip(bounds).fold(0usize, |acc, (&c, &b)| acc * (b as usize + 1) + c as usize)
}

fn join(c: &[u64]) -> String {
    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}
