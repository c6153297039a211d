//! Independent reference implementations used as oracles.
//!
//! Nothing here calls into the library's move generator or SG code; the
//! rules are re-derived from their definitions and values come from a plain
//! recursive mex over a `HashMap`.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

#[derive(Clone, Copy, Debug)]
pub enum Rule {
    /// Exactly one pile shrinks.
    Nim,
    /// Between 1 and `k` piles shrink.
    Moore(usize),
    /// Coordinate 0 is the extra pile; at least one main pile stays put.
    Exco,
}

impl Rule {
    fn legal(self, from: &[u64], to: &[u64]) -> bool {
        if to.iter().zip(from).any(|(t, f)| t > f) || to == from {
            return false;
        }
        match self {
            Rule::Nim => Rule::Moore(1).legal(from, to),
            Rule::Moore(k) => {
                let changed = to.iter().zip(from).filter(|(t, f)| t != f).count();
                changed <= k
            }
            Rule::Exco => to[1..].iter().zip(&from[1..]).any(|(t, f)| t == f),
        }
    }
}

/// Every coordinate vector componentwise below `top`.
pub fn below(top: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &t in top {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=t).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

pub struct Oracle {
    rule: Rule,
    memo: HashMap<Vec<u64>, u64>,
}

impl Oracle {
    pub fn new(rule: Rule) -> Self {
        Oracle { rule, memo: HashMap::new() }
    }

    pub fn sg(&mut self, x: &[u64]) -> u64 {
        if let Some(&g) = self.memo.get(x) {
            return g;
        }
        let mut seen = HashSet::new();
        for y in below(x) {
            if self.rule.legal(x, &y) {
                seen.insert(self.sg(&y));
            }
        }
        let g = (0..).find(|g| !seen.contains(g)).unwrap();
        self.memo.insert(x.to_vec(), g);
        g
    }

    pub fn moves(&self, x: &[u64]) -> Vec<Vec<u64>> {
        below(x).into_iter().filter(|y| self.rule.legal(x, y)).collect()
    }
}

/// Two-pile Exco-Nim values over a box, filled bottom-up in lexicographic
/// order directly from the move definition.
pub struct N2Oracle {
    b: [u64; 3],
    vals: Vec<u64>,
}

impl N2Oracle {
    pub fn build(b: [u64; 3]) -> Self {
        let mut o = N2Oracle { b, vals: vec![0; ((b[0] + 1) * (b[1] + 1) * (b[2] + 1)) as usize] };
        for x0 in 0..=b[0] {
            for x1 in 0..=b[1] {
                for x2 in 0..=b[2] {
                    let mut seen = vec![false; (x0 + x1 + x2 + 2) as usize];
                    for y0 in 0..=x0 {
                        // keep x1: any y2 <= x2
                        for y2 in 0..=x2 {
                            if (y0, y2) != (x0, x2) {
                                seen[o.get(y0, x1, y2) as usize] = true;
                            }
                        }
                        // keep x2
                        for y1 in 0..x1 {
                            seen[o.get(y0, y1, x2) as usize] = true;
                        }
                    }
                    let g = seen.iter().position(|s| !s).unwrap() as u64;
                    let i = o.idx(x0, x1, x2);
                    o.vals[i] = g;
                }
            }
        }
        o
    }

    fn idx(&self, x0: u64, x1: u64, x2: u64) -> usize {
        ((x0 * (self.b[1] + 1) + x1) * (self.b[2] + 1) + x2) as usize
    }

    pub fn get(&self, x0: u64, x1: u64, x2: u64) -> u64 {
        self.vals[self.idx(x0, x1, x2)]
    }
}

/// Per-bit digit sum modulo `k + 1`.
pub fn moore_zero(piles: &[u64], k: usize) -> bool {
    (0..64).all(|bit| piles.iter().map(|p| (p >> bit) & 1).sum::<u64>() % (k as u64 + 1) == 0)
}

/// The Exco-Nim formula for `n >= 3` written out in floating-free integer form.
pub fn exco_formula(x: &[u64]) -> u64 {
    let piles = &x[1..];
    let n = piles.len() as u64;
    let m = *piles.iter().min().unwrap();
    let u: u64 = x.iter().sum();
    let y = u - n * m;
    let z = y * (y + 1) / 2 + 1;
    if m < z {
        u
    } else {
        (z - 1) + (m - z) % (y + 1)
    }
}
