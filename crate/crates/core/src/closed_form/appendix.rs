//! Search-free construction of a move to any smaller SG value (`n >= 3`).
//!
//! Works on the sorted position `c = x0`, `x_i = m + p_i` with
//! `0 = p_1 <= p_2 <= ... <= p_n`, then maps the result back through the
//! sorting permutation.

use super::{eta_rho, g_closed, g_of_params, sg_params, z_of, SgKind};
use crate::error::{Error, Result};
use crate::game::{violation_raw, GameRules, Position};

/// A legal destination from `pos` whose closed-form value is exactly `v`.
///
/// The result is checked for legality and value before it is returned, so a
/// construction bug surfaces as [`Error::ConstructionFailed`].
pub fn construct_move_appendix(pos: &Position, v: u64) -> Result<Position> {
    let g = g_closed(pos)?;
    if v >= g {
        return Err(Error::ValueNotRealizable { pos: pos.to_string(), value: v, sg: g });
    }
    let n = pos.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| pos.piles()[i]);
    let sorted: Vec<u64> = order.iter().map(|&i| pos.piles()[i]).collect();
    let x = Sorted { c: pos.x0(), x: &sorted, m: sorted[0] };

    let params = sg_params(pos);
    let (d0, d) = match params.kind {
        SgKind::TypeI => x.type_one(params.u, v),
        SgKind::TypeII => x.type_two(v),
    }
    .map_err(|detail| fail(pos, v, detail))?;

    let mut piles = vec![0; n];
    for (slot, &i) in order.iter().enumerate() {
        piles[i] = d[slot];
    }
    let out = Position::new(d0, piles);
    let rules = GameRules::ExcoNim { n };
    if let Some(why) = violation_raw(&rules, pos.coords(), out.coords()) {
        return Err(fail(pos, v, format!("built {out}, which is illegal: {why}")));
    }
    let got = g_of_params(&sg_params(&out));
    if got != v {
        return Err(fail(pos, v, format!("built {out} with value {got}")));
    }
    Ok(out)
}

fn fail(pos: &Position, v: u64, detail: impl Into<String>) -> Error {
    Error::ConstructionFailed { pos: pos.to_string(), value: v, detail: detail.into() }
}

struct Sorted<'a> {
    c: u64,
    x: &'a [u64],
    m: u64,
}

type Built = std::result::Result<(u64, Vec<u64>), String>;

impl Sorted<'_> {
    fn p(&self, i: usize) -> u64 {
        self.x[i] - self.m
    }

    /// Raises `d0` then `d[from..]` (ascending index) from their current
    /// values towards their caps until `need` extra tokens are placed.
    fn fill(&self, d0: &mut u64, d: &mut [u64], from: usize, mut need: u64) -> std::result::Result<(), String> {
        let take = need.min(self.c - *d0);
        *d0 += take;
        need -= take;
        for i in from..d.len() {
            let take = need.min(self.x[i] - d[i]);
            d[i] += take;
            need -= take;
        }
        if need > 0 {
            return Err(format!("{need} tokens left over after greedy fill"));
        }
        Ok(())
    }

    /// `u(x) = k`, `m < z(y(x))`.
    fn type_one(&self, k: u64, v: u64) -> Built {
        let (m, n) = (self.m, self.x.len());
        let p2 = self.p(1);
        if v >= k - m {
            let mut d = self.x.to_vec();
            d[0] = m - (k - v);
            return Ok((self.c, d));
        }
        if v >= m + p2 {
            let mut d = vec![0; n];
            d[1] = self.x[1];
            let mut d0 = 0;
            self.fill(&mut d0, &mut d, 2, v - m - p2)?;
            return Ok((d0, d));
        }
        if v >= m {
            let mut d = vec![0; n];
            d[0] = m;
            d[1] = v - m;
            return Ok((0, d));
        }
        let er = eta_rho(v);
        let eta = er.eta;
        if v + 1 == m {
            let mut d = vec![m; n];
            let mut d0 = 0;
            self.fill(&mut d0, &mut d, 1, eta)?;
            return Ok((d0, d));
        }
        let alpha = (m - v - 1) % (eta + 1);
        let mut d0 = 0;
        let mut d = vec![m - alpha; n];
        let need = if eta >= p2 + alpha {
            d[1] = self.x[1];
            eta - alpha - p2
        } else {
            d[0] = m;
            eta - alpha
        };
        self.fill(&mut d0, &mut d, 2, need)?;
        Ok((d0, d))
    }

    /// `m >= z(y(x))`; every target is a type-II position with `y = eta(v)`
    /// and `m` lowered by `alpha`.
    fn type_two(&self, v: u64) -> Built {
        let (m, n) = (self.m, self.x.len());
        let er = eta_rho(v);
        let mu = er.eta;
        let zm = z_of(mu);
        if m < zm {
            return Err(format!("m = {m} is below z({mu}) = {zm}"));
        }
        let alpha = (m - zm - er.rho) % (mu + 1);
        if mu == 0 {
            return Ok((0, vec![m; n]));
        }
        // prefix[i] = P_{i+1} = p_1 + ... + p_{i+1}; prefix[n] adds p_{n+1} = c
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = 0u64;
        for i in 0..n {
            acc += self.p(i);
            prefix.push(acc);
        }
        prefix.push(acc + self.c);
        let big_p = |i: usize| prefix[i - 1];
        // i(mu): P_i < mu <= P_{i+1}, 1 <= i <= n
        let i_mu = (1..=n)
            .find(|&i| big_p(i) < mu && mu <= big_p(i + 1))
            .ok_or_else(|| format!("no index i with P_i < {mu} <= P_(i+1)"))?;

        let mut d = vec![0u64; n];
        if alpha == 0 {
            if i_mu < n {
                for b in 1..=n {
                    d[b - 1] = match b {
                        b if b <= i_mu => self.x[b - 1],
                        b if b == i_mu + 1 => m + mu - big_p(i_mu),
                        _ => m,
                    };
                }
                return Ok((0, d));
            }
            return Ok((mu - big_p(n), self.x.to_vec()));
        }
        if m < alpha {
            return Err(format!("alpha = {alpha} exceeds m = {m}"));
        }
        if i_mu < n {
            // j: P_j <= mu - alpha < P_{j+1}
            let j = (1..=i_mu)
                .rev()
                .find(|&j| big_p(j) + alpha <= mu)
                .ok_or_else(|| format!("no index j for alpha = {alpha}"))?;
            self.staircase(&mut d, j, mu - big_p(j), alpha);
            return Ok((0, d));
        }
        let pn = big_p(n);
        if alpha <= pn {
            let l = (1..n)
                .rev()
                .find(|&l| big_p(l) + alpha <= pn)
                .ok_or_else(|| format!("no index l for alpha = {alpha}"))?;
            self.staircase(&mut d, l, pn - big_p(l), alpha);
            return Ok((mu - pn, d));
        }
        d.fill(m - alpha);
        d[0] = m;
        Ok((mu - alpha, d))
    }

    /// Piles before `j` lose `alpha` from their size, pile `j` is kept,
    /// pile `j+1` becomes `m + rest - 2*alpha`, later piles drop to `m - alpha`.
    fn staircase(&self, d: &mut [u64], j: usize, rest: u64, alpha: u64) {
        let m = self.m;
        for b in 1..=d.len() {
            d[b - 1] = match b {
                b if b < j => self.x[b - 1] - alpha,
                b if b == j => self.x[b - 1],
                b if b == j + 1 => m + rest - 2 * alpha,
                _ => m - alpha,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_legal_move;

    fn p(c: &[u64]) -> Position {
        Position::from_coords(c.to_vec()).unwrap()
    }

    #[test]
    fn pinned_examples() {
        assert_eq!(construct_move_appendix(&p(&[1, 1, 1, 1]), 3).unwrap(), p(&[1, 0, 1, 1]));
        assert_eq!(construct_move_appendix(&p(&[1, 1, 1, 1]), 0).unwrap(), p(&[0, 1, 1, 1]));
        let x = p(&[0, 5, 5, 6]);
        let to = construct_move_appendix(&x, 1).unwrap();
        assert!(is_legal_move(&GameRules::ExcoNim { n: 3 }, &x, &to).unwrap());
        assert_eq!(g_closed(&to).unwrap(), 1);
    }

    #[test]
    fn unsorted_input_maps_back() {
        let x = p(&[2, 7, 3, 5, 4]);
        let rules = GameRules::ExcoNim { n: 4 };
        for v in 0..g_closed(&x).unwrap() {
            let to = construct_move_appendix(&x, v).unwrap();
            assert!(is_legal_move(&rules, &x, &to).unwrap(), "{x} -> {to}");
            assert_eq!(g_closed(&to).unwrap(), v);
        }
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(matches!(
            construct_move_appendix(&p(&[0, 5, 5, 6]), 2),
            Err(Error::ValueNotRealizable { sg: 2, .. })
        ));
        assert!(matches!(construct_move_appendix(&p(&[1, 2, 3]), 0), Err(Error::ClosedFormRequiresN3 { n: 2 })));
    }
}
