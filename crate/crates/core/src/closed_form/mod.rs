//! Closed formulas: nim-sum, Moore sum, and the Exco-Nim SG formula for
//! `n >= 3` together with its move synthesizer.

mod appendix;

pub use appendix::construct_move_appendix;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Position;

/// Bitwise XOR of all values.
pub fn nim_sum<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    values.into_iter().fold(0, |a, b| a ^ b)
}

/// Per-bit pile sums modulo `k + 1`, least significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MooreSum {
    pub k: usize,
    pub digits: Vec<u64>,
}

impl MooreSum {
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }
}

/// Moore sum of the main piles; zero exactly on the P-positions of `Nim_{n,<=k}`.
pub fn moore_sum(pos: &Position, k: usize) -> Result<MooreSum> {
    let n = pos.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidRules(format!("Moore sum needs 1 <= k < n (got n = {n}, k = {k})")));
    }
    let digits = (0..u64::BITS)
        .map(|bit| pos.piles().iter().map(|&x| (x >> bit) & 1).sum::<u64>() % (k as u64 + 1))
        .collect::<Vec<_>>();
    let len = digits.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1);
    Ok(MooreSum { k, digits: digits[..len].to_vec() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SgKind {
    TypeI,
    TypeII,
}

/// Derived quantities of an Exco-Nim position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SgParams {
    /// Smallest main pile.
    pub m: u64,
    /// Total token count, including `x0`.
    pub u: u64,
    /// `u - n*m`.
    pub y: u64,
    /// `y(y+1)/2 + 1`, saturating at `u64::MAX`.
    pub z: u64,
    pub kind: SgKind,
}

/// `y(y+1)/2 + 1`, saturating.
pub fn z_of(y: u64) -> u64 {
    let z = (y as u128) * (y as u128 + 1) / 2 + 1;
    u64::try_from(z).unwrap_or(u64::MAX)
}

pub fn sg_params(pos: &Position) -> SgParams {
    let m = pos.min_pile();
    let u = pos.total();
    let y = u - pos.n() as u64 * m;
    let z = z_of(y);
    let kind = if m < z { SgKind::TypeI } else { SgKind::TypeII };
    SgParams { m, u, y, z, kind }
}

/// The type-II value `(z(y) - 1) + ((m - z(y)) mod (y + 1))`; needs `m >= z(y)`.
pub(crate) fn gamma_c(y: u64, m: u64) -> u64 {
    let z = z_of(y);
    debug_assert!(m >= z);
    (z - 1) + (m - z) % (y + 1)
}

fn require_n3(pos: &Position) -> Result<()> {
    if pos.n() < 3 {
        return Err(Error::ClosedFormRequiresN3 { n: pos.n() });
    }
    Ok(())
}

/// SG value of an Exco-Nim position with `n >= 3`.
pub fn g_closed(pos: &Position) -> Result<u64> {
    require_n3(pos)?;
    Ok(g_of_params(&sg_params(pos)))
}

pub(crate) fn g_of_params(p: &SgParams) -> u64 {
    match p.kind {
        SgKind::TypeI => p.u,
        SgKind::TypeII => gamma_c(p.y, p.m),
    }
}

/// `(x0 + sg0, u(x))` where `sg0 = G(0, x1, ..., xn)` is supplied by the caller.
pub fn bounds(pos: &Position, sg0: u64) -> (u64, u64) {
    (pos.x0() + sg0, pos.total())
}

/// Whether some move from `pos` reaches a position with minimum pile `m` and
/// total `u`.
pub fn reachable_mu(pos: &Position, m: u64, u: u64) -> Result<bool> {
    require_n3(pos)?;
    let p = sg_params(pos);
    let n = pos.n() as u64;
    let first = if p.y == 0 { m < p.m } else { m <= p.m };
    if !first {
        return Ok(false);
    }
    let lo = p.m as u128 + (n as u128 - 1) * m as u128;
    let take = 1.max(p.m - m);
    Ok(lo <= u as u128 && u.checked_add(take).is_some_and(|t| t <= p.u))
}

/// `v = z(eta) - 1 + rho` with `0 <= rho <= eta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EtaRho {
    pub v: u64,
    pub eta: u64,
    pub rho: u64,
}

/// Locates `v` in the interval `[z(eta) - 1, z(eta) + eta - 1]`.
pub fn eta_rho(v: u64) -> EtaRho {
    // eta is the largest e with e(e+1)/2 <= v
    let tri = |e: u64| (e as u128) * (e as u128 + 1) / 2;
    let mut eta = ((8 * v as u128 + 1).isqrt() as u64).saturating_sub(1) / 2;
    while tri(eta) > v as u128 {
        eta -= 1;
    }
    while tri(eta + 1) <= v as u128 {
        eta += 1;
    }
    EtaRho { v, eta, rho: v - tri(eta) as u64 }
}
