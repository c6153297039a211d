//! Sprague-Grundy values, optimal moves and P-positions for standard Nim,
//! Moore's Nim, Co-Nim and Exco-Nim.
//!
//! - [`game`]: positions, rules and move legality.
//! - [`sg`]: exact SG computation, dense tables and the on-disk cache.
//! - [`closed_form`]: nim-sum, Moore sum and the Exco-Nim formula for `n >= 3`.
//! - [`lab`]: the two-pile Exco-Nim laboratory.

pub mod closed_form;
pub mod error;
pub mod game;
pub mod lab;
pub mod sg;

pub use error::{CacheError, Error, Result};
pub use game::{GameRules, Move, Position, Violation};
