//! Toolkit for classic SAGA text-adventure game databases.
//!
//! The pipeline has three executors that must agree on game semantics:
//!
//! * [`engine`] — a reference interpreter that runs either the raw packed
//!   script tables or the decoded IR, used for interactive play, trace
//!   replay, and as the ground truth in differential tests.
//! * [`specialize`] — decodes the packed script program of a loaded game
//!   into a straight-line IR ([`specialize::ScriptLine`]) with per-noun
//!   item match tables, the in-memory analogue of compiling the script
//!   for one fixed game.
//! * [`bmc`] — unrolls the specialized transition relation over a
//!   bit-packed state, encodes it to CNF through [`sat`], and decodes a
//!   satisfying assignment back into a winning move sequence.
//!
//! [`dbformat`] loads and saves the `.dat` database files themselves.

pub mod bmc;
pub mod dbformat;
pub mod engine;
pub mod sat;
pub mod specialize;

pub use dbformat::{parse_database, serialize_database, validate, GameDatabase};
pub use specialize::{specialize_game, SpecializedGame};
