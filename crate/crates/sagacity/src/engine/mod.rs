//! Reference interpreter: the ground truth all other executors are
//! tested against, and the engine behind play, verify and replay.
//!
//! Two entry points drive a turn. [`perform_turn`] runs the decoded IR
//! of a [`SpecializedGame`]; [`raw::perform_turn_raw`] interprets the
//! packed action table directly, the way the original engine does, with
//! a runtime parameter queue. Differential tests hold them to identical
//! output turn by turn.

mod exec;
pub mod raw;
mod rng;
mod trace;
mod words;

use std::fmt;

use thiserror::Error;

use crate::dbformat::{GameDatabase, DARK_FLAG, LIGHT_SOURCE};
use crate::specialize::{EndingSite, SpecializedGame};

pub use exec::{initial_pass, perform_turn};
pub use rng::{DrawSource, FixedDraws, Rng, DEFAULT_SEED};
pub use trace::{
    parse_trace, replay_trace, write_trace, ReplayError, ReplayReport, Trace, TraceParseError,
};
pub use words::{parse_player_words, render_look, which_word, WordError};

/// Why a game stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ending {
    /// A scripted ending effect executed.
    Site(EndingSite),
    /// The player walked into a wall in the dark.
    DarkFall,
}

impl fmt::Display for Ending {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ending::Site(site) => site.fmt(f),
            Ending::DarkFall => write!(f, "dark-fall"),
        }
    }
}

/// Mutable world state.
///
/// Locations are internal-compact: `0` is out of play, `1..=num_rooms`
/// are rooms, and `num_rooms + 1` means carried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub item_locations: Vec<u16>,
    pub current_room: u16,
    pub flags: u32,
    pub current_counter: i16,
    pub counters: [i16; 16],
    pub saved_rooms: [u16; 16],
    /// Turns of light left; -1 when the light never runs out.
    pub lamp_fuel: i32,
    /// Cached `|{i : location(i) = carried}|`, maintained by every move.
    pub carried_count: u16,
    pub turn_index: u32,
    pub ended: Option<Ending>,
}

impl GameState {
    pub fn flag(&self, n: u16) -> bool {
        self.flags & (1 << n) != 0
    }

    pub fn set_flag(&mut self, n: u16) {
        self.flags |= 1 << n;
    }

    pub fn clear_flag(&mut self, n: u16) {
        self.flags &= !(1 << n);
    }

    pub fn is_dark(&self, db: &GameDatabase) -> bool {
        self.flag(DARK_FLAG) && !self.lamp_available(db)
    }

    /// Light source carried or in the current room.
    pub fn lamp_available(&self, db: &GameDatabase) -> bool {
        match self.item_locations.get(LIGHT_SOURCE as usize) {
            Some(&loc) => loc == db.carried_location() || loc == self.current_room,
            None => false,
        }
    }

    pub(crate) fn move_item(&mut self, db: &GameDatabase, item: u16, to: u16) {
        let carried = db.carried_location();
        let slot = &mut self.item_locations[item as usize];
        if *slot == carried {
            self.carried_count -= 1;
        }
        *slot = to;
        if to == carried {
            self.carried_count += 1;
        }
    }
}

/// The observable outcome of one turn.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TurnResult {
    pub messages: Vec<String>,
    pub ending: Option<Ending>,
    /// The room or its contents changed in a way play mode redraws for.
    pub look_requested: bool,
}

impl TurnResult {
    pub(crate) fn say(&mut self, text: impl Into<String>) {
        self.messages.push(text.into());
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TurnError {
    #[error("the game has already ended ({0})")]
    AlreadyEnded(Ending),
    #[error("word index {index} out of range (limit {limit})")]
    WordOutOfRange { index: u16, limit: u16 },
}

/// World state before the first automatics pass.
pub fn initial_state(db: &GameDatabase) -> GameState {
    let locations: Vec<u16> =
        db.items.iter().map(|i| db.internal_location(i.initial_location)).collect();
    let carried = db.carried_location();
    let carried_count = locations.iter().filter(|&&l| l == carried).count() as u16;
    GameState {
        item_locations: locations,
        current_room: db.header.player_room,
        flags: 0,
        current_counter: 0,
        counters: [0; 16],
        saved_rooms: [0; 16],
        lamp_fuel: db.header.light_time,
        carried_count,
        turn_index: 0,
        ended: None,
    }
}

/// Recomputes the carried-item count from scratch; always equals the
/// cached `carried_count`.
pub fn count_carried(db: &GameDatabase, state: &GameState) -> u16 {
    let carried = db.carried_location();
    state.item_locations.iter().filter(|&&l| l == carried).count() as u16
}

/// Fixed engine texts.
pub mod msg {
    pub const OK: &str = "O.K.";
    pub const TOO_MUCH: &str = "I've too much to carry!";
    pub const BEYOND_POWER: &str = "It's beyond my power to do that.";
    pub const WHAT: &str = "What ?";
    pub const NO_DIRECTION: &str = "Give me a direction too.";
    pub const CANT_GO: &str = "I can't go in that direction.";
    pub const DARK_WARNING: &str = "Dangerous to move in the dark!";
    pub const BROKE_NECK: &str = "I fell down and broke my neck.";
    pub const LIGHT_OUT: &str = "Light has run out!";
    pub const DEAD: &str = "I am dead.";
    pub const GAME_OVER: &str = "The game is now over.";
    pub const WELL_DONE: &str = "Well done.";
    pub const DONT_UNDERSTAND: &str = "I don't understand your command.";
    pub const CANT_YET: &str = "I can't do that yet.";
    pub const TOO_DARK: &str = "I can't see. It is too dark!";
}

/// Checks a turn's inputs before any state changes.
pub(crate) fn check_turn_inputs(
    state: &GameState,
    num_words: u16,
    verb: u16,
    noun: u16,
) -> Result<(), TurnError> {
    if let Some(ending) = state.ended {
        return Err(TurnError::AlreadyEnded(ending));
    }
    for index in [verb, noun] {
        if index > num_words {
            return Err(TurnError::WordOutOfRange { index, limit: num_words });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbformat::parse_database;

    fn tiny() -> GameDatabase {
        parse_database(
            r#"
0 1 0 0 1 2 1 0 3 -1 0 1
0 0 0 0 0 0 0 0
"AUT" "ANY"
0 0 0 0 0 0 ""
0 0 0 0 0 0 "room"
""
"held thing" 255
"loose thing" 1
""
0 0 0
"#,
        )
        .unwrap()
    }

    #[test]
    fn initial_state_maps_carried_sentinel() {
        let db = tiny();
        let st = initial_state(&db);
        assert_eq!(st.current_room, 1);
        assert_eq!(st.item_locations, vec![db.carried_location(), 1]);
        assert_eq!(st.carried_count, 1);
        assert_eq!(count_carried(&db, &st), 1);
        assert_eq!(st.flags, 0);
        assert_eq!(st.counters, [0; 16]);
        assert_eq!(st.lamp_fuel, -1);
        assert!(st.ended.is_none());
    }

    #[test]
    fn move_item_keeps_cache_coherent() {
        let db = tiny();
        let mut st = initial_state(&db);
        st.move_item(&db, 1, db.carried_location());
        assert_eq!(st.carried_count, 2);
        st.move_item(&db, 0, 0);
        assert_eq!(st.carried_count, 1);
        assert_eq!(count_carried(&db, &st), st.carried_count);
    }
}
