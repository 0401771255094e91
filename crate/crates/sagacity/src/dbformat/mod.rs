//! The SAGA `.dat` game-database text format.
//!
//! A database file is a sequence of whitespace-separated integers and
//! double-quoted strings (strings may span lines; there is no escape
//! syntax). The layout is:
//!
//! 1. 12 header integers, the first of which is ignored;
//! 2. `num_actions + 1` action lines of 8 integers each
//!    (vocab, 5 conditions, 2 packed action words);
//! 3. `num_words + 1` interleaved verb/noun string pairs;
//! 4. `num_rooms + 1` rooms: 6 exit integers, then the description;
//! 5. `num_messages + 1` message strings;
//! 6. `num_items + 1` items: description (with an optional trailing
//!    `/WORD/` auto-get suffix), then the start-location integer;
//! 7. `num_actions + 1` per-action title/comment strings;
//! 8. 3 trailer integers (version, adventure number, checksum).
//!
//! All counts are inclusive: index 0 is a valid entry everywhere.

mod parse;
mod serialize;
mod validate;

use std::fmt;

pub use parse::{parse_database, ParseError};
pub use serialize::serialize_database;
pub use validate::{validate, Diagnostic};

/// Item location meaning "in the player's inventory" in `.dat` files.
pub const CARRIED_EXTERNAL: i64 = 255;
/// Verb index of GO, fixed by the engine.
pub const VERB_GO: u16 = 1;
/// Verb index of GET/TAKE, fixed by the engine.
pub const VERB_GET: u16 = 10;
/// Verb index of DROP, fixed by the engine.
pub const VERB_DROP: u16 = 18;
/// Item index of the light source, fixed by the engine.
pub const LIGHT_SOURCE: u16 = 9;
/// World flag that marks darkness.
pub const DARK_FLAG: u16 = 15;

/// The eleven meaningful header integers (the file's first is skipped).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameHeader {
    /// Highest item index; items are `0..=num_items`.
    pub num_items: u16,
    /// Highest action index.
    pub num_actions: u16,
    /// Highest word index, shared by the verb and noun lists.
    pub num_words: u16,
    /// Highest room index. Room 0 is the "nowhere" holding area.
    pub num_rooms: u16,
    /// Inventory capacity for the capacity-checked get actions.
    pub max_carry: i16,
    /// Starting room.
    pub player_room: u16,
    /// Number of `*`-marked treasure items the win check expects.
    pub num_treasures: u16,
    /// Significant-prefix length for vocabulary matching.
    pub word_length: u16,
    /// Turns of lamp fuel; -1 means the light never runs out.
    pub light_time: i32,
    /// Highest message index.
    pub num_messages: u16,
    /// Room where treasures must be stored to win.
    pub treasure_room: u16,
}

/// One packed scripted-action line, exactly as stored in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawAction {
    /// `150 * verb + noun`; verb 0 marks an automatic line whose noun
    /// field is a firing chance in percent.
    pub vocab: u32,
    /// Five packed condition slots, each `20 * param + opcode`.
    pub conditions: [u32; 5],
    /// Two packed action words, each `150 * act_a + act_b`.
    pub actions: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Room {
    /// Exit room indices in N, S, E, W, Up, Down order; 0 = no exit.
    pub exits: [u16; 6],
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    /// A leading `*` marks the item as a treasure.
    pub description: String,
    /// Room index, 0 (not in play), or [`CARRIED_EXTERNAL`].
    pub initial_location: i64,
    /// Noun whose built-in GET/DROP applies to this item.
    pub auto_get: Option<String>,
}

impl Item {
    pub fn is_treasure(&self) -> bool {
        self.description.starts_with('*')
    }
}

/// An immutable parsed game. Safe to share between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameDatabase {
    pub header: GameHeader,
    pub actions: Vec<RawAction>,
    pub verbs: Vec<String>,
    pub nouns: Vec<String>,
    pub rooms: Vec<Room>,
    pub messages: Vec<String>,
    pub items: Vec<Item>,
    pub action_titles: Vec<String>,
    /// Version, adventure number, checksum. Preserved, never interpreted.
    pub trailer: [i64; 3],
}

impl GameDatabase {
    /// Internal location value that stands for "carried".
    ///
    /// Externally the sentinel is 255; internally locations are kept
    /// compact as `0..=num_rooms` plus this value, so that a packed
    /// location field needs only `ceil(log2(num_rooms + 2))` bits.
    pub fn carried_location(&self) -> u16 {
        self.header.num_rooms + 1
    }

    /// Maps a stored item location to the compact internal form.
    pub fn internal_location(&self, external: i64) -> u16 {
        if external == CARRIED_EXTERNAL {
            self.carried_location()
        } else {
            external as u16
        }
    }
}

impl fmt::Display for GameHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "items={} actions={} words={} rooms={} carry={} start={} \
             treasures={} wordlen={} light={} messages={} vault={}",
            self.num_items,
            self.num_actions,
            self.num_words,
            self.num_rooms,
            self.max_carry,
            self.player_room,
            self.num_treasures,
            self.word_length,
            self.light_time,
            self.num_messages,
            self.treasure_room
        )
    }
}

/// Splits an item description into the visible text and the auto-get
/// word, which is stored as a trailing `/WORD/` suffix. A bare `//`
/// ending means "no auto-get word" and stays part of the description.
pub(crate) fn split_item_text(text: &str) -> (&str, Option<&str>) {
    if let Some(body) = text.strip_suffix('/') {
        if let Some(i) = body.rfind('/') {
            let word = &body[i + 1..];
            if !word.is_empty() {
                return (&text[..i], Some(word));
            }
        }
    }
    (text, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn item_text_auto_get_suffix() {
        assert_eq!(split_item_text("Key/KEY/"), ("Key", Some("KEY")));
        assert_eq!(split_item_text("*Gold coin*/COIN/"), ("*Gold coin*", Some("COIN")));
        assert_eq!(split_item_text("Plain sign"), ("Plain sign", None));
        // `//` historically means "no auto-get word".
        assert_eq!(split_item_text("Odd thing//"), ("Odd thing//", None));
        assert_eq!(split_item_text("/"), ("/", None));
        assert_eq!(split_item_text(""), ("", None));
    }

    #[test]
    fn treasures_marked_by_star() {
        let t = Item { description: "*Gold*".into(), initial_location: 1, auto_get: None };
        let p = Item { description: "Rock".into(), initial_location: 1, auto_get: None };
        assert!(t.is_treasure());
        assert!(!p.is_treasure());
    }
}
