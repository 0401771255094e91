//! Lowering of the packed script program into a decoded, straight-line IR.
//!
//! A raw action line packs its trigger, five condition slots and four
//! effect slots into eight integers. Lowering decodes the arithmetic
//! packings once, deletes the param-push pseudo-conditions (opcode 0) and
//! binds their values to the effects that consume them, left to right
//! across the whole line. The result fixes every item index, room number,
//! flag and counter operand as a compile-time constant, which is what
//! lets the CNF encoder emit plain gates instead of interpreter dispatch.

mod dump;
mod lower;
mod prune;

use std::fmt;
use std::sync::Arc;

use crate::dbformat::GameDatabase;

pub use dump::{dump_text, dump_tree};
pub use lower::{lower_line, specialize_game, LowerError, SpecializeError};
pub use prune::prune_placeholders;

/// Splits a packed condition into `(opcode, param)`.
pub fn decode_condition(raw: u32) -> (u8, u32) {
    ((raw % 20) as u8, raw / 20)
}

/// Splits a packed action word into its two effect codes.
pub fn decode_action_word(raw: u32) -> (u32, u32) {
    (raw / 150, raw % 150)
}

/// Decodes a packed vocab word into a line trigger.
///
/// Verb 0 marks an automatic line whose noun field is a firing chance in
/// percent; for command lines, noun 0 matches any noun.
pub fn decode_vocab(raw: u32) -> Trigger {
    let verb = raw / 150;
    let noun = raw % 150;
    if verb == 0 {
        Trigger::Auto { chance: noun as u16 }
    } else {
        Trigger::Command { verb: verb as u16, noun: noun as u16, noun_wildcard: noun == 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trigger {
    /// Scanned every automatics pass; fires with `chance` percent
    /// probability (no draw at all for 0 or >= 100).
    Auto { chance: u16 },
    /// Fires on a matching player command.
    Command { verb: u16, noun: u16, noun_wildcard: bool },
}

/// A decoded condition (never opcode 0; those become effect operands).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Condition {
    pub opcode: u8,
    pub param: u32,
}

/// What a condition/effect parameter refers to, for range validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Item,
    Room,
    Flag,
    /// Compared against or loaded into a 16-bit counter.
    Value,
    /// Saved-room slot, 0..=15.
    Slot,
    /// Present but never read.
    Ignored,
}

/// Parameter class of each condition opcode. Opcode 0 pushes its param
/// onto the line's operand queue; its class depends on the consumer.
pub fn cond_param_kind(opcode: u8) -> ParamKind {
    match opcode {
        1 | 2 | 3 | 5 | 6 | 12 | 13 | 14 | 17 | 18 => ParamKind::Item,
        4 | 7 => ParamKind::Room,
        8 | 9 => ParamKind::Flag,
        15 | 16 | 19 => ParamKind::Value,
        _ => ParamKind::Ignored, // 0 handled separately; 10, 11 take none
    }
}

/// Message index printed by an act value, if it is a print.
///
/// Acts 1..=51 print that message directly; values of 102 and above
/// print message `act - 50`, which is how games address messages past 51.
pub fn message_for_act(act: u32) -> Option<u32> {
    match act {
        1..=51 => Some(act),
        102.. => Some(act - 50),
        _ => None,
    }
}

/// Number of queued parameters an act value consumes.
pub fn act_arity(act: u32) -> usize {
    match act {
        52..=55 | 58..=60 | 74 | 79 | 81..=83 | 87 => 1,
        62 | 72 | 75 => 2,
        _ => 0,
    }
}

/// Operand classes of a table act, in binding order.
pub fn act_operand_kinds(act: u32) -> &'static [ParamKind] {
    match act {
        52 | 53 | 55 | 59 | 74 => &[ParamKind::Item],
        54 => &[ParamKind::Room],
        58 | 60 => &[ParamKind::Flag],
        62 => &[ParamKind::Item, ParamKind::Room],
        72 | 75 => &[ParamKind::Item, ParamKind::Item],
        79 | 82 | 83 => &[ParamKind::Value],
        81 | 87 => &[ParamKind::Slot],
        _ => &[],
    }
}

/// True for act values with no defined behaviour (treated as no-ops,
/// reported by validate).
pub fn act_is_unknown(act: u32) -> bool {
    (90..=101).contains(&act)
}

/// One decoded effect with its operands already bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effect {
    /// Act 0, displays (70 clear screen, 88 pause), save (71), and the
    /// undefined 90..=101 range.
    Nothing,
    PrintMessage(u16),
    /// Act 52: move item to inventory unless the carry limit is reached.
    /// The operand is consumed either way.
    GetItemChecked(u16),
    /// Act 53: move item to the player's current room.
    DropItem(u16),
    /// Act 54.
    MovePlayer(u16),
    /// Acts 55 and 59: move item out of play (location 0).
    RemoveItem(u16),
    /// Act 56: set the darkness flag (15).
    SetDark,
    /// Act 57.
    ClearDark,
    /// Acts 58 and 67 (67 is the parameterless set-flag-0 form).
    SetFlag(u16),
    /// Acts 60 and 68.
    ClearFlag(u16),
    /// Act 61: clear darkness, move the player to the last room. Not an
    /// ending by itself.
    Death,
    /// Act 62.
    PutItem { item: u16, room: u16 },
    /// Act 63: ends the game. An ending site.
    GameOver,
    /// Acts 64 and 76: redisplay the room.
    Look,
    /// Act 65: print the score; ends the game in victory when every
    /// treasure is in the treasure room. An ending site.
    Score,
    /// Act 66.
    Inventory,
    /// Act 69: reset lamp fuel and move the light source to inventory.
    RefillLamp,
    /// Act 72.
    SwapItems(u16, u16),
    /// Act 73: also run the following vocab-0 lines (conditions still
    /// checked) until a line with a nonzero vocab word.
    Continue,
    /// Act 74: move item to inventory, ignoring the carry limit.
    TakeItem(u16),
    /// Act 75: move first item to the location of the second.
    MoveItemToItem { item: u16, other: u16 },
    /// Act 77: decrement the current counter, stopping at -1.
    DecrementCounter,
    /// Act 78.
    PrintCounter,
    /// Act 79.
    SetCounter(i16),
    /// Acts 80 (slot 0) and 87 (slot P): swap the player's room with a
    /// saved-room slot.
    SwapRoomSaved(u16),
    /// Act 81: swap the current counter with counter slot P.
    SelectCounter(u16),
    /// Act 82: 16-bit wrapping add.
    AddCounter(i16),
    /// Act 83: subtract, clamping the result at -1.
    SubtractCounter(i16),
    /// Acts 84 (and 85 with a newline): print the noun the player typed.
    PrintNoun { newline: bool },
    /// Act 86.
    Newline,
}

/// Which game ending an ending site represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndingKind {
    /// Act 63 executed.
    GameOver,
    /// Act 65 executed with all treasures stored.
    ScoreWin,
}

/// A specific effect occurrence that can terminate the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EndingSite {
    pub line_index: u16,
    pub effect_pos: u8,
    pub kind: EndingKind,
}

impl fmt::Display for EndingSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            EndingKind::GameOver => "game-over",
            EndingKind::ScoreWin => "score-win",
        };
        write!(f, "{}@L{}.{}", kind, self.line_index, self.effect_pos)
    }
}

/// One specialized scripted event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptLine {
    pub line_index: u16,
    pub trigger: Trigger,
    /// Real conditions only; opcode-0 slots have been folded into the
    /// effect operands.
    pub conditions: Vec<Condition>,
    /// Always exactly four entries, padding with [`Effect::Nothing`].
    pub effects: Vec<Effect>,
    pub ending_sites: Vec<EndingSite>,
    /// True when the raw vocab word is exactly 0, making the line
    /// eligible as a continuation body for a preceding act 73.
    pub vocab_zero: bool,
}

/// Per-noun candidate items for the built-in GET/DROP, ordered by
/// ascending item index so the lowest ID wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchTable {
    per_noun: Vec<Vec<u16>>,
}

impl MatchTable {
    pub fn candidates(&self, noun: u16) -> &[u16] {
        self.per_noun.get(noun as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn nouns_with_candidates(&self) -> impl Iterator<Item = (u16, &[u16])> {
        self.per_noun
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(n, c)| (n as u16, c.as_slice()))
    }
}

/// Builds the per-noun match table from the items' auto-get words.
///
/// A noun matches an item when the item's auto-get word equals the
/// noun's synonym-group head word on the first `word_length` characters,
/// case-insensitively.
pub fn build_match_table(db: &GameDatabase) -> MatchTable {
    let wl = db.header.word_length.max(1) as usize;
    let mut per_noun = vec![Vec::new(); db.nouns.len()];
    let mut head: Option<&str> = None;
    for (n, noun) in db.nouns.iter().enumerate() {
        let resolved = match noun.strip_prefix('*') {
            Some(stripped) => head.unwrap_or(stripped),
            None => {
                head = Some(noun.as_str());
                noun.as_str()
            }
        };
        if n == 0 {
            continue; // noun 0 is the any/none placeholder
        }
        for (i, item) in db.items.iter().enumerate() {
            if let Some(word) = &item.auto_get {
                if prefix_eq(word, resolved, wl) {
                    per_noun[n].push(i as u16);
                }
            }
        }
    }
    MatchTable { per_noun }
}

/// Case-insensitive comparison of the first `len` characters, the way
/// `strncasecmp(a, b, len)` behaves on NUL-terminated words.
pub fn prefix_eq(a: &str, b: &str, len: usize) -> bool {
    let pa: Vec<char> = a.chars().take(len).collect();
    let pb: Vec<char> = b.chars().take(len).collect();
    pa.len() == pb.len()
        && pa
            .iter()
            .zip(&pb)
            .all(|(x, y)| x.to_ascii_uppercase() == y.to_ascii_uppercase())
}

/// Header constants frozen at specialization time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constants {
    pub num_items: u16,
    pub num_actions: u16,
    pub num_words: u16,
    pub num_rooms: u16,
    pub max_carry: i16,
    pub player_room: u16,
    pub num_treasures: u16,
    pub word_length: u16,
    pub light_time: i32,
    pub num_messages: u16,
    pub treasure_room: u16,
    /// Internal location value meaning "carried" (`num_rooms + 1`).
    pub carried: u16,
}

impl Constants {
    pub fn from_db(db: &GameDatabase) -> Self {
        let h = &db.header;
        Constants {
            num_items: h.num_items,
            num_actions: h.num_actions,
            num_words: h.num_words,
            num_rooms: h.num_rooms,
            max_carry: h.max_carry,
            player_room: h.player_room,
            num_treasures: h.num_treasures,
            word_length: h.word_length,
            light_time: h.light_time,
            num_messages: h.num_messages,
            treasure_room: h.treasure_room,
            carried: h.num_rooms + 1,
        }
    }
}

/// A game lowered to the IR, ready for the IR executor and the encoder.
#[derive(Debug, Clone)]
pub struct SpecializedGame {
    pub db: Arc<GameDatabase>,
    pub lines: Vec<ScriptLine>,
    pub match_table: MatchTable,
    /// Number of random draws one automatics pass performs: one per
    /// automatic line with a chance strictly between 0 and 100, in line
    /// order, whether or not the line fires.
    pub auto_rng_slots: u16,
    /// `(line, chance)` for each draw slot, in draw order.
    pub auto_draw_plan: Vec<(u16, u16)>,
    pub ending_catalog: Vec<EndingSite>,
    pub constants: Constants,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_decode_examples() {
        assert_eq!(decode_condition(0), (0, 0));
        assert_eq!(decode_condition(21), (1, 1));
        assert_eq!(decode_condition(85), (5, 4));
    }

    #[test]
    fn action_word_decode_examples() {
        assert_eq!(decode_action_word(0), (0, 0));
        assert_eq!(decode_action_word(150), (1, 0));
        assert_eq!(decode_action_word(9353), (62, 53));
    }

    #[test]
    fn vocab_decode_examples() {
        assert_eq!(decode_vocab(100), Trigger::Auto { chance: 100 });
        assert_eq!(
            decode_vocab(1507),
            Trigger::Command { verb: 10, noun: 7, noun_wildcard: false }
        );
        assert_eq!(
            decode_vocab(150),
            Trigger::Command { verb: 1, noun: 0, noun_wildcard: true }
        );
    }

    #[test]
    fn packings_invert_exhaustively() {
        for verb in 0..150u32 {
            for noun in 0..150u32 {
                let raw = 150 * verb + noun;
                match decode_vocab(raw) {
                    Trigger::Auto { chance } => {
                        assert_eq!(verb, 0);
                        assert_eq!(chance as u32, noun);
                    }
                    Trigger::Command { verb: v, noun: n, .. } => {
                        assert_eq!((v as u32, n as u32), (verb, noun));
                    }
                }
                assert_eq!(decode_action_word(raw), (verb, noun));
            }
        }
        for opcode in 0..20u32 {
            for param in 0..200u32 {
                assert_eq!(decode_condition(20 * param + opcode), (opcode as u8, param));
            }
        }
    }

    #[test]
    fn message_acts() {
        assert_eq!(message_for_act(0), None);
        assert_eq!(message_for_act(1), Some(1));
        assert_eq!(message_for_act(51), Some(51));
        assert_eq!(message_for_act(52), None);
        assert_eq!(message_for_act(89), None);
        assert_eq!(message_for_act(102), Some(52));
        assert_eq!(message_for_act(149), Some(99));
    }

    #[test]
    fn prefix_compare_is_strncasecmp_shaped() {
        assert!(prefix_eq("GOLD", "golden", 3));
        assert!(prefix_eq("GO", "go", 3));
        assert!(!prefix_eq("GO", "GOLD", 3));
        assert!(prefix_eq("KEY", "KEYS", 3));
        assert!(!prefix_eq("KEX", "KEY", 3));
    }
}
