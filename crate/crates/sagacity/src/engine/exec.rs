//! Shared turn semantics and the IR executor.
//!
//! A turn is: (a) player command dispatch over the script lines, falling
//! back to the built-in GO/GET/DROP; (b) lamp fuel bookkeeping; (c) one
//! automatics pass. The automatics pass draws the percent chance of
//! every automatic line with a chance strictly between 0 and 100,
//! exactly once each in line order, whether or not anything fires; this
//! fixed draw count is what lets the solver precompute randomness as
//! per-turn constants.

use crate::dbformat::{GameDatabase, DARK_FLAG, LIGHT_SOURCE, VERB_DROP, VERB_GET, VERB_GO};
use crate::specialize::{
    Condition, Effect, EndingKind, EndingSite, ScriptLine, SpecializedGame, Trigger,
};

use super::{check_turn_inputs, msg, DrawSource, Ending, GameState, TurnError, TurnResult};

/// Evaluates one decoded condition against the state.
pub(crate) fn cond_holds(db: &GameDatabase, st: &GameState, cond: Condition) -> bool {
    let carried = db.carried_location();
    let loc = |item: u32| st.item_locations[item as usize];
    let initial = |item: u32| db.internal_location(db.items[item as usize].initial_location);
    let p = cond.param;
    match cond.opcode {
        1 => loc(p) == carried,
        2 => loc(p) == st.current_room,
        3 => loc(p) == carried || loc(p) == st.current_room,
        4 => st.current_room == p as u16,
        5 => loc(p) != st.current_room,
        6 => loc(p) != carried,
        7 => st.current_room != p as u16,
        8 => st.flag(p as u16),
        9 => !st.flag(p as u16),
        10 => st.carried_count != 0,
        11 => st.carried_count == 0,
        12 => loc(p) != carried && loc(p) != st.current_room,
        13 => loc(p) != 0,
        14 => loc(p) == 0,
        15 => st.current_counter <= p as i16,
        16 => st.current_counter > p as i16,
        17 => loc(p) == initial(p),
        18 => loc(p) != initial(p),
        19 => st.current_counter == p as i16,
        _ => true,
    }
}

/// Applies one effect. `noun` is the noun index of the turn's command,
/// used only by the print-noun effects.
pub(crate) fn apply_effect(
    db: &GameDatabase,
    st: &mut GameState,
    effect: Effect,
    line_index: u16,
    effect_pos: u8,
    noun: u16,
    out: &mut TurnResult,
) {
    let carried = db.carried_location();
    let mut end = |st: &mut GameState, out: &mut TurnResult, kind: EndingKind| {
        let ending = Ending::Site(EndingSite { line_index, effect_pos, kind });
        st.ended = Some(ending);
        out.ending = Some(ending);
    };
    match effect {
        Effect::Nothing => {}
        Effect::PrintMessage(m) => out.say(db.messages[m as usize].clone()),
        Effect::GetItemChecked(i) => {
            if st.carried_count as i32 >= db.header.max_carry as i32 {
                out.say(msg::TOO_MUCH);
            } else {
                st.move_item(db, i, carried);
            }
        }
        Effect::DropItem(i) => st.move_item(db, i, st.current_room),
        Effect::MovePlayer(r) => {
            st.current_room = r;
            out.look_requested = true;
        }
        Effect::RemoveItem(i) => st.move_item(db, i, 0),
        Effect::SetDark => st.set_flag(DARK_FLAG),
        Effect::ClearDark => st.clear_flag(DARK_FLAG),
        Effect::SetFlag(f) => st.set_flag(f),
        Effect::ClearFlag(f) => st.clear_flag(f),
        Effect::Death => {
            out.say(msg::DEAD);
            st.clear_flag(DARK_FLAG);
            st.current_room = db.header.num_rooms;
            out.look_requested = true;
        }
        Effect::PutItem { item, room } => st.move_item(db, item, room),
        Effect::GameOver => {
            out.say(msg::GAME_OVER);
            end(st, out, EndingKind::GameOver);
        }
        Effect::Look => out.look_requested = true,
        Effect::Score => {
            let stored = count_stored_treasures(db, st);
            let total = db.header.num_treasures;
            let rate = if total > 0 { stored as u32 * 100 / total as u32 } else { 0 };
            out.say(format!(
                "I've stored {stored} treasures. On a scale of 0 to 100, that rates {rate}."
            ));
            if stored == total {
                out.say(msg::WELL_DONE);
                end(st, out, EndingKind::ScoreWin);
            }
        }
        Effect::Inventory => {
            let names: Vec<&str> = db
                .items
                .iter()
                .zip(&st.item_locations)
                .filter(|(_, &loc)| loc == carried)
                .map(|(item, _)| item.description.as_str())
                .collect();
            if names.is_empty() {
                out.say("I'm carrying: Nothing.");
            } else {
                out.say(format!("I'm carrying: {}.", names.join(", ")));
            }
        }
        Effect::RefillLamp => {
            if db.header.light_time != -1 {
                st.lamp_fuel = db.header.light_time;
            }
            if (LIGHT_SOURCE as usize) < st.item_locations.len() {
                st.move_item(db, LIGHT_SOURCE, carried);
            }
        }
        Effect::SwapItems(a, b) => {
            let la = st.item_locations[a as usize];
            let lb = st.item_locations[b as usize];
            st.move_item(db, a, lb);
            st.move_item(db, b, la);
        }
        Effect::Continue => {}
        Effect::TakeItem(i) => st.move_item(db, i, carried),
        Effect::MoveItemToItem { item, other } => {
            let to = st.item_locations[other as usize];
            st.move_item(db, item, to);
        }
        Effect::DecrementCounter => {
            if st.current_counter >= 0 {
                st.current_counter -= 1;
            }
        }
        Effect::PrintCounter => out.say(st.current_counter.to_string()),
        Effect::SetCounter(v) => st.current_counter = v,
        Effect::SwapRoomSaved(slot) => {
            std::mem::swap(&mut st.current_room, &mut st.saved_rooms[slot as usize]);
            out.look_requested = true;
        }
        Effect::SelectCounter(slot) => {
            std::mem::swap(&mut st.current_counter, &mut st.counters[slot as usize]);
        }
        Effect::AddCounter(v) => st.current_counter = st.current_counter.wrapping_add(v),
        Effect::SubtractCounter(v) => {
            let t = st.current_counter.wrapping_sub(v);
            st.current_counter = if t < -1 { -1 } else { t };
        }
        Effect::PrintNoun { newline } => {
            out.say(db.nouns.get(noun as usize).cloned().unwrap_or_default());
            if newline {
                out.say("");
            }
        }
        Effect::Newline => out.say(""),
    }
}

pub(crate) fn count_stored_treasures(db: &GameDatabase, st: &GameState) -> u16 {
    db.items
        .iter()
        .zip(&st.item_locations)
        .filter(|(item, &loc)| item.is_treasure() && loc == db.header.treasure_room)
        .count() as u16
}

fn line_conds_hold(db: &GameDatabase, st: &GameState, line: &ScriptLine) -> bool {
    line.conditions.iter().all(|&c| cond_holds(db, st, c))
}

/// Runs a line's four effect slots; returns true when act 73 asked for
/// continuation. Stops at the first effect that ends the game.
fn run_line_effects(
    db: &GameDatabase,
    st: &mut GameState,
    line: &ScriptLine,
    noun: u16,
    out: &mut TurnResult,
) -> bool {
    let mut continuation = false;
    for (pos, &effect) in line.effects.iter().enumerate() {
        if st.ended.is_some() {
            break;
        }
        if effect == Effect::Continue {
            continuation = true;
        }
        apply_effect(db, st, effect, line.line_index, pos as u8, noun, out);
    }
    continuation
}

/// Runs the continuation group after a fired line: every directly
/// following line whose packed vocab word is exactly zero, conditions
/// still checked, stopping at the first line with a nonzero vocab.
fn run_continuation(
    spec: &SpecializedGame,
    st: &mut GameState,
    after: usize,
    noun: u16,
    out: &mut TurnResult,
) {
    for line in &spec.lines[after + 1..] {
        if !line.vocab_zero {
            break;
        }
        if st.ended.is_some() {
            break;
        }
        if line_conds_hold(&spec.db, st, line) {
            run_line_effects(&spec.db, st, line, noun, out);
        }
    }
}

fn command_phase(
    spec: &SpecializedGame,
    st: &mut GameState,
    verb: u16,
    noun: u16,
    out: &mut TurnResult,
) {
    let db = &spec.db;
    let mut trigger_matched = false;
    for (idx, line) in spec.lines.iter().enumerate() {
        let Trigger::Command { verb: lv, noun: ln, noun_wildcard } = line.trigger else {
            continue;
        };
        if lv != verb || !(noun_wildcard || ln == noun) {
            continue;
        }
        trigger_matched = true;
        if !line_conds_hold(db, st, line) {
            continue;
        }
        // First fully-satisfied line wins; nothing after it is scanned.
        let continuation = run_line_effects(db, st, line, noun, out);
        if continuation && st.ended.is_none() {
            run_continuation(spec, st, idx, noun, out);
        }
        return;
    }

    // No scripted line fired: built-in movement and item handling.
    if verb == VERB_GO && noun <= 6 {
        go_builtin(db, st, noun, out);
    } else if verb == VERB_GET {
        get_builtin(spec, st, noun, out);
    } else if verb == VERB_DROP {
        drop_builtin(spec, st, noun, out);
    } else if trigger_matched {
        out.say(msg::CANT_YET);
    } else {
        out.say(msg::DONT_UNDERSTAND);
    }
}

fn go_builtin(db: &GameDatabase, st: &mut GameState, noun: u16, out: &mut TurnResult) {
    if noun == 0 {
        out.say(msg::NO_DIRECTION);
        return;
    }
    let dark = st.is_dark(db);
    if dark {
        out.say(msg::DARK_WARNING);
    }
    let exit = db.rooms[st.current_room as usize].exits[noun as usize - 1];
    if exit != 0 {
        st.current_room = exit;
        out.look_requested = true;
    } else if dark {
        out.say(msg::BROKE_NECK);
        st.ended = Some(Ending::DarkFall);
        out.ending = Some(Ending::DarkFall);
    } else {
        out.say(msg::CANT_GO);
    }
}

fn get_builtin(spec: &SpecializedGame, st: &mut GameState, noun: u16, out: &mut TurnResult) {
    let db = &spec.db;
    if noun == 0 {
        out.say(msg::WHAT);
        return;
    }
    if st.carried_count as i32 >= db.header.max_carry as i32 {
        out.say(msg::TOO_MUCH);
        return;
    }
    let here = st.current_room;
    match pick_candidate(spec, st, noun, here) {
        Some(item) => {
            st.move_item(db, item, db.carried_location());
            out.say(msg::OK);
        }
        None => out.say(msg::BEYOND_POWER),
    }
}

fn drop_builtin(spec: &SpecializedGame, st: &mut GameState, noun: u16, out: &mut TurnResult) {
    let db = &spec.db;
    if noun == 0 {
        out.say(msg::WHAT);
        return;
    }
    match pick_candidate(spec, st, noun, db.carried_location()) {
        Some(item) => {
            let here = st.current_room;
            st.move_item(db, item, here);
            out.say(msg::OK);
        }
        None => out.say(msg::BEYOND_POWER),
    }
}

/// Lowest-indexed match-table candidate currently at `loc`.
fn pick_candidate(spec: &SpecializedGame, st: &GameState, noun: u16, loc: u16) -> Option<u16> {
    spec.match_table
        .candidates(noun)
        .iter()
        .copied()
        .find(|&item| st.item_locations[item as usize] == loc)
}

fn lamp_phase(db: &GameDatabase, st: &mut GameState, out: &mut TurnResult) {
    if db.header.light_time == -1 {
        return;
    }
    let Some(&loc) = st.item_locations.get(LIGHT_SOURCE as usize) else {
        return;
    };
    if loc == 0 {
        return;
    }
    if (loc == db.carried_location() || loc == st.current_room) && st.lamp_fuel > 0 {
        st.lamp_fuel -= 1;
        if st.lamp_fuel == 0 {
            st.set_flag(DARK_FLAG);
            out.say(msg::LIGHT_OUT);
        }
    }
}

/// One automatics pass over every line, in order. Continuation groups
/// run without draws; all chance draws happen even when the pass cannot
/// execute anything anymore, keeping the draw count fixed.
fn automatics_pass(
    spec: &SpecializedGame,
    st: &mut GameState,
    draws: &mut dyn DrawSource,
    noun: u16,
    out: &mut TurnResult,
) {
    let db = &spec.db;
    let mut continuation = false;
    for line in &spec.lines {
        if continuation && line.vocab_zero {
            if st.ended.is_none() && line_conds_hold(db, st, line) {
                run_line_effects(db, st, line, noun, out);
            }
            continue;
        }
        continuation = false;
        let Trigger::Auto { chance } = line.trigger else {
            continue;
        };
        let gate = if chance > 0 && chance < 100 {
            draws.draw(chance) // always drawn, fixed count per pass
        } else {
            chance >= 100
        };
        if st.ended.is_some() || !gate {
            continue;
        }
        if line_conds_hold(db, st, line) {
            continuation = run_line_effects(db, st, line, noun, out);
        }
    }
}

/// The automatics pass that precedes the first turn.
pub fn initial_pass(
    spec: &SpecializedGame,
    st: &mut GameState,
    draws: &mut dyn DrawSource,
) -> TurnResult {
    let mut out = TurnResult::default();
    automatics_pass(spec, st, draws, 0, &mut out);
    debug_assert_eq!(st.carried_count, super::count_carried(&spec.db, st));
    out
}

/// Executes one full turn of the specialized game.
pub fn perform_turn(
    spec: &SpecializedGame,
    st: &mut GameState,
    draws: &mut dyn DrawSource,
    verb: u16,
    noun: u16,
) -> Result<TurnResult, TurnError> {
    check_turn_inputs(st, spec.constants.num_words, verb, noun)?;
    let mut out = TurnResult::default();
    command_phase(spec, st, verb, noun, &mut out);
    if st.ended.is_none() {
        lamp_phase(&spec.db, st, &mut out);
    }
    if st.ended.is_none() {
        automatics_pass(spec, st, draws, noun, &mut out);
    }
    st.turn_index += 1;
    debug_assert_eq!(st.carried_count, super::count_carried(&spec.db, st));
    Ok(out)
}

/// Lowest-indexed candidate for `noun` whose location is `loc`, the
/// specialized equivalent of looking an item up by noun text.
pub fn match_up_item(spec: &SpecializedGame, st: &GameState, noun: u16, loc: u16) -> Option<u16> {
    pick_candidate(spec, st, noun, loc)
}
