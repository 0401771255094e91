//! Direct interpreter for the packed action table.
//!
//! This path never looks at the IR: vocab words, conditions and acts are
//! decoded on the fly and effect operands are consumed from a runtime
//! parameter queue, mirroring the original engine's inner loop. It
//! exists as the independent side of the differential tests that check
//! the specializer.

use crate::dbformat::{GameDatabase, RawAction, VERB_DROP, VERB_GET, VERB_GO};
use crate::specialize::{
    act_arity, decode_action_word, decode_condition, decode_raw_effect, prefix_eq, Condition,
};

use super::exec::{apply_effect, cond_holds};
use super::{check_turn_inputs, msg, DrawSource, Ending, GameState, TurnError, TurnResult};

/// Evaluates a raw line's guard. On success returns the queued
/// opcode-0 params; on failure returns None.
fn eval_raw_conditions(
    db: &GameDatabase,
    st: &GameState,
    raw: &RawAction,
) -> Option<Vec<u32>> {
    let mut queue = Vec::with_capacity(5);
    for &packed in &raw.conditions {
        let (opcode, param) = decode_condition(packed);
        if opcode == 0 {
            queue.push(param);
        } else if !cond_holds(db, st, Condition { opcode, param }) {
            return None;
        }
    }
    Some(queue)
}

/// Executes a raw line that already passed its guard; returns true when
/// an act 73 requested continuation.
fn run_raw_effects(
    db: &GameDatabase,
    st: &mut GameState,
    raw: &RawAction,
    line_index: u16,
    queue: &[u32],
    noun: u16,
    out: &mut TurnResult,
) -> bool {
    let (a0, a1) = decode_action_word(raw.actions[0]);
    let (a2, a3) = decode_action_word(raw.actions[1]);
    let mut pptr = 0usize;
    let mut continuation = false;
    for (pos, act) in [a0, a1, a2, a3].into_iter().enumerate() {
        if st.ended.is_some() {
            break;
        }
        let ops = &queue[pptr..pptr + act_arity(act)];
        pptr += act_arity(act);
        let effect = decode_raw_effect(act, ops);
        if act == 73 {
            continuation = true;
        }
        apply_effect(db, st, effect, line_index, pos as u8, noun, out);
    }
    continuation
}

fn raw_conds_and_run(
    db: &GameDatabase,
    st: &mut GameState,
    raw: &RawAction,
    line_index: u16,
    noun: u16,
    out: &mut TurnResult,
) -> Option<bool> {
    let queue = eval_raw_conditions(db, st, raw)?;
    Some(run_raw_effects(db, st, raw, line_index, &queue, noun, out))
}

fn command_phase_raw(
    db: &GameDatabase,
    st: &mut GameState,
    verb: u16,
    noun: u16,
    out: &mut TurnResult,
) {
    let mut trigger_matched = false;
    for (idx, raw) in db.actions.iter().enumerate() {
        let vv = (raw.vocab / 150) as u16;
        let nv = (raw.vocab % 150) as u16;
        if vv != verb || !(nv == 0 || nv == noun) {
            continue;
        }
        trigger_matched = true;
        let Some(continuation) = raw_conds_and_run(db, st, raw, idx as u16, noun, out) else {
            continue;
        };
        if continuation && st.ended.is_none() {
            for (j, follow) in db.actions.iter().enumerate().skip(idx + 1) {
                if follow.vocab != 0 || st.ended.is_some() {
                    break;
                }
                raw_conds_and_run(db, st, follow, j as u16, noun, out);
            }
        }
        return;
    }

    if verb == VERB_GO && noun <= 6 {
        go_builtin_raw(db, st, noun, out);
    } else if verb == VERB_GET {
        get_builtin_raw(db, st, noun, out);
    } else if verb == VERB_DROP {
        drop_builtin_raw(db, st, noun, out);
    } else if trigger_matched {
        out.say(msg::CANT_YET);
    } else {
        out.say(msg::DONT_UNDERSTAND);
    }
}

fn go_builtin_raw(db: &GameDatabase, st: &mut GameState, noun: u16, out: &mut TurnResult) {
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

/// The unspecialized item lookup: resolve the noun index to its synonym
/// head word, then scan every item's auto-get word for a prefix match at
/// the given location, lowest index first.
fn match_up_item_raw(db: &GameDatabase, st: &GameState, noun: u16, loc: u16) -> Option<u16> {
    if noun == 0 {
        return None;
    }
    let wl = db.header.word_length.max(1) as usize;
    let mut head: Option<&str> = None;
    let mut resolved: Option<&str> = None;
    for (n, word) in db.nouns.iter().enumerate() {
        let this = match word.strip_prefix('*') {
            Some(stripped) => head.unwrap_or(stripped),
            None => {
                head = Some(word.as_str());
                word.as_str()
            }
        };
        if n == noun as usize {
            resolved = Some(this);
            break;
        }
    }
    let target = resolved?;
    db.items
        .iter()
        .zip(&st.item_locations)
        .enumerate()
        .find(|(_, ((item, &l)))| {
            l == loc
                && item.auto_get.as_deref().is_some_and(|word| prefix_eq(word, target, wl))
        })
        .map(|(i, _)| i as u16)
}

fn get_builtin_raw(db: &GameDatabase, st: &mut GameState, noun: u16, out: &mut TurnResult) {
    if noun == 0 {
        out.say(msg::WHAT);
        return;
    }
    if st.carried_count as i32 >= db.header.max_carry as i32 {
        out.say(msg::TOO_MUCH);
        return;
    }
    match match_up_item_raw(db, st, noun, st.current_room) {
        Some(item) => {
            st.move_item(db, item, db.carried_location());
            out.say(msg::OK);
        }
        None => out.say(msg::BEYOND_POWER),
    }
}

fn drop_builtin_raw(db: &GameDatabase, st: &mut GameState, noun: u16, out: &mut TurnResult) {
    if noun == 0 {
        out.say(msg::WHAT);
        return;
    }
    match match_up_item_raw(db, st, noun, db.carried_location()) {
        Some(item) => {
            let here = st.current_room;
            st.move_item(db, item, here);
            out.say(msg::OK);
        }
        None => out.say(msg::BEYOND_POWER),
    }
}

fn lamp_phase_raw(db: &GameDatabase, st: &mut GameState, out: &mut TurnResult) {
    if db.header.light_time == -1 {
        return;
    }
    let Some(&loc) = st.item_locations.get(crate::dbformat::LIGHT_SOURCE as usize) else {
        return;
    };
    if loc == 0 {
        return;
    }
    if (loc == db.carried_location() || loc == st.current_room) && st.lamp_fuel > 0 {
        st.lamp_fuel -= 1;
        if st.lamp_fuel == 0 {
            st.set_flag(crate::dbformat::DARK_FLAG);
            out.say(msg::LIGHT_OUT);
        }
    }
}

fn automatics_pass_raw(
    db: &GameDatabase,
    st: &mut GameState,
    draws: &mut dyn DrawSource,
    noun: u16,
    out: &mut TurnResult,
) {
    let mut continuation = false;
    for (idx, raw) in db.actions.iter().enumerate() {
        if continuation && raw.vocab == 0 {
            if st.ended.is_none() {
                raw_conds_and_run(db, st, raw, idx as u16, noun, out);
            }
            continue;
        }
        continuation = false;
        let vv = raw.vocab / 150;
        let chance = (raw.vocab % 150) as u16;
        if vv != 0 {
            continue;
        }
        let gate = if chance > 0 && chance < 100 { draws.draw(chance) } else { chance >= 100 };
        if st.ended.is_some() || !gate {
            continue;
        }
        if let Some(cont) = raw_conds_and_run(db, st, raw, idx as u16, noun, out) {
            continuation = cont;
        }
    }
}

/// The automatics pass that precedes the first turn, raw-table flavour.
pub fn initial_pass_raw(
    db: &GameDatabase,
    st: &mut GameState,
    draws: &mut dyn DrawSource,
) -> TurnResult {
    let mut out = TurnResult::default();
    automatics_pass_raw(db, st, draws, 0, &mut out);
    out
}

/// Executes one full turn straight off the packed action table.
pub fn perform_turn_raw(
    db: &GameDatabase,
    st: &mut GameState,
    draws: &mut dyn DrawSource,
    verb: u16,
    noun: u16,
) -> Result<TurnResult, TurnError> {
    check_turn_inputs(st, db.header.num_words, verb, noun)?;
    let mut out = TurnResult::default();
    command_phase_raw(db, st, verb, noun, &mut out);
    if st.ended.is_none() {
        lamp_phase_raw(db, st, &mut out);
    }
    if st.ended.is_none() {
        automatics_pass_raw(db, st, draws, noun, &mut out);
    }
    st.turn_index += 1;
    debug_assert_eq!(st.carried_count, super::count_carried(db, st));
    Ok(out)
}
