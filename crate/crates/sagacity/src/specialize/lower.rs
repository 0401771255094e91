use std::sync::Arc;

use thiserror::Error;

use crate::dbformat::{validate, GameDatabase, RawAction};

use super::{
    act_arity, build_match_table, decode_action_word, decode_condition, decode_vocab,
    message_for_act, Condition, Constants, Effect, EndingKind, EndingSite, ScriptLine,
    SpecializedGame, Trigger,
};

/// Lowering failure: an effect needed more operands than the line's
/// opcode-0 conditions supplied.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("action line {line_index}: act {act} needs {needed} queued parameter(s), {available} left")]
pub struct LowerError {
    pub line_index: u16,
    pub act: u32,
    pub needed: usize,
    pub available: usize,
}

#[derive(Debug, Error)]
pub enum SpecializeError {
    #[error("database failed validation with {} diagnostic(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<crate::dbformat::Diagnostic>),
    #[error(transparent)]
    Lower(#[from] LowerError),
}

/// Decodes one raw line into the IR.
///
/// Opcode-0 condition slots are deleted and their params queued, in slot
/// order; effects then bind operands from that one queue left to right
/// across the whole line. Surplus queued params are legal and ignored
/// (unused slots in real databases are zero and push a zero).
pub fn lower_line(raw: &RawAction, line_index: u16) -> Result<ScriptLine, LowerError> {
    let trigger = decode_vocab(raw.vocab);

    let mut queue = Vec::new();
    let mut conditions = Vec::new();
    for &packed in &raw.conditions {
        let (opcode, param) = decode_condition(packed);
        if opcode == 0 {
            queue.push(param);
        } else {
            conditions.push(Condition { opcode, param });
        }
    }

    let (a0, a1) = decode_action_word(raw.actions[0]);
    let (a2, a3) = decode_action_word(raw.actions[1]);
    let mut next = 0usize;
    let mut effects = Vec::with_capacity(4);
    let mut ending_sites = Vec::new();
    for (pos, act) in [a0, a1, a2, a3].into_iter().enumerate() {
        let needed = act_arity(act);
        if queue.len() - next < needed {
            return Err(LowerError {
                line_index,
                act,
                needed,
                available: queue.len() - next,
            });
        }
        let ops = &queue[next..next + needed];
        next += needed;
        let effect = decode_raw_effect(act, ops);
        match effect {
            Effect::GameOver => ending_sites.push(EndingSite {
                line_index,
                effect_pos: pos as u8,
                kind: EndingKind::GameOver,
            }),
            Effect::Score => ending_sites.push(EndingSite {
                line_index,
                effect_pos: pos as u8,
                kind: EndingKind::ScoreWin,
            }),
            _ => {}
        }
        effects.push(effect);
    }

    Ok(ScriptLine {
        line_index,
        trigger,
        conditions,
        effects,
        ending_sites,
        vocab_zero: raw.vocab == 0,
    })
}

/// Maps an act value and its bound operands to an [`Effect`]. The raw
/// interpreter calls this with operands taken from its runtime queue;
/// lowering calls it with statically bound ones.
pub fn decode_raw_effect(act: u32, ops: &[u32]) -> Effect {
    if let Some(msg) = message_for_act(act) {
        return Effect::PrintMessage(msg as u16);
    }
    let item = |i: usize| ops[i] as u16;
    match act {
        0 => Effect::Nothing,
        52 => Effect::GetItemChecked(item(0)),
        53 => Effect::DropItem(item(0)),
        54 => Effect::MovePlayer(item(0)),
        55 | 59 => Effect::RemoveItem(item(0)),
        56 => Effect::SetDark,
        57 => Effect::ClearDark,
        58 => Effect::SetFlag(item(0)),
        60 => Effect::ClearFlag(item(0)),
        61 => Effect::Death,
        62 => Effect::PutItem { item: item(0), room: item(1) },
        63 => Effect::GameOver,
        64 | 76 => Effect::Look,
        65 => Effect::Score,
        66 => Effect::Inventory,
        67 => Effect::SetFlag(0),
        68 => Effect::ClearFlag(0),
        69 => Effect::RefillLamp,
        72 => Effect::SwapItems(item(0), item(1)),
        73 => Effect::Continue,
        74 => Effect::TakeItem(item(0)),
        75 => Effect::MoveItemToItem { item: item(0), other: item(1) },
        77 => Effect::DecrementCounter,
        78 => Effect::PrintCounter,
        79 => Effect::SetCounter(ops[0] as i16),
        80 => Effect::SwapRoomSaved(0),
        81 => Effect::SelectCounter(item(0)),
        82 => Effect::AddCounter(ops[0] as i16),
        83 => Effect::SubtractCounter(ops[0] as i16),
        84 => Effect::PrintNoun { newline: false },
        85 => Effect::PrintNoun { newline: true },
        86 => Effect::Newline,
        87 => Effect::SwapRoomSaved(item(0)),
        // 70 clear screen, 71 save, 88 pause, 89 and the undefined
        // 90..=101 range: no effect on game state.
        _ => Effect::Nothing,
    }
}

/// Lowers a whole validated database.
pub fn specialize_game(db: Arc<GameDatabase>) -> Result<SpecializedGame, SpecializeError> {
    let diagnostics = validate(&db);
    if !diagnostics.is_empty() {
        return Err(SpecializeError::Invalid(diagnostics));
    }

    let mut lines = Vec::with_capacity(db.actions.len());
    for (i, raw) in db.actions.iter().enumerate() {
        lines.push(lower_line(raw, i as u16)?);
    }

    let mut auto_draw_plan = Vec::new();
    for line in &lines {
        if let Trigger::Auto { chance } = line.trigger {
            if chance > 0 && chance < 100 {
                auto_draw_plan.push((line.line_index, chance));
            }
        }
    }

    let ending_catalog: Vec<EndingSite> =
        lines.iter().flat_map(|l| l.ending_sites.iter().copied()).collect();

    let constants = Constants::from_db(&db);
    let match_table = build_match_table(&db);

    Ok(SpecializedGame {
        db,
        lines,
        match_table,
        auto_rng_slots: auto_draw_plan.len() as u16,
        auto_draw_plan,
        ending_catalog,
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(vocab: u32, conditions: [u32; 5], actions: [u32; 2]) -> RawAction {
        RawAction { vocab, conditions, actions }
    }

    #[test]
    fn all_zero_line_lowers_to_noops() {
        let line = lower_line(&raw(0, [0; 5], [0; 2]), 3).unwrap();
        assert_eq!(line.trigger, Trigger::Auto { chance: 0 });
        assert!(line.conditions.is_empty());
        assert_eq!(line.effects, vec![Effect::Nothing; 4]);
        assert!(line.ending_sites.is_empty());
        assert!(line.vocab_zero);
    }

    #[test]
    fn swap_binds_two_queued_params_in_order() {
        // OPEN DOOR-style line: "item 2 in room" guard, push 2, push 4,
        // then a swap effect.
        let line = lower_line(&raw(1060, [42, 40, 80, 0, 0], [72 * 150, 0]), 3).unwrap();
        assert_eq!(line.conditions, vec![Condition { opcode: 2, param: 2 }]);
        assert_eq!(line.effects[0], Effect::SwapItems(2, 4));
        // the two filler zero slots pushed surplus zeros, legally unused
        assert!(line.ending_sites.is_empty());
    }

    #[test]
    fn game_over_effect_is_an_ending_site() {
        let line = lower_line(&raw(100, [0; 5], [2 * 150 + 63, 0]), 5).unwrap();
        assert_eq!(line.effects[0], Effect::PrintMessage(2));
        assert_eq!(line.effects[1], Effect::GameOver);
        assert_eq!(
            line.ending_sites,
            vec![EndingSite { line_index: 5, effect_pos: 1, kind: EndingKind::GameOver }]
        );
    }

    #[test]
    fn operand_underflow_is_reported() {
        // act 62 wants two params, none queued (no opcode-0 slots).
        let err = lower_line(&raw(0, [21, 21, 21, 21, 21], [62 * 150, 0]), 9).unwrap_err();
        assert_eq!(err.line_index, 9);
        assert_eq!(err.act, 62);
        assert_eq!(err.needed, 2);
        assert_eq!(err.available, 0);
    }

    #[test]
    fn binding_spans_both_action_words() {
        // push 7, push 3; first word prints, second word drops 7 then removes 3.
        let line =
            lower_line(&raw(0, [7 * 20, 3 * 20, 0, 0, 0], [1 * 150 + 53, 55 * 150]), 0).unwrap();
        assert_eq!(line.effects[0], Effect::PrintMessage(1));
        assert_eq!(line.effects[1], Effect::DropItem(7));
        assert_eq!(line.effects[2], Effect::RemoveItem(3));
        assert_eq!(line.effects[3], Effect::Nothing);
    }
}
