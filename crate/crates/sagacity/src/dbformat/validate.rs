use std::fmt;

use crate::specialize::{
    act_arity, act_is_unknown, act_operand_kinds, cond_param_kind, decode_action_word,
    decode_condition, decode_vocab, message_for_act, ParamKind, Trigger,
};

use super::{GameDatabase, CARRIED_EXTERNAL};

/// One validation finding. Rendered as `offset:field:message`; for
/// cross-reference checks the offset is the index of the entity inside
/// its list rather than a byte position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub offset: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.offset, self.field, self.message)
    }
}

struct Checker<'a> {
    db: &'a GameDatabase,
    out: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn push(&mut self, offset: usize, field: impl Into<String>, message: impl Into<String>) {
        self.out.push(Diagnostic { offset, field: field.into(), message: message.into() });
    }

    fn check_param(&mut self, line: usize, field: String, kind: ParamKind, value: u32) {
        let h = &self.db.header;
        let bad = match kind {
            ParamKind::Item => value > h.num_items as u32,
            ParamKind::Room => value > h.num_rooms as u32,
            ParamKind::Flag => value > 31,
            ParamKind::Value => value > i16::MAX as u32,
            ParamKind::Slot => value > 15,
            ParamKind::Ignored => false,
        };
        if bad {
            self.push(line, field, format!("{kind:?} parameter {value} out of range"));
        }
    }
}

/// Checks every invariant and cross-reference of a parsed database.
///
/// An empty result means the game is safe to specialize: every room
/// exit, item location, message index and decoded condition/effect
/// operand is in range.
pub fn validate(db: &GameDatabase) -> Vec<Diagnostic> {
    let mut ck = Checker { db, out: Vec::new() };
    let h = &db.header;

    if h.word_length < 1 {
        ck.push(0, "header.word_length", "word length must be at least 1");
    }
    if h.max_carry < 0 {
        ck.push(0, "header.max_carry", format!("negative carry limit {}", h.max_carry));
    }
    if h.player_room > h.num_rooms {
        ck.push(0, "header.player_room", format!("start room {} > {}", h.player_room, h.num_rooms));
    }
    if h.treasure_room > h.num_rooms {
        ck.push(
            0,
            "header.treasure_room",
            format!("treasure room {} > {}", h.treasure_room, h.num_rooms),
        );
    }
    if h.light_time < -1 {
        ck.push(0, "header.light_time", format!("light time {} below -1", h.light_time));
    }
    // Locations are remapped so that carried = num_rooms + 1; the
    // external 255 sentinel must stay distinguishable from a real room.
    if h.num_rooms as i64 + 1 >= CARRIED_EXTERNAL {
        ck.push(0, "header.num_rooms", format!("{} rooms collide with the carried sentinel", h.num_rooms));
    }

    // Parsing guarantees list lengths; re-assert for hand-built values.
    let lengths = [
        (db.actions.len(), h.num_actions, "actions"),
        (db.verbs.len(), h.num_words, "verbs"),
        (db.nouns.len(), h.num_words, "nouns"),
        (db.rooms.len(), h.num_rooms, "rooms"),
        (db.messages.len(), h.num_messages, "messages"),
        (db.items.len(), h.num_items, "items"),
        (db.action_titles.len(), h.num_actions, "action_titles"),
    ];
    for (len, count, name) in lengths {
        if len != count as usize + 1 {
            ck.push(0, name, format!("list has {len} entries, header implies {}", count + 1));
        }
    }
    if !ck.out.is_empty() {
        // Length mismatches make the indexed checks below meaningless.
        return ck.out;
    }

    for (list, name) in [(&db.verbs, "verb"), (&db.nouns, "noun")] {
        if list[0].starts_with('*') {
            ck.push(0, format!("{name}[0]"), "placeholder word cannot be a synonym");
        }
    }

    for (r, room) in db.rooms.iter().enumerate() {
        for (d, &exit) in room.exits.iter().enumerate() {
            if exit > h.num_rooms {
                let dir = ["north", "south", "east", "west", "up", "down"][d];
                ck.push(r, format!("room[{r}].exit.{dir}"), format!("leads to room {exit} > {}", h.num_rooms));
            }
        }
    }

    for (i, item) in db.items.iter().enumerate() {
        let loc = item.initial_location;
        if loc != CARRIED_EXTERNAL && (loc < 0 || loc > h.num_rooms as i64) {
            ck.push(i, format!("item[{i}].location"), format!("location {loc} out of range"));
        }
    }

    for (l, action) in db.actions.iter().enumerate() {
        if let Trigger::Command { verb, noun, noun_wildcard } = decode_vocab(action.vocab) {
            if verb > h.num_words {
                ck.push(l, format!("action[{l}].vocab"), format!("verb {verb} > {}", h.num_words));
            }
            if !noun_wildcard && noun > h.num_words {
                ck.push(l, format!("action[{l}].vocab"), format!("noun {noun} > {}", h.num_words));
            }
        }

        let mut queue = Vec::new();
        for (c, &packed) in action.conditions.iter().enumerate() {
            let (opcode, param) = decode_condition(packed);
            if opcode == 0 {
                queue.push(param);
            } else {
                ck.check_param(l, format!("action[{l}].cond[{c}]"), cond_param_kind(opcode), param);
            }
        }

        let (a0, a1) = decode_action_word(action.actions[0]);
        let (a2, a3) = decode_action_word(action.actions[1]);
        let mut next = 0usize;
        for (pos, act) in [a0, a1, a2, a3].into_iter().enumerate() {
            let field = format!("action[{l}].act[{pos}]");
            if act_is_unknown(act) {
                ck.push(l, field.clone(), format!("unknown act value {act} (treated as no-op)"));
            }
            if let Some(msg) = message_for_act(act) {
                if msg > h.num_messages as u32 {
                    ck.push(l, field.clone(), format!("message {msg} > {}", h.num_messages));
                }
            }
            let needed = act_arity(act);
            if queue.len() - next < needed {
                ck.push(
                    l,
                    field,
                    format!("act {act} needs {needed} parameter(s), {} left", queue.len() - next),
                );
                break;
            }
            for (kind, &value) in act_operand_kinds(act).iter().zip(&queue[next..]) {
                ck.check_param(l, format!("action[{l}].act[{pos}].param"), *kind, value);
            }
            next += needed;
        }
    }

    ck.out
}

#[cfg(test)]
mod tests {
    use super::super::parse_database;
    use super::*;

    fn minimal() -> GameDatabase {
        parse_database(
            r#"
0 0 0 0 1 1 1 0 3 -1 0 1
0 0 0 0 0 0 0 0
"AUT" "ANY"
0 0 0 0 0 0 ""
0 0 0 0 0 0 "bare room"
""
"coin" 1
""
0 0 0
"#,
        )
        .unwrap()
    }

    #[test]
    fn well_formed_fixture_is_clean() {
        assert!(validate(&minimal()).is_empty());
    }

    #[test]
    fn out_of_range_exit_names_room_and_direction() {
        let mut db = minimal();
        db.rooms[1].exits[2] = db.header.num_rooms + 3;
        let diags = validate(&db);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].field, "room[1].exit.east");
        assert!(diags[0].to_string().contains("room 4 > 1"), "{}", diags[0]);
    }

    #[test]
    fn condition_item_overflow_names_action_line() {
        let mut db = minimal();
        // opcode 1 (item carried) with item index num_items + 1
        db.actions[0].conditions[0] = 20 * (db.header.num_items as u32 + 1) + 1;
        let diags = validate(&db);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].field, "action[0].cond[0]");
        assert_eq!(diags[0].offset, 0);
    }

    #[test]
    fn negative_light_time_other_than_eternal_rejected() {
        let mut db = minimal();
        db.header.light_time = -2;
        assert_eq!(validate(&db).len(), 1);
        db.header.light_time = -1;
        assert!(validate(&db).is_empty());
    }

    #[test]
    fn unknown_act_value_flagged() {
        let mut db = minimal();
        db.actions[0].actions[0] = 95 * 150;
        let diags = validate(&db);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("unknown act value 95"));
    }

    #[test]
    fn message_index_out_of_range_flagged() {
        let mut db = minimal();
        db.actions[0].actions[0] = 3 * 150; // print message 3, but num_messages = 0
        let diags = validate(&db);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("message 3 > 0"));
    }

    #[test]
    fn operand_underflow_flagged() {
        let mut db = minimal();
        db.actions[0].conditions[0] = 21; // one real condition, empty queue
        db.actions[0].conditions[1] = 21;
        db.actions[0].conditions[2] = 21;
        db.actions[0].conditions[3] = 21;
        db.actions[0].conditions[4] = 21;
        db.actions[0].actions[0] = 54 * 150; // move player needs a room param
        let diags = validate(&db);
        assert!(diags.iter().any(|d| d.message.contains("needs 1 parameter")));
    }
}
