use crate::dbformat::{GameDatabase, Item, RawAction, Room, CARRIED_EXTERNAL, LIGHT_SOURCE};

use super::{
    act_arity, act_operand_kinds, cond_param_kind, decode_action_word, decode_condition,
    message_for_act, ParamKind,
};

/// Removes items, rooms and messages whose description is the
/// placeholder text `.`, along with every action line that refers to
/// one of them, compacting and renumbering all remaining indices.
///
/// Structural slots are never removed: room 0, the start and treasure
/// rooms, message 0, and (when the game is big enough to have one) the
/// light source item and everything below it, since the light source is
/// addressed by its fixed index.
pub fn prune_placeholders(db: &GameDatabase) -> GameDatabase {
    let h = &db.header;
    let protect_low_items = db.items.len() > LIGHT_SOURCE as usize;

    let item_keep: Vec<bool> = db
        .items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            item.description != "." || (protect_low_items && i <= LIGHT_SOURCE as usize)
        })
        .collect();
    let room_keep: Vec<bool> = db
        .rooms
        .iter()
        .enumerate()
        .map(|(r, room)| {
            room.description != "."
                || r == 0
                || r == h.player_room as usize
                || r == h.treasure_room as usize
        })
        .collect();
    let msg_keep: Vec<bool> =
        db.messages.iter().enumerate().map(|(m, msg)| msg != "." || m == 0).collect();

    let item_map = remap(&item_keep);
    let room_map = remap(&room_keep);
    let msg_map = remap(&msg_keep);

    let rooms: Vec<Room> = db
        .rooms
        .iter()
        .zip(&room_keep)
        .filter(|(_, keep)| **keep)
        .map(|(room, _)| Room {
            // Exits into a pruned room become walls.
            exits: room.exits.map(|e| room_map[e as usize].unwrap_or(0)),
            description: room.description.clone(),
        })
        .collect();

    let items: Vec<Item> = db
        .items
        .iter()
        .zip(&item_keep)
        .filter(|(_, keep)| **keep)
        .map(|(item, _)| Item {
            description: item.description.clone(),
            initial_location: if item.initial_location == CARRIED_EXTERNAL {
                CARRIED_EXTERNAL
            } else {
                usize::try_from(item.initial_location)
                    .ok()
                    .and_then(|loc| room_map.get(loc).copied().flatten())
                    .unwrap_or(0) as i64
            },
            auto_get: item.auto_get.clone(),
        })
        .collect();

    let messages: Vec<String> = db
        .messages
        .iter()
        .zip(&msg_keep)
        .filter(|(_, keep)| **keep)
        .map(|(m, _)| m.clone())
        .collect();

    let mut actions = Vec::new();
    let mut action_titles = Vec::new();
    for (raw, title) in db.actions.iter().zip(&db.action_titles) {
        if let Some(remapped) = remap_line(raw, &item_map, &room_map, &msg_map) {
            actions.push(remapped);
            action_titles.push(title.clone());
        }
    }
    if actions.is_empty() {
        // A database always has line 0; keep an inert one.
        actions.push(RawAction { vocab: 0, conditions: [0; 5], actions: [0; 2] });
        action_titles.push(String::new());
    }

    let mut header = h.clone();
    header.num_items = (items.len() - 1) as u16;
    header.num_actions = (actions.len() - 1) as u16;
    header.num_rooms = (rooms.len() - 1) as u16;
    header.num_messages = (messages.len() - 1) as u16;
    header.player_room = room_map[h.player_room as usize].expect("start room is protected");
    header.treasure_room = room_map[h.treasure_room as usize].expect("treasure room is protected");

    GameDatabase {
        header,
        actions,
        verbs: db.verbs.clone(),
        nouns: db.nouns.clone(),
        rooms,
        messages,
        items,
        action_titles,
        trailer: db.trailer,
    }
}

/// Old index -> new index for kept entries.
fn remap(keep: &[bool]) -> Vec<Option<u16>> {
    let mut next = 0u16;
    keep.iter()
        .map(|&k| {
            if k {
                let idx = next;
                next += 1;
                Some(idx)
            } else {
                None
            }
        })
        .collect()
}

/// Renumbers one line's decoded references, or drops the line (None)
/// when it refers to a pruned entity.
fn remap_line(
    raw: &RawAction,
    item_map: &[Option<u16>],
    room_map: &[Option<u16>],
    msg_map: &[Option<u16>],
) -> Option<RawAction> {
    let map_param = |kind: ParamKind, value: u32| -> Option<u32> {
        let table = match kind {
            ParamKind::Item => item_map,
            ParamKind::Room => room_map,
            _ => return Some(value),
        };
        table.get(value as usize).copied().flatten().map(u32::from)
    };

    // Decode conditions, remembering which slots are queue pushes.
    enum Slot {
        Push(u32),
        Cond(u8, u32),
    }
    let mut slots = Vec::with_capacity(5);
    let mut push_positions = Vec::new();
    for &packed in &raw.conditions {
        let (opcode, param) = decode_condition(packed);
        if opcode == 0 {
            push_positions.push(slots.len());
            slots.push(Slot::Push(param));
        } else {
            let mapped = map_param(cond_param_kind(opcode), param)?;
            slots.push(Slot::Cond(opcode, mapped));
        }
    }

    // Walk the acts to learn what each queued parameter feeds, remap the
    // consumed ones in place, and renumber message indices.
    let (a0, a1) = decode_action_word(raw.actions[0]);
    let (a2, a3) = decode_action_word(raw.actions[1]);
    let mut acts = [a0, a1, a2, a3];
    let mut next_queued = 0usize;
    for act in acts.iter_mut() {
        if let Some(msg) = message_for_act(*act) {
            let new = msg_map.get(msg as usize).copied().flatten()?;
            *act = if new <= 51 { new as u32 } else { new as u32 + 50 };
            continue;
        }
        for &kind in act_operand_kinds(*act) {
            let pos = *push_positions.get(next_queued)?;
            next_queued += 1;
            if let Slot::Push(value) = &mut slots[pos] {
                *value = map_param(kind, *value)?;
            }
        }
        debug_assert_eq!(act_arity(*act), act_operand_kinds(*act).len());
    }

    let conditions: Vec<u32> = slots
        .iter()
        .map(|slot| match slot {
            Slot::Push(param) => 20 * param,
            Slot::Cond(opcode, param) => 20 * param + *opcode as u32,
        })
        .collect();

    Some(RawAction {
        vocab: raw.vocab,
        conditions: conditions.try_into().expect("five slots in, five out"),
        actions: [150 * acts[0] + acts[1], 150 * acts[2] + acts[3]],
    })
}

#[cfg(test)]
mod tests {
    use crate::dbformat::{parse_database, validate};

    use super::*;

    fn fixture() -> GameDatabase {
        // Three items (one placeholder), three rooms (one placeholder),
        // two messages (one placeholder). Action 1 references the
        // placeholder item; action 2 prints the placeholder message.
        parse_database(
            r#"
0 2 2 1 3 5 1 0 3 -1 2 1
0 0 0 0 0 0 0 0
150 22 0 0 0 0 150 0
150 0 0 0 0 0 300 0
"AUT" "ANY"
"GO" "COI"
0 0 0 0 0 0 ""
0 0 2 0 0 0 "meadow"
0 0 0 0 0 0 "."
0 0 0 1 0 0 "barn"
""
"a message"
"."
"coin/COI/" 1
"." 2
"bucket" 3
""
""
""
0 0 0
"#,
        )
        .unwrap()
    }

    #[test]
    fn placeholders_and_referring_lines_are_removed() {
        let db = fixture();
        assert!(validate(&db).is_empty());
        let pruned = prune_placeholders(&db);
        assert!(validate(&pruned).is_empty(), "{:?}", validate(&pruned));

        assert_eq!(pruned.header.num_items, 1);
        assert_eq!(pruned.items[0].description, "coin");
        assert_eq!(pruned.items[1].description, "bucket");
        // room 2 (".") removed: barn shifts from 3 to 2 and the meadow's
        // east exit, which led into the placeholder, becomes a wall.
        assert_eq!(pruned.header.num_rooms, 2);
        assert_eq!(pruned.rooms[1].exits[2], 0);
        assert_eq!(pruned.rooms[2].description, "barn");
        assert_eq!(pruned.rooms[2].exits[3], 1);
        assert_eq!(pruned.items[1].initial_location, 2);
        // message "." removed along with the line that printed it; the
        // line referencing the "." item is gone too.
        assert_eq!(pruned.header.num_messages, 1);
        assert_eq!(pruned.header.num_actions, 0);
        assert_eq!(pruned.actions.len(), 1);
    }

    #[test]
    fn prune_without_placeholders_is_identity() {
        let db = fixture();
        let once = prune_placeholders(&db);
        assert_eq!(prune_placeholders(&once), once);
    }
}
