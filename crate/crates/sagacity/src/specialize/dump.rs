use std::fmt::Write;

use super::{Condition, Effect, ScriptLine, SpecializedGame, Trigger};

fn cond_text(c: &Condition) -> String {
    let p = c.param;
    match c.opcode {
        1 => format!("carried(item {p})"),
        2 => format!("here(item {p})"),
        3 => format!("carried_or_here(item {p})"),
        4 => format!("in_room({p})"),
        5 => format!("not_here(item {p})"),
        6 => format!("not_carried(item {p})"),
        7 => format!("not_in_room({p})"),
        8 => format!("flag_set({p})"),
        9 => format!("flag_clear({p})"),
        10 => "something_carried".into(),
        11 => "nothing_carried".into(),
        12 => format!("away(item {p})"),
        13 => format!("in_play(item {p})"),
        14 => format!("not_in_play(item {p})"),
        15 => format!("counter_le({p})"),
        16 => format!("counter_gt({p})"),
        17 => format!("unmoved(item {p})"),
        18 => format!("moved(item {p})"),
        19 => format!("counter_eq({p})"),
        other => format!("cond{other}({p})"),
    }
}

fn effect_text(e: &Effect) -> Option<String> {
    Some(match e {
        Effect::Nothing => return None,
        Effect::PrintMessage(m) => format!("print({m})"),
        Effect::GetItemChecked(i) => format!("get(item {i})"),
        Effect::DropItem(i) => format!("drop(item {i})"),
        Effect::MovePlayer(r) => format!("goto(room {r})"),
        Effect::RemoveItem(i) => format!("destroy(item {i})"),
        Effect::SetDark => "set_dark".into(),
        Effect::ClearDark => "clear_dark".into(),
        Effect::SetFlag(f) => format!("set_flag({f})"),
        Effect::ClearFlag(f) => format!("clear_flag({f})"),
        Effect::Death => "death".into(),
        Effect::PutItem { item, room } => format!("put(item {item}, room {room})"),
        Effect::GameOver => "game_over".into(),
        Effect::Look => "look".into(),
        Effect::Score => "score".into(),
        Effect::Inventory => "inventory".into(),
        Effect::RefillLamp => "refill_lamp".into(),
        Effect::SwapItems(a, b) => format!("swap(item {a}, item {b})"),
        Effect::Continue => "continue".into(),
        Effect::TakeItem(i) => format!("take(item {i})"),
        Effect::MoveItemToItem { item, other } => format!("move_to(item {item}, item {other})"),
        Effect::DecrementCounter => "dec_counter".into(),
        Effect::PrintCounter => "print_counter".into(),
        Effect::SetCounter(v) => format!("set_counter({v})"),
        Effect::SwapRoomSaved(s) => format!("swap_room_saved({s})"),
        Effect::SelectCounter(s) => format!("select_counter({s})"),
        Effect::AddCounter(v) => format!("add_counter({v})"),
        Effect::SubtractCounter(v) => format!("sub_counter({v})"),
        Effect::PrintNoun { newline: false } => "print_noun".into(),
        Effect::PrintNoun { newline: true } => "print_noun_nl".into(),
        Effect::Newline => "newline".into(),
    })
}

fn trigger_text(spec: &SpecializedGame, t: &Trigger) -> String {
    match *t {
        Trigger::Auto { chance } => format!("auto({chance}%)"),
        Trigger::Command { verb, noun, noun_wildcard } => {
            let vw = spec.db.verbs.get(verb as usize).map(String::as_str).unwrap_or("?");
            if noun_wildcard {
                format!("cmd({verb}:{vw} *)")
            } else {
                let nw = spec.db.nouns.get(noun as usize).map(String::as_str).unwrap_or("?");
                format!("cmd({verb}:{vw} {noun}:{nw})")
            }
        }
    }
}

fn line_text(spec: &SpecializedGame, line: &ScriptLine) -> String {
    let conds = if line.conditions.is_empty() {
        "true".to_string()
    } else {
        line.conditions.iter().map(cond_text).collect::<Vec<_>>().join(" & ")
    };
    let effects: Vec<String> = line.effects.iter().filter_map(effect_text).collect();
    let effects = if effects.is_empty() { "-".to_string() } else { effects.join(", ") };
    let mut s = format!(
        "L{} {}: {} => {}",
        line.line_index,
        trigger_text(spec, &line.trigger),
        conds,
        effects
    );
    for site in &line.ending_sites {
        let _ = write!(s, " !{site}");
    }
    s
}

/// Human-readable IR listing, one line per scripted event.
pub fn dump_text(spec: &SpecializedGame) -> String {
    let c = &spec.constants;
    let mut out = format!(
        "game: actions={} words={} rooms={} items={} messages={} rng_slots={}\n",
        c.num_actions, c.num_words, c.num_rooms, c.num_items, c.num_messages, spec.auto_rng_slots
    );
    let sites: Vec<String> = spec.ending_catalog.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(
        out,
        "ending sites: {}",
        if sites.is_empty() { "none".to_string() } else { sites.join(", ") }
    );
    for line in &spec.lines {
        let _ = writeln!(out, "{}", line_text(spec, line));
    }
    out
}

/// Machine-readable nested key/value rendering of the IR. The format is
/// stable: two-space indentation, `key: value` leaves, bare `key:`
/// branches.
pub fn dump_tree(spec: &SpecializedGame) -> String {
    let mut out = String::new();
    let c = &spec.constants;
    let mut kv = |depth: usize, key: &str, value: &str| {
        let pad = "  ".repeat(depth);
        if value.is_empty() {
            out.push_str(&format!("{pad}{key}:\n"));
        } else {
            out.push_str(&format!("{pad}{key}: {value}\n"));
        }
    };

    kv(0, "game", "");
    kv(1, "actions", &c.num_actions.to_string());
    kv(1, "words", &c.num_words.to_string());
    kv(1, "rooms", &c.num_rooms.to_string());
    kv(1, "items", &c.num_items.to_string());
    kv(1, "messages", &c.num_messages.to_string());
    kv(1, "treasures", &c.num_treasures.to_string());
    kv(1, "treasure_room", &c.treasure_room.to_string());
    kv(1, "rng_slots", &spec.auto_rng_slots.to_string());
    kv(0, "lines", "");
    for line in &spec.lines {
        kv(1, "line", "");
        kv(2, "index", &line.line_index.to_string());
        match line.trigger {
            Trigger::Auto { chance } => {
                kv(2, "trigger", "auto");
                kv(2, "chance", &chance.to_string());
            }
            Trigger::Command { verb, noun, noun_wildcard } => {
                kv(2, "trigger", "command");
                kv(2, "verb", &verb.to_string());
                let noun = if noun_wildcard { "any".to_string() } else { noun.to_string() };
                kv(2, "noun", &noun);
            }
        }
        kv(2, "conditions", "");
        for cond in &line.conditions {
            kv(3, "cond", &cond_text(cond));
        }
        kv(2, "effects", "");
        for effect in &line.effects {
            if let Some(text) = effect_text(effect) {
                kv(3, "effect", &text);
            }
        }
        kv(2, "endings", "");
        for site in &line.ending_sites {
            kv(3, "ending", &site.to_string());
        }
    }
    kv(0, "match_table", "");
    for (noun, items) in spec.match_table.nouns_with_candidates() {
        kv(1, "noun", "");
        kv(2, "index", &noun.to_string());
        kv(
            2,
            "items",
            &items.iter().map(u16::to_string).collect::<Vec<_>>().join(" "),
        );
    }
    out
}
