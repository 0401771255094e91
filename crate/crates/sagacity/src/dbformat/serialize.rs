use std::fmt::Write;

use super::GameDatabase;

/// Renders a database back into `.dat` text.
///
/// `parse_database(serialize_database(db))` reproduces `db` structurally.
/// Item descriptions that themselves end in a `/WORD/`-shaped suffix
/// while `auto_get` is unset would not survive the round trip; real
/// databases do not do this.
pub fn serialize_database(db: &GameDatabase) -> String {
    let mut out = String::new();
    let h = &db.header;
    let _ = writeln!(
        out,
        "0 {} {} {} {} {} {} {} {} {} {} {}",
        h.num_items,
        h.num_actions,
        h.num_words,
        h.num_rooms,
        h.max_carry,
        h.player_room,
        h.num_treasures,
        h.word_length,
        h.light_time,
        h.num_messages,
        h.treasure_room
    );

    for a in &db.actions {
        let c = &a.conditions;
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {}",
            a.vocab, c[0], c[1], c[2], c[3], c[4], a.actions[0], a.actions[1]
        );
    }

    for (verb, noun) in db.verbs.iter().zip(&db.nouns) {
        let _ = writeln!(out, "\"{verb}\" \"{noun}\"");
    }

    for room in &db.rooms {
        let e = &room.exits;
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} \"{}\"",
            e[0], e[1], e[2], e[3], e[4], e[5], room.description
        );
    }

    for message in &db.messages {
        let _ = writeln!(out, "\"{message}\"");
    }

    for item in &db.items {
        let text = match &item.auto_get {
            Some(word) => format!("{}/{}/", item.description, word),
            None => item.description.clone(),
        };
        let _ = writeln!(out, "\"{text}\" {}", item.initial_location);
    }

    for title in &db.action_titles {
        let _ = writeln!(out, "\"{title}\"");
    }

    let _ = writeln!(out, "{} {} {}", db.trailer[0], db.trailer[1], db.trailer[2]);
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_database;
    use super::*;

    #[test]
    fn round_trip_preserves_everything() {
        let text = r#"
0 2 0 1 1 2 1 1 3 10 0 1
0 0 0 0 0 0 0 0
"AUT" "ANY"
"GO" "*CARRY"
0 0 0 0 0 0 ""
3 0 0 0 0 0 "hall of echoes"
""
"*GOLD*/GOL/" 1
"Rusty hook" 255
"Dead lamp" 0
""
99 12 7
"#;
        let db = parse_database(text).expect("parse");
        let emitted = serialize_database(&db);
        let db2 = parse_database(&emitted).expect("reparse");
        assert_eq!(db, db2);
        // Treasure stars and synonym markers survive verbatim.
        assert!(emitted.contains("\"*GOLD*/GOL/\" 1"));
        assert!(emitted.contains("\"GO\" \"*CARRY\""));
        assert!(emitted.contains("99 12 7"));
    }
}
