use thiserror::Error;

use super::{split_item_text, GameDatabase, GameHeader, Item, RawAction, Room};

/// Parse failure, pointing at the byte offset and the field being read.
///
/// Rendered as `offset:field:message`, matching the diagnostic format.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{offset}:{field}:{message}")]
pub struct ParseError {
    pub offset: usize,
    pub field: String,
    pub message: String,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src.as_bytes()[self.pos..];
        let skipped = rest.iter().take_while(|b| b.is_ascii_whitespace()).count();
        self.pos += skipped;
    }

    fn err(&self, offset: usize, field: &str, message: impl Into<String>) -> ParseError {
        ParseError { offset, field: field.to_string(), message: message.into() }
    }

    fn next_int(&mut self, field: &str) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        if start >= bytes.len() {
            return Err(self.err(start, field, "truncated input: expected integer"));
        }
        let mut end = start;
        if bytes[end] == b'-' {
            end += 1;
        }
        let digits_start = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_start {
            return Err(self.err(start, field, "expected integer"));
        }
        let text = &self.src[start..end];
        let value = text
            .parse::<i64>()
            .map_err(|_| self.err(start, field, format!("integer out of range: {text}")))?;
        self.pos = end;
        Ok(value)
    }

    fn next_string(&mut self, field: &str) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        if start >= bytes.len() {
            return Err(self.err(start, field, "truncated input: expected string"));
        }
        if bytes[start] != b'"' {
            return Err(self.err(start, field, "expected opening quote"));
        }
        let body_start = start + 1;
        match self.src[body_start..].find('"') {
            Some(rel) => {
                let end = body_start + rel;
                self.pos = end + 1;
                Ok(self.src[body_start..end].to_string())
            }
            None => Err(self.err(start, field, "unterminated string")),
        }
    }

    /// Integer constrained to a nonnegative 16-bit range (counts, indices).
    fn next_u16(&mut self, field: &str) -> Result<u16, ParseError> {
        let at = self.pos;
        let v = self.next_int(field)?;
        u16::try_from(v).map_err(|_| self.err(at, field, format!("value {v} out of range 0..=65535")))
    }

    /// Nonnegative 32-bit integer (packed vocab/condition/action words).
    fn next_packed(&mut self, field: &str) -> Result<u32, ParseError> {
        let at = self.pos;
        let v = self.next_int(field)?;
        u32::try_from(v).map_err(|_| self.err(at, field, format!("packed value {v} must be nonnegative")))
    }
}

/// Parses a `.dat` database from text.
///
/// Structural problems (truncation, malformed tokens, negative packed
/// words) are parse errors; cross-reference range problems are left to
/// [`super::validate`].
pub fn parse_database(text: &str) -> Result<GameDatabase, ParseError> {
    let mut lx = Lexer::new(text);

    // The first header integer is a legacy field nothing reads.
    lx.next_int("header.unused")?;
    let header = GameHeader {
        num_items: lx.next_u16("header.num_items")?,
        num_actions: lx.next_u16("header.num_actions")?,
        num_words: lx.next_u16("header.num_words")?,
        num_rooms: lx.next_u16("header.num_rooms")?,
        max_carry: {
            let at = lx.pos;
            let v = lx.next_int("header.max_carry")?;
            i16::try_from(v)
                .map_err(|_| lx.err(at, "header.max_carry", format!("value {v} out of i16 range")))?
        },
        player_room: lx.next_u16("header.player_room")?,
        num_treasures: lx.next_u16("header.num_treasures")?,
        word_length: lx.next_u16("header.word_length")?,
        light_time: {
            let at = lx.pos;
            let v = lx.next_int("header.light_time")?;
            i32::try_from(v)
                .map_err(|_| lx.err(at, "header.light_time", format!("value {v} out of i32 range")))?
        },
        num_messages: lx.next_u16("header.num_messages")?,
        treasure_room: lx.next_u16("header.treasure_room")?,
    };

    let mut actions = Vec::with_capacity(header.num_actions as usize + 1);
    for i in 0..=header.num_actions as usize {
        let vocab = lx.next_packed(&format!("action[{i}].vocab"))?;
        let mut conditions = [0u32; 5];
        for (c, slot) in conditions.iter_mut().enumerate() {
            *slot = lx.next_packed(&format!("action[{i}].cond[{c}]"))?;
        }
        let mut words = [0u32; 2];
        for (a, slot) in words.iter_mut().enumerate() {
            *slot = lx.next_packed(&format!("action[{i}].act[{a}]"))?;
        }
        actions.push(RawAction { vocab, conditions, actions: words });
    }

    let mut verbs = Vec::with_capacity(header.num_words as usize + 1);
    let mut nouns = Vec::with_capacity(header.num_words as usize + 1);
    for i in 0..=header.num_words as usize {
        verbs.push(lx.next_string(&format!("verb[{i}]"))?);
        nouns.push(lx.next_string(&format!("noun[{i}]"))?);
    }

    let mut rooms = Vec::with_capacity(header.num_rooms as usize + 1);
    for i in 0..=header.num_rooms as usize {
        let mut exits = [0u16; 6];
        for (d, slot) in exits.iter_mut().enumerate() {
            *slot = lx.next_u16(&format!("room[{i}].exit[{d}]"))?;
        }
        let description = lx.next_string(&format!("room[{i}].description"))?;
        rooms.push(Room { exits, description });
    }

    let mut messages = Vec::with_capacity(header.num_messages as usize + 1);
    for i in 0..=header.num_messages as usize {
        messages.push(lx.next_string(&format!("message[{i}]"))?);
    }

    let mut items = Vec::with_capacity(header.num_items as usize + 1);
    for i in 0..=header.num_items as usize {
        let text = lx.next_string(&format!("item[{i}].text"))?;
        let initial_location = lx.next_int(&format!("item[{i}].location"))?;
        let (description, auto_get) = split_item_text(&text);
        items.push(Item {
            description: description.to_string(),
            initial_location,
            auto_get: auto_get.map(str::to_string),
        });
    }

    let mut action_titles = Vec::with_capacity(header.num_actions as usize + 1);
    for i in 0..=header.num_actions as usize {
        action_titles.push(lx.next_string(&format!("title[{i}]"))?);
    }

    let trailer = [
        lx.next_int("trailer.version")?,
        lx.next_int("trailer.adventure")?,
        lx.next_int("trailer.checksum")?,
    ];

    Ok(GameDatabase {
        header,
        actions,
        verbs,
        nouns,
        rooms,
        messages,
        items,
        action_titles,
        trailer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
0 0 0 0 1 1 1 0 3 -1 0 1
0 0 0 0 0 0 0 0
"AUT" "ANY"
0 0 0 0 0 0 "limbo"
0 0 0 0 0 0 "bare room"
""
"coin" 1
"nothing happens"
0 0 0
"#;

    #[test]
    fn minimal_fixture_parses() {
        let db = parse_database(MINIMAL).expect("parse");
        assert_eq!(db.header.num_rooms, 1);
        assert_eq!(db.header.word_length, 3);
        assert_eq!(db.header.light_time, -1);
        assert_eq!(db.actions.len(), 1);
        assert_eq!(db.verbs, vec!["AUT".to_string()]);
        assert_eq!(db.nouns, vec!["ANY".to_string()]);
        assert_eq!(db.rooms.len(), 2);
        assert_eq!(db.rooms[1].description, "bare room");
        assert_eq!(db.messages.len(), 1);
        assert_eq!(db.items.len(), 1);
        assert_eq!(db.items[0].description, "coin");
        assert_eq!(db.items[0].initial_location, 1);
        assert_eq!(db.action_titles.len(), 1);
        assert_eq!(db.trailer, [0, 0, 0]);
    }

    #[test]
    fn auto_get_suffix_is_extracted() {
        let text = MINIMAL.replace("\"coin\" 1", "\"Key/KEY/\" 2");
        let db = parse_database(&text).expect("parse");
        assert_eq!(db.items[0].description, "Key");
        assert_eq!(db.items[0].auto_get.as_deref(), Some("KEY"));
        assert_eq!(db.items[0].initial_location, 2);
    }

    #[test]
    fn truncated_input_names_field() {
        let err = parse_database("0 1 2").unwrap_err();
        assert_eq!(err.field, "header.num_rooms");
        assert!(err.message.contains("truncated"), "{err}");
    }

    #[test]
    fn non_integer_reports_offset() {
        let err = parse_database("0 x").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.field, "header.num_items");
    }

    #[test]
    fn unterminated_string_is_an_error() {
        let text = MINIMAL.replace("\"nothing happens\"", "\"nothing happens");
        let err = parse_database(&text).unwrap_err();
        assert!(err.message.contains("unterminated"), "{err}");
        assert_eq!(err.field, "title[0]");
    }

    #[test]
    fn strings_may_span_lines() {
        let text = MINIMAL.replace("\"bare room\"", "\"bare\nroom\"");
        let db = parse_database(&text).expect("parse");
        assert_eq!(db.rooms[1].description, "bare\nroom");
    }

    #[test]
    fn negative_packed_word_rejected() {
        let text = MINIMAL.replace("0 0 0 0 0 0 0 0\n", "0 -1 0 0 0 0 0 0\n");
        let err = parse_database(&text).unwrap_err();
        assert_eq!(err.field, "action[0].cond[0]");
    }
}
