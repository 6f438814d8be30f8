//! Line-oriented `kind key=value ...` records shared by the appendix and harness reports.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: impl Into<String>) -> Self {
        Record {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Parses a line written by `Display`. Returns `None` on malformed input.
    pub fn parse(line: &str) -> Option<Record> {
        let mut chars = line.trim().chars().peekable();
        let kind: String = chars.by_ref().take_while(|c| !c.is_whitespace()).collect();
        if kind.is_empty() {
            return None;
        }
        let mut record = Record::new(kind);
        loop {
            while chars.peek().is_some_and(|c| c.is_whitespace()) {
                chars.next();
            }
            if chars.peek().is_none() {
                return Some(record);
            }
            let key: String = chars.by_ref().take_while(|&c| c != '=').collect();
            let value = if chars.peek() == Some(&'"') {
                chars.next();
                let mut v = String::new();
                loop {
                    match chars.next()? {
                        '"' => break,
                        '\\' => v.push(chars.next()?),
                        c => v.push(c),
                    }
                }
                v
            } else {
                chars.by_ref().take_while(|c| !c.is_whitespace()).collect()
            };
            if key.is_empty() || key.contains(char::is_whitespace) {
                return None;
            }
            record.fields.push((key, value));
        }
    }
}

fn needs_quotes(v: &str) -> bool {
    v.is_empty()
        || v.chars()
            .any(|c| c.is_whitespace() || c == '"' || c == '\\')
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        for (k, v) in &self.fields {
            if needs_quotes(v) {
                let escaped = v.replace('\\', "\\\\").replace('"', "\\\"");
                write!(f, " {k}=\"{escaped}\"")?;
            } else {
                write!(f, " {k}={v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse() {
        let r = Record::new("case")
            .field("label", "pair B=W")
            .field("models", 6)
            .field("note", "");
        let line = r.to_string();
        assert_eq!(line, "case label=\"pair B=W\" models=6 note=\"\"");
        assert_eq!(Record::parse(&line).unwrap(), r);
        assert_eq!(Record::parse(&line).unwrap().get("models"), Some("6"));
    }

    proptest! {
        #[test]
        fn round_trip(kind in "[a-z]{1,8}", fields in prop::collection::vec(("[a-z_]{1,6}", ".{0,12}"), 0..5)) {
            let mut r = Record::new(kind);
            for (k, v) in &fields {
                r = r.field(k, v);
            }
            prop_assert_eq!(Record::parse(&r.to_string()), Some(r));
        }
    }
}
