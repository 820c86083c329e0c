//! Reports: an ordered list of keys rendered either as `key: value` lines or as a JSON
//! object with the same keys in the same order.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Positive,
    Negative,
    Undecidable,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Positive => 0,
            Status::Negative => 1,
            Status::Undecidable => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Positive => "positive",
            Status::Negative => "negative",
            Status::Undecidable => "undecidable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Entry {
    Text(String),
    List(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, Entry)>,
    status: Status,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut r = Report { entries: Vec::new(), status: Status::Positive };
        r.field("command", command);
        r
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), Entry::Text(value.to_string())));
        self
    }

    pub fn list<I, S>(&mut self, key: &str, items: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.entries.push((key.to_string(), Entry::List(items.into_iter().map(|s| s.to_string()).collect())));
        self
    }

    pub fn finish(mut self, status: Status) -> Report {
        self.status = status;
        self
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            match v {
                Entry::Text(s) => out.push_str(&format!("{k}: {s}\n")),
                Entry::List(items) => {
                    out.push_str(&format!("{k}: {}\n", items.len()));
                    for item in items {
                        out.push_str(&format!("  {item}\n"));
                    }
                }
            }
        }
        out.push_str(&format!("status: {}\nexit: {}\n", self.status.label(), self.status.exit_code()));
        out
    }

    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        for (k, v) in &self.entries {
            let value = match v {
                Entry::Text(s) => Value::String(s.clone()),
                Entry::List(items) => Value::Array(items.iter().cloned().map(Value::String).collect()),
            };
            map.insert(k.clone(), value);
        }
        map.insert("status".into(), Value::String(self.status.label().into()));
        map.insert("exit".into(), Value::from(self.status.exit_code()));
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_share_keys_and_order() {
        let mut r = Report::new("demo");
        r.field("ring", "GF(5)").list("points", ["(0:1)", "(1:0)"]);
        let r = r.finish(Status::Negative);
        assert_eq!(r.to_text(), "command: demo\nring: GF(5)\npoints: 2\n  (0:1)\n  (1:0)\nstatus: negative\nexit: 1\n");
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "ring", "points", "status", "exit"]);
        assert_eq!(v["points"][1], "(1:0)");
    }
}
