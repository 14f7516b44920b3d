use num_rational::BigRational;
use serde_json::{json, Map, Value as Json};

use crate::rational::{format_rational, render_decimal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Text(String),
    Int(usize),
    Bool(bool),
    Exact(BigRational),
    /// An exact value together with its unreduced fraction.
    Unreduced {
        value: BigRational,
        num: String,
        den: String,
    },
    /// Space-separated in text, an array in JSON.
    Words(Vec<String>),
    /// One line per item in text, an array in JSON.
    Lines(Vec<String>),
}

/// Output of one command. Exact rationals are authoritative; decimals are
/// rendered from them at output time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub input_digest: Option<String>,
    pub entries: Vec<(String, Value)>,
    pub flags: Vec<String>,
    /// A hypergraph file emitted by the command.
    pub hypergraph: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            input_digest: None,
            entries: Vec::new(),
            flags: Vec::new(),
            hypergraph: None,
        }
    }

    pub fn push(&mut self, key: &str, value: Value) -> &mut Self {
        self.entries.push((key.to_owned(), value));
        self
    }

    pub fn flag(&mut self, flag: &str) -> &mut Self {
        self.flags.push(flag.to_owned());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// The exact value stored under `key`, if it is rational.
    pub fn exact(&self, key: &str) -> Option<&BigRational> {
        match self.get(key)? {
            Value::Exact(x) | Value::Unreduced { value: x, .. } => Some(x),
            _ => None,
        }
    }

    /// `key: value` lines. With a hypergraph attached they become comments
    /// so the whole output parses as a hypergraph file.
    pub fn to_text(&self, digits: usize) -> String {
        let mut lines = vec![format!("command: {}", self.command)];
        if let Some(d) = &self.input_digest {
            lines.push(format!("input: {d}"));
        }
        for (k, v) in &self.entries {
            match v {
                Value::Text(s) => lines.push(format!("{k}: {s}")),
                Value::Int(n) => lines.push(format!("{k}: {n}")),
                Value::Bool(b) => lines.push(format!("{k}: {b}")),
                Value::Exact(x) => lines.push(format!(
                    "{k}: {} ({})",
                    format_rational(x),
                    render_decimal(x, digits)
                )),
                Value::Unreduced { value, num, den } => {
                    let exact = format_rational(value);
                    let head = if value.is_integer() || format!("{num}/{den}") == exact {
                        exact
                    } else {
                        format!("{num}/{den} = {exact}")
                    };
                    lines.push(format!("{k}: {head} ({})", render_decimal(value, digits)));
                }
                Value::Words(w) => lines.push(format!("{k}: {}", w.join(" "))),
                Value::Lines(items) => lines.extend(items.iter().map(|s| format!("{k}: {s}"))),
            }
        }
        if !self.flags.is_empty() {
            lines.push(format!("flags: {}", self.flags.join(" ")));
        }
        let mut out = String::new();
        let comment = self.hypergraph.is_some();
        for l in lines {
            if comment {
                out.push_str("# ");
            }
            out.push_str(&l);
            out.push('\n');
        }
        if let Some(h) = &self.hypergraph {
            out.push_str(h);
        }
        out
    }

    pub fn to_json(&self, digits: usize) -> String {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        if let Some(d) = &self.input_digest {
            obj.insert("input_digest".into(), json!(d));
        }
        for (k, v) in &self.entries {
            let j = match v {
                Value::Text(s) => json!(s),
                Value::Int(n) => json!(n),
                Value::Bool(b) => json!(b),
                Value::Exact(x) => json!({
                    "exact": format_rational(x),
                    "decimal": render_decimal(x, digits),
                }),
                Value::Unreduced { value, num, den } => json!({
                    "exact": format_rational(value),
                    "unreduced": format!("{num}/{den}"),
                    "decimal": render_decimal(value, digits),
                }),
                Value::Words(w) | Value::Lines(w) => json!(w),
            };
            obj.insert(k.clone(), j);
        }
        obj.insert("flags".into(), json!(self.flags));
        if let Some(h) = &self.hypergraph {
            obj.insert("hypergraph".into(), json!(h));
        }
        let mut s = serde_json::to_string_pretty(&Json::Object(obj)).expect("plain json");
        s.push('\n');
        s
    }
}
