//! Line-oriented hypergraph text format.
//!
//! ```text
//! # comment
//! vertices: a b c
//! edge: a b
//! edge: b c
//! ```
//!
//! In lenient mode (the default) vertices that only appear in `edge:` lines
//! are declared on first use. Strict mode requires every edge vertex to be
//! listed on a `vertices:` line.

use std::collections::HashMap;

use super::{Hypergraph, DEFAULT_VERTEX_CAP};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub strict: bool,
    pub vertex_cap: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            strict: false,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Accumulates `vertices:` and `edge:` lines. Shared with the family format,
/// which embeds a hypergraph block.
#[derive(Debug, Default)]
pub struct HypergraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, u32>,
    edges: Vec<Vec<u32>>,
}

impl HypergraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty() && self.edges.is_empty()
    }

    fn declare(&mut self, label: &str) -> u32 {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len() as u32;
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        i
    }

    pub fn vertices_line(&mut self, rest: &str, line: usize, opts: &ParseOptions) -> Result<()> {
        for label in rest.split_whitespace() {
            self.declare(label);
        }
        self.check_cap(line, opts)
    }

    pub fn edge_line(&mut self, rest: &str, line: usize, opts: &ParseOptions) -> Result<()> {
        let mut edge = Vec::new();
        for label in rest.split_whitespace() {
            let v = match self.index.get(label) {
                Some(&v) => v,
                None if opts.strict => {
                    return Err(Error::format(
                        line,
                        format!("edge references undeclared vertex `{label}`"),
                    ))
                }
                None => self.declare(label),
            };
            edge.push(v);
        }
        if edge.is_empty() {
            return Err(Error::format(line, "empty edge"));
        }
        self.edges.push(edge);
        self.check_cap(line, opts)
    }

    fn check_cap(&self, _line: usize, opts: &ParseOptions) -> Result<()> {
        if self.labels.len() > opts.vertex_cap {
            return Err(Error::Refused {
                what: "vertex count",
                actual: self.labels.len(),
                cap: opts.vertex_cap,
            });
        }
        Ok(())
    }

    pub fn finish(self) -> Result<Hypergraph> {
        Hypergraph::new(self.labels, self.edges)
    }
}

/// Splits off a trailing `#` comment and surrounding whitespace.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

pub fn parse(text: &str) -> Result<Hypergraph> {
    parse_with(text, &ParseOptions::default())
}

pub fn parse_with(text: &str, opts: &ParseOptions) -> Result<Hypergraph> {
    let mut b = HypergraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            b.vertices_line(rest, lineno, opts)?;
        } else if let Some(rest) = line.strip_prefix("edge:") {
            b.edge_line(rest, lineno, opts)?;
        } else {
            return Err(Error::format(lineno, format!("unrecognized line `{line}`")));
        }
    }
    b.finish()
}

/// Serializes in canonical form: one `vertices:` line, then one `edge:` line
/// per edge with members in vertex order.
pub fn to_text(h: &Hypergraph) -> String {
    let mut out = String::from("vertices:");
    for l in h.labels() {
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for e in h.edges() {
        out.push_str("edge:");
        for &v in e {
            out.push(' ');
            out.push_str(h.label(v));
        }
        out.push('\n');
    }
    out
}
