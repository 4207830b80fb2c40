//! The `pc v1` line format.
//!
//! ```text
//! pc v1
//! node a:            # a leaf, value 1
//! node b: +a         # value 2
//! marking M: +b -a   # value 1
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::power_circuit::{Marking, NodeId, PcError, PowerCircuit};

pub const HEADER: &str = "pc v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: node `{node}` lies on a cycle")]
    Cycle { line: usize, node: String },
    #[error("line {line}: node `{node}` has a negative exponent")]
    NotIntegral { line: usize, node: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::Cycle { line, .. }
            | ParseError::NotIntegral { line, .. } => *line,
        }
    }
}

/// A parsed file: the circuit, its node names, and named markings in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcDocument {
    pub circuit: PowerCircuit,
    pub node_names: Vec<String>,
    pub markings: Vec<(String, Marking)>,
}

impl PcDocument {
    pub fn marking(&self, name: &str) -> Option<&Marking> {
        self.markings.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

struct RawLine<'a> {
    line: usize,
    name: &'a str,
    terms: Vec<(i8, &'a str)>,
}

fn parse_terms(line: usize, body: &str) -> Result<Vec<(i8, &str)>, ParseError> {
    body.split_whitespace()
        .map(|tok| {
            let (sign, id) = match tok.as_bytes()[0] {
                b'+' => (1, &tok[1..]),
                b'-' => (-1, &tok[1..]),
                _ => return Err(syntax(line, format!("term `{tok}` must start with + or -"))),
            };
            if !is_ident(id) {
                return Err(syntax(line, format!("invalid node id in `{tok}`")));
            }
            Ok((sign, id))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<PcDocument, ParseError> {
    let mut nodes: Vec<RawLine> = Vec::new();
    let mut marks: Vec<RawLine> = Vec::new();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if !seen_header {
            if content != HEADER {
                return Err(syntax(line, format!("expected header `{HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        if content.is_empty() {
            continue;
        }
        let (directive, rest) = content
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(line, format!("unknown directive `{content}`")))?;
        let (name, body) = rest
            .split_once(':')
            .ok_or_else(|| syntax(line, "missing `:`"))?;
        let name = name.trim();
        if !is_ident(name) {
            return Err(syntax(line, format!("invalid identifier `{name}`")));
        }
        let entry = RawLine { line, name, terms: parse_terms(line, body)? };
        match directive {
            "node" => nodes.push(entry),
            "marking" => marks.push(entry),
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    if !seen_header {
        return Err(syntax(1, format!("expected header `{HEADER}`")));
    }

    let mut index: HashMap<&str, NodeId> = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if index.insert(n.name, NodeId(i as u32)).is_some() {
            return Err(syntax(n.line, format!("node `{}` declared twice", n.name)));
        }
    }
    let resolve = |entry: &RawLine| -> Result<Marking, ParseError> {
        let mut terms = Vec::with_capacity(entry.terms.len());
        for &(sign, id) in &entry.terms {
            let q = *index
                .get(id)
                .ok_or_else(|| syntax(entry.line, format!("undeclared node `{id}`")))?;
            terms.push((q, sign));
        }
        Marking::new(terms).map_err(|_| syntax(entry.line, "node repeated in a marking"))
    };
    let succ = nodes.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
    let mut markings: Vec<(String, Marking)> = Vec::with_capacity(marks.len());
    for m in &marks {
        if markings.iter().any(|(n, _)| n == m.name) {
            return Err(syntax(m.line, format!("marking `{}` declared twice", m.name)));
        }
        markings.push((m.name.to_string(), resolve(m)?));
    }

    let circuit = PowerCircuit::from_successors(succ);
    let name_of = |q: NodeId| nodes[q.index()].name.to_string();
    let line_of = |q: NodeId| nodes[q.index()].line;
    if let Err(PcError::Cycle { node }) = circuit.topological_order() {
        return Err(ParseError::Cycle { line: line_of(node), node: name_of(node) });
    }
    let all: Vec<Marking> = markings.iter().map(|(_, m)| m.clone()).collect();
    match circuit.reduce(&all) {
        Ok(_) => {}
        Err(PcError::NotIntegral { node }) => {
            return Err(ParseError::NotIntegral { line: line_of(node), node: name_of(node) })
        }
        Err(e) => return Err(syntax(0, e.to_string())),
    }
    Ok(PcDocument {
        circuit,
        node_names: nodes.iter().map(|n| n.name.to_string()).collect(),
        markings,
    })
}

fn write_terms(out: &mut String, m: &Marking, names: &dyn Fn(NodeId) -> String) {
    for &(q, s) in m.terms() {
        let _ = write!(out, " {}{}", if s > 0 { '+' } else { '-' }, names(q));
    }
}

/// Serializes a circuit. Nodes are named `n<id>`.
pub fn serialize(circuit: &PowerCircuit, markings: &[(&str, &Marking)]) -> String {
    let names = |q: NodeId| format!("n{}", q.0);
    serialize_with(circuit, &names, markings)
}

pub fn serialize_document(doc: &PcDocument) -> String {
    let names = |q: NodeId| doc.node_names[q.index()].clone();
    let ms: Vec<(&str, &Marking)> = doc.markings.iter().map(|(n, m)| (n.as_str(), m)).collect();
    serialize_with(&doc.circuit, &names, &ms)
}

fn serialize_with(
    circuit: &PowerCircuit,
    names: &dyn Fn(NodeId) -> String,
    markings: &[(&str, &Marking)],
) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for p in circuit.nodes() {
        let _ = write!(out, "node {}:", names(p));
        write_terms(&mut out, circuit.successors(p), names);
        out.push('\n');
    }
    for (name, m) in markings {
        let _ = write!(out, "marking {name}:");
        write_terms(&mut out, m, names);
        out.push('\n');
    }
    out
}
