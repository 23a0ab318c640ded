//! Line-oriented text format:
//!
//! ```text
//! # comment
//! nodes 3
//! arc 0 1 3
//! arc 1 2 1 5/2
//! ```
//!
//! `arc <tail> <head> <multiplicity> [<weight>]`, the weight defaulting to 1.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Digraph;

pub fn parse<W: Scalar>(text: &str) -> Result<Digraph<W>> {
    let mut graph: Option<Digraph<W>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::Parse { line, message };
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match (fields[0], graph.as_mut()) {
            ("nodes", None) => {
                if fields.len() != 2 {
                    return Err(err("expected `nodes <n>`".into()));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| err(format!("invalid node count `{}`", fields[1])))?;
                graph = Some(Digraph::new(n));
            }
            ("nodes", Some(_)) => return Err(err("duplicate `nodes` line".into())),
            ("arc", None) => return Err(err("`arc` before `nodes`".into())),
            ("arc", Some(g)) => {
                if fields.len() != 4 && fields.len() != 5 {
                    return Err(err(
                        "expected `arc <tail> <head> <multiplicity> [<weight>]`".into(),
                    ));
                }
                let node = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| err(format!("invalid node id `{}`", s)))
                };
                let tail = node(fields[1])?;
                let head = node(fields[2])?;
                let mult: u64 = fields[3]
                    .parse()
                    .map_err(|_| err(format!("invalid multiplicity `{}`", fields[3])))?;
                let weight = match fields.get(4) {
                    Some(s) => {
                        W::parse_literal(s).ok_or_else(|| err(format!("invalid weight `{}`", s)))?
                    }
                    None => W::one(),
                };
                g.add_arc(tail, head, mult, weight).map_err(|e| match e {
                    Error::Input(m) => err(m),
                    other => other,
                })?;
            }
            (other, _) => return Err(err(format!("unknown directive `{}`", other))),
        }
    }
    graph.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `nodes` line".into(),
    })
}

/// Writes the digraph back out, arc records in order, weights as exact literals.
pub fn serialize<W: Scalar>(d: &Digraph<W>) -> String {
    let mut out = String::new();
    writeln!(out, "nodes {}", d.node_count()).unwrap();
    for a in d.arcs() {
        writeln!(
            out,
            "arc {} {} {} {}",
            a.tail,
            a.head,
            a.multiplicity,
            a.weight.to_literal()
        )
        .unwrap();
    }
    out
}
