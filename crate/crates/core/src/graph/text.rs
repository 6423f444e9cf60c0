//! Plain-text graph format used by fixtures and the oracle command.
//!
//! ```text
//! # diamond
//! nodes 4
//! node 0 10 11      # optional element ids of node 0
//! edge 0 1          # kind defaults to geometric
//! edge 0 2 collision
//! ```

use std::fmt::Write;

use crate::error::{OppError, Result};
use crate::graph::dag::{Dag, EdgeKind};
use crate::graph::dep::InitGraph;

pub fn to_text(g: &InitGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nodes {}", g.node_count());
    for (i, elems) in g.nodes.iter().enumerate() {
        let ids: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "node {i} {}", ids.join(" "));
    }
    for (u, v, k) in g.dag.edges() {
        let _ = writeln!(out, "edge {u} {v} {}", k.as_str());
    }
    out
}

/// Nodes without a `node` line hold a single element equal to their index.
pub fn parse_text(text: &str) -> Result<InitGraph> {
    let err = |line: usize, message: String| OppError::GraphParse { line, message };
    let mut n: Option<usize> = None;
    let mut nodes: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap_or_default();
        let nums = |tok: std::str::SplitWhitespace<'_>| -> Result<(Vec<usize>, Vec<String>)> {
            let mut nums = Vec::new();
            let mut words = Vec::new();
            for t in tok {
                match t.parse::<usize>() {
                    Ok(v) if words.is_empty() => nums.push(v),
                    _ => words.push(t.to_string()),
                }
            }
            Ok((nums, words))
        };
        match head {
            "nodes" => {
                if n.is_some() {
                    return Err(err(line_no, "duplicate `nodes` line".into()));
                }
                let (v, w) = nums(tok)?;
                if v.len() != 1 || !w.is_empty() {
                    return Err(err(line_no, "expected `nodes <count>`".into()));
                }
                n = Some(v[0]);
                nodes = vec![None; v[0]];
            }
            "node" => {
                let count = n.ok_or_else(|| err(line_no, "`node` before `nodes`".into()))?;
                let (v, w) = nums(tok)?;
                if v.is_empty() || !w.is_empty() {
                    return Err(err(line_no, "expected `node <id> <element ids...>`".into()));
                }
                if v[0] >= count {
                    return Err(err(line_no, format!("node {} out of range", v[0])));
                }
                nodes[v[0]] = Some(v[1..].to_vec());
            }
            "edge" => {
                let count = n.ok_or_else(|| err(line_no, "`edge` before `nodes`".into()))?;
                let (v, w) = nums(tok)?;
                if v.len() != 2 || w.len() > 1 {
                    return Err(err(line_no, "expected `edge <from> <to> [geometric|collision]`".into()));
                }
                let kind = match w.first().map(String::as_str) {
                    None | Some("geometric") => EdgeKind::Geometric,
                    Some("collision") => EdgeKind::Collision,
                    Some(other) => return Err(err(line_no, format!("unknown edge kind `{other}`"))),
                };
                if v[0] >= count || v[1] >= count || v[0] == v[1] {
                    return Err(err(line_no, format!("invalid edge {} -> {}", v[0], v[1])));
                }
                edges.push((v[0], v[1], kind));
            }
            other => return Err(err(line_no, format!("unknown directive `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| err(0, "missing `nodes` line".into()))?;
    let dag = Dag::from_edges(n, edges);
    if !dag.is_acyclic() {
        return Err(OppError::Cyclic);
    }
    let nodes = nodes.into_iter().enumerate().map(|(i, e)| e.unwrap_or_else(|| vec![i])).collect();
    Ok(InitGraph { nodes, dag })
}
