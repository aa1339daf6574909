//! Line-oriented text format for dual graphs.
//!
//! ```text
//! # comment
//! v <id> <self_int> <bullet|exc|inc>
//! e <id> <id>
//! c <id> <p>/<q>
//! ```
//!
//! Vertex ids are arbitrary tokens; incomplete vertices take `0` as their
//! self-intersection placeholder.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::graphcore::{DualGraph, Rational, Role, Vertex, VertexId};
use crate::{Error, Result};

/// A parsed graph together with the names used in the source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: DualGraph,
    names: BTreeMap<VertexId, String>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_role(s: &str) -> Option<Role> {
    match s {
        "bullet" => Some(Role::Bullet),
        "exc" => Some(Role::Exceptional),
        "inc" => Some(Role::Incomplete),
        _ => None,
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let r = Rational::from_str(s.trim()).ok()?;
    Some(r)
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut ids: BTreeMap<String, VertexId> = BTreeMap::new();
        let mut vertices: Vec<Vertex> = Vec::new();
        let mut edges = Vec::new();
        let mut coeffs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields.as_slice() {
                ["v", name, self_int, role] => {
                    if ids.contains_key(*name) {
                        return Err(parse_err(line, format!("duplicate vertex {name}")));
                    }
                    let self_int: i64 = self_int
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad self-intersection {self_int:?}")))?;
                    let role = parse_role(role).ok_or_else(|| parse_err(line, format!("unknown role {role:?}")))?;
                    let id = VertexId(vertices.len() as u32);
                    ids.insert(name.to_string(), id);
                    vertices.push(Vertex::new(id, self_int, role));
                }
                ["e", a, b] => edges.push((line, a.to_string(), b.to_string())),
                ["c", name, value] => {
                    let r = parse_rational(value).ok_or_else(|| parse_err(line, format!("bad coefficient {value:?}")))?;
                    coeffs.push((line, name.to_string(), r));
                }
                [kind, ..] if ["v", "e", "c"].contains(kind) => {
                    return Err(parse_err(line, format!("wrong number of fields for '{kind}'")));
                }
                [kind, ..] => return Err(parse_err(line, format!("unknown record '{kind}'"))),
                [] => unreachable!(),
            }
        }
        let lookup = |line: usize, name: &str| {
            ids.get(name).copied().ok_or_else(|| parse_err(line, format!("unknown vertex {name}")))
        };
        for (line, name, r) in coeffs {
            let id = lookup(line, &name)?;
            vertices[id.0 as usize].coeff = Some(r);
        }
        let mut pairs = Vec::new();
        for (line, a, b) in &edges {
            pairs.push((lookup(*line, a)?, lookup(*line, b)?));
        }
        let graph = DualGraph::new(vertices, pairs).map_err(|e| parse_err(0, e.to_string()))?;
        let names = ids.into_iter().map(|(n, id)| (id, n)).collect();
        Ok(GraphDocument { graph, names })
    }

    /// Wraps a graph, naming each vertex by its numeric id.
    pub fn from_graph(graph: DualGraph) -> Self {
        let names = graph.vertices().map(|v| (v.id, v.id.0.to_string())).collect();
        GraphDocument { graph, names }
    }

    /// Wraps a graph derived from this document, keeping the known names.
    pub fn with_graph(&self, graph: DualGraph) -> Self {
        let names = graph
            .vertices()
            .map(|v| (v.id, self.names.get(&v.id).cloned().unwrap_or_else(|| format!("n{}", v.id.0))))
            .collect();
        GraphDocument { graph, names }
    }

    pub fn name(&self, id: VertexId) -> String {
        self.names.get(&id).cloned().unwrap_or_else(|| id.to_string())
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.names.iter().find(|(_, n)| *n == name).map(|(id, _)| *id)
    }
}

impl FromStr for GraphDocument {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GraphDocument::parse(s)
    }
}

impl fmt::Display for GraphDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.graph;
        for v in g.vertices() {
            writeln!(f, "v {} {} {}", self.name(v.id), v.self_int, v.role.keyword())?;
        }
        for (a, b) in g.edges() {
            writeln!(f, "e {} {}", self.name(a), self.name(b))?;
        }
        for v in g.vertices() {
            if let Some(c) = &v.coeff {
                writeln!(f, "c {} {}", self.name(v.id), c)?;
            }
        }
        Ok(())
    }
}
