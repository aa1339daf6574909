//! Canonical encodings of dual graphs.
//!
//! The compact part is a tree, so the encoding is the AHU code of the tree
//! rooted at its centroid (the smaller of the two codes when there are two
//! centroids). Vertex labels fold in the role, the self-intersection, the
//! optional coefficient and the incomplete curves hanging off the vertex by a
//! single edge. Incomplete curves touching several compact vertices are
//! appended as a tail of preorder positions, minimised over the automorphisms
//! of the rooted tree.
//!
//! Grammar (also accepted by [`decode_canonical`]):
//!
//! ```text
//! graph := node (';' multi)*
//! node  := ('b' | 'e') int ['=' rat] ['[' inc (',' inc)* ']'] ['(' node (',' node)* ')']
//! inc   := '*' [rat]
//! multi := '*' [rat] '@' index ('.' index)*
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use super::{DualGraph, Rational, Role, Vertex, VertexId};
use crate::{Error, Result};

/// Canonical byte encoding: equal for two graphs iff they are isomorphic as
/// role-, weight- and coefficient-labelled graphs.
pub fn canonical_form(g: &DualGraph) -> Vec<u8> {
    Canonizer::new(g).encode().into_bytes()
}

struct Canonizer<'a> {
    g: &'a DualGraph,
    compact: Vec<VertexId>,
    labels: BTreeMap<VertexId, String>,
    multi: Vec<(String, Vec<VertexId>)>,
}

fn coeff_token(c: &Option<Rational>) -> String {
    c.as_ref().map(|c| c.to_string()).unwrap_or_default()
}

impl<'a> Canonizer<'a> {
    fn new(g: &'a DualGraph) -> Self {
        let compact = g.compact_ids();
        let mut multi = Vec::new();
        let mut attached: BTreeMap<VertexId, Vec<String>> = BTreeMap::new();
        for id in g.incomplete_ids() {
            let inc = g.vertex(id).unwrap();
            let nbrs: Vec<_> = g.neighbors(id).collect();
            let token = format!("*{}", coeff_token(&inc.coeff));
            match nbrs.as_slice() {
                [] => multi.push((token, vec![])),
                [w] => attached.entry(*w).or_default().push(token),
                _ => multi.push((token, nbrs)),
            }
        }
        let labels = compact
            .iter()
            .map(|&id| {
                let v = g.vertex(id).unwrap();
                let mut s = String::from(if v.role == Role::Bullet { "b" } else { "e" });
                s.push_str(&v.self_int.to_string());
                if let Some(c) = &v.coeff {
                    s.push('=');
                    s.push_str(&c.to_string());
                }
                if let Some(incs) = attached.get_mut(&id) {
                    incs.sort();
                    s.push('[');
                    s.push_str(&incs.join(","));
                    s.push(']');
                }
                (id, s)
            })
            .collect();
        Canonizer { g, compact, labels, multi }
    }

    fn children(&self, v: VertexId, parent: Option<VertexId>) -> Vec<VertexId> {
        self.g.compact_neighbors(v).filter(|&w| Some(w) != parent).collect()
    }

    fn code(&self, v: VertexId, parent: Option<VertexId>, memo: &mut BTreeMap<VertexId, String>) -> String {
        let mut kids: Vec<String> = self.children(v, parent).into_iter().map(|w| self.code(w, Some(v), memo)).collect();
        kids.sort();
        let mut s = self.labels[&v].clone();
        if !kids.is_empty() {
            s.push('(');
            s.push_str(&kids.join(","));
            s.push(')');
        }
        memo.insert(v, s.clone());
        s
    }

    fn centroids(&self) -> Vec<VertexId> {
        let n = self.compact.len();
        let root = self.compact[0];
        let mut order = vec![(root, None)];
        let mut i = 0;
        while i < order.len() {
            let (v, p) = order[i];
            for w in self.children(v, p) {
                order.push((w, Some(v)));
            }
            i += 1;
        }
        let mut size: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut heaviest: BTreeMap<VertexId, usize> = BTreeMap::new();
        for &(v, p) in order.iter().rev() {
            let kids = self.children(v, p);
            let s = 1 + kids.iter().map(|k| size[k]).sum::<usize>();
            let h = kids.iter().map(|k| size[k]).max().unwrap_or(0).max(n - s);
            size.insert(v, s);
            heaviest.insert(v, h);
        }
        let best = *heaviest.values().min().unwrap();
        self.compact.iter().copied().filter(|v| heaviest[v] == best).collect()
    }

    /// All preorders compatible with the sorted AHU code: isomorphic sibling
    /// subtrees may appear in any order.
    fn preorders(&self, v: VertexId, parent: Option<VertexId>, memo: &BTreeMap<VertexId, String>) -> Vec<Vec<VertexId>> {
        let mut kids = self.children(v, parent);
        kids.sort_by(|a, b| memo[a].cmp(&memo[b]));
        let mut groups: Vec<Vec<VertexId>> = Vec::new();
        for k in kids {
            match groups.last_mut() {
                Some(gr) if memo[&gr[0]] == memo[&k] => gr.push(k),
                _ => groups.push(vec![k]),
            }
        }
        let mut acc: Vec<Vec<VertexId>> = vec![vec![v]];
        for group in groups {
            let mut group_orders: Vec<Vec<VertexId>> = Vec::new();
            for perm in permutations(&group) {
                let mut partial: Vec<Vec<VertexId>> = vec![vec![]];
                for k in perm {
                    let sub = self.preorders(k, Some(v), memo);
                    partial = partial
                        .iter()
                        .flat_map(|p| sub.iter().map(move |s| [p.as_slice(), s.as_slice()].concat()))
                        .collect();
                }
                group_orders.extend(partial);
            }
            acc = acc
                .iter()
                .flat_map(|a| group_orders.iter().map(move |o| [a.as_slice(), o.as_slice()].concat()))
                .collect();
        }
        acc
    }

    fn tail(&self, order: &[VertexId]) -> String {
        let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut tokens: Vec<String> = self
            .multi
            .iter()
            .map(|(tok, nbrs)| {
                let mut idx: Vec<usize> = nbrs.iter().map(|v| pos[v]).collect();
                idx.sort();
                let idx: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                format!("{tok}@{}", idx.join("."))
            })
            .collect();
        tokens.sort();
        tokens.iter().map(|t| format!(";{t}")).collect()
    }

    fn encode(&self) -> String {
        if self.compact.is_empty() {
            return String::new();
        }
        self.centroids()
            .into_iter()
            .map(|root| {
                let mut memo = BTreeMap::new();
                let code = self.code(root, None, &mut memo);
                if self.multi.is_empty() {
                    return code;
                }
                let tail = self.preorders(root, None, &memo).iter().map(|o| self.tail(o)).min().unwrap();
                code + &tail
            })
            .min()
            .unwrap()
    }
}

fn permutations(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Rebuilds a graph from its canonical encoding. Compact vertices are
/// numbered in preorder, incomplete vertices after them.
pub fn decode_canonical(bytes: &[u8]) -> Result<DualGraph> {
    let text = std::str::from_utf8(bytes).map_err(|_| perr(0, "encoding is not UTF-8"))?;
    let mut p = Parser { s: text.as_bytes(), pos: 0, verts: vec![], edges: vec![], pending: vec![] };
    if text.is_empty() {
        return Ok(DualGraph::default());
    }
    p.node(None)?;
    let compact = p.verts.len();
    while p.peek() == Some(b';') {
        p.pos += 1;
        p.expect(b'*')?;
        let coeff = p.opt_rational(b"@")?;
        p.expect(b'@')?;
        let id = VertexId(p.verts.len() as u32);
        p.verts.push(Vertex { id, self_int: 0, role: Role::Incomplete, coeff });
        loop {
            let idx = p.integer()?;
            if idx < 0 || idx as usize >= compact {
                return Err(perr(p.pos, "position out of range"));
            }
            p.edges.push((id, VertexId(idx as u32)));
            if p.peek() == Some(b'.') {
                p.pos += 1;
            } else {
                break;
            }
        }
    }
    if p.pos != p.s.len() {
        return Err(perr(p.pos, "trailing characters"));
    }
    for (at, coeff) in std::mem::take(&mut p.pending) {
        let id = VertexId(p.verts.len() as u32);
        p.verts.push(Vertex { id, self_int: 0, role: Role::Incomplete, coeff });
        p.edges.push((at, id));
    }
    DualGraph::new(p.verts, p.edges)
}

fn perr(pos: usize, message: &str) -> Error {
    Error::Parse { line: 1, message: format!("{message} (column {})", pos + 1) }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    verts: Vec<Vertex>,
    edges: Vec<(VertexId, VertexId)>,
    pending: Vec<(VertexId, Option<Rational>)>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(perr(self.pos, &format!("expected '{}'", c as char)))
        }
    }

    fn token(&mut self, stops: &[u8]) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if stops.contains(&c) {
                break;
            }
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap()
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| perr(start, "expected integer"))
    }

    fn opt_rational(&mut self, extra_stops: &[u8]) -> Result<Option<Rational>> {
        let start = self.pos;
        let mut stops = b"[](),;".to_vec();
        stops.extend_from_slice(extra_stops);
        let tok = self.token(&stops);
        if tok.is_empty() {
            return Ok(None);
        }
        Rational::from_str(tok).map(Some).map_err(|_| perr(start, "bad coefficient"))
    }

    fn node(&mut self, parent: Option<VertexId>) -> Result<()> {
        let role = match self.peek() {
            Some(b'b') => Role::Bullet,
            Some(b'e') => Role::Exceptional,
            _ => return Err(perr(self.pos, "expected 'b' or 'e'")),
        };
        self.pos += 1;
        let self_int = self.integer()?;
        let coeff = if self.peek() == Some(b'=') {
            self.pos += 1;
            Some(self.opt_rational(b"")?.ok_or_else(|| perr(self.pos, "missing coefficient"))?)
        } else {
            None
        };
        let id = VertexId(self.verts.len() as u32);
        self.verts.push(Vertex { id, self_int, role, coeff });
        if let Some(p) = parent {
            self.edges.push((p, id));
        }
        if self.peek() == Some(b'[') {
            self.pos += 1;
            loop {
                self.expect(b'*')?;
                let c = self.opt_rational(b"")?;
                self.pending.push((id, c));
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    _ => break,
                }
            }
            self.expect(b']')?;
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                self.node(Some(id))?;
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    _ => break,
                }
            }
            self.expect(b')')?;
        }
        Ok(())
    }
}
