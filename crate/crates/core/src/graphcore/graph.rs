use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// What a vertex of the dual graph stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// Proper transform of the central fiber.
    Bullet,
    /// Exceptional curve of the minimal resolution.
    Exceptional,
    /// Non-compact boundary curve; never part of the intersection matrix.
    Incomplete,
}

impl Role {
    pub fn is_compact(self) -> bool {
        !matches!(self, Role::Incomplete)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Role::Bullet => "bullet",
            Role::Exceptional => "exc",
            Role::Incomplete => "inc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub self_int: i64,
    pub role: Role,
    /// Optional boundary coefficient carried by the vertex.
    pub coeff: Option<Rational>,
}

impl Vertex {
    pub fn new(id: VertexId, self_int: i64, role: Role) -> Self {
        Vertex { id, self_int, role, coeff: None }
    }

    pub fn is_compact(&self) -> bool {
        self.role.is_compact()
    }
}

/// A finite weighted graph whose compact part (bullet and exceptional
/// vertices) is a tree. Incomplete vertices hang off compact vertices.
///
/// Values are immutable once built; every constructor validates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualGraph {
    vertices: BTreeMap<VertexId, Vertex>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl DualGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut g = DualGraph::default();
        for v in vertices {
            if g.vertices.contains_key(&v.id) {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {}", v.id)));
            }
            g.adj.insert(v.id, BTreeSet::new());
            g.vertices.insert(v.id, v);
        }
        for (a, b) in edges {
            if !g.vertices.contains_key(&a) {
                return Err(Error::UnknownVertex(a));
            }
            if !g.vertices.contains_key(&b) {
                return Err(Error::UnknownVertex(b));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at {a}")));
            }
            if !g.adj.get_mut(&a).unwrap().insert(b) {
                return Err(Error::InvalidGraph(format!("repeated edge {a}-{b}")));
            }
            g.adj.get_mut(&b).unwrap().insert(a);
        }
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for (id, nbrs) in &self.adj {
            if self.vertices[id].role == Role::Incomplete {
                if let Some(w) = nbrs.iter().find(|w| !self.vertices[w].is_compact()) {
                    return Err(Error::InvalidGraph(format!(
                        "incomplete vertices {id} and {w} are adjacent"
                    )));
                }
            }
        }
        let compact = self.compact_ids();
        if compact.is_empty() {
            if self.vertices.is_empty() {
                return Ok(());
            }
            return Err(Error::InvalidGraph("no compact vertex".into()));
        }
        let compact_edges: usize = compact.iter().map(|&v| self.compact_degree(v)).sum::<usize>() / 2;
        if compact_edges + 1 != compact.len() {
            return Err(Error::InvalidGraph("compact part is not a tree".into()));
        }
        if self.compact_components(&compact).len() != 1 {
            return Err(Error::InvalidGraph("compact part is disconnected".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub(crate) fn vertex_checked(&self, id: VertexId) -> Result<&Vertex> {
        self.vertices.get(&id).ok_or(Error::UnknownVertex(id))
    }

    /// Vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> + '_ {
        self.vertices.values()
    }

    /// Each edge once, as `(smaller id, larger id)`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, nbrs)| nbrs.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|n| n.contains(&b))
    }

    pub fn neighbors(&self, id: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&id).into_iter().flatten().copied()
    }

    pub fn compact_neighbors(&self, id: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbors(id).filter(|w| self.vertices[w].is_compact())
    }

    pub fn compact_degree(&self, id: VertexId) -> usize {
        self.compact_neighbors(id).count()
    }

    pub fn ids_with_role(&self, role: Role) -> Vec<VertexId> {
        self.vertices.values().filter(|v| v.role == role).map(|v| v.id).collect()
    }

    pub fn compact_ids(&self) -> Vec<VertexId> {
        self.vertices.values().filter(|v| v.is_compact()).map(|v| v.id).collect()
    }

    pub fn exceptional_ids(&self) -> Vec<VertexId> {
        self.ids_with_role(Role::Exceptional)
    }

    pub fn bullet_ids(&self) -> Vec<VertexId> {
        self.ids_with_role(Role::Bullet)
    }

    pub fn incomplete_ids(&self) -> Vec<VertexId> {
        self.ids_with_role(Role::Incomplete)
    }

    pub fn has_incompletes(&self) -> bool {
        self.vertices.values().any(|v| v.role == Role::Incomplete)
    }

    pub fn next_id(&self) -> VertexId {
        VertexId(self.vertices.keys().next_back().map_or(0, |v| v.0 + 1))
    }

    /// Connected components of the subgraph induced on `subset`, each sorted.
    /// Components are ordered by their smallest id.
    pub fn compact_components(&self, subset: &[VertexId]) -> Vec<Vec<VertexId>> {
        let members: BTreeSet<VertexId> = subset.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &members {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if members.contains(&w) && seen.insert(w) {
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// Connected components of the exceptional subgraph.
    pub fn exceptional_components(&self) -> Vec<Vec<VertexId>> {
        self.compact_components(&self.exceptional_ids())
    }

    /// The subgraph induced on `keep`, together with any incomplete vertices
    /// attached to it. Fails if the result is not a valid graph.
    pub fn induced(&self, keep: &[VertexId]) -> Result<DualGraph> {
        let mut set: BTreeSet<VertexId> = keep.iter().copied().collect();
        for &v in keep {
            for w in self.neighbors(v) {
                if self.vertices[&w].role == Role::Incomplete {
                    set.insert(w);
                }
            }
        }
        let verts = set.iter().map(|id| self.vertices[id].clone());
        let edges: Vec<_> = self.edges().filter(|(a, b)| set.contains(a) && set.contains(b)).collect();
        DualGraph::new(verts, edges)
    }

    /// Copy with every vertex's role replaced by `f(vertex)`.
    pub fn with_roles(&self, f: impl Fn(&Vertex) -> Role) -> Result<DualGraph> {
        let verts = self.vertices.values().map(|v| Vertex { role: f(v), ..v.clone() });
        DualGraph::new(verts, self.edges())
    }

    /// Copy with each vertex's coefficient replaced.
    pub fn with_coefficients(&self, coeffs: &BTreeMap<VertexId, Rational>) -> DualGraph {
        let mut g = self.clone();
        for v in g.vertices.values_mut() {
            v.coeff = coeffs.get(&v.id).cloned();
        }
        g
    }

    /// Copy with all incomplete vertices removed.
    pub fn compact_part(&self) -> DualGraph {
        let mut g = self.clone();
        for id in self.incomplete_ids() {
            g.remove_vertex(id);
        }
        g
    }

    // Unchecked mutators for the blow-up/blow-down moves; callers keep the
    // tree invariant themselves.

    pub(crate) fn insert_vertex(&mut self, v: Vertex) {
        self.adj.entry(v.id).or_default();
        self.vertices.insert(v.id, v);
    }

    pub(crate) fn remove_vertex(&mut self, id: VertexId) {
        if let Some(nbrs) = self.adj.remove(&id) {
            for w in nbrs {
                if let Some(n) = self.adj.get_mut(&w) {
                    n.remove(&id);
                }
            }
        }
        self.vertices.remove(&id);
    }

    pub(crate) fn add_edge(&mut self, a: VertexId, b: VertexId) {
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
    }

    pub(crate) fn remove_edge(&mut self, a: VertexId, b: VertexId) {
        if let Some(n) = self.adj.get_mut(&a) {
            n.remove(&b);
        }
        if let Some(n) = self.adj.get_mut(&b) {
            n.remove(&a);
        }
    }

    pub(crate) fn bump_self_int(&mut self, id: VertexId, delta: i64) {
        if let Some(v) = self.vertices.get_mut(&id) {
            v.self_int += delta;
        }
    }
}

/// Incremental construction of a [`DualGraph`] with automatically assigned ids.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<(VertexId, VertexId)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, self_int: i64, role: Role) -> VertexId {
        let id = VertexId(self.vertices.len() as u32);
        self.vertices.push(Vertex::new(id, self_int, role));
        id
    }

    pub fn bullet(&mut self, self_int: i64) -> VertexId {
        self.vertex(self_int, Role::Bullet)
    }

    pub fn exc(&mut self, self_int: i64) -> VertexId {
        self.vertex(self_int, Role::Exceptional)
    }

    pub fn incomplete(&mut self, coeff: Rational) -> VertexId {
        let id = self.vertex(0, Role::Incomplete);
        self.vertices[id.0 as usize].coeff = Some(coeff);
        id
    }

    pub fn set_coeff(&mut self, id: VertexId, coeff: Rational) -> &mut Self {
        self.vertices[id.0 as usize].coeff = Some(coeff);
        self
    }

    /// Appends an exceptional chain with the given weights `[b₁, …]`
    /// (self-intersections `-bᵢ`) and returns its ids in order.
    pub fn chain(&mut self, weights: &[i64]) -> Vec<VertexId> {
        let ids: Vec<_> = weights.iter().map(|&b| self.exc(-b)).collect();
        for w in ids.windows(2) {
            self.edge(w[0], w[1]);
        }
        ids
    }

    pub fn edge(&mut self, a: VertexId, b: VertexId) -> &mut Self {
        self.edges.push((a, b));
        self
    }

    pub fn build(&self) -> Result<DualGraph> {
        DualGraph::new(self.vertices.clone(), self.edges.clone())
    }
}
