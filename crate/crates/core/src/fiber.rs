//! Degenerate fibers of ruled surfaces as dual graphs.
//!
//! A fiber graph is the dual graph of the minimal resolution of a surface
//! contraction onto a curve germ: one bullet (the proper transform of the
//! central fiber, a `(−1)`-curve) and exceptional curves of self-intersection
//! at most `−2`. Every such fiber is obtained from a `0`-curve by blowing up
//! points on the fiber, which is what [`enumerate_fibers`] replays.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::graphcore::{
    canonical_form, decode_canonical, definiteness, intersection_matrix, kernel_basis, Definiteness, DualGraph,
    Role, Vertex, VertexId,
};
use crate::logdisc::is_log_terminal;
use crate::{Error, Result};

/// A validated fiber graph: exactly one bullet, no incomplete vertices, all
/// exceptional curves of self-intersection `≤ −2`, the bullet a `(−1)`-curve
/// (or a lone `0`-curve), and a negative semidefinite intersection matrix of
/// corank one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberGraph {
    graph: DualGraph,
    bullet: VertexId,
}

impl FiberGraph {
    pub fn new(graph: DualGraph) -> Result<Self> {
        if graph.has_incompletes() {
            return Err(Error::NotAFiber("fiber graphs carry no incomplete curves".into()));
        }
        let bullets = graph.bullet_ids();
        let [bullet] = bullets.as_slice() else {
            return Err(Error::NotAFiber(format!("expected one bullet, found {}", bullets.len())));
        };
        let b = graph.vertex(*bullet).unwrap();
        let lone = graph.len() == 1;
        if !(b.self_int == -1 && !lone || b.self_int == 0 && lone) {
            return Err(Error::NotAFiber(format!("bullet has self-intersection {}", b.self_int)));
        }
        if let Some(v) = graph.vertices().find(|v| v.role == Role::Exceptional && v.self_int > -2) {
            return Err(Error::NotAFiber(format!("exceptional curve {} has self-intersection {}", v.id, v.self_int)));
        }
        match definiteness(&intersection_matrix(&graph)) {
            Definiteness::NegativeSemidefinite { corank: 1 } => {}
            d => return Err(Error::NotAFiber(format!("intersection form is {d:?}"))),
        }
        Ok(FiberGraph { bullet: *bullet, graph })
    }

    /// Treats the unique vertex of self-intersection `≥ −1` as the bullet.
    pub fn from_compact(graph: &DualGraph) -> Result<Self> {
        FiberGraph::new(graph.with_roles(|v| if v.self_int >= -1 { Role::Bullet } else { Role::Exceptional })?)
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn bullet(&self) -> VertexId {
        self.bullet
    }

    pub fn into_graph(self) -> DualGraph {
        self.graph
    }

    pub fn multiplicities(&self) -> Result<Multiplicities> {
        multiplicities(&self.graph)
    }

    /// Number of singular points of the contracted surface on the central
    /// fiber: the connected components of the exceptional locus.
    pub fn singular_point_count(&self) -> usize {
        self.graph.exceptional_components().len()
    }
}

/// Fiber multiplicities: the primitive positive kernel vector of the
/// intersection matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicities(pub BTreeMap<VertexId, u64>);

impl Multiplicities {
    pub fn get(&self, id: VertexId) -> Option<u64> {
        self.0.get(&id).copied()
    }
}

/// Multiplicities of the compact curves of any graph whose intersection form
/// has corank one and a strictly positive kernel (several bullets allowed).
pub fn multiplicities(g: &DualGraph) -> Result<Multiplicities> {
    let m = intersection_matrix(g);
    let basis = kernel_basis(&m);
    let [v] = basis.as_slice() else {
        return Err(Error::NotAFiber(format!("kernel has dimension {}", basis.len())));
    };
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if ints.first().is_some_and(|x| x.is_negative()) {
        ints.iter_mut().for_each(|x| *x = -x.clone());
    }
    let mut out = BTreeMap::new();
    for (id, x) in m.ids.iter().zip(ints) {
        let x = x / &gcd;
        if !x.is_positive() {
            return Err(Error::NotAFiber("kernel vector is not strictly positive".into()));
        }
        out.insert(*id, x.to_u64().ok_or_else(|| Error::NotAFiber("multiplicity overflow".into()))?);
    }
    Ok(Multiplicities(out))
}

fn require_compact(g: &DualGraph, v: VertexId) -> Result<&Vertex> {
    let vert = g.vertex_checked(v)?;
    if !vert.is_compact() {
        return Err(Error::InvalidGraph(format!("{v} is not a compact curve")));
    }
    Ok(vert)
}

/// Blows up a general point of the curve `v`.
pub fn blow_up_at_vertex(g: &DualGraph, v: VertexId) -> Result<DualGraph> {
    require_compact(g, v)?;
    let mut out = g.clone();
    let w = g.next_id();
    out.insert_vertex(Vertex::new(w, -1, Role::Exceptional));
    out.add_edge(v, w);
    out.bump_self_int(v, -1);
    Ok(out)
}

/// Blows up the intersection point of the curves `u` and `v`.
pub fn blow_up_at_edge(g: &DualGraph, u: VertexId, v: VertexId) -> Result<DualGraph> {
    require_compact(g, u)?;
    require_compact(g, v)?;
    if !g.has_edge(u, v) {
        return Err(Error::InvalidGraph(format!("{u} and {v} do not meet")));
    }
    let mut out = g.clone();
    let w = g.next_id();
    out.remove_edge(u, v);
    out.insert_vertex(Vertex::new(w, -1, Role::Exceptional));
    out.add_edge(u, w);
    out.add_edge(w, v);
    out.bump_self_int(u, -1);
    out.bump_self_int(v, -1);
    Ok(out)
}

/// Compact `(−1)`-curves meeting at most two other compact curves; a lone
/// `(−1)`-curve only when it is the last curve.
pub fn contractible(g: &DualGraph) -> Vec<VertexId> {
    let single = g.compact_ids().len() == 1;
    g.vertices()
        .filter(|v| v.is_compact() && v.self_int == -1)
        .filter(|v| {
            let d = g.compact_degree(v.id);
            (d == 1 || d == 2 || (d == 0 && single)) && g.neighbors(v.id).all(|w| g.vertex(w).unwrap().is_compact())
        })
        .map(|v| v.id)
        .collect()
}

/// Contracts the `(−1)`-curve `v`.
pub fn contract(g: &DualGraph, v: VertexId) -> Result<DualGraph> {
    if !contractible(g).contains(&v) {
        require_compact(g, v)?;
        return Err(Error::InvalidGraph(format!("{v} is not a contractible (-1)-curve")));
    }
    let nbrs: Vec<VertexId> = g.compact_neighbors(v).collect();
    let mut out = g.clone();
    out.remove_vertex(v);
    for &w in &nbrs {
        out.bump_self_int(w, 1);
    }
    if let [a, b] = nbrs.as_slice() {
        out.add_edge(*a, *b);
    }
    Ok(out)
}

/// Contracts the contractible curve with the smallest id.
pub fn blow_down_step(g: &DualGraph) -> Result<DualGraph> {
    let v = *contractible(g).first().ok_or(Error::NoContractible)?;
    contract(g, v)
}

fn is_zero_curve(g: &DualGraph) -> bool {
    let c = g.compact_ids();
    c.len() == 1 && g.vertex(c[0]).unwrap().self_int == 0
}

fn memo_key(g: &DualGraph) -> Vec<u8> {
    // Roles do not matter for contractibility.
    canonical_form(&g.with_roles(|_| Role::Exceptional).expect("roles do not affect validity"))
}

/// A sequence of contractions taking `g` to a single `0`-curve, if one exists.
/// Explores every contraction order, memoising dead ends by canonical form.
pub fn degeneration_sequence(g: &DualGraph) -> Option<Vec<VertexId>> {
    fn go(g: &DualGraph, dead: &mut HashSet<Vec<u8>>, path: &mut Vec<VertexId>) -> bool {
        if is_zero_curve(g) {
            return true;
        }
        let key = memo_key(g);
        if dead.contains(&key) {
            return false;
        }
        for v in contractible(g) {
            let next = contract(g, v).expect("contractible vertex");
            path.push(v);
            if go(&next, dead, path) {
                return true;
            }
            path.pop();
        }
        dead.insert(key);
        false
    }
    if g.has_incompletes() {
        return None;
    }
    let mut path = Vec::new();
    go(g, &mut HashSet::new(), &mut path).then_some(path)
}

/// Whether `g` contracts to a single `0`-curve, i.e. is a fiber of a ruled
/// surface.
pub fn is_degenerate_fiber(g: &DualGraph) -> bool {
    degeneration_sequence(g).is_some()
}

/// Number of connected components of the exceptional subgraph.
pub fn singular_point_count(g: &DualGraph) -> usize {
    g.exceptional_components().len()
}

/// A fiber graph produced by [`enumerate_fibers`], with its canonical encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedFiber {
    pub encoding: String,
    pub fiber: FiberGraph,
}

fn normalize_roles(g: &DualGraph) -> DualGraph {
    g.with_roles(|v| if v.self_int >= -1 { Role::Bullet } else { Role::Exceptional })
        .expect("roles do not affect validity")
}

fn moves(g: &DualGraph) -> Vec<DualGraph> {
    let mut out: Vec<DualGraph> = g.compact_ids().into_iter().map(|v| blow_up_at_vertex(g, v).unwrap()).collect();
    out.extend(g.edges().map(|(a, b)| blow_up_at_edge(g, a, b).unwrap()));
    out
}

/// All fiber graphs reachable from a `0`-curve by at most `max_blowups`
/// blow-ups whose only `(−1)`-curve is the bullet, optionally keeping only
/// those with log terminal exceptional locus. Sorted by vertex count, then
/// encoding.
///
/// The search is breadth first and deduplicates by canonical form at every
/// depth; each level fans out in parallel.
pub fn enumerate_fibers(max_blowups: usize, require_log_terminal: bool) -> Result<Vec<EnumeratedFiber>> {
    if max_blowups < 1 {
        return Err(Error::InvalidSearch("max_blowups must be at least 1".into()));
    }
    let mut root = DualGraph::default();
    root.insert_vertex(Vertex::new(VertexId(0), 0, Role::Bullet));
    let mut level: BTreeMap<Vec<u8>, DualGraph> = BTreeMap::from([(canonical_form(&root), root)]);
    let mut found: BTreeSet<(usize, Vec<u8>)> = BTreeSet::new();
    for _ in 0..max_blowups {
        let children: Vec<Vec<u8>> = level
            .par_iter()
            .flat_map_iter(|(_, g)| moves(g).into_iter().map(|h| canonical_form(&normalize_roles(&h))))
            .collect();
        let mut next = BTreeMap::new();
        for key in children {
            if let std::collections::btree_map::Entry::Vacant(slot) = next.entry(key) {
                let g = decode_canonical(slot.key()).expect("canonical encodings decode");
                slot.insert(g);
            }
        }
        for (key, g) in &next {
            if g.bullet_ids().len() == 1 && g.len() > 1 {
                found.insert((g.len(), key.clone()));
            }
        }
        level = next;
    }
    let candidates: Vec<&(usize, Vec<u8>)> = found.iter().collect();
    let kept: Vec<Option<EnumeratedFiber>> = candidates
        .par_iter()
        .map(|(_, key)| -> Result<Option<EnumeratedFiber>> {
            let g = decode_canonical(key)?;
            if !is_degenerate_fiber(&g) {
                return Ok(None);
            }
            let fiber = FiberGraph::new(g)?;
            if require_log_terminal && !exceptional_locus_log_terminal(fiber.graph())? {
                return Ok(None);
            }
            let encoding = String::from_utf8(key.clone()).expect("ascii encoding");
            Ok(Some(EnumeratedFiber { encoding, fiber }))
        })
        .collect::<Result<_>>()?;
    Ok(kept.into_iter().flatten().collect())
}

/// Every connected component of the exceptional locus is log terminal.
pub fn exceptional_locus_log_terminal(g: &DualGraph) -> Result<bool> {
    for comp in g.exceptional_components() {
        if !is_log_terminal(&g.induced(&comp)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
