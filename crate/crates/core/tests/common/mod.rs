//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lcontract_core::graphcore::{int, rat};
use lcontract_core::*;

/// Walks from `start` away from `from` until the path ends.
pub fn path_from(g: &DualGraph, from: VertexId, start: VertexId) -> Vec<VertexId> {
    let all: BTreeSet<VertexId> = g.vertices().map(|v| v.id).collect();
    path_within(g, &all, from, start)
}

/// Same as [`path_from`], never leaving `set`.
pub fn path_within(g: &DualGraph, set: &BTreeSet<VertexId>, from: VertexId, start: VertexId) -> Vec<VertexId> {
    let mut path = vec![start];
    let (mut prev, mut cur) = (from, start);
    loop {
        let next: Vec<VertexId> = g.neighbors(cur).filter(|&w| w != prev && set.contains(&w)).collect();
        match next.as_slice() {
            [w] => {
                path.push(*w);
                prev = cur;
                cur = *w;
            }
            [] => return path,
            _ => panic!("not a path"),
        }
    }
}

pub fn weights(g: &DualGraph, path: &[VertexId]) -> Vec<i64> {
    path.iter().map(|&v| -g.vertex(v).unwrap().self_int).collect()
}

/// The D* boundary with coefficients 1/2 on the two forks, 1 on every other
/// compact curve and one horizontal curve of coefficient 1 through the far end
/// of the other chain (through the bullet when that chain is empty).
pub fn d_min(g: &FiberGraph, class: &ContractionClass) -> BoundaryConfig {
    let graph = g.graph();
    let mut coefficients: BTreeMap<VertexId, Rational> = graph.vertices().map(|v| (v.id, int(1))).collect();
    // The forks are the curves over P that meet nothing else.
    let forks: Vec<VertexId> = class.p_component.iter().copied().filter(|&v| graph.neighbors(v).count() == 1).collect();
    assert_eq!(forks.len(), 2, "D* graph without two forks");
    for w in forks {
        coefficients.insert(w, rat(1, 2));
    }
    let far = match class.theta_component.as_slice() {
        [] => g.bullet(),
        theta => {
            let start = graph.neighbors(g.bullet()).find(|w| theta.contains(w)).unwrap();
            *path_from(graph, g.bullet(), start).last().unwrap()
        }
    };
    BoundaryConfig { coefficients, incompletes: vec![IncompleteCurve { attachments: vec![far], coeff: int(1) }] }
}

/// The D** boundary: 1 along the chain through the bullet's neighbour up to
/// the branch curve, 1/2 on the two forks, 0 on the bullet and the other
/// chain, one horizontal curve of coefficient 1 through the far end.
pub fn b_min(g: &FiberGraph, class: &ContractionClass) -> BoundaryConfig {
    let graph = g.graph();
    let pset: BTreeSet<VertexId> = class.p_component.iter().copied().collect();
    let deg = |v: VertexId| graph.neighbors(v).filter(|w| pset.contains(w)).count();
    let center = *class.p_component.iter().find(|&&v| deg(v) == 3).expect("branch curve");
    let x = graph.neighbors(g.bullet()).find(|w| pset.contains(w)).unwrap();
    let mut coefficients: BTreeMap<VertexId, Rational> = graph.vertices().map(|v| (v.id, int(0))).collect();
    coefficients.insert(center, int(1));
    let mut far = center;
    for start in graph.neighbors(center) {
        let arm = path_within(graph, &pset, center, start);
        let c = if arm.contains(&x) { int(1) } else { rat(1, 2) };
        if arm.contains(&x) {
            far = *arm.last().unwrap();
        }
        for v in arm {
            coefficients.insert(v, c.clone());
        }
    }
    BoundaryConfig { coefficients, incompletes: vec![IncompleteCurve { attachments: vec![far], coeff: int(1) }] }
}


/// Two chains around a bullet, each read from its far end.
pub fn two_chain(left: &[i64], right: &[i64]) -> FiberGraph {
    let mut b = GraphBuilder::new();
    let l = b.chain(left);
    let r = b.chain(right);
    let c = b.bullet(-1);
    for end in [l.last(), r.last()].into_iter().flatten() {
        b.edge(*end, c);
    }
    FiberGraph::new(b.build().unwrap()).unwrap()
}

/// The same graph with vertex ids permuted by `perm`.
pub fn relabel(g: &DualGraph, perm: &[u32]) -> DualGraph {
    let ids: Vec<VertexId> = g.vertices().map(|v| v.id).collect();
    let map: BTreeMap<VertexId, VertexId> = ids.iter().zip(perm).map(|(&a, &p)| (a, VertexId(p))).collect();
    let verts = g.vertices().map(|v| Vertex { id: map[&v.id], ..v.clone() });
    let edges = g.edges().map(|(a, b)| (map[&b], map[&a]));
    DualGraph::new(verts, edges).unwrap()
}
