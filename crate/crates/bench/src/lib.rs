//! Benchmark fixtures for `lcontract-core`.

use lcontract_core::{DualGraph, GraphBuilder};

/// Two chains around a bullet, each read from its far end.
pub fn two_chain(left: &[i64], right: &[i64]) -> DualGraph {
    let mut b = GraphBuilder::new();
    let l = b.chain(left);
    let r = b.chain(right);
    let c = b.bullet(-1);
    for end in [l.last(), r.last()].into_iter().flatten() {
        b.edge(*end, c);
    }
    b.build().expect("two chains around a bullet form a tree")
}
