mod common;

use std::collections::BTreeSet;

use common::two_chain;
use lcontract_core::fiber::{
    blow_up_at_edge, blow_up_at_vertex, contract, is_degenerate_fiber, multiplicities,
};
use lcontract_core::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn two_chain_quotients_are_fibers() {
    for n in 2..=30i64 {
        for q in 1..n {
            let Ok(x) = CyclicQuot::new(n, q) else { continue };
            let left = x.hj_expand();
            let right = x.dual().hj_expand();
            let g = two_chain(left.entries(), right.entries());
            assert!(is_degenerate_fiber(g.graph()), "{x}");
            assert_eq!(g.singular_point_count(), 2);
            assert_eq!(classify(&g).unwrap().tag, ClassTag::AStar, "{x}");
        }
    }
}

#[test]
fn reducible_conic_fibers() {
    // Two (-1)-curves joined by an A_{n-1} chain: every multiplicity is 1.
    for n in 1..=8 {
        let mut b = GraphBuilder::new();
        let l = b.bullet(-1);
        let r = b.bullet(-1);
        let mut prev = l;
        for _ in 0..n - 1 {
            let x = b.exc(-2);
            b.edge(prev, x);
            prev = x;
        }
        b.edge(prev, r);
        let g = b.build().unwrap();
        let m = multiplicities(&g).unwrap();
        assert!(m.0.values().all(|&x| x == 1));
        assert!(FiberGraph::new(g).is_err(), "two bullets are not a fiber graph");
    }
}

#[test]
fn double_cover_graphs() {
    // -2 - bullet - -3 - -2 ... -2 - -3 - bullet - -2
    for k in 0..5 {
        let mut b = GraphBuilder::new();
        let l = b.exc(-2);
        let bl = b.bullet(-1);
        let mut mid = vec![3];
        mid.extend(vec![2; k]);
        mid.push(3);
        let ch = b.chain(&mid);
        let br = b.bullet(-1);
        let r = b.exc(-2);
        b.edge(l, bl).edge(bl, ch[0]).edge(*ch.last().unwrap(), br).edge(br, r);
        let m = multiplicities(&b.build().unwrap()).unwrap();
        assert_eq!((m.get(l), m.get(bl), m.get(br), m.get(r)), (Some(1), Some(2), Some(2), Some(1)));
        assert!(ch.iter().all(|&v| m.get(v) == Some(1)));
    }
    // Chain [3,2,...,2,3] with two bullets on each end.
    for k in 0..5 {
        let mut b = GraphBuilder::new();
        let mut mid = vec![3];
        mid.extend(vec![2; k]);
        mid.push(3);
        let ch = b.chain(&mid);
        for end in [ch[0], *ch.last().unwrap()] {
            for _ in 0..2 {
                let x = b.bullet(-1);
                b.edge(end, x);
            }
        }
        let m = multiplicities(&b.build().unwrap()).unwrap();
        assert!(m.0.values().all(|&x| x == 1));
    }
}

#[test]
fn blow_up_then_contract_is_identity() {
    for f in enumerate_fibers(7, false).unwrap() {
        let g = f.fiber.graph();
        assert!(g.len() <= 8);
        for v in g.compact_ids() {
            let w = g.next_id();
            assert_eq!(&contract(&blow_up_at_vertex(g, v).unwrap(), w).unwrap(), g);
        }
        for (u, v) in g.edges() {
            let w = g.next_id();
            assert_eq!(&contract(&blow_up_at_edge(g, u, v).unwrap(), w).unwrap(), g);
        }
    }
}

#[test]
fn multiplicities_are_kernel_vectors() {
    for f in enumerate_fibers(8, false).unwrap() {
        let g = f.fiber.graph();
        let m = f.fiber.multiplicities().unwrap();
        for v in g.vertices() {
            let s = v.self_int * m.get(v.id).unwrap() as i64
                + g.neighbors(v.id).map(|w| m.get(w).unwrap() as i64).sum::<i64>();
            assert_eq!(s, 0, "{}", f.encoding);
        }
        assert_eq!(m.get(f.fiber.bullet()).map(|d| d > 1), Some(g.len() > 1 && g.neighbors(f.fiber.bullet()).count() > 0));
    }
}

#[test]
fn at_most_two_singular_points() {
    for f in enumerate_fibers(8, true).unwrap() {
        assert!(f.fiber.singular_point_count() <= 2, "{}", f.encoding);
    }
}

/// Breadth-first search with moves applied in a shuffled order, deduplicated
/// by canonical form of the role-free graph.
fn shuffled_enumeration(n: usize, seed: u64) -> BTreeSet<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let key = |g: &DualGraph| {
        let g = g.with_roles(|v| if v.self_int >= -1 { Role::Bullet } else { Role::Exceptional }).unwrap();
        String::from_utf8(canonical_form(&g)).unwrap()
    };
    let mut root = GraphBuilder::new();
    root.bullet(0);
    let mut level = vec![root.build().unwrap()];
    let mut out = BTreeSet::new();
    for _ in 0..n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        let mut order: Vec<usize> = (0..level.len()).collect();
        order.shuffle(&mut rng);
        for i in order {
            let g = &level[i];
            let mut moves: Vec<DualGraph> = g.compact_ids().into_iter().map(|v| blow_up_at_vertex(g, v).unwrap()).collect();
            moves.extend(g.edges().map(|(a, b)| blow_up_at_edge(g, a, b).unwrap()));
            moves.shuffle(&mut rng);
            for h in moves {
                if seen.insert(key(&h)) {
                    next.push(h);
                }
            }
        }
        for g in &next {
            let minus_one = g.vertices().filter(|v| v.self_int == -1).count();
            let rest_ok = g.vertices().all(|v| v.self_int == -1 || v.self_int <= -2);
            if minus_one == 1 && rest_ok {
                out.insert(key(g));
            }
        }
        level = next;
    }
    out
}

#[test]
fn enumeration_ignores_move_order() {
    let expected: BTreeSet<String> = enumerate_fibers(6, false).unwrap().into_iter().map(|f| f.encoding).collect();
    for seed in 0..3 {
        assert_eq!(shuffled_enumeration(6, seed), expected);
    }
}

#[test]
fn enumeration_is_sorted_and_decodes() {
    let fibers = enumerate_fibers(7, true).unwrap();
    let keys: Vec<(usize, String)> = fibers.iter().map(|f| (f.fiber.graph().len(), f.encoding.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for f in &fibers {
        let back = decode_canonical(f.encoding.as_bytes()).unwrap();
        assert_eq!(canonical_form(&back), f.encoding.as_bytes());
        assert_eq!(f.fiber.graph().vertex(f.fiber.bullet()).unwrap().self_int, -1);
    }
}

#[test]
fn enumeration_is_deterministic_across_thread_counts() {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = one.install(|| enumerate_fibers(7, true).unwrap());
    let b = enumerate_fibers(7, true).unwrap();
    assert_eq!(a, b);
}
