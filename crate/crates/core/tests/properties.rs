mod common;

use common::{relabel, two_chain};
use lcontract_core::complement::min_complement;
use lcontract_core::fiber::{blow_up_at_edge, blow_up_at_vertex, contract};
use lcontract_core::graphcore::rat;
use lcontract_core::logdisc::{canonical_mult, pair_pullback};
use lcontract_core::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// A random tree of compact curves with a few incomplete curves hanging off.
fn arb_graph() -> impl Strategy<Value = DualGraph> {
    (1usize..9)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(any::<prop::sample::Index>(), n - 1),
                prop::collection::vec((-6i64..=0, any::<bool>()), n),
                prop::collection::vec((any::<prop::sample::Index>(), 1i64..=4), 0..3),
            )
        })
        .prop_map(|(parents, curves, incs)| {
            let n = curves.len();
            let mut b = GraphBuilder::new();
            let ids: Vec<VertexId> = curves
                .iter()
                .map(|&(w, bullet)| if bullet { b.bullet(w) } else { b.exc(w) })
                .collect();
            for (i, p) in parents.iter().enumerate() {
                b.edge(ids[p.index(i + 1)], ids[i + 1]);
            }
            for (at, num) in incs {
                let x = b.incomplete(rat(num, 4));
                b.edge(x, ids[at.index(n)]);
            }
            b.build().unwrap()
        })
}

/// A random permutation of `0..len`, shifted away from the original ids.
fn arb_perm(len: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..len as u32).map(|i| i + 100).collect::<Vec<_>>()).prop_shuffle()
}

fn graph_and_perm() -> impl Strategy<Value = (DualGraph, Vec<u32>)> {
    arb_graph().prop_flat_map(|g| {
        let n = g.len();
        (Just(g), arb_perm(n))
    })
}

fn arb_quot(max: i64) -> impl Strategy<Value = CyclicQuot> {
    (2..=max)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_filter("coprime", |&(n, q)| n.gcd(&q) == 1)
        .prop_map(|(n, q)| CyclicQuot::new(n, q).unwrap())
}

/// A fiber reached by `k` random blow-ups of a bullet with self-intersection 0.
fn arb_fiber() -> impl Strategy<Value = FiberGraph> {
    prop::collection::vec(any::<prop::sample::Index>(), 1..9).prop_filter_map("not a fiber", |steps| {
        let mut b = GraphBuilder::new();
        b.bullet(0);
        let mut g = b.build().unwrap();
        for s in steps {
            let ids = g.compact_ids();
            let edges: Vec<_> = g.edges().collect();
            let k = s.index(ids.len() + edges.len());
            g = if k < ids.len() {
                blow_up_at_vertex(&g, ids[k]).unwrap()
            } else {
                let (u, v) = edges[k - ids.len()];
                blow_up_at_edge(&g, u, v).unwrap()
            };
        }
        let g = g.with_roles(|v| if v.self_int >= -1 { Role::Bullet } else { Role::Exceptional }).unwrap();
        FiberGraph::new(g).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_ignores_ids((g, perm) in graph_and_perm()) {
        let h = relabel(&g, &perm);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn canonical_form_decodes((g, _) in graph_and_perm()) {
        let code = canonical_form(&g);
        let back = decode_canonical(&code).unwrap();
        prop_assert_eq!(back.len(), g.len());
        prop_assert_eq!(canonical_form(&back), code);
    }

    #[test]
    fn pullback_satisfies_adjunction(g in arb_graph()) {
        let g = g.with_roles(|v| match v.role {
            Role::Incomplete => Role::Incomplete,
            _ if v.self_int <= -2 => Role::Exceptional,
            _ => Role::Bullet,
        }).unwrap();
        let boundary = PullbackAssignment(
            g.incomplete_ids().into_iter().map(|id| (id, g.vertex(id).unwrap().coeff.clone().unwrap())).collect(),
        );
        let Ok(c) = pair_pullback(&g, &boundary) else { return Ok(()) };
        for id in g.exceptional_ids() {
            let v = g.vertex(id).unwrap();
            let mut total = Rational::from_integer(canonical_mult(v).into())
                + c.get(id).unwrap() * Rational::from_integer(v.self_int.into());
            for w in g.neighbors(id) {
                if let Some(x) = c.get(w).or_else(|| boundary.get(w)) {
                    total += x;
                }
            }
            prop_assert!(total.is_zero(), "{:?}", total);
        }
    }

    #[test]
    fn hj_round_trip(x in arb_quot(1_000_000_000_000)) {
        let chain = x.hj_expand();
        prop_assert_eq!(chain.hj_contract(), x.clone());
        prop_assert_eq!(x.dual().dual(), x.clone());
        prop_assert_eq!(chain.order(), x.n().clone());
        // Sum of (b - 2) over the chain is one less than the length of the dual.
        let excess: i64 = chain.entries().iter().map(|b| b - 2).sum();
        prop_assert_eq!(excess + 1, x.dual().hj_expand().len() as i64);
    }

    #[test]
    fn class_t_from_witness(m in 2i64..40, s in 1i64..10, seed in any::<prop::sample::Index>()) {
        let coprime: Vec<i64> = (1..m).filter(|k| k.gcd(&m) == 1).collect();
        let mp = coprime[seed.index(coprime.len())];
        let x = CyclicQuot::new(s * m * m, s * m * mp - 1).unwrap();
        let w = x.class_t().unwrap();
        prop_assert_eq!((w.m, w.s, w.m_prime), (BigInt::from(m), BigInt::from(s), BigInt::from(mp)));
        prop_assert!(x.hj_expand().is_class_t_recursive());
        prop_assert!(x.class_t_necessary());
    }

    #[test]
    fn class_t_agrees_with_growth_moves(x in arb_quot(400)) {
        prop_assert_eq!(x.class_t().is_some(), x.hj_expand().is_class_t_recursive());
    }

    #[test]
    fn blow_up_then_contract(f in arb_fiber(), pick in any::<prop::sample::Index>()) {
        let g = f.graph();
        let ids = g.compact_ids();
        let edges: Vec<_> = g.edges().collect();
        let k = pick.index(ids.len() + edges.len());
        let w = g.next_id();
        let h = if k < ids.len() {
            blow_up_at_vertex(g, ids[k]).unwrap()
        } else {
            blow_up_at_edge(g, edges[k - ids.len()].0, edges[k - ids.len()].1).unwrap()
        };
        prop_assert_eq!(&contract(&h, w).unwrap(), g);
        prop_assert!(f.multiplicities().is_ok());
    }

    #[test]
    fn certificates_verify_and_scale(x in arb_quot(60)) {
        let g = two_chain(x.hj_expand().entries(), x.dual().hj_expand().entries());
        let cert = min_complement(&g, true).unwrap().unwrap();
        prop_assert_eq!(cert.n, 1);
        let again = verify_complement(&g, &cert.boundary, 1).unwrap();
        prop_assert_eq!(&again, &cert);
        for n in [2, 3, 4, 6] {
            prop_assert!(verify_complement(&g, &cert.boundary, n).is_ok());
        }
        prop_assert!(cert.boundary.coefficients.values().all(|c| c <= &Rational::one()));
    }
}
