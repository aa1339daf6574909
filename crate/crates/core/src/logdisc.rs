//! Discrepancies and log pull-backs on dual graphs.
//!
//! All coefficients are boundary-style: the log pull-back of `K + B` is
//! `K + B̃ + Σ cᵢEᵢ` and `cᵢ` is minus the discrepancy of `Eᵢ`. For a
//! rational curve `K·E = −E² − 2`, so the coefficients solve
//!
//! ```text
//! (−E_j² − 2) + c_j·E_j² + Σ_{exceptional k ~ j} c_k + Σ_{boundary v ~ j} b_v = 0
//! ```
//!
//! for every exceptional `E_j`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graphcore::{solve_many, DualGraph, Rational, Role, Vertex, VertexId};
use crate::{Error, Result};

/// `K·E` for a smooth rational curve `E`.
pub fn canonical_mult(v: &Vertex) -> i64 {
    -v.self_int - 2
}

/// Exact coefficient per vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PullbackAssignment(pub BTreeMap<VertexId, Rational>);

impl PullbackAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, id: VertexId, c: Rational) -> Self {
        self.0.insert(id, c);
        self
    }

    pub fn get(&self, id: VertexId) -> Option<&Rational> {
        self.0.get(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Rational)> + '_ {
        self.0.iter().map(|(&k, v)| (k, v))
    }

    pub fn max(&self) -> Option<&Rational> {
        self.0.values().max()
    }
}

/// Log pull-back solver for a fixed graph: the exceptional coefficients are
/// affine in the boundary, `c = base + Σ_j load_j · unit_j`, where `load_j` is
/// the total boundary coefficient meeting `E_j`.
#[derive(Clone, Debug)]
pub struct PullbackSolver {
    pub(crate) ids: Vec<VertexId>,
    pub(crate) base: Vec<Rational>,
    pub(crate) unit: Vec<Vec<Rational>>,
}

impl PullbackSolver {
    /// Fails with `SingularSystem` unless the exceptional intersection matrix
    /// is invertible.
    pub fn new(g: &DualGraph) -> Result<Self> {
        let exc = g.exceptional_ids();
        let m = induced_matrix(g, &exc);
        let n = exc.len();
        let mut rhs = vec![exc
            .iter()
            .map(|&id| Rational::from_integer(BigInt::from(-canonical_mult(g.vertex(id).unwrap()))))
            .collect::<Vec<_>>()];
        for j in 0..n {
            let mut col = vec![Rational::zero(); n];
            col[j] = -Rational::one();
            rhs.push(col);
        }
        let mut sols = solve_many(&m, &rhs)?;
        let unit = sols.split_off(1);
        let base = sols.pop().unwrap();
        Ok(PullbackSolver { ids: exc, base, unit })
    }

    pub fn exceptional_ids(&self) -> &[VertexId] {
        &self.ids
    }

    /// Coefficients given the boundary load on each exceptional curve, in the
    /// order of [`Self::exceptional_ids`].
    pub fn solve_loads(&self, loads: &[Rational]) -> Vec<Rational> {
        let mut out = self.base.clone();
        for (j, load) in loads.iter().enumerate() {
            if load.is_zero() {
                continue;
            }
            for (o, u) in out.iter_mut().zip(&self.unit[j]) {
                if !u.is_zero() {
                    *o += load * u;
                }
            }
        }
        out
    }

    /// Coefficients for a boundary given on non-exceptional vertices.
    pub fn solve(&self, g: &DualGraph, boundary: &PullbackAssignment) -> PullbackAssignment {
        let loads: Vec<Rational> = self
            .ids
            .iter()
            .map(|&id| {
                g.neighbors(id)
                    .filter_map(|w| boundary.get(w))
                    .fold(Rational::zero(), |acc, c| acc + c)
            })
            .collect();
        PullbackAssignment(self.ids.iter().copied().zip(self.solve_loads(&loads)).collect())
    }
}

/// Intersection matrix on an arbitrary subset of compact vertices (the
/// exceptional part is usually a forest, not a tree).
pub(crate) fn induced_matrix(g: &DualGraph, ids: &[VertexId]) -> crate::graphcore::IntersectionMatrix {
    let entries = ids
        .iter()
        .map(|&a| {
            ids.iter()
                .map(|&b| {
                    if a == b {
                        g.vertex(a).unwrap().self_int
                    } else {
                        i64::from(g.has_edge(a, b))
                    }
                })
                .collect()
        })
        .collect();
    crate::graphcore::IntersectionMatrix { ids: ids.to_vec(), entries }
}

/// Coefficients of the exceptional curves in the log pull-back of `K + B`,
/// where `B` is given on bullet and incomplete vertices.
pub fn pair_pullback(g: &DualGraph, boundary: &PullbackAssignment) -> Result<PullbackAssignment> {
    for (id, _) in boundary.iter() {
        let v = g.vertex_checked(id)?;
        if v.role == Role::Exceptional {
            return Err(Error::InvalidGraph(format!("boundary given on exceptional vertex {id}")));
        }
    }
    Ok(PullbackSolver::new(g)?.solve(g, boundary))
}

/// Whether the exceptional curves all have coefficient `< 1` with no boundary.
pub fn is_log_terminal(g: &DualGraph) -> Result<bool> {
    let c = pair_pullback(g, &PullbackAssignment::new())?;
    Ok(c.0.values().all(|x| x < &Rational::one()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairStatus {
    Plt,
    LcNotPlt,
    NotLc,
}

impl PairStatus {
    pub fn of(coeffs: &PullbackAssignment) -> PairStatus {
        match coeffs.max() {
            Some(m) if m > &Rational::one() => PairStatus::NotLc,
            Some(m) if m.is_one() => PairStatus::LcNotPlt,
            _ => PairStatus::Plt,
        }
    }
}

/// Status of `K + Σ_{v ∈ reduced} v` judged on the exceptional curves.
pub fn pair_status(g: &DualGraph, reduced: &[VertexId]) -> Result<PairStatus> {
    let boundary = PullbackAssignment(reduced.iter().map(|&v| (v, Rational::one())).collect());
    pair_status_with(g, &boundary)
}

pub fn pair_status_with(g: &DualGraph, boundary: &PullbackAssignment) -> Result<PairStatus> {
    Ok(PairStatus::of(&pair_pullback(g, boundary)?))
}

/// One point of the different on a curve: the exceptional chain attached at
/// `attachment` contracts to a cyclic point of order `order`, contributing
/// `1 − 1/order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentPoint {
    pub attachment: VertexId,
    pub order: BigInt,
    pub coeff: Rational,
}

/// The different `Σ (1 − 1/mᵢ) Pᵢ` induced on `center` by the exceptional
/// chains attached to it.
pub fn different_at(g: &DualGraph, center: VertexId) -> Result<Vec<DifferentPoint>> {
    let c = g.vertex_checked(center)?;
    if !c.is_compact() {
        return Err(Error::InvalidGraph(format!("{center} is not compact")));
    }
    let rest: Vec<VertexId> = g.exceptional_ids().into_iter().filter(|&v| v != center).collect();
    let comps = g.compact_components(&rest);
    let mut out = Vec::new();
    for w in g.compact_neighbors(center) {
        if g.vertex(w).unwrap().role != Role::Exceptional {
            continue;
        }
        let comp = comps.iter().find(|c| c.contains(&w)).unwrap();
        let deg = |v: VertexId| g.compact_neighbors(v).filter(|x| comp.contains(x)).count();
        if comp.iter().any(|&v| deg(v) > 2) || (comp.len() > 1 && deg(w) != 1) {
            return Err(Error::BranchNotChain(w));
        }
        let mut weights = Vec::with_capacity(comp.len());
        let (mut prev, mut cur) = (None, Some(w));
        while let Some(v) = cur {
            weights.push(-g.vertex(v).unwrap().self_int);
            let next = g.compact_neighbors(v).find(|x| comp.contains(x) && Some(*x) != prev);
            prev = Some(v);
            cur = next;
        }
        let chain = crate::cyclic::Chain::new(weights).map_err(|_| Error::BranchNotChain(w))?;
        let order = chain.order();
        let coeff = Rational::one() - Rational::new(BigInt::one(), order.clone());
        out.push(DifferentPoint { attachment: w, order, coeff });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{int, rat, GraphBuilder};

    #[test]
    fn canonical_mult_examples() {
        let v = |s| Vertex::new(VertexId(0), s, Role::Exceptional);
        assert_eq!(canonical_mult(&v(-2)), 0);
        assert_eq!(canonical_mult(&v(-4)), 2);
        assert_eq!(canonical_mult(&v(-1)), -1);
    }

    #[test]
    fn single_vertices() {
        let mut b = GraphBuilder::new();
        let x = b.exc(-2);
        let g = b.build().unwrap();
        assert_eq!(pair_pullback(&g, &PullbackAssignment::new()).unwrap().get(x), Some(&int(0)));

        let mut b = GraphBuilder::new();
        let x = b.exc(-4);
        let g = b.build().unwrap();
        assert_eq!(pair_pullback(&g, &PullbackAssignment::new()).unwrap().get(x), Some(&rat(1, 2)));
        assert!(is_log_terminal(&g).unwrap());
    }

    #[test]
    fn chain_3222_with_reduced_bullet() {
        let mut b = GraphBuilder::new();
        let ch = b.chain(&[3, 2, 2, 2]);
        let c = b.bullet(-1);
        b.edge(ch[1], c);
        let g = b.build().unwrap();
        let e = pair_pullback(&g, &PullbackAssignment::new().with(c, int(1))).unwrap();
        let got: Vec<_> = ch.iter().map(|&v| e.get(v).unwrap().clone()).collect();
        assert_eq!(got, vec![rat(7, 9), rat(4, 3), rat(8, 9), rat(4, 9)]);
        assert_eq!(pair_status(&g, &[c]).unwrap(), PairStatus::NotLc);
        assert!(is_log_terminal(&g).unwrap());
    }

    #[test]
    fn two_chain_graph_is_plt() {
        let mut b = GraphBuilder::new();
        let l = b.chain(&[3, 2, 3]);
        let c = b.bullet(-1);
        let r = b.chain(&[2, 4, 2]);
        b.edge(l[2], c).edge(c, r[0]);
        let g = b.build().unwrap();
        assert_eq!(pair_status(&g, &[c]).unwrap(), PairStatus::Plt);
    }

    #[test]
    fn a3_with_central_bullet_is_lc_not_plt() {
        let mut b = GraphBuilder::new();
        let ch = b.chain(&[2, 2, 2]);
        let c = b.bullet(-1);
        b.edge(ch[1], c);
        let g = b.build().unwrap();
        assert_eq!(pair_status(&g, &[c]).unwrap(), PairStatus::LcNotPlt);
    }

    #[test]
    fn boundary_on_exceptional_is_rejected() {
        let mut b = GraphBuilder::new();
        let x = b.exc(-2);
        let g = b.build().unwrap();
        assert!(pair_pullback(&g, &PullbackAssignment::new().with(x, int(1))).is_err());
    }

    #[test]
    fn singular_exceptional_part() {
        let mut b = GraphBuilder::new();
        b.chain(&[1, 1]);
        let g = b.build().unwrap();
        assert_eq!(is_log_terminal(&g), Err(Error::SingularSystem));
    }

    #[test]
    fn incomplete_counts_once_per_edge() {
        let mut b = GraphBuilder::new();
        let ch = b.chain(&[2, 2]);
        let i = b.incomplete(int(1));
        b.edge(i, ch[0]).edge(i, ch[1]);
        let g = b.build().unwrap();
        let e = pair_pullback(&g, &PullbackAssignment::new().with(i, int(1))).unwrap();
        // -2x + y + 1 = 0, x - 2y + 1 = 0
        assert_eq!(e.get(ch[0]), Some(&int(1)));
        assert_eq!(e.get(ch[1]), Some(&int(1)));
    }

    #[test]
    fn different_examples() {
        let mut b = GraphBuilder::new();
        let c = b.bullet(-1);
        let x = b.exc(-2);
        b.edge(c, x);
        let g = b.build().unwrap();
        let d = different_at(&g, c).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].attachment, d[0].coeff.clone()), (x, rat(1, 2)));

        let mut b = GraphBuilder::new();
        let c = b.bullet(-1);
        let x = b.exc(-2);
        let ch = b.chain(&[3, 2, 3]);
        b.edge(c, x).edge(c, ch[0]);
        let g = b.build().unwrap();
        let coeffs: Vec<_> = different_at(&g, c).unwrap().into_iter().map(|p| p.coeff).collect();
        assert_eq!(coeffs, vec![rat(1, 2), rat(11, 12)]);

        let mut b = GraphBuilder::new();
        let c = b.bullet(0);
        let g = b.build().unwrap();
        assert!(different_at(&g, c).unwrap().is_empty());
    }

    #[test]
    fn different_rejects_non_chain_branch() {
        let mut b = GraphBuilder::new();
        let c = b.bullet(-1);
        let hub = b.exc(-2);
        let l1 = b.exc(-2);
        let l2 = b.exc(-2);
        b.edge(c, hub).edge(hub, l1).edge(hub, l2);
        let g = b.build().unwrap();
        assert_eq!(different_at(&g, c), Err(Error::BranchNotChain(hub)));
    }
}
