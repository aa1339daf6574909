//! Complements of `K` and `K + C` on fiber graphs.
//!
//! A boundary on the minimal resolution consists of a coefficient on the
//! bullet, coefficients on the exceptional curves and a list of incomplete
//! (horizontal) curves meeting compact curves at general points. It is an
//! `n`-complement when `K + B` is numerically trivial on every compact curve,
//! `nB` is integral and every coefficient is at most one. The horizontal curves
//! then have total degree two on the general fiber.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::fiber::{multiplicities, FiberGraph};
use crate::graphcore::{DualGraph, Rational, Role, Vertex, VertexId};
use crate::logdisc::{canonical_mult, PullbackAssignment, PullbackSolver};
use crate::{Error, Result};

/// Complement indices tried by [`min_complement_index`], in order.
pub const INDICES: [u32; 5] = [1, 2, 3, 4, 6];

/// A horizontal curve meeting the compact curves in `attachments`, with
/// boundary coefficient `coeff ∈ (0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncompleteCurve {
    pub attachments: Vec<VertexId>,
    pub coeff: Rational,
}

/// Boundary coefficients on compact curves plus horizontal curves. Compact
/// curves left out get `0` when they are bullets and their log crepant value
/// when they are exceptional.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundaryConfig {
    pub coefficients: BTreeMap<VertexId, Rational>,
    pub incompletes: Vec<IncompleteCurve>,
}

impl BoundaryConfig {
    /// Splits a graph with coefficients and incomplete vertices into its
    /// compact part and a boundary.
    pub fn from_graph(g: &DualGraph) -> Result<(DualGraph, BoundaryConfig)> {
        let mut config = BoundaryConfig::default();
        for v in g.vertices() {
            match (&v.role, &v.coeff) {
                (Role::Incomplete, Some(c)) => config
                    .incompletes
                    .push(IncompleteCurve { attachments: g.neighbors(v.id).collect(), coeff: c.clone() }),
                (Role::Incomplete, None) => {
                    return Err(Error::InvalidGraph(format!("incomplete curve {} has no coefficient", v.id)))
                }
                (_, Some(c)) => {
                    config.coefficients.insert(v.id, c.clone());
                }
                (_, None) => {}
            }
        }
        Ok((g.compact_part(), config))
    }

    /// The compact graph with this boundary drawn in: coefficients on compact
    /// vertices (from `exceptional` where given) and one incomplete vertex per
    /// horizontal curve.
    pub fn to_graph(&self, g: &DualGraph, exceptional: Option<&PullbackAssignment>) -> DualGraph {
        let mut coeffs = self.coefficients.clone();
        if let Some(e) = exceptional {
            for (id, c) in e.iter() {
                coeffs.entry(id).or_insert_with(|| c.clone());
            }
        }
        let mut out = g.with_coefficients(&coeffs);
        for inc in &self.incompletes {
            let id = out.next_id();
            let mut v = Vertex::new(id, 0, Role::Incomplete);
            v.coeff = Some(inc.coeff.clone());
            out.insert_vertex(v);
            for &a in &inc.attachments {
                out.add_edge(id, a);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementCertificate {
    pub n: u32,
    pub boundary: BoundaryConfig,
    pub exceptional_coeffs: PullbackAssignment,
}

/// A curve named in a failure: a compact vertex or the `i`-th horizontal curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curve {
    Compact(VertexId),
    Incomplete(usize),
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Compact(v) => write!(f, "{v}"),
            Curve::Incomplete(i) => write!(f, "incomplete #{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplementFailure {
    /// `(K + B)·V ≠ 0` for a compact curve `V`.
    Crepancy { vertex: VertexId, defect: Rational },
    Integrality { curve: Curve, coeff: Rational },
    NotLogCanonical { curve: Curve, coeff: Rational },
    /// Degree of the horizontal part on the general fiber is not 2.
    HorizontalDegree { degree: Rational },
    Invalid(Error),
}

impl fmt::Display for ComplementFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplementFailure::Crepancy { vertex, defect } => write!(f, "(K+B).{vertex} = {defect}, not 0"),
            ComplementFailure::Integrality { curve, coeff } => write!(f, "coefficient {coeff} of {curve} is not in (1/n)Z"),
            ComplementFailure::NotLogCanonical { curve, coeff } => write!(f, "coefficient {coeff} of {curve} exceeds 1"),
            ComplementFailure::HorizontalDegree { degree } => write!(f, "horizontal degree is {degree}, not 2"),
            ComplementFailure::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ComplementFailure {}

/// Checks that `b` is an `n`-complement on `g`.
///
/// Conditions are checked in the order: horizontal degree, crepancy at every
/// compact curve, integrality, log canonicity. Exceptional coefficients
/// missing from `b` are solved from crepancy first.
pub fn verify_complement(
    g: &FiberGraph,
    b: &BoundaryConfig,
    n: u32,
) -> std::result::Result<ComplementCertificate, ComplementFailure> {
    let graph = g.graph();
    let invalid = |msg: String| ComplementFailure::Invalid(Error::InvalidSearch(msg));
    if n == 0 {
        return Err(invalid("index must be at least 1".into()));
    }
    for (&id, c) in &b.coefficients {
        let v = graph.vertex_checked(id).map_err(ComplementFailure::Invalid)?;
        if v.role == Role::Bullet && c.is_negative() {
            return Err(invalid(format!("negative boundary coefficient on {id}")));
        }
    }
    for (i, inc) in b.incompletes.iter().enumerate() {
        if inc.attachments.is_empty() {
            return Err(invalid(format!("incomplete #{i} meets no compact curve")));
        }
        for &a in &inc.attachments {
            graph.vertex_checked(a).map_err(ComplementFailure::Invalid)?;
        }
        if !inc.coeff.is_positive() {
            return Err(invalid(format!("incomplete #{i} has non-positive coefficient")));
        }
    }

    let mult = multiplicities(graph).map_err(ComplementFailure::Invalid)?;
    let degree = b.incompletes.iter().fold(Rational::zero(), |acc, inc| {
        let d: u64 = inc.attachments.iter().map(|&a| mult.get(a).unwrap()).sum();
        acc + &inc.coeff * Rational::from_integer(BigInt::from(d))
    });
    if degree != Rational::from_integer(BigInt::from(2)) {
        return Err(ComplementFailure::HorizontalDegree { degree });
    }

    // Solve the exceptional coefficients from the non-exceptional boundary.
    let solver = PullbackSolver::new(graph).map_err(ComplementFailure::Invalid)?;
    let mut loads: BTreeMap<VertexId, Rational> = BTreeMap::new();
    for inc in &b.incompletes {
        for &a in &inc.attachments {
            *loads.entry(a).or_insert_with(Rational::zero) += &inc.coeff;
        }
    }
    let coeff_of_bullets: BTreeMap<VertexId, Rational> = graph
        .compact_ids()
        .into_iter()
        .filter(|&id| graph.vertex(id).unwrap().role == Role::Bullet)
        .map(|id| (id, b.coefficients.get(&id).cloned().unwrap_or_else(Rational::zero)))
        .collect();
    let exc_loads: Vec<Rational> = solver
        .exceptional_ids()
        .iter()
        .map(|&id| {
            let from_bullets = graph
                .neighbors(id)
                .filter_map(|w| coeff_of_bullets.get(&w))
                .fold(Rational::zero(), |acc, c| acc + c);
            from_bullets + loads.get(&id).cloned().unwrap_or_else(Rational::zero)
        })
        .collect();
    let solved = PullbackAssignment(solver.exceptional_ids().iter().copied().zip(solver.solve_loads(&exc_loads)).collect());

    let mut coeff = coeff_of_bullets;
    for (id, c) in solved.iter() {
        coeff.insert(id, b.coefficients.get(&id).cloned().unwrap_or_else(|| c.clone()));
    }

    for v in graph.vertices() {
        let mut defect = Rational::from_integer(BigInt::from(canonical_mult(v)))
            + &coeff[&v.id] * Rational::from_integer(BigInt::from(v.self_int));
        for w in graph.compact_neighbors(v.id) {
            defect += &coeff[&w];
        }
        if let Some(l) = loads.get(&v.id) {
            defect += l;
        }
        if !defect.is_zero() {
            return Err(ComplementFailure::Crepancy { vertex: v.id, defect });
        }
    }

    let nr = Rational::from_integer(BigInt::from(n));
    let all: Vec<(Curve, &Rational)> = coeff
        .iter()
        .map(|(&id, c)| (Curve::Compact(id), c))
        .chain(b.incompletes.iter().enumerate().map(|(i, inc)| (Curve::Incomplete(i), &inc.coeff)))
        .collect();
    if let Some((curve, c)) = all.iter().find(|(_, c)| !(*c * &nr).is_integer()) {
        return Err(ComplementFailure::Integrality { curve: *curve, coeff: (*c).clone() });
    }
    if let Some((curve, c)) = all.iter().find(|(_, c)| **c > Rational::one()) {
        return Err(ComplementFailure::NotLogCanonical { curve: *curve, coeff: (*c).clone() });
    }

    let exceptional_coeffs = PullbackAssignment(solved.iter().map(|(id, _)| (id, coeff[&id].clone())).collect());
    let mut boundary = b.clone();
    for id in g.graph().bullet_ids() {
        boundary.coefficients.entry(id).or_insert_with(Rational::zero);
    }
    Ok(ComplementCertificate { n, boundary, exceptional_coeffs })
}

/// Integer form of the pull-back solver: every coefficient is `N / (n·D)`
/// for a common denominator `D`.
struct ScaledSolver {
    den: i128,
    base: Vec<i128>,
    unit: Vec<Vec<i128>>,
}

impl ScaledSolver {
    fn new(s: &PullbackSolver) -> Result<Self> {
        let den = s
            .base
            .iter()
            .chain(s.unit.iter().flatten())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scale = |x: &Rational| -> Result<i128> {
            (x.numer() * (&den / x.denom()))
                .to_i128()
                .ok_or_else(|| Error::InvalidSearch("coefficients too large".into()))
        };
        Ok(ScaledSolver {
            base: s.base.iter().map(scale).collect::<Result<_>>()?,
            unit: s.unit.iter().map(|col| col.iter().map(scale).collect::<Result<_>>()).collect::<Result<_>>()?,
            den: den.to_i128().ok_or_else(|| Error::InvalidSearch("denominator too large".into()))?,
        })
    }
}

struct Search<'a> {
    n: i128,
    den: i128,
    /// Compact vertices in id order with multiplicity and exceptional index.
    sites: Vec<(VertexId, u64, Option<usize>)>,
    unit: &'a [Vec<i128>],
    bullet_canon: i128,
    bullet_self: i128,
    bullet_nbrs: Vec<usize>,
    max_incompletes: usize,
}

impl Search<'_> {
    /// Depth-first over incomplete loads `k_v ≥ 0` (in units of `1/n`) with
    /// `Σ k_v d_v = budget`.
    fn go(&self, pos: usize, budget: u64, used: usize, acc: &mut Vec<i128>, k: &mut Vec<u64>, kb: i128) -> bool {
        if pos == self.sites.len() {
            return budget == 0 && self.accept(acc, k, kb);
        }
        let (_, d, exc) = self.sites[pos];
        let max_k = budget / d;
        let mut added = 0;
        for kv in 0..=max_k {
            let extra = (kv as usize).div_ceil(self.n as usize);
            if used + extra > self.max_incompletes {
                break;
            }
            if let (Some(j), true) = (exc, kv > 0) {
                for (a, u) in acc.iter_mut().zip(&self.unit[j]) {
                    *a += u;
                }
                added = kv as i128;
            }
            k.push(kv);
            if self.go(pos + 1, budget - kv * d, used + extra, acc, k, kb) {
                return true;
            }
            k.pop();
        }
        if let Some(j) = exc {
            for (a, u) in acc.iter_mut().zip(&self.unit[j]) {
                *a -= u * added;
            }
        }
        false
    }

    fn accept(&self, acc: &[i128], k: &[u64], kb: i128) -> bool {
        let nd = self.n * self.den;
        if acc.iter().any(|&x| x > nd || x % self.den != 0) {
            return false;
        }
        let k_bullet = self
            .sites
            .iter()
            .zip(k)
            .find(|((_, _, exc), _)| exc.is_none())
            .map_or(0, |(_, &kv)| kv as i128);
        let nbr_sum: i128 = self.bullet_nbrs.iter().map(|&j| acc[j]).sum();
        nd * self.bullet_canon + kb * self.den * self.bullet_self + nbr_sum + k_bullet * self.den == 0
    }
}

/// First `n`-complement found by brute force, in a fixed order: bullet
/// coefficient from `1` downwards (only `1` when `reduced_bullet`), then
/// incomplete loads vertex by vertex in id order, smallest first.
///
/// Horizontal curves meet one compact curve each, at a general point; their
/// total degree on the general fiber must be 2, which bounds the search.
pub fn search_complement(
    g: &FiberGraph,
    reduced_bullet: bool,
    n: u32,
    max_incompletes: usize,
) -> Result<Option<ComplementCertificate>> {
    if !INDICES.contains(&n) {
        return Err(Error::InvalidSearch(format!("index {n} is not one of 1, 2, 3, 4, 6")));
    }
    if max_incompletes > 2 * n as usize {
        return Err(Error::InvalidSearch(format!("at most {} incomplete curves at index {n}", 2 * n)));
    }
    let graph = g.graph();
    let bullet = g.bullet();
    let solver = PullbackSolver::new(graph)?;
    let scaled = ScaledSolver::new(&solver)?;
    let mult = g.multiplicities()?;
    let exc_index: BTreeMap<VertexId, usize> =
        solver.exceptional_ids().iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let sites = graph.compact_ids().into_iter().map(|id| (id, mult.get(id).unwrap(), exc_index.get(&id).copied())).collect();
    let bv = graph.vertex(bullet).unwrap();
    let search = Search {
        n: n as i128,
        den: scaled.den,
        sites,
        unit: &scaled.unit,
        bullet_canon: canonical_mult(bv) as i128,
        bullet_self: bv.self_int as i128,
        bullet_nbrs: graph.compact_neighbors(bullet).map(|w| exc_index[&w]).collect(),
        max_incompletes,
    };
    let kbs: Vec<u32> = if reduced_bullet { vec![n] } else { (0..=n).rev().collect() };
    for kb in kbs {
        let mut acc: Vec<i128> = scaled.base.iter().map(|x| x * n as i128).collect();
        for &j in &search.bullet_nbrs {
            for (a, u) in acc.iter_mut().zip(&scaled.unit[j]) {
                *a += u * kb as i128;
            }
        }
        let mut k = Vec::new();
        if !search.go(0, 2 * n as u64, 0, &mut acc, &mut k, kb as i128) {
            continue;
        }
        let mut config = BoundaryConfig::default();
        config.coefficients.insert(bullet, Rational::new(kb.into(), n.into()));
        for (&(id, _, _), &kv) in search.sites.iter().zip(&k) {
            let (full, rest) = kv.div_rem(&(n as u64));
            for _ in 0..full {
                config.incompletes.push(IncompleteCurve { attachments: vec![id], coeff: Rational::one() });
            }
            if rest > 0 {
                config.incompletes.push(IncompleteCurve { attachments: vec![id], coeff: Rational::new(rest.into(), n.into()) });
            }
        }
        return verify_complement(g, &config, n)
            .map(Some)
            .map_err(|f| Error::InvalidSearch(format!("search produced an invalid complement: {f}")));
    }
    Ok(None)
}

/// Least index in `1, 2, 3, 4, 6` admitting a complement, `None` if none does.
pub fn min_complement_index(g: &FiberGraph, reduced_bullet: bool) -> Result<Option<u32>> {
    Ok(min_complement(g, reduced_bullet)?.map(|c| c.n))
}

/// The certificate behind [`min_complement_index`].
pub fn min_complement(g: &FiberGraph, reduced_bullet: bool) -> Result<Option<ComplementCertificate>> {
    for n in INDICES {
        if let Some(c) = search_complement(g, reduced_bullet, n, 2 * n as usize)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}
