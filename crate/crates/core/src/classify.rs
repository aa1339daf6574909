//! The five classes of log terminal contractions onto a curve.
//!
//! Classification is semantic: the pair `(S, C)` is plt (A*), lc but not plt
//! (D*), or not lc, and then the least complement index of `K` alone separates
//! A** (1), D** (2) and E6* (3). The graph shape is then matched against the
//! template of its class and [`verify_shape`] checks the numeric constraints
//! that each template imposes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::complement::min_complement_index;
use crate::fiber::FiberGraph;
use crate::graphcore::{determinant, DualGraph, Rational, VertexId};
use crate::logdisc::{induced_matrix, pair_pullback, PairStatus, PullbackAssignment};
use crate::{Chain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassTag {
    AStar,
    DStar,
    AStarStar,
    DStarStar,
    EStar6,
}

impl ClassTag {
    pub const ALL: [ClassTag; 5] =
        [ClassTag::AStar, ClassTag::DStar, ClassTag::AStarStar, ClassTag::DStarStar, ClassTag::EStar6];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::AStar => "A*",
            ClassTag::DStar => "D*",
            ClassTag::AStarStar => "A**",
            ClassTag::DStarStar => "D**",
            ClassTag::EStar6 => "E6*",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    /// Accepts `A*`-style names and `AStar`-style identifiers, any case.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase();
        ClassTag::ALL
            .into_iter()
            .find(|t| t.name().to_ascii_lowercase() == key || format!("{t:?}").to_ascii_lowercase() == key)
            .ok_or_else(|| Error::InvalidSearch(format!("unknown class tag {s:?}")))
    }
}

/// Shape data read off the template of each class. Weights are the positive
/// numbers `b` with self-intersection `-b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeParams {
    /// Two chains, each read from its far end towards the bullet.
    AStar { left: Chain, right: Chain },
    /// `forks` hang off the curve of weight `b`; `chain` is `b_1..b_s` from
    /// that curve to the bullet; `a` is the other side `a_1..a_r`, `a_1` the far
    /// end.
    DStar { b: i64, forks: [Vec<i64>; 2], chain: Vec<i64>, a: Vec<i64> },
    /// Chain `a_1..a_r` with the bullet on `a_i` (1-based); `theta` from the
    /// bullet outwards.
    AStarStar { a: Vec<i64>, i: usize, theta: Vec<i64> },
    /// Chain `a_1..a_r` ending at the branch curve of weight `b`, `a_1` next to
    /// it; bullet on `a_i`.
    DStarStar { a: Vec<i64>, b: i64, i: usize, forks: [Vec<i64>; 2], theta: Vec<i64> },
    /// Branch curve of weight `b`; `bullet_arm` read from the branch outwards
    /// with the bullet on its `attach`-th curve; `theta` from the bullet
    /// outwards.
    EStar6 { b: i64, bullet_arm: Vec<i64>, attach: usize, arms: [Vec<i64>; 2], theta: Vec<i64> },
}

fn list(v: &[i64]) -> String {
    Chain::new(v.to_vec()).map(|c| c.to_string()).unwrap_or_else(|_| format!("{v:?}"))
}

impl fmt::Display for ShapeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeParams::AStar { left, right } => write!(f, "left {left} right {right}"),
            ShapeParams::DStar { b, forks, chain, a } => write!(
                f,
                "b={b} forks {} {} s={} chain {} r={} a {}",
                list(&forks[0]),
                list(&forks[1]),
                chain.len(),
                list(chain),
                a.len(),
                list(a)
            ),
            ShapeParams::AStarStar { a, i, theta } => {
                write!(f, "r={} a {} i={i} theta {}", a.len(), list(a), list(theta))
            }
            ShapeParams::DStarStar { a, b, i, forks, theta } => write!(
                f,
                "r={} a {} b={b} i={i} forks {} {} theta {}",
                a.len(),
                list(a),
                list(&forks[0]),
                list(&forks[1]),
                list(theta)
            ),
            ShapeParams::EStar6 { b, bullet_arm, attach, arms, theta } => write!(
                f,
                "b={b} bullet arm {} at {attach} arms {} {} theta {}",
                list(bullet_arm),
                list(&arms[0]),
                list(&arms[1]),
                list(theta)
            ),
        }
    }
}

/// The class of a fiber graph with the data used to decide it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionClass {
    pub tag: ClassTag,
    pub status: PairStatus,
    /// `None` when the graph does not fit the template of `tag`.
    pub params: Option<ShapeParams>,
    /// Exceptional curves over the worst point `P`.
    pub p_component: Vec<VertexId>,
    /// Exceptional curves over the other singular point, if any.
    pub theta_component: Vec<VertexId>,
    /// Coefficients of `K + C` on the exceptional curves.
    pub coefficients: PullbackAssignment,
}

/// Classifies a fiber graph.
pub fn classify(g: &FiberGraph) -> Result<ContractionClass> {
    let graph = g.graph();
    let bullet = g.bullet();
    let reduced = PullbackAssignment::new().with(bullet, Rational::from_integer(1.into()));
    let coefficients = pair_pullback(graph, &reduced)?;
    let status = PairStatus::of(&coefficients);
    let tag = match status {
        PairStatus::Plt => ClassTag::AStar,
        PairStatus::LcNotPlt => ClassTag::DStar,
        PairStatus::NotLc => match min_complement_index(g, false)? {
            Some(1) => ClassTag::AStarStar,
            Some(2) => ClassTag::DStarStar,
            Some(3) => ClassTag::EStar6,
            other => {
                return Err(Error::Unclassifiable(match other {
                    Some(n) => format!("K is {n}-complementary but not 1-, 2- or 3-complementary"),
                    None => "K has no complement of index 1, 2, 3, 4 or 6".into(),
                }))
            }
        },
    };

    let mut comps = graph.exceptional_components();
    let worst = |c: &Vec<VertexId>| c.iter().map(|&v| coefficients.get(v).unwrap().clone()).max().unwrap();
    let order = |c: &Vec<VertexId>| determinant(&induced_matrix(graph, c)).magnitude().clone();
    comps.sort_by(|x, y| worst(y).cmp(&worst(x)).then_with(|| order(y).cmp(&order(x))).then_with(|| x.cmp(y)));
    let p_component = comps.first().cloned().unwrap_or_default();
    let theta_component: Vec<VertexId> = comps.iter().skip(1).flatten().copied().collect();
    let params = if comps.len() > 2 {
        None
    } else {
        match_template(tag, graph, bullet, &p_component, &theta_component)
    };
    Ok(ContractionClass { tag, status, params, p_component, theta_component, coefficients })
}

fn weight(g: &DualGraph, v: VertexId) -> i64 {
    -g.vertex(v).unwrap().self_int
}

fn weights(g: &DualGraph, path: &[VertexId]) -> Vec<i64> {
    path.iter().map(|&v| weight(g, v)).collect()
}

/// The path starting at `start` inside `set`, entered from `from`; `None` if
/// the part of `set` reached this way is not a path with `start` at one end.
fn walk(g: &DualGraph, set: &BTreeSet<VertexId>, from: Option<VertexId>, start: VertexId) -> Option<Vec<VertexId>> {
    let mut path = vec![start];
    let (mut prev, mut cur) = (from, start);
    loop {
        let next: Vec<VertexId> = g.compact_neighbors(cur).filter(|w| set.contains(w) && Some(*w) != prev).collect();
        match next.as_slice() {
            [] => return Some(path),
            [w] => {
                path.push(*w);
                prev = Some(cur);
                cur = *w;
            }
            _ => return None,
        }
    }
}

/// A tree with a single branch curve of degree three: its center and the
/// three arms read outwards.
fn star(g: &DualGraph, set: &BTreeSet<VertexId>) -> Option<(VertexId, Vec<Vec<VertexId>>)> {
    let deg = |v: VertexId| g.compact_neighbors(v).filter(|w| set.contains(w)).count();
    let branch: Vec<VertexId> = set.iter().copied().filter(|&v| deg(v) > 2).collect();
    let [center] = branch.as_slice() else { return None };
    if deg(*center) != 3 {
        return None;
    }
    let arms = g
        .compact_neighbors(*center)
        .filter(|w| set.contains(w))
        .map(|w| walk(g, set, Some(*center), w))
        .collect::<Option<Vec<_>>>()?;
    Some((*center, arms))
}

fn sorted_pair(mut x: Vec<i64>, mut y: Vec<i64>) -> [Vec<i64>; 2] {
    if y < x {
        std::mem::swap(&mut x, &mut y);
    }
    [x, y]
}

/// The curve of `set` meeting the bullet.
fn attachment(g: &DualGraph, bullet: VertexId, set: &BTreeSet<VertexId>) -> Option<VertexId> {
    let at: Vec<VertexId> = g.compact_neighbors(bullet).filter(|w| set.contains(w)).collect();
    match at.as_slice() {
        [x] => Some(*x),
        _ => None,
    }
}

/// Weights of a chain hanging off the bullet by an end, read outwards.
fn bullet_chain(g: &DualGraph, bullet: VertexId, comp: &[VertexId]) -> Option<Vec<i64>> {
    if comp.is_empty() {
        return Some(Vec::new());
    }
    let set: BTreeSet<VertexId> = comp.iter().copied().collect();
    let path = walk(g, &set, Some(bullet), attachment(g, bullet, &set)?)?;
    (path.len() == comp.len()).then(|| weights(g, &path))
}

fn match_template(
    tag: ClassTag,
    g: &DualGraph,
    bullet: VertexId,
    p: &[VertexId],
    theta: &[VertexId],
) -> Option<ShapeParams> {
    let pset: BTreeSet<VertexId> = p.iter().copied().collect();
    let theta_w = bullet_chain(g, bullet, theta)?;
    match tag {
        ClassTag::AStar => {
            let mut sides = [bullet_chain(g, bullet, p)?, theta_w];
            for s in &mut sides {
                s.reverse();
            }
            sides.sort();
            let [left, right] = sides;
            Some(ShapeParams::AStar { left: Chain::new(left).ok()?, right: Chain::new(right).ok()? })
        }
        ClassTag::DStar => {
            let x = attachment(g, bullet, &pset)?;
            // From the bullet side walk along the chain until the branch curve.
            let mut chain = Vec::new();
            let (mut prev, mut cur) = (Some(bullet), x);
            loop {
                let kids: Vec<VertexId> =
                    g.compact_neighbors(cur).filter(|w| pset.contains(w) && Some(*w) != prev).collect();
                match kids.as_slice() {
                    [w] => {
                        chain.push(cur);
                        prev = Some(cur);
                        cur = *w;
                    }
                    [u, v] => {
                        let fu = walk(g, &pset, Some(cur), *u)?;
                        let fv = walk(g, &pset, Some(cur), *v)?;
                        if fu.len() + fv.len() + chain.len() + 1 != p.len() {
                            return None;
                        }
                        chain.reverse();
                        let mut a = theta_w;
                        a.reverse();
                        return Some(ShapeParams::DStar {
                            b: weight(g, cur),
                            forks: sorted_pair(weights(g, &fu), weights(g, &fv)),
                            chain: weights(g, &chain),
                            a,
                        });
                    }
                    _ => return None,
                }
            }
        }
        ClassTag::AStarStar => {
            let x = attachment(g, bullet, &pset)?;
            let ends: Vec<VertexId> =
                p.iter().copied().filter(|&v| g.compact_neighbors(v).filter(|w| pset.contains(w)).count() <= 1).collect();
            let path = walk(g, &pset, None, *ends.first()?)?;
            if path.len() != p.len() {
                return None;
            }
            let a = weights(g, &path);
            let i = path.iter().position(|&v| v == x)? + 1;
            let rev: Vec<i64> = a.iter().rev().copied().collect();
            let (a, i) = std::cmp::min((a.clone(), i), (rev, a.len() + 1 - i));
            Some(ShapeParams::AStarStar { a, i, theta: theta_w })
        }
        ClassTag::DStarStar => {
            let x = attachment(g, bullet, &pset)?;
            let (center, arms) = star(g, &pset)?;
            let k = arms.iter().position(|arm| arm.contains(&x))?;
            let forks: Vec<Vec<i64>> =
                arms.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, arm)| weights(g, arm)).collect();
            let [f0, f1] = <[Vec<i64>; 2]>::try_from(forks).ok()?;
            let i = arms[k].iter().position(|&v| v == x)? + 1;
            Some(ShapeParams::DStarStar {
                a: weights(g, &arms[k]),
                b: weight(g, center),
                i,
                forks: sorted_pair(f0, f1),
                theta: theta_w,
            })
        }
        ClassTag::EStar6 => {
            let x = attachment(g, bullet, &pset)?;
            let (center, arms) = star(g, &pset)?;
            let k = arms.iter().position(|arm| arm.contains(&x))?;
            let rest: Vec<Vec<i64>> =
                arms.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, arm)| weights(g, arm)).collect();
            let [r0, r1] = <[Vec<i64>; 2]>::try_from(rest).ok()?;
            Some(ShapeParams::EStar6 {
                b: weight(g, center),
                bullet_arm: weights(g, &arms[k]),
                attach: arms[k].iter().position(|&v| v == x)? + 1,
                arms: sorted_pair(r0, r1),
                theta: theta_w,
            })
        }
    }
}

/// One constraint of a class template and whether the graph meets it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

fn check(name: &'static str, holds: bool, detail: impl Into<String>) -> ShapeCheck {
    ShapeCheck { name, holds, detail: detail.into() }
}

fn all_twos(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 2)
}

/// Template constraints of the class `c` checked on `g`.
pub fn verify_shape(g: &FiberGraph, c: &ContractionClass) -> Vec<ShapeCheck> {
    let comps = g.singular_point_count();
    let mut out = vec![
        check("template", c.params.is_some(), format!("graph fits the {} template", c.tag)),
        check("at most two singular points", comps <= 2, format!("{comps} exceptional components")),
    ];
    let Some(params) = &c.params else { return out };
    match params {
        ShapeParams::AStar { left, right } => {
            let (l, r) = (left.hj_contract(), right.hj_contract());
            let dual = l.n() == r.n() && (l.is_smooth() || l.dual() == r);
            out.push(check("dual chains", dual, format!("{l} and {r}")));
        }
        ShapeParams::DStar { forks, .. } => {
            out.push(check("(-2)-fork", forks.iter().all(|f| f == &[2]), format!("forks {} {}", list(&forks[0]), list(&forks[1]))));
        }
        ShapeParams::AStarStar { a, i, theta } => {
            let (r, i) = (a.len(), *i);
            out.push(check("r >= 4", r >= 4, format!("r = {r}")));
            out.push(check("i != 1, r", i != 1 && i != r, format!("i = {i}")));
            let left: i64 = a[..i - 1].iter().sum::<i64>() - (i as i64 - 1);
            let right: i64 = a[i..].iter().sum::<i64>() - (r - i) as i64;
            out.push(check("sum identity", left == right, format!("{left} = {right}")));
            let target = theta.len() as i64 + 2;
            out.push(check("a_i = theta count + 2", a[i - 1] == target, format!("a_i = {}, {} theta curves", a[i - 1], theta.len())));
            out.push(check("theta curves are (-2)", all_twos(theta), list(theta)));
        }
        ShapeParams::DStarStar { a, i, forks, theta, .. } => {
            out.push(check("(-2)-fork", forks.iter().all(|f| f == &[2]), format!("forks {} {}", list(&forks[0]), list(&forks[1]))));
            out.push(check("r >= 2", a.len() >= 2, format!("r = {}", a.len())));
            out.push(check("i != r", *i != a.len(), format!("i = {i}")));
            out.push(check("theta curves are (-2)", all_twos(theta), list(theta)));
        }
        ShapeParams::EStar6 { b, bullet_arm, attach, arms, theta } => {
            let ok_arms = arms[0] == [2, 2] && arms[1] == [3];
            out.push(check("arms [2,2] and [3]", ok_arms, format!("{} {}", list(&arms[0]), list(&arms[1]))));
            let ok_bullet = bullet_arm == &[2] && *attach == 1;
            out.push(check("bullet next to the branch", ok_bullet, format!("{} at {attach}", list(bullet_arm))));
            let mut want = Vec::new();
            if *b > 2 {
                want.push(3);
                want.extend(std::iter::repeat_n(2, *b as usize - 3));
            }
            out.push(check("theta = [3,2,...,2] of length b-2", theta == &want, format!("b = {b}, theta {}", list(theta))));
        }
    }
    out
}

/// `(reduced, n)`: the class promises an `n`-complement of `K + C` when
/// `reduced`, of `K` otherwise.
pub fn expected_complement_index(c: &ContractionClass) -> (bool, u32) {
    expected_for(c.tag)
}

pub fn expected_for(tag: ClassTag) -> (bool, u32) {
    match tag {
        ClassTag::AStar => (true, 1),
        ClassTag::DStar => (true, 2),
        ClassTag::AStarStar => (false, 1),
        ClassTag::DStarStar => (false, 2),
        ClassTag::EStar6 => (false, 3),
    }
}

/// D* shapes on which `K` alone is 1-complementary: the point `P` is Du Val,
/// or `s = 0`, `a_1 = … = a_r = 2` and `b = r + 2`.
pub fn dstar_k_one_complementary(params: &ShapeParams) -> Option<bool> {
    let ShapeParams::DStar { b, forks, chain, a } = params else { return None };
    let du_val = *b == 2 && all_twos(chain) && forks.iter().all(|f| all_twos(f));
    let tail = chain.is_empty() && all_twos(a) && *b == a.len() as i64 + 2;
    Some(du_val || tail)
}
