use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{DualGraph, Rational, VertexId};
use crate::{Error, Result};

/// Intersection form on the compact curves of a dual graph.
///
/// Rows and columns follow `ids`, which is sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub ids: Vec<VertexId>,
    pub entries: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    /// A bare symmetric matrix, indexed by `VertexId(0..n)`.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let ids = (0..rows.len() as u32).map(VertexId).collect();
        IntersectionMatrix { ids, entries: rows }
    }

    pub fn dim(&self) -> usize {
        self.ids.len()
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| self.entries[i].len() == n && (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Principal submatrix on the given row indices.
    pub fn principal(&self, rows: &[usize]) -> IntersectionMatrix {
        IntersectionMatrix {
            ids: rows.iter().map(|&i| self.ids[i]).collect(),
            entries: rows.iter().map(|&i| rows.iter().map(|&j| self.entries[i][j]).collect()).collect(),
        }
    }

    fn to_rational(&self) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
            .collect()
    }

    /// `M · x` in exact arithmetic.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(&a, _)| a != 0)
                    .fold(Rational::zero(), |acc, (&a, xi)| acc + xi * BigInt::from(a))
            })
            .collect()
    }
}

/// Matrix over the compact vertices of `g`: self-intersections on the
/// diagonal, 1 for every edge.
pub fn intersection_matrix(g: &DualGraph) -> IntersectionMatrix {
    let ids = g.compact_ids();
    let n = ids.len();
    let mut entries = vec![vec![0i64; n]; n];
    for (i, &id) in ids.iter().enumerate() {
        entries[i][i] = g.vertex(id).unwrap().self_int;
        for w in g.compact_neighbors(id) {
            let j = ids.binary_search(&w).unwrap();
            entries[i][j] = 1;
        }
    }
    IntersectionMatrix { ids, entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    NegativeDefinite,
    NegativeSemidefinite { corank: usize },
    Indefinite,
}

/// Classifies a symmetric integer matrix by symmetric Gaussian elimination.
///
/// Works on `-M`: a positive pivot is eliminated by congruence, a negative
/// diagonal entry or a zero diagonal entry with a nonzero off-diagonal entry
/// in its row proves indefiniteness.
pub fn definiteness(m: &IntersectionMatrix) -> Definiteness {
    let mut a: Vec<Vec<Rational>> = m.to_rational().into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect();
    let mut active: Vec<usize> = (0..m.dim()).collect();
    loop {
        if active.is_empty() {
            return Definiteness::NegativeDefinite;
        }
        if active.iter().any(|&i| a[i][i].is_negative()) {
            return Definiteness::Indefinite;
        }
        let Some(pos) = active.iter().position(|&i| a[i][i].is_positive()) else {
            let all_zero = active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
            return if all_zero {
                Definiteness::NegativeSemidefinite { corank: active.len() }
            } else {
                Definiteness::Indefinite
            };
        };
        let p = active.remove(pos);
        let pivot = a[p][p].clone();
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &pivot;
            for &j in &active {
                if !a[p][j].is_zero() {
                    let d = &f * &a[p][j];
                    a[i][j] -= d;
                }
            }
        }
    }
}

/// Row-reduces `[M | rhs₁ | rhs₂ | …]` and returns one solution per
/// right-hand side. Requires `M` invertible.
pub fn solve_many(m: &IntersectionMatrix, rhs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = m.dim();
    let k = rhs.len();
    let mut a = m.to_rational();
    for (i, row) in a.iter_mut().enumerate() {
        for col in rhs {
            assert_eq!(col.len(), n, "right-hand side has wrong length");
            row.push(col[i].clone());
        }
    }
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::SingularSystem)?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut().skip(c) {
            *x *= &inv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in c..n + k {
                if !a[c][j].is_zero() {
                    let d = &f * &a[c][j];
                    a[r][j] -= d;
                }
            }
        }
    }
    Ok((0..k).map(|j| (0..n).map(|i| a[i][n + j].clone()).collect()).collect())
}

/// The unique `x` with `M·x = rhs`.
pub fn solve_crepant(m: &IntersectionMatrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    Ok(solve_many(m, &[rhs.to_vec()])?.pop().unwrap())
}

/// A basis of the rational null space, one vector per free column of the
/// reduced row echelon form.
pub fn kernel_basis(m: &IntersectionMatrix) -> Vec<Vec<Rational>> {
    let n = m.dim();
    let mut a = m.to_rational();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][c].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != row && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..n {
                    let d = &f * &a[row][j];
                    a[r][j] -= d;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntersectionMatrix) -> BigInt {
    let n = m.dim();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.entries.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{int, rat, GraphBuilder};

    fn m(rows: &[&[i64]]) -> IntersectionMatrix {
        IntersectionMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn intersection_matrix_examples() {
        let mut b = GraphBuilder::new();
        b.exc(-2);
        assert_eq!(intersection_matrix(&b.build().unwrap()).entries, vec![vec![-2]]);

        let mut b = GraphBuilder::new();
        b.chain(&[3, 2]);
        assert_eq!(intersection_matrix(&b.build().unwrap()).entries, vec![vec![-3, 1], vec![1, -2]]);

        let mut b = GraphBuilder::new();
        let l = b.exc(-2);
        let c = b.bullet(-1);
        let r = b.exc(-2);
        b.edge(l, c).edge(c, r);
        let im = intersection_matrix(&b.build().unwrap());
        assert_eq!(im.entries, vec![vec![-2, 1, 0], vec![1, -1, 1], vec![0, 1, -2]]);
        assert!(im.is_symmetric());
    }

    #[test]
    fn incompletes_stay_out_of_the_matrix() {
        let mut b = GraphBuilder::new();
        let x = b.exc(-3);
        let i = b.incomplete(rat(1, 2));
        b.edge(x, i);
        let im = intersection_matrix(&b.build().unwrap());
        assert_eq!(im.entries, vec![vec![-3]]);
    }

    #[test]
    fn definiteness_examples() {
        assert_eq!(definiteness(&m(&[&[-2]])), Definiteness::NegativeDefinite);
        assert_eq!(definiteness(&m(&[&[0]])), Definiteness::NegativeSemidefinite { corank: 1 });
        assert_eq!(
            definiteness(&m(&[&[-2, 1, 0], &[1, -1, 1], &[0, 1, -2]])),
            Definiteness::NegativeSemidefinite { corank: 1 }
        );
        assert_eq!(definiteness(&m(&[&[-1, 1], &[1, -1]])), Definiteness::NegativeSemidefinite { corank: 1 });
        assert_eq!(definiteness(&m(&[&[1]])), Definiteness::Indefinite);
        assert_eq!(definiteness(&m(&[&[0, 1], &[1, 0]])), Definiteness::Indefinite);
        assert_eq!(definiteness(&m(&[&[-1, 1], &[1, -2]])), Definiteness::NegativeDefinite);
        assert_eq!(definiteness(&m(&[&[-1, 2], &[2, -1]])), Definiteness::Indefinite);
        assert_eq!(definiteness(&m(&[&[0, 0], &[0, 0]])), Definiteness::NegativeSemidefinite { corank: 2 });
        assert_eq!(definiteness(&m(&[])), Definiteness::NegativeDefinite);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_crepant(&m(&[&[-2]]), &[int(0)]).unwrap(), vec![int(0)]);
        assert_eq!(solve_crepant(&m(&[&[-4]]), &[int(2)]).unwrap(), vec![rat(-1, 2)]);
        assert_eq!(solve_crepant(&m(&[&[-2, 1], &[1, -2]]), &[int(0), int(0)]).unwrap(), vec![int(0), int(0)]);
        assert_eq!(solve_crepant(&m(&[&[-1, 1], &[1, -1]]), &[int(0), int(1)]), Err(Error::SingularSystem));
    }

    #[test]
    fn kernel_of_fiber_chain() {
        let k = kernel_basis(&m(&[&[-2, 1, 0], &[1, -1, 1], &[0, 1, -2]]));
        assert_eq!(k, vec![vec![int(1), int(2), int(1)]]);
        assert!(kernel_basis(&m(&[&[-2]])).is_empty());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&m(&[&[-2, 1], &[1, -2]])), BigInt::from(3));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[-3, 1, 0], &[1, -2, 1], &[0, 1, -3]])), BigInt::from(-12));
        assert_eq!(determinant(&m(&[&[-2, 1, 0], &[1, -1, 1], &[0, 1, -2]])), BigInt::zero());
    }
}
