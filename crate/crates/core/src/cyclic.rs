//! Cyclic quotient singularities `1/n(1,q)` and their Hirzebruch-Jung chains.
//!
//! Also recognises singularities of class T, `1/(m²s)(1, msm′−1)` with
//! `gcd(m, m′) = 1`, in three independent ways: the closed form, the chain
//! recursion starting from `[4]` and `[3,2,…,2,3]`, and the necessary
//! divisibility `n | (q+1)²`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// The cyclic quotient singularity `1/n(1,q)`.
///
/// `n ≥ 2`, `1 ≤ q < n`, `gcd(n,q) = 1`; the smooth point is represented by
/// the degenerate value `n = 1, q = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicQuot {
    n: BigInt,
    q: BigInt,
}

impl CyclicQuot {
    pub fn new(n: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (n, q) = (n.into(), q.into());
        let bad = |reason| Error::InvalidCyclicQuot { n: n.to_string(), q: q.to_string(), reason };
        if n < BigInt::from(2) {
            return Err(bad("n must be at least 2"));
        }
        if !q.is_positive() || q >= n {
            return Err(bad("q must satisfy 1 <= q < n"));
        }
        if !n.gcd(&q).is_one() {
            return Err(bad("gcd(n, q) must be 1"));
        }
        Ok(CyclicQuot { n, q })
    }

    pub fn smooth() -> Self {
        CyclicQuot { n: BigInt::one(), q: BigInt::zero() }
    }

    pub fn is_smooth(&self) -> bool {
        self.n.is_one()
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Hirzebruch-Jung expansion `n/q = b₁ − 1/(b₂ − 1/(… − 1/b_s))`.
    pub fn hj_expand(&self) -> Chain {
        let mut out = Vec::new();
        let (mut a, mut b) = (self.n.clone(), self.q.clone());
        while b.is_positive() {
            let c = a.div_ceil(&b);
            let next = &c * &b - &a;
            out.push(c.to_i64().expect("chain entry exceeds i64"));
            a = b;
            b = next;
        }
        Chain(out)
    }

    /// The singularity `1/n(1, n−q)`, whose chain is the Riemenschneider dual.
    pub fn dual(&self) -> CyclicQuot {
        if self.is_smooth() {
            return self.clone();
        }
        CyclicQuot { n: self.n.clone(), q: &self.n - &self.q }
    }

    /// Index of the canonical class: `n / gcd(n, q+1)`.
    pub fn index(&self) -> BigInt {
        &self.n / self.n.gcd(&(&self.q + 1))
    }

    /// `n | (q+1)²`, necessary for class T.
    pub fn class_t_necessary(&self) -> bool {
        let q1 = &self.q + 1;
        Integer::is_multiple_of(&(&q1 * &q1), &self.n)
    }

    /// The class T witness `(m, s, m′)`, if any.
    ///
    /// With `n = m²s` and `q+1 = msm′`, `gcd(m,m′) = 1` forces
    /// `gcd(n, q+1) = ms`, so `m = n / gcd(n, q+1)` and the witness is unique.
    pub fn class_t(&self) -> Option<ClassTWitness> {
        if self.is_smooth() {
            return None;
        }
        let q1 = &self.q + 1;
        let g = self.n.gcd(&q1);
        let m = &self.n / &g;
        if m < BigInt::from(2) || !Integer::is_multiple_of(&self.n, &(&m * &m)) {
            return None;
        }
        let s = &self.n / (&m * &m);
        let m_prime = &q1 / &g;
        if !m.gcd(&m_prime).is_one() {
            return None;
        }
        Some(ClassTWitness { m, s, m_prime })
    }
}

impl fmt::Display for CyclicQuot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.n, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTWitness {
    pub m: BigInt,
    pub s: BigInt,
    pub m_prime: BigInt,
}

/// A Hirzebruch-Jung chain `[b₁, …, b_s]` with every `bᵢ ≥ 2`. The empty
/// chain stands for a smooth point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(Vec<i64>);

impl Chain {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if let Some(b) = entries.iter().find(|&&b| b < 2) {
            return Err(Error::InvalidChain(format!("entry {b} is below 2")));
        }
        Ok(Chain(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Chain {
        Chain(self.0.iter().rev().copied().collect())
    }

    /// Evaluates the continued fraction back to `(n, q)`.
    pub fn hj_contract(&self) -> CyclicQuot {
        let mut iter = self.0.iter().rev();
        let Some(&last) = iter.next() else { return CyclicQuot::smooth() };
        let (mut num, mut den) = (BigInt::from(last), BigInt::one());
        for &b in iter {
            let next = BigInt::from(b) * &num - &den;
            den = num;
            num = next;
        }
        CyclicQuot { n: num, q: den }
    }

    /// Order of the cyclic group, `1` for the empty chain.
    pub fn order(&self) -> BigInt {
        self.hj_contract().n
    }

    /// All entries equal 2 (type A, or smooth when empty).
    pub fn is_duval(&self) -> bool {
        self.0.iter().all(|&b| b == 2)
    }

    /// `[4]` or `[3, 2, …, 2, 3]` (no middle 2's allowed).
    pub fn is_class_t_base(&self) -> bool {
        match self.0.as_slice() {
            [4] => true,
            [3, middle @ .., 3] => middle.iter().all(|&b| b == 2),
            _ => false,
        }
    }

    /// Class T by undoing the two growth moves
    /// `[a₁…a_k] ↦ [2, a₁…a_{k−1}, a_k+1]` and `[a₁…a_k] ↦ [a₁+1, a₂…a_k, 2]`
    /// until a base chain is reached. At most one reverse move applies at a
    /// time, so the reduction is deterministic.
    pub fn is_class_t_recursive(&self) -> bool {
        let mut ch = self.0.clone();
        loop {
            if Chain(ch.clone()).is_class_t_base() {
                return true;
            }
            let k = ch.len();
            if k < 2 {
                return false;
            }
            if ch[0] == 2 && ch[k - 1] >= 3 {
                ch.remove(0);
                *ch.last_mut().unwrap() -= 1;
            } else if ch[k - 1] == 2 && ch[0] >= 3 {
                ch.pop();
                ch[0] -= 1;
            } else {
                return false;
            }
        }
    }

    /// Whether a class T chain equals its reversal.
    pub fn is_symmetric_class_t(&self) -> Result<bool> {
        if self.hj_contract().class_t().is_none() {
            return Err(Error::NotClassT);
        }
        Ok(self.0.iter().eq(self.0.iter().rev()))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
