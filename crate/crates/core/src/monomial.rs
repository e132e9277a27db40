//! Multi-indices and the graded monomial order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::scalar::{binomial, factorial};

/// An exponent vector `ν ∈ N₀ⁿ`.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// with the first variable most significant, so `t < s < t² < st < s²` in
/// variables `(s, t)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `ν! = Π νᵢ!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&e| factorial(e)).product()
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `binom(ν, μ) = Π binom(νᵢ, μᵢ)`, zero unless `μ ≤ ν`.
    pub fn binomial(&self, mu: &MultiIndex) -> BigInt {
        self.0
            .iter()
            .zip(&mu.0)
            .map(|(&a, &b)| BigInt::from(binomial(a as usize, b as usize)))
            .product()
    }

    /// Position of this index inside [`monomials_of_degree`] for its degree.
    pub fn rank_in_degree(&self) -> usize {
        rank_of(&self.0, self.degree())
    }

    /// Render as a monomial in the given variable names, `1` for the zero index.
    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

fn rank_of(exps: &[u32], k: usize) -> usize {
    if exps.len() <= 1 {
        return 0;
    }
    let e0 = exps[0] as usize;
    let before: usize = (e0 + 1..=k).map(|j| count(exps.len() - 1, k - j)).sum();
    before + rank_of(&exps[1..], k - e0)
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Number of monomials of degree `k` in `n` variables.
pub fn count(n: usize, k: usize) -> usize {
    if n == 0 {
        return usize::from(k == 0);
    }
    binomial(n + k - 1, k)
}

/// Number of monomials of degree at most `k` in `n` variables.
pub fn count_up_to(n: usize, k: usize) -> usize {
    binomial(n + k, k)
}

/// All monomials of degree `k`, largest first in the graded order.
///
/// This "block order" is how homogeneous components are stored everywhere:
/// `s², st, t²` for `n = 2, k = 2`.
pub fn monomials_of_degree(n: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(count(n, k));
    let mut cur = vec![0u32; n];
    fill(&mut cur, 0, k, &mut out);
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, rest: usize, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = rest as u32;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    if cur.is_empty() {
        if rest == 0 {
            out.push(MultiIndex(vec![]));
        }
        return;
    }
    for e in (0..=rest).rev() {
        cur[pos] = e as u32;
        fill(cur, pos + 1, rest - e, out);
    }
}

/// All monomials of degree `≤ k`, by degree and block order within a degree.
pub fn monomials_up_to(n: usize, k: usize) -> Vec<MultiIndex> {
    (0..=k).flat_map(|d| monomials_of_degree(n, d)).collect()
}
