//! Young-like sets, generalized Wronskians, jet-rank profiles and bundle points.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::least::FunctionSpace;
use crate::linalg::{determinant, rref, Matrix};
use crate::monomial::{count_up_to, monomials_up_to, MultiIndex};
use crate::scalar::{Field, Rational};

/// A downward-closed finite set of multi-indices, stored in ascending graded order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize)]
pub struct YoungLikeSet {
    indices: Vec<MultiIndex>,
}

impl YoungLikeSet {
    /// Checks downward closure.
    pub fn new(mut indices: Vec<MultiIndex>) -> Option<Self> {
        indices.sort();
        indices.dedup();
        let closed = indices.iter().all(|mu| {
            (0..mu.nvars()).all(|i| {
                mu.0[i] == 0 || {
                    let mut nu = mu.clone();
                    nu.0[i] -= 1;
                    indices.binary_search(&nu).is_ok()
                }
            })
        });
        closed.then_some(YoungLikeSet { indices })
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// All Young-like sets of size `m` in `n` variables, in a fixed order.
pub fn enumerate_young_like(n: usize, m: usize, cap: usize) -> Result<Vec<YoungLikeSet>> {
    assert!(n >= 1 && m >= 1);
    let mut level: BTreeSet<Vec<MultiIndex>> = BTreeSet::new();
    level.insert(vec![MultiIndex::zero(n)]);
    for _ in 1..m {
        let mut next = BTreeSet::new();
        for set in &level {
            for mu in addable_cells(set, n) {
                let mut grown = set.clone();
                grown.push(mu);
                grown.sort();
                next.insert(grown);
            }
            if next.len() > cap {
                return Err(Error::CombinatorialBlowup { count: next.len(), cap });
            }
        }
        level = next;
    }
    if level.len() > cap {
        return Err(Error::CombinatorialBlowup { count: level.len(), cap });
    }
    Ok(level.into_iter().map(|indices| YoungLikeSet { indices }).collect())
}

fn addable_cells(set: &[MultiIndex], n: usize) -> Vec<MultiIndex> {
    let mut out = BTreeSet::new();
    for mu in set {
        for i in 0..n {
            let cand = mu.add(&MultiIndex::unit(n, i));
            if set.binary_search(&cand).is_ok() {
                continue;
            }
            let closed = (0..n).all(|j| {
                cand.0[j] == 0 || {
                    let mut nu = cand.clone();
                    nu.0[j] -= 1;
                    set.binary_search(&nu).is_ok()
                }
            });
            if closed {
                out.insert(cand);
            }
        }
    }
    out.into_iter().collect()
}

/// Determinant by expansion over column subsets, for entries in any ring
/// given by `mul`/`add`/`neg`.
fn subset_determinant<T: Clone>(
    entries: &[Vec<T>],
    zero: T,
    one: T,
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
) -> T {
    let m = entries.len();
    assert!(m <= 20, "subset determinant is exponential in the size");
    let full = (1usize << m) - 1;
    let mut dp: Vec<Option<T>> = vec![None; full + 1];
    dp[0] = Some(one);
    for mask in 1..=full {
        let r = mask.count_ones() as usize - 1;
        let mut acc = zero.clone();
        let mut any = false;
        for c in 0..m {
            if mask & (1 << c) == 0 {
                continue;
            }
            // columns of mask above c, for the Laplace sign along row r
            let above = (mask >> (c + 1)).count_ones();
            let Some(sub) = dp[mask & !(1 << c)].as_ref() else { continue };
            let term = mul(&entries[r][c], sub);
            acc = if above % 2 == 0 { add(&acc, &term) } else { add(&acc, &neg(&term)) };
            any = true;
        }
        dp[mask] = any.then_some(acc);
    }
    dp[full].take().unwrap_or(zero)
}

/// `det[(1/ν!) ∂^ν f_i]` with columns indexed by `y`, as a jet reduced modulo
/// degree `> cap` (no reduction for exact inputs when `cap` is `None`).
pub fn generalized_wronskian<F: Field>(fs: &[Jet<F>], y: &YoungLikeSet, cap: Option<usize>) -> Result<Jet<F>> {
    if fs.len() != y.len() {
        return Err(Error::DimensionMismatch(format!("{} functions but {} indices", fs.len(), y.len())));
    }
    let entries: Vec<Vec<Jet<F>>> = fs
        .iter()
        .map(|f| y.indices().iter().map(|nu| f.normalized_derivative(nu)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let n = fs[0].nvars();
    let base = fs[0].base().to_vec();
    let zero = Jet::constant(n, base.clone(), F::zero());
    let one = Jet::constant(n, base, F::one());
    Ok(subset_determinant(&entries, zero, one, |a, b| a.mul(b, cap), |a, b| a.add(b), |a| a.neg()))
}

/// Wronskian with ordinary derivatives `∂^ν`: the normalized one times `Π ν!`.
pub fn unnormalized_wronskian<F: Field>(fs: &[Jet<F>], y: &YoungLikeSet, cap: Option<usize>) -> Result<Jet<F>> {
    let w = generalized_wronskian(fs, y, cap)?;
    let scale = y.indices().iter().fold(F::one(), |acc, nu| acc * F::from_bigint(nu.factorial()));
    Ok(w.scale(&scale))
}

/// Constant term of the normalized Wronskian: a scalar determinant of Taylor coefficients.
pub fn wronskian_at_base<F: Field>(fs: &[Jet<F>], y: &YoungLikeSet) -> F {
    let m: Matrix<F> = fs.iter().map(|f| y.indices().iter().map(|nu| f.coeff(nu)).collect()).collect();
    determinant(&m)
}

/// Some Young-like set of size `fs.len()` gives a Wronskian that is not
/// identically zero (as far as the truncation shows).
pub fn some_wronskian_nonzero<F: Field>(fs: &[Jet<F>], cap: usize) -> Result<Option<YoungLikeSet>> {
    let n = fs[0].nvars();
    let out_cap = fs.iter().filter_map(|f| f.known_order()).min();
    for y in enumerate_young_like(n, fs.len(), cap)? {
        let trunc = out_cap.map(|k| k.saturating_sub(y.indices().last().unwrap().degree()));
        if !generalized_wronskian(fs, &y, trunc)?.is_zero() {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// How the generic ranks in a profile were obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum GenericRankMethod {
    /// One variable: independent functions have generic ranks `min(k + 1, m)`.
    Proved,
    /// Maximum over the query point and pseudorandom points.
    Sampled,
    /// Exact rank over power series along a pseudorandom line through the base point.
    SeriesLine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingConfig {
    pub seed: u64,
    pub samples: usize,
    pub young_cap: usize,
    /// Largest dimension for which a Young-like witness is searched.
    pub witness_limit: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { seed: 20_231_105, samples: 5, young_cap: 10_000, witness_limit: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JetRankProfile {
    pub ranks: Vec<usize>,
    pub generic_ranks: Vec<usize>,
    pub method: GenericRankMethod,
    pub seed: u64,
    pub samples: usize,
    pub verified_order: Option<usize>,
}

// One column-ordered elimination gives every prefix rank: the pivots of the
// RREF are the first independent columns.
fn ranks_at<F: Field>(jets: &[Jet<F>], k_max: usize) -> Vec<usize> {
    let mut m: Matrix<F> = jets.iter().map(|j| j.flatten(k_max)).collect();
    let pivots = rref(&mut m);
    let n = jets.first().map_or(0, |j| j.nvars());
    (0..=k_max).map(|k| pivots.iter().filter(|&&c| c < count_up_to(n, k)).count()).collect()
}

// Real points suffice: a nonzero polynomial cannot vanish on all of R^n.
fn random_scalar<F: Field>(rng: &mut ChaCha8Rng) -> F {
    let num: i64 = rng.gen_range(-12..=12);
    let den: i64 = rng.gen_range(1..=3);
    F::from_rational(Rational::new(num.into(), den.into()))
}

/// Ranks of the `k`-jet matrices at the base point for `k = 0..=k_max`, with
/// generic ranks for comparison.
pub fn jet_rank_profile<F: Field>(z: &FunctionSpace<F>, k_max: usize, cfg: &SamplingConfig) -> Result<JetRankProfile> {
    let gens = z.generators();
    if let Some(k) = z.verified_order() {
        if k < k_max {
            return Err(Error::TruncationInsufficient { module: "wronskian", needed: k_max, available: k });
        }
    }
    let ranks = ranks_at(gens, k_max);
    let m = gens.len();
    let (generic_ranks, method) = if z.nvars() == 1 {
        ((0..=k_max).map(|k| (k + 1).min(m)).collect(), GenericRankMethod::Proved)
    } else if z.is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut best = ranks.clone();
        let ceiling: Vec<usize> = (0..=k_max).map(|k| count_up_to(z.nvars(), k).min(m)).collect();
        for _ in 0..cfg.samples {
            if best == ceiling {
                break;
            }
            let pt: Vec<F> = (0..z.nvars()).map(|_| random_scalar(&mut rng)).collect();
            let moved: Vec<Jet<F>> = gens.iter().map(|g| g.recenter(&pt)).collect();
            for (b, r) in best.iter_mut().zip(ranks_at(&moved, k_max)) {
                *b = (*b).max(r);
            }
        }
        (best, GenericRankMethod::Sampled)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let dir: Vec<F> = (0..z.nvars()).map(|_| random_scalar(&mut rng)).collect();
        let order = z.verified_order().unwrap();
        let g = (0..=k_max).map(|k| series_line_rank(gens, &dir, k, order - k)).collect();
        (g, GenericRankMethod::SeriesLine)
    };
    // a sampled maximum can never be below the value at the query point
    let generic_ranks = generic_ranks.iter().zip(&ranks).map(|(g, r)| (*g).max(*r)).collect();
    Ok(JetRankProfile {
        ranks,
        generic_ranks,
        method,
        seed: cfg.seed,
        samples: cfg.samples,
        verified_order: z.verified_order(),
    })
}

/// Rank of the `k`-jet matrix at `b + εv` over power series in `ε`, known modulo `ε^(prec+1)`.
fn series_line_rank<F: Field>(gens: &[Jet<F>], v: &[F], k: usize, prec: usize) -> usize {
    let cols = monomials_up_to(v.len(), k);
    // entry(f, ν)(ε) = Σ_j ε^j Σ_{μ ≥ ν, |μ| = |ν|+j} binom(μ, ν) f_μ (v)^(μ-ν)
    let mut mat: Vec<Vec<Vec<F>>> = gens
        .iter()
        .map(|f| {
            cols.iter()
                .map(|nu| {
                    (0..=prec)
                        .map(|j| {
                            let mut acc = F::zero();
                            for mu in crate::monomial::monomials_of_degree(v.len(), nu.degree() + j) {
                                let Some(d) = mu.checked_sub(nu) else { continue };
                                let c = f.coeff(&mu);
                                if c.is_zero() {
                                    continue;
                                }
                                let vp = d.0.iter().zip(v).fold(F::one(), |a, (&e, x)| a * x.pow(e));
                                acc = acc + c * F::from_bigint(mu.binomial(nu)) * vp;
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let val = |s: &[F]| s.iter().position(|c| !c.is_zero());
    let mut r = 0;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in mat.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if let Some(vv) = val(e) {
                    if best.is_none_or(|(_, _, bv)| vv < bv) {
                        best = Some((i, c, vv));
                    }
                }
            }
        }
        let Some((pi, pc, pv)) = best else { break };
        r += 1;
        let prow = mat.remove(pi);
        let unit: Vec<F> = prow[pc][pv..].to_vec();
        for row in mat.iter_mut() {
            let Some(_) = val(&row[pc]) else { continue };
            let factor = series_div(&row[pc][pv..], &unit, prec + 1 - pv);
            for (e, pe) in row.iter_mut().zip(&prow) {
                let prod = series_mul(&factor, pe, prec + 1);
                for (x, y) in e.iter_mut().zip(prod) {
                    *x = x.clone() - y;
                }
            }
        }
        for row in mat.iter_mut() {
            row.remove(pc);
        }
    }
    r
}

fn series_mul<F: Field>(a: &[F], b: &[F], len: usize) -> Vec<F> {
    let mut out = vec![F::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// `a / u` for a unit series `u`, to `len` terms.
fn series_div<F: Field>(a: &[F], u: &[F], len: usize) -> Vec<F> {
    let inv0 = u[0].inv();
    let mut q = vec![F::zero(); len];
    for i in 0..len {
        let mut s = a.get(i).cloned().unwrap_or_else(F::zero);
        for j in 1..=i.min(u.len() - 1) {
            s = s - u[j].clone() * q[i - j].clone();
        }
        q[i] = s * inv0.clone();
    }
    q
}

/// Outcome of a bundle-point test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BundleCertificate {
    pub bundle: bool,
    /// A Young-like set whose Wronskian does not vanish at the base point.
    pub witness: Option<YoungLikeSet>,
    /// Whether the witness search ran (it is skipped for large dimensions).
    pub witness_searched: bool,
    pub profile: JetRankProfile,
}

/// Bundle point test: the `k`-jet ranks at the base point equal the generic
/// ranks for every `k ≤ m − 1`.
pub fn is_bundle_point<F: Field>(z: &FunctionSpace<F>, cfg: &SamplingConfig) -> Result<BundleCertificate> {
    let m = z.dimension();
    let profile = jet_rank_profile(z, m - 1, cfg)?;
    let bundle = profile.ranks == profile.generic_ranks;
    let mut witness = None;
    let searched = m <= cfg.witness_limit;
    if searched {
        match enumerate_young_like(z.nvars(), m, cfg.young_cap) {
            Ok(sets) => {
                witness = sets.into_iter().find(|y| !wronskian_at_base(z.generators(), y).is_zero());
            }
            Err(Error::CombinatorialBlowup { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(BundleCertificate { bundle, witness, witness_searched: searched, profile })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::scalar::GaussianRational as Q;
    use num_traits::One;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    fn example(b: [i64; 2]) -> FunctionSpace<Q> {
        let s = Polynomial::<Q>::var(2, 0);
        let t = Polynomial::<Q>::var(2, 1);
        let gens = [Polynomial::one(2), s.clone(), t.clone(), t.pow(2).add(&s.mul(&t.pow(2))), t.pow(3)];
        let base = vec![q(b[0]), q(b[1])];
        FunctionSpace::new(base.clone(), gens.iter().map(|g| Jet::from_absolute_poly(g, base.clone())).collect())
            .unwrap()
    }

    #[test]
    fn young_like_counts() {
        let one = enumerate_young_like(1, 4, 100).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].indices(), &[mi(&[0]), mi(&[1]), mi(&[2]), mi(&[3])]);
        assert_eq!(enumerate_young_like(2, 1, 100).unwrap().len(), 1);
        let three = enumerate_young_like(2, 3, 100).unwrap();
        assert_eq!(three.len(), 3);
        // partitions of 5 and plane partitions of 3
        assert_eq!(enumerate_young_like(2, 5, 100).unwrap().len(), 7);
        assert_eq!(enumerate_young_like(3, 3, 100).unwrap().len(), 6);
        assert!(matches!(enumerate_young_like(2, 8, 5), Err(Error::CombinatorialBlowup { .. })));
        assert!(YoungLikeSet::new(vec![mi(&[0, 0]), mi(&[1, 1])]).is_none());
    }

    #[test]
    fn wronskians() {
        let x = Polynomial::<Q>::var(1, 0);
        let fs: Vec<_> = (0..3).map(|k| Jet::from_poly(&x.pow(k), vec![q(0)])).collect();
        let y = YoungLikeSet::new(vec![mi(&[0]), mi(&[1]), mi(&[2])]).unwrap();
        assert_eq!(generalized_wronskian(&fs, &y, None).unwrap().to_poly(), Polynomial::one(1));
        assert_eq!(unnormalized_wronskian(&fs, &y, None).unwrap().to_poly(), Polynomial::constant(1, q(2)));
        let dep = vec![fs[1].clone(), fs[1].scale(&q(3)), fs[2].clone()];
        assert!(generalized_wronskian(&dep, &y, None).unwrap().is_zero());

        let z = example([0, 0]);
        let y = YoungLikeSet::new(vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[0, 1]), mi(&[1, 1]), mi(&[0, 2])]).unwrap();
        let w = generalized_wronskian(z.generators(), &y, None).unwrap();
        let t = Polynomial::<Q>::var(2, 1);
        assert_eq!(w.to_poly(), t.pow(2).scale(&q(6)));
    }

    #[test]
    fn rank_profiles() {
        let cfg = SamplingConfig::default();
        let p = jet_rank_profile(&example([0, 1]), 3, &cfg).unwrap();
        assert_eq!(p.ranks, vec![1, 3, 5, 5]);
        assert_eq!(p.generic_ranks, vec![1, 3, 5, 5]);
        let p = jet_rank_profile(&example([0, 0]), 3, &cfg).unwrap();
        assert_eq!(p.ranks, vec![1, 3, 4, 5]);
        assert!(!is_bundle_point(&example([0, 0]), &cfg).unwrap().bundle);
        let c = is_bundle_point(&example([0, 1]), &cfg).unwrap();
        assert!(c.bundle && c.witness.is_some());
        let one = FunctionSpace::new(vec![q(3), q(1)], vec![Jet::constant(2, vec![q(3), q(1)], Q::one())]).unwrap();
        assert_eq!(jet_rank_profile(&one, 2, &cfg).unwrap().ranks, vec![1, 1, 1]);
    }

    #[test]
    fn series_line_matches_sampling() {
        // inexact copies of the example generators must give the same generic ranks
        let z = example([0, 0]);
        let gens: Vec<Jet<Q>> = z.generators().iter().map(|g| {
            let blocks: Vec<Vec<Q>> = (0..=8).map(|k| g.block(k)).collect();
            Jet::from_blocks(2, vec![q(0), q(0)], blocks, false)
        }).collect();
        let inexact = FunctionSpace::new(vec![q(0), q(0)], gens).unwrap();
        let cfg = SamplingConfig::default();
        let a = jet_rank_profile(&z, 4, &cfg).unwrap();
        let b = jet_rank_profile(&inexact, 4, &cfg).unwrap();
        assert_eq!(b.method, GenericRankMethod::SeriesLine);
        assert_eq!(a.ranks, b.ranks);
        assert_eq!(a.generic_ranks, b.generic_ranks);
    }
}
