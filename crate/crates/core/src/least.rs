//! Least spaces by graded elimination.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::{inverse, row_basis, Echelon, Matrix};
use crate::monomial::count;
use crate::poly::Polynomial;
use crate::scalar::Field;

/// A finite-dimensional space of germs at a common base point, given by a basis.
#[derive(Clone, Debug)]
pub struct FunctionSpace<F> {
    base: Vec<F>,
    generators: Vec<Jet<F>>,
}

impl<F: Field> FunctionSpace<F> {
    /// Validates that the generators share a base point and are linearly
    /// independent as far as their truncation orders can show.
    pub fn new(base: Vec<F>, generators: Vec<Jet<F>>) -> Result<Self> {
        assert!(!generators.is_empty(), "a function space needs at least one generator");
        let n = base.len();
        for g in &generators {
            if g.nvars() != n || g.base() != base.as_slice() {
                return Err(Error::DimensionMismatch("generators must share the base point".into()));
            }
        }
        let known = generators.iter().filter_map(|g| g.known_order()).min();
        let depth = known.unwrap_or_else(|| generators.iter().map(|g| g.order()).max().unwrap());
        let mut ech = Echelon::new();
        for g in &generators {
            if !ech.insert(&g.flatten(depth)) {
                return Err(match known {
                    None => Error::DependentGenerators,
                    Some(k) => Error::TruncationInsufficient { module: "least", needed: k + 1, available: k },
                });
            }
        }
        Ok(FunctionSpace { base, generators })
    }

    pub fn base(&self) -> &[F] {
        &self.base
    }

    pub fn nvars(&self) -> usize {
        self.base.len()
    }

    pub fn generators(&self) -> &[Jet<F>] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(|g| g.is_exact())
    }

    /// Smallest truncation order among inexact generators.
    pub fn verified_order(&self) -> Option<usize> {
        self.generators.iter().filter_map(|g| g.known_order()).min()
    }
}

/// A graded space of homogeneous polynomials in canonical form.
///
/// Each degree block is stored as the nonzero rows of its reduced row echelon
/// form, with pivots at the graded-largest monomials, so equal spaces have
/// identical representations.
#[derive(Clone, Debug)]
pub struct LeastSpace<F> {
    nvars: usize,
    blocks: BTreeMap<usize, Vec<Polynomial<F>>>,
    verified_order: Option<usize>,
}

impl<F: Field> PartialEq for LeastSpace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.blocks == other.blocks
    }
}

impl<F: Field> Eq for LeastSpace<F> {}

/// Witness that a space is not closed under differentiation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Escape<F> {
    pub element: Polynomial<F>,
    pub variable: usize,
    pub derivative: Polynomial<F>,
}

fn canonical_block<F: Field>(n: usize, k: usize, polys: &[Polynomial<F>]) -> Vec<Polynomial<F>> {
    let m: Matrix<F> = polys.iter().map(|p| p.block(k)).collect();
    row_basis(&m).iter().map(|r| Polynomial::from_block(n, k, r)).collect()
}

impl<F: Field> LeastSpace<F> {
    /// Canonical span of homogeneous polynomials (non-homogeneous input is split
    /// into its homogeneous parts).
    pub fn from_polys(nvars: usize, polys: &[Polynomial<F>]) -> Self {
        let mut by_degree: BTreeMap<usize, Vec<Polynomial<F>>> = BTreeMap::new();
        for p in polys {
            for k in p.low_degree().unwrap_or(0)..=p.degree().unwrap_or(0) {
                let h = p.homogeneous_part(k);
                if !h.is_zero() {
                    by_degree.entry(k).or_default().push(h);
                }
            }
        }
        let blocks = by_degree
            .into_iter()
            .map(|(k, ps)| (k, canonical_block(nvars, k, &ps)))
            .filter(|(_, b)| !b.is_empty())
            .collect();
        LeastSpace { nvars, blocks, verified_order: None }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.blocks.values().map(|b| b.len()).sum()
    }

    /// Highest degree present (θ); 0 for the zero space.
    pub fn max_degree(&self) -> usize {
        self.blocks.keys().next_back().copied().unwrap_or(0)
    }

    /// Degree-`k` block, empty when absent.
    pub fn block(&self, k: usize) -> &[Polynomial<F>] {
        self.blocks.get(&k).map_or(&[], |b| b.as_slice())
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, &[Polynomial<F>])> {
        self.blocks.iter().map(|(k, b)| (*k, b.as_slice()))
    }

    /// Basis by ascending degree, each block in canonical order.
    pub fn basis(&self) -> Vec<Polynomial<F>> {
        self.blocks.values().flatten().cloned().collect()
    }

    /// Truncation order the result was verified to, when inputs were inexact.
    pub fn verified_order(&self) -> Option<usize> {
        self.verified_order
    }

    /// Degree sequence of the basis.
    pub fn degrees(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|(k, b)| std::iter::repeat(*k).take(b.len())).collect()
    }

    /// Whether every basis element is a single monomial.
    pub fn is_monomial(&self) -> bool {
        self.blocks.values().flatten().all(|p| p.is_monomial())
    }

    /// Exact membership, checked per homogeneous component.
    pub fn contains(&self, p: &Polynomial<F>) -> bool {
        if p.is_zero() {
            return true;
        }
        (p.low_degree().unwrap()..=p.degree().unwrap()).all(|k| {
            let h = p.homogeneous_part(k);
            h.is_zero() || self.block_contains(k, &h)
        })
    }

    fn block_contains(&self, k: usize, h: &Polynomial<F>) -> bool {
        let mut e = Echelon::new();
        for b in self.block(k) {
            e.insert(&b.block(k));
        }
        e.contains(&h.block(k))
    }

    /// Largest `k` such that every monomial of degree `≤ k` lies in the space;
    /// `None` when even the constants are missing.
    pub fn full_degree(&self) -> Option<usize> {
        let mut k = 0;
        while self.block(k).len() == count(self.nvars, k) {
            k += 1;
        }
        k.checked_sub(1)
    }

    /// Closed under all partial derivatives, with a witness when not.
    pub fn d_invariance(&self) -> Option<Escape<F>> {
        for (&k, block) in &self.blocks {
            if k == 0 {
                continue;
            }
            for p in block {
                for i in 0..self.nvars {
                    let d = p.partial(i);
                    if !d.is_zero() && !self.block_contains(k - 1, &d) {
                        return Some(Escape { element: p.clone(), variable: i, derivative: d });
                    }
                }
            }
        }
        None
    }

    pub fn is_d_invariant(&self) -> (bool, Option<Escape<F>>) {
        let w = self.d_invariance();
        (w.is_none(), w)
    }

    /// Canonical span of `{p(Jσ)}` for invertible `J`.
    pub fn apply_linear_substitution(&self, j: &Matrix<F>) -> Result<Self> {
        if j.len() != self.nvars || j.iter().any(|r| r.len() != self.nvars) {
            return Err(Error::DimensionMismatch("substitution matrix has the wrong size".into()));
        }
        if inverse(j).is_none() {
            return Err(Error::SingularMatrix);
        }
        let blocks = self
            .blocks
            .iter()
            .map(|(&k, b)| {
                let moved: Vec<_> = b.iter().map(|p| p.substitute_linear(j)).collect();
                (k, canonical_block(self.nvars, k, &moved))
            })
            .collect();
        Ok(LeastSpace { nvars: self.nvars, blocks, verified_order: self.verified_order })
    }
}

/// Least space of `Z` by graded elimination.
///
/// At degree `k` the remaining rows span `Z ∩ m^k`. Their degree-`k` blocks are
/// eliminated (pivot: block-order-first column, first row in input order);
/// pivot rows contribute least parts, the others are carried to degree `k + 1`.
pub fn compute_least_space<F: Field>(z: &FunctionSpace<F>) -> Result<LeastSpace<F>> {
    let n = z.nvars();
    let mut rows: Vec<Jet<F>> = z.generators().to_vec();
    let mut blocks = BTreeMap::new();
    let mut k = 0;
    while !rows.is_empty() {
        for r in &rows {
            if !r.knows(k) {
                return Err(Error::TruncationInsufficient { module: "least", needed: k, available: r.order() });
            }
        }
        let width = count(n, k);
        let mut pivot_rows: Vec<Jet<F>> = Vec::new();
        let mut pending: Vec<Jet<F>> = rows;
        for c in 0..width {
            let Some(p) = pending.iter().position(|r| r.block_ref(k).is_some_and(|b| !b[c].is_zero())) else {
                continue;
            };
            let pivot = pending.remove(p);
            let pc = pivot.block_ref(k).unwrap()[c].clone();
            pending = pending
                .into_iter()
                .map(|r| {
                    let rc = r.block_ref(k).map(|b| b[c].clone()).unwrap_or_else(F::zero);
                    if rc.is_zero() {
                        r
                    } else {
                        r.axpy(&(-(rc / pc.clone())), &pivot)
                    }
                })
                .collect();
            pivot_rows.push(pivot);
        }
        for r in &pending {
            if r.is_exact() && r.is_zero() {
                return Err(Error::DependentGenerators);
            }
            if !r.knows(k + 1) {
                return Err(Error::TruncationInsufficient { module: "least", needed: k + 1, available: r.order() });
            }
        }
        if !pivot_rows.is_empty() {
            let parts: Vec<Polynomial<F>> =
                pivot_rows.iter().map(|r| Polynomial::from_block(n, k, &r.block(k))).collect();
            blocks.insert(k, canonical_block(n, k, &parts));
        }
        rows = pending;
        k += 1;
    }
    Ok(LeastSpace { nvars: n, blocks, verified_order: z.verified_order() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn var(i: usize) -> Polynomial<Q> {
        Polynomial::var(2, i)
    }

    /// span(1, s, t, t² + s t², t³)
    fn example_space(b: [i64; 2]) -> FunctionSpace<Q> {
        let (s, t) = (var(0), var(1));
        let gens = [Polynomial::one(2), s.clone(), t.clone(), t.pow(2).add(&s.mul(&t.pow(2))), t.pow(3)];
        let base = vec![q(b[0]), q(b[1])];
        FunctionSpace::new(base.clone(), gens.iter().map(|g| Jet::from_absolute_poly(g, base.clone())).collect())
            .unwrap()
    }

    fn span(ps: &[Polynomial<Q>]) -> LeastSpace<Q> {
        LeastSpace::from_polys(2, ps)
    }

    #[test]
    fn example_least_spaces() {
        let (s, t) = (var(0), var(1));
        let l = compute_least_space(&example_space([0, 1])).unwrap();
        assert_eq!(l, span(&[Polynomial::one(2), s.clone(), t.clone(), s.mul(&t), t.pow(2)]));
        assert!(l.is_d_invariant().0);
        let l = compute_least_space(&example_space([1, 0])).unwrap();
        assert_eq!(l, span(&[Polynomial::one(2), s.clone(), t.clone(), t.pow(2), t.pow(3)]));
        assert_eq!(l.dim(), 5);
        assert_eq!(l.max_degree(), 3);
        // at (-1, 0) the t² coefficient vanishes and s t² is the least part
        let l = compute_least_space(&example_space([-1, 0])).unwrap();
        assert_eq!(l, span(&[Polynomial::one(2), s.clone(), t.clone(), s.mul(&t.pow(2)), t.pow(3)]));
        assert!(!l.is_d_invariant().0);
    }

    #[test]
    fn dependent_generators_are_rejected() {
        let s = var(0);
        let base = vec![q(0), q(0)];
        let gens = vec![Jet::from_poly(&s, base.clone()), Jet::from_poly(&s.scale(&q(2)), base.clone())];
        assert_eq!(FunctionSpace::new(base, gens).unwrap_err(), Error::DependentGenerators);
    }

    #[test]
    fn d_invariance_witness() {
        let x = Polynomial::<Q>::var(1, 0);
        let l = LeastSpace::from_polys(1, &[0, 1, 2, 3, 4, 6].map(|k| x.pow(k)));
        let (ok, w) = l.is_d_invariant();
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(w.element, x.pow(6));
        assert_eq!(w.derivative, x.pow(5).scale(&q(6)));
        assert!(LeastSpace::from_polys(1, &[Polynomial::<Q>::one(1)]).is_d_invariant().0);
        assert_eq!(l.full_degree(), Some(4));
    }

    #[test]
    fn linear_substitution() {
        let (s, t) = (var(0), var(1));
        let l = span(&[Polynomial::one(2), s.clone(), t.clone(), t.pow(2)]);
        let j = vec![vec![q(1), q(1)], vec![q(0), q(1)]];
        assert_eq!(l.apply_linear_substitution(&j).unwrap(), l);
        let sing = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert_eq!(l.apply_linear_substitution(&sing).unwrap_err(), Error::SingularMatrix);
        let x = Polynomial::<Q>::var(1, 0);
        let l1 = LeastSpace::from_polys(1, &[Polynomial::one(1), x.clone(), x.pow(2)]);
        assert_eq!(l1.apply_linear_substitution(&vec![vec![q(2)]]).unwrap(), l1);
    }
}
