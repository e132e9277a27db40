//! The apolarity pairing, Taylor projectors and annihilators.
//!
//! `S(p, f) = Σ ν!·p_ν·conj(f_ν)` pairs a dual polynomial `p(τ)` with a germ
//! `f` expanded in `t′ = t − b`; it is linear in `p` and conjugate-linear in `f`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::least::{compute_least_space, FunctionSpace, LeastSpace};
use crate::linalg::{inverse, kernel, mat_vec, row_basis, Matrix};
use crate::monomial::{monomials_of_degree, MultiIndex};
use crate::poly::Polynomial;
use crate::scalar::Field;

pub fn pair_s<F: Field>(p: &Polynomial<F>, f: &Jet<F>) -> Result<F> {
    if let Some(d) = p.degree() {
        if !f.knows(d) {
            return Err(Error::TruncationInsufficient { module: "pairing", needed: d, available: f.order() });
        }
    }
    let mut acc = F::zero();
    for (nu, a) in p.terms() {
        let b = f.coeff(nu);
        if !b.is_zero() {
            acc = acc + F::from_bigint(nu.factorial()) * a.clone() * b.conj();
        }
    }
    Ok(acc)
}

/// Pairing of two polynomials, the second read as a germ in `t′`.
pub fn pair_polys<F: Field>(p: &Polynomial<F>, f: &Polynomial<F>) -> F {
    let mut acc = F::zero();
    for (nu, a) in p.terms() {
        let b = f.coeff(nu);
        if !b.is_zero() {
            acc = acc + F::from_bigint(nu.factorial()) * a.clone() * b.conj();
        }
    }
    acc
}

/// The least-interpolation projector onto a function space.
#[derive(Clone, Debug)]
pub struct Projector<F> {
    space: FunctionSpace<F>,
    least: LeastSpace<F>,
    duals: Vec<Polynomial<F>>,
    // terms ν!·q_ν of each dual, for repeated pairings
    weighted: Vec<Vec<(MultiIndex, F)>>,
    gram: Matrix<F>,
    gram_inverse: Matrix<F>,
}

/// Result of projecting a germ: coordinates over the generators and the
/// element of the space they describe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection<F> {
    pub coefficients: Vec<F>,
    pub jet: Jet<F>,
}

impl<F: Field> Projector<F> {
    pub fn new(space: FunctionSpace<F>) -> Result<Self> {
        let least = compute_least_space(&space)?;
        Self::with_least(space, least)
    }

    pub fn with_least(space: FunctionSpace<F>, least: LeastSpace<F>) -> Result<Self> {
        let duals = least.basis();
        if duals.len() != space.dimension() {
            return Err(Error::DimensionMismatch("least space and function space differ in dimension".into()));
        }
        let gram = duals
            .iter()
            .map(|q| space.generators().iter().map(|g| pair_s(q, g)).collect::<Result<Vec<F>>>())
            .collect::<Result<Matrix<F>>>()?;
        let gram_inverse = inverse(&gram).ok_or(Error::DegenerateGram)?;
        let weighted = duals
            .iter()
            .map(|q| q.terms().map(|(nu, a)| (nu.clone(), F::from_bigint(nu.factorial()) * a.clone())).collect())
            .collect();
        Ok(Projector { space, least, duals, weighted, gram, gram_inverse })
    }

    pub fn space(&self) -> &FunctionSpace<F> {
        &self.space
    }

    pub fn least(&self) -> &LeastSpace<F> {
        &self.least
    }

    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }

    pub fn dimension(&self) -> usize {
        self.duals.len()
    }

    /// The unique `Tf ∈ Z` with `S(q, Tf) = S(q, f)` for all `q` in the least space.
    pub fn taylor_project(&self, f: &Jet<F>) -> Result<Projection<F>> {
        let coefficients = self.coordinates(f)?;
        let jet = self.combine(&coefficients);
        Ok(Projection { coefficients, jet })
    }

    /// Coordinates of `Tf` over the generators.
    pub fn coordinates(&self, f: &Jet<F>) -> Result<Vec<F>> {
        let theta = self.least.max_degree();
        if !f.knows(theta) {
            return Err(Error::TruncationInsufficient { module: "pairing", needed: theta, available: f.order() });
        }
        let r: Vec<F> = self
            .weighted
            .iter()
            .map(|q| q.iter().fold(F::zero(), |acc, (nu, a)| acc + a.clone() * f.coeff(nu).conj()))
            .collect();
        // S(q_i, Σ c_j g_j) = Σ_j G_ij conj(c_j)
        Ok(mat_vec(&self.gram_inverse, &r).iter().map(|x| x.conj()).collect())
    }

    /// `Σ c_j g_j`.
    pub fn combine(&self, c: &[F]) -> Jet<F> {
        let gens = self.space.generators();
        let mut acc = gens[0].scale(&c[0]);
        for (cj, g) in c.iter().zip(gens).skip(1) {
            acc = acc.axpy(cj, g);
        }
        acc
    }
}

/// Per-degree annihilator of a least space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorBasis<F> {
    pub degree_bound: usize,
    /// For each `k ≤ degree_bound`, homogeneous polynomials in `t′` spanning the
    /// degree-`k` forms that pair to zero with the least space.
    pub per_degree: BTreeMap<usize, Vec<Polynomial<F>>>,
    /// Border monomials when the least space is spanned by monomials.
    pub monomial_generators: Option<Vec<MultiIndex>>,
}

/// Annihilator up to degree `d` (default: one more than the top least degree).
pub fn annihilator_basis<F: Field>(l: &LeastSpace<F>, d: Option<usize>) -> AnnihilatorBasis<F> {
    let n = l.nvars();
    let bound = d.unwrap_or(l.max_degree() + 1).max(l.max_degree());
    let per_degree = (0..=bound)
        .map(|k| (k, annihilator_block(l.block(k), n, k)))
        .collect();
    let monomial_generators = l.is_monomial().then(|| border_monomials(l, bound));
    AnnihilatorBasis { degree_bound: bound, per_degree, monomial_generators }
}

/// Degree-`k` forms `f` with `S(q, f) = 0` for every `q` in `block`.
pub fn annihilator_block<F: Field>(block: &[Polynomial<F>], n: usize, k: usize) -> Vec<Polynomial<F>> {
    let mons = monomials_of_degree(n, k);
    let weights: Vec<F> = mons.iter().map(|m| F::from_bigint(m.factorial())).collect();
    // rows: ν!·q_ν; kernel vectors are conj(f)
    let m: Matrix<F> = block
        .iter()
        .map(|q| q.block(k).into_iter().zip(&weights).map(|(a, w)| a * w.clone()).collect())
        .collect();
    let ker: Matrix<F> = if block.is_empty() {
        (0..mons.len())
            .map(|i| (0..mons.len()).map(|j| if i == j { F::one() } else { F::zero() }).collect())
            .collect()
    } else {
        kernel(&m, mons.len())
    };
    let conj: Matrix<F> = ker.iter().map(|v| v.iter().map(|x| x.conj()).collect()).collect();
    row_basis(&conj).iter().map(|r| Polynomial::from_block(n, k, r)).collect()
}

/// Minimal monomials (under divisibility) outside the staircase of a monomial
/// space, up to degree `bound`; ascending degree, then graded-descending.
fn border_monomials<F: Field>(l: &LeastSpace<F>, bound: usize) -> Vec<MultiIndex> {
    let n = l.nvars();
    let staircase: Vec<MultiIndex> =
        l.basis().iter().map(|p| p.leading().map(|(m, _)| m.clone()).unwrap()).collect();
    let mut found: Vec<MultiIndex> = Vec::new();
    for k in 0..=bound {
        for mu in monomials_of_degree(n, k) {
            if !staircase.contains(&mu) && !found.iter().any(|g| g.divides(&mu)) {
                found.push(mu);
            }
        }
    }
    found
}

/// Whether `t′_i·h` stays in the annihilator for every listed `h` below the bound.
pub fn annihilator_is_ideal<F: Field>(l: &LeastSpace<F>, ann: &AnnihilatorBasis<F>) -> bool {
    let n = l.nvars();
    ann.per_degree.iter().filter(|(&k, _)| k < ann.degree_bound).all(|(&k, hs)| {
        hs.iter().all(|h| {
            (0..n).all(|i| {
                let th = h.mul(&Polynomial::var(n, i));
                l.block(k + 1).iter().all(|q| pair_polys(q, &th).is_zero())
            })
        })
    })
}
