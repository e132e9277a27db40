//! The local Artinian algebra carried by a function space at a D-invariant point.
//!
//! When the least space is D-invariant the kernel of the Taylor projector is an
//! ideal, so `Z ≅ O/Ker T` inherits a multiplication `g_i ⋆ g_j = T(g_i·g_j)`.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::least::LeastSpace;
use crate::linalg::{conj_transpose, inverse, row_basis, Echelon, Matrix};
use crate::monomial::MultiIndex;
use crate::pairing::{annihilator_basis, Projector};
use crate::poly::default_names;
use crate::scalar::Field;

#[derive(Clone, Debug)]
pub struct ArtinAlgebra<F> {
    pub dimension: usize,
    pub labels: Vec<String>,
    /// `g_i ⋆ g_j = Σ_k c[i][j][k] g_k`.
    pub structure_constants: Vec<Vec<Vec<F>>>,
    /// Coordinates of the unit `T(1)`.
    pub unit: Vec<F>,
    /// Index of the generator equal to the unit, if there is one.
    pub unit_index: Option<usize>,
    /// Smallest `r` with `m^r = 0` for the maximal ideal `m`.
    pub nilpotency_index: usize,
    pub least: LeastSpace<F>,
    /// Leading monomials `ν_k` of the least-space basis. Their classes form a
    /// second basis in which the table is sparse.
    pub monomial_basis: Vec<MultiIndex>,
    /// Structure constants in the monomial basis.
    pub monomial_table: Vec<Vec<Vec<F>>>,
    /// Row `i` holds the coordinates of `g_i` in the monomial basis.
    pub change_of_basis: Matrix<F>,
}

impl<F: Field> ArtinAlgebra<F> {
    /// Multiplication table for the projector's generators, with every axiom checked.
    pub fn build(p: &Projector<F>) -> Result<Self> {
        let least = p.least().clone();
        if let Some(esc) = least.d_invariance() {
            let names = default_names("t", least.nvars());
            return Err(Error::NotDInvariant(format!(
                "d/d{} of {} is {}",
                names[esc.variable],
                esc.element.display_with(&names),
                esc.derivative.display_with(&names)
            )));
        }
        let theta = least.max_degree();
        let gens = p.space().generators();
        for g in gens {
            if !g.knows(theta) {
                return Err(Error::TruncationInsufficient { module: "artin", needed: theta, available: g.order() });
            }
        }
        let d = gens.len();
        let mut c = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in i..d {
                let prod = gens[i].mul(&gens[j], Some(theta)).truncate(theta);
                let coords = p.coordinates(&prod)?;
                c[j][i] = coords.clone();
                c[i][j] = coords;
            }
        }
        let one = Jet::constant(least.nvars(), p.space().base().to_vec(), F::one());
        let unit = p.coordinates(&one)?;
        let unit_index = (0..d).find(|&k| unit == basis_vector(d, k));
        let labels = (1..=d).map(|k| format!("g{k}")).collect();

        // In the basis of classes of t′^ν_k the coordinates of f are
        // conj(S(q_k, f))/ν_k!, because the least basis is reduced on its pivots.
        let duals = least.basis();
        let nus: Vec<MultiIndex> = duals.iter().map(|q| q.leading().expect("basis elements are nonzero").0.clone()).collect();
        let inv_fact: Vec<F> = nus.iter().map(|nu| F::from_bigint(nu.factorial()).inv()).collect();
        let monomial_table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mu = nus[i].add(&nus[j]);
                        let w = F::from_bigint(mu.factorial());
                        (0..d).map(|k| duals[k].coeff(&mu).conj() * w.clone() * inv_fact[k].clone()).collect()
                    })
                    .collect()
            })
            .collect();
        let gram = p.gram();
        let change_of_basis = (0..d).map(|i| (0..d).map(|k| gram[k][i].conj() * inv_fact[k].clone()).collect()).collect();
        let mut alg = ArtinAlgebra {
            dimension: d,
            labels,
            structure_constants: c,
            unit,
            unit_index,
            nilpotency_index: 0,
            least,
            monomial_basis: nus,
            monomial_table,
            change_of_basis,
        };
        alg.nilpotency_index = alg.nilpotency();
        alg.verify()?;
        Ok(alg)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dimension);
        self.labels = labels;
        self
    }

    /// Product of two elements given in generator coordinates.
    pub fn multiply(&self, x: &[F], y: &[F]) -> Vec<F> {
        multiply_with(&self.structure_constants, x, y)
    }

    fn constant_index(&self) -> Option<usize> {
        self.monomial_basis.iter().position(|nu| nu.degree() == 0)
    }

    // The maximal ideal is spanned by the classes of t′^ν with ν ≠ 0.
    fn nilpotency(&self) -> usize {
        let d = self.dimension;
        let ideal: Matrix<F> =
            (0..d).filter(|&k| self.monomial_basis[k].degree() > 0).map(|k| basis_vector(d, k)).collect();
        let mut power = ideal.clone();
        let mut r = 1;
        while !power.is_empty() && r <= d + 1 {
            let mut next = Vec::new();
            for x in &power {
                for y in &ideal {
                    next.push(multiply_with(&self.monomial_table, x, y));
                }
            }
            power = row_basis(&next);
            r += 1;
        }
        r
    }

    /// Commutativity, associativity on all basis triples, the unit law and
    /// `nilpotency_index ≤ θ + 1`.
    ///
    /// The axioms are checked exhaustively in the monomial basis; the generator
    /// table is then checked to be the same algebra under the change of basis.
    pub fn verify(&self) -> Result<()> {
        let d = self.dimension;
        let c = &self.structure_constants;
        let t = &self.monomial_table;
        for i in 0..d {
            for j in 0..d {
                if c[i][j] != c[j][i] || t[i][j] != t[j][i] {
                    return Err(Error::AxiomViolation(format!("g{} g{} is not commutative", i + 1, j + 1)));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = multiply_with(t, &t[i][j], &basis_vector(d, k));
                    let right = multiply_with(t, &basis_vector(d, i), &t[j][k]);
                    if left != right {
                        return Err(Error::AxiomViolation(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        let Some(one) = self.constant_index() else {
            return Err(Error::AxiomViolation("constants are missing from the least space".into()));
        };
        for j in 0..d {
            let e = basis_vector(d, j);
            if multiply_with(t, &basis_vector(d, one), &e) != e {
                return Err(Error::AxiomViolation(format!("unit law fails on basis element {j}")));
            }
        }
        let b = &self.change_of_basis;
        if inverse(b).is_none() {
            return Err(Error::AxiomViolation("change of basis is singular".into()));
        }
        let to_monomial = |x: &[F]| -> Vec<F> {
            let mut out = vec![F::zero(); d];
            for (xl, row) in x.iter().zip(b).filter(|(v, _)| !v.is_zero()) {
                for (o, r) in out.iter_mut().zip(row) {
                    *o = o.clone() + xl.clone() * r.clone();
                }
            }
            out
        };
        for i in 0..d {
            for j in i..d {
                if to_monomial(&c[i][j]) != multiply_with(t, &b[i], &b[j]) {
                    return Err(Error::AxiomViolation(format!(
                        "g{} g{} disagrees with the monomial table",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if to_monomial(&self.unit) != basis_vector(d, one) {
            return Err(Error::AxiomViolation("T(1) is not the unit".into()));
        }
        if self.nilpotency_index > self.least.max_degree() + 1 {
            return Err(Error::AxiomViolation(format!(
                "maximal ideal has nilpotency index {} > {}",
                self.nilpotency_index,
                self.least.max_degree() + 1
            )));
        }
        Ok(())
    }
}

fn multiply_with<F: Field>(table: &[Vec<Vec<F>>], x: &[F], y: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); x.len()];
    for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let w = xi.clone() * yj.clone();
            for (o, ck) in out.iter_mut().zip(&table[i][j]).filter(|(_, v)| !v.is_zero()) {
                *o = o.clone() + w.clone() * ck.clone();
            }
        }
    }
    out
}

fn basis_vector<F: Field>(d: usize, k: usize) -> Vec<F> {
    (0..d).map(|i| if i == k { F::one() } else { F::zero() }).collect()
}

/// Whether the linear change `J` carries the ideal of `a` onto that of `b`.
///
/// The convention is that `a`'s least space is `b`'s composed with `J`
/// (`L_a = L_b ∘ J`, as happens when `Z_a = Z_b ∘ J`). Degree by degree the
/// annihilator of `a` is then `{h(J*⁻¹ t)}` for `h` in the annihilator of `b`,
/// with `J*` the conjugate transpose; the spans are compared in reduced echelon form.
pub fn compare_under_linear_change<F: Field>(a: &ArtinAlgebra<F>, b: &ArtinAlgebra<F>, j: &Matrix<F>) -> Result<bool> {
    let n = a.least.nvars();
    if b.least.nvars() != n || j.len() != n || j.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("coordinate change does not match the algebras".into()));
    }
    if a.dimension != b.dimension {
        return Err(Error::DimensionMismatch(format!("algebras of dimension {} and {}", a.dimension, b.dimension)));
    }
    let Some(js) = inverse(&conj_transpose(j)) else {
        return Err(Error::SingularMatrix);
    };
    let bound = a.least.max_degree().max(b.least.max_degree()) + 1;
    let ann_a = annihilator_basis(&a.least, Some(bound));
    let ann_b = annihilator_basis(&b.least, Some(bound));
    for k in 0..=bound {
        let moved: Vec<_> = ann_b.per_degree[&k].iter().map(|h| h.substitute_linear(&js)).collect();
        let target = &ann_a.per_degree[&k];
        if moved.len() != target.len() {
            return Ok(false);
        }
        let mut ech = Echelon::new();
        for h in target {
            ech.insert(&h.block(k));
        }
        if !moved.iter().all(|h| ech.contains(&h.block(k))) {
            return Ok(false);
        }
    }
    Ok(true)
}
