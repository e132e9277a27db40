//! Parametrisations, pullbacks, the spaces `C[Φ]^d` and Bos–Calvi tangents.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::frontend::expr::Expr;
use crate::frontend::parser::parse_tuple;
use crate::jet::{compose_centered, truncated_compose, Jet as JetOf};
use crate::least::{compute_least_space, FunctionSpace, LeastSpace};
use crate::linalg::{rank, Echelon, Matrix};
use crate::monomial::{count_up_to, monomials_of_degree, monomials_up_to, MultiIndex};
use crate::pairing::pair_s;
use crate::poly::{default_names, Polynomial};
use crate::scalar::{binomial, Field};
use crate::{Jet, Poly, Scalar};

/// A germ of a map `Cⁿ → Cᵐ` at a Gaussian-rational base point, immersive there.
#[derive(Clone, Debug)]
pub struct Parametrization {
    components: Vec<Expr>,
    base: Vec<Scalar>,
    image: Vec<Scalar>,
    source_names: Vec<String>,
    target_names: Vec<String>,
}

impl Parametrization {
    pub fn new(
        components: Vec<Expr>,
        base: Vec<Scalar>,
        source_names: Vec<String>,
        target_names: Vec<String>,
    ) -> Result<Self> {
        let n = base.len();
        if source_names.len() != n {
            return Err(Error::Config(format!("{} variables but a base point of arity {n}", source_names.len())));
        }
        if target_names.len() != components.len() {
            return Err(Error::Config(format!(
                "{} target variables for {} components",
                target_names.len(),
                components.len()
            )));
        }
        let jets = components.iter().map(|c| c.to_jet(&base, 1)).collect::<Result<Vec<Jet>>>()?;
        let image: Vec<Scalar> = jets.iter().map(|j| j.value()).collect();
        let jac: Matrix<Scalar> = jets.iter().map(|j| j.block(1)).collect();
        let r = rank(&jac);
        if r < n {
            return Err(Error::NotAnImmersion { rank: r, n });
        }
        Ok(Parametrization { components, base, image, source_names, target_names })
    }

    /// Parse `(e1, …, em)` in the source variables; targets default to `x1 … xm`.
    pub fn parse(text: &str, vars: &[String], base: Vec<Scalar>) -> Result<Self> {
        let comps = parse_tuple(text, vars)?;
        let m = comps.len();
        Self::new(comps, base, vars.to_vec(), default_names("x", m))
    }

    /// The same germ map at another base point.
    pub fn at(&self, base: Vec<Scalar>) -> Result<Self> {
        Self::new(self.components.clone(), base, self.source_names.clone(), self.target_names.clone())
    }

    pub fn with_target_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.components.len() {
            return Err(Error::Config("wrong number of target variable names".into()));
        }
        self.target_names = names;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn base(&self) -> &[Scalar] {
        &self.base
    }

    /// `a = Φ(b)`.
    pub fn image(&self) -> &[Scalar] {
        &self.image
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn source_names(&self) -> &[String] {
        &self.source_names
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    /// Whether every component is a polynomial (all expansions exact).
    pub fn is_exact(&self) -> bool {
        self.components.iter().all(|c| c.is_polynomial())
    }

    /// Largest component degree for polynomial parametrisations.
    pub fn max_component_degree(&self) -> Option<usize> {
        self.components.iter().map(|c| c.degree(self.n())).collect::<Option<Vec<_>>>()?.into_iter().max()
    }

    /// Component jets (constant terms included) modulo degree `> k`; exact
    /// components are never truncated.
    pub fn component_jets(&self, k: usize) -> Result<Vec<Jet>> {
        self.components.iter().map(|c| c.to_jet(&self.base, k)).collect()
    }

    /// Component jets with the image point subtracted.
    pub fn centered_jets(&self, k: usize) -> Result<Vec<Jet>> {
        Ok(self
            .component_jets(k)?
            .iter()
            .zip(&self.image)
            .map(|(j, a)| j.sub(&JetOf::constant(self.n(), self.base.clone(), a.clone())))
            .collect())
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(|c| c.display_with(&self.source_names)).collect();
        format!("({})", parts.join(", "))
    }
}

/// `F(Φ − a)` for `F` written in target coordinates centred at `a = Φ(b)`.
pub fn pullback_polynomial(phi: &Parametrization, f: &Poly, k: usize) -> Result<Jet> {
    let us = phi.centered_jets(k)?;
    compose_centered(f, &us, Some(k))
}

/// `F ∘ Φ` for `F` in absolute target coordinates.
pub fn pullback_absolute(phi: &Parametrization, f: &Poly, k: usize) -> Result<Jet> {
    truncated_compose(f, &phi.component_jets(k)?, k)
}

/// The adjoint push-forward `Σ_μ S(p, (Φ − a)^μ)/μ! · ξ^μ` of a dual polynomial.
pub fn adjoint_pushforward(phi: &Parametrization, p: &Poly) -> Result<Poly> {
    let m = phi.m();
    let Some(d) = p.degree() else { return Ok(Polynomial::zero(m)) };
    let us = phi.centered_jets(d)?;
    let n = phi.n();
    let mut powers: BTreeMap<MultiIndex, Jet> = BTreeMap::new();
    powers.insert(MultiIndex::zero(m), JetOf::constant(n, phi.base().to_vec(), Scalar::from_i64(1)));
    let mut out = Polynomial::zero(m);
    for mu in monomials_up_to(m, d) {
        if !powers.contains_key(&mu) {
            let j = mu.0.iter().position(|&e| e > 0).unwrap();
            let parent = mu.checked_sub(&MultiIndex::unit(m, j)).unwrap();
            let next = powers[&parent].mul(&us[j], Some(d));
            powers.insert(mu.clone(), next);
        }
        let s = pair_s(p, &powers[&mu])?;
        if !s.is_zero() {
            out.add_term(mu.clone(), s / Scalar::from_bigint(mu.factorial()));
        }
    }
    Ok(out)
}

/// Default truncation for inexact inputs: twice the bound `binom(m + d, m)` on
/// the top least degree.
pub fn default_truncation(m: usize, d: usize) -> usize {
    2 * binomial(m + d, m)
}

/// A basis of `C[Φ]^d` from pulled-back monomials, with its graded data.
#[derive(Clone, Debug)]
pub struct PolynomialFunctionSpace {
    pub degree: usize,
    /// Exponents `α` of the monomials `x^α` whose pullbacks form the basis.
    pub labels: Vec<MultiIndex>,
    pub space: FunctionSpace<Scalar>,
    /// `dim C[Φ]^e` for `e = 0..=degree`.
    pub dims: Vec<usize>,
    /// `χ(e) = dims[e] − dims[e − 1]`.
    pub hilbert: Vec<usize>,
    pub least: LeastSpace<Scalar>,
    /// Truncation order used, `None` when everything was exact.
    pub truncation: Option<usize>,
    /// Whether the result was confirmed at twice the truncation order.
    pub stability_checked: bool,
}

impl PolynomialFunctionSpace {
    /// Sub-space `C[Φ]^e` for `e ≤ degree`.
    pub fn restrict(&self, e: usize) -> Result<FunctionSpace<Scalar>> {
        let gens: Vec<Jet> = self
            .labels
            .iter()
            .zip(self.space.generators())
            .filter(|(a, _)| a.degree() <= e)
            .map(|(_, g)| g.clone())
            .collect();
        FunctionSpace::new(self.space.base().to_vec(), gens)
    }

    /// Least space of `C[Φ]^e`.
    pub fn least_for(&self, e: usize) -> Result<LeastSpace<Scalar>> {
        if e >= self.degree {
            return Ok(self.least.clone());
        }
        compute_least_space(&self.restrict(e)?)
    }

    /// The polynomial `Σ c_j x^{α_j}` for coordinates over the basis.
    pub fn polynomial_of(&self, coefficients: &[Scalar]) -> Poly {
        let m = self.labels.first().map_or(0, |a| a.nvars());
        Polynomial::from_terms(m, self.labels.iter().cloned().zip(coefficients.iter().cloned()))
    }
}

fn build_space(phi: &Parametrization, d: usize, k: Option<usize>) -> Result<PolynomialFunctionSpace> {
    let m = phi.m();
    let kk = k.unwrap_or(0);
    let comps = phi.component_jets(kk)?;
    let cap = k;
    let base = phi.base().to_vec();
    let mut pulls: BTreeMap<MultiIndex, Jet> = BTreeMap::new();
    pulls.insert(MultiIndex::zero(m), JetOf::constant(phi.n(), base.clone(), Scalar::from_i64(1)));
    let mut ech = Echelon::new();
    let mut labels = Vec::new();
    let mut gens = Vec::new();
    let mut dims = Vec::with_capacity(d + 1);
    for e in 0..=d {
        for alpha in monomials_of_degree(m, e) {
            if !pulls.contains_key(&alpha) {
                let j = alpha.0.iter().position(|&x| x > 0).unwrap();
                let parent = alpha.checked_sub(&MultiIndex::unit(m, j)).unwrap();
                let next = pulls[&parent].mul(&comps[j], cap);
                pulls.insert(alpha.clone(), next);
            }
            let g = &pulls[&alpha];
            let depth = k.unwrap_or_else(|| g.order());
            if ech.insert(&g.flatten(depth)) {
                labels.push(alpha.clone());
                gens.push(g.clone());
            }
        }
        dims.push(labels.len());
    }
    let hilbert = dims.iter().enumerate().map(|(e, &v)| if e == 0 { v } else { v - dims[e - 1] }).collect();
    let space = FunctionSpace::new(base, gens)?;
    let least = compute_least_space(&space)?;
    Ok(PolynomialFunctionSpace {
        degree: d,
        labels,
        space,
        dims,
        hilbert,
        least,
        truncation: k,
        stability_checked: false,
    })
}

/// `C[Φ]^d = span{x^α ∘ Φ : |α| ≤ d}` with dimensions per degree and its least space.
///
/// Exact parametrisations need no truncation. Otherwise the expansion order is
/// `k` (default [`default_truncation`]) and the dimensions and least degrees are
/// recomputed at `2k` as a stability check.
pub fn polynomial_function_space(phi: &Parametrization, d: usize, k: Option<usize>) -> Result<PolynomialFunctionSpace> {
    if phi.is_exact() {
        return build_space(phi, d, None);
    }
    let k = k.unwrap_or_else(|| default_truncation(phi.m(), d));
    let mut first = build_space(phi, d, Some(k))?;
    let second = build_space(phi, d, Some(2 * k))?;
    if first.dims != second.dims || first.least.degrees() != second.least.degrees() {
        return Err(Error::StabilityCheckFailed {
            k,
            detail: format!(
                "dims {:?} vs {:?}, least degrees {:?} vs {:?}",
                first.dims,
                second.dims,
                first.least.degrees(),
                second.least.degrees()
            ),
        });
    }
    first.stability_checked = true;
    Ok(first)
}

/// Push-forwards of the least space of `C[Φ]^d`.
#[derive(Clone, Debug)]
pub struct BosCalviTangentSet {
    pub degree: usize,
    pub tangents: Vec<Poly>,
    pub source_least: LeastSpace<Scalar>,
}

pub fn bos_calvi_tangents(phi: &Parametrization, d: usize, k: Option<usize>) -> Result<BosCalviTangentSet> {
    let pfs = polynomial_function_space(phi, d, k)?;
    tangents_of(phi, &pfs)
}

pub fn tangents_of(phi: &Parametrization, pfs: &PolynomialFunctionSpace) -> Result<BosCalviTangentSet> {
    let tangents = pfs.least.basis().iter().map(|q| adjoint_pushforward(phi, q)).collect::<Result<Vec<_>>>()?;
    let top = tangents.iter().filter_map(|t| t.degree()).max().unwrap_or(0);
    let mons = monomials_up_to(phi.m(), top);
    let mut ech = Echelon::new();
    for t in &tangents {
        let v: Vec<Scalar> = mons.iter().map(|mu| t.coeff(mu)).collect();
        if !ech.insert(&v) {
            return Err(Error::DimensionMismatch("push-forwards are not independent".into()));
        }
    }
    Ok(BosCalviTangentSet { degree: pfs.degree, tangents, source_least: pfs.least.clone() })
}

/// Some element of the span has a nonzero coefficient at `ξ^μ`.
pub fn monomial_appears_in_span(tangents: &[Poly], mu: &MultiIndex) -> bool {
    tangents.iter().any(|t| !t.coeff(mu).is_zero())
}

/// Literal membership of `p` in the span.
pub fn span_contains(tangents: &[Poly], p: &Poly) -> bool {
    let top = tangents.iter().chain(std::iter::once(p)).filter_map(|t| t.degree()).max().unwrap_or(0);
    let m = p.nvars();
    let mons = monomials_up_to(m, top);
    let mut ech = Echelon::new();
    for t in tangents {
        ech.insert(&mons.iter().map(|mu| t.coeff(mu)).collect::<Vec<_>>());
    }
    debug_assert!(count_up_to(m, top) == mons.len());
    ech.contains(&mons.iter().map(|mu| p.coeff(mu)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parser::parse_scalar;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn sc(s: &str) -> Scalar {
        parse_scalar(s).unwrap()
    }

    fn xi(m: usize, i: usize) -> Poly {
        Polynomial::var(m, i)
    }

    #[test]
    fn immersion_check() {
        let v = names(&["t"]);
        assert!(Parametrization::parse("(t, t^2 + t^6)", &v, vec![sc("0")]).is_ok());
        let e = Parametrization::parse("(t^2, t^3)", &v, vec![sc("0")]).unwrap_err();
        assert_eq!(e, Error::NotAnImmersion { rank: 0, n: 1 });
        let e = Parametrization::parse("(t, exp1m(1 + t))", &v, vec![sc("0")]).unwrap_err();
        assert!(matches!(e, Error::NonRationalExpansion { .. }));
    }

    #[test]
    fn pullbacks() {
        let v = names(&["s"]);
        let phi = Parametrization::parse("(s, s^2 + s^6)", &v, vec![sc("0")]).unwrap();
        let (x, y) = (xi(2, 0), xi(2, 1));
        let curve = y.sub(&x.pow(2)).sub(&x.pow(6));
        assert!(pullback_polynomial(&phi, &curve, 8).unwrap().is_zero());
        let v = names(&["t"]);
        let e = Parametrization::parse("(t, exp1m(t))", &v, vec![sc("0")]).unwrap();
        let j = pullback_polynomial(&e, &x.pow(2), 5).unwrap();
        assert_eq!(j.to_poly(), Polynomial::var(1, 0).pow(2));
        let j = pullback_polynomial(&e, &y, 3).unwrap();
        assert_eq!(j.coeff(&MultiIndex(vec![3])), Scalar::from_ratio(1, 6));
    }

    #[test]
    fn difference_example_pushforwards() {
        let v = names(&["s1", "s2"]);
        for s2 in ["0", "1", "1/2"] {
            let b = sc(s2);
            let phi = Parametrization::parse("(s1, s2, s2^2)", &v, vec![sc("0"), b.clone()]).unwrap();
            let sigma2 = Polynomial::var(2, 1);
            let two_s2 = b.clone() * Scalar::from_i64(2);
            let want = xi(3, 1).add(&xi(3, 2).scale(&two_s2));
            assert_eq!(adjoint_pushforward(&phi, &sigma2).unwrap(), want);
            let want2 = xi(3, 2)
                .scale(&Scalar::from_i64(2))
                .add(&xi(3, 1).pow(2))
                .add(&xi(3, 1).mul(&xi(3, 2)).scale(&(two_s2.clone() * Scalar::from_i64(2))))
                .add(&xi(3, 2).pow(2).scale(&(two_s2.clone() * two_s2.clone())));
            assert_eq!(adjoint_pushforward(&phi, &sigma2.pow(2)).unwrap(), want2);
            assert_eq!(adjoint_pushforward(&phi, &Polynomial::one(2)).unwrap(), Polynomial::one(3));
        }
    }

    #[test]
    fn function_space_dimensions() {
        let v = names(&["t"]);
        let e = Parametrization::parse("(t, exp1m(t))", &v, vec![sc("0")]).unwrap();
        let pfs = polynomial_function_space(&e, 3, Some(24)).unwrap();
        assert_eq!(pfs.dims, vec![1, 3, 6, 10]);
        assert_eq!(pfs.least.max_degree(), 9);
        assert!(pfs.stability_checked);
        let v = names(&["s1", "s2"]);
        let phi = Parametrization::parse("(s1, s2, s2^2)", &v, vec![sc("0"), sc("0")]).unwrap();
        let pfs = polynomial_function_space(&phi, 1, None).unwrap();
        assert_eq!(pfs.dims, vec![1, 4]);
        assert_eq!(pfs.hilbert, vec![1, 3]);
        let pfs0 = polynomial_function_space(&phi, 0, None).unwrap();
        assert_eq!((pfs0.dims[0], pfs0.hilbert[0]), (1, 1));
    }

    #[test]
    fn tangent_sets() {
        let v = names(&["t1", "t2"]);
        let psi = Parametrization::parse("(t1 + t2, t2, t2^2)", &v, vec![sc("0"), sc("1")]).unwrap();
        let phi = Parametrization::parse("(t1, t2, t2^2)", &v, vec![sc("0"), sc("1")]).unwrap();
        let xi1_sq = MultiIndex(vec![2, 0, 0]);
        let tp = bos_calvi_tangents(&psi, 1, None).unwrap();
        let tf = bos_calvi_tangents(&phi, 1, None).unwrap();
        assert_eq!(tp.tangents.len(), 4);
        assert!(monomial_appears_in_span(&tp.tangents, &xi1_sq));
        assert!(!monomial_appears_in_span(&tf.tangents, &xi1_sq));
        assert!(!span_contains(&tf.tangents, &xi(3, 0).pow(2)));
        assert!(span_contains(&tf.tangents, &xi(3, 0)));
        let d0 = bos_calvi_tangents(&phi, 0, None).unwrap();
        assert_eq!(d0.tangents, vec![Polynomial::one(3)]);
    }
}
