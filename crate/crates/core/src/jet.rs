//! Truncated power series at a base point.
//!
//! A [`Jet`] stores the Taylor coefficients of a germ in the shifted
//! coordinates `t′ = t − b`, one dense block per total degree (block order
//! from [`crate::monomial::monomials_of_degree`]). An *exact* jet is a
//! polynomial with nothing dropped; an inexact jet of order `K` is only known
//! modulo terms of degree `> K`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::monomial::{count, monomials_of_degree, MultiIndex};
use crate::poly::Polynomial;
use crate::scalar::Field;

/// Vanishing order: a degree or `+∞` for the zero germ.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum OrderValue {
    Finite(usize),
    Infinity,
}

impl OrderValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            OrderValue::Finite(k) => Some(k),
            OrderValue::Infinity => None,
        }
    }
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderValue::Finite(k) => write!(f, "{k}"),
            OrderValue::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for OrderValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OrderValue::Finite(k) => serializer.serialize_u64(*k as u64),
            OrderValue::Infinity => serializer.serialize_str("inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet<F> {
    nvars: usize,
    base: Vec<F>,
    order: usize,
    exact: bool,
    blocks: Vec<Vec<F>>,
}

fn zero_block<F: Field>(n: usize, k: usize) -> Vec<F> {
    vec![F::zero(); count(n, k)]
}

impl<F: Field> Jet<F> {
    /// Exact jet of a polynomial already written in shifted coordinates.
    pub fn from_poly(p: &Polynomial<F>, base: Vec<F>) -> Self {
        let n = p.nvars();
        let deg = p.degree().unwrap_or(0);
        let mut blocks: Vec<Vec<F>> = (0..=deg).map(|k| zero_block(n, k)).collect();
        for (m, c) in p.terms() {
            blocks[m.degree()][m.rank_in_degree()] = c.clone();
        }
        Jet { nvars: n, base, order: deg, exact: true, blocks }
    }

    /// Exact jet at `base` of a polynomial written in absolute coordinates.
    pub fn from_absolute_poly(p: &Polynomial<F>, base: Vec<F>) -> Self {
        let shifted = p.shift(&base);
        Self::from_poly(&shifted, base)
    }

    pub fn constant(nvars: usize, base: Vec<F>, c: F) -> Self {
        Self::from_poly(&Polynomial::constant(nvars, c), base)
    }

    /// Inexact jet from degree blocks `0..=order`.
    pub fn from_blocks(nvars: usize, base: Vec<F>, blocks: Vec<Vec<F>>, exact: bool) -> Self {
        assert!(!blocks.is_empty());
        for (k, b) in blocks.iter().enumerate() {
            assert_eq!(b.len(), count(nvars, k));
        }
        let order = blocks.len() - 1;
        let mut j = Jet { nvars, base, order, exact, blocks };
        j.normalize();
        j
    }

    fn normalize(&mut self) {
        if self.exact {
            while self.blocks.len() > 1 && self.blocks.last().unwrap().iter().all(|c| c.is_zero()) {
                self.blocks.pop();
            }
            self.order = self.blocks.len() - 1;
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn base(&self) -> &[F] {
        &self.base
    }

    /// Largest degree stored; for an exact jet this is its polynomial degree.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Degree through which coefficients are known: `None` means all of them.
    pub fn known_order(&self) -> Option<usize> {
        if self.exact {
            None
        } else {
            Some(self.order)
        }
    }

    /// Whether coefficients through degree `k` are known.
    pub fn knows(&self, k: usize) -> bool {
        self.exact || k <= self.order
    }

    pub fn block(&self, k: usize) -> Vec<F> {
        match self.blocks.get(k) {
            Some(b) => b.clone(),
            None => zero_block(self.nvars, k),
        }
    }

    pub fn block_ref(&self, k: usize) -> Option<&[F]> {
        self.blocks.get(k).map(|b| b.as_slice())
    }

    pub fn coeff(&self, nu: &MultiIndex) -> F {
        self.blocks
            .get(nu.degree())
            .map(|b| b[nu.rank_in_degree()].clone())
            .unwrap_or_else(F::zero)
    }

    /// Value at the base point.
    pub fn value(&self) -> F {
        self.blocks[0][0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|c| c.is_zero()))
    }

    /// Known part as a polynomial in the shifted coordinates.
    pub fn to_poly(&self) -> Polynomial<F> {
        let mut p = Polynomial::zero(self.nvars);
        for (k, b) in self.blocks.iter().enumerate() {
            for (m, c) in monomials_of_degree(self.nvars, k).into_iter().zip(b) {
                p.add_term(m, c.clone());
            }
        }
        p
    }

    /// Coefficients of degrees `0..=k` concatenated.
    pub fn flatten(&self, k: usize) -> Vec<F> {
        (0..=k).flat_map(|d| self.block(d)).collect()
    }

    /// Reduce modulo degree `> k`. Dropping nonzero terms makes the jet inexact.
    pub fn truncate(&self, k: usize) -> Self {
        if k >= self.order {
            return self.clone();
        }
        let dropped = self.blocks[k + 1..].iter().any(|b| b.iter().any(|c| !c.is_zero()));
        let mut j = Jet {
            nvars: self.nvars,
            base: self.base.clone(),
            order: k,
            exact: self.exact && !dropped,
            blocks: self.blocks[..=k].to_vec(),
        };
        j.normalize();
        j
    }

    fn combine_order(&self, other: &Self) -> (bool, usize) {
        match (self.known_order(), other.known_order()) {
            (None, None) => (true, self.order.max(other.order)),
            (Some(a), None) => (false, a),
            (None, Some(b)) => (false, b),
            (Some(a), Some(b)) => (false, a.min(b)),
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "jets in different numbers of variables");
        debug_assert_eq!(self.base, other.base, "jets at different base points");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&F::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&-F::one(), other)
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &F, other: &Self) -> Self {
        self.check_compatible(other);
        let (exact, order) = self.combine_order(other);
        let blocks = (0..=order)
            .map(|k| {
                let mut b = self.block(k);
                if let Some(o) = other.blocks.get(k) {
                    for (x, y) in b.iter_mut().zip(o) {
                        if !y.is_zero() {
                            *x = x.clone() + c.clone() * y.clone();
                        }
                    }
                }
                b
            })
            .collect();
        let mut j = Jet { nvars: self.nvars, base: self.base.clone(), order, exact, blocks };
        j.normalize();
        j
    }

    pub fn scale(&self, c: &F) -> Self {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|x| x.clone() * c.clone()).collect()).collect();
        let mut j = Jet { nvars: self.nvars, base: self.base.clone(), order: self.order, exact: self.exact, blocks };
        j.normalize();
        j
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    /// Product, optionally reduced modulo degree `> cap`.
    pub fn mul(&self, other: &Self, cap: Option<usize>) -> Self {
        self.check_compatible(other);
        let (exact, mut order) = match (self.known_order(), other.known_order()) {
            (None, None) => (true, self.order + other.order),
            (Some(a), None) => (false, a),
            (None, Some(b)) => (false, b),
            (Some(a), Some(b)) => (false, a.min(b)),
        };
        let mut exact = exact;
        if let Some(c) = cap {
            if c < order {
                order = c;
                // conservatively inexact; an exact product that fits is fixed up below
                if exact {
                    let full = self.mul(other, None);
                    return full.truncate(c);
                }
                exact = false;
            }
        }
        let n = self.nvars;
        let mons: Vec<Vec<MultiIndex>> = (0..=order).map(|k| monomials_of_degree(n, k)).collect();
        let mut blocks: Vec<Vec<F>> = (0..=order).map(|k| zero_block(n, k)).collect();
        for (d1, b1) in self.blocks.iter().enumerate().take(order + 1) {
            for (i1, c1) in b1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (d2, b2) in other.blocks.iter().enumerate().take(order + 1 - d1) {
                    for (i2, c2) in b2.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        let m = mons[d1][i1].add(&mons[d2][i2]);
                        let slot = &mut blocks[d1 + d2][m.rank_in_degree()];
                        *slot = slot.clone() + c1.clone() * c2.clone();
                    }
                }
            }
        }
        let mut j = Jet { nvars: n, base: self.base.clone(), order, exact, blocks };
        j.normalize();
        j
    }

    pub fn pow(&self, e: u32, cap: Option<usize>) -> Self {
        let mut acc = Jet::constant(self.nvars, self.base.clone(), F::one());
        for _ in 0..e {
            acc = acc.mul(self, cap);
        }
        acc
    }

    /// Lowest nonzero homogeneous component (in the dual variables) and its degree.
    pub fn least_part(&self) -> Result<(Polynomial<F>, OrderValue)> {
        for (k, b) in self.blocks.iter().enumerate() {
            if b.iter().any(|c| !c.is_zero()) {
                return Ok((Polynomial::from_block(self.nvars, k, b), OrderValue::Finite(k)));
            }
        }
        if self.exact {
            Ok((Polynomial::zero(self.nvars), OrderValue::Infinity))
        } else {
            Err(Error::TruncationAmbiguous { order: self.order })
        }
    }

    pub fn order_of(&self) -> Result<OrderValue> {
        self.least_part().map(|(_, o)| o)
    }

    /// Order as far as it is known: `Finite(k)` or, for an inexact zero jet,
    /// `Err(order)` meaning "greater than `order`".
    pub fn order_lower_bound(&self) -> std::result::Result<OrderValue, usize> {
        self.order_of().map_err(|_| self.order)
    }

    /// `∂f/∂t_i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        // for |ν| = 1 the normalized derivative is the ordinary one
        self.normalized_derivative(&MultiIndex::unit(self.nvars, i))
    }

    /// `(1/ν!) ∂^ν f`: coefficient at `μ` is `binom(μ+ν, ν) f_{μ+ν}`.
    pub fn normalized_derivative(&self, nu: &MultiIndex) -> Result<Self> {
        let d = nu.degree();
        if !self.exact && d > self.order {
            return Err(Error::TruncationInsufficient { module: "core", needed: d, available: self.order });
        }
        let n = self.nvars;
        let order = self.order.saturating_sub(d);
        let blocks = (0..=order)
            .map(|k| {
                monomials_of_degree(n, k)
                    .iter()
                    .map(|mu| {
                        let full = mu.add(nu);
                        let c = self.coeff(&full);
                        if c.is_zero() {
                            c
                        } else {
                            c * F::from_bigint(full.binomial(nu))
                        }
                    })
                    .collect()
            })
            .collect();
        let mut j = Jet { nvars: n, base: self.base.clone(), order, exact: self.exact, blocks };
        j.normalize();
        Ok(j)
    }

    /// Re-expand an exact jet at another base point.
    pub fn recenter(&self, new_base: &[F]) -> Self {
        assert!(self.exact, "only exact jets can be re-centred");
        let delta: Vec<F> = new_base.iter().zip(&self.base).map(|(a, b)| a.clone() - b.clone()).collect();
        Self::from_poly(&self.to_poly().shift(&delta), new_base.to_vec())
    }

    /// `Σ_k c_k u^k` modulo degree `> k_max`, for `u` vanishing at the base point.
    pub fn compose_series(coeffs: &[F], u: &Self, k_max: usize) -> Result<Self> {
        assert!(u.value().is_zero(), "series argument must vanish at the base point");
        if !u.exact && u.order < k_max {
            return Err(Error::TruncationInsufficient { module: "core", needed: k_max, available: u.order });
        }
        let mut acc = Jet::from_blocks(
            u.nvars,
            u.base.clone(),
            (0..=k_max).map(|k| zero_block(u.nvars, k)).collect(),
            false,
        );
        let mut power = Jet::constant(u.nvars, u.base.clone(), F::one());
        for (k, c) in coeffs.iter().enumerate().take(k_max + 1) {
            if k > 0 {
                power = power.mul(u, Some(k_max));
            }
            if !c.is_zero() {
                acc = acc.axpy(c, &power);
            }
        }
        Ok(acc)
    }
}

/// `G(u_1, …, u_m)` for `G` in coordinates centred at the image point and
/// component jets `u_j` vanishing at the base point.
///
/// With all inputs exact the composition is computed in full and then reduced
/// modulo degree `> k`, so the result stays exact whenever it fits.
pub fn compose_centered<F: Field>(g: &Polynomial<F>, us: &[Jet<F>], k: Option<usize>) -> Result<Jet<F>> {
    assert_eq!(g.nvars(), us.len());
    assert!(!us.is_empty());
    let n = us[0].nvars;
    let base = us[0].base.clone();
    let all_exact = us.iter().all(|u| u.exact);
    let cap = if all_exact {
        None
    } else {
        let min_known = us.iter().filter_map(|u| u.known_order()).min().unwrap();
        let k = k.unwrap_or(min_known);
        if min_known < k {
            return Err(Error::TruncationInsufficient { module: "core", needed: k, available: min_known });
        }
        Some(k)
    };
    let mut powers: Vec<Vec<Jet<F>>> = us.iter().map(|_| vec![Jet::constant(n, base.clone(), F::one())]).collect();
    let mut acc = match cap {
        Some(c) => Jet::from_blocks(n, base.clone(), (0..=c).map(|d| zero_block(n, d)).collect(), false),
        None => Jet::constant(n, base.clone(), F::zero()),
    };
    for (m, c) in g.terms() {
        let mut t = Jet::constant(n, base.clone(), c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().mul(&us[i], cap);
                powers[i].push(next);
            }
            if e > 0 {
                t = t.mul(&powers[i][e as usize], cap);
            }
        }
        acc = acc.add(&t);
    }
    Ok(match (cap, k) {
        (None, Some(k)) => acc.truncate(k),
        _ => acc,
    })
}

/// `F ∘ Φ` reduced modulo degree `> k`, for `F` in absolute target coordinates
/// and component jets `comps` (constant terms included).
pub fn truncated_compose<F: Field>(f: &Polynomial<F>, comps: &[Jet<F>], k: usize) -> Result<Jet<F>> {
    for c in comps {
        if !c.exact && c.order < k {
            return Err(Error::TruncationInsufficient { module: "core", needed: k, available: c.order });
        }
    }
    let a: Vec<F> = comps.iter().map(|c| c.value()).collect();
    let us: Vec<Jet<F>> = comps
        .iter()
        .zip(&a)
        .map(|(c, ai)| c.sub(&Jet::constant(c.nvars, c.base.clone(), ai.clone())))
        .collect();
    compose_centered(&f.shift(&a), &us, Some(k))
}
