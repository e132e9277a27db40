//! Sparse multivariate polynomials over an exact field.

use std::collections::BTreeMap;

use crate::monomial::{monomials_of_degree, MultiIndex};
use crate::scalar::Field;

/// A polynomial `Σ a_ν x^ν` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(MultiIndex::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn monomial(nu: MultiIndex, c: F) -> Self {
        let mut p = Self::zero(nu.nvars());
        p.add_term(nu, c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, i), F::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (nu, c) in terms {
            p.add_term(nu, c);
        }
        p
    }

    /// Homogeneous polynomial of degree `k` from coefficients in block order.
    pub fn from_block(nvars: usize, k: usize, coeffs: &[F]) -> Self {
        Self::from_terms(nvars, monomials_of_degree(nvars, k).into_iter().zip(coeffs.iter().cloned()))
    }

    pub fn add_term(&mut self, nu: MultiIndex, c: F) {
        debug_assert_eq!(nu.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&nu) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&nu);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(nu, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, nu: &MultiIndex) -> F {
        self.terms.get(nu).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Lowest total degree of a stored term.
    pub fn low_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.low_degree()
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Coefficients of the degree-`k` part in block order.
    pub fn block(&self, k: usize) -> Vec<F> {
        monomials_of_degree(self.nvars, k).iter().map(|m| self.coeff(m)).collect()
    }

    /// Leading (graded-largest) monomial and coefficient.
    pub fn leading(&self) -> Option<(&MultiIndex, &F)> {
        self.terms.iter().next_back()
    }

    /// Whether the polynomial is a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.add(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                out.add_term(m2, c.clone() * F::from_i64(e as i64));
            }
        }
        out
    }

    /// Coefficientwise conjugate.
    pub fn conj(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    pub fn eval(&self, point: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                t = t * x.pow(e);
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitute `x_i ↦ subs[i]`; the result lives in the variables of `subs`.
    pub fn compose(&self, subs: &[Polynomial<F>]) -> Polynomial<F> {
        assert_eq!(subs.len(), self.nvars);
        let out_vars = subs.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Polynomial<F>>> = subs.iter().map(|s| vec![Self::one(s.nvars)]).collect();
        let mut out = Self::zero(out_vars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// `p(J σ)`: each `x_i` replaced by `Σ_j J[i][j] σ_j`.
    pub fn substitute_linear(&self, j: &[Vec<F>]) -> Self {
        let n = self.nvars;
        let subs: Vec<Self> = (0..n)
            .map(|i| {
                Self::from_terms(n, (0..n).map(|k| (MultiIndex::unit(n, k), j[i][k].clone())))
            })
            .collect();
        self.compose(&subs)
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &[F]) -> Self {
        let n = self.nvars;
        if c.iter().all(|x| x.is_zero()) {
            return self.clone();
        }
        let subs: Vec<Self> =
            (0..n).map(|i| Self::var(n, i).add(&Self::constant(n, c[i].clone()))).collect();
        self.compose(&subs)
    }

    /// Human-readable rendering, largest terms first, e.g. `2*x3 + x2^2 - 4*x2*x3`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = m.display_with(names);
            let (neg, body) = format_coeff(c, &mono);
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// Splits off a leading sign of a coefficient when it is printable as such.
fn format_coeff<F: Field>(c: &F, mono: &str) -> (bool, String) {
    let s = c.to_string();
    let simple = !s[1..].contains(['+', '-']) && !s.contains('i');
    let (neg, mag) = match s.strip_prefix('-') {
        Some(rest) if simple => (true, rest.to_string()),
        _ => (false, s.clone()),
    };
    let mag = if simple { mag } else { format!("({mag})") };
    let body = if mono == "1" {
        mag
    } else if mag == "1" {
        mono.to_string()
    } else {
        format!("{mag}*{mono}")
    };
    (neg, body)
}

/// Default variable names `x1, …, xn`.
pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;
    use num_traits::{One, Zero};

    fn names() -> Vec<String> {
        vec!["s".into(), "t".into()]
    }

    fn st() -> (Polynomial<Q>, Polynomial<Q>) {
        (Polynomial::var(2, 0), Polynomial::var(2, 1))
    }

    #[test]
    fn arithmetic_and_display() {
        let (s, t) = st();
        let p = t.pow(2).add(&s.mul(&t.pow(2)));
        assert_eq!(p.display_with(&names()), "s*t^2 + t^2");
        assert_eq!(p.degree(), Some(3));
        assert!(!p.is_homogeneous());
        assert!(p.homogeneous_part(3).is_homogeneous());
        let q = p.sub(&p);
        assert!(q.is_zero());
        assert_eq!(q.degree(), None);
        let r = s.scale(&Q::from_ratio(-1, 2)).add(&Polynomial::constant(2, Q::i()));
        assert_eq!(r.display_with(&names()), "-1/2*s + (1*i)");
    }

    #[test]
    fn partial_derivatives() {
        let (s, t) = st();
        let p = s.mul(&t.pow(2));
        assert_eq!(p.partial(1), s.mul(&t).scale(&Q::from_i64(2)));
        let one = Polynomial::<Q>::var(1, 0);
        assert_eq!(one.pow(6).partial(0), one.pow(5).scale(&Q::from_i64(6)));
        assert!(Polynomial::constant(1, Q::from_i64(3)).partial(0).is_zero());
    }

    #[test]
    fn shift_and_substitution() {
        let (s, t) = st();
        // t^2 + s t^2 at (a, 0) with s = a + s'
        let p = t.pow(2).add(&s.mul(&t.pow(2)));
        let a = Q::from_i64(3);
        let shifted = p.shift(&[a.clone(), Q::zero()]);
        assert_eq!(shifted.homogeneous_part(2), t.pow(2).scale(&(Q::one() + a)));
        let j = vec![vec![Q::one(), Q::one()], vec![Q::zero(), Q::one()]];
        assert_eq!(t.pow(2).substitute_linear(&j), t.pow(2));
        assert_eq!(s.substitute_linear(&j), s.add(&t));
        assert_eq!(p.eval(&[Q::from_i64(2), Q::from_i64(1)]), Q::from_i64(3));
    }
}
