//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use leastinterp::jet::Jet as JetOf;
use leastinterp::least::FunctionSpace;
use leastinterp::monomial::monomials_up_to;
use leastinterp::poly::{default_names, Polynomial};
use leastinterp::pushforward::Parametrization;
use leastinterp::{Field, Jet, Poly, Rational, Scalar, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Scalar {
    Scalar::from_i64(n)
}

pub fn rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(
        Rational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into()),
        Rational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into()),
    )
}

/// Sparse polynomial of degree `≤ deg` with terms kept with probability `density`.
pub fn poly_with(
    rng: &mut ChaCha8Rng,
    n: usize,
    lo: usize,
    deg: usize,
    density: f64,
    coeff: fn(&mut ChaCha8Rng) -> Scalar,
) -> Poly {
    let mut p = Polynomial::zero(n);
    for mu in monomials_up_to(n, deg) {
        if mu.degree() >= lo && rng.gen_bool(density) {
            p.add_term(mu, coeff(rng));
        }
    }
    p
}

pub fn names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["t".to_string()]
    } else {
        default_names("t", n)
    }
}

/// A random polynomial immersion germ with `n ≤ 2`, `m ≤ 4` and component degree `≤ 3`.
///
/// Half of the germs are graphs over the first `n` coordinates at the origin
/// with no linear terms in the remaining components, which makes special
/// points common.
pub fn parametrization(rng: &mut ChaCha8Rng) -> Parametrization {
    loop {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(n + 1..=4);
        let vars = names(n);
        let graph = rng.gen_bool(0.5);
        let comps: Vec<Poly> = (0..m)
            .map(|i| {
                if graph && i < n {
                    Polynomial::var(n, i)
                } else if graph {
                    poly_with(rng, n, 2, 3, 0.4, rational)
                } else {
                    poly_with(rng, n, 0, 3, 0.35, rational)
                }
            })
            .collect();
        if comps.iter().any(|c| c.is_zero()) && !graph {
            continue;
        }
        let base: Vec<Scalar> = (0..n).map(|_| if graph { Scalar::zero() } else { rational(rng) }).collect();
        let text = format!(
            "({})",
            comps.iter().map(|c| if c.is_zero() { "0".to_string() } else { c.display_with(&vars) }).collect::<Vec<_>>().join(", ")
        );
        if let Ok(phi) = Parametrization::parse(&text, &vars, base) {
            return phi;
        }
    }
}

/// Exact jets of the given absolute polynomials at `base`.
pub fn jets_at(polys: &[Poly], base: &[Scalar]) -> Vec<Jet> {
    polys.iter().map(|p| JetOf::from_absolute_poly(p, base.to_vec())).collect()
}

/// A random space of 1–6 independent polynomials in two variables at a random point.
pub fn function_space(rng: &mut ChaCha8Rng) -> FunctionSpace<Scalar> {
    loop {
        let k = rng.gen_range(1..=6);
        let polys: Vec<Poly> = (0..k).map(|_| poly_with(rng, 2, 0, 3, 0.3, gaussian)).collect();
        let base = vec![rational(rng), rational(rng)];
        if let Ok(z) = FunctionSpace::new(base.clone(), jets_at(&polys, &base)) {
            return z;
        }
    }
}

/// A random invertible `n × n` Gaussian-rational matrix.
pub fn invertible(rng: &mut ChaCha8Rng, n: usize) -> leastinterp::linalg::Matrix<Scalar> {
    loop {
        let j: leastinterp::linalg::Matrix<Scalar> = (0..n).map(|_| (0..n).map(|_| gaussian(rng)).collect()).collect();
        if !leastinterp::linalg::determinant(&j).is_zero() {
            return j;
        }
    }
}

/// A random exact jet at a random point, from a polynomial in shifted coordinates.
pub fn jet(rng: &mut ChaCha8Rng, n: usize, lo: usize, deg: usize) -> Jet {
    let base = (0..n).map(|_| rational(rng)).collect();
    JetOf::from_poly(&poly_with(rng, n, lo, deg, 0.4, gaussian), base)
}
