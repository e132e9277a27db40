//! Properties of parametrised germs: push-forwards, function spaces, the
//! Artinian algebra and the zero-estimate table.

mod common;

use common::*;
use leastinterp::artin::ArtinAlgebra;
use leastinterp::invariants::{classify_point, zero_estimate_table, Taylorian};
use leastinterp::jet::Jet as JetOf;
use leastinterp::linalg::{inverse, mat_vec, rank, Matrix};
use leastinterp::monomial::monomials_up_to;
use leastinterp::pairing::{pair_polys, pair_s, Projector};
use leastinterp::poly::Polynomial;
use leastinterp::pushforward::{
    adjoint_pushforward, bos_calvi_tangents, polynomial_function_space, pullback_polynomial, Parametrization,
};
use leastinterp::scalar::binomial;
use leastinterp::wronskian::SamplingConfig;
use leastinterp::{Error, One, Poly, Scalar, Zero};
use proptest::prelude::*;
use rand::Rng;

fn component_polys(phi: &Parametrization) -> Vec<Poly> {
    phi.components().iter().map(|c| c.to_poly(phi.n()).unwrap()).collect()
}

fn reparse(polys: &[Poly], vars: &[String], base: Vec<Scalar>) -> Parametrization {
    let text: Vec<String> = polys
        .iter()
        .map(|p| if p.is_zero() { "0".to_string() } else { p.display_with(vars) })
        .collect();
    Parametrization::parse(&format!("({})", text.join(", ")), vars, base).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pushforward_is_adjoint_to_pullback(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = parametrization(&mut r);
        let (n, m) = (phi.n(), phi.m());
        let p = poly_with(&mut r, n, 0, 3, 0.5, gaussian);
        let Some(deg) = p.degree() else { return Ok(()) };
        let pushed = adjoint_pushforward(&phi, &p).unwrap();
        prop_assert!(pushed.degree().map_or(true, |d| d <= deg));
        for mu in monomials_up_to(m, deg) {
            let x_mu = Polynomial::monomial(mu, Scalar::one());
            let lhs = pair_polys(&pushed, &x_mu);
            let rhs = pair_s(&p, &pullback_polynomial(&phi, &x_mu, deg).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn function_spaces_and_tangents(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = parametrization(&mut r);
        let (n, m) = (phi.n(), phi.m());
        let d = r.gen_range(1..=2);
        let pfs = polynomial_function_space(&phi, d, None).unwrap();
        prop_assert_eq!(pfs.dims[0], 1);
        for e in 1..=d {
            prop_assert!(pfs.hilbert[e] >= 1);
            prop_assert_eq!(pfs.hilbert[e], pfs.dims[e] - pfs.dims[e - 1]);
            prop_assert!(pfs.dims[e] <= binomial(m + e, m));
        }
        prop_assert!(pfs.hilbert[1] >= n);
        let t = bos_calvi_tangents(&phi, d, None).unwrap();
        prop_assert_eq!(t.tangents.len(), pfs.dims[d]);
        let theta = pfs.least.max_degree();
        prop_assert!(t.tangents.iter().all(|p| p.degree().unwrap() <= theta));
        let cols = monomials_up_to(m, theta);
        let mat: Matrix<Scalar> = t.tangents.iter().map(|p| cols.iter().map(|mu| p.coeff(mu)).collect()).collect();
        prop_assert_eq!(rank(&mat), t.tangents.len());
    }

    #[test]
    fn least_spaces_follow_linear_reparametrisation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = loop {
            let p = parametrization(&mut r);
            if p.n() == 2 {
                break p;
            }
        };
        let j = loop {
            let j: Matrix<Scalar> = (0..2).map(|_| (0..2).map(|_| rational(&mut r)).collect()).collect();
            if inverse(&j).is_some() {
                break j;
            }
        };
        let comps: Vec<Poly> = component_polys(&phi).iter().map(|c| c.substitute_linear(&j)).collect();
        let base = mat_vec(&inverse(&j).unwrap(), phi.base());
        let psi = reparse(&comps, phi.source_names(), base);
        let a = polynomial_function_space(&phi, 2, None).unwrap();
        let b = polynomial_function_space(&psi, 2, None).unwrap();
        prop_assert_eq!(b.least, a.least.apply_linear_substitution(&j).unwrap());
    }

    #[test]
    fn affine_changes_of_the_target(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = parametrization(&mut r);
        let m = phi.m();
        let a = loop {
            let a: Matrix<Scalar> = (0..m).map(|_| (0..m).map(|_| rational(&mut r)).collect()).collect();
            if inverse(&a).is_some() {
                break a;
            }
        };
        let comps = component_polys(&phi);
        let moved: Vec<Poly> = a
            .iter()
            .map(|row| {
                let shift = Poly::constant(phi.n(), rational(&mut r));
                row.iter().zip(&comps).fold(shift, |acc, (c, p)| acc.add(&p.scale(c)))
            })
            .collect();
        let psi = reparse(&moved, phi.source_names(), phi.base().to_vec());
        let (ta, tb) = (zero_estimate_table(&phi, 2, None).unwrap(), zero_estimate_table(&psi, 2, None).unwrap());
        prop_assert_eq!(ta.rows, tb.rows);
        let cfg = SamplingConfig::default();
        let (ca, cb) = (classify_point(&phi, 2, None, &cfg).unwrap(), classify_point(&psi, 2, None, &cfg).unwrap());
        prop_assert_eq!((ca.bundle, ca.d_invariant, ca.taylorian), (cb.bundle, cb.d_invariant, cb.taylorian));
    }

    #[test]
    fn zero_estimate_rows(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = parametrization(&mut r);
        let (n, m) = (phi.n(), phi.m());
        let t = zero_estimate_table(&phi, 3, None).unwrap();
        for row in &t.rows {
            prop_assert!(row.lambda >= row.degree);
            prop_assert!(row.theta >= row.lambda);
            if row.d_invariant {
                prop_assert!(binomial(n + row.degree, n) + row.theta - row.degree <= row.dim);
                prop_assert!(row.dim <= binomial(m + row.degree, m));
            }
        }
        let c = classify_point(&phi, 2, None, &SamplingConfig::default()).unwrap();
        prop_assert!(!c.bundle || c.d_invariant);
        if n == 1 {
            prop_assert_eq!(c.d_invariant, c.taylorian == Taylorian::True);
            prop_assert_eq!(c.bundle, c.d_invariant);
        } else {
            prop_assert_eq!(c.taylorian, Taylorian::NotApplicable);
        }
    }

    #[test]
    fn artinian_algebras(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = parametrization(&mut r);
        let pfs = polynomial_function_space(&phi, 2, None).unwrap();
        let p = Projector::with_least(pfs.space.clone(), pfs.least.clone()).unwrap();
        match ArtinAlgebra::build(&p) {
            Ok(a) => {
                prop_assert_eq!(a.dimension, pfs.space.dimension());
                prop_assert_eq!(a.dimension, pfs.least.dim());
                prop_assert!(a.nilpotency_index <= pfs.least.max_degree() + 1);
                let u = a.unit.clone();
                for i in 0..a.dimension {
                    let e: Vec<Scalar> = (0..a.dimension).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect();
                    prop_assert_eq!(a.multiply(&u, &e), e);
                }
                let base = phi.base().to_vec();
                let f = JetOf::from_poly(&poly_with(&mut r, phi.n(), 0, 3, 0.5, gaussian), base.clone());
                let g = JetOf::from_poly(&poly_with(&mut r, phi.n(), 0, 3, 0.5, gaussian), base);
                let (tf, tg) = (p.taylor_project(&f).unwrap(), p.taylor_project(&g).unwrap());
                let lhs = p.taylor_project(&f.mul(&g, None)).unwrap().coefficients;
                prop_assert_eq!(&lhs, &p.taylor_project(&tf.jet.mul(&tg.jet, None)).unwrap().coefficients);
                prop_assert_eq!(lhs, a.multiply(&tf.coefficients, &tg.coefficients));
            }
            Err(Error::NotDInvariant(_)) => prop_assert!(pfs.least.d_invariance().is_some()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}

