//! Zero-estimate tables and point classification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pushforward::{polynomial_function_space, Parametrization, PolynomialFunctionSpace};
use crate::scalar::binomial;
use crate::wronskian::{is_bundle_point, BundleCertificate, SamplingConfig};

/// Caveat attached to every slope: the transcendency index is a limit superior
/// and a fit over a handful of degrees only approximates it.
pub const SLOPE_CAVEAT: &str = "desk-scale proxy for limsup";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZeroEstimateRow {
    pub degree: usize,
    pub dim: usize,
    pub hilbert: usize,
    pub theta: usize,
    pub lambda: usize,
    /// `binom(n + e, n) + θ(e) − e`.
    pub lower_bound: usize,
    /// `binom(m + e, m)`.
    pub upper_bound: usize,
    pub d_invariant: bool,
    /// The two-sided inequality; only asserted at D-invariant rows.
    pub inequality_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LinearBound {
    pub a: usize,
    pub b: usize,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZeroEstimateReport {
    pub rows: Vec<ZeroEstimateRow>,
    /// Fit of `log θ(e) = α·log e` over `e ≥ 2`; `None` with fewer than one such row.
    pub slope: Option<f64>,
    pub slope_caveat: &'static str,
    /// `θ(e) ≤ a·e + b` with `a = n·(max component degree)`; polynomial inputs only.
    pub linear_bound: Option<LinearBound>,
    pub truncation: Option<usize>,
    pub stability_checked: bool,
}

/// `θ`, `λ`, dimensions and bounds for `e = 0..=d_max`.
pub fn zero_estimate_table(phi: &Parametrization, d_max: usize, k: Option<usize>) -> Result<ZeroEstimateReport> {
    zero_estimate_from(phi, &polynomial_function_space(phi, d_max, k)?)
}

/// The table for every degree of an already computed `C[Φ]^d`.
pub fn zero_estimate_from(phi: &Parametrization, pfs: &PolynomialFunctionSpace) -> Result<ZeroEstimateReport> {
    let (n, m) = (phi.n(), phi.m());
    let d_max = pfs.degree;
    let mut rows = Vec::with_capacity(d_max + 1);
    for e in 0..=d_max {
        let least = pfs.least_for(e)?;
        let theta = least.max_degree();
        let dim = pfs.dims[e];
        let lower = binomial(n + e, n) + theta - e;
        let upper = binomial(m + e, m);
        let d_invariant = least.d_invariance().is_none();
        rows.push(ZeroEstimateRow {
            degree: e,
            dim,
            hilbert: pfs.hilbert[e],
            theta,
            lambda: least.full_degree().unwrap_or(0),
            lower_bound: lower,
            upper_bound: upper,
            d_invariant,
            inequality_holds: d_invariant.then_some(lower <= dim && dim <= upper),
        });
    }
    let slope = fit_slope(&rows);
    let linear_bound = phi.max_component_degree().map(|deg| {
        let a = n * deg;
        let b = rows.get(1).map_or(0, |r| r.theta.saturating_sub(a));
        let satisfied = rows.iter().all(|r| r.theta <= a * r.degree + b);
        LinearBound { a, b, satisfied }
    });
    Ok(ZeroEstimateReport {
        rows,
        slope,
        slope_caveat: SLOPE_CAVEAT,
        linear_bound,
        truncation: pfs.truncation,
        stability_checked: pfs.stability_checked,
    })
}

// Least squares through the origin in log–log coordinates.
fn fit_slope(rows: &[ZeroEstimateRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.degree >= 2 && r.theta > 0)
        .map(|r| ((r.degree as f64).ln(), (r.theta as f64).ln()))
        .collect();
    if pts.is_empty() {
        return None;
    }
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    Some(sxy / sxx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Taylorian {
    True,
    False,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PointClassification {
    pub degree: usize,
    pub bundle: bool,
    pub d_invariant: bool,
    pub taylorian: Taylorian,
    /// Smallest degree missing from the least space of a curve.
    pub gap_witness: Option<usize>,
    pub least_degrees: Vec<usize>,
    pub certificate: BundleCertificate,
}

/// Bundle, D-invariance and (for curves) Taylorian status of `C[Φ]^d` at the base point.
pub fn classify_point(
    phi: &Parametrization,
    d: usize,
    k: Option<usize>,
    cfg: &SamplingConfig,
) -> Result<PointClassification> {
    classify_space(phi, &polynomial_function_space(phi, d, k)?, cfg)
}

/// Classification from an already computed `C[Φ]^d`.
pub fn classify_space(phi: &Parametrization, pfs: &PolynomialFunctionSpace, cfg: &SamplingConfig) -> Result<PointClassification> {
    let d = pfs.degree;
    let certificate = is_bundle_point(&pfs.space, cfg)?;
    let d_invariant = pfs.least.d_invariance().is_none();
    let degrees = pfs.least.degrees();
    let (taylorian, gap_witness) = if phi.n() == 1 {
        let gap = (0..degrees.len()).find(|e| !degrees.contains(e));
        (if gap.is_none() { Taylorian::True } else { Taylorian::False }, gap)
    } else {
        (Taylorian::NotApplicable, None)
    };
    let bundle = certificate.bundle;
    if bundle && !d_invariant {
        return Err(Error::InconsistentClassification("bundle point whose least space is not D-invariant".into()));
    }
    if phi.n() == 1 && (bundle != d_invariant || d_invariant != (taylorian == Taylorian::True)) {
        return Err(Error::InconsistentClassification(format!(
            "curve flags disagree: bundle {bundle}, D-invariant {d_invariant}, taylorian {taylorian:?}"
        )));
    }
    Ok(PointClassification {
        degree: d,
        bundle,
        d_invariant,
        taylorian,
        gap_witness,
        least_degrees: degrees,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parser::parse_scalar;
    use crate::Scalar;

    fn curve(text: &str, b: &str) -> Parametrization {
        Parametrization::parse(text, &["t".to_string()], vec![parse_scalar(b).unwrap()]).unwrap()
    }

    #[test]
    fn exponential_curve() {
        let r = zero_estimate_table(&curve("(t, exp1m(t))", "0"), 4, Some(30)).unwrap();
        let thetas: Vec<usize> = r.rows.iter().map(|r| r.theta).collect();
        assert_eq!(thetas, vec![0, 2, 5, 9, 14]);
        assert!(r.rows.iter().all(|r| r.dim == (r.degree + 1) * (r.degree + 2) / 2));
        assert!(r.rows.iter().all(|r| r.lambda >= r.degree));
        assert!(r.linear_bound.is_none());
        let s = r.slope.unwrap();
        assert!((1.8..=2.2).contains(&s), "{s}");
    }

    #[test]
    fn parabola() {
        let r = zero_estimate_table(&curve("(t, t^2)", "0"), 5, None).unwrap();
        for row in &r.rows {
            assert_eq!(row.theta, 2 * row.degree);
            assert_eq!(row.dim, 2 * row.degree + 1);
            assert_eq!(row.inequality_holds, Some(true));
        }
        assert_eq!((r.rows[0].theta, r.rows[0].lambda, r.rows[0].dim), (0, 0, 1));
        assert_eq!(r.linear_bound, Some(LinearBound { a: 2, b: 0, satisfied: true }));
        assert_eq!(r.truncation, None);
    }

    #[test]
    fn gap_curve() {
        let cfg = SamplingConfig::default();
        let c = classify_point(&curve("(t, t^2 + t^6)", "0"), 2, None, &cfg).unwrap();
        assert_eq!(c.least_degrees, vec![0, 1, 2, 3, 4, 6]);
        assert_eq!((c.bundle, c.d_invariant, c.taylorian, c.gap_witness), (false, false, Taylorian::False, Some(5)));
        let c = classify_point(&curve("(t, t^2 + t^6)", "1"), 2, None, &cfg).unwrap();
        assert_eq!((c.bundle, c.d_invariant, c.taylorian, c.gap_witness), (true, true, Taylorian::True, None));
    }

    #[test]
    fn surface_not_bundle() {
        let v = vec!["s".to_string(), "t".to_string()];
        let b = vec![Scalar::from_ratio(1, 1), Scalar::from_ratio(0, 1)];
        let phi = Parametrization::parse("(s, t, t^2 + s*t^2, t^3)", &v, b).unwrap();
        let c = classify_point(&phi, 1, None, &SamplingConfig::default()).unwrap();
        assert!(c.d_invariant && !c.bundle);
        assert_eq!(c.taylorian, Taylorian::NotApplicable);
    }
}
