//! Subcommand pipelines and report assembly.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use serde_json::{json, Map, Value};

use super::config::{Command, RunConfig};
use super::parser::parse_expr;
use super::report::{self, approximate, least_space, monomial, poly, polys, scalars, SCHEMA_VERSION};
use crate::artin::{compare_under_linear_change, ArtinAlgebra};
use crate::error::{Error, Result};
use crate::invariants::{classify_space, zero_estimate_from};
use crate::least::{compute_least_space, FunctionSpace};
use crate::pairing::Projector;
use crate::poly::default_names;
use crate::pushforward::{
    monomial_appears_in_span, polynomial_function_space, pullback_absolute, span_contains, tangents_of,
    Parametrization, PolynomialFunctionSpace,
};
use crate::wronskian::is_bundle_point;
use crate::{Poly, Scalar};

/// A finished report and the process exit code that goes with it.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self) -> String {
        report::render(&self.report)
    }
}

/// Exit code for an error: 1 for usage problems, 2 for mathematical failures.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_usage() {
        1
    } else {
        2
    }
}

/// Run `command` (or the configured one) and assemble its report.
pub fn run_report(cfg: &RunConfig, command: Option<Command>) -> Outcome {
    let command = command.or(cfg.command).unwrap_or(Command::ReportAll);
    let mut top = Map::new();
    top.insert("schemaVersion".into(), json!(SCHEMA_VERSION));
    top.insert("command".into(), json!(command.name()));
    top.insert("input".into(), echo(cfg));
    let cache = Cache::default();
    let exit_code = if command == Command::ReportAll {
        let mut sections = Map::new();
        for c in Command::sections() {
            let v = match missing_input(cfg, c) {
                Some(reason) => json!({ "skipped": reason }),
                None => section(cfg, &cache, c).unwrap_or_else(|e| json!({ "error": report::error(&e) })),
            };
            sections.insert(c.name().into(), v);
        }
        top.insert("sections".into(), Value::Object(sections));
        0
    } else {
        let result = match missing_input(cfg, command) {
            Some(reason) => Err(Error::Config(format!("`{}` needs {reason}", command.name()))),
            None => section(cfg, &cache, command),
        };
        match result {
            Ok(v) => {
                top.insert("result".into(), v);
                0
            }
            Err(e) => {
                top.insert("error".into(), report::error(&e));
                exit_code(&e)
            }
        }
    };
    Outcome { report: Value::Object(top), exit_code }
}

fn missing_input(cfg: &RunConfig, c: Command) -> Option<&'static str> {
    let has_components = cfg.components.is_some();
    match c {
        Command::Least | Command::Bundle if has_components || cfg.generators.is_some() => None,
        Command::Least | Command::Bundle => Some("`components` or `generators`"),
        _ if !has_components => Some("`components`"),
        Command::Project if cfg.project.is_none() => Some("a `project` polynomial"),
        _ => None,
    }
}

fn target_names(cfg: &RunConfig, m: usize) -> Vec<String> {
    cfg.target_variables.clone().unwrap_or_else(|| default_names("x", m))
}

fn echo(cfg: &RunConfig) -> Value {
    let vars = &cfg.variables;
    let print = |es: &Option<Vec<crate::frontend::Expr>>, names: &[String]| {
        es.as_ref().map(|es| es.iter().map(|e| e.display_with(names)).collect::<Vec<_>>())
    };
    let compare = cfg.compare.as_ref().map(|c| {
        json!({
            "components": c.components.iter().map(|e| e.display_with(&c.variables)).collect::<Vec<_>>(),
            "variables": c.variables,
            "basepoint": scalars(&c.basepoint),
            "jacobian": c.jacobian.iter().map(|r| scalars(r)).collect::<Vec<_>>(),
        })
    });
    json!({
        "variables": vars,
        "targetVariables": cfg.components.as_ref().map(|c| target_names(cfg, c.len())),
        "basepoint": scalars(&cfg.basepoint),
        "components": print(&cfg.components, vars),
        "generators": print(&cfg.generators, vars),
        "degree": cfg.degree,
        "truncation": cfg.truncation,
        "truncationCap": cfg.truncation_cap,
        "seed": cfg.sampling.seed,
        "samples": cfg.sampling.samples,
        "project": cfg.project,
        "query": cfg.query,
        "compare": compare,
    })
}

/// Function spaces of the configured parametrisation, shared by the sections of one run.
#[derive(Default)]
struct Cache {
    spaces: RefCell<BTreeMap<Option<usize>, Rc<PolynomialFunctionSpace>>>,
}

impl Cache {
    fn space(&self, phi: &Parametrization, d: usize, k: Option<usize>) -> Result<Rc<PolynomialFunctionSpace>> {
        if let Some(s) = self.spaces.borrow().get(&k) {
            return Ok(Rc::clone(s));
        }
        let s = Rc::new(polynomial_function_space(phi, d, k)?);
        self.spaces.borrow_mut().insert(k, Rc::clone(&s));
        Ok(s)
    }
}

/// Retry with a doubled truncation order while the failure is a truncation one.
fn with_retry<T>(cfg: &RunConfig, f: impl Fn(Option<usize>) -> Result<T>) -> Result<T> {
    let mut k = cfg.truncation;
    loop {
        match f(k) {
            Err(e) if e.is_truncation() || matches!(e, Error::StabilityCheckFailed { .. }) => {
                let next = k.map_or(32, |k| 2 * k);
                if next > cfg.truncation_cap {
                    return Err(e);
                }
                k = Some(next);
            }
            r => return r,
        }
    }
}

fn section(cfg: &RunConfig, cache: &Cache, c: Command) -> Result<Value> {
    let needs_degree = matches!(c, Command::Classify | Command::Theta);
    if needs_degree && cfg.degree == 0 {
        return Err(Error::Config(format!("`{}` needs degree ≥ 1", c.name())));
    }
    match c {
        Command::Least => with_retry(cfg, |k| least(cfg, cache, k)),
        Command::Classify => with_retry(cfg, |k| classify(cfg, cache, k)),
        Command::Bundle => with_retry(cfg, |k| bundle(cfg, cache, k)),
        Command::Project => with_retry(cfg, |k| project(cfg, cache, k)),
        Command::Tangents => with_retry(cfg, |k| tangents(cfg, cache, k)),
        Command::Artin => with_retry(cfg, |k| artin(cfg, cache, k)),
        Command::Theta => with_retry(cfg, |k| theta(cfg, cache, k)),
        Command::ReportAll => unreachable!("report-all is assembled by run_report"),
    }
}

fn parametrization(cfg: &RunConfig) -> Result<Parametrization> {
    let comps = cfg.components.clone().ok_or_else(|| Error::Config("`components` is required".into()))?;
    let m = comps.len();
    Parametrization::new(comps, cfg.basepoint.clone(), cfg.variables.clone(), target_names(cfg, m))
}

fn generator_space(cfg: &RunConfig, k: Option<usize>) -> Result<FunctionSpace<Scalar>> {
    let gens = cfg.generators.as_ref().expect("checked by the caller");
    let k = k.unwrap_or_else(|| (2 * gens.len()).max(8));
    let jets = gens.iter().map(|g| g.to_jet(&cfg.basepoint, k)).collect::<Result<Vec<_>>>()?;
    FunctionSpace::new(cfg.basepoint.clone(), jets)
}

fn space_json(pfs: &PolynomialFunctionSpace, phi: &Parametrization) -> Value {
    json!({
        "degree": pfs.degree,
        "dims": pfs.dims,
        "hilbert": pfs.hilbert,
        "labels": pfs.labels.iter().map(|a| monomial(a, phi.target_names())).collect::<Vec<_>>(),
        "truncation": pfs.truncation,
        "stabilityChecked": pfs.stability_checked,
    })
}

fn least(cfg: &RunConfig, cache: &Cache, k: Option<usize>) -> Result<Value> {
    if cfg.generators.is_some() {
        let z = generator_space(cfg, k)?;
        let l = compute_least_space(&z)?;
        return Ok(json!({
            "source": "generators",
            "exact": z.is_exact(),
            "truncation": if z.is_exact() { None } else { k.or(z.verified_order()) },
            "leastSpace": least_space(&l, &cfg.variables),
        }));
    }
    let phi = parametrization(cfg)?;
    let pfs = cache.space(&phi, cfg.degree, k)?;
    Ok(json!({
        "source": "components",
        "space": space_json(&pfs, &phi),
        "leastSpace": least_space(&pfs.least, &cfg.variables),
    }))
}

fn bundle(cfg: &RunConfig, cache: &Cache, k: Option<usize>) -> Result<Value> {
    let z = if cfg.generators.is_some() {
        generator_space(cfg, k)?
    } else {
        cache.space(&parametrization(cfg)?, cfg.degree, k)?.space.clone()
    };
    let cert = is_bundle_point(&z, &cfg.sampling)?;
    let mut v = serde_json::to_value(&cert).expect("certificates serialize");
    v["dimension"] = json!(z.dimension());
    Ok(v)
}

fn classify(cfg: &RunConfig, cache: &Cache, k: Option<usize>) -> Result<Value> {
    let phi = parametrization(cfg)?;
    let c = classify_space(&phi, &*cache.space(&phi, cfg.degree, k)?, &cfg.sampling)?;
    Ok(serde_json::to_value(&c).expect("classifications serialize"))
}

fn target_poly(text: &str, phi: &Parametrization) -> Result<Poly> {
    let e = parse_expr(text, phi.target_names())?;
    e.to_poly(phi.m()).ok_or_else(|| Error::Config(format!("`{text}` is not a polynomial")))
}

fn project(cfg: &RunConfig, cache: &Cache, k: Option<usize>) -> Result<Value> {
    let phi = parametrization(cfg)?;
    let pfs = cache.space(&phi, cfg.degree, k)?;
    let f = target_poly(cfg.project.as_deref().expect("checked by the caller"), &phi)?;
    let theta = pfs.least.max_degree();
    let order = pfs.truncation.unwrap_or(theta).max(theta);
    let pulled = pullback_absolute(&phi, &f, order)?;
    let p = Projector::with_least(pfs.space.clone(), pfs.least.clone())?;
    let pr = p.taylor_project(&pulled)?;
    let image = pfs.polynomial_of(&pr.coefficients);
    Ok(json!({
        "space": space_json(&pfs, &phi),
        "function": poly(&f, phi.target_names()),
        "coefficients": scalars(&pr.coefficients),
        "projection": poly(&image, phi.target_names()),
        "projectionIsZero": image.is_zero(),
        "projectedJet": poly(&pr.jet.truncate(theta).to_poly(), &cfg.variables),
    }))
}

fn tangents(cfg: &RunConfig, cache: &Cache, k: Option<usize>) -> Result<Value> {
    let phi = parametrization(cfg)?;
    let pfs = cache.space(&phi, cfg.degree, k)?;
    let t = tangents_of(&phi, &pfs)?;
    let names = phi.target_names();
    let query = match &cfg.query {
        None => Value::Null,
        Some(text) => {
            let q = target_poly(text, &phi)?;
            let appears = q.is_monomial().then(|| {
                let (mu, _) = q.leading().expect("monomials are nonzero");
                monomial_appears_in_span(&t.tangents, mu)
            });
            json!({
                "polynomial": poly(&q, names),
                "inSpan": span_contains(&t.tangents, &q),
                "appearsInSpan": appears,
            })
        }
    };
    Ok(json!({
        "degree": t.degree,
        "tangents": polys(&t.tangents, names),
        "sourceLeast": polys(&t.source_least.basis(), &cfg.variables),
        "truncation": pfs.truncation,
        "query": query,
    }))
}

fn algebra_for(phi: &Parametrization, pfs: &PolynomialFunctionSpace) -> Result<ArtinAlgebra<Scalar>> {
    let p = Projector::with_least(pfs.space.clone(), pfs.least.clone())?;
    let labels = pfs.labels.iter().map(|a| a.display_with(phi.target_names())).collect();
    Ok(ArtinAlgebra::build(&p)?.with_labels(labels))
}

fn artin(cfg: &RunConfig, cache: &Cache, k: Option<usize>) -> Result<Value> {
    let phi = parametrization(cfg)?;
    let pfs = cache.space(&phi, cfg.degree, k)?;
    let a = algebra_for(&phi, &pfs)?;
    let comparison = match &cfg.compare {
        None => Value::Null,
        Some(c) => {
            let m = c.components.len();
            let psi = Parametrization::new(
                c.components.clone(),
                c.basepoint.clone(),
                c.variables.clone(),
                target_names(cfg, m),
            )?;
            let b = algebra_for(&psi, &polynomial_function_space(&psi, cfg.degree, k)?)?;
            json!({
                "jacobian": c.jacobian.iter().map(|r| scalars(r)).collect::<Vec<_>>(),
                "isomorphic": compare_under_linear_change(&a, &b, &c.jacobian)?,
            })
        }
    };
    let table: Vec<Vec<Value>> = a
        .structure_constants
        .iter()
        .map(|row| row.iter().map(|c| scalars(c)).collect())
        .collect();
    Ok(json!({
        "dimension": a.dimension,
        "labels": a.labels,
        "structureConstants": table,
        "unit": scalars(&a.unit),
        "unitIndex": a.unit_index,
        "nilpotencyIndex": a.nilpotency_index,
        "theta": a.least.max_degree(),
        "truncation": pfs.truncation,
        "comparison": comparison,
    }))
}

fn theta(cfg: &RunConfig, cache: &Cache, k: Option<usize>) -> Result<Value> {
    let phi = parametrization(cfg)?;
    let r = zero_estimate_from(&phi, &*cache.space(&phi, cfg.degree, k)?)?;
    Ok(json!({
        "rows": serde_json::to_value(&r.rows).expect("rows serialize"),
        "slope": approximate(r.slope, r.slope_caveat),
        "linearBound": r.linear_bound,
        "truncation": r.truncation,
        "stabilityChecked": r.stability_checked,
        "image": scalars(phi.image()),
    }))
}
