//! Run configuration files.
//!
//! A configuration is a flat TOML table:
//!
//! ```toml
//! command = "classify"            # least | classify | bundle | project | tangents | artin | theta | report-all
//! variables = ["t"]               # source variables; default t (n = 1) or t1 … tn
//! target_variables = ["x", "y"]   # default x1 … xm
//! basepoint = ["0"]               # integers or scalar strings such as "1/2-3*i"
//! components = "(t, t^2 + t^6)"   # one tuple string, or an array of expressions
//! degree = 2
//! truncation = 40                 # series expansion order K (inexact inputs)
//! truncation_cap = 320            # largest K tried when doubling after a truncation failure
//! seed = 20231105
//! samples = 5
//! generators = ["1", "s", "t"]    # explicit function space for `least` and `bundle`
//! project = "x^5"                 # polynomial in the target variables for `project`
//! query = "x^2"                   # dual polynomial tested against the tangent span
//! compare_components = "(t1 + t2, t2, t2^2)"
//! compare_variables = ["t1", "t2"]
//! compare_basepoint = [0, 1]
//! compare_jacobian = [[1, -1], [0, 1]]
//! output = "report.json"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::parser::{parse_expr, parse_scalar, parse_tuple};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::default_names;
use crate::wronskian::SamplingConfig;
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Least,
    Classify,
    Bundle,
    Project,
    Tangents,
    Artin,
    Theta,
    ReportAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Least => "least",
            Command::Classify => "classify",
            Command::Bundle => "bundle",
            Command::Project => "project",
            Command::Tangents => "tangents",
            Command::Artin => "artin",
            Command::Theta => "theta",
            Command::ReportAll => "report-all",
        }
    }

    /// The individual sections of `report-all`, in report order.
    pub fn sections() -> [Command; 7] {
        use Command::*;
        [Least, Classify, Bundle, Project, Tangents, Artin, Theta]
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarEntry {
    Int(i64),
    Text(String),
}

impl ScalarEntry {
    fn value(&self) -> Result<Scalar> {
        match self {
            ScalarEntry::Int(v) => Ok(Scalar::from_ratio(*v, 1)),
            ScalarEntry::Text(s) => parse_scalar(s).map_err(|_| Error::ScalarParse(s.clone())),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ExprList {
    Tuple(String),
    List(Vec<String>),
}

impl ExprList {
    fn parse(&self, vars: &[String]) -> Result<Vec<Expr>> {
        match self {
            ExprList::Tuple(s) => parse_tuple(s, vars),
            ExprList::List(items) => items.iter().map(|s| parse_expr(s, vars)).collect(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<Command>,
    dimension: Option<usize>,
    variables: Option<Vec<String>>,
    target_variables: Option<Vec<String>>,
    basepoint: Vec<ScalarEntry>,
    components: Option<ExprList>,
    generators: Option<ExprList>,
    degree: Option<usize>,
    truncation: Option<usize>,
    truncation_cap: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    project: Option<String>,
    query: Option<String>,
    compare_components: Option<ExprList>,
    compare_variables: Option<Vec<String>>,
    compare_basepoint: Option<Vec<ScalarEntry>>,
    compare_jacobian: Option<Vec<Vec<ScalarEntry>>>,
    output: Option<PathBuf>,
}

/// Second parametrisation for the Artinian comparison.
#[derive(Clone, Debug)]
pub struct CompareConfig {
    pub components: Vec<Expr>,
    pub variables: Vec<String>,
    pub basepoint: Vec<Scalar>,
    pub jacobian: Matrix<Scalar>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub variables: Vec<String>,
    pub target_variables: Option<Vec<String>>,
    pub basepoint: Vec<Scalar>,
    pub components: Option<Vec<Expr>>,
    pub generators: Option<Vec<Expr>>,
    pub degree: usize,
    pub truncation: Option<usize>,
    pub truncation_cap: usize,
    pub sampling: SamplingConfig,
    pub project: Option<String>,
    pub query: Option<String>,
    pub compare: Option<CompareConfig>,
    pub output: Option<PathBuf>,
}

/// Largest truncation order tried when none is configured.
pub const DEFAULT_TRUNCATION_CAP: usize = 320;

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        Self::from_raw(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        // relative output paths are taken relative to the configuration file
        if let (Some(out), Some(dir)) = (&cfg.output, path.parent()) {
            if out.is_relative() {
                cfg.output = Some(dir.join(out));
            }
        }
        Ok(cfg)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let basepoint = raw.basepoint.iter().map(ScalarEntry::value).collect::<Result<Vec<_>>>()?;
        let n = raw.dimension.unwrap_or(basepoint.len());
        if n == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if basepoint.len() != n {
            return Err(Error::Config(format!("basepoint has arity {} but the dimension is {n}", basepoint.len())));
        }
        let variables = match raw.variables {
            Some(v) => v,
            None if n == 1 => vec!["t".to_string()],
            None => default_names("t", n),
        };
        if variables.len() != n {
            return Err(Error::Config(format!("{} variables for dimension {n}", variables.len())));
        }
        let components = raw.components.map(|c| c.parse(&variables)).transpose()?;
        if let (Some(c), Some(t)) = (&components, &raw.target_variables) {
            if c.len() != t.len() {
                return Err(Error::Config(format!("{} target variables for {} components", t.len(), c.len())));
            }
        }
        let generators = raw.generators.map(|g| g.parse(&variables)).transpose()?;
        if components.is_none() && generators.is_none() {
            return Err(Error::Config("either `components` or `generators` is required".into()));
        }
        if raw.truncation == Some(0) {
            return Err(Error::Config("truncation must be at least 1".into()));
        }
        let cap = raw.truncation_cap.unwrap_or(DEFAULT_TRUNCATION_CAP.max(raw.truncation.unwrap_or(0)));
        let mut sampling = SamplingConfig::default();
        if let Some(s) = raw.seed {
            sampling.seed = s;
        }
        if let Some(s) = raw.samples {
            if s == 0 {
                return Err(Error::Config("samples must be at least 1".into()));
            }
            sampling.samples = s;
        }
        let compare = match (raw.compare_components, raw.compare_jacobian) {
            (None, None) => None,
            (Some(c), Some(j)) => {
                let vars = raw.compare_variables.unwrap_or_else(|| variables.clone());
                let basepoint = match raw.compare_basepoint {
                    Some(b) => b.iter().map(ScalarEntry::value).collect::<Result<Vec<_>>>()?,
                    None => basepoint.clone(),
                };
                let jacobian = j
                    .iter()
                    .map(|row| row.iter().map(ScalarEntry::value).collect::<Result<Vec<_>>>())
                    .collect::<Result<Matrix<_>>>()?;
                Some(CompareConfig { components: c.parse(&vars)?, variables: vars, basepoint, jacobian })
            }
            _ => return Err(Error::Config("`compare_components` and `compare_jacobian` go together".into())),
        };
        Ok(RunConfig {
            command: raw.command,
            variables,
            target_variables: raw.target_variables,
            basepoint,
            components,
            generators,
            degree: raw.degree.unwrap_or(1),
            truncation: raw.truncation,
            truncation_cap: cap,
            sampling,
            project: raw.project,
            query: raw.query,
            compare,
            output: raw.output,
        })
    }

    pub fn n(&self) -> usize {
        self.variables.len()
    }
}
