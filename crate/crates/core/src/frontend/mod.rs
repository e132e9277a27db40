//! Input language, configuration files and report generation.

pub mod config;
pub mod expr;
pub mod parser;
pub mod report;
pub mod run;

pub use config::{Command, RunConfig};
pub use expr::{Builtin, Expr};
pub use parser::{parse_expr, parse_scalar, parse_tuple};
pub use run::{run_report, Outcome};
