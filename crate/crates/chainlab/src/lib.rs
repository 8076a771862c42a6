//! A small language for building valuation chains and querying them, the
//! scenario scripts for the worked examples, and output rendering for the
//! `valkey` command.

pub mod ast;
pub mod check;
pub mod error;
pub mod interp;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod render;
pub mod scenario;

pub use ast::Script;
pub use error::DslError;
pub use interp::{has_errors, run};
pub use parser::parse;
pub use scenario::{generate, Scenario, ScenarioName};

use serde_json::Value;

/// Parses and checks a script without running it.
pub fn compile(src: &str) -> Result<Script, DslError> {
    let script = parse(src)?;
    check::check(&script)?;
    Ok(script)
}

/// Parses, checks and runs a script.
pub fn run_source(src: &str) -> Result<Vec<Value>, DslError> {
    Ok(run(&compile(src)?))
}
