//! The operator-expression language and `.qsuite` files.
//!
//! A suite is a list of `let` bindings and `assert` relations between
//! operator expressions. Names resolve against the bindings first and then
//! against the generator table in [`crate::gens`].

mod bind;
mod builtins;
mod lexer;
mod parser;
mod print;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gens::Arg;
use crate::scalar::{Quarter, Scalar};

pub use bind::{bind, BindError, Binder, BoundRelation};
pub use builtins::{builtin_suite, builtin_suites, BUILTIN_SOURCES};
pub use parser::{parse_expr, parse_suite, parse_suite_named};
pub use print::print_suite;

/// Expression tree. Subtrees free of names are folded into a single
/// [`Expr::Scalar`] at parse time.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Scalar(Scalar),
    Name {
        name: String,
        args: Vec<Arg>,
        kwargs: Vec<(String, Arg)>,
    },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Composition of operators or scaling by a scalar.
    Mul(Box<Expr>, Box<Expr>),
    /// Right operand must be a scalar.
    Div(Box<Expr>, Box<Expr>),
    /// Negative exponents are allowed on scalars only.
    Pow(Box<Expr>, i64),
    Comm(Box<Expr>, Box<Expr>),
    /// `q^e XY − q^{−e} YX`.
    QComm(Box<Expr>, Box<Expr>, Quarter),
    AntiComm(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn name(name: &str) -> Self {
        Expr::Name {
            name: name.to_string(),
            args: Vec::new(),
            kwargs: Vec::new(),
        }
    }

    /// Visits every name reference.
    pub fn for_each_name(&self, f: &mut impl FnMut(&str, bool)) {
        match self {
            Expr::Scalar(_) => {}
            Expr::Name { name, args, kwargs } => {
                f(name, !(args.is_empty() && kwargs.is_empty()))
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.for_each_name(f),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Comm(a, b)
            | Expr::QComm(a, b, _)
            | Expr::AntiComm(a, b) => {
                a.for_each_name(f);
                b.for_each_name(f);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print_expr(self))
    }
}

/// How a relation is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sample,
    Limit,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sample => "sample",
            Mode::Limit => "limit",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sample" => Ok(Mode::Sample),
            "limit" => Ok(Mode::Limit),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: String,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    /// `None` means automatic.
    pub margin: Option<u32>,
    pub mode: Option<Mode>,
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Suite {
    pub name: String,
    pub modes: usize,
    pub bindings: Vec<Binding>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DslErrorKind {
    Lexical,
    Syntax,
    UnresolvedName,
    CyclicBinding,
    Duplicate,
}

/// A diagnostic with a 1-based source location.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct DslError {
    pub kind: DslErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[cfg(test)]
mod tests;
