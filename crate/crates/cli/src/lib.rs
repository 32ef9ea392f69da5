//! Spec-file language and command-line front-end for `orbicalc`.

pub mod commands;
pub mod diagnostic;
pub mod document;
pub mod lexer;
pub mod parser;

pub use commands::{run, Outcome};
pub use diagnostic::{Diagnostic, Severity, Span};
pub use document::{Decl, SpecDocument};
pub use parser::parse;
