//! A small-step core calculus for JavaScript, a desugarer from a JavaScript
//! subset into it, and a type checker for a sandboxing discipline.

pub mod delta;
pub mod desugar;
pub mod eval;
pub mod harness;
pub mod js;
pub mod sandbox;
pub mod syntax;
