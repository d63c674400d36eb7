//! A small index-notation language for ad-hoc tensor expressions.
//!
//! ```text
//! R{a;ija}                          contraction: the Ricci tensor
//! alt(d{i;m} * rho{;jn}; m, n)      δ^i_m ρ_{jn} - δ^i_n ρ_{jm}
//! cd(theta{;j}; n) - rho{;jn} / 2   covariant derivative and scalar division
//! ```
//!
//! `NAME{uppers;lowers}` references a bound tensor, one letter per index.
//! A letter that appears once up and once down is summed; any other
//! repetition is rejected. Terms of a sum must carry the same free indices,
//! in any order. `alt(e; a, b)` is the plain difference of `e` and `e` with
//! `a`, `b` exchanged, `sym(e; a, b)` the half sum. `cd(e; k)` and `pd(e; k)`
//! append a lower index `k` holding the covariant and the partial derivative.
//! No symmetrization is implicit.
//!
//! The result is laid out with upper letters sorted, then lower letters
//! sorted.

mod ast;
mod eval;
mod lexer;
mod parser;

pub use ast::{Expr, Func};
pub use eval::{evaluate, evaluate_jet, Binding, Env, Evaluated};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

use crate::error::Result;
use crate::scalar::Scalar;

/// Parses and evaluates in one step.
pub fn eval_str<S: Scalar>(src: &str, env: &Env<S>) -> Result<Evaluated<S>> {
    evaluate(&parse(src)?, env)
}
