//! Symbolic scalar expressions on coordinate charts.

mod chart;
mod normal;
mod parse;
mod tree;
mod zero;

pub use chart::{Chart, ChartSpec, Domain, DomainSpec};
pub use normal::{simplify, Atom, Monomial, NormalForm, Poly};
pub use parse::parse;
pub use tree::{Expr, ExprDisplay, Node};
pub use zero::{is_zero, ZeroTest, ZeroVerdict, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL};

/// Tree derivative followed by simplification.
pub fn differentiate(e: &Expr, x: usize) -> crate::Result<Expr> {
    simplify(&e.differentiate(x))
}
