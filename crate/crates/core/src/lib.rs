//! Symbolic-numeric checks for Poisson geometry on coordinate charts.
//!
//! The crate is organized bottom-up:
//!
//! * [`expr`]: scalar expressions, exact rational normal forms, zero tests.
//! * [`multivector`]: multivector fields, 1-forms, wedge, Schouten bracket.
//! * [`poisson`]: Poisson charts, brackets, Hamiltonian fields and flows.
//! * [`bialgebra`]: Lie bialgebras from structure constants.
//! * [`group`]: Poisson Lie groups given by explicit group laws, dressing fields.
//! * [`momentum`]: Poisson actions and momentum maps.
//! * [`reduction`]: invariant functions, coordinate ideals, reduced brackets.
//! * [`manifest`] / [`runner`] / [`report`]: declarative TOML input, check
//!   execution and JSON reports.

pub mod bialgebra;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod manifest;
pub mod momentum;
pub mod multivector;
pub mod poisson;
pub mod rational;
pub mod reduction;
pub mod report;
pub mod runner;

pub use error::{Error, Result};
pub use expr::{parse, simplify, Chart, Domain, Expr, NormalForm, ZeroTest, ZeroVerdict};
pub use rational::Rational;
