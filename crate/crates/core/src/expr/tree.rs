use std::fmt;
use std::ops;
use std::sync::Arc;

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Expression tree node. Coordinates are referenced by chart index.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Rational),
    Coord(usize),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Neg(Expr),
    Exp(Expr),
    Log(Expr),
}

/// Immutable, cheaply clonable scalar expression over chart coordinates.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn new(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(r: Rational) -> Self {
        Expr::new(Node::Const(r))
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(Rational::int(n))
    }

    pub fn zero() -> Self {
        Expr::int(0)
    }

    pub fn one() -> Self {
        Expr::int(1)
    }

    pub fn coord(i: usize) -> Self {
        Expr::new(Node::Coord(i))
    }

    pub fn powi(&self, n: i32) -> Self {
        Expr::new(Node::Pow(self.clone(), n))
    }

    pub fn exp(&self) -> Self {
        Expr::new(Node::Exp(self.clone()))
    }

    pub fn log(&self) -> Self {
        Expr::new(Node::Log(self.clone()))
    }

    pub fn as_const(&self) -> Option<Rational> {
        match self.node() {
            Node::Const(r) => Some(*r),
            _ => None,
        }
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(self.node(), Node::Const(r) if r.is_zero())
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self.node() {
            Node::Const(_) => None,
            Node::Coord(i) => Some(*i),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.max_coord().max(b.max_coord())
            }
            Node::Pow(a, _) | Node::Neg(a) | Node::Exp(a) | Node::Log(a) => a.max_coord(),
        }
    }

    pub fn depends_on(&self, i: usize) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Coord(j) => *j == i,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.depends_on(i) || b.depends_on(i)
            }
            Node::Pow(a, _) | Node::Neg(a) | Node::Exp(a) | Node::Log(a) => a.depends_on(i),
        }
    }

    /// Replaces coordinate `i` by `images[i]`.
    pub fn compose(&self, images: &[Expr]) -> Expr {
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Coord(i) => images[*i].clone(),
            Node::Add(a, b) => a.compose(images) + b.compose(images),
            Node::Sub(a, b) => a.compose(images) - b.compose(images),
            Node::Mul(a, b) => a.compose(images) * b.compose(images),
            Node::Div(a, b) => a.compose(images) / b.compose(images),
            Node::Pow(a, n) => a.compose(images).powi(*n),
            Node::Neg(a) => -a.compose(images),
            Node::Exp(a) => a.compose(images).exp(),
            Node::Log(a) => a.compose(images).log(),
        }
    }

    /// Symbolic partial derivative by coordinate `x` (unsimplified tree).
    pub fn differentiate(&self, x: usize) -> Expr {
        if !self.depends_on(x) {
            return Expr::zero();
        }
        match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Coord(i) => {
                if *i == x {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(a, b) => a.differentiate(x) + b.differentiate(x),
            Node::Sub(a, b) => a.differentiate(x) - b.differentiate(x),
            Node::Mul(a, b) => a.differentiate(x) * b.clone() + a.clone() * b.differentiate(x),
            Node::Div(a, b) => {
                (a.differentiate(x) * b.clone() - a.clone() * b.differentiate(x)) / b.powi(2)
            }
            Node::Pow(a, n) => Expr::int(*n as i64) * a.powi(n - 1) * a.differentiate(x),
            Node::Neg(a) => -a.differentiate(x),
            Node::Exp(a) => self.clone() * a.differentiate(x),
            Node::Log(a) => a.differentiate(x) / a.clone(),
        }
    }

    /// Numeric evaluation after checking the point against the chart domain.
    pub fn evaluate(&self, chart: &Chart, point: &[f64]) -> Result<f64> {
        chart.check_point(point)?;
        self.eval_unchecked(point)
            .map_err(|bad| Error::Singular(bad.display(chart).to_string()))
    }

    /// Numeric evaluation without domain checks; on a singularity returns the
    /// offending sub-expression.
    pub fn eval_unchecked(&self, point: &[f64]) -> std::result::Result<f64, Expr> {
        let v = match self.node() {
            Node::Const(r) => r.to_f64(),
            Node::Coord(i) => point[*i],
            Node::Add(a, b) => a.eval_unchecked(point)? + b.eval_unchecked(point)?,
            Node::Sub(a, b) => a.eval_unchecked(point)? - b.eval_unchecked(point)?,
            Node::Mul(a, b) => a.eval_unchecked(point)? * b.eval_unchecked(point)?,
            Node::Div(a, b) => {
                let den = b.eval_unchecked(point)?;
                if den == 0.0 {
                    return Err(self.clone());
                }
                a.eval_unchecked(point)? / den
            }
            Node::Pow(a, n) => {
                let base = a.eval_unchecked(point)?;
                if base == 0.0 && *n < 0 {
                    return Err(self.clone());
                }
                base.powi(*n)
            }
            Node::Neg(a) => -a.eval_unchecked(point)?,
            Node::Exp(a) => a.eval_unchecked(point)?.exp(),
            Node::Log(a) => {
                let arg = a.eval_unchecked(point)?;
                if arg <= 0.0 {
                    return Err(self.clone());
                }
                arg.ln()
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.clone())
        }
    }

    pub fn display<'a>(&'a self, chart: &'a Chart) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, chart }
    }

    pub fn to_string_on(&self, chart: &Chart) -> String {
        self.display(chart).to_string()
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self.node(), f)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Self {
        Expr::constant(r)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::new(Node::$variant(self, rhs))
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::new(Node::$variant(self.clone(), rhs.clone()))
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::new(Node::$variant(self.clone(), rhs))
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::new(Node::$variant(self, rhs.clone()))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::new(Node::Neg(self))
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::new(Node::Neg(self.clone()))
    }
}

/// Printer producing text that re-parses under the expression grammar.
pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    chart: &'a Chart,
}

impl ExprDisplay<'_> {
    fn write_base(&self, f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
        match e.node() {
            Node::Const(r) if r.is_integer() && !r.is_negative() => write!(f, "{r}"),
            Node::Coord(i) => write!(f, "{}", self.chart.coord(*i)),
            Node::Exp(a) => {
                write!(f, "exp(")?;
                self.write_expr(f, a)?;
                write!(f, ")")
            }
            Node::Log(a) => {
                write!(f, "log(")?;
                self.write_expr(f, a)?;
                write!(f, ")")
            }
            Node::Const(r) => {
                if r.is_negative() {
                    write!(f, "(-{})", r.abs())
                } else {
                    write!(f, "({r})")
                }
            }
            _ => {
                write!(f, "(")?;
                self.write_expr(f, e)?;
                write!(f, ")")
            }
        }
    }

    /// A grammar `factor`: optional minus, base, optional power.
    fn write_factor(&self, f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
        match e.node() {
            Node::Pow(b, n) => {
                self.write_base(f, b)?;
                write!(f, "^{n}")
            }
            Node::Neg(a) => {
                write!(f, "-")?;
                match a.node() {
                    Node::Pow(..) => self.write_factor(f, a),
                    _ => self.write_base(f, a),
                }
            }
            _ => self.write_base(f, e),
        }
    }

    fn write_term(&self, f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
        match e.node() {
            Node::Mul(a, b) | Node::Div(a, b) => {
                self.write_term(f, a)?;
                let op = if matches!(e.node(), Node::Mul(..)) {
                    "*"
                } else {
                    "/"
                };
                write!(f, "{op}")?;
                self.write_factor(f, b)
            }
            _ => self.write_factor(f, e),
        }
    }

    fn write_expr(&self, f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
        match e.node() {
            Node::Add(a, b) => {
                self.write_expr(f, a)?;
                write!(f, " + ")?;
                self.write_term(f, b)
            }
            Node::Sub(a, b) => {
                self.write_expr(f, a)?;
                write!(f, " - ")?;
                self.write_term(f, b)
            }
            _ => self.write_term(f, e),
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_expr(f, self.expr)
    }
}
