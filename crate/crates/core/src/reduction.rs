//! Leaves, invariant functions, coordinate ideals and reduced brackets.
//!
//! Ideals are generated by `x_i − k_i` for distinct coordinates; membership is
//! decided by substituting `x_i = k_i`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Chart, Expr, NormalForm, ZeroTest, ZeroVerdict};
use crate::linalg::numeric_rank;
use crate::momentum::{ActionSpec, TransversalData};
use crate::multivector::{eval_nf, MultivectorField};
use crate::poisson::PoissonChart;
use crate::rational::Rational;

/// Level-set tolerance for points on a leaf.
pub const LEVEL_TOL: f64 = 1e-9;

/// A regular level set `{H_i = level_i}` through a base point.
#[derive(Clone, Debug)]
pub struct LeafSpec {
    chart: Arc<Chart>,
    functions: Vec<NormalForm>,
    base: Vec<f64>,
    level: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result")]
pub enum LeafTangentCheck {
    Pass {
        points: usize,
    },
    Fail {
        point: Vec<f64>,
        function: usize,
        value: f64,
    },
}

impl LeafTangentCheck {
    pub fn passed(&self) -> bool {
        matches!(self, LeafTangentCheck::Pass { .. })
    }
}

impl LeafSpec {
    pub fn new(chart: Arc<Chart>, transversals: &TransversalData, base: &[f64]) -> Result<Self> {
        Self::from_functions(chart, transversals.functions.clone(), base)
    }

    pub fn from_functions(
        chart: Arc<Chart>,
        functions: Vec<NormalForm>,
        base: &[f64],
    ) -> Result<Self> {
        chart.check_point(base)?;
        let level = functions
            .iter()
            .map(|h| eval_nf(h, &chart, base))
            .collect::<Result<Vec<_>>>()?;
        let n = chart.dim();
        let mut m = nalgebra::DMatrix::zeros(functions.len(), n);
        for (r, h) in functions.iter().enumerate() {
            for c in 0..n {
                m[(r, c)] = eval_nf(&h.derivative(c)?, &chart, base)?;
            }
        }
        if numeric_rank(&m) < functions.len() {
            return Err(Error::Precondition(format!(
                "differentials of the leaf functions are dependent at {base:?}"
            )));
        }
        Ok(LeafSpec {
            chart,
            functions,
            base: base.to_vec(),
            level,
        })
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn level(&self) -> &[f64] {
        &self.level
    }

    /// `⟨dH_i, v⟩(x)` within `tol` at every point; points off the level set are errors.
    pub fn leaf_tangent_check(
        &self,
        v: &MultivectorField,
        points: &[Vec<f64>],
        tol: f64,
    ) -> Result<LeafTangentCheck> {
        v.chart().ensure_same(&self.chart)?;
        let pairings = self
            .functions
            .iter()
            .map(|h| v.apply_nf(h))
            .collect::<Result<Vec<_>>>()?;
        for p in points {
            for (h, lvl) in self.functions.iter().zip(&self.level) {
                let off = (eval_nf(h, &self.chart, p)? - lvl).abs();
                if off >= LEVEL_TOL {
                    return Err(Error::OffLevelSet(off));
                }
            }
            for (i, pairing) in pairings.iter().enumerate() {
                let value = eval_nf(pairing, &self.chart, p)?;
                if value.abs() > tol {
                    return Ok(LeafTangentCheck::Fail {
                        point: p.clone(),
                        function: i,
                        value,
                    });
                }
            }
        }
        Ok(LeafTangentCheck::Pass {
            points: points.len(),
        })
    }
}

/// Ideal `⟨x_i − k_i⟩` of functions vanishing on a coordinate-aligned locus.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateIdeal {
    chart: Arc<Chart>,
    generators: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealRecord {
    /// Reduced function, e.g. `ξ_M(gen)` or `{H_i, H_j}`.
    pub subject: String,
    pub residue: String,
    pub member: bool,
}

impl CoordinateIdeal {
    pub fn new(chart: Arc<Chart>, generators: Vec<(usize, Rational)>) -> Result<Self> {
        let mut seen = vec![false; chart.dim()];
        for (i, k) in &generators {
            if *i >= chart.dim() {
                return Err(Error::Invalid(format!("coordinate index {i} out of range")));
            }
            if std::mem::replace(&mut seen[*i], true) {
                return Err(Error::Invalid(format!(
                    "ideal generators repeat coordinate `{}`",
                    chart.coord(*i)
                )));
            }
            if !chart.domains()[*i].contains_exact(k) {
                return Err(Error::DomainViolation(format!(
                    "ideal locus `{} = {k}` outside the chart domain",
                    chart.coord(*i)
                )));
            }
        }
        Ok(CoordinateIdeal { chart, generators })
    }

    /// Accepts generators of the form `c·(x − k)` with rational `c ≠ 0`, `k`.
    pub fn from_exprs(chart: Arc<Chart>, generators: &[Expr]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| {
                let nf = NormalForm::from_expr(g)?;
                let bad = || {
                    Error::Invalid(format!(
                        "`{}` is not of the form coordinate − constant",
                        g.to_string_on(&chart)
                    ))
                };
                if nf.denominator().as_constant().is_none() {
                    return Err(bad());
                }
                let mut coord = None;
                let mut constant = Rational::ZERO;
                for (m, c) in nf.numerator().terms() {
                    match m.factors() {
                        [] => constant = *c,
                        [(crate::expr::Atom::Coord(i), 1)] if coord.is_none() => {
                            coord = Some((*i, *c))
                        }
                        _ => return Err(bad()),
                    }
                }
                let (i, c) = coord.ok_or_else(bad)?;
                Ok((i, constant.neg()?.div(&c)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(chart, gens)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn generators(&self) -> &[(usize, Rational)] {
        &self.generators
    }

    pub fn generator_exprs(&self) -> Vec<Expr> {
        self.generators
            .iter()
            .map(|(i, k)| Expr::coord(*i) - Expr::constant(*k))
            .collect()
    }

    fn substitution(&self) -> Vec<Expr> {
        let mut images: Vec<Expr> = (0..self.chart.dim()).map(Expr::coord).collect();
        for (i, k) in &self.generators {
            images[*i] = Expr::constant(*k);
        }
        images
    }

    pub fn reduce_nf(&self, f: &NormalForm) -> Result<NormalForm> {
        let e = f.to_expr().compose(&self.substitution());
        NormalForm::from_expr(&e).map_err(|err| match err {
            Error::DivisionByZero | Error::Singular(_) => Error::MembershipUndecided(format!(
                "singular representative `{}`",
                f.to_expr().to_string_on(&self.chart)
            )),
            other => other,
        })
    }

    /// Normal form of `f` modulo the ideal.
    pub fn ideal_reduce(&self, f: &Expr) -> Result<Expr> {
        Ok(self.reduce_nf(&NormalForm::from_expr(f)?)?.to_expr())
    }

    pub fn contains(&self, f: &Expr) -> Result<bool> {
        Ok(self.reduce_nf(&NormalForm::from_expr(f)?)?.is_zero())
    }

    fn record(&self, subject: &NormalForm) -> Result<IdealRecord> {
        let residue = self.reduce_nf(subject)?;
        Ok(IdealRecord {
            subject: subject.to_expr().to_string_on(&self.chart),
            residue: residue.to_expr().to_string_on(&self.chart),
            member: residue.is_zero(),
        })
    }

    /// `ξ_M(gen)` reduced modulo the ideal, for every generator and basis element.
    pub fn check_ideal_invariance(&self, action: &ActionSpec) -> Result<Vec<IdealRecord>> {
        let mut out = Vec::new();
        for g in self.generator_exprs() {
            let g = NormalForm::from_expr(&g)?;
            for x in action.generators() {
                x.chart().ensure_same(&self.chart)?;
                out.push(self.record(&x.apply_nf(&g)?)?);
            }
        }
        Ok(out)
    }

    /// `{f_i, f_j}` reduced modulo the ideal for all pairs.
    pub fn check_poisson_closure_of(
        &self,
        functions: &[NormalForm],
        p: &PoissonChart,
    ) -> Result<Vec<IdealRecord>> {
        p.chart().ensure_same(&self.chart)?;
        let mut out = Vec::new();
        for i in 0..functions.len() {
            for j in i + 1..functions.len() {
                out.push(self.record(&p.bracket_nf(&functions[i], &functions[j])?)?);
            }
        }
        Ok(out)
    }

    pub fn check_ideal_poisson_closure(
        &self,
        t: &TransversalData,
        p: &PoissonChart,
    ) -> Result<Vec<IdealRecord>> {
        self.check_poisson_closure_of(&t.functions, p)
    }
}

pub fn all_members(records: &[IdealRecord]) -> bool {
    records.iter().all(|r| r.member)
}

/// `ξ_M(f)` zero test per basis element.
pub fn check_invariant(f: &Expr, action: &ActionSpec, test: &ZeroTest) -> Result<Vec<ZeroVerdict>> {
    action.check_invariant(f, test)
}

fn fold(verdicts: Vec<ZeroVerdict>) -> ZeroVerdict {
    verdicts
        .into_iter()
        .fold(ZeroVerdict::SymbolicZero, ZeroVerdict::combine)
}

/// Invariance of `{f, g}` for invariant `f`, `g`.
pub fn check_bracket_closure(
    f: &Expr,
    g: &Expr,
    action: &ActionSpec,
    p: &PoissonChart,
    test: &ZeroTest,
) -> Result<ZeroVerdict> {
    for (name, h) in [("f", f), ("g", g)] {
        if fold(action.check_invariant(h, test)?).is_nonzero() {
            return Err(Error::Precondition(format!(
                "{name} = {} is not invariant",
                h.to_string_on(p.chart())
            )));
        }
    }
    Ok(fold(action.check_invariant(&p.bracket(f, g)?, test)?))
}

/// `{f, g}` modulo `I` after checking that the representatives are invariant
/// modulo `I` and that `I` is invariant and closed under brackets.
pub fn reduced_bracket(
    f: &Expr,
    g: &Expr,
    ideal: &CoordinateIdeal,
    action: &ActionSpec,
    p: &PoissonChart,
) -> Result<Expr> {
    p.chart().ensure_same(ideal.chart())?;
    for (name, h) in [("f", f), ("g", g)] {
        let h = NormalForm::from_expr(h)?;
        for (k, x) in action.generators().iter().enumerate() {
            let r = ideal.reduce_nf(&x.apply_nf(&h)?)?;
            if !r.is_zero() {
                return Err(Error::Precondition(format!(
                    "representative {name} is not invariant modulo the ideal under basis element {k}: residue {}",
                    r.to_expr().to_string_on(p.chart())
                )));
            }
        }
    }
    if let Some(r) = ideal
        .check_ideal_invariance(action)?
        .into_iter()
        .find(|r| !r.member)
    {
        return Err(Error::Precondition(format!(
            "ideal is not invariant: {} reduces to {}",
            r.subject, r.residue
        )));
    }
    let gens = ideal
        .generator_exprs()
        .iter()
        .map(NormalForm::from_expr)
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = ideal
        .check_poisson_closure_of(&gens, p)?
        .into_iter()
        .find(|r| !r.member)
    {
        return Err(Error::Precondition(format!(
            "ideal is not closed under brackets: {} reduces to {}",
            r.subject, r.residue
        )));
    }
    ideal.ideal_reduce(&p.bracket(f, g)?)
}
