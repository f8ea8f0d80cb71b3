//! Poisson Lie groups on a chart with an explicit group law.
//!
//! The product is given by expressions on the doubled chart (coordinates
//! suffixed `1` and `2`). Left-invariant vectors are `∂ mul(g, h)/∂h_i` at
//! `h = e`, right-invariant ones `∂ mul(h, g)/∂h_i` at `h = e`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse, Chart, Expr, NormalForm, ZeroTest};
use crate::linalg::{self, numeric_rank, SymMatrix};
use crate::multivector::{eval_nf, CovectorField, MultivectorField};
use crate::poisson::{flow, PoissonChart};
use crate::rational::Rational;

/// Largest dimension with a symbolic coframe.
pub const SYMBOLIC_COFRAME_MAX_DIM: usize = 4;

pub type RatMatrix = Vec<Vec<Rational>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Invalid(format!(
                "side must be left or right, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InvariantFrame {
    pub side: Side,
    pub vectors: Vec<MultivectorField>,
    /// Dual coframe; `None` above `SYMBOLIC_COFRAME_MAX_DIM`.
    pub forms: Option<Vec<CovectorField>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result")]
pub enum MultiplicativeCheck {
    Pass {
        pairs: usize,
        max_defect: f64,
    },
    Fail {
        g: Vec<f64>,
        h: Vec<f64>,
        defect: f64,
    },
}

impl MultiplicativeCheck {
    pub fn passed(&self) -> bool {
        matches!(self, MultiplicativeCheck::Pass { .. })
    }
}

/// Linearizations compared with `ad*`: `sign` is `Some(s)` when every
/// linearization equals `s · ad*` entrywise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoadjointMatch {
    pub sign: Option<i64>,
    pub linearizations: Vec<Vec<Vec<String>>>,
    pub coadjoint: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletenessRecord {
    pub field: usize,
    pub start: Vec<f64>,
    pub forward_escaped: bool,
    pub backward_escaped: bool,
}

impl CompletenessRecord {
    pub fn established(&self) -> bool {
        !self.forward_escaped && !self.backward_escaped
    }
}

#[derive(Clone, Debug)]
pub struct GroupChart {
    poisson: PoissonChart,
    doubled: Arc<Chart>,
    mul: Vec<Expr>,
    identity: Vec<Rational>,
    inv: Option<Vec<Expr>>,
}

fn constants(values: &[Rational]) -> Vec<Expr> {
    values.iter().map(|v| Expr::constant(*v)).collect()
}

/// Exact value of `nf` at a rational point; fails unless the result folds to a constant.
pub fn eval_exact(nf: &NormalForm, point: &[Rational]) -> Result<Rational> {
    let e = nf.to_expr().compose(&constants(point));
    let folded = NormalForm::from_expr(&e)?;
    folded
        .as_constant()
        .ok_or_else(|| Error::NotConstant(format!("{:?}", folded.to_expr())))
}

impl GroupChart {
    pub fn new(
        poisson: PoissonChart,
        mul: Vec<Expr>,
        identity: Vec<Rational>,
        inv: Option<Vec<Expr>>,
    ) -> Result<Self> {
        let chart = poisson.chart().clone();
        let n = chart.dim();
        let doubled = Arc::new(chart.doubled()?);
        if mul.len() != n || identity.len() != n {
            return Err(Error::Invalid(format!(
                "group law needs {n} product components and a {n}-point identity"
            )));
        }
        for (i, d) in chart.domains().iter().enumerate() {
            if !d.contains_exact(&identity[i]) {
                return Err(Error::DomainViolation(format!(
                    "identity coordinate `{}` = {} outside {d}",
                    chart.coord(i),
                    identity[i]
                )));
            }
        }
        let g = GroupChart {
            poisson,
            doubled,
            mul,
            identity,
            inv,
        };
        g.validate()?;
        Ok(g)
    }

    /// Parses the product over the doubled chart and the inverse over the chart.
    pub fn parse<S: AsRef<str>>(
        poisson: PoissonChart,
        mul: &[S],
        identity: Vec<Rational>,
        inv: Option<&[S]>,
    ) -> Result<Self> {
        let doubled = poisson.chart().doubled()?;
        let mul = mul
            .iter()
            .map(|s| parse(s.as_ref(), &doubled))
            .collect::<Result<Vec<_>>>()?;
        let inv = inv
            .map(|list| {
                list.iter()
                    .map(|s| parse(s.as_ref(), poisson.chart()))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        Self::new(poisson, mul, identity, inv)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let x: Vec<Expr> = (0..n).map(Expr::coord).collect();
        let e = constants(&self.identity);
        let check = |images: Vec<Expr>, target: &[Expr], what: &str| -> Result<()> {
            for (j, m) in self.mul.iter().enumerate() {
                let got = NormalForm::from_expr(&m.compose(&images))?;
                if got != NormalForm::from_expr(&target[j])? {
                    return Err(Error::Invalid(format!(
                        "group law fails {what} in component `{}`",
                        self.chart().coord(j)
                    )));
                }
            }
            Ok(())
        };
        check([e.clone(), x.clone()].concat(), &x, "mul(e, x) = x")?;
        check([x.clone(), e.clone()].concat(), &x, "mul(x, e) = x")?;
        if let Some(inv) = &self.inv {
            if inv.len() != n {
                return Err(Error::Invalid(
                    "inverse needs one expression per coordinate".into(),
                ));
            }
            check([x.clone(), inv.clone()].concat(), &e, "mul(x, inv(x)) = e")?;
        }
        Ok(())
    }

    pub fn poisson(&self) -> &PoissonChart {
        &self.poisson
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.poisson.chart()
    }

    pub fn doubled_chart(&self) -> &Arc<Chart> {
        &self.doubled
    }

    pub fn dim(&self) -> usize {
        self.chart().dim()
    }

    pub fn mul_exprs(&self) -> &[Expr] {
        &self.mul
    }

    pub fn inverse_exprs(&self) -> Option<&[Expr]> {
        self.inv.as_deref()
    }

    pub fn identity(&self) -> &[Rational] {
        &self.identity
    }

    pub fn identity_f64(&self) -> Vec<f64> {
        self.identity.iter().map(Rational::to_f64).collect()
    }

    pub fn mul_at(&self, g: &[f64], h: &[f64]) -> Result<Vec<f64>> {
        let gh: Vec<f64> = g.iter().chain(h).copied().collect();
        self.mul
            .iter()
            .map(|m| m.evaluate(&self.doubled, &gh))
            .collect()
    }

    /// `F[j][i]`: component `j` of the `i`-th invariant vector field.
    pub fn frame_matrix(&self, side: Side) -> Result<SymMatrix> {
        let n = self.dim();
        let x: Vec<Expr> = (0..n).map(Expr::coord).collect();
        let e = constants(&self.identity);
        // differentiate in the slot that varies near e, then pin it to e
        let (offset, images) = match side {
            Side::Left => (n, [x, e].concat()),
            Side::Right => (0, [e, x].concat()),
        };
        self.mul
            .iter()
            .map(|m| {
                let m = NormalForm::from_expr(m)?;
                (0..n)
                    .map(|i| {
                        NormalForm::from_expr(&m.derivative(offset + i)?.to_expr().compose(&images))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn invariant_frame(&self, side: Side) -> Result<InvariantFrame> {
        let n = self.dim();
        let chart = self.chart().clone();
        let f = self.frame_matrix(side)?;
        let vectors = (0..n)
            .map(|i| {
                let comps: Vec<Expr> = (0..n).map(|j| f[j][i].to_expr()).collect();
                MultivectorField::vector(chart.clone(), &comps)
            })
            .collect::<Result<Vec<_>>>()?;
        let at_e: Vec<Vec<Rational>> = f
            .iter()
            .map(|row| row.iter().map(|v| eval_exact(v, &self.identity)).collect())
            .collect::<Result<_>>()?;
        for (j, row) in at_e.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if *v != Rational::int((i == j) as i64) {
                    return Err(Error::Invalid(
                        "invariant frame is not the coordinate frame at the identity".into(),
                    ));
                }
            }
        }
        let forms = if n <= SYMBOLIC_COFRAME_MAX_DIM {
            let inv = linalg::inverse(&f)?;
            Some(
                inv.into_iter()
                    .map(|row| CovectorField::from_nf(chart.clone(), row))
                    .collect(),
            )
        } else {
            None
        };
        Ok(InvariantFrame {
            side,
            vectors,
            forms,
        })
    }

    /// Numeric coframe at a point: rows of the inverse frame matrix.
    pub fn coframe_at(&self, side: Side, point: &[f64]) -> Result<DMatrix<f64>> {
        self.chart().check_point(point)?;
        let f = self.frame_matrix(side)?;
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                m[(j, i)] = eval_nf(&f[j][i], self.chart(), point)?;
            }
        }
        m.try_inverse().ok_or(Error::SingularJacobian)
    }

    /// Numeric `∂mul/∂h` (`left = true`) or `∂mul/∂g` at `(g, h)`.
    fn translation_jacobian(
        &self,
        jac: &[Vec<NormalForm>],
        g: &[f64],
        h: &[f64],
        left: bool,
    ) -> Result<DMatrix<f64>> {
        let n = self.dim();
        let gh: Vec<f64> = g.iter().chain(h).copied().collect();
        let offset = if left { n } else { 0 };
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                m[(j, i)] = eval_nf(&jac[j][offset + i], &self.doubled, &gh)?;
            }
        }
        Ok(m)
    }

    /// `π(gh) = J_L π(h) J_Lᵀ + J_R π(g) J_Rᵀ` at `pairs` random admissible
    /// pairs; the defect must stay within `tol · max(1, |π(gh)|_∞)`.
    pub fn check_multiplicative(
        &self,
        pairs: usize,
        tol: f64,
        seed: u64,
    ) -> Result<MultiplicativeCheck> {
        let n = self.dim();
        let jac: Vec<Vec<NormalForm>> = self
            .mul
            .iter()
            .map(|m| {
                let m = NormalForm::from_expr(m)?;
                (0..2 * n).map(|i| m.derivative(i)).collect()
            })
            .collect::<Result<_>>()?;
        let mut rng = ZeroTest::new(pairs.max(1), tol, seed).rng();
        let mut taken = 0;
        let mut max_defect: f64 = 0.0;
        for _ in 0..pairs * 20 {
            if taken == pairs {
                break;
            }
            let g = self.chart().sample_point(&mut rng);
            let h = self.chart().sample_point(&mut rng);
            let Some((defect, scale)) = self.multiplicative_defect(&jac, &g, &h) else {
                continue;
            };
            if defect > tol * scale.max(1.0) {
                return Ok(MultiplicativeCheck::Fail { g, h, defect });
            }
            max_defect = max_defect.max(defect);
            taken += 1;
        }
        if taken == 0 && pairs > 0 {
            return Err(Error::NoAdmissibleSamples(self.chart().name().to_string()));
        }
        Ok(MultiplicativeCheck::Pass {
            pairs: taken,
            max_defect,
        })
    }

    fn multiplicative_defect(
        &self,
        jac: &[Vec<NormalForm>],
        g: &[f64],
        h: &[f64],
    ) -> Option<(f64, f64)> {
        let gh = self.mul_at(g, h).ok()?;
        if !self.chart().is_admissible(&gh) {
            return None;
        }
        let lhs = self.poisson.matrix_at(&gh).ok()?;
        let jl = self.translation_jacobian(jac, g, h, true).ok()?;
        let jr = self.translation_jacobian(jac, g, h, false).ok()?;
        let rhs = &jl * self.poisson.matrix_at(h).ok()? * jl.transpose()
            + &jr * self.poisson.matrix_at(g).ok()? * jr.transpose();
        Some(((lhs.clone() - rhs).abs().max(), lhs.abs().max()))
    }

    /// Left: `π^♯` of each left-invariant form. Right: `−π^♯` of each right-invariant form.
    pub fn dressing_fields(&self, side: Side) -> Result<Vec<MultivectorField>> {
        let frame = self.invariant_frame(side)?;
        let forms = frame.forms.ok_or_else(|| {
            Error::Precondition(format!(
                "symbolic coframe unavailable above dimension {SYMBOLIC_COFRAME_MAX_DIM}"
            ))
        })?;
        let minus = NormalForm::constant((-1).into());
        forms
            .iter()
            .map(|theta| {
                let x = self.poisson.sharp(theta)?;
                match side {
                    Side::Left => Ok(x),
                    Side::Right => x.scale_nf(&minus),
                }
            })
            .collect()
    }

    /// Exact Jacobians `J[r][s] = ∂X^r/∂x_s` at the identity; every field must vanish there.
    pub fn linearize_at_identity(&self, fields: &[MultivectorField]) -> Result<Vec<RatMatrix>> {
        let n = self.dim();
        fields
            .iter()
            .enumerate()
            .map(|(idx, x)| {
                x.chart().ensure_same(self.chart())?;
                let comps = x.vector_nf();
                for c in &comps {
                    if !eval_exact(c, &self.identity)?.is_zero() {
                        return Err(Error::NotVanishingAtIdentity(format!("field {idx}: {x}")));
                    }
                }
                comps
                    .iter()
                    .map(|c| {
                        (0..n)
                            .map(|s| eval_exact(&c.derivative(s)?, &self.identity))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Compares linearizations with `ad*` of `algebra`, field `i` paired with basis element `i`.
    pub fn compare_with_coadjoint(
        &self,
        fields: &[MultivectorField],
        algebra: &crate::bialgebra::LieAlgebraSC,
    ) -> Result<CoadjointMatch> {
        if fields.len() != algebra.dim() || algebra.dim() != self.dim() {
            return Err(Error::Invalid(
                "one field per basis element of g is required".into(),
            ));
        }
        let lin = self.linearize_at_identity(fields)?;
        let ad = algebra.coadjoint_matrices()?;
        let mut sign = None;
        for s in [1, -1] {
            let scale = Rational::int(s);
            let mut all = true;
            'cmp: for (l, a) in lin.iter().zip(&ad) {
                for (lr, ar) in l.iter().zip(a) {
                    for (x, y) in lr.iter().zip(ar) {
                        if *x != y.mul(&scale)? {
                            all = false;
                            break 'cmp;
                        }
                    }
                }
            }
            if all {
                sign = Some(s);
                break;
            }
        }
        let show = |m: &[RatMatrix]| -> Vec<Vec<Vec<String>>> {
            m.iter()
                .map(|a| {
                    a.iter()
                        .map(|r| r.iter().map(|v| v.to_string()).collect())
                        .collect()
                })
                .collect()
        };
        Ok(CoadjointMatch {
            sign,
            linearizations: show(&lin),
            coadjoint: show(&ad),
        })
    }

    /// `t[k][i][j] = ∂_k π^{ij}(e)`, laid out like cobracket constants `d^{ij}_k`.
    pub fn linearize_bivector_at_identity(&self) -> Result<crate::bialgebra::Table> {
        let n = self.dim();
        let mut t = vec![vec![vec![Rational::ZERO; n]; n]; n];
        for (k, tk) in t.iter_mut().enumerate() {
            for (i, tki) in tk.iter_mut().enumerate() {
                for (j, v) in tki.iter_mut().enumerate() {
                    let entry = self.poisson.entry(i, j)?;
                    *v = eval_exact(&entry.derivative(k)?, &self.identity)?;
                }
            }
        }
        Ok(t)
    }

    /// `π(e)` as an exact matrix.
    pub fn bivector_at_identity(&self) -> Result<RatMatrix> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| eval_exact(&self.poisson.entry(i, j)?, &self.identity))
                    .collect()
            })
            .collect()
    }
}

/// Cartesian product of per-axis values.
pub fn grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect()
    })
}

/// Rank of the span of `fields` at each point.
pub fn orbit_rank_scan(
    fields: &[MultivectorField],
    points: &[Vec<f64>],
) -> Result<Vec<(Vec<f64>, usize)>> {
    let Some(first) = fields.first() else {
        return Ok(points.iter().map(|p| (p.clone(), 0)).collect());
    };
    let n = first.chart().dim();
    points
        .iter()
        .map(|p| {
            let mut m = DMatrix::zeros(n, fields.len());
            for (c, x) in fields.iter().enumerate() {
                for (r, v) in x.vector_at(p)?.into_iter().enumerate() {
                    m[(r, c)] = v;
                }
            }
            Ok((p.clone(), numeric_rank(&m)))
        })
        .collect()
}

/// Flows each field forward and backward to `horizon` from `starts` random admissible points.
pub fn completeness_scan(
    fields: &[MultivectorField],
    starts: usize,
    horizon: f64,
    step: f64,
    rng: &mut impl Rng,
) -> Result<Vec<CompletenessRecord>> {
    let mut out = Vec::new();
    for (idx, x) in fields.iter().enumerate() {
        let minus = x.scale(&Expr::int(-1))?;
        for _ in 0..starts {
            let start = x.chart().sample_point(rng);
            let fwd = flow(x, &start, horizon, step)?;
            let bwd = flow(&minus, &start, horizon, step)?;
            out.push(CompletenessRecord {
                field: idx,
                start,
                forward_escaped: fwd.escaped,
                backward_escaped: bwd.escaped,
            });
        }
    }
    Ok(out)
}
