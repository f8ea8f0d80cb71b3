//! Poisson charts: brackets, Hamiltonian fields, Jacobi checks, rank and flows.
//!
//! Convention: `X_f = π^♯(df)` and `X_f(g) = {f, g}`.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Chart, Expr, NormalForm, ZeroTest, ZeroVerdict};
use crate::linalg::numeric_rank;
use crate::multivector::{CovectorField, MultivectorField};

/// Trajectories leaving this box count as blowup.
pub const FLOW_BLOWUP: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct PoissonChart {
    chart: Arc<Chart>,
    pi: MultivectorField,
    label: String,
}

/// Outcome of `check_jacobi`: the Schouten path and the coordinate Jacobiator path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiCheck {
    pub schouten: ZeroVerdict,
    pub jacobiator: ZeroVerdict,
    /// First coordinate triple with a nonvanishing Jacobiator.
    pub triple: Option<[usize; 3]>,
}

impl JacobiCheck {
    pub fn verdict(&self) -> &ZeroVerdict {
        &self.schouten
    }

    pub fn paths_agree(&self) -> bool {
        self.schouten.is_nonzero() == self.jacobiator.is_nonzero()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowResult {
    pub trajectory: Vec<(f64, Vec<f64>)>,
    pub escaped: bool,
}

impl FlowResult {
    pub fn start(&self) -> &[f64] {
        &self.trajectory[0].1
    }

    pub fn end(&self) -> &[f64] {
        &self.trajectory.last().expect("trajectory has a start").1
    }

    pub fn end_time(&self) -> f64 {
        self.trajectory.last().expect("trajectory has a start").0
    }
}

impl PoissonChart {
    pub fn new(pi: MultivectorField, label: &str) -> Result<Self> {
        if pi.degree() != 2 {
            return Err(Error::Invalid(format!(
                "Poisson tensor must be a bivector, got degree {}",
                pi.degree()
            )));
        }
        Ok(PoissonChart {
            chart: pi.chart().clone(),
            pi,
            label: label.to_string(),
        })
    }

    /// Builds `π` from entries `π^{ij}` given as `(i, j, expr)`.
    pub fn from_entries(
        chart: Arc<Chart>,
        label: &str,
        entries: Vec<(usize, usize, Expr)>,
    ) -> Result<Self> {
        let pi = MultivectorField::from_terms(
            chart,
            2,
            entries.into_iter().map(|(i, j, e)| (vec![i, j], e)),
        )?;
        Self::new(pi, label)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn pi(&self) -> &MultivectorField {
        &self.pi
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `{x_i, x_j} = π^{ij}`.
    pub fn entry(&self, i: usize, j: usize) -> Result<NormalForm> {
        self.pi.component_nf(&[i, j])
    }

    pub fn bracket(&self, f: &Expr, g: &Expr) -> Result<Expr> {
        Ok(self
            .bracket_nf(&NormalForm::from_expr(f)?, &NormalForm::from_expr(g)?)?
            .to_expr())
    }

    /// `π(df, dg) = Σ_{i<j} π^{ij} (∂_i f ∂_j g − ∂_j f ∂_i g)`.
    pub fn bracket_nf(&self, f: &NormalForm, g: &NormalForm) -> Result<NormalForm> {
        let n = self.chart.dim();
        let df: Vec<NormalForm> = (0..n).map(|i| f.derivative(i)).collect::<Result<_>>()?;
        let dg: Vec<NormalForm> = (0..n).map(|i| g.derivative(i)).collect::<Result<_>>()?;
        let mut acc = NormalForm::zero();
        for (key, p) in self.pi.normal_components() {
            let (i, j) = (key[0], key[1]);
            let cross = df[i].mul(&dg[j])?.sub(&df[j].mul(&dg[i])?)?;
            if !cross.is_zero() {
                acc = acc.add(&p.mul(&cross)?)?;
            }
        }
        Ok(acc)
    }

    pub fn sharp(&self, alpha: &CovectorField) -> Result<MultivectorField> {
        self.pi.contract(alpha)
    }

    pub fn hamiltonian_field(&self, f: &Expr) -> Result<MultivectorField> {
        self.sharp(&CovectorField::differential(self.chart.clone(), f)?)
    }

    pub(crate) fn hamiltonian_field_nf(&self, f: &NormalForm) -> Result<MultivectorField> {
        self.sharp(&CovectorField::differential_nf(self.chart.clone(), f)?)
    }

    /// `{{x_i,x_j},x_k} + {{x_j,x_k},x_i} + {{x_k,x_i},x_j}`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Result<NormalForm> {
        let x = |m: usize| NormalForm::coord(m);
        let mut acc = NormalForm::zero();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            let inner = self.bracket_nf(&x(a), &x(b))?;
            acc = acc.add(&self.bracket_nf(&inner, &x(c))?)?;
        }
        Ok(acc)
    }

    /// Zero test of `[π, π]`, cross-checked against the Jacobiator of every
    /// coordinate triple.
    pub fn check_jacobi(&self, test: &ZeroTest) -> Result<JacobiCheck> {
        let schouten = self.pi.schouten(&self.pi)?.zero_verdict(test)?;
        let n = self.chart.dim();
        let mut jacobiator = ZeroVerdict::SymbolicZero;
        let mut triple = None;
        'outer: for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let v = test.check_normal(&self.jacobiator(i, j, k)?, &self.chart)?;
                    if v.is_nonzero() {
                        triple = Some([i, j, k]);
                        jacobiator = v;
                        break 'outer;
                    }
                    jacobiator = jacobiator.combine(v);
                }
            }
        }
        Ok(JacobiCheck {
            schouten,
            jacobiator,
            triple,
        })
    }

    pub fn matrix_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        self.pi.bivector_matrix_at(point)
    }

    /// Numeric rank of `π(point)`; always even for a skew matrix.
    pub fn rank_at(&self, point: &[f64]) -> Result<usize> {
        let rank = numeric_rank(&self.matrix_at(point)?);
        if rank % 2 != 0 {
            return Err(Error::Invalid(format!(
                "internal: odd rank {rank} for a skew matrix at {point:?}"
            )));
        }
        Ok(rank)
    }

    /// Zero test of `{f, x_i}` for every coordinate.
    pub fn casimir_screen(&self, f: &Expr, test: &ZeroTest) -> Result<ZeroVerdict> {
        let f = NormalForm::from_expr(f)?;
        let mut verdict = ZeroVerdict::SymbolicZero;
        for i in 0..self.chart.dim() {
            let b = self.bracket_nf(&f, &NormalForm::coord(i))?;
            verdict = verdict.combine(test.check_normal(&b, &self.chart)?);
            if verdict.is_nonzero() {
                break;
            }
        }
        Ok(verdict)
    }

    /// `max |f(x(t)) − f(x(0))|` over all trajectory points.
    pub fn casimir_drift(&self, f: &Expr, flows: &[FlowResult]) -> Result<f64> {
        let mut drift: f64 = 0.0;
        for flow in flows {
            let f0 = f.evaluate(&self.chart, flow.start())?;
            for (_, p) in &flow.trajectory {
                drift = drift.max((f.evaluate(&self.chart, p)? - f0).abs());
            }
        }
        Ok(drift)
    }
}

fn field_at(comps: &[(usize, NormalForm)], n: usize, p: &[f64]) -> Option<Vec<f64>> {
    let mut v = vec![0.0; n];
    for (i, c) in comps {
        v[*i] = c.eval(p)?;
    }
    Some(v)
}

/// Fixed-step classical RK4 from `start` to `t_end`; the last step is shortened
/// to land on `t_end`. Leaving the chart domain, a singular evaluation or
/// `|x_i| > FLOW_BLOWUP` stops the flow with `escaped = true`.
pub fn flow(x: &MultivectorField, start: &[f64], t_end: f64, step: f64) -> Result<FlowResult> {
    if x.degree() != 1 {
        return Err(Error::Invalid("flow of a non-vector field".into()));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Invalid("flow step must be positive".into()));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::Invalid("flow end time must be nonnegative".into()));
    }
    let chart = x.chart();
    chart.check_point(start)?;
    let n = chart.dim();
    let comps: Vec<(usize, NormalForm)> = x
        .normal_components()
        .map(|(k, v)| (k[0], v.clone()))
        .collect();
    let eval = |p: &[f64]| field_at(&comps, n, p);
    let axpy = |p: &[f64], h: f64, k: &[f64]| -> Vec<f64> {
        p.iter().zip(k).map(|(a, b)| a + h * b).collect()
    };

    let mut trajectory = vec![(0.0, start.to_vec())];
    let mut t = 0.0;
    let mut p = start.to_vec();
    let steps = (t_end / step).ceil() as usize;
    for s in 0..steps {
        let h = if s + 1 == steps { t_end - t } else { step };
        if h <= 0.0 {
            break;
        }
        let next = (|| {
            let k1 = eval(&p)?;
            let k2 = eval(&axpy(&p, h / 2.0, &k1))?;
            let k3 = eval(&axpy(&p, h / 2.0, &k2))?;
            let k4 = eval(&axpy(&p, h, &k3))?;
            Some(
                (0..n)
                    .map(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect::<Vec<f64>>(),
            )
        })();
        let Some(next) = next else {
            return Ok(FlowResult {
                trajectory,
                escaped: true,
            });
        };
        if !chart.is_admissible(&next) || next.iter().any(|c| c.abs() > FLOW_BLOWUP) {
            return Ok(FlowResult {
                trajectory,
                escaped: true,
            });
        }
        t = if s + 1 == steps { t_end } else { t + h };
        p = next;
        trajectory.push((t, p.clone()));
    }
    Ok(FlowResult {
        trajectory,
        escaped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Domain};

    fn gstar() -> PoissonChart {
        let c = Arc::new(
            Chart::new("gstar", &["a", "b"])
                .unwrap()
                .with_domain("a", Domain::Positive)
                .unwrap(),
        );
        let ab = parse("a*b", &c).unwrap();
        PoissonChart::from_entries(c, "gstar", vec![(0, 1, ab)]).unwrap()
    }

    fn so3(z_term: &str) -> PoissonChart {
        let c = Arc::new(Chart::new("xyz", &["x", "y", "z"]).unwrap());
        let e = |s: &str| parse(s, &c).unwrap();
        PoissonChart::from_entries(
            c.clone(),
            "so3",
            vec![(0, 1, e(z_term)), (1, 2, e("x")), (2, 0, e("y"))],
        )
        .unwrap()
    }

    fn canonical_qpy() -> PoissonChart {
        let c = Arc::new(Chart::new("qpy", &["q", "p", "y"]).unwrap());
        PoissonChart::from_entries(c, "canonical", vec![(0, 1, Expr::one())]).unwrap()
    }

    fn br(p: &PoissonChart, f: &str, g: &str) -> String {
        let c = p.chart();
        p.bracket(&parse(f, c).unwrap(), &parse(g, c).unwrap())
            .unwrap()
            .to_string_on(c)
    }

    #[test]
    fn bracket_examples() {
        let p = gstar();
        assert_eq!(br(&p, "a", "b"), "a*b");
        assert_eq!(br(&p, "a^2 + b", "a^2 + b"), "0");
        let c = Arc::new(
            Chart::new("gstar", &["a", "b"])
                .unwrap()
                .with_domain("a", Domain::Positive)
                .unwrap()
                .with_domain("b", Domain::Positive)
                .unwrap(),
        );
        let p = PoissonChart::new(p.pi().on_chart(c).unwrap(), "gstar+").unwrap();
        assert_eq!(br(&p, "log(a)", "log(b)"), "1");
    }

    #[test]
    fn sharp_examples() {
        let p = gstar();
        let c = p.chart().clone();
        let e = |s: &str| parse(s, &c).unwrap();
        let alpha = CovectorField::new(c.clone(), &[e("1/a"), e("0")]).unwrap();
        let beta = CovectorField::new(c.clone(), &[e("0"), e("1/a")]).unwrap();
        let x = p.sharp(&alpha).unwrap();
        let y = p.sharp(&beta).unwrap();
        assert_eq!(x.vector_components().unwrap(), vec![Expr::zero(), e("b")]);
        assert_eq!(
            NormalForm::from_expr(&x.component(&[1]).unwrap()).unwrap(),
            NormalForm::from_expr(&e("b")).unwrap()
        );
        assert_eq!(
            NormalForm::from_expr(&y.component(&[0]).unwrap()).unwrap(),
            NormalForm::from_expr(&e("-b")).unwrap()
        );
        // oracle: π(α, dx_j) = Σ_i α_i π^{ij}
        for (form, field) in [(&alpha, &x), (&beta, &y)] {
            for j in 0..2 {
                let mut expected = NormalForm::zero();
                for i in 0..2 {
                    let a = NormalForm::from_expr(&form.components()[i]).unwrap();
                    expected = expected
                        .add(&a.mul(&p.entry(i, j).unwrap()).unwrap())
                        .unwrap();
                }
                let got = NormalForm::from_expr(&field.component(&[j]).unwrap()).unwrap();
                assert_eq!(got, expected);
            }
        }
        assert!(p.sharp(&CovectorField::zero(c)).unwrap().is_zero());
    }

    #[test]
    fn hamiltonian_examples() {
        let p = canonical_qpy();
        let c = p.chart().clone();
        let xq = p.hamiltonian_field(&parse("q", &c).unwrap()).unwrap();
        assert_eq!(
            xq.vector_components().unwrap(),
            vec![Expr::zero(), Expr::one(), Expr::zero()]
        );
        let xp = p.hamiltonian_field(&parse("p", &c).unwrap()).unwrap();
        assert_eq!(xp.component(&[0]).unwrap().to_string_on(&c), "-1");
        let g = gstar();
        let xa = g
            .hamiltonian_field(&parse("a", g.chart()).unwrap())
            .unwrap();
        assert_eq!(xa.component(&[1]).unwrap().to_string_on(g.chart()), "a*b");
        assert!(xa.component(&[0]).unwrap().is_const_zero());
        // X_f(g) = {f, g}
        let f = parse("a^2*b", g.chart()).unwrap();
        let h = parse("b^3 + a", g.chart()).unwrap();
        let lhs = g.hamiltonian_field(&f).unwrap().apply(&h).unwrap();
        assert_eq!(
            NormalForm::from_expr(&lhs).unwrap(),
            NormalForm::from_expr(&g.bracket(&f, &h).unwrap()).unwrap()
        );
    }

    #[test]
    fn jacobi_examples() {
        let t = ZeroTest::default();
        let j = gstar().check_jacobi(&t).unwrap();
        assert!(j.schouten.is_symbolic_zero() && j.paths_agree());
        let j = so3("z").check_jacobi(&t).unwrap();
        assert!(j.schouten.is_symbolic_zero());
        assert!(j.jacobiator.is_symbolic_zero());
        // {x,y} = z + x breaks Jacobi: Jacobiator = {z+x, z} + {x, x} + {y, y}... ∝ y
        let j = so3("z + x").check_jacobi(&t).unwrap();
        assert!(j.schouten.is_nonzero());
        assert!(j.jacobiator.is_nonzero());
        assert_eq!(j.triple, Some([0, 1, 2]));
    }

    #[test]
    fn z_squared_variant_satisfies_jacobi() {
        // π^{xy}=z², π^{yz}=x, π^{zx}=y: Jacobiator = {z², z} + {x, x} + {y, y} = 0.
        let p = so3("z^2");
        assert!(p.jacobiator(0, 1, 2).unwrap().is_zero());
        assert!(p
            .check_jacobi(&ZeroTest::default())
            .unwrap()
            .schouten
            .is_symbolic_zero());
    }

    #[test]
    fn rank_examples() {
        let g = gstar();
        assert_eq!(g.rank_at(&[1.0, 0.0]).unwrap(), 0);
        assert_eq!(g.rank_at(&[1.0, 1.0]).unwrap(), 2);
        assert_eq!(canonical_qpy().rank_at(&[0.3, -1.0, 5.0]).unwrap(), 2);
        assert!(matches!(
            g.rank_at(&[-1.0, 1.0]),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn flow_examples() {
        let p = canonical_qpy();
        let c = p.chart().clone();
        let zero = MultivectorField::zero(c.clone(), 1);
        let r = flow(&zero, &[1.0, 2.0, 3.0], 1.0, 0.1).unwrap();
        assert!(r.trajectory.iter().all(|(_, x)| x == &vec![1.0, 2.0, 3.0]));

        let dq = MultivectorField::coordinate_vector(c, 0).unwrap();
        let r = flow(&dq, &[0.0, 0.0, 0.0], 1.0, 1e-3).unwrap();
        assert!(!r.escaped);
        assert!((r.end()[0] - 1.0).abs() < 1e-9 && r.end()[1] == 0.0);
        assert_eq!(r.end_time(), 1.0);
        assert!(r.trajectory.windows(2).all(|w| w[0].0 < w[1].0));

        let s = so3("z");
        let x = s
            .hamiltonian_field(&parse("x", s.chart()).unwrap())
            .unwrap();
        let r = flow(&x, &[0.0, 1.0, 0.0], 1.0, 1e-3).unwrap();
        let casimir = parse("x^2 + y^2 + z^2", s.chart()).unwrap();
        assert!(s
            .casimir_screen(&casimir, &ZeroTest::default())
            .unwrap()
            .is_symbolic_zero());
        assert!(s.casimir_drift(&casimir, &[r.clone()]).unwrap() < 1e-6);
        assert_eq!(s.casimir_drift(&Expr::int(3), &[r]).unwrap(), 0.0);
    }

    #[test]
    fn flow_escape() {
        let g = gstar();
        // −b ∂_a from (1, 1): a(t) = 1 − t leaves a > 0 at t = 1.
        let x =
            MultivectorField::vector(g.chart().clone(), &[Expr::int(-1), Expr::zero()]).unwrap();
        let r = flow(&x, &[1.0, 1.0], 2.0, 1e-2).unwrap();
        assert!(r.escaped);
        assert!(r.end()[0] > 0.0);
        assert!(r.end_time() < 1.0 + 1e-9);
        // ẋ = x² blows up at t = 1
        let line = Arc::new(Chart::new("x", &["x"]).unwrap());
        let sq = MultivectorField::vector(line.clone(), &[parse("x^2", &line).unwrap()]).unwrap();
        assert!(flow(&sq, &[1.0], 2.0, 1e-3).unwrap().escaped);
        assert!(flow(&sq, &[1.0], -1.0, 1e-3).is_err());
    }

    #[test]
    fn casimir_screen_rejects_b_on_gstar() {
        let g = gstar();
        let b = parse("b", g.chart()).unwrap();
        assert!(g
            .casimir_screen(&b, &ZeroTest::default())
            .unwrap()
            .is_nonzero());
    }
}
