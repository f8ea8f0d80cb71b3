//! Antisymmetric multivector fields, 1-forms and chart maps.
//!
//! Components live on strictly increasing index tuples; signs from reordering
//! are produced by permutation parity when components are accessed or built.
//!
//! The Schouten bracket uses the odd-coordinate formula
//!
//! ```text
//! [A, B] = Σ_i (A ∂⃖/∂θ_i)(∂B/∂x_i) − (∂A/∂x_i)(∂⃗/∂θ_i B)
//! ```
//!
//! where `∂⃗/∂θ_i` removes `∂_i` from the front (insertion of `dx_i` into the
//! first slot) and `∂⃖/∂θ_i` removes it from the back. With this sign
//! convention `[X, f] = X(f)`, `[X, Y]` is the Lie bracket of vector fields,
//! `[X, A] = L_X A`, and `[π, π] = 0` iff `π` satisfies the Jacobi identity.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::{Chart, Expr, NormalForm, ZeroTest, ZeroVerdict};

type Components = BTreeMap<Vec<usize>, NormalForm>;

/// Sorts `idx`, returning the sign of the permutation, or `None` if an index
/// repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

fn add_component(comps: &mut Components, key: Vec<usize>, value: NormalForm) -> Result<()> {
    if value.is_zero() {
        return Ok(());
    }
    match comps.get_mut(&key) {
        Some(existing) => {
            let sum = existing.add(&value)?;
            if sum.is_zero() {
                comps.remove(&key);
            } else {
                *existing = sum;
            }
        }
        None => {
            comps.insert(key, value);
        }
    }
    Ok(())
}

#[derive(Clone, PartialEq)]
pub struct MultivectorField {
    chart: Arc<Chart>,
    degree: usize,
    comps: Components,
}

impl MultivectorField {
    pub fn zero(chart: Arc<Chart>, degree: usize) -> Self {
        MultivectorField {
            chart,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// Builds a field from `(indices, coefficient)` terms; indices may be in
    /// any order and repeated keys accumulate.
    pub fn from_terms<I>(chart: Arc<Chart>, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Expr)>,
    {
        let mut comps = Components::new();
        for (idx, coeff) in terms {
            if idx.len() != degree {
                return Err(Error::Invalid(format!(
                    "term with {} indices in a degree-{degree} field",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= chart.dim()) {
                return Err(Error::Invalid(format!(
                    "coordinate index {bad} out of range"
                )));
            }
            let Some((key, sign)) = sort_with_sign(&idx) else {
                continue;
            };
            let value = NormalForm::from_expr(&coeff)?.scale(&sign.into())?;
            add_component(&mut comps, key, value)?;
        }
        Ok(MultivectorField {
            chart,
            degree,
            comps,
        })
    }

    pub fn scalar(chart: Arc<Chart>, f: &Expr) -> Result<Self> {
        Self::from_terms(chart, 0, [(vec![], f.clone())])
    }

    /// Vector field `Σ v_i ∂_i`.
    pub fn vector(chart: Arc<Chart>, components: &[Expr]) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::Invalid(format!(
                "{} components for a chart of dimension {}",
                components.len(),
                chart.dim()
            )));
        }
        let terms: Vec<_> = components
            .iter()
            .enumerate()
            .map(|(i, c)| (vec![i], c.clone()))
            .collect();
        Self::from_terms(chart, 1, terms)
    }

    pub fn coordinate_vector(chart: Arc<Chart>, i: usize) -> Result<Self> {
        Self::from_terms(chart, 1, [(vec![i], Expr::one())])
    }

    fn from_nf(chart: Arc<Chart>, degree: usize, comps: Components) -> Self {
        MultivectorField {
            chart,
            degree,
            comps,
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Stored components on increasing index tuples, as simplified expressions.
    pub fn components(&self) -> impl Iterator<Item = (&[usize], Expr)> + '_ {
        self.comps.iter().map(|(k, v)| (k.as_slice(), v.to_expr()))
    }

    pub fn normal_components(&self) -> impl Iterator<Item = (&[usize], &NormalForm)> + '_ {
        self.comps.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Component for an arbitrary index order, with the permutation sign.
    pub fn component(&self, idx: &[usize]) -> Result<Expr> {
        Ok(self.component_nf(idx)?.to_expr())
    }

    pub fn component_nf(&self, idx: &[usize]) -> Result<NormalForm> {
        match sort_with_sign(idx) {
            None => Ok(NormalForm::zero()),
            Some((key, sign)) => match self.comps.get(&key) {
                None => Ok(NormalForm::zero()),
                Some(v) => v.scale(&sign.into()),
            },
        }
    }

    /// Components of a vector field as a dense list.
    pub fn vector_components(&self) -> Result<Vec<Expr>> {
        if self.degree != 1 {
            return Err(Error::Invalid("not a vector field".into()));
        }
        Ok((0..self.chart.dim())
            .map(|i| {
                self.comps
                    .get(&vec![i])
                    .map(|v| v.to_expr())
                    .unwrap_or_else(Expr::zero)
            })
            .collect())
    }

    pub(crate) fn vector_nf(&self) -> Vec<NormalForm> {
        (0..self.chart.dim())
            .map(|i| {
                self.comps
                    .get(&vec![i])
                    .cloned()
                    .unwrap_or_else(NormalForm::zero)
            })
            .collect()
    }

    pub fn scalar_value(&self) -> Expr {
        self.comps
            .get(&Vec::new())
            .map(|v| v.to_expr())
            .unwrap_or_else(Expr::zero)
    }

    fn same_chart(&self, other: &MultivectorField) -> Result<()> {
        self.chart.ensure_same(&other.chart)
    }

    pub fn add(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.same_chart(other)?;
        if self.degree != other.degree {
            return Err(Error::Invalid("adding fields of different degree".into()));
        }
        let mut comps = self.comps.clone();
        for (k, v) in &other.comps {
            add_component(&mut comps, k.clone(), v.clone())?;
        }
        Ok(Self::from_nf(self.chart.clone(), self.degree, comps))
    }

    pub fn sub(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.add(&other.scale_nf(&NormalForm::constant((-1).into()))?)
    }

    pub fn scale(&self, f: &Expr) -> Result<MultivectorField> {
        self.scale_nf(&NormalForm::from_expr(f)?)
    }

    pub(crate) fn scale_nf(&self, f: &NormalForm) -> Result<MultivectorField> {
        let mut comps = Components::new();
        for (k, v) in &self.comps {
            add_component(&mut comps, k.clone(), v.mul(f)?)?;
        }
        Ok(Self::from_nf(self.chart.clone(), self.degree, comps))
    }

    /// Exterior product; `A∧B = (−1)^{kl} B∧A`.
    pub fn wedge(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.same_chart(other)?;
        let mut comps = Components::new();
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                let joined: Vec<usize> = i.iter().chain(j.iter()).copied().collect();
                if let Some((key, sign)) = sort_with_sign(&joined) {
                    add_component(&mut comps, key, a.mul(b)?.scale(&sign.into())?)?;
                }
            }
        }
        Ok(Self::from_nf(
            self.chart.clone(),
            self.degree + other.degree,
            comps,
        ))
    }

    fn coefficient_derivative(&self, x: usize) -> Result<MultivectorField> {
        let mut comps = Components::new();
        for (k, v) in &self.comps {
            add_component(&mut comps, k.clone(), v.derivative(x)?)?;
        }
        Ok(Self::from_nf(self.chart.clone(), self.degree, comps))
    }

    /// Removes `∂_i` from the front (`front = true`) or back of each term.
    fn odd_derivative(&self, i: usize, front: bool) -> Result<MultivectorField> {
        let mut comps = Components::new();
        if self.degree > 0 {
            for (k, v) in &self.comps {
                if let Some(p) = k.iter().position(|&j| j == i) {
                    let moves = if front { p } else { k.len() - 1 - p };
                    let sign: i64 = if moves % 2 == 0 { 1 } else { -1 };
                    let mut key = k.clone();
                    key.remove(p);
                    add_component(&mut comps, key, v.scale(&sign.into())?)?;
                }
            }
        }
        Ok(Self::from_nf(
            self.chart.clone(),
            self.degree.saturating_sub(1),
            comps,
        ))
    }

    /// Schouten–Nijenhuis bracket (see module docs for the sign convention).
    pub fn schouten(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.same_chart(other)?;
        if self.degree + other.degree == 0 {
            return Err(Error::Invalid("Schouten bracket of two scalars".into()));
        }
        let degree = self.degree + other.degree - 1;
        let mut out = MultivectorField::zero(self.chart.clone(), degree);
        for i in 0..self.chart.dim() {
            let first = self
                .odd_derivative(i, false)?
                .wedge(&other.coefficient_derivative(i)?)?;
            let second = self
                .coefficient_derivative(i)?
                .wedge(&other.odd_derivative(i, true)?)?;
            out = out.add(&first.with_degree(degree))?;
            out = out.sub(&second.with_degree(degree))?;
        }
        Ok(out)
    }

    fn with_degree(mut self, degree: usize) -> Self {
        if self.comps.is_empty() {
            self.degree = degree;
        }
        self
    }

    /// `L_X A`, equal to `schouten(X, A)`.
    pub fn lie_derivative(x: &MultivectorField, a: &MultivectorField) -> Result<MultivectorField> {
        if x.degree != 1 {
            return Err(Error::Invalid(
                "Lie derivative along a non-vector field".into(),
            ));
        }
        x.schouten(a)
    }

    /// Directional derivative `X(f)` of a scalar expression.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        Ok(self.apply_nf(&NormalForm::from_expr(f)?)?.to_expr())
    }

    pub(crate) fn apply_nf(&self, f: &NormalForm) -> Result<NormalForm> {
        if self.degree != 1 {
            return Err(Error::Invalid("not a vector field".into()));
        }
        let mut acc = NormalForm::zero();
        for (k, v) in &self.comps {
            let df = f.derivative(k[0])?;
            if !df.is_zero() {
                acc = acc.add(&v.mul(&df)?)?;
            }
        }
        Ok(acc)
    }

    /// Insertion of `alpha` into the first slot; `contract(π, α) = π^♯(α)`.
    pub fn contract(&self, alpha: &CovectorField) -> Result<MultivectorField> {
        self.chart.ensure_same(&alpha.chart)?;
        if self.degree == 0 {
            return Err(Error::Invalid("contraction of a scalar".into()));
        }
        let mut out = MultivectorField::zero(self.chart.clone(), self.degree - 1);
        for (i, a) in alpha.comps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            out = out.add(&self.odd_derivative(i, true)?.scale_nf(a)?)?;
        }
        Ok(out)
    }

    /// Zero test over every component.
    pub fn zero_verdict(&self, test: &ZeroTest) -> Result<ZeroVerdict> {
        let mut verdict = ZeroVerdict::SymbolicZero;
        for v in self.comps.values() {
            verdict = verdict.combine(test.check_normal(v, &self.chart)?);
            if verdict.is_nonzero() {
                break;
            }
        }
        Ok(verdict)
    }

    /// Numeric vector of a vector field at a point.
    pub fn vector_at(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.chart.check_point(point)?;
        let mut out = vec![0.0; self.chart.dim()];
        for (k, v) in &self.comps {
            out[k[0]] = eval_nf(v, &self.chart, point)?;
        }
        Ok(out)
    }

    /// Full skew matrix `π^{ij}` of a bivector at a point.
    pub fn bivector_matrix_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        if self.degree != 2 {
            return Err(Error::Invalid("not a bivector".into()));
        }
        self.chart.check_point(point)?;
        let n = self.chart.dim();
        let mut m = DMatrix::zeros(n, n);
        for (k, v) in &self.comps {
            let x = eval_nf(v, &self.chart, point)?;
            m[(k[0], k[1])] = x;
            m[(k[1], k[0])] = -x;
        }
        Ok(m)
    }

    /// Moves the field to a chart with the same coordinate names; domains may differ.
    pub fn on_chart(&self, chart: Arc<Chart>) -> Result<MultivectorField> {
        if self.chart.coords() != chart.coords() {
            return Err(Error::ChartMismatch(
                self.chart.name().to_string(),
                chart.name().to_string(),
            ));
        }
        Ok(Self::from_nf(chart, self.degree, self.comps.clone()))
    }

    /// Text form `{a,b: a*b; ...}` using chart coordinate names.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn eval_nf(v: &NormalForm, chart: &Chart, point: &[f64]) -> Result<f64> {
    v.eval(point)
        .ok_or_else(|| Error::Singular(v.to_expr().to_string_on(chart)))
}

impl fmt::Display for MultivectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.comps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", v.to_expr().display(&self.chart))?;
            for i in k {
                write!(f, "*d_{}", self.chart.coord(*i))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultivectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultivectorField[{}; deg {}]({self})",
            self.chart.name(),
            self.degree
        )
    }
}

/// A 1-form `Σ f_i dx_i`.
#[derive(Clone, PartialEq)]
pub struct CovectorField {
    chart: Arc<Chart>,
    comps: Vec<NormalForm>,
}

impl CovectorField {
    pub fn new(chart: Arc<Chart>, components: &[Expr]) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::Invalid(format!(
                "{} components for a chart of dimension {}",
                components.len(),
                chart.dim()
            )));
        }
        let comps = components
            .iter()
            .map(NormalForm::from_expr)
            .collect::<Result<Vec<_>>>()?;
        Ok(CovectorField { chart, comps })
    }

    pub(crate) fn from_nf(chart: Arc<Chart>, comps: Vec<NormalForm>) -> Self {
        CovectorField { chart, comps }
    }

    pub fn zero(chart: Arc<Chart>) -> Self {
        let n = chart.dim();
        CovectorField {
            chart,
            comps: vec![NormalForm::zero(); n],
        }
    }

    /// `df`.
    pub fn differential(chart: Arc<Chart>, f: &Expr) -> Result<Self> {
        let nf = NormalForm::from_expr(f)?;
        Ok(Self::differential_nf(chart, &nf)?)
    }

    pub(crate) fn differential_nf(chart: Arc<Chart>, f: &NormalForm) -> Result<Self> {
        let comps = (0..chart.dim())
            .map(|i| f.derivative(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(CovectorField { chart, comps })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> Vec<Expr> {
        self.comps.iter().map(|c| c.to_expr()).collect()
    }

    pub(crate) fn normal_components(&self) -> &[NormalForm] {
        &self.comps
    }

    pub fn scale(&self, f: &Expr) -> Result<CovectorField> {
        let f = NormalForm::from_expr(f)?;
        let comps = self
            .comps
            .iter()
            .map(|c| c.mul(&f))
            .collect::<Result<_>>()?;
        Ok(CovectorField {
            chart: self.chart.clone(),
            comps,
        })
    }

    pub fn add(&self, other: &CovectorField) -> Result<CovectorField> {
        self.chart.ensure_same(&other.chart)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(CovectorField {
            chart: self.chart.clone(),
            comps,
        })
    }

    /// `α(X)` for a vector field `X`.
    pub fn pair(&self, x: &MultivectorField) -> Result<Expr> {
        Ok(self.pair_nf(x)?.to_expr())
    }

    pub(crate) fn pair_nf(&self, x: &MultivectorField) -> Result<NormalForm> {
        self.chart.ensure_same(x.chart())?;
        if x.degree() != 1 {
            return Err(Error::Invalid("pairing a 1-form with a non-vector".into()));
        }
        let mut acc = NormalForm::zero();
        for (k, v) in x.normal_components() {
            acc = acc.add(&self.comps[k[0]].mul(v)?)?;
        }
        Ok(acc)
    }

    pub fn values_at(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.chart.check_point(point)?;
        self.comps
            .iter()
            .map(|c| eval_nf(c, &self.chart, point))
            .collect()
    }
}

impl fmt::Display for CovectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({})*d{}",
                c.to_expr().display(&self.chart),
                self.chart.coord(i)
            )?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CovectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CovectorField[{}]({self})", self.chart.name())
    }
}

/// A map between charts, one expression per target coordinate.
#[derive(Clone, Debug)]
pub struct ChartMap {
    source: Arc<Chart>,
    target: Arc<Chart>,
    comps: Vec<Expr>,
}

impl ChartMap {
    pub fn new(source: Arc<Chart>, target: Arc<Chart>, components: Vec<Expr>) -> Result<Self> {
        if components.len() != target.dim() {
            return Err(Error::Invalid(format!(
                "chart map needs {} components, got {}",
                target.dim(),
                components.len()
            )));
        }
        if let Some(bad) = components
            .iter()
            .filter_map(|c| c.max_coord())
            .find(|&i| i >= source.dim())
        {
            return Err(Error::Invalid(format!(
                "coordinate index {bad} out of range"
            )));
        }
        Ok(ChartMap {
            source,
            target,
            comps: components,
        })
    }

    pub fn identity(chart: Arc<Chart>) -> Self {
        let comps = (0..chart.dim()).map(Expr::coord).collect();
        ChartMap {
            source: chart.clone(),
            target: chart,
            comps,
        }
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    /// `f ∘ μ` for an expression on the target chart.
    pub fn pull_function(&self, f: &Expr) -> Expr {
        f.compose(&self.comps)
    }

    pub fn compose(&self, inner: &ChartMap) -> Result<ChartMap> {
        inner.target.ensure_same(&self.source)?;
        let comps = self.comps.iter().map(|c| inner.pull_function(c)).collect();
        ChartMap::new(inner.source.clone(), self.target.clone(), comps)
    }

    /// Symbolic Jacobian `J[j][i] = ∂μ_j/∂x_i`.
    pub fn jacobian(&self) -> Result<Vec<Vec<NormalForm>>> {
        self.comps
            .iter()
            .map(|c| {
                let nf = NormalForm::from_expr(c)?;
                (0..self.source.dim()).map(|i| nf.derivative(i)).collect()
            })
            .collect()
    }

    pub fn apply(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.comps
            .iter()
            .map(|c| c.evaluate(&self.source, point))
            .collect()
    }

    /// Numeric Jacobian at a point (symbolic derivatives, then evaluation).
    pub fn jacobian_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        self.source.check_point(point)?;
        let jac = self.jacobian()?;
        let mut m = DMatrix::zeros(self.target.dim(), self.source.dim());
        for (j, row) in jac.iter().enumerate() {
            for (i, d) in row.iter().enumerate() {
                m[(j, i)] = eval_nf(d, &self.source, point)?;
            }
        }
        Ok(m)
    }
}

/// Cotangent lift: `(μ*θ)_i = Σ_j θ_j(μ(x)) ∂μ_j/∂x_i`.
pub fn pullback_form(map: &ChartMap, theta: &CovectorField) -> Result<CovectorField> {
    theta.chart.ensure_same(&map.target)?;
    let jac = map.jacobian()?;
    let pulled: Vec<NormalForm> = theta
        .comps
        .iter()
        .map(|c| NormalForm::from_expr(&map.pull_function(&c.to_expr())))
        .collect::<Result<_>>()?;
    let mut comps = vec![NormalForm::zero(); map.source.dim()];
    for (j, tj) in pulled.iter().enumerate() {
        if tj.is_zero() {
            continue;
        }
        for (i, comp) in comps.iter_mut().enumerate() {
            let d = &jac[j][i];
            if !d.is_zero() {
                *comp = comp.add(&tj.mul(d)?)?;
            }
        }
    }
    Ok(CovectorField::from_nf(map.source.clone(), comps))
}

/// `J π(x) Jᵀ` with the numeric Jacobian of `map` at `point`.
pub fn pushforward_bivector_at(
    map: &ChartMap,
    pi: &MultivectorField,
    point: &[f64],
) -> Result<DMatrix<f64>> {
    pi.chart.ensure_same(&map.source)?;
    let j = map.jacobian_at(point)?;
    let p = pi.bivector_matrix_at(point)?;
    Ok(&j * p * j.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Domain};

    fn gstar() -> Arc<Chart> {
        Arc::new(
            Chart::new("gstar", &["a", "b"])
                .unwrap()
                .with_domain("a", Domain::Positive)
                .unwrap(),
        )
    }

    fn e(chart: &Chart, s: &str) -> Expr {
        parse(s, chart).unwrap()
    }

    fn pi_gstar() -> MultivectorField {
        let c = gstar();
        MultivectorField::from_terms(c.clone(), 2, [(vec![0, 1], e(&c, "a*b"))]).unwrap()
    }

    fn vec_field(c: &Arc<Chart>, comps: &[&str]) -> MultivectorField {
        let comps: Vec<Expr> = comps.iter().map(|s| e(c, s)).collect();
        MultivectorField::vector(c.clone(), &comps).unwrap()
    }

    fn comp(f: &MultivectorField, idx: &[usize]) -> String {
        f.component(idx).unwrap().to_string_on(f.chart())
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }

    #[test]
    fn wedge_of_coordinate_vectors() {
        let c = gstar();
        let da = MultivectorField::coordinate_vector(c.clone(), 0).unwrap();
        let db = MultivectorField::coordinate_vector(c.clone(), 1).unwrap();
        let w = da.wedge(&db).unwrap();
        assert_eq!(comp(&w, &[0, 1]), "1");
        assert_eq!(comp(&w, &[1, 0]), "-1");
        assert!(da.wedge(&da).unwrap().is_zero());
    }

    #[test]
    fn wedge_of_dressing_fields() {
        // (b∂_b) ∧ (−b∂_a) = −b² ∂_b∧∂_a = b² ∂_a∧∂_b
        let c = gstar();
        let x = vec_field(&c, &["0", "b"]);
        let y = vec_field(&c, &["-b", "0"]);
        let w = x.wedge(&y).unwrap();
        assert_eq!(comp(&w, &[0, 1]), "b^2");
    }

    #[test]
    fn lie_derivatives_of_gstar_bivector() {
        let c = gstar();
        let pi = pi_gstar();
        let l1 = MultivectorField::lie_derivative(&vec_field(&c, &["0", "b"]), &pi).unwrap();
        assert!(l1.is_zero());
        let l2 = MultivectorField::lie_derivative(&vec_field(&c, &["-b", "0"]), &pi).unwrap();
        assert_eq!(comp(&l2, &[0, 1]), "-b^2");
    }

    #[test]
    fn lie_derivative_of_function() {
        let c = Arc::new(Chart::new("qp", &["q", "p"]).unwrap());
        let x = vec_field(&c, &["1", "0"]);
        let f = MultivectorField::scalar(c.clone(), &e(&c, "q")).unwrap();
        let l = MultivectorField::lie_derivative(&x, &f).unwrap();
        assert_eq!(l.degree(), 0);
        assert_eq!(l.scalar_value().to_string_on(&c), "1");
    }

    #[test]
    fn contraction_is_sharp() {
        let c = gstar();
        let pi = pi_gstar();
        let da = CovectorField::new(c.clone(), &[Expr::one(), Expr::zero()]).unwrap();
        let db = CovectorField::new(c.clone(), &[Expr::zero(), Expr::one()]).unwrap();
        assert_eq!(comp(&pi.contract(&da).unwrap(), &[1]), "a*b");
        assert_eq!(comp(&pi.contract(&db).unwrap(), &[0]), "-a*b");
        // oracle: π(da, dx_j) read off componentwise
        for j in 0..2 {
            let expected = pi.component(&[0, j]).unwrap();
            let got = pi.contract(&da).unwrap().component(&[j]).unwrap();
            assert_eq!(
                NormalForm::from_expr(&expected).unwrap(),
                NormalForm::from_expr(&got).unwrap()
            );
        }
        let x = vec_field(&c, &["a", "b^2"]);
        let s = x.contract(&db).unwrap();
        assert_eq!(s.scalar_value().to_string_on(&c), "b^2");
    }

    #[test]
    fn schouten_degree_exceeds_dimension() {
        let pi = pi_gstar();
        let s = pi.schouten(&pi).unwrap();
        assert_eq!(s.degree(), 3);
        assert!(s.is_zero());
    }

    #[test]
    fn schouten_of_constant_bivector() {
        let c = Arc::new(Chart::new("qpy", &["q", "p", "y"]).unwrap());
        let pi = MultivectorField::from_terms(c.clone(), 2, [(vec![0, 1], Expr::one())]).unwrap();
        assert!(pi.schouten(&pi).unwrap().is_zero());
    }

    #[test]
    fn schouten_of_so3_bivector_vanishes() {
        let c = Arc::new(Chart::new("xyz", &["x", "y", "z"]).unwrap());
        let pi = MultivectorField::from_terms(
            c.clone(),
            2,
            [
                (vec![0, 1], e(&c, "z")),
                (vec![1, 2], e(&c, "x")),
                (vec![2, 0], e(&c, "y")),
            ],
        )
        .unwrap();
        assert!(pi.schouten(&pi).unwrap().is_zero());
    }

    #[test]
    fn schouten_of_vector_fields_is_lie_bracket() {
        let c = gstar();
        let x = vec_field(&c, &["0", "b"]);
        let y = vec_field(&c, &["-b", "0"]);
        let br = x.schouten(&y).unwrap();
        assert_eq!(comp(&br, &[0]), "-b");
        assert_eq!(comp(&br, &[1]), "0");
    }

    #[test]
    fn chart_mismatch() {
        let other = Arc::new(Chart::new("xy", &["x", "y"]).unwrap());
        let x = vec_field(&other, &["1", "0"]);
        assert!(matches!(
            pi_gstar().wedge(&x),
            Err(Error::ChartMismatch(..))
        ));
    }

    #[test]
    fn pullback_examples() {
        let c = gstar();
        let id = ChartMap::identity(c.clone());
        let theta = CovectorField::new(c.clone(), &[e(&c, "1/a"), Expr::zero()]).unwrap();
        assert_eq!(pullback_form(&id, &theta).unwrap(), theta);

        let qp = Arc::new(Chart::new("qp", &["q", "p"]).unwrap());
        let y = Arc::new(Chart::new("y", &["y"]).unwrap());
        let mu = ChartMap::new(qp.clone(), y.clone(), vec![Expr::coord(1)]).unwrap();
        let dy = CovectorField::new(y, &[Expr::one()]).unwrap();
        let pulled = pullback_form(&mu, &dy).unwrap();
        assert_eq!(
            pulled,
            CovectorField::new(qp, &[Expr::zero(), Expr::one()]).unwrap()
        );
    }

    #[test]
    fn pushforward_examples() {
        let c = gstar();
        let pi = pi_gstar();
        let id = ChartMap::identity(c.clone());
        let m = pushforward_bivector_at(&id, &pi, &[2.0, 3.0]).unwrap();
        assert_eq!(m, pi.bivector_matrix_at(&[2.0, 3.0]).unwrap());

        let constant =
            ChartMap::new(c.clone(), c.clone(), vec![Expr::one(), Expr::zero()]).unwrap();
        let m = pushforward_bivector_at(&constant, &pi, &[2.0, 3.0]).unwrap();
        assert!(m.iter().all(|x| *x == 0.0));

        // μ(p,q) = (e^p, e^q): J = diag(e^p, e^q), so J ∂_p∧∂_q Jᵀ = ab ∂_a∧∂_b
        let pq = Arc::new(Chart::new("pq", &["p", "q"]).unwrap());
        let canon =
            MultivectorField::from_terms(pq.clone(), 2, [(vec![0, 1], Expr::one())]).unwrap();
        let mu = ChartMap::new(
            pq.clone(),
            c.clone(),
            vec![e(&pq, "exp(p)"), e(&pq, "exp(q)")],
        )
        .unwrap();
        let m = pushforward_bivector_at(&mu, &canon, &[0.0, 0.0]).unwrap();
        let expected = pi.bivector_matrix_at(&[1.0, 1.0]).unwrap();
        assert!((m - expected).abs().max() < 1e-15);
    }
}
