//! Infinitesimal Poisson actions and momentum maps into a Poisson Lie group `G*`.

use std::sync::Arc;

use serde::Serialize;

use crate::bialgebra::LieBialgebra;
use crate::error::{Error, Result};
use crate::expr::{Chart, Expr, NormalForm, ZeroTest, ZeroVerdict};
use crate::group::{GroupChart, RatMatrix, Side};
use crate::multivector::{
    pullback_form, pushforward_bivector_at, ChartMap, CovectorField, MultivectorField,
};
use crate::poisson::PoissonChart;
use crate::rational::Rational;

/// A Lie algebra action `ξ ↦ ξ_M`, one vector field per basis element.
#[derive(Clone, Debug)]
pub struct ActionSpec {
    bialgebra: LieBialgebra,
    generators: Vec<MultivectorField>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionVariant {
    Homomorphism,
    AntiHomomorphism,
    Both,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCheck {
    pub pair: [usize; 2],
    /// `[ξ_M, η_M] − ([ξ, η])_M`.
    pub homomorphism: ZeroVerdict,
    /// `[ξ_M, η_M] + ([ξ, η])_M`.
    pub anti_homomorphism: ZeroVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomomorphismCheck {
    pub variant: ActionVariant,
    pub pairs: Vec<PairCheck>,
}

impl ActionSpec {
    pub fn new(bialgebra: LieBialgebra, generators: Vec<MultivectorField>) -> Result<Self> {
        if generators.len() != bialgebra.dim() {
            return Err(Error::Invalid(format!(
                "{} generators for a {}-dimensional algebra",
                generators.len(),
                bialgebra.dim()
            )));
        }
        if let Some(first) = generators.first() {
            for x in &generators {
                if x.degree() != 1 {
                    return Err(Error::Invalid(
                        "action generators must be vector fields".into(),
                    ));
                }
                x.chart().ensure_same(first.chart())?;
            }
        }
        Ok(ActionSpec {
            bialgebra,
            generators,
        })
    }

    pub fn bialgebra(&self) -> &LieBialgebra {
        &self.bialgebra
    }

    pub fn generators(&self) -> &[MultivectorField] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    fn chart(&self) -> Result<&Arc<Chart>> {
        self.generators
            .first()
            .map(|x| x.chart())
            .ok_or_else(|| Error::Invalid("action on a zero-dimensional algebra".into()))
    }

    /// `(Σ v_i e_i)_M`.
    pub fn image(&self, v: &[Rational]) -> Result<MultivectorField> {
        let mut out = MultivectorField::zero(self.chart()?.clone(), 1);
        for (x, c) in self.generators.iter().zip(v) {
            if !c.is_zero() {
                out = out.add(&x.scale_nf(&NormalForm::constant(*c))?)?;
            }
        }
        Ok(out)
    }

    /// `(δ(e_i))_M = Σ_{j<k} d^{jk}_i (e_j)_M ∧ (e_k)_M`.
    pub fn cobracket_image(&self, i: usize) -> Result<MultivectorField> {
        let n = self.dim();
        let mut out = MultivectorField::zero(self.chart()?.clone(), 2);
        for j in 0..n {
            for k in j + 1..n {
                let d = self.bialgebra.cobracket.constant(i, j, k);
                if !d.is_zero() {
                    let w = self.generators[j].wedge(&self.generators[k])?;
                    out = out.add(&w.scale_nf(&NormalForm::constant(d))?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn check_action_homomorphism(&self, test: &ZeroTest) -> Result<HomomorphismCheck> {
        let n = self.dim();
        let alg = &self.bialgebra.algebra;
        let mut pairs = Vec::new();
        let (mut hom, mut anti) = (true, true);
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.generators[i].schouten(&self.generators[j])?;
                let c: Vec<Rational> = (0..n).map(|k| alg.constant(i, j, k)).collect();
                let rhs = self.image(&c)?;
                let h = lhs.sub(&rhs)?.zero_verdict(test)?;
                let a = lhs.add(&rhs)?.zero_verdict(test)?;
                hom &= !h.is_nonzero();
                anti &= !a.is_nonzero();
                pairs.push(PairCheck {
                    pair: [i, j],
                    homomorphism: h,
                    anti_homomorphism: a,
                });
            }
        }
        let variant = match (hom, anti) {
            (true, true) => ActionVariant::Both,
            (true, false) => ActionVariant::Homomorphism,
            (false, true) => ActionVariant::AntiHomomorphism,
            (false, false) => ActionVariant::Neither,
        };
        Ok(HomomorphismCheck { variant, pairs })
    }

    /// `L_{ξ_M}π + (δ(ξ))_M` for each basis element.
    pub fn check_infinitesimal_poisson(
        &self,
        p: &PoissonChart,
        test: &ZeroTest,
    ) -> Result<Vec<ZeroVerdict>> {
        (0..self.dim())
            .map(|i| {
                self.generators[i].chart().ensure_same(p.chart())?;
                let lie = MultivectorField::lie_derivative(&self.generators[i], p.pi())?;
                lie.add(&self.cobracket_image(i)?)?.zero_verdict(test)
            })
            .collect()
    }

    /// `ξ_M(f)` zero test per basis element.
    pub fn check_invariant(&self, f: &Expr, test: &ZeroTest) -> Result<Vec<ZeroVerdict>> {
        let f = NormalForm::from_expr(f)?;
        let chart = self.chart()?;
        self.generators
            .iter()
            .map(|x| test.check_normal(&x.apply_nf(&f)?, chart))
            .collect()
    }
}

/// `μ: M → G*` with the identification of basis element `e_i` of `g` with
/// `Σ_k B[i][k] dx_k` in `(T_e G*)*`.
#[derive(Clone, Debug)]
pub struct MomentumMap {
    map: ChartMap,
    gstar: GroupChart,
    identification: RatMatrix,
}

impl MomentumMap {
    pub fn new(map: ChartMap, gstar: GroupChart) -> Result<Self> {
        let n = gstar.dim();
        let identity = (0..n)
            .map(|i| (0..n).map(|k| Rational::int((i == k) as i64)).collect())
            .collect();
        Self::with_identification(map, gstar, identity)
    }

    pub fn with_identification(
        map: ChartMap,
        gstar: GroupChart,
        identification: RatMatrix,
    ) -> Result<Self> {
        map.target().ensure_same(gstar.chart())?;
        let n = gstar.dim();
        if identification.len() != n || identification.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(
                "basis identification must be a square matrix".into(),
            ));
        }
        Ok(MomentumMap {
            map,
            gstar,
            identification,
        })
    }

    /// `μ = id` on `G*`.
    pub fn identity(gstar: GroupChart) -> Result<Self> {
        Self::new(ChartMap::identity(gstar.chart().clone()), gstar)
    }

    /// `μ = inv` on `G*`; requires the group inverse.
    pub fn inversion(gstar: GroupChart) -> Result<Self> {
        let inv = gstar
            .inverse_exprs()
            .ok_or_else(|| Error::Precondition("group law has no inverse".into()))?
            .to_vec();
        let chart = gstar.chart().clone();
        Self::new(ChartMap::new(chart.clone(), chart, inv)?, gstar)
    }

    pub fn map(&self) -> &ChartMap {
        &self.map
    }

    pub fn gstar(&self) -> &GroupChart {
        &self.gstar
    }

    /// Left-invariant forms `θ_{e_i}` under the basis identification.
    pub fn invariant_forms(&self) -> Result<Vec<CovectorField>> {
        let frame = self.gstar.invariant_frame(Side::Left)?;
        let forms = frame
            .forms
            .ok_or_else(|| Error::Precondition("symbolic coframe unavailable".into()))?;
        self.identification
            .iter()
            .map(|row| {
                let mut acc = CovectorField::zero(self.gstar.chart().clone());
                for (k, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        acc = acc.add(&forms[k].scale(&Expr::constant(*c))?)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    /// `ξ_M − π^♯(μ*θ_ξ)` for each basis element.
    pub fn check_momentum_map(
        &self,
        action: &ActionSpec,
        p: &PoissonChart,
        test: &ZeroTest,
    ) -> Result<Vec<ZeroVerdict>> {
        self.map.source().ensure_same(p.chart())?;
        if action.dim() != self.gstar.dim() {
            return Err(Error::Invalid("action and G* dimensions differ".into()));
        }
        let forms = self.invariant_forms()?;
        action
            .generators()
            .iter()
            .zip(&forms)
            .map(|(x, theta)| {
                let pulled = pullback_form(&self.map, theta)?;
                x.sub(&p.sharp(&pulled)?)?.zero_verdict(test)
            })
            .collect()
    }

    /// `μ_*π_M = π_{G*}` at random admissible points; the defect must stay
    /// within `tol · max(1, |π_{G*}(μ(x))|_∞)`.
    pub fn check_poisson_map(&self, p: &PoissonChart, test: &ZeroTest) -> Result<PoissonMapCheck> {
        self.map.source().ensure_same(p.chart())?;
        let mut rng = test.rng();
        let mut taken = 0;
        let mut max_defect: f64 = 0.0;
        for _ in 0..test.samples * 20 {
            if taken == test.samples {
                break;
            }
            let x = p.chart().sample_point(&mut rng);
            let Ok(y) = self.map.apply(&x) else { continue };
            if !self.gstar.chart().is_admissible(&y) {
                continue;
            }
            let (Ok(pushed), Ok(target)) = (
                pushforward_bivector_at(&self.map, p.pi(), &x),
                self.gstar.poisson().matrix_at(&y),
            ) else {
                continue;
            };
            let defect = (&pushed - &target).abs().max();
            if defect > test.tol * target.abs().max().max(1.0) {
                return Ok(PoissonMapCheck::Fail { point: x, defect });
            }
            max_defect = max_defect.max(defect);
            taken += 1;
        }
        if taken == 0 {
            return Err(Error::NoAdmissibleSamples(p.chart().name().to_string()));
        }
        Ok(PoissonMapCheck::Pass {
            samples: taken,
            max_defect,
        })
    }

    /// `H_i = y_i ∘ μ` for the named `G*` coordinates, with the check
    /// `{H_i, H_j}_M = {y_i, y_j}_{G*} ∘ μ`.
    pub fn pull_transversals<S: AsRef<str>>(
        &self,
        p: &PoissonChart,
        names: &[S],
        test: &ZeroTest,
    ) -> Result<TransversalData> {
        self.map.source().ensure_same(p.chart())?;
        let target = self.gstar.chart();
        let indices = names
            .iter()
            .map(|n| {
                target
                    .index_of(n.as_ref())
                    .ok_or_else(|| Error::UnknownIdentifier(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let functions: Vec<NormalForm> = indices
            .iter()
            .map(|&i| NormalForm::from_expr(&self.map.components()[i]))
            .collect::<Result<_>>()?;
        let mut bracket_check = ZeroVerdict::SymbolicZero;
        for a in 0..indices.len() {
            for b in a + 1..indices.len() {
                let lhs = p.bracket_nf(&functions[a], &functions[b])?;
                let y = self.gstar.poisson().entry(indices[a], indices[b])?;
                let rhs = NormalForm::from_expr(&self.map.pull_function(&y.to_expr()))?;
                bracket_check =
                    bracket_check.combine(test.check_normal(&lhs.sub(&rhs)?, p.chart())?);
            }
        }
        Ok(TransversalData {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            indices,
            functions,
            bracket_check,
        })
    }

    /// `c_i(ξ) = (θ_ξ)_{y_i} ∘ μ`; fails if some `θ_ξ` has a component off the transversals.
    pub fn derive_coefficients(&self, t: &TransversalData) -> Result<Vec<Vec<Expr>>> {
        self.invariant_forms()?
            .iter()
            .enumerate()
            .map(|(xi, theta)| {
                let comps = theta.normal_components();
                if let Some(k) =
                    (0..comps.len()).find(|k| !comps[*k].is_zero() && !t.indices.contains(k))
                {
                    return Err(Error::Precondition(format!(
                        "θ for basis element {xi} has a `{}` component outside the transversals",
                        self.gstar.chart().coord(k)
                    )));
                }
                Ok(t.indices
                    .iter()
                    .map(|&k| self.map.pull_function(&comps[k].to_expr()))
                    .collect())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result")]
pub enum PoissonMapCheck {
    Pass { samples: usize, max_defect: f64 },
    Fail { point: Vec<f64>, defect: f64 },
}

impl PoissonMapCheck {
    pub fn passed(&self) -> bool {
        matches!(self, PoissonMapCheck::Pass { .. })
    }
}

/// Pulled-back transversal coordinates `H_i = y_i ∘ μ`.
#[derive(Clone, Debug)]
pub struct TransversalData {
    pub names: Vec<String>,
    /// Indices of the `y_i` among the `G*` coordinates.
    pub indices: Vec<usize>,
    pub functions: Vec<NormalForm>,
    /// Zero test of `{H_i, H_j}_M − {y_i, y_j} ∘ μ` over all pairs.
    pub bracket_check: ZeroVerdict,
}

impl TransversalData {
    pub fn function_exprs(&self) -> Vec<Expr> {
        self.functions.iter().map(NormalForm::to_expr).collect()
    }
}

/// `ξ_M − Σ_i c_i(ξ) X_{H_i}` for each basis element.
pub fn verify_generator_decomposition(
    action: &ActionSpec,
    t: &TransversalData,
    coeffs: &[Vec<Expr>],
    p: &PoissonChart,
    test: &ZeroTest,
) -> Result<Vec<ZeroVerdict>> {
    if coeffs.len() != action.dim() {
        return Err(Error::Invalid(
            "one coefficient list per basis element is required".into(),
        ));
    }
    let hams = t
        .functions
        .iter()
        .map(|h| p.hamiltonian_field_nf(h))
        .collect::<Result<Vec<_>>>()?;
    action
        .generators()
        .iter()
        .zip(coeffs)
        .map(|(x, cs)| {
            if cs.len() != hams.len() {
                return Err(Error::Precondition(format!(
                    "{} coefficients for {} transversals",
                    cs.len(),
                    hams.len()
                )));
            }
            let mut combo = MultivectorField::zero(p.chart().clone(), 1);
            for (c, h) in cs.iter().zip(&hams) {
                combo = combo.add(&h.scale(c)?)?;
            }
            x.sub(&combo)?.zero_verdict(test)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{Cobracket, LieAlgebraSC};
    use crate::expr::{parse, Domain};

    fn gstar() -> GroupChart {
        let c = Arc::new(
            Chart::new("gstar", &["a", "b"])
                .unwrap()
                .with_domain("a", Domain::Positive)
                .unwrap(),
        );
        let p =
            PoissonChart::from_entries(c.clone(), "gstar", vec![(0, 1, parse("a*b", &c).unwrap())])
                .unwrap();
        GroupChart::parse(
            p,
            &["a1*a2", "a1*b2 + b1"],
            vec![Rational::ONE, Rational::ZERO],
            Some(&["1/a", "-b/a"]),
        )
        .unwrap()
    }

    fn two_dim(bracket_target: usize) -> LieBialgebra {
        let alg =
            LieAlgebraSC::new(&["xi", "eta"], &[(0, 1, bracket_target, Rational::ONE)]).unwrap();
        LieBialgebra::new(alg, Cobracket::new(2, &[(1, 0, 1, Rational::ONE)]).unwrap()).unwrap()
    }

    fn dressing_action(g: &GroupChart) -> ActionSpec {
        ActionSpec::new(two_dim(1), g.dressing_fields(Side::Left).unwrap()).unwrap()
    }

    #[test]
    fn homomorphism_of_dressing_action() {
        let g = gstar();
        let t = ZeroTest::default();
        assert_eq!(
            dressing_action(&g)
                .check_action_homomorphism(&t)
                .unwrap()
                .variant,
            ActionVariant::Homomorphism
        );
        let wrong = ActionSpec::new(two_dim(0), g.dressing_fields(Side::Left).unwrap()).unwrap();
        assert_eq!(
            wrong.check_action_homomorphism(&t).unwrap().variant,
            ActionVariant::Neither
        );
        // right dressing fields realize the anti-homomorphism
        let right = ActionSpec::new(two_dim(1), g.dressing_fields(Side::Right).unwrap()).unwrap();
        assert_eq!(
            right.check_action_homomorphism(&t).unwrap().variant,
            ActionVariant::AntiHomomorphism
        );
    }

    #[test]
    fn commuting_fields_abelian() {
        let c = Arc::new(Chart::new("qp", &["q", "p"]).unwrap());
        let gens = vec![
            MultivectorField::coordinate_vector(c.clone(), 0).unwrap(),
            MultivectorField::coordinate_vector(c, 1).unwrap(),
        ];
        let b = LieBialgebra::new(LieAlgebraSC::abelian(&["x", "y"]), Cobracket::zero(2)).unwrap();
        let a = ActionSpec::new(b, gens).unwrap();
        assert_eq!(
            a.check_action_homomorphism(&ZeroTest::default())
                .unwrap()
                .variant,
            ActionVariant::Both
        );
    }

    #[test]
    fn dressing_action_is_poisson() {
        let g = gstar();
        let v = dressing_action(&g)
            .check_infinitesimal_poisson(g.poisson(), &ZeroTest::default())
            .unwrap();
        assert!(v.iter().all(ZeroVerdict::is_symbolic_zero));
        // oracle: L_{-b∂a}π = -b²∂a∧∂b and (δη)_M = (b∂b)∧(-b∂a) = b²∂a∧∂b
        let a = dressing_action(&g);
        let img = a.cobracket_image(1).unwrap();
        assert_eq!(
            img.component(&[0, 1]).unwrap().to_string_on(g.chart()),
            "b^2"
        );
        assert!(a.cobracket_image(0).unwrap().is_zero());
    }

    #[test]
    fn zero_cobracket_requires_invariance() {
        let c = Arc::new(Chart::new("qp", &["q", "p"]).unwrap());
        let p =
            PoissonChart::from_entries(c.clone(), "canonical", vec![(0, 1, Expr::one())]).unwrap();
        let b = LieBialgebra::new(LieAlgebraSC::abelian(&["x"]), Cobracket::zero(1)).unwrap();
        let x =
            MultivectorField::vector(c.clone(), &[parse("q", &c).unwrap(), Expr::zero()]).unwrap();
        let v = ActionSpec::new(b.clone(), vec![x])
            .unwrap()
            .check_infinitesimal_poisson(&p, &ZeroTest::default())
            .unwrap();
        assert!(v[0].is_nonzero());
        let x = MultivectorField::coordinate_vector(c, 0).unwrap();
        let v = ActionSpec::new(b, vec![x])
            .unwrap()
            .check_infinitesimal_poisson(&p, &ZeroTest::default())
            .unwrap();
        assert!(v[0].is_symbolic_zero());
    }

    fn classical(mu_coord: usize) -> (ActionSpec, MomentumMap, PoissonChart) {
        let qp = Arc::new(Chart::new("qp", &["q", "p"]).unwrap());
        let p =
            PoissonChart::from_entries(qp.clone(), "canonical", vec![(0, 1, Expr::one())]).unwrap();
        let y = Arc::new(Chart::new("y", &["y"]).unwrap());
        let py = PoissonChart::from_entries(y.clone(), "trivial", vec![]).unwrap();
        let gy = GroupChart::parse(py, &["y1 + y2"], vec![Rational::ZERO], Some(&["-y"])).unwrap();
        let mu = MomentumMap::new(
            ChartMap::new(qp.clone(), y, vec![Expr::coord(mu_coord)]).unwrap(),
            gy,
        )
        .unwrap();
        let b = LieBialgebra::new(LieAlgebraSC::abelian(&["x"]), Cobracket::zero(1)).unwrap();
        let gen = MultivectorField::vector(qp, &[Expr::int(-1), Expr::zero()]).unwrap();
        (ActionSpec::new(b, vec![gen]).unwrap(), mu, p)
    }

    #[test]
    fn momentum_map_examples() {
        let t = ZeroTest::default();
        let g = gstar();
        let mu = MomentumMap::identity(g.clone()).unwrap();
        let v = mu
            .check_momentum_map(&dressing_action(&g), g.poisson(), &t)
            .unwrap();
        assert!(v.iter().all(ZeroVerdict::is_symbolic_zero));

        let (a, mu, p) = classical(1);
        assert!(mu.check_momentum_map(&a, &p, &t).unwrap()[0].is_symbolic_zero());
        let (a, mu, p) = classical(0);
        assert!(mu.check_momentum_map(&a, &p, &t).unwrap()[0].is_nonzero());
    }

    #[test]
    fn inversion_is_momentum_map_for_right_dressing() {
        let t = ZeroTest::default();
        let g = gstar();
        let right = ActionSpec::new(two_dim(1), g.dressing_fields(Side::Right).unwrap()).unwrap();
        let inv = MomentumMap::inversion(g.clone()).unwrap();
        assert!(inv
            .check_momentum_map(&right, g.poisson(), &t)
            .unwrap()
            .iter()
            .all(ZeroVerdict::is_symbolic_zero));
        let v = inv
            .check_momentum_map(&dressing_action(&g), g.poisson(), &t)
            .unwrap();
        assert!(v.iter().any(ZeroVerdict::is_nonzero));
    }

    fn case1_map(q_scale: &str) -> (MomentumMap, PoissonChart) {
        let pq = Arc::new(Chart::new("pq", &["p", "q"]).unwrap());
        let p =
            PoissonChart::from_entries(pq.clone(), "canonical", vec![(0, 1, Expr::one())]).unwrap();
        let g = gstar();
        let comps = vec![parse("exp(p)", &pq).unwrap(), parse(q_scale, &pq).unwrap()];
        let mu = MomentumMap::new(ChartMap::new(pq, g.chart().clone(), comps).unwrap(), g).unwrap();
        (mu, p)
    }

    #[test]
    fn poisson_map_examples() {
        let t = ZeroTest::default();
        let g = gstar();
        assert!(MomentumMap::identity(g.clone())
            .unwrap()
            .check_poisson_map(g.poisson(), &t)
            .unwrap()
            .passed());
        let (mu, p) = case1_map("exp(q)");
        assert!(mu.check_poisson_map(&p, &t).unwrap().passed());
        let (mu, p) = case1_map("exp(2*q)");
        match mu.check_poisson_map(&p, &t).unwrap() {
            PoissonMapCheck::Fail { point, defect } => {
                // oracle: pushed entry 2ab against ab
                let ab = (point[0] + 2.0 * point[1]).exp();
                assert!((defect - ab).abs() < 1e-9 * ab.max(1.0));
            }
            r => panic!("expected failure, got {r:?}"),
        }
    }

    #[test]
    fn transversal_examples() {
        let t = ZeroTest::default();
        let g = gstar();
        let mu = MomentumMap::identity(g.clone()).unwrap();
        let tr = mu.pull_transversals(g.poisson(), &["b"], &t).unwrap();
        assert_eq!(tr.function_exprs()[0].to_string_on(g.chart()), "b");
        assert!(tr.bracket_check.is_symbolic_zero());
        let (mu, p) = case1_map("exp(q)");
        let tr = mu.pull_transversals(&p, &["b"], &t).unwrap();
        assert_eq!(tr.function_exprs()[0].to_string_on(p.chart()), "exp(q)");
        let tr = mu.pull_transversals(&p, &["a", "b"], &t).unwrap();
        assert!(tr.bracket_check.is_symbolic_zero());
        assert!(matches!(
            mu.pull_transversals(&p, &["c"], &t),
            Err(Error::UnknownIdentifier(_))
        ));
    }

    #[test]
    fn generator_decomposition() {
        let t = ZeroTest::default();
        let g = gstar();
        let mu = MomentumMap::identity(g.clone()).unwrap();
        let a = dressing_action(&g);
        let tr = mu.pull_transversals(g.poisson(), &["a", "b"], &t).unwrap();
        let coeffs = mu.derive_coefficients(&tr).unwrap();
        assert_eq!(coeffs[0][0].to_string_on(g.chart()), "1/a");
        let v = verify_generator_decomposition(&a, &tr, &coeffs, g.poisson(), &t).unwrap();
        assert!(v.iter().all(ZeroVerdict::is_symbolic_zero));

        let mut wrong = coeffs.clone();
        wrong[0][0] = parse("2/a", g.chart()).unwrap();
        let v = verify_generator_decomposition(&a, &tr, &wrong, g.poisson(), &t).unwrap();
        assert!(v[0].is_nonzero());

        let zero_gens = vec![MultivectorField::zero(g.chart().clone(), 1); 2];
        let z = ActionSpec::new(two_dim(1), zero_gens).unwrap();
        let zeros = vec![vec![Expr::zero(); 2]; 2];
        assert!(
            verify_generator_decomposition(&z, &tr, &zeros, g.poisson(), &t)
                .unwrap()
                .iter()
                .all(ZeroVerdict::is_symbolic_zero)
        );

        let only_b = mu.pull_transversals(g.poisson(), &["b"], &t).unwrap();
        assert!(matches!(
            mu.derive_coefficients(&only_b),
            Err(Error::Precondition(_))
        ));
    }
}
