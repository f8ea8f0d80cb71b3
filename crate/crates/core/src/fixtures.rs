//! Ready-made charts, groups and actions used by tests, the CLI and the bindings.
//!
//! `G*` is `{(a, b) : a > 0}` with `(a1, b1)(a2, b2) = (a1 a2, a1 b2 + b1)`,
//! identity `(1, 0)` and `π = ab ∂_a∧∂_b`. Its bialgebra is `[ξ, η] = η`,
//! `δ(ξ) = 0`, `δ(η) = ξ∧η`, with `ξ ↔ da`, `η ↔ db` at the identity.

use std::sync::Arc;

use crate::bialgebra::{Cobracket, LieAlgebraSC, LieBialgebra};
use crate::error::Result;
use crate::expr::{parse, Chart, Domain, Expr};
use crate::group::{GroupChart, Side};
use crate::momentum::{ActionSpec, MomentumMap};
use crate::multivector::{ChartMap, MultivectorField};
use crate::poisson::PoissonChart;
use crate::rational::Rational;
use crate::reduction::CoordinateIdeal;

fn chart(name: &str, coords: &[&str], positive: &[&str]) -> Arc<Chart> {
    let mut c = Chart::new(name, coords).expect("fixture chart");
    for p in positive {
        c = c.with_domain(p, Domain::Positive).expect("fixture domain");
    }
    Arc::new(c)
}

fn expr(c: &Chart, text: &str) -> Expr {
    parse(text, c).expect("fixture expression")
}

pub fn gstar_chart() -> Arc<Chart> {
    chart("gstar", &["a", "b"], &["a"])
}

pub fn gstar_poisson() -> PoissonChart {
    let c = gstar_chart();
    let ab = expr(&c, "a*b");
    PoissonChart::from_entries(c, "gstar", vec![(0, 1, ab)]).expect("fixture bivector")
}

pub fn gstar_group() -> GroupChart {
    GroupChart::parse(
        gstar_poisson(),
        &["a1*a2", "a1*b2 + b1"],
        vec![Rational::ONE, Rational::ZERO],
        Some(&["1/a", "-b/a"]),
    )
    .expect("fixture group law")
}

/// `[ξ, η] = η`, `δ(ξ) = 0`, `δ(η) = ξ∧η`.
pub fn gstar_bialgebra() -> LieBialgebra {
    let alg =
        LieAlgebraSC::new(&["xi", "eta"], &[(0, 1, 1, Rational::ONE)]).expect("fixture bracket");
    let cob = Cobracket::new(2, &[(1, 0, 1, Rational::ONE)]).expect("fixture cobracket");
    LieBialgebra::new(alg, cob).expect("fixture bialgebra")
}

/// Dressing fields of `G*` as an action of the fixture bialgebra.
pub fn dressing_action(side: Side) -> Result<ActionSpec> {
    ActionSpec::new(gstar_bialgebra(), gstar_group().dressing_fields(side)?)
}

/// `Φ(ξ) = a{b, ·}`, `Φ(η) = a{a⁻¹, ·}` for functions `a`, `b` on `p`'s chart.
pub fn scaled_hamiltonian_generators(
    p: &PoissonChart,
    a: &Expr,
    b: &Expr,
) -> Result<Vec<MultivectorField>> {
    let xi = p.hamiltonian_field(b)?.scale(a)?;
    let eta = p.hamiltonian_field(&a.powi(-1))?.scale(a)?;
    Ok(vec![xi, eta])
}

/// `{x, y} = z`, `{y, z} = x`, `{z, x} = y`.
pub fn so3() -> PoissonChart {
    so3_with("z")
}

/// `so3` with `{x, y}` replaced by `xy_term`.
pub fn so3_with(xy_term: &str) -> PoissonChart {
    let c = chart("so3", &["x", "y", "z"], &[]);
    let entries = vec![
        (0, 1, expr(&c, xy_term)),
        (1, 2, expr(&c, "x")),
        (2, 0, expr(&c, "y")),
    ];
    PoissonChart::from_entries(c, "so3", entries).expect("fixture bivector")
}

/// `∂_q∧∂_p` on `(q, p, y)`.
pub fn canonical_qpy() -> PoissonChart {
    let c = chart("qpy", &["q", "p", "y"], &[]);
    PoissonChart::from_entries(c, "canonical", vec![(0, 1, Expr::one())]).expect("fixture bivector")
}

/// Classical momentum map: `(q, p)` with `∂_q∧∂_p`, abelian one-dimensional
/// bialgebra, trivial group `(y)` under addition, generator `−∂_q`, `μ = x_k`.
pub struct Classical {
    pub poisson: PoissonChart,
    pub action: ActionSpec,
    pub momentum: MomentumMap,
}

pub fn classical(mu: &str) -> Result<Classical> {
    let qp = chart("qp", &["q", "p"], &[]);
    let poisson = PoissonChart::from_entries(qp.clone(), "canonical", vec![(0, 1, Expr::one())])?;
    let y = chart("y", &["y"], &[]);
    let trivial = PoissonChart::from_entries(y.clone(), "trivial", vec![])?;
    let group = GroupChart::parse(trivial, &["y1 + y2"], vec![Rational::ZERO], Some(&["-y"]))?;
    let map = ChartMap::new(qp.clone(), y, vec![parse(mu, &qp)?])?;
    let bialg = LieBialgebra::new(LieAlgebraSC::abelian(&["x"]), Cobracket::zero(1))?;
    let gen = MultivectorField::vector(qp, &[Expr::int(-1), Expr::zero()])?;
    Ok(Classical {
        poisson,
        action: ActionSpec::new(bialg, vec![gen])?,
        momentum: MomentumMap::new(map, group)?,
    })
}

/// One of the three reduction scenarios over `G*`.
pub struct ReductionCase {
    pub label: &'static str,
    pub poisson: PoissonChart,
    pub action: ActionSpec,
    pub momentum: MomentumMap,
    pub ideal: CoordinateIdeal,
    pub transversals: Vec<&'static str>,
}

/// `(p, q)` with `{p, q} = 1` and `μ = (exp p, ±exp q)` onto an open orbit.
/// The open orbit is a single leaf, so the ideal is trivial and the action is
/// taken to be zero; the pulled-back dressing generators are available from
/// `open_orbit_generators`.
fn open_orbit(label: &'static str, b: &str) -> Result<ReductionCase> {
    let pq = chart("pq", &["p", "q"], &[]);
    let poisson = PoissonChart::from_entries(pq.clone(), label, vec![(0, 1, Expr::one())])?;
    let map = ChartMap::new(
        pq.clone(),
        gstar_chart(),
        vec![expr(&pq, "exp(p)"), expr(&pq, b)],
    )?;
    let zero = vec![MultivectorField::zero(pq.clone(), 1); 2];
    Ok(ReductionCase {
        label,
        poisson,
        action: ActionSpec::new(gstar_bialgebra(), zero)?,
        momentum: MomentumMap::new(map, gstar_group())?,
        ideal: CoordinateIdeal::new(pq, vec![])?,
        transversals: vec!["a", "b"],
    })
}

/// Case `b > 0`: `a = exp p`, `b = exp q`.
pub fn case1() -> Result<ReductionCase> {
    open_orbit("gstar-case1", "exp(q)")
}

/// Case `b < 0`: `a = exp p`, `b = −exp q`.
pub fn case2() -> Result<ReductionCase> {
    open_orbit("gstar-case2", "-exp(q)")
}

/// `Φ(ξ) = a{b, ·}`, `Φ(η) = a{a⁻¹, ·}` with `a`, `b` pulled back along the case's map.
pub fn open_orbit_generators(case: &ReductionCase) -> Result<Vec<MultivectorField>> {
    let comps = case.momentum.map().components();
    scaled_hamiltonian_generators(&case.poisson, &comps[0], &comps[1])
}

/// Case `b = 0`: `M = G*`, `μ = id`, ideal `⟨a − 1, b⟩`, left dressing action.
pub fn case3() -> Result<ReductionCase> {
    let g = gstar_group();
    let c = g.chart().clone();
    Ok(ReductionCase {
        label: "gstar-case3",
        poisson: g.poisson().clone(),
        action: dressing_action(Side::Left)?,
        momentum: MomentumMap::identity(g)?,
        ideal: CoordinateIdeal::new(c, vec![(0, Rational::ONE), (1, Rational::ZERO)])?,
        transversals: vec!["a", "b"],
    })
}

/// `(a, b, q, p)` with `π = ab ∂_a∧∂_b + ∂_q∧∂_p`, the left dressing fields
/// acting on `(a, b)`, and the ideal `⟨a − 1, b⟩`.
pub struct ProductCase {
    pub poisson: PoissonChart,
    pub action: ActionSpec,
    pub ideal: CoordinateIdeal,
}

pub fn product() -> Result<ProductCase> {
    let c = chart("product", &["a", "b", "q", "p"], &["a"]);
    let poisson = PoissonChart::from_entries(
        c.clone(),
        "product",
        vec![(0, 1, expr(&c, "a*b")), (2, 3, Expr::one())],
    )?;
    let gens = gstar_group()
        .dressing_fields(Side::Left)?
        .iter()
        .map(|x| {
            let comps = x.vector_components()?;
            MultivectorField::vector(
                c.clone(),
                &[
                    comps[0].clone(),
                    comps[1].clone(),
                    Expr::zero(),
                    Expr::zero(),
                ],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductCase {
        poisson,
        action: ActionSpec::new(gstar_bialgebra(), gens)?,
        ideal: CoordinateIdeal::new(c, vec![(0, Rational::ONE), (1, Rational::ZERO)])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{NormalForm, ZeroTest};
    use crate::reduction::reduced_bracket;

    #[test]
    fn fixtures_build() {
        assert_eq!(gstar_group().dim(), 2);
        assert!(classical("p").is_ok());
        for case in [case1().unwrap(), case2().unwrap(), case3().unwrap()] {
            assert!(
                case.momentum
                    .check_poisson_map(&case.poisson, &ZeroTest::default())
                    .unwrap()
                    .passed(),
                "{}",
                case.label
            );
        }
        assert_eq!(product().unwrap().action.dim(), 2);
    }

    #[test]
    fn scaled_hamiltonian_generators_on_gstar() {
        let p = gstar_poisson();
        let c = p.chart().clone();
        let gens = scaled_hamiltonian_generators(&p, &expr(&c, "a"), &expr(&c, "b")).unwrap();
        let nf = |s: &str| NormalForm::from_expr(&expr(&c, s)).unwrap();
        assert_eq!(gens[0].component_nf(&[0]).unwrap(), nf("-a^2*b"));
        assert_eq!(gens[0].component_nf(&[1]).unwrap(), nf("0"));
        assert_eq!(gens[1].component_nf(&[1]).unwrap(), nf("-b"));
    }

    #[test]
    fn case1_reduced_bracket() {
        let case = case1().unwrap();
        let e = |s: &str| parse(s, case.poisson.chart()).unwrap();
        let r =
            reduced_bracket(&e("p"), &e("q"), &case.ideal, &case.action, &case.poisson).unwrap();
        assert_eq!(r, Expr::one());
        // under the pulled-back generators p and q are not invariant
        let gens = open_orbit_generators(&case).unwrap();
        let induced = ActionSpec::new(gstar_bialgebra(), gens).unwrap();
        assert!(reduced_bracket(&e("p"), &e("q"), &case.ideal, &induced, &case.poisson).is_err());
    }
}
