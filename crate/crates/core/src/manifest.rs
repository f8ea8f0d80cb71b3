//! TOML manifests: named charts, bivectors, groups, bialgebras, actions,
//! momentum maps and ideals, followed by an ordered list of checks.
//!
//! Sections resolve in dependency order; every name must exist and every
//! expression must parse on its declared chart, or resolution fails with
//! `Error::Manifest` naming the offending section.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::bialgebra::{Cobracket, LieAlgebraSC, LieBialgebra};
use crate::error::{Error, Result};
use crate::expr::{parse, Chart, ChartSpec, DomainSpec, Expr};
use crate::group::{GroupChart, Side};
use crate::momentum::{ActionSpec, MomentumMap};
use crate::multivector::{ChartMap, MultivectorField};
use crate::poisson::PoissonChart;
use crate::rational::Rational;
use crate::reduction::CoordinateIdeal;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSection {
    pub coords: Vec<String>,
    #[serde(default)]
    pub domain: BTreeMap<String, DomainSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub indices: Vec<String>,
    pub coeff: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BivectorSection {
    pub chart: String,
    #[serde(default)]
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub bivector: String,
    pub mul: Vec<String>,
    pub identity: Vec<String>,
    pub inverse: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub pair: [String; 2],
    /// Coefficients of the bracket in the basis, keyed by basis name.
    pub value: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobracketEntry {
    pub element: String,
    pub pair: [String; 2],
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BialgebraSection {
    pub basis: Vec<String>,
    #[serde(default)]
    pub bracket: Vec<BracketEntry>,
    #[serde(default)]
    pub cobracket: Vec<CobracketEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DressingRef {
    pub group: String,
    pub side: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSection {
    pub bialgebra: String,
    /// Poisson manifold acted on; defaults to the dressing group's bivector.
    pub bivector: Option<String>,
    /// Vector field components per basis element, in chart coordinate order.
    pub generators: Option<BTreeMap<String, Vec<String>>>,
    pub dressing: Option<DressingRef>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentumSection {
    pub group: String,
    pub bivector: String,
    pub components: Vec<String>,
    pub action: Option<String>,
    pub identification: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSection {
    pub chart: String,
    #[serde(default)]
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Jacobi,
    JacobiSc,
    Cocycle,
    Dual,
    Multiplicative,
    Dressing,
    Action,
    PoissonAction,
    Invariant,
    Moment,
    PoissonMap,
    IdealInvariance,
    IdealClosure,
    Reduce,
    LeafScan,
    LeafTangent,
    Casimir,
    Completeness,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        use CheckKind::*;
        match self {
            Jacobi => "jacobi",
            JacobiSc => "jacobi-sc",
            Cocycle => "cocycle",
            Dual => "dual",
            Multiplicative => "multiplicative",
            Dressing => "dressing",
            Action => "action",
            PoissonAction => "poisson-action",
            Invariant => "invariant",
            Moment => "moment",
            PoissonMap => "poisson-map",
            IdealInvariance => "ideal-invariance",
            IdealClosure => "ideal-closure",
            Reduce => "reduce",
            LeafScan => "leaf-scan",
            LeafTangent => "leaf-tangent",
            Casimir => "casimir",
            Completeness => "completeness",
        }
    }
}

/// One requested check. Which optional fields are read depends on `kind`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: Option<String>,
    pub kind: CheckKind,
    pub bivector: Option<String>,
    pub bialgebra: Option<String>,
    pub group: Option<String>,
    pub action: Option<String>,
    pub momentum_map: Option<String>,
    pub ideal: Option<String>,
    pub side: Option<String>,
    pub function: Option<String>,
    pub f: Option<String>,
    pub g: Option<String>,
    pub hamiltonian: Option<String>,
    pub expect: Option<String>,
    pub transversals: Option<Vec<String>>,
    /// Restricts generator-wise checks to these basis elements.
    pub basis: Option<Vec<String>>,
    /// Axes of a point grid, in coordinate order.
    pub grid: Option<Vec<Vec<f64>>>,
    pub points: Option<Vec<Vec<f64>>>,
    pub base: Option<Vec<f64>>,
    pub start: Option<Vec<f64>>,
    pub t_end: Option<f64>,
    pub step: Option<f64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub starts: Option<usize>,
}

impl CheckSpec {
    pub fn new(kind: CheckKind) -> Self {
        CheckSpec {
            kind,
            ..Default::default()
        }
    }

    pub fn display_name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| self.kind.as_str().to_string())
    }
}

impl Default for CheckKind {
    fn default() -> Self {
        CheckKind::Jacobi
    }
}

/// Raw deserialized manifest.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestFile {
    #[serde(default)]
    pub chart: BTreeMap<String, ChartSection>,
    #[serde(default)]
    pub bivector: BTreeMap<String, BivectorSection>,
    #[serde(default)]
    pub group: BTreeMap<String, GroupSection>,
    #[serde(default)]
    pub bialgebra: BTreeMap<String, BialgebraSection>,
    #[serde(default)]
    pub action: BTreeMap<String, ActionSection>,
    #[serde(default)]
    pub momentum_map: BTreeMap<String, MomentumSection>,
    #[serde(default)]
    pub ideal: BTreeMap<String, IdealSection>,
    #[serde(default)]
    pub check: Vec<CheckSpec>,
}

/// Manifests shipped with the crate, selectable by name.
pub const BUILTIN: &[(&str, &str)] = &[
    ("gstar", include_str!("../fixtures/gstar.toml")),
    ("gstar-case1", include_str!("../fixtures/gstar-case1.toml")),
    ("gstar-case2", include_str!("../fixtures/gstar-case2.toml")),
    ("gstar-case3", include_str!("../fixtures/gstar-case3.toml")),
    ("product", include_str!("../fixtures/product.toml")),
    ("classical", include_str!("../fixtures/classical.toml")),
    ("so3", include_str!("../fixtures/so3.toml")),
    (
        "so3-perturbed",
        include_str!("../fixtures/so3-perturbed.toml"),
    ),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".toml").unwrap_or(name);
    BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

#[derive(Clone, Debug)]
pub struct ResolvedAction {
    pub spec: ActionSpec,
    pub poisson: PoissonChart,
}

#[derive(Clone, Debug)]
pub struct ResolvedMomentum {
    pub map: MomentumMap,
    pub poisson: PoissonChart,
    pub action: Option<String>,
}

/// A manifest with every name resolved to a built object.
#[derive(Clone, Debug, Default)]
pub struct Manifest {
    pub charts: BTreeMap<String, Arc<Chart>>,
    pub bivectors: BTreeMap<String, PoissonChart>,
    pub groups: BTreeMap<String, GroupChart>,
    pub bialgebras: BTreeMap<String, LieBialgebra>,
    pub actions: BTreeMap<String, ResolvedAction>,
    pub momentum_maps: BTreeMap<String, ResolvedMomentum>,
    pub ideals: BTreeMap<String, CoordinateIdeal>,
    pub checks: Vec<CheckSpec>,
}

fn ctx<T>(section: &str, name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Manifest(m) => Error::Manifest(m),
        other => Error::Manifest(format!("{section} `{name}`: {other}")),
    })
}

fn lookup<'a, T>(
    map: &'a BTreeMap<String, T>,
    section: &str,
    name: &str,
    owner: &str,
) -> Result<&'a T> {
    map.get(name)
        .ok_or_else(|| Error::Manifest(format!("{owner}: unknown {section} `{name}`")))
}

fn index_in(basis: &[String], name: &str) -> Result<usize> {
    basis
        .iter()
        .position(|b| b == name)
        .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
}

fn parse_exprs(texts: &[String], chart: &Chart) -> Result<Vec<Expr>> {
    texts.iter().map(|t| parse(t, chart)).collect()
}

fn build_bivector(sec: &BivectorSection, chart: Arc<Chart>, name: &str) -> Result<PoissonChart> {
    let mut pi = MultivectorField::zero(chart.clone(), 2);
    for term in &sec.terms {
        if term.indices.len() != 2 {
            return Err(Error::Invalid(
                "bivector terms need exactly two indices".into(),
            ));
        }
        let idx = term
            .indices
            .iter()
            .map(|c| {
                chart
                    .index_of(c)
                    .ok_or_else(|| Error::UnknownIdentifier(c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let coeff = parse(&term.coeff, &chart)?;
        pi = pi.add(&MultivectorField::from_terms(
            chart.clone(),
            2,
            vec![(idx, coeff)],
        )?)?;
    }
    PoissonChart::new(pi, name)
}

fn build_bialgebra(sec: &BialgebraSection) -> Result<LieBialgebra> {
    let mut brackets = Vec::new();
    for e in &sec.bracket {
        let (i, j) = (
            index_in(&sec.basis, &e.pair[0])?,
            index_in(&sec.basis, &e.pair[1])?,
        );
        for (target, v) in &e.value {
            brackets.push((i, j, index_in(&sec.basis, target)?, Rational::parse(v)?));
        }
    }
    let mut cobrackets = Vec::new();
    for e in &sec.cobracket {
        cobrackets.push((
            index_in(&sec.basis, &e.element)?,
            index_in(&sec.basis, &e.pair[0])?,
            index_in(&sec.basis, &e.pair[1])?,
            Rational::parse(&e.value)?,
        ));
    }
    let alg = LieAlgebraSC::new(&sec.basis, &brackets)?;
    let cob = Cobracket::new(sec.basis.len(), &cobrackets)?;
    LieBialgebra::new(alg, cob)
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest> {
        let file: ManifestFile =
            toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        Manifest::resolve(file)
    }

    pub fn resolve(file: ManifestFile) -> Result<Manifest> {
        let mut m = Manifest::default();

        for (name, sec) in &file.chart {
            let spec = ChartSpec {
                name: name.clone(),
                coords: sec.coords.clone(),
                domain: sec.domain.clone(),
            };
            m.charts
                .insert(name.clone(), Arc::new(ctx("chart", name, spec.build())?));
        }

        for (name, sec) in &file.bivector {
            let owner = format!("bivector `{name}`");
            let chart = lookup(&m.charts, "chart", &sec.chart, &owner)?.clone();
            let p = ctx("bivector", name, build_bivector(sec, chart, name))?;
            m.bivectors.insert(name.clone(), p);
        }

        for (name, sec) in &file.group {
            let owner = format!("group `{name}`");
            let p = lookup(&m.bivectors, "bivector", &sec.bivector, &owner)?.clone();
            let g = ctx(
                "group",
                name,
                (|| {
                    let identity = sec
                        .identity
                        .iter()
                        .map(|s| Rational::parse(s))
                        .collect::<Result<Vec<_>>>()?;
                    GroupChart::parse(p, &sec.mul, identity, sec.inverse.as_deref())
                })(),
            )?;
            m.groups.insert(name.clone(), g);
        }

        for (name, sec) in &file.bialgebra {
            m.bialgebras
                .insert(name.clone(), ctx("bialgebra", name, build_bialgebra(sec))?);
        }

        for (name, sec) in &file.action {
            let owner = format!("action `{name}`");
            let bialg = lookup(&m.bialgebras, "bialgebra", &sec.bialgebra, &owner)?.clone();
            let (poisson, gens) = match (&sec.generators, &sec.dressing) {
                (Some(_), Some(_)) | (None, None) => {
                    return Err(Error::Manifest(format!(
                        "{owner}: give exactly one of `generators` or `dressing`"
                    )));
                }
                (None, Some(d)) => {
                    let g = lookup(&m.groups, "group", &d.group, &owner)?;
                    let side: Side = ctx("action", name, d.side.parse())?;
                    let p = match &sec.bivector {
                        Some(b) => lookup(&m.bivectors, "bivector", b, &owner)?.clone(),
                        None => g.poisson().clone(),
                    };
                    let fields = ctx("action", name, g.dressing_fields(side))?;
                    (p, fields)
                }
                (Some(table), None) => {
                    let b = sec.bivector.as_ref().ok_or_else(|| {
                        Error::Manifest(format!(
                            "{owner}: `bivector` is required with `generators`"
                        ))
                    })?;
                    let p = lookup(&m.bivectors, "bivector", b, &owner)?.clone();
                    let fields = ctx(
                        "action",
                        name,
                        (|| {
                            for key in table.keys() {
                                index_in(bialg.algebra.basis(), key)?;
                            }
                            bialg
                                .algebra
                                .basis()
                                .iter()
                                .map(|basis| {
                                    let comps = table.get(basis).ok_or_else(|| {
                                        Error::Invalid(format!("missing generator for `{basis}`"))
                                    })?;
                                    MultivectorField::vector(
                                        p.chart().clone(),
                                        &parse_exprs(comps, p.chart())?,
                                    )
                                })
                                .collect::<Result<Vec<_>>>()
                        })(),
                    )?;
                    (p, fields)
                }
            };
            let spec = ctx("action", name, ActionSpec::new(bialg, gens))?;
            if spec
                .generators()
                .iter()
                .any(|x| !x.chart().same_coordinates(poisson.chart()))
            {
                return Err(Error::Manifest(format!(
                    "{owner}: generators and bivector live on different charts"
                )));
            }
            m.actions
                .insert(name.clone(), ResolvedAction { spec, poisson });
        }

        for (name, sec) in &file.momentum_map {
            let owner = format!("momentum_map `{name}`");
            let g = lookup(&m.groups, "group", &sec.group, &owner)?.clone();
            let p = lookup(&m.bivectors, "bivector", &sec.bivector, &owner)?.clone();
            if let Some(a) = &sec.action {
                lookup(&m.actions, "action", a, &owner)?;
            }
            let map = ctx(
                "momentum_map",
                name,
                (|| {
                    let comps = parse_exprs(&sec.components, p.chart())?;
                    let cm = ChartMap::new(p.chart().clone(), g.chart().clone(), comps)?;
                    match &sec.identification {
                        None => MomentumMap::new(cm, g),
                        Some(rows) => {
                            let mat = rows
                                .iter()
                                .map(|r| {
                                    r.iter()
                                        .map(|s| Rational::parse(s))
                                        .collect::<Result<Vec<_>>>()
                                })
                                .collect::<Result<Vec<_>>>()?;
                            MomentumMap::with_identification(cm, g, mat)
                        }
                    }
                })(),
            )?;
            m.momentum_maps.insert(
                name.clone(),
                ResolvedMomentum {
                    map,
                    poisson: p,
                    action: sec.action.clone(),
                },
            );
        }

        for (name, sec) in &file.ideal {
            let owner = format!("ideal `{name}`");
            let chart = lookup(&m.charts, "chart", &sec.chart, &owner)?.clone();
            let ideal = ctx(
                "ideal",
                name,
                (|| {
                    let gens = parse_exprs(&sec.generators, &chart)?;
                    CoordinateIdeal::from_exprs(chart.clone(), &gens)
                })(),
            )?;
            m.ideals.insert(name.clone(), ideal);
        }

        for (i, c) in file.check.iter().enumerate() {
            m.validate_check(i, c)?;
        }
        m.checks = file.check;
        Ok(m)
    }

    /// Resolves references and parses expressions of a check without running it.
    fn validate_check(&self, i: usize, c: &CheckSpec) -> Result<()> {
        let owner = format!("check #{} `{}`", i + 1, c.display_name());
        let refs: [(&Option<String>, &str, bool); 6] = [
            (
                &c.bivector,
                "bivector",
                c.bivector
                    .as_ref()
                    .is_some_and(|n| !self.bivectors.contains_key(n)),
            ),
            (
                &c.bialgebra,
                "bialgebra",
                c.bialgebra
                    .as_ref()
                    .is_some_and(|n| !self.bialgebras.contains_key(n)),
            ),
            (
                &c.group,
                "group",
                c.group
                    .as_ref()
                    .is_some_and(|n| !self.groups.contains_key(n)),
            ),
            (
                &c.action,
                "action",
                c.action
                    .as_ref()
                    .is_some_and(|n| !self.actions.contains_key(n)),
            ),
            (
                &c.momentum_map,
                "momentum_map",
                c.momentum_map
                    .as_ref()
                    .is_some_and(|n| !self.momentum_maps.contains_key(n)),
            ),
            (
                &c.ideal,
                "ideal",
                c.ideal
                    .as_ref()
                    .is_some_and(|n| !self.ideals.contains_key(n)),
            ),
        ];
        for (name, section, missing) in refs {
            if missing {
                return Err(Error::Manifest(format!(
                    "{owner}: unknown {section} `{}`",
                    name.as_deref().unwrap_or("")
                )));
            }
        }
        if let Some(chart) = self.check_chart(c) {
            for text in [&c.function, &c.f, &c.g, &c.hamiltonian]
                .into_iter()
                .flatten()
            {
                parse(text, &chart).map_err(|e| Error::Manifest(format!("{owner}: {e}")))?;
            }
            if let Some(expect) = &c.expect {
                if c.kind == CheckKind::Reduce {
                    parse(expect, &chart).map_err(|e| Error::Manifest(format!("{owner}: {e}")))?;
                }
            }
        }
        Ok(())
    }

    /// Chart on which a check's scalar expressions are read.
    pub fn check_chart(&self, c: &CheckSpec) -> Option<Arc<Chart>> {
        if let Some(a) = c.action.as_ref().and_then(|n| self.actions.get(n)) {
            return Some(a.poisson.chart().clone());
        }
        if let Some(p) = c.bivector.as_ref().and_then(|n| self.bivectors.get(n)) {
            return Some(p.chart().clone());
        }
        if let Some(mm) = c
            .momentum_map
            .as_ref()
            .and_then(|n| self.momentum_maps.get(n))
        {
            return Some(mm.poisson.chart().clone());
        }
        if let Some(i) = c.ideal.as_ref().and_then(|n| self.ideals.get(n)) {
            return Some(i.chart().clone());
        }
        c.group
            .as_ref()
            .and_then(|n| self.groups.get(n))
            .map(|g| g.chart().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GSTAR: &str = r#"
[chart.gstar]
coords = ["a", "b"]
domain = { a = "positive" }

[bivector.pi]
chart = "gstar"
terms = [{ indices = ["a", "b"], coeff = "a*b" }]

[group.gstar]
bivector = "pi"
mul = ["a1*a2", "a1*b2 + b1"]
identity = ["1", "0"]
inverse = ["1/a", "-b/a"]

[bialgebra.g]
basis = ["xi", "eta"]
bracket = [{ pair = ["xi", "eta"], value = { eta = "1" } }]
cobracket = [{ element = "eta", pair = ["xi", "eta"], value = "1" }]

[action.left]
bialgebra = "g"
dressing = { group = "gstar", side = "left" }

[momentum_map.id]
group = "gstar"
bivector = "pi"
components = ["a", "b"]
action = "left"

[ideal.n]
chart = "gstar"
generators = ["a - 1", "b"]

[[check]]
kind = "jacobi"
bivector = "pi"
"#;

    #[test]
    fn resolves_all_sections() {
        let m = Manifest::parse(GSTAR).unwrap();
        assert_eq!(m.groups["gstar"].dim(), 2);
        assert_eq!(m.bialgebras["g"], crate::fixtures::gstar_bialgebra());
        assert_eq!(
            m.actions["left"].spec.generators(),
            crate::fixtures::dressing_action(Side::Left)
                .unwrap()
                .generators()
        );
        assert_eq!(
            m.ideals["n"].generators(),
            &[(0, Rational::ONE), (1, Rational::ZERO)]
        );
        assert_eq!(m.checks.len(), 1);
    }

    #[test]
    fn unknown_coordinate_names_symbol() {
        let bad = GSTAR.replace("coeff = \"a*b\"", "coeff = \"a*c\"");
        let err = Manifest::parse(&bad).unwrap_err().to_string();
        assert!(err.contains("`c`"), "{err}");
        assert!(err.contains("bivector `pi`"), "{err}");
    }

    #[test]
    fn unknown_reference_is_reported() {
        let bad = GSTAR.replace("bivector = \"pi\"\n\"#", "bivector = \"rho\"\n\"#");
        let bad = bad.replace(
            "kind = \"jacobi\"\nbivector = \"pi\"",
            "kind = \"jacobi\"\nbivector = \"rho\"",
        );
        let err = Manifest::parse(&bad).unwrap_err().to_string();
        assert!(err.contains("unknown bivector `rho`"), "{err}");
    }

    #[test]
    fn builtins_resolve() {
        for (name, text) in BUILTIN {
            let m = Manifest::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!m.checks.is_empty(), "{name}");
        }
        assert!(builtin("gstar.toml").is_some());
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn malformed_toml_and_unknown_fields() {
        assert!(matches!(
            Manifest::parse("[chart.x"),
            Err(Error::Manifest(_))
        ));
        assert!(matches!(
            Manifest::parse("[chart.x]\ncoords=[\"x\"]\ncolour=1"),
            Err(Error::Manifest(_))
        ));
        assert!(matches!(
            Manifest::parse("[[check]]\nkind=\"nonsense\""),
            Err(Error::Manifest(_))
        ));
    }
}
