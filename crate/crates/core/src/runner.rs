//! Executes manifest checks in declaration order and collects a `Report`.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::{
    parse, Expr, NormalForm, ZeroTest, ZeroVerdict, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL,
};
use crate::group::{completeness_scan, grid, orbit_rank_scan, Side};
use crate::manifest::{CheckKind, CheckSpec, Manifest, ResolvedAction, ResolvedMomentum};
use crate::multivector::MultivectorField;
use crate::poisson::{flow, PoissonChart};
use crate::reduction::{all_members, reduced_bracket, LeafSpec};
use crate::report::{CheckRecord, Report, Verdict};

pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub step: f64,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            step: DEFAULT_STEP,
            timing: false,
        }
    }
}

pub fn run(m: &Manifest, checks: &[CheckSpec], opts: &RunOptions) -> Report {
    let mut report = Report::new(opts.seed);
    report.checks = checks.iter().map(|c| run_one(m, c, opts)).collect();
    report
}

/// Declared checks of the given kinds; if none are declared, the default
/// checks for those kinds over every applicable manifest object.
pub fn select(m: &Manifest, kinds: &[CheckKind]) -> Vec<CheckSpec> {
    let declared: Vec<CheckSpec> = m
        .checks
        .iter()
        .filter(|c| kinds.contains(&c.kind))
        .cloned()
        .collect();
    if declared.is_empty() {
        default_checks(m, kinds)
    } else {
        declared
    }
}

pub fn default_checks(m: &Manifest, kinds: &[CheckKind]) -> Vec<CheckSpec> {
    let mut out = Vec::new();
    let named = |kind: CheckKind, object: &str| CheckSpec {
        name: Some(format!("{}:{object}", kind.as_str())),
        ..CheckSpec::new(kind)
    };
    for &kind in kinds {
        match kind {
            CheckKind::Jacobi => out.extend(m.bivectors.keys().map(|b| CheckSpec {
                bivector: Some(b.clone()),
                ..named(kind, b)
            })),
            CheckKind::JacobiSc | CheckKind::Cocycle | CheckKind::Dual => {
                out.extend(m.bialgebras.keys().map(|b| CheckSpec {
                    bialgebra: Some(b.clone()),
                    ..named(kind, b)
                }))
            }
            CheckKind::Multiplicative => out.extend(m.groups.keys().map(|g| CheckSpec {
                group: Some(g.clone()),
                ..named(kind, g)
            })),
            CheckKind::Dressing => {
                for g in m.groups.keys() {
                    for side in ["left", "right"] {
                        out.push(CheckSpec {
                            group: Some(g.clone()),
                            side: Some(side.into()),
                            ..named(kind, &format!("{g}:{side}"))
                        });
                    }
                }
            }
            CheckKind::Action | CheckKind::PoissonAction => {
                out.extend(m.actions.keys().map(|a| CheckSpec {
                    action: Some(a.clone()),
                    ..named(kind, a)
                }))
            }
            CheckKind::Moment => out.extend(
                m.momentum_maps
                    .iter()
                    .filter(|(_, mm)| mm.action.is_some())
                    .map(|(n, _)| CheckSpec {
                        momentum_map: Some(n.clone()),
                        ..named(kind, n)
                    }),
            ),
            CheckKind::PoissonMap => out.extend(m.momentum_maps.keys().map(|n| CheckSpec {
                momentum_map: Some(n.clone()),
                ..named(kind, n)
            })),
            _ => {}
        }
    }
    out
}

pub fn run_one(m: &Manifest, c: &CheckSpec, opts: &RunOptions) -> CheckRecord {
    let start = Instant::now();
    let (verdict, witness) = match execute(m, c, opts) {
        Ok(r) => r,
        Err(Error::Precondition(msg)) | Err(Error::NotVanishingAtIdentity(msg)) => {
            (Verdict::Fail, json!({ "precondition": msg }))
        }
        Err(e) => (Verdict::Error, json!({ "error": e.to_string() })),
    };
    CheckRecord {
        name: c.display_name(),
        verdict,
        witness,
        millis: if opts.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        },
    }
}

fn need<'a>(field: &'a Option<String>, what: &str) -> Result<&'a str> {
    field
        .as_deref()
        .ok_or_else(|| Error::Invalid(format!("check requires `{what}`")))
}

fn fold(vs: &[ZeroVerdict]) -> ZeroVerdict {
    vs.iter()
        .cloned()
        .fold(ZeroVerdict::SymbolicZero, ZeroVerdict::combine)
}

fn zero_verdict(vs: &[ZeroVerdict]) -> Verdict {
    Verdict::from_zero(&fold(vs))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn per_basis(basis: &[String], vs: &[ZeroVerdict]) -> Value {
    Value::Object(basis.iter().cloned().zip(vs.iter().map(to_value)).collect())
}

struct Ctx<'a> {
    m: &'a Manifest,
    c: &'a CheckSpec,
    test: ZeroTest,
    opts: &'a RunOptions,
}

impl Ctx<'_> {
    fn bivector(&self) -> Result<&PoissonChart> {
        Ok(&self.m.bivectors[need(&self.c.bivector, "bivector")?])
    }

    fn action(&self) -> Result<&ResolvedAction> {
        Ok(&self.m.actions[need(&self.c.action, "action")?])
    }

    fn momentum(&self) -> Result<&ResolvedMomentum> {
        Ok(&self.m.momentum_maps[need(&self.c.momentum_map, "momentum_map")?])
    }

    fn expr(&self, field: &Option<String>, what: &str, p: &PoissonChart) -> Result<Expr> {
        parse(need(field, what)?, p.chart())
    }

    fn tol(&self) -> f64 {
        self.c.tol.unwrap_or(self.opts.tol)
    }

    fn samples(&self) -> usize {
        self.c.samples.unwrap_or(self.opts.samples)
    }

    fn points(&self, chart: &crate::expr::Chart) -> Vec<Vec<f64>> {
        if let Some(axes) = &self.c.grid {
            return grid(axes);
        }
        if let Some(points) = &self.c.points {
            return points.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        (0..self.samples())
            .map(|_| chart.sample_point(&mut rng))
            .collect()
    }
}

fn execute(m: &Manifest, c: &CheckSpec, opts: &RunOptions) -> Result<(Verdict, Value)> {
    let cx = Ctx {
        m,
        c,
        test: ZeroTest {
            samples: c.samples.unwrap_or(opts.samples),
            tol: c.tol.unwrap_or(opts.tol),
            seed: opts.seed,
        },
        opts,
    };
    match c.kind {
        CheckKind::Jacobi => jacobi(&cx),
        CheckKind::JacobiSc => {
            let b = &m.bialgebras[need(&c.bialgebra, "bialgebra")?];
            let alg = b.algebra.check_jacobi_sc()?;
            let dual = b.dual_algebra().check_jacobi_sc()?;
            Ok((
                Verdict::from_bool(alg.passed() && dual.passed()),
                json!({ "algebra": to_value(&alg), "dual": to_value(&dual) }),
            ))
        }
        CheckKind::Cocycle => {
            let b = &m.bialgebras[need(&c.bialgebra, "bialgebra")?];
            let r = b.check_cocycle()?;
            Ok((Verdict::from_bool(r.passed()), to_value(&r)))
        }
        CheckKind::Dual => dual(&cx),
        CheckKind::Multiplicative => {
            let g = &m.groups[need(&c.group, "group")?];
            let r = g.check_multiplicative(cx.samples(), cx.tol(), opts.seed)?;
            let at_e = g.bivector_at_identity()?;
            let vanishes = at_e.iter().flatten().all(|x| x.is_zero());
            let at_e: Vec<Vec<String>> = at_e
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect();
            Ok((
                Verdict::from_bool(r.passed() && vanishes),
                json!({ "multiplicative": to_value(&r), "pi_at_identity": at_e }),
            ))
        }
        CheckKind::Dressing => dressing(&cx),
        CheckKind::Action => action(&cx),
        CheckKind::PoissonAction => {
            let a = cx.action()?;
            let vs = a.spec.check_infinitesimal_poisson(&a.poisson, &cx.test)?;
            Ok((
                zero_verdict(&vs),
                per_basis(a.spec.bialgebra().algebra.basis(), &vs),
            ))
        }
        CheckKind::Invariant => {
            let a = cx.action()?;
            let f = cx.expr(&c.function, "function", &a.poisson)?;
            let vs = a.spec.check_invariant(&f, &cx.test)?;
            Ok((
                zero_verdict(&vs),
                per_basis(a.spec.bialgebra().algebra.basis(), &vs),
            ))
        }
        CheckKind::Moment => {
            let mm = cx.momentum()?;
            let action_name = c
                .action
                .as_deref()
                .or(mm.action.as_deref())
                .ok_or_else(|| Error::Invalid("check requires `action`".into()))?;
            let a = &m.actions[action_name];
            let vs = mm.map.check_momentum_map(&a.spec, &mm.poisson, &cx.test)?;
            Ok((
                zero_verdict(&vs),
                per_basis(a.spec.bialgebra().algebra.basis(), &vs),
            ))
        }
        CheckKind::PoissonMap => {
            let mm = cx.momentum()?;
            let r = mm.map.check_poisson_map(&mm.poisson, &cx.test)?;
            Ok((Verdict::from_bool(r.passed()), to_value(&r)))
        }
        CheckKind::IdealInvariance => {
            let ideal = &m.ideals[need(&c.ideal, "ideal")?];
            let records = ideal.check_ideal_invariance(&cx.action()?.spec)?;
            Ok((
                Verdict::from_bool(all_members(&records)),
                to_value(&records),
            ))
        }
        CheckKind::IdealClosure => {
            let ideal = &m.ideals[need(&c.ideal, "ideal")?];
            let mm = cx.momentum()?;
            let names = transversal_names(c, mm);
            let t = mm.map.pull_transversals(&mm.poisson, &names, &cx.test)?;
            let records = ideal.check_ideal_poisson_closure(&t, &mm.poisson)?;
            Ok((
                Verdict::from_bool(all_members(&records)),
                to_value(&records),
            ))
        }
        CheckKind::Reduce => reduce(&cx),
        CheckKind::LeafScan => leaf_scan(&cx),
        CheckKind::LeafTangent => leaf_tangent(&cx),
        CheckKind::Casimir => casimir(&cx),
        CheckKind::Completeness => {
            let a = cx.action()?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let horizon = c.t_end.unwrap_or(1.0);
            let step = c.step.unwrap_or(opts.step);
            let records = completeness_scan(
                a.spec.generators(),
                c.starts.unwrap_or(10),
                horizon,
                step,
                &mut rng,
            )?;
            let established = records.iter().all(|r| r.established());
            Ok((
                Verdict::Pass,
                json!({
                    "status": if established { "no escape observed" } else { "not established" },
                    "horizon": horizon,
                    "records": to_value(&records),
                }),
            ))
        }
    }
}

fn transversal_names(c: &CheckSpec, mm: &ResolvedMomentum) -> Vec<String> {
    c.transversals
        .clone()
        .unwrap_or_else(|| mm.map.map().target().coords().to_vec())
}

fn jacobi(cx: &Ctx) -> Result<(Verdict, Value)> {
    let p = cx.bivector()?;
    let r = p.check_jacobi(&cx.test)?;
    let agree = r.paths_agree();
    let verdict = Verdict::from_zero(&r.schouten).and(Verdict::from_zero(&r.jacobiator));
    let verdict = if agree { verdict } else { Verdict::Fail };
    let triple = r.triple.map(|t| {
        t.iter()
            .map(|&i| p.chart().coord(i).to_string())
            .collect::<Vec<_>>()
    });
    Ok((
        verdict,
        json!({
            "schouten": to_value(&r.schouten),
            "jacobiator": to_value(&r.jacobiator),
            "triple": triple,
            "paths_agree": agree,
        }),
    ))
}

fn dual(cx: &Ctx) -> Result<(Verdict, Value)> {
    let b = &cx.m.bialgebras[need(&cx.c.bialgebra, "bialgebra")?];
    let d = b.dualize()?;
    let basis = d.algebra.basis();
    let n = basis.len();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let terms: Vec<String> = (0..n)
                .filter(|&k| !d.algebra.constant(i, j, k).is_zero())
                .map(|k| format!("({})*{}", d.algebra.constant(i, j, k), basis[k]))
                .collect();
            if !terms.is_empty() {
                brackets.push(format!(
                    "[{}, {}] = {}",
                    basis[i],
                    basis[j],
                    terms.join(" + ")
                ));
            }
        }
    }
    let roundtrip = b.double_dual_roundtrip()?;
    Ok((
        Verdict::from_bool(roundtrip),
        json!({ "dual_basis": basis, "dual_brackets": brackets, "double_dual_roundtrip": roundtrip }),
    ))
}

fn dressing(cx: &Ctx) -> Result<(Verdict, Value)> {
    let g = &cx.m.groups[need(&cx.c.group, "group")?];
    let side: Side = cx.c.side.as_deref().unwrap_or("left").parse()?;
    let fields = g.dressing_fields(side)?;
    let mut verdict = Verdict::Pass;
    let mut witness = json!({ "fields": fields.iter().map(|f| f.to_string()).collect::<Vec<_>>() });
    g.linearize_at_identity(&fields)?;
    if let Some(name) = &cx.c.bialgebra {
        let m = g.compare_with_coadjoint(&fields, &cx.m.bialgebras[name].algebra)?;
        let ok = match (&m.sign, &cx.c.expect) {
            (None, _) => false,
            (Some(s), Some(e)) => e.trim().parse::<i64>().ok() == Some(*s),
            (Some(_), None) => true,
        };
        verdict = verdict.and(Verdict::from_bool(ok));
        witness["coadjoint"] = to_value(&m);
    }
    if cx.c.grid.is_some() || cx.c.points.is_some() {
        let points = cx.points(g.chart());
        let (rows, agree) = rank_rows(g.poisson(), &fields, &points)?;
        verdict = verdict.and(Verdict::from_bool(agree));
        witness["ranks"] = Value::Array(rows);
    }
    Ok((verdict, witness))
}

/// `π` rank and orbit rank per point; `agree` when they coincide everywhere.
fn rank_rows(
    p: &PoissonChart,
    fields: &[MultivectorField],
    points: &[Vec<f64>],
) -> Result<(Vec<Value>, bool)> {
    let orbit = orbit_rank_scan(fields, points)?;
    let mut agree = true;
    let mut rows = Vec::new();
    for (point, orbit_rank) in orbit {
        let rank = p.rank_at(&point)?;
        agree &= rank == orbit_rank;
        rows.push(json!({ "point": point, "rank": rank, "orbit_rank": orbit_rank }));
    }
    Ok((rows, agree))
}

fn action(cx: &Ctx) -> Result<(Verdict, Value)> {
    use crate::momentum::ActionVariant::*;
    let a = cx.action()?;
    let r = a.spec.check_action_homomorphism(&cx.test)?;
    let wanted = match cx.c.expect.as_deref() {
        None => r.variant,
        Some("homomorphism") => Homomorphism,
        Some("anti-homomorphism") => AntiHomomorphism,
        Some(other) => return Err(Error::Invalid(format!("unknown action variant `{other}`"))),
    };
    let verdicts: Vec<ZeroVerdict> = match wanted {
        Homomorphism | Both => r.pairs.iter().map(|p| p.homomorphism.clone()).collect(),
        AntiHomomorphism => r
            .pairs
            .iter()
            .map(|p| p.anti_homomorphism.clone())
            .collect(),
        Neither => vec![],
    };
    let verdict = if wanted == Neither {
        Verdict::Fail
    } else {
        zero_verdict(&verdicts)
    };
    Ok((verdict, to_value(&r)))
}

fn reduce(cx: &Ctx) -> Result<(Verdict, Value)> {
    let a = cx.action()?;
    let ideal = &cx.m.ideals[need(&cx.c.ideal, "ideal")?];
    let f = cx.expr(&cx.c.f, "f", &a.poisson)?;
    let g = cx.expr(&cx.c.g, "g", &a.poisson)?;
    let r = reduced_bracket(&f, &g, ideal, &a.spec, &a.poisson)?;
    let chart = a.poisson.chart();
    let mut witness = json!({ "bracket": r.to_string_on(chart) });
    let verdict = match &cx.c.expect {
        None => Verdict::Pass,
        Some(e) => {
            let expected = ideal.ideal_reduce(&parse(e, chart)?)?;
            witness["expected"] = json!(expected.to_string_on(chart));
            Verdict::from_bool(NormalForm::from_expr(&expected)? == NormalForm::from_expr(&r)?)
        }
    };
    Ok((verdict, witness))
}

fn leaf_scan(cx: &Ctx) -> Result<(Verdict, Value)> {
    let (p, fields) = match &cx.c.action {
        Some(_) => {
            let a = cx.action()?;
            (&a.poisson, a.spec.generators().to_vec())
        }
        None => (cx.bivector()?, vec![]),
    };
    let points = cx.points(p.chart());
    if fields.is_empty() {
        let rows = points
            .iter()
            .map(|pt| Ok(json!({ "point": pt, "rank": p.rank_at(pt)? })))
            .collect::<Result<Vec<_>>>()?;
        return Ok((Verdict::Pass, json!({ "ranks": rows })));
    }
    let (rows, agree) = rank_rows(p, &fields, &points)?;
    Ok((Verdict::from_bool(agree), json!({ "ranks": rows })))
}

fn leaf_tangent(cx: &Ctx) -> Result<(Verdict, Value)> {
    let mm = cx.momentum()?;
    let a = cx.action()?;
    let names = transversal_names(cx.c, mm);
    let t = mm.map.pull_transversals(&mm.poisson, &names, &cx.test)?;
    let base =
        cx.c.base
            .clone()
            .ok_or_else(|| Error::Invalid("check requires `base`".into()))?;
    let leaf = LeafSpec::new(mm.poisson.chart().clone(), &t, &base)?;
    let points = cx.c.points.clone().unwrap_or_else(|| vec![base.clone()]);
    let mut verdict = Verdict::Pass;
    let mut rows = serde_json::Map::new();
    for (name, v) in a
        .spec
        .bialgebra()
        .algebra
        .basis()
        .iter()
        .zip(a.spec.generators())
    {
        if cx.c.basis.as_ref().is_some_and(|b| !b.contains(name)) {
            continue;
        }
        let r = leaf.leaf_tangent_check(v, &points, cx.tol())?;
        verdict = verdict.and(Verdict::from_bool(r.passed()));
        rows.insert(name.clone(), to_value(&r));
    }
    Ok((
        verdict,
        json!({ "level": leaf.level(), "generators": rows }),
    ))
}

fn casimir(cx: &Ctx) -> Result<(Verdict, Value)> {
    let p = cx.bivector()?;
    let f = cx.expr(&cx.c.function, "function", p)?;
    let screen = p.casimir_screen(&f, &cx.test)?;
    let mut verdict = Verdict::from_zero(&screen);
    let mut witness = json!({ "screen": to_value(&screen) });
    if let Some(h) = &cx.c.hamiltonian {
        let x = p.hamiltonian_field(&parse(h, p.chart())?)?;
        let start =
            cx.c.start
                .clone()
                .ok_or_else(|| Error::Invalid("check requires `start`".into()))?;
        let fl = flow(
            &x,
            &start,
            cx.c.t_end.unwrap_or(1.0),
            cx.c.step.unwrap_or(cx.opts.step),
        )?;
        let drift = p.casimir_drift(&f, std::slice::from_ref(&fl))?;
        verdict = verdict.and(Verdict::from_bool(!fl.escaped && drift <= cx.tol()));
        witness["drift"] = json!(drift);
        witness["escaped"] = json!(fl.escaped);
        witness["end"] = json!(fl.end());
        witness["end_time"] = json!(fl.end_time());
    }
    Ok((verdict, witness))
}
