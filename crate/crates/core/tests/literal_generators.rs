//! The generators `Φ(ξ) = a{b, ·}`, `Φ(η) = a{a⁻¹, ·}` on `G*`, checked
//! independently of the dressing fields and reported as computed.

use poisred::fixtures::{gstar_bialgebra, gstar_poisson, scaled_hamiltonian_generators};
use poisred::momentum::{ActionSpec, ActionVariant};
use poisred::reduction::{all_members, CoordinateIdeal};
use poisred::{parse, NormalForm, ZeroTest, ZeroVerdict};

fn literal() -> ActionSpec {
    let p = gstar_poisson();
    let c = p.chart();
    let gens = scaled_hamiltonian_generators(&p, &parse("a", c).unwrap(), &parse("b", c).unwrap())
        .unwrap();
    ActionSpec::new(gstar_bialgebra(), gens).unwrap()
}

#[test]
fn ideal_is_invariant_under_literal_generators() {
    let p = gstar_poisson();
    let c = p.chart().clone();
    let ideal = CoordinateIdeal::from_exprs(
        c.clone(),
        &[parse("a - 1", &c).unwrap(), parse("b", &c).unwrap()],
    )
    .unwrap();
    let recs = ideal.check_ideal_invariance(&literal()).unwrap();
    // oracle: Φ(ξ) = −a²b ∂_a, Φ(η) = −b ∂_b
    let want = ["-a^2*b", "0", "0", "-b"];
    for (r, w) in recs.iter().zip(want) {
        let got = NormalForm::from_expr(&parse(&r.subject, &c).unwrap()).unwrap();
        assert_eq!(
            got,
            NormalForm::from_expr(&parse(w, &c).unwrap()).unwrap(),
            "{}",
            r.subject
        );
    }
    assert!(all_members(&recs));
}

#[test]
fn literal_generators_are_not_a_poisson_action() {
    let p = gstar_poisson();
    let v = literal()
        .check_infinitesimal_poisson(&p, &ZeroTest::default())
        .unwrap();
    // oracle: L_{−a²b∂a}π = a²b² ∂a∧∂b with δ(ξ) = 0; L_{−b∂b}π = 0 while
    // (δη)_M = Φ(ξ)∧Φ(η) = a²b² ∂a∧∂b
    for verdict in &v {
        match verdict {
            ZeroVerdict::NonZero { point, value } => {
                let (a, b) = (point[0], point[1]);
                let want = a * a * b * b;
                assert!(
                    (value.abs() - want).abs() <= 1e-9 * want.max(1.0),
                    "{value} vs {want}"
                );
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }
}

#[test]
fn literal_generators_realize_neither_variant() {
    // oracle: [Φ(ξ), Φ(η)] = −a²b ∂_a = Φ(ξ), while Φ([ξ, η]) = Φ(η) = −b ∂_b
    let h = literal()
        .check_action_homomorphism(&ZeroTest::default())
        .unwrap();
    assert_eq!(h.variant, ActionVariant::Neither);
}
