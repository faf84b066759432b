use std::sync::Arc;

use num_traits::{One, Zero};
use popper_revision::audit::{enumerate_states, find_cp_violation, random_state, GeneratorParams};
use popper_revision::cores::{cores_of, expects, fully_believes, innermost, outermost};
use popper_revision::logic::{
    eval_world, extension, format_formula, parse_formula, Atom, Formula, Proposition, Universe,
};
use popper_revision::model::{is_apriori, popper_eval, unconditional, EpistemicState, Weight};
use popper_revision::nmr::{nm_follows_ext, nm_follows_via_cores_ext};
use popper_revision::suppose::suppose;
use popper_revision::table::{from_conditional_table, to_conditional_table};
use proptest::prelude::*;
use rayon::prelude::*;

const ATOMS: [&str; 4] = ["a", "b", "c", "d"];

const GENERATED_ATOMS: [&str; 4] = ["p0", "p1", "p2", "p3"];

fn arb_formula() -> impl Strategy<Value = Formula> {
    arb_formula_over(&ATOMS)
}

fn arb_formula_over(names: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (0..names.len()).prop_map(move |i| Formula::atom(names[i]).unwrap()),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

fn four_atom_universe() -> Universe {
    Universe::all_valuations(ATOMS.iter().map(|a| Atom::new(*a).unwrap()).collect()).unwrap()
}

// Truth-table oracle: connectives as lookup tables indexed by (lhs, rhs).
fn oracle_eval(f: &Formula, row: &dyn Fn(&str) -> bool) -> bool {
    const AND: [bool; 4] = [false, false, false, true];
    const OR: [bool; 4] = [false, true, true, true];
    const IMP: [bool; 4] = [true, true, false, true];
    const IFF: [bool; 4] = [true, false, false, true];
    let idx = |a: bool, b: bool| (a as usize) << 1 | b as usize;
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => row(a.name()),
        Formula::Not(x) => [true, false][oracle_eval(x, row) as usize],
        Formula::And(x, y) => AND[idx(oracle_eval(x, row), oracle_eval(y, row))],
        Formula::Or(x, y) => OR[idx(oracle_eval(x, row), oracle_eval(y, row))],
        Formula::Implies(x, y) => IMP[idx(oracle_eval(x, row), oracle_eval(y, row))],
        Formula::Iff(x, y) => IFF[idx(oracle_eval(x, row), oracle_eval(y, row))],
    }
}

/// P(B|A) as the standard part of μ_ε(A∩B)/μ_ε(A) with μ_ε = Σ ε^i μ_i:
/// the ratio of the lowest-order nonzero coefficients.
fn infinitesimal_oracle(state: &EpistemicState, b: Proposition, a: Proposition) -> Weight {
    let coeffs = |x: Proposition| -> Vec<Weight> {
        state
            .ranks()
            .iter()
            .map(|r| {
                let mut s = Weight::zero();
                for (w, p) in r.weights() {
                    if x.contains(*w) {
                        s += p;
                    }
                }
                s
            })
            .collect()
    };
    let den = coeffs(a);
    let num = coeffs(a & b);
    match den.iter().position(|c| !c.is_zero()) {
        None => Weight::one(),
        Some(d) => {
            assert!(num[..d].iter().all(Zero::is_zero));
            &num[d] / &den[d]
        }
    }
}

fn small_params(max_worlds: usize) -> GeneratorParams {
    GeneratorParams {
        max_atoms: 3,
        max_worlds: Some(max_worlds),
        ..GeneratorParams::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn format_parse_round_trip(f in arb_formula()) {
        prop_assert_eq!(parse_formula(&format_formula(&f)).unwrap(), f);
    }

    #[test]
    fn extension_is_a_boolean_homomorphism(f in arb_formula(), g in arb_formula()) {
        let u = four_atom_universe();
        let ext = |h: &Formula| extension(h, &u).unwrap();
        prop_assert_eq!(ext(&Formula::and(f.clone(), g.clone())), ext(&f) & ext(&g));
        prop_assert_eq!(ext(&Formula::or(f.clone(), g.clone())), ext(&f) | ext(&g));
        prop_assert_eq!(ext(&Formula::not(f.clone())), u.full() - ext(&f));
    }

    #[test]
    fn eval_matches_truth_tables(f in arb_formula()) {
        let u = four_atom_universe();
        for w in u.worlds() {
            let row = |name: &str| w.valuation[&Atom::new(name).unwrap()];
            prop_assert_eq!(eval_world(&f, w).unwrap(), oracle_eval(&f, &row));
        }
    }

    #[test]
    fn popper_eval_matches_infinitesimal_oracle(seed in any::<u64>(), x in any::<u64>(), y in any::<u64>()) {
        let s = random_state(&GeneratorParams::default().with_seed(seed)).unwrap();
        let full = s.universe().full().bits();
        let (a, b) = (Proposition::from_bits(x & full), Proposition::from_bits(y & full));
        prop_assert_eq!(popper_eval(&s, b, a), infinitesimal_oracle(&s, b, a));
    }

    #[test]
    fn multiplication_axiom_on_random_triples(seed in any::<u64>(), x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let s = random_state(&GeneratorParams::default().with_seed(seed)).unwrap();
        let full = s.universe().full().bits();
        let (a, b, c) = (
            Proposition::from_bits(x & full),
            Proposition::from_bits(y & full),
            Proposition::from_bits(z & full),
        );
        prop_assert_eq!(popper_eval(&s, b & c, a), popper_eval(&s, b, a) * popper_eval(&s, c, b & a));
    }

    #[test]
    fn table_round_trip_up_to_eight_worlds(seed in 0u64..10_000) {
        let s = random_state(&small_params(8).with_seed(seed)).unwrap();
        let t = to_conditional_table(&s).unwrap();
        prop_assert_eq!(from_conditional_table(&t).unwrap(), s);
    }

    #[test]
    fn core_invariants(seed in any::<u64>()) {
        let s = random_state(&GeneratorParams::default().with_seed(seed)).unwrap();
        let cs = cores_of(&s);
        prop_assert!(cs.is_strictly_nested());
        prop_assert!(innermost(&s).is_subset(outermost(&s)));
        if !s.is_abnormal() {
            prop_assert!(unconditional(&s, innermost(&s)).is_one());
            let heavy: Proposition = (0..s.universe().len())
                .filter(|&w| !unconditional(&s, Proposition::singleton(w)).is_zero())
                .collect();
            prop_assert_eq!(heavy, innermost(&s));
            prop_assert_eq!(heavy, s.ranks()[0].support());
            let witness = find_cp_violation(&s);
            prop_assert_eq!(witness.is_none(), outermost(&s) == s.universe().full());
        }
    }

    #[test]
    fn apriori_is_entailment_by_outermost(seed in any::<u64>(), x in any::<u64>()) {
        let s = random_state(&GeneratorParams::default().with_seed(seed)).unwrap();
        let a = Proposition::from_bits(x & s.universe().full().bits());
        prop_assert_eq!(is_apriori(&s, a), outermost(&s).is_subset(a));
    }

    #[test]
    fn belief_attitudes(
        seed in any::<u64>(),
        f in arb_formula_over(&GENERATED_ATOMS),
        g in arb_formula_over(&GENERATED_ATOMS),
    ) {
        let params = GeneratorParams { max_atoms: 4, ..GeneratorParams::default() };
        let s = random_state(&params.with_seed(seed)).unwrap();
        // restrict to states over all four atoms
        prop_assume!(s.universe().atoms().len() == 4);
        if fully_believes(&s, &f).unwrap() {
            prop_assert!(expects(&s, &f).unwrap());
        }
        // consequences of expectations are expected
        if expects(&s, &f).unwrap() {
            prop_assert!(expects(&s, &Formula::or(f.clone(), g.clone())).unwrap());
        }
    }
}

#[test]
fn axioms_one_and_two_exhaustive_up_to_five_worlds() {
    for n in 1..=5 {
        for s in enumerate_states(n) {
            let t = to_conditional_table(&s).unwrap();
            if n <= 4 {
                t.validate_exhaustive().unwrap();
            } else {
                t.validate().unwrap();
            }
        }
    }
}

#[test]
fn perturbed_tables_are_rejected() {
    // Flipping a single 0/1 entry of a valid table breaks an axiom.
    use popper_revision::table::ConditionalTable;
    for s in enumerate_states(3).into_iter().take(40) {
        let u = s.universe().clone();
        for (pb, pa) in [
            (0b001u64, 0b111u64),
            (0b010, 0b011),
            (0b000, 0b100),
            (0b110, 0b110),
        ] {
            let (pb, pa) = (Proposition::from_bits(pb), Proposition::from_bits(pa));
            let bumped = |b: Proposition, a: Proposition| {
                let v = popper_eval(&s, b, a);
                if b == pb && a == pa {
                    if v.is_zero() {
                        Weight::one()
                    } else {
                        Weight::zero()
                    }
                } else {
                    v
                }
            };
            let reduced = ConditionalTable::new(u.clone(), bumped).is_ok();
            assert!(!reduced, "perturbed table accepted");
        }
    }
}

#[test]
fn weight_permutation_is_invisible_to_qualitative_verdicts() {
    use popper_revision::audit::check_axioms;
    for n in 2..=4 {
        for s in enumerate_states(n) {
            let rotated = s
                .map_weights(|_, ws| {
                    let mut values: Vec<Weight> = ws.iter().map(|(_, w)| w.clone()).collect();
                    values.rotate_left(1);
                    ws.iter().map(|(i, _)| *i).zip(values).collect()
                })
                .unwrap();
            assert_eq!(cores_of(&s), cores_of(&rotated));
            let pool: Vec<Proposition> = Proposition::powerset(n).collect();
            let (r1, r2) = (check_axioms(&s, &pool), check_axioms(&rotated, &pool));
            for (x, y) in r1.results.iter().zip(&r2.results) {
                assert_eq!(
                    (x.instances, x.vacuous, x.passed()),
                    (y.instances, y.vacuous, y.passed()),
                    "{}",
                    x.name
                );
            }
            for &a in &pool {
                for &b in &pool {
                    assert_eq!(nm_follows_ext(&s, a, b), nm_follows_ext(&rotated, a, b));
                }
            }
        }
    }
}

#[test]
fn nm_equivalence_on_four_atom_models() {
    let params = GeneratorParams {
        max_atoms: 4,
        ..GeneratorParams::default()
    };
    let mut checked = 0;
    for seed in 0..40 {
        let s = random_state(&params.with_seed(seed)).unwrap();
        let n = s.universe().len();
        if n != 16 {
            continue;
        }
        checked += 1;
        // A |~ B exactly when B covers the innermost core of s*A; sweep all B
        // for a spread of antecedents.
        let antecedents: Vec<Proposition> = Proposition::powerset(n).step_by(2039).collect();
        antecedents.par_iter().for_each(|&a| {
            let core = innermost(&suppose(&s, a));
            for b in Proposition::powerset(n) {
                assert_eq!(nm_follows_ext(&s, a, b), core.is_subset(b));
            }
            for b in Proposition::powerset(n).step_by(61) {
                assert_eq!(nm_follows_ext(&s, a, b), nm_follows_via_cores_ext(&s, a, b));
            }
        });
        if checked == 6 {
            break;
        }
    }
    assert!(checked > 0);
}

#[test]
fn reflexivity_and_constant_one_convention() {
    for s in enumerate_states(3) {
        for a in Proposition::powerset(3) {
            assert!(nm_follows_ext(&s, a, a));
            if !outermost(&s).intersects(a) {
                for b in Proposition::powerset(3) {
                    assert!(nm_follows_ext(&s, a, b));
                }
            }
        }
    }
}

#[test]
fn abnormal_input_universes_are_shared() {
    let s = random_state(&GeneratorParams::default()).unwrap();
    let r = suppose(&s, s.universe().full());
    assert!(Arc::ptr_eq(s.universe(), r.universe()));
}
