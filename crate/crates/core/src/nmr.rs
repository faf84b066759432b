//! Nonmonotonic consequence: A |~ B iff P(B | A) = 1, and an audit of the
//! rational-logic postulates over a pool of formulas.

use std::collections::{HashMap, HashSet};

use num_traits::One;
use rand::Rng;

use crate::audit::{AuditReport, Failure};
use crate::cores::{innermost, outermost};
use crate::error::Result;
use crate::logic::{extension, Atom, Formula, Proposition};
use crate::model::{popper_eval, EpistemicState};
use crate::model_file;
use crate::suppose::suppose;

pub fn nm_follows(state: &EpistemicState, a: &Formula, b: &Formula) -> Result<bool> {
    let u = state.universe();
    Ok(nm_follows_ext(state, extension(a, u)?, extension(b, u)?))
}

pub fn nm_follows_ext(state: &EpistemicState, a: Proposition, b: Proposition) -> bool {
    popper_eval(state, b, a).is_one()
}

/// The same relation computed by supposing `a` and checking that the
/// innermost core of the result entails `b`.
pub fn nm_follows_via_cores(state: &EpistemicState, a: &Formula, b: &Formula) -> Result<bool> {
    let u = state.universe();
    Ok(nm_follows_via_cores_ext(
        state,
        extension(a, u)?,
        extension(b, u)?,
    ))
}

pub fn nm_follows_via_cores_ext(state: &EpistemicState, a: Proposition, b: Proposition) -> bool {
    innermost(&suppose(state, a)).is_subset(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsequenceQuery {
    pub premise: Formula,
    pub conclusion: Formula,
}

impl ConsequenceQuery {
    pub fn holds(&self, state: &EpistemicState) -> Result<bool> {
        nm_follows(state, &self.premise, &self.conclusion)
    }
}

pub const REFLEXIVITY: &str = "Reflexivity";
pub const LEFT_LOGICAL_EQUIVALENCE: &str = "Left Logical Equivalence";
pub const RIGHT_WEAKENING: &str = "Right Weakening";
pub const AND: &str = "And";
pub const OR: &str = "Or";
pub const CAUTIOUS_MONOTONICITY: &str = "Cautious Monotonicity";
pub const RATIONAL_MONOTONICITY: &str = "Rational Monotonicity";
pub const NM_CONSISTENCY_PRESERVATION: &str = "Consistency Preservation (|~)";

pub const RATIONAL_POSTULATES: [&str; 7] = [
    REFLEXIVITY,
    LEFT_LOGICAL_EQUIVALENCE,
    RIGHT_WEAKENING,
    AND,
    OR,
    CAUTIOUS_MONOTONICITY,
    RATIONAL_MONOTONICITY,
];

/// Memoized |~ over propositions of one state.
struct Relation<'a> {
    state: &'a EpistemicState,
    memo: HashMap<(Proposition, Proposition), bool>,
}

impl<'a> Relation<'a> {
    fn new(state: &'a EpistemicState) -> Self {
        Relation {
            state,
            memo: HashMap::new(),
        }
    }

    fn follows(&mut self, a: Proposition, b: Proposition) -> bool {
        let state = self.state;
        *self
            .memo
            .entry((a, b))
            .or_insert_with(|| nm_follows_ext(state, a, b))
    }
}

/// Keeps the first formula of each extension class over the state's
/// universe.
pub fn dedup_by_extension(
    state: &EpistemicState,
    pool: &[Formula],
) -> Result<Vec<(Formula, Proposition)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in pool {
        let e = extension(f, state.universe())?;
        if seen.insert(e) {
            out.push((f.clone(), e));
        }
    }
    Ok(out)
}

/// Checks the seven rational postulates for every instantiation drawn from
/// `pool`, plus consistency preservation (no consistent premise entails
/// falsity). The latter is only required when the state is universal and
/// consistent; elsewhere its violations are flagged.
pub fn rational_audit(state: &EpistemicState, pool: &[Formula]) -> Result<AuditReport> {
    let items = dedup_by_extension(state, pool)?;
    let full = state.universe().full();
    let regime_full = outermost(state) == full && !innermost(state).is_empty();
    let mut rel = Relation::new(state);
    let mut report = AuditReport::new();
    let state_text = model_file::render(state);
    let fail = |inputs: String, expected: &str, actual: &str| Failure {
        state: state_text.clone(),
        inputs,
        expected: expected.to_owned(),
        actual: actual.to_owned(),
    };

    for (fa, a) in &items {
        let ok = rel.follows(*a, *a);
        report.record(REFLEXIVITY, true, ok, || {
            fail(format!("A={fa}"), "A |~ A", "not A |~ A")
        });

        let consistent = !a.is_empty();
        let bottom = rel.follows(*a, Proposition::EMPTY);
        report.record_conditional(
            NM_CONSISTENCY_PRESERVATION,
            regime_full,
            consistent,
            !bottom,
            || fail(format!("A={fa}"), "not A |~ F", "A |~ F"),
        );
    }

    for (fa, _) in &items {
        let variants = [
            Formula::not(Formula::not(fa.clone())),
            Formula::and(fa.clone(), Formula::True),
        ];
        for (fc, _) in &items {
            let premise = nm_follows(state, fa, fc)?;
            for v in &variants {
                let ok = !premise || nm_follows(state, v, fc)?;
                report.record(LEFT_LOGICAL_EQUIVALENCE, premise, ok, || {
                    fail(format!("A={fa}, A'={v}, C={fc}"), "A' |~ C", "not A' |~ C")
                });
            }
        }
    }

    for (fa, a) in &items {
        for (fb, b) in &items {
            let a_b = rel.follows(*a, *b);
            let b_c_pairs = items.iter();
            let a_not_b = rel.follows(*a, full - *b);
            for (fc, c) in b_c_pairs {
                let a_c = rel.follows(*a, *c);

                let premise = a_b && b.is_subset(*c);
                let ok = !premise || a_c;
                report.record(RIGHT_WEAKENING, premise, ok, || {
                    fail(format!("A={fa}, B={fb}, C={fc}"), "A |~ C", "not A |~ C")
                });

                let premise = a_b && a_c;
                let ok = !premise || rel.follows(*a, *b & *c);
                report.record(AND, premise, ok, || {
                    fail(
                        format!("A={fa}, B={fb}, C={fc}"),
                        "A |~ B & C",
                        "not A |~ B & C",
                    )
                });

                let premise = a_c && rel.follows(*b, *c);
                let ok = !premise || rel.follows(*a | *b, *c);
                report.record(OR, premise, ok, || {
                    fail(
                        format!("A={fa}, B={fb}, C={fc}"),
                        "A | B |~ C",
                        "not A | B |~ C",
                    )
                });

                let premise = a_b && a_c;
                let ok = !premise || rel.follows(*a & *b, *c);
                report.record(CAUTIOUS_MONOTONICITY, premise, ok, || {
                    fail(
                        format!("A={fa}, B={fb}, C={fc}"),
                        "A & B |~ C",
                        "not A & B |~ C",
                    )
                });

                let premise = a_c && !a_not_b;
                let ok = !premise || rel.follows(*a & *b, *c);
                report.record(RATIONAL_MONOTONICITY, premise, ok, || {
                    fail(
                        format!("A={fa}, B={fb}, C={fc}"),
                        "A & B |~ C",
                        "not A & B |~ C",
                    )
                });
            }
        }
    }
    Ok(report)
}

/// One formula per truth function over `atoms`, in disjunctive normal form
/// (`F` for the empty function). Only sensible for up to 4 atoms.
pub fn truth_function_pool(atoms: &[Atom]) -> Vec<Formula> {
    let k = atoms.len();
    assert!(k <= 4, "truth_function_pool over {k} atoms");
    let rows = 1usize << k;
    let minterm = |row: usize| {
        atoms
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let lit = Formula::Atom(a.clone());
                if row >> (k - 1 - j) & 1 == 1 {
                    lit
                } else {
                    Formula::not(lit)
                }
            })
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    };
    (0..1u64 << rows)
        .map(|table| {
            (0..rows)
                .filter(|r| table >> r & 1 == 1)
                .map(minterm)
                .reduce(Formula::or)
                .unwrap_or(Formula::False)
        })
        .collect()
}

fn random_formula<R: Rng>(atoms: &[Atom], depth: u32, rng: &mut R) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return match rng.gen_range(0..atoms.len() + 2) {
            0 => Formula::True,
            1 => Formula::False,
            i => Formula::Atom(atoms[i - 2].clone()),
        };
    }
    let op = rng.gen_range(0..5);
    let mut sub = || random_formula(atoms, depth - 1, rng);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::implies(sub(), sub()),
        _ => Formula::iff(sub(), sub()),
    }
}

/// Up to `size` pairwise inequivalent formulas over `atoms` (equivalence by
/// truth table over all valuations), starting with `T`, `F` and the atoms.
pub fn random_formula_pool<R: Rng>(atoms: &[Atom], size: usize, rng: &mut R) -> Vec<Formula> {
    let k = atoms.len();
    assert!((1..=6).contains(&k), "random_formula_pool over {k} atoms");
    let truth_table = |f: &Formula| -> u64 {
        (0..1usize << k)
            .filter(|&row| {
                f.eval_with(&|a: &Atom| {
                    atoms
                        .iter()
                        .position(|x| x == a)
                        .map(|j| row >> (k - 1 - j) & 1 == 1)
                })
                .expect("atoms drawn from the pool's own list")
            })
            .fold(0u64, |acc, row| acc | 1 << row)
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let seeds = [Formula::True, Formula::False]
        .into_iter()
        .chain(atoms.iter().cloned().map(Formula::Atom));
    for f in seeds {
        if out.len() < size && seen.insert(truth_table(&f)) {
            out.push(f);
        }
    }
    let mut attempts = 0;
    while out.len() < size && attempts < size * 200 {
        attempts += 1;
        let f = random_formula(atoms, 3, rng);
        if seen.insert(truth_table(&f)) {
            out.push(f);
        }
    }
    out
}
