//! Mechanical verification of the hypothetical-revision axioms over pools of
//! propositions.

use std::collections::HashMap;

use rayon::prelude::*;

use super::generator::{enumerate_states, random_propositions, random_state, GeneratorParams};
use super::report::{AuditReport, Failure};
use crate::cores::{cores_bruteforce_bounded, cores_of, innermost, outermost, CoreSystem};
use crate::error::Result;
use crate::logic::{Proposition, Universe};
use crate::model::EpistemicState;
use crate::model_file;
use crate::suppose::suppose;
use crate::table::to_conditional_table;

pub const EXPANSION: &str = "Expansion";
pub const SUCCESS: &str = "Success";
pub const PRESERVATION: &str = "Preservation";
pub const RESTRICTED_CONSISTENCY_PRESERVATION: &str = "Restricted Consistency Preservation";
pub const FIXITY: &str = "Fixity";
pub const CUMULATIVITY: &str = "Cumulativity";
pub const GLOBAL_SUCCESS: &str = "Global Success";
pub const E1: &str = "E1";
pub const E2: &str = "E2";
pub const E3: &str = "E3";
pub const E4: &str = "E4";
pub const CORE_DYNAMICS: &str = "Core Dynamics";
pub const INNERMOST_WITHIN_OUTERMOST: &str = "Innermost Within Outermost";
pub const CONSISTENCY_PRESERVATION: &str = "Consistency Preservation";
pub const CONJUNCTIVE_REVISION: &str = "Conjunctive Revision";
pub const PROBABILISTIC_CUMULATIVITY: &str = "Probabilistic Cumulativity";
pub const CORE_ORACLE: &str = "Core Oracle Equivalence";

/// Axioms that must hold in every state.
pub const HYPOTHETICAL_REVISION_AXIOMS: [&str; 13] = [
    EXPANSION,
    SUCCESS,
    PRESERVATION,
    RESTRICTED_CONSISTENCY_PRESERVATION,
    FIXITY,
    CUMULATIVITY,
    GLOBAL_SUCCESS,
    E1,
    E2,
    E3,
    E4,
    CORE_DYNAMICS,
    INNERMOST_WITHIN_OUTERMOST,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditOptions {
    /// Compare full conditional tables for cumulativity on universes up to
    /// this size.
    pub table_max_worlds: usize,
    /// Cross-check `cores_of` against the brute-force oracle on universes up
    /// to this size.
    pub oracle_max_worlds: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            table_max_worlds: 3,
            oracle_max_worlds: 8,
        }
    }
}

struct Ctx<'a> {
    state: &'a EpistemicState,
    universe: &'a Universe,
    text: String,
    supposed: HashMap<Proposition, EpistemicState>,
}

impl<'a> Ctx<'a> {
    fn new(state: &'a EpistemicState) -> Self {
        Ctx {
            state,
            universe: state.universe(),
            text: model_file::render(state),
            supposed: HashMap::new(),
        }
    }

    fn star(&mut self, a: Proposition) -> &EpistemicState {
        let state = self.state;
        self.supposed.entry(a).or_insert_with(|| suppose(state, a))
    }

    fn show(&self, p: Proposition) -> String {
        self.universe.describe(p)
    }

    fn failure(&self, inputs: String, expected: String, actual: String) -> Failure {
        Failure {
            state: self.text.clone(),
            inputs,
            expected,
            actual,
        }
    }

    fn show_cores(&self, c: &CoreSystem) -> String {
        let parts: Vec<String> = c.cores().iter().map(|&k| self.show(k)).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Cores predicted for `s*A` from those of `s`: each core intersected with
/// `a`, empty intersections dropped, duplicates collapsed.
pub fn predicted_cores(state: &EpistemicState, a: Proposition) -> CoreSystem {
    let mut out: Vec<Proposition> = Vec::new();
    for &c in cores_of(state).cores() {
        let k = c & a;
        if !k.is_empty() && out.last() != Some(&k) {
            out.push(k);
        }
    }
    CoreSystem::new(out)
}

/// Whether the state is universal (outermost core = universe) and consistent
/// (nonempty innermost core).
pub fn is_universal_consistent(state: &EpistemicState) -> bool {
    outermost(state) == state.universe().full() && !innermost(state).is_empty()
}

pub fn check_axioms(state: &EpistemicState, pool: &[Proposition]) -> AuditReport {
    check_axioms_with(state, pool, &AuditOptions::default())
}

/// Evaluates every hypothetical-revision axiom, the E1-E4 theorems, the core
/// dynamics, and (on universal consistent states) consistency preservation
/// and conjunctive revision, over singletons and pairs from `pool`.
pub fn check_axioms_with(
    state: &EpistemicState,
    pool: &[Proposition],
    opts: &AuditOptions,
) -> AuditReport {
    let mut report = AuditReport::new();
    let mut cx = Ctx::new(state);
    let i_s = innermost(state);
    let f_s = outermost(state);
    let uc = is_universal_consistent(state);

    for &a in pool {
        let sa = cx.star(a).clone();
        let (i_sa, f_sa) = (innermost(&sa), outermost(&sa));
        let sh = cx.show(a);

        report.record(EXPANSION, true, f_s & a == f_sa, || {
            cx.failure(format!("A={sh}"), cx.show(f_s & a), cx.show(f_sa))
        });
        report.record(SUCCESS, true, i_sa.is_subset(a), || {
            cx.failure(format!("A={sh}"), format!("subset of {sh}"), cx.show(i_sa))
        });
        report.record(E1, true, i_sa.is_subset(a), || {
            cx.failure(format!("A={sh}"), format!("subset of {sh}"), cx.show(i_sa))
        });
        report.record(PRESERVATION, i_s.intersects(a), i_s & a == i_sa, || {
            cx.failure(format!("A={sh}"), cx.show(i_s & a), cx.show(i_sa))
        });
        report.record(
            RESTRICTED_CONSISTENCY_PRESERVATION,
            !i_s.is_empty() && f_s.intersects(a),
            !i_sa.is_empty(),
            || cx.failure(format!("A={sh}"), "nonempty".into(), cx.show(i_sa)),
        );
        report.record(
            FIXITY,
            state.is_abnormal(),
            i_sa.is_empty() && f_sa.is_empty(),
            || {
                cx.failure(
                    format!("A={sh}"),
                    "I = F = {}".into(),
                    format!("I={}, F={}", cx.show(i_sa), cx.show(f_sa)),
                )
            },
        );
        report.record(E2, i_s.is_subset(a), i_s == i_sa, || {
            cx.failure(format!("A={sh}"), cx.show(i_s), cx.show(i_sa))
        });
        report.record(
            INNERMOST_WITHIN_OUTERMOST,
            true,
            i_sa.is_subset(f_sa) && i_s.is_subset(f_s),
            || {
                cx.failure(
                    format!("A={sh}"),
                    "I within F".into(),
                    format!("I={}, F={}", cx.show(i_sa), cx.show(f_sa)),
                )
            },
        );
        if f_s.intersects(a) {
            let predicted = predicted_cores(state, a);
            let actual = cores_of(&sa).clone();
            report.record(CORE_DYNAMICS, true, predicted == actual, || {
                cx.failure(
                    format!("A={sh}"),
                    cx.show_cores(&predicted),
                    cx.show_cores(&actual),
                )
            });
        } else {
            report.record(CORE_DYNAMICS, false, true, || unreachable!());
        }
        report.record_conditional(
            CONSISTENCY_PRESERVATION,
            uc,
            !a.is_empty(),
            !i_sa.is_empty(),
            || cx.failure(format!("A={sh}"), "nonempty".into(), cx.show(i_sa)),
        );
    }

    let with_tables = !state.is_abnormal() && cx.universe.len() <= opts.table_max_worlds;
    for &a in pool {
        let sa = cx.star(a).clone();
        let i_sa = innermost(&sa);
        let mut sa_star: HashMap<Proposition, EpistemicState> = HashMap::new();
        for &b in pool {
            let sab = sa_star.entry(b).or_insert_with(|| suppose(&sa, b)).clone();
            let s_ab = cx.star(a & b).clone();
            let sb = cx.star(b).clone();
            let (i_sab, i_s_ab) = (innermost(&sab), innermost(&s_ab));
            let inputs = || format!("A={}, B={}", cx.show(a), cx.show(b));

            report.record(CUMULATIVITY, true, i_sab == i_s_ab, || {
                cx.failure(inputs(), cx.show(i_s_ab), cx.show(i_sab))
            });
            report.record(GLOBAL_SUCCESS, true, i_sab.is_subset(a), || {
                cx.failure(
                    inputs(),
                    format!("subset of {}", cx.show(a)),
                    cx.show(i_sab),
                )
            });
            report.record(
                FIXITY,
                sa.is_abnormal(),
                i_sab.is_empty() && outermost(&sab).is_empty(),
                || {
                    cx.failure(
                        inputs(),
                        "I = F = {}".into(),
                        format!("I={}, F={}", cx.show(i_sab), cx.show(outermost(&sab))),
                    )
                },
            );

            let i_sb = innermost(&sb);
            report.record(
                E3,
                a.is_subset(b) && i_sb.intersects(a),
                i_sa == i_sb & a,
                || cx.failure(inputs(), cx.show(i_sb & a), cx.show(i_sa)),
            );
            report.record(
                E4,
                a.is_subset(b) && i_sb.is_empty(),
                i_sa.is_empty(),
                || cx.failure(inputs(), "{}".into(), cx.show(i_sa)),
            );
            report.record(
                CONJUNCTIVE_REVISION,
                i_sa.intersects(b),
                i_sa & b == i_s_ab,
                || cx.failure(inputs(), cx.show(i_s_ab), cx.show(i_sa & b)),
            );

            if with_tables {
                let lhs = to_conditional_table(&sab).expect("within table bound");
                let rhs = to_conditional_table(&s_ab).expect("within table bound");
                report.record(PROBABILISTIC_CUMULATIVITY, true, lhs == rhs, || {
                    cx.failure(inputs(), "equal tables".into(), "tables differ".into())
                });
            }
        }
    }

    if cx.universe.len() <= opts.oracle_max_worlds {
        let oracle =
            cores_bruteforce_bounded(state, opts.oracle_max_worlds).expect("within oracle bound");
        let direct = cores_of(state);
        report.record(CORE_ORACLE, true, oracle == *direct, || {
            cx.failure(String::new(), cx.show_cores(&oracle), cx.show_cores(direct))
        });
    }
    report
}

/// Compares the conditional tables of `(s*A)*B` and `s*(A ∩ B)` entry for
/// entry on each pair.
pub fn probabilistic_cumulativity(
    state: &EpistemicState,
    pairs: &[(Proposition, Proposition)],
) -> Result<AuditReport> {
    let mut report = AuditReport::new();
    let text = model_file::render(state);
    for &(a, b) in pairs {
        let lhs = to_conditional_table(&suppose(&suppose(state, a), b))?;
        let rhs = to_conditional_table(&suppose(state, a & b))?;
        report.record(PROBABILISTIC_CUMULATIVITY, true, lhs == rhs, || Failure {
            state: text.clone(),
            inputs: format!(
                "A={}, B={}",
                state.universe().describe(a),
                state.universe().describe(b)
            ),
            expected: "equal tables".into(),
            actual: "tables differ".into(),
        });
    }
    Ok(report)
}

/// A consistent proposition whose supposition destroys all expectations, if
/// any: the complement of the outermost core. `None` for universal states
/// and for the abnormal state, which has no expectations to lose.
pub fn find_cp_violation(state: &EpistemicState) -> Option<Proposition> {
    if innermost(state).is_empty() {
        return None;
    }
    let witness = state.universe().full() - outermost(state);
    (!witness.is_empty()).then_some(witness)
}

fn merge_all(reports: Vec<AuditReport>) -> AuditReport {
    reports.into_iter().fold(AuditReport::new(), |mut acc, r| {
        acc.merge(r);
        acc
    })
}

/// Every enumerated state on 1..=max_worlds worlds, checked against the
/// full powerset as pool, with the core oracle cross-check.
pub fn exhaustive_small_space_audit(max_worlds: usize) -> AuditReport {
    exhaustive_small_space_audit_with(max_worlds, &AuditOptions::default())
}

pub fn exhaustive_small_space_audit_with(max_worlds: usize, opts: &AuditOptions) -> AuditReport {
    assert!(
        max_worlds <= 5,
        "all-propositions audit limited to 5 worlds"
    );
    let states: Vec<EpistemicState> = (1..=max_worlds).flat_map(enumerate_states).collect();
    let reports = states
        .par_iter()
        .map(|s| {
            let pool: Vec<Proposition> = Proposition::powerset(s.universe().len()).collect();
            check_axioms_with(s, &pool, opts)
        })
        .collect();
    merge_all(reports)
}

/// One random state per seed, each checked against `pool_size` random
/// propositions drawn from a stream keyed by the seed.
pub fn random_audit(
    params: &GeneratorParams,
    seeds: std::ops::Range<u64>,
    pool_size: usize,
) -> Result<AuditReport> {
    random_audit_with(params, seeds, pool_size, &AuditOptions::default())
}

pub fn random_audit_with(
    params: &GeneratorParams,
    seeds: std::ops::Range<u64>,
    pool_size: usize,
    opts: &AuditOptions,
) -> Result<AuditReport> {
    params.validate()?;
    let reports = seeds
        .into_par_iter()
        .map(|seed| {
            let s = random_state(&params.with_seed(seed))?;
            let pool = random_propositions(s.universe(), pool_size, seed ^ 0x9e37_79b9_7f4a_7c15);
            Ok(check_axioms_with(&s, &pool, opts))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_all(reports))
}
