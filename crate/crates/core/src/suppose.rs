//! Hypothetical revision: P ↦ P(· | · ∩ A), iterated over sequences of
//! suppositions.

use crate::cores::{innermost, outermost};
use crate::error::Result;
use crate::logic::{extension, Formula, Proposition};
use crate::model::{abnormal_state, EpistemicState};

/// Supposes `a`. Ranks missing `a` drop out and the rest are conditioned on
/// it, renumbered from 0. Supposing something outside the outermost core, or
/// anything at all in the abnormal state, yields the abnormal state.
pub fn suppose(state: &EpistemicState, a: Proposition) -> EpistemicState {
    let universe = state.universe();
    assert!(
        universe.contains(a),
        "supposed proposition lies outside the universe"
    );
    if !entertainable(state, a) {
        return abnormal_state(universe.clone());
    }
    let ranks = state
        .ranks()
        .iter()
        .filter(|r| r.support().intersects(a))
        .map(|r| r.condition(a))
        .collect();
    EpistemicState::from_ranks_unchecked(universe.clone(), ranks)
}

/// Whether `a` overlaps the outermost core.
pub fn entertainable(state: &EpistemicState, a: Proposition) -> bool {
    outermost(state).intersects(a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuppositionStep {
    pub supposed: Proposition,
    pub source: Option<Formula>,
    pub result: EpistemicState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuppositionTrace {
    pub initial: EpistemicState,
    pub steps: Vec<SuppositionStep>,
}

impl SuppositionTrace {
    pub fn new(initial: EpistemicState) -> Self {
        SuppositionTrace {
            initial,
            steps: Vec::new(),
        }
    }

    pub fn current(&self) -> &EpistemicState {
        self.steps.last().map_or(&self.initial, |s| &s.result)
    }

    pub fn push(&mut self, supposed: Proposition, source: Option<Formula>) -> &EpistemicState {
        let result = suppose(self.current(), supposed);
        self.steps.push(SuppositionStep {
            supposed,
            source,
            result,
        });
        &self.steps.last().expect("just pushed").result
    }
}

pub fn suppose_seq(state: &EpistemicState, inputs: &[Proposition]) -> SuppositionTrace {
    let mut trace = SuppositionTrace::new(state.clone());
    for &a in inputs {
        trace.push(a, None);
    }
    trace
}

/// As [`suppose_seq`], taking formulas and recording them on each step.
pub fn suppose_formulas(state: &EpistemicState, inputs: &[Formula]) -> Result<SuppositionTrace> {
    let exts = inputs
        .iter()
        .map(|f| extension(f, state.universe()))
        .collect::<Result<Vec<_>>>()?;
    let mut trace = SuppositionTrace::new(state.clone());
    for (f, a) in inputs.iter().zip(exts) {
        trace.push(a, Some(f.clone()));
    }
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub coherent: bool,
}

/// Ramsey-style acceptance of "if antecedent then consequent": suppose the
/// antecedent and check that the resulting expectations entail the
/// consequent. A non-entertainable antecedent gives vacuous acceptance
/// flagged as incoherent.
pub fn accepts_conditional(
    state: &EpistemicState,
    antecedent: &Formula,
    consequent: &Formula,
) -> Result<Verdict> {
    let a = extension(antecedent, state.universe())?;
    let c = extension(consequent, state.universe())?;
    let revised = suppose(state, a);
    Ok(Verdict {
        accepted: innermost(&revised).is_subset(c),
        coherent: !revised.is_abnormal(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cores::cores_of;
    use crate::fixtures;
    use crate::logic::parse_formula;
    use crate::model::{ratio, Weight};
    use num_traits::One;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ext(s: &EpistemicState, text: &str) -> Proposition {
        extension(&f(text), s.universe()).unwrap()
    }

    #[test]
    fn kennedy_suppose_not_oswald() {
        let k = fixtures::kennedy();
        let r = suppose(&k, ext(&k, "~O"));
        let w1 = k.universe().proposition(["w1"]).unwrap();
        assert_eq!(r.ranks().len(), 1);
        assert_eq!(r.ranks()[0].weights(), &[(1, Weight::one())]);
        assert_eq!(innermost(&r), w1);
        assert_eq!(outermost(&r), w1);
    }

    #[test]
    fn identity_and_incoherent_suppositions() {
        let k = fixtures::kennedy();
        assert_eq!(suppose(&k, k.universe().full()), k);
        assert!(suppose(&k, ext(&k, "~O & ~S")).is_abnormal());
        let ab = abnormal_state(k.universe().clone());
        assert!(suppose(&ab, k.universe().full()).is_abnormal());
    }

    #[test]
    fn conditioning_renormalizes_within_rank() {
        let u = fixtures::kennedy().universe().clone();
        let s = EpistemicState::from_indexed(
            u,
            vec![
                vec![(0, ratio(1, 2)), (1, ratio(1, 4)), (2, ratio(1, 4))],
                vec![(3, ratio(1, 1))],
            ],
        )
        .unwrap();
        let r = suppose(&s, Proposition::from_bits(0b1110));
        assert_eq!(
            r.ranks()[0].weights(),
            &[(1, ratio(1, 2)), (2, ratio(1, 2))]
        );
        assert_eq!(
            cores_of(&r).cores(),
            &[
                Proposition::from_bits(0b0110),
                Proposition::from_bits(0b1110)
            ]
        );
        let r = suppose(&s, Proposition::from_bits(0b1000));
        assert_eq!(r.ranks().len(), 1);
        assert_eq!(r.ranks()[0].weights(), &[(3, Weight::one())]);
    }

    #[test]
    fn sequences() {
        let k = fixtures::kennedy();
        let t = suppose_seq(&k, &[ext(&k, "~O"), ext(&k, "J")]);
        assert_eq!(t.steps.len(), 2);
        assert_eq!(
            innermost(t.current()),
            k.universe().proposition(["w1"]).unwrap()
        );

        let t = suppose_seq(&k, &[]);
        assert!(t.steps.is_empty());
        assert_eq!(t.current(), &k);

        let t = suppose_seq(&k, &[ext(&k, "~O"), ext(&k, "O")]);
        assert!(t.current().is_abnormal());
        assert!(!t.steps[0].result.is_abnormal());
        assert!(suppose(&k, ext(&k, "~O & O")).is_abnormal());

        let t = suppose_formulas(&k, &[f("~O & ~S"), f("T")]).unwrap();
        assert!(t.steps.iter().all(|s| s.result.is_abnormal()));
        assert_eq!(t.steps[0].source, Some(f("~O & ~S")));
        assert!(suppose_formulas(&k, &[f("Q")]).is_err());
    }

    #[test]
    fn conditionals() {
        let k = fixtures::kennedy();
        let yes = Verdict {
            accepted: true,
            coherent: true,
        };
        assert_eq!(accepts_conditional(&k, &f("~O"), &f("S")).unwrap(), yes);
        assert_eq!(accepts_conditional(&k, &f("S"), &f("~O")).unwrap(), yes);
        assert_eq!(
            accepts_conditional(&k, &f("~O & ~S"), &f("~J")).unwrap(),
            Verdict {
                accepted: true,
                coherent: false
            }
        );
        assert_eq!(
            accepts_conditional(&k, &f("~O"), &f("~S")).unwrap(),
            Verdict {
                accepted: false,
                coherent: true
            }
        );
    }

    #[test]
    fn entertainability() {
        let k = fixtures::kennedy();
        assert!(entertainable(&k, ext(&k, "~O")));
        assert!(!entertainable(&k, ext(&k, "~O & ~S")));
        assert!(entertainable(&k, k.universe().full()));
        assert!(!entertainable(
            &abnormal_state(k.universe().clone()),
            k.universe().full()
        ));
    }
}
