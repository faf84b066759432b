//! Explicit conditional tables: P(B | A) for every pair of propositions.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::logic::{Proposition, Universe};
use crate::model::{abnormal_state, popper_eval, EpistemicState, RankMeasure, Weight};

/// Default bound on universe size for table conversion (tables have 4^n
/// entries).
pub const DEFAULT_TABLE_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalTable {
    universe: Arc<Universe>,
    // entries[b << n | a] = P(b | a)
    entries: Vec<Weight>,
}

impl ConditionalTable {
    /// Builds a table from `f(b, a)` and validates it.
    pub fn new<F>(universe: Arc<Universe>, f: F) -> Result<Self>
    where
        F: FnMut(Proposition, Proposition) -> Weight,
    {
        let t = Self::tabulate(universe, f)?;
        t.validate()?;
        Ok(t)
    }

    fn tabulate<F>(universe: Arc<Universe>, mut f: F) -> Result<Self>
    where
        F: FnMut(Proposition, Proposition) -> Weight,
    {
        let n = universe.len();
        if n > DEFAULT_TABLE_BOUND {
            return Err(Error::UniverseTooLarge {
                size: n,
                bound: DEFAULT_TABLE_BOUND,
            });
        }
        let mut entries = Vec::with_capacity(1 << (2 * n));
        for b in Proposition::powerset(n) {
            for a in Proposition::powerset(n) {
                entries.push(f(b, a));
            }
        }
        Ok(ConditionalTable { universe, entries })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, b: Proposition, a: Proposition) -> &Weight {
        let n = self.universe.len();
        &self.entries[((b.bits() << n) | a.bits()) as usize]
    }

    fn n(&self) -> usize {
        self.universe.len()
    }

    fn fail(&self, axiom: &str, instance: String) -> Error {
        Error::InvalidTable {
            axiom: axiom.into(),
            instance,
        }
    }

    fn show(&self, p: Proposition) -> String {
        self.universe.describe(p)
    }

    fn is_constant_one(&self, a: Proposition) -> bool {
        Proposition::powerset(self.n()).all(|b| self.get(b, a).is_one())
    }

    /// Checks (I): each P(. | A) is a probability measure or constantly 1;
    /// reflexivity P(A | A) = 1; and (II), the multiplication axiom.
    ///
    /// Given (I), both sides of (II) are additive in C whenever they are
    /// measures, so (II) is checked for C ranging over the empty set and the
    /// singletons. [`validate_exhaustive`](Self::validate_exhaustive) checks
    /// every triple instead.
    pub fn validate(&self) -> Result<()> {
        self.validate_measures()?;
        let n = self.n();
        let mut cs = vec![Proposition::EMPTY];
        cs.extend((0..n).map(Proposition::singleton));
        for a in Proposition::powerset(n) {
            for b in Proposition::powerset(n) {
                for &c in &cs {
                    self.check_multiplication(a, b, c)?;
                }
            }
        }
        Ok(())
    }

    /// Checks (I), reflexivity, and (II) over all triples. Cubic in the
    /// number of propositions; meant for small universes.
    pub fn validate_exhaustive(&self) -> Result<()> {
        self.validate_measures()?;
        let n = self.n();
        for a in Proposition::powerset(n) {
            for b in Proposition::powerset(n) {
                for c in Proposition::powerset(n) {
                    self.check_multiplication(a, b, c)?;
                }
            }
        }
        Ok(())
    }

    fn check_multiplication(&self, a: Proposition, b: Proposition, c: Proposition) -> Result<()> {
        let lhs = self.get(b & c, a);
        let rhs = self.get(b, a) * self.get(c, b & a);
        if *lhs != rhs {
            return Err(self.fail(
                "multiplication axiom (II)",
                format!(
                    "A={}, B={}, C={}: P(B&C|A)={} but P(B|A)P(C|B&A)={}",
                    self.show(a),
                    self.show(b),
                    self.show(c),
                    lhs,
                    rhs
                ),
            ));
        }
        Ok(())
    }

    fn validate_measures(&self) -> Result<()> {
        let n = self.n();
        let full = self.universe.full();
        for a in Proposition::powerset(n) {
            if self.is_constant_one(a) {
                continue;
            }
            if !self.get(full, a).is_one() {
                return Err(self.fail(
                    "axiom (I)",
                    format!(
                        "A={}: P(U|A)={} and P(.|A) is not constantly 1",
                        self.show(a),
                        self.get(full, a)
                    ),
                ));
            }
            for i in 0..n {
                let w = self.get(Proposition::singleton(i), a);
                if w.is_negative() {
                    return Err(self.fail(
                        "axiom (I)",
                        format!(
                            "A={}: negative value {} on world {}",
                            self.show(a),
                            w,
                            self.universe.worlds()[i].id
                        ),
                    ));
                }
            }
            for b in Proposition::powerset(n) {
                let sum: Weight = b
                    .iter()
                    .map(|i| self.get(Proposition::singleton(i), a))
                    .sum();
                if *self.get(b, a) != sum {
                    return Err(self.fail(
                        "axiom (I)",
                        format!(
                            "A={}, B={}: P(B|A)={} but the point values sum to {}",
                            self.show(a),
                            self.show(b),
                            self.get(b, a),
                            sum
                        ),
                    ));
                }
            }
            if !self.get(a, a).is_one() {
                return Err(self.fail(
                    "reflexivity P(A|A)=1",
                    format!("A={}: P(A|A)={}", self.show(a), self.get(a, a)),
                ));
            }
        }
        Ok(())
    }
}

/// Tabulates P(B | A) for every pair. Fails for universes above
/// [`DEFAULT_TABLE_BOUND`] worlds.
pub fn to_conditional_table(state: &EpistemicState) -> Result<ConditionalTable> {
    ConditionalTable::tabulate(state.universe().clone(), |b, a| popper_eval(state, b, a))
}

/// Recovers the ranked state from a validated table. Rank 0 is the set of
/// worlds with positive unconditional probability; each later rank repeats
/// the construction conditioned on the worlds not yet ranked, until those
/// form an abnormal event.
pub fn from_conditional_table(table: &ConditionalTable) -> Result<EpistemicState> {
    table.validate()?;
    let universe = table.universe().clone();
    let mut rest = universe.full();
    let mut ranks = Vec::new();
    while !rest.is_empty() && !table.is_constant_one(rest) {
        let weights: Vec<(usize, Weight)> = rest
            .iter()
            .filter_map(|i| {
                let w = table.get(Proposition::singleton(i), rest);
                (!w.is_zero()).then(|| (i, w.clone()))
            })
            .collect();
        let layer = EpistemicState::from_indexed(universe.clone(), vec![weights])?;
        let rank = layer.ranks()[0].clone();
        rest = rest - rank.support();
        ranks.push(rank);
    }
    let state = if ranks.is_empty() {
        abnormal_state(universe)
    } else {
        assemble(universe, ranks)
    };
    if to_conditional_table(&state)? != *table {
        return Err(Error::InvalidTable {
            axiom: "ranked representability".into(),
            instance: "reconstructed state does not reproduce the table".into(),
        });
    }
    Ok(state)
}

fn assemble(universe: Arc<Universe>, ranks: Vec<RankMeasure>) -> EpistemicState {
    let indexed = ranks.into_iter().map(|r| r.weights().to_vec()).collect();
    EpistemicState::from_indexed(universe, indexed).expect("ranks built from a validated table")
}
