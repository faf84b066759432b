//! Two-place conditional probability stored as a stack of exact-rational
//! measures with pairwise-disjoint supports.
//!
//! Rank 0 carries all unconditional mass; each later rank is consulted only
//! when every earlier rank gives the conditioning event measure zero. Worlds
//! outside every support are non-entertainable. An empty stack is the
//! abnormal state, which assigns 1 to every conditional.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cores::CoreSystem;
use crate::error::{Error, Result};
use crate::logic::{Proposition, Universe};

pub type Weight = num_rational::BigRational;

/// Parses `p/q` or `p`.
pub fn parse_weight(text: &str) -> Option<Weight> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (text.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Weight::new(num, den))
}

pub fn ratio(num: i64, den: i64) -> Weight {
    Weight::new(num.into(), den.into())
}

/// One layer of the stack: strictly positive weights summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMeasure {
    support: Proposition,
    // sorted by world index
    weights: Vec<(usize, Weight)>,
}

impl RankMeasure {
    fn new(mut weights: Vec<(usize, Weight)>) -> Self {
        weights.sort_by_key(|(i, _)| *i);
        let support = weights.iter().map(|(i, _)| *i).collect();
        RankMeasure { support, weights }
    }

    pub fn support(&self) -> Proposition {
        self.support
    }

    pub fn weights(&self) -> &[(usize, Weight)] {
        &self.weights
    }

    pub fn weight(&self, world: usize) -> Option<&Weight> {
        self.weights
            .binary_search_by_key(&world, |(i, _)| *i)
            .ok()
            .map(|k| &self.weights[k].1)
    }

    /// Measure of `p`.
    pub fn mass(&self, p: Proposition) -> Weight {
        let hit = self.support & p;
        if hit.is_empty() {
            Weight::zero()
        } else if hit == self.support {
            Weight::one()
        } else {
            self.weights
                .iter()
                .filter(|(i, _)| hit.contains(*i))
                .map(|(_, w)| w)
                .sum()
        }
    }

    /// This measure conditioned on `p`, which must meet the support.
    pub(crate) fn condition(&self, p: Proposition) -> RankMeasure {
        let hit = self.support & p;
        debug_assert!(!hit.is_empty());
        if hit == self.support {
            return self.clone();
        }
        let total = self.mass(p);
        RankMeasure {
            support: hit,
            weights: self
                .weights
                .iter()
                .filter(|(i, _)| hit.contains(*i))
                .map(|(i, w)| (*i, w / &total))
                .collect(),
        }
    }
}

/// A two-place probability function over a finite universe.
#[derive(Clone)]
pub struct EpistemicState {
    universe: Arc<Universe>,
    ranks: Vec<RankMeasure>,
    cores: OnceLock<CoreSystem>,
}

impl fmt::Debug for EpistemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EpistemicState")
            .field("worlds", &self.universe.len())
            .field("ranks", &self.ranks)
            .finish()
    }
}

impl PartialEq for EpistemicState {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.universe, &other.universe) || self.universe == other.universe)
            && self.ranks == other.ranks
    }
}

impl Eq for EpistemicState {}

/// Validates and assembles a state from ranks keyed by world id.
pub fn build_state(
    universe: Arc<Universe>,
    ranks: Vec<Vec<(String, Weight)>>,
) -> Result<EpistemicState> {
    let indexed = ranks
        .into_iter()
        .map(|rank| {
            rank.into_iter()
                .map(|(id, w)| {
                    universe
                        .world_index(&id)
                        .map(|i| (i, w))
                        .ok_or(Error::UnknownWorld(id))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    EpistemicState::from_indexed(universe, indexed)
}

/// The coreless state: every conditional probability is 1.
pub fn abnormal_state(universe: Arc<Universe>) -> EpistemicState {
    EpistemicState {
        universe,
        ranks: Vec::new(),
        cores: OnceLock::new(),
    }
}

impl EpistemicState {
    /// Validates and assembles a state from ranks keyed by world index.
    pub fn from_indexed(universe: Arc<Universe>, ranks: Vec<Vec<(usize, Weight)>>) -> Result<Self> {
        if universe.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = Vec::with_capacity(ranks.len());
        for (r, rank) in ranks.into_iter().enumerate() {
            if rank.is_empty() {
                return Err(Error::EmptyRank(r));
            }
            let mut sum = Weight::zero();
            for (i, w) in &rank {
                let Some(world) = universe.worlds().get(*i) else {
                    return Err(Error::UnknownWorld(format!("#{i}")));
                };
                if let Some(first) = owner.insert(*i, r) {
                    return Err(Error::OverlappingSupports {
                        world: world.id.clone(),
                        first,
                        second: r,
                    });
                }
                if !w.is_positive() {
                    return Err(Error::NonPositiveWeight {
                        rank: r,
                        world: world.id.clone(),
                        weight: w.clone(),
                    });
                }
                sum += w;
            }
            if !sum.is_one() {
                return Err(Error::WeightSum { rank: r, sum });
            }
            out.push(RankMeasure::new(rank));
        }
        Ok(Self::from_ranks_unchecked(universe, out))
    }

    pub(crate) fn from_ranks_unchecked(universe: Arc<Universe>, ranks: Vec<RankMeasure>) -> Self {
        EpistemicState {
            universe,
            ranks,
            cores: OnceLock::new(),
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn ranks(&self) -> &[RankMeasure] {
        &self.ranks
    }

    pub fn is_abnormal(&self) -> bool {
        self.ranks.is_empty()
    }

    pub(crate) fn core_cache(&self) -> &OnceLock<CoreSystem> {
        &self.cores
    }

    /// Union of all supports: the entertainable worlds.
    pub fn entertainable_worlds(&self) -> Proposition {
        self.ranks
            .iter()
            .fold(Proposition::EMPTY, |acc, r| acc | r.support())
    }

    /// Index of the first rank giving `a` positive measure.
    pub fn first_rank_meeting(&self, a: Proposition) -> Option<usize> {
        self.ranks.iter().position(|r| r.support().intersects(a))
    }

    fn assert_in_universe(&self, p: Proposition) {
        assert!(
            self.universe.contains(p),
            "proposition {:#x} is not contained in a universe of {} worlds",
            p.bits(),
            self.universe.len()
        );
    }

    /// Rebuilds the state with each rank's weights reassigned by `f`.
    pub fn map_weights<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, &[(usize, Weight)]) -> Vec<(usize, Weight)>,
    {
        let ranks = self
            .ranks
            .iter()
            .enumerate()
            .map(|(r, m)| f(r, m.weights()))
            .collect();
        Self::from_indexed(self.universe.clone(), ranks)
    }
}

/// P(b | a). Abnormal conditions (no rank meets `a`, or the state itself is
/// abnormal) give 1.
pub fn popper_eval(state: &EpistemicState, b: Proposition, a: Proposition) -> Weight {
    state.assert_in_universe(a);
    state.assert_in_universe(b);
    let Some(r) = state.first_rank_meeting(a) else {
        return Weight::one();
    };
    let rank = &state.ranks[r];
    let within = rank.support() & a;
    if within.is_subset(b) {
        return Weight::one();
    }
    if !within.intersects(b) {
        return Weight::zero();
    }
    rank.mass(a & b) / rank.mass(a)
}

pub fn is_normal(state: &EpistemicState, a: Proposition) -> bool {
    state.assert_in_universe(a);
    state.first_rank_meeting(a).is_some()
}

/// `a` holds with probability 1 under every condition; equivalently its
/// complement is abnormal.
pub fn is_apriori(state: &EpistemicState, a: Proposition) -> bool {
    state.assert_in_universe(a);
    !is_normal(state, state.universe.full() - a)
}

pub fn unconditional(state: &EpistemicState, a: Proposition) -> Weight {
    popper_eval(state, a, state.universe.full())
}

/// Imports an integer plausibility ranking. Worlds ranked above `cutoff`, or
/// absent from `kappa`, are non-entertainable. Weights within a rank are
/// uniform.
pub fn from_ranking(
    universe: Arc<Universe>,
    kappa: &BTreeMap<String, u32>,
    cutoff: Option<u32>,
) -> Result<EpistemicState> {
    from_ranking_weighted(universe, kappa, cutoff, &BTreeMap::new())
}

/// As [`from_ranking`], with relative within-rank weights taken from
/// `relative` where given (default 1), normalized per rank.
pub fn from_ranking_weighted(
    universe: Arc<Universe>,
    kappa: &BTreeMap<String, u32>,
    cutoff: Option<u32>,
    relative: &BTreeMap<String, Weight>,
) -> Result<EpistemicState> {
    let mut layers: BTreeMap<u32, Vec<(usize, Weight)>> = BTreeMap::new();
    for (id, &k) in kappa {
        let i = universe
            .world_index(id)
            .ok_or_else(|| Error::UnknownWorld(id.clone()))?;
        if cutoff.is_some_and(|c| k > c) {
            continue;
        }
        let w = relative.get(id).cloned().unwrap_or_else(Weight::one);
        layers.entry(k).or_default().push((i, w));
    }
    if let Some(id) = relative.keys().find(|id| !kappa.contains_key(*id)) {
        return Err(Error::UnknownWorld(id.clone()));
    }
    let ranks = layers
        .into_values()
        .map(|layer| {
            let total: Weight = layer.iter().map(|(_, w)| w).sum();
            layer.into_iter().map(|(i, w)| (i, w / &total)).collect()
        })
        .collect();
    EpistemicState::from_indexed(universe, ranks)
}
