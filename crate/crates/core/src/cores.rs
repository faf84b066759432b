//! Probability cores: normal sets whose every nonempty part is infinitely
//! more probable than anything outside them. The innermost core holds the
//! expectations of a state and the outermost core its full beliefs.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::logic::{extension, Formula, Proposition};
use crate::model::{is_normal, popper_eval, EpistemicState};

/// Default universe bound for the brute-force core oracle.
pub const DEFAULT_BRUTEFORCE_BOUND: usize = 10;

/// Cores ordered innermost first, each a strict subset of the next. Empty for
/// the abnormal state.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoreSystem {
    cores: Vec<Proposition>,
}

impl CoreSystem {
    pub fn new(cores: Vec<Proposition>) -> Self {
        CoreSystem { cores }
    }

    pub fn cores(&self) -> &[Proposition] {
        &self.cores
    }

    pub fn len(&self) -> usize {
        self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }

    pub fn innermost(&self) -> Proposition {
        self.cores.first().copied().unwrap_or(Proposition::EMPTY)
    }

    pub fn outermost(&self) -> Proposition {
        self.cores.last().copied().unwrap_or(Proposition::EMPTY)
    }

    pub fn is_strictly_nested(&self) -> bool {
        self.cores
            .windows(2)
            .all(|w| w[0].is_subset(w[1]) && w[0] != w[1])
    }
}

/// The cumulative unions of rank supports. Memoized on the state.
pub fn cores_of(state: &EpistemicState) -> &CoreSystem {
    state.core_cache().get_or_init(|| {
        let mut acc = Proposition::EMPTY;
        CoreSystem::new(
            state
                .ranks()
                .iter()
                .map(|r| {
                    acc = acc | r.support();
                    acc
                })
                .collect(),
        )
    })
}

pub fn innermost(state: &EpistemicState) -> Proposition {
    cores_of(state).innermost()
}

pub fn outermost(state: &EpistemicState) -> Proposition {
    cores_of(state).outermost()
}

fn entailed_by(core: Proposition, f: &Formula, state: &EpistemicState) -> Result<bool> {
    let ext = extension(f, state.universe())?;
    Ok(!core.is_empty() && core.is_subset(ext))
}

/// Whether `f` is entailed by the innermost core.
pub fn expects(state: &EpistemicState, f: &Formula) -> Result<bool> {
    entailed_by(innermost(state), f, state)
}

/// Whether `f` is entailed by the outermost core.
pub fn fully_believes(state: &EpistemicState, f: &Formula) -> Result<bool> {
    entailed_by(outermost(state), f, state)
}

fn check_bound(state: &EpistemicState, bound: usize) -> Result<()> {
    let n = state.universe().len();
    if n > bound {
        return Err(Error::UniverseTooLarge { size: n, bound });
    }
    Ok(())
}

/// Decides whether `k` is a core by direct enumeration: `k` must be normal
/// and P(B | A ∪ B) = 0 for every nonempty A ⊆ k and every B outside k.
pub fn is_core_bruteforce(state: &EpistemicState, k: Proposition) -> Result<bool> {
    is_core_bruteforce_bounded(state, k, DEFAULT_BRUTEFORCE_BOUND)
}

pub fn is_core_bruteforce_bounded(
    state: &EpistemicState,
    k: Proposition,
    bound: usize,
) -> Result<bool> {
    check_bound(state, bound)?;
    Ok(ssc_holds(state, k))
}

fn ssc_holds(state: &EpistemicState, k: Proposition) -> bool {
    if !is_normal(state, k) {
        return false;
    }
    let outside = state.universe().full() - k;
    for a in k.subsets().filter(|a| !a.is_empty()) {
        for b in outside.subsets() {
            if !popper_eval(state, b, a | b).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Every subset of the universe passing [`is_core_bruteforce`], smallest
/// first.
pub fn cores_bruteforce(state: &EpistemicState) -> Result<CoreSystem> {
    cores_bruteforce_bounded(state, DEFAULT_BRUTEFORCE_BOUND)
}

pub fn cores_bruteforce_bounded(state: &EpistemicState, bound: usize) -> Result<CoreSystem> {
    check_bound(state, bound)?;
    let mut cores: Vec<Proposition> = Proposition::powerset(state.universe().len())
        .filter(|&k| ssc_holds(state, k))
        .collect();
    cores.sort_by_key(|k| (k.len(), k.bits()));
    Ok(CoreSystem::new(cores))
}
