//! Random and exhaustive state generation.

use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::logic::{Atom, Proposition, Universe};
use crate::model::{abnormal_state, ratio, EpistemicState, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub max_atoms: usize,
    pub max_ranks: usize,
    pub non_entertainable_fraction: Weight,
    pub weight_denominator_bound: u32,
    /// Optional cap on universe size; the universe is then a random-length
    /// prefix of the valuations.
    pub max_worlds: Option<usize>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            seed: 0,
            max_atoms: 4,
            max_ranks: 4,
            non_entertainable_fraction: ratio(1, 4),
            weight_denominator_bound: 16,
            max_worlds: None,
        }
    }
}

impl GeneratorParams {
    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorParams {
            seed,
            ..self.clone()
        }
    }

    /// Every world entertainable: the generated states are universal and,
    /// having at least one rank, consistent.
    pub fn universal(&self) -> Self {
        GeneratorParams {
            non_entertainable_fraction: Weight::zero(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_owned()));
        if !(1..=6).contains(&self.max_atoms) {
            return bad("max_atoms must be between 1 and 6");
        }
        if self.max_ranks == 0 {
            return bad("max_ranks must be positive");
        }
        if self.weight_denominator_bound == 0 {
            return bad("weight_denominator_bound must be positive");
        }
        let f = &self.non_entertainable_fraction;
        if *f < Weight::zero() || *f > ratio(1, 1) {
            return bad("non_entertainable_fraction must lie in [0, 1]");
        }
        if f.numer().to_u32().is_none() || f.denom().to_u32().is_none() {
            return bad("non_entertainable_fraction must have 32-bit numerator and denominator");
        }
        if self.max_worlds == Some(0) {
            return bad("max_worlds must be positive");
        }
        Ok(())
    }
}

fn atom_names(k: usize) -> Vec<Atom> {
    (0..k)
        .map(|i| Atom::new(format!("p{i}")).expect("valid"))
        .collect()
}

/// A random state, fully determined by `params`. The universe holds all
/// valuations of 1..=max_atoms atoms (or a prefix of them under
/// `max_worlds`); each world is independently non-entertainable with the
/// given probability, and the rest are dealt into at most `max_ranks`
/// nonempty ranks with random integer weights up to
/// `weight_denominator_bound`, normalized per rank.
pub fn random_state(params: &GeneratorParams) -> Result<EpistemicState> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let k = rng.gen_range(1..=params.max_atoms);
    let mut universe = Universe::all_valuations(atom_names(k))?;
    if let Some(cap) = params.max_worlds {
        let size = rng.gen_range(1..=cap.min(universe.len()));
        universe = Universe::new(
            universe.atoms().to_vec(),
            universe.worlds()[..size].to_vec(),
        )?;
    }
    let universe = Arc::new(universe);
    let n = universe.len();

    let frac = &params.non_entertainable_fraction;
    let (num, den) = (
        frac.numer().to_u32().unwrap(),
        frac.denom().to_u32().unwrap(),
    );
    if num == den {
        return Ok(abnormal_state(universe));
    }
    let mut ranked: Vec<usize> = (0..n).filter(|_| !rng.gen_ratio(num, den)).collect();
    if ranked.is_empty() {
        ranked.push(rng.gen_range(0..n));
    }
    ranked.shuffle(&mut rng);

    let r = rng.gen_range(1..=params.max_ranks.min(ranked.len()));
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); r];
    for (pos, &w) in ranked.iter().enumerate() {
        let layer = if pos < r { pos } else { rng.gen_range(0..r) };
        layers[layer].push(w);
    }
    let ranks = layers
        .into_iter()
        .map(|layer| {
            let raw: Vec<u32> = layer
                .iter()
                .map(|_| rng.gen_range(1..=params.weight_denominator_bound))
                .collect();
            let total: i64 = raw.iter().map(|&x| i64::from(x)).sum();
            layer
                .into_iter()
                .zip(raw)
                .map(|(w, x)| (w, ratio(i64::from(x), total)))
                .collect()
        })
        .collect();
    EpistemicState::from_indexed(universe, ranks)
}

/// `count` random subsets of the state's universe, determined by `seed`.
pub fn random_propositions(universe: &Universe, count: usize, seed: u64) -> Vec<Proposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = universe.full().bits();
    (0..count)
        .map(|_| Proposition::from_bits(rng.gen::<u64>() & full))
        .collect()
}

/// Universe of `n` worlds: the first `n` valuations of just enough atoms.
pub fn small_universe(n: usize) -> Arc<Universe> {
    let k = (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize;
    let full = Universe::all_valuations(atom_names(k)).expect("small universe");
    Arc::new(
        Universe::new(full.atoms().to_vec(), full.worlds()[..n].to_vec())
            .expect("prefix of valuations"),
    )
}

// Weight vectors with denominators at most 4, used for the non-uniform
// variant of a rank of the given size.
fn skewed_grid(size: usize) -> Option<Vec<Weight>> {
    match size {
        2 => Some(vec![ratio(1, 4), ratio(3, 4)]),
        3 => Some(vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]),
        _ => None,
    }
}

/// Every rank structure over `n` worlds: each world is assigned a rank or
/// left non-entertainable, with occupied ranks gap-free from 0. Each
/// structure yields a uniform-weight state and, when some rank has 2 or 3
/// worlds, a second state with skewed weights from a grid of denominators
/// at most 4. The abnormal state is included.
pub fn enumerate_states(n: usize) -> Vec<EpistemicState> {
    assert!((1..=6).contains(&n), "enumerate_states({n})");
    let universe = small_universe(n);
    let mut out = Vec::new();
    // label 0 = non-entertainable, label j = rank j-1
    let mut labels = vec![0usize; n];
    loop {
        let used = labels.iter().copied().max().unwrap_or(0);
        let gap_free = (1..=used).all(|j| labels.contains(&j));
        if gap_free {
            let layers: Vec<Vec<usize>> = (1..=used)
                .map(|j| (0..n).filter(|&w| labels[w] == j).collect())
                .collect();
            out.extend(states_for_layers(&universe, &layers));
        }
        // odometer over (n+1)^n label vectors
        let mut i = 0;
        while i < n && labels[i] == n {
            labels[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        labels[i] += 1;
    }
    out
}

fn states_for_layers(universe: &Arc<Universe>, layers: &[Vec<usize>]) -> Vec<EpistemicState> {
    if layers.is_empty() {
        return vec![abnormal_state(universe.clone())];
    }
    let uniform = layers
        .iter()
        .map(|l| l.iter().map(|&w| (w, ratio(1, l.len() as i64))).collect())
        .collect();
    let mut out =
        vec![EpistemicState::from_indexed(universe.clone(), uniform).expect("uniform ranks")];
    if layers.iter().any(|l| skewed_grid(l.len()).is_some()) {
        let skewed = layers
            .iter()
            .map(|l| match skewed_grid(l.len()) {
                Some(grid) => l.iter().copied().zip(grid).collect(),
                None => l.iter().map(|&w| (w, ratio(1, l.len() as i64))).collect(),
            })
            .collect();
        out.push(EpistemicState::from_indexed(universe.clone(), skewed).expect("grid ranks"));
    }
    out
}

/// Number of ordered set partitions of `k` labelled items (Fubini numbers),
/// used to cross-check the enumeration size.
pub fn ordered_partitions(k: usize) -> u64 {
    let mut fubini = vec![1u64];
    for m in 1..=k {
        let next = (1..=m).map(|j| binomial(m, j) * fubini[m - j]).sum();
        fubini.push(next);
    }
    fubini[k]
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}
