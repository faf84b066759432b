//! Propositional language over named atoms, worlds, and propositions as
//! sets of worlds.

mod parser;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use crate::error::{Error, Result};

pub use parser::parse_formula;

/// Largest universe a [`Proposition`] bitset can address.
pub const MAX_WORLDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    /// Letters, digits and underscores, starting with a letter. `T` and `F`
    /// are reserved for the constants.
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            && name != "T"
            && name != "F";
        if valid {
            Ok(Atom(name))
        } else {
            Err(Error::InvalidAtomName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Result<Self> {
        Atom::new(name).map(Formula::Atom)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Atoms referenced by the formula, sorted and deduplicated.
    pub fn atoms(&self) -> BTreeSet<&Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a);
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Classical evaluation with atom values supplied by `lookup`.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<bool>
    where
        F: Fn(&Atom) -> Option<bool>,
    {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => lookup(a).ok_or_else(|| Error::UnknownAtom(a.name().to_owned()))?,
            Formula::Not(f) => !f.eval_with(lookup)?,
            Formula::And(a, b) => a.eval_with(lookup)? & b.eval_with(lookup)?,
            Formula::Or(a, b) => a.eval_with(lookup)? | b.eval_with(lookup)?,
            Formula::Implies(a, b) => !a.eval_with(lookup)? | b.eval_with(lookup)?,
            Formula::Iff(a, b) => a.eval_with(lookup)? == b.eval_with(lookup)?,
        })
    }
}

/// Fully parenthesized canonical text; `parse_formula` reads it back to an
/// equal tree.
pub fn format_formula(f: &Formula) -> String {
    f.to_string()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("T"),
            Formula::False => f.write_str("F"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => write!(f, "~{inner}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub id: String,
    pub valuation: BTreeMap<Atom, bool>,
}

impl World {
    pub fn new(id: impl Into<String>, valuation: impl IntoIterator<Item = (Atom, bool)>) -> Self {
        World {
            id: id.into(),
            valuation: valuation.into_iter().collect(),
        }
    }
}

pub fn eval_world(f: &Formula, w: &World) -> Result<bool> {
    f.eval_with(&|a| w.valuation.get(a).copied())
}

/// A set of worlds, stored as a bitset over the indices of a [`Universe`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Proposition(u64);

impl Proposition {
    pub const EMPTY: Proposition = Proposition(0);

    pub fn from_bits(bits: u64) -> Self {
        Proposition(bits)
    }

    pub fn singleton(index: usize) -> Self {
        Proposition(1 << index)
    }

    /// All worlds with index below `n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Proposition(u64::MAX)
        } else {
            Proposition((1u64 << n) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1 << index) != 0
    }

    pub fn is_subset(self, other: Proposition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Proposition) -> bool {
        self.0 & other.0 != 0
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    /// World indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Every subset of the first `n` worlds, in bit order. Only usable for
    /// small `n`.
    pub fn powerset(n: usize) -> impl Iterator<Item = Proposition> {
        assert!(n < 64, "powerset of {n} worlds");
        (0..1u64 << n).map(Proposition)
    }

    /// Every subset of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = Proposition> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(Proposition(cur))
        })
    }
}

impl BitAnd for Proposition {
    type Output = Proposition;
    fn bitand(self, rhs: Self) -> Self {
        Proposition(self.0 & rhs.0)
    }
}

impl BitOr for Proposition {
    type Output = Proposition;
    fn bitor(self, rhs: Self) -> Self {
        Proposition(self.0 | rhs.0)
    }
}

impl Sub for Proposition {
    type Output = Proposition;
    fn sub(self, rhs: Self) -> Self {
        Proposition(self.0 & !rhs.0)
    }
}

impl FromIterator<usize> for Proposition {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut p = Proposition::EMPTY;
        for i in iter {
            p.insert(i);
        }
        p
    }
}

/// Declared atoms plus the worlds of the space, each with a total valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    atoms: Vec<Atom>,
    worlds: Vec<World>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new(atoms: Vec<Atom>, worlds: Vec<World>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a) {
                return Err(Error::DuplicateAtom(a.name().to_owned()));
            }
        }
        if worlds.len() > MAX_WORLDS {
            return Err(Error::UniverseTooLarge {
                size: worlds.len(),
                bound: MAX_WORLDS,
            });
        }
        let mut index = HashMap::with_capacity(worlds.len());
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.id.clone(), i).is_some() {
                return Err(Error::DuplicateWorld(w.id.clone()));
            }
            for a in &atoms {
                if !w.valuation.contains_key(a) {
                    return Err(Error::IncompleteValuation {
                        world: w.id.clone(),
                        atom: a.name().to_owned(),
                    });
                }
            }
            if let Some(extra) = w.valuation.keys().find(|a| !seen.contains(a)) {
                return Err(Error::UnknownAtom(extra.name().to_owned()));
            }
        }
        Ok(Universe {
            atoms,
            worlds,
            index,
        })
    }

    /// One world per valuation of `atoms`, in binary counting order with the
    /// first atom as the most significant bit; ids are `v0`, `v1`, ...
    pub fn all_valuations(atoms: Vec<Atom>) -> Result<Self> {
        let k = atoms.len();
        if 1usize.checked_shl(k as u32).is_none_or(|n| n > MAX_WORLDS) {
            return Err(Error::UniverseTooLarge {
                size: 1usize.checked_shl(k as u32).unwrap_or(usize::MAX),
                bound: MAX_WORLDS,
            });
        }
        let worlds = (0..1usize << k)
            .map(|v| {
                World::new(
                    format!("v{v}"),
                    atoms
                        .iter()
                        .enumerate()
                        .map(|(j, a)| (a.clone(), v >> (k - 1 - j) & 1 == 1)),
                )
            })
            .collect();
        Universe::new(atoms, worlds)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn full(&self) -> Proposition {
        Proposition::full(self.worlds.len())
    }

    pub fn contains(&self, p: Proposition) -> bool {
        p.is_subset(self.full())
    }

    pub fn world_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn proposition<'a, I>(&self, ids: I) -> Result<Proposition>
    where
        I: IntoIterator<Item = &'a str>,
    {
        ids.into_iter()
            .map(|id| {
                self.world_index(id)
                    .ok_or_else(|| Error::UnknownWorld(id.to_owned()))
            })
            .collect()
    }

    pub fn ids(&self, p: Proposition) -> Vec<&str> {
        p.iter().map(|i| self.worlds[i].id.as_str()).collect()
    }

    /// `{w0, w1}` style rendering.
    pub fn describe(&self, p: Proposition) -> String {
        format!("{{{}}}", self.ids(p).join(", "))
    }

    fn check_declared(&self, f: &Formula) -> Result<()> {
        match f.atoms().into_iter().find(|a| !self.atoms.contains(a)) {
            Some(a) => Err(Error::UnknownAtom(a.name().to_owned())),
            None => Ok(()),
        }
    }
}

/// The set of worlds of `universe` at which `f` is true.
pub fn extension(f: &Formula, universe: &Universe) -> Result<Proposition> {
    universe.check_declared(f)?;
    let mut out = Proposition::EMPTY;
    for (i, w) in universe.worlds.iter().enumerate() {
        if eval_world(f, w)? {
            out.insert(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(names: &[&str]) -> Vec<Atom> {
        names.iter().map(|n| Atom::new(*n).unwrap()).collect()
    }

    fn world(id: &str, vals: &[(&str, bool)]) -> World {
        World::new(id, vals.iter().map(|(a, v)| (Atom::new(*a).unwrap(), *v)))
    }

    fn kennedy_universe() -> Universe {
        Universe::new(
            atoms(&["O", "S", "J"]),
            vec![
                world("w0", &[("O", true), ("S", false), ("J", true)]),
                world("w1", &[("O", false), ("S", true), ("J", true)]),
                world("w2", &[("O", true), ("S", true), ("J", true)]),
                world("w3", &[("O", false), ("S", false), ("J", false)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn atom_names() {
        assert!(Atom::new("x_1").is_ok());
        assert!(Atom::new("finite").is_ok());
        for bad in ["", "1x", "_a", "a-b", "T", "F"] {
            assert_eq!(Atom::new(bad), Err(Error::InvalidAtomName(bad.into())));
        }
    }

    #[test]
    fn eval_examples() {
        let w = world("w1", &[("O", false), ("S", true), ("J", true)]);
        assert!(eval_world(&parse_formula("~O & S").unwrap(), &w).unwrap());
        assert!(eval_world(&Formula::True, &w).unwrap());
        assert!(eval_world(&parse_formula("O <-> ~~O").unwrap(), &w).unwrap());
        assert_eq!(
            eval_world(&parse_formula("O & Q").unwrap(), &w),
            Err(Error::UnknownAtom("Q".into()))
        );
    }

    #[test]
    fn extension_examples() {
        let u = kennedy_universe();
        let ext = |s: &str| extension(&parse_formula(s).unwrap(), &u).unwrap();
        assert_eq!(ext("~O"), u.proposition(["w1", "w3"]).unwrap());
        assert_eq!(ext("F"), Proposition::EMPTY);
        assert_eq!(ext("S | O"), u.proposition(["w0", "w1", "w2"]).unwrap());
        assert_eq!(
            extension(&parse_formula("Z").unwrap(), &u),
            Err(Error::UnknownAtom("Z".into()))
        );
    }

    #[test]
    fn unknown_atom_reported_even_when_short_circuit_possible() {
        let u = kennedy_universe();
        let f = parse_formula("F & Z").unwrap();
        assert_eq!(extension(&f, &u), Err(Error::UnknownAtom("Z".into())));
    }

    #[test]
    fn universe_validation() {
        let a = atoms(&["p"]);
        assert_eq!(
            Universe::new(
                a.clone(),
                vec![world("x", &[("p", true)]), world("x", &[("p", false)])]
            ),
            Err(Error::DuplicateWorld("x".into()))
        );
        assert_eq!(
            Universe::new(a.clone(), vec![world("x", &[])]),
            Err(Error::IncompleteValuation {
                world: "x".into(),
                atom: "p".into()
            })
        );
        assert_eq!(
            Universe::new(atoms(&["p", "p"]), vec![]),
            Err(Error::DuplicateAtom("p".into()))
        );
        assert!(matches!(
            Universe::all_valuations(atoms(&["a", "b", "c", "d", "e", "f", "g"])),
            Err(Error::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn all_valuations_order() {
        let u = Universe::all_valuations(atoms(&["a", "b"])).unwrap();
        assert_eq!(u.len(), 4);
        let a = extension(&parse_formula("a").unwrap(), &u).unwrap();
        assert_eq!(u.ids(a), vec!["v2", "v3"]);
    }

    #[test]
    fn subsets_enumerates_everything() {
        let p = Proposition::from_bits(0b1011);
        let subs: Vec<_> = p.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset(p)));
        assert_eq!(Proposition::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn proposition_iter_and_full() {
        assert_eq!(Proposition::full(64).len(), 64);
        assert_eq!(
            Proposition::full(3).iter().collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        let p: Proposition = [1, 5].into_iter().collect();
        assert!(p.contains(5) && !p.contains(2));
    }
}
