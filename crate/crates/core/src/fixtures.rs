//! Bundled example states.

use std::sync::Arc;

use crate::logic::{Atom, Universe, World};
use crate::model::{ratio, EpistemicState, Weight};
use crate::model_file;

/// Default truncation depth of the coin fixture.
pub const DEFAULT_COIN_DEPTH: u32 = 16;

/// Plausibility ranking of the Kennedy assassination: O = Oswald alone shot
/// Kennedy, S = someone else did, J = Johnson became president. The
/// rank-3 world, where nobody shot Kennedy, is non-entertainable.
pub const KENNEDY_MODEL: &str = "\
atoms: O S J
world w0: O=1 S=0 J=1
world w1: O=0 S=1 J=1
world w2: O=1 S=1 J=1
world w3: O=0 S=0 J=0
rank 0: w0=1
rank 1: w1=1
rank 2: w2=1
# w3 listed in no rank: non-entertainable
";

pub fn kennedy() -> EpistemicState {
    model_file::parse(KENNEDY_MODEL).expect("bundled fixture is valid")
}

/// A fair coin flipped until the first head, truncated to `depth`: worlds
/// `x0..=x{depth}` count the tails before the head, `omega` is the
/// never-ending run. Rank 0 gives `xn` weight proportional to 2^-(n+1);
/// `omega` alone forms rank 1.
///
/// Atom `finite` is false only at `omega`; atoms `b0, b1, ...` spell the
/// tail count in binary, least significant bit first.
///
/// Panics if `depth` exceeds 62, the largest depth a universe can hold.
pub fn coin(depth: u32) -> EpistemicState {
    assert!(depth <= 62, "coin depth {depth} exceeds 62");
    let bits = (u32::BITS - depth.leading_zeros()).max(1);
    let mut atoms = vec![Atom::new("finite").expect("valid")];
    atoms.extend((0..bits).map(|b| Atom::new(format!("b{b}")).expect("valid")));

    let mut worlds: Vec<World> = (0..=depth)
        .map(|n| {
            World::new(
                format!("x{n}"),
                std::iter::once((atoms[0].clone(), true))
                    .chain((0..bits).map(|b| (atoms[1 + b as usize].clone(), n >> b & 1 == 1))),
            )
        })
        .collect();
    worlds.push(World::new(
        "omega",
        atoms.iter().map(|a| (a.clone(), false)),
    ));
    let universe = Arc::new(Universe::new(atoms, worlds).expect("valid coin universe"));

    let den = Weight::from_integer((num_bigint::BigInt::from(1u8) << (depth + 1)) - 1u8);
    let finite = (0..=depth)
        .map(|n| {
            let num = Weight::from_integer(num_bigint::BigInt::from(1u8) << (depth - n));
            (n as usize, num / &den)
        })
        .collect();
    let omega = vec![(depth as usize + 1, ratio(1, 1))];
    EpistemicState::from_indexed(universe, vec![finite, omega]).expect("valid coin state")
}
