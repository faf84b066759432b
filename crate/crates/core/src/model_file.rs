//! Line-oriented model files.
//!
//! ```text
//! atoms: O S J
//! world w0: O=1 S=0 J=1
//! rank 0: w0=1
//! # comment
//! ```
//!
//! Ranks appear in order from 0 without gaps; worlds in no rank are
//! non-entertainable; no rank lines at all means the abnormal state.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::{Atom, Universe, World};
use crate::model::{abnormal_state, build_state, parse_weight, EpistemicState, Weight};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::ModelFile {
        line,
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<EpistemicState> {
    let mut atoms: Option<Vec<Atom>> = None;
    let mut worlds: Vec<World> = Vec::new();
    let mut ranks: Vec<Vec<(String, Weight)>> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| err(line_no, "expected `atoms:`, `world <id>:` or `rank <n>:`"))?;
        let mut head_words = head.split_whitespace();
        match (head_words.next(), head_words.next(), head_words.next()) {
            (Some("atoms"), None, _) => {
                if atoms.is_some() {
                    return Err(err(line_no, "duplicate `atoms:` line"));
                }
                let list = body
                    .split_whitespace()
                    .map(|a| Atom::new(a).map_err(|e| err(line_no, e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                atoms = Some(list);
            }
            (Some("world"), Some(id), None) => {
                let declared = atoms
                    .as_ref()
                    .ok_or_else(|| err(line_no, "world declared before `atoms:`"))?;
                let mut valuation = Vec::new();
                for item in body.split_whitespace() {
                    let (name, value) = item.split_once('=').ok_or_else(|| {
                        err(line_no, format!("expected `atom=0|1`, found `{item}`"))
                    })?;
                    let atom = Atom::new(name).map_err(|e| err(line_no, e.to_string()))?;
                    if !declared.contains(&atom) {
                        return Err(err(line_no, format!("unknown atom `{name}`")));
                    }
                    let value = match value {
                        "1" => true,
                        "0" => false,
                        _ => {
                            return Err(err(
                                line_no,
                                format!("truth value must be 0 or 1, found `{value}`"),
                            ))
                        }
                    };
                    if valuation.iter().any(|(a, _)| *a == atom) {
                        return Err(err(line_no, format!("atom `{name}` assigned twice")));
                    }
                    valuation.push((atom, value));
                }
                worlds.push(World::new(id, valuation));
            }
            (Some("rank"), Some(index), None) => {
                let index: usize = index
                    .parse()
                    .map_err(|_| err(line_no, format!("invalid rank index `{index}`")))?;
                if index != ranks.len() {
                    return Err(err(
                        line_no,
                        format!("rank {index} out of order, expected rank {}", ranks.len()),
                    ));
                }
                let mut rank = Vec::new();
                for item in body.split_whitespace() {
                    let (id, w) = item.split_once('=').ok_or_else(|| {
                        err(line_no, format!("expected `world=weight`, found `{item}`"))
                    })?;
                    let w = parse_weight(w)
                        .ok_or_else(|| err(line_no, format!("invalid weight `{w}`")))?;
                    rank.push((id.to_owned(), w));
                }
                ranks.push(rank);
            }
            _ => return Err(err(line_no, format!("unrecognized line `{line}`"))),
        }
    }

    let atoms = atoms.ok_or_else(|| err(0, "missing `atoms:` line"))?;
    let universe = Arc::new(Universe::new(atoms, worlds)?);
    if universe.is_empty() {
        return Err(Error::EmptyUniverse);
    }
    if ranks.is_empty() {
        return Ok(abnormal_state(universe));
    }
    build_state(universe, ranks)
}

/// Renders `state` in the model file format; [`parse`] reads it back to an
/// equal state.
pub fn render(state: &EpistemicState) -> String {
    let u = state.universe();
    let mut out = String::new();
    let names: Vec<&str> = u.atoms().iter().map(Atom::name).collect();
    writeln!(out, "atoms: {}", names.join(" ")).unwrap();
    for w in u.worlds() {
        write!(out, "world {}:", w.id).unwrap();
        for a in u.atoms() {
            write!(out, " {}={}", a, u8::from(w.valuation[a])).unwrap();
        }
        out.push('\n');
    }
    for (r, rank) in state.ranks().iter().enumerate() {
        write!(out, "rank {r}:").unwrap();
        for (i, w) in rank.weights() {
            write!(out, " {}={}", u.worlds()[*i].id, w).unwrap();
        }
        out.push('\n');
    }
    if state.is_abnormal() {
        out.push_str("# no ranks: abnormal state\n");
    } else {
        for i in (u.full() - state.entertainable_worlds()).iter() {
            writeln!(
                out,
                "# {} listed in no rank: non-entertainable",
                u.worlds()[i].id
            )
            .unwrap();
        }
    }
    out
}
