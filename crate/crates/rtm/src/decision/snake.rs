//! The two-state machine that walks along snakes of directed Wang tiles.
//!
//! Symbol `i < |tiles|` is tile `i`; symbol `|tiles|` is the blank `ε`. State 1
//! follows `right` arrows, state 2 follows `left` arrows.

use serde::{Deserialize, Serialize};

use crate::config::{Configuration, HeadedConfig};
use crate::error::{Error, Result};
use crate::machine::{Machine, Params, Vect, ZERO};

use super::torsion::{torsion_test_word, TorsionVerdict, WitnessBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    N,
    E,
    S,
    W,
}

impl Dir {
    pub fn vector(self) -> Vect {
        match self {
            Dir::N => [0, 1],
            Dir::E => [1, 0],
            Dir::S => [0, -1],
            Dir::W => [-1, 0],
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::E => Dir::W,
            Dir::S => Dir::N,
            Dir::W => Dir::E,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tile {
    pub n: u32,
    pub e: u32,
    pub s: u32,
    pub w: u32,
    pub left: Dir,
    pub right: Dir,
}

impl Tile {
    fn edge(&self, d: Dir) -> u32 {
        match d {
            Dir::N => self.n,
            Dir::E => self.e,
            Dir::S => self.s,
            Dir::W => self.w,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakeInstance {
    pub tiles: Vec<Tile>,
}

impl SnakeInstance {
    pub fn validate(&self) -> Result<()> {
        match self.tiles.iter().position(|t| t.left == t.right) {
            Some(i) => Err(Error::Invalid(format!("tile {i} has left = right"))),
            None => Ok(()),
        }
    }

    pub fn params(&self) -> Result<Params> {
        Params::new(2, self.tiles.len() as u32 + 1, 2)
    }
}

/// State 1 follows `right`; with `swapped` it follows `left` instead.
fn build(inst: &SnakeInstance, swapped: bool) -> Result<Machine> {
    inst.validate()?;
    let p = inst.params()?;
    let eps = inst.tiles.len();
    let dirs = [Dir::E, Dir::N, Dir::S, Dir::W];
    let mut window: Vec<Vect> = dirs.iter().map(|d| d.vector()).chain([ZERO]).collect();
    window.sort();
    let at = |v: Vect| window.binary_search(&v).unwrap();
    let tiles = &inst.tiles;
    Machine::from_fn(p, &window, |pat, q| {
        let here = pat[at(ZERO)] as usize;
        if here == eps {
            return (pat.to_vec(), q, ZERO);
        }
        let t = tiles[here];
        let follows_right = (q == 1) != swapped;
        let d = if follows_right { t.right } else { t.left };
        let there = pat[at(d.vector())] as usize;
        let matched = there != eps && {
            let u = tiles[there];
            let back = if follows_right { u.left } else { u.right };
            t.edge(d) == u.edge(d.opposite()) && back == d.opposite()
        };
        if matched {
            (pat.to_vec(), q, d.vector())
        } else {
            (pat.to_vec(), 3 - q, ZERO)
        }
    })
}

pub fn build_snake_machine(inst: &SnakeInstance) -> Result<Machine> {
    build(inst, false)
}

/// The same machine with the roles of the two states exchanged; the inverse of
/// [`build_snake_machine`].
pub fn build_snake_machine_swapped(inst: &SnakeInstance) -> Result<Machine> {
    build(inst, true)
}

/// Uniform tilings by each tile, in both states.
pub fn snake_seeds(inst: &SnakeInstance) -> Vec<HeadedConfig> {
    let mut out = vec![];
    for i in 0..inst.tiles.len() {
        for q in 1..=2 {
            out.push(HeadedConfig::new(Configuration::uniform(i as u16), ZERO, q));
        }
    }
    out
}

pub fn snake_probe(inst: &SnakeInstance, max_order: u64, budget: &WitnessBudget) -> Result<TorsionVerdict> {
    let t = build_snake_machine(inst)?;
    torsion_test_word(&[&t], max_order, budget, &snake_seeds(inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{invert, is_reversible};
    use crate::symbolic::word_acts_trivially;

    fn tile(e: u32, w: u32) -> Tile {
        Tile { n: 0, e, s: 0, w, left: Dir::W, right: Dir::E }
    }

    #[test]
    fn reversible_with_swapped_inverse() {
        let inst = SnakeInstance { tiles: vec![tile(0, 0), tile(1, 0), Tile { n: 1, e: 0, s: 1, w: 1, left: Dir::S, right: Dir::N }] };
        let t = build_snake_machine(&inst).unwrap();
        let u = build_snake_machine_swapped(&inst).unwrap();
        assert!(is_reversible(&t));
        assert!(word_acts_trivially(&[&t, &u]) && word_acts_trivially(&[&u, &t]));
        // the synthesized inverse reads a wider window, so compare by action
        let one = SnakeInstance { tiles: vec![tile(0, 0)] };
        let (t1, u1) = (build_snake_machine(&one).unwrap(), build_snake_machine_swapped(&one).unwrap());
        let inv = invert(&t1).unwrap();
        assert!(word_acts_trivially(&[&t1, &inv]) && word_acts_trivially(&[&inv, &t1]));
        assert!(word_acts_trivially(&[&t1, &u1]));
    }

    #[test]
    fn probes() {
        let b = WitnessBudget::default();
        match snake_probe(&SnakeInstance { tiles: vec![tile(0, 0)] }, 4, &b).unwrap() {
            TorsionVerdict::NonTorsion(c) => assert_eq!(c.v, [1, 0]),
            v => panic!("{v:?}"),
        }
        assert_eq!(snake_probe(&SnakeInstance { tiles: vec![tile(1, 0)] }, 8, &b).unwrap(), TorsionVerdict::Torsion(2));
        assert_eq!(snake_probe(&SnakeInstance::default(), 4, &b).unwrap(), TorsionVerdict::Torsion(1));
        let bad = SnakeInstance { tiles: vec![Tile { n: 0, e: 0, s: 0, w: 0, left: Dir::E, right: Dir::E }] };
        assert!(build_snake_machine(&bad).is_err());
    }
}
