//! Tape configurations and the two application semantics.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::machine::{vadd, vneg, vsub, Machine, Sym, Vect};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Configuration {
    /// All cells equal `background` except the listed ones.
    FinitelySupported { background: Sym, cells: BTreeMap<Vect, Sym> },
    /// `x_i = word[(i - offset) mod |word|]`, `word` primitive and least among its
    /// rotations, `0 <= offset < |word|`.
    Periodic1D { word: Vec<Sym>, offset: i64 },
}

impl Default for Configuration {
    fn default() -> Self {
        Configuration::uniform(0)
    }
}

impl Configuration {
    pub fn uniform(background: Sym) -> Self {
        Configuration::FinitelySupported { background, cells: BTreeMap::new() }
    }

    pub fn finite(background: Sym, cells: impl IntoIterator<Item = (Vect, Sym)>) -> Self {
        let cells = cells.into_iter().filter(|&(_, s)| s != background).collect();
        Configuration::FinitelySupported { background, cells }
    }

    /// A 1D word written at `start..`, rest `background`.
    pub fn from_word(background: Sym, start: i32, w: &[Sym]) -> Self {
        Configuration::finite(background, w.iter().enumerate().map(|(i, &s)| ([start + i as i32, 0], s)))
    }

    /// The periodic configuration with `x_i = word[i mod |word|]`.
    pub fn periodic(word: &[Sym]) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Invalid("empty periodic word".into()));
        }
        Ok(Self::canonical_periodic(word.to_vec(), 0))
    }

    fn canonical_periodic(word: Vec<Sym>, offset: i64) -> Self {
        let p = word.len();
        let root_len = (1..=p).find(|&l| p % l == 0 && (l..p).all(|i| word[i] == word[i - l])).unwrap();
        let root = &word[..root_len];
        let best = (0..root_len)
            .min_by(|&a, &b| {
                let ra = root[a..].iter().chain(root[..a].iter());
                let rb = root[b..].iter().chain(root[..b].iter());
                ra.cmp(rb)
            })
            .unwrap();
        let rotated: Vec<Sym> = root[best..].iter().chain(root[..best].iter()).copied().collect();
        // root[i] = rotated[(i - best) mod len]
        let off = (offset + best as i64).rem_euclid(root_len as i64);
        Configuration::Periodic1D { word: rotated, offset: off }
    }

    pub fn get(&self, v: Vect) -> Sym {
        match self {
            Configuration::FinitelySupported { background, cells } => *cells.get(&v).unwrap_or(background),
            Configuration::Periodic1D { word, offset } => {
                let p = word.len() as i64;
                word[(v[0] as i64 - offset).rem_euclid(p) as usize]
            }
        }
    }

    /// Writes `s` at `v`. On periodic tapes every cell congruent to `v` is written.
    pub fn set(&mut self, v: Vect, s: Sym) {
        match self {
            Configuration::FinitelySupported { background, cells } => {
                if s == *background {
                    cells.remove(&v);
                } else {
                    cells.insert(v, s);
                }
            }
            Configuration::Periodic1D { word, offset } => {
                let p = word.len() as i64;
                let i = (v[0] as i64 - *offset).rem_euclid(p) as usize;
                if word[i] != s {
                    let mut w = word.clone();
                    w[i] = s;
                    *self = Self::canonical_periodic(w, *offset);
                }
            }
        }
    }

    /// `σ^v`: the value at `u` moves to `u + v`.
    pub fn translate(&self, v: Vect) -> Self {
        match self {
            Configuration::FinitelySupported { background, cells } => Configuration::FinitelySupported {
                background: *background,
                cells: cells.iter().map(|(&c, &s)| (vadd(c, v), s)).collect(),
            },
            Configuration::Periodic1D { word, offset } => Configuration::Periodic1D {
                word: word.clone(),
                offset: (offset + v[0] as i64).rem_euclid(word.len() as i64),
            },
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Configuration::Periodic1D { .. })
    }

    /// Cells differing from the background (empty for periodic tapes).
    pub fn support(&self) -> Vec<Vect> {
        match self {
            Configuration::FinitelySupported { cells, .. } => cells.keys().copied().collect(),
            Configuration::Periodic1D { .. } => vec![],
        }
    }

    /// Reads the 1D segment `lo..hi`.
    pub fn segment(&self, lo: i32, hi: i32) -> Vec<Sym> {
        (lo..hi).map(|i| self.get([i, 0])).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Head {
    pub pos: Vect,
    pub state: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeadedConfig {
    pub config: Configuration,
    pub head: Option<Head>,
}

impl HeadedConfig {
    pub fn new(config: Configuration, pos: Vect, state: u32) -> Self {
        HeadedConfig { config, head: Some(Head { pos, state }) }
    }

    pub fn headless(config: Configuration) -> Self {
        HeadedConfig { config, head: None }
    }

    pub fn translate(&self, v: Vect) -> Self {
        HeadedConfig {
            config: self.config.translate(v),
            head: self.head.map(|h| Head { pos: vadd(h.pos, v), state: h.state }),
        }
    }
}

/// Applies one step in the moving-head model. Headless configurations are fixed.
pub fn step_moving_head(t: &Machine, c: &HeadedConfig) -> HeadedConfig {
    let Some(h) = c.head else { return c.clone() };
    let row = t.row(t.lookup(h.state, |o| c.config.get(vadd(h.pos, o))));
    let mut config = c.config.clone();
    for (&o, &s) in t.f_out().iter().zip(row.write) {
        config.set(vadd(h.pos, o), s);
    }
    HeadedConfig { config, head: Some(Head { pos: vadd(h.pos, row.mv), state: row.state }) }
}

/// Applies one step in the moving-tape model: the head stays at the origin.
pub fn step_moving_tape(t: &Machine, tape: &Configuration, state: u32) -> (Configuration, u32) {
    let out = step_moving_head(t, &HeadedConfig::new(tape.clone(), [0, 0], state));
    let h = out.head.unwrap();
    (out.config.translate(vneg(h.pos)), h.state)
}

/// Applies a sequence of machines left to right.
pub fn run_word(word: &[&Machine], c: &HeadedConfig) -> HeadedConfig {
    word.iter().fold(c.clone(), |acc, t| step_moving_head(t, &acc))
}

/// Head displacement of a single step, or `None` for headless inputs.
pub fn displacement(t: &Machine, c: &HeadedConfig) -> Option<Vect> {
    let before = c.head?.pos;
    Some(vsub(step_moving_head(t, c).head?.pos, before))
}
