//! Finiteness of groups generated by one-dimensional tape-preserving machines.
//!
//! A closure search and a search for a traversable word `u` with `I(u) = I(uu)` run
//! side by side; the first to succeed decides.

use crate::algebra::{invert, is_reversible, ClosureSearch};
use crate::error::{Error, Result};
use crate::machine::{decode_pattern, encode_pattern, Machine, Sym};
use crate::zoo::recode_with_radius;

/// Entering or leaving a word: `true` is rightwards (in at the left end, out at the right end).
pub type Side = (bool, u32);

fn slot(k: u32, (right, q): Side) -> usize {
    right as usize * k as usize + q as usize - 1
}

/// `exits[slot(entry)]` is a bit set of exit slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraversalProfile {
    pub k: u32,
    exits: Vec<u64>,
}

impl TraversalProfile {
    /// Profile of the empty word: every head passes straight through.
    pub fn unit(k: u32) -> Self {
        TraversalProfile { k, exits: (0..2 * k as usize).map(|i| 1 << i).collect() }
    }

    pub fn exits(&self, entry: Side) -> Vec<Side> {
        let bits = self.exits[slot(self.k, entry)];
        (0..2 * self.k as usize)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| (i >= self.k as usize, (i % self.k as usize) as u32 + 1))
            .collect()
    }

    pub fn contains(&self, entry: Side, exit: Side) -> bool {
        self.exits[slot(self.k, entry)] >> slot(self.k, exit) & 1 == 1
    }

    /// Some head entering on one side can be carried out of the other.
    pub fn is_traversable(&self) -> bool {
        let k = self.k as usize;
        let left_half = (1u64 << k) - 1;
        (0..k).any(|q| self.exits[k + q] >> k != 0 || self.exits[q] & left_half != 0)
    }

    /// Profile of `uv` from those of `u` (self) and `v`.
    pub fn then(&self, v: &TraversalProfile) -> TraversalProfile {
        let k = self.k as usize;
        let mut exits = vec![0u64; 2 * k];
        for (e, out) in exits.iter_mut().enumerate() {
            // visited[0] for entries into u, visited[1] for entries into v
            let mut visited = [0u64; 2];
            let start = if e >= k { (0usize, e) } else { (1usize, e) };
            let mut work = vec![start];
            visited[start.0] |= 1 << start.1;
            while let Some((side, s)) = work.pop() {
                let bits = if side == 0 { self.exits[s] } else { v.exits[s] };
                for x in 0..2 * k {
                    if bits >> x & 1 == 0 {
                        continue;
                    }
                    let rightwards = x >= k;
                    let next = match (side, rightwards) {
                        (0, false) | (1, true) => {
                            *out |= 1 << x;
                            continue;
                        }
                        (0, true) => (1, x),
                        _ => (0, x),
                    };
                    if visited[next.0] >> next.1 & 1 == 0 {
                        visited[next.0] |= 1 << next.1;
                        work.push(next);
                    }
                }
            }
        }
        TraversalProfile { k: self.k, exits }
    }
}

fn check_local(gens: &[Machine]) -> Result<()> {
    for g in gens {
        if g.params().d != 1 || !g.f_out().is_empty() {
            return Err(Error::NotRfa);
        }
        if g.in_radius() > 0 || g.move_radius() > 1 {
            return Err(Error::Invalid("generators must read only the head cell and move at most one step".into()));
        }
    }
    if gens.first().map_or(true, |g| 2 * g.params().k > 64) {
        return Err(Error::Invalid("profiles need 1 <= k <= 32".into()));
    }
    Ok(())
}

/// Profile of a single letter under `letters` (generators and inverses).
fn letter_profile(letters: &[Machine], a: Sym) -> TraversalProfile {
    let k = letters[0].params().k as usize;
    let mut exits = vec![0u64; 2 * k];
    for q0 in 0..k {
        let mut inside = 1u64 << q0;
        let mut work = vec![q0];
        let mut out = 0u64;
        while let Some(q) = work.pop() {
            for t in letters {
                let row = t.row(t.lookup(q as u32 + 1, |_| a));
                let s = row.state as usize - 1;
                match row.mv[0] {
                    0 => {
                        if inside >> s & 1 == 0 {
                            inside |= 1 << s;
                            work.push(s);
                        }
                    }
                    m => out |= 1 << ((m > 0) as usize * k + s),
                }
            }
        }
        exits[q0] = out;
        exits[k + q0] = out;
    }
    TraversalProfile { k: k as u32, exits }
}

fn with_inverses(gens: &[Machine]) -> Result<Vec<Machine>> {
    let mut out = gens.to_vec();
    for g in gens {
        out.push(invert(g)?);
    }
    Ok(out)
}

/// Exact profile of `u` under `letters`, which should already be closed under inverses
/// and read only the head cell, moving at most one step.
pub fn traversal_profile(letters: &[Machine], u: &[Sym]) -> Result<TraversalProfile> {
    check_local(letters)?;
    let k = letters[0].params().k;
    Ok(u.iter().fold(TraversalProfile::unit(k), |acc, &a| acc.then(&letter_profile(letters, a))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FinitenessBudget {
    /// Largest closure explored.
    pub elements: usize,
    /// Longest period (in tape cells) of candidate words.
    pub word_len: usize,
}

impl Default for FinitenessBudget {
    fn default() -> Self {
        FinitenessBudget { elements: 10_000, word_len: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinitenessVerdict {
    Finite(usize),
    /// The period of a tape on which the heads can be carried arbitrarily far.
    Infinite(Vec<Sym>),
    Unknown { elements: usize, word_len: usize },
}

/// Recoded generators (block length `p`, context `r`) for the word search.
struct Local {
    letters: Vec<Machine>,
    p: usize,
    r: usize,
    n: u32,
    cache: std::collections::HashMap<Sym, TraversalProfile>,
}

impl Local {
    fn new(gens: &[Machine]) -> Result<Self> {
        let n = gens[0].params().n;
        // inverses are taken before recoding: the recoded machines are not reversible on
        // block sequences that do not come from a tape
        let all = with_inverses(gens)?;
        if all.iter().all(|g| g.in_radius() <= 0 && g.move_radius() <= 1) {
            return Ok(Local { letters: all, p: 1, r: 0, n, cache: Default::default() });
        }
        let r = all.iter().map(|g| g.in_radius().max(g.move_radius()).max(0)).max().unwrap() as u32;
        let p = 2 * r + 1;
        let letters: Vec<Machine> = all.iter().map(|g| recode_with_radius(g, p, r).map(|x| x.0)).collect::<Result<_>>()?;
        Ok(Local { letters, p: p as usize, r: r as usize, n, cache: Default::default() })
    }

    /// Profile of the blocks of the periodic tape with period `s`.
    fn profile(&mut self, s: &[Sym]) -> TraversalProfile {
        let k = self.letters[0].params().k;
        let blocks = s.len() / self.p;
        let len = self.p + 2 * self.r;
        let mut acc = TraversalProfile::unit(k);
        for j in 0..blocks as i64 {
            let start = j * self.p as i64 - self.r as i64;
            let cells: Vec<Sym> = (0..len as i64).map(|i| s[(start + i).rem_euclid(s.len() as i64) as usize]).collect();
            let b = encode_pattern(&cells, self.n) as Sym;
            let letters = &self.letters;
            let pr = self.cache.entry(b).or_insert_with(|| letter_profile(letters, b));
            acc = acc.then(pr);
        }
        acc
    }
}

pub fn rfa_finiteness(gens: &[Machine], budget: &FinitenessBudget) -> Result<FinitenessVerdict> {
    let Some(first) = gens.first() else {
        return Ok(FinitenessVerdict::Finite(1));
    };
    for g in gens {
        first.params().check_same(&g.params())?;
        if g.params().d != 1 || !g.f_out().is_empty() {
            return Err(Error::NotRfa);
        }
        if !is_reversible(g) {
            return Err(Error::NotReversible);
        }
    }
    let mut closure = Some(ClosureSearch::new(gens)?);
    let mut local = Local::new(gens)?;
    let mut len = local.p;
    let mut buf = vec![];
    loop {
        if let Some(c) = closure.as_mut() {
            match c.step_level(budget.elements)? {
                Some(true) => return Ok(FinitenessVerdict::Finite(c.len())),
                Some(false) => {}
                None => closure = None,
            }
        }
        if len <= budget.word_len {
            let count = (local.n as usize).checked_pow(len as u32).unwrap_or(usize::MAX);
            buf.resize(len, 0);
            for i in 0..count {
                decode_pattern(i, local.n, len, &mut buf);
                let pr = local.profile(&buf);
                if pr.is_traversable() && pr.then(&pr) == pr {
                    return Ok(FinitenessVerdict::Infinite(buf));
                }
            }
            len += local.p;
        } else if closure.is_none() {
            return Ok(FinitenessVerdict::Unknown { elements: budget.elements, word_len: budget.word_len });
        }
    }
}
