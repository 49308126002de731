//! Torsion semi-decision with re-checkable certificates.

use crate::algebra::is_reversible;
use crate::config::{step_moving_head, Configuration, HeadedConfig};
use crate::error::{Error, Result};
use crate::machine::{decode_pattern, vsub, Machine, Vect, ZERO};
use crate::symbolic::word_acts_trivially;

/// Limits of the non-torsion search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessBudget {
    /// Finitely supported candidates are written on `-window..=window`.
    pub window: i32,
    /// Steps simulated per candidate.
    pub steps: usize,
    /// Longest period of periodic candidates (d = 1).
    pub period_cap: usize,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget { window: 2, steps: 64, period_cap: 8 }
    }
}

/// `T^p(config) = config` translated by `v`, with `v != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub config: HeadedConfig,
    pub p: usize,
    pub v: Vect,
}

impl Certificate {
    /// Re-runs the certificate. Applying `word` left to right counts as one step.
    pub fn verify(&self, word: &[&Machine]) -> bool {
        if self.v == ZERO || self.p == 0 {
            return false;
        }
        let mut c = self.config.clone();
        for _ in 0..self.p {
            for t in word {
                c = step_moving_head(t, &c);
            }
        }
        c == self.config.translate(self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionVerdict {
    Torsion(u64),
    NonTorsion(Certificate),
    Unknown { max_order: u64, candidates: usize, steps: usize },
}

impl TorsionVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            TorsionVerdict::Torsion(_) => "torsion",
            TorsionVerdict::NonTorsion(_) => "non-torsion",
            TorsionVerdict::Unknown { .. } => "unknown",
        }
    }
}

/// Smallest `o <= max_order` with `word^o` trivial.
pub fn word_order(word: &[&Machine], max_order: u64) -> Option<u64> {
    let mut w: Vec<&Machine> = vec![];
    for o in 1..=max_order {
        w.extend_from_slice(word);
        if word_acts_trivially(&w) {
            return Some(o);
        }
    }
    None
}

/// Candidate configurations for the translation search.
fn candidates(word: &[&Machine], budget: &WitnessBudget) -> Vec<HeadedConfig> {
    let p = word[0].params();
    let n = p.n as usize;
    let mut cfgs = vec![];
    for bg in 0..p.n as u16 {
        for q in 1..=p.k {
            cfgs.push(HeadedConfig::new(Configuration::uniform(bg), ZERO, q));
        }
    }
    if p.d == 1 {
        for len in 1..=budget.period_cap {
            let Some(count) = n.checked_pow(len as u32).filter(|&c| c <= 1 << 16) else { break };
            let mut w = vec![0; len];
            for i in 0..count {
                decode_pattern(i, p.n, len, &mut w);
                if let Ok(x) = Configuration::periodic(&w) {
                    // only primitive words; rotations give translates of one orbit
                    if matches!(&x, Configuration::Periodic1D { word, .. } if word.len() == len) {
                        for q in 1..=p.k {
                            cfgs.push(HeadedConfig::new(x.clone(), ZERO, q));
                        }
                    }
                }
            }
        }
    }
    let cells: Vec<Vect> = if p.d == 1 {
        (-budget.window..=budget.window).map(|i| [i, 0]).collect()
    } else {
        let w = budget.window;
        (-w..=w).flat_map(|i| (-w..=w).map(move |j| [i, j])).collect()
    };
    for bg in 0..p.n as u16 {
        let Some(count) = n.checked_pow(cells.len() as u32).filter(|&c| c <= 1 << 14) else { break };
        let mut w = vec![0; cells.len()];
        for i in 0..count {
            decode_pattern(i, p.n, cells.len(), &mut w);
            let x = Configuration::finite(bg, cells.iter().copied().zip(w.iter().copied()));
            for q in 1..=p.k {
                cfgs.push(HeadedConfig::new(x.clone(), ZERO, q));
            }
        }
    }
    cfgs
}

/// Searches `seeds` for a translation certificate of the word (applied left to right).
pub fn find_certificate(word: &[&Machine], seeds: &[HeadedConfig], steps: usize) -> Option<Certificate> {
    for c0 in seeds {
        let Some(h0) = c0.head else { continue };
        let mut c = c0.clone();
        for p in 1..=steps {
            for t in word {
                c = step_moving_head(t, &c);
            }
            let h = c.head.unwrap();
            let v = vsub(h.pos, h0.pos);
            if v != ZERO && h.state == h0.state && c == c0.translate(v) {
                let cert = Certificate { config: c0.clone(), p, v };
                return cert.verify(word).then_some(cert);
            }
        }
    }
    None
}

pub fn torsion_test(t: &Machine, max_order: u64, budget: &WitnessBudget) -> Result<TorsionVerdict> {
    torsion_test_word(&[t], max_order, budget, &[])
}

/// As [`torsion_test`] for the product of `word` (applied left to right), with extra seed
/// configurations tried before the generic candidates.
pub fn torsion_test_word(
    word: &[&Machine],
    max_order: u64,
    budget: &WitnessBudget,
    seeds: &[HeadedConfig],
) -> Result<TorsionVerdict> {
    let Some(first) = word.first() else {
        return Ok(TorsionVerdict::Torsion(1));
    };
    for t in word {
        first.params().check_same(&t.params())?;
        if !is_reversible(t) {
            return Err(Error::NotReversible);
        }
    }
    if let Some(o) = word_order(word, max_order) {
        return Ok(TorsionVerdict::Torsion(o));
    }
    if let Some(c) = find_certificate(word, seeds, budget.steps) {
        return Ok(TorsionVerdict::NonTorsion(c));
    }
    let cands = candidates(word, budget);
    if let Some(c) = find_certificate(word, &cands, budget.steps) {
        return Ok(TorsionVerdict::NonTorsion(c));
    }
    Ok(TorsionVerdict::Unknown { max_order, candidates: cands.len() + seeds.len(), steps: budget.steps })
}
