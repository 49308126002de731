//! The cellular automaton on `Σ × (ℤ/2)^Q` induced by a tape-preserving machine.
//!
//! The mark layer is a finite set of `(cell, state)` heads; sets add by symmetric
//! difference, so the automaton is linear over `ℤ/2` in that layer.

use std::collections::BTreeSet;

use crate::config::{step_moving_head, Configuration, HeadedConfig};
use crate::error::{Error, Result};
use crate::machine::{Machine, Vect};

use super::{CaRule, CellularAutomaton};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PmConfig {
    pub tape: Configuration,
    pub marks: BTreeSet<(Vect, u32)>,
}

impl PmConfig {
    pub fn new(tape: Configuration, marks: impl IntoIterator<Item = (Vect, u32)>) -> Self {
        let mut set = BTreeSet::new();
        for m in marks {
            if !set.insert(m) {
                set.remove(&m);
            }
        }
        PmConfig { tape, marks: set }
    }

    /// Sum in the mark layer; the tapes must agree.
    pub fn xor(&self, other: &PmConfig) -> Result<PmConfig> {
        if self.tape != other.tape {
            return Err(Error::Invalid("mark layers over different tapes".into()));
        }
        let marks = self.marks.symmetric_difference(&other.marks).copied().collect();
        Ok(PmConfig { tape: self.tape.clone(), marks })
    }
}

pub fn to_permutation_model(t: &Machine) -> Result<CellularAutomaton> {
    if !t.f_out().is_empty() {
        return Err(Error::NotRfa);
    }
    if !crate::algebra::is_reversible(t) {
        return Err(Error::NotReversible);
    }
    let p = t.params();
    let mut factors = vec![p.n];
    factors.extend(std::iter::repeat(2).take(p.k as usize));
    Ok(CellularAutomaton { d: p.d, factors, radius: t.radius().max(0) as u32, rule: CaRule::PermutationModel(t.clone()) })
}

/// Moves every mark as a head of `t` would move on `tape`.
pub(crate) fn apply_marks(t: &Machine, c: &PmConfig) -> PmConfig {
    let mut out = BTreeSet::new();
    for &(v, q) in &c.marks {
        let h = step_moving_head(t, &HeadedConfig::new(c.tape.clone(), v, q)).head.unwrap();
        if !out.insert((h.pos, h.state)) {
            out.remove(&(h.pos, h.state));
        }
    }
    PmConfig { tape: c.tape.clone(), marks: out }
}
