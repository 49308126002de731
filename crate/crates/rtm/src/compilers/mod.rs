//! Compilation of machines into other machines and into cellular automata.

mod conveyor;
mod elementary;
mod permutation_model;

pub use conveyor::{
    conveyor_radius, decode_head, factorial_bound, flatten_zones, head_code, parse_zones, to_conveyor_ca,
    zone_configs, zone_order, CaTape1D, Cell, Zone, ZoneKind, LEFT, RIGHT,
};
pub use elementary::{simulate_classical_as_elementary, ElementarySimulation};
pub use permutation_model::{to_permutation_model, PmConfig};

use crate::error::{Error, Result};
use crate::machine::Machine;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaRule {
    /// Marks on `Σ × (ℤ/2)^Q` moved by a tape-preserving machine.
    PermutationModel(Machine),
    /// Zones wrapped into belts; `r` is the larger radius of the machine and its inverse.
    Conveyor { machine: Machine, r: u32 },
}

/// A cellular automaton over a product alphabet, given by the construction that defines it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularAutomaton {
    pub d: u8,
    pub factors: Vec<u32>,
    pub radius: u32,
    pub rule: CaRule,
}

impl CellularAutomaton {
    pub fn kind(&self) -> &'static str {
        match self.rule {
            CaRule::PermutationModel(_) => "permutation-model",
            CaRule::Conveyor { .. } => "conveyor",
        }
    }

    pub fn machine(&self) -> &Machine {
        match &self.rule {
            CaRule::PermutationModel(m) | CaRule::Conveyor { machine: m, .. } => m,
        }
    }

    pub fn alphabet_size(&self) -> u128 {
        self.factors.iter().map(|&f| f as u128).product()
    }

    pub fn apply_pm(&self, c: &PmConfig) -> Result<PmConfig> {
        match &self.rule {
            CaRule::PermutationModel(t) => Ok(permutation_model::apply_marks(t, c)),
            _ => Err(Error::Invalid(format!("{} automaton applied to a mark configuration", self.kind()))),
        }
    }

    pub fn apply_conveyor(&self, c: &CaTape1D) -> Result<CaTape1D> {
        match &self.rule {
            CaRule::Conveyor { machine, r } => conveyor::apply_conveyor(machine, *r, c),
            _ => Err(Error::Invalid(format!("{} automaton applied to a conveyor tape", self.kind()))),
        }
    }
}
