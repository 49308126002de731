//! JSON file formats for machines, configurations, snake instances and automata.

use serde::{Deserialize, Serialize};

use crate::compilers::{CaRule, CellularAutomaton};
use crate::config::{Configuration, Head, HeadedConfig};
use crate::decision::SnakeInstance;
use crate::error::{Error, Result};
use crate::machine::{normalize, vect_from_slice, vect_to_vec, LocalRule, Machine, Params, RuleEntry, Sym};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub read: Vec<Sym>,
    pub state: u32,
    pub write: Vec<Sym>,
    pub new_state: u32,
    #[serde(rename = "move")]
    pub mv: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    pub dim: u8,
    pub alphabet: u32,
    pub states: u32,
    pub f_in: Vec<Vec<i64>>,
    pub f_out: Vec<Vec<i64>>,
    pub rules: Vec<RuleFile>,
}

impl MachineFile {
    pub fn from_machine(t: &Machine) -> Self {
        let p = t.params();
        let rule = t.to_local_rule();
        let off = |v: &[crate::machine::Vect]| v.iter().map(|&x| vect_to_vec(p.d, x)).collect();
        MachineFile {
            dim: p.d,
            alphabet: p.n,
            states: p.k,
            f_in: off(&rule.f_in),
            f_out: off(&rule.f_out),
            rules: rule
                .entries
                .into_iter()
                .map(|e| RuleFile { read: e.read, state: e.state, write: e.write, new_state: e.new_state, mv: vect_to_vec(p.d, e.mv) })
                .collect(),
        }
    }

    pub fn to_machine(&self) -> Result<Machine> {
        let p = Params::new(self.dim, self.alphabet, self.states)?;
        let offs = |xs: &[Vec<i64>]| xs.iter().map(|x| vect_from_slice(p.d, x)).collect::<Result<Vec<_>>>();
        let mut entries = Vec::with_capacity(self.rules.len());
        for (i, r) in self.rules.iter().enumerate() {
            let mv = vect_from_slice(p.d, &r.mv).map_err(|e| Error::MalformedRule(format!("rules[{i}].move: {e}")))?;
            entries.push(RuleEntry { read: r.read.clone(), state: r.state, write: r.write.clone(), new_state: r.new_state, mv });
        }
        let rule = LocalRule { f_in: offs(&self.f_in)?, f_out: offs(&self.f_out)?, entries };
        normalize(&rule, p)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeadFile {
    pub pos: Vec<i64>,
    pub state: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigFile {
    Finite {
        background: Sym,
        cells: Vec<(Vec<i64>, Sym)>,
        head: Option<HeadFile>,
    },
    Periodic {
        periodic_word: Vec<Sym>,
        head: Option<HeadFile>,
    },
}

impl ConfigFile {
    pub fn from_config(d: u8, c: &HeadedConfig) -> Self {
        let head = c.head.map(|h| HeadFile { pos: vect_to_vec(d, h.pos), state: h.state });
        match &c.config {
            Configuration::FinitelySupported { background, cells } => ConfigFile::Finite {
                background: *background,
                cells: cells.iter().map(|(&v, &s)| (vect_to_vec(d, v), s)).collect(),
                head,
            },
            Configuration::Periodic1D { word, .. } => {
                ConfigFile::Periodic { periodic_word: c.config.segment(0, word.len() as i32), head }
            }
        }
    }

    pub fn to_config(&self, p: Params) -> Result<HeadedConfig> {
        let check = |s: Sym| {
            if (s as u32) < p.n {
                Ok(s)
            } else {
                Err(Error::Invalid(format!("symbol {s} outside alphabet of size {}", p.n)))
            }
        };
        let head_of = |h: &Option<HeadFile>| -> Result<Option<Head>> {
            match h {
                None => Ok(None),
                Some(h) if h.state >= 1 && h.state <= p.k => Ok(Some(Head { pos: vect_from_slice(p.d, &h.pos)?, state: h.state })),
                Some(h) => Err(Error::Invalid(format!("head state {} outside 1..={}", h.state, p.k))),
            }
        };
        match self {
            ConfigFile::Finite { background, cells, head } => {
                check(*background)?;
                let mut out = vec![];
                for (v, s) in cells {
                    out.push((vect_from_slice(p.d, v)?, check(*s)?));
                }
                Ok(HeadedConfig { config: Configuration::finite(*background, out), head: head_of(head)? })
            }
            ConfigFile::Periodic { periodic_word, head } => {
                if p.d != 1 {
                    return Err(Error::Invalid("periodic words need dim 1".into()));
                }
                for &s in periodic_word {
                    check(s)?;
                }
                Ok(HeadedConfig { config: Configuration::periodic(periodic_word)?, head: head_of(head)? })
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaFile {
    pub kind: String,
    pub dim: u8,
    pub alphabet_factors: Vec<u32>,
    pub radius: u32,
    /// Larger radius of the machine and its inverse (conveyor only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine_radius: Option<u32>,
    pub machine: MachineFile,
}

impl CaFile {
    pub fn from_ca(ca: &CellularAutomaton) -> Self {
        let machine_radius = match ca.rule {
            CaRule::Conveyor { r, .. } => Some(r),
            CaRule::PermutationModel(_) => None,
        };
        CaFile {
            kind: ca.kind().into(),
            dim: ca.d,
            alphabet_factors: ca.factors.clone(),
            radius: ca.radius,
            machine_radius,
            machine: MachineFile::from_machine(ca.machine()),
        }
    }

    pub fn to_ca(&self) -> Result<CellularAutomaton> {
        let m = self.machine.to_machine()?;
        let rule = match (self.kind.as_str(), self.machine_radius) {
            ("permutation-model", _) => CaRule::PermutationModel(m),
            ("conveyor", Some(r)) => CaRule::Conveyor { machine: m, r },
            ("conveyor", None) => return Err(Error::Invalid("conveyor automaton without machine_radius".into())),
            (k, _) => return Err(Error::Invalid(format!("unknown automaton kind {k:?}"))),
        };
        Ok(CellularAutomaton { d: self.dim, factors: self.alphabet_factors.clone(), radius: self.radius, rule })
    }
}

fn parse<T: for<'de> Deserialize<'de>>(what: &str, s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Invalid(format!("{what}: line {} column {}: {e}", e.line(), e.column())))
}

pub fn machine_from_json(s: &str) -> Result<Machine> {
    parse::<MachineFile>("machine", s)?.to_machine()
}

pub fn machine_to_json(t: &Machine) -> String {
    serde_json::to_string(&MachineFile::from_machine(t)).expect("machine serializes")
}

pub fn config_from_json(s: &str, p: Params) -> Result<HeadedConfig> {
    parse::<ConfigFile>("configuration", s)?.to_config(p)
}

pub fn config_to_json(d: u8, c: &HeadedConfig) -> String {
    serde_json::to_string(&ConfigFile::from_config(d, c)).expect("configuration serializes")
}

pub fn snake_from_json(s: &str) -> Result<SnakeInstance> {
    let inst: SnakeInstance = parse("snake instance", s)?;
    inst.validate()?;
    Ok(inst)
}

pub fn ca_from_json(s: &str) -> Result<CellularAutomaton> {
    parse::<CaFile>("automaton", s)?.to_ca()
}

pub fn ca_to_json(ca: &CellularAutomaton) -> String {
    serde_json::to_string(&CaFile::from_ca(ca)).expect("automaton serializes")
}
