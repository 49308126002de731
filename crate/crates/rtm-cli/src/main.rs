//! `rtm`: command-line front end for the reversible Turing machine library.
//!
//! Results go to standard output as JSON, a one-line summary to standard error.
//! Exit status: 0 success, torsion or finite; 1 non-torsion or infinite; 2 unknown
//! (budget exhausted); 3 usage or validation error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rtm::algebra::{compose_all, image_measure, invert, is_reversible, ClopenSet};
use rtm::compilers::{simulate_classical_as_elementary, to_conveyor_ca, to_permutation_model};
use rtm::config::{step_moving_head, step_moving_tape, HeadedConfig};
use rtm::decision::{
    build_snake_machine, rfa_finiteness, snake_probe, torsion_test_word, FinitenessBudget, FinitenessVerdict,
    TorsionVerdict, WitnessBudget,
};
use rtm::homomorphisms::{average_movement, format_rational_vec, greedy_parity_product, make_parity_machine, parity_character};
use rtm::io::{ca_to_json, config_from_json, machine_from_json, snake_from_json, ConfigFile, MachineFile};
use rtm::machine::{vect_from_slice, vect_to_vec, Machine, Params, Pattern, Sym, Vect};
use rtm::zoo::{
    classical_from_table, classify, constant_move, decompose_classical, decompose_rfa, make_controlled_position_swap,
    make_controlled_state_swap, make_local_permutation, make_shift, make_state_permutation, make_stateful_position_swap,
    make_surf, DecomposeOutcome,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "rtm", version, about = "Reversible Turing machines as group elements")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    /// Budget for searches (closure elements, decomposition steps).
    #[arg(long, global = true, env = "RTM_BUDGET_DEFAULT")]
    budget: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a machine from a named family.
    Make {
        #[command(subcommand)]
        family: Family,
    },
    /// Compose machines, applying them left to right.
    Compose { files: Vec<String> },
    Invert { file: String },
    /// Reversibility and basic shape of a machine.
    Check { file: String },
    /// Average head movement, one exact rational per coordinate.
    Alpha { file: String },
    /// Subgroup membership flags.
    Classify { file: String },
    /// Run a machine on a configuration.
    Simulate {
        machine: String,
        config: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Model::Head)]
        model: Model,
    },
    /// Classical machines: state-symbol permutation and shift. Tape-preserving
    /// one-state machines: shift and clopen swaps.
    Decompose { file: String },
    Compile {
        #[arg(value_enum)]
        target: Target,
        file: String,
        /// Target alphabet of the elementary simulation.
        #[arg(long, default_value_t = 2)]
        alphabet: u32,
    },
    /// Torsion test for the product of the machines, applied left to right.
    Torsion {
        #[arg(required = true)]
        files: Vec<String>,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// Finiteness of the group generated by tape-preserving 1D machines.
    Finiteness {
        #[arg(required = true)]
        files: Vec<String>,
        /// Longest candidate word period.
        #[arg(long, default_value_t = 12)]
        word_len: usize,
    },
    /// Build the snake machine of a directed tile set; `--probe` runs the torsion test on it.
    SnakeReduce {
        file: String,
        #[arg(long)]
        probe: bool,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// Parity characters at the given periods.
    Parity {
        file: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        periods: Vec<u32>,
    },
    /// Measure of the image of a cylinder (default: the whole space).
    Measure {
        file: String,
        /// 1D cylinder `start:word`, e.g. `0:1,0`.
        #[arg(long)]
        cylinder: Option<String>,
        /// Restrict the cylinder to this state.
        #[arg(long)]
        state: Option<u32>,
    },
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, default_value_t = 64)]
    max_order: u64,
    /// Support radius of finitely supported candidates.
    #[arg(long, default_value_t = 2)]
    window: i32,
    #[arg(long, default_value_t = 64)]
    steps: usize,
    #[arg(long, default_value_t = 8)]
    period_cap: usize,
}

impl WitnessArgs {
    fn budget(&self) -> WitnessBudget {
        WitnessBudget { window: self.window, steps: self.steps, period_cap: self.period_cap }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Head,
    Tape,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Elementary,
    PermutationModel,
    Conveyor,
}

#[derive(Args, Clone, Copy)]
struct Shape {
    #[arg(short = 'd', long, default_value_t = 1)]
    dim: u8,
    #[arg(short = 'n', long, default_value_t = 2)]
    alphabet: u32,
    #[arg(short = 'k', long, default_value_t = 1)]
    states: u32,
}

impl Shape {
    fn params(&self) -> anyhow::Result<Params> {
        Ok(Params::new(self.dim, self.alphabet, self.states)?)
    }
}

#[derive(Subcommand)]
enum Family {
    Identity {
        #[command(flatten)]
        shape: Shape,
    },
    Shift {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        by: Vec<i64>,
    },
    Surf {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        m: usize,
    },
    StatePerm {
        #[command(flatten)]
        shape: Shape,
        /// Image of each state, e.g. `2,1`.
        #[arg(long, value_delimiter = ',')]
        pi: Vec<u32>,
    },
    /// Controlled position swap `T_{u,a,v}`.
    PositionSwap {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        ctx: Context3,
    },
    /// Stateful position swap, acting in state 1 only.
    StatefulSwap {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        ctx: Context3,
    },
    /// Controlled state swap: exchanges `q` and `q + 1` when the tape reads `u v`.
    StateSwap {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_delimiter = ',')]
        u: Vec<Sym>,
        #[arg(long)]
        q: u32,
        #[arg(long, value_delimiter = ',')]
        v: Vec<Sym>,
    },
    /// Classical machine from `b,r,m` triples separated by `;`, indexed `a * k + q - 1`.
    Classical {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, allow_hyphen_values = true)]
        table: String,
    },
    /// The involution realizing the parity character at one period.
    Parity {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        period: u32,
    },
    /// Product realizing the given parities at periods 2, 3, ...
    ParityProduct {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_delimiter = ',')]
        target: Vec<u8>,
    },
    /// Seeded product of random local permutations and shifts.
    Random {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        factors: usize,
    },
}

#[derive(Args, Clone)]
struct Context3 {
    #[arg(long, value_delimiter = ',')]
    u: Vec<Sym>,
    #[arg(long)]
    a: Sym,
    #[arg(long, value_delimiter = ',')]
    v: Vec<Sym>,
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| x.parse::<T>().map_err(|e| format!("{x:?}: {e}"))).collect()
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load_machine(path: &str) -> anyhow::Result<Machine> {
    machine_from_json(&read_input(path)?).with_context(|| format!("in {path}"))
}

fn load_machines(paths: &[String]) -> anyhow::Result<Vec<Machine>> {
    if paths.iter().filter(|p| *p == "-").count() > 1 {
        bail!("standard input can be used only once");
    }
    paths.iter().map(|p| load_machine(p)).collect()
}

fn machine_value(t: &Machine) -> Value {
    serde_json::to_value(MachineFile::from_machine(t)).expect("machine serializes")
}

fn config_value(d: u8, c: &HeadedConfig) -> Value {
    serde_json::to_value(ConfigFile::from_config(d, c)).expect("configuration serializes")
}

struct Outcome {
    value: Value,
    summary: String,
    code: u8,
}

impl Outcome {
    fn ok(value: Value, summary: impl Into<String>) -> Self {
        Outcome { value, summary: summary.into(), code: 0 }
    }
}

fn make(family: Family) -> anyhow::Result<Machine> {
    let t = match family {
        Family::Identity { shape } => Machine::identity(shape.params()?),
        Family::Shift { shape, by } => {
            let p = shape.params()?;
            make_shift(p, vect_from_slice(p.d, &by)?)?
        }
        Family::Surf { shape, m } => make_surf(shape.params()?, m)?,
        Family::StatePerm { shape, pi } => make_state_permutation(shape.params()?, &pi)?,
        Family::PositionSwap { shape, ctx } => make_controlled_position_swap(shape.params()?, &ctx.u, ctx.a, &ctx.v)?,
        Family::StatefulSwap { shape, ctx } => make_stateful_position_swap(shape.params()?, &ctx.u, ctx.a, &ctx.v)?,
        Family::StateSwap { shape, u, q, v } => make_controlled_state_swap(shape.params()?, &u, q, &v)?,
        Family::Classical { shape, table } => {
            let mut rows = vec![];
            for (i, entry) in table.split(';').map(str::trim).filter(|e| !e.is_empty()).enumerate() {
                let xs: Vec<i64> = parse_list(entry).map_err(|e| anyhow!("table entry {i}: {e}"))?;
                let [b, r, m] = xs[..] else { bail!("table entry {i}: expected b,r,m") };
                rows.push((Sym::try_from(b)?, u32::try_from(r)?, i32::try_from(m)?));
            }
            classical_from_table(shape.params()?, &rows)?
        }
        Family::Parity { shape, period } => make_parity_machine(shape.params()?, period)?,
        Family::ParityProduct { shape, target } => greedy_parity_product(shape.params()?, &target)?,
        Family::Random { shape, seed, factors } => random_machine(shape.params()?, seed, factors)?,
    };
    Ok(t)
}

/// Local permutations on the head cell and its right neighbour, and unit shifts.
fn random_machine(p: Params, seed: u64, factors: usize) -> anyhow::Result<Machine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = vec![];
    for _ in 0..factors {
        let g = if rng.gen_bool(0.25) {
            let mut v: Vect = [0, 0];
            v[rng.gen_range(0..p.d as usize)] = if rng.gen() { 1 } else { -1 };
            make_shift(p, v)?
        } else {
            let support: Vec<Vect> = if rng.gen() { vec![[0, 0]] } else { vec![[0, 0], [1, 0]] };
            let count = (p.n as usize).pow(support.len() as u32) * p.k as usize;
            let mut perm: Vec<usize> = (0..count).collect();
            rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
            let (n, k, w) = (p.n as usize, p.k as usize, support.len());
            make_local_permutation(p, &support, move |s, q| {
                let img = perm[s.iter().fold(0usize, |a, &x| a * n + x as usize) * k + q as usize - 1];
                let mut out = vec![0 as Sym; w];
                let mut rest = img / k;
                for j in (0..w).rev() {
                    out[j] = (rest % n) as Sym;
                    rest /= n;
                }
                (out, (img % k) as u32 + 1)
            })?
        };
        gens.push(g);
    }
    if gens.is_empty() {
        return Ok(Machine::identity(p));
    }
    let refs: Vec<&Machine> = gens.iter().collect();
    Ok(compose_all(&refs)?)
}

fn torsion_outcome(d: u8, v: TorsionVerdict) -> Outcome {
    match v {
        TorsionVerdict::Torsion(o) => Outcome::ok(json!({"verdict": "torsion", "order": o}), format!("torsion, order {o}")),
        TorsionVerdict::NonTorsion(c) => Outcome {
            summary: format!("non-torsion: T^{} shifts a configuration by {:?}", c.p, vect_to_vec(d, c.v)),
            value: json!({
                "verdict": "non-torsion",
                "certificate": {"config": config_value(d, &c.config), "p": c.p, "v": vect_to_vec(d, c.v)},
            }),
            code: EXIT_NEGATIVE,
        },
        TorsionVerdict::Unknown { max_order, candidates, steps } => Outcome {
            value: json!({"verdict": "unknown", "max_order": max_order, "candidates": candidates, "steps": steps}),
            summary: format!("unknown after order {max_order} and {candidates} candidates"),
            code: EXIT_UNKNOWN,
        },
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let budget = cli.budget;
    Ok(match cli.cmd {
        Cmd::Make { family } => {
            let t = make(family)?;
            Outcome::ok(machine_value(&t), format!("{} rows", t.num_rows()))
        }
        Cmd::Compose { files } => {
            let ms = load_machines(&files)?;
            if ms.is_empty() {
                bail!("compose needs at least one machine");
            }
            let refs: Vec<&Machine> = ms.iter().collect();
            let t = compose_all(&refs)?;
            Outcome::ok(machine_value(&t), format!("composed {} machines", ms.len()))
        }
        Cmd::Invert { file } => {
            let t = invert(&load_machine(&file)?)?;
            Outcome::ok(machine_value(&t), "inverted")
        }
        Cmd::Check { file } => {
            let t = load_machine(&file)?;
            let p = t.params();
            let rev = is_reversible(&t);
            let offs = |v: &[Vect]| v.iter().map(|&x| vect_to_vec(p.d, x)).collect::<Vec<_>>();
            Outcome::ok(
                json!({
                    "reversible": rev,
                    "dim": p.d, "alphabet": p.n, "states": p.k,
                    "f_in": offs(t.f_in()), "f_out": offs(t.f_out()),
                    "in_radius": t.in_radius(), "move_radius": t.move_radius(),
                    "identity": t.is_identity(),
                }),
                format!("reversible: {rev}"),
            )
        }
        Cmd::Alpha { file } => {
            let a = format_rational_vec(&average_movement(&load_machine(&file)?));
            Outcome::ok(json!({"alpha": a}), format!("alpha = ({})", a.join(", ")))
        }
        Cmd::Classify { file } => {
            let t = load_machine(&file)?;
            let names = classify(&t).names();
            let cm = constant_move(&t).map(|v| vect_to_vec(t.params().d, v));
            Outcome::ok(json!({"flags": names, "constant_move": cm}), format!("[{}]", names.join(", ")))
        }
        Cmd::Simulate { machine, config, steps, model } => {
            let t = load_machine(&machine)?;
            let p = t.params();
            let mut c = config_from_json(&read_input(&config)?, p).with_context(|| format!("in {config}"))?;
            for _ in 0..steps {
                c = match (model, c.head) {
                    (Model::Tape, Some(h)) => {
                        let moved = c.config.translate([-h.pos[0], -h.pos[1]]);
                        let (tape, q) = step_moving_tape(&t, &moved, h.state);
                        HeadedConfig::new(tape, [0, 0], q)
                    }
                    _ => step_moving_head(&t, &c),
                };
            }
            let summary = match c.head {
                Some(h) => format!("after {steps} steps: head at {:?}, state {}", vect_to_vec(p.d, h.pos), h.state),
                None => format!("after {steps} steps: no head, configuration fixed"),
            };
            Outcome::ok(config_value(p.d, &c), summary)
        }
        Cmd::Decompose { file } => {
            let t = load_machine(&file)?;
            match decompose_classical(&t) {
                Ok(d) => Outcome::ok(
                    json!({
                        "kind": "classical",
                        "t0": machine_value(&d.t0()?),
                        "t1": machine_value(&d.t1()?),
                        "dir": d.dir,
                    }),
                    "T = T1 after T0",
                ),
                Err(ce) if t.f_out().is_empty() && t.params().d == 1 && t.params().k == 1 => {
                    let out = decompose_rfa(&t, budget.unwrap_or(1000)).with_context(|| format!("not classical ({ce})"))?;
                    let d = out.decomposition();
                    let swaps: Vec<Value> = d
                        .swaps
                        .iter()
                        .map(|c| rtm::zoo::make_clopen_swap(c).map(|m| machine_value(&m)))
                        .collect::<rtm::error::Result<_>>()?;
                    let done = matches!(out, DecomposeOutcome::Done(_));
                    Outcome {
                        value: json!({"kind": "rfa", "complete": done, "shift": d.shift_part, "swaps": swaps, "trace": d.trace}),
                        summary: format!("shift {} then {} swaps{}", d.shift_part, d.swaps.len(), if done { "" } else { " (budget exhausted)" }),
                        code: if done { 0 } else { EXIT_UNKNOWN },
                    }
                }
                Err(ce) => bail!("no decomposition: {ce}"),
            }
        }
        Cmd::Compile { target, file, alphabet } => {
            let t = load_machine(&file)?;
            match target {
                Target::Elementary => {
                    let s = simulate_classical_as_elementary(&t, alphabet)?;
                    Outcome::ok(
                        json!({"kind": "elementary", "block_len": s.m, "t0": machine_value(&s.t0p), "t1": machine_value(&s.t1p)}),
                        format!("blocks of {} cells over {} symbols", s.m, s.n),
                    )
                }
                Target::PermutationModel | Target::Conveyor => {
                    let ca = if matches!(target, Target::Conveyor) { to_conveyor_ca(&t)? } else { to_permutation_model(&t)? };
                    let v: Value = serde_json::from_str(&ca_to_json(&ca))?;
                    Outcome::ok(v, format!("{} automaton, radius {}", ca.kind(), ca.radius))
                }
            }
        }
        Cmd::Torsion { files, witness } => {
            let ms = load_machines(&files)?;
            let refs: Vec<&Machine> = ms.iter().collect();
            let v = torsion_test_word(&refs, witness.max_order, &witness.budget(), &[])?;
            torsion_outcome(ms[0].params().d, v)
        }
        Cmd::Finiteness { files, word_len } => {
            let gens = load_machines(&files)?;
            let b = FinitenessBudget { elements: budget.unwrap_or(FinitenessBudget::default().elements), word_len };
            match rfa_finiteness(&gens, &b)? {
                FinitenessVerdict::Finite(o) => Outcome::ok(json!({"verdict": "finite", "order": o}), format!("finite, order {o}")),
                FinitenessVerdict::Infinite(u) => Outcome {
                    summary: format!("infinite: heads travel along the periodic tape {u:?}"),
                    value: json!({"verdict": "infinite", "word": u}),
                    code: EXIT_NEGATIVE,
                },
                FinitenessVerdict::Unknown { elements, word_len } => Outcome {
                    value: json!({"verdict": "unknown", "elements": elements, "word_len": word_len}),
                    summary: format!("unknown within {elements} elements and words of length {word_len}"),
                    code: EXIT_UNKNOWN,
                },
            }
        }
        Cmd::SnakeReduce { file, probe, witness } => {
            let inst = snake_from_json(&read_input(&file)?).with_context(|| format!("in {file}"))?;
            if probe {
                torsion_outcome(2, snake_probe(&inst, witness.max_order, &witness.budget())?)
            } else {
                let t = build_snake_machine(&inst)?;
                Outcome::ok(machine_value(&t), format!("{} tiles, {} rows", inst.tiles.len(), t.num_rows()))
            }
        }
        Cmd::Parity { file, periods } => {
            let t = load_machine(&file)?;
            let mut out = serde_json::Map::new();
            for per in &periods {
                out.insert(per.to_string(), json!(parity_character(&t, *per)?));
            }
            let s = out.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ");
            Outcome::ok(json!({"parity": out}), s)
        }
        Cmd::Measure { file, cylinder, state } => {
            let t = load_machine(&file)?;
            let p = t.params();
            let set = match cylinder {
                None if state.is_none() => ClopenSet::whole(p),
                None => ClopenSet::from_cylinders(p, &[(Pattern::new(vec![])?, state)])?,
                Some(c) => {
                    if p.d != 1 {
                        bail!("--cylinder takes a 1D word");
                    }
                    let (start, word) = c.split_once(':').ok_or_else(|| anyhow!("cylinder {c:?}: expected start:word"))?;
                    let start: i32 = start.trim().parse().with_context(|| format!("cylinder start {start:?}"))?;
                    let word: Vec<Sym> = parse_list(word).map_err(|e| anyhow!("cylinder word: {e}"))?;
                    ClopenSet::from_cylinders(p, &[(Pattern::word(start, &word), state)])?
                }
            };
            let m = image_measure(&t, &set)?;
            Outcome::ok(json!({"measure": m.to_string(), "preimage": set.measure().to_string()}), format!("measure of image = {m}"))
        }
    })
}

fn write_output(path: &Option<PathBuf>, v: &Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing standard output"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.output.clone();
    match run(cli).and_then(|o| write_output(&output, &o.value).map(|_| o)) {
        Ok(o) => {
            eprintln!("{}", o.summary);
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
