//! Simulating a reversible classical machine by two involutions over a fixed alphabet.
//!
//! Cell `i` of the classical tape becomes the `m`-block at `[im, (i+1)m)`; the
//! block holds `(a, ⊥)` or `(a, q)` as a base-`n` numeral of the rank
//! `a (|Q'| + 1) + r`, with `r = 0` for `⊥`. The simulating head sits on the
//! first cell of the state block.

use crate::config::{step_moving_head, Configuration, HeadedConfig};
use crate::error::{Error, Result};
use crate::machine::{decode_pattern, encode_pattern, Machine, Params, Sym, Vect};
use crate::zoo::{classical_from_table, decompose_classical, make_local_permutation};

#[derive(Clone, Debug)]
pub struct ElementarySimulation {
    /// Target alphabet size.
    pub n: u32,
    /// Block length.
    pub m: usize,
    /// Alphabet of the classical machine.
    pub sigma: u32,
    /// The classical machine with every non-moving step split in two; its states
    /// are the original ones followed by one primed copy per non-moving state.
    pub zero_free: Machine,
    /// `primes[i]` is the original state whose primed copy is state `k + i + 1`.
    pub primes: Vec<u32>,
    /// Movement of each state of `zero_free` (`±1`).
    pub dirs: Vec<i32>,
    pub t0p: Machine,
    pub t1p: Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    Blank(Sym),
    Head(Sym, u32),
    Junk,
}

impl ElementarySimulation {
    fn states(&self) -> u32 {
        self.zero_free.params().k
    }

    /// `[a, r]`; `None` is `⊥`.
    pub fn code(&self, a: Sym, r: Option<u32>) -> Vec<Sym> {
        let rank = a as usize * (self.states() as usize + 1) + r.unwrap_or(0) as usize;
        let mut out = vec![0; self.m];
        decode_pattern(rank, self.n, self.m, &mut out);
        out
    }

    fn block(&self, w: &[Sym]) -> Block {
        let rank = encode_pattern(w, self.n);
        let s = self.states() as usize + 1;
        if rank >= self.sigma as usize * s {
            return Block::Junk;
        }
        let (a, r) = ((rank / s) as Sym, (rank % s) as u32);
        if r == 0 {
            Block::Blank(a)
        } else {
            Block::Head(a, r)
        }
    }

    /// Encodes the classical configuration `tape` (cells outside `lo..lo+len` hold 0)
    /// with the head at `pos` in `state` of `zero_free`.
    pub fn encode(&self, tape: &[Sym], lo: i32, pos: i32, state: u32) -> HeadedConfig {
        let m = self.m as i32;
        let mut cells = vec![];
        let hi = lo + tape.len() as i32;
        for i in lo.min(pos)..hi.max(pos + 1) {
            let a = if (lo..hi).contains(&i) { tape[(i - lo) as usize] } else { 0 };
            let r = (i == pos).then_some(state);
            for (j, s) in self.code(a, r).into_iter().enumerate() {
                cells.push(([i * m + j as i32, 0], s));
            }
        }
        HeadedConfig::new(Configuration::finite(0, cells), [pos * m, 0], 1)
    }

    /// One step of `zero_free`, read back through [`encode`](Self::encode).
    pub fn classical_step(&self, tape: &[Sym], lo: i32, pos: i32, state: u32) -> HeadedConfig {
        let c = HeadedConfig::new(Configuration::from_word(0, lo, tape), [pos, 0], state);
        let out = step_moving_head(&self.zero_free, &c);
        let h = out.head.unwrap();
        let lo2 = lo.min(h.pos[0]);
        let hi2 = (lo + tape.len() as i32).max(h.pos[0] + 1);
        self.encode(&out.config.segment(lo2, hi2), lo2, h.pos[0], h.state)
    }

    /// `T1' ∘ T0'`.
    pub fn step(&self, c: &HeadedConfig) -> HeadedConfig {
        step_moving_head(&self.t1p, &step_moving_head(&self.t0p, c))
    }

    /// The simulator word `[T0', T1']`, applied left to right.
    pub fn word(&self) -> [&Machine; 2] {
        [&self.t0p, &self.t1p]
    }
}

/// Splits every non-moving step of a reversible classical machine in two.
fn remove_zero_moves(t: &Machine) -> Result<(Machine, Vec<u32>, Vec<i32>)> {
    let dec = decompose_classical(t).map_err(|e| match e {
        crate::zoo::ClassicalError::NotClassical => Error::Invalid("machine is not classical".into()),
        _ => Error::NotReversible,
    })?;
    let p = t.params();
    let k = p.k;
    let primes: Vec<u32> = (1..=k).filter(|&q| dec.dir[q as usize - 1] == 0).collect();
    let k2 = k + primes.len() as u32;
    let prime_of = |q: u32| primes.iter().position(|&x| x == q).map(|i| k + 1 + i as u32);
    let mut dirs: Vec<i32> = dec.dir.iter().map(|&d| if d == 0 { -1 } else { d }).collect();
    dirs.extend(std::iter::repeat(1).take(primes.len()));
    let np = Params::new(1, p.n, k2)?;
    let mut table = vec![(0 as Sym, 0u32, 0i32); (p.n * k2) as usize];
    for a in 0..p.n as Sym {
        for q in 1..=k2 {
            let (b, r) = if q <= k {
                let (b, r) = dec.perm[(a as u32 * k + q - 1) as usize];
                (b, prime_of(r).unwrap_or(r))
            } else {
                (a, primes[(q - k - 1) as usize])
            };
            table[(a as u32 * k2 + q - 1) as usize] = (b, r, dirs[r as usize - 1]);
        }
    }
    Ok((classical_from_table(np, &table)?, primes, dirs))
}

/// Builds `T0'` (a local permutation) and `T1'` (a one-state automaton) over `n` symbols.
pub fn simulate_classical_as_elementary(t: &Machine, n: u32) -> Result<ElementarySimulation> {
    if n < 2 {
        return Err(Error::InvalidParams("target alphabet needs n >= 2".into()));
    }
    let (zero_free, primes, dirs) = remove_zero_moves(t)?;
    let sigma = t.params().n;
    let k2 = zero_free.params().k;
    let need = sigma as u64 * (k2 as u64 + 1);
    let mut m = 1usize;
    while (n as u64).pow(m as u32) < need {
        m += 1;
    }
    let target = Params::new(1, n, 1)?;
    let mut sim = ElementarySimulation {
        n,
        m,
        sigma,
        zero_free,
        primes,
        dirs,
        t0p: Machine::identity(target),
        t1p: Machine::identity(target),
    };
    // f_T and its inverse on Σ × Q'
    let mut fwd = vec![(0 as Sym, 0u32); (sigma * k2) as usize];
    let mut back = vec![(0 as Sym, 0u32); (sigma * k2) as usize];
    for a in 0..sigma as Sym {
        for q in 1..=k2 {
            let row = sim.zero_free.row(sim.zero_free.lookup(q, |_| a));
            let b = row.write.first().copied().unwrap_or(a);
            fwd[(a as u32 * k2 + q - 1) as usize] = (b, row.state);
            back[(b as u32 * k2 + row.state - 1) as usize] = (a, q);
        }
    }
    let mi = m as i32;
    let w0: Vec<Vect> = (-mi..2 * mi).map(|i| [i, 0]).collect();
    let s = &sim;
    let t0p = make_local_permutation(target, &w0, |p, q| {
        let blocks: Vec<Block> = p.chunks(m).map(|b| s.block(b)).collect();
        let out: Option<[(Sym, Option<u32>); 3]> = match blocks[..] {
            [Block::Blank(c), Block::Head(a, q0), Block::Blank(d)] => {
                let (b, r) = fwd[(a as u32 * k2 + q0 - 1) as usize];
                Some(if s.dirs[r as usize - 1] < 0 {
                    [(c, Some(r)), (b, None), (d, None)]
                } else {
                    [(c, None), (b, None), (d, Some(r))]
                })
            }
            [Block::Head(c, r), Block::Blank(b), Block::Blank(d)] if s.dirs[r as usize - 1] < 0 => {
                let (a, q0) = back[(b as u32 * k2 + r - 1) as usize];
                Some([(c, None), (a, Some(q0)), (d, None)])
            }
            [Block::Blank(c), Block::Blank(b), Block::Head(d, r)] if s.dirs[r as usize - 1] > 0 => {
                let (a, q0) = back[(b as u32 * k2 + r - 1) as usize];
                Some([(c, None), (a, Some(q0)), (d, None)])
            }
            _ => None,
        };
        match out {
            Some(bs) => (bs.iter().flat_map(|&(a, r)| s.code(a, r)).collect(), q),
            None => (p.to_vec(), q),
        }
    })?;
    let w1: Vec<Vect> = (-2 * mi..3 * mi).map(|i| [i, 0]).collect();
    let t1p = Machine::from_fn(target, &w1, |p, q| {
        let b: Vec<Block> = p.chunks(m).map(|b| s.block(b)).collect();
        let blank = |x: Block| matches!(x, Block::Blank(_));
        let dir = |x: Block| match x {
            Block::Head(_, r) => s.dirs[r as usize - 1],
            _ => 0,
        };
        let mv = if dir(b[1]) < 0 && blank(b[2]) && blank(b[3]) {
            -mi
        } else if dir(b[2]) < 0 && blank(b[3]) && blank(b[4]) {
            mi
        } else if blank(b[1]) && blank(b[2]) && dir(b[3]) > 0 {
            mi
        } else if blank(b[0]) && blank(b[1]) && dir(b[2]) > 0 {
            -mi
        } else {
            0
        };
        (p.to_vec(), q, [mv, 0])
    })?;
    sim.t0p = t0p;
    sim.t1p = t1p;
    Ok(sim)
}
