//! Writing a one-state tape-preserving machine as a shift followed by clopen swaps.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive};

use crate::algebra::{compose, compose_all, is_reversible, ClopenSet};
use crate::error::{Error, Result};
use crate::homomorphisms::average_movement;
use crate::machine::{decode_pattern, Machine, Params, Sym, Vect};
use crate::zoo::{make_clopen_swap, make_shift};

/// `T = T_{C_j} ∘ … ∘ T_{C_1} ∘ σ^{shift_part}`: apply the shift, then `swaps` in order.
#[derive(Clone, Debug)]
pub struct SwapDecomposition {
    pub shift_part: i32,
    pub swaps: Vec<ClopenSet>,
    /// `(max move, longest run)` before each swap; strictly decreasing.
    pub trace: Vec<(i32, usize)>,
}

#[derive(Clone, Debug)]
pub enum DecomposeOutcome {
    Done(SwapDecomposition),
    BudgetExhausted(SwapDecomposition),
}

impl DecomposeOutcome {
    pub fn decomposition(&self) -> &SwapDecomposition {
        match self {
            DecomposeOutcome::Done(d) | DecomposeOutcome::BudgetExhausted(d) => d,
        }
    }
}

pub fn recompose(params: Params, d: &SwapDecomposition) -> Result<Machine> {
    let mut ms = vec![make_shift(params, [d.shift_part, 0])?];
    for c in &d.swaps {
        ms.push(make_clopen_swap(c)?);
    }
    let refs: Vec<&Machine> = ms.iter().collect();
    compose_all(&refs)
}

/// Moves of every centred window of width `2R + 1` (base-`n` index).
fn window_moves(t: &Machine, r: i32) -> Vec<i32> {
    let p = t.params();
    let w = (2 * r + 1) as usize;
    let count = (p.n as usize).pow(w as u32);
    let mut buf = vec![0 as Sym; w];
    (0..count)
        .map(|i| {
            decode_pattern(i, p.n, w, &mut buf);
            t.row(t.lookup(1, |c| buf[(r + c[0]) as usize])).mv[0]
        })
        .collect()
}

/// Longest run of consecutive positions moving by `m`.
fn longest_run(moves: &[i32], n: usize, r: i32, m: i32) -> Result<usize> {
    let nodes = n.pow(2 * r as u32);
    // edge from prefix to suffix of every window a with move m
    let mut memo: HashMap<usize, usize> = HashMap::new();
    let mut on_stack = vec![false; nodes];
    let mut best = 0;
    fn dfs(
        v: usize,
        moves: &[i32],
        n: usize,
        nodes: usize,
        m: i32,
        memo: &mut HashMap<usize, usize>,
        on_stack: &mut [bool],
    ) -> Result<usize> {
        if let Some(&l) = memo.get(&v) {
            return Ok(l);
        }
        on_stack[v] = true;
        let mut l = 0;
        for s in 0..n {
            let a = v * n + s;
            if moves[a] != m {
                continue;
            }
            let next = a % nodes;
            if on_stack[next] {
                return Err(Error::NonzeroResidualMovement(m));
            }
            l = l.max(1 + dfs(next, moves, n, nodes, m, memo, on_stack)?);
        }
        on_stack[v] = false;
        memo.insert(v, l);
        Ok(l)
    }
    for v in 0..nodes {
        best = best.max(dfs(v, moves, n, nodes, m, &mut memo, &mut on_stack)?);
    }
    Ok(best)
}

/// Decomposes a reversible one-state tape-preserving machine (d = 1).
pub fn decompose_rfa(t: &Machine, step_budget: usize) -> Result<DecomposeOutcome> {
    let p = t.params();
    if p.d != 1 || p.k != 1 {
        return Err(Error::Unsupported("decomposition needs d = 1 and k = 1".into()));
    }
    if !t.f_out().is_empty() {
        return Err(Error::NotRfa);
    }
    if !is_reversible(t) {
        return Err(Error::NotReversible);
    }
    let alpha = &average_movement(t)[0];
    if !alpha.denom().is_one() {
        return Err(Error::Invalid(format!("average movement {alpha} is not an integer")));
    }
    let s = alpha.numer().to_i32().ok_or_else(|| Error::Invalid("shift part out of range".into()))?;
    let mut cur = compose(t, &make_shift(p, [-s, 0])?)?;
    let mut dec = SwapDecomposition { shift_part: s, swaps: vec![], trace: vec![] };
    let n = p.n as usize;
    loop {
        if cur.is_identity() {
            return Ok(DecomposeOutcome::Done(dec));
        }
        if dec.swaps.len() >= step_budget {
            return Ok(DecomposeOutcome::BudgetExhausted(dec));
        }
        let m = (0..cur.num_rows()).map(|i| cur.row(i).mv[0]).max().unwrap_or(0);
        if m <= 0 {
            return Err(Error::NonzeroResidualMovement(m));
        }
        let r = cur.in_radius().max(0);
        let moves = window_moves(&cur, r);
        let run = longest_run(&moves, n, r, m)?;
        if let Some(&prev) = dec.trace.last() {
            assert!((m, run) < prev, "decomposition measure did not decrease: {prev:?} -> {:?}", (m, run));
        }
        dec.trace.push((m, run));
        let lo = -(run as i32) + 1 - r;
        let window: Vec<Vect> = (lo..=r).map(|i| [i, 0]).collect();
        let w = 2 * r as usize + 1;
        let c = ClopenSet::from_predicate(p, window, |pat, _| {
            (0..run).all(|j| {
                let a = pat[j..j + w].iter().fold(0usize, |acc, &x| acc * n + x as usize);
                moves[a] == m
            })
        })?;
        let tc = make_clopen_swap(&c)?;
        cur = compose(&cur, &tc)?;
        dec.swaps.push(c);
    }
}
