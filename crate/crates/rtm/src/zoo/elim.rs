//! Trading states for a sparse tape: one state over `Σ ∪ {#}`.
//!
//! Cell `c` of the original tape sits at `k * c`; every other cell holds `#`
//! (the symbol `n`). A head at `v` in state `q` sits at `eta(v, q) = k v + q - 1`.

use crate::config::{Configuration, Head, HeadedConfig};
use crate::error::{Error, Result};
use crate::machine::{Machine, Params, Sym, Vect, ZERO};

pub fn eta(v: i32, q: u32, k: u32) -> i32 {
    k as i32 * v + q as i32 - 1
}

/// The single-state machine over `(n + 1, 1)` conjugate to `t` on valid sparse encodings.
/// Windows that are not locally valid are left alone.
pub fn eliminate_states(t: &Machine) -> Result<Machine> {
    let p = t.params();
    if p.d != 1 {
        return Err(Error::Unsupported("state elimination is one-dimensional".into()));
    }
    let k = p.k as i32;
    let hash = p.n as Sym;
    let r = t.in_radius().max(t.out_radius().unwrap_or(0)).max(0);
    let lo = -k * r - (k - 1);
    let hi = k * r;
    let window: Vec<Vect> = (lo..=hi).map(|i| [i, 0]).collect();
    let at = |off: i32| (off - lo) as usize;
    let out = Params::new(1, p.n + 1, 1)?;
    Machine::from_fn(out, &window, |y, _| {
        let marks: Vec<i32> = (-(k - 1)..=0).filter(|&o| y[at(o)] != hash).collect();
        let [o] = marks[..] else { return (y.to_vec(), 1, ZERO) };
        let q = (1 - o) as u32;
        let base = o;
        let cell = |c: i32| y[at(base + k * c)];
        if (-r..=r).any(|c| cell(c) == hash) {
            return (y.to_vec(), 1, ZERO);
        }
        let row = t.row(t.lookup(q, |c| cell(c[0])));
        let mut w = y.to_vec();
        for (&c, &s) in t.f_out().iter().zip(row.write) {
            w[at(base + k * c[0])] = s;
        }
        let disp = k * row.mv[0] + row.state as i32 - q as i32;
        (w, 1, [disp, 0])
    })
}

/// Encodes cells `lo..hi` of `tape` with the head at `(v, q)`; everything else is `#`.
pub fn encode_sparse(tape: &Configuration, head: Head, n: u32, k: u32, lo: i32, hi: i32) -> HeadedConfig {
    let k = k as i32;
    let cells = (lo..hi).map(|c| ([k * c, 0], tape.get([c, 0])));
    let config = Configuration::finite(n as Sym, cells);
    HeadedConfig::new(config, [eta(head.pos[0], head.state, k as u32), 0], 1)
}

/// Inverse of [`encode_sparse`] on cells `lo..hi`: (cells, head position, state).
pub fn decode_sparse(hc: &HeadedConfig, k: u32, lo: i32, hi: i32) -> Option<(Vec<Sym>, i32, u32)> {
    let h = hc.head?;
    let k = k as i32;
    let cells = (lo..hi).map(|c| hc.config.get([k * c, 0])).collect();
    let v = h.pos[0].div_euclid(k);
    let q = h.pos[0].rem_euclid(k) as u32 + 1;
    Some((cells, v, q))
}
