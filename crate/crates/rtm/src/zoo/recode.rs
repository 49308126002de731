//! Block recoding of tape-preserving machines so that moves are local to one cell.

use crate::config::{Configuration, Head, HeadedConfig};
use crate::error::{Error, Result};
use crate::machine::{encode_pattern, table_rows, Machine, Params, Sym, ZERO};

/// How a recoded tape relates to the original.
///
/// Block `j` holds `x_{[jp - r, jp + p + r)}` as a base-`n` numeral (first cell most
/// significant); the head at `jp + o` in state `q` becomes the head on block `j`
/// in state `(q - 1) p + o + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecodeInfo {
    pub p: u32,
    pub r: u32,
    pub n: u32,
    pub k: u32,
}

impl RecodeInfo {
    pub fn block_len(&self) -> usize {
        (self.p + 2 * self.r) as usize
    }

    pub fn block(&self, x: &Configuration, j: i32) -> Sym {
        let start = j * self.p as i32 - self.r as i32;
        let cells = x.segment(start, start + self.block_len() as i32);
        encode_pattern(&cells, self.n) as Sym
    }

    /// Blocks `j_lo..j_hi` of `x`.
    pub fn blocks(&self, x: &Configuration, j_lo: i32, j_hi: i32) -> Vec<Sym> {
        (j_lo..j_hi).map(|j| self.block(x, j)).collect()
    }

    pub fn encode_head(&self, h: Head) -> Head {
        let p = self.p as i32;
        let j = h.pos[0].div_euclid(p);
        let o = h.pos[0].rem_euclid(p) as u32;
        Head { pos: [j, 0], state: (h.state - 1) * self.p + o + 1 }
    }

    pub fn decode_head(&self, h: Head) -> Head {
        let s = h.state - 1;
        let (q, o) = (s / self.p + 1, s % self.p);
        Head { pos: [h.pos[0] * self.p as i32 + o as i32, 0], state: q }
    }

    /// Encodes blocks `j_lo..j_hi`; other blocks hold the all-background block.
    pub fn encode(&self, x: &Configuration, h: Head, j_lo: i32, j_hi: i32) -> HeadedConfig {
        let bg = match x {
            Configuration::FinitelySupported { background, .. } => {
                encode_pattern(&vec![*background; self.block_len()], self.n) as Sym
            }
            Configuration::Periodic1D { .. } => 0,
        };
        let cells = (j_lo..j_hi).map(|j| ([j, 0], self.block(x, j)));
        HeadedConfig::new(Configuration::finite(bg, cells), self.encode_head(h).pos, self.encode_head(h).state)
    }
}

/// Recodes `t` over blocks of length `p`; requires `p >= 2 r + 1` with `r` the
/// larger of the read and move radii.
pub fn recode_power(t: &Machine, p: u32) -> Result<(Machine, RecodeInfo)> {
    let pr = t.params();
    if pr.d != 1 {
        return Err(Error::Unsupported("recoding is one-dimensional".into()));
    }
    if !t.f_out().is_empty() {
        return Err(Error::NotRfa);
    }
    let r = t.in_radius().max(t.move_radius()).max(0) as u32;
    if p < 2 * r + 1 {
        return Err(Error::Invalid(format!("block length {p} below 2r + 1 = {}", 2 * r + 1)));
    }
    recode_with_radius(t, p, r)
}

/// As [`recode_power`] with an explicit (large enough) context radius, so several
/// machines can share one encoding.
pub fn recode_with_radius(t: &Machine, p: u32, r: u32) -> Result<(Machine, RecodeInfo)> {
    let pr = t.params();
    if !t.f_out().is_empty() {
        return Err(Error::NotRfa);
    }
    let need = t.in_radius().max(t.move_radius()).max(0) as u32;
    if r < need || p < 2 * r + 1 {
        return Err(Error::Invalid(format!("radius {r} / block length {p} too small")));
    }
    let info = RecodeInfo { p, r, n: pr.n, k: pr.k };
    let blen = info.block_len();
    let alpha = (pr.n as u128).checked_pow(blen as u32).filter(|&a| a <= Sym::MAX as u128 + 1);
    let Some(alpha) = alpha else {
        return Err(Error::TooLarge((pr.n as u128).saturating_pow(blen as u32)));
    };
    let np = Params::new(1, alpha as u32, pr.k * p)?;
    table_rows(np, 1)?;
    let mut digits = vec![0 as Sym; blen];
    Machine::from_fn(np, &[ZERO], |b, s| {
        crate::machine::decode_pattern(b[0] as usize, pr.n, blen, &mut digits);
        let q = (s - 1) / p + 1;
        let o = ((s - 1) % p) as i32;
        let row = t.row(t.lookup(q, |c| digits[(r as i32 + o + c[0]) as usize]));
        let pos = o + row.mv[0];
        let jm = pos.div_euclid(p as i32);
        let o2 = pos.rem_euclid(p as i32) as u32;
        (vec![b[0]], (row.state - 1) * p + o2 + 1, [jm, 0])
    })
    .map(|m| (m, info))
}
