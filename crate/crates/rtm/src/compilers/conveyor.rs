//! The conveyor-belt automaton on `Σ² × ({←, →} ∪ Q × {↑, ↓})`.
//!
//! The third track cuts the line into zones `→* h ←*` and `→* ←*`. Cells left of
//! the head carry `→`, cells right of it `←`. A headed bounded zone of length `m`
//! is read as the periodic word `u_0 … u_{m-1} v_{m-1} … v_0` (top track, then the
//! bottom track reversed) and the machine takes one step on it.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::{invert, is_reversible};
use crate::error::{Error, Result};
use crate::machine::{vadd, Machine, Sym};

use super::{CaRule, CellularAutomaton};

pub const LEFT: u32 = 0;
pub const RIGHT: u32 = 1;

/// Third-track code of a head.
pub fn head_code(q: u32, down: bool) -> u32 {
    2 + 2 * (q - 1) + down as u32
}

/// `(state, down)` of a head code.
pub fn decode_head(code: u32) -> Option<(u32, bool)> {
    (code >= 2).then(|| ((code - 2) / 2 + 1, (code - 2) % 2 == 1))
}

/// `[top, bottom, track]`.
pub type Cell = [u32; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZoneKind {
    /// `→^right_arrows ←^(len - right_arrows)`.
    Headless { right_arrows: usize },
    Headed { offset: usize, state: u32, down: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zone {
    pub start: usize,
    pub len: usize,
    pub kind: ZoneKind,
}

fn closes(a: u32) -> bool {
    a != RIGHT
}

fn opens(b: u32) -> bool {
    b != LEFT
}

/// Splits a third-track word into zones.
pub fn parse_zones(word: &[u32]) -> Vec<Zone> {
    let mut zones = vec![];
    let mut start = 0;
    for i in 0..word.len() {
        if i + 1 == word.len() || (closes(word[i]) && opens(word[i + 1])) {
            let seg = &word[start..=i];
            let kind = match seg.iter().position(|&c| c >= 2) {
                Some(o) => {
                    let (state, down) = decode_head(seg[o]).unwrap();
                    ZoneKind::Headed { offset: o, state, down }
                }
                None => ZoneKind::Headless { right_arrows: seg.iter().filter(|&&c| c == RIGHT).count() },
            };
            zones.push(Zone { start, len: i + 1 - start, kind });
            start = i + 1;
        }
    }
    zones
}

/// Inverse of [`parse_zones`].
pub fn flatten_zones(zones: &[Zone]) -> Vec<u32> {
    let mut out = vec![];
    for z in zones {
        match z.kind {
            ZoneKind::Headless { right_arrows } => {
                out.extend(std::iter::repeat(RIGHT).take(right_arrows));
                out.extend(std::iter::repeat(LEFT).take(z.len - right_arrows));
            }
            ZoneKind::Headed { offset, state, down } => {
                out.extend(std::iter::repeat(RIGHT).take(offset));
                out.push(head_code(state, down));
                out.extend(std::iter::repeat(LEFT).take(z.len - offset - 1));
            }
        }
    }
    out
}

/// A 1D configuration constant outside `lo..lo + cells.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CaTape1D {
    pub left: Cell,
    pub right: Cell,
    pub lo: i64,
    pub cells: Vec<Cell>,
}

impl CaTape1D {
    pub fn new(left: Cell, right: Cell, lo: i64, cells: Vec<Cell>) -> Result<Self> {
        if left[2] > RIGHT || right[2] > RIGHT {
            return Err(Error::Invalid("background cells must carry an arrow".into()));
        }
        let mut t = CaTape1D { left, right, lo, cells };
        t.trim();
        Ok(t)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.cells.len() as i64
    }

    pub fn get(&self, i: i64) -> Cell {
        if i < self.lo {
            self.left
        } else if i >= self.hi() {
            self.right
        } else {
            self.cells[(i - self.lo) as usize]
        }
    }

    pub fn set(&mut self, i: i64, c: Cell) {
        if self.cells.is_empty() {
            self.lo = i;
        }
        while i < self.lo {
            self.cells.insert(0, self.left);
            self.lo -= 1;
        }
        while i >= self.hi() {
            self.cells.push(self.right);
        }
        let lo = self.lo;
        self.cells[(i - lo) as usize] = c;
    }

    fn trim(&mut self) {
        while self.cells.last() == Some(&self.right) {
            self.cells.pop();
        }
        let k = self.cells.iter().take_while(|&&c| c == self.left).count();
        self.cells.drain(..k);
        self.lo += k as i64;
        if self.cells.is_empty() {
            self.lo = 0;
        }
    }

    /// Top track on `lo..hi`.
    pub fn top(&self, lo: i64, hi: i64) -> Vec<Sym> {
        (lo..hi).map(|i| self.get(i)[0] as Sym).collect()
    }

    pub fn heads(&self) -> Vec<i64> {
        (self.lo..self.hi()).filter(|&i| self.get(i)[2] >= 2).collect()
    }
}

/// `(bottom?, cell)` of every index of the unfolded word, and back.
#[derive(Clone, Copy, Debug)]
enum Geometry {
    Bounded { a: i64, m: i64 },
    RightInfinite { a: i64 },
    LeftInfinite { e: i64 },
    Line { down: bool },
}

impl Geometry {
    fn cell(&self, j: i64) -> (bool, i64) {
        match *self {
            Geometry::Bounded { a, m } => {
                let j = j.rem_euclid(2 * m);
                if j < m {
                    (false, a + j)
                } else {
                    (true, a + 2 * m - 1 - j)
                }
            }
            Geometry::RightInfinite { a } => {
                if j >= 0 {
                    (false, a + j)
                } else {
                    (true, a - j - 1)
                }
            }
            Geometry::LeftInfinite { e } => {
                if j <= 0 {
                    (false, e + j)
                } else {
                    (true, e - j + 1)
                }
            }
            Geometry::Line { down } => (down, if down { -j } else { j }),
        }
    }

    fn index(&self, down: bool, c: i64) -> i64 {
        match *self {
            Geometry::Bounded { a, m } => {
                if down {
                    2 * m - (c - a) - 1
                } else {
                    c - a
                }
            }
            Geometry::RightInfinite { a } => {
                if down {
                    -(c - a) - 1
                } else {
                    c - a
                }
            }
            Geometry::LeftInfinite { e } => {
                if down {
                    e - c + 1
                } else {
                    c - e
                }
            }
            Geometry::Line { .. } => {
                if down {
                    -c
                } else {
                    c
                }
            }
        }
    }
}

/// Largest radius of `t` and its inverse.
pub fn conveyor_radius(t: &Machine) -> Result<u32> {
    Ok(t.radius().max(invert(t)?.radius()).max(0) as u32)
}

pub fn to_conveyor_ca(t: &Machine) -> Result<CellularAutomaton> {
    let p = t.params();
    if p.d != 1 {
        return Err(Error::Unsupported("conveyor construction is one-dimensional".into()));
    }
    if !is_reversible(t) {
        return Err(Error::NotReversible);
    }
    let r = conveyor_radius(t)?;
    Ok(CellularAutomaton {
        d: 1,
        factors: vec![p.n, p.n, 2 + 2 * p.k],
        radius: 3 * r + 2,
        rule: CaRule::Conveyor { machine: t.clone(), r },
    })
}

pub(crate) fn apply_conveyor(t: &Machine, r: u32, tape: &CaTape1D) -> Result<CaTape1D> {
    let p = t.params();
    let check = |c: &Cell| c[0] < p.n && c[1] < p.n && c[2] < 2 + 2 * p.k;
    if !check(&tape.left) || !check(&tape.right) || !tape.cells.iter().all(check) {
        return Err(Error::Invalid("cell outside the conveyor alphabet".into()));
    }
    // zone boundaries between i and i + 1, for i in lo - 1 .. hi
    let cuts: Vec<i64> =
        (tape.lo - 1..tape.hi()).filter(|&i| closes(tape.get(i)[2]) && opens(tape.get(i + 1)[2])).collect();
    let mut out = tape.clone();
    for h in tape.heads() {
        let a = cuts.iter().rev().find(|&&c| c < h).map(|&c| c + 1);
        let e = cuts.iter().find(|&&c| c >= h).copied();
        let (state, down) = decode_head(tape.get(h)[2]).unwrap();
        let geo = match (a, e) {
            (Some(a), Some(e)) => {
                if e - a + 1 < 2 * r as i64 + 1 {
                    continue;
                }
                Geometry::Bounded { a, m: e - a + 1 }
            }
            (Some(a), None) => Geometry::RightInfinite { a },
            (None, Some(e)) => Geometry::LeftInfinite { e },
            (None, None) => Geometry::Line { down },
        };
        let read = |j: i64| -> Sym {
            let (bot, c) = geo.cell(j);
            tape.get(c)[bot as usize] as Sym
        };
        let x = geo.index(down, h);
        let row = t.row(t.lookup(state, |o| read(x + o[0] as i64)));
        for (&o, &s) in t.f_out().iter().zip(row.write) {
            let (bot, c) = geo.cell(x + o[0] as i64);
            let mut cell = out.get(c);
            cell[bot as usize] = s as u32;
            out.set(c, cell);
        }
        let x2 = vadd([x as i32, 0], row.mv)[0] as i64;
        let (down2, h2) = geo.cell(x2);
        for c in h.min(h2)..=h.max(h2) {
            let mut cell = out.get(c);
            cell[2] = match c.cmp(&h2) {
                std::cmp::Ordering::Less => RIGHT,
                std::cmp::Ordering::Greater => LEFT,
                std::cmp::Ordering::Equal => head_code(row.state, down2),
            };
            out.set(c, cell);
        }
    }
    out.trim();
    Ok(out)
}

/// All contents of one isolated headed zone of length `len`: top and bottom words,
/// head offset, state and track. There are `2 k len n^{2 len}` of them.
pub fn zone_configs(n: u32, k: u32, len: usize) -> Vec<CaTape1D> {
    let left = [0, 0, LEFT];
    let right = [0, 0, RIGHT];
    let words = (n as usize).pow(2 * len as u32);
    let mut out = vec![];
    let mut digits = vec![0 as Sym; 2 * len];
    for w in 0..words {
        crate::machine::decode_pattern(w, n, 2 * len, &mut digits);
        for o in 0..len {
            for q in 1..=k {
                for down in [false, true] {
                    let cells = (0..len)
                        .map(|i| {
                            let tr = match i.cmp(&o) {
                                std::cmp::Ordering::Less => RIGHT,
                                std::cmp::Ordering::Greater => LEFT,
                                std::cmp::Ordering::Equal => head_code(q, down),
                            };
                            [digits[i] as u32, digits[len + i] as u32, tr]
                        })
                        .collect();
                    out.push(CaTape1D { left, right, lo: 0, cells });
                }
            }
        }
    }
    out
}

/// Order of the automaton restricted to the isolated zones of length `len`.
pub fn zone_order(ca: &CellularAutomaton, len: usize) -> Result<BigUint> {
    let CaRule::Conveyor { machine, .. } = &ca.rule else {
        return Err(Error::Invalid("not a conveyor automaton".into()));
    };
    let p = machine.params();
    let configs = zone_configs(p.n, p.k, len);
    let index: HashMap<&CaTape1D, usize> = configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut image = vec![0; configs.len()];
    for (i, c) in configs.iter().enumerate() {
        let d = ca.apply_conveyor(c)?;
        image[i] = *index.get(&d).ok_or_else(|| Error::Invalid("zone left its shape".into()))?;
    }
    let mut seen = vec![false; configs.len()];
    let mut order = BigUint::one();
    for s in 0..configs.len() {
        let mut len = 0u64;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = image[i];
            len += 1;
        }
        if len > 0 {
            order = num_integer::Integer::lcm(&order, &BigUint::from(len));
        }
    }
    Ok(order)
}

/// `∏_{m ≤ h} (2 k m n^{2m})!`.
pub fn factorial_bound(n: u32, k: u32, h: usize) -> BigUint {
    let mut total = BigUint::one();
    for m in 1..=h as u32 {
        let size = 2 * k as u64 * m as u64 * (n as u64).pow(2 * m);
        for i in 2..=size {
            total *= i;
        }
    }
    total
}
