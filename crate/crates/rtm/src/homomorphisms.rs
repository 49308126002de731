//! Shift indicator, average movement, head index and parity characters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::algebra::{compose, invert, is_reversible};
use crate::error::{Error, Result};
use crate::machine::{decode_pattern, vneg, Machine, Params, Sym, Vect, ZERO};

/// One exact rational per coordinate.
pub type RationalVec = Vec<BigRational>;

/// `s(x, q)`: the tape shift of one moving-tape step, the negated move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftIndicator {
    pub params: Params,
    pub f_in: Vec<Vect>,
    /// Row `pat * k + q - 1`.
    pub table: Vec<Vect>,
}

impl ShiftIndicator {
    pub fn value(&self, pattern_index: usize, q: u32) -> Vect {
        self.table[pattern_index * self.params.k as usize + q as usize - 1]
    }
}

pub fn shift_indicator(t: &Machine) -> ShiftIndicator {
    ShiftIndicator {
        params: t.params(),
        f_in: t.f_in().to_vec(),
        table: (0..t.num_rows()).map(|i| vneg(t.row(i).mv)).collect(),
    }
}

/// `α(T)`, reported as the expected head movement (`α(shift v) = v`).
pub fn average_movement(t: &Machine) -> RationalVec {
    let d = t.params().d as usize;
    let rows = BigInt::from(t.num_rows());
    (0..d)
        .map(|i| {
            let sum: i64 = (0..t.num_rows()).map(|r| t.row(r).mv[i] as i64).sum();
            BigRational::new(BigInt::from(sum), rows.clone())
        })
        .collect()
}

pub fn format_rational_vec(v: &RationalVec) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// `(L, R)` with `L + R = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeadIndex {
    pub l: i64,
    pub r: i64,
}

fn require_rfa_1d(t: &Machine) -> Result<()> {
    if t.params().d != 1 {
        return Err(Error::Unsupported("head index is one-dimensional".into()));
    }
    if !t.f_out().is_empty() {
        return Err(Error::NotRfa);
    }
    Ok(())
}

/// A safe bound on the biradius of the permutation model, in head positions
/// `eta(v, q) = k v + q - 1`.
pub fn biradius(t: &Machine) -> Result<i64> {
    require_rfa_1d(t)?;
    let inv = invert(t)?;
    let k = t.params().k as i64;
    let cell = [t, &inv]
        .iter()
        .map(|m| m.move_radius() as i64 + m.in_radius().max(0) as i64)
        .max()
        .unwrap()
        .max(1);
    Ok(k * cell + k - 1)
}

/// Places heads on positions `[r, k|u| - r)`, applies `t` to each and counts.
pub fn head_index_word(t: &Machine, u: &[Sym], r: i64) -> Result<HeadIndex> {
    require_rfa_1d(t)?;
    if !is_reversible(t) {
        return Err(Error::NotReversible);
    }
    let need = biradius(t)?;
    if r < need {
        return Err(Error::Invalid(format!("r = {r} below the biradius {need}")));
    }
    let k = t.params().k as i64;
    let span = k * u.len() as i64;
    if span < 4 * r {
        return Err(Error::WordTooShort { need: num_integer::Integer::div_ceil(&(4 * r), &k) as usize, got: u.len() });
    }
    let read = |c: i64| -> Sym {
        if (0..u.len() as i64).contains(&c) {
            u[c as usize]
        } else {
            0
        }
    };
    let mut left = 0i64;
    for eta in r..span - r {
        let (v, q) = (eta.div_euclid(k), (eta.rem_euclid(k) + 1) as u32);
        let row = t.row(t.lookup(q, |c| read(v + c[0] as i64)));
        let eta2 = k * (v + row.mv[0] as i64) + row.state as i64 - 1;
        if (0..2 * r).contains(&eta2) {
            left += 1;
        }
    }
    Ok(HeadIndex { l: left - r, r: r - left })
}

/// `H_T` on the full shift, read off an all-zero word.
pub fn orbitwise_shift_value(t: &Machine) -> Result<i64> {
    let r = biradius(t)?;
    let k = t.params().k as i64;
    let len = num_integer::Integer::div_ceil(&(4 * r), &k) as usize + 1;
    Ok(head_index_word(t, &vec![0; len], r)?.l)
}

/// Default cap on the number of enumerated points.
pub const PARITY_CAP: u128 = 1 << 20;

/// Sign (0 even, 1 odd) of the permutation on `(t, …, t)`-periodic points × `Q`.
pub fn parity_character(t: &Machine, period: u32) -> Result<u8> {
    parity_character_capped(t, period, PARITY_CAP)
}

pub fn parity_character_capped(t: &Machine, period: u32, cap: u128) -> Result<u8> {
    let p = t.params();
    if period < 2 {
        return Err(Error::Invalid("period must be at least 2".into()));
    }
    if !t.f_out().is_empty() {
        return Err(Error::NotRfa);
    }
    if !is_reversible(t) {
        return Err(Error::NotReversible);
    }
    let d = p.d as u32;
    let cells = period.pow(d) as usize;
    let words = (p.n as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    let points = words.saturating_mul(p.k as u128);
    if points > cap {
        return Err(Error::TooLarge(points));
    }
    let (words, k) = (words as usize, p.k as usize);
    let tt = period as i32;
    let cell_index = |v: Vect| -> usize {
        let x = v[0].rem_euclid(tt) as usize;
        let y = if d == 2 { v[1].rem_euclid(tt) as usize } else { 0 };
        y * period as usize + x
    };
    let mut image = vec![0usize; words * k];
    let mut w = vec![0 as Sym; cells];
    let mut w2 = vec![0 as Sym; cells];
    for wi in 0..words {
        decode_pattern(wi, p.n, cells, &mut w);
        for q in 1..=p.k {
            let row = t.row(t.lookup(q, |c| w[cell_index(c)]));
            // re-centre: new word at u reads the old word at u + move
            for y in 0..if d == 2 { tt } else { 1 } {
                for x in 0..tt {
                    let u = [x, y];
                    w2[cell_index(u)] = w[cell_index([u[0] + row.mv[0], u[1] + row.mv[1]])];
                }
            }
            let wj = crate::machine::encode_pattern(&w2, p.n);
            image[wi * k + q as usize - 1] = wj * k + row.state as usize - 1;
        }
    }
    Ok(permutation_sign(&image))
}

/// 0 for even, 1 for odd. `perm` must be a bijection of `0..len`.
pub fn permutation_sign(perm: &[usize]) -> u8 {
    let mut seen = vec![false; perm.len()];
    let mut parity = 0usize;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        parity += len - 1;
    }
    (parity % 2) as u8
}

/// The involution `T_t`: in state 1, if the `t`-box at the head holds a single `1`
/// at the head, step to `-e_1`; if the box at `e_1` holds a single `1` at `e_1`,
/// step to `+e_1`. Other states are untouched.
pub fn make_parity_machine(params: Params, period: u32) -> Result<Machine> {
    if params.n < 2 {
        return Err(Error::InvalidParams("parity machines need n >= 2".into()));
    }
    if period < 2 {
        return Err(Error::Invalid("period must be at least 2".into()));
    }
    let t = period as i32;
    let ys: Vec<i32> = if params.d == 2 { (0..t).collect() } else { vec![0] };
    let window: Vec<Vect> = ys.iter().flat_map(|&y| (0..=t).map(move |x| [x, y])).collect();
    let mut sorted = window.clone();
    sorted.sort();
    let idx = |v: Vect| sorted.binary_search(&v).unwrap();
    let box_at = |ox: i32| -> Vec<(usize, bool)> {
        ys.iter().flat_map(|&y| (0..t).map(move |x| ([ox + x, y], x == 0 && y == 0))).map(|(v, c)| (idx(v), c)).collect()
    };
    let b0 = box_at(0);
    let b1 = box_at(1);
    let single = |p: &[Sym], b: &[(usize, bool)]| b.iter().all(|&(i, c)| p[i] == if c { 1 } else { 0 });
    Machine::from_fn(params, &sorted, |p, q| {
        let mv = if q != 1 {
            ZERO
        } else if single(p, &b0) {
            [-1, 0]
        } else if single(p, &b1) {
            [1, 0]
        } else {
            ZERO
        };
        (p.to_vec(), q, mv)
    })
}

/// The greedy product realizing `target[t - 2]` at each period `t = 2..`.
pub fn greedy_parity_product(params: Params, target: &[u8]) -> Result<Machine> {
    let mut m = Machine::identity(params);
    for (i, &y) in target.iter().enumerate() {
        let t = i as u32 + 2;
        if parity_character(&m, t)? != y {
            m = compose(&make_parity_machine(params, t)?, &m)?;
        }
    }
    Ok(m)
}

/// Whether every coordinate of `α` is a multiple of `1/k`.
pub fn alpha_in_k_lattice(t: &Machine) -> bool {
    let k = BigInt::from(t.params().k);
    average_movement(t).iter().all(|a| (a * BigRational::from_integer(k.clone())).is_integer())
}

/// `α` as `i64` per coordinate when integral.
pub fn integral_alpha(t: &Machine) -> Option<Vec<i64>> {
    average_movement(t).iter().map(|a| if a.is_integer() { a.to_integer().to_i64() } else { None }).collect()
}
