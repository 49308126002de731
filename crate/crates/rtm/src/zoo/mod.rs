//! Constructors for the standard machine families and subgroup predicates.

mod classical;
mod el;
mod elim;
mod recode;
mod rfa_decomp;

pub use classical::{classical_from_table, classical_table, decompose_classical, ClassicalDecomposition, ClassicalError};
pub use el::{el_even_swap, el_odd_swap};
pub use elim::{decode_sparse, eliminate_states, encode_sparse, eta};
pub use recode::{recode_power, recode_with_radius, RecodeInfo};
pub use rfa_decomp::{decompose_rfa, recompose, DecomposeOutcome, SwapDecomposition};

use std::collections::HashSet;

use crate::algebra::ClopenSet;
use crate::error::{Error, Result};
use crate::machine::{Machine, Params, Sym, Vect, ZERO};

fn require_1d(params: Params) -> Result<()> {
    if params.d != 1 {
        return Err(Error::Unsupported(format!("d = {} (one-dimensional construction)", params.d)));
    }
    Ok(())
}

/// Head moves by `v`; tape and state untouched.
pub fn make_shift(params: Params, v: Vect) -> Result<Machine> {
    if params.d == 1 && v[1] != 0 {
        return Err(Error::Invalid(format!("move {v:?} is not one-dimensional")));
    }
    Machine::from_fn(params, &[], |_, q| (vec![], q, v))
}

/// `pi[q - 1]` is the image of state `q`.
pub fn make_state_permutation(params: Params, pi: &[u32]) -> Result<Machine> {
    let mut seen: Vec<u32> = pi.to_vec();
    seen.sort();
    if seen != (1..=params.k).collect::<Vec<_>>() {
        return Err(Error::NotBijective(format!("{pi:?} is not a permutation of 1..={}", params.k)));
    }
    Machine::from_fn(params, &[], |_, q| (vec![], pi[q as usize - 1], ZERO))
}

/// Applies `map` to the pattern on `support` (sorted order) and the state, without moving.
pub fn make_local_permutation<F>(params: Params, support: &[Vect], map: F) -> Result<Machine>
where
    F: Fn(&[Sym], u32) -> (Vec<Sym>, u32),
{
    let mut images = HashSet::new();
    let mut collision = None;
    let m = Machine::from_fn(params, support, |p, q| {
        let (w, r) = map(p, q);
        if !images.insert((w.clone(), r)) && collision.is_none() {
            collision = Some((p.to_vec(), q));
        }
        (w, r, ZERO)
    })?;
    if let Some((p, q)) = collision {
        return Err(Error::NotBijective(format!("image of ({p:?}, {q}) is hit twice")));
    }
    Ok(m)
}

/// The surfing machine on the window `0..=m`.
pub fn make_surf(params: Params, m: usize) -> Result<Machine> {
    require_1d(params)?;
    let window: Vec<Vect> = (0..=m as i32).map(|i| [i, 0]).collect();
    let k = params.k;
    Machine::from_fn(params, &window, |p, q| {
        if p[..m].iter().any(|&s| s != 0) {
            return (p.to_vec(), q, ZERO);
        }
        if q < k {
            (p.to_vec(), q + 1, ZERO)
        } else {
            let mut w = vec![0; m + 1];
            w[0] = p[m];
            (w, 1, [1, 0])
        }
    })
}

fn is_unary(w: &[Sym]) -> bool {
    w.windows(2).all(|p| p[0] == p[1])
}

fn check_symbols(params: Params, w: &[Sym]) -> Result<()> {
    if let Some(&s) = w.iter().find(|&&s| s as u32 >= params.n) {
        return Err(Error::Invalid(format!("symbol {s} out of range")));
    }
    Ok(())
}

/// `T_{u,a,v}`: swaps the head between the cell of `a` and its right neighbour
/// whenever the tape reads `u a v` around it. Acts in every state.
pub fn make_controlled_position_swap(params: Params, u: &[Sym], a: Sym, v: &[Sym]) -> Result<Machine> {
    require_1d(params)?;
    let word: Vec<Sym> = u.iter().copied().chain(std::iter::once(a)).chain(v.iter().copied()).collect();
    check_symbols(params, &word)?;
    if is_unary(&word) {
        return Err(Error::UnaryControl(word));
    }
    let lo = -(u.len() as i32);
    let c = ClopenSet::from_cylinders(params, &[(crate::machine::Pattern::word(lo, &word), None)])?;
    make_clopen_swap(&c)
}

/// `T_C`: move right when the head lies in `C`, left when its left neighbour does.
pub fn make_clopen_swap(c: &ClopenSet) -> Result<Machine> {
    let params = c.params();
    require_1d(params)?;
    let w = c.window();
    let mut window: Vec<Vect> = w.iter().copied().chain(w.iter().map(|&x| [x[0] - 1, 0])).collect();
    window.sort();
    window.dedup();
    let here: Vec<usize> = w.iter().map(|x| window.binary_search(x).unwrap()).collect();
    let left: Vec<usize> = w.iter().map(|x| window.binary_search(&[x[0] - 1, 0]).unwrap()).collect();
    let mut overlap = false;
    let m = Machine::from_fn(params, &window, |p, q| {
        let a: Vec<Sym> = here.iter().map(|&j| p[j]).collect();
        let b: Vec<Sym> = left.iter().map(|&j| p[j]).collect();
        match (c.contains_pattern(&a, q), c.contains_pattern(&b, q)) {
            (true, true) => {
                overlap = true;
                (p.to_vec(), q, ZERO)
            }
            (true, false) => (p.to_vec(), q, [1, 0]),
            (false, true) => (p.to_vec(), q, [-1, 0]),
            (false, false) => (p.to_vec(), q, ZERO),
        }
    })?;
    if overlap {
        return Err(Error::Overlap);
    }
    Ok(m)
}

/// `f_{u,q,v}`: swaps states `q` and `q + 1` when `x_{[-|u|, |v|-1]} = uv`.
pub fn make_controlled_state_swap(params: Params, u: &[Sym], q: u32, v: &[Sym]) -> Result<Machine> {
    require_1d(params)?;
    if params.k < 2 {
        return Err(Error::InvalidParams("controlled state swap needs k >= 2".into()));
    }
    if q == 0 || q >= params.k {
        return Err(Error::Invalid(format!("state {q} must lie in 1..{}", params.k)));
    }
    let word: Vec<Sym> = u.iter().chain(v).copied().collect();
    check_symbols(params, &word)?;
    let lo = -(u.len() as i32);
    let window: Vec<Vect> = (0..word.len() as i32).map(|i| [lo + i, 0]).collect();
    Machine::from_fn(params, &window, |p, r| {
        let r2 = if p != word.as_slice() {
            r
        } else if r == q {
            q + 1
        } else if r == q + 1 {
            q
        } else {
            r
        };
        (p.to_vec(), r2, ZERO)
    })
}

/// `(xu.avy, k) <-> (xua.vy, 1)`.
pub fn make_stateful_position_swap(params: Params, u: &[Sym], a: Sym, v: &[Sym]) -> Result<Machine> {
    require_1d(params)?;
    let k = params.k;
    if k < 2 {
        return Err(Error::InvalidParams("stateful position swap needs k >= 2".into()));
    }
    let word: Vec<Sym> = u.iter().copied().chain(std::iter::once(a)).chain(v.iter().copied()).collect();
    check_symbols(params, &word)?;
    let lo = -(u.len() as i32);
    let len = word.len() as i32;
    // a at offset 0 (state k) or at offset -1 (state 1)
    let window: Vec<Vect> = (lo - 1..lo + len).map(|i| [i, 0]).collect();
    Machine::from_fn(params, &window, |p, q| {
        let at = |shift: usize| p[shift..shift + word.len()] == word[..];
        if q == k && at(1) {
            (p.to_vec(), 1, [1, 0])
        } else if q == 1 && at(0) {
            (p.to_vec(), k, [-1, 0])
        } else {
            (p.to_vec(), q, ZERO)
        }
    })
}

/// Subgroup membership flags.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub identity: bool,
    pub rfa: bool,
    pub lp: bool,
    pub sp: bool,
    pub oblivious: bool,
    pub classical: bool,
}

impl Flags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut v = vec![];
        for (on, name) in [
            (self.identity, "identity"),
            (self.rfa, "rfa"),
            (self.lp, "lp"),
            (self.sp, "sp"),
            (self.oblivious, "oblivious"),
            (self.classical, "classical"),
        ] {
            if on {
                v.push(name);
            }
        }
        v
    }
}

/// Constant move of the table, if any.
pub fn constant_move(t: &Machine) -> Option<Vect> {
    let first = t.row(0).mv;
    (0..t.num_rows()).all(|i| t.row(i).mv == first).then_some(first)
}

pub fn classify(t: &Machine) -> Flags {
    let rfa = t.f_out().is_empty();
    let cm = constant_move(t);
    let lp = cm == Some(ZERO);
    Flags {
        identity: t.is_identity(),
        rfa,
        lp,
        sp: lp && rfa,
        oblivious: cm.is_some(),
        classical: t.params().d == 1 && t.in_radius() <= 0 && t.out_radius().unwrap_or(0) <= 0 && t.move_radius() <= 1,
    }
}
