//! Conditional flips built from short controlled swaps and local permutations.
//!
//! The head sits on the `1` or the `0` of a `10` pair (bit `c` = 0 or 1). With the
//! `1` at cell `o`, `u` fills cells `o + 2 ..= o + ℓ` and `b` is cell `o + ℓ + 1`.

use crate::algebra::{compose_all, invert};
use crate::error::{Error, Result};
use crate::machine::{Machine, Params, Sym, Vect};
use crate::zoo::{make_controlled_position_swap, make_local_permutation};

/// Offset of the `1` relative to the head, if the head is on a `10` pair.
fn frame(p: &[Sym], at: impl Fn(i32) -> usize) -> Option<i32> {
    if p[at(0)] == 1 && p[at(1)] == 0 {
        Some(0)
    } else if p[at(-1)] == 1 && p[at(0)] == 0 {
        Some(-1)
    } else {
        None
    }
}

/// Local permutation over cells `-1..=ell + 1` acting through the frame.
fn framed<F>(params: Params, ell: usize, f: F) -> Result<Machine>
where
    F: Fn(&mut [Sym], &dyn Fn(i32) -> usize),
{
    let window: Vec<Vect> = (-1..=ell as i32 + 1).map(|i| [i, 0]).collect();
    make_local_permutation(params, &window, |p, q| {
        let mut w = p.to_vec();
        if let Some(o) = frame(p, |i| (i + 1) as usize) {
            let at = move |i: i32| (o + i + 1) as usize;
            f(&mut w, &at);
        }
        (w, q)
    })
}

/// `h`: `10ub -> 10bu`.
fn bring_b_forward(params: Params, ell: usize) -> Result<Machine> {
    framed(params, ell, |w, at| {
        let b = w[at(ell as i32 + 1)];
        for i in (3..=ell as i32 + 1).rev() {
            w[at(i)] = w[at(i - 1)];
        }
        if ell >= 1 {
            w[at(2)] = b;
        }
    })
}

/// Adds `delta` to `b` when `u = 0^{ℓ-1}` (or always, with `always`); restricted to
/// `b ∈ {0, 1}` flips with `flip01`.
fn touch_b(params: Params, ell: usize, always: bool, flip01: bool, delta: Sym) -> Result<Machine> {
    let n = params.n as Sym;
    framed(params, ell, move |w, at| {
        if !always && (2..=ell as i32).any(|i| w[at(i)] != 0) {
            return;
        }
        let b = &mut w[at(ell as i32 + 1)];
        if flip01 {
            if *b <= 1 {
                *b = 1 - *b;
            }
        } else {
            *b = (*b + delta) % n;
        }
    })
}

/// `f'`: flips `c` iff `b = 0`.
fn flip_if_b_zero(params: Params, ell: usize) -> Result<Machine> {
    let g = make_controlled_position_swap(params, &[], 1, &[0, 0])?;
    let h = bring_b_forward(params, ell)?;
    let hi = invert(&h)?;
    compose_all(&[&h, &g, &hi])
}

/// `T_{ε,1,0^ℓ}` as `(f'' ∘ f')^n` for even `n`.
pub fn el_even_swap(params: Params, ell: usize) -> Result<Machine> {
    if params.d != 1 || params.k != 1 || params.n % 2 != 0 || ell == 0 {
        return Err(Error::InvalidParams("even construction needs d = 1, k = 1, even n, ℓ >= 1".into()));
    }
    let f1 = flip_if_b_zero(params, ell)?;
    let f2 = touch_b(params, ell, false, false, 1)?;
    let word: Vec<&Machine> = (0..params.n).flat_map(|_| [&f1, &f2]).collect();
    compose_all(&word)
}

/// `T_{ε,1,0^ℓ}` for odd `n >= 3`, one control letter at a time from `T_{ε,1,00}`.
pub fn el_odd_swap(params: Params, ell: usize) -> Result<Machine> {
    if params.d != 1 || params.k != 1 || params.n % 2 != 1 || params.n < 3 || ell < 2 {
        return Err(Error::InvalidParams("odd construction needs d = 1, k = 1, odd n >= 3, ℓ >= 2".into()));
    }
    let mut prev = make_controlled_position_swap(params, &[], 1, &[0, 0])?;
    for l in 2..ell {
        let a = touch_b(params, l, false, true, 0)?;
        let b = flip_if_b_zero(params, l)?;
        let g2 = compose_all(&[&a, &b, &a, &b])?;
        let h = touch_b(params, l, true, false, 2)?;
        let hi = invert(&h)?;
        let half = (params.n as usize - 1) / 2;
        let mut word: Vec<&Machine> = vec![];
        for _ in 0..half {
            word.push(&h);
            word.push(&g2);
        }
        word.extend(std::iter::repeat(&hi).take(half));
        word.push(&prev);
        prev = compose_all(&word)?;
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::power;

    #[test]
    fn even_matches_direct_swap() {
        for (n, ell) in [(2, 1), (2, 2), (2, 3), (4, 2)] {
            let p = Params::new(1, n, 1).unwrap();
            let m = el_even_swap(p, ell).unwrap();
            let direct = make_controlled_position_swap(p, &[], 1, &vec![0; ell]).unwrap();
            assert_eq!(m, direct, "n={n} ell={ell}");
            assert!(power(&m, 2).unwrap().is_identity());
        }
    }

    #[test]
    fn odd_matches_direct_swap() {
        for ell in [2, 3, 4] {
            let p = Params::new(1, 3, 1).unwrap();
            let m = el_odd_swap(p, ell).unwrap();
            let direct = make_controlled_position_swap(p, &[], 1, &vec![0; ell]).unwrap();
            assert_eq!(m, direct, "ell={ell}");
        }
    }
}
