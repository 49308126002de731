//! Fixed machines shared by the benchmarks.

use rtm::algebra::compose_all;
use rtm::machine::{Machine, Params};
use rtm::zoo::{make_controlled_position_swap, make_controlled_state_swap, make_shift, make_surf};

pub fn p1(n: u32, k: u32) -> Params {
    Params::new(1, n, k).unwrap()
}

/// A radius-2 product of swaps, a shift and a surf machine (n = 2, k = 2).
pub fn mixed() -> Machine {
    let p = p1(2, 2);
    let ms = [
        make_controlled_position_swap(p, &[0], 1, &[1]).unwrap(),
        make_shift(p, [1, 0]).unwrap(),
        make_controlled_state_swap(p, &[1], 1, &[]).unwrap(),
        make_surf(p, 1).unwrap(),
    ];
    compose_all(&ms.iter().collect::<Vec<_>>()).unwrap()
}

/// Two non-commuting swaps of order 2 with n = 2, k = 1.
pub fn swap_pair() -> [Machine; 2] {
    let p = p1(2, 1);
    [
        make_controlled_position_swap(p, &[0, 1], 1, &[]).unwrap(),
        make_controlled_position_swap(p, &[], 1, &[0, 0]).unwrap(),
    ]
}
