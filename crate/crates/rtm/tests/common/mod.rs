//! Random machines and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use rtm::algebra::compose_all;
use rtm::machine::{Machine, Params, Sym, Vect, ZERO};
use rtm::zoo::{
    make_controlled_position_swap, make_controlled_state_swap, make_local_permutation, make_shift,
    make_state_permutation,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p1(n: u32, k: u32) -> Params {
    Params::new(1, n, k).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, n: u32, len: usize) -> Vec<Sym> {
    (0..len).map(|_| rng.gen_range(0..n) as Sym).collect()
}

/// A controlled position swap with contexts of total length at most 2.
pub fn random_position_swap(rng: &mut ChaCha8Rng, p: Params) -> Machine {
    loop {
        let lu = rng.gen_range(0..=1);
        let lv = rng.gen_range(0..=1);
        let u = random_word(rng, p.n, lu);
        let v = random_word(rng, p.n, lv);
        let a = rng.gen_range(0..p.n) as Sym;
        if let Ok(t) = make_controlled_position_swap(p, &u, a, &v) {
            return t;
        }
    }
}

/// A generator of the tape-preserving group: a swap, a unit shift or a state permutation.
pub fn random_rfa_generator(rng: &mut ChaCha8Rng, p: Params) -> Machine {
    match rng.gen_range(0..4) {
        0 => make_shift(p, [if rng.gen() { 1 } else { -1 }, 0]).unwrap(),
        1 if p.k > 1 => {
            let mut pi: Vec<u32> = (1..=p.k).collect();
            pi.shuffle(rng);
            make_state_permutation(p, &pi).unwrap()
        }
        2 if p.k > 1 => {
            let (lu, lv) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
            let u = random_word(rng, p.n, lu);
            let v = random_word(rng, p.n, lv);
            make_controlled_state_swap(p, &u, rng.gen_range(1..p.k), &v).unwrap()
        }
        _ => random_position_swap(rng, p),
    }
}

/// A random bijection of `Σ^support × Q`, applied in place.
pub fn random_local_permutation(rng: &mut ChaCha8Rng, p: Params, support: &[Vect]) -> Machine {
    let w = support.len();
    let count = (p.n as usize).pow(w as u32) * p.k as usize;
    let mut perm: Vec<usize> = (0..count).collect();
    perm.shuffle(rng);
    let n = p.n as usize;
    let k = p.k as usize;
    make_local_permutation(p, support, move |s, q| {
        let idx = s.iter().fold(0usize, |a, &x| a * n + x as usize) * k + q as usize - 1;
        let img = perm[idx];
        let mut out = vec![0 as Sym; w];
        let mut pat = img / k;
        for j in (0..w).rev() {
            out[j] = (pat % n) as Sym;
            pat /= n;
        }
        (out, (img % k) as u32 + 1)
    })
    .unwrap()
}

/// Products of one to three small generators, radius at most `max_radius`.
pub fn random_reversible(rng: &mut ChaCha8Rng, p: Params, max_radius: i32) -> Machine {
    loop {
        let len = rng.gen_range(1..=3);
        let mut gens = vec![];
        for _ in 0..len {
            let g = if p.d == 2 {
                match rng.gen_range(0..3) {
                    0 => make_shift(p, [rng.gen_range(-1..=1), rng.gen_range(-1..=1)]).unwrap(),
                    1 => random_local_permutation(rng, p, &[ZERO]),
                    _ => random_local_permutation(rng, p, &[ZERO, [0, 1]]),
                }
            } else {
                match rng.gen_range(0..3) {
                    0 => random_local_permutation(rng, p, &[ZERO, [1, 0]]),
                    1 => random_local_permutation(rng, p, &[ZERO]),
                    _ => random_rfa_generator(rng, p),
                }
            };
            gens.push(g);
        }
        let refs: Vec<&Machine> = gens.iter().collect();
        let t = compose_all(&refs).unwrap();
        if t.radius() <= max_radius {
            return t;
        }
    }
}

/// Products of one to three tape-preserving generators.
pub fn random_rfa(rng: &mut ChaCha8Rng, p: Params, max_radius: i32) -> Machine {
    loop {
        let len = rng.gen_range(1..=3);
        let gens: Vec<Machine> = (0..len).map(|_| random_rfa_generator(rng, p)).collect();
        let refs: Vec<&Machine> = gens.iter().collect();
        let t = compose_all(&refs).unwrap();
        if t.radius() <= max_radius {
            return t;
        }
    }
}

/// One step of a 1D machine on an array tape covering `lo..lo + tape.len()`.
/// Returns `None` if the step would touch a cell outside the array.
pub fn step_array(t: &Machine, tape: &[Sym], lo: i32, pos: i32, q: u32) -> Option<(Vec<Sym>, i32, u32)> {
    let hi = lo + tape.len() as i32;
    let inside = |c: i32| (lo..hi).contains(&c);
    for o in t.f_in().iter().chain(t.f_out()) {
        if !inside(pos + o[0]) {
            return None;
        }
    }
    let row = t.row(t.lookup(q, |o| tape[(pos + o[0] - lo) as usize]));
    let mut out = tape.to_vec();
    for (o, &s) in t.f_out().iter().zip(row.write) {
        out[(pos + o[0] - lo) as usize] = s;
    }
    Some((out, pos + row.mv[0], row.state))
}

fn all_words(n: u32, len: usize) -> impl Iterator<Item = Vec<Sym>> {
    let count = (n as usize).pow(len as u32);
    (0..count).map(move |mut i| {
        let mut w = vec![0 as Sym; len];
        for j in (0..len).rev() {
            w[j] = (i % n as usize) as Sym;
            i /= n as usize;
        }
        w
    })
}

/// `ρ`: largest offset or move of a 1D machine, at least 1.
fn reach(t: &Machine) -> i32 {
    let offs = t.f_in().iter().chain(t.f_out()).map(|o| o[0].abs()).max().unwrap_or(0);
    offs.max(t.move_radius()).max(1)
}

/// Injectivity on 0-padded tapes of radius `max(radius, 3ρ)`. Two configurations
/// with equal images differ only near heads at distance at most `2ρ`, so after a
/// translation one head sits at 0 and both fit in the window.
pub fn brute_injective(t: &Machine, radius: i32) -> bool {
    let rho = reach(t);
    let w = radius.max(3 * rho);
    let p = t.params();
    let mut seen: HashSet<(Vec<Sym>, i32, u32)> = HashSet::new();
    for x in all_words(p.n, (2 * w + 1) as usize) {
        for h in -2 * rho..=2 * rho {
            for q in 1..=p.k {
                let img = step_array(t, &x, -w, h, q).expect("window covers the rule");
                if !seen.insert(img) {
                    return false;
                }
            }
        }
    }
    true
}

/// Surjectivity on 0-padded tapes: every target with the head at 0 has a preimage
/// whose head lies within `ρ`.
pub fn brute_surjective(t: &Machine, radius: i32) -> bool {
    let rho = reach(t);
    let w = radius.max(3 * rho);
    let p = t.params();
    let mut hit: HashSet<(Vec<Sym>, u32)> = HashSet::new();
    for x in all_words(p.n, (2 * w + 1) as usize) {
        for h in -rho..=rho {
            for q in 1..=p.k {
                let (y, g, r) = step_array(t, &x, -w, h, q).expect("window covers the rule");
                if g == 0 {
                    hit.insert((y, r));
                }
            }
        }
    }
    hit.len() == (p.n as usize).pow((2 * w + 1) as u32) * p.k as usize
}

/// One step on a headed tape wrapped around a cycle.
fn ring_step(t: &Machine, tape: &[Sym], pos: usize, q: u32) -> (Vec<Sym>, usize, u32) {
    let len = tape.len() as i32;
    let at = |o: i32| (pos as i32 + o).rem_euclid(len) as usize;
    let row = t.row(t.lookup(q, |o| tape[at(o[0])]));
    let mut out = tape.to_vec();
    for (o, &s) in t.f_out().iter().zip(row.write) {
        out[at(o[0])] = s;
    }
    (out, at(row.mv[0]), row.state)
}

/// Order of the group generated by `gens` acting on all headed tapes of the cycles
/// of lengths in `lens`, by breadth-first search over permutations. `None` past `cap`.
pub fn ring_closure(gens: &[Machine], lens: std::ops::RangeInclusive<usize>, cap: usize) -> Option<usize> {
    let p = gens[0].params();
    let mut points: Vec<(Vec<Sym>, usize, u32)> = vec![];
    for len in lens {
        for x in all_words(p.n, len) {
            for pos in 0..len {
                for q in 1..=p.k {
                    points.push((x.clone(), pos, q));
                }
            }
        }
    }
    let index: HashMap<&(Vec<Sym>, usize, u32), u32> = points.iter().enumerate().map(|(i, c)| (c, i as u32)).collect();
    let perms: Vec<Vec<u32>> = gens
        .iter()
        .map(|g| points.iter().map(|(x, pos, q)| index[&ring_step(g, x, *pos, *q)]).collect())
        .collect();
    let id: Vec<u32> = (0..points.len() as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in &perms {
            let next: Vec<u32> = e.iter().map(|&i| g[i as usize]).collect();
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(seen.len())
}
