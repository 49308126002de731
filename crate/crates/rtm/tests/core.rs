//! Machines, configurations and the algebra checked against direct simulation.

mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

use rtm::algebra::{
    compose, compose_all, equals, group_closure, image_measure, invert, is_reversible, power, word_is_identity,
    ClopenSet, Closure,
};
use rtm::config::{step_moving_head, step_moving_tape, Configuration, HeadedConfig};
use rtm::machine::{normalize, LocalRule, Machine, Params, Pattern, RuleEntry, Sym, Vect, ZERO};
use rtm::symbolic::word_acts_trivially;
use rtm::zoo::{
    classical_from_table, decompose_classical, make_controlled_position_swap, make_local_permutation, make_shift,
    make_surf,
};

use common::*;

fn z2() -> Params {
    Params::new(2, 2, 2).unwrap()
}

/// The drawn 2D rule: `(1, 0, 1)` on `(0,0), (1,0), (1,1)` in state 1 becomes `(0, 1, 0)`,
/// state 2, move `(1,1)`; every other entry is the identity.
fn drawn_machine() -> Machine {
    let window: [Vect; 3] = [[0, 0], [1, 0], [1, 1]];
    Machine::from_fn(z2(), &window, |p, q| {
        if p == [1, 0, 1] && q == 1 {
            (vec![0, 1, 0], 2, [1, 1])
        } else {
            (p.to_vec(), q, ZERO)
        }
    })
    .unwrap()
}

#[test]
fn shift_rule_has_empty_neighbourhoods() {
    let p = Params::new(1, 2, 1).unwrap();
    let entries = (0..2)
        .map(|s| RuleEntry { read: vec![s], state: 1, write: vec![s], new_state: 1, mv: [1, 0] })
        .collect();
    let t = normalize(&LocalRule { f_in: vec![ZERO], f_out: vec![ZERO], entries }, p).unwrap();
    assert!(t.f_in().is_empty() && t.f_out().is_empty());
    assert_eq!(t.in_radius(), -1);
    assert_eq!(t.row(0).mv, [1, 0]);
    assert!(equals(&t, &make_shift(p, [1, 0]).unwrap()).unwrap());
    let id = normalize(&LocalRule { f_in: vec![], f_out: vec![], entries: vec![RuleEntry { read: vec![], state: 1, write: vec![], new_state: 1, mv: ZERO }] }, p).unwrap();
    assert!(id.is_identity() && id.f_in().is_empty());
}

#[test]
fn drawn_rule_keeps_its_supports() {
    let t = drawn_machine();
    let f: Vec<Vect> = vec![[0, 0], [1, 0], [1, 1]];
    assert_eq!(t.f_in(), &f[..]);
    assert_eq!(t.f_out(), &f[..]);
    let x = Configuration::finite(0, [([0, 0], 1), ([1, 1], 1), ([-1, 0], 1)]);
    let out = step_moving_head(&t, &HeadedConfig::new(x.clone(), ZERO, 1));
    let want = Configuration::finite(0, [([1, 0], 1), ([-1, 0], 1)]);
    assert_eq!(out, HeadedConfig::new(want.clone(), [1, 1], 2));
    let (tape, q) = step_moving_tape(&t, &x, 1);
    assert_eq!((tape, q), (want.translate([-1, -1]), 2));
}

#[test]
fn moving_tape_shift() {
    let p = Params::new(1, 3, 1).unwrap();
    let x = Configuration::periodic(&[0, 2, 1, 1]).unwrap();
    let (y, q) = step_moving_tape(&make_shift(p, [1, 0]).unwrap(), &x, 1);
    assert_eq!((y, q), (x.translate([-1, 0]), 1));
}

#[test]
fn periodic_words_are_canonical() {
    let a = Configuration::periodic(&[1, 0, 1, 0]).unwrap();
    let b = Configuration::periodic(&[0, 1]).unwrap().translate([1, 0]);
    assert_eq!(a, b);
    assert_ne!(a, Configuration::periodic(&[0, 1]).unwrap());
    for i in -5..5 {
        assert_eq!(a.get([i, 0]), (i.rem_euclid(2) == 0) as Sym);
    }
}

#[test]
fn algebra_examples() {
    let p = Params::new(1, 2, 1).unwrap();
    let s = |v| make_shift(p, [v, 0]).unwrap();
    assert!(equals(&compose(&s(2), &s(-3)).unwrap(), &s(-1)).unwrap());
    assert!(!equals(&s(1), &s(-1)).unwrap());
    assert!(equals(&invert(&s(3)).unwrap(), &s(-3)).unwrap());
    assert!(equals(&power(&s(1), 3).unwrap(), &s(3)).unwrap());
    assert!(power(&s(1), 0).unwrap().is_identity());
    let sw = make_controlled_position_swap(p, &[0], 1, &[]).unwrap();
    assert!(compose(&sw, &sw).unwrap().is_identity());
    assert!(equals(&invert(&sw).unwrap(), &sw).unwrap());
    assert!(equals(&power(&sw, 1).unwrap(), &sw).unwrap());
    let w0 = Machine::from_fn(p, &[ZERO], |_, q| (vec![0], q, ZERO)).unwrap();
    assert!(!is_reversible(&w0));
    assert!(invert(&w0).is_err() && power(&w0, -1).is_err());
    for m in 0..4 {
        assert!(is_reversible(&make_surf(p, m).unwrap()));
    }
}

/// Brute-force search for a configuration (radius-3 window, head at 0) on which two
/// 1D machines disagree.
fn disagreement(a: &Machine, b: &Machine) -> Option<(Vec<Sym>, u32)> {
    let p = a.params();
    let w = 3;
    for i in 0..(p.n as usize).pow(2 * w as u32 + 1) {
        let x: Vec<Sym> = (0..2 * w + 1).map(|j| (i / (p.n as usize).pow(j as u32) % p.n as usize) as Sym).collect();
        for q in 1..=p.k {
            if step_array(a, &x, -w, 0, q) != step_array(b, &x, -w, 0, q) {
                return Some((x, q));
            }
        }
    }
    None
}

#[test]
fn non_commuting_pair() {
    let p = Params::new(1, 2, 1).unwrap();
    let f = make_local_permutation(p, &[ZERO], |s, q| (vec![1 - s[0]], q)).unwrap();
    let g = make_controlled_position_swap(p, &[], 0, &[1]).unwrap();
    let (gf, fg) = (compose(&g, &f).unwrap(), compose(&f, &g).unwrap());
    assert!(!equals(&gf, &fg).unwrap());
    assert!(disagreement(&gf, &fg).is_some());
    assert!(!word_is_identity(&[(0, 1), (1, 1), (0, -1), (1, -1)], &[f.clone(), g.clone()]).unwrap());
    assert!(word_is_identity(&[], &[f.clone()]).unwrap());
    assert!(word_is_identity(&[(1, 1), (1, 1)], &[f, g]).unwrap());
}

#[test]
fn classical_inverse_is_shift_then_permutation() {
    let p = Params::new(1, 2, 2).unwrap();
    let t = classical_from_table(p, &[(1, 2, 1), (0, 1, -1), (0, 2, 1), (1, 1, -1)]).unwrap();
    let d = decompose_classical(&t).unwrap();
    let (t0, t1) = (d.t0().unwrap(), d.t1().unwrap());
    // T = T1 ∘ T0, so T⁻¹ applies T1⁻¹ (a shift) and then T0⁻¹ (a permutation)
    let inv = compose(&invert(&t0).unwrap(), &invert(&t1).unwrap()).unwrap();
    assert!(equals(&invert(&t).unwrap(), &inv).unwrap());
    assert!(invert(&t1).unwrap().f_in().is_empty() && invert(&t0).unwrap().row(0).mv == ZERO);
}

#[test]
fn cylinder_images_keep_their_measure() {
    let mut rng = rng(21);
    for _ in 0..20 {
        let p = p1(2, 2);
        let t = random_reversible(&mut rng, p, 2);
        let f = t.f_in().to_vec();
        let syms: Vec<Sym> = f.iter().map(|_| rng.gen_range(0..2)).collect();
        let pat = Pattern::new(f.iter().copied().zip(syms).collect()).unwrap();
        let q = rng.gen_range(1..=2);
        let s = ClopenSet::from_cylinders(p, &[(pat, Some(q))]).unwrap();
        let want = BigRational::new(1.into(), (2i64 * 2i64.pow(f.len() as u32)).into());
        assert_eq!(image_measure(&t, &s).unwrap(), want);
    }
}

#[test]
fn closures() {
    let p = Params::new(1, 2, 1).unwrap();
    let one = |c: Closure| (c.is_closed(), c.elements().len());
    assert_eq!(one(group_closure(&[Machine::identity(p)], 100).unwrap()), (true, 1));
    let a = make_controlled_position_swap(p, &[0, 1], 1, &[]).unwrap();
    assert_eq!(one(group_closure(&[a.clone()], 100).unwrap()), (true, 2));
    let b = make_controlled_position_swap(p, &[], 1, &[0, 0]).unwrap();
    let c = group_closure(&[a.clone(), b.clone()], 100).unwrap();
    assert_eq!(one(c), (true, 12));
    assert_eq!(ring_closure(&[a, b], 1..=8, 1000), Some(12));
    assert!(!group_closure(&[make_shift(p, [1, 0]).unwrap()], 50).unwrap().is_closed());
}

fn random_headed(rng: &mut rand_chacha::ChaCha8Rng, p: Params) -> HeadedConfig {
    let cells: Vec<(Vect, Sym)> = (0..8)
        .map(|_| {
            let v = if p.d == 1 { [rng.gen_range(-4..=4), 0] } else { [rng.gen_range(-2..=2), rng.gen_range(-2..=2)] };
            (v, rng.gen_range(0..p.n) as Sym)
        })
        .collect();
    let bg = rng.gen_range(0..p.n) as Sym;
    HeadedConfig::new(Configuration::finite(bg, cells), ZERO, rng.gen_range(1..=p.k))
}

fn params_of(i: u8) -> Params {
    match i % 4 {
        0 => p1(2, 1),
        1 => p1(2, 2),
        2 => p1(3, 1),
        _ => Params::new(2, 2, 1).unwrap(),
    }
}

/// Rules over a window of at most two cells in `{-1, 0, 1}`, n = 2, k ≤ 2.
fn small_rule(rng: &mut rand_chacha::ChaCha8Rng, k: u32) -> Machine {
    let cells: [Vect; 3] = [[-1, 0], [0, 0], [1, 0]];
    let mut win: Vec<Vect> = cells.to_vec();
    win.remove(rng.gen_range(0..3));
    win.truncate(rng.gen_range(0..=2));
    let table: Vec<(Vec<Sym>, u32, i32)> = (0..(1 << win.len()) * k)
        .map(|_| {
            let w = (0..win.len()).map(|_| rng.gen_range(0..2)).collect();
            (w, rng.gen_range(1..=k), rng.gen_range(-1..=1))
        })
        .collect();
    let mut row = 0;
    Machine::from_fn(Params::new(1, 2, k).unwrap(), &win, |_, _| {
        let (w, q, m) = table[row].clone();
        row += 1;
        (w, q, [m, 0])
    })
    .unwrap()
}

/// `b` is `a` with one table entry possibly changed, rebuilt over a wider window.
fn perturbed(rng: &mut rand_chacha::ChaCha8Rng, a: &Machine) -> Machine {
    let p = a.params();
    let win: Vec<Vect> = vec![[-1, 0], [0, 0], [1, 0]];
    let target = rng.gen_bool(0.5).then(|| (rng.gen_range(0..8usize), rng.gen_range(1..=p.k)));
    let mut idx = 0;
    Machine::from_fn(p, &win, |pat, q| {
        let row = a.row(a.lookup(q, |o| pat[(o[0] + 1) as usize]));
        let mut out = pat.to_vec();
        for (o, &s) in a.f_out().iter().zip(row.write) {
            out[(o[0] + 1) as usize] = s;
        }
        let mut res = (out, row.state, row.mv);
        if target == Some((idx / p.k as usize, q)) {
            res.2 = [(res.2[0] + 2).rem_euclid(3) - 1, 0];
        }
        idx += 1;
        res
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_matches_brute_force(seed in any::<u64>(), k in 1u32..=2) {
        let mut rng = rng(seed);
        let a = small_rule(&mut rng, k);
        let b = perturbed(&mut rng, &a);
        // radius 1 + 2 cells of padding: disagreement search covers radius 3
        prop_assert_eq!(a == b, disagreement(&a, &b).is_none());
        prop_assert_eq!(equals(&a, &b).unwrap(), a == b);
    }

    #[test]
    fn translation_commutes_with_steps(seed in any::<u64>(), which in any::<u8>(), dx in -5i32..5, dy in -5i32..5) {
        let p = params_of(which);
        let mut rng = rng(seed);
        let t = random_reversible(&mut rng, p, 2);
        let c = random_headed(&mut rng, p);
        let v = if p.d == 1 { [dx, 0] } else { [dx, dy] };
        prop_assert_eq!(step_moving_head(&t, &c.translate(v)), step_moving_head(&t, &c).translate(v));
    }

    #[test]
    fn headless_configurations_are_fixed(seed in any::<u64>(), which in any::<u8>()) {
        let p = params_of(which);
        let mut rng = rng(seed);
        let t = random_reversible(&mut rng, p, 2);
        let c = HeadedConfig::headless(random_headed(&mut rng, p).config);
        prop_assert_eq!(step_moving_head(&t, &c), c);
    }

    #[test]
    fn moving_tape_is_recentred_moving_head(seed in any::<u64>(), which in any::<u8>()) {
        let p = params_of(which);
        let mut rng = rng(seed);
        let t = random_reversible(&mut rng, p, 2);
        let c = random_headed(&mut rng, p);
        let h = c.head.unwrap();
        let out = step_moving_head(&t, &c);
        let h2 = out.head.unwrap();
        prop_assert_eq!(step_moving_tape(&t, &c.config, h.state), (out.config.translate([-h2.pos[0], -h2.pos[1]]), h2.state));
    }

    #[test]
    fn compose_and_invert_match_simulation(seed in any::<u64>(), which in any::<u8>()) {
        let p = params_of(which);
        let mut rng = rng(seed);
        let a = random_reversible(&mut rng, p, 2);
        let b = random_reversible(&mut rng, p, 2);
        let ba = compose(&b, &a).unwrap();
        let inv = invert(&a).unwrap();
        for _ in 0..8 {
            let c = random_headed(&mut rng, p);
            prop_assert_eq!(step_moving_head(&ba, &c), step_moving_head(&b, &step_moving_head(&a, &c)));
            prop_assert_eq!(step_moving_head(&inv, &step_moving_head(&a, &c)), c);
        }
    }

    #[test]
    fn symbolic_triviality_matches_dense(seed in any::<u64>(), len in 1usize..5) {
        let p = p1(2, 1);
        let mut rng = rng(seed);
        let gens: Vec<Machine> = (0..2).map(|_| random_position_swap(&mut rng, p)).collect();
        let word: Vec<&Machine> = (0..len).map(|_| &gens[rng.gen_range(0..2)]).collect();
        let mut w2 = word.clone();
        w2.extend(word.iter().rev());
        // a word of involutions followed by its reverse is trivial
        prop_assert!(word_acts_trivially(&w2));
        prop_assert_eq!(word_acts_trivially(&word), compose_all(&word).unwrap().is_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn json_round_trips(seed in any::<u64>(), which in any::<u8>()) {
        let p = params_of(which);
        let mut rng = rng(seed);
        let t = random_reversible(&mut rng, p, 2);
        let back = rtm::io::machine_from_json(&rtm::io::machine_to_json(&t)).unwrap();
        prop_assert_eq!(&back, &t);
        let c = random_headed(&mut rng, p);
        prop_assert_eq!(rtm::io::config_from_json(&rtm::io::config_to_json(p.d, &c), p).unwrap(), c);
    }
}
