//! Acceptance suite: one PASS/FAIL line per criterion, all checks exact.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use rtm::algebra::{compose, compose_all, equals, image_measure, invert, is_reversible, power, ClopenSet};
use rtm::compilers::{
    simulate_classical_as_elementary, to_conveyor_ca, to_permutation_model, zone_configs, zone_order, factorial_bound,
    head_code, CaTape1D, Cell, PmConfig, LEFT, RIGHT,
};
use rtm::config::{step_moving_head, Configuration, HeadedConfig};
use rtm::decision::{
    build_snake_machine, build_snake_machine_swapped, rfa_finiteness, snake_probe, torsion_test_word, Dir,
    FinitenessBudget, FinitenessVerdict, SnakeInstance, Tile, TorsionVerdict, WitnessBudget,
};
use rtm::gates::{
    cell_permutation_machine, cell_word_machine, controlled_3cycles, decompose_3cycle, decompose_cell_permutation,
    verify_generation, GatePerm,
};
use rtm::homomorphisms::{
    average_movement, greedy_parity_product, head_index_word, make_parity_machine, orbitwise_shift_value,
    parity_character,
};
use rtm::machine::{Machine, Params, Sym, Vect, ZERO};
use rtm::symbolic::word_acts_trivially;
use rtm::zoo::{
    classical_from_table, decompose_classical, decompose_rfa, make_controlled_position_swap, make_shift, make_surf,
    recompose, DecomposeOutcome,
};

use common::*;

/// A short summary of what was checked, or the first failure.
type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: std::result::Result<T, E>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

/// Every machine with `n = 2`, `k = 1`, reading and writing inside `{0, 1}`.
fn c01_reversibility_trichotomy() -> Check {
    let p = p1(2, 1);
    let window: [Vect; 2] = [[0, 0], [1, 0]];
    let mut reversible = 0;
    for code in 0..12usize.pow(4) {
        let t = ok(
            Machine::from_fn(p, &window, |pat, q| {
                let idx = (pat[0] * 2 + pat[1]) as usize;
                let c = code / 12usize.pow(idx as u32) % 12;
                let w = (c % 4) as Sym;
                (vec![w >> 1, w & 1], q, [(c / 4) as i32 - 1, 0])
            }),
            "build",
        )?;
        let (inj, surj) = (brute_injective(&t, 4), brute_surjective(&t, 4));
        let rev = is_reversible(&t);
        ensure!(rev == inj && rev == surj, "table {code}: reversible {rev}, injective {inj}, surjective {surj}");
        reversible += rev as usize;
    }
    ensure!(reversible > 0, "no reversible machine found");
    Ok(format!("{} machines, {reversible} reversible", 12usize.pow(4)))
}

fn c02_group_axioms() -> Check {
    let mut rng = rng(2);
    let params = [p1(2, 1), p1(2, 2), p1(3, 1), Params::new(2, 2, 1).unwrap()];
    for i in 0..200 {
        let p = params[i % params.len()];
        let [a, b, c] = [0, 1, 2].map(|_| random_reversible(&mut rng, p, 2));
        let left = ok(compose(&c, &ok(compose(&b, &a), "bc")?), "c(ba)")?;
        let right = ok(compose(&ok(compose(&c, &b), "cb")?, &a), "(cb)a")?;
        ensure!(ok(equals(&left, &right), "equals")?, "associativity fails on sample {i}");
        let inv = ok(invert(&a), "invert")?;
        ensure!(ok(compose(&inv, &a), "inv a")?.is_identity(), "left inverse fails on sample {i}");
        ensure!(ok(compose(&a, &inv), "a inv")?.is_identity(), "right inverse fails on sample {i}");
        let id = Machine::identity(p);
        ensure!(ok(equals(&ok(compose(&a, &id), "a id")?, &a), "equals")?, "right identity fails on sample {i}");
        ensure!(ok(equals(&ok(compose(&id, &a), "id a")?, &a), "equals")?, "left identity fails on sample {i}");
    }
    Ok("200 triples".into())
}

fn c03_alpha() -> Check {
    let mut rng = rng(3);
    let params = [p1(2, 1), p1(2, 2), p1(3, 1), Params::new(2, 2, 1).unwrap()];
    for i in 0..100 {
        let p = params[i % params.len()];
        let (a, b) = (random_reversible(&mut rng, p, 2), random_reversible(&mut rng, p, 2));
        let ab = ok(compose(&b, &a), "compose")?;
        let sum: Vec<BigRational> =
            average_movement(&a).iter().zip(average_movement(&b)).map(|(x, y)| x + y).collect();
        ensure!(average_movement(&ab) == sum, "pair {i}: α not additive");
    }
    for (n, k) in [(2u32, 1u32), (2, 2), (3, 2)] {
        for m in 0..=3usize {
            let t = ok(make_surf(p1(n, k), m), "surf")?;
            let want = BigRational::new(1.into(), (k as i64 * (n as i64).pow(m as u32)).into());
            ensure!(average_movement(&t) == vec![want.clone()], "surf m={m} n={n} k={k}: {:?} != {want}", average_movement(&t));
        }
    }
    Ok("100 pairs, 12 surf machines".into())
}

fn c04_measure() -> Check {
    let mut rng = rng(4);
    let params = [p1(2, 1), p1(2, 2), p1(3, 1), Params::new(2, 2, 1).unwrap()];
    for i in 0..50 {
        let p = params[i % params.len()];
        let t = random_reversible(&mut rng, p, 2);
        let mu = ok(image_measure(&t, &ClopenSet::whole(p)), "measure")?;
        ensure!(mu.is_one(), "sample {i}: μ(T(X)) = {mu}");
    }
    let p = p1(2, 1);
    let w0 = ok(Machine::from_fn(p, &[ZERO], |_, q| (vec![0], q, ZERO)), "write-0")?;
    let mu = ok(image_measure(&w0, &ClopenSet::whole(p)), "measure")?;
    ensure!(mu == BigRational::new(1.into(), 2.into()), "write-0 machine: μ = {mu}");
    Ok("50 machines, write-0 gives 1/2".into())
}

fn c05_head_index() -> Check {
    let p = p1(2, 1);
    let s2 = ok(make_shift(p, [2, 0]), "σ²")?;
    // thirty cells of one letter, as drawn
    let h = ok(head_index_word(&s2, &[0; 30], 4), "head index")?;
    ensure!((h.l, h.r) == (-2, 2), "σ², r = 4: (L, R) = ({}, {})", h.l, h.r);
    for j in -3..=3i32 {
        let t = ok(make_shift(p, [j, 0]), "shift")?;
        let h = ok(head_index_word(&t, &[0; 40], 4), "head index")?;
        ensure!(h.l == -j as i64, "L(σ^{j}) = {}", h.l);
    }
    let mut rng = rng(5);
    let mut nonzero = 0;
    for i in 0..50 {
        let p = if i % 2 == 0 { p1(2, 1) } else { p1(2, 2) };
        let (a, b) = (random_rfa(&mut rng, p, 2), random_rfa(&mut rng, p, 2));
        let ab = ok(compose(&b, &a), "compose")?;
        let (ha, hb, hab) = (
            ok(orbitwise_shift_value(&a), "H(a)")?,
            ok(orbitwise_shift_value(&b), "H(b)")?,
            ok(orbitwise_shift_value(&ab), "H(ba)")?,
        );
        ensure!(hab == ha + hb, "pair {i}: H(ba) = {hab}, H(a) + H(b) = {}", ha + hb);
        nonzero += (hab != 0) as usize;
    }
    Ok(format!("50 pairs, {nonzero} with H != 0"))
}

fn c06_parity() -> Check {
    let p = p1(2, 1);
    for t in 2..=4u32 {
        let m = ok(make_parity_machine(p, t), "parity machine")?;
        for s in 2..=4u32 {
            let got = ok(parity_character(&m, s), "character")?;
            ensure!(got == (s == t) as u8, "T_{t} at period {s}: {got}");
        }
    }
    for bits in 0..8u8 {
        let target: Vec<u8> = (0..3).map(|i| bits >> i & 1).collect();
        let m = ok(greedy_parity_product(p, &target), "greedy")?;
        for (i, &want) in target.iter().enumerate() {
            let got = ok(parity_character(&m, i as u32 + 2), "character")?;
            ensure!(got == want, "target {target:?}: period {} gives {got}", i + 2);
        }
    }
    Ok("3 machines, 8 vectors".into())
}

fn c07_gates() -> Check {
    for ((n, k, m), (sym, alt)) in [((2, 1, 2), (24, 12)), ((2, 2, 1), (24, 12)), ((3, 1, 1), (6, 3))] {
        let r = ok(verify_generation(n, k, m), "generation")?;
        ensure!(
            (r.sym_order, r.alt_order, r.transposition_closure, r.three_cycle_closure) == (sym, alt, sym, alt),
            "(n, k, m) = ({n}, {k}, {m}): {r:?}"
        );
    }
    let mut rng = rng(7);
    let cycles = controlled_3cycles(2, 1, 6, true);
    let mut moved = 0;
    for _ in 0..200 {
        let c: &GatePerm = cycles.choose(&mut rng).unwrap();
        let parts = ok(decompose_3cycle(c), "decompose")?;
        ensure!(parts.len() == 4, "{} factors", parts.len());
        ensure!(parts.iter().all(|f| f.then(f).is_identity()), "a factor is not an involution");
        // half the samples on the cycle itself
        let x = if rng.gen() { *c.support().choose(&mut rng).unwrap() } else { rng.gen_range(0..c.len()) };
        let y = parts.iter().fold(x, |y, f| f.apply(y));
        ensure!(y == c.apply(x), "point {x}: {y} != {}", c.apply(x));
        moved += (y != x) as usize;
    }
    Ok(format!("{} cycles available, 200 points, {moved} moved", cycles.len()))
}

fn c08_classical() -> Check {
    let p = p1(2, 2);
    let mut count = 0;
    for code in 0..12usize.pow(4) {
        let table: Vec<(Sym, u32, i32)> = (0..4)
            .map(|i| {
                let c = code / 12usize.pow(i) % 12;
                ((c % 2) as Sym, (c / 2 % 2) as u32 + 1, (c / 4) as i32 - 1)
            })
            .collect();
        let t = ok(classical_from_table(p, &table), "classical")?;
        let rev = brute_injective(&t, 3) && brute_surjective(&t, 3);
        match decompose_classical(&t) {
            Ok(d) => {
                ensure!(rev, "table {table:?}: decomposed but not reversible");
                ensure!(ok(equals(&ok(d.recompose(), "recompose")?, &t), "equals")?, "table {table:?}: recomposition differs");
                count += 1;
            }
            Err(e) => ensure!(!rev, "table {table:?}: reversible but {e:?}"),
        }
    }
    ensure!(count > 0, "nothing reversible");
    Ok(format!("{} machines, {count} reversible", 12usize.pow(4)))
}

fn c09_elementary() -> Check {
    let mut rng = rng(9);
    let p = p1(2, 2);
    // reversible classical machines over {0,1} x {1,2}, including non-moving ones
    let tables: [[(Sym, u32, i32); 4]; 3] = [
        [(1, 1, 0), (0, 2, 1), (0, 1, 0), (1, 2, 1)],
        [(0, 2, 1), (0, 1, -1), (1, 2, 1), (1, 1, -1)],
        [(1, 2, 1), (1, 1, -1), (0, 1, -1), (0, 2, 1)],
    ];
    for table in &tables {
        let t = ok(classical_from_table(p, table), "classical")?;
        let sim = ok(simulate_classical_as_elementary(&t, 2), "simulator")?;
        for m in [&sim.t0p, &sim.t1p] {
            ensure!(word_acts_trivially(&[m, m]), "{table:?}: simulator factor is not an involution");
        }
        let kz = sim.zero_free.params().k;
        for _ in 0..50 {
            let lo = -30;
            let mut tape: Vec<Sym> = vec![0; 60];
            for c in tape.iter_mut().skip(25).take(10) {
                *c = rng.gen_range(0..2);
            }
            let mut pos = rng.gen_range(-5..5);
            let mut q = rng.gen_range(1..=kz);
            for step in 0..20 {
                let c = sim.encode(&tape, lo, pos, q);
                let (tape2, pos2, q2) = step_array(&sim.zero_free, &tape, lo, pos, q).ok_or("head left the tape")?;
                ensure!(sim.step(&c) == sim.encode(&tape2, lo, pos2, q2), "{table:?}: step {step} disagrees");
                (tape, pos, q) = (tape2, pos2, q2);
            }
        }
    }
    // (a, q) -> (a, other state) moving right from 1 and left from 2: order 2
    let swing = ok(classical_from_table(p, &[(0, 2, 1), (0, 1, -1), (1, 2, 1), (1, 1, -1)]), "swing")?;
    let mut order = None;
    for o in 1..=8 {
        let w = vec![&swing; o];
        let fixes_all = (0..1 << 7).all(|bits: u32| {
            let tape: Vec<Sym> = (0..7).map(|i| (bits >> i & 1) as Sym).collect();
            (1..=2).all(|q| {
                let mut c = HeadedConfig::new(Configuration::from_word(0, -3, &tape), ZERO, q);
                for m in &w {
                    c = step_moving_head(m, &c);
                }
                c == HeadedConfig::new(Configuration::from_word(0, -3, &tape), ZERO, q)
            })
        });
        if fixes_all {
            order = Some(o);
            break;
        }
    }
    ensure!(order == Some(2), "brute-force order of the swing machine: {order:?}");
    let sim = ok(simulate_classical_as_elementary(&swing, 2), "simulator")?;
    let v = ok(torsion_test_word(&sim.word(), 64, &WitnessBudget::default(), &[]), "torsion")?;
    ensure!(matches!(v, TorsionVerdict::Torsion(_)), "swing simulator: {v:?}");
    let right = ok(classical_from_table(p1(1, 1), &[(0, 1, 1)]), "always right")?;
    let sim = ok(simulate_classical_as_elementary(&right, 2), "simulator")?;
    match ok(torsion_test_word(&sim.word(), 16, &WitnessBudget::default(), &[]), "torsion")? {
        TorsionVerdict::NonTorsion(c) => ensure!(c.verify(&sim.word()), "certificate does not verify"),
        v => return Err(format!("always-right simulator: {v:?}")),
    }
    Ok(format!("3 machines x 50 x 20 steps, swing simulator {}", v.label()))
}

fn random_pm(rng: &mut rand_chacha::ChaCha8Rng, p: Params) -> (Configuration, Vec<(Vect, u32)>) {
    let tape: Vec<Sym> = (0..12).map(|_| rng.gen_range(0..p.n) as Sym).collect();
    let marks = (0..rng.gen_range(0..6)).map(|_| ([rng.gen_range(-8..20), 0], rng.gen_range(1..=p.k))).collect();
    (Configuration::from_word(0, 0, &tape), marks)
}

fn c10_permutation_model() -> Check {
    let mut rng = rng(10);
    for i in 0..20 {
        let p = if i % 2 == 0 { p1(2, 1) } else { p1(2, 2) };
        let (a, b) = (random_rfa(&mut rng, p, 2), random_rfa(&mut rng, p, 2));
        let (pa, pb) = (ok(to_permutation_model(&a), "pm")?, ok(to_permutation_model(&b), "pm")?);
        let pab = ok(to_permutation_model(&ok(compose(&b, &a), "compose")?), "pm")?;
        for j in 0..100 {
            let (tape, m1) = random_pm(&mut rng, p);
            let (_, m2) = random_pm(&mut rng, p);
            let x = PmConfig::new(tape.clone(), m1);
            let y = PmConfig::new(tape, m2);
            let two = ok(pb.apply_pm(&ok(pa.apply_pm(&x), "apply")?), "apply")?;
            ensure!(ok(pab.apply_pm(&x), "apply")? == two, "machine {i}, config {j}: not a homomorphism");
            let sum = ok(pa.apply_pm(&ok(x.xor(&y), "xor")?), "apply")?;
            let sum2 = ok(ok(pa.apply_pm(&x), "apply")?.xor(&ok(pa.apply_pm(&y), "apply")?), "xor")?;
            ensure!(sum == sum2, "machine {i}, config {j}: not linear");
        }
    }
    Ok("20 machines x 100 configurations".into())
}

fn c11_conveyor() -> Check {
    let mut rng = rng(11);
    for i in 0..10 {
        let p = if i % 2 == 0 { p1(2, 1) } else { p1(2, 2) };
        let t = random_reversible(&mut rng, p, 1);
        let ca = ok(to_conveyor_ca(&t), "conveyor")?;
        let word: Vec<Sym> = (0..40).map(|_| rng.gen_range(0..p.n) as Sym).collect();
        let h = 20;
        let q = rng.gen_range(1..=p.k);
        // one zone spanning the line: arrows point at the head
        let cells: Vec<Cell> = word
            .iter()
            .enumerate()
            .map(|(j, &s)| {
                let tr = match j.cmp(&h) {
                    std::cmp::Ordering::Less => RIGHT,
                    std::cmp::Ordering::Greater => LEFT,
                    std::cmp::Ordering::Equal => head_code(q, false),
                };
                [s as u32, 0, tr]
            })
            .collect();
        let mut ct = ok(CaTape1D::new([0, 0, RIGHT], [0, 0, LEFT], 0, cells), "tape")?;
        let mut hc = HeadedConfig::new(Configuration::from_word(0, 0, &word), [h as i32, 0], q);
        for step in 0..30 {
            ct = ok(ca.apply_conveyor(&ct), "apply")?;
            hc = step_moving_head(&t, &hc);
            ensure!(ct.top(0, 40) == hc.config.segment(0, 40), "machine {i}, step {step}: tapes differ");
            ensure!(ct.heads() == vec![hc.head.unwrap().pos[0] as i64], "machine {i}, step {step}: heads differ");
        }
    }
    let involutions = [
        make_controlled_position_swap(p1(2, 1), &[], 1, &[0]).unwrap(),
        make_controlled_position_swap(p1(2, 1), &[1], 0, &[]).unwrap(),
        make_controlled_position_swap(p1(2, 2), &[0], 1, &[]).unwrap(),
    ];
    let mut squared = 0;
    for (i, t) in involutions.iter().enumerate() {
        ensure!(ok(compose(t, t), "square")?.is_identity(), "input {i} is not an involution");
        let ca = ok(to_conveyor_ca(t), "conveyor")?;
        let p = t.params();
        let mut tapes: Vec<CaTape1D> = (1..=4).flat_map(|len| zone_configs(p.n, p.k, len)).collect();
        // two adjacent zones, the second headless
        for z in zone_configs(p.n, p.k, 2) {
            for tail in [[RIGHT, LEFT], [LEFT, LEFT], [RIGHT, RIGHT]] {
                let mut cells = z.cells.clone();
                cells.extend(tail.iter().map(|&a| [1, 0, a]));
                tapes.push(ok(CaTape1D::new(z.left, z.right, 0, cells), "tape")?);
            }
        }
        squared += tapes.len();
        for c in &tapes {
            let twice = ok(ca.apply_conveyor(&ok(ca.apply_conveyor(c), "apply")?), "apply")?;
            ensure!(&twice == c, "input {i}: square moves {c:?}");
        }
        let mut lcm = BigUint::one();
        for len in 1..=4 {
            lcm = num_integer::Integer::lcm(&lcm, &ok(zone_order(&ca, len), "zone order")?);
        }
        ensure!((factorial_bound(p.n, p.k, 4) % &lcm).is_zero(), "input {i}: order {lcm} does not divide the bound");
    }
    let shift = ok(to_conveyor_ca(&make_shift(p1(2, 1), [1, 0]).unwrap()), "conveyor")?;
    for h in 1..=3 {
        let mut lcm = BigUint::one();
        for len in 1..=h {
            lcm = num_integer::Integer::lcm(&lcm, &ok(zone_order(&shift, len), "zone order")?);
        }
        ensure!((factorial_bound(2, 1, h) % &lcm).is_zero(), "shift: order {lcm} does not divide the bound for h = {h}");
    }
    Ok(format!("10 traces, {squared} zone configurations squared"))
}

fn c12_finiteness() -> Check {
    let b = FinitenessBudget::default();
    let p = p1(2, 1);
    let inv = make_controlled_position_swap(p, &[], 1, &[0]).unwrap();
    ensure!(ok(rfa_finiteness(&[inv], &b), "finiteness")? == FinitenessVerdict::Finite(2), "involution");
    let s = make_shift(p, [1, 0]).unwrap();
    ensure!(matches!(ok(rfa_finiteness(&[s], &b), "finiteness")?, FinitenessVerdict::Infinite(_)), "shift");
    let mut rng = rng(12);
    let mut agreed = 0;
    let mut largest = 0;
    for attempt in 0..400 {
        if agreed == 20 {
            break;
        }
        let p = if attempt % 3 == 2 { p1(2, 2) } else { p1(2, 1) };
        let gens: Vec<Machine> = (0..rng.gen_range(1..=3)).map(|_| random_position_swap(&mut rng, p)).collect();
        if let FinitenessVerdict::Finite(size) = ok(rfa_finiteness(&gens, &b), "finiteness")? {
            let lens = if p.k == 1 { 1..=8 } else { 1..=6 };
            let oracle = ring_closure(&gens, lens, 10_000);
            ensure!(oracle == Some(size), "generators {attempt}: Finite({size}) but ring closure {oracle:?}");
            agreed += 1;
            largest = largest.max(size);
        }
    }
    ensure!(agreed == 20, "only {agreed} finite generator sets found");
    Ok(format!("20 finite sets, largest group {largest}"))
}

fn c13_snake() -> Check {
    let line = |e: u32, w: u32| Tile { n: 0, e, s: 0, w, left: Dir::W, right: Dir::E };
    let inst = SnakeInstance {
        tiles: vec![line(0, 0), line(1, 0), Tile { n: 1, e: 0, s: 1, w: 1, left: Dir::S, right: Dir::N }],
    };
    let t = ok(build_snake_machine(&inst), "snake")?;
    let u = ok(build_snake_machine_swapped(&inst), "swapped")?;
    ensure!(is_reversible(&t), "snake machine not reversible");
    ensure!(word_acts_trivially(&[&t, &u]) && word_acts_trivially(&[&u, &t]), "swapped machine is not the inverse");
    let straight = SnakeInstance { tiles: vec![line(0, 0)] };
    let st = ok(build_snake_machine(&straight), "snake")?;
    match ok(snake_probe(&straight, 8, &WitnessBudget::default()), "probe")? {
        TorsionVerdict::NonTorsion(c) => ensure!(c.v != ZERO && c.verify(&[&st]), "bad certificate {c:?}"),
        v => return Err(format!("straight line: {v:?}")),
    }
    let mismatch = SnakeInstance { tiles: vec![line(1, 0)] };
    let mt = ok(build_snake_machine(&mismatch), "snake")?;
    let v = ok(snake_probe(&mismatch, 8, &WitnessBudget::default()), "probe")?;
    let TorsionVerdict::Torsion(o) = v else { return Err(format!("mismatch: {v:?}")) };
    let first = (1..=8i64).find(|&e| power(&mt, e).map(|m| m.is_identity()).unwrap_or(false));
    ensure!(first == Some(o as i64), "mismatch: verdict order {o}, power iteration {first:?}");
    Ok(format!("mismatch order {o}"))
}

fn c14_decompositions() -> Check {
    let mut rng = rng(14);
    let p = p1(2, 1);
    let mut swaps = 0;
    for i in 0..20 {
        let mut gens = vec![make_shift(p, [rng.gen_range(-2..=2), 0]).unwrap()];
        for _ in 0..rng.gen_range(0..=4) {
            gens.push(random_position_swap(&mut rng, p));
        }
        gens.shuffle(&mut rng);
        let refs: Vec<&Machine> = gens.iter().collect();
        let t = ok(compose_all(&refs), "compose")?;
        let d = match ok(decompose_rfa(&t, 64), "decompose")? {
            DecomposeOutcome::Done(d) => d,
            DecomposeOutcome::BudgetExhausted(_) => return Err(format!("product {i}: budget exhausted")),
        };
        ensure!(d.trace.windows(2).all(|w| w[1] < w[0]), "product {i}: measure did not decrease {:?}", d.trace);
        ensure!(ok(equals(&ok(recompose(p, &d), "recompose")?, &t), "equals")?, "product {i}: recomposition differs");
        swaps += d.swaps.len();
    }
    for i in 0..20 {
        let d = 1 + (i % 2) as u8;
        let p = Params::new(d, 2, 1).unwrap();
        let mut cells: Vec<Vect> =
            if d == 1 { (-3..=3).map(|x| [x, 0]).collect() } else { (-1..=1).flat_map(|x| (-1..=1).map(move |y| [x, y])).collect() };
        cells.shuffle(&mut rng);
        cells.truncate(rng.gen_range(2..=4));
        let mut images = cells.clone();
        images.shuffle(&mut rng);
        let alpha: Vec<(Vect, Vect)> = cells.into_iter().zip(images).collect();
        let word = ok(decompose_cell_permutation(d, &alpha), "cell decomposition")?;
        let want = ok(cell_permutation_machine(p, &alpha), "C_α")?;
        let got = ok(cell_word_machine(p, &word), "word")?;
        ensure!(ok(equals(&got, &want), "equals")?, "permutation {alpha:?}: word differs");
    }
    Ok(format!("20 products ({swaps} swaps in all), 20 cell permutations"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 14] = [
        ("reversibility trichotomy", c01_reversibility_trichotomy),
        ("group axioms", c02_group_axioms),
        ("average movement", c03_alpha),
        ("measure preservation", c04_measure),
        ("head index", c05_head_index),
        ("parity characters", c06_parity),
        ("gate lemmas", c07_gates),
        ("classical decomposition", c08_classical),
        ("elementary simulation", c09_elementary),
        ("permutation model", c10_permutation_model),
        ("conveyor automaton", c11_conveyor),
        ("one-dimensional finiteness", c12_finiteness),
        ("snake reduction", c13_snake),
        ("decomposition algorithms", c14_decompositions),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("{:02}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|x| id.contains(x.as_str()) || name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(what) => println!("PASS {id} {name} ({secs:.1}s): {what}"),
            Err(e) => {
                failed += 1;
                println!("FAIL {id} {name} ({secs:.1}s): {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
