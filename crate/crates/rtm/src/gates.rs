//! Reversible gates on `Q × Σ^m`, cell permutations and the oblivious generators.
//!
//! A point `(q, s_1, …, s_m)` has index `(q - 1) n^m + Σ s_i n^{m - i}`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::algebra::compose_all;
use crate::error::{Error, Result};
use crate::homomorphisms::permutation_sign;
use crate::machine::{unit, vadd, Machine, Params, Sym, Vect, ZERO};
use crate::zoo::{make_local_permutation, make_shift};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GatePerm {
    pub n: u32,
    pub k: u32,
    pub m: usize,
    map: Vec<u32>,
}

impl GatePerm {
    pub fn size(n: u32, k: u32, m: usize) -> usize {
        k as usize * (n as usize).pow(m as u32)
    }

    pub fn identity(n: u32, k: u32, m: usize) -> Self {
        GatePerm { n, k, m, map: (0..Self::size(n, k, m) as u32).collect() }
    }

    pub fn from_map(n: u32, k: u32, m: usize, map: Vec<u32>) -> Result<Self> {
        let size = Self::size(n, k, m);
        let mut seen = vec![false; size];
        if map.len() != size {
            return Err(Error::Invalid(format!("gate table has {} entries, expected {size}", map.len())));
        }
        for &x in &map {
            if x as usize >= size || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::NotBijective("gate table".into()));
            }
        }
        Ok(GatePerm { n, k, m, map })
    }

    pub fn from_fn(n: u32, k: u32, m: usize, f: impl Fn(u32, &[Sym]) -> (u32, Vec<Sym>)) -> Result<Self> {
        let g = GatePerm::identity(n, k, m);
        let map = (0..g.map.len())
            .map(|i| {
                let (q, s) = g.decode(i);
                let (q2, s2) = f(q, &s);
                g.encode(q2, &s2) as u32
            })
            .collect();
        Self::from_map(n, k, m, map)
    }

    pub fn transposition(n: u32, k: u32, m: usize, a: usize, b: usize) -> Self {
        let mut g = GatePerm::identity(n, k, m);
        g.map.swap(a, b);
        g
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    pub fn decode(&self, i: usize) -> (u32, Vec<Sym>) {
        let nm = (self.n as usize).pow(self.m as u32);
        let mut s = vec![0; self.m];
        crate::machine::decode_pattern(i % nm, self.n, self.m, &mut s);
        ((i / nm) as u32 + 1, s)
    }

    pub fn encode(&self, q: u32, s: &[Sym]) -> usize {
        (q as usize - 1) * (self.n as usize).pow(self.m as u32) + crate::machine::encode_pattern(s, self.n)
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &GatePerm) -> GatePerm {
        GatePerm { map: self.map.iter().map(|&x| other.map[x as usize]).collect(), ..self.clone() }
    }

    pub fn inverse(&self) -> GatePerm {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        GatePerm { map: inv, ..self.clone() }
    }

    /// 0 even, 1 odd.
    pub fn sign(&self) -> u8 {
        permutation_sign(&self.map.iter().map(|&x| x as usize).collect::<Vec<_>>())
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Points moved by the gate.
    pub fn support(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&i| self.map[i] as usize != i).collect()
    }

    /// Coordinates of a point: state first, then the symbols.
    fn coords(&self, i: usize) -> Vec<u32> {
        let (q, s) = self.decode(i);
        std::iter::once(q).chain(s.iter().map(|&x| x as u32)).collect()
    }
}

fn hamming(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `f̂`: `f` on the first `ℓ` wires of `Q × Σ^m`.
pub fn prefix_apply(f: &GatePerm, m: usize) -> Result<GatePerm> {
    if m < f.m {
        return Err(Error::Invalid(format!("arity {} exceeds {m}", f.m)));
    }
    GatePerm::from_fn(f.n, f.k, m, |q, s| {
        let (q2, head) = f.decode(f.apply(f.encode(q, &s[..f.m])));
        let mut out = head;
        out.extend_from_slice(&s[f.m..]);
        (q2, out)
    })
}

/// `r_π`: `(q, s_1, …, s_m) ↦ (q, s_{π(1)}, …, s_{π(m)})`, zero-based.
fn rewiring(n: u32, k: u32, pi: &[usize]) -> Result<GatePerm> {
    GatePerm::from_fn(n, k, pi.len(), |q, s| (q, pi.iter().map(|&j| s[j]).collect()))
}

/// `f̂_π = r_π^{-1} ∘ f̂ ∘ r_π`.
pub fn rewire(g: &GatePerm, pi: &[usize]) -> Result<GatePerm> {
    let mut sorted = pi.to_vec();
    sorted.sort();
    if sorted != (0..g.m).collect::<Vec<_>>() {
        return Err(Error::NotBijective(format!("{pi:?} is not a permutation of the wires")));
    }
    let r = rewiring(g.n, g.k, pi)?;
    Ok(r.then(g).then(&r.inverse()))
}

/// Transpositions of points at Hamming distance one (the state counts as a coordinate).
pub fn controlled_swaps(n: u32, k: u32, m: usize) -> Vec<GatePerm> {
    let id = GatePerm::identity(n, k, m);
    let mut out = vec![];
    for a in 0..id.len() {
        for b in a + 1..id.len() {
            if hamming(&id.coords(a), &id.coords(b)) == 1 {
                out.push(GatePerm::transposition(n, k, m, a, b));
            }
        }
    }
    out
}

fn three_cycle(n: u32, k: u32, m: usize, a: usize, b: usize, c: usize) -> GatePerm {
    let mut g = GatePerm::identity(n, k, m);
    g.map[a] = b as u32;
    g.map[b] = c as u32;
    g.map[c] = a as u32;
    g
}

/// Controlled 3-cycles. `strict` keeps only distance patterns `(1, 1, 2)`; otherwise
/// triples on a single coordinate (`(1, 1, 1)`) are included too.
pub fn controlled_3cycles(n: u32, k: u32, m: usize, strict: bool) -> Vec<GatePerm> {
    let id = GatePerm::identity(n, k, m);
    let pts: Vec<Vec<u32>> = (0..id.len()).map(|i| id.coords(i)).collect();
    let mut out = vec![];
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            for c in b + 1..pts.len() {
                let mut ds = [hamming(&pts[a], &pts[b]), hamming(&pts[b], &pts[c]), hamming(&pts[a], &pts[c])];
                ds.sort();
                if ds == [1, 1, 2] || (!strict && ds == [1, 1, 1]) {
                    out.push(three_cycle(n, k, m, a, b, c));
                }
            }
        }
    }
    out
}

/// Size of the group generated by `gens` (BFS over the permutation group).
pub fn closure_size(gens: &[GatePerm], cap: usize) -> Option<usize> {
    let first = gens.first()?;
    let id = GatePerm::identity(first.n, first.k, first.m);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(id.map.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let x = g.then(h);
            if seen.insert(x.map.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(x);
            }
        }
    }
    Some(seen.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationReport {
    pub points: usize,
    pub sym_order: usize,
    pub alt_order: usize,
    pub transposition_closure: usize,
    pub three_cycle_closure: usize,
    /// Closure of the `(1, 1, 2)` cycles alone.
    pub strict_three_cycle_closure: usize,
}

impl GenerationReport {
    pub fn generates(&self) -> bool {
        self.transposition_closure == self.sym_order && self.three_cycle_closure == self.alt_order
    }
}

fn factorial(x: usize) -> usize {
    (1..=x).product()
}

pub fn verify_generation(n: u32, k: u32, m: usize) -> Result<GenerationReport> {
    let points = GatePerm::size(n, k, m);
    if points > 8 {
        return Err(Error::TooLarge(points as u128));
    }
    let sym = factorial(points);
    let alt = if points >= 2 { sym / 2 } else { 1 };
    let size = |g: Vec<GatePerm>| if g.is_empty() { 1 } else { closure_size(&g, sym).unwrap_or(sym) };
    Ok(GenerationReport {
        points,
        sym_order: sym,
        alt_order: alt,
        transposition_closure: size(controlled_swaps(n, k, m)),
        three_cycle_closure: size(controlled_3cycles(n, k, m, false)),
        strict_three_cycle_closure: size(controlled_3cycles(n, k, m, true)),
    })
}

/// Three points `(center, b, c)` of a `(1, 1, 2)` controlled 3-cycle.
fn three_cycle_points(c: &GatePerm) -> Option<(usize, usize, usize)> {
    let s = c.support();
    if s.len() != 3 {
        return None;
    }
    let (x, y, z) = (s[0], s[1], s[2]);
    if c.apply(c.apply(c.apply(x))) != x || c.apply(x) == x {
        return None;
    }
    let co: Vec<Vec<u32>> = s.iter().map(|&i| c.coords(i)).collect();
    for (a, b, cc) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        if hamming(&co[a], &co[b]) == 1 && hamming(&co[a], &co[cc]) == 1 && hamming(&co[b], &co[cc]) == 2 {
            return Some(([x, y, z][a], [x, y, z][b], [x, y, z][cc]));
        }
    }
    None
}

/// Four swaps, each controlled on `m - 2` wires, whose product (applied in order) is `c`.
pub fn decompose_3cycle(c: &GatePerm) -> Result<Vec<GatePerm>> {
    if c.m < 6 {
        return Err(Error::Invalid("3-cycle decomposition needs m >= 6".into()));
    }
    let (a, b, cc) = three_cycle_points(c).ok_or_else(|| Error::Invalid("not a controlled 3-cycle".into()))?;
    let ca = c.coords(a);
    let diff = |p: usize| (0..=c.m).find(|&i| c.coords(p)[i] != ca[i]).unwrap();
    let (i, j) = (diff(b), diff(cc));
    // symbol wires (1-based coordinates) other than i and j
    let free: Vec<usize> = (1..=c.m).filter(|&w| w != i && w != j).collect();
    let f1 = [free[0], free[1]];
    let f2 = [free[2], free[3]];
    let swap_on = |coord: usize, target: &[u32], freed: [usize; 2]| -> Result<GatePerm> {
        // wires kept as controls, in prefix order, then the freed ones
        let kept: Vec<usize> = (1..=c.m).filter(|w| !freed.contains(w)).collect();
        let pi: Vec<usize> = kept.iter().chain(freed.iter()).map(|&w| w - 1).collect();
        let small_m = c.m - 2;
        let small = GatePerm::identity(c.n, c.k, small_m);
        let restrict = |pt: &[u32]| -> usize {
            let syms: Vec<Sym> = kept.iter().map(|&w| pt[w] as Sym).collect();
            small.encode(pt[0], &syms)
        };
        let mut other = ca.clone();
        other[coord] = target[coord];
        let t = GatePerm::transposition(c.n, c.k, small_m, restrict(&ca), restrict(&other));
        rewire(&prefix_apply(&t, c.m)?, &pi)
    };
    let p1 = swap_on(i, &c.coords(b), f1)?;
    let p2 = swap_on(j, &c.coords(cc), f2)?;
    let a1 = p1.then(&p2).then(&p1).then(&p2);
    if &a1 == c {
        return Ok(vec![p1.clone(), p2.clone(), p1, p2]);
    }
    let a2 = p2.then(&p1).then(&p2).then(&p1);
    if &a2 == c {
        return Ok(vec![p2.clone(), p1.clone(), p2, p1]);
    }
    Err(Error::Invalid("3-cycle decomposition failed".into()))
}

/// Local permutation applying `g` to the cells `offsets` (wire `i` at `offsets[i]`) and the state.
pub fn gate_as_machine(params: Params, g: &GatePerm, offsets: &[Vect]) -> Result<Machine> {
    if offsets.len() != g.m || params.n != g.n || params.k != g.k {
        return Err(Error::Invalid("gate arity or alphabet does not match".into()));
    }
    let mut sorted = offsets.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != offsets.len() {
        return Err(Error::Invalid("duplicate gate offsets".into()));
    }
    let pos: Vec<usize> = offsets.iter().map(|o| sorted.binary_search(o).unwrap()).collect();
    make_local_permutation(params, &sorted, |p, q| {
        let wires: Vec<Sym> = pos.iter().map(|&j| p[j]).collect();
        let (q2, out) = g.decode(g.apply(g.encode(q, &wires)));
        let mut w = p.to_vec();
        for (&j, &s) in pos.iter().zip(&out) {
            w[j] = s;
        }
        (w, q2)
    })
}

/// The fixed 4-cell window used by [`ob_generators`].
pub fn ob_window(d: u8) -> Vec<Vect> {
    if d == 1 {
        vec![[0, 0], [1, 0], [2, 0], [3, 0]]
    } else {
        vec![[0, 0], [1, 0], [0, 1], [1, 1]]
    }
}

/// `C_α`: the tape at `v` receives the old value at `α(v)`; `alpha` lists `v -> α(v)`.
pub fn cell_permutation_machine(params: Params, alpha: &[(Vect, Vect)]) -> Result<Machine> {
    let mut cells: Vec<Vect> = alpha.iter().map(|p| p.0).collect();
    cells.sort();
    cells.dedup();
    let mut imgs: Vec<Vect> = alpha.iter().map(|p| p.1).collect();
    imgs.sort();
    imgs.dedup();
    if cells.len() != alpha.len() || cells != imgs {
        return Err(Error::NotBijective("cell map is not a permutation of its support".into()));
    }
    let src: Vec<usize> = cells
        .iter()
        .map(|c| {
            let a = alpha.iter().find(|p| p.0 == *c).unwrap().1;
            cells.binary_search(&a).unwrap()
        })
        .collect();
    make_local_permutation(params, &cells, |p, q| (src.iter().map(|&j| p[j]).collect(), q))
}

/// `C_i`: swaps the head cell with the cell at `e_i`.
pub fn cell_swap(params: Params, axis: usize) -> Result<Machine> {
    let e = unit(axis);
    cell_permutation_machine(params, &[(ZERO, e), (e, ZERO)])
}

/// Shifts by `e_1, …, e_d`, cell swaps `C_1, …, C_d`, and a transposition plus a full
/// cycle of `Σ^E × Q` on the window [`ob_window`].
pub fn ob_generators(params: Params) -> Result<Vec<Machine>> {
    let d = params.d as usize;
    let mut out = vec![];
    for i in 0..d {
        out.push(make_shift(params, unit(i))?);
    }
    for i in 0..d {
        out.push(cell_swap(params, i)?);
    }
    let e = ob_window(params.d);
    let size = GatePerm::size(params.n, params.k, 4);
    let tr = GatePerm::transposition(params.n, params.k, 4, 0, 1);
    let cyc = GatePerm::from_map(params.n, params.k, 4, (0..size as u32).map(|i| (i + 1) % size as u32).collect())?;
    out.push(gate_as_machine(params, &tr, &e)?);
    out.push(gate_as_machine(params, &cyc, &e)?);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellGen {
    /// Head step by `±e_axis`.
    Shift { axis: usize, sign: i32 },
    Swap { axis: usize },
}

pub fn cell_gen_machine(params: Params, g: CellGen) -> Result<Machine> {
    match g {
        CellGen::Shift { axis, sign } => {
            let mut v = ZERO;
            v[axis] = sign;
            make_shift(params, v)
        }
        CellGen::Swap { axis } => cell_swap(params, axis),
    }
}

/// Composes a generator word (applied left to right).
pub fn cell_word_machine(params: Params, word: &[CellGen]) -> Result<Machine> {
    if word.is_empty() {
        return Ok(Machine::identity(params));
    }
    let ms: Vec<Machine> = word.iter().map(|&g| cell_gen_machine(params, g)).collect::<Result<_>>()?;
    let refs: Vec<&Machine> = ms.iter().collect();
    compose_all(&refs)
}

fn walk(word: &mut Vec<CellGen>, v: Vect, sign: i32) {
    for (axis, &c) in v.iter().enumerate() {
        for _ in 0..c.abs() {
            word.push(CellGen::Shift { axis, sign: c.signum() * sign });
        }
    }
}

/// Word over shifts and `C_i` equal to `C_α`, for `alpha` of finite support.
pub fn decompose_cell_permutation(d: u8, alpha: &[(Vect, Vect)]) -> Result<Vec<CellGen>> {
    let moved: BTreeMap<Vect, Vect> = alpha.iter().filter(|p| p.0 != p.1).copied().collect();
    if moved.is_empty() {
        return Ok(vec![]);
    }
    let lo = moved.keys().fold([i32::MAX; 2], |a, v| [a[0].min(v[0]), a[1].min(v[1])]);
    let hi = moved.keys().fold([i32::MIN; 2], |a, v| [a[0].max(v[0]), a[1].max(v[1])]);
    // snake path through the bounding box; consecutive cells are adjacent
    let mut path: Vec<Vect> = vec![];
    let rows: Vec<i32> = if d == 2 { (lo[1]..=hi[1]).collect() } else { vec![0] };
    for (r, &y) in rows.iter().enumerate() {
        let xs: Vec<i32> = if r % 2 == 0 { (lo[0]..=hi[0]).collect() } else { (lo[0]..=hi[0]).rev().collect() };
        path.extend(xs.into_iter().map(|x| [x, y]));
    }
    let index: BTreeMap<Vect, usize> = path.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let img = |v: Vect| *moved.get(&v).unwrap_or(&v);
    let mut arr: Vec<usize> = path
        .iter()
        .map(|&v| index.get(&img(v)).copied().ok_or_else(|| Error::Invalid("cell map leaves its support".into())))
        .collect::<Result<_>>()?;
    // bubble sort: arr ← arr ∘ (i i+1) until sorted, so α = s_j ∘ … ∘ s_1
    let mut swaps = vec![];
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..arr.len().saturating_sub(1) {
            if arr[i] > arr[i + 1] {
                arr.swap(i, i + 1);
                swaps.push(i);
                changed = true;
            }
        }
    }
    let mut word = vec![];
    for &i in swaps.iter().rev() {
        let (a, b) = (path[i], path[i + 1]);
        let (base, axis) = if a[0] != b[0] {
            (if a[0] < b[0] { a } else { b }, 0)
        } else {
            (if a[1] < b[1] { a } else { b }, 1)
        };
        walk(&mut word, base, 1);
        word.push(CellGen::Swap { axis });
        walk(&mut word, base, -1);
    }
    Ok(simplify(word))
}

/// Cancels adjacent opposite shifts.
fn simplify(word: Vec<CellGen>) -> Vec<CellGen> {
    let mut out: Vec<CellGen> = vec![];
    for g in word {
        if let (Some(CellGen::Shift { axis: a, sign: s }), CellGen::Shift { axis, sign }) = (out.last(), g) {
            if *a == axis && *s == -sign {
                out.pop();
                continue;
            }
        }
        out.push(g);
    }
    out
}

/// Conjugating `C_i` by the shift `T_v` moves the swapped pair to `(v, v + e_i)`.
pub fn conjugated_swap(params: Params, v: Vect, axis: usize) -> Result<Machine> {
    let mut w = vec![];
    walk(&mut w, v, 1);
    w.push(CellGen::Swap { axis });
    walk(&mut w, v, -1);
    cell_word_machine(params, &w)
}

pub fn adjacent_transposition(v: Vect, axis: usize) -> Vec<(Vect, Vect)> {
    let w = vadd(v, unit(axis));
    vec![(v, w), (w, v)]
}
