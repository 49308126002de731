//! Composition, inversion, reversibility, measures and closures.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::machine::{
    decode_pattern, encode_pattern, normalize_raw, table_rows, vadd, vneg, vsub, Machine, Params, Pattern, RawTable,
    Sym, Vect, ZERO,
};
use crate::symbolic::{compose_word, word_acts_trivially};

pub type MeasureValue = BigRational;

/// `T2 ∘ T1`: apply `t1` first.
pub fn compose(t2: &Machine, t1: &Machine) -> Result<Machine> {
    t1.params().check_same(&t2.params())?;
    compose_word(&[t1, t2])
}

/// Composition of a word applied left to right (`word[0]` first).
pub fn compose_all(word: &[&Machine]) -> Result<Machine> {
    match word {
        [] => Err(Error::Invalid("empty word".into())),
        [t] => Ok((*t).clone()),
        _ => compose_word(word),
    }
}

pub fn equals(t1: &Machine, t2: &Machine) -> Result<bool> {
    t1.params().check_same(&t2.params())?;
    Ok(t1 == t2)
}

fn union_window(t: &Machine) -> Vec<Vect> {
    let mut f: Vec<Vect> = t.f_in().iter().chain(t.f_out()).copied().collect();
    f.sort();
    f.dedup();
    f
}

/// Image cylinders `T([p] × {q})` for `p` ranging over `F = F_in ∪ F_out`.
/// Entry: (cells `F - v` in `F` order, values, new state, move `v`).
fn image_cylinders(t: &Machine) -> Result<(Vec<Vect>, RawTable)> {
    let f = union_window(t);
    let raw = t.to_raw_over(&f)?;
    Ok((f, raw))
}

pub fn is_reversible(t: &Machine) -> bool {
    let Ok((f, raw)) = image_cylinders(t) else { return false };
    let w = f.len();
    let rows = raw.states.len();
    // group rows by move
    let mut groups: HashMap<Vect, Vec<usize>> = HashMap::new();
    for i in 0..rows {
        groups.entry(raw.moves[i]).or_default().push(i);
    }
    let mut moves: Vec<Vect> = groups.keys().copied().collect();
    moves.sort();
    for &v in &moves {
        let mut seen = HashSet::new();
        for &i in &groups[&v] {
            if !seen.insert((raw.states[i], &raw.writes[i * w..(i + 1) * w])) {
                return false;
            }
        }
    }
    for (a, &v) in moves.iter().enumerate() {
        for &v2 in &moves[a + 1..] {
            // cells of F - v and F - v2 that coincide: f[i] - v = f[j] - v2
            let mut pairs = vec![];
            for (i, &c) in f.iter().enumerate() {
                let target = vadd(vsub(c, v), v2);
                if let Ok(j) = f.binary_search(&target) {
                    pairs.push((i, j));
                }
            }
            let mut proj: HashSet<(u32, Vec<Sym>)> = HashSet::new();
            for &i in &groups[&v] {
                proj.insert((raw.states[i], pairs.iter().map(|&(x, _)| raw.writes[i * w + x]).collect()));
            }
            for &i in &groups[&v2] {
                let key = (raw.states[i], pairs.iter().map(|&(_, y)| raw.writes[i * w + y]).collect());
                if proj.contains(&key) {
                    return false;
                }
            }
        }
    }
    true
}

/// Inverse machine, synthesized by inverting the cylinder map.
pub fn invert(t: &Machine) -> Result<Machine> {
    if !is_reversible(t) {
        return Err(Error::NotReversible);
    }
    let p = t.params();
    let (f, raw) = image_cylinders(t)?;
    let w = f.len();
    let mut moves: Vec<Vect> = raw.moves.clone();
    moves.sort();
    moves.dedup();
    let mut win: Vec<Vect> = moves.iter().flat_map(|&v| f.iter().map(move |&c| vsub(c, v))).collect();
    win.sort();
    win.dedup();
    let ww = win.len();
    let rows = table_rows(p, ww)?;
    let n = p.n as usize;
    let k = p.k as usize;
    let weights: Vec<usize> = (0..ww).map(|j| n.pow((ww - 1 - j) as u32)).collect();
    let mut inv = RawTable {
        f_in: win.clone(),
        f_out: win.clone(),
        writes: vec![0; rows * ww],
        states: vec![0; rows],
        moves: vec![ZERO; rows],
    };
    let mut done = vec![false; rows];
    let mut orig = vec![0 as Sym; w];
    let mut buf = vec![0 as Sym; ww];
    for i in 0..raw.states.len() {
        let v = raw.moves[i];
        let q = (i % k) as u32 + 1;
        decode_pattern(i / k, p.n, w, &mut orig);
        let pos: Vec<usize> = f.iter().map(|&c| win.binary_search(&vsub(c, v)).unwrap()).collect();
        let mut base = 0usize;
        let mut fixed = vec![false; ww];
        for (j, &pj) in pos.iter().enumerate() {
            base += raw.writes[i * w + j] as usize * weights[pj];
            fixed[pj] = true;
        }
        let free: Vec<usize> = (0..ww).filter(|&j| !fixed[j]).collect();
        let mut digits = vec![0usize; free.len()];
        for _ in 0..n.pow(free.len() as u32) {
            let pat = base + free.iter().zip(&digits).map(|(&j, &d)| d * weights[j]).sum::<usize>();
            let r = raw.states[i] as usize;
            let idx = pat * k + (r - 1);
            if done[idx] {
                return Err(Error::NotReversible);
            }
            done[idx] = true;
            decode_pattern(pat, p.n, ww, &mut buf);
            for (j, &pj) in pos.iter().enumerate() {
                buf[pj] = orig[j];
            }
            inv.writes[idx * ww..(idx + 1) * ww].copy_from_slice(&buf);
            inv.states[idx] = q;
            inv.moves[idx] = vneg(v);
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < n {
                    break;
                }
                *d = 0;
            }
        }
    }
    if done.iter().any(|&b| !b) {
        return Err(Error::NotReversible);
    }
    let m = normalize_raw(p, inv)?;
    debug_assert!(word_acts_trivially(&[t, &m]));
    Ok(m)
}

pub fn power(t: &Machine, e: i64) -> Result<Machine> {
    let base = if e < 0 { invert(t)? } else { t.clone() };
    let mut e = e.unsigned_abs();
    let mut acc = Machine::identity(t.params());
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = compose(&sq, &acc)?;
        }
        e >>= 1;
        if e > 0 {
            sq = compose(&sq, &sq)?;
        }
    }
    Ok(acc)
}

/// True iff applying the word `gens[i]^e` left to right gives the identity.
pub fn word_is_identity(word: &[(usize, i32)], gens: &[Machine]) -> Result<bool> {
    let mut inverses: HashMap<usize, Machine> = HashMap::new();
    for &(i, e) in word {
        let g = gens.get(i).ok_or_else(|| Error::Invalid(format!("generator index {i}")))?;
        if e == -1 && !inverses.contains_key(&i) {
            inverses.insert(i, invert(g)?);
        } else if e != 1 && e != -1 {
            return Err(Error::Invalid(format!("exponent {e} not ±1")));
        }
    }
    let letters: Vec<&Machine> = word.iter().map(|&(i, e)| if e == 1 { &gens[i] } else { &inverses[&i] }).collect();
    if let Some(first) = letters.first() {
        for l in &letters {
            first.params().check_same(&l.params())?;
        }
    }
    Ok(word_acts_trivially(&letters))
}

/// A finite union of cylinders, stored expanded over one common window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    params: Params,
    window: Vec<Vect>,
    members: BTreeSet<(Vec<Sym>, u32)>,
}

impl ClopenSet {
    pub fn whole(params: Params) -> Self {
        ClopenSet { params, window: vec![], members: (1..=params.k).map(|q| (vec![], q)).collect() }
    }

    pub fn empty(params: Params) -> Self {
        ClopenSet { params, window: vec![], members: BTreeSet::new() }
    }

    /// Union of `[p] × {q}` (or `[p] × Q` for `None`).
    pub fn from_cylinders(params: Params, cyls: &[(Pattern, Option<u32>)]) -> Result<Self> {
        let mut window: Vec<Vect> = cyls.iter().flat_map(|c| c.0.support.iter().copied()).collect();
        window.sort();
        window.dedup();
        let mut s = ClopenSet { params, window: window.clone(), members: BTreeSet::new() };
        for (pat, q) in cyls {
            if pat.symbols.iter().any(|&x| x as u32 >= params.n) {
                return Err(Error::Invalid("cylinder symbol out of range".into()));
            }
            let states: Vec<u32> = match q {
                Some(q) if (1..=params.k).contains(q) => vec![*q],
                Some(q) => return Err(Error::Invalid(format!("state {q} out of range"))),
                None => (1..=params.k).collect(),
            };
            let fixed: Vec<Option<Sym>> = window.iter().map(|&c| pat.get(c)).collect();
            for ext in extensions(params.n, &fixed)? {
                for &q in &states {
                    s.members.insert((ext.clone(), q));
                }
            }
        }
        Ok(s)
    }

    /// Builds the set of `(pattern over window, state)` satisfying `pred`.
    pub fn from_predicate(params: Params, window: Vec<Vect>, mut pred: impl FnMut(&[Sym], u32) -> bool) -> Result<Self> {
        let mut window = window;
        window.sort();
        window.dedup();
        let rows = table_rows(params, window.len())?;
        let mut members = BTreeSet::new();
        let mut buf = vec![0 as Sym; window.len()];
        for pat in 0..rows / params.k as usize {
            decode_pattern(pat, params.n, window.len(), &mut buf);
            for q in 1..=params.k {
                if pred(&buf, q) {
                    members.insert((buf.clone(), q));
                }
            }
        }
        Ok(ClopenSet { params, window, members })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn window(&self) -> &[Vect] {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &(Vec<Sym>, u32)> {
        self.members.iter()
    }

    /// Re-expresses the set over a larger window.
    pub fn refine(&self, window: &[Vect]) -> Result<Self> {
        let mut w = window.to_vec();
        w.extend(self.window.iter().copied());
        w.sort();
        w.dedup();
        let pos: Vec<usize> = self.window.iter().map(|c| w.binary_search(c).unwrap()).collect();
        let mut members = BTreeSet::new();
        for (pat, q) in &self.members {
            let mut fixed = vec![None; w.len()];
            for (j, &p) in pos.iter().enumerate() {
                fixed[p] = Some(pat[j]);
            }
            for ext in extensions(self.params.n, &fixed)? {
                members.insert((ext, *q));
            }
        }
        Ok(ClopenSet { params: self.params, window: w, members })
    }

    pub fn contains(&self, x: &Configuration, q: u32) -> bool {
        let pat: Vec<Sym> = self.window.iter().map(|&c| x.get(c)).collect();
        self.members.contains(&(pat, q))
    }

    /// Membership of a pattern read over `self.window()`.
    pub fn contains_pattern(&self, pat: &[Sym], q: u32) -> bool {
        self.members.contains(&(pat.to_vec(), q))
    }

    pub fn measure(&self) -> MeasureValue {
        let denom = BigInt::from(self.params.k) * BigInt::from(self.params.n).pow(self.window.len() as u32);
        BigRational::new(BigInt::from(self.members.len()), denom)
    }

    /// Cylinders with state `None` where all states are present.
    pub fn cylinders(&self) -> Vec<(Pattern, Option<u32>)> {
        let mut by_pat: std::collections::BTreeMap<&Vec<Sym>, Vec<u32>> = Default::default();
        for (p, q) in &self.members {
            by_pat.entry(p).or_default().push(*q);
        }
        let mut out = vec![];
        for (p, qs) in by_pat {
            let pat = Pattern { support: self.window.clone(), symbols: p.clone() };
            if qs.len() == self.params.k as usize {
                out.push((pat, None));
            } else {
                out.extend(qs.into_iter().map(|q| (pat.clone(), Some(q))));
            }
        }
        out
    }

    pub fn union(&self, other: &ClopenSet) -> Result<Self> {
        self.params.check_same(&other.params)?;
        let a = self.refine(&other.window)?;
        let b = other.refine(&self.window)?;
        let mut members = a.members;
        members.extend(b.members);
        Ok(ClopenSet { params: self.params, window: a.window, members })
    }
}

/// All patterns extending `fixed` (None = free).
pub(crate) fn extensions(n: u32, fixed: &[Option<Sym>]) -> Result<Vec<Vec<Sym>>> {
    let free: Vec<usize> = (0..fixed.len()).filter(|&j| fixed[j].is_none()).collect();
    let count = (n as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if count > crate::machine::MAX_ROWS {
        return Err(Error::TooLarge(count));
    }
    let base: Vec<Sym> = fixed.iter().map(|s| s.unwrap_or(0)).collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0 as Sym; free.len()];
    for _ in 0..count {
        let mut p = base.clone();
        for (&j, &d) in free.iter().zip(&digits) {
            p[j] = d;
        }
        out.push(p);
        for d in digits.iter_mut().rev() {
            *d += 1;
            if (*d as u32) < n {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Exact `μ(T(S))` in the moving-tape model.
pub fn image_measure(t: &Machine, s: &ClopenSet) -> Result<MeasureValue> {
    let p = t.params();
    p.check_same(&s.params())?;
    let f = union_window(t);
    let s = s.refine(&f)?;
    let u = s.window().to_vec();
    let in_pos: Vec<usize> = t.f_in().iter().map(|c| u.binary_search(c).unwrap()).collect();
    let out_pos: Vec<usize> = t.f_out().iter().map(|c| u.binary_search(c).unwrap()).collect();
    // image cylinder: values on u - v, state r
    let mut images: Vec<(Vect, Vec<Sym>, u32)> = vec![];
    for (pat, q) in s.members() {
        let read: Vec<Sym> = in_pos.iter().map(|&j| pat[j]).collect();
        let row = t.row(t.row_index(encode_pattern(&read, p.n), *q));
        let mut vals = pat.clone();
        for (&j, &w) in out_pos.iter().zip(row.write) {
            vals[j] = w;
        }
        images.push((row.mv, vals, row.state));
    }
    let mut target: Vec<Vect> = images.iter().flat_map(|(v, _, _)| u.iter().map(move |&c| vsub(c, *v))).collect();
    target.sort();
    target.dedup();
    table_rows(p, target.len())?;
    let mut hit: HashSet<(Vec<Sym>, u32)> = HashSet::new();
    for (v, vals, r) in images {
        let mut fixed = vec![None; target.len()];
        for (j, &c) in u.iter().enumerate() {
            fixed[target.binary_search(&vsub(c, v)).unwrap()] = Some(vals[j]);
        }
        for ext in extensions(p.n, &fixed)? {
            hit.insert((ext, r));
        }
    }
    let denom = BigInt::from(p.k) * BigInt::from(p.n).pow(target.len() as u32);
    Ok(BigRational::new(BigInt::from(hit.len()), denom))
}

pub fn whole_measure_is_one(t: &Machine) -> Result<bool> {
    Ok(image_measure(t, &ClopenSet::whole(t.params()))?.is_one())
}

#[derive(Clone, Debug)]
pub enum Closure {
    Closed(Vec<Machine>),
    BudgetExhausted(Vec<Machine>),
}

impl Closure {
    pub fn elements(&self) -> &[Machine] {
        match self {
            Closure::Closed(v) | Closure::BudgetExhausted(v) => v,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Closure::Closed(_))
    }
}

/// Incremental breadth-first closure; lets callers interleave work.
pub struct ClosureSearch {
    letters: Vec<Machine>,
    seen: HashSet<Machine>,
    order: Vec<Machine>,
    frontier: Vec<usize>,
}

impl ClosureSearch {
    pub fn new(gens: &[Machine]) -> Result<Self> {
        let Some(first) = gens.first() else {
            return Err(Error::Invalid("no generators".into()));
        };
        let p = first.params();
        let mut letters: Vec<Machine> = vec![];
        for g in gens {
            p.check_same(&g.params())?;
            let inv = invert(g)?;
            for m in [g.clone(), inv] {
                if !letters.contains(&m) {
                    letters.push(m);
                }
            }
        }
        let id = Machine::identity(p);
        let mut seen = HashSet::new();
        seen.insert(id.clone());
        Ok(ClosureSearch { letters, seen, order: vec![id], frontier: vec![0] })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn elements(&self) -> &[Machine] {
        &self.order
    }

    /// Expands one BFS level. Returns `Some(true)` when the level added nothing
    /// (closed), `Some(false)` otherwise, `None` when `budget` elements were exceeded.
    pub fn step_level(&mut self, budget: usize) -> Result<Option<bool>> {
        let mut next = vec![];
        for &i in &self.frontier {
            for l in &self.letters {
                let m = compose(l, &self.order[i])?;
                if self.seen.insert(m.clone()) {
                    self.order.push(m);
                    next.push(self.order.len() - 1);
                    if self.order.len() > budget {
                        return Ok(None);
                    }
                }
            }
        }
        let closed = next.is_empty();
        self.frontier = next;
        Ok(Some(closed))
    }
}

pub fn group_closure(gens: &[Machine], element_budget: usize) -> Result<Closure> {
    let mut s = ClosureSearch::new(gens)?;
    loop {
        match s.step_level(element_budget)? {
            Some(true) => return Ok(Closure::Closed(s.order)),
            Some(false) => {}
            None => return Ok(Closure::BudgetExhausted(s.order)),
        }
    }
}
