//! Machines as normalized local-rule tables.
//!
//! A machine over `Params { d, n, k }` is stored densely: row `pat * k + (q - 1)`
//! holds the outcome for the pattern `pat` read on `f_in` (base `n`, first offset
//! most significant) in state `q`. Writes cover `f_out` only.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::Forest;

pub type Sym = u16;
pub type Vect = [i32; 2];

/// Hard cap on dense tables built anywhere in the crate.
pub const MAX_ROWS: u128 = 1 << 24;

#[inline]
pub fn vadd(a: Vect, b: Vect) -> Vect {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn vsub(a: Vect, b: Vect) -> Vect {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn vneg(a: Vect) -> Vect {
    [-a[0], -a[1]]
}

#[inline]
pub fn vscale(a: Vect, s: i32) -> Vect {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn norm1(a: Vect) -> i32 {
    a[0].abs() + a[1].abs()
}

pub const ZERO: Vect = [0, 0];

pub fn unit(i: usize) -> Vect {
    let mut v = ZERO;
    v[i] = 1;
    v
}

/// Converts a d-length integer list into a `Vect`.
pub fn vect_from_slice(d: u8, xs: &[i64]) -> Result<Vect> {
    if xs.len() != d as usize {
        return Err(Error::Invalid(format!("vector {xs:?} has length {} but d = {d}", xs.len())));
    }
    let mut v = ZERO;
    for (i, &x) in xs.iter().enumerate() {
        v[i] = i32::try_from(x).map_err(|_| Error::Invalid(format!("coordinate {x} out of range")))?;
    }
    Ok(v)
}

pub fn vect_to_vec(d: u8, v: Vect) -> Vec<i64> {
    v[..d as usize].iter().map(|&x| x as i64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub d: u8,
    pub n: u32,
    pub k: u32,
}

impl Params {
    pub fn new(d: u8, n: u32, k: u32) -> Result<Self> {
        let p = Params { d, n, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.d) {
            return Err(Error::InvalidParams(format!("d = {} not in {{1,2}}", self.d)));
        }
        if self.n == 0 || self.n > Sym::MAX as u32 {
            return Err(Error::InvalidParams(format!("alphabet size {}", self.n)));
        }
        if self.k == 0 {
            return Err(Error::InvalidParams("k = 0".into()));
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &Params) -> Result<()> {
        if self != other {
            return Err(Error::ParamMismatch(*self, *other));
        }
        Ok(())
    }
}

/// Number of rows of a table reading `cells` cells.
pub fn table_rows(p: Params, cells: usize) -> Result<usize> {
    let mut rows: u128 = p.k as u128;
    for _ in 0..cells {
        rows *= p.n as u128;
        if rows > MAX_ROWS {
            return Err(Error::TooLarge(rows));
        }
    }
    Ok(rows as usize)
}

/// Decodes a base-`n` pattern index into digits, most significant first.
pub fn decode_pattern(mut idx: usize, n: u32, len: usize, out: &mut [Sym]) {
    for j in (0..len).rev() {
        out[j] = (idx % n as usize) as Sym;
        idx /= n as usize;
    }
}

pub fn encode_pattern(syms: &[Sym], n: u32) -> usize {
    syms.iter().fold(0usize, |acc, &s| acc * n as usize + s as usize)
}

/// Support plus symbols, sorted by offset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern {
    pub support: Vec<Vect>,
    pub symbols: Vec<Sym>,
}

impl Pattern {
    pub fn new(mut cells: Vec<(Vect, Sym)>) -> Result<Self> {
        cells.sort();
        for w in cells.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid(format!("duplicate offset {:?}", w[0].0)));
            }
        }
        Ok(Pattern {
            support: cells.iter().map(|c| c.0).collect(),
            symbols: cells.iter().map(|c| c.1).collect(),
        })
    }

    /// A 1D word placed at offsets `start..start+len`.
    pub fn word(start: i32, w: &[Sym]) -> Self {
        Pattern {
            support: (0..w.len()).map(|i| [start + i as i32, 0]).collect(),
            symbols: w.to_vec(),
        }
    }

    pub fn get(&self, v: Vect) -> Option<Sym> {
        self.support.binary_search(&v).ok().map(|i| self.symbols[i])
    }
}

/// One row of a user-supplied local rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleEntry {
    pub read: Vec<Sym>,
    pub state: u32,
    pub write: Vec<Sym>,
    pub new_state: u32,
    pub mv: Vect,
}

/// A local rule as supplied by a user: not necessarily minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRule {
    pub f_in: Vec<Vect>,
    pub f_out: Vec<Vect>,
    pub entries: Vec<RuleEntry>,
}

/// Outcome of one table row.
#[derive(Clone, Copy, Debug)]
pub struct Row<'a> {
    pub write: &'a [Sym],
    pub state: u32,
    pub mv: Vect,
}

/// Dense, not necessarily minimal, table. `f_in`, `f_out` sorted and distinct.
#[derive(Clone, Debug)]
pub(crate) struct RawTable {
    pub f_in: Vec<Vect>,
    pub f_out: Vec<Vect>,
    pub writes: Vec<Sym>,
    pub states: Vec<u32>,
    pub moves: Vec<Vect>,
}

pub struct Machine {
    params: Params,
    f_in: Vec<Vect>,
    f_out: Vec<Vect>,
    writes: Vec<Sym>,
    states: Vec<u32>,
    moves: Vec<Vect>,
    forest: OnceLock<Arc<Forest>>,
}

impl Clone for Machine {
    fn clone(&self) -> Self {
        Machine {
            params: self.params,
            f_in: self.f_in.clone(),
            f_out: self.f_out.clone(),
            writes: self.writes.clone(),
            states: self.states.clone(),
            moves: self.moves.clone(),
            forest: self.forest.clone(),
        }
    }
}

impl PartialEq for Machine {
    fn eq(&self, o: &Self) -> bool {
        self.params == o.params
            && self.f_in == o.f_in
            && self.f_out == o.f_out
            && self.states == o.states
            && self.moves == o.moves
            && self.writes == o.writes
    }
}

impl Eq for Machine {}

impl Hash for Machine {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.params.hash(h);
        self.f_in.hash(h);
        self.f_out.hash(h);
        self.writes.hash(h);
        self.states.hash(h);
        self.moves.hash(h);
    }
}

impl fmt::Debug for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Machine(d={}, n={}, k={}, f_in={:?}, f_out={:?}, rows={})",
            self.params.d,
            self.params.n,
            self.params.k,
            &self.f_in[..],
            &self.f_out[..],
            self.states.len()
        )
    }
}

impl Machine {
    pub fn params(&self) -> Params {
        self.params
    }

    pub fn f_in(&self) -> &[Vect] {
        &self.f_in
    }

    pub fn f_out(&self) -> &[Vect] {
        &self.f_out
    }

    pub fn num_rows(&self) -> usize {
        self.states.len()
    }

    pub fn num_patterns(&self) -> usize {
        self.states.len() / self.params.k as usize
    }

    /// Row index for pattern index `pat` and state `q` (1-based).
    #[inline]
    pub fn row_index(&self, pat: usize, q: u32) -> usize {
        pat * self.params.k as usize + (q as usize - 1)
    }

    #[inline]
    pub fn row(&self, idx: usize) -> Row<'_> {
        let w = self.f_out.len();
        Row { write: &self.writes[idx * w..(idx + 1) * w], state: self.states[idx], mv: self.moves[idx] }
    }

    /// Looks up the row for the tape seen through `read` (offsets relative to the head).
    pub fn lookup(&self, q: u32, read: impl Fn(Vect) -> Sym) -> usize {
        let n = self.params.n as usize;
        let mut pat = 0usize;
        for &c in &self.f_in {
            pat = pat * n + read(c) as usize;
        }
        self.row_index(pat, q)
    }

    /// Max taxicab norm of `f_in`, or −1 when the rule reads nothing.
    pub fn in_radius(&self) -> i32 {
        self.f_in.iter().map(|&v| norm1(v)).max().unwrap_or(-1)
    }

    pub fn out_radius(&self) -> Option<i32> {
        self.f_out.iter().map(|&v| norm1(v)).max()
    }

    pub fn move_radius(&self) -> i32 {
        self.moves.iter().map(|&v| norm1(v)).max().unwrap_or(0)
    }

    /// Max over reads, writes and moves; the window a single step touches.
    pub fn radius(&self) -> i32 {
        self.in_radius().max(self.out_radius().unwrap_or(0)).max(self.move_radius()).max(0)
    }

    pub fn identity(params: Params) -> Machine {
        Machine::from_parts(params, vec![], vec![], vec![], (1..=params.k).collect(), vec![ZERO; params.k as usize])
    }

    pub fn is_identity(&self) -> bool {
        *self == Machine::identity(self.params)
    }

    fn from_parts(
        params: Params,
        f_in: Vec<Vect>,
        f_out: Vec<Vect>,
        writes: Vec<Sym>,
        states: Vec<u32>,
        moves: Vec<Vect>,
    ) -> Machine {
        Machine { params, f_in, f_out, writes, states, moves, forest: OnceLock::new() }
    }

    pub(crate) fn forest(&self) -> &Forest {
        self.forest.get_or_init(|| Arc::new(Forest::build(self)))
    }

    /// Builds a machine from a rule that reads and fully rewrites `window`.
    ///
    /// `f` receives the window pattern (in `window` order after sorting) and the
    /// state, and returns the new window contents, new state and move.
    pub fn from_fn<F>(params: Params, window: &[Vect], mut f: F) -> Result<Machine>
    where
        F: FnMut(&[Sym], u32) -> (Vec<Sym>, u32, Vect),
    {
        params.validate()?;
        let mut win = window.to_vec();
        win.sort();
        win.dedup();
        if win.len() != window.len() {
            return Err(Error::Invalid("window has duplicate offsets".into()));
        }
        let rows = table_rows(params, win.len())?;
        let pats = rows / params.k as usize;
        let w = win.len();
        let mut raw = RawTable {
            f_in: win.clone(),
            f_out: win,
            writes: vec![0; rows * w],
            states: vec![0; rows],
            moves: vec![ZERO; rows],
        };
        let mut buf = vec![0 as Sym; w];
        for pat in 0..pats {
            decode_pattern(pat, params.n, w, &mut buf);
            for q in 1..=params.k {
                let (out, r, mv) = f(&buf, q);
                if out.len() != w {
                    return Err(Error::MalformedRule("write arity".into()));
                }
                let idx = pat * params.k as usize + (q as usize - 1);
                raw.writes[idx * w..(idx + 1) * w].copy_from_slice(&out);
                raw.states[idx] = r;
                raw.moves[idx] = mv;
            }
        }
        normalize_raw(params, raw)
    }

    /// Expands the machine to a full-write table over `window ⊇ f_in ∪ f_out`.
    pub(crate) fn to_raw_over(&self, window: &[Vect]) -> Result<RawTable> {
        let p = self.params;
        let rows = table_rows(p, window.len())?;
        let pats = rows / p.k as usize;
        let w = window.len();
        let in_pos: Vec<usize> = self.f_in.iter().map(|c| window.binary_search(c).expect("window covers f_in")).collect();
        let out_pos: Vec<usize> = self.f_out.iter().map(|c| window.binary_search(c).expect("window covers f_out")).collect();
        let mut raw = RawTable {
            f_in: window.to_vec(),
            f_out: window.to_vec(),
            writes: vec![0; rows * w],
            states: vec![0; rows],
            moves: vec![ZERO; rows],
        };
        let mut buf = vec![0 as Sym; w];
        for pat in 0..pats {
            decode_pattern(pat, p.n, w, &mut buf);
            let own = in_pos.iter().fold(0usize, |a, &i| a * p.n as usize + buf[i] as usize);
            for q in 1..=p.k {
                let src = self.row(self.row_index(own, q));
                let idx = pat * p.k as usize + (q as usize - 1);
                let dst = &mut raw.writes[idx * w..(idx + 1) * w];
                dst.copy_from_slice(&buf);
                for (j, &op) in out_pos.iter().enumerate() {
                    dst[op] = src.write[j];
                }
                raw.states[idx] = src.state;
                raw.moves[idx] = src.mv;
            }
        }
        Ok(raw)
    }

    /// Re-expresses the canonical table as a `LocalRule` (rows sorted by pattern then state).
    pub fn to_local_rule(&self) -> LocalRule {
        let mut entries = Vec::with_capacity(self.num_rows());
        let mut buf = vec![0 as Sym; self.f_in.len()];
        for pat in 0..self.num_patterns() {
            decode_pattern(pat, self.params.n, self.f_in.len(), &mut buf);
            for q in 1..=self.params.k {
                let r = self.row(self.row_index(pat, q));
                entries.push(RuleEntry { read: buf.clone(), state: q, write: r.write.to_vec(), new_state: r.state, mv: r.mv });
            }
        }
        LocalRule { f_in: self.f_in.clone(), f_out: self.f_out.clone(), entries }
    }
}

/// Canonicalizes a user rule.
pub fn normalize(rule: &LocalRule, params: Params) -> Result<Machine> {
    params.validate()?;
    let bad = |s: String| Error::MalformedRule(s);
    let mut fin = rule.f_in.clone();
    fin.sort();
    fin.dedup();
    if fin.len() != rule.f_in.len() {
        return Err(bad("f_in has duplicate offsets".into()));
    }
    let mut fout = rule.f_out.clone();
    fout.sort();
    fout.dedup();
    if fout.len() != rule.f_out.len() {
        return Err(bad("f_out has duplicate offsets".into()));
    }
    for v in fin.iter().chain(fout.iter()) {
        if params.d == 1 && v[1] != 0 {
            return Err(bad(format!("offset {v:?} is not one-dimensional")));
        }
    }
    // Work on the window F_in ∪ F_out so that writes outside F_in keep their meaning.
    let mut window: Vec<Vect> = fin.iter().chain(fout.iter()).copied().collect();
    window.sort();
    window.dedup();
    let in_perm: Vec<usize> = rule.f_in.iter().map(|c| fin.binary_search(c).unwrap()).collect();
    let out_perm: Vec<usize> = rule.f_out.iter().map(|c| fout.binary_search(c).unwrap()).collect();
    let rows = table_rows(params, fin.len())?;
    let mut seen = vec![false; rows];
    let wo = fout.len();
    let mut writes = vec![0 as Sym; rows * wo];
    let mut states = vec![0u32; rows];
    let mut moves = vec![ZERO; rows];
    let mut sorted_read = vec![0 as Sym; fin.len()];
    for (i, e) in rule.entries.iter().enumerate() {
        if e.read.len() != fin.len() || e.write.len() != wo {
            return Err(bad(format!("entry {i}: read/write arity does not match supports")));
        }
        if e.read.iter().chain(e.write.iter()).any(|&s| s as u32 >= params.n) {
            return Err(bad(format!("entry {i}: symbol out of range")));
        }
        if !(1..=params.k).contains(&e.state) || !(1..=params.k).contains(&e.new_state) {
            return Err(bad(format!("entry {i}: state out of range")));
        }
        if params.d == 1 && e.mv[1] != 0 {
            return Err(bad(format!("entry {i}: move is not one-dimensional")));
        }
        for (j, &s) in e.read.iter().enumerate() {
            sorted_read[in_perm[j]] = s;
        }
        let idx = encode_pattern(&sorted_read, params.n) * params.k as usize + (e.state as usize - 1);
        if seen[idx] {
            return Err(bad(format!("entry {i}: duplicate (pattern, state)")));
        }
        seen[idx] = true;
        for (j, &s) in e.write.iter().enumerate() {
            writes[idx * wo + out_perm[j]] = s;
        }
        states[idx] = e.new_state;
        moves[idx] = e.mv;
    }
    if let Some(missing) = seen.iter().position(|&b| !b) {
        return Err(bad(format!("table not total: row {missing} missing")));
    }
    let partial = Machine::from_parts(params, fin, fout, writes, states, moves);
    let raw = partial.to_raw_over(&window)?;
    normalize_raw(params, raw)
}

/// Minimizes a dense table. `raw.f_in` must be sorted and distinct; same for `f_out`.
pub(crate) fn normalize_raw(params: Params, raw: RawTable) -> Result<Machine> {
    let n = params.n as usize;
    let k = params.k as usize;
    let nin = raw.f_in.len();
    let wo = raw.f_out.len();
    let rows = raw.states.len();
    let pats = rows / k;
    let weights: Vec<usize> = (0..nin).map(|j| n.pow((nin - 1 - j) as u32)).collect();
    let digit = |pat: usize, j: usize| (pat / weights[j]) % n;

    // Write-difference minimality of F_out.
    let mut keep_out = vec![false; wo];
    for (j, c) in raw.f_out.iter().enumerate() {
        match raw.f_in.binary_search(c) {
            Ok(ji) => {
                'rows: for pat in 0..pats {
                    let read = digit(pat, ji) as Sym;
                    for q in 0..k {
                        if raw.writes[(pat * k + q) * wo + j] != read {
                            keep_out[j] = true;
                            break 'rows;
                        }
                    }
                }
            }
            Err(_) => keep_out[j] = n >= 2 && rows > 0,
        }
    }
    let out_keep: Vec<usize> = (0..wo).filter(|&j| keep_out[j]).collect();
    let f_out: Vec<Vect> = out_keep.iter().map(|&j| raw.f_out[j]).collect();

    let same = |a: usize, b: usize| -> bool {
        raw.states[a] == raw.states[b]
            && raw.moves[a] == raw.moves[b]
            && out_keep.iter().all(|&j| raw.writes[a * wo + j] == raw.writes[b * wo + j])
    };

    // Read dependence: x_c matters iff changing it alone changes the outcome.
    let mut dep = vec![false; nin];
    for j in 0..nin {
        'pats: for pat in 0..pats {
            if digit(pat, j) != 0 {
                continue;
            }
            for s in 1..n {
                let other = pat + s * weights[j];
                for q in 0..k {
                    if !same(pat * k + q, other * k + q) {
                        dep[j] = true;
                        break 'pats;
                    }
                }
            }
        }
    }
    let keep_in: Vec<usize> = (0..nin).filter(|&j| dep[j]).collect();
    let f_in: Vec<Vect> = keep_in.iter().map(|&j| raw.f_in[j]).collect();
    let new_pats = n.pow(keep_in.len() as u32);
    let new_rows = new_pats * k;
    let nw = f_out.len();
    let mut writes = vec![0 as Sym; new_rows * nw];
    let mut states = vec![0u32; new_rows];
    let mut moves = vec![ZERO; new_rows];
    let mut buf = vec![0 as Sym; keep_in.len()];
    for p in 0..new_pats {
        decode_pattern(p, params.n, keep_in.len(), &mut buf);
        let old: usize = keep_in.iter().zip(buf.iter()).map(|(&j, &s)| s as usize * weights[j]).sum();
        for q in 0..k {
            let src = old * k + q;
            let dst = p * k + q;
            for (t, &j) in out_keep.iter().enumerate() {
                writes[dst * nw + t] = raw.writes[src * wo + j];
            }
            states[dst] = raw.states[src];
            moves[dst] = raw.moves[src];
        }
    }
    Ok(Machine::from_parts(params, f_in, f_out, writes, states, moves))
}
