//! Symbolic execution of machine words.
//!
//! Each machine carries a lazily built decision tree per state. Exploring a word
//! branches only on tape cells that some machine in the word actually inspects,
//! so composing or testing long words never enumerates a dense window up front.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::machine::{decode_pattern, norm1, normalize_raw, table_rows, vadd, Machine, RawTable, Sym, Vect, ZERO};

#[derive(Clone, Copy, Debug)]
enum Node {
    Leaf(u32),
    /// Branch on `f_in[cell]`; children for symbols 0..n start at `first`.
    Split { cell: u16, first: u32 },
}

#[derive(Debug)]
pub(crate) struct Forest {
    trees: Vec<Vec<Node>>,
}

impl Forest {
    pub(crate) fn build(t: &Machine) -> Forest {
        let p = t.params();
        let m = t.f_in().len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&j| (norm1(t.f_in()[j]), t.f_in()[j]));
        let trees = (1..=p.k)
            .map(|q| {
                let mut b = Builder { t, q, n: p.n as usize, m, order: &order, nodes: vec![Node::Leaf(0)] };
                let mut fixed = vec![None; m];
                b.fill(0, &mut fixed);
                b.nodes
            })
            .collect();
        Forest { trees }
    }
}

struct Builder<'a> {
    t: &'a Machine,
    q: u32,
    n: usize,
    m: usize,
    order: &'a [usize],
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn same(&self, a: usize, b: usize) -> bool {
        let ra = self.t.row(self.t.row_index(a, self.q));
        let rb = self.t.row(self.t.row_index(b, self.q));
        ra.state == rb.state && ra.mv == rb.mv && ra.write == rb.write
    }

    fn weight(&self, j: usize) -> usize {
        self.n.pow((self.m - 1 - j) as u32)
    }

    /// Pattern indices consistent with `fixed` and with cell `skip` set to 0.
    fn consistent(&self, fixed: &[Option<Sym>], skip: usize) -> Vec<usize> {
        let mut base = 0usize;
        let mut free = vec![];
        for j in 0..self.m {
            match fixed[j] {
                Some(s) => base += s as usize * self.weight(j),
                None if j != skip => free.push(self.weight(j)),
                None => {}
            }
        }
        let total = self.n.pow(free.len() as u32);
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; free.len()];
        for _ in 0..total {
            out.push(base + digits.iter().zip(&free).map(|(d, w)| d * w).sum::<usize>());
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < self.n {
                    break;
                }
                *d = 0;
            }
        }
        out
    }

    fn fill(&mut self, slot: usize, fixed: &mut Vec<Option<Sym>>) {
        let mut split = None;
        for &j in self.order {
            if fixed[j].is_some() {
                continue;
            }
            let w = self.weight(j);
            let bases = self.consistent(fixed, j);
            if bases.iter().any(|&b| (1..self.n).any(|s| !self.same(b, b + s * w))) {
                split = Some(j);
                break;
            }
        }
        match split {
            None => {
                let rep = self.consistent(fixed, usize::MAX)[0];
                self.nodes[slot] = Node::Leaf(self.t.row_index(rep, self.q) as u32);
            }
            Some(j) => {
                let first = self.nodes.len();
                self.nodes.extend(std::iter::repeat(Node::Leaf(0)).take(self.n));
                self.nodes[slot] = Node::Split { cell: j as u16, first: first as u32 };
                for s in 0..self.n {
                    fixed[j] = Some(s as Sym);
                    self.fill(first + s, fixed);
                }
                fixed[j] = None;
            }
        }
    }
}

/// State of a symbolic run at a leaf.
pub(crate) struct Trace<'a> {
    /// Original tape values the run depends on.
    pub assign: &'a HashMap<Vect, Sym>,
    /// Current values of every cell written so far.
    pub overlay: &'a HashMap<Vect, Sym>,
    pub head: Vect,
    pub state: u32,
}

struct Explorer {
    n: usize,
    assign: HashMap<Vect, Sym>,
    overlay: HashMap<Vect, Sym>,
}

impl Explorer {
    fn run(&mut self, word: &[&Machine], idx: usize, head: Vect, state: u32, visit: &mut dyn FnMut(&Trace) -> bool) -> bool {
        if idx == word.len() {
            return visit(&Trace { assign: &self.assign, overlay: &self.overlay, head, state });
        }
        let t = word[idx];
        let tree = &t.forest().trees[state as usize - 1];
        self.walk(word, idx, tree, 0, head, state, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &mut self,
        word: &[&Machine],
        idx: usize,
        tree: &[Node],
        node: usize,
        head: Vect,
        state: u32,
        visit: &mut dyn FnMut(&Trace) -> bool,
    ) -> bool {
        let t = word[idx];
        match tree[node] {
            Node::Leaf(row) => {
                let r = t.row(row as usize);
                let mut undo = Vec::with_capacity(r.write.len());
                for (&o, &s) in t.f_out().iter().zip(r.write) {
                    let pos = vadd(head, o);
                    undo.push((pos, self.overlay.insert(pos, s)));
                }
                let ok = self.run(word, idx + 1, vadd(head, r.mv), r.state, visit);
                for (pos, prev) in undo.into_iter().rev() {
                    match prev {
                        Some(s) => self.overlay.insert(pos, s),
                        None => self.overlay.remove(&pos),
                    };
                }
                ok
            }
            Node::Split { cell, first } => {
                let pos = vadd(head, t.f_in()[cell as usize]);
                if let Some(&s) = self.overlay.get(&pos).or_else(|| self.assign.get(&pos)) {
                    return self.walk(word, idx, tree, first as usize + s as usize, head, state, visit);
                }
                for s in 0..self.n {
                    self.assign.insert(pos, s as Sym);
                    let ok = self.walk(word, idx, tree, first as usize + s, head, state, visit);
                    self.assign.remove(&pos);
                    if !ok {
                        return false;
                    }
                }
                true
            }
        }
    }
}

/// Runs `word` (applied left to right) from a head at the origin in `state`,
/// calling `visit` once per distinguishable behaviour. Stops when `visit` returns false.
pub(crate) fn explore(word: &[&Machine], state: u32, visit: &mut dyn FnMut(&Trace) -> bool) -> bool {
    let n = word.first().map(|t| t.params().n as usize).unwrap_or(1);
    let mut ex = Explorer { n, assign: HashMap::new(), overlay: HashMap::new() };
    ex.run(word, 0, ZERO, state, visit)
}

/// True iff the word (applied left to right) acts as the identity.
pub fn word_acts_trivially(word: &[&Machine]) -> bool {
    let Some(first) = word.first() else { return true };
    let p = first.params();
    (1..=p.k).all(|q| {
        explore(word, q, &mut |tr| {
            tr.state == q
                && tr.head == ZERO
                && tr.overlay.iter().all(|(pos, &s)| match tr.assign.get(pos) {
                    Some(&a) => a == s,
                    None => p.n == 1,
                })
        })
    })
}

/// The machine equal to applying `word` left to right.
pub fn compose_word(word: &[&Machine]) -> Result<Machine> {
    let p = word[0].params();
    for t in word {
        p.check_same(&t.params())?;
    }
    struct LeafData {
        assign: Vec<(Vect, Sym)>,
        overlay: Vec<(Vect, Sym)>,
        head: Vect,
        state: u32,
    }
    let mut leaves: Vec<Vec<LeafData>> = Vec::with_capacity(p.k as usize);
    let mut cells: Vec<Vect> = vec![];
    for q in 1..=p.k {
        let mut ls = vec![];
        explore(word, q, &mut |tr| {
            ls.push(LeafData {
                assign: tr.assign.iter().map(|(&a, &b)| (a, b)).collect(),
                overlay: tr.overlay.iter().map(|(&a, &b)| (a, b)).collect(),
                head: tr.head,
                state: tr.state,
            });
            // a runaway explosion of leaves is caught by the dense-size check below
            ls.len() < (1 << 24)
        });
        for l in &ls {
            cells.extend(l.assign.iter().map(|c| c.0));
            cells.extend(l.overlay.iter().map(|c| c.0));
        }
        leaves.push(ls);
    }
    cells.sort();
    cells.dedup();
    let rows = table_rows(p, cells.len())?;
    let w = cells.len();
    let n = p.n as usize;
    let k = p.k as usize;
    let weights: Vec<usize> = (0..w).map(|j| n.pow((w - 1 - j) as u32)).collect();
    let mut raw = RawTable {
        f_in: cells.clone(),
        f_out: cells.clone(),
        writes: vec![0; rows * w],
        states: vec![0; rows],
        moves: vec![ZERO; rows],
    };
    let mut filled = 0usize;
    let mut buf = vec![0 as Sym; w];
    for (qi, ls) in leaves.iter().enumerate() {
        for l in ls {
            let mut base = 0usize;
            let mut is_fixed = vec![false; w];
            for &(c, s) in &l.assign {
                let j = cells.binary_search(&c).unwrap();
                base += s as usize * weights[j];
                is_fixed[j] = true;
            }
            let free: Vec<usize> = (0..w).filter(|&j| !is_fixed[j]).collect();
            let over: Vec<(usize, Sym)> = l.overlay.iter().map(|&(c, s)| (cells.binary_search(&c).unwrap(), s)).collect();
            let total = n.pow(free.len() as u32);
            let mut digits = vec![0usize; free.len()];
            for _ in 0..total {
                let pat = base + free.iter().zip(&digits).map(|(&j, &d)| d * weights[j]).sum::<usize>();
                let idx = pat * k + qi;
                decode_pattern(pat, p.n, w, &mut buf);
                for &(j, s) in &over {
                    buf[j] = s;
                }
                raw.writes[idx * w..(idx + 1) * w].copy_from_slice(&buf);
                raw.states[idx] = l.state;
                raw.moves[idx] = l.head;
                filled += 1;
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < n {
                        break;
                    }
                    *d = 0;
                }
            }
        }
    }
    if filled != rows {
        return Err(Error::Invalid(format!("symbolic composition covered {filled} of {rows} rows")));
    }
    normalize_raw(p, raw)
}
