//! Reversible classical machines as a state-dependent shift after a state-symbol permutation.

use std::fmt;

use crate::algebra::compose;
use crate::error::{Error, Result};
use crate::machine::{Machine, Params, Sym, ZERO};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalError {
    NotClassical,
    /// Two rows enter `state` with moves `d1` and `d2`.
    DirectionNotStateDetermined { state: u32, d1: i32, d2: i32 },
    /// Two inputs `(symbol, state)` with the same output.
    NotBijective { a: (Sym, u32), b: (Sym, u32) },
}

impl fmt::Display for ClassicalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalError::NotClassical => write!(f, "machine is not classical"),
            ClassicalError::DirectionNotStateDetermined { state, d1, d2 } => {
                write!(f, "state {state} is entered with moves {d1} and {d2}")
            }
            ClassicalError::NotBijective { a, b } => write!(f, "inputs {a:?} and {b:?} have the same output"),
        }
    }
}

impl std::error::Error for ClassicalError {}

/// `T = T1 ∘ T0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalDecomposition {
    pub params: Params,
    /// `perm[a * k + q - 1] = (b, r)`.
    pub perm: Vec<(Sym, u32)>,
    /// `dir[q - 1]`: move made after entering `q`; 0 for states never entered.
    pub dir: Vec<i32>,
}

/// `(b, r, move)` for every `(a, q)`, indexed `a * k + q - 1`.
pub fn classical_table(t: &Machine) -> Option<Vec<(Sym, u32, i32)>> {
    let p = t.params();
    if p.d != 1 || t.in_radius() > 0 || t.out_radius().unwrap_or(0) > 0 || t.move_radius() > 1 {
        return None;
    }
    let mut out = Vec::with_capacity((p.n * p.k) as usize);
    for a in 0..p.n as Sym {
        for q in 1..=p.k {
            let row = t.row(t.lookup(q, |_| a));
            let b = row.write.first().copied().unwrap_or(a);
            out.push((b, row.state, row.mv[0]));
        }
    }
    Some(out)
}

/// Builds a classical machine from its table (`a * k + q - 1` indexing).
pub fn classical_from_table(params: Params, table: &[(Sym, u32, i32)]) -> Result<Machine> {
    if params.d != 1 {
        return Err(Error::Unsupported("classical machines are one-dimensional".into()));
    }
    if table.len() != (params.n * params.k) as usize {
        return Err(Error::MalformedRule("classical table size".into()));
    }
    let k = params.k as usize;
    Machine::from_fn(params, &[ZERO], |p, q| {
        let (b, r, mv) = table[p[0] as usize * k + q as usize - 1];
        (vec![b], r, [mv, 0])
    })
}

pub fn decompose_classical(t: &Machine) -> std::result::Result<ClassicalDecomposition, ClassicalError> {
    let table = classical_table(t).ok_or(ClassicalError::NotClassical)?;
    let p = t.params();
    let k = p.k as usize;
    let mut dir: Vec<Option<i32>> = vec![None; k];
    for &(_, r, mv) in &table {
        match dir[r as usize - 1] {
            None => dir[r as usize - 1] = Some(mv),
            Some(d) if d != mv => {
                return Err(ClassicalError::DirectionNotStateDetermined { state: r, d1: d, d2: mv });
            }
            _ => {}
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; table.len()];
    for (i, &(b, r, _)) in table.iter().enumerate() {
        let j = b as usize * k + r as usize - 1;
        if let Some(prev) = owner[j] {
            let pt = |x: usize| ((x / k) as Sym, (x % k) as u32 + 1);
            return Err(ClassicalError::NotBijective { a: pt(prev), b: pt(i) });
        }
        owner[j] = Some(i);
    }
    Ok(ClassicalDecomposition {
        params: p,
        perm: table.iter().map(|&(b, r, _)| (b, r)).collect(),
        dir: dir.into_iter().map(|d| d.unwrap_or(0)).collect(),
    })
}

impl ClassicalDecomposition {
    /// The state-symbol permutation.
    pub fn t0(&self) -> Result<Machine> {
        let k = self.params.k as usize;
        Machine::from_fn(self.params, &[ZERO], |p, q| {
            let (b, r) = self.perm[p[0] as usize * k + q as usize - 1];
            (vec![b], r, ZERO)
        })
    }

    /// The state-dependent shift.
    pub fn t1(&self) -> Result<Machine> {
        Machine::from_fn(self.params, &[], |_, q| (vec![], q, [self.dir[q as usize - 1], 0]))
    }

    pub fn recompose(&self) -> Result<Machine> {
        compose(&self.t1()?, &self.t0()?)
    }
}
