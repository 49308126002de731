//! Generalized reversible Turing machines on full shifts.
//!
//! Machines are finite local-rule tables acting on `Σ^{ℤ^d}` with a head in one of
//! `k` states. The crate covers composition and inversion, the reversibility
//! decision, quantitative invariants (average movement, head index, parity
//! characters), constructors for the standard machine families, a reversible
//! gate calculus, compilation into cellular automata and (semi-)decision
//! procedures for torsion and finiteness.

pub mod algebra;
pub mod compilers;
pub mod config;
pub mod decision;
pub mod error;
pub mod gates;
pub mod homomorphisms;
pub mod io;
pub mod machine;
pub mod symbolic;
pub mod zoo;

pub use algebra::{compose, equals, invert, is_reversible, power, ClopenSet};
pub use config::{step_moving_head, step_moving_tape, Configuration, Head, HeadedConfig};
pub use error::{Error, Result};
pub use machine::{normalize, LocalRule, Machine, Params, Pattern, RuleEntry, Sym, Vect};
