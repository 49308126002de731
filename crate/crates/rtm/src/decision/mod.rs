//! Torsion and finiteness procedures.

mod finiteness;
mod snake;
mod torsion;

pub use finiteness::{rfa_finiteness, traversal_profile, FinitenessBudget, FinitenessVerdict, Side, TraversalProfile};
pub use snake::{build_snake_machine, build_snake_machine_swapped, snake_probe, snake_seeds, Dir, SnakeInstance, Tile};
pub use torsion::{find_certificate, torsion_test, torsion_test_word, word_order, Certificate, TorsionVerdict, WitnessBudget};
