//! Exact computer algebra for nilpotent Lie algebras presented by complex
//! structure equations on a (1,0)-coframe.
//!
//! An algebra is described by the differentials of a coframe `w1..wn` of
//! (1,0)-forms; all arithmetic is exact over the Gaussian rationals. On top of
//! the presentation the crate computes the classical central series, the
//! ascending series attached to a nilpotent complex structure, the associated
//! step invariants, and the normal forms available when the complex structure
//! is nilpotent of maximal step.
//!
//! Entry points:
//! - [`dsl`] parses and prints the textual `.nla` format,
//! - [`algebra`] validates presentations and derives brackets,
//! - [`series`] computes the six series and the step invariants,
//! - [`maxn`] builds admissible and strictly admissible coframes,
//! - [`families`] generates the built-in example families and fuzzed variants,
//! - [`cli`] wires everything into the `nla` command line tool.

pub mod exact;
pub mod cli;
pub mod families;
pub mod forms;
pub mod dsl;
pub mod algebra;
pub mod maxn;
pub mod series;
