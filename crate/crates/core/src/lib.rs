//! Exact solvers, reduction gadgets and a verification harness for the
//! Hexasort stacking game.
//!
//! * [`engine`]: instances, configurations and the placement/merge rule.
//! * [`solvers`]: brute-force search and the layered configuration DP.
//! * [`structural`]: polynomial-time deciders and constructive strategies.
//! * [`reductions`]: Partition and 3-Partition gadget compilers.
//! * [`harness`]: generators, oracle cross-checks, gadget lemma checkers, bench.
//! * [`format`]: the JSON instance and trace documents.
//! * [`auto`]: the combined decision pipeline used by `solve --solver auto`.

pub mod auto;
pub mod engine;
pub mod format;
pub mod harness;
pub mod par;
pub mod reductions;
pub mod solvers;
pub mod structural;

pub use engine::{
    apply_placement, classify_trivial, color_sums, empty_to_fitting, normalize, play_trace,
    ColorId, Configuration, Decision, Graph, Instance, Reason, Stack, Trace, Variant, Verdict,
};
