//! Card-based secure grouping.
//!
//! Permutations are shown on rows of face-down number cards. A hidden
//! uniform relabeling `σ` turns a public permutation `τ` into
//! `ρ = σ⁻¹τσ`, whose cycles are the groups. Each player learns only the
//! members of their own cycle.
//!
//! ```
//! use secgroup::{run_seeded, Constraint, RunMode};
//!
//! let c = Constraint::from_tuple(4, &[0, 2]);
//! let run = run_seeded(&c, 7, RunMode::Verify).unwrap();
//! let g = run.verification.unwrap().grouping;
//! assert!(g.satisfies(&c));
//! assert_eq!(run.views[0].group.len(), 2);
//! ```

pub mod cards;
pub mod constraint_file;
pub mod error;
pub mod grouping;
pub mod oracle;
pub mod perm;
pub mod protocols;
pub mod source;
pub mod stats;
pub mod table;
pub mod transcript;

pub use cards::{
    apply_permutation, flip_all, permutation_of_sequence, sequence_of_permutation, Access, Card,
    CardSequence, Facing,
};
pub use constraint_file::{parse_constraint_file, ConstraintFile};
pub use error::{Error, Result};
pub use grouping::{
    fixing_set, grouping_of_permutation, permutation_satisfies_constraint,
    precompute_tau_general, precompute_tau_simple, run_secure_grouping, run_seeded,
    validate_constraint, Constraint, Grouping, GroupingRun, PlayerView, RunMode, TauComputation,
    Verification, Violation,
};
pub use perm::{Cycle, CycleDecomposition, CycleType, Permutation};
pub use protocols::{adversary_view, permutation_division, permutation_randomizing, RandomizingSpec};
pub use source::{PermutationSource, ScriptedSource, SeededSource};
pub use stats::{ChiSquareResult, Significance};
pub use table::{replay, replay_with, Table};
pub use transcript::{Event, RowId, SecretEntry, SecretLog, Transcript};
