//! Permutation groups, concentric 2-groups and tetravalent
//! half-arc-transitive graph constructions, with computed certificates.

pub mod automorphism;
pub mod check;
pub mod concentric;
pub mod construct;
pub mod elements;
pub mod format;
pub mod graph;
pub mod group;
pub mod perm;
pub mod presentation;
pub mod subgroup;

pub use elements::ElementSet;
pub use group::PermutationGroup;
pub use perm::{PermError, Permutation};
