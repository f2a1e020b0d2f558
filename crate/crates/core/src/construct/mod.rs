//! Half-arc-transitive constructions with computed certificates.

pub mod mn;
pub mod sample;
pub mod wreath;
