//! Exhaustive enumeration of automorphisms, subgroups and grid distributions,
//! the symmetry census, and constructions of the boundary examples.

mod census;
mod enumerate;
mod exhibits;
mod grid;

pub use census::{
    census, CensusOptions, CensusReport, PairClass, PairRecord, DEFAULT_PAIR_CAP, DEFAULT_SPECTRAL_STRIDE,
};
pub use enumerate::{
    endomorphism_count, enumerate_automorphisms, enumerate_automorphisms_with, enumerate_endomorphisms_with,
    enumerate_subgroups, enumerate_subgroups_of, enumerate_subgroups_with, EnumerationLimits, DEFAULT_MAX_CANDIDATES,
    DEFAULT_MAX_ORDER,
};
pub use exhibits::{canonical_undecomposable_exhibit, kernel_witness, undecomposable_exhibit, UndecomposableExhibit};
pub use grid::{binomial, Compositions, GridSpec};
