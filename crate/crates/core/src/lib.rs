//! Exact computation with distributions on finite Abelian groups: characters
//! and duality, characteristic functions with cyclotomic values, the
//! conditional symmetry of `xi1 + alpha xi2` given `xi1 + xi2`, and
//! brute-force censuses over rational grids.
//!
//! ```
//! use condsym_core::{scalar_map, symmetry_direct, Distribution, FiniteAbelianGroup, SymmetryScenario};
//!
//! let z5 = FiniteAbelianGroup::cyclic(5).unwrap();
//! let e1 = Distribution::point_mass(&z5, &z5.element(&[1]).unwrap()).unwrap();
//! let e2 = Distribution::point_mass(&z5, &z5.element(&[2]).unwrap()).unwrap();
//! let s = SymmetryScenario::new(scalar_map(2, &z5), e1, e2).unwrap();
//! assert!(symmetry_direct(&s));
//! ```

pub mod cyclo;
pub mod duality;
pub mod error;
pub mod group;
pub mod heyde;
pub mod measures;
pub mod search;

/// Exact rational number used for all masses.
pub type Rational = num_rational::Ratio<i128>;

pub use cyclo::{cyclotomic_polynomial, CycloValue};
pub use duality::{adjoint, annihilates, annihilator, pairing_index, pairing_table, PairingIndex};
pub use error::{Error, Result};
pub use group::{
    odd_component, p_component, scalar_map, Dual, DualElement, DualEndomorphism, DualSubgroup, Element, Endomorphism,
    FiniteAbelianGroup, GroupElement, Primal, RestrictedMap, Side, Subgroup, MAX_ORDER,
};
pub use heyde::{
    delta, delta_power, haar_characterization_verdict, haar_pair_symmetry, independence_check, is_polynomial,
    kernel_condition, log_char_polynomial_check, log_char_polynomial_check_on, preimage_annihilator_check,
    symmetry_direct, symmetry_spectral, symmetry_spectral_cf, two_component_decompose, two_component_decompose_with,
    two_component_factor_at, EquivalenceCheck, HaarDecomposition, HaarVerdict, LinearFormPair, RealFunctionOnDual,
    SymmetryScenario, TwoComponentFactorization, DEFAULT_TOLERANCE,
};
pub use measures::{rationalize_f64, CharFunction, Distribution};
pub use search::{
    canonical_undecomposable_exhibit, census, enumerate_automorphisms, enumerate_subgroups, kernel_witness,
    undecomposable_exhibit, CensusOptions, CensusReport, GridSpec, PairClass, PairRecord, UndecomposableExhibit,
};
