//! Conditional symmetry of `L2 = xi1 + alpha xi2` given `L1 = xi1 + xi2`,
//! independence of linear forms, the finite-difference toolkit, and the
//! characterization verdicts built on top of them.

mod difference;
mod symmetry;
mod verdict;

pub use difference::{
    delta, delta_power, is_polynomial, log_char_polynomial_check, log_char_polynomial_check_on, RealFunctionOnDual,
    DEFAULT_TOLERANCE,
};
pub(crate) use symmetry::DirectChecker;
pub use symmetry::{independence_check, symmetry_direct, symmetry_spectral, symmetry_spectral_cf};
pub use verdict::{
    haar_characterization_verdict, haar_pair_symmetry, preimage_annihilator_check, two_component_decompose,
    two_component_decompose_with, two_component_factor_at, EquivalenceCheck, HaarDecomposition, HaarVerdict,
    TwoComponentFactorization,
};

use crate::error::{Error, Result};
use crate::group::{Endomorphism, FiniteAbelianGroup};
use crate::measures::Distribution;

/// Two independent laws `mu1`, `mu2` on `X` and an automorphism `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryScenario {
    alpha: Endomorphism,
    mu1: Distribution,
    mu2: Distribution,
}

impl SymmetryScenario {
    pub fn new(alpha: Endomorphism, mu1: Distribution, mu2: Distribution) -> Result<Self> {
        if mu1.group() != alpha.group() || mu2.group() != alpha.group() {
            return Err(Error::GroupMismatch);
        }
        if !alpha.is_automorphism() {
            return Err(Error::NotAnAutomorphism);
        }
        Ok(Self { alpha, mu1, mu2 })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.alpha.group()
    }

    pub fn alpha(&self) -> &Endomorphism {
        &self.alpha
    }

    pub fn mu1(&self) -> &Distribution {
        &self.mu1
    }

    pub fn mu2(&self) -> &Distribution {
        &self.mu2
    }

    /// Same `alpha`, laws replaced by `mu_j * reflect(mu_j)`, whose
    /// characteristic functions are `|mu_j^|^2`.
    pub fn symmetrized(&self) -> Self {
        let nu = |m: &Distribution| m.convolve(&m.reflect()).expect("same group");
        Self { alpha: self.alpha.clone(), mu1: nu(&self.mu1), mu2: nu(&self.mu2) }
    }
}

/// Coefficients of `M1 = a1 xi1 + a2 xi2` and `M2 = b1 xi1 + b2 xi2`; any
/// endomorphisms are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormPair {
    pub a1: Endomorphism,
    pub a2: Endomorphism,
    pub b1: Endomorphism,
    pub b2: Endomorphism,
}

impl LinearFormPair {
    pub fn new(a1: Endomorphism, a2: Endomorphism, b1: Endomorphism, b2: Endomorphism) -> Result<Self> {
        let g = a1.group();
        if a2.group() != g || b1.group() != g || b2.group() != g {
            return Err(Error::GroupMismatch);
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    /// `M1 = (I + alpha) xi1 + 2 alpha xi2`, `M2 = 2 xi1 + (I + alpha) xi2`.
    /// These are independent whenever the conditional symmetry holds.
    pub fn from_symmetry(alpha: &Endomorphism) -> Self {
        let g = alpha.group();
        let id = Endomorphism::identity(g);
        let i_plus = id.add(alpha).expect("same group");
        Self { a1: i_plus.clone(), a2: alpha.scale(2), b1: Endomorphism::scalar(g, 2), b2: i_plus }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.a1.group()
    }
}

/// `Ker(I + alpha) = {0}`.
pub fn kernel_condition(alpha: &Endomorphism) -> bool {
    Endomorphism::identity(alpha.group()).add(alpha).expect("same group").kernel().is_trivial()
}
