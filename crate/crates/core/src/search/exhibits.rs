use crate::cyclo::CycloValue;
use crate::duality::adjoint;
use crate::error::{Error, Result};
use crate::group::{DualElement, DualEndomorphism, DualSubgroup, Endomorphism, FiniteAbelianGroup, Subgroup};
use crate::heyde::SymmetryScenario;
use crate::measures::{CharFunction, Distribution};
use crate::Rational;

/// Two iid copies of `(E_0 + E_g) / 2` for the first nonzero `g` with
/// `alpha g = -g`. The scenario is symmetric but neither law is a shifted Haar
/// distribution, so the kernel condition cannot be dropped.
pub fn kernel_witness(alpha: &Endomorphism) -> Result<SymmetryScenario> {
    let group = alpha.group();
    let kernel = Endomorphism::identity(group).add(alpha)?.kernel();
    let &g = kernel.indices().iter().find(|&&i| i != 0).ok_or(Error::TrivialKernel)?;
    let half = Rational::new(1, 2);
    let mu = Distribution::new(group, [(group.zero(), half), (group.element_at(g), half)])?;
    SymmetryScenario::new(alpha.clone(), mu.clone(), mu)
}

/// A symmetric distribution on `F x G` that does not factor through the Haar
/// measure of any subgroup of the odd part, together with its automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndecomposableExhibit {
    /// `alpha_F (+) alpha_G` on `X = F x G`.
    pub alpha: Endomorphism,
    pub mu: Distribution,
    /// `F` and `G` as subgroups of `X`.
    pub first: Subgroup,
    pub second: Subgroup,
}

impl UndecomposableExhibit {
    pub fn scenario(&self) -> SymmetryScenario {
        SymmetryScenario::new(self.alpha.clone(), self.mu.clone(), self.mu.clone()).expect("validated on construction")
    }
}

/// Builds `mu` on `X = F x G` from its characteristic function
/// `f(l, h)`, with `l` a character of `F` and `h` a character of `G`:
///
/// * `1` at `(l, 0)` and `0` at `(l, h != 0)` for `l` in `U`,
/// * `1/|G|` at every `(l, h)` with `l` in `l0 + U`,
/// * `0` elsewhere.
///
/// Requirements: `2F = 0`; `alpha_F`, `alpha_G` and `I - alpha_G` are
/// automorphisms; `U` is a subgroup of the characters of `F`; `l0 + U` misses
/// both `U` and the image of `I + alpha_F~`. The inverse transform must be a
/// probability distribution, otherwise the call fails.
pub fn undecomposable_exhibit(
    alpha_f: &Endomorphism,
    alpha_g: &Endomorphism,
    l0: &DualElement,
    u: &DualSubgroup,
) -> Result<UndecomposableExhibit> {
    let (f, g) = (alpha_f.group(), alpha_g.group());
    if f.exponent() > 2 {
        return Err(Error::Precondition(format!("F = {f} has elements of order greater than 2")));
    }
    if !alpha_f.is_automorphism() || !alpha_g.is_automorphism() {
        return Err(Error::NotAnAutomorphism);
    }
    if !Endomorphism::identity(g).sub(alpha_g)?.is_automorphism() {
        return Err(Error::Precondition("I - alpha_G is not an automorphism of G".into()));
    }
    if u.group() != f {
        return Err(Error::GroupMismatch);
    }
    let l0 = f.index_of(l0)?;
    let image = DualEndomorphism::identity(f).add(&adjoint(alpha_f))?.image();
    let coset: Vec<usize> = u.indices().iter().map(|&v| f.add_index(v, l0)).collect();
    if coset.iter().any(|&l| u.contains_index(l)) {
        return Err(Error::Precondition("l0 + U meets U".into()));
    }
    if coset.iter().any(|&l| image.contains_index(l)) {
        return Err(Error::Precondition("l0 + U meets the image of I + alpha_F~".into()));
    }

    let x = f.product(g);
    let n = x.exponent();
    let inv_h = Rational::new(1, g.order() as i128);
    let values = (0..x.order())
        .map(|y| {
            // Characters of F occupy the leading coordinates, so the index splits.
            let (l, h) = (y / g.order(), y % g.order());
            let q = if u.contains_index(l) {
                if h == 0 {
                    Rational::from_integer(1)
                } else {
                    Rational::from_integer(0)
                }
            } else if coset.contains(&l) {
                inv_h
            } else {
                Rational::from_integer(0)
            };
            CycloValue::from_rational(n, q)
        })
        .collect();
    let mu = CharFunction::new(&x, values)?.invert()?;

    let alpha = alpha_f.direct_sum(alpha_g);
    let leading = |take_first: bool| {
        let mask = (0..x.order()).map(|i| if take_first { i % g.order() == 0 } else { i < g.order() }).collect();
        Subgroup::from_mask(&x, mask)
    };
    Ok(UndecomposableExhibit { alpha, mu, first: leading(true), second: leading(false) })
}

/// The fixed small instance: `F = Z(2)^2` with `alpha_F = I`, `G = Z(3)` with
/// `alpha_G = f_2`, `U = {0}`, `l0 = (1, 0)`.
pub fn canonical_undecomposable_exhibit() -> UndecomposableExhibit {
    let f = FiniteAbelianGroup::new(vec![2, 2]).expect("valid moduli");
    let g = FiniteAbelianGroup::cyclic(3).expect("valid modulus");
    undecomposable_exhibit(
        &Endomorphism::identity(&f),
        &Endomorphism::scalar(&g, 2),
        &f.element(&[1, 0]).expect("in range"),
        &DualSubgroup::trivial(&f),
    )
    .expect("canonical parameters satisfy the requirements")
}
