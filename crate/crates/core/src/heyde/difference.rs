use super::SymmetryScenario;
use crate::duality::adjoint;
use crate::error::{Error, Result};
use crate::group::{DualElement, DualEndomorphism, DualSubgroup, FiniteAbelianGroup};
use crate::measures::CharFunction;

/// Default absolute tolerance for float comparisons on log-characteristic
/// functions.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// A real-valued function on the character group, stored densely by index.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFunctionOnDual {
    group: FiniteAbelianGroup,
    values: Vec<f64>,
}

impl RealFunctionOnDual {
    pub fn new(group: &FiniteAbelianGroup, values: Vec<f64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), got: values.len() });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Precondition(format!("function value {v} is not finite")));
        }
        Ok(Self { group: group.clone(), values })
    }

    pub fn from_fn(group: &FiniteAbelianGroup, f: impl Fn(&DualElement) -> f64) -> Result<Self> {
        Self::new(group, group.elements().map(|y| f(&y)).collect())
    }

    pub fn constant(group: &FiniteAbelianGroup, c: f64) -> Result<Self> {
        Self::new(group, vec![c; group.order()])
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, y: &DualElement) -> Result<f64> {
        Ok(self.values[self.group.index_of(y)?])
    }

    pub fn value_at(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// `y -> f(e y)`.
    pub fn compose(&self, e: &DualEndomorphism) -> Result<Self> {
        if e.group() != &self.group {
            return Err(Error::GroupMismatch);
        }
        let values = e.table().into_iter().map(|i| self.values[i]).collect();
        Ok(Self { group: self.group.clone(), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.group != self.group {
            return Err(Error::GroupMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { group: self.group.clone(), values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn delta_index(&self, h: usize) -> Self {
        let values = (0..self.values.len()).map(|y| self.values[self.group.add_index(y, h)] - self.values[y]).collect();
        Self { group: self.group.clone(), values }
    }
}

/// `(Delta_h f)(y) = f(y + h) - f(y)`.
pub fn delta(h: &DualElement, f: &RealFunctionOnDual) -> Result<RealFunctionOnDual> {
    Ok(f.delta_index(f.group.index_of(h)?))
}

/// `Delta_h` applied `n` times.
pub fn delta_power(h: &DualElement, n: u32, f: &RealFunctionOnDual) -> Result<RealFunctionOnDual> {
    let h = f.group.index_of(h)?;
    let mut g = f.clone();
    for _ in 0..n {
        g = g.delta_index(h);
    }
    Ok(g)
}

/// `|Delta_h^n f(y)| <= tol` for all `y`, `h` in `w`.
pub fn is_polynomial(f: &RealFunctionOnDual, n: u32, w: &DualSubgroup, tol: f64) -> Result<bool> {
    if w.group() != &f.group {
        return Err(Error::GroupMismatch);
    }
    for &h in w.indices() {
        let mut g = f.clone();
        for _ in 0..n {
            g = g.delta_index(h);
        }
        if w.indices().iter().any(|&y| g.values[y].abs() > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `-log` of a characteristic function that is real and strictly positive.
fn log_char(cf: &CharFunction, which: usize) -> Result<RealFunctionOnDual> {
    let values = cf
        .values()
        .iter()
        .map(|v| {
            let c = v.to_complex();
            if !v.is_real() || c.re <= 0.0 {
                Err(Error::NonPositiveCharacteristic(which))
            } else {
                Ok(-c.re.ln())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    RealFunctionOnDual::new(cf.group(), values)
}

/// Builds `psi_j = -log f_j` from the characteristic functions of the two laws
/// and the functions
///
/// * `P(y) = psi_1((I + a~) y) + psi_2(2 a~ y)`,
/// * `Q(y) = psi_1(2 y) + psi_2((I + a~) y)`,
///
/// and checks that both are polynomials of degree at most 2 on the whole
/// character group. When the scenario is symmetric, `P` and `Q` must also
/// vanish.
///
/// Fails with [`Error::NonPositiveCharacteristic`] when a characteristic
/// function is not real and strictly positive everywhere; the usual input is
/// the symmetrized scenario with nonvanishing transforms.
pub fn log_char_polynomial_check(s: &SymmetryScenario, tol: f64) -> Result<bool> {
    log_char_polynomial_check_on(s, &DualSubgroup::whole(s.group()), tol)
}

/// As [`log_char_polynomial_check`], with the difference operators and the
/// vanishing test restricted to the subgroup `w`.
pub fn log_char_polynomial_check_on(s: &SymmetryScenario, w: &DualSubgroup, tol: f64) -> Result<bool> {
    let group = s.group();
    if w.group() != group {
        return Err(Error::GroupMismatch);
    }
    let psi1 = log_char(&s.mu1().char_function(), 1)?;
    let psi2 = log_char(&s.mu2().char_function(), 2)?;
    let at = adjoint(s.alpha());
    let id = DualEndomorphism::identity(group);
    let i_plus = id.add(&at)?;
    let p = psi1.compose(&i_plus)?.add(&psi2.compose(&at.scale(2))?)?;
    let q = psi1.compose(&id.scale(2))?.add(&psi2.compose(&i_plus)?)?;

    if !is_polynomial(&p, 3, w, tol)? || !is_polynomial(&q, 3, w, tol)? {
        return Ok(false);
    }
    if super::symmetry_direct(s) {
        let vanishes = |f: &RealFunctionOnDual| w.indices().iter().all(|&y| f.values[y].abs() <= tol);
        return Ok(vanishes(&p) && vanishes(&q));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{scalar_map, Endomorphism, GroupElement};
    use crate::measures::Distribution;
    use crate::Rational;

    fn g(m: &[u32]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(m.to_vec()).unwrap()
    }

    fn indicator_of_zero(group: &FiniteAbelianGroup) -> RealFunctionOnDual {
        RealFunctionOnDual::from_fn(group, |y| if y.is_zero() { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn delta_examples() {
        let z3 = g(&[3]);
        let f = indicator_of_zero(&z3);
        let one: DualElement = z3.element(&[1]).unwrap();
        assert_eq!(delta(&one, &f).unwrap().values(), &[-1.0, 0.0, 1.0]);
        assert_eq!(delta(&z3.zero(), &f).unwrap().max_abs(), 0.0);
        let c = RealFunctionOnDual::constant(&z3, 2.5).unwrap();
        assert_eq!(delta(&one, &c).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn delta_power_matches_binomial_expansion() {
        let x = g(&[2, 3]);
        let f = RealFunctionOnDual::new(&x, vec![0.5, -1.0, 2.0, 3.0, 0.25, 7.0]).unwrap();
        let h: DualElement = x.element(&[1, 2]).unwrap();
        let d3 = delta_power(&h, 3, &f).unwrap();
        let hi = x.index_of(&h).unwrap();
        for y in 0..x.order() {
            let at = |k: usize| (0..k).fold(y, |acc, _| x.add_index(acc, hi));
            let expect = f.value_at(at(3)) - 3.0 * f.value_at(at(2)) + 3.0 * f.value_at(at(1)) - f.value_at(y);
            assert!((d3.value_at(y) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn polynomial_examples() {
        let z3 = g(&[3]);
        let whole = DualSubgroup::whole(&z3);
        let c = RealFunctionOnDual::constant(&z3, -4.0).unwrap();
        for n in 1..5 {
            assert!(is_polynomial(&c, n, &whole, 0.0).unwrap());
        }
        assert!(!is_polynomial(&indicator_of_zero(&z3), 3, &whole, 0.0).unwrap());
        // On the trivial subgroup every function passes.
        let trivial = DualSubgroup::trivial(&z3);
        assert!(is_polynomial(&indicator_of_zero(&z3), 1, &trivial, 0.0).unwrap());
    }

    #[test]
    fn rejects_non_finite_values() {
        assert!(RealFunctionOnDual::new(&g(&[2]), vec![0.0, f64::NAN]).is_err());
    }

    fn scenario(alpha: Endomorphism, a: Distribution, b: Distribution) -> SymmetryScenario {
        SymmetryScenario::new(alpha, a, b).unwrap()
    }

    #[test]
    fn degenerate_laws_pass() {
        let z5 = g(&[5]);
        let e0 = Distribution::point_mass(&z5, &z5.zero()).unwrap();
        let s = scenario(scalar_map(2, &z5), e0.clone(), e0);
        assert!(log_char_polynomial_check(&s, DEFAULT_TOLERANCE).unwrap());
    }

    #[test]
    fn symmetric_scenarios_pass_after_symmetrization() {
        let z5 = g(&[5]);
        let f2 = scalar_map(2, &z5);
        let x1: GroupElement = z5.element(&[1]).unwrap();
        let x2: GroupElement = z5.element(&[2]).unwrap();
        let s = scenario(f2, Distribution::point_mass(&z5, &x1).unwrap(), Distribution::point_mass(&z5, &x2).unwrap());
        assert!(super::super::symmetry_direct(&s));
        let nu = s.symmetrized();
        assert!(super::super::symmetry_direct(&nu));
        assert!(log_char_polynomial_check(&nu, DEFAULT_TOLERANCE).unwrap());
    }

    #[test]
    fn vanishing_transform_is_an_error() {
        let z5 = g(&[5]);
        let u = Distribution::uniform(&z5);
        let s = scenario(scalar_map(2, &z5), u.clone(), u);
        assert_eq!(log_char_polynomial_check(&s, DEFAULT_TOLERANCE), Err(Error::NonPositiveCharacteristic(1)));

        // Nonreal transform.
        let m =
            Distribution::from_dense(&z5, vec![Rational::new(1, 2), Rational::new(1, 2), 0.into(), 0.into(), 0.into()])
                .unwrap();
        let e0 = Distribution::point_mass(&z5, &z5.zero()).unwrap();
        let s = scenario(scalar_map(2, &z5), e0, m);
        assert_eq!(log_char_polynomial_check(&s, DEFAULT_TOLERANCE), Err(Error::NonPositiveCharacteristic(2)));
    }

    #[test]
    fn restricted_subgroup_variant() {
        let x = g(&[3, 5]);
        let alpha = Endomorphism::new(&x, &[vec![1, 0], vec![0, 2]]).unwrap();
        let x1: GroupElement = x.element(&[0, 1]).unwrap();
        let x2: GroupElement = x.element(&[0, 2]).unwrap();
        let s = scenario(alpha, Distribution::point_mass(&x, &x1).unwrap(), Distribution::point_mass(&x, &x2).unwrap())
            .symmetrized();
        let w = DualSubgroup::generated(&x, &[x.element(&[0, 1]).unwrap()]).unwrap();
        assert!(log_char_polynomial_check_on(&s, &w, DEFAULT_TOLERANCE).unwrap());
    }
}
