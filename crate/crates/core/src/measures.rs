//! Exact probability distributions on a finite Abelian group and their
//! characteristic functions.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cyclo::CycloValue;
use crate::duality::{pairing_coords, pairing_weights};
use crate::error::{Error, Result};
use crate::group::{Dual, DualElement, DualSubgroup, Endomorphism, FiniteAbelianGroup, GroupElement, Primal, Subgroup};
use crate::Rational;

/// A probability mass function with exact rational masses summing to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    group: FiniteAbelianGroup,
    masses: Vec<Rational>,
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(0,1):1/2 (1,0):1/2`, the support in index order.
impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, i) in self.support_indices().into_iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", self.group.element_at::<Primal>(i), self.masses[i])?;
        }
        Ok(())
    }
}

impl Distribution {
    /// Dense masses in element-index order.
    pub fn from_dense(group: &FiniteAbelianGroup, masses: Vec<Rational>) -> Result<Self> {
        if masses.len() != group.order() {
            return Err(Error::InvalidDistribution(format!(
                "{} masses for a group of order {}",
                masses.len(),
                group.order()
            )));
        }
        if let Some(m) = masses.iter().find(|m| m.is_negative()) {
            return Err(Error::InvalidDistribution(format!("negative mass {m}")));
        }
        let total: Rational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { group: group.clone(), masses })
    }

    /// Sparse constructor; listing an element twice is an error.
    pub fn new(
        group: &FiniteAbelianGroup,
        entries: impl IntoIterator<Item = (GroupElement, Rational)>,
    ) -> Result<Self> {
        let mut masses = vec![Rational::zero(); group.order()];
        let mut seen = vec![false; group.order()];
        for (x, m) in entries {
            let i = group.index_of(&x)?;
            if seen[i] {
                return Err(Error::InvalidDistribution(format!("element {x} listed twice")));
            }
            seen[i] = true;
            masses[i] = m;
        }
        Self::from_dense(group, masses)
    }

    /// Masses `counts[i] / d`.
    pub fn from_counts(group: &FiniteAbelianGroup, counts: &[u32], d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDistribution("denominator 0".into()));
        }
        Self::from_dense(group, counts.iter().map(|&c| Rational::new(c as i128, d as i128)).collect())
    }

    /// Converts float masses to the nearest rationals with denominator at most
    /// `max_den`. The rounded masses must still sum to exactly 1.
    pub fn rationalize(
        group: &FiniteAbelianGroup,
        entries: impl IntoIterator<Item = (GroupElement, f64)>,
        max_den: u64,
    ) -> Result<Self> {
        let mut out = Vec::new();
        for (x, v) in entries {
            let q = rationalize_f64(v, max_den)
                .ok_or_else(|| Error::InvalidDistribution(format!("mass {v} is not a finite number")))?;
            out.push((x, q));
        }
        Self::new(group, out)
    }

    pub fn point_mass(group: &FiniteAbelianGroup, x: &GroupElement) -> Result<Self> {
        let mut masses = vec![Rational::zero(); group.order()];
        masses[group.index_of(x)?] = Rational::one();
        Ok(Self { group: group.clone(), masses })
    }

    /// Haar distribution `m_K`, uniform on `K`.
    pub fn haar(sub: &Subgroup) -> Self {
        let w = Rational::new(1, sub.order() as i128);
        let mut masses = vec![Rational::zero(); sub.group().order()];
        for &i in sub.indices() {
            masses[i] = w;
        }
        Self { group: sub.group().clone(), masses }
    }

    /// Uniform distribution on the whole group.
    pub fn uniform(group: &FiniteAbelianGroup) -> Self {
        Self::haar(&Subgroup::whole(group))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn mass(&self, x: &GroupElement) -> Result<Rational> {
        Ok(self.masses[self.group.index_of(x)?])
    }

    pub fn mass_at(&self, idx: usize) -> Rational {
        self.masses[idx]
    }

    pub fn support_indices(&self) -> Vec<usize> {
        (0..self.masses.len()).filter(|&i| !self.masses[i].is_zero()).collect()
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.support_indices().into_iter().map(|i| self.group.element_at(i)).collect()
    }

    /// Integer masses over a common denominator.
    pub fn scaled_masses(&self) -> (Vec<i128>, i128) {
        let den = self.masses.iter().fold(1i128, |acc, m| acc.lcm(m.denom()));
        (self.masses.iter().map(|m| m.numer() * (den / m.denom())).collect(), den)
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// `(mu1 * mu2)(z) = sum_x mu1(x) mu2(z - x)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut masses = vec![Rational::zero(); self.group.order()];
        let rhs = other.support_indices();
        for a in self.support_indices() {
            for &b in &rhs {
                masses[self.group.add_index(a, b)] += self.masses[a] * other.masses[b];
            }
        }
        Ok(Self { group: self.group.clone(), masses })
    }

    /// `mu~(B) = mu(-B)`.
    pub fn reflect(&self) -> Self {
        let mut masses = vec![Rational::zero(); self.group.order()];
        for (i, m) in self.masses.iter().enumerate() {
            masses[self.group.neg_index(i)] = *m;
        }
        Self { group: self.group.clone(), masses }
    }

    /// `mu * E_x`.
    pub fn shift(&self, x: &GroupElement) -> Result<Self> {
        let s = self.group.index_of(x)?;
        let mut masses = vec![Rational::zero(); self.group.order()];
        for (i, m) in self.masses.iter().enumerate() {
            masses[self.group.add_index(i, s)] = *m;
        }
        Ok(Self { group: self.group.clone(), masses })
    }

    /// Law of `e xi` when `xi` has law `self`.
    pub fn pushforward(&self, e: &Endomorphism) -> Result<Self> {
        if e.group() != &self.group {
            return Err(Error::GroupMismatch);
        }
        let mut masses = vec![Rational::zero(); self.group.order()];
        for (i, m) in self.masses.iter().enumerate() {
            masses[e.apply_index(i)] += *m;
        }
        Ok(Self { group: self.group.clone(), masses })
    }

    /// `mu^(y) = sum_x mu(x) (x, y)`, exactly, at every character.
    pub fn char_function(&self) -> CharFunction {
        let group = &self.group;
        let n = group.exponent();
        let w = pairing_weights(group);
        let (scaled, den) = self.scaled_masses();
        let support: Vec<(Vec<u32>, i128)> = self
            .support_indices()
            .into_iter()
            .map(|i| (group.element_at::<Primal>(i).coords().to_vec(), scaled[i]))
            .collect();
        let mut y = vec![0u32; group.rank()];
        let values = (0..group.order())
            .map(|j| {
                group.decode_into(j, &mut y);
                let mut num = vec![0i128; n as usize];
                for (x, m) in &support {
                    num[pairing_coords(&w, n, x, &y) as usize] += m;
                }
                CycloValue::from_scaled(num, den)
            })
            .collect();
        CharFunction { group: group.clone(), values }
    }

    /// `E = { y : mu^(y) = 1 }`, a subgroup of the character group with
    /// `supp(mu)` inside `A(X, E)`.
    pub fn unit_set(&self) -> DualSubgroup {
        let cf = self.char_function();
        let one = CycloValue::one(self.group.exponent());
        let mask = cf.values.iter().map(|v| *v == one).collect();
        Subgroup::<Dual>::from_mask(&self.group, mask)
    }

    /// `Some((K, x))` iff `mu = m_K * E_x`; `x` is the smallest support element.
    pub fn haar_shift_decompose(&self) -> Option<(Subgroup, GroupElement)> {
        let support = self.support_indices();
        let base = support[0];
        let neg = self.group.neg_index(base);
        let w = self.masses[base];
        if support.iter().any(|&i| self.masses[i] != w) {
            return None;
        }
        if w != Rational::new(1, support.len() as i128) {
            return None;
        }
        let mut mask = vec![false; self.group.order()];
        for &i in &support {
            mask[self.group.add_index(i, neg)] = true;
        }
        let members: Vec<usize> = support.iter().map(|&i| self.group.add_index(i, neg)).collect();
        for &a in &members {
            for &b in &members {
                if !mask[self.group.add_index(a, b)] {
                    return None;
                }
            }
        }
        Some((Subgroup::from_mask(&self.group, mask), self.group.element_at(base)))
    }
}

/// Best rational approximation of `v` with denominator at most `max_den`.
pub fn rationalize_f64(v: f64, max_den: u64) -> Option<Rational> {
    if !v.is_finite() || max_den == 0 {
        return None;
    }
    let neg = v < 0.0;
    let mut x = v.abs();
    // Convergents h/k of the continued fraction of x.
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let max_den = max_den as i128;
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den {
            // Best semiconvergent within the bound.
            let t = (max_den - k0) / k1;
            let (hs, ks) = (t * h1 + h0, t * k1 + k0);
            let cand = Rational::new(hs, ks);
            let conv = Rational::new(h1, k1);
            let err = |q: &Rational| (*q.numer() as f64 / *q.denom() as f64 - v.abs()).abs();
            let best = if ks > 0 && err(&cand) < err(&conv) { cand } else { conv };
            return Some(if neg { -best } else { best });
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a as f64;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    let q = Rational::new(h1, k1);
    Some(if neg { -q } else { q })
}

/// Exact characteristic function, one value per character in index order.
#[derive(Clone, PartialEq, Eq)]
pub struct CharFunction {
    group: FiniteAbelianGroup,
    values: Vec<CycloValue>,
}

impl fmt::Debug for CharFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.values.iter().enumerate().map(|(i, v)| (self.group.element_at::<Dual>(i), v)))
            .finish()
    }
}

impl CharFunction {
    /// Values in character-index order; each must live in `Q[zeta_N]` with `N`
    /// the group exponent.
    pub fn new(group: &FiniteAbelianGroup, values: Vec<CycloValue>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), got: values.len() });
        }
        if values.iter().any(|v| v.order() != group.exponent()) {
            return Err(Error::Precondition(format!("values must be cyclotomic of order {}", group.exponent())));
        }
        Ok(Self { group: group.clone(), values })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[CycloValue] {
        &self.values
    }

    pub fn value(&self, y: &DualElement) -> Result<&CycloValue> {
        Ok(&self.values[self.group.index_of(y)?])
    }

    pub fn value_at(&self, idx: usize) -> &CycloValue {
        &self.values[idx]
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.values.iter().map(CycloValue::to_complex).collect()
    }

    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(Self {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// Recovers the distribution via
    /// `mu(x) = (1/|X|) sum_y mu^(y) zeta^{-index(x, y)}`.
    /// Fails unless every recovered mass is rational, nonnegative and the
    /// total is 1.
    pub fn invert(&self) -> Result<Distribution> {
        let group = &self.group;
        let n = group.exponent();
        let w = pairing_weights(group);
        let order = Rational::new(group.order() as i128, 1);
        let mut x = vec![0u32; group.rank()];
        let mut y = vec![0u32; group.rank()];
        let mut masses = Vec::with_capacity(group.order());
        for i in 0..group.order() {
            group.decode_into(i, &mut x);
            let mut acc = CycloValue::zero(n);
            for (j, v) in self.values.iter().enumerate() {
                group.decode_into(j, &mut y);
                let k = pairing_coords(&w, n, &x, &y);
                acc = &acc + &v.rotate((n - k) % n);
            }
            let m = acc
                .as_rational()
                .ok_or_else(|| Error::InvalidDistribution(format!("inverse transform is irrational at index {i}")))?;
            masses.push(m / order);
        }
        Distribution::from_dense(group, masses)
    }
}
