//! Characters, annihilators and adjoint endomorphisms.
//!
//! The character group of `Z(n_1) x ... x Z(n_k)` is identified with the same
//! modulus list. With `N` the group exponent, the character `y` takes the
//! value `zeta_N^index(x, y)` at `x`, where
//! `index(x, y) = sum_j (N / n_j) x_j y_j mod N`. Only the exponent index is
//! ever passed around, so every downstream computation stays exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, Endomorphism, FiniteAbelianGroup, Side, Subgroup};

/// The exponent `k` in `(x, y) = zeta_N^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairingIndex {
    value: u32,
    modulus: u32,
}

impl PairingIndex {
    pub fn value(self) -> u32 {
        self.value
    }

    /// The root-of-unity order `N`.
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_trivial(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for PairingIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta_{}^{}", self.modulus, self.value)
    }
}

/// Per-coordinate weights `N / n_j`.
pub(crate) fn pairing_weights(group: &FiniteAbelianGroup) -> Vec<u64> {
    let n = group.exponent() as u64;
    group.moduli().iter().map(|&m| n / m as u64).collect()
}

pub(crate) fn pairing_coords(weights: &[u64], exponent: u32, a: &[u32], b: &[u32]) -> u32 {
    let s: u64 = weights.iter().zip(a.iter().zip(b)).map(|(&w, (&x, &y))| w * x as u64 * y as u64).sum();
    (s % exponent as u64) as u32
}

/// Pairing of `x` with `y`. The formula is symmetric in its arguments, so it
/// also pairs a dual element with a primal one under the bidual identification.
pub fn pairing_index<S: Side>(
    group: &FiniteAbelianGroup,
    x: &Element<S>,
    y: &Element<S::Other>,
) -> Result<PairingIndex> {
    group.check(x)?;
    group.check(y)?;
    let w = pairing_weights(group);
    Ok(PairingIndex { value: pairing_coords(&w, group.exponent(), x.coords(), y.coords()), modulus: group.exponent() })
}

/// Dense table `t[a * order + b] = index(element a, element b)`.
pub fn pairing_table(group: &FiniteAbelianGroup) -> Vec<u32> {
    let n = group.order();
    let w = pairing_weights(group);
    let mut coords = vec![vec![0u32; group.rank()]; n];
    for (i, c) in coords.iter_mut().enumerate() {
        group.decode_into(i, c);
    }
    let mut t = vec![0u32; n * n];
    for a in 0..n {
        for b in a..n {
            let v = pairing_coords(&w, group.exponent(), &coords[a], &coords[b]);
            t[a * n + b] = v;
            t[b * n + a] = v;
        }
    }
    t
}

/// `A(Y, K) = { y : (x, y) = 1 for all x in K }`; on the dual side this is
/// `A(X, E)`.
pub fn annihilator<S: Side>(sub: &Subgroup<S>) -> Subgroup<S::Other> {
    let group = sub.group();
    let w = pairing_weights(group);
    let n = group.exponent();
    let members: Vec<Vec<u32>> = sub.elements().map(|x| x.coords().to_vec()).collect();
    let mut y = vec![0u32; group.rank()];
    let mask = (0..group.order())
        .map(|i| {
            group.decode_into(i, &mut y);
            members.iter().all(|x| pairing_coords(&w, n, x, &y) == 0)
        })
        .collect();
    Subgroup::from_mask(group, mask)
}

/// The adjoint `e~` with `(x, e~ y) = (e x, y)`.
///
/// The entries solve `(N/n_j) t[j][i] = (N/n_i) m[i][j] (mod N)`, giving
/// `t[j][i] = m[i][j] n_j / n_i`, which is integral because of the
/// homomorphism congruence on `m`. The result is checked on every pair of
/// generators, which by bilinearity covers all pairs.
pub fn adjoint<S: Side>(e: &Endomorphism<S>) -> Endomorphism<S::Other> {
    let group = e.group();
    let moduli = group.moduli();
    let k = group.rank();
    let m = e.matrix();
    let mut rows = vec![vec![0i64; k]; k];
    for j in 0..k {
        for i in 0..k {
            let num = m[i][j] as u64 * moduli[j] as u64;
            debug_assert_eq!(num % moduli[i] as u64, 0);
            rows[j][i] = (num / moduli[i] as u64) as i64;
        }
    }
    let adj =
        Endomorphism::<S::Other>::new(group, &rows).expect("adjoint of a homomorphism satisfies the dual congruences");

    let basis = |i: usize| -> Vec<u32> { (0..k).map(|l| u32::from(l == i)).collect() };
    let w = pairing_weights(group);
    for a in 0..k {
        let x = group.element_at::<S>(group.index_unchecked(&basis(a)));
        let ex = e.apply(&x).expect("basis element belongs to the group");
        for b in 0..k {
            let y = group.element_at::<S::Other>(group.index_unchecked(&basis(b)));
            let ay = adj.apply(&y).expect("basis element belongs to the group");
            assert_eq!(
                pairing_coords(&w, group.exponent(), x.coords(), ay.coords()),
                pairing_coords(&w, group.exponent(), ex.coords(), y.coords()),
                "adjoint construction failed on generators {a}, {b}"
            );
        }
    }
    adj
}

/// `(x, y)` is trivial for every `x` in `sub` and `y` in `dual_sub`.
pub fn annihilates<S: Side>(sub: &Subgroup<S>, dual_sub: &Subgroup<S::Other>) -> Result<bool> {
    if sub.group() != dual_sub.group() {
        return Err(Error::GroupMismatch);
    }
    Ok(dual_sub.is_subgroup_of(&annihilator(sub)))
}
