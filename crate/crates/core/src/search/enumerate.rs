use std::collections::HashSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{Endomorphism, FiniteAbelianGroup, Subgroup};

/// Largest group order accepted by the enumerators by default.
pub const DEFAULT_MAX_ORDER: usize = 72;
/// Largest number of candidate matrices scanned for automorphisms by default.
pub const DEFAULT_MAX_CANDIDATES: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_order: usize,
    pub max_candidates: u128,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER, max_candidates: DEFAULT_MAX_CANDIDATES }
    }
}

impl EnumerationLimits {
    fn check_order(&self, group: &FiniteAbelianGroup) -> Result<()> {
        if group.order() > self.max_order {
            return Err(Error::CapExceeded {
                what: "group order",
                requested: group.order() as u128,
                limit: self.max_order as u128,
            });
        }
        Ok(())
    }
}

/// Number of homomorphism matrices: entry `(i, j)` ranges over the multiples of
/// `n_i / gcd(n_i, n_j)` in `Z(n_i)`.
pub fn endomorphism_count(group: &FiniteAbelianGroup) -> u128 {
    let m = group.moduli();
    m.iter()
        .flat_map(|&a| m.iter().map(move |&b| a.gcd(&b) as u128))
        .try_fold(1u128, |acc, g| acc.checked_mul(g))
        .unwrap_or(u128::MAX)
}

pub fn enumerate_automorphisms(group: &FiniteAbelianGroup) -> Result<Vec<Endomorphism>> {
    enumerate_automorphisms_with(group, &EnumerationLimits::default())
}

/// All automorphisms, in lexicographic order of their matrices (row-major).
pub fn enumerate_automorphisms_with(
    group: &FiniteAbelianGroup,
    limits: &EnumerationLimits,
) -> Result<Vec<Endomorphism>> {
    let mut all = enumerate_endomorphisms_with(group, limits)?;
    all.retain(Endomorphism::is_automorphism);
    Ok(all)
}

/// Every endomorphism, in lexicographic order of the matrices (row-major).
pub fn enumerate_endomorphisms_with(
    group: &FiniteAbelianGroup,
    limits: &EnumerationLimits,
) -> Result<Vec<Endomorphism>> {
    limits.check_order(group)?;
    let count = endomorphism_count(group);
    if count > limits.max_candidates {
        return Err(Error::CapExceeded { what: "candidate matrices", requested: count, limit: limits.max_candidates });
    }
    let m = group.moduli();
    let k = m.len();
    // (step, choices) per entry, row-major.
    let cells: Vec<(i64, u32)> = (0..k * k)
        .map(|c| {
            let (i, j) = (c / k, c % k);
            let g = m[i].gcd(&m[j]);
            ((m[i] / g) as i64, g)
        })
        .collect();
    let mut digits = vec![0u32; k * k];
    let mut out = Vec::new();
    loop {
        let rows: Vec<Vec<i64>> =
            (0..k).map(|i| (0..k).map(|j| digits[i * k + j] as i64 * cells[i * k + j].0).collect()).collect();
        out.push(Endomorphism::new(group, &rows).expect("entries satisfy the homomorphism congruences"));
        // Odometer, last cell fastest.
        let mut c = k * k;
        loop {
            if c == 0 {
                return Ok(out);
            }
            c -= 1;
            digits[c] += 1;
            if digits[c] < cells[c].1 {
                break;
            }
            digits[c] = 0;
        }
    }
}

pub fn enumerate_subgroups(group: &FiniteAbelianGroup) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_with(group, &EnumerationLimits::default())
}

pub fn enumerate_subgroups_with(group: &FiniteAbelianGroup, limits: &EnumerationLimits) -> Result<Vec<Subgroup>> {
    limits.check_order(group)?;
    Ok(subgroups_inside(&Subgroup::whole(group)))
}

/// All subgroups of `sub` (as subgroups of the ambient group), sorted by order
/// and then by member indices. The order cap applies to `sub`.
pub fn enumerate_subgroups_of(sub: &Subgroup) -> Result<Vec<Subgroup>> {
    let limit = EnumerationLimits::default().max_order;
    if sub.order() > limit {
        return Err(Error::CapExceeded {
            what: "subgroup order",
            requested: sub.order() as u128,
            limit: limit as u128,
        });
    }
    Ok(subgroups_inside(sub))
}

fn subgroups_inside(sub: &Subgroup) -> Vec<Subgroup> {
    let group = sub.group();
    let trivial = Subgroup::trivial(group);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(trivial.indices().to_vec());
    let mut found = vec![trivial];
    let mut frontier = 0;
    while frontier < found.len() {
        let s = found[frontier].clone();
        frontier += 1;
        for &g in sub.indices() {
            if s.contains_index(g) {
                continue;
            }
            let t = join_cyclic(&s, g);
            if seen.insert(t.indices().to_vec()) {
                found.push(t);
            }
        }
    }
    found.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.indices().cmp(b.indices())));
    found
}

/// `S + <g>`.
fn join_cyclic(s: &Subgroup, g: usize) -> Subgroup {
    let group = s.group();
    let mut multiples = vec![0usize];
    let mut m = g;
    while m != 0 {
        multiples.push(m);
        m = group.add_index(m, g);
    }
    let mut mask = vec![false; group.order()];
    for &a in s.indices() {
        for &b in &multiples {
            mask[group.add_index(a, b)] = true;
        }
    }
    Subgroup::from_mask(group, mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: &[u32]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn automorphism_counts() {
        for (m, n) in [(&[5][..], 4), (&[2, 2], 6), (&[3, 3], 48), (&[6], 2), (&[9], 6), (&[3, 5], 8), (&[2, 2, 3], 12)]
        {
            let all = enumerate_automorphisms(&g(m)).unwrap();
            assert_eq!(all.len(), n, "{m:?}");
            assert!(all.iter().all(Endomorphism::is_automorphism));
        }
    }

    #[test]
    fn endomorphism_counts() {
        let limits = EnumerationLimits::default();
        for m in [&[6][..], &[2, 4], &[2, 2, 3]] {
            let x = g(m);
            let all = enumerate_endomorphisms_with(&x, &limits).unwrap();
            assert_eq!(all.len() as u128, endomorphism_count(&x));
        }
        assert_eq!(endomorphism_count(&g(&[2, 4])), 32);
    }

    #[test]
    fn subgroup_counts() {
        for (m, n) in [(&[5][..], 2), (&[2, 2], 5), (&[3, 3], 6), (&[6], 4), (&[9], 3), (&[3, 5], 4), (&[2, 2, 3], 10)]
        {
            let all = enumerate_subgroups(&g(m)).unwrap();
            assert_eq!(all.len(), n, "{m:?}");
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), n);
        }
    }

    #[test]
    fn subgroups_of_a_subgroup() {
        let x = g(&[2, 2, 3]);
        let odd = crate::group::odd_component(&x);
        let inside = enumerate_subgroups_of(&odd).unwrap();
        assert_eq!(inside.len(), 2);
        assert!(inside[0].is_trivial());
        assert_eq!(inside[1], odd);
    }

    #[test]
    fn caps() {
        let big = g(&[73]);
        assert!(matches!(enumerate_subgroups(&big), Err(Error::CapExceeded { .. })));
        assert!(matches!(enumerate_automorphisms(&big), Err(Error::CapExceeded { .. })));
        let limits = EnumerationLimits { max_order: 100, max_candidates: 10 };
        assert!(matches!(
            enumerate_automorphisms_with(&g(&[2, 2, 2, 2]), &limits),
            Err(Error::CapExceeded { what: "candidate matrices", .. })
        ));
    }

    #[test]
    fn deterministic_order() {
        let x = g(&[2, 4]);
        assert_eq!(enumerate_subgroups(&x).unwrap(), enumerate_subgroups(&x).unwrap());
        assert_eq!(enumerate_automorphisms(&x).unwrap(), enumerate_automorphisms(&x).unwrap());
    }
}
