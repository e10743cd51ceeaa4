use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::measures::Distribution;

/// All distributions on `X` whose masses are multiples of `1 / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    group: FiniteAbelianGroup,
    denominator: u32,
}

impl GridSpec {
    pub fn new(group: &FiniteAbelianGroup, denominator: u32) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidDistribution("grid denominator must be at least 1".into()));
        }
        Ok(Self { group: group.clone(), denominator })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    /// `C(d + |X| - 1, |X| - 1)`, saturating at `u128::MAX`.
    pub fn count(&self) -> u128 {
        binomial(self.denominator as u128 + self.group.order() as u128 - 1, self.group.order() as u128 - 1)
    }

    /// Mass counts of every grid point, in lexicographic order.
    pub fn compositions(&self) -> Compositions {
        let n = self.group.order();
        let mut first = vec![0u32; n];
        first[n - 1] = self.denominator;
        Compositions { next: Some(first) }
    }

    pub fn distributions(&self) -> impl Iterator<Item = Distribution> + '_ {
        self.compositions().map(move |c| {
            Distribution::from_counts(&self.group, &c, self.denominator).expect("counts sum to the denominator")
        })
    }
}

/// `C(n, k)`, saturating.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Compositions of `d` into a fixed number of nonnegative parts, ascending in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    next: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let n = current.len();
        // Last nonzero part; everything after the part before it moves to the end.
        let j = (0..n).rev().find(|&i| current[i] > 0).unwrap_or(0);
        if j > 0 {
            let mut c = current.clone();
            let i = j - 1;
            let tail: u32 = c[i + 1..].iter().sum();
            c[i] += 1;
            for v in &mut c[i + 1..] {
                *v = 0;
            }
            c[n - 1] = tail - 1;
            self.next = Some(c);
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn g(m: &[u32]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(GridSpec::new(&g(&[3]), 2).unwrap().count(), 6);
        assert_eq!(GridSpec::new(&g(&[5]), 4).unwrap().count(), 70);
        assert_eq!(GridSpec::new(&g(&[3, 5]), 2).unwrap().count(), 120);
        assert_eq!(GridSpec::new(&g(&[2, 2, 3]), 2).unwrap().count(), 78);
        assert_eq!(GridSpec::new(&g(&[15]), 6).unwrap().count(), 38760);
        assert!(GridSpec::new(&g(&[3]), 0).is_err());
    }

    #[test]
    fn enumeration_is_exhaustive_and_ordered() {
        for (m, d) in [(&[3][..], 2), (&[5], 4), (&[2, 2], 3), (&[], 3), (&[2], 1)] {
            let spec = GridSpec::new(&g(m), d).unwrap();
            let all: Vec<Vec<u32>> = spec.compositions().collect();
            assert_eq!(all.len() as u128, spec.count(), "{m:?} {d}");
            assert!(all.iter().all(|c| c.iter().sum::<u32>() == d));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn denominator_one_gives_point_masses() {
        let x = g(&[2, 3]);
        let spec = GridSpec::new(&x, 1).unwrap();
        let all: Vec<Distribution> = spec.distributions().collect();
        assert_eq!(all.len(), 6);
        for (k, mu) in all.iter().enumerate() {
            assert_eq!(mu.support_indices(), vec![5 - k]);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(20, 14), 38760);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
    }
}
