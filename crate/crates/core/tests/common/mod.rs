#![allow(dead_code)]

use condsym_core::search::enumerate_automorphisms;
use condsym_core::{
    enumerate_subgroups, Distribution, Endomorphism, FiniteAbelianGroup, GroupElement, Rational, SymmetryScenario,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn group(moduli: &[u32]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(moduli.to_vec()).unwrap()
}

/// Moduli lists of every group used by the randomized scenario checks; all of
/// order at most 25.
pub const SMALL_GROUPS: &[&[u32]] = &[
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[8],
    &[9],
    &[10],
    &[12],
    &[15],
    &[25],
    &[2, 2],
    &[2, 4],
    &[3, 3],
    &[2, 6],
    &[3, 5],
    &[4, 4],
    &[2, 8],
    &[5, 5],
    &[2, 2, 2],
    &[2, 2, 3],
    &[2, 2, 5],
    &[2, 2, 6],
];

/// Nondecreasing moduli lists (entries at least 2) with product at most `max`.
pub fn all_moduli_lists(max: u32) -> Vec<Vec<u32>> {
    fn go(start: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for m in start..=left {
            cur.push(m);
            go(m, left / m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(2, max, &mut Vec::new(), &mut out);
    out
}

pub fn random_distribution<R: Rng>(rng: &mut R, x: &FiniteAbelianGroup) -> Distribution {
    let support = rng.gen_range(1..=x.order().min(4));
    let mut idx: Vec<usize> = (0..x.order()).collect();
    idx.shuffle(rng);
    let weights: Vec<i128> = (0..support).map(|_| rng.gen_range(1..=5)).collect();
    let total: i128 = weights.iter().sum();
    let entries = idx[..support]
        .iter()
        .zip(&weights)
        .map(|(&i, &w)| (x.element_at(i), Rational::new(w, total)))
        .collect::<Vec<(GroupElement, Rational)>>();
    Distribution::new(x, entries).unwrap()
}

/// A random scenario drawn from a mix of families so that symmetric and
/// non-symmetric cases both occur often.
pub fn random_scenario<R: Rng>(rng: &mut R, moduli: &[u32]) -> SymmetryScenario {
    let x = group(moduli);
    let autos = enumerate_automorphisms(&x).unwrap();
    let alpha = autos.choose(rng).unwrap().clone();
    let pick = |rng: &mut R| x.element_at::<condsym_core::Primal>(rng.gen_range(0..x.order()));
    let (mu1, mu2) = match rng.gen_range(0..4) {
        0 => (random_distribution(rng, &x), random_distribution(rng, &x)),
        1 => {
            let subs = enumerate_subgroups(&x).unwrap();
            let k = subs.choose(rng).unwrap();
            let m = Distribution::haar(k);
            (m.shift(&pick(rng)).unwrap(), m.shift(&pick(rng)).unwrap())
        }
        2 => {
            // Point masses, half of the time with x1 + alpha x2 = 0.
            let b = pick(rng);
            let a = if rng.gen_bool(0.5) { x.neg(&alpha.apply(&b).unwrap()).unwrap() } else { pick(rng) };
            (Distribution::point_mass(&x, &a).unwrap(), Distribution::point_mass(&x, &b).unwrap())
        }
        _ => {
            let kernel = Endomorphism::identity(&x).add(&alpha).unwrap().kernel();
            let g = kernel.elements().last().unwrap();
            let half = Rational::new(1, 2);
            let m = if g.is_zero() {
                random_distribution(rng, &x)
            } else {
                Distribution::new(&x, vec![(x.zero(), half), (g, half)]).unwrap()
            };
            (m.clone(), m)
        }
    };
    SymmetryScenario::new(alpha, mu1, mu2).unwrap()
}
