//! Fixtures shared by the benchmarks.

use condsym_core::{Endomorphism, FiniteAbelianGroup};

/// `(label, alpha, denominator)` for the census workloads.
pub fn census_targets() -> Vec<(&'static str, Endomorphism, u32)> {
    let z5 = FiniteAbelianGroup::cyclic(5).expect("valid modulus");
    let z3z5 = FiniteAbelianGroup::new(vec![3, 5]).expect("valid moduli");
    let z2z2z3 = FiniteAbelianGroup::new(vec![2, 2, 3]).expect("valid moduli");
    vec![
        ("z5_d4", Endomorphism::scalar(&z5, 2), 4),
        ("z3xz5_d2", Endomorphism::new(&z3z5, &[vec![1, 0], vec![0, 2]]).expect("valid matrix"), 2),
        (
            "z2xz2xz3_d2",
            Endomorphism::new(&z2z2z3, &[vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).expect("valid matrix"),
            2,
        ),
    ]
}
