//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::{all_moduli_lists, group, random_scenario, SMALL_GROUPS};
use condsym_core::search::{enumerate_endomorphisms_with, enumerate_subgroups_of, EnumerationLimits};
use condsym_core::{
    adjoint, annihilator, canonical_undecomposable_exhibit, census, enumerate_automorphisms, enumerate_subgroups,
    haar_characterization_verdict, haar_pair_symmetry, independence_check, is_polynomial, kernel_condition,
    kernel_witness, log_char_polynomial_check, odd_component, p_component, preimage_annihilator_check, scalar_map,
    symmetry_direct, symmetry_spectral, two_component_decompose, two_component_factor_at, CensusOptions, CensusReport,
    DualSubgroup, Endomorphism, LinearFormPair, Rational, RealFunctionOnDual, Subgroup, SymmetryScenario,
    DEFAULT_TOLERANCE,
};
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn full(workers: usize) -> CensusOptions {
    CensusOptions { workers, spectral_stride: 1, ..CensusOptions::default() }
}

/// The two odd-order censuses, computed once with a spectral check on every pair.
fn odd_censuses() -> &'static [(String, CensusReport); 2] {
    static CELL: OnceLock<[(String, CensusReport); 2]> = OnceLock::new();
    CELL.get_or_init(|| {
        let z5 = group(&[5]);
        let z3z5 = group(&[3, 5]);
        let diag = Endomorphism::new(&z3z5, &[vec![1, 0], vec![0, 2]]).unwrap();
        [
            ("Z(5) alpha=2 d=4".to_string(), census(&scalar_map(2, &z5), 4, &full(4)).unwrap()),
            ("Z(3)xZ(5) alpha=diag(1,2) d=2".to_string(), census(&diag, 2, &full(4)).unwrap()),
        ]
    })
}

fn z3_census() -> &'static CensusReport {
    static CELL: OnceLock<CensusReport> = OnceLock::new();
    CELL.get_or_init(|| census(&scalar_map(2, &group(&[3])), 2, &full(1)).unwrap())
}

fn direct_equals_spectral() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51_6e_a1);
    let (mut total, mut symmetric) = (0usize, 0usize);
    for _ in 0..600 {
        let moduli = SMALL_GROUPS[rng.gen_range(0..SMALL_GROUPS.len())];
        let s = random_scenario(&mut rng, moduli);
        let d = symmetry_direct(&s);
        ensure!(d == symmetry_spectral(&s), "disagreement on {moduli:?}: {:?}", s);
        total += 1;
        symmetric += usize::from(d);
    }
    let mut pairs = 0u128;
    for (name, r) in odd_censuses() {
        ensure!(r.spectral_checked as u128 == r.examined, "{name}: only {} pairs checked", r.spectral_checked);
        ensure!(
            r.spectral_agreed == r.spectral_checked,
            "{name}: {} disagreements",
            r.spectral_checked - r.spectral_agreed
        );
        pairs += r.examined;
    }
    Ok(format!("{total} random scenarios ({symmetric} symmetric) and {pairs} census pairs agree"))
}

fn odd_order_census() -> Result<String, String> {
    let mut summary = Vec::new();
    for ((name, r), expected) in odd_censuses().iter().zip([5, 15]) {
        ensure!(r.hypotheses_hold(), "{name}: hypotheses should hold");
        ensure!(r.symmetric == expected, "{name}: {} symmetric pairs, expected {expected}", r.symmetric);
        ensure!(r.unexplained == 0, "{name}: {} unexplained pairs", r.unexplained);
        ensure!(r.haar_shift == r.symmetric, "{name}: not every symmetric pair is a Haar-shift pair");
        for rec in &r.records {
            let k = rec.subgroup.as_ref().ok_or("classified record without subgroup")?;
            ensure!(r.alpha.image_of(k).unwrap() == *k, "{name}: alpha(K) != K");
            let v = haar_characterization_verdict(
                &SymmetryScenario::new(r.alpha.clone(), rec.mu1.clone(), rec.mu2.clone()).unwrap(),
            );
            ensure!(v.counterexample.is_none(), "{name}: counterexample {:?}", v.counterexample);
            ensure!(v.decomposition.as_ref().map(|d| &d.subgroup) == Some(k), "{name}: verdict subgroup differs");
        }
        summary.push(format!("{name}: {}/{} symmetric, all Haar-shift", r.symmetric, r.examined));
    }
    Ok(summary.join("; "))
}

fn kernel_condition_is_needed() -> Result<String, String> {
    let r = z3_census();
    ensure!(!r.kernel_trivial, "kernel flag should be raised on Z(3) with alpha=2");
    let non_haar = r
        .records
        .iter()
        .filter(|rec| rec.mu1.haar_shift_decompose().is_none() || rec.mu2.haar_shift_decompose().is_none())
        .count();
    ensure!(non_haar >= 1, "no symmetric non-Haar pair found");

    let x = group(&[3, 5]);
    let s = kernel_witness(&scalar_map(2, &x)).map_err(|e| e.to_string())?;
    ensure!(symmetry_direct(&s) && symmetry_spectral(&s), "witness is not symmetric");
    ensure!(s.mu1().haar_shift_decompose().is_none(), "witness law is a Haar shift");
    Ok(format!(
        "Z(3) census: {non_haar} of {} symmetric pairs are not Haar shifts; witness on Z(3)xZ(5) uses g = {}",
        r.symmetric,
        s.mu1().support()[1]
    ))
}

fn haar_pair_equivalence() -> Result<String, String> {
    let mut parts = Vec::new();
    for m in [&[5][..], &[9], &[3, 3], &[3, 5]] {
        let x = group(m);
        let autos = enumerate_automorphisms(&x).map_err(|e| e.to_string())?;
        let subs = enumerate_subgroups(&x).map_err(|e| e.to_string())?;
        let mut cases = 0;
        for a in &autos {
            for k in &subs {
                let (i, ii) = haar_pair_symmetry(a, k).map_err(|e| e.to_string())?;
                ensure!(i == ii, "{x}: alpha {a:?}, |K| = {}: ({i}, {ii})", k.order());
                cases += 1;
            }
        }
        if m == [3, 3] {
            ensure!(cases == 288, "Z(3)^2 gave {cases} cases, expected 288");
        }
        parts.push(format!("{x}: {cases}"));
    }
    Ok(format!("(i) <=> (ii) on every case; {}", parts.join(", ")))
}

fn order_two_breaks_equivalence() -> Result<String, String> {
    let x = group(&[2, 2]);
    let alpha = Endomorphism::new(&x, &[vec![0, 1], vec![1, 1]]).unwrap();
    let k2 = Subgroup::generated(&x, &[x.element(&[0, 1]).unwrap()]).unwrap();
    let k1 = Subgroup::generated(&x, &[x.element(&[1, 0]).unwrap()]).unwrap();
    let (i, ii) = haar_pair_symmetry(&alpha, &k2).map_err(|e| e.to_string())?;
    ensure!(i && !ii, "expected (true, false), got ({i}, {ii})");
    let image = Endomorphism::identity(&x).sub(&alpha).unwrap().image_of(&k2).unwrap();
    ensure!(image == k1, "(I - alpha) K2 should be K1");
    Ok("(i) true, (ii) false, (I - alpha) K2 = K1".into())
}

fn exponent_two_always_symmetric() -> Result<String, String> {
    let x = group(&[2, 2]);
    let autos = enumerate_automorphisms(&x).map_err(|e| e.to_string())?;
    ensure!(autos.len() == 6, "{} automorphisms", autos.len());
    for a in &autos {
        let r = census(a, 1, &full(1)).map_err(|e| e.to_string())?;
        ensure!(r.examined == 16 && r.symmetric == 16, "alpha {a:?}: {}/{} symmetric", r.symmetric, r.examined);
    }
    Ok("6 automorphisms x 16 pairs, all symmetric".into())
}

fn symmetric_pairs_give_independent_forms() -> Result<String, String> {
    let mut checked = 0;
    let reports = odd_censuses().iter().map(|(_, r)| r).chain([z3_census()]);
    for r in reports {
        ensure!(r.independence_failed == 0, "census reported {} failures", r.independence_failed);
        let forms = LinearFormPair::from_symmetry(&r.alpha);
        for rec in &r.records {
            let ok = independence_check(&rec.mu1, &rec.mu2, &forms).map_err(|e| e.to_string())?;
            ensure!(ok, "dependent forms for pair ({}, {})", rec.first, rec.second);
            checked += 1;
        }
    }
    Ok(format!("{checked} symmetric pairs, all independent"))
}

fn two_component_census() -> Result<String, String> {
    let x = group(&[2, 2, 3]);
    let alpha = Endomorphism::new(&x, &[vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
    ensure!(kernel_condition(&alpha), "Ker(I + alpha) is not trivial");
    let r = census(&alpha, 2, &CensusOptions { workers: 4, ..CensusOptions::default() }).map_err(|e| e.to_string())?;
    ensure!(r.unexplained == 0, "{} unexplained pairs", r.unexplained);
    ensure!(r.spectral_agreed == r.spectral_checked, "spectral sample disagrees");
    let f = p_component(&x, 2).unwrap();
    let g = odd_component(&x);
    let mut sizes = std::collections::BTreeMap::new();
    for rec in &r.records {
        let a = two_component_decompose(&rec.mu1, &f, &g).map_err(|e| e.to_string())?;
        let b = two_component_decompose(&rec.mu2, &f, &g).map_err(|e| e.to_string())?;
        let (Some(a), Some(b)) = (a, b) else {
            return Err(format!("pair ({}, {}) does not factor", rec.first, rec.second));
        };
        ensure!(a.subgroup == b.subgroup, "pair ({}, {}): different K", rec.first, rec.second);
        ensure!(a.subgroup.is_subgroup_of(&g), "K not inside the odd component");
        *sizes.entry(a.subgroup.order()).or_insert(0) += 1;
    }
    ensure!(r.symmetric == 300, "{} symmetric pairs, expected 300", r.symmetric);
    Ok(format!("{}/{} symmetric, all factor with common K; |K| counts {sizes:?}", r.symmetric, r.examined))
}

fn undecomposable_exhibit_holds() -> Result<String, String> {
    let e = canonical_undecomposable_exhibit();
    ensure!(e.mu.masses().iter().all(|m| !m.is_negative()), "negative mass");
    ensure!(e.mu.masses().iter().sum::<Rational>().is_one(), "masses do not sum to 1");
    ensure!(symmetry_direct(&e.scenario()), "not symmetric");
    let x = e.mu.group();
    let candidates = enumerate_subgroups_of(&e.second).map_err(|e| e.to_string())?;
    let mut scanned = 0;
    for k in &candidates {
        for shift in x.elements() {
            let rho = two_component_factor_at(&e.mu, &e.first, k, &shift).map_err(|e| e.to_string())?;
            ensure!(rho.is_none(), "factors with |K| = {} at {shift}", k.order());
            scanned += 1;
        }
    }
    ensure!(scanned == candidates.len() * 12, "scanned {scanned} cases");
    Ok(format!("valid, symmetric, no factorization in {scanned} (K, x) cases; mu = {}", e.mu))
}

fn finite_difference_calculus() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1ff);
    let groups: Vec<Vec<u32>> = all_moduli_lists(12);
    let (mut functions, mut polynomial) = (0, 0);
    for t in 0..150 {
        let x = group(&groups[t % groups.len()]);
        let c = rng.gen_range(-3..=3) as f64;
        let values: Vec<f64> = match t % 3 {
            0 => vec![c; x.order()],
            1 => (0..x.order()).map(|_| rng.gen_range(-3..=3) as f64).collect(),
            _ => {
                let mut v = vec![c; x.order()];
                let i = rng.gen_range(0..x.order());
                v[i] += 1.0;
                v
            }
        };
        let f = RealFunctionOnDual::new(&x, values).map_err(|e| e.to_string())?;
        let n = rng.gen_range(1..=4);
        if is_polynomial(&f, n, &DualSubgroup::whole(&x), 0.0).map_err(|e| e.to_string())? {
            ensure!(f.values().iter().all(|&v| v == f.values()[0]), "nonconstant polynomial on {x}");
            polynomial += 1;
        }
        functions += 1;
    }

    let (mut passed, mut skipped) = (0, 0);
    for (_, r) in odd_censuses() {
        for rec in &r.records {
            let nu = SymmetryScenario::new(r.alpha.clone(), rec.mu1.clone(), rec.mu2.clone()).unwrap().symmetrized();
            let vanishes = [nu.mu1(), nu.mu2()].iter().any(|m| m.char_function().values().iter().any(|v| v.is_zero()));
            if vanishes {
                skipped += 1;
                continue;
            }
            let ok = log_char_polynomial_check(&nu, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
            ensure!(ok, "log-characteristic check failed on pair ({}, {})", rec.first, rec.second);
            passed += 1;
        }
    }
    ensure!(passed > 0, "no scenario with nonvanishing transforms");
    Ok(format!(
        "{functions} functions ({polynomial} polynomial, all constant); log check true on {passed} symmetric scenarios ({skipped} with vanishing transforms skipped)"
    ))
}

fn duality_plumbing() -> Result<String, String> {
    let limits = EnumerationLimits::default();
    let (mut groups, mut subgroups, mut endos, mut cases) = (0, 0, 0, 0u64);
    for m in all_moduli_lists(30) {
        let x = group(&m);
        let subs = enumerate_subgroups(&x).map_err(|e| e.to_string())?;
        for k in &subs {
            let a = annihilator(k);
            ensure!(annihilator(&a) == *k, "{x}: double annihilator differs");
            ensure!(k.order() * a.order() == x.order(), "{x}: |K| |A(Y,K)| != |X|");
            subgroups += 1;
        }
        for e in enumerate_endomorphisms_with(&x, &limits).map_err(|e| e.to_string())? {
            ensure!(adjoint(&adjoint(&e)) == e, "{x}: adjoint is not an involution");
            for k in &subs {
                let c = preimage_annihilator_check(k, &e).map_err(|e| e.to_string())?;
                ensure!(c.agree(), "{x}: sides disagree for {e:?}, |G| = {}", k.order());
                cases += 1;
            }
            endos += 1;
        }
        groups += 1;
    }
    Ok(format!("{groups} groups, {subgroups} subgroups, {endos} endomorphisms, {cases} preimage/annihilator cases"))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, Check); 11] = [
        (1, "direct and spectral symmetry agree", 60, direct_equals_spectral),
        (2, "odd-order censuses are explained by Haar shifts", 120, odd_order_census),
        (3, "kernel condition cannot be dropped", 10, kernel_condition_is_needed),
        (4, "Haar pair symmetry equivalence", 60, haar_pair_equivalence),
        (5, "equivalence fails with elements of order 2", 5, order_two_breaks_equivalence),
        (6, "exponent-2 group is always symmetric", 5, exponent_two_always_symmetric),
        (7, "symmetry implies independent linear forms", 30, symmetric_pairs_give_independent_forms),
        (8, "even-order census factors through the odd component", 600, two_component_census),
        (9, "undecomposable symmetric distribution", 5, undecomposable_exhibit_holds),
        (10, "finite-difference calculus", 60, finite_difference_calculus),
        (11, "duality plumbing", 300, duality_plumbing),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over time budget: {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id:>2} {status} {name} [{:.2}s / {budget}s]: {detail}", elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
