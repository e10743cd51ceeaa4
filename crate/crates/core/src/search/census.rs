use std::fmt;
use std::str::FromStr;
use std::thread;

use super::enumerate::enumerate_subgroups_of;
use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::group::{odd_component, p_component, Endomorphism, FiniteAbelianGroup, GroupElement, Subgroup};
use crate::heyde::{
    independence_check, kernel_condition, symmetry_spectral_cf, two_component_decompose_with, DirectChecker,
    LinearFormPair,
};
use crate::measures::{CharFunction, Distribution};

/// Default bound on the number of ordered pairs in one census.
pub const DEFAULT_PAIR_CAP: u128 = 10_000_000;
/// Default spacing of the spectral cross-check sample (every 100th pair).
pub const DEFAULT_SPECTRAL_STRIDE: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    /// Worker threads; 0 picks the available parallelism.
    pub workers: usize,
    pub pair_cap: u128,
    /// Pairs whose global index is a multiple of this are also checked
    /// spectrally. 1 checks every pair.
    pub spectral_stride: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self { workers: 0, pair_cap: DEFAULT_PAIR_CAP, spectral_stride: DEFAULT_SPECTRAL_STRIDE }
    }
}

/// How a symmetric pair is explained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairClass {
    /// `mu_j = m_K * E_{x_j}` with one `K` and `alpha(K) = K`.
    HaarShift,
    /// `mu_j = rho_j * m_K * E_{x_j}`, `rho_j` on the 2-component, one `K`
    /// inside the odd component.
    TwoComponent,
    Unexplained,
}

impl PairClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PairClass::HaarShift => "haar-shift",
            PairClass::TwoComponent => "two-component",
            PairClass::Unexplained => "unexplained",
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar-shift" => Ok(PairClass::HaarShift),
            "two-component" => Ok(PairClass::TwoComponent),
            "unexplained" => Ok(PairClass::Unexplained),
            other => Err(Error::Precondition(format!("unknown pair class {other:?}"))),
        }
    }
}

/// One symmetric pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    /// Grid indices of `mu1` and `mu2`.
    pub first: usize,
    pub second: usize,
    pub mu1: Distribution,
    pub mu2: Distribution,
    pub class: PairClass,
    /// The common `K`, when classified.
    pub subgroup: Option<Subgroup>,
    pub shift1: Option<GroupElement>,
    pub shift2: Option<GroupElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub alpha: Endomorphism,
    pub denominator: u32,
    pub distributions: u128,
    pub examined: u128,
    pub symmetric: u64,
    pub no_order_two: bool,
    pub kernel_trivial: bool,
    pub haar_shift: u64,
    pub two_component: u64,
    pub unexplained: u64,
    pub spectral_checked: u64,
    pub spectral_agreed: u64,
    pub independence_checked: u64,
    pub independence_failed: u64,
    /// Every symmetric pair, in `(first, second)` order.
    pub records: Vec<PairRecord>,
}

impl CensusReport {
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.alpha.group()
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.no_order_two && self.kernel_trivial
    }

    pub fn unexplained_records(&self) -> impl Iterator<Item = &PairRecord> {
        self.records.iter().filter(|r| r.class == PairClass::Unexplained)
    }

    /// Classified counts add up and every cross-check agreed.
    pub fn is_consistent(&self) -> bool {
        self.haar_shift + self.two_component + self.unexplained == self.symmetric
            && self.records.len() as u64 == self.symmetric
            && self.spectral_checked == self.spectral_agreed
            && self.independence_failed == 0
    }
}

/// Per-distribution data computed once and shared by all workers.
struct Prepared {
    grid: Vec<Distribution>,
    weights: Vec<Vec<(usize, i128)>>,
    haar: Vec<Option<(Subgroup, GroupElement)>>,
    two: Vec<Option<(Subgroup, GroupElement)>>,
    cf: Vec<CharFunction>,
    preserved: Vec<bool>,
    haar_index: Vec<Option<usize>>,
    two_index: Vec<Option<usize>>,
}

#[derive(Default)]
struct Partial {
    symmetric: u64,
    spectral_checked: u64,
    spectral_agreed: u64,
    independence_failed: u64,
    records: Vec<PairRecord>,
    error: Option<Error>,
}

/// Tests the symmetry of every ordered pair of grid distributions with
/// denominator `d`, classifies the symmetric ones, cross-checks a
/// deterministic sample spectrally and checks independence of the associated
/// linear forms on every symmetric pair.
///
/// Results do not depend on the number of workers.
pub fn census(alpha: &Endomorphism, d: u32, options: &CensusOptions) -> Result<CensusReport> {
    if !alpha.is_automorphism() {
        return Err(Error::NotAnAutomorphism);
    }
    let group = alpha.group();
    let spec = GridSpec::new(group, d)?;
    let count = spec.count();
    let pairs = count.saturating_mul(count);
    if pairs > options.pair_cap {
        return Err(Error::CapExceeded { what: "census pairs", requested: pairs, limit: options.pair_cap });
    }
    let prepared = prepare(alpha, &spec)?;
    let n = prepared.grid.len();
    let workers = match options.workers {
        0 => thread::available_parallelism().map(|v| v.get()).unwrap_or(1),
        w => w,
    }
    .clamp(1, n.max(1));
    let checker = DirectChecker::new(alpha);
    let forms = LinearFormPair::from_symmetry(alpha);
    let stride = options.spectral_stride.max(1);
    let chunk = n.div_ceil(workers);

    let partials: Vec<Partial> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (lo, hi) = (w * chunk, ((w + 1) * chunk).min(n));
                let mut checker = checker.clone();
                let (prepared, forms) = (&prepared, &forms);
                scope.spawn(move || run_chunk(lo..hi, prepared, alpha, forms, &mut checker, stride))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("census worker panicked")).collect()
    });

    let mut report = CensusReport {
        alpha: alpha.clone(),
        denominator: d,
        distributions: count,
        examined: pairs,
        symmetric: 0,
        no_order_two: group.has_no_order_two(),
        kernel_trivial: kernel_condition(alpha),
        haar_shift: 0,
        two_component: 0,
        unexplained: 0,
        spectral_checked: 0,
        spectral_agreed: 0,
        independence_checked: 0,
        independence_failed: 0,
        records: Vec::new(),
    };
    for p in partials {
        if let Some(e) = p.error {
            return Err(e);
        }
        report.symmetric += p.symmetric;
        report.spectral_checked += p.spectral_checked;
        report.spectral_agreed += p.spectral_agreed;
        report.independence_failed += p.independence_failed;
        report.records.extend(p.records);
    }
    for r in &report.records {
        match r.class {
            PairClass::HaarShift => report.haar_shift += 1,
            PairClass::TwoComponent => report.two_component += 1,
            PairClass::Unexplained => report.unexplained += 1,
        }
    }
    report.independence_checked = report.symmetric;
    Ok(report)
}

fn prepare(alpha: &Endomorphism, spec: &GridSpec) -> Result<Prepared> {
    let group = alpha.group();
    let grid: Vec<Distribution> = spec.distributions().collect();
    let weights = grid
        .iter()
        .map(|mu| {
            let (scaled, _) = mu.scaled_masses();
            mu.support_indices().into_iter().map(|i| (i, scaled[i])).collect()
        })
        .collect();
    let haar: Vec<Option<(Subgroup, GroupElement)>> = grid.iter().map(Distribution::haar_shift_decompose).collect();
    let two: Vec<Option<(Subgroup, GroupElement)>> = if group.order() % 2 == 0 {
        let f = p_component(group, 2)?;
        let g = odd_component(group);
        let candidates = enumerate_subgroups_of(&g)?;
        grid.iter()
            .map(|mu| two_component_decompose_with(mu, &f, &g, &candidates).map(|o| o.map(|t| (t.subgroup, t.shift))))
            .collect::<Result<_>>()?
    } else {
        vec![None; grid.len()]
    };

    // Distinct subgroups get small ids so that workers compare integers.
    let mut seen: Vec<Subgroup> = Vec::new();
    let mut id_of = |k: &Subgroup| match seen.iter().position(|s| s == k) {
        Some(i) => i,
        None => {
            seen.push(k.clone());
            seen.len() - 1
        }
    };
    let haar_index: Vec<Option<usize>> = haar.iter().map(|o| o.as_ref().map(|(k, _)| id_of(k))).collect();
    let two_index: Vec<Option<usize>> = two.iter().map(|o| o.as_ref().map(|(k, _)| id_of(k))).collect();
    let preserved = seen.iter().map(|k| alpha.image_of(k).map(|im| im == *k)).collect::<Result<_>>()?;
    let cf = grid.iter().map(Distribution::char_function).collect();
    Ok(Prepared { grid, weights, haar, two, cf, preserved, haar_index, two_index })
}

fn run_chunk(
    rows: std::ops::Range<usize>,
    p: &Prepared,
    alpha: &Endomorphism,
    forms: &LinearFormPair,
    checker: &mut DirectChecker,
    stride: u64,
) -> Partial {
    let n = p.grid.len();
    let mut out = Partial::default();
    for i in rows {
        for j in 0..n {
            let symmetric = checker.is_symmetric(&p.weights[i], &p.weights[j]);
            if ((i * n + j) as u64).is_multiple_of(stride) {
                out.spectral_checked += 1;
                match symmetry_spectral_cf(alpha, &p.cf[i], &p.cf[j]) {
                    Ok(s) if s == symmetric => out.spectral_agreed += 1,
                    Ok(_) => {}
                    Err(e) => {
                        out.error = Some(e);
                        return out;
                    }
                }
            }
            if !symmetric {
                continue;
            }
            out.symmetric += 1;
            match independence_check(&p.grid[i], &p.grid[j], forms) {
                Ok(true) => {}
                Ok(false) => out.independence_failed += 1,
                Err(e) => {
                    out.error = Some(e);
                    return out;
                }
            }
            out.records.push(classify(p, i, j));
        }
    }
    out
}

fn classify(p: &Prepared, i: usize, j: usize) -> PairRecord {
    let mut r = PairRecord {
        first: i,
        second: j,
        mu1: p.grid[i].clone(),
        mu2: p.grid[j].clone(),
        class: PairClass::Unexplained,
        subgroup: None,
        shift1: None,
        shift2: None,
    };
    if let (Some(a), Some(b)) = (p.haar_index[i], p.haar_index[j]) {
        if a == b && p.preserved[a] {
            let (k, x1) = p.haar[i].clone().expect("indexed");
            r.class = PairClass::HaarShift;
            r.subgroup = Some(k);
            r.shift1 = Some(x1);
            r.shift2 = Some(p.haar[j].as_ref().expect("indexed").1.clone());
            return r;
        }
    }
    if let (Some(a), Some(b)) = (p.two_index[i], p.two_index[j]) {
        if a == b {
            let (k, x1) = p.two[i].clone().expect("indexed");
            r.class = PairClass::TwoComponent;
            r.subgroup = Some(k);
            r.shift1 = Some(x1);
            r.shift2 = Some(p.two[j].as_ref().expect("indexed").1.clone());
        }
    }
    r
}
