//! The `verify`, `census` and `demo` commands. Each produces a [`Report`] and a
//! [`Status`]; nothing here touches the filesystem or the terminal.

use std::fmt;
use std::str::FromStr;

use condsym_core::search::enumerate_subgroups_of;
use condsym_core::{
    annihilator, canonical_undecomposable_exhibit, census, enumerate_automorphisms, enumerate_subgroups,
    haar_characterization_verdict, haar_pair_symmetry, independence_check, kernel_witness, log_char_polynomial_check,
    odd_component, p_component, preimage_annihilator_check, scalar_map, symmetry_direct, symmetry_spectral,
    two_component_decompose, two_component_factor_at, CensusOptions, CensusReport, Distribution, Endomorphism,
    Error as CoreError, FiniteAbelianGroup, GroupElement, LinearFormPair, PairClass, Subgroup, SymmetryScenario,
    DEFAULT_TOLERANCE,
};
use thiserror::Error;

use crate::report::{Record, Report};
use crate::scenario::{format_matrix, format_subgroup, ParseError, ScenarioFile};

/// Overall result of a command, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Every check passed.
    Ok,
    /// A hypothesis does not hold; results are reported but nothing is claimed.
    Flagged,
    /// A claimed property failed.
    Failed,
    /// Two independent computations of the same quantity disagreed.
    Mismatch,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok | Status::Flagged => 0,
            Status::Failed => 1,
            Status::Mismatch => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Flagged => "flagged",
            Status::Failed => "failed",
            Status::Mismatch => "mismatch",
        }
    }
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Parse(_) => 2,
            CommandError::Core(CoreError::CapExceeded { .. }) => 3,
            CommandError::Core(CoreError::CrossCheckMismatch(_)) => 4,
            CommandError::Core(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub status: Status,
}

/// Command-line overrides; unset fields fall back to the scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub tolerance: Option<f64>,
    pub workers: Option<usize>,
}

/// Accumulates records and the worst status seen.
struct Builder {
    report: Report,
    failed: bool,
    mismatch: bool,
    flagged: bool,
}

impl Builder {
    fn new(command: &str) -> Self {
        let mut report = Report::default();
        report.push(Record::new("meta", "command", command));
        Self { report, failed: false, mismatch: false, flagged: false }
    }

    fn push(&mut self, r: Record) {
        self.report.push(r);
    }

    fn meta(&mut self, key: &str, value: impl ToString) {
        self.push(Record::new("meta", key, value));
    }

    fn count(&mut self, key: &str, value: impl ToString) {
        self.push(Record::new("count", key, value));
    }

    /// A claimed property; `false` fails the command.
    fn claim(&mut self, key: &str, ok: bool) {
        self.failed |= !ok;
        self.push(Record::new("check", key, ok));
    }

    fn hypotheses(&mut self, group: &FiniteAbelianGroup, kernel_trivial: bool) {
        let no_order_two = group.has_no_order_two();
        self.push(Record::new("hypothesis", "no-order-two", no_order_two));
        self.push(Record::new("hypothesis", "kernel-trivial", kernel_trivial));
        self.flagged |= !(no_order_two && kernel_trivial);
    }

    fn finish(mut self) -> Outcome {
        let status = if self.mismatch {
            Status::Mismatch
        } else if self.failed {
            Status::Failed
        } else if self.flagged {
            Status::Flagged
        } else {
            Status::Ok
        };
        self.push(Record::new("status", "result", status.as_str()));
        Outcome { report: self.report, status }
    }
}

fn pair_record(key: String, value: &str, mu1: &Distribution, mu2: &Distribution) -> Record {
    Record { mu1: Some(mu1.to_string()), mu2: Some(mu2.to_string()), ..Record::new("pair", key, value) }
}

fn classified(
    mut r: Record,
    class: PairClass,
    k: Option<&Subgroup>,
    x1: Option<&GroupElement>,
    x2: Option<&GroupElement>,
) -> Record {
    r.class = Some(class.to_string());
    r.subgroup = k.map(format_subgroup);
    r.shift1 = x1.map(ToString::to_string);
    r.shift2 = x2.map(ToString::to_string);
    r
}

/// The common subgroup and the two shifts.
type Explanation = (Subgroup, GroupElement, GroupElement);

/// Classifies a symmetric scenario the same way a census does.
fn classify(s: &SymmetryScenario) -> Result<(PairClass, Option<Explanation>), CoreError> {
    let (d1, d2) = (s.mu1().haar_shift_decompose(), s.mu2().haar_shift_decompose());
    if let (Some((k1, x1)), Some((k2, x2))) = (d1, d2) {
        if k1 == k2 && s.alpha().image_of(&k1)? == k1 {
            return Ok((PairClass::HaarShift, Some((k1, x1, x2))));
        }
    }
    let group = s.group();
    if group.order().is_multiple_of(2) {
        let (f, g) = (p_component(group, 2)?, odd_component(group));
        let a = two_component_decompose(s.mu1(), &f, &g)?;
        let b = two_component_decompose(s.mu2(), &f, &g)?;
        if let (Some(a), Some(b)) = (a, b) {
            if a.subgroup == b.subgroup {
                return Ok((PairClass::TwoComponent, Some((a.subgroup, a.shift, b.shift))));
            }
        }
    }
    Ok((PairClass::Unexplained, None))
}

/// Full verdict on one explicit scenario.
pub fn verify(file: &ScenarioFile, options: &RunOptions) -> Result<Outcome, CommandError> {
    let (Some(mu1), Some(mu2)) = (&file.mu1, &file.mu2) else {
        return Err(ParseError { line: 0, message: "verify needs both `mu1` and `mu2`".into() }.into());
    };
    let tolerance = options.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    let s = SymmetryScenario::new(file.alpha.clone(), mu1.clone(), mu2.clone())?;
    let mut b = Builder::new("verify");
    b.meta("group", &file.group);
    b.meta("alpha", format_matrix(&file.alpha));
    b.push(pair_record("scenario".into(), "input", mu1, mu2));

    let v = haar_characterization_verdict(&s);
    b.hypotheses(&file.group, v.kernel_trivial);
    b.push(Record::new("check", "symmetric", v.symmetric));
    b.push(Record::new("check", "spectral-agrees", v.spectral_agrees));
    b.mismatch |= !v.spectral_agrees;

    if v.symmetric {
        let forms = LinearFormPair::from_symmetry(s.alpha());
        let independent = independence_check(mu1, mu2, &forms)?;
        b.claim("independent-forms", independent);

        let (class, parts) = classify(&s)?;
        let (k, x1, x2) = match &parts {
            Some((k, x1, x2)) => (Some(k), Some(x1), Some(x2)),
            None => (None, None, None),
        };
        b.push(classified(Record::new("check", "classification", class), class, k, x1, x2));
        if class == PairClass::Unexplained && v.hypotheses_hold() {
            b.failed = true;
        }
    }
    b.push(Record::new("check", "counterexample", v.counterexample.as_deref().unwrap_or("none")));
    b.failed |= v.counterexample.is_some();

    if mu1 == mu2 {
        if let Some((k, x)) = mu1.haar_shift_decompose() {
            if x.is_zero() {
                let (i, ii) = haar_pair_symmetry(s.alpha(), &k)?;
                b.push(Record {
                    subgroup: Some(format_subgroup(&k)),
                    ..Record::new("check", "haar-pair-symmetric", i)
                });
                b.push(Record::new("check", "i-minus-alpha-preserves-k", ii));
                if file.group.has_no_order_two() && i != ii {
                    b.failed = true;
                }
            }
        }
    }

    // The annihilator of the unit set of nu1 is a subgroup for every input.
    let nu = s.symmetrized();
    let k = annihilator(&nu.mu1().unit_set());
    let i_minus = Endomorphism::identity(&file.group).sub(s.alpha())?;
    for (name, beta) in [("duality-alpha", s.alpha()), ("duality-i-minus-alpha", &i_minus)] {
        let c = preimage_annihilator_check(&k, beta)?;
        b.push(Record { subgroup: Some(format_subgroup(&k)), ..Record::new("check", name, c.agree()) });
        b.mismatch |= !c.agree();
    }

    match log_char_polynomial_check(&nu, tolerance) {
        Ok(ok) => {
            b.push(Record::new("check", "log-char-polynomial", ok));
            b.failed |= !ok && v.symmetric && v.hypotheses_hold();
        }
        Err(CoreError::NonPositiveCharacteristic(_)) => b.push(Record::new("check", "log-char-polynomial", "skipped")),
        Err(e) => return Err(e.into()),
    }
    Ok(b.finish())
}

fn census_options(workers: usize) -> CensusOptions {
    CensusOptions { workers, ..CensusOptions::default() }
}

fn census_counts(b: &mut Builder, c: &CensusReport) {
    b.count("distributions", c.distributions);
    b.count("examined", c.examined);
    b.count("symmetric", c.symmetric);
    b.count("haar-shift", c.haar_shift);
    b.count("two-component", c.two_component);
    b.count("unexplained", c.unexplained);
    b.count("spectral-checked", c.spectral_checked);
    b.count("spectral-agreed", c.spectral_agreed);
    b.count("independence-checked", c.independence_checked);
    b.count("independence-failed", c.independence_failed);
}

/// Exhaustive census over the grid with the file's denominator.
pub fn run_census(file: &ScenarioFile, options: &RunOptions) -> Result<Outcome, CommandError> {
    let d = file.denominator.ok_or_else(|| ParseError { line: 0, message: "census needs `denominator`".into() })?;
    let workers = options.workers.or(file.workers).unwrap_or(0);
    let c = census(&file.alpha, d, &census_options(workers))?;
    let mut b = Builder::new("census");
    b.meta("group", &file.group);
    b.meta("alpha", format_matrix(&file.alpha));
    b.meta("denominator", d);
    b.hypotheses(&file.group, c.kernel_trivial);
    census_counts(&mut b, &c);
    for r in &c.records {
        let rec = pair_record(format!("{},{}", r.first, r.second), "symmetric", &r.mu1, &r.mu2);
        b.push(classified(rec, r.class, r.subgroup.as_ref(), r.shift1.as_ref(), r.shift2.as_ref()));
    }
    b.mismatch |= c.spectral_agreed != c.spectral_checked;
    b.failed |= c.independence_failed > 0 || (c.unexplained > 0 && c.hypotheses_hold());
    Ok(b.finish())
}

/// Built-in constructions with fixed parameters, each verifying its stated properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demo {
    /// On `Z(2)^2` every pair is symmetric for every automorphism.
    ExponentTwo,
    /// Without `Ker(I + alpha) = {0}` symmetric pairs need not be Haar shifts.
    KernelWitness,
    /// With elements of order 2, Haar pair symmetry and `(I - alpha)K = K` part ways.
    OrderTwo,
    /// Haar pair symmetry equals `(I - alpha)K = K` on small odd groups.
    HaarPairs,
    /// A symmetric law on `Z(2)^2 x Z(3)` that does not factor.
    Undecomposable,
    /// Every symmetric grid pair on `Z(2)^2 x Z(3)` factors through the odd part.
    TwoComponent,
}

impl Demo {
    pub const ALL: [Demo; 6] = [
        Demo::ExponentTwo,
        Demo::KernelWitness,
        Demo::OrderTwo,
        Demo::HaarPairs,
        Demo::Undecomposable,
        Demo::TwoComponent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Demo::ExponentTwo => "exponent-two",
            Demo::KernelWitness => "kernel-witness",
            Demo::OrderTwo => "order-two",
            Demo::HaarPairs => "haar-pairs",
            Demo::Undecomposable => "undecomposable",
            Demo::TwoComponent => "two-component",
        }
    }
}

impl fmt::Display for Demo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Demo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Demo::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Demo::ALL.iter().map(|d| d.name()).collect();
            format!("unknown demo `{s}`, expected one of {}", names.join(", "))
        })
    }
}

fn group(moduli: &[u32]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(moduli.to_vec()).expect("fixed moduli are valid")
}

fn matrix(x: &FiniteAbelianGroup, rows: &[&[i64]]) -> Endomorphism {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    Endomorphism::new(x, &rows).expect("fixed matrix is a homomorphism")
}

pub fn demo(which: Demo, options: &RunOptions) -> Result<Outcome, CommandError> {
    let workers = options.workers.unwrap_or(0);
    let mut b = Builder::new("demo");
    b.meta("demo", which);
    match which {
        Demo::ExponentTwo => {
            let x = group(&[2, 2]);
            b.meta("group", &x);
            b.meta("denominator", 1);
            let autos = enumerate_automorphisms(&x)?;
            b.count("automorphisms", autos.len());
            let mut all = true;
            for a in &autos {
                let c = census(a, 1, &census_options(workers))?;
                b.push(Record {
                    class: Some(format_matrix(a)),
                    ..Record::new("count", "symmetric-pairs", format!("{}/{}", c.symmetric, c.examined))
                });
                all &= c.symmetric as u128 == c.examined;
            }
            b.claim("every-pair-symmetric", all);
        }
        Demo::KernelWitness => {
            let z3 = group(&[3]);
            let c = census(&scalar_map(2, &z3), 2, &census_options(workers))?;
            b.meta("group", &z3);
            b.meta("alpha", "2");
            b.meta("denominator", 2);
            b.claim("kernel-nontrivial", !c.kernel_trivial);
            let non_haar: Vec<_> = c
                .records
                .iter()
                .filter(|r| r.mu1.haar_shift_decompose().is_none() || r.mu2.haar_shift_decompose().is_none())
                .collect();
            b.count("symmetric", c.symmetric);
            b.count("non-haar-symmetric", non_haar.len());
            for r in &non_haar {
                b.push(pair_record(format!("{},{}", r.first, r.second), "symmetric", &r.mu1, &r.mu2));
            }
            b.claim("non-haar-symmetric-pair-found", !non_haar.is_empty());

            let x = group(&[3, 5]);
            let s = kernel_witness(&scalar_map(2, &x))?;
            b.meta("witness-group", &x);
            b.meta("witness-alpha", format_matrix(s.alpha()));
            b.push(pair_record("witness".into(), "iid", s.mu1(), s.mu2()));
            b.claim("witness-symmetric", symmetry_direct(&s) && symmetry_spectral(&s));
            b.claim("witness-not-haar-shift", s.mu1().haar_shift_decompose().is_none());
        }
        Demo::OrderTwo => {
            let x = group(&[2, 2]);
            let alpha = matrix(&x, &[&[0, 1], &[1, 1]]);
            let k2 = Subgroup::generated(&x, &[x.element(&[0, 1])?])?;
            let k1 = Subgroup::generated(&x, &[x.element(&[1, 0])?])?;
            b.meta("group", &x);
            b.meta("alpha", format_matrix(&alpha));
            b.meta("subgroup", format_subgroup(&k2));
            let (i, ii) = haar_pair_symmetry(&alpha, &k2)?;
            b.claim("haar-pair-symmetric", i);
            b.claim("i-minus-alpha-fails-to-preserve-k", !ii);
            let image = Endomorphism::identity(&x).sub(&alpha)?.image_of(&k2)?;
            b.meta("i-minus-alpha-image", format_subgroup(&image));
            b.claim("image-is-the-other-factor", image == k1);
        }
        Demo::HaarPairs => {
            let mut all = true;
            for m in [&[5][..], &[9], &[3, 3], &[3, 5]] {
                let x = group(m);
                let subs = enumerate_subgroups(&x)?;
                let mut cases = 0;
                for a in enumerate_automorphisms(&x)? {
                    for k in &subs {
                        let (i, ii) = haar_pair_symmetry(&a, k)?;
                        all &= i == ii;
                        cases += 1;
                    }
                }
                b.count(&format!("cases {x}"), cases);
            }
            b.claim("equivalence-holds", all);
        }
        Demo::Undecomposable => {
            let e = canonical_undecomposable_exhibit();
            let x = e.mu.group().clone();
            b.meta("group", &x);
            b.meta("alpha", format_matrix(&e.alpha));
            b.meta("first", format_subgroup(&e.first));
            b.meta("second", format_subgroup(&e.second));
            b.push(pair_record("exhibit".into(), "iid", &e.mu, &e.mu));
            b.claim("symmetric", symmetry_direct(&e.scenario()));
            let mut scanned = 0;
            let mut none = true;
            for k in enumerate_subgroups_of(&e.second)? {
                for shift in x.elements() {
                    none &= two_component_factor_at(&e.mu, &e.first, &k, &shift)?.is_none();
                    scanned += 1;
                }
            }
            b.count("factorizations-scanned", scanned);
            b.claim("no-factorization", none);
        }
        Demo::TwoComponent => {
            let x = group(&[2, 2, 3]);
            let alpha = matrix(&x, &[&[0, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
            b.meta("group", &x);
            b.meta("alpha", format_matrix(&alpha));
            b.meta("denominator", 2);
            let c = census(&alpha, 2, &census_options(workers))?;
            b.hypotheses(&x, c.kernel_trivial);
            // The group has elements of order 2 by construction; that is the point here.
            b.flagged = false;
            census_counts(&mut b, &c);
            let (f, g) = (p_component(&x, 2)?, odd_component(&x));
            let mut common = true;
            for r in &c.records {
                let p = two_component_decompose(&r.mu1, &f, &g)?;
                let q = two_component_decompose(&r.mu2, &f, &g)?;
                common &=
                    matches!((p, q), (Some(p), Some(q)) if p.subgroup == q.subgroup && p.subgroup.is_subgroup_of(&g));
            }
            b.claim("no-unexplained-pairs", c.unexplained == 0);
            b.claim("common-odd-subgroup", common);
            b.mismatch |= c.spectral_agreed != c.spectral_checked;
        }
    }
    Ok(b.finish())
}
