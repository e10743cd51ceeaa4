use super::{kernel_condition, symmetry_direct, symmetry_spectral, DirectChecker, SymmetryScenario};
use crate::duality::{adjoint, annihilator};
use crate::error::{Error, Result};
use crate::group::{Endomorphism, GroupElement, Subgroup};
use crate::measures::Distribution;
use crate::Rational;

/// Both laws are `m_K * E_{x_j}` with the same `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaarDecomposition {
    pub subgroup: Subgroup,
    pub shift1: GroupElement,
    pub shift2: GroupElement,
    /// `alpha(K) = K`.
    pub alpha_preserves: bool,
}

/// Outcome of testing the Haar characterization on one scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaarVerdict {
    /// `X` has no elements of order 2.
    pub no_order_two: bool,
    /// `Ker(I + alpha) = {0}`.
    pub kernel_trivial: bool,
    pub symmetric: bool,
    /// The spectral test gave the same answer as the direct one.
    pub spectral_agrees: bool,
    /// Present whenever the scenario is symmetric and both laws are shifted
    /// Haar distributions of one common subgroup.
    pub decomposition: Option<HaarDecomposition>,
    /// Description of the first broken consistency check. Expected to stay
    /// empty on every scenario satisfying the hypotheses.
    pub counterexample: Option<String>,
}

impl HaarVerdict {
    pub fn hypotheses_hold(&self) -> bool {
        self.no_order_two && self.kernel_trivial
    }
}

/// Decides symmetry and, for symmetric scenarios, extracts the common Haar
/// decomposition and audits it.
///
/// When `X` has no elements of order 2 and `Ker(I + alpha) = {0}`, a symmetric
/// scenario must have `mu_j = m_K * E_{x_j}` with one `K` satisfying
/// `alpha(K) = K`. The verdict also checks that each `nu_j = mu_j * reflect(mu_j)`
/// equals `m_K`, that `K` is recovered as the annihilator of the unit set of
/// each `nu_j`, and that `(m_K, m_K)` is itself symmetric. Any failure lands in
/// `counterexample`.
pub fn haar_characterization_verdict(s: &SymmetryScenario) -> HaarVerdict {
    let group = s.group();
    let symmetric = symmetry_direct(s);
    let spectral = symmetry_spectral(s);
    let mut v = HaarVerdict {
        no_order_two: group.has_no_order_two(),
        kernel_trivial: kernel_condition(s.alpha()),
        symmetric,
        spectral_agrees: symmetric == spectral,
        decomposition: None,
        counterexample: None,
    };
    if !v.spectral_agrees {
        v.counterexample = Some(format!("direct test says {symmetric}, spectral test says {spectral}"));
        return v;
    }
    if !symmetric {
        return v;
    }
    let d1 = s.mu1().haar_shift_decompose();
    let d2 = s.mu2().haar_shift_decompose();
    if let (Some((k1, x1)), Some((k2, x2))) = (&d1, &d2) {
        if k1 == k2 {
            let alpha_preserves = s.alpha().image_of(k1).expect("same group") == *k1;
            v.decomposition = Some(HaarDecomposition {
                subgroup: k1.clone(),
                shift1: x1.clone(),
                shift2: x2.clone(),
                alpha_preserves,
            });
        }
    }
    if v.hypotheses_hold() {
        v.counterexample = audit(s, &d1, &d2, v.decomposition.as_ref());
    }
    v
}

fn audit(
    s: &SymmetryScenario,
    d1: &Option<(Subgroup, GroupElement)>,
    d2: &Option<(Subgroup, GroupElement)>,
    dec: Option<&HaarDecomposition>,
) -> Option<String> {
    for (j, d) in [(1, d1), (2, d2)] {
        if d.is_none() {
            return Some(format!("mu{j} is not a shifted Haar distribution"));
        }
    }
    let Some(dec) = dec else {
        let (k1, k2) = (&d1.as_ref()?.0, &d2.as_ref()?.0);
        return Some(format!("subgroups differ: |K1| = {}, |K2| = {}", k1.order(), k2.order()));
    };
    if !dec.alpha_preserves {
        return Some(format!("alpha does not preserve K (|K| = {})", dec.subgroup.order()));
    }
    let haar = Distribution::haar(&dec.subgroup);
    let nu = s.symmetrized();
    for (j, m) in [(1, nu.mu1()), (2, nu.mu2())] {
        if *m != haar {
            return Some(format!("nu{j} differs from the Haar distribution of K"));
        }
        if annihilator(&m.unit_set()) != dec.subgroup {
            return Some(format!("annihilator of the unit set of nu{j} differs from K"));
        }
    }
    let mut checker = DirectChecker::new(s.alpha());
    let w: Vec<(usize, i128)> = dec.subgroup.indices().iter().map(|&i| (i, 1)).collect();
    if !checker.is_symmetric(&w, &w) {
        return Some("(m_K, m_K) is not symmetric".to_string());
    }
    None
}

/// For `mu1 = mu2 = m_K`: `(i)` symmetry of the scenario and `(ii)`
/// `(I - alpha)(K) = K`. The two agree when `X` has no elements of order 2.
pub fn haar_pair_symmetry(alpha: &Endomorphism, k: &Subgroup) -> Result<(bool, bool)> {
    if k.group() != alpha.group() {
        return Err(Error::GroupMismatch);
    }
    if !alpha.is_automorphism() {
        return Err(Error::NotAnAutomorphism);
    }
    let group = alpha.group();
    let n = group.order();
    let table = alpha.table();
    // (x1, x2) -> (x1 + x2, x1 + alpha x2) is a homomorphism on K x K, so the
    // joint law of the two forms is uniform on its image H. Symmetry means H
    // is closed under (s, t) -> (s, -t).
    let rank = group.rank();
    let moduli = group.moduli();
    let strides: Vec<usize> = (0..rank).map(|i| moduli[i + 1..].iter().map(|&m| m as usize).product()).collect();
    // Digits of each member of K and of its image, flattened.
    let mut kd = vec![0u32; k.order() * rank];
    let mut akd = vec![0u32; k.order() * rank];
    for (j, &x) in k.indices().iter().enumerate() {
        group.decode_into(x, &mut kd[j * rank..(j + 1) * rank]);
        group.decode_into(table[x], &mut akd[j * rank..(j + 1) * rank]);
    }
    let sum = |a: &[u32], b: &[u32]| -> usize {
        let mut idx = 0;
        for i in 0..rank {
            let v = a[i] + b[i];
            idx += (if v >= moduli[i] { v - moduli[i] } else { v }) as usize * strides[i];
        }
        idx
    };
    let mut h = vec![false; n * n];
    let mut cells = Vec::new();
    for x1 in kd.chunks_exact(rank.max(1)) {
        for (x2, ax2) in kd.chunks_exact(rank.max(1)).zip(akd.chunks_exact(rank.max(1))) {
            let c = sum(x1, x2) * n + sum(x1, ax2);
            if !h[c] {
                h[c] = true;
                cells.push(c);
            }
        }
    }
    let i = cells.iter().all(|&c| h[(c / n) * n + group.neg_index(c % n)]);
    let mut image = vec![false; n];
    for &x in k.indices() {
        image[group.add_index(x, group.neg_index(table[x]))] = true;
    }
    let ii = k.indices().iter().all(|&x| image[x]);
    Ok((i, ii))
}

/// `mu = rho * m_K * E_x` with `rho` supported on `F` and `K` inside `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoComponentFactorization {
    pub rho: Distribution,
    pub subgroup: Subgroup,
    pub shift: GroupElement,
}

/// Searches for `mu = rho * m_K * E_x` with `sigma(rho)` inside `F` and `K` a
/// subgroup of `G`, where `X = F + G` is an internal direct sum (typically the
/// 2-component and the odd component).
///
/// `K` is unique when it exists: it is the subgroup whose Haar measure is the
/// projection of `mu` to `G`, up to shift. The shift is taken to be the
/// smallest support point.
pub fn two_component_decompose(
    mu: &Distribution,
    f: &Subgroup,
    g: &Subgroup,
) -> Result<Option<TwoComponentFactorization>> {
    let candidates = crate::search::enumerate_subgroups_of(g)?;
    two_component_decompose_with(mu, f, g, &candidates)
}

/// As [`two_component_decompose`], trying only the given subgroups of `G`
/// (largest first).
pub fn two_component_decompose_with(
    mu: &Distribution,
    f: &Subgroup,
    g: &Subgroup,
    candidates: &[Subgroup],
) -> Result<Option<TwoComponentFactorization>> {
    let group = mu.group();
    if f.group() != group || g.group() != group {
        return Err(Error::GroupMismatch);
    }
    if !f.intersection(g)?.is_trivial() || !f.join(g)?.is_whole() {
        return Err(Error::Precondition("F and G do not form a direct sum decomposition of X".into()));
    }
    let x = group.element_at(mu.support_indices()[0]);
    let mut order: Vec<&Subgroup> = candidates.iter().collect();
    order.sort_by_key(|k| std::cmp::Reverse(k.order()));
    for k in order {
        if !k.is_subgroup_of(g) {
            return Err(Error::Precondition("candidate subgroup is not contained in G".into()));
        }
        if let Some(rho) = two_component_factor_at(mu, f, k, &x)? {
            return Ok(Some(TwoComponentFactorization { rho, subgroup: k.clone(), shift: x }));
        }
    }
    Ok(None)
}

/// `Some(rho)` with `mu = rho * m_K * E_x` and `rho` supported on `F`, when
/// such a `rho` exists for this particular `K` and `x`. This holds iff
/// `mu * E_{-x}` lives on `F + K` and is constant along `K`, in which case
/// `rho(f) = |K| mu(f + x)`.
pub fn two_component_factor_at(
    mu: &Distribution,
    f: &Subgroup,
    k: &Subgroup,
    x: &GroupElement,
) -> Result<Option<Distribution>> {
    let group = mu.group();
    if f.group() != group || k.group() != group {
        return Err(Error::GroupMismatch);
    }
    let x = group.index_of(x)?;
    let neg_x = group.neg_index(x);
    let fk = f.join(k)?;
    if !mu.support_indices().into_iter().all(|z| fk.contains_index(group.add_index(z, neg_x))) {
        return Ok(None);
    }
    let nu = |z: usize| mu.mass_at(group.add_index(z, x));
    let constant = f.indices().iter().all(|&fi| k.indices().iter().all(|&ki| nu(group.add_index(fi, ki)) == nu(fi)));
    if !constant {
        return Ok(None);
    }
    let scale = Rational::from_integer(k.order() as i128);
    let rho = (0..group.order())
        .map(|z| if f.contains_index(z) { nu(z) * scale } else { Rational::from_integer(0) })
        .collect();
    // Fails only when F and K overlap, which the callers rule out.
    Distribution::from_dense(group, rho).map(Some)
}

/// The two sides of the equivalence between `beta(G) ⊇ G` and
/// "`beta~ y` in `A(Y, G)` implies `y` in `A(Y, G)`", computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceCheck {
    pub primal: bool,
    pub dual: bool,
}

impl EquivalenceCheck {
    pub fn agree(self) -> bool {
        self.primal == self.dual
    }
}

pub fn preimage_annihilator_check(g: &Subgroup, beta: &Endomorphism) -> Result<EquivalenceCheck> {
    if g.group() != beta.group() {
        return Err(Error::GroupMismatch);
    }
    let primal = g.is_subgroup_of(&beta.image_of(g)?);
    let a = annihilator(g);
    let bt = adjoint(beta);
    let dual = (0..g.group().order()).all(|y| !a.contains_index(bt.apply_index(y)) || a.contains_index(y));
    Ok(EquivalenceCheck { primal, dual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{odd_component, p_component, scalar_map, FiniteAbelianGroup};

    fn g(m: &[u32]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(m.to_vec()).unwrap()
    }

    fn point(group: &FiniteAbelianGroup, c: &[u64]) -> Distribution {
        Distribution::point_mass(group, &group.element(c).unwrap()).unwrap()
    }

    #[test]
    fn verdict_on_point_masses() {
        let z5 = g(&[5]);
        let s = SymmetryScenario::new(scalar_map(2, &z5), point(&z5, &[1]), point(&z5, &[2])).unwrap();
        let v = haar_characterization_verdict(&s);
        assert!(v.hypotheses_hold() && v.symmetric && v.spectral_agrees);
        let d = v.decomposition.unwrap();
        assert!(d.subgroup.is_trivial() && d.alpha_preserves);
        assert_eq!(d.shift1.coords(), &[1]);
        assert_eq!(d.shift2.coords(), &[2]);
        assert!(v.counterexample.is_none());
    }

    #[test]
    fn verdict_on_uniform_laws() {
        let z5 = g(&[5]);
        let u = Distribution::uniform(&z5);
        let s = SymmetryScenario::new(scalar_map(2, &z5), u.clone(), u).unwrap();
        let v = haar_characterization_verdict(&s);
        assert!(v.symmetric);
        assert!(v.decomposition.unwrap().subgroup.is_whole());
        assert!(v.counterexample.is_none());
    }

    #[test]
    fn verdict_flags_kernel_hypothesis() {
        let z3 = g(&[3]);
        let s = SymmetryScenario::new(scalar_map(2, &z3), point(&z3, &[0]), point(&z3, &[0])).unwrap();
        let v = haar_characterization_verdict(&s);
        assert!(v.no_order_two);
        assert!(!v.kernel_trivial);
    }

    #[test]
    fn verdict_on_non_symmetric_scenario() {
        let z5 = g(&[5]);
        let s = SymmetryScenario::new(scalar_map(2, &z5), point(&z5, &[1]), point(&z5, &[1])).unwrap();
        let v = haar_characterization_verdict(&s);
        assert!(!v.symmetric && v.spectral_agrees);
        assert!(v.decomposition.is_none() && v.counterexample.is_none());
    }

    #[test]
    fn haar_pair_examples() {
        let z33 = g(&[3, 3]);
        let f2 = scalar_map(2, &z33);
        assert_eq!(haar_pair_symmetry(&f2, &Subgroup::trivial(&z33)).unwrap(), (true, true));
        assert_eq!(haar_pair_symmetry(&f2, &Subgroup::whole(&z33)).unwrap(), (true, true));

        let z22 = g(&[2, 2]);
        let alpha = Endomorphism::new(&z22, &[vec![0, 1], vec![1, 1]]).unwrap();
        let k = Subgroup::generated(&z22, &[z22.element(&[0, 1]).unwrap()]).unwrap();
        assert_eq!(haar_pair_symmetry(&alpha, &k).unwrap(), (true, false));
    }

    fn components(x: &FiniteAbelianGroup) -> (Subgroup, Subgroup) {
        (p_component(x, 2).unwrap(), odd_component(x))
    }

    #[test]
    fn two_component_haar_of_odd_subgroup() {
        let x = g(&[2, 2, 3]);
        let (f, gg) = components(&x);
        let m = Distribution::haar(&gg);
        let t = two_component_decompose(&m, &f, &gg).unwrap().unwrap();
        assert_eq!(t.subgroup, gg);
        assert_eq!(t.rho, point(&x, &[0, 0, 0]));
        assert!(t.shift.is_zero());
    }

    #[test]
    fn two_component_recovers_construction() {
        let x = g(&[2, 2, 3]);
        let (f, gg) = components(&x);
        let rho0 = Distribution::new(
            &x,
            vec![
                (x.element(&[0, 0, 0]).unwrap(), Rational::new(1, 2)),
                (x.element(&[1, 0, 0]).unwrap(), Rational::new(1, 3)),
                (x.element(&[1, 1, 0]).unwrap(), Rational::new(1, 6)),
            ],
        )
        .unwrap();
        let shift = x.element(&[0, 1, 2]).unwrap();
        let mu = rho0.convolve(&Distribution::haar(&gg)).unwrap().shift(&shift).unwrap();
        let t = two_component_decompose(&mu, &f, &gg).unwrap().unwrap();
        assert_eq!(t.subgroup, gg);
        let rebuilt = t.rho.convolve(&Distribution::haar(&t.subgroup)).unwrap().shift(&t.shift).unwrap();
        assert_eq!(rebuilt, mu);
    }

    #[test]
    fn two_component_rejects_uneven_odd_part() {
        let x = g(&[2, 9]);
        let (f, gg) = components(&x);
        let mu = Distribution::new(
            &x,
            vec![
                (x.element(&[0, 0]).unwrap(), Rational::new(1, 2)),
                (x.element(&[0, 3]).unwrap(), Rational::new(1, 2)),
            ],
        )
        .unwrap();
        assert!(two_component_decompose(&mu, &f, &gg).unwrap().is_none());
    }

    #[test]
    fn two_component_requires_complements() {
        let x = g(&[2, 3]);
        let f = p_component(&x, 2).unwrap();
        let mu = point(&x, &[0, 0]);
        assert!(two_component_decompose(&mu, &f, &f).is_err());
    }

    #[test]
    fn preimage_annihilator_examples() {
        let z6 = g(&[6]);
        let k = Subgroup::generated(&z6, &[z6.element(&[3]).unwrap()]).unwrap();
        let c = preimage_annihilator_check(&k, &Endomorphism::identity(&z6)).unwrap();
        assert_eq!(c, EquivalenceCheck { primal: true, dual: true });
        let c = preimage_annihilator_check(&k, &scalar_map(2, &z6)).unwrap();
        assert_eq!(c, EquivalenceCheck { primal: false, dual: false });

        let z9 = g(&[9]);
        let c = preimage_annihilator_check(&Subgroup::whole(&z9), &scalar_map(3, &z9)).unwrap();
        assert!(!c.primal && c.agree());
    }
}
