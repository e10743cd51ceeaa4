use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{LinearFormPair, SymmetryScenario};
use crate::cyclo::{is_zero_numerators, mul_numerators, CycloValue};
use crate::duality::adjoint;
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FiniteAbelianGroup};
use crate::measures::{CharFunction, Distribution};

/// Groups up to this order get a dense joint-law buffer and addition table.
const DENSE_LIMIT: usize = 512;

/// Float gap that certainly separates two unequal products of characteristic
/// function values; anything closer goes to the exact test.
const FLOAT_GAP: f64 = 1e-9;

struct Tables {
    group: FiniteAbelianGroup,
    add: Option<Vec<u32>>,
    alpha: Vec<u32>,
    neg: Vec<u32>,
}

impl Tables {
    #[inline]
    fn add(&self, a: usize, b: usize) -> usize {
        match &self.add {
            Some(t) => t[a * self.group.order() + b] as usize,
            None => self.group.add_index(a, b),
        }
    }
}

enum Joint {
    Dense(Vec<i128>),
    Sparse(HashMap<usize, i128>),
}

/// Reusable evaluator of the direct symmetry test for a fixed `(X, alpha)`.
///
/// The joint law of `(L1, L2)` is accumulated with integer weights, so the
/// comparison `P(s, t) = P(s, -t)` is exact. Cloning shares the lookup tables
/// and gives the clone its own scratch space.
pub(crate) struct DirectChecker {
    tables: Arc<Tables>,
    joint: Joint,
    touched: Vec<usize>,
}

impl Clone for DirectChecker {
    fn clone(&self) -> Self {
        Self { tables: self.tables.clone(), joint: Self::fresh_joint(&self.tables.group), touched: Vec::new() }
    }
}

impl DirectChecker {
    pub(crate) fn new(alpha: &Endomorphism) -> Self {
        let group = alpha.group().clone();
        let n = group.order();
        let add = (n <= DENSE_LIMIT).then(|| group.addition_table());
        let alpha = alpha.table().into_iter().map(|v| v as u32).collect();
        let neg = (0..n).map(|i| group.neg_index(i) as u32).collect();
        let joint = Self::fresh_joint(&group);
        Self { tables: Arc::new(Tables { group, add, alpha, neg }), joint, touched: Vec::new() }
    }

    fn fresh_joint(group: &FiniteAbelianGroup) -> Joint {
        let n = group.order();
        if n <= DENSE_LIMIT {
            Joint::Dense(vec![0; n * n])
        } else {
            Joint::Sparse(HashMap::new())
        }
    }

    /// `first`, `second`: support points with positive integer weights. The
    /// common scale of each side is irrelevant.
    pub(crate) fn is_symmetric(&mut self, first: &[(usize, i128)], second: &[(usize, i128)]) -> bool {
        let t = &*self.tables;
        let n = t.group.order();
        let shifted: Vec<(usize, usize, i128)> = second.iter().map(|&(x2, w)| (x2, t.alpha[x2] as usize, w)).collect();
        match &mut self.joint {
            Joint::Dense(buf) => {
                for &(x1, w1) in first {
                    for &(x2, ax2, w2) in &shifted {
                        let cell = t.add(x1, x2) * n + t.add(x1, ax2);
                        if buf[cell] == 0 {
                            self.touched.push(cell);
                        }
                        buf[cell] += w1 * w2;
                    }
                }
                let mut ok = true;
                for &cell in &self.touched {
                    let (s, l2) = (cell / n, cell % n);
                    if buf[cell] != buf[s * n + t.neg[l2] as usize] {
                        ok = false;
                        break;
                    }
                }
                for &cell in &self.touched {
                    buf[cell] = 0;
                }
                self.touched.clear();
                ok
            }
            Joint::Sparse(map) => {
                for &(x1, w1) in first {
                    for &(x2, ax2, w2) in &shifted {
                        *map.entry(t.add(x1, x2) * n + t.add(x1, ax2)).or_insert(0) += w1 * w2;
                    }
                }
                let ok = map.iter().all(|(&cell, &w)| {
                    let (s, l2) = (cell / n, cell % n);
                    map.get(&(s * n + t.neg[l2] as usize)).copied().unwrap_or(0) == w
                });
                map.clear();
                ok
            }
        }
    }
}

fn weighted_support(mu: &Distribution) -> Vec<(usize, i128)> {
    let (scaled, _) = mu.scaled_masses();
    mu.support_indices().into_iter().map(|i| (i, scaled[i])).collect()
}

/// Checks `P(L1 = s, L2 = t) = P(L1 = s, L2 = -t)` for every `(s, t)`, in exact
/// arithmetic. This is the ground-truth form of the conditional symmetry.
pub fn symmetry_direct(s: &SymmetryScenario) -> bool {
    DirectChecker::new(s.alpha()).is_symmetric(&weighted_support(s.mu1()), &weighted_support(s.mu2()))
}

/// Checks `f(u+v) g(u + a~v) = f(u-v) g(u - a~v)` for all characters
/// `u`, `v`, where `f`, `g` are the characteristic functions of the two laws
/// and `a~` is the adjoint of `alpha`.
pub fn symmetry_spectral(s: &SymmetryScenario) -> bool {
    symmetry_spectral_cf(s.alpha(), &s.mu1().char_function(), &s.mu2().char_function())
        .expect("scenario components share one group")
}

/// The spectral symmetry test on precomputed characteristic functions.
pub fn symmetry_spectral_cf(alpha: &Endomorphism, f: &CharFunction, g: &CharFunction) -> Result<bool> {
    let group = alpha.group();
    if f.group() != group || g.group() != group {
        return Err(Error::GroupMismatch);
    }
    let n = group.order();
    let adj = adjoint(alpha).table();
    let neg: Vec<usize> = (0..n).map(|i| group.neg_index(i)).collect();
    let add = |a: usize, b: usize| group.add_index(a, b);
    let fc = f.to_complex();
    let gc = g.to_complex();
    let order = group.exponent() as usize;
    let mut lhs = vec![0i128; order];
    let mut rhs = vec![0i128; order];

    for u in 0..n {
        for v in 0..n {
            let a = add(u, v);
            let b = add(u, adj[v]);
            let c = add(u, neg[v]);
            let d = add(u, neg[adj[v]]);
            if (a, b) == (c, d) {
                continue;
            }
            let gap: Complex64 = fc[a] * gc[b] - fc[c] * gc[d];
            if gap.norm() > FLOAT_GAP {
                return Ok(false);
            }
            if !products_equal(f.value_at(a), g.value_at(b), f.value_at(c), g.value_at(d), &mut lhs, &mut rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact `p * q == r * s`.
fn products_equal(
    p: &CycloValue,
    q: &CycloValue,
    r: &CycloValue,
    s: &CycloValue,
    lhs: &mut [i128],
    rhs: &mut [i128],
) -> bool {
    let ((pn, pd), (qn, qd)) = (p.scaled(), q.scaled());
    let ((rn, rd), (sn, sd)) = (r.scaled(), s.scaled());
    mul_numerators(pn, qn, lhs);
    mul_numerators(rn, sn, rhs);
    let (l, r) = (rd * sd, pd * qd);
    for (a, b) in lhs.iter_mut().zip(rhs.iter()) {
        *a = *a * l - *b * r;
    }
    is_zero_numerators(lhs)
}

/// Direct factorization test of the joint law of `(M1, M2)`.
fn independence_direct(mu1: &Distribution, mu2: &Distribution, forms: &LinearFormPair) -> bool {
    let group = forms.group();
    let n = group.order();
    let (a1, a2, b1, b2) = (forms.a1.table(), forms.a2.table(), forms.b1.table(), forms.b2.table());
    let (s1, s2) = (weighted_support(mu1), weighted_support(mu2));
    let mut joint: HashMap<(usize, usize), i128> = HashMap::new();
    let mut p1 = vec![0i128; n];
    let mut p2 = vec![0i128; n];
    for &(x1, w1) in &s1 {
        for &(x2, w2) in &s2 {
            let m1 = group.add_index(a1[x1], a2[x2]);
            let m2 = group.add_index(b1[x1], b2[x2]);
            let w = w1 * w2;
            *joint.entry((m1, m2)).or_insert(0) += w;
            p1[m1] += w;
            p2[m2] += w;
        }
    }
    let total: i128 = p1.iter().sum();
    let supp1: Vec<usize> = (0..n).filter(|&i| p1[i] != 0).collect();
    let supp2: Vec<usize> = (0..n).filter(|&i| p2[i] != 0).collect();
    supp1
        .iter()
        .all(|&m1| supp2.iter().all(|&m2| joint.get(&(m1, m2)).copied().unwrap_or(0) * total == p1[m1] * p2[m2]))
}

fn independence_spectral(mu1: &Distribution, mu2: &Distribution, forms: &LinearFormPair) -> bool {
    let group = forms.group();
    let n = group.order();
    let f = mu1.char_function();
    let g = mu2.char_function();
    let (a1, a2) = (adjoint(&forms.a1).table(), adjoint(&forms.a2).table());
    let (b1, b2) = (adjoint(&forms.b1).table(), adjoint(&forms.b2).table());
    let fc = f.to_complex();
    let gc = g.to_complex();
    let left: Vec<CycloValue> = (0..n).map(|u| f.value_at(a1[u]) * g.value_at(a2[u])).collect();
    let right: Vec<CycloValue> = (0..n).map(|v| f.value_at(b1[v]) * g.value_at(b2[v])).collect();
    let left_c: Vec<Complex64> = left.iter().map(CycloValue::to_complex).collect();
    let right_c: Vec<Complex64> = right.iter().map(CycloValue::to_complex).collect();
    for u in 0..n {
        for v in 0..n {
            let x = group.add_index(a1[u], b1[v]);
            let y = group.add_index(a2[u], b2[v]);
            if (fc[x] * gc[y] - left_c[u] * right_c[v]).norm() > FLOAT_GAP {
                return false;
            }
            if f.value_at(x) * g.value_at(y) != &left[u] * &right[v] {
                return false;
            }
        }
    }
    true
}

/// Independence of `M1 = a1 xi1 + a2 xi2` and `M2 = b1 xi1 + b2 xi2`.
///
/// Decided by factorization of the pushed-forward joint law, and
/// cross-checked against the characteristic-function identity
/// `f(a1~u + b1~v) g(a2~u + b2~v) = f(a1~u) g(a2~u) f(b1~v) g(b2~v)`.
/// Disagreement between the two routes is reported as an error.
pub fn independence_check(mu1: &Distribution, mu2: &Distribution, forms: &LinearFormPair) -> Result<bool> {
    if mu1.group() != forms.group() || mu2.group() != forms.group() {
        return Err(Error::GroupMismatch);
    }
    let direct = independence_direct(mu1, mu2, forms);
    let spectral = independence_spectral(mu1, mu2, forms);
    if direct != spectral {
        return Err(Error::CrossCheckMismatch(format!(
            "independence: joint-law test says {direct}, characteristic functions say {spectral}"
        )));
    }
    Ok(direct)
}
