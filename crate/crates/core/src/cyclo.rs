//! Exact values in `Q(zeta_N)`.
//!
//! A value is stored as `(1/den) * sum_k num[k] zeta_N^k` with integer
//! numerators, i.e. as an element of the group algebra `Q[Z_N]`. Distinct
//! coefficient vectors may denote the same number; equality reduces the
//! difference modulo the `N`-th cyclotomic polynomial. A float evaluation at
//! the primitive root rejects most unequal pairs before the exact division.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::Rational;

struct Context {
    /// Coefficients of `Phi_N`, lowest degree first; monic.
    phi: Vec<i128>,
    roots: Vec<Complex64>,
}

fn context(n: u32) -> Arc<Context> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Context>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = cache.lock().unwrap().get(&n) {
        return ctx.clone();
    }
    let roots = (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    let ctx = Arc::new(Context { phi: cyclotomic_polynomial(n), roots });
    cache.lock().unwrap().insert(n, ctx.clone());
    ctx
}

/// `Phi_n`, lowest degree first, from `x^n - 1 = prod_{d | n} Phi_d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i128> {
    assert!(n >= 1);
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = exact_div(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn exact_div(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let mut q = vec![0i128; num.len() - dn];
    for deg in (dn..num.len()).rev() {
        let c = rem[deg];
        if c != 0 {
            q[deg - dn] = c;
            for (i, &d) in den.iter().enumerate() {
                rem[deg - dn + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Remainder of `p` modulo the monic polynomial `m`, in place; the result
/// occupies the first `deg m` coefficients.
fn reduce_mod(p: &mut [i128], m: &[i128]) {
    let dm = m.len() - 1;
    for deg in (dm..p.len()).rev() {
        let c = p[deg];
        if c != 0 {
            for (i, &d) in m.iter().enumerate() {
                p[deg - dm + i] -= c * d;
            }
        }
    }
}

#[derive(Clone)]
pub struct CycloValue {
    order: u32,
    num: Vec<i128>,
    den: i128,
}

impl CycloValue {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "root-of-unity order must be positive");
        Self { order, num: vec![0; order as usize], den: 1 }
    }

    pub fn one(order: u32) -> Self {
        Self::root(order, 0)
    }

    /// `zeta_N^k`.
    pub fn root(order: u32, k: u32) -> Self {
        let mut v = Self::zero(order);
        v.num[(k % order) as usize] = 1;
        v
    }

    pub fn from_rational(order: u32, q: Rational) -> Self {
        let mut v = Self::zero(order);
        v.num[0] = *q.numer();
        v.den = *q.denom();
        v.normalized()
    }

    /// `(1/den) * sum_k num[k] zeta^k`; `num.len()` is the order.
    pub fn from_scaled(num: Vec<i128>, den: i128) -> Self {
        assert!(!num.is_empty() && den != 0);
        Self { order: num.len() as u32, num, den }.normalized()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Integer numerators over the shared denominator.
    pub fn scaled(&self) -> (&[i128], i128) {
        (&self.num, self.den)
    }

    /// Group-algebra coefficient of `zeta^k`.
    pub fn coefficient(&self, k: u32) -> Rational {
        Rational::new(self.num[(k % self.order) as usize], self.den)
    }

    fn normalized(mut self) -> Self {
        if self.den < 0 {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -*c;
            }
        }
        let mut g = self.den;
        for &c in &self.num {
            if g == 1 {
                break;
            }
            g = g.gcd(&c);
        }
        if g > 1 {
            self.den /= g;
            for c in &mut self.num {
                *c /= g;
            }
        }
        self
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order, other.order, "cyclotomic values of different orders");
    }

    /// Complex conjugate: `zeta^k -> zeta^{-k}`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut num = vec![0; n];
        for (k, &c) in self.num.iter().enumerate() {
            num[(n - k) % n] = c;
        }
        Self { order: self.order, num, den: self.den }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self { order: self.order, num: self.num.iter().map(|c| c * q.numer()).collect(), den: self.den * q.denom() }
            .normalized()
    }

    /// Multiplies by `zeta^k`.
    pub fn rotate(&self, k: u32) -> Self {
        let n = self.order as usize;
        let mut num = vec![0; n];
        for (i, &c) in self.num.iter().enumerate() {
            num[(i + k as usize) % n] = c;
        }
        Self { order: self.order, num, den: self.den }
    }

    pub fn to_complex(&self) -> Complex64 {
        let ctx = context(self.order);
        let s: Complex64 = self.num.iter().zip(&ctx.roots).map(|(&c, r)| r * c as f64).sum();
        s / self.den as f64
    }

    /// Exact test for `value == 0`.
    pub fn is_zero(&self) -> bool {
        is_zero_numerators(&self.num)
    }

    /// Unique representative of degree below `phi(N)`, as rationals.
    pub fn canonical(&self) -> Vec<Rational> {
        let ctx = context(self.order);
        let mut p = self.num.clone();
        reduce_mod(&mut p, &ctx.phi);
        p.truncate(ctx.phi.len() - 1);
        p.into_iter().map(|c| Rational::new(c, self.den)).collect()
    }

    /// `Some(q)` when the value is the rational number `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        let c = self.canonical();
        if c.iter().skip(1).all(Zero::is_zero) {
            Some(c.first().copied().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Real (equal to its conjugate).
    pub fn is_real(&self) -> bool {
        (self - &self.conj()).is_zero()
    }
}

/// Exact zero test for `sum_k num[k] zeta_N^k` with `N = num.len()`.
pub(crate) fn is_zero_numerators(num: &[i128]) -> bool {
    if num.iter().all(|&c| c == 0) {
        return true;
    }
    let ctx = context(num.len() as u32);
    // A value this far from zero cannot be zero; rounding error is bounded by
    // roughly N * eps * sum |c|.
    let mag: f64 = num.iter().map(|c| c.abs() as f64).sum();
    let v: Complex64 = num.iter().zip(&ctx.roots).map(|(&c, r)| r * c as f64).sum();
    if v.norm() > 1e-9 * mag {
        return false;
    }
    let mut p = num.to_vec();
    reduce_mod(&mut p, &ctx.phi);
    p[..ctx.phi.len() - 1].iter().all(|&c| c == 0)
}

/// Cyclic convolution of integer numerators (multiplication in `Z[Z_N]`).
pub(crate) fn mul_numerators(a: &[i128], b: &[i128], out: &mut [i128]) {
    let n = a.len();
    out.iter_mut().for_each(|c| *c = 0);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                let k = if i + j >= n { i + j - n } else { i + j };
                out[k] += x * y;
            }
        }
    }
}

impl PartialEq for CycloValue {
    fn eq(&self, other: &Self) -> bool {
        self.check_order(other);
        let diff: Vec<i128> = self.num.iter().zip(&other.num).map(|(a, b)| a * other.den - b * self.den).collect();
        is_zero_numerators(&diff)
    }
}

impl Eq for CycloValue {}

impl fmt::Debug for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let q = Rational::new(c, self.den);
                if k == 0 {
                    format!("{q}")
                } else {
                    format!("{q}*z{}^{k}", self.order)
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<'a> Add<&'a CycloValue> for &'a CycloValue {
    type Output = CycloValue;
    fn add(self, rhs: &CycloValue) -> CycloValue {
        self.check_order(rhs);
        let l = self.den.lcm(&rhs.den);
        let (a, b) = (l / self.den, l / rhs.den);
        CycloValue {
            order: self.order,
            num: self.num.iter().zip(&rhs.num).map(|(x, y)| x * a + y * b).collect(),
            den: l,
        }
        .normalized()
    }
}

impl<'a> Sub<&'a CycloValue> for &'a CycloValue {
    type Output = CycloValue;
    fn sub(self, rhs: &CycloValue) -> CycloValue {
        self + &(-rhs)
    }
}

impl Neg for &CycloValue {
    type Output = CycloValue;
    fn neg(self) -> CycloValue {
        CycloValue { order: self.order, num: self.num.iter().map(|c| -c).collect(), den: self.den }
    }
}

impl<'a> Mul<&'a CycloValue> for &'a CycloValue {
    type Output = CycloValue;
    fn mul(self, rhs: &CycloValue) -> CycloValue {
        self.check_order(rhs);
        let mut num = vec![0; self.order as usize];
        mul_numerators(&self.num, &rhs.num, &mut num);
        CycloValue { order: self.order, num, den: self.den * rhs.den }.normalized()
    }
}

impl Add for CycloValue {
    type Output = CycloValue;
    fn add(self, rhs: CycloValue) -> CycloValue {
        &self + &rhs
    }
}

impl Sub for CycloValue {
    type Output = CycloValue;
    fn sub(self, rhs: CycloValue) -> CycloValue {
        &self - &rhs
    }
}

impl Mul for CycloValue {
    type Output = CycloValue;
    fn mul(self, rhs: CycloValue) -> CycloValue {
        &self * &rhs
    }
}

impl Neg for CycloValue {
    type Output = CycloValue;
    fn neg(self) -> CycloValue {
        -&self
    }
}
