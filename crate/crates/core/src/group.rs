//! Finite Abelian groups given as products of cyclic factors, their elements,
//! subgroups and endomorphisms.
//!
//! A group `Z(n_1) x ... x Z(n_k)` is stored by its modulus list. Elements are
//! coordinate tuples, and every element also has a dense index in
//! `0..order` (mixed radix, first coordinate most significant) so that index
//! order coincides with lexicographic coordinate order.
//!
//! Character groups of finite Abelian groups are isomorphic to the groups
//! themselves, so the dual side reuses the same modulus list. The [`Side`]
//! marker keeps primal and dual values apart at the type level.

use std::fmt;
use std::marker::PhantomData;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest group order the crate will index.
pub const MAX_ORDER: usize = 1 << 24;

mod sealed {
    pub trait Sealed {}
    impl Sealed for super::Primal {}
    impl Sealed for super::Dual {}
}

/// Which side of the duality a value lives on.
pub trait Side:
    sealed::Sealed
    + Copy
    + Default
    + fmt::Debug
    + PartialEq
    + Eq
    + PartialOrd
    + Ord
    + std::hash::Hash
    + Send
    + Sync
    + 'static
{
    type Other: Side<Other = Self>;
    const SYMBOL: &'static str;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Primal;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dual;

impl Side for Primal {
    type Other = Dual;
    const SYMBOL: &'static str = "X";
}

impl Side for Dual {
    type Other = Primal;
    const SYMBOL: &'static str = "Y";
}

/// A coordinate tuple; `coords[i]` is a residue modulo the `i`-th modulus.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element<S: Side = Primal> {
    coords: Vec<u32>,
    _side: PhantomData<S>,
}

pub type GroupElement = Element<Primal>;
pub type DualElement = Element<Dual>;

impl<S: Side> Element<S> {
    fn from_reduced(coords: Vec<u32>) -> Self {
        Self { coords, _side: PhantomData }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The same coordinates read on the other side of the duality.
    pub fn identify(&self) -> Element<S::Other> {
        Element::from_reduced(self.coords.clone())
    }
}

impl<S: Side> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<S: Side> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", S::SYMBOL, self)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    moduli: Vec<u32>,
    strides: Vec<usize>,
    order: usize,
    exponent: u32,
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "{{0}}");
        }
        for (i, n) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z({n})")?;
        }
        Ok(())
    }
}

impl FiniteAbelianGroup {
    /// Builds `Z(n_1) x ... x Z(n_k)`. An empty list gives the trivial group.
    pub fn new(moduli: impl Into<Vec<u32>>) -> Result<Self> {
        let moduli = moduli.into();
        let mut order: u128 = 1;
        let mut exponent: u64 = 1;
        for &n in &moduli {
            if n < 2 {
                return Err(Error::InvalidModulus(n as u64));
            }
            order *= n as u128;
            if order > MAX_ORDER as u128 {
                return Err(Error::GroupTooLarge(order));
            }
            exponent = exponent.lcm(&(n as u64));
        }
        let mut strides = vec![1usize; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1] as usize;
        }
        Ok(Self { moduli, strides, order: order as usize, exponent: exponent as u32 })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Direct product; coordinates of `self` come first.
    pub fn product(&self, other: &Self) -> Self {
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        Self::new(moduli).expect("product of valid groups stays valid")
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// lcm of the moduli; every pairing value is an `exponent`-th root of unity.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// True iff no element has order 2, i.e. every modulus is odd.
    pub fn has_no_order_two(&self) -> bool {
        self.moduli.iter().all(|n| n % 2 == 1)
    }

    /// Strict constructor: every coordinate must already be reduced.
    pub fn element<S: Side>(&self, coords: &[u64]) -> Result<Element<S>> {
        self.check_len(coords.len())?;
        let mut out = Vec::with_capacity(coords.len());
        for (&c, &n) in coords.iter().zip(&self.moduli) {
            if c >= n as u64 {
                return Err(Error::CoordinateOutOfRange { value: c, modulus: n });
            }
            out.push(c as u32);
        }
        Ok(Element::from_reduced(out))
    }

    /// Reduces arbitrary integers coordinate-wise.
    pub fn reduce<S: Side>(&self, coords: &[i64]) -> Result<Element<S>> {
        self.check_len(coords.len())?;
        Ok(Element::from_reduced(
            coords.iter().zip(&self.moduli).map(|(&c, &n)| c.rem_euclid(n as i64) as u32).collect(),
        ))
    }

    pub fn zero<S: Side>(&self) -> Element<S> {
        Element::from_reduced(vec![0; self.rank()])
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: len });
        }
        Ok(())
    }

    pub fn check<S: Side>(&self, x: &Element<S>) -> Result<()> {
        if x.coords.len() != self.rank() {
            return Err(Error::GroupMismatch);
        }
        for (&c, &n) in x.coords.iter().zip(&self.moduli) {
            if c >= n {
                return Err(Error::GroupMismatch);
            }
        }
        Ok(())
    }

    pub fn contains<S: Side>(&self, x: &Element<S>) -> bool {
        self.check(x).is_ok()
    }

    pub fn index_of<S: Side>(&self, x: &Element<S>) -> Result<usize> {
        self.check(x)?;
        Ok(self.index_unchecked(&x.coords))
    }

    pub(crate) fn index_unchecked(&self, coords: &[u32]) -> usize {
        coords.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    /// Writes the coordinates of the element with dense index `idx` into `out`.
    pub fn decode_into(&self, idx: usize, out: &mut [u32]) {
        debug_assert!(idx < self.order);
        for ((o, &s), &n) in out.iter_mut().zip(&self.strides).zip(&self.moduli) {
            *o = ((idx / s) % n as usize) as u32;
        }
    }

    pub fn element_at<S: Side>(&self, idx: usize) -> Element<S> {
        assert!(idx < self.order, "index {idx} out of range for group of order {}", self.order);
        let mut coords = vec![0; self.rank()];
        self.decode_into(idx, &mut coords);
        Element::from_reduced(coords)
    }

    /// All elements in index (lexicographic) order.
    pub fn elements<S: Side>(&self) -> impl Iterator<Item = Element<S>> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn add<S: Side>(&self, x: &Element<S>, y: &Element<S>) -> Result<Element<S>> {
        self.check(x)?;
        self.check(y)?;
        Ok(Element::from_reduced(
            x.coords
                .iter()
                .zip(&y.coords)
                .zip(&self.moduli)
                .map(|((&a, &b), &n)| ((a as u64 + b as u64) % n as u64) as u32)
                .collect(),
        ))
    }

    pub fn neg<S: Side>(&self, x: &Element<S>) -> Result<Element<S>> {
        self.check(x)?;
        Ok(Element::from_reduced(x.coords.iter().zip(&self.moduli).map(|(&a, &n)| (n - a) % n).collect()))
    }

    pub fn sub<S: Side>(&self, x: &Element<S>, y: &Element<S>) -> Result<Element<S>> {
        self.add(x, &self.neg(y)?)
    }

    /// `k * x` for any integer `k`.
    pub fn times<S: Side>(&self, k: i64, x: &Element<S>) -> Result<Element<S>> {
        self.check(x)?;
        Ok(Element::from_reduced(
            x.coords
                .iter()
                .zip(&self.moduli)
                .map(|(&a, &n)| {
                    let n = n as i128;
                    ((k as i128 * a as i128).rem_euclid(n)) as u32
                })
                .collect(),
        ))
    }

    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let mut idx = 0;
        for i in 0..self.rank() {
            let n = self.moduli[i] as usize;
            let s = self.strides[i];
            let ca = (a / s) % n;
            let cb = (b / s) % n;
            idx += ((ca + cb) % n) * s;
        }
        idx
    }

    pub fn neg_index(&self, a: usize) -> usize {
        let mut idx = 0;
        for i in 0..self.rank() {
            let n = self.moduli[i] as usize;
            let s = self.strides[i];
            idx += ((n - (a / s) % n) % n) * s;
        }
        idx
    }

    /// Additive order of `x`.
    pub fn order_of<S: Side>(&self, x: &Element<S>) -> Result<u64> {
        self.check(x)?;
        Ok(self.order_of_coords(&x.coords))
    }

    pub(crate) fn order_of_coords(&self, coords: &[u32]) -> u64 {
        coords.iter().zip(&self.moduli).map(|(&c, &n)| (n / (c.gcd(&n))) as u64).fold(1, |acc, o| acc.lcm(&o))
    }

    pub(crate) fn order_of_index(&self, idx: usize) -> u64 {
        let mut coords = vec![0; self.rank()];
        self.decode_into(idx, &mut coords);
        self.order_of_coords(&coords)
    }

    /// Full addition table, `table[a * order + b] = index(a + b)`.
    pub fn addition_table(&self) -> Vec<u32> {
        let n = self.order;
        let mut coords: Vec<Vec<u32>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = vec![0; self.rank()];
            self.decode_into(i, &mut c);
            coords.push(c);
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let mut idx = 0;
                for (i, (&ca, &cb)) in coords[a].iter().zip(&coords[b]).enumerate() {
                    idx += ((ca + cb) % self.moduli[i]) as usize * self.strides[i];
                }
                table[a * n + b] = idx as u32;
            }
        }
        table
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A subgroup stored as its full (sorted) element index set.
#[derive(Clone)]
pub struct Subgroup<S: Side = Primal> {
    group: FiniteAbelianGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
    generators: Vec<Element<S>>,
}

pub type DualSubgroup = Subgroup<Dual>;

impl<S: Side> PartialEq for Subgroup<S> {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.members == other.members
    }
}

impl<S: Side> Eq for Subgroup<S> {}

impl<S: Side> std::hash::Hash for Subgroup<S> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.group.hash(state);
        self.members.hash(state);
    }
}

impl<S: Side> fmt::Debug for Subgroup<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}} < {}", self.group)
    }
}

impl<S: Side> Subgroup<S> {
    /// Trusted constructor for sets already known to be subgroups.
    pub(crate) fn from_mask(group: &FiniteAbelianGroup, mask: Vec<bool>) -> Self {
        let members: Vec<usize> = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
        debug_assert!(mask[0], "subgroup must contain zero");
        Self { group: group.clone(), members, mask, generators: Vec::new() }
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        let mut mask = vec![false; group.order()];
        mask[0] = true;
        Self::from_mask(group, mask)
    }

    pub fn whole(group: &FiniteAbelianGroup) -> Self {
        Self::from_mask(group, vec![true; group.order()])
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated(group: &FiniteAbelianGroup, gens: &[Element<S>]) -> Result<Self> {
        let mut gen_idx = Vec::with_capacity(gens.len());
        for g in gens {
            gen_idx.push(group.index_of(g)?);
        }
        let mut sub = Self::from_mask(group, closure_mask(group, &gen_idx));
        sub.generators = gens.to_vec();
        Ok(sub)
    }

    /// Accepts an explicit element set, rejecting it unless it is a subgroup.
    pub fn from_elements(group: &FiniteAbelianGroup, elements: &[Element<S>]) -> Result<Self> {
        let mut mask = vec![false; group.order()];
        for x in elements {
            mask[group.index_of(x)?] = true;
        }
        if !mask[0] {
            return Err(Error::NotASubgroup);
        }
        let members: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        for &a in &members {
            if !mask[group.neg_index(a)] {
                return Err(Error::NotASubgroup);
            }
            for &b in &members {
                if !mask[group.add_index(a, b)] {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        Ok(Self::from_mask(group, mask))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.group.order()
    }

    pub fn contains(&self, x: &Element<S>) -> bool {
        self.group.index_of(x).map(|i| self.mask[i]).unwrap_or(false)
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.mask[idx]
    }

    /// Sorted dense indices of the members.
    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn elements(&self) -> impl Iterator<Item = Element<S>> + '_ {
        self.members.iter().map(move |&i| self.group.element_at(i))
    }

    /// Generators recorded at construction, or a greedily chosen generating set.
    pub fn generators(&self) -> Vec<Element<S>> {
        if !self.generators.is_empty() || self.is_trivial() {
            return self.generators.clone();
        }
        let mut chosen = Vec::new();
        let mut span = vec![false; self.group.order()];
        span[0] = true;
        // Prefer elements of large order so the list stays short.
        let mut candidates: Vec<usize> = self.members.clone();
        candidates.sort_by_key(|&i| (std::cmp::Reverse(self.group.order_of_index(i)), i));
        for c in candidates {
            if !span[c] {
                chosen.push(c);
                span = closure_mask(&self.group, &chosen);
            }
        }
        chosen.into_iter().map(|i| self.group.element_at(i)).collect()
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.group == other.group && self.members.iter().all(|&i| other.mask[i])
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(&a, &b)| a && b).collect();
        Ok(Self::from_mask(&self.group, mask))
    }

    /// The subgroup `self + other`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mut mask = vec![false; self.group.order()];
        for &a in &self.members {
            for &b in &other.members {
                mask[self.group.add_index(a, b)] = true;
            }
        }
        Ok(Self::from_mask(&self.group, mask))
    }

    /// The same element set on the other side of the duality.
    pub fn identify(&self) -> Subgroup<S::Other> {
        Subgroup {
            group: self.group.clone(),
            members: self.members.clone(),
            mask: self.mask.clone(),
            generators: self.generators.iter().map(Element::identify).collect(),
        }
    }
}

fn closure_mask(group: &FiniteAbelianGroup, gens: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; group.order()];
    mask[0] = true;
    let mut frontier = vec![0usize];
    while let Some(a) = frontier.pop() {
        for &g in gens {
            let b = group.add_index(a, g);
            if !mask[b] {
                mask[b] = true;
                frontier.push(b);
            }
        }
    }
    mask
}

/// Elements of `group` whose order is a power of the prime `p`.
pub fn p_component(group: &FiniteAbelianGroup, p: u64) -> Result<Subgroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mask = (0..group.order())
        .map(|i| {
            let mut o = group.order_of_index(i);
            while o.is_multiple_of(p) {
                o /= p;
            }
            o == 1
        })
        .collect();
    Ok(Subgroup::from_mask(group, mask))
}

/// Elements of odd order. For a finite group this is the subgroup generated by
/// all odd-order elements, and `group = p_component(2) (+) odd_component`.
pub fn odd_component(group: &FiniteAbelianGroup) -> Subgroup {
    let mask = (0..group.order()).map(|i| group.order_of_index(i) % 2 == 1).collect();
    Subgroup::from_mask(group, mask)
}

/// Integer matrix `m` with generator `e_j` sent to `sum_i m[i][j] e_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism<S: Side = Primal> {
    group: FiniteAbelianGroup,
    matrix: Vec<Vec<u32>>,
    _side: PhantomData<S>,
}

pub type DualEndomorphism = Endomorphism<Dual>;

impl<S: Side> fmt::Debug for Endomorphism<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "End_{}[", S::SYMBOL)?;
        for (i, row) in self.matrix.iter().enumerate() {
            if i > 0 {
                write!(f, " / ")?;
            }
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "] on {}", self.group)
    }
}

impl<S: Side> Endomorphism<S> {
    /// Validates the homomorphism congruences `n_j * m[i][j] = 0 (mod n_i)`.
    pub fn new(group: &FiniteAbelianGroup, rows: &[Vec<i64>]) -> Result<Self> {
        let k = group.rank();
        if rows.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: rows.len() });
        }
        let mut matrix = Vec::with_capacity(k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: row.len() });
            }
            let ni = group.moduli[i];
            let mut out = Vec::with_capacity(k);
            for (j, &v) in row.iter().enumerate() {
                let r = v.rem_euclid(ni as i64) as u64;
                let nj = group.moduli[j] as u64;
                if !(nj * r).is_multiple_of(ni as u64) {
                    return Err(Error::NotAHomomorphism { row: i, col: j, value: r, from: nj as u32, to: ni });
                }
                out.push(r as u32);
            }
            matrix.push(out);
        }
        Ok(Self { group: group.clone(), matrix, _side: PhantomData })
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        Self::scalar(group, 1)
    }

    /// Multiplication by `n`.
    pub fn scalar(group: &FiniteAbelianGroup, n: i64) -> Self {
        let k = group.rank();
        let rows: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| if i == j { n } else { 0 }).collect()).collect();
        Self::new(group, &rows).expect("scalar maps are homomorphisms")
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn matrix_i64(&self) -> Vec<Vec<i64>> {
        self.matrix.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect()
    }

    pub fn apply(&self, x: &Element<S>) -> Result<Element<S>> {
        self.group.check(x)?;
        Ok(Element::from_reduced(self.apply_coords(&x.coords)))
    }

    fn apply_coords(&self, coords: &[u32]) -> Vec<u32> {
        self.matrix
            .iter()
            .zip(&self.group.moduli)
            .map(|(row, &n)| {
                let s: u64 = row.iter().zip(coords).map(|(&m, &c)| m as u64 * c as u64).sum();
                (s % n as u64) as u32
            })
            .collect()
    }

    pub fn apply_index(&self, idx: usize) -> usize {
        let g = &self.group;
        let mut out = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            let s: u64 = row
                .iter()
                .enumerate()
                .map(|(j, &m)| m as u64 * ((idx / g.strides[j]) % g.moduli[j] as usize) as u64)
                .sum();
            out += (s % g.moduli[i] as u64) as usize * g.strides[i];
        }
        out
    }

    /// `table[i] = index(e(element i))`.
    pub fn table(&self) -> Vec<usize> {
        (0..self.group.order()).map(|i| self.apply_index(i)).collect()
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let k = self.group.rank();
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                (0..k).map(|j| (0..k).map(|l| self.matrix[i][l] as i64 * other.matrix[l][j] as i64).sum()).collect()
            })
            .collect();
        Self::new(&self.group, &rows)
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        self.same_group(other)?;
        let rows: Vec<Vec<i64>> = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x as i64 + sign * y as i64).collect())
            .collect();
        Self::new(&self.group, &rows)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn scale(&self, n: i64) -> Self {
        let rows: Vec<Vec<i64>> = self.matrix.iter().map(|r| r.iter().map(|&v| n * v as i64).collect()).collect();
        Self::new(&self.group, &rows).expect("multiples of homomorphisms are homomorphisms")
    }

    /// Block-diagonal map on `self.group x other.group`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let group = self.group.product(&other.group);
        let (a, b) = (self.group.rank(), other.group.rank());
        let mut rows = vec![vec![0i64; a + b]; a + b];
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                rows[i][j] = v as i64;
            }
        }
        for (i, row) in other.matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                rows[a + i][a + j] = v as i64;
            }
        }
        Self::new(&group, &rows).expect("block sums of homomorphisms are homomorphisms")
    }

    pub fn kernel(&self) -> Subgroup<S> {
        let mask = (0..self.group.order()).map(|i| self.apply_index(i) == 0).collect();
        Subgroup::from_mask(&self.group, mask)
    }

    pub fn image(&self) -> Subgroup<S> {
        let mut mask = vec![false; self.group.order()];
        for i in 0..self.group.order() {
            mask[self.apply_index(i)] = true;
        }
        Subgroup::from_mask(&self.group, mask)
    }

    /// Injective, hence bijective on a finite group.
    pub fn is_automorphism(&self) -> bool {
        (1..self.group.order()).all(|i| self.apply_index(i) != 0)
    }

    /// `e(K)`.
    pub fn image_of(&self, sub: &Subgroup<S>) -> Result<Subgroup<S>> {
        if sub.group != self.group {
            return Err(Error::GroupMismatch);
        }
        let mut mask = vec![false; self.group.order()];
        for &i in sub.indices() {
            mask[self.apply_index(i)] = true;
        }
        Ok(Subgroup::from_mask(&self.group, mask))
    }

    /// The preimage `e^{-1}(K)`.
    pub fn preimage_of(&self, sub: &Subgroup<S>) -> Result<Subgroup<S>> {
        if sub.group != self.group {
            return Err(Error::GroupMismatch);
        }
        let mask = (0..self.group.order()).map(|i| sub.contains_index(self.apply_index(i))).collect();
        Ok(Subgroup::from_mask(&self.group, mask))
    }

    /// True iff `e(K) = K`.
    pub fn preserves(&self, sub: &Subgroup<S>) -> Result<bool> {
        Ok(self.image_of(sub)? == *sub)
    }

    pub fn restrict(&self, sub: &Subgroup<S>) -> Result<RestrictedMap<S>> {
        if sub.group != self.group {
            return Err(Error::GroupMismatch);
        }
        let mut images = Vec::with_capacity(sub.order());
        for &i in sub.indices() {
            let j = self.apply_index(i);
            match sub.indices().binary_search(&j) {
                Ok(pos) => images.push(pos),
                Err(_) => return Err(Error::NotInvariant),
            }
        }
        Ok(RestrictedMap { subgroup: sub.clone(), images })
    }

    /// The same matrix acting on the other side of the duality.
    pub fn identify(&self) -> Endomorphism<S::Other> {
        Endomorphism { group: self.group.clone(), matrix: self.matrix.clone(), _side: PhantomData }
    }
}

/// `f_n : x -> n x`.
pub fn scalar_map(n: i64, group: &FiniteAbelianGroup) -> Endomorphism {
    Endomorphism::scalar(group, n)
}

/// An endomorphism restricted to an invariant subgroup, as a table on the
/// subgroup's members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedMap<S: Side = Primal> {
    subgroup: Subgroup<S>,
    images: Vec<usize>,
}

impl<S: Side> RestrictedMap<S> {
    pub fn subgroup(&self) -> &Subgroup<S> {
        &self.subgroup
    }

    pub fn apply(&self, x: &Element<S>) -> Option<Element<S>> {
        let idx = self.subgroup.group.index_of(x).ok()?;
        let pos = self.subgroup.indices().binary_search(&idx).ok()?;
        Some(self.subgroup.group.element_at(self.subgroup.indices()[self.images[pos]]))
    }

    /// `(x, e(x))` for every member, in member order.
    pub fn pairs(&self) -> impl Iterator<Item = (Element<S>, Element<S>)> + '_ {
        let idx = self.subgroup.indices();
        self.images
            .iter()
            .enumerate()
            .map(move |(p, &q)| (self.subgroup.group.element_at(idx[p]), self.subgroup.group.element_at(idx[q])))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &q)| p == q)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &q in &self.images {
            if seen[q] {
                return false;
            }
            seen[q] = true;
        }
        true
    }
}
