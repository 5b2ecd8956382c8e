//! Multi-indices z^β, their forests, symmetry factors and degrees.
//!
//! A multi-index records how many vertices of each arity a diagram has.
//! The insertion products live in [`ops`], the extraction-contraction
//! coproduct in [`coproduct`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::combinatorics::factorial;
use crate::error::Error;
use crate::lincomb::{int, Coefficient, Scalar};
use crate::symbolic::SymbolicValue;

pub mod coproduct;
pub mod ops;
mod populate;

pub use coproduct::{
    coproduct_full, coproduct_reduced, coproduct_reduced_via_adjoint, e_coefficient,
    e_coefficient_via_adjoint,
};
pub use ops::{apply_d, insert, partial, simultaneous_insert, simultaneous_insert_restricted};
pub use populate::is_populatable;

/// Monomial z^β as a map arity -> multiplicity.
///
/// The empty monomial exists only as an intermediate of partial
/// derivatives; public constructors reject it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex {
    beta: BTreeMap<u32, u32>,
}

impl MultiIndex {
    /// Build from `(arity, multiplicity)` pairs; repeated arities add up.
    pub fn new<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Result<Self, Error> {
        let m = Self::from_pairs_unchecked(pairs);
        if m.is_empty() {
            Err(Error::EmptyMultiIndex)
        } else {
            Ok(m)
        }
    }

    /// z_k^n. Panics if `n == 0`.
    pub fn z(k: u32, n: u32) -> Self {
        Self::new([(k, n)]).expect("power must be positive")
    }

    /// One vertex per listed arity.
    pub fn from_arities(arities: &[u32]) -> Result<Self, Error> {
        Self::new(arities.iter().map(|&k| (k, 1)))
    }

    pub(crate) fn from_pairs_unchecked<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut beta = BTreeMap::new();
        for (k, n) in pairs {
            if n > 0 {
                *beta.entry(k).or_insert(0) += n;
            }
        }
        MultiIndex { beta }
    }

    pub(crate) fn empty() -> Self {
        MultiIndex { beta: BTreeMap::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// β(k).
    pub fn get(&self, k: u32) -> u32 {
        self.beta.get(&k).copied().unwrap_or(0)
    }

    /// `(arity, multiplicity)` pairs in increasing arity.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.beta.iter().map(|(k, n)| (*k, *n))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.beta.keys().copied()
    }

    pub fn max_arity(&self) -> u32 {
        self.beta.keys().next_back().copied().unwrap_or(0)
    }

    /// Vertex count |z^β|.
    pub fn norm(&self) -> u32 {
        self.beta.values().sum()
    }

    /// Total number of half-edges Σ k β(k).
    pub fn half_edges(&self) -> u32 {
        self.beta.iter().map(|(k, n)| k * n).sum()
    }

    /// Arity of every vertex, sorted increasingly.
    pub fn arities(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.norm() as usize);
        for (k, n) in self.entries() {
            out.extend(core::iter::repeat(k).take(n as usize));
        }
        out
    }

    /// Monomial product.
    pub fn mul(&self, other: &MultiIndex) -> MultiIndex {
        Self::from_pairs_unchecked(self.entries().chain(other.entries()))
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_div(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut beta = self.beta.clone();
        for (k, n) in other.entries() {
            let e = beta.get_mut(&k)?;
            if *e < n {
                return None;
            }
            *e -= n;
            if *e == 0 {
                beta.remove(&k);
            }
        }
        Some(MultiIndex { beta })
    }

    pub(crate) fn add_vertex(&mut self, k: u32, n: u32) {
        if n > 0 {
            *self.beta.entry(k).or_insert(0) += n;
        }
    }

    /// Remove one vertex of arity `k`; returns false if there is none.
    pub(crate) fn remove_vertex(&mut self, k: u32) -> bool {
        match self.beta.get_mut(&k) {
            Some(e) => {
                *e -= 1;
                if *e == 0 {
                    self.beta.remove(&k);
                }
                true
            }
            None => false,
        }
    }

    /// S_M = ∏ β(k)! (k!)^β(k).
    pub fn sym_factor(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (k, n) in self.entries() {
            acc *= factorial(n as u64);
            acc *= factorial(k as u64).pow(n);
        }
        acc
    }

    /// Ŝ_M = ∏ β(k)!.
    pub fn hat_sym_factor(&self) -> BigUint {
        self.entries().map(|(_, n)| factorial(n as u64)).product()
    }

    /// (ℓ/2) Σ k β(k) + d (|z^β| - 1).
    pub fn degree(&self, p: &DegreeParams) -> Scalar {
        let half = &p.ell * int(self.half_edges()) / int(2);
        half + int(p.d as i64 * (self.norm() as i64 - 1))
    }

    pub fn is_divergent(&self, p: &DegreeParams) -> bool {
        self.degree(p) <= Scalar::zero()
    }

    /// Every arity lies in the rule.
    pub fn obeys(&self, rule: &Rule) -> bool {
        self.support().all(|k| rule.allows(k))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for (i, (k, n)) in self.entries().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if n == 1 {
                write!(f, "z{k}")?;
            } else {
                write!(f, "z{k}^{n}")?;
            }
        }
        Ok(())
    }
}

/// Commutative forest product of multi-indices; the empty forest is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MIForest {
    parts: Vec<MultiIndex>,
}

impl MIForest {
    pub fn new(mut parts: Vec<MultiIndex>) -> Self {
        parts.retain(|m| !m.is_empty());
        parts.sort();
        MIForest { parts }
    }

    pub fn unit() -> Self {
        MIForest::default()
    }

    pub fn single(m: MultiIndex) -> Self {
        MIForest::new(alloc::vec![m])
    }

    /// `m` repeated `r` times.
    pub fn power(m: &MultiIndex, r: usize) -> Self {
        MIForest::new(alloc::vec![m.clone(); r])
    }

    pub fn is_unit(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[MultiIndex] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn product(&self, other: &MIForest) -> MIForest {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        MIForest::new(parts)
    }

    /// Distinct components with their multiplicities.
    pub fn grouped(&self) -> Vec<(&MultiIndex, usize)> {
        let mut out: Vec<(&MultiIndex, usize)> = Vec::new();
        for m in &self.parts {
            match out.last_mut() {
                Some((last, r)) if *last == m => *r += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }

    /// ∏ r_i! S_M(β_i)^r_i over distinct components.
    pub fn sym_factor(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (m, r) in self.grouped() {
            acc *= factorial(r as u64);
            acc *= m.sym_factor().pow(r as u32);
        }
        acc
    }

    pub fn is_divergent(&self, p: &DegreeParams) -> bool {
        self.parts.iter().all(|m| m.is_divergent(p))
    }

    pub fn half_edges(&self) -> u32 {
        self.parts.iter().map(MultiIndex::half_edges).sum()
    }
}

impl fmt::Display for MIForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("1");
        }
        for (i, m) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Hölder degree ℓ < 1 of the kernel and spatial dimension d.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeParams {
    pub ell: Scalar,
    pub d: u32,
}

impl DegreeParams {
    pub fn new(ell: Scalar, d: u32) -> Result<Self, Error> {
        if ell >= Scalar::one() {
            return Err(Error::BadHolderDegree(ell.to_string()));
        }
        if d == 0 {
            return Err(Error::BadDimension);
        }
        Ok(DegreeParams { ell, d })
    }

    /// ℓ = -1, d = 3: the three-dimensional quartic model.
    pub fn phi4_3() -> Self {
        DegreeParams { ell: int(-1), d: 3 }
    }
}

/// Allowed vertex arities of a model.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rule {
    arities: BTreeSet<u32>,
}

impl Rule {
    pub fn new<I: IntoIterator<Item = u32>>(arities: I) -> Result<Self, Error> {
        let arities: BTreeSet<u32> = arities.into_iter().collect();
        if arities.is_empty() || arities.contains(&0) {
            return Err(Error::EmptyRule);
        }
        Ok(Rule { arities })
    }

    /// {2, 4}.
    pub fn phi4() -> Self {
        Rule::new([2, 4]).expect("nonempty")
    }

    pub fn allows(&self, k: u32) -> bool {
        self.arities.contains(&k)
    }

    pub fn arities(&self) -> impl Iterator<Item = u32> + '_ {
        self.arities.iter().copied()
    }

    pub fn max_arity(&self) -> u32 {
        self.arities.iter().next_back().copied().unwrap_or(0)
    }
}

/// Optional-rule helper: no rule admits everything.
pub(crate) fn admits(rule: Option<&Rule>, m: &MultiIndex) -> bool {
    rule.map_or(true, |r| m.obeys(r))
}

/// ⟨a, b⟩ = S_M(a) δ_{a,b}.
pub fn inner_product(a: &MIForest, b: &MIForest) -> Scalar {
    if a == b {
        Scalar::from_integer(a.sym_factor().into())
    } else {
        Scalar::zero()
    }
}

/// Couplings α_k keyed by arity.
pub type CouplingMap = BTreeMap<u32, SymbolicValue>;

/// The quartic model couplings: only α_4, kept as a free symbol.
pub fn phi4_couplings() -> CouplingMap {
    let mut c = CouplingMap::new();
    c.insert(4, SymbolicValue::coupling(4));
    c
}

/// Υ(z^β) = ∏ (-α_k)^β(k); an absent coupling counts as zero.
pub fn upsilon(couplings: &CouplingMap, m: &MultiIndex) -> SymbolicValue {
    let mut acc = SymbolicValue::one();
    for (k, n) in m.entries() {
        match couplings.get(&k) {
            Some(a) => acc = acc.mul_ref(&a.neg_ref().pow(n)),
            None => return SymbolicValue::zero(),
        }
    }
    acc
}

/// All multi-indices with arities in `arities` and total half-edges in
/// `1..=max_half_edges`, in increasing order.
pub fn enumerate_multi_indices(arities: &[u32], max_half_edges: u32) -> Vec<MultiIndex> {
    fn rec(arities: &[u32], budget: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<MultiIndex>) {
        let Some((&k, rest)) = arities.split_first() else {
            if let Ok(m) = MultiIndex::new(cur.iter().copied()) {
                out.push(m);
            }
            return;
        };
        let max_n = if k == 0 { 0 } else { budget / k };
        for n in 0..=max_n {
            cur.push((k, n));
            rec(rest, budget - n * k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut ar: Vec<u32> = arities.iter().copied().filter(|&k| k > 0).collect();
    ar.sort_unstable();
    ar.dedup();
    rec(&ar, max_half_edges, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::ratio;

    fn mi(p: &[(u32, u32)]) -> MultiIndex {
        MultiIndex::new(p.iter().copied()).unwrap()
    }

    #[test]
    fn norms() {
        assert_eq!(MultiIndex::z(4, 2).norm(), 2);
        assert_eq!(mi(&[(2, 1), (4, 2)]).norm(), 3);
        assert_eq!(MultiIndex::z(3, 2).norm(), 2);
    }

    #[test]
    fn symmetry_factors() {
        assert_eq!(MultiIndex::z(3, 2).sym_factor(), BigUint::from(72u32));
        assert_eq!(mi(&[(2, 1), (4, 2)]).sym_factor(), BigUint::from(2304u32));
        assert_eq!(MultiIndex::z(1, 1).sym_factor(), BigUint::one());
        let z32 = MultiIndex::z(3, 2);
        assert_eq!(MIForest::power(&z32, 2).sym_factor(), BigUint::from(10368u32));
        assert_eq!(MIForest::unit().sym_factor(), BigUint::one());
        let f = MIForest::new(alloc::vec![z32, MultiIndex::z(4, 1)]);
        assert_eq!(f.sym_factor(), BigUint::from(1728u32));
    }

    #[test]
    fn hat_symmetry_factors() {
        assert_eq!(MultiIndex::z(4, 2).hat_sym_factor(), BigUint::from(2u32));
        assert_eq!(mi(&[(2, 1), (4, 2)]).hat_sym_factor(), BigUint::from(2u32));
        assert_eq!(MultiIndex::z(4, 4).hat_sym_factor(), BigUint::from(24u32));
    }

    #[test]
    fn upsilon_values() {
        let c = phi4_couplings();
        let a = SymbolicValue::coupling(4);
        assert_eq!(upsilon(&c, &MultiIndex::z(4, 2)), a.pow(2));
        assert_eq!(upsilon(&c, &MultiIndex::z(4, 3)), a.pow(3).neg_ref());
        assert!(upsilon(&c, &mi(&[(2, 1), (4, 2)])).is_zero());
    }

    #[test]
    fn degrees() {
        let p = DegreeParams::phi4_3();
        assert_eq!(MultiIndex::z(3, 2).degree(&p), int(0));
        assert_eq!(MultiIndex::z(4, 2).degree(&p), int(-1));
        assert_eq!(MultiIndex::z(4, 4).degree(&p), int(1));
        let q = DegreeParams::new(ratio(1, 2), 1).unwrap();
        assert_eq!(MultiIndex::z(1, 2).degree(&q), ratio(3, 2));
        assert!(DegreeParams::new(int(1), 3).is_err());
        assert!(DegreeParams::new(int(0), 0).is_err());
    }

    #[test]
    fn inner_products() {
        let z4 = MIForest::single(MultiIndex::z(4, 1));
        let z32 = MIForest::single(MultiIndex::z(3, 2));
        assert_eq!(inner_product(&z4, &z4), int(24));
        assert_eq!(inner_product(&z32, &z32), int(72));
        assert_eq!(inner_product(&z32, &z4), int(0));
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(MultiIndex::new([(3, 0)]), Err(Error::EmptyMultiIndex));
        assert!(Rule::new([]).is_err());
    }

    #[test]
    fn display_and_forest_order() {
        assert_eq!(mi(&[(4, 2), (2, 1)]).to_string(), "z2 z4^2");
        let f = MIForest::new(alloc::vec![MultiIndex::z(4, 1), MultiIndex::z(3, 2)]);
        let g = MIForest::new(alloc::vec![MultiIndex::z(3, 2), MultiIndex::z(4, 1)]);
        assert_eq!(f, g);
        assert_eq!(MIForest::unit().to_string(), "1");
    }

    #[test]
    fn enumeration_respects_budget() {
        let all = enumerate_multi_indices(&[2, 4], 8);
        assert!(all.contains(&MultiIndex::z(4, 2)));
        assert!(all.contains(&mi(&[(2, 2), (4, 1)])));
        assert!(all.iter().all(|m| m.half_edges() <= 8));
        assert_eq!(all.len(), 8);
    }
}
