//! Free modules with exact coefficients.

use alloc::collections::btree_map::{self, BTreeMap};
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar. `num-rational` keeps it in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

/// Build a scalar from an integer.
pub fn int<T: Into<BigInt>>(n: T) -> Scalar {
    Scalar::from_integer(n.into())
}

/// Build a scalar `num/den`. Panics on a zero denominator.
pub fn ratio<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U) -> Scalar {
    Scalar::new(num.into(), den.into())
}

/// Ring operations needed from a coefficient type.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero_coeff() -> Self;
    fn one_coeff() -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_scalar(s: &Scalar) -> Self;
}

impl Coefficient for Scalar {
    fn zero_coeff() -> Self {
        Zero::zero()
    }
    fn one_coeff() -> Self {
        One::one()
    }
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
}

/// A finite linear combination of basis elements `B` with coefficients `C`.
///
/// Zero coefficients are never stored, and iteration follows the total
/// order on `B`, so two equal combinations compare and serialize equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinComb<B: Ord, C = Scalar> {
    terms: BTreeMap<B, C>,
}

impl<B: Ord, C> Default for LinComb<B, C> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone, C: Coefficient> LinComb<B, C> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The combination `1 * b`.
    pub fn basis(b: B) -> Self {
        Self::term(b, C::one_coeff())
    }

    pub fn term(b: B, c: C) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn add_term(&mut self, b: B, c: C) {
        if c.is_zero_coeff() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero_coeff() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &C) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c.mul_ref(scale));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c.clone());
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn coeff(&self, b: &B) -> C {
        self.terms.get(b).cloned().unwrap_or_else(C::zero_coeff)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, C> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, B, C> {
        self.terms.keys()
    }

    /// Linear extension of a basis map.
    pub fn apply_linear<D, F>(&self, mut f: F) -> LinComb<D, C>
    where
        D: Ord + Clone,
        F: FnMut(&B) -> LinComb<D, C>,
    {
        let mut out = LinComb::zero();
        for (b, c) in &self.terms {
            out.add_scaled(&f(b), c);
        }
        out
    }

    /// Relabel basis elements, merging collisions.
    pub fn map_basis<D: Ord + Clone, F: FnMut(&B) -> D>(&self, mut f: F) -> LinComb<D, C> {
        let mut out = LinComb::zero();
        for (b, c) in &self.terms {
            out.add_term(f(b), c.clone());
        }
        out
    }

    /// Keep only the terms whose basis element satisfies `keep`.
    pub fn filter<F: FnMut(&B) -> bool>(&self, mut keep: F) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(b, _)| keep(b))
            .map(|(b, c)| (b.clone(), c.clone()))
            .collect();
        LinComb { terms }
    }

    /// Bilinear tensor product.
    pub fn tensor<B2: Ord + Clone>(&self, other: &LinComb<B2, C>) -> LinComb<(B, B2), C> {
        let mut out = LinComb::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term((a.clone(), b.clone()), ca.mul_ref(cb));
            }
        }
        out
    }

    /// Embed a scalar combination into another coefficient ring.
    pub fn from_scalars(s: &LinComb<B, Scalar>) -> Self {
        let mut out = Self::zero();
        for (b, c) in s.iter() {
            out.add_term(b.clone(), C::from_scalar(c));
        }
        out
    }
}

impl<B: Ord + Clone, C: Coefficient> FromIterator<(B, C)> for LinComb<B, C> {
    fn from_iter<I: IntoIterator<Item = (B, C)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in iter {
            out.add_term(b, c);
        }
        out
    }
}

impl<B: Ord, C> IntoIterator for LinComb<B, C> {
    type Item = (B, C);
    type IntoIter = btree_map::IntoIter<B, C>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, B: Ord, C> IntoIterator for &'a LinComb<B, C> {
    type Item = (&'a B, &'a C);
    type IntoIter = btree_map::Iter<'a, B, C>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<B: Ord + Clone, C: Coefficient> Add for LinComb<B, C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_assign(&rhs);
        self
    }
}

impl<B: Ord + Clone, C: Coefficient> Sub for LinComb<B, C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, &C::one_coeff().neg_ref());
        self
    }
}

impl<B: Ord + Clone, C: Coefficient> Neg for LinComb<B, C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&C::one_coeff().neg_ref())
    }
}

impl<B: Ord + fmt::Debug, C: fmt::Debug> fmt::Debug for LinComb<B, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<B: Ord + fmt::Display, C: fmt::Display> fmt::Display for LinComb<B, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}) {b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lc(items: &[(&'static str, i64, i64)]) -> LinComb<&'static str> {
        items.iter().map(|&(k, n, d)| (k, ratio(n, d))).collect()
    }

    #[test]
    fn add_cancels_and_prunes() {
        assert!((lc(&[("x", 1, 1)]) + lc(&[("x", -1, 1)])).is_zero());
        assert_eq!(lc(&[("x", 2, 1)]) + lc(&[("y", 3, 1)]), lc(&[("x", 2, 1), ("y", 3, 1)]));
        assert_eq!(lc(&[("x", 1, 2)]) + lc(&[("x", 1, 3)]), lc(&[("x", 5, 6)]));
    }

    #[test]
    fn tensor_is_bilinear() {
        let t = lc(&[("x", 2, 1)]).tensor(&lc(&[("y", 3, 1)]));
        assert_eq!(t.coeff(&("x", "y")), int(6));
        assert_eq!(t.len(), 1);
        assert!(LinComb::<&str>::zero().tensor(&lc(&[("y", 3, 1)])).is_zero());
        let t = lc(&[("x", 1, 1), ("y", 1, 1)]).tensor(&lc(&[("z", 1, 1)]));
        assert_eq!(t.coeff(&("x", "z")), int(1));
        assert_eq!(t.coeff(&("y", "z")), int(1));
    }

    #[test]
    fn apply_linear_examples() {
        let a = lc(&[("x", 2, 1)]);
        assert_eq!(a.apply_linear(|b| LinComb::basis(*b)), a);
        let b = lc(&[("x", 3, 1)]).apply_linear(|_| lc(&[("y", 1, 1), ("z", 1, 1)]));
        assert_eq!(b, lc(&[("y", 3, 1), ("z", 3, 1)]));
        let c = lc(&[("x", 5, 1)]).apply_linear(|_| LinComb::<&str>::zero());
        assert!(c.is_zero());
    }

    #[test]
    fn zero_term_is_not_stored() {
        let mut a = LinComb::<u8>::zero();
        a.add_term(1, int(0));
        assert!(a.is_empty());
    }
}
