//! Polynomials in formal generators: valuations, couplings and named
//! character values.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::feynman::CanonDiagram;
use crate::lincomb::{Coefficient, LinComb, Scalar};
use crate::multiindex::MultiIndex;

/// A formal commuting generator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    /// Coupling constant attached to vertices of the given arity.
    Coupling(u32),
    /// Valuation of a multi-index.
    PiM(MultiIndex),
    /// Valuation of a connected diagram class.
    PiF(CanonDiagram),
    /// Value of a named character on a multi-index.
    CharM(String, MultiIndex),
    /// Value of a named character on a diagram class.
    CharF(String, CanonDiagram),
    /// Free-standing named symbol.
    Symbol(String),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Coupling(k) => write!(f, "alpha{k}"),
            Gen::PiM(m) => write!(f, "Pi[{m}]"),
            Gen::PiF(c) => write!(f, "Pi[{}]", c.diagram()),
            Gen::CharM(name, m) => write!(f, "{name}[{m}]"),
            Gen::CharF(name, c) => write!(f, "{name}[{}]", c.diagram()),
            Gen::Symbol(s) => f.write_str(s),
        }
    }
}

/// A monomial: generators with positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(BTreeMap<Gen, u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn gen(g: Gen) -> Self {
        let mut m = BTreeMap::new();
        m.insert(g, 1);
        Monomial(m)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Gen, u32)> {
        self.0.iter().map(|(g, e)| (g, *e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (g, e) in &other.0 {
            *out.entry(g.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// Total exponent of the coupling generators.
    pub fn coupling_order(&self) -> u32 {
        self.0
            .iter()
            .filter(|(g, _)| matches!(g, Gen::Coupling(_)))
            .map(|(_, e)| *e)
            .sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SymbolicValue(LinComb<Monomial>);

impl SymbolicValue {
    pub fn zero() -> Self {
        SymbolicValue(LinComb::zero())
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn constant(c: Scalar) -> Self {
        SymbolicValue(LinComb::term(Monomial::unit(), c))
    }

    pub fn gen(g: Gen) -> Self {
        SymbolicValue(LinComb::basis(Monomial::gen(g)))
    }

    pub fn coupling(k: u32) -> Self {
        Self::gen(Gen::Coupling(k))
    }

    pub fn pi_m(m: &MultiIndex) -> Self {
        Self::gen(Gen::PiM(m.clone()))
    }

    pub fn pi_f(c: &CanonDiagram) -> Self {
        Self::gen(Gen::PiF(c.clone()))
    }

    pub fn symbol(name: &str) -> Self {
        Self::gen(Gen::Symbol(name.into()))
    }

    pub fn terms(&self) -> &LinComb<Monomial> {
        &self.0
    }

    pub fn from_terms(t: LinComb<Monomial>) -> Self {
        SymbolicValue(t)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg_ref())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }

    pub fn neg(&self) -> Self {
        self.neg_ref()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        SymbolicValue(self.0.scale(s))
    }

    /// The constant value, if the polynomial has no generators.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.0.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.0.iter().next()?;
                m.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Replace generators by polynomials; `None` keeps the generator.
    pub fn substitute<F: FnMut(&Gen) -> Option<SymbolicValue>>(&self, mut f: F) -> Self {
        let mut cache: BTreeMap<Gen, SymbolicValue> = BTreeMap::new();
        let mut out = Self::zero();
        for (mono, c) in self.0.iter() {
            let mut term = Self::constant(c.clone());
            for (g, e) in mono.factors() {
                let v = cache
                    .entry(g.clone())
                    .or_insert_with(|| f(g).unwrap_or_else(|| Self::gen(g.clone())))
                    .clone();
                term = term.mul_ref(&v.pow(e));
            }
            out.add_assign_ref(&term);
        }
        out
    }

    /// Drop every monomial whose coupling order exceeds `max`.
    pub fn truncate_coupling_order(&self, max: u32) -> Self {
        SymbolicValue(self.0.filter(|m| m.coupling_order() <= max))
    }

    /// Evaluate with floating-point values for the generators.
    pub fn eval_f64<F: FnMut(&Gen) -> f64>(&self, mut f: F) -> f64 {
        let mut total = 0.0;
        for (mono, c) in self.0.iter() {
            let mut v = scalar_to_f64(c);
            for (g, e) in mono.factors() {
                let x = f(g);
                for _ in 0..e {
                    v *= x;
                }
            }
            total += v;
        }
        total
    }
}

/// Lossy conversion used only by numeric checks.
pub fn scalar_to_f64(s: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    s.to_f64().unwrap_or(f64::NAN)
}

impl Coefficient for SymbolicValue {
    fn zero_coeff() -> Self {
        Self::zero()
    }
    fn one_coeff() -> Self {
        Self::one()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.0.add_assign(&other.0);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = LinComb::zero();
        for (a, ca) in self.0.iter() {
            for (b, cb) in other.0.iter() {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        SymbolicValue(out)
    }
    fn neg_ref(&self) -> Self {
        SymbolicValue(-self.0.clone())
    }
    fn from_scalar(s: &Scalar) -> Self {
        Self::constant(s.clone())
    }
}

impl From<Scalar> for SymbolicValue {
    fn from(s: Scalar) -> Self {
        Self::constant(s)
    }
}

impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.0.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mono.is_unit() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::{int, ratio};

    #[test]
    fn ring_arithmetic() {
        let a = SymbolicValue::coupling(4);
        let sq = a.mul_ref(&a);
        assert_eq!(sq, a.pow(2));
        let expr = sq.scale(&ratio(1, 2)).sub(&SymbolicValue::constant(int(3)));
        assert_eq!(expr.to_string(), "-3 + 1/2*alpha4^2");
        assert!(expr.sub(&expr).is_zero());
    }

    #[test]
    fn substitution_expands_generators() {
        let a = SymbolicValue::coupling(4);
        let b = SymbolicValue::symbol("b");
        let e = a.pow(2).add(&a);
        let out = e.substitute(|g| (g == &Gen::Coupling(4)).then(|| b.scale(&int(2))));
        assert_eq!(out, b.pow(2).scale(&int(4)).add(&b.scale(&int(2))));
    }

    #[test]
    fn truncation_by_coupling_order() {
        let a = SymbolicValue::coupling(4);
        let e = a.pow(3).add(&a);
        assert_eq!(e.truncate_coupling_order(2), a);
    }
}
