//! Twisted antipodes, BPHZ maps and the group of characters, on both the
//! multi-index and the diagram side.
//!
//! Both sides share one engine parameterised by a [`Coalgebra`]: a basis
//! with a reduced coproduct and a divergence test. Forests are kept as
//! sorted vectors inside the engine and converted at the public boundary.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::bridge::lift_p;
use crate::error::Error;
use crate::feynman::catalog::connected_diagrams_up_to;
use crate::feynman::{coproduct_reduced_f, CanonDiagram, DiagForest, Diagram};
use crate::lincomb::{int, Coefficient, LinComb, Scalar};
use crate::multiindex::{coproduct_reduced, enumerate_multi_indices, is_populatable, DegreeParams, MIForest, MultiIndex, Rule};
use crate::symbolic::SymbolicValue;

/// A basis element characters can be evaluated on, graded by half-edges.
pub trait CharKey: Ord + Clone + fmt::Display {
    fn weight(&self) -> u32;
}

impl CharKey for MultiIndex {
    fn weight(&self) -> u32 {
        self.half_edges()
    }
}

impl CharKey for CanonDiagram {
    fn weight(&self) -> u32 {
        2 * self.diagram().edge_count()
    }
}

/// A basis with a reduced coproduct into (forest, trunk) pairs.
pub trait Coalgebra {
    type Key: CharKey;
    fn reduced(&self, k: &Self::Key) -> Vec<(Vec<Self::Key>, Self::Key, Scalar)>;
    /// Membership in the divergent sector.
    fn in_minus(&self, k: &Self::Key) -> bool;
}

/// Multi-indices with the degree-restricted coproduct.
#[derive(Clone, Debug)]
pub struct MultiIndexCoalgebra {
    pub p: DegreeParams,
    pub rule: Option<Rule>,
}

impl Coalgebra for MultiIndexCoalgebra {
    type Key = MultiIndex;

    fn reduced(&self, k: &MultiIndex) -> Vec<(Vec<MultiIndex>, MultiIndex, Scalar)> {
        coproduct_reduced(k, &self.p, self.rule.as_ref())
            .iter()
            .map(|((f, a), c)| (f.parts().to_vec(), a.clone(), c.clone()))
            .collect()
    }

    fn in_minus(&self, k: &MultiIndex) -> bool {
        k.is_divergent(&self.p) && is_populatable(k, 0)
    }
}

/// Connected diagrams with extraction-contraction.
#[derive(Clone, Debug)]
pub struct DiagramCoalgebra {
    pub p: DegreeParams,
    pub rule: Option<Rule>,
}

impl Coalgebra for DiagramCoalgebra {
    type Key = CanonDiagram;

    fn reduced(&self, k: &CanonDiagram) -> Vec<(Vec<CanonDiagram>, CanonDiagram, Scalar)> {
        coproduct_reduced_f(k.diagram(), &self.p, self.rule.as_ref())
            .iter()
            .map(|((f, q), c)| (f.parts().to_vec(), q.clone(), c.clone()))
            .collect()
    }

    fn in_minus(&self, k: &CanonDiagram) -> bool {
        k.is_divergent(&self.p)
    }
}

/// A multiplicative functional, stored by its values on a finite domain.
///
/// Keys heavier than the truncation are reported as such rather than
/// silently read as zero.
#[derive(Clone, PartialEq, Debug)]
pub struct Character<K: Ord> {
    values: BTreeMap<K, SymbolicValue>,
    max_weight: u32,
}

impl<K: CharKey> Character<K> {
    pub fn from_fn<I, F>(domain: I, max_weight: u32, mut f: F) -> Self
    where
        I: IntoIterator<Item = K>,
        F: FnMut(&K) -> SymbolicValue,
    {
        let values = domain.into_iter().map(|k| {
            let v = f(&k);
            (k, v)
        });
        Character { values: values.collect(), max_weight }
    }

    /// ε: zero on every nonempty forest.
    pub fn counit<I: IntoIterator<Item = K>>(domain: I, max_weight: u32) -> Self {
        Self::from_fn(domain, max_weight, |_| SymbolicValue::zero())
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn values(&self) -> &BTreeMap<K, SymbolicValue> {
        &self.values
    }

    pub fn eval(&self, k: &K) -> Result<SymbolicValue, Error> {
        if let Some(v) = self.values.get(k) {
            return Ok(v.clone());
        }
        if k.weight() > self.max_weight {
            Err(Error::BeyondTruncation(k.to_string()))
        } else {
            Err(Error::OutsideDomain(k.to_string()))
        }
    }

    pub fn eval_forest(&self, f: &[K]) -> Result<SymbolicValue, Error> {
        let mut acc = SymbolicValue::one();
        for k in f {
            acc = acc.mul(&self.eval(k)?);
        }
        Ok(acc)
    }

    /// Linear extension to combinations of forests.
    pub fn eval_lincomb(&self, x: &LinComb<Vec<K>>) -> Result<SymbolicValue, Error> {
        let mut acc = SymbolicValue::zero();
        for (f, c) in x.iter() {
            acc = acc.add(&self.eval_forest(f)?.scale(c));
        }
        Ok(acc)
    }
}

fn join<K: Ord + Clone>(a: &[K], b: &[K]) -> Vec<K> {
    let mut v: Vec<K> = a.iter().chain(b).cloned().collect();
    v.sort();
    v
}

fn forest_mul<K: Ord + Clone, C: Coefficient>(a: &LinComb<Vec<K>, C>, b: &LinComb<Vec<K>, C>) -> LinComb<Vec<K>, C> {
    let mut out = LinComb::zero();
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            out.add_term(join(x, y), cx.mul_ref(cy));
        }
    }
    out
}

type Reduced<K> = Vec<(Vec<K>, K, Scalar)>;

/// Memoised antipodes and character operations over one coalgebra.
pub struct Renormalizer<A: Coalgebra> {
    alg: A,
    coproducts: BTreeMap<A::Key, Reduced<A::Key>>,
    recursion: BTreeMap<A::Key, LinComb<Vec<A::Key>>>,
    hat: BTreeMap<A::Key, LinComb<Vec<A::Key>>>,
}

impl<A: Coalgebra> Renormalizer<A> {
    pub fn new(alg: A) -> Self {
        Renormalizer { alg, coproducts: BTreeMap::new(), recursion: BTreeMap::new(), hat: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &A {
        &self.alg
    }

    pub fn in_minus(&self, k: &A::Key) -> bool {
        self.alg.in_minus(k)
    }

    /// Reduced coproduct, memoised.
    pub fn reduced(&mut self, k: &A::Key) -> Reduced<A::Key> {
        if let Some(r) = self.coproducts.get(k) {
            return r.clone();
        }
        let r = self.alg.reduced(k);
        self.coproducts.insert(k.clone(), r.clone());
        r
    }

    /// -k - μ(𝒜 ⊗ id)Δ k, applied whether or not k is divergent.
    pub fn antipode_ungated(&mut self, k: &A::Key) -> LinComb<Vec<A::Key>> {
        if let Some(r) = self.recursion.get(k) {
            return r.clone();
        }
        let mut out = LinComb::term(alloc::vec![k.clone()], int(-1));
        for (f, a, c) in self.reduced(k) {
            let left = self.antipode_forest(&f);
            out.add_scaled(&forest_mul(&left, &LinComb::basis(alloc::vec![a])), &-c);
        }
        self.recursion.insert(k.clone(), out.clone());
        out
    }

    /// Twisted antipode: the recursion on the divergent sector, zero elsewhere.
    pub fn antipode(&mut self, k: &A::Key) -> LinComb<Vec<A::Key>> {
        if self.alg.in_minus(k) {
            self.antipode_ungated(k)
        } else {
            LinComb::zero()
        }
    }

    pub fn antipode_forest(&mut self, f: &[A::Key]) -> LinComb<Vec<A::Key>> {
        let mut acc = LinComb::basis(Vec::new());
        for k in f {
            let a = self.antipode(k);
            acc = forest_mul(&acc, &a);
        }
        acc
    }

    /// Antipode of the Hopf algebra on the divergent sector, where trunks
    /// outside it are dropped.
    pub fn hat_antipode(&mut self, k: &A::Key) -> Result<LinComb<Vec<A::Key>>, Error> {
        if !self.alg.in_minus(k) {
            return Err(Error::NotDivergent(k.to_string()));
        }
        Ok(self.hat_rec(k))
    }

    fn hat_rec(&mut self, k: &A::Key) -> LinComb<Vec<A::Key>> {
        if let Some(r) = self.hat.get(k) {
            return r.clone();
        }
        let mut out = LinComb::term(alloc::vec![k.clone()], int(-1));
        for (f, a, c) in self.reduced(k) {
            if !self.alg.in_minus(&a) {
                continue;
            }
            let mut left = LinComb::basis(Vec::new());
            for part in &f {
                let h = self.hat_rec(part);
                left = forest_mul(&left, &h);
            }
            out.add_scaled(&forest_mul(&left, &LinComb::basis(alloc::vec![a])), &-c);
        }
        self.hat.insert(k.clone(), out.clone());
        out
    }

    /// μ(𝒜 ⊗ id)Δ⁻ k, which vanishes on the divergent sector.
    pub fn twisted_identity(&mut self, k: &A::Key) -> LinComb<Vec<A::Key>> {
        let mut out = LinComb::basis(alloc::vec![k.clone()]);
        out.add_assign(&self.antipode(k));
        for (f, a, c) in self.reduced(k) {
            let left = self.antipode_forest(&f);
            out.add_scaled(&forest_mul(&left, &LinComb::basis(alloc::vec![a])), &c);
        }
        out
    }

    /// Every basis element a character must cover to evaluate M̂ k.
    pub fn reachable(&mut self, k: &A::Key) -> BTreeSet<A::Key> {
        let mut out = BTreeSet::new();
        if self.alg.in_minus(k) {
            for (f, _) in self.antipode(k).iter() {
                out.extend(f.iter().cloned());
            }
        }
        for (forest, _, _) in self.reduced(k) {
            for (f, _) in self.antipode_forest(&forest).iter() {
                out.extend(f.iter().cloned());
            }
        }
        out
    }

    /// M_f k = (f ⊗ id)Δ⁻ k for a character supported on the divergent
    /// sector.
    pub fn apply_character(&mut self, f: &Character<A::Key>, k: &A::Key) -> Result<LinComb<Vec<A::Key>, SymbolicValue>, Error> {
        let mut out = LinComb::basis(alloc::vec![k.clone()]);
        if self.alg.in_minus(k) {
            out.add_term(Vec::new(), f.eval(k)?);
        } else {
            log::debug!("dropping the primitive term of {k}: outside the divergent sector");
        }
        for (forest, a, c) in self.reduced(k) {
            out.add_term(alloc::vec![a], f.eval_forest(&forest)?.scale(&c));
        }
        Ok(out)
    }

    /// M_f on a forest, multiplicatively.
    pub fn apply_character_forest(&mut self, f: &Character<A::Key>, forest: &[A::Key]) -> Result<LinComb<Vec<A::Key>, SymbolicValue>, Error> {
        let mut acc = LinComb::basis(Vec::new());
        for k in forest {
            let m = self.apply_character(f, k)?;
            acc = forest_mul(&acc, &m);
        }
        Ok(acc)
    }

    /// M_f extended linearly over symbolic coefficients.
    pub fn apply_character_lincomb(
        &mut self,
        f: &Character<A::Key>,
        x: &LinComb<Vec<A::Key>, SymbolicValue>,
    ) -> Result<LinComb<Vec<A::Key>, SymbolicValue>, Error> {
        let mut out = LinComb::zero();
        for (forest, c) in x.iter() {
            out.add_scaled(&self.apply_character_forest(f, forest)?, c);
        }
        Ok(out)
    }

    /// M̂ k = (chr∘𝒜 ⊗ id)Δ⁻ k. `chr` must cover every forest 𝒜 produces,
    /// trunks included.
    pub fn bphz(&mut self, k: &A::Key, chr: &Character<A::Key>) -> Result<LinComb<Vec<A::Key>, SymbolicValue>, Error> {
        let mut out = LinComb::basis(alloc::vec![k.clone()]);
        if self.alg.in_minus(k) {
            let a = self.antipode(k);
            out.add_term(Vec::new(), chr.eval_lincomb(&a)?);
        }
        for (forest, a, c) in self.reduced(k) {
            let left = self.antipode_forest(&forest);
            out.add_term(alloc::vec![a], chr.eval_lincomb(&left)?.scale(&c));
        }
        Ok(out)
    }

    /// ℓ = chr∘𝒜 on the divergent keys of `chr`'s domain.
    pub fn bphz_character(&mut self, chr: &Character<A::Key>) -> Result<Character<A::Key>, Error> {
        let mut values = BTreeMap::new();
        for k in chr.values().keys() {
            if self.alg.in_minus(k) {
                let a = self.antipode(k);
                values.insert(k.clone(), chr.eval_lincomb(&a)?);
            }
        }
        Ok(Character { values, max_weight: chr.max_weight })
    }

    /// (f ★ g)(k) = (f ⊗ g)Δ̂⁻ k on the divergent keys both characters share.
    pub fn convolve(&mut self, f: &Character<A::Key>, g: &Character<A::Key>) -> Result<Character<A::Key>, Error> {
        let mut values = BTreeMap::new();
        for k in f.values().keys() {
            if !self.alg.in_minus(k) || !g.values().contains_key(k) {
                continue;
            }
            let mut v = f.eval(k)?.add(&g.eval(k)?);
            for (forest, a, c) in self.reduced(k) {
                if self.alg.in_minus(&a) {
                    v = v.add(&f.eval_forest(&forest)?.mul(&g.eval(&a)?).scale(&c));
                }
            }
            values.insert(k.clone(), v);
        }
        Ok(Character { values, max_weight: f.max_weight.min(g.max_weight) })
    }

    /// f⁻¹ = f∘Â.
    pub fn inverse(&mut self, f: &Character<A::Key>) -> Result<Character<A::Key>, Error> {
        let mut values = BTreeMap::new();
        for k in f.values().keys() {
            if self.alg.in_minus(k) {
                let h = self.hat_rec(k);
                values.insert(k.clone(), f.eval_lincomb(&h)?);
            }
        }
        Ok(Character { values, max_weight: f.max_weight })
    }
}

/// Engine for the multi-index side.
pub type RenormM = Renormalizer<MultiIndexCoalgebra>;
/// Engine for the diagram side.
pub type RenormF = Renormalizer<DiagramCoalgebra>;

impl RenormM {
    pub fn multi_index(p: &DegreeParams, rule: Option<&Rule>) -> Self {
        Renormalizer::new(MultiIndexCoalgebra { p: p.clone(), rule: rule.cloned() })
    }
}

impl RenormF {
    pub fn diagram(p: &DegreeParams, rule: Option<&Rule>) -> Self {
        Renormalizer::new(DiagramCoalgebra { p: p.clone(), rule: rule.cloned() })
    }
}

/// Every multi-index with at most `max_half_edges` half-edges.
pub fn multi_index_domain(max_half_edges: u32) -> Vec<MultiIndex> {
    let arities: Vec<u32> = (1..=max_half_edges).collect();
    enumerate_multi_indices(&arities, max_half_edges)
}

/// Divergent populatable multi-indices up to the truncation.
pub fn divergent_multi_indices(p: &DegreeParams, max_half_edges: u32) -> Vec<MultiIndex> {
    multi_index_domain(max_half_edges)
        .into_iter()
        .filter(|m| m.is_divergent(p) && is_populatable(m, 0))
        .collect()
}

/// Connected diagrams with at most `max_half_edges / 2` edges.
pub fn diagram_domain(max_half_edges: u32) -> Vec<CanonDiagram> {
    connected_diagrams_up_to(max_half_edges / 2)
}

pub fn divergent_diagrams(p: &DegreeParams, max_half_edges: u32) -> Vec<CanonDiagram> {
    diagram_domain(max_half_edges).into_iter().filter(|c| c.is_divergent(p)).collect()
}

/// Π_M as a formal value: a generator on populatable multi-indices, zero
/// on the rest (their lift is empty).
pub fn formal_valuation_m(m: &MultiIndex) -> SymbolicValue {
    if is_populatable(m, 0) {
        SymbolicValue::pi_m(m)
    } else {
        SymbolicValue::zero()
    }
}

/// Π_M as a formal character on every multi-index up to the truncation.
pub fn valuation_character_m(max_half_edges: u32) -> Character<MultiIndex> {
    Character::from_fn(multi_index_domain(max_half_edges), max_half_edges, formal_valuation_m)
}

/// Π_M as a formal character on the given keys only.
pub fn valuation_character_m_on<I: IntoIterator<Item = MultiIndex>>(keys: I) -> Character<MultiIndex> {
    let keys: Vec<MultiIndex> = keys.into_iter().collect();
    let max = keys.iter().map(MultiIndex::half_edges).max().unwrap_or(0);
    Character::from_fn(keys, max, formal_valuation_m)
}

/// Π_F as a formal character.
pub fn valuation_character_f(max_half_edges: u32) -> Character<CanonDiagram> {
    Character::from_fn(diagram_domain(max_half_edges), max_half_edges, SymbolicValue::pi_f)
}

/// Move a diagram character to multi-indices through the lift:
/// f_M(z^β) = f_F(𝒫 z^β).
pub fn transport(f: &Character<CanonDiagram>, p: &DegreeParams) -> Result<Character<MultiIndex>, Error> {
    let mut values = BTreeMap::new();
    for m in divergent_multi_indices(p, f.max_weight()) {
        let mut v = SymbolicValue::zero();
        for (c, n) in lift_p(&m).iter() {
            v = v.add(&f.eval(c)?.scale(n));
        }
        values.insert(m, v);
    }
    Ok(Character { values, max_weight: f.max_weight() })
}

pub fn to_mi_forests<C: Coefficient>(x: &LinComb<Vec<MultiIndex>, C>) -> LinComb<MIForest, C> {
    x.map_basis(|v| MIForest::new(v.clone()))
}

pub fn to_diag_forests<C: Coefficient>(x: &LinComb<Vec<CanonDiagram>, C>) -> LinComb<DiagForest, C> {
    x.map_basis(|v| DiagForest::new(v.clone()))
}

/// 𝒜_M z^β.
pub fn antipode_m(m: &MultiIndex, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<MIForest> {
    to_mi_forests(&RenormM::multi_index(p, rule).antipode(m))
}

/// 𝒜_F Γ, zero outside the divergent sector.
pub fn antipode_f(g: &Diagram, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<DiagForest> {
    to_diag_forests(&RenormF::diagram(p, rule).antipode(&g.canonicalize()))
}

/// The recursion defining 𝒜_F, applied to Γ even when Γ itself is not
/// divergent.
pub fn antipode_f_recursion(g: &Diagram, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<DiagForest> {
    to_diag_forests(&RenormF::diagram(p, rule).antipode_ungated(&g.canonicalize()))
}

/// Â_M z^β for z^β in the divergent sector.
pub fn hat_antipode_m(m: &MultiIndex, p: &DegreeParams, rule: Option<&Rule>) -> Result<LinComb<MIForest>, Error> {
    RenormM::multi_index(p, rule).hat_antipode(m).map(|x| to_mi_forests(&x))
}

/// M̂_M z^β with the valuation character `chr`.
pub fn bphz_m(
    m: &MultiIndex,
    chr: &Character<MultiIndex>,
    p: &DegreeParams,
    rule: Option<&Rule>,
) -> Result<LinComb<MIForest, SymbolicValue>, Error> {
    RenormM::multi_index(p, rule).bphz(m, chr).map(|x| to_mi_forests(&x))
}

/// M̂_F Γ with the valuation character `chr`.
pub fn bphz_f(
    g: &Diagram,
    chr: &Character<CanonDiagram>,
    p: &DegreeParams,
    rule: Option<&Rule>,
) -> Result<LinComb<DiagForest, SymbolicValue>, Error> {
    RenormF::diagram(p, rule).bphz(&g.canonicalize(), chr).map(|x| to_diag_forests(&x))
}

/// f ★ g on multi-indices.
pub fn convolve_m(
    f: &Character<MultiIndex>,
    g: &Character<MultiIndex>,
    p: &DegreeParams,
    rule: Option<&Rule>,
) -> Result<Character<MultiIndex>, Error> {
    RenormM::multi_index(p, rule).convolve(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feynman::named;
    use alloc::format;

    fn phi4() -> (DegreeParams, Rule) {
        (DegreeParams::phi4_3(), Rule::phi4())
    }

    #[test]
    fn antipode_m_on_quartic_powers() {
        let (p, r) = phi4();
        for n in 2..=3 {
            let z = MultiIndex::z(4, n);
            assert_eq!(antipode_m(&z, &p, Some(&r)), LinComb::term(MIForest::single(z), int(-1)));
        }
        for n in 4..=6 {
            assert!(antipode_m(&MultiIndex::z(4, n), &p, Some(&r)).is_zero());
        }
    }

    #[test]
    fn antipode_f_examples() {
        let p = DegreeParams::phi4_3();
        let t = named::triple_edge().canonicalize();
        assert_eq!(antipode_f(&named::triple_edge(), &p, None), LinComb::term(DiagForest::single(t.clone()), int(-1)));
        let bridge = named::triple_edge_with_bridge();
        // Degree 1: outside the divergent sector.
        assert!(antipode_f(&bridge, &p, None).is_zero());
        let mut want = LinComb::term(DiagForest::single(bridge.canonicalize()), int(-1));
        want.add_term(DiagForest::new(alloc::vec![t, named::double_edge().canonicalize()]), int(1));
        assert_eq!(antipode_f_recursion(&bridge, &p, None), want);
    }

    #[test]
    fn twisted_identity_vanishes() {
        let (p, r) = phi4();
        let mut e = RenormM::multi_index(&p, Some(&r));
        for m in divergent_multi_indices(&p, 12) {
            assert!(e.twisted_identity(&m).is_zero(), "{m}");
        }
        let mut e = RenormF::diagram(&p, None);
        for c in divergent_diagrams(&p, 10) {
            assert!(e.twisted_identity(&c).is_zero(), "{c}");
        }
    }

    #[test]
    fn bphz_examples() {
        let (p, r) = phi4();
        let chr = valuation_character_m(12);
        let z42 = MultiIndex::z(4, 2);
        let got = bphz_m(&z42, &chr, &p, Some(&r)).unwrap();
        let mut want = LinComb::basis(MIForest::single(z42.clone()));
        want.add_term(MIForest::unit(), SymbolicValue::pi_m(&z42).neg());
        assert_eq!(got, want);
        let z4 = MultiIndex::z(4, 1);
        assert_eq!(bphz_m(&z4, &chr, &p, Some(&r)).unwrap(), LinComb::basis(MIForest::single(z4)));
        // Beyond the truncation.
        let small = valuation_character_m(4);
        assert!(matches!(bphz_m(&MultiIndex::z(4, 3), &small, &p, Some(&r)), Err(Error::BeyondTruncation(_))));
    }

    #[test]
    fn bphz_f_examples() {
        let p = DegreeParams::phi4_3();
        let chr = valuation_character_f(10);
        let t = named::triple_edge().canonicalize();
        let b = named::triple_edge_with_bridge().canonicalize();
        let got = bphz_f(b.diagram(), &chr, &p, None).unwrap();
        let mut want = LinComb::basis(DiagForest::single(b));
        want.add_term(DiagForest::single(named::double_edge().canonicalize()), SymbolicValue::pi_f(&t).neg());
        assert_eq!(got, want);
        let got = bphz_f(t.diagram(), &chr, &p, None).unwrap();
        let mut want = LinComb::basis(DiagForest::single(t.clone()));
        want.add_term(DiagForest::unit(), SymbolicValue::pi_f(&t).neg());
        assert_eq!(got, want);
    }

    #[test]
    fn hat_antipode_examples() {
        let (p, r) = phi4();
        let z42 = MultiIndex::z(4, 2);
        assert_eq!(hat_antipode_m(&z42, &p, Some(&r)).unwrap(), LinComb::term(MIForest::single(z42), int(-1)));
        let z32 = MultiIndex::z(3, 2);
        assert_eq!(hat_antipode_m(&z32, &p, Some(&r)).unwrap(), LinComb::term(MIForest::single(z32), int(-1)));
        assert!(matches!(hat_antipode_m(&MultiIndex::z(4, 5), &p, Some(&r)), Err(Error::NotDivergent(_))));
    }

    fn symbolic_character(p: &DegreeParams, max: u32, name: &str) -> Character<MultiIndex> {
        Character::from_fn(divergent_multi_indices(p, max), max, |m| SymbolicValue::symbol(&format!("{name}[{m}]")))
    }

    #[test]
    fn counit_and_inverse() {
        // Without a rule the divergent sector has nontrivial coproducts,
        // so the group law is exercised beyond primitives.
        let p = DegreeParams::new(int(-1), 1).unwrap();
        let mut e = RenormM::multi_index(&p, None);
        let f = symbolic_character(&p, 8, "f");
        let eps = Character::counit(divergent_multi_indices(&p, 8), 8);
        assert_eq!(e.convolve(&f, &eps).unwrap(), f);
        assert_eq!(e.convolve(&eps, &f).unwrap(), f);
        let inv = e.inverse(&f).unwrap();
        let id = e.convolve(&f, &inv).unwrap();
        assert!(id.values().values().all(SymbolicValue::is_zero));
        let id = e.convolve(&inv, &f).unwrap();
        assert!(id.values().values().all(SymbolicValue::is_zero));
    }

    #[test]
    fn composition_law() {
        let p = DegreeParams::new(int(-1), 1).unwrap();
        let mut e = RenormM::multi_index(&p, None);
        let f = symbolic_character(&p, 8, "f");
        let g = symbolic_character(&p, 8, "g");
        let fg = e.convolve(&f, &g).unwrap();
        let gf = e.convolve(&g, &f).unwrap();
        assert_ne!(fg, gf);
        for m in [MultiIndex::z(2, 3), MultiIndex::new([(1, 2), (2, 2)]).unwrap(), MultiIndex::z(2, 4)] {
            let inner = e.apply_character(&g, &m).unwrap();
            let lhs = e.apply_character_lincomb(&f, &inner).unwrap();
            // With ★ = (f ⊗ g)Δ̂⁻ the outer map's character comes second.
            assert_eq!(lhs, e.apply_character(&gf, &m).unwrap(), "{m}");
        }
    }

    #[test]
    fn transport_is_a_morphism() {
        let p = DegreeParams::phi4_3();
        let mut ef = RenormF::diagram(&p, None);
        let mut em = RenormM::multi_index(&p, None);
        let dom = divergent_diagrams(&p, 10);
        let f = Character::from_fn(dom.clone(), 10, |c| SymbolicValue::symbol(&format!("f{}", c.key_hex())));
        let g = Character::from_fn(dom, 10, |c| SymbolicValue::symbol(&format!("g{}", c.key_hex())));
        let lhs = transport(&ef.convolve(&f, &g).unwrap(), &p).unwrap();
        let rhs = em.convolve(&transport(&f, &p).unwrap(), &transport(&g, &p).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
