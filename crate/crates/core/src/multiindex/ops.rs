//! The derivation D, partial derivatives and the insertion products.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::lincomb::{int, LinComb, Scalar};

use super::{admits, is_populatable, DegreeParams, MIForest, MultiIndex, Rule};

/// D = Σ z_{k+1} ∂_{z_k} on a single monomial.
fn d_once(m: &MultiIndex) -> LinComb<MultiIndex> {
    let mut out = LinComb::zero();
    for (k, n) in m.entries() {
        let mut t = m.clone();
        t.remove_vertex(k);
        t.add_vertex(k + 1, 1);
        out.add_term(t, int(n));
    }
    out
}

/// D applied `times` times, linearly.
pub fn apply_d(p: &LinComb<MultiIndex>, times: u32) -> LinComb<MultiIndex> {
    let mut cur = p.clone();
    for _ in 0..times {
        cur = cur.apply_linear(d_once);
    }
    cur
}

/// D^k z^β for a single monomial.
pub fn d_power(m: &MultiIndex, k: u32) -> LinComb<MultiIndex> {
    apply_d(&LinComb::basis(m.clone()), k)
}

/// ∂_{z_k} z^β = β(k) z^{β - e_k}. The result may be the empty monomial.
pub fn partial(k: u32, m: &MultiIndex) -> LinComb<MultiIndex> {
    let n = m.get(k);
    if n == 0 {
        return LinComb::zero();
    }
    let mut t = m.clone();
    t.remove_vertex(k);
    LinComb::term(t, int(n))
}

/// Polynomial product of two combinations of monomials.
pub fn poly_mul(a: &LinComb<MultiIndex>, b: &LinComb<MultiIndex>) -> LinComb<MultiIndex> {
    let mut out = LinComb::zero();
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            out.add_term(x.mul(y), cx * cy);
        }
    }
    out
}

/// z^β ▶ z^α = Σ_k (D^k z^β)(∂_{z_k} z^α), projected to the rule.
pub fn insert(b: &MultiIndex, a: &MultiIndex, rule: Option<&Rule>) -> LinComb<MultiIndex> {
    simultaneous_insert(&MIForest::single(b.clone()), a, rule)
}

/// Memoised D^k of forest components.
pub(crate) struct DCache {
    table: BTreeMap<(MultiIndex, u32), LinComb<MultiIndex>>,
}

impl DCache {
    pub(crate) fn new() -> Self {
        DCache { table: BTreeMap::new() }
    }

    pub(crate) fn get(&mut self, m: &MultiIndex, k: u32) -> &LinComb<MultiIndex> {
        self.table
            .entry((m.clone(), k))
            .or_insert_with(|| d_power(m, k))
    }
}

/// Every ordered tuple in `choices^n`.
pub(crate) fn tuples(choices: &[u32], n: usize) -> Vec<Vec<u32>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for t in &out {
            for &c in choices {
                let mut u = t.clone();
                u.push(c);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// (∏ ∂_{z_{k_i}}) z^α as a single term, if nonzero.
pub(crate) fn multi_partial(a: &MultiIndex, ks: &[u32]) -> Option<(MultiIndex, Scalar)> {
    let mut t = a.clone();
    let mut c = int(1);
    for &k in ks {
        let n = t.get(k);
        if n == 0 {
            return None;
        }
        c *= int(n);
        t.remove_vertex(k);
    }
    Some((t, c))
}

fn star_unprojected(f: &MIForest, a: &MultiIndex, cache: &mut DCache) -> LinComb<MultiIndex> {
    let support: Vec<u32> = a.support().collect();
    let mut out = LinComb::zero();
    for ks in tuples(&support, f.len()) {
        let Some((trunk, c)) = multi_partial(a, &ks) else {
            continue;
        };
        let mut acc = LinComb::term(trunk, c);
        for (part, &k) in f.parts().iter().zip(&ks) {
            acc = poly_mul(&acc, cache.get(part, k));
        }
        out.add_assign(&acc);
    }
    out
}

/// Simultaneous insertion of a nonempty forest into z^α.
///
/// With a rule, the trunk must obey it and the result is projected to
/// monomials supported in the rule.
pub fn simultaneous_insert(f: &MIForest, a: &MultiIndex, rule: Option<&Rule>) -> LinComb<MultiIndex> {
    if f.is_unit() || !admits(rule, a) {
        return LinComb::zero();
    }
    star_unprojected(f, a, &mut DCache::new()).filter(|m| admits(rule, m))
}

/// Degree-restricted simultaneous insertion: the forest must be divergent
/// and populatable, the trunk populatable, and only populatable results
/// are kept. This is the exact dual of the restricted coproduct.
pub fn simultaneous_insert_restricted(
    f: &MIForest,
    a: &MultiIndex,
    p: &DegreeParams,
    rule: Option<&Rule>,
) -> LinComb<MultiIndex> {
    let forest_ok = f.parts().iter().all(|b| b.is_divergent(p) && is_populatable(b, 0));
    if !forest_ok || !is_populatable(a, 0) {
        return LinComb::zero();
    }
    simultaneous_insert(f, a, rule).filter(|m| is_populatable(m, 0))
}

/// Simultaneous insertion into a forest trunk via the Leibniz rule: each
/// inserted component goes into the trunk component whose vertex it
/// replaces.
pub fn simultaneous_insert_into_forest(
    f: &MIForest,
    trunk: &MIForest,
    rule: Option<&Rule>,
) -> LinComb<MIForest> {
    let n = f.len();
    let m = trunk.len();
    if n == 0 || m == 0 {
        return LinComb::zero();
    }
    let targets: Vec<u32> = (0..m as u32).collect();
    let mut out = LinComb::zero();
    for assign in tuples(&targets, n) {
        let mut acc: LinComb<MIForest> = LinComb::basis(MIForest::unit());
        for (j, alpha) in trunk.parts().iter().enumerate() {
            let sub: Vec<MultiIndex> = f
                .parts()
                .iter()
                .zip(&assign)
                .filter(|(_, &t)| t as usize == j)
                .map(|(b, _)| b.clone())
                .collect();
            let piece: LinComb<MIForest> = if sub.is_empty() {
                if admits(rule, alpha) {
                    LinComb::basis(MIForest::single(alpha.clone()))
                } else {
                    LinComb::zero()
                }
            } else {
                simultaneous_insert(&MIForest::new(sub), alpha, rule).map_basis(|b| MIForest::single(b.clone()))
            };
            let mut next = LinComb::zero();
            for (x, cx) in acc.iter() {
                for (y, cy) in piece.iter() {
                    next.add_term(x.product(y), cx * cy);
                }
            }
            acc = next;
        }
        out.add_assign(&acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;
    use num_bigint::BigInt;

    fn mi(p: &[(u32, u32)]) -> MultiIndex {
        MultiIndex::new(p.iter().copied()).unwrap()
    }

    #[test]
    fn derivation_examples() {
        let d1 = apply_d(&LinComb::basis(MultiIndex::z(1, 1)), 1);
        assert_eq!(d1, LinComb::basis(MultiIndex::z(2, 1)));
        let d = apply_d(&LinComb::basis(MultiIndex::z(3, 2)), 1);
        assert_eq!(d, LinComb::term(mi(&[(3, 1), (4, 1)]), int(2)));
        let d2 = apply_d(&LinComb::basis(MultiIndex::z(3, 2)), 2);
        let want: LinComb<MultiIndex> =
            [(MultiIndex::z(4, 2), int(2)), (mi(&[(3, 1), (5, 1)]), int(2))].into_iter().collect();
        assert_eq!(d2, want);
    }

    #[test]
    fn partial_examples() {
        assert_eq!(partial(4, &MultiIndex::z(4, 2)), LinComb::term(MultiIndex::z(4, 1), int(2)));
        assert!(partial(2, &MultiIndex::z(4, 2)).is_zero());
        assert_eq!(partial(2, &mi(&[(2, 1), (4, 2)])), LinComb::basis(MultiIndex::z(4, 2)));
    }

    // D^k (z_a z_b) = Σ_j C(k,j) z_{a+j} z_{b+k-j}, an independent closed form.
    #[test]
    fn insert_into_single_vertex_is_d_power() {
        let got = insert(&MultiIndex::z(3, 2), &MultiIndex::z(4, 1), None);
        let mut want = LinComb::zero();
        for j in 0..=4u32 {
            let c: BigInt = binomial(4, j as u64).into();
            want.add_term(mi(&[(3 + j, 1), (7 - j, 1)]), Scalar::from_integer(c));
        }
        assert_eq!(got, want);
        assert_eq!(got.coeff(&mi(&[(4, 1), (6, 1)])), int(8));
        assert_eq!(got.coeff(&MultiIndex::z(5, 2)), int(6));
    }

    #[test]
    fn rule_projection_on_insert() {
        // k = 2 branch: D^2 z_3^2 z_4; only z_4^2 z_4 survives the rule.
        // k = 4 branch: D^4 z_3^2 z_2; no term has arities in {2, 4}.
        let r = Rule::phi4();
        let got = insert(&MultiIndex::z(3, 2), &mi(&[(2, 1), (4, 1)]), Some(&r));
        assert_eq!(got, LinComb::term(MultiIndex::z(4, 3), int(2)));
    }

    #[test]
    fn triple_edge_into_double_edge_counts() {
        let r = Rule::phi4();
        let got = insert(&MultiIndex::z(3, 2), &MultiIndex::z(2, 2), Some(&r));
        assert_eq!(got, LinComb::term(mi(&[(2, 1), (4, 2)]), int(4)));
    }

    #[test]
    fn forest_insertion_matches_adjoint_value() {
        let r = Rule::phi4();
        let f = MIForest::power(&MultiIndex::z(3, 2), 2);
        let got = simultaneous_insert(&f, &MultiIndex::z(2, 2), Some(&r));
        assert_eq!(got, LinComb::term(MultiIndex::z(4, 4), int(8)));
    }

    #[test]
    fn singleton_forest_reduces_to_insert() {
        let b = mi(&[(1, 1), (3, 1)]);
        let a = mi(&[(1, 2), (2, 1)]);
        assert_eq!(simultaneous_insert(&MIForest::single(b.clone()), &a, None), insert(&b, &a, None));
    }

    #[test]
    fn no_surviving_branch_gives_zero() {
        let f = MIForest::power(&MultiIndex::z(3, 2), 3);
        assert!(simultaneous_insert(&f, &MultiIndex::z(2, 2), None).is_zero());
    }

    #[test]
    fn forest_trunk_single_component_agrees() {
        let f = MIForest::single(MultiIndex::z(3, 2));
        let a = MultiIndex::z(2, 2);
        let lhs = simultaneous_insert_into_forest(&f, &MIForest::single(a.clone()), None);
        let rhs = simultaneous_insert(&f, &a, None).map_basis(|m| MIForest::single(m.clone()));
        assert_eq!(lhs, rhs);
    }
}
