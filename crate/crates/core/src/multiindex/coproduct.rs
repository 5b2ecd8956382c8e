//! The reduced extraction-contraction coproduct Δ_M.
//!
//! Left legs are forests of divergent, populatable multi-indices; right
//! legs are populatable trunks obeying the rule. Coefficients come from the
//! explicit E formula, summed over ordered decompositions
//! β = β̂_1 + ... + β̂_n + α̂ aligned with ordered arities k_1, ..., k_n.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::lincomb::{LinComb, Scalar};

use super::ops::{multi_partial, simultaneous_insert_restricted, tuples, DCache};
use super::{admits, enumerate_multi_indices, is_populatable, DegreeParams, MIForest, MultiIndex, Rule};

fn big(n: num_bigint::BigUint) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// S(β) / (S(F) S(α)).
fn normalisation(f: &MIForest, alpha: &MultiIndex, beta: &MultiIndex) -> Scalar {
    big(beta.sym_factor()) / (big(f.sym_factor()) * big(alpha.sym_factor()))
}

/// Number of ordered ways to write `rem` as Σ β̂_i with β̂_i a term of
/// D^{k_i} β_i, weighted by the product of coefficients.
fn decompositions(rem: &MultiIndex, parts: &[(&MultiIndex, u32)], cache: &mut DCache) -> Scalar {
    let Some((&(b, k), rest)) = parts.split_first() else {
        return if rem.is_empty() { Scalar::from_integer(1.into()) } else { Scalar::zero() };
    };
    let terms: Vec<(MultiIndex, Scalar)> = cache.get(b, k).iter().map(|(t, c)| (t.clone(), c.clone())).collect();
    let mut total = Scalar::zero();
    for (t, c) in terms {
        if let Some(r) = rem.checked_div(&t) {
            let sub = decompositions(&r, rest, cache);
            if !sub.is_zero() {
                total += c * sub;
            }
        }
    }
    total
}

fn e_with_cache(f: &MIForest, alpha: &MultiIndex, beta: &MultiIndex, cache: &mut DCache) -> Scalar {
    if f.is_unit() {
        return Scalar::zero();
    }
    let support: Vec<u32> = alpha.support().collect();
    let mut total = Scalar::zero();
    for ks in tuples(&support, f.len()) {
        let Some((alpha_hat, ca)) = multi_partial(alpha, &ks) else {
            continue;
        };
        let Some(rem) = beta.checked_div(&alpha_hat) else {
            continue;
        };
        let parts: Vec<(&MultiIndex, u32)> = f.parts().iter().zip(ks.iter().copied()).collect();
        let d = decompositions(&rem, &parts, cache);
        if !d.is_zero() {
            total += ca * d;
        }
    }
    if total.is_zero() {
        return total;
    }
    total * normalisation(f, alpha, beta)
}

/// The explicit E(F, α, β) coefficient.
pub fn e_coefficient(f: &MIForest, alpha: &MultiIndex, beta: &MultiIndex) -> Scalar {
    e_with_cache(f, alpha, beta, &mut DCache::new())
}

/// E(F, α, β) recovered from the insertion side: ⟨F ★ α, β⟩ / (S(F) S(α)).
pub fn e_coefficient_via_adjoint(f: &MIForest, alpha: &MultiIndex, beta: &MultiIndex) -> Scalar {
    if f.is_unit() {
        return Scalar::zero();
    }
    let star = super::ops::simultaneous_insert(f, alpha, None);
    star.coeff(beta) * normalisation(f, alpha, beta)
}

/// All sub-multisets of `m` with at least two vertices.
fn sub_multisets(m: &MultiIndex) -> Vec<MultiIndex> {
    let entries: Vec<(u32, u32)> = m.entries().collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(entries: &[(u32, u32)], cur: &mut Vec<(u32, u32)>, out: &mut Vec<MultiIndex>) {
        let Some((&(k, n), rest)) = entries.split_first() else {
            let s = MultiIndex::from_pairs_unchecked(cur.iter().copied());
            if s.norm() >= 2 {
                out.push(s);
            }
            return;
        };
        for c in 0..=n {
            cur.push((k, c));
            rec(rest, cur, out);
            cur.pop();
        }
    }
    rec(&entries, &mut cur, &mut out);
    out
}

/// Ways to lower the arities of the vertices of `hat`, returned as the
/// lowered multi-index together with the total amount removed.
fn preimages(hat: &MultiIndex) -> BTreeSet<(MultiIndex, u32)> {
    let mut out = BTreeSet::new();
    let entries: Vec<(u32, u32)> = hat.entries().collect();
    fn rec(entries: &[(u32, u32)], cur: &mut MultiIndex, removed: u32, out: &mut BTreeSet<(MultiIndex, u32)>) {
        let Some((&(a, n), rest)) = entries.split_first() else {
            out.insert((cur.clone(), removed));
            return;
        };
        // Multisets of n reductions, each in 0..=a, as nondecreasing lists.
        fn choose(
            a: u32,
            left: u32,
            min: u32,
            cur: &mut MultiIndex,
            removed: u32,
            rest: &[(u32, u32)],
            out: &mut BTreeSet<(MultiIndex, u32)>,
        ) {
            if left == 0 {
                rec(rest, cur, removed, out);
                return;
            }
            for r in min..=a {
                cur.add_vertex(a - r, 1);
                choose(a, left - 1, r, cur, removed + r, rest, out);
                cur.remove_vertex(a - r);
            }
        }
        choose(a, n, 0, cur, removed, rest, out);
    }
    rec(&entries, &mut MultiIndex::empty(), 0, &mut out);
    out
}

/// Every (F, α) that can carry a nonzero coefficient in Δ_M β.
fn candidates(beta: &MultiIndex, p: &DegreeParams, rule: Option<&Rule>) -> BTreeSet<(MIForest, MultiIndex)> {
    // (β̂, β_i, k_i) with β_i divergent and populatable.
    let mut items: Vec<(MultiIndex, MultiIndex, u32)> = Vec::new();
    for hat in sub_multisets(beta) {
        for (low, k) in preimages(&hat) {
            if k >= 1 && low.is_divergent(p) && is_populatable(&low, 0) {
                items.push((hat.clone(), low, k));
            }
        }
    }
    let mut out = BTreeSet::new();
    fn rec(
        items: &[(MultiIndex, MultiIndex, u32)],
        start: usize,
        rem: &MultiIndex,
        chosen: &mut Vec<usize>,
        rule: Option<&Rule>,
        out: &mut BTreeSet<(MIForest, MultiIndex)>,
    ) {
        if !chosen.is_empty() {
            let mut alpha = rem.clone();
            for &i in chosen.iter() {
                alpha.add_vertex(items[i].2, 1);
            }
            if admits(rule, &alpha) && is_populatable(&alpha, 0) {
                let f = MIForest::new(chosen.iter().map(|&i| items[i].1.clone()).collect());
                out.insert((f, alpha));
            }
        }
        for i in start..items.len() {
            if let Some(r) = rem.checked_div(&items[i].0) {
                chosen.push(i);
                rec(items, i, &r, chosen, rule, out);
                chosen.pop();
            }
        }
    }
    rec(&items, 0, beta, &mut Vec::new(), rule, &mut out);
    out
}

/// Reduced coproduct Δ_M β.
pub fn coproduct_reduced(m: &MultiIndex, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<(MIForest, MultiIndex)> {
    let mut cache = DCache::new();
    let mut out = LinComb::zero();
    if !is_populatable(m, 0) {
        return out;
    }
    for (f, alpha) in candidates(m, p, rule) {
        let e = e_with_cache(&f, &alpha, m, &mut cache);
        out.add_term((f, alpha), e);
    }
    out
}

/// Reduced coproduct reconstructed from the restricted insertion product
/// alone, by scanning every forest and trunk of the right size. Much
/// slower than [`coproduct_reduced`]; intended as a cross-check.
pub fn coproduct_reduced_via_adjoint(
    m: &MultiIndex,
    p: &DegreeParams,
    rule: Option<&Rule>,
) -> LinComb<(MIForest, MultiIndex)> {
    let mut out = LinComb::zero();
    if !is_populatable(m, 0) {
        return out;
    }
    let h = m.half_edges();
    let arities: Vec<u32> = (1..=h).collect();
    let pool = enumerate_multi_indices(&arities, h);
    let components: Vec<&MultiIndex> = pool
        .iter()
        .filter(|b| b.is_divergent(p) && is_populatable(b, 0) && b.max_arity() <= m.max_arity())
        .collect();
    let sm = Scalar::from_integer(BigInt::from(m.sym_factor()));
    for alpha in pool.iter().filter(|a| admits(rule, a) && is_populatable(a, 0)) {
        let target_h = h - alpha.half_edges();
        let mut forests = Vec::new();
        collect_forests(&components, 0, target_h, &mut Vec::new(), &mut forests);
        for f in forests {
            let n = f.len() as u32;
            let norms: u32 = f.parts().iter().map(MultiIndex::norm).sum();
            if norms + alpha.norm() != m.norm() + n {
                continue;
            }
            let star = simultaneous_insert_restricted(&f, alpha, p, rule);
            let c = star.coeff(m);
            if c.is_zero() {
                continue;
            }
            // ⟨F ★ α, β⟩ = S(β) coeff = S(F) S(α) E.
            let e = c * &sm / (big(f.sym_factor()) * big(alpha.sym_factor()));
            out.add_term((f, alpha.clone()), e);
        }
    }
    out
}

fn collect_forests(pool: &[&MultiIndex], start: usize, target: u32, cur: &mut Vec<MultiIndex>, out: &mut Vec<MIForest>) {
    if target == 0 {
        if !cur.is_empty() {
            out.push(MIForest::new(cur.clone()));
        }
        return;
    }
    for i in start..pool.len() {
        let h = pool[i].half_edges();
        if h <= target {
            cur.push(pool[i].clone());
            collect_forests(pool, i, target - h, cur, out);
            cur.pop();
        }
    }
}

/// Full coproduct Δ^-_M β = ∅ ⊗ β + β ⊗ ∅ + Δ_M β.
pub fn coproduct_full(m: &MultiIndex, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<(MIForest, MIForest)> {
    let mut out: LinComb<(MIForest, MIForest)> = coproduct_reduced(m, p, rule)
        .map_basis(|(f, a)| (f.clone(), MIForest::single(a.clone())));
    let one = Scalar::from_integer(1.into());
    out.add_term((MIForest::unit(), MIForest::single(m.clone())), one.clone());
    out.add_term((MIForest::single(m.clone()), MIForest::unit()), one);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::factorial;
    use crate::lincomb::int;

    fn mi(p: &[(u32, u32)]) -> MultiIndex {
        MultiIndex::new(p.iter().copied()).unwrap()
    }

    #[test]
    fn z4_fourth_power() {
        let p = DegreeParams::phi4_3();
        let r = Rule::phi4();
        let z32 = MultiIndex::z(3, 2);
        let got = coproduct_reduced(&MultiIndex::z(4, 4), &p, Some(&r));
        let mut want = LinComb::zero();
        want.add_term((MIForest::single(z32.clone()), mi(&[(2, 1), (4, 2)])), int(4 * 24));
        want.add_term((MIForest::power(&z32, 2), MultiIndex::z(2, 2)), int(32 * 24));
        assert_eq!(got, want);
    }

    #[test]
    fn z4_powers_closed_form() {
        let p = DegreeParams::phi4_3();
        let r = Rule::phi4();
        let z32 = MultiIndex::z(3, 2);
        for n in 4..=6u32 {
            let got = coproduct_reduced(&MultiIndex::z(4, n), &p, Some(&r));
            let mut want = LinComb::zero();
            for m in 1..=n / 2 {
                let c = int(8i64.pow(m)) * big(factorial(n as u64))
                    / (big(factorial(m as u64)) * big(factorial((n - 2 * m) as u64)));
                let trunk = MultiIndex::from_pairs_unchecked([(2, m), (4, n - 2 * m)]);
                want.add_term((MIForest::power(&z32, m as usize), trunk), c);
            }
            assert_eq!(got, want, "n = {n}");
        }
    }

    #[test]
    fn single_vertex_has_no_extraction() {
        let p = DegreeParams::phi4_3();
        assert!(coproduct_reduced(&MultiIndex::z(4, 1), &p, None).is_zero());
        let full = coproduct_full(&MultiIndex::z(4, 1), &p, None);
        assert_eq!(full.len(), 2);
    }

    #[test]
    fn explicit_and_adjoint_e_agree() {
        let z32 = MultiIndex::z(3, 2);
        let f = MIForest::power(&z32, 2);
        let a = MultiIndex::z(2, 2);
        let b = MultiIndex::z(4, 4);
        assert_eq!(e_coefficient(&f, &a, &b), int(768));
        assert_eq!(e_coefficient_via_adjoint(&f, &a, &b), int(768));
        // The E coefficient for an unpopulatable trunk is still well defined.
        let e = e_coefficient(&MIForest::single(z32), &mi(&[(2, 1)]), &MultiIndex::z(4, 2));
        assert_eq!(e, int(16));
    }

    #[test]
    fn adjoint_route_matches_explicit() {
        let p = DegreeParams::phi4_3();
        let r = Rule::phi4();
        for m in [MultiIndex::z(4, 3), mi(&[(2, 1), (4, 2)]), MultiIndex::z(3, 4)] {
            for rule in [None, Some(&r)] {
                assert_eq!(
                    coproduct_reduced(&m, &p, rule),
                    coproduct_reduced_via_adjoint(&m, &p, rule),
                    "{m}"
                );
            }
        }
    }

    #[test]
    fn preimage_enumeration() {
        let pre = preimages(&MultiIndex::z(4, 2));
        assert!(pre.contains(&(MultiIndex::z(3, 2), 2)));
        assert!(pre.contains(&(mi(&[(2, 1), (4, 1)]), 2)));
        // Multisets of two reductions from 0..=4.
        let k_two = pre.iter().filter(|(_, k)| *k == 2).count();
        assert_eq!(k_two, 2);
        assert_eq!(pre.len(), 15);
    }
}
