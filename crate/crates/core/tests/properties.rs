use std::collections::BTreeMap;

use bphz_core::bridge::{enumerate_pairings, lift_p, lift_p_by_matrices, orbit_stabilizer_check};
use bphz_core::feynman::{coproduct_reduced_f, simultaneous_insert_f_restricted};
use bphz_core::lincomb::int;
use bphz_core::multiindex::is_populatable;
use bphz_core::{DegreeParams, DiagForest, Diagram, LinComb, MultiIndex, Scalar};
use num_bigint::BigUint;
use proptest::prelude::*;

fn fact(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |a, i| a * i)
}

/// |Aut_V| times the product of edge multiplicity factorials, by trying
/// every vertex permutation.
fn brute_aut(g: &Diagram) -> BigUint {
    let n = g.vertex_count() as usize;
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut count = 0u64;
    loop {
        if g.relabel(&perm) == *g {
            count += 1;
        }
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    let mut mult: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for &e in g.edges() {
        *mult.entry(e).or_default() += 1;
    }
    mult.values().fold(BigUint::from(count), |a, &m| a * fact(m))
}

/// A connected diagram: a random spanning tree plus extra edges.
fn diagram() -> impl Strategy<Value = Diagram> {
    (2u32..=5).prop_flat_map(|n| {
        let parents = proptest::collection::vec(any::<u32>(), (n - 1) as usize);
        let extra = proptest::collection::vec((0..n, 0..n), 0..=3);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(u32, u32)> = parents.iter().enumerate().map(|(i, p)| (p % (i as u32 + 1), i as u32 + 1)).collect();
            edges.extend(extra.into_iter().filter(|(u, v)| u != v));
            Diagram::new(n, &edges).unwrap()
        })
    })
}

fn multi_index() -> impl Strategy<Value = MultiIndex> {
    proptest::collection::btree_map(1u32..=5, 1u32..=3, 1..=3)
        .prop_filter("at most 10 half-edges", |m| m.iter().map(|(k, b)| k * b).sum::<u32>() <= 10)
        .prop_map(|m| MultiIndex::new(m).unwrap())
}

fn lincomb() -> impl Strategy<Value = LinComb<u8>> {
    proptest::collection::vec((0u8..6, -5i64..=5, 1i64..=4), 0..6).prop_map(|terms| {
        let mut l = LinComb::zero();
        for (b, n, d) in terms {
            l.add_term(b, Scalar::new(n.into(), d.into()));
        }
        l
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lincomb_addition_is_commutative_and_cancels(a in lincomb(), b in lincomb()) {
        let mut ab = a.clone();
        ab.add_assign(&b);
        let mut ba = b.clone();
        ba.add_assign(&a);
        prop_assert_eq!(&ab, &ba);
        ab.add_scaled(&b, &int(-1));
        prop_assert_eq!(ab, a.clone());
        let mut z = a.clone();
        z.add_scaled(&a, &int(-1));
        prop_assert!(z.is_zero());
        prop_assert!(z.iter().all(|(_, c)| *c != int(0)));
    }

    #[test]
    fn lincomb_scaling_distributes(a in lincomb(), b in lincomb(), n in -4i64..=4) {
        let s = int(n);
        let mut sum = a.clone();
        sum.add_assign(&b);
        let mut parts = a.scale(&s);
        parts.add_assign(&b.scale(&s));
        prop_assert_eq!(sum.scale(&s), parts);
    }

    #[test]
    fn canonical_form_ignores_labels(g in diagram(), seed in any::<u64>()) {
        let n = g.vertex_count() as usize;
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let c = g.canonicalize();
        prop_assert_eq!(&c, &g.relabel(&perm).canonicalize());
        prop_assert_eq!(c.aut_order(), &brute_aut(&g));
        prop_assert!(orbit_stabilizer_check(&g));
    }

    #[test]
    fn populatable_matches_pairings(m in multi_index(), free in 0u32..=2) {
        let brute = !enumerate_pairings(&m, true, free).is_empty();
        prop_assert_eq!(is_populatable(&m, free), brute);
    }

    #[test]
    fn lifts_agree(m in multi_index()) {
        prop_assert_eq!(lift_p(&m), lift_p_by_matrices(&m));
    }

    #[test]
    fn extraction_is_adjoint_to_insertion(g in diagram()) {
        // Every cycle is divergent with these parameters.
        let p = DegreeParams::new(int(-1), 1).unwrap();
        let big = |n: &BigUint| Scalar::from_integer(n.clone().into());
        let g = g.canonicalize();
        for ((f, q), c) in coproduct_reduced_f(g.diagram(), &p, None).iter() {
            let lhs = c * big(&f.sym_factor()) * big(q.aut_order());
            let back = simultaneous_insert_f_restricted(f, q.diagram(), &p, None);
            let rhs = back.coeff(&g) * big(g.aut_order());
            prop_assert_eq!(lhs, rhs, "{} into {}", f, q);
            prop_assert!(f.parts().iter().all(|c| c.is_divergent(&p)));
            prop_assert!(!DiagForest::is_unit(f));
        }
    }
}
