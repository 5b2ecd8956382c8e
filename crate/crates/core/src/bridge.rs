//! The correspondence between diagrams and multi-indices: the counting map
//! Φ, the lift 𝒫, and brute-force half-edge pairing.
//!
//! Pairing enumeration is the ground truth. The S_M / S_F formula and the
//! labelled-matrix count in [`catalog::realizations`] are faster routes
//! that the checks here compare against it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::feynman::catalog::realizations;
use crate::feynman::{
    canonical_labeling, coproduct_reduced_f, forest_of, insert_f, simultaneous_insert_f, CanonDiagram,
    ColoredGraph, DiagForest, Diagram,
};
use crate::lincomb::{LinComb, Scalar};
use crate::multiindex::{coproduct_reduced, insert, simultaneous_insert, DegreeParams, MIForest, MultiIndex, Rule};

fn big(n: BigUint) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Φ on a diagram.
pub fn counting_map(g: &Diagram) -> MultiIndex {
    g.counting_map()
}

/// Φ on a forest, componentwise.
pub fn counting_map_forest(f: &DiagForest) -> MIForest {
    f.counting_map()
}

/// A canonical multigraph whose vertices carry a number of unpaired legs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LeggedGraph {
    pub legs: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

impl LeggedGraph {
    fn canonical(legs: &[u32], edges: &[(u32, u32)]) -> Self {
        let n = legs.len();
        let mut mult = alloc::vec![0u32; n * n];
        for &(u, v) in edges {
            mult[u as usize * n + v as usize] += 1;
            mult[v as usize * n + u as usize] += 1;
        }
        let lab = canonical_labeling(&ColoredGraph { n, mult: &mult, colors: legs });
        let mut new_legs = alloc::vec![0u32; n];
        for v in 0..n {
            new_legs[lab.perm[v] as usize] = legs[v];
        }
        let mut new_edges: Vec<(u32, u32)> = edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (lab.perm[u as usize], lab.perm[v as usize]);
                (a.min(b), a.max(b))
            })
            .collect();
        new_edges.sort_unstable();
        LeggedGraph { legs: new_legs, edges: new_edges }
    }

    pub fn is_connected(&self) -> bool {
        crate::feynman::is_connected(self.legs.len(), &self.edges)
    }
}

/// Shape of one pairing result.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Outcome {
    /// No free legs and no isolated vertex: a forest of diagrams.
    Forest(DiagForest),
    /// Anything with free legs or isolated vertices.
    Legged(LeggedGraph),
}

/// Pairing counts bucketed by isomorphism class.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PairingOutcome {
    pub counts: BTreeMap<Outcome, u64>,
}

impl PairingOutcome {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Connected diagram classes with their pairing counts N(Γ).
    pub fn connected_diagrams(&self) -> BTreeMap<CanonDiagram, u64> {
        self.counts
            .iter()
            .filter_map(|(o, &c)| match o {
                Outcome::Forest(f) if f.len() == 1 => Some((f.parts()[0].clone(), c)),
                _ => None,
            })
            .collect()
    }

    /// Forest classes (connected or not) with their pairing counts N(F).
    pub fn forests(&self) -> BTreeMap<DiagForest, u64> {
        self.counts
            .iter()
            .filter_map(|(o, &c)| match o {
                Outcome::Forest(f) => Some((f.clone(), c)),
                Outcome::Legged(_) => None,
            })
            .collect()
    }
}

struct Matcher<'a> {
    owner: &'a [u32],
    n: usize,
    paired: Vec<bool>,
    mult: Vec<u32>,
    legs: Vec<u32>,
    buckets: BTreeMap<(Vec<u32>, Vec<u32>), u64>,
}

impl Matcher<'_> {
    fn run(&mut self) {
        let Some(first) = self.paired.iter().position(|p| !p) else {
            let key = (self.mult.clone(), self.legs.clone());
            *self.buckets.entry(key).or_insert(0) += 1;
            return;
        };
        self.paired[first] = true;
        let a = self.owner[first] as usize;
        for h in first + 1..self.owner.len() {
            let b = self.owner[h] as usize;
            if self.paired[h] || a == b {
                continue;
            }
            self.paired[h] = true;
            let idx = a.min(b) * self.n + a.max(b);
            self.mult[idx] += 1;
            self.run();
            self.mult[idx] -= 1;
            self.paired[h] = false;
        }
        self.paired[first] = false;
    }
}

/// Enumerate every loopless perfect matching of the half-edges of `m`
/// after designating `free_legs` of them as unpaired (in all ways), and
/// bucket the resulting graphs by isomorphism class.
///
/// Vertices are ordered by arity, half-edges numbered per vertex, and
/// matchings generated in lexicographic order.
pub fn enumerate_pairings(m: &MultiIndex, connected_only: bool, free_legs: u32) -> PairingOutcome {
    let h = m.half_edges();
    if free_legs > h || (h - free_legs) % 2 == 1 {
        return PairingOutcome::default();
    }
    let arities = m.arities();
    let n = arities.len();
    let owner: Vec<u32> = arities
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| core::iter::repeat(v as u32).take(k as usize))
        .collect();
    let mut matcher = Matcher {
        owner: &owner,
        n,
        paired: alloc::vec![false; owner.len()],
        mult: alloc::vec![0; n * n],
        legs: alloc::vec![0; n],
        buckets: BTreeMap::new(),
    };
    // Choose the free half-edges as an increasing index list.
    let mut free: Vec<usize> = (0..free_legs as usize).collect();
    loop {
        for &i in &free {
            matcher.paired[i] = true;
            matcher.legs[owner[i] as usize] += 1;
        }
        matcher.run();
        for &i in &free {
            matcher.paired[i] = false;
            matcher.legs[owner[i] as usize] -= 1;
        }
        if !next_combination(&mut free, owner.len()) {
            break;
        }
    }
    let mut out = PairingOutcome::default();
    for ((mult, legs), count) in matcher.buckets {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for _ in 0..mult[i * n + j] {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        let connected = crate::feynman::is_connected(n, &edges) || (n == 1 && edges.is_empty());
        if connected_only && !connected {
            continue;
        }
        let mut touched = alloc::vec![false; n];
        for &(u, v) in &edges {
            touched[u as usize] = true;
            touched[v as usize] = true;
        }
        let outcome = if legs.iter().all(|&l| l == 0) && touched.iter().all(|&t| t) {
            Outcome::Forest(forest_of(n, &edges))
        } else {
            Outcome::Legged(LeggedGraph::canonical(&legs, &edges))
        };
        *out.counts.entry(outcome).or_insert(0) += count;
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// 𝒫(z^β) = Σ_{Φ(Γ) = z^β} (S_M / S_F) Γ.
pub fn lift_p(m: &MultiIndex) -> LinComb<CanonDiagram> {
    let sm = big(m.sym_factor());
    realizations(&m.arities())
        .into_keys()
        .map(|c| {
            let coeff = &sm / big(c.aut_order().clone());
            (c, coeff)
        })
        .collect()
}

/// 𝒫 computed from raw pairing counts N(Γ).
pub fn lift_p_by_pairing(m: &MultiIndex) -> LinComb<CanonDiagram> {
    enumerate_pairings(m, true, 0)
        .connected_diagrams()
        .into_iter()
        .map(|(c, n)| (c, Scalar::from_integer(n.into())))
        .collect()
}

/// 𝒫 computed by summing pairing counts over labelled multiplicity matrices.
pub fn lift_p_by_matrices(m: &MultiIndex) -> LinComb<CanonDiagram> {
    realizations(&m.arities()).into_iter().map(|(c, n)| (c, big(n))).collect()
}

/// Every multiset of `r` elements drawn from `pool`, as index lists.
fn multisets(pool: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(pool: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..pool {
            cur.push(i);
            rec(pool, r, i, cur, out);
            cur.pop();
        }
    }
    rec(pool, r, 0, &mut Vec::new(), &mut out);
    out
}

/// 𝒫 on a forest as defined: Σ over forests F of diagrams with Φ(F) equal
/// to the given forest, weighted S_M / S_F.
pub fn lift_p_forest(f: &MIForest) -> LinComb<DiagForest> {
    let sm = big(f.sym_factor());
    let mut partial: Vec<Vec<CanonDiagram>> = alloc::vec![Vec::new()];
    for (m, r) in f.grouped() {
        let classes: Vec<CanonDiagram> = realizations(&m.arities()).into_keys().collect();
        let mut next = Vec::new();
        for chosen in multisets(classes.len(), r) {
            for base in &partial {
                let mut v = base.clone();
                v.extend(chosen.iter().map(|&i| classes[i].clone()));
                next.push(v);
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|parts| {
            let forest = DiagForest::new(parts);
            let c = &sm / big(forest.sym_factor());
            (forest, c)
        })
        .collect()
}

/// 𝒫 on a forest as the forest product of component lifts.
pub fn lift_p_forest_product(f: &MIForest) -> LinComb<DiagForest> {
    let mut acc: LinComb<DiagForest> = LinComb::basis(DiagForest::unit());
    for m in f.parts() {
        let l = lift_p(m);
        let mut next = LinComb::zero();
        for (x, cx) in acc.iter() {
            for (c, cc) in l.iter() {
                next.add_term(x.product(&DiagForest::single(c.clone())), cx * cc);
            }
        }
        acc = next;
    }
    acc
}

/// S_M(Φ(Γ)) = N(Γ) S_F(Γ) with N from brute-force pairing.
pub fn orbit_stabilizer_check(g: &Diagram) -> bool {
    let c = g.canonicalize();
    let m = g.counting_map();
    let n = enumerate_pairings(&m, true, 0).connected_diagrams().get(&c).copied().unwrap_or(0);
    m.sym_factor() == BigUint::from(n) * c.aut_order()
}

/// ⟨Φ(Γ), z^β⟩ = ⟨Γ, 𝒫(z^β)⟩.
pub fn adjoint_phi_p_check(g: &Diagram, m: &MultiIndex) -> bool {
    let c = g.canonicalize();
    let lhs = if &g.counting_map() == m { big(m.sym_factor()) } else { Scalar::zero() };
    let rhs = big(c.aut_order().clone()) * lift_p(m).coeff(&c);
    lhs == rhs
}

/// (𝒫 ⊗ 𝒫) Δ_M z^β.
pub fn square_multi_index_side(m: &MultiIndex, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<(DiagForest, CanonDiagram)> {
    let mut out = LinComb::zero();
    for ((f, alpha), e) in coproduct_reduced(m, p, rule).iter() {
        let left = lift_p_forest(f);
        let right = lift_p(alpha);
        out.add_scaled(&left.tensor(&right), e);
    }
    out
}

/// Δ_F 𝒫 z^β.
pub fn square_diagram_side(m: &MultiIndex, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<(DiagForest, CanonDiagram)> {
    lift_p(m).apply_linear(|c| coproduct_reduced_f(c.diagram(), p, rule))
}

/// (𝒫 ⊗ 𝒫) Δ_M = Δ_F 𝒫 on z^β.
pub fn commuting_square_check(m: &MultiIndex, p: &DegreeParams, rule: Option<&Rule>) -> bool {
    square_multi_index_side(m, p, rule) == square_diagram_side(m, p, rule)
}

/// Φ(Γ_1 ▷ Γ_2) = Φ(Γ_1) ▶ Φ(Γ_2).
pub fn insertion_morphism_check(g1: &Diagram, g2: &Diagram, rule: Option<&Rule>) -> bool {
    let lhs = insert_f(g1, g2, rule).map_basis(CanonDiagram::counting_map);
    lhs == insert(&g1.counting_map(), &g2.counting_map(), rule)
}

/// Φ(F ★_F Γ) = Φ(F) ★_M Φ(Γ).
pub fn star_morphism_check(f: &DiagForest, g: &Diagram, rule: Option<&Rule>) -> bool {
    let lhs = simultaneous_insert_f(f, g, rule).map_basis(CanonDiagram::counting_map);
    lhs == simultaneous_insert(&f.counting_map(), &g.counting_map(), rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feynman::named;
    use crate::lincomb::int;

    fn mi(p: &[(u32, u32)]) -> MultiIndex {
        MultiIndex::new(p.iter().copied()).unwrap()
    }

    #[test]
    fn counting_map_examples() {
        assert_eq!(counting_map(&named::triple_edge_with_bridge()), mi(&[(2, 1), (4, 2)]));
        assert_eq!(counting_map(&named::triple_edge()), MultiIndex::z(3, 2));
        let t = named::triple_edge().canonicalize();
        let f = DiagForest::new(alloc::vec![t.clone(), t]);
        assert_eq!(counting_map_forest(&f), MIForest::power(&MultiIndex::z(3, 2), 2));
    }

    #[test]
    fn pairing_examples() {
        let out = enumerate_pairings(&MultiIndex::z(3, 2), true, 0);
        assert_eq!(out.connected_diagrams().get(&named::triple_edge().canonicalize()), Some(&6));
        assert_eq!(out.total(), 6);
        assert!(enumerate_pairings(&MultiIndex::z(3, 1), false, 0).is_empty());
        let b = enumerate_pairings(&mi(&[(2, 1), (4, 2)]), true, 0);
        assert_eq!(b.connected_diagrams().get(&named::triple_edge_with_bridge().canonicalize()), Some(&192));
    }

    #[test]
    fn disconnected_pairings_counted() {
        // z_1^4: three perfect matchings, all two disjoint edges.
        let out = enumerate_pairings(&MultiIndex::z(1, 4), false, 0);
        assert_eq!(out.total(), 3);
        assert!(out.connected_diagrams().is_empty());
        assert_eq!(out.forests().len(), 1);
    }

    #[test]
    fn free_leg_pairings() {
        // z_4^2 with two free legs: C(8,2) choices; only those with one free
        // leg per vertex pair up completely (16 * 3! = 96 pairings).
        let out = enumerate_pairings(&MultiIndex::z(4, 2), true, 2);
        assert_eq!(out.total(), 96);
        assert!(enumerate_pairings(&MultiIndex::z(4, 2), true, 1).is_empty());
    }

    #[test]
    fn lift_examples() {
        let bridge = named::triple_edge_with_bridge().canonicalize();
        assert_eq!(lift_p(&mi(&[(2, 1), (4, 2)])), LinComb::term(bridge, int(192)));
        let de = named::double_edge().canonicalize();
        assert_eq!(lift_p(&MultiIndex::z(2, 2)), LinComb::term(de, int(2)));
        for m in [MultiIndex::z(4, 3), mi(&[(1, 2), (2, 1), (3, 2)]), MultiIndex::z(3, 4)] {
            assert_eq!(lift_p(&m), lift_p_by_pairing(&m));
            assert_eq!(lift_p(&m), lift_p_by_matrices(&m));
        }
    }

    #[test]
    fn forest_lift_is_multiplicative() {
        let z32 = MultiIndex::z(3, 2);
        let t = named::triple_edge().canonicalize();
        for m in 1..=3usize {
            let f = MIForest::power(&z32, m);
            let want = LinComb::term(DiagForest::new(alloc::vec![t.clone(); m]), int(6i64.pow(m as u32)));
            assert_eq!(lift_p_forest(&f), want);
            assert_eq!(lift_p_forest_product(&f), want);
        }
        let mixed = MIForest::new(alloc::vec![MultiIndex::z(4, 3), MultiIndex::z(4, 3), MultiIndex::z(3, 2)]);
        assert_eq!(lift_p_forest(&mixed), lift_p_forest_product(&mixed));
    }

    #[test]
    fn checks_hold_on_examples() {
        assert!(orbit_stabilizer_check(&named::triple_edge()));
        assert!(orbit_stabilizer_check(&Diagram::melon(1)));
        assert!(orbit_stabilizer_check(&named::dumbbell()));
        assert!(adjoint_phi_p_check(&named::triple_edge(), &MultiIndex::z(3, 2)));
        assert!(adjoint_phi_p_check(&named::triple_edge(), &MultiIndex::z(4, 2)));
        let p = DegreeParams::phi4_3();
        let r = Rule::phi4();
        assert!(commuting_square_check(&MultiIndex::z(4, 1), &p, Some(&r)));
        assert!(commuting_square_check(&MultiIndex::z(4, 4), &p, Some(&r)));
        assert!(insertion_morphism_check(&named::triple_edge(), &named::double_edge(), Some(&r)));
    }
}
