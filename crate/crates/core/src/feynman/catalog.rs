//! Enumeration of connected diagrams.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::combinatorics::factorial;

use super::{is_connected, CanonDiagram, Diagram};

/// All connected diagrams with at most `max_edges` edges, each class once,
/// sorted by edge count and then canonical form.
///
/// Every connected multigraph with two or more edges arises from a smaller
/// one by adding an edge or a pendant vertex, so growing level by level
/// reaches all classes.
pub fn connected_diagrams_up_to(max_edges: u32) -> Vec<CanonDiagram> {
    let mut out = Vec::new();
    if max_edges == 0 {
        return out;
    }
    let mut level: BTreeSet<CanonDiagram> = BTreeSet::new();
    level.insert(Diagram::melon(1).canonicalize());
    for _ in 1..max_edges {
        let mut next = BTreeSet::new();
        for c in &level {
            let d = c.diagram();
            let n = d.vertex_count();
            for u in 0..n {
                for v in u + 1..n {
                    let mut e = d.edges().to_vec();
                    e.push((u, v));
                    next.insert(Diagram::from_valid(n, e).canonicalize());
                }
                let mut e = d.edges().to_vec();
                e.push((u, n));
                next.insert(Diagram::from_valid(n + 1, e).canonicalize());
            }
        }
        out.extend(level.into_iter());
        level = next;
    }
    out.extend(level);
    out
}

/// Every connected diagram whose vertex arities are `arities`, with the
/// number of half-edge pairings producing it (labelled vertices and
/// half-edges).
///
/// A labelled multiplicity matrix is produced by ∏ d_v! / ∏_{u<v} m_uv!
/// pairings; summing over the matrices of one class gives its count.
pub fn realizations(arities: &[u32]) -> BTreeMap<CanonDiagram, BigUint> {
    let n = arities.len();
    let mut out: BTreeMap<CanonDiagram, BigUint> = BTreeMap::new();
    if n < 2 {
        return out;
    }
    let numerator: BigUint = arities.iter().map(|&d| factorial(d as u64)).product();
    let mut rem: Vec<u32> = arities.to_vec();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut mults: Vec<u32> = Vec::new();
    fn rec(
        n: usize,
        i: usize,
        j: usize,
        rem: &mut Vec<u32>,
        edges: &mut Vec<(u32, u32)>,
        mults: &mut Vec<u32>,
        numerator: &BigUint,
        out: &mut BTreeMap<CanonDiagram, BigUint>,
    ) {
        if i == n {
            if is_connected(n, edges) {
                let d = Diagram::from_valid(n as u32, edges.clone());
                let den: BigUint = mults.iter().map(|&m| factorial(m as u64)).product();
                *out.entry(d.canonicalize()).or_default() += numerator / den;
            }
            return;
        }
        if j == n {
            if rem[i] == 0 {
                rec(n, i + 1, i + 2, rem, edges, mults, numerator, out);
            }
            return;
        }
        let hi = rem[i].min(rem[j]);
        let lo = if j == n - 1 { rem[i] } else { 0 };
        if lo > hi {
            return;
        }
        // The later vertices must be able to absorb what row i still needs.
        let capacity: u32 = rem[j..].iter().sum();
        if capacity < rem[i] {
            return;
        }
        for m in lo..=hi {
            rem[i] -= m;
            rem[j] -= m;
            for _ in 0..m {
                edges.push((i as u32, j as u32));
            }
            if m > 0 {
                mults.push(m);
            }
            rec(n, i, j + 1, rem, edges, mults, numerator, out);
            if m > 0 {
                mults.pop();
            }
            for _ in 0..m {
                edges.pop();
            }
            rem[i] += m;
            rem[j] += m;
        }
    }
    rec(n, 0, 1, &mut rem, &mut edges, &mut mults, &numerator, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::super::named;
    use super::*;

    #[test]
    fn small_catalog_sizes() {
        // Edges 1, 2, 3: {K2}, {melon2, path}, {melon3, P4, star, triangle,
        // path with a double edge}.
        let cat = connected_diagrams_up_to(3);
        let by_edges = |e: u32| cat.iter().filter(|c| c.diagram().edge_count() == e).count();
        assert_eq!(by_edges(1), 1);
        assert_eq!(by_edges(2), 2);
        assert_eq!(by_edges(3), 5);
    }

    #[test]
    fn realization_counts() {
        let r = realizations(&[3, 3]);
        assert_eq!(r.len(), 1);
        assert_eq!(r[&named::triple_edge().canonicalize()], BigUint::from(6u32));
        let r = realizations(&[2, 4, 4]);
        assert_eq!(r.len(), 1);
        assert_eq!(r[&named::triple_edge_with_bridge().canonicalize()], BigUint::from(192u32));
        assert!(realizations(&[2, 4]).is_empty());
    }
}
