//! Cutting vertices into half-edges and grafting diagrams into the slots.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::lincomb::{int, LinComb};
use crate::multiindex::{DegreeParams, Rule};

use super::{is_connected, CanonDiagram, DiagForest, Diagram};

/// A diagram fragment with dangling half-edges.
///
/// The body may be disconnected or edgeless; every body vertex carries a
/// body edge or a half-edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HalfEdgeGraph {
    pub vertex_count: u32,
    pub edges: Vec<(u32, u32)>,
    /// Anchor vertex of each half-edge.
    pub anchors: Vec<u32>,
}

/// Remove `v` and turn each incident edge into a half-edge at the other end.
pub fn cut_vertex(g: &Diagram, v: u32) -> HalfEdgeGraph {
    assert!(v < g.vertex_count(), "vertex out of range");
    let relabel = |u: u32| if u > v { u - 1 } else { u };
    let mut edges = Vec::new();
    let mut anchors = Vec::new();
    for &(a, b) in g.edges() {
        if a == v {
            anchors.push(relabel(b));
        } else if b == v {
            anchors.push(relabel(a));
        } else {
            edges.push((relabel(a), relabel(b)));
        }
    }
    anchors.sort_unstable();
    HalfEdgeGraph { vertex_count: g.vertex_count() - 1, edges, anchors }
}

fn admits(rule: Option<&Rule>, d: &Diagram) -> bool {
    rule.map_or(true, |r| d.obeys(r))
}

/// Canonicalisation memo keyed by the labelled edge list.
struct CanonCache(BTreeMap<Diagram, CanonDiagram>);

impl CanonCache {
    fn get(&mut self, d: Diagram) -> CanonDiagram {
        self.0.entry(d).or_insert_with_key(Diagram::canonicalize).clone()
    }
}

/// Attach every half-edge of `h` to a vertex of `target`, in all ways.
pub fn graft(h: &HalfEdgeGraph, target: &Diagram, rule: Option<&Rule>) -> LinComb<CanonDiagram> {
    let t = target.vertex_count();
    let total = t + h.vertex_count;
    let mut out = LinComb::zero();
    let mut cache = CanonCache(BTreeMap::new());
    let mut choice = alloc::vec![0u32; h.anchors.len()];
    loop {
        let mut edges: Vec<(u32, u32)> = target.edges().to_vec();
        edges.extend(h.edges.iter().map(|&(a, b)| (a + t, b + t)));
        edges.extend(h.anchors.iter().zip(&choice).map(|(&a, &c)| (a + t, c)));
        let d = Diagram::from_valid(total, edges);
        if admits(rule, &d) && is_connected(total as usize, d.edges()) {
            out.add_term(cache.get(d), int(1));
        }
        if !advance(&mut choice, t) {
            return out;
        }
    }
}

/// Odometer over `choice` with digits in `0..base`.
fn advance(choice: &mut [u32], base: u32) -> bool {
    for c in choice.iter_mut() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

/// Γ_1 ▷ Γ_2: insert `g1` at each vertex of `g2`. With a rule, `g2` must
/// obey it and so must every result.
pub fn insert_f(g1: &Diagram, g2: &Diagram, rule: Option<&Rule>) -> LinComb<CanonDiagram> {
    if !admits(rule, g2) {
        return LinComb::zero();
    }
    let mut out = LinComb::zero();
    for v in 0..g2.vertex_count() {
        out.add_assign(&graft(&cut_vertex(g2, v), g1, rule));
    }
    out
}

/// Ordered tuples of distinct vertices of length `k` from `0..n`.
fn injections(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                rec(n, k, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Simultaneous insertion of a forest into a diagram: component i replaces
/// the i-th of n distinct cut vertices, and each half-edge left at the cut
/// chooses a vertex of that component.
pub fn simultaneous_insert_f(f: &DiagForest, g: &Diagram, rule: Option<&Rule>) -> LinComb<CanonDiagram> {
    let n = f.len();
    if n == 0 || n > g.vertex_count() as usize || !admits(rule, g) {
        return LinComb::zero();
    }
    let mut cache = CanonCache(BTreeMap::new());
    let mut out = LinComb::zero();
    let comps: Vec<&Diagram> = f.parts().iter().map(CanonDiagram::diagram).collect();
    for cut in injections(g.vertex_count(), n) {
        // New labels: surviving vertices of g first, then each component.
        let mut keep = alloc::vec![u32::MAX; g.vertex_count() as usize];
        let mut next = 0;
        for v in 0..g.vertex_count() {
            if !cut.contains(&v) {
                keep[v as usize] = next;
                next += 1;
            }
        }
        let mut offset = Vec::with_capacity(n);
        for c in &comps {
            offset.push(next);
            next += c.vertex_count();
        }
        let total = next;
        let owner = |v: u32| cut.iter().position(|&c| c == v);
        let mut fixed: Vec<(u32, u32)> = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            fixed.extend(c.edges().iter().map(|&(a, b)| (a + offset[i], b + offset[i])));
        }
        // Each incidence at a cut vertex is a slot choosing a component vertex.
        let mut slots: Vec<usize> = Vec::new();
        let mut pending: Vec<(Option<usize>, u32, Option<usize>, u32)> = Vec::new();
        for &(a, b) in g.edges() {
            match (owner(a), owner(b)) {
                (None, None) => fixed.push((keep[a as usize], keep[b as usize])),
                (oa, ob) => {
                    if let Some(i) = oa {
                        slots.push(i);
                    }
                    if let Some(j) = ob {
                        slots.push(j);
                    }
                    pending.push((oa, keep[a as usize], ob, keep[b as usize]));
                }
            }
        }
        let sizes: Vec<u32> = slots.iter().map(|&i| comps[i].vertex_count()).collect();
        let mut choice = alloc::vec![0u32; slots.len()];
        loop {
            let mut edges = fixed.clone();
            let mut s = 0;
            for &(oa, ka, ob, kb) in &pending {
                let ea = match oa {
                    Some(i) => {
                        s += 1;
                        offset[i] + choice[s - 1]
                    }
                    None => ka,
                };
                let eb = match ob {
                    Some(j) => {
                        s += 1;
                        offset[j] + choice[s - 1]
                    }
                    None => kb,
                };
                edges.push((ea, eb));
            }
            let d = Diagram::from_valid(total, edges);
            if admits(rule, &d) && is_connected(total as usize, d.edges()) {
                out.add_term(cache.get(d), int(1));
            }
            if !advance_mixed(&mut choice, &sizes) {
                break;
            }
        }
    }
    out
}

fn advance_mixed(choice: &mut [u32], bases: &[u32]) -> bool {
    for (c, &b) in choice.iter_mut().zip(bases) {
        *c += 1;
        if *c < b {
            return true;
        }
        *c = 0;
    }
    false
}

/// Degree-restricted variant: zero unless every forest component is
/// divergent.
pub fn simultaneous_insert_f_restricted(
    f: &DiagForest,
    g: &Diagram,
    p: &DegreeParams,
    rule: Option<&Rule>,
) -> LinComb<CanonDiagram> {
    if !f.is_divergent(p) {
        return LinComb::zero();
    }
    simultaneous_insert_f(f, g, rule)
}

#[cfg(test)]
mod tests {
    use super::super::named;
    use super::*;

    #[test]
    fn cutting() {
        let h = cut_vertex(&named::double_edge(), 1);
        assert_eq!(h, HalfEdgeGraph { vertex_count: 1, edges: alloc::vec![], anchors: alloc::vec![0, 0] });
        let path = Diagram::from_valid(3, alloc::vec![(0, 1), (0, 1), (1, 2), (1, 2)]);
        let h = cut_vertex(&path, 1);
        assert_eq!(h.vertex_count, 2);
        assert!(h.edges.is_empty());
        assert_eq!(h.anchors, alloc::vec![0, 0, 1, 1]);
        let h = cut_vertex(&Diagram::melon(1), 0);
        assert_eq!(h.anchors, alloc::vec![0]);
    }

    #[test]
    fn grafting() {
        let r = Rule::phi4();
        let h = cut_vertex(&named::double_edge(), 1);
        let got = graft(&h, &named::triple_edge(), Some(&r));
        let bridge = named::triple_edge_with_bridge().canonicalize();
        assert_eq!(got, LinComb::term(bridge.clone(), int(2)));
        let h = cut_vertex(&Diagram::melon(1), 1);
        let path = Diagram::from_valid(3, alloc::vec![(0, 1), (1, 2)]).canonicalize();
        assert_eq!(graft(&h, &Diagram::melon(1), None), LinComb::term(path, int(2)));
        // Every assignment breaks {1, 3}.
        let strict = Rule::new([1, 3]).unwrap();
        assert!(graft(&cut_vertex(&named::double_edge(), 1), &named::triple_edge(), Some(&strict)).is_zero());
    }

    #[test]
    fn insertion_example() {
        let r = Rule::phi4();
        let got = insert_f(&named::triple_edge(), &named::double_edge(), Some(&r));
        let bridge = named::triple_edge_with_bridge().canonicalize();
        assert_eq!(got, LinComb::term(bridge, int(4)));
    }

    #[test]
    fn forest_into_double_edge_gives_dumbbell() {
        let r = Rule::phi4();
        let t = named::triple_edge().canonicalize();
        let f = DiagForest::new(alloc::vec![t.clone(), t]);
        let got = simultaneous_insert_f(&f, &named::double_edge(), Some(&r));
        assert_eq!(got, LinComb::term(named::dumbbell().canonicalize(), int(8)));
    }

    #[test]
    fn singleton_forest_matches_insert() {
        let g1 = named::triple_edge();
        let g2 = Diagram::from_valid(3, alloc::vec![(0, 1), (1, 2), (0, 2)]);
        let f = DiagForest::single(g1.canonicalize());
        assert_eq!(simultaneous_insert_f(&f, &g2, None), insert_f(&g1, &g2, None));
    }

    #[test]
    fn oversized_forest_is_zero() {
        let t = named::triple_edge().canonicalize();
        let f = DiagForest::new(alloc::vec![t.clone(), t.clone(), t]);
        assert!(simultaneous_insert_f(&f, &named::double_edge(), None).is_zero());
    }
}
