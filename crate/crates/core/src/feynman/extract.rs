//! Extraction-contraction of divergent subforests.
//!
//! A subgraph is identified with an edge subset. Contracting a component
//! that leaves out an edge between two of its vertices would create a
//! self-loop, so only vertex-induced components survive; a subforest is
//! therefore a family of disjoint vertex sets, each inducing a connected
//! divergent subgraph.

use alloc::vec::Vec;

use crate::lincomb::{int, LinComb};
use crate::multiindex::{DegreeParams, Rule};

use super::{CanonDiagram, DiagForest, Diagram};

/// Bit masks of vertex sets inducing a connected divergent subgraph,
/// excluding the full vertex set.
fn divergent_vertex_sets(g: &Diagram, p: &DegreeParams) -> Vec<u64> {
    let n = g.vertex_count() as usize;
    assert!(n < 64, "diagram too large for subset enumeration");
    let full: u64 = (1u64 << n) - 1;
    let mut out = Vec::new();
    for mask in 1..full {
        if mask.count_ones() < 2 {
            continue;
        }
        let sub = induced(g, mask);
        let size = mask.count_ones() as usize;
        if sub.is_empty() || !super::is_connected(size, &sub) {
            continue;
        }
        if Diagram::from_valid(size as u32, sub).is_divergent(p) {
            out.push(mask);
        }
    }
    out
}

/// Edges with both ends in `mask`, relabelled to `0..|mask|`.
fn induced(g: &Diagram, mask: u64) -> Vec<(u32, u32)> {
    let n = g.vertex_count() as usize;
    let mut index = alloc::vec![u32::MAX; n];
    let mut next = 0;
    for (v, slot) in index.iter_mut().enumerate() {
        if mask >> v & 1 == 1 {
            *slot = next;
            next += 1;
        }
    }
    g.edges()
        .iter()
        .filter(|(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
        .map(|&(u, v)| (index[u as usize], index[v as usize]))
        .collect()
}

/// Contract each vertex set in `masks` to one vertex.
fn contract(g: &Diagram, masks: &[u64]) -> Diagram {
    let n = g.vertex_count() as usize;
    let mut target = alloc::vec![u32::MAX; n];
    for (i, &m) in masks.iter().enumerate() {
        for (v, t) in target.iter_mut().enumerate() {
            if m >> v & 1 == 1 {
                *t = i as u32;
            }
        }
    }
    let mut next = masks.len() as u32;
    for t in target.iter_mut() {
        if *t == u32::MAX {
            *t = next;
            next += 1;
        }
    }
    let edges = g
        .edges()
        .iter()
        .map(|&(u, v)| (target[u as usize], target[v as usize]))
        .filter(|(a, b)| a != b)
        .collect();
    Diagram::from_valid(next, edges)
}

/// Every (divergent subforest, quotient) pair, one entry per edge subset.
pub fn divergent_extractions(g: &Diagram, p: &DegreeParams) -> Vec<(DiagForest, Diagram)> {
    let sets = divergent_vertex_sets(g, p);
    let mut out = Vec::new();
    let mut chosen: Vec<u64> = Vec::new();
    fn rec(g: &Diagram, sets: &[u64], start: usize, used: u64, chosen: &mut Vec<u64>, out: &mut Vec<(DiagForest, Diagram)>) {
        for i in start..sets.len() {
            if sets[i] & used != 0 {
                continue;
            }
            chosen.push(sets[i]);
            let parts = chosen
                .iter()
                .map(|&m| {
                    let sub = induced(g, m);
                    Diagram::from_valid(m.count_ones(), sub).canonicalize()
                })
                .collect();
            out.push((DiagForest::new(parts), contract(g, chosen)));
            rec(g, sets, i + 1, used | sets[i], chosen, out);
            chosen.pop();
        }
    }
    rec(g, &sets, 0, 0, &mut chosen, &mut out);
    out
}

/// Reduced coproduct Δ_F Γ; the quotient must obey the rule if given.
pub fn coproduct_reduced_f(g: &Diagram, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<(DiagForest, CanonDiagram)> {
    let mut out = LinComb::zero();
    for (f, q) in divergent_extractions(g, p) {
        if rule.map_or(true, |r| q.obeys(r)) {
            out.add_term((f, q.canonicalize()), int(1));
        }
    }
    out
}

/// Full coproduct Δ^-_F Γ = ∅ ⊗ Γ + Γ ⊗ ∅ + Δ_F Γ.
pub fn coproduct_full_f(g: &Diagram, p: &DegreeParams, rule: Option<&Rule>) -> LinComb<(DiagForest, DiagForest)> {
    let c = g.canonicalize();
    let mut out: LinComb<(DiagForest, DiagForest)> =
        coproduct_reduced_f(g, p, rule).map_basis(|(f, q)| (f.clone(), DiagForest::single(q.clone())));
    out.add_term((DiagForest::unit(), DiagForest::single(c.clone())), int(1));
    out.add_term((DiagForest::single(c), DiagForest::unit()), int(1));
    out
}
