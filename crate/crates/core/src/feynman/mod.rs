//! Connected loopless multigraphs, their canonical forms and the
//! diagram-side Hopf operations.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;

use crate::combinatorics::factorial;
use crate::error::Error;
use crate::lincomb::{int, Scalar};
use crate::multiindex::{DegreeParams, MultiIndex, Rule};

mod canon;
pub mod catalog;
pub mod extract;
pub mod insert;

pub(crate) use canon::{canonical_labeling, ColoredGraph};
pub use extract::{coproduct_full_f, coproduct_reduced_f, divergent_extractions};
pub use insert::{cut_vertex, graft, insert_f, simultaneous_insert_f, simultaneous_insert_f_restricted, HalfEdgeGraph};

/// A connected loopless multigraph with vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted, repeated for
/// multi-edges.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Diagram {
    n: u32,
    edges: Vec<(u32, u32)>,
}

impl Diagram {
    /// Validate and normalise. Rejects self-loops, out-of-range endpoints,
    /// isolated vertices, disconnected graphs, and graphs with fewer than
    /// two vertices.
    pub fn new(n: u32, edges: &[(u32, u32)]) -> Result<Self, Error> {
        let d = Self::normalised(n, edges)?;
        if n < 2 || d.edges.is_empty() {
            return Err(Error::TooSmall);
        }
        if !is_connected(n as usize, &d.edges) {
            return Err(Error::Disconnected);
        }
        Ok(d)
    }

    fn normalised(n: u32, edges: &[(u32, u32)]) -> Result<Self, Error> {
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange(u.max(v)));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        Ok(Diagram { n, edges: out })
    }

    /// Used internally on graphs already known to be valid.
    pub(crate) fn from_valid(n: u32, mut edges: Vec<(u32, u32)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        Diagram { n, edges }
    }

    /// The 2-vertex diagram with `k` parallel edges.
    pub fn melon(k: u32) -> Self {
        Diagram::from_valid(2, alloc::vec![(0, 1); k as usize])
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn arities(&self) -> Vec<u32> {
        let mut a = alloc::vec![0u32; self.n as usize];
        for &(u, v) in &self.edges {
            a[u as usize] += 1;
            a[v as usize] += 1;
        }
        a
    }

    pub(crate) fn mult_matrix(&self) -> Vec<u32> {
        let n = self.n as usize;
        let mut m = alloc::vec![0u32; n * n];
        for &(u, v) in &self.edges {
            m[u as usize * n + v as usize] += 1;
            m[v as usize * n + u as usize] += 1;
        }
        m
    }

    /// ℓ |E| + d (|V| - 1).
    pub fn degree(&self, p: &DegreeParams) -> Scalar {
        &p.ell * int(self.edge_count()) + int(p.d as i64 * (self.n as i64 - 1))
    }

    pub fn is_divergent(&self, p: &DegreeParams) -> bool {
        self.degree(p) <= int(0)
    }

    pub fn obeys(&self, rule: &Rule) -> bool {
        self.arities().iter().all(|&k| rule.allows(k))
    }

    /// Φ: the multi-index of vertex arities.
    pub fn counting_map(&self) -> MultiIndex {
        MultiIndex::from_arities(&self.arities()).expect("diagram has vertices")
    }

    /// Relabel with `perm[old] = new`.
    pub fn relabel(&self, perm: &[u32]) -> Diagram {
        let edges = self.edges.iter().map(|&(u, v)| (perm[u as usize], perm[v as usize])).collect();
        Diagram::from_valid(self.n, edges)
    }

    /// Canonical form with the automorphism group order.
    pub fn canonicalize(&self) -> CanonDiagram {
        let n = self.n as usize;
        let mult = self.mult_matrix();
        let colors = alloc::vec![0u32; n];
        let lab = canonical_labeling(&ColoredGraph { n, mult: &mult, colors: &colors });
        let mut aut = BigUint::from(lab.aut_vertices);
        for i in 0..n {
            for j in i + 1..n {
                aut *= factorial(mult[i * n + j] as u64);
            }
        }
        CanonDiagram { diagram: self.relabel(&lab.perm), aut_order: aut }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; e=", self.n)?;
        for (i, (u, v)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}-{}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

pub(crate) fn is_connected(n: usize, edges: &[(u32, u32)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    comps == 1
}

/// Connected components of a loopless multigraph, as vertex lists.
pub(crate) fn components(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut adj: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut seen = alloc::vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = alloc::vec![s as u32];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i] as usize;
            for &u in &adj[v] {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    comp.push(u);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A diagram in canonical labeling, carrying S_F = |Aut|.
///
/// Equality and ordering look only at the canonical diagram.
#[derive(Clone, Debug)]
pub struct CanonDiagram {
    diagram: Diagram,
    aut_order: BigUint,
}

impl CanonDiagram {
    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    /// S_F: vertex permutations times permutations of parallel edges.
    pub fn aut_order(&self) -> &BigUint {
        &self.aut_order
    }

    /// Deterministic byte encoding: vertex count, then the upper triangle
    /// of the multiplicity matrix, all as LEB128 varints.
    pub fn canonical_key(&self) -> Vec<u8> {
        let n = self.diagram.n as usize;
        let mult = self.diagram.mult_matrix();
        let mut out = Vec::new();
        push_varint(&mut out, n as u64);
        for i in 0..n {
            for j in i + 1..n {
                push_varint(&mut out, mult[i * n + j] as u64);
            }
        }
        out
    }

    pub fn key_hex(&self) -> String {
        let mut s = String::new();
        for b in self.canonical_key() {
            let _ = fmt::Write::write_fmt(&mut s, format_args!("{b:02x}"));
        }
        s
    }

    pub fn degree(&self, p: &DegreeParams) -> Scalar {
        self.diagram.degree(p)
    }

    pub fn is_divergent(&self, p: &DegreeParams) -> bool {
        self.diagram.is_divergent(p)
    }

    pub fn counting_map(&self) -> MultiIndex {
        self.diagram.counting_map()
    }
}

fn push_varint(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

impl PartialEq for CanonDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.diagram == other.diagram
    }
}
impl Eq for CanonDiagram {}
impl PartialOrd for CanonDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CanonDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.diagram.cmp(&other.diagram)
    }
}
impl Hash for CanonDiagram {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.diagram.hash(state);
    }
}

impl fmt::Display for CanonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.diagram.fmt(f)
    }
}

/// Unordered forest of canonical diagrams; empty is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct DiagForest {
    parts: Vec<CanonDiagram>,
}

impl DiagForest {
    pub fn new(mut parts: Vec<CanonDiagram>) -> Self {
        parts.sort();
        DiagForest { parts }
    }

    pub fn unit() -> Self {
        Self::default()
    }

    pub fn single(c: CanonDiagram) -> Self {
        DiagForest { parts: alloc::vec![c] }
    }

    pub fn parts(&self) -> &[CanonDiagram] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn product(&self, other: &DiagForest) -> DiagForest {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        DiagForest::new(parts)
    }

    pub fn grouped(&self) -> Vec<(&CanonDiagram, usize)> {
        let mut out: Vec<(&CanonDiagram, usize)> = Vec::new();
        for c in &self.parts {
            match out.last_mut() {
                Some((last, r)) if *last == c => *r += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// ∏ r_i! S_F(Γ_i)^r_i.
    pub fn sym_factor(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (c, r) in self.grouped() {
            acc *= factorial(r as u64);
            acc *= c.aut_order().pow(r as u32);
        }
        acc
    }

    pub fn is_divergent(&self, p: &DegreeParams) -> bool {
        self.parts.iter().all(|c| c.is_divergent(p))
    }

    pub fn counting_map(&self) -> crate::multiindex::MIForest {
        crate::multiindex::MIForest::new(self.parts.iter().map(CanonDiagram::counting_map).collect())
    }
}

impl fmt::Display for DiagForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("1");
        }
        for (i, c) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "[{c}]")?;
        }
        Ok(())
    }
}

/// ⟨Γ_1, Γ_2⟩ = S_F δ on forests.
pub fn inner_product_f(a: &DiagForest, b: &DiagForest) -> Scalar {
    if a == b {
        Scalar::from_integer(a.sym_factor().into())
    } else {
        int(0)
    }
}

/// Split an arbitrary loopless multigraph (no isolated vertices) into a
/// forest of canonical components.
pub(crate) fn forest_of(n: usize, edges: &[(u32, u32)]) -> DiagForest {
    let mut parts = Vec::new();
    for comp in components(n, edges) {
        let mut index = alloc::vec![u32::MAX; n];
        for (i, &v) in comp.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let sub: Vec<(u32, u32)> = edges
            .iter()
            .filter(|(u, _)| index[*u as usize] != u32::MAX)
            .map(|&(u, v)| (index[u as usize], index[v as usize]))
            .collect();
        parts.push(Diagram::from_valid(comp.len() as u32, sub).canonicalize());
    }
    DiagForest::new(parts)
}

/// Frequently used small diagrams, in 0-based labels.
pub mod named {
    use super::Diagram;

    /// Two vertices, three parallel edges.
    pub fn triple_edge() -> Diagram {
        Diagram::melon(3)
    }

    /// Two vertices, two parallel edges.
    pub fn double_edge() -> Diagram {
        Diagram::melon(2)
    }

    /// Triple edge a-b plus the path b-c-a: the only diagram over z_2 z_4^2.
    pub fn triple_edge_with_bridge() -> Diagram {
        Diagram::from_valid(3, alloc::vec![(0, 1), (0, 1), (0, 1), (1, 2), (0, 2)])
    }

    /// Two triple-edge blobs joined into a ring by two single edges.
    pub fn dumbbell() -> Diagram {
        Diagram::from_valid(
            4,
            alloc::vec![(0, 1), (0, 1), (0, 1), (2, 3), (2, 3), (2, 3), (1, 2), (0, 3)],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(Diagram::new(2, &[(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(Diagram::new(3, &[(0, 1)]), Err(Error::Disconnected));
        assert_eq!(Diagram::new(2, &[(0, 2)]), Err(Error::VertexOutOfRange(2)));
        assert!(Diagram::new(2, &[(1, 0), (0, 1)]).is_ok());
    }

    #[test]
    fn symmetry_factors() {
        assert_eq!(named::triple_edge().canonicalize().aut_order(), &BigUint::from(12u32));
        assert_eq!(Diagram::melon(1).canonicalize().aut_order(), &BigUint::from(2u32));
        assert_eq!(named::triple_edge_with_bridge().canonicalize().aut_order(), &BigUint::from(12u32));
        assert_eq!(named::dumbbell().canonicalize().aut_order(), &BigUint::from(144u32));
    }

    #[test]
    fn canonical_form_is_label_invariant() {
        let d = named::triple_edge_with_bridge();
        let e = d.relabel(&[2, 0, 1]);
        assert_ne!(d, e);
        assert_eq!(d.canonicalize(), e.canonicalize());
        assert_eq!(d.canonicalize().key_hex(), e.canonicalize().key_hex());
        assert_ne!(d.canonicalize(), named::dumbbell().canonicalize());
    }

    #[test]
    fn degrees_agree_with_counting_map() {
        let p = DegreeParams::phi4_3();
        assert_eq!(named::triple_edge().degree(&p), int(0));
        assert_eq!(Diagram::melon(4).degree(&p), int(-1));
        for d in [named::triple_edge(), named::dumbbell(), named::triple_edge_with_bridge()] {
            assert_eq!(d.degree(&p), d.counting_map().degree(&p));
        }
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(named::triple_edge().to_string(), "n=2; e=1-2,1-2,1-2");
    }

    #[test]
    fn forest_splitting() {
        let f = forest_of(4, &[(0, 1), (0, 1), (0, 1), (2, 3), (2, 3), (2, 3)]);
        let t = named::triple_edge().canonicalize();
        assert_eq!(f, DiagForest::new(alloc::vec![t.clone(), t]));
        assert_eq!(f.sym_factor(), BigUint::from(288u32));
    }
}
