//! Canonical labeling of small vertex-coloured multigraphs.
//!
//! Colour refinement followed by an exhaustive individualisation search.
//! Distinct leaves of the search tree give distinct discrete colourings,
//! and two leaves yield the same relabelled graph exactly when they differ
//! by an automorphism, so the number of leaves attaining the best image is
//! the order of the vertex automorphism group.

use alloc::vec::Vec;

/// Symmetric multiplicity matrix, row-major, with vertex colours.
pub(crate) struct ColoredGraph<'a> {
    pub n: usize,
    pub mult: &'a [u32],
    pub colors: &'a [u32],
}

pub(crate) struct Labeling {
    /// `perm[old] = new`.
    pub perm: Vec<u32>,
    /// Order of the vertex automorphism group (colours preserved).
    pub aut_vertices: u64,
}

fn rank(values: &[u32]) -> Vec<u32> {
    let mut sorted: Vec<u32> = values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    values.iter().map(|v| sorted.binary_search(v).unwrap_or(0) as u32).collect()
}

fn cell_count(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Equitable refinement; order-preserving on existing cells.
fn refine(g: &ColoredGraph<'_>, colors: &mut Vec<u32>) {
    let n = g.n;
    let mut cells = cell_count(colors);
    loop {
        let mut sigs: Vec<(u32, Vec<(u32, u32)>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<(u32, u32)> = (0..n)
                .filter(|&u| g.mult[v * n + u] > 0)
                .map(|u| (colors[u], g.mult[v * n + u]))
                .collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        for v in 0..n {
            colors[v] = sorted.binary_search(&sigs[v]).unwrap_or(0) as u32;
        }
        if sorted.len() == cells {
            return;
        }
        cells = sorted.len();
    }
}

fn image(g: &ColoredGraph<'_>, colors: &[u32]) -> Vec<u32> {
    let n = g.n;
    let mut inv = alloc::vec![0usize; n];
    for v in 0..n {
        inv[colors[v] as usize] = v;
    }
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(g.mult[inv[i] * n + inv[j]]);
        }
    }
    out
}

struct Search<'g, 'a> {
    g: &'g ColoredGraph<'a>,
    best: Option<(Vec<u32>, Vec<u32>)>,
    count: u64,
}

impl Search<'_, '_> {
    fn visit(&mut self, colors: Vec<u32>) {
        let n = self.g.n;
        if cell_count(&colors) == n {
            let img = image(self.g, &colors);
            match &self.best {
                Some((b, _)) if img < *b => {}
                Some((b, _)) if img == *b => self.count += 1,
                _ => {
                    self.best = Some((img, colors));
                    self.count = 1;
                }
            }
            return;
        }
        // First non-singleton cell in colour order.
        let mut sizes = alloc::vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).unwrap_or(0) as u32;
        for v in 0..n {
            if colors[v] != target {
                continue;
            }
            let mut next: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| if c == target && u != v { 2 * c + 1 } else { 2 * c })
                .collect();
            next = rank(&next);
            refine(self.g, &mut next);
            self.visit(next);
        }
    }
}

pub(crate) fn canonical_labeling(g: &ColoredGraph<'_>) -> Labeling {
    if g.n == 0 {
        return Labeling { perm: Vec::new(), aut_vertices: 1 };
    }
    let mut colors = rank(g.colors);
    refine(g, &mut colors);
    let mut s = Search { g, best: None, count: 0 };
    s.visit(colors);
    let (_, perm) = s.best.expect("search visits at least one leaf");
    Labeling { perm, aut_vertices: s.count }
}
