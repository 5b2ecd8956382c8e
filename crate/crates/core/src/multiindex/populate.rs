//! Which multi-indices are realised by a connected loopless pairing.
//!
//! The closed-form test below is cross-checked against brute-force
//! pairing enumeration in the bridge module's tests.

use alloc::vec::Vec;

use super::MultiIndex;

/// A connected loopless multigraph with these vertex degrees exists iff
/// either there is a single vertex of degree zero, or every degree is
/// positive, the sum is even, no degree exceeds the sum of the others, and
/// there are enough edges to connect all vertices.
fn connected_degree_sequence(degrees: &[u32]) -> bool {
    let n = degrees.len() as u32;
    if n == 1 {
        return degrees[0] == 0;
    }
    if n == 0 || degrees.iter().any(|&d| d == 0) {
        return false;
    }
    let total: u32 = degrees.iter().sum();
    let max = degrees.iter().copied().max().unwrap_or(0);
    total % 2 == 0 && 2 * max <= total && total / 2 >= n - 1
}

/// True iff some connected loopless pairing of the half-edges of `m`
/// leaves exactly `free_legs` of them unpaired.
///
/// With no free legs a single vertex never counts: it is not a diagram.
pub fn is_populatable(m: &MultiIndex, free_legs: u32) -> bool {
    if m.is_empty() || free_legs > m.half_edges() {
        return false;
    }
    if free_legs == 0 {
        return m.norm() >= 2 && connected_degree_sequence(&m.arities());
    }
    // Distribute the free legs over vertices, trying every split.
    fn rec(arities: &[u32], idx: usize, left: u32, body: &mut Vec<u32>) -> bool {
        if idx == arities.len() {
            return left == 0 && connected_degree_sequence(body);
        }
        let k = arities[idx];
        // Vertices of equal arity are interchangeable: keep the legs
        // nonincreasing within a run to avoid repeats.
        let cap = if idx > 0 && arities[idx - 1] == k {
            arities[idx - 1] - body[idx - 1]
        } else {
            k
        };
        for f in (0..=cap.min(left)).rev() {
            body.push(k - f);
            let ok = rec(arities, idx + 1, left - f, body);
            body.pop();
            if ok {
                return true;
            }
        }
        false
    }
    rec(&m.arities(), 0, free_legs, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(is_populatable(&MultiIndex::z(3, 2), 0));
        assert!(!is_populatable(&MultiIndex::z(3, 1), 0));
        assert!(is_populatable(&MultiIndex::z(4, 2), 2));
        assert!(!is_populatable(&MultiIndex::z(4, 1), 0));
        assert!(is_populatable(&MultiIndex::z(4, 1), 4));
        let z2z4 = MultiIndex::new([(2, 1), (4, 1)]).unwrap();
        assert!(!is_populatable(&z2z4, 0));
        assert!(is_populatable(&MultiIndex::z(2, 2), 0));
        assert!(!is_populatable(&MultiIndex::new([(0, 1), (2, 1)]).unwrap(), 0));
    }
}
