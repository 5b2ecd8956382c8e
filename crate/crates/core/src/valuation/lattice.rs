//! Numeric valuations on a periodic lattice.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::Error;
use crate::feynman::Diagram;

/// Largest number of vertex placements a single lattice sum may visit.
pub const MAX_PLACEMENTS: u128 = 1 << 24;

/// A symmetric kernel sampled on the torus (Z/N)^d.
///
/// `values` is indexed in row-major order of the offset coordinates. The
/// value at the origin must be finite: kernels are regularised by the
/// caller.
#[derive(Clone, PartialEq, Debug)]
pub struct KernelSpec {
    d: u32,
    side: u32,
    values: Vec<f64>,
}

impl KernelSpec {
    pub fn new(d: u32, side: u32, values: Vec<f64>) -> Result<Self, Error> {
        if d == 0 || side == 0 {
            return Err(Error::Kernel("dimension and side must be positive".to_string()));
        }
        let points = (side as u128).checked_pow(d).filter(|&p| p <= MAX_PLACEMENTS);
        let Some(points) = points else {
            return Err(Error::Kernel("lattice too large".to_string()));
        };
        if values.len() as u128 != points {
            return Err(Error::Kernel(alloc::format!("expected {points} samples, got {}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Kernel("samples must be finite".to_string()));
        }
        let k = KernelSpec { d, side, values };
        for p in 0..k.points() {
            let (a, b) = (k.values[p], k.values[k.negate(p)]);
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::Kernel(alloc::format!("K is not symmetric at offset index {p}")));
            }
        }
        Ok(k)
    }

    /// K ≡ c.
    pub fn constant(d: u32, side: u32, c: f64) -> Self {
        KernelSpec { d, side, values: alloc::vec![c; (side as usize).pow(d)] }
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn points(&self) -> usize {
        self.values.len()
    }

    fn coords(&self, mut p: usize) -> Vec<u32> {
        let mut c = alloc::vec![0; self.d as usize];
        for slot in c.iter_mut().rev() {
            *slot = (p % self.side as usize) as u32;
            p /= self.side as usize;
        }
        c
    }

    fn index(&self, c: &[u32]) -> usize {
        c.iter().fold(0, |acc, &x| acc * self.side as usize + x as usize)
    }

    fn negate(&self, p: usize) -> usize {
        let c: Vec<u32> = self.coords(p).iter().map(|&x| (self.side - x) % self.side).collect();
        self.index(&c)
    }

    /// K(p - q) for all lattice points, as a flat table.
    fn difference_table(&self) -> Vec<f64> {
        let n = self.points();
        let coords: Vec<Vec<u32>> = (0..n).map(|p| self.coords(p)).collect();
        let mut t = alloc::vec![0.0; n * n];
        for p in 0..n {
            for q in 0..n {
                let diff: Vec<u32> =
                    coords[p].iter().zip(&coords[q]).map(|(&a, &b)| (a + self.side - b) % self.side).collect();
                t[p * n + q] = self.values[self.index(&diff)];
            }
        }
        t
    }
}

/// Π_F(Γ) = ∫ ∏_e K(x_e+ - x_e-) with the normalised counting measure.
///
/// The torus is translation invariant, so vertex 0 is pinned at the
/// origin and the remaining placements are summed in a fixed order.
pub fn value_f_numeric(g: &Diagram, k: &KernelSpec) -> Result<f64, Error> {
    let n = k.points();
    let free = g.vertex_count() as usize - 1;
    let placements = (n as u128).checked_pow(free as u32).unwrap_or(u128::MAX);
    if placements > MAX_PLACEMENTS {
        return Err(Error::SizeLimitExceeded(placements));
    }
    let table = k.difference_table();
    let mut pos = alloc::vec![0usize; free + 1];
    let mut total = 0.0;
    loop {
        let mut prod = 1.0;
        for &(u, v) in g.edges() {
            prod *= table[pos[u as usize] * n + pos[v as usize]];
        }
        total += prod;
        let mut i = 1;
        loop {
            if i > free {
                return Ok(total / placements as f64);
            }
            pos[i] += 1;
            if pos[i] < n {
                break;
            }
            pos[i] = 0;
            i += 1;
        }
    }
}
