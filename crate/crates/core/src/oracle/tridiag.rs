//! Thomas algorithm for constant-coefficient symmetric tridiagonal systems.

use alloc::vec::Vec;

/// `diag` on the main diagonal, `off` on both neighbours. Elimination factors
/// are computed once and reused for every right-hand side.
#[derive(Debug, Clone)]
pub struct ConstTridiagonal {
    off: f64,
    /// Modified super-diagonal `c'_i`.
    upper: Vec<f64>,
    /// `1 / (diag - off * c'_{i-1})`.
    inv_pivot: Vec<f64>,
}

impl ConstTridiagonal {
    /// Requires `|diag| > 2 |off|` for stability without pivoting.
    pub fn new(n: usize, diag: f64, off: f64) -> Self {
        let mut upper = Vec::with_capacity(n);
        let mut inv_pivot = Vec::with_capacity(n);
        let mut prev = 0.0;
        for _ in 0..n {
            let inv = 1.0 / (diag - off * prev);
            prev = off * inv;
            inv_pivot.push(inv);
            upper.push(prev);
        }
        Self { off, upper, inv_pivot }
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    /// Overwrite `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        assert_eq!(rhs.len(), self.len(), "right-hand side length");
        let mut prev = 0.0;
        for (d, &inv) in rhs.iter_mut().zip(&self.inv_pivot) {
            *d = (*d - self.off * prev) * inv;
            prev = *d;
        }
        let mut next = 0.0;
        for (x, &c) in rhs.iter_mut().zip(&self.upper).rev() {
            *x -= c * next;
            next = *x;
        }
    }
}
