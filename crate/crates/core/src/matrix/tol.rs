/// Floating-point thresholds. Relative tolerances are scaled by a norm of
/// the matrix under test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Symmetry check, relative to the largest entry.
    pub sym_tol: f64,
    /// Eigenvalues in `[-psd_tol * ||A||, 0]` are clamped to zero.
    pub psd_tol: f64,
    /// Relative singular-value cutoff for numerical kernels and ranks.
    pub rank_tol: f64,
    /// Jacobi stops once the off-diagonal Frobenius mass is below `eig_tol * ||A||_F`.
    pub eig_tol: f64,
    pub max_sweeps: usize,
    /// Cholesky pivots at or below this value reject the matrix.
    pub pivot_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym_tol: 1e-12,
            psd_tol: 1e-10,
            rank_tol: 1e-10,
            eig_tol: 1e-14,
            max_sweeps: 30,
            pivot_floor: 0.0,
        }
    }
}
