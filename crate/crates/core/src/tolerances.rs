//! Numerical thresholds used across the engine.
//!
//! Every threshold lives in [`Tolerances`]; the free constants are its
//! defaults. Functions without a `_with` suffix use the defaults.

/// Largest matrix dimension handled by the dense routines (ten qubits).
pub const MAX_DIM: usize = 1024;

/// Maximum elementwise Hermiticity violation accepted on input.
pub const HERMITIAN_INPUT: f64 = 1e-9;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the full Frobenius norm.
pub const JACOBI_RELATIVE: f64 = 1e-12;

/// Sweep cap for the cyclic Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative eigenvalue gap below which two levels count as degenerate.
pub const DEGENERACY: f64 = 1e-8;

/// Negative eigenvalues down to `-PSD_CLAMP` are treated as round-off zeros.
pub const PSD_CLAMP: f64 = 1e-10;

/// Tolerance for trace, Hermiticity and positivity of a two-qubit density
/// matrix handed to the entanglement measures.
pub const DENSITY_MATRIX: f64 = 1e-8;

/// Concurrence above this value counts as entangled.
pub const ENTANGLED: f64 = 1e-12;

/// Allowed deviation of a pure-state norm from one.
pub const UNIT_NORM: f64 = 1e-10;

/// One configuration record holding every threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian_input: f64,
    pub jacobi_relative: f64,
    pub jacobi_max_sweeps: usize,
    pub degeneracy: f64,
    pub psd_clamp: f64,
    pub density_matrix: f64,
    pub entangled: f64,
    pub unit_norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian_input: HERMITIAN_INPUT,
            jacobi_relative: JACOBI_RELATIVE,
            jacobi_max_sweeps: JACOBI_MAX_SWEEPS,
            degeneracy: DEGENERACY,
            psd_clamp: PSD_CLAMP,
            density_matrix: DENSITY_MATRIX,
            entangled: ENTANGLED,
            unit_norm: UNIT_NORM,
        }
    }
}
