//! Thermal entanglement in small Heisenberg XX spin rings.
//!
//! The engine builds ring Hamiltonians, forms Gibbs states by exact
//! diagonalization, reduces them to two-site states and measures their
//! Wootters concurrence. Analytic two- and three-site results live in
//! [`closed_form`] and are checked against the engine in the test suite;
//! [`scan`] locates the temperatures above which a pair stops being
//! entangled.
//!
//! ```
//! use spinring_core::{concurrence_at, ModelSpec, SitePair};
//!
//! let ring = ModelSpec::xx_ring(2, 1.0, 0.0).unwrap();
//! let c = concurrence_at(&ring, SitePair::new(0, 1).unwrap(), 1.0).unwrap();
//! assert!((c - 0.0689).abs() < 1e-4);
//! ```

pub mod closed_form;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod model;
pub mod scan;
pub mod thermal;
pub mod tolerances;

pub use error::{Error, Result};
pub use linalg::{
    eigh, func_of_hermitian, kron, partial_trace, ComplexMatrix, EigenDecomposition, C64,
};
pub use measures::{
    concurrence, entanglement_of_formation, pure_concurrence, spin_flip, ConcurrenceReport,
};
pub use model::{build_hamiltonian, pauli_at_site, Boundary, ModelBuilder, ModelSpec, Pauli};
pub use scan::{
    concurrence_at, curve, find_critical_temperature, last_crossing, linspace, sweep_field,
    ConcurrenceCurve, CriticalResult, CurvePoint, FieldLayout, SitePair, SweepRow,
};
pub use thermal::{
    gibbs_state, ground_state, maximally_mixed, partition_function, Spectrum, Temperature,
    ThermalState,
};
pub use tolerances::Tolerances;
