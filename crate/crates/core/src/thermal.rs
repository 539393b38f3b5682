//! Gibbs states `exp(-H/T) / Z` with `k = 1`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, EigenDecomposition};
use crate::tolerances::DEGENERACY;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Temperature {
    Zero,
    Finite(f64),
    Infinite,
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Temperature::Zero => f.write_str("0"),
            Temperature::Finite(t) => write!(f, "{t}"),
            Temperature::Infinite => f.write_str("inf"),
        }
    }
}

/// Partition function stored as `value · exp(-shift / T)`.
///
/// `shift` is zero when the plain trace is representable in `f64`;
/// otherwise it is the ground-state energy subtracted before exponentiating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionFunction {
    pub value: f64,
    pub shift: f64,
    pub temperature: f64,
}

impl PartitionFunction {
    pub fn ln(&self) -> f64 {
        self.value.ln() - self.shift / self.temperature
    }

    /// The plain `tr exp(-H/T)` if it fits in an `f64`.
    pub fn unshifted(&self) -> Option<f64> {
        let z = self.ln().exp();
        (z.is_finite() && z > 0.0).then_some(z)
    }
}

#[derive(Debug, Clone)]
pub struct ThermalState {
    pub rho: ComplexMatrix,
    pub temperature: Temperature,
    /// `None` at the symbolic limits.
    pub partition_function: Option<PartitionFunction>,
}

/// Eigendecomposition of a Hamiltonian, reusable across temperatures.
#[derive(Debug, Clone)]
pub struct Spectrum {
    decomposition: EigenDecomposition,
}

impl Spectrum {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        Ok(Self {
            decomposition: eigh(h)?,
        })
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.decomposition
    }

    pub fn energies(&self) -> &[f64] {
        &self.decomposition.eigenvalues
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies()[0]
    }

    fn check_temperature(temperature: f64) -> Result<()> {
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::domain(format!(
                "temperature must be positive and finite, got {temperature}; \
                 use ground_state for T = 0 or maximally_mixed for T = infinity"
            )));
        }
        Ok(())
    }

    /// Shifted Boltzmann weights `exp((E0 - E_k)/T)`, summing to `value`.
    fn weights(&self, temperature: f64) -> Result<(Vec<f64>, f64)> {
        Self::check_temperature(temperature)?;
        let e0 = self.ground_energy();
        let w: Vec<f64> = self
            .energies()
            .iter()
            .map(|&e| ((e0 - e) / temperature).exp())
            .collect();
        let sum = w.iter().sum();
        Ok((w, sum))
    }

    pub fn partition_function(&self, temperature: f64) -> Result<PartitionFunction> {
        let (_, sum) = self.weights(temperature)?;
        let e0 = self.ground_energy();
        let shifted = PartitionFunction {
            value: sum,
            shift: e0,
            temperature,
        };
        Ok(match shifted.unshifted() {
            Some(z) => PartitionFunction {
                value: z,
                shift: 0.0,
                temperature,
            },
            None => shifted,
        })
    }

    pub fn gibbs(&self, temperature: f64) -> Result<ThermalState> {
        let (w, sum) = self.weights(temperature)?;
        let probs: Vec<f64> = w.iter().map(|x| x / sum).collect();
        Ok(ThermalState {
            rho: self.decomposition.compose(&probs),
            temperature: Temperature::Finite(temperature),
            partition_function: Some(self.partition_function(temperature)?),
        })
    }

    pub fn ground_state(&self) -> ThermalState {
        let energies = self.energies();
        let scale = energies
            .first()
            .into_iter()
            .chain(energies.last())
            .fold(1.0f64, |m, e| m.max(e.abs()));
        let cutoff = self.ground_energy() + DEGENERACY * scale;
        let degeneracy = energies.iter().take_while(|&&e| e <= cutoff).count();
        let probs: Vec<f64> = (0..energies.len())
            .map(|k| {
                if k < degeneracy {
                    1.0 / degeneracy as f64
                } else {
                    0.0
                }
            })
            .collect();
        ThermalState {
            rho: self.decomposition.compose(&probs),
            temperature: Temperature::Zero,
            partition_function: None,
        }
    }
}

/// `exp(-h/T) / tr exp(-h/T)`, exponentiating `(E0 - E)/T` so large `1/T`
/// cannot overflow.
pub fn gibbs_state(h: &ComplexMatrix, temperature: f64) -> Result<ThermalState> {
    Spectrum::check_temperature(temperature)?;
    Spectrum::new(h)?.gibbs(temperature)
}

/// Equal-weight mixture over the ground eigenspace (`T = 0`).
///
/// Levels within `1e-8 · max(1, |E|max)` of the ground energy count as
/// degenerate.
pub fn ground_state(h: &ComplexMatrix) -> Result<ThermalState> {
    Ok(Spectrum::new(h)?.ground_state())
}

/// `I / dim` (`T = infinity`).
pub fn maximally_mixed(dim: usize) -> ThermalState {
    ThermalState {
        rho: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        temperature: Temperature::Infinite,
        partition_function: None,
    }
}

pub fn partition_function(h: &ComplexMatrix, temperature: f64) -> Result<PartitionFunction> {
    Spectrum::check_temperature(temperature)?;
    Spectrum::new(h)?.partition_function(temperature)
}
