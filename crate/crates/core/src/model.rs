//! Heisenberg-family spin rings.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = (J/2) Σ_bonds (σx σx + σy σy + Δ σz σz) + Σ_n b_n σz_n
//! ```
//!
//! with each nearest-neighbour bond counted once. `Δ = 0` is the XX model.
//! `σz|0> = +|0>` and site 0 is the most significant qubit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64};

pub const MIN_SITES: usize = 2;
pub const MAX_SITES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let rows = match self {
            Pauli::X => vec![vec![o, one], vec![one, o]],
            Pauli::Y => vec![vec![o, -i], vec![i, o]],
            Pauli::Z => vec![vec![one, o], vec![o, -one]],
        };
        ComplexMatrix::from_rows(&rows).expect("2x2 Pauli matrix")
    }
}

/// `I ⊗ … ⊗ σ ⊗ … ⊗ I` with `σ` at position `site`.
pub fn pauli_at_site(which: Pauli, site: usize, n_sites: usize) -> Result<ComplexMatrix> {
    if n_sites == 0 || n_sites > MAX_SITES {
        return Err(Error::validation(format!(
            "site count {n_sites} outside 1..={MAX_SITES}"
        )));
    }
    if site >= n_sites {
        return Err(Error::validation(format!(
            "site {site} out of range for {n_sites} sites"
        )));
    }
    let id = ComplexMatrix::identity(2);
    let sigma = which.matrix();
    let factor = |k: usize| if k == site { &sigma } else { &id };
    let mut out = factor(0).clone();
    for k in 1..n_sites {
        out = kron(&out, factor(k))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Cyclic,
    Open,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Cyclic => "cyclic",
            Boundary::Open => "open",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cyclic" | "periodic" | "ring" => Ok(Boundary::Cyclic),
            "open" | "chain" => Ok(Boundary::Open),
            other => Err(Error::validation(format!("unknown boundary '{other}'"))),
        }
    }
}

/// A spin ring: site count, coupling `J`, zz weight `Δ`, per-site fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    n_sites: usize,
    coupling: f64,
    zz_weight: f64,
    fields: Vec<f64>,
    boundary: Boundary,
}

impl ModelSpec {
    pub fn new(
        n_sites: usize,
        coupling: f64,
        zz_weight: f64,
        fields: Vec<f64>,
        boundary: Boundary,
    ) -> Result<Self> {
        if !(MIN_SITES..=MAX_SITES).contains(&n_sites) {
            return Err(Error::validation(format!(
                "site count {n_sites} outside {MIN_SITES}..={MAX_SITES}"
            )));
        }
        if fields.len() != n_sites {
            return Err(Error::validation(format!(
                "expected {n_sites} field values, got {}",
                fields.len()
            )));
        }
        if !coupling.is_finite() || !zz_weight.is_finite() || fields.iter().any(|b| !b.is_finite())
        {
            return Err(Error::validation(
                "coupling, zz weight and fields must be finite",
            ));
        }
        Ok(Self {
            n_sites,
            coupling,
            zz_weight,
            fields,
            boundary,
        })
    }

    /// Cyclic XX ring with the same field on every site.
    pub fn xx_ring(n_sites: usize, coupling: f64, field: f64) -> Result<Self> {
        Self::new(
            n_sites,
            coupling,
            0.0,
            vec![field; n_sites],
            Boundary::Cyclic,
        )
    }

    /// Cyclic XX ring with explicit per-site fields.
    pub fn xx_ring_with_fields(coupling: f64, fields: Vec<f64>) -> Result<Self> {
        Self::new(fields.len(), coupling, 0.0, fields, Boundary::Cyclic)
    }

    /// Cyclic XX ring with a single impurity field `B·|J|` on the last site.
    pub fn xx_impurity_ring(n_sites: usize, coupling: f64, strength: f64) -> Result<Self> {
        let mut fields = vec![0.0; n_sites.max(1)];
        if let Some(last) = fields.last_mut() {
            *last = strength * coupling.abs();
        }
        Self::new(n_sites, coupling, 0.0, fields, Boundary::Cyclic)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn zz_weight(&self) -> f64 {
        self.zz_weight
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn with_fields(&self, fields: Vec<f64>) -> Result<Self> {
        Self::new(
            self.n_sites,
            self.coupling,
            self.zz_weight,
            fields,
            self.boundary,
        )
    }

    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        Self::new(
            self.n_sites,
            coupling,
            self.zz_weight,
            self.fields.clone(),
            self.boundary,
        )
    }

    /// Nearest-neighbour pairs, each listed once. A two-site ring has one bond.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        let mut bonds: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Cyclic && n > 2 {
            bonds.push((0, n - 1));
        }
        bonds
    }

    /// Parses `key = value` pairs. Recognised keys: `sites`, `coupling`,
    /// `zz-weight`, `field` (comma list or repeated), `uniform-field`,
    /// `impurity-field` (applied to the last site, scaled by `|J|`),
    /// `boundary`. `#` starts a comment.
    pub fn from_record(text: &str) -> Result<Self> {
        let mut builder = ModelBuilder::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::validation(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            builder
                .set(key.trim(), value.trim())
                .map_err(|e| Error::validation(format!("line {}: {e}", lineno + 1)))?;
        }
        builder.build()
    }

    pub fn summary(&self) -> String {
        format!(
            "sites={} coupling={} zz_weight={} fields=[{}] boundary={}",
            self.n_sites,
            self.coupling,
            self.zz_weight,
            self.fields
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(","),
            self.boundary
        )
    }
}

/// Accumulates model keys from a config record or command-line flags.
#[derive(Debug, Clone, Default)]
pub struct ModelBuilder {
    pub sites: Option<usize>,
    pub coupling: Option<f64>,
    pub zz_weight: Option<f64>,
    pub fields: Vec<f64>,
    pub uniform_field: Option<f64>,
    pub impurity_field: Option<f64>,
    pub boundary: Option<Boundary>,
}

impl ModelBuilder {
    /// Returns an error for unknown keys or unparseable values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::validation(format!("'{v}' is not a number (key '{key}')")))
        };
        match key.trim_start_matches("--") {
            "sites" => {
                self.sites = Some(
                    value
                        .parse()
                        .map_err(|_| Error::validation(format!("'{value}' is not a site count")))?,
                )
            }
            "coupling" => self.coupling = Some(num(value)?),
            "zz-weight" | "zz_weight" => self.zz_weight = Some(num(value)?),
            "field" | "fields" => {
                for part in value.split(',').filter(|s| !s.trim().is_empty()) {
                    self.fields.push(num(part)?);
                }
            }
            "uniform-field" | "uniform_field" => self.uniform_field = Some(num(value)?),
            "impurity-field" | "impurity_field" => self.impurity_field = Some(num(value)?),
            "boundary" => self.boundary = Some(value.parse()?),
            other => return Err(Error::validation(format!("unknown model key '{other}'"))),
        }
        Ok(())
    }

    pub fn is_model_key(key: &str) -> bool {
        matches!(
            key.trim_start_matches("--"),
            "sites"
                | "coupling"
                | "zz-weight"
                | "zz_weight"
                | "field"
                | "fields"
                | "uniform-field"
                | "uniform_field"
                | "impurity-field"
                | "impurity_field"
                | "boundary"
        )
    }

    pub fn build(&self) -> Result<ModelSpec> {
        let given = [
            !self.fields.is_empty(),
            self.uniform_field.is_some(),
            self.impurity_field.is_some(),
        ]
        .iter()
        .filter(|&&x| x)
        .count();
        if given > 1 {
            return Err(Error::validation(
                "give at most one of field, uniform-field, impurity-field",
            ));
        }
        let sites = self
            .sites
            .or((!self.fields.is_empty()).then_some(self.fields.len()))
            .ok_or_else(|| Error::validation("missing 'sites'"))?;
        if !(MIN_SITES..=MAX_SITES).contains(&sites) {
            return Err(Error::validation(format!(
                "site count {sites} outside {MIN_SITES}..={MAX_SITES}"
            )));
        }
        let coupling = self
            .coupling
            .ok_or_else(|| Error::validation("missing 'coupling'"))?;
        let fields = if !self.fields.is_empty() {
            self.fields.clone()
        } else if let Some(b) = self.uniform_field {
            vec![b; sites]
        } else if let Some(b) = self.impurity_field {
            let mut f = vec![0.0; sites];
            f[sites - 1] = b * coupling.abs();
            f
        } else {
            vec![0.0; sites]
        };
        ModelSpec::new(
            sites,
            coupling,
            self.zz_weight.unwrap_or(0.0),
            fields,
            self.boundary.unwrap_or(Boundary::Cyclic),
        )
    }
}

/// Builds the Hamiltonian directly in the computational basis.
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<ComplexMatrix> {
    let n = spec.n_sites();
    let dim = spec.dim();
    let bit = |site: usize| 1usize << (n - 1 - site);
    let spin = |state: usize, site: usize| if state & bit(site) == 0 { 1.0 } else { -1.0 };
    let half_j = 0.5 * spec.coupling();
    let bonds = spec.bonds();

    let mut h = ComplexMatrix::zeros(dim);
    for state in 0..dim {
        let mut diag: f64 = spec
            .fields()
            .iter()
            .enumerate()
            .map(|(site, b)| b * spin(state, site))
            .sum();
        for &(i, j) in &bonds {
            diag += half_j * spec.zz_weight() * spin(state, i) * spin(state, j);
            // σxσx + σyσy = 2(σ+σ- + σ-σ+): flips antiparallel pairs with amplitude 2.
            if spin(state, i) != spin(state, j) {
                let flipped = state ^ bit(i) ^ bit(j);
                h[(flipped, state)] += C64::new(2.0 * half_j, 0.0);
            }
        }
        h[(state, state)] += C64::new(diag, 0.0);
    }
    Ok(h)
}
