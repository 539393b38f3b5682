//! Critical temperatures, concurrence curves and field sweeps.
//!
//! Grid evaluations run in parallel; results always come back in grid order.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::partial_trace;
use crate::measures::concurrence;
use crate::model::{build_hamiltonian, ModelSpec};
use crate::thermal::Spectrum;
use crate::tolerances::ENTANGLED;

/// Smallest bisection tolerance accepted.
pub const MIN_TOLERANCE: f64 = 1e-8;
/// Default bracket in units of `|J|`.
pub const DEFAULT_BRACKET: (f64, f64) = (0.01, 5.0);
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Two distinct sites, stored in increasing order (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SitePair(usize, usize);

impl SitePair {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::validation(format!(
                "pair sites must differ (got {a}, {b})"
            )));
        }
        Ok(Self(a.min(b), a.max(b)))
    }

    pub fn first(&self) -> usize {
        self.0
    }

    pub fn second(&self) -> usize {
        self.1
    }

    fn check(&self, n_sites: usize) -> Result<()> {
        if self.1 >= n_sites {
            return Err(Error::validation(format!(
                "pair {self} out of range for {n_sites} sites"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SitePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// A model diagonalized once and evaluated at many temperatures.
#[derive(Debug, Clone)]
pub struct PairProbe {
    spec: ModelSpec,
    pair: SitePair,
    spectrum: Spectrum,
}

impl PairProbe {
    pub fn new(spec: &ModelSpec, pair: SitePair) -> Result<Self> {
        pair.check(spec.n_sites())?;
        Ok(Self {
            spec: spec.clone(),
            pair,
            spectrum: Spectrum::new(&build_hamiltonian(spec)?)?,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn concurrence(&self, temperature: f64) -> Result<f64> {
        self.evaluate(temperature).map_err(|e| Error::AtPoint {
            coupling: self.spec.coupling(),
            fields: self.spec.fields().to_vec(),
            temperature,
            source: Box::new(e),
        })
    }

    fn evaluate(&self, temperature: f64) -> Result<f64> {
        let state = self.spectrum.gibbs(temperature)?;
        let reduced = partial_trace(
            &state.rho,
            &[self.pair.first(), self.pair.second()],
            self.spec.n_sites(),
        )?;
        Ok(concurrence(&reduced)?.concurrence)
    }

    fn entangled(&self, temperature: f64) -> Result<(bool, f64)> {
        let c = self.concurrence(temperature)?;
        Ok((c > ENTANGLED, c))
    }
}

/// Concurrence of `pair` in the Gibbs state of `spec` at temperature `T`.
pub fn concurrence_at(spec: &ModelSpec, pair: SitePair, temperature: f64) -> Result<f64> {
    PairProbe::new(spec, pair)?.concurrence(temperature)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalResult {
    /// `None` when the input bracket does not straddle a transition.
    pub t_c: Option<f64>,
    /// Final bracket `(entangled, not entangled)`; the input bracket when
    /// `t_c` is `None`.
    pub bracket: (f64, f64),
    /// Interval the search started from.
    pub search_interval: (f64, f64),
    /// Concurrences at the two ends of `search_interval`.
    pub endpoint_concurrence: (f64, f64),
    pub tolerance: f64,
    pub iterations: usize,
    pub pair: SitePair,
}

fn check_bracket(t_low: f64, t_high: f64, tol: f64) -> Result<()> {
    if !(t_low > 0.0 && t_low < t_high && t_high.is_finite()) {
        return Err(Error::validation(format!(
            "bracket must satisfy 0 < t_low < t_high, got ({t_low}, {t_high})"
        )));
    }
    if !(tol >= MIN_TOLERANCE) {
        return Err(Error::validation(format!(
            "tolerance {tol} below the minimum {MIN_TOLERANCE}"
        )));
    }
    Ok(())
}

/// Bisects the indicator `concurrence > 1e-12` between `t_low` (entangled)
/// and `t_high` (not entangled) until the bracket is narrower than `tol`.
///
/// Assumes a single crossing inside the bracket.
pub fn find_critical_temperature(
    spec: &ModelSpec,
    pair: SitePair,
    t_low: f64,
    t_high: f64,
    tol: f64,
) -> Result<CriticalResult> {
    check_bracket(t_low, t_high, tol)?;
    bisect(&PairProbe::new(spec, pair)?, t_low, t_high, tol)
}

fn bisect(probe: &PairProbe, t_low: f64, t_high: f64, tol: f64) -> Result<CriticalResult> {
    let (low_in, c_low) = probe.entangled(t_low)?;
    let (high_in, c_high) = probe.entangled(t_high)?;
    let mut result = CriticalResult {
        t_c: None,
        bracket: (t_low, t_high),
        search_interval: (t_low, t_high),
        endpoint_concurrence: (c_low, c_high),
        tolerance: tol,
        iterations: 0,
        pair: probe.pair,
    };
    if !low_in || high_in {
        return Ok(result);
    }
    let (mut lo, mut hi) = (t_low, t_high);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if probe.entangled(mid)?.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        result.iterations += 1;
    }
    result.bracket = (lo, hi);
    result.t_c = Some(0.5 * (lo + hi));
    Ok(result)
}

/// Scans `temperatures` for the last entangled point and bisects the cell
/// after it. Handles curves that start unentangled at low temperature.
pub fn last_crossing(
    spec: &ModelSpec,
    pair: SitePair,
    temperatures: &[f64],
    tol: f64,
) -> Result<CriticalResult> {
    check_grid(temperatures)?;
    let probe = PairProbe::new(spec, pair)?;
    let flags = temperatures
        .par_iter()
        .map(|&t| probe.entangled(t).map(|(e, _)| e))
        .collect::<Result<Vec<_>>>()?;
    let (first, last) = (temperatures[0], *temperatures.last().unwrap());
    match flags.iter().rposition(|&e| e) {
        Some(k) if k + 1 < temperatures.len() => {
            check_bracket(temperatures[k], temperatures[k + 1], tol)?;
            let mut r = bisect(&probe, temperatures[k], temperatures[k + 1], tol)?;
            r.search_interval = (first, last);
            Ok(r)
        }
        _ => {
            check_bracket(first, last, tol)?;
            bisect(&probe, first, last, tol)
        }
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::validation("grid must be nonempty"));
    }
    if grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::validation("grid values must be positive and finite"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("grid must be strictly increasing"));
    }
    Ok(())
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|k| {
                    if k + 1 == count {
                        stop
                    } else {
                        start + step * k as f64
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    /// Scaled temperature `kT / |J|`.
    pub tau: f64,
    pub concurrence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceCurve {
    pub points: Vec<CurvePoint>,
    pub model: ModelSpec,
    pub pair: SitePair,
    /// Free-form description of how analytic fields map onto `model`.
    pub note: String,
}

impl ConcurrenceCurve {
    pub fn taus(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.tau).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.concurrence).collect()
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Concurrence at `T = tau · |J|` for each `tau` in the grid.
pub fn curve(spec: &ModelSpec, pair: SitePair, tau_grid: &[f64]) -> Result<ConcurrenceCurve> {
    let scale = spec.coupling().abs();
    if scale == 0.0 {
        return Err(Error::domain(
            "scaled temperature tau = T/|J| is undefined for J = 0",
        ));
    }
    check_grid(tau_grid)?;
    let probe = PairProbe::new(spec, pair)?;
    let points = tau_grid
        .par_iter()
        .map(|&tau| {
            probe.concurrence(tau * scale).map(|c| CurvePoint {
                tau,
                concurrence: c,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcurrenceCurve {
        points,
        model: spec.clone(),
        pair,
        note: String::new(),
    })
}

/// How a scalar field strength `B` is spread over the sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FieldLayout {
    /// `b_n = per_site · B` on every site.
    Uniform { per_site: f64 },
    /// `b_site = scale · B`, zero elsewhere.
    Impurity { site: usize, scale: f64 },
}

impl FieldLayout {
    pub fn fields(&self, n_sites: usize, strength: f64) -> Vec<f64> {
        match *self {
            FieldLayout::Uniform { per_site } => vec![per_site * strength; n_sites],
            FieldLayout::Impurity { site, scale } => {
                let mut f = vec![0.0; n_sites];
                if let Some(b) = f.get_mut(site) {
                    *b = scale * strength;
                }
                f
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub field: f64,
    pub result: CriticalResult,
}

/// Critical temperature for each field strength in `field_grid`.
pub fn sweep_field(
    template: &ModelSpec,
    layout: FieldLayout,
    pair: SitePair,
    field_grid: &[f64],
    bracket: (f64, f64),
    tol: f64,
) -> Result<Vec<SweepRow>> {
    if let FieldLayout::Impurity { site, .. } = layout {
        if site >= template.n_sites() {
            return Err(Error::validation(format!(
                "impurity site {site} out of range for {} sites",
                template.n_sites()
            )));
        }
    }
    check_bracket(bracket.0, bracket.1, tol)?;
    field_grid
        .par_iter()
        .map(|&b| {
            let spec = template.with_fields(layout.fields(template.n_sites(), b))?;
            let result = find_critical_temperature(&spec, pair, bracket.0, bracket.1, tol)?;
            Ok(SweepRow { field: b, result })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_validation() {
        assert!(SitePair::new(1, 1).is_err());
        assert_eq!(SitePair::new(2, 0).unwrap(), SitePair::new(0, 2).unwrap());
        let spec = ModelSpec::xx_ring(2, 1.0, 0.0).unwrap();
        assert!(concurrence_at(&spec, SitePair::new(0, 2).unwrap(), 1.0).is_err());
    }

    #[test]
    fn two_site_value_matches_closed_form() {
        let spec = ModelSpec::xx_ring(2, 1.0, 0.0).unwrap();
        let c = concurrence_at(&spec, SitePair::new(0, 1).unwrap(), 1.0).unwrap();
        assert!((c - 0.06889329077704602).abs() < 1e-12);
    }

    #[test]
    fn bisection_and_none_cases() {
        let pair = SitePair::new(0, 1).unwrap();
        let spec = ModelSpec::xx_ring(2, 1.0, 0.0).unwrap();
        let r = find_critical_temperature(&spec, pair, 0.5, 2.0, 1e-6).unwrap();
        let tc = r.t_c.unwrap();
        assert!((tc - 1.134592657106511).abs() < 1e-6);
        assert!(r.bracket.1 - r.bracket.0 <= 1e-6);
        assert!(r.iterations > 0);

        // The ferromagnetic XX pair is a local rotation of the antiferromagnetic one.
        let ferro = ModelSpec::xx_ring(2, -1.0, 0.0).unwrap();
        let r = find_critical_temperature(&ferro, pair, 0.5, 2.0, 1e-6).unwrap();
        assert!((r.t_c.unwrap() - 1.134592657106511).abs() < 1e-6);

        let frustrated = ModelSpec::xx_ring(3, 1.0, 0.0).unwrap();
        let r = find_critical_temperature(&frustrated, pair, 0.5, 2.0, 1e-6).unwrap();
        assert_eq!(r.t_c, None);
        assert_eq!(r.endpoint_concurrence, (0.0, 0.0));

        assert!(find_critical_temperature(&spec, pair, 2.0, 0.5, 1e-6).is_err());
        assert!(find_critical_temperature(&spec, pair, 0.5, 2.0, 1e-10).is_err());
    }

    #[test]
    fn tau_scaling_requires_coupling() {
        let spec = ModelSpec::xx_ring(2, 0.0, 0.5).unwrap();
        let err = curve(&spec, SitePair::new(0, 1).unwrap(), &[0.1, 0.2]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn curve_grid_validation() {
        let spec = ModelSpec::xx_ring(2, 1.0, 0.0).unwrap();
        let pair = SitePair::new(0, 1).unwrap();
        assert!(curve(&spec, pair, &[]).is_err());
        assert!(curve(&spec, pair, &[0.2, 0.1]).is_err());
        assert!(curve(&spec, pair, &[0.0, 0.1]).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.02, 3.0, 150);
        assert_eq!(g.len(), 150);
        assert_eq!(g[0], 0.02);
        assert_eq!(g[149], 3.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn field_layouts() {
        assert_eq!(
            FieldLayout::Uniform { per_site: 0.5 }.fields(2, 2.0),
            vec![1.0, 1.0]
        );
        assert_eq!(
            FieldLayout::Impurity {
                site: 2,
                scale: 1.0
            }
            .fields(3, 4.0),
            vec![0.0, 0.0, 4.0]
        );
    }
}
