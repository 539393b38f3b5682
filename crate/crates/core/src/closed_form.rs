//! Analytic two-site and three-site results for the XX ring.
//!
//! Field conventions relative to [`crate::model::build_hamiltonian`]:
//!
//! * two sites: the analytic field `B` equals `2 b`, i.e. each engine site
//!   carries `b = B / 2` ([`TWO_SITE_FIELD_PER_SITE`]);
//! * three sites: the analytic `B` enters with the opposite sign, each
//!   engine site carries `b = -B` ([`THREE_SITE_FIELD_PER_SITE`]). Flipping
//!   the sign of `B` only swaps the `u` and `v` entries, so concurrences do
//!   not depend on it.
//!
//! All exponentials are evaluated relative to the largest exponent present,
//! so the formulas stay finite for `|J|/T` and `|B|/T` in the hundreds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::ModelSpec;

/// Engine field per site, in units of the two-site analytic `B`.
pub const TWO_SITE_FIELD_PER_SITE: f64 = 0.5;
/// Engine field per site, in units of the three-site analytic `B`.
pub const THREE_SITE_FIELD_PER_SITE: f64 = -1.0;

fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "temperature must be positive and finite, got {t}"
        )))
    }
}

/// Engine model reproducing the two-site closed form for `(J, B)`.
pub fn two_site_engine_model(coupling: f64, field: f64) -> Result<ModelSpec> {
    ModelSpec::xx_ring(2, coupling, TWO_SITE_FIELD_PER_SITE * field)
}

/// Engine model reproducing the three-site uniform-field closed form.
pub fn three_site_engine_model(coupling: f64, field: f64) -> Result<ModelSpec> {
    ModelSpec::xx_ring(3, coupling, THREE_SITE_FIELD_PER_SITE * field)
}

/// Normalized entries of the two-site Gibbs state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSiteElements {
    /// `1 / (2 cosh(J/T) + 2 cosh(B/T))`; underflows to zero for extreme inputs.
    pub a: f64,
    /// `A e^{-B/T}`, the `|00>` population.
    pub diag_minus: f64,
    /// `A e^{B/T}`, the `|11>` population.
    pub diag_plus: f64,
    /// `A cosh(J/T)`.
    pub cosh_term: f64,
    /// `A sinh(J/T)`; the off-diagonal entry is `-sinh_term`.
    pub sinh_term: f64,
}

impl TwoSiteElements {
    pub fn new(coupling: f64, field: f64, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        let (j, b) = (coupling / temperature, field / temperature);
        let s = j.abs().max(b.abs());
        let ex = |x: f64| (x - s).exp();
        let ch = 0.5 * (ex(j) + ex(-j));
        let sh = 0.5 * (ex(j) - ex(-j));
        let (em, ep) = (ex(-b), ex(b));
        let norm = 2.0 * ch + em + ep;
        Ok(Self {
            a: (-s).exp() / norm,
            diag_minus: em / norm,
            diag_plus: ep / norm,
            cosh_term: ch / norm,
            sinh_term: sh / norm,
        })
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::from_diag(&[
            self.diag_minus,
            self.cosh_term,
            self.cosh_term,
            self.diag_plus,
        ]);
        m[(1, 2)] = C64::new(-self.sinh_term, 0.0);
        m[(2, 1)] = C64::new(-self.sinh_term, 0.0);
        m
    }
}

/// Two-site Gibbs state in closed form.
pub fn rho12_two_site(coupling: f64, field: f64, temperature: f64) -> Result<ComplexMatrix> {
    Ok(TwoSiteElements::new(coupling, field, temperature)?.matrix())
}

/// `max((sinh(J/T) - 1) / (cosh(J/T) + cosh(B/T)), 0)`, as an analytic
/// formula. It is zero for every `J <= 0`; the state itself is not, see
/// [`two_site_state_concurrence`].
pub fn concurrence_two_site(coupling: f64, field: f64, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    let (j, b) = (coupling / temperature, field / temperature);
    let s = j.abs().max(b.abs());
    let ex = |x: f64| (x - s).exp();
    let numerator = 0.5 * (ex(j) - ex(-j)) - ex(0.0);
    let denominator = 0.5 * (ex(j) + ex(-j)) + 0.5 * (ex(b) + ex(-b));
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

/// Wootters concurrence of the two-site Gibbs state,
/// `max((|sinh(J/T)| - 1) / (cosh(J/T) + cosh(B/T)), 0)`.
///
/// For the XX ring `J -> -J` is the local unitary `σz ⊗ I`, so the
/// ferromagnetic pair is entangled below the same temperature as the
/// antiferromagnetic one.
pub fn two_site_state_concurrence(coupling: f64, field: f64, temperature: f64) -> Result<f64> {
    concurrence_two_site(coupling.abs(), field, temperature)
}

/// `J / arcsinh(1) = J / ln(1 + √2)` for `J > 0`; `None` when the pair is
/// never entangled. Independent of the field.
pub fn two_site_critical_temperature(coupling: f64) -> Option<f64> {
    (coupling > 0.0).then(|| coupling / std::f64::consts::SQRT_2.ln_1p())
}

/// Elements of the three-site reduced state
/// `rho12 = (2 / 3Z) [[u, 0, 0, 0], [0, w, y, 0], [0, y, w, 0], [0, 0, 0, v]]`.
///
/// `u`, `v`, `w`, `y` and `partition` are all multiplied by
/// `exp(-log_scale)`; their ratios are exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeSiteElements {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub y: f64,
    /// `exp(beta J)`.
    pub z: f64,
    pub partition: f64,
    pub beta: f64,
    pub log_scale: f64,
}

impl ThreeSiteElements {
    pub fn new(coupling: f64, field: f64, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        let beta = 1.0 / temperature;
        let (bj, bb) = (beta * coupling, beta * field);
        let s = (3.0 * bb.abs()).max(bb.abs() + bj.max(-2.0 * bj));
        let ex = |x: f64| (x - s).exp();
        // e^{±βB} (2z + z⁻²)
        let g_plus = 2.0 * ex(bb + bj) + ex(bb - 2.0 * bj);
        let g_minus = 2.0 * ex(-bb + bj) + ex(-bb - 2.0 * bj);
        let u = 1.5 * ex(3.0 * bb) + 0.5 * g_plus;
        let v = 1.5 * ex(-3.0 * bb) + 0.5 * g_minus;
        let w = 0.5 * (g_plus + g_minus);
        let y = 0.5 * (ex(bb - 2.0 * bj) + ex(-bb - 2.0 * bj) - ex(bb + bj) - ex(-bb + bj));
        let partition = ex(3.0 * bb) + ex(-3.0 * bb) + g_plus + g_minus;
        Ok(Self {
            u,
            v,
            w,
            y,
            z: bj.exp(),
            partition,
            beta,
            log_scale: s,
        })
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let pre = 2.0 / (3.0 * self.partition);
        let mut m =
            ComplexMatrix::from_diag(&[pre * self.u, pre * self.w, pre * self.w, pre * self.v]);
        m[(1, 2)] = C64::new(pre * self.y, 0.0);
        m[(2, 1)] = C64::new(pre * self.y, 0.0);
        m
    }

    /// `(4 / 3Z) max(|y| - sqrt(uv), 0)`.
    pub fn concurrence(&self) -> f64 {
        let raw = self.y.abs() - (self.u * self.v).sqrt();
        (4.0 / (3.0 * self.partition) * raw).clamp(0.0, 1.0)
    }
}

/// Three-site uniform-field reduced state of sites 1 and 2.
pub fn rho12_three_site_uniform(
    coupling: f64,
    field: f64,
    temperature: f64,
) -> Result<(ComplexMatrix, ThreeSiteElements)> {
    let el = ThreeSiteElements::new(coupling, field, temperature)?;
    Ok((el.matrix(), el))
}

pub fn concurrence_three_site(coupling: f64, field: f64, temperature: f64) -> Result<f64> {
    Ok(ThreeSiteElements::new(coupling, field, temperature)?.concurrence())
}

/// Zero-field three-site test `2|z⁻² - z| - 3 - 2z - z⁻² > 0`, `z = e^{J/T}`.
pub fn three_site_entanglement_condition(coupling: f64, temperature: f64) -> Result<bool> {
    check_temperature(temperature)?;
    let bj = coupling / temperature;
    let s = bj.max(-2.0 * bj).max(0.0);
    let ex = |x: f64| (x - s).exp();
    let (z, zm2) = (ex(bj), ex(-2.0 * bj));
    Ok(2.0 * (zm2 - z).abs() - 3.0 * ex(0.0) - 2.0 * z - zm2 > 0.0)
}

/// Real root of `a³ - 3a - 4 = 0`: `∛(2 + √3) + ∛(2 - √3)`.
pub fn three_site_cubic_root() -> f64 {
    let r3 = 3f64.sqrt();
    (2.0 + r3).cbrt() + (2.0 - r3).cbrt()
}

/// Zero-field three-site critical temperature `|J| / ln a*` for `J < 0`;
/// `None` for `J >= 0` (never entangled).
pub fn three_site_critical_temperature(coupling: f64) -> Option<f64> {
    (coupling < 0.0).then(|| coupling.abs() / three_site_cubic_root().ln())
}
