//! Two-qubit entanglement: spin-flip product, Wootters concurrence and
//! entanglement of formation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, ComplexMatrix, C64};
use crate::model::Pauli;
use crate::tolerances::{DENSITY_MATRIX, PSD_CLAMP, UNIT_NORM};

/// Concurrence together with the `lambda_i` it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrenceReport {
    pub concurrence: f64,
    /// Descending, non-negative.
    pub lambdas: [f64; 4],
    /// `lambda_1 - lambda_2 - lambda_3 - lambda_4` before clamping.
    pub raw: f64,
}

/// `σy ⊗ σy`, which is real.
pub fn sigma_yy() -> ComplexMatrix {
    kron(&Pauli::Y.matrix(), &Pauli::Y.matrix()).expect("4x4")
}

/// Checks a 4x4 density matrix: trace one, Hermitian, positive semidefinite.
pub fn validate_two_qubit_state(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::validation(format!(
            "expected a 4x4 two-qubit density matrix, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let mut problems = Vec::new();
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_MATRIX {
        problems.push(format!("trace {tr} != 1"));
    }
    let herm = rho.hermiticity_error();
    if herm > DENSITY_MATRIX {
        problems.push(format!("not Hermitian (error {herm:e})"));
    } else {
        let lowest = eigh(rho)?.eigenvalues[0];
        if lowest < -DENSITY_MATRIX {
            problems.push(format!("not positive semidefinite (eigenvalue {lowest:e})"));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "invalid density matrix: {}",
            problems.join("; ")
        )))
    }
}

/// `rho (σy⊗σy) conj(rho) (σy⊗σy)`.
pub fn spin_flip(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    validate_two_qubit_state(rho)?;
    let yy = sigma_yy();
    let flipped = &(&yy * &rho.conj()) * &yy;
    Ok(rho * &flipped)
}

/// `sqrt(rho)` with eigenvalues in `[-PSD_CLAMP, 0)` treated as zero.
fn psd_sqrt(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    eigh(rho)?.apply(|p| {
        if p >= 0.0 {
            p.sqrt()
        } else if p >= -PSD_CLAMP {
            0.0
        } else {
            f64::NAN
        }
    })
}

/// Wootters concurrence.
///
/// The `lambda_i` are the singular values of `sqrt(rho) (σy⊗σy) sqrt(conj rho)`,
/// whose squares are the eigenvalues of the spin-flip product. They are read
/// off the Hermitian dilation `[[0, M], [M†, 0]]`, whose spectrum is `±sigma_i`,
/// so no non-Hermitian eigensolver is needed and small `lambda_i` keep full
/// absolute precision.
pub fn concurrence(rho: &ComplexMatrix) -> Result<ConcurrenceReport> {
    validate_two_qubit_state(rho)?;
    let root = psd_sqrt(rho)?;
    let m = &(&root * &sigma_yy()) * &root.conj();

    let mut dilation = ComplexMatrix::zeros(8);
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, 4 + j)] = m[(i, j)];
            dilation[(4 + j, i)] = m[(i, j)].conj();
        }
    }
    let spectrum = eigh(&dilation)?.eigenvalues;
    let mut lambdas = [0.0; 4];
    for (k, lam) in lambdas.iter_mut().enumerate() {
        *lam = spectrum[7 - k].max(0.0);
    }
    let raw = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(ConcurrenceReport {
        concurrence: raw.clamp(0.0, 1.0),
        lambdas,
        raw,
    })
}

/// `|<psi| σy⊗σy |psi*>|` for a normalized pure state.
pub fn pure_concurrence(psi: &[C64]) -> Result<f64> {
    if psi.len() != 4 {
        return Err(Error::validation(format!(
            "expected a 4-component state, got {}",
            psi.len()
        )));
    }
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_NORM {
        return Err(Error::validation(format!("state norm {norm} != 1")));
    }
    let conj: Vec<C64> = psi.iter().map(|z| z.conj()).collect();
    let flipped = sigma_yy().mat_vec(&conj);
    let amp: C64 = psi.iter().zip(&flipped).map(|(a, b)| a.conj() * b).sum();
    Ok(amp.norm().min(1.0))
}

/// Binary entropy in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `h((1 + sqrt(1 - c²)) / 2)`.
pub fn entanglement_of_formation(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::domain(format!("concurrence {c} outside [0, 1]")));
    }
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singlet() -> Vec<C64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![0.0.into(), s.into(), (-s).into(), 0.0.into()]
    }

    #[test]
    fn spin_flip_examples() {
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        let r = spin_flip(&mixed).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::identity(4).scale_real(1.0 / 16.0)) < 1e-16);

        let bell = ComplexMatrix::outer(&singlet());
        assert!(spin_flip(&bell).unwrap().max_abs_diff(&bell) < 1e-15);

        let up_up = ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(spin_flip(&up_up).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn invalid_states_are_rejected() {
        let not_normalized = ComplexMatrix::identity(4);
        let err = spin_flip(&not_normalized).unwrap_err();
        assert!(err.to_string().contains("trace"));

        let negative = ComplexMatrix::from_diag(&[1.5, -0.5, 0.0, 0.0]);
        let err = concurrence(&negative).unwrap_err();
        assert!(err.to_string().contains("positive semidefinite"));

        let wrong_dim = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(concurrence(&wrong_dim).is_err());
    }

    #[test]
    fn concurrence_examples() {
        let bell = concurrence(&ComplexMatrix::outer(&singlet())).unwrap();
        assert!((bell.concurrence - 1.0).abs() < 1e-14);
        assert!(bell.lambdas.windows(2).all(|w| w[0] >= w[1]));

        let up_up = ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(concurrence(&up_up).unwrap().concurrence, 0.0);

        let mixed = concurrence(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert_eq!(mixed.concurrence, 0.0);
        assert!((mixed.raw + 0.5).abs() < 1e-15);
    }

    #[test]
    fn pure_concurrence_examples() {
        assert!((pure_concurrence(&singlet()).unwrap() - 1.0).abs() < 1e-15);
        let up_up = [1.0.into(), 0.0.into(), 0.0.into(), 0.0.into()];
        assert_eq!(pure_concurrence(&up_up).unwrap(), 0.0);
        for theta in [0.1f64, 0.4, 1.0, 2.5] {
            let psi = [
                theta.cos().into(),
                0.0.into(),
                0.0.into(),
                theta.sin().into(),
            ];
            let expected = (2.0 * theta).sin().abs();
            assert!((pure_concurrence(&psi).unwrap() - expected).abs() < 1e-15);
        }
        let unnormalized = [1.0.into(), 1.0.into(), 0.0.into(), 0.0.into()];
        assert!(pure_concurrence(&unnormalized).is_err());
    }

    #[test]
    fn formation_examples() {
        assert_eq!(entanglement_of_formation(0.0).unwrap(), 0.0);
        assert_eq!(entanglement_of_formation(1.0).unwrap(), 1.0);
        // h(0.9330127) evaluated by hand.
        let half = entanglement_of_formation(0.5).unwrap();
        assert!((half - 0.35457890266527003).abs() < 1e-12, "{half}");
        assert!(entanglement_of_formation(1.2).is_err());
        assert!(entanglement_of_formation(-0.1).is_err());
    }
}
