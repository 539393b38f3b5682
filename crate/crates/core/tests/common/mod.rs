#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spinring_core::{ComplexMatrix, C64};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn complex(rng: &mut StdRng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_hermitian(rng: &mut StdRng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = complex(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn random_real_symmetric(rng: &mut StdRng, dim: usize) -> ComplexMatrix {
    let mut m = random_hermitian(rng, dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)].im = 0.0;
        }
    }
    m
}

/// `G G† / tr(G G†)` for a random complex `G`.
pub fn random_density(rng: &mut StdRng, dim: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = complex(rng);
        }
    }
    let rho = &g * &g.dagger();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr).hermitian_part()
}

pub fn random_state(rng: &mut StdRng, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-ish unitary: eigenvectors of a random Hermitian matrix.
pub fn random_unitary(rng: &mut StdRng, dim: usize) -> ComplexMatrix {
    spinring_core::eigh(&random_hermitian(rng, dim))
        .unwrap()
        .eigenvectors
}

pub fn conjugate(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    (&(u * rho) * &u.dagger()).hermitian_part()
}
