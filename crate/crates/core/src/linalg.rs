//! Dense complex linear algebra for Hermitian matrices up to dimension 1024.
//!
//! Basis convention: for an `n`-qubit register, site 0 is the most
//! significant bit of the computational-basis index, so site `s` lives at
//! bit `n - 1 - s`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{Tolerances, MAX_DIM};

pub type C64 = Complex64;

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation("matrix dimension must be at least 1"));
        }
        if dim > MAX_DIM {
            return Err(Error::SizeLimit { dim, max: MAX_DIM });
        }
        if data.len() != dim * dim {
            return Err(Error::validation(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::validation(format!(
                "non-finite entry at ({}, {})",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::validation(
                "rows must all have length equal to the row count",
            ));
        }
        Self::from_vec(dim, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Projector `|psi><psi|`.
    pub fn outer(psi: &[C64]) -> Self {
        let n = psi.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Elementwise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// `max |M[i][j] - conj(M[j][i])|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks_exact(self.dim) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .filter(|&d| d <= MAX_DIM)
        .ok_or(Error::SizeLimit {
            dim: a.dim.saturating_mul(b.dim),
            max: MAX_DIM,
        })?;
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..a.dim {
        for j in 0..a.dim {
            let aij = a[(i, j)];
            for k in 0..b.dim {
                for l in 0..b.dim {
                    out[(i * b.dim + k, j * b.dim + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Spectral decomposition `M = V diag(eigenvalues) V^dagger`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V diag(weights) V^dagger` for arbitrary real weights.
    pub fn compose(&self, weights: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        assert_eq!(weights.len(), n, "one weight per eigenvalue");
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let col: Vec<C64> = (0..n).map(|i| v[(i, k)]).collect();
            for i in 0..n {
                let vi = col[i] * w;
                if vi == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vi * col[j].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.compose(&self.eigenvalues)
    }

    /// `V diag(f(eigenvalues)) V^dagger`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let weights = self
            .eigenvalues
            .iter()
            .map(|&lam| {
                let y = f(lam);
                if y.is_finite() {
                    Ok(y)
                } else {
                    Err(Error::domain(format!(
                        "function is not finite at eigenvalue {lam}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.compose(&weights))
    }
}

pub fn eigh(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    eigh_with(m, &Tolerances::default())
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input is symmetrized first. Rows and columns that are not coupled by
/// any nonzero entry are split into independent blocks and each block is
/// diagonalized separately, which keeps conserved-quantity Hamiltonians of
/// dimension 1024 cheap.
pub fn eigh_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    let n = m.dim();
    let herm_err = m.hermiticity_error();
    if herm_err > tol.hermitian_input {
        return Err(Error::validation(format!(
            "matrix is not Hermitian (max |M - M^dagger| = {herm_err:e})"
        )));
    }
    let a = m.hermitian_part();

    let mut pairs: Vec<(f64, Vec<(usize, C64)>)> = Vec::with_capacity(n);
    for block in coupled_blocks(&a) {
        let sub = extract(&a, &block);
        let (vals, vecs) = jacobi(sub, tol)?;
        let b = block.len();
        for k in 0..b {
            let column = (0..b).map(|i| (block[i], vecs[i * b + k])).collect();
            pairs.push((vals[k], column));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut eigenvectors = ComplexMatrix::zeros(n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (k, (val, column)) in pairs.into_iter().enumerate() {
        eigenvalues.push(val);
        for (i, z) in column {
            eigenvectors[(i, k)] = z;
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Connected components of the nonzero pattern, each sorted ascending.
fn coupled_blocks(a: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if a[(i, j)] != C64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

fn extract(a: &ComplexMatrix, idx: &[usize]) -> Vec<C64> {
    let b = idx.len();
    let mut out = vec![C64::new(0.0, 0.0); b * b];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            out[r * b + c] = a[(i, j)];
        }
    }
    out
}

/// Cyclic Jacobi on a dense Hermitian block (row-major). Returns eigenvalues
/// and the row-major eigenvector matrix, unsorted.
fn jacobi(mut a: Vec<C64>, tol: &Tolerances) -> Result<(Vec<f64>, Vec<C64>)> {
    let n = (a.len() as f64).sqrt().round() as usize;
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }
    let norms = |a: &[C64]| {
        let mut off = 0.0;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let s = a[i * n + j].norm_sqr();
                total += s;
                if i != j {
                    off += s;
                }
            }
        }
        (off.sqrt(), total.sqrt())
    };

    let mut converged = n == 1;
    let mut residual = 0.0;
    for _sweep in 0..tol.jacobi_max_sweeps {
        let (off, fro) = norms(&a);
        residual = if fro > 0.0 { off / fro } else { 0.0 };
        if off == 0.0 || off <= tol.jacobi_relative * fro {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        let (off, fro) = norms(&a);
        residual = if fro > 0.0 { off / fro } else { residual };
        if off > tol.jacobi_relative * fro {
            return Err(Error::Numerical {
                what: format!(
                    "Jacobi eigensolver did not converge in {} sweeps",
                    tol.jacobi_max_sweeps
                ),
                residual,
            });
        }
    }
    let vals = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((vals, v))
}

/// Annihilates `a[p][q]` with the unitary `U = D G`, where `D` removes the
/// phase of `a[p][q]` and `G` is the real symmetric Schur rotation.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // Skip rotations that would not change the diagonal in floating point.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * n + q] = C64::new(0.0, 0.0);
        a[q * n + p] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let ph_c = phase.conj();
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U = [[c, s], [-s conj(e), c conj(e)]] acting on columns p, q.
    let u_qp = -ph_c * s;
    let u_qq = ph_c * c;
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c + akq * u_qp;
        a[k * n + q] = akp * s + akq * u_qq;
    }
    // U^dagger = [[c, -s e], [s, c e]] acting on rows p, q.
    let h_pq = -phase * s;
    let h_qq = phase * c;
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c + aqk * h_pq;
        a[q * n + k] = apk * s + aqk * h_qq;
    }
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c + vkq * u_qp;
        v[k * n + q] = vkp * s + vkq * u_qq;
    }
}

/// `f(M) = V diag(f(lambda)) V^dagger` for Hermitian `M`.
pub fn func_of_hermitian(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    eigh(m)?.apply(f)
}

/// Reduced density matrix on the sites in `keep` (strictly increasing,
/// site 0 = most significant qubit).
pub fn partial_trace(rho: &ComplexMatrix, keep: &[usize], n_sites: usize) -> Result<ComplexMatrix> {
    if n_sites == 0 || n_sites > 10 {
        return Err(Error::validation(format!(
            "site count {n_sites} outside 1..=10"
        )));
    }
    if rho.dim() != 1 << n_sites {
        return Err(Error::validation(format!(
            "matrix dimension {} does not match 2^{n_sites}",
            rho.dim()
        )));
    }
    if keep.is_empty() {
        return Err(Error::validation("keep set must be nonempty"));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("keep set must be strictly increasing"));
    }
    if let Some(&bad) = keep.iter().find(|&&s| s >= n_sites) {
        return Err(Error::validation(format!(
            "site {bad} out of range for {n_sites} sites"
        )));
    }

    let traced: Vec<usize> = (0..n_sites).filter(|s| !keep.contains(s)).collect();
    let bit = |site: usize| 1usize << (n_sites - 1 - site);
    // Spread a sub-register index over the given sites (first site = MSB).
    let spread = |sites: &[usize], idx: usize| -> usize {
        let len = sites.len();
        sites
            .iter()
            .enumerate()
            .filter(|(k, _)| idx >> (len - 1 - k) & 1 == 1)
            .map(|(_, &s)| bit(s))
            .sum()
    };

    let kept_dim = 1usize << keep.len();
    let env_dim = 1usize << traced.len();
    let env: Vec<usize> = (0..env_dim).map(|e| spread(&traced, e)).collect();
    let sys: Vec<usize> = (0..kept_dim).map(|i| spread(keep, i)).collect();

    let mut out = ComplexMatrix::zeros(kept_dim);
    for i in 0..kept_dim {
        for j in 0..kept_dim {
            out[(i, j)] = env.iter().map(|&e| rho[(sys[i] | e, sys[j] | e)]).sum();
        }
    }
    Ok(out)
}
