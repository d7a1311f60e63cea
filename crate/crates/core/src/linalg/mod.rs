//! Dense Hermitian linear algebra at desk scale: construction, spectral
//! decomposition, PSD projection, Frobenius pairing and Kronecker products.
//!
//! Everything is immutable after construction; operations are pure functions.
//! The eigensolver runs cyclic Jacobi on the real symmetric `2d x 2d`
//! embedding `[[Re, -Im], [Im, Re]]` so no complex rotations are needed.

mod jacobi;

use num::complex::Complex64;
use num::Zero;

use crate::error::{Error, Result};

/// Input-validation tolerance for symmetry of the real part / antisymmetry of
/// the imaginary part.
pub const TOL_SYM: f64 = 1e-12;
/// Relative tolerance for spectral reconstruction and PSD tests.
pub const TOL_EIG: f64 = 1e-10;
/// Jacobi sweep budget; desk-scale inputs converge well under this.
pub const MAX_SWEEPS: usize = 100;

/// Dense complex matrix, row-major. Internal workhorse for eigenvector
/// algebra; not required to carry any symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.entry(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.entry(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.entry(i, j) + aik * other.entry(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Dense complex Hermitian matrix. Constructors symmetrize exactly, so
/// `entry(i, j) == conj(entry(j, i))` holds bit-for-bit and diagonal entries
/// carry zero imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

/// Spectral decomposition `M = V diag(eigenvalues) V*` with ascending
/// eigenvalues and unitary `V`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianMatrix {
    /// Builds a Hermitian matrix from real and imaginary parts.
    ///
    /// `real` must be symmetric and `imag` antisymmetric within [`TOL_SYM`];
    /// the result is symmetrized exactly by averaging with the conjugate
    /// transpose.
    pub fn from_parts(real: &[f64], imag: &[f64], dim: usize) -> Result<Self> {
        if real.len() != dim * dim || imag.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for dim {}, got re={} im={}",
                dim * dim,
                dim,
                real.len(),
                imag.len()
            )));
        }
        for i in 0..dim {
            for j in 0..dim {
                let sym = (real[i * dim + j] - real[j * dim + i]).abs();
                if sym > TOL_SYM {
                    return Err(Error::NotHermitian(format!(
                        "real part asymmetry {sym:.3e} at ({i},{j})"
                    )));
                }
                let anti = (imag[i * dim + j] + imag[j * dim + i]).abs();
                if anti > TOL_SYM {
                    return Err(Error::NotHermitian(format!(
                        "imaginary part symmetry defect {anti:.3e} at ({i},{j})"
                    )));
                }
            }
        }
        let mut data = vec![Complex64::zero(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let re = 0.5 * (real[i * dim + j] + real[j * dim + i]);
                let im = if i == j {
                    0.0
                } else {
                    0.5 * (imag[i * dim + j] - imag[j * dim + i])
                };
                data[i * dim + j] = Complex64::new(re, im);
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds from a real symmetric matrix (imaginary part zero).
    pub fn from_real(real: &[f64], dim: usize) -> Result<Self> {
        Self::from_parts(real, &vec![0.0; dim * dim], dim)
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut data = vec![Complex64::zero(); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            data[i * dim + i] = Complex64::new(d, 0.0);
        }
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim])
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::zero(); dim * dim] }
    }

    /// Symmetrizes an almost-Hermitian complex buffer exactly. Used by
    /// internal products whose rounding can drift off the Hermitian manifold.
    pub(crate) fn symmetrize(data: Vec<Complex64>, dim: usize) -> Self {
        let mut out = vec![Complex64::zero(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i].conj();
                let re = 0.5 * (a.re + b.re);
                let im = if i == j { 0.0 } else { 0.5 * (a.im + b.im) };
                out[i * dim + j] = Complex64::new(re, im);
            }
        }
        Self { dim, data: out }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// Entry mutation that keeps the matrix Hermitian: writes `(i, j)` and the
    /// conjugate at `(j, i)`; imaginary parts on the diagonal are dropped.
    pub fn set_entry(&mut self, i: usize, j: usize, v: Complex64) {
        let v = if i == j { Complex64::new(v.re, 0.0) } else { v };
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v.conj();
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "add: {} vs {}",
                self.dim, other.dim
            )));
        }
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Scalar multiple by a real factor (Hermitian is closed under these).
    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Shifts by `t * I`.
    pub fn shift(&self, t: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += Complex64::new(t, 0.0);
        }
        out
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && !self.data[i * self.dim + j].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.entry(i, i).re).collect()
    }

    /// Real coordinates in the canonical Hermitian basis, isometric for the
    /// Frobenius inner product: diagonal entries, then `sqrt(2) * (re, im)`
    /// of each strictly-upper entry.
    pub fn to_coords(&self) -> Vec<f64> {
        let d = self.dim;
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            out.push(self.entry(i, i).re);
        }
        let s = std::f64::consts::SQRT_2;
        for i in 0..d {
            for j in i + 1..d {
                let z = self.entry(i, j);
                out.push(s * z.re);
                out.push(s * z.im);
            }
        }
        out
    }

    pub fn from_coords(coords: &[f64], dim: usize) -> Self {
        assert_eq!(coords.len(), dim * dim, "coordinate count");
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set_entry(i, i, Complex64::new(coords[i], 0.0));
        }
        let s = std::f64::consts::SQRT_2;
        let mut k = dim;
        for i in 0..dim {
            for j in i + 1..dim {
                let z = Complex64::new(coords[k] / s, coords[k + 1] / s);
                m.set_entry(i, j, z);
                k += 2;
            }
        }
        m
    }

    /// The canonical Hermitian basis of `M_d` in the order matching
    /// [`HermitianMatrix::to_coords`].
    pub fn hermitian_basis(dim: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            let mut m = Self::zeros(dim);
            m.set_entry(i, i, Complex64::new(1.0, 0.0));
            out.push(m);
        }
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..dim {
            for j in i + 1..dim {
                let mut re = Self::zeros(dim);
                re.set_entry(i, j, Complex64::new(inv, 0.0));
                out.push(re);
                let mut im = Self::zeros(dim);
                im.set_entry(i, j, Complex64::new(0.0, inv));
                out.push(im);
            }
        }
        out
    }

}

/// Dense Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub(crate) struct Cholesky {
    n: usize,
    factor: Vec<f64>, // lower triangular, row-major
}

impl Cholesky {
    /// Factors `A + ridge * I`; `ridge = 0` for plain SPD input.
    pub(crate) fn factor(a: &[f64], n: usize, ridge: f64) -> Option<Self> {
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = a[i * n + j] + if i == j { ridge } else { 0.0 };
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= 0.0 {
                        return None;
                    }
                    l[i * n + j] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Some(Self { n, factor: l })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let l = &self.factor;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum -= l[i * n + k] * y[k];
            }
            y[i] = sum / l[i * n + i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in i + 1..n {
                sum -= l[k * n + i] * x[k];
            }
            x[i] = sum / l[i * n + i];
        }
        x
    }
}

/// `Re tr(a b)`; symmetric and real for Hermitian arguments.
pub fn frobenius_inner(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "frobenius_inner: {} vs {}",
            a.dim, b.dim
        )));
    }
    // tr(ab) = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij) for Hermitian b
    let mut acc = 0.0;
    for (x, y) in a.data.iter().zip(b.data.iter()) {
        acc += x.re * y.re + x.im * y.im;
    }
    Ok(acc)
}

/// Kronecker product; PSD factors give a PSD product.
pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    let da = a.dim;
    let db = b.dim;
    let dim = da * db;
    let mut data = vec![Complex64::zero(); dim * dim];
    for i in 0..da {
        for j in 0..da {
            let aij = a.entry(i, j);
            if aij.is_zero() {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    data[(i * db + k) * dim + (j * db + l)] = aij * b.entry(k, l);
                }
            }
        }
    }
    HermitianMatrix { dim, data }
}

/// Spectral decomposition through the real symmetric embedding.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let d = m.dim;
    if d == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let all_real = m.data.iter().all(|z| z.im == 0.0);
    if all_real {
        let mut a = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                a[i * d + j] = m.entry(i, j).re;
            }
        }
        let (vals, vecs) = jacobi::jacobi_eigen(&a, d, MAX_SWEEPS)?;
        let mut v = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                v.set(i, j, Complex64::new(vecs[i * d + j], 0.0));
            }
        }
        return Ok(SpectralDecomposition { eigenvalues: vals, eigenvectors: v });
    }

    // Embed M = A + iB as [[A, -B], [B, A]]; the spectrum doubles and each
    // real eigenvector [x; y] corresponds to the complex eigenvector x + iy.
    let n = 2 * d;
    let mut e = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            let z = m.entry(i, j);
            e[i * n + j] = z.re;
            e[i * n + (j + d)] = -z.im;
            e[(i + d) * n + j] = z.im;
            e[(i + d) * n + (j + d)] = z.re;
        }
    }
    let (vals, vecs) = jacobi::jacobi_eigen(&e, n, MAX_SWEEPS)?;

    // Collapse the doubled spectrum: take every other eigenvalue after
    // sorting, and greedily pick complex eigenvectors that stay independent
    // of the ones already accepted (the partner of x + iy is its i-multiple).
    let eigenvalues: Vec<f64> = (0..d).map(|t| vals[2 * t]).collect();
    let mut v = ComplexMatrix::zeros(d, d);
    let mut accepted = 0usize;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for cand in 0..n {
        if accepted == d {
            break;
        }
        let mut w: Vec<Complex64> = (0..d)
            .map(|r| Complex64::new(vecs[r * n + cand], vecs[(r + d) * n + cand]))
            .collect();
        // Project out everything accepted so far.
        for col in &cols {
            let mut dot = Complex64::zero();
            for (ci, wi) in col.iter().zip(w.iter()) {
                dot += ci.conj() * wi;
            }
            for (wi, ci) in w.iter_mut().zip(col.iter()) {
                *wi -= dot * ci;
            }
        }
        let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-2 {
            for z in w.iter_mut() {
                *z /= norm;
            }
            cols.push(w);
            accepted += 1;
        }
    }
    if accepted != d {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS, off: f64::NAN });
    }
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            v.set(i, j, *z);
        }
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors: v })
}

/// Smallest eigenvalue; `m` dominates `delta * I` iff this is `>= delta`.
pub fn min_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?
        .eigenvalues
        .first()
        .copied()
        .unwrap_or(0.0))
}

/// Projection onto the PSD cone: clamps negative eigenvalues to zero.
pub fn project_psd(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    let dec = eig_hermitian(m)?;
    if dec.eigenvalues.first().map_or(true, |&l| l >= 0.0) {
        return Ok(m.clone());
    }
    let d = m.dim;
    let v = &dec.eigenvectors;
    let mut data = vec![Complex64::zero(); d * d];
    for (k, &lam) in dec.eigenvalues.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        for i in 0..d {
            let vik = v.entry(i, k);
            for j in 0..d {
                data[i * d + j] += vik * v.entry(j, k).conj() * lam;
            }
        }
    }
    Ok(HermitianMatrix::symmetrize(data, d))
}

impl SpectralDecomposition {
    /// `V diag(eigenvalues) V*`, for reconstruction checks.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let d = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut data = vec![Complex64::zero(); d * d];
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            for i in 0..d {
                let vik = v.entry(i, k);
                for j in 0..d {
                    data[i * d + j] += vik * v.entry(j, k).conj() * lam;
                }
            }
        }
        HermitianMatrix::symmetrize(data, d)
    }

    /// Frobenius distance of `V* V` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let v = &self.eigenvectors;
        let d = v.rows();
        let gram = v.adjoint().mul(v);
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() };
                acc += (gram.entry(i, j) - target).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2_remark() -> (HermitianMatrix, HermitianMatrix, HermitianMatrix, HermitianMatrix) {
        let a = HermitianMatrix::from_real(&[1.0, 0.0, 0.0, 0.0], 2).unwrap();
        let b = HermitianMatrix::from_real(&[1.0, 1.0, 1.0, 1.0], 2).unwrap();
        let c = HermitianMatrix::from_real(&[1.1, 0.5, 0.5, 3.6], 2).unwrap();
        let d = HermitianMatrix::from_real(&[3.6, 0.5, 0.5, 1.1], 2).unwrap();
        (a, b, c, d)
    }

    /// Roots of x^2 + px + q, ascending. Oracle for 2x2 spectra.
    fn quadratic_roots(p: f64, q: f64) -> (f64, f64) {
        let disc = (p * p - 4.0 * q).sqrt();
        ((-p - disc) / 2.0, (-p + disc) / 2.0)
    }

    #[test]
    fn from_parts_builds_the_remark_matrix() {
        let (a, _, _, _) = m2_remark();
        assert_eq!(a.entry(0, 0).re, 1.0);
        assert_eq!(a.entry(1, 1).re, 0.0);
        assert!(a.entry(0, 1).is_zero());
    }

    #[test]
    fn from_parts_identity() {
        let id = HermitianMatrix::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0], 3)
            .unwrap();
        assert_eq!(id, HermitianMatrix::identity(3));
    }

    #[test]
    fn from_parts_complex_has_sqrt2_spectrum() {
        // [[0, 1+i], [1-i, 0]], characteristic polynomial l^2 - 2 = 0
        let m = HermitianMatrix::from_parts(
            &[0.0, 1.0, 1.0, 0.0],
            &[0.0, 1.0, -1.0, 0.0],
            2,
        )
        .unwrap();
        assert_eq!(m.entry(1, 0), m.entry(0, 1).conj());
        let (lo, hi) = quadratic_roots(0.0, -2.0);
        let dec = eig_hermitian(&m).unwrap();
        assert!((dec.eigenvalues[0] - lo).abs() < 1e-12);
        assert!((dec.eigenvalues[1] - hi).abs() < 1e-12);
    }

    #[test]
    fn from_parts_rejects_asymmetry() {
        let err = HermitianMatrix::from_parts(&[0.0, 1.0, 0.0, 0.0], &[0.0; 4], 2);
        assert!(matches!(err, Err(Error::NotHermitian(_))));
        let err = HermitianMatrix::from_parts(&[0.0; 4], &[1e-6, 0.0, 0.0, 0.0], 2);
        assert!(matches!(err, Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eig_identity_and_pauli() {
        let id = HermitianMatrix::identity(4);
        let dec = eig_hermitian(&id).unwrap();
        assert_eq!(dec.eigenvalues, vec![1.0; 4]);

        let x = HermitianMatrix::from_real(&[0.0, 1.0, 1.0, 0.0], 2).unwrap();
        let dec = eig_hermitian(&x).unwrap();
        assert!((dec.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((dec.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_matches_quadratic_oracle_for_c() {
        let (_, _, c, _) = m2_remark();
        // trace 4.7, det 3.71
        let (lo, hi) = quadratic_roots(-4.7, 3.71);
        let dec = eig_hermitian(&c).unwrap();
        assert!((dec.eigenvalues[0] - lo).abs() < 1e-10);
        assert!((dec.eigenvalues[1] - hi).abs() < 1e-10);
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_eq!(min_eigenvalue(&HermitianMatrix::identity(3)).unwrap(), 1.0);
        let m = HermitianMatrix::from_diag(&[-2.0, 5.0]);
        assert_eq!(min_eigenvalue(&m).unwrap(), -2.0);

        // d - b from the M2 remark: [[2.6, -0.5], [-0.5, 0.1]], which is
        // positive definite (so b < d with some margin).
        let (_, b, _, d) = m2_remark();
        let diff = d.sub(&b).unwrap();
        let (lo, _) = quadratic_roots(-2.7, 0.01);
        let got = min_eigenvalue(&diff).unwrap();
        assert!((got - lo).abs() < 1e-10);
        assert!(got > 0.0);
    }

    #[test]
    fn project_psd_examples() {
        let psd = HermitianMatrix::from_diag(&[0.5, 2.0]);
        let proj = project_psd(&psd).unwrap();
        assert!(proj.sub(&psd).unwrap().norm_fro() < TOL_EIG);

        let m = HermitianMatrix::from_diag(&[-1.0, 2.0]);
        let proj = project_psd(&m).unwrap();
        let want = HermitianMatrix::from_diag(&[0.0, 2.0]);
        assert!(proj.sub(&want).unwrap().norm_fro() < TOL_EIG);

        // rank-1 projector onto the +1 eigenvector of Pauli X
        let x = HermitianMatrix::from_real(&[0.0, 1.0, 1.0, 0.0], 2).unwrap();
        let proj = project_psd(&x).unwrap();
        let want = HermitianMatrix::from_real(&[0.5, 0.5, 0.5, 0.5], 2).unwrap();
        assert!(proj.sub(&want).unwrap().norm_fro() < 1e-12);
    }

    #[test]
    fn project_psd_is_idempotent() {
        let m = HermitianMatrix::from_parts(
            &[1.0, -2.0, 0.3, -2.0, 0.0, 1.1, 0.3, 1.1, -0.7],
            &[0.0, 0.4, -0.2, -0.4, 0.0, 0.9, 0.2, -0.9, 0.0],
            3,
        )
        .unwrap();
        let once = project_psd(&m).unwrap();
        let twice = project_psd(&once).unwrap();
        assert!(twice.sub(&once).unwrap().norm_fro() < TOL_EIG);
        assert!(min_eigenvalue(&once).unwrap() >= -TOL_EIG);
    }

    #[test]
    fn frobenius_examples() {
        let id = HermitianMatrix::identity(4);
        assert_eq!(frobenius_inner(&id, &id).unwrap(), 4.0);
        let a = HermitianMatrix::from_diag(&[1.0, -1.0]);
        let b = HermitianMatrix::from_diag(&[1.0, 1.0]);
        assert_eq!(frobenius_inner(&a, &b).unwrap(), 0.0);
        // <a, c> over the M2 remark matrices: direct entrywise sum gives 1.1
        let (a, _, c, _) = m2_remark();
        assert!((frobenius_inner(&a, &c).unwrap() - 1.1).abs() < 1e-15);
        assert!(frobenius_inner(&a, &c).unwrap() == frobenius_inner(&c, &a).unwrap());
    }

    #[test]
    fn frobenius_dimension_mismatch() {
        let a = HermitianMatrix::identity(2);
        let b = HermitianMatrix::identity(3);
        assert!(matches!(
            frobenius_inner(&a, &b),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn kron_examples() {
        let i2 = HermitianMatrix::identity(2);
        let i3 = HermitianMatrix::identity(3);
        assert_eq!(kron(&i2, &i3), HermitianMatrix::identity(6));

        let a = HermitianMatrix::from_diag(&[1.0, 0.0]);
        let b = HermitianMatrix::from_diag(&[0.0, 1.0]);
        assert_eq!(kron(&a, &b), HermitianMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_spectrum_is_product_of_spectra() {
        // min eig of a kron product equals the min over eigenvalue products
        let cases = [
            (
                HermitianMatrix::from_real(&[1.0, 0.3, 0.3, 0.5], 2).unwrap(),
                HermitianMatrix::from_real(&[2.0, -0.4, -0.4, 0.9], 2).unwrap(),
            ),
            (
                HermitianMatrix::from_real(&[0.8, 0.1, 0.1, 1.4], 2).unwrap(),
                HermitianMatrix::from_real(
                    &[1.0, 0.2, 0.0, 0.2, 0.6, -0.1, 0.0, -0.1, 0.3],
                    3,
                )
                .unwrap(),
            ),
        ];
        for (a, b) in cases {
            let la = eig_hermitian(&a).unwrap().eigenvalues;
            let lb = eig_hermitian(&b).unwrap().eigenvalues;
            let mut best = f64::INFINITY;
            for &x in &la {
                for &y in &lb {
                    best = best.min(x * y);
                }
            }
            let got = min_eigenvalue(&kron(&a, &b)).unwrap();
            assert!((got - best).abs() < TOL_EIG * (1.0 + best.abs()));
            if la[0] >= 0.0 && lb[0] >= 0.0 {
                assert!(got >= -TOL_EIG);
            }
        }
    }

    #[test]
    fn eig_reconstruction_holds_for_degenerate_complex_spectrum() {
        // 4x4 with an eigenvalue of multiplicity 2 and genuine imaginary parts
        let mut m = HermitianMatrix::zeros(4);
        m.set_entry(0, 0, Complex64::new(2.0, 0.0));
        m.set_entry(1, 1, Complex64::new(2.0, 0.0));
        m.set_entry(2, 3, Complex64::new(0.0, 1.0));
        let dec = eig_hermitian(&m).unwrap();
        let rec = dec.reconstruct();
        assert!(rec.sub(&m).unwrap().norm_fro() < TOL_EIG * m.norm_fro().max(1.0));
        assert!(dec.unitarity_defect() < 1e-10);
    }

    #[test]
    fn coords_roundtrip_is_isometric() {
        let m = HermitianMatrix::from_parts(
            &[1.0, 0.5, 0.5, -2.0],
            &[0.0, 0.25, -0.25, 0.0],
            2,
        )
        .unwrap();
        let coords = m.to_coords();
        let back = HermitianMatrix::from_coords(&coords, 2);
        assert!(back.sub(&m).unwrap().norm_fro() < 1e-15);
        let dot: f64 = coords.iter().map(|x| x * x).sum();
        assert!((dot - frobenius_inner(&m, &m).unwrap()).abs() < 1e-12);
    }
}
