//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use crate::error::{Error, Result};

/// Relative off-diagonal threshold at which a sweep pass is declared converged.
const OFF_DIAG_TOL: f64 = 1e-13;

/// Diagonalizes a real symmetric matrix with cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues ascending and the
/// k-th column of the eigenvector matrix matching the k-th eigenvalue.
pub fn jacobi_eigen(matrix: &[f64], n: usize, max_sweeps: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(matrix.len(), n * n, "matrix buffer size");
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n <= 1 {
        return Ok((a, v));
    }

    let scale = frob_norm(&a).max(1.0);
    let tol = OFF_DIAG_TOL * scale;

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[p * n + q].abs();
            }
        }
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
    }
    if !converged {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[p * n + q].abs();
            }
        }
        if off > tol {
            return Err(Error::NoConvergence { sweeps, off });
        }
    }

    // Sort ascending, permuting the eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = v[row * n + old_col];
        }
    }
    Ok((eigenvalues, vectors))
}

/// One Jacobi rotation annihilating the (p, q) entry.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    // t = sign(theta) / (|theta| + sqrt(theta^2 + 1)), stable for large |theta|
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for r in 0..n {
        if r != p && r != q {
            let arp = a[r * n + p];
            let arq = a[r * n + q];
            a[r * n + p] = arp - s * (arq + tau * arp);
            a[p * n + r] = a[r * n + p];
            a[r * n + q] = arq + s * (arp - tau * arq);
            a[q * n + r] = a[r * n + q];
        }
    }
    for r in 0..n {
        let vrp = v[r * n + p];
        let vrq = v[r * n + q];
        v[r * n + p] = vrp - s * (vrq + tau * vrp);
        v[r * n + q] = vrq + s * (vrp - tau * vrq);
    }
}

fn frob_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_pauli_x() {
        let a = [0.0, 1.0, 1.0, 0.0];
        let (vals, _) = jacobi_eigen(&a, 2, 100).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_is_fixed() {
        let a = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let (vals, vecs) = jacobi_eigen(&a, 3, 100).unwrap();
        assert_eq!(vals, vec![1.0, 1.0, 1.0]);
        assert_eq!(vecs, a.to_vec());
    }

    #[test]
    fn reconstructs_random_symmetric() {
        // fixed 4x4 symmetric matrix
        let a = [
            2.0, -1.0, 0.5, 0.0, //
            -1.0, 3.0, 0.25, -0.5, //
            0.5, 0.25, -1.0, 1.0, //
            0.0, -0.5, 1.0, 0.75,
        ];
        let n = 4;
        let (vals, v) = jacobi_eigen(&a, n, 100).unwrap();
        // V diag(vals) V^T must reproduce a
        let mut rec = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += v[i * n + k] * vals[k] * v[j * n + k];
                }
                rec[i * n + j] = acc;
            }
        }
        for (x, y) in rec.iter().zip(a.iter()) {
            assert!((x - y).abs() < 1e-10, "reconstruction drift {x} vs {y}");
        }
        // ascending order
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-14);
        }
    }
}
