// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 64;

/// Spectrum of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let lam = self.values[k];
            for i in 0..n {
                let vik = self.vectors[(i, k)] * lam;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn eig_hermitian(rho: &ComplexMatrix) -> Result<HermitianEigen> {
    if !rho.is_square() {
        return Err(Error::DimensionMismatch {
            expected: rho.rows(),
            found: rho.cols(),
        });
    }
    let n = rho.rows();
    let scale = rho.max_abs().max(1.0);
    let dev = rho.hermitian_deviation();
    if dev > 1e-10 * scale {
        return Err(Error::NotHermitian { deviation: dev });
    }

    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let norm = a.frobenius_norm();
    let threshold = f64::EPSILON * f64::EPSILON * norm * norm;
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[p][q]` with the unitary J = diag(1, ē)·R(c, s) acting on
/// the (p, q) plane, where e is the phase of `a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let e = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    // Smaller root of t² + 2τt − 1 = 0.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let es = e.conj() * s;
    let ec = e.conj() * c;
    let n = a.rows();

    // A ← A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * es;
        a[(k, q)] = akp * s + akq * ec;
    }
    // A ← J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * es.conj();
        a[(q, k)] = apk * s + aqk * ec.conj();
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V ← V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * es;
        v[(k, q)] = vkp * s + vkq * ec;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let m = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        let e = eig_hermitian(&m).unwrap();
        assert_eq!(e.values, alloc::vec![0.25, 0.75]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn projector_spectrum() {
        // (I + σx)/2
        let m = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        // σy has eigenvalues ±1.
        let m = ComplexMatrix::from_vec(
            2,
            2,
            alloc::vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0)
            ],
        )
        .unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }
}
