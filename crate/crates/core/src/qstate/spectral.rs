use nalgebra::{DMatrix, SymmetricEigen};

use super::C64;
use crate::error::{Error, Result};

/// Hermiticity residual accepted by the spectral routines.
pub const SPECTRAL_TOL: f64 = 1e-8;

/// `max |m − m†|` over all entries.
pub fn hermiticity_residual(m: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check(m: &DMatrix<C64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    let r = hermiticity_residual(m);
    if r > SPECTRAL_TOL {
        return Err(Error::NotHermitian(r));
    }
    Ok(())
}

/// Real spectrum of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    check(m)?;
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as columns.
pub fn eigh(m: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    check(m)?;
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues below `rank_floor · λ_max` are dropped, which removes the
/// `√ε` contamination that rounding-level eigenvalues would otherwise add.
pub fn psd_sqrt(m: &DMatrix<C64>, rank_floor: f64) -> Result<DMatrix<C64>> {
    let (values, vectors) = eigh(m)?;
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = rank_floor * top;
    let d = m.nrows();
    let mut out = DMatrix::zeros(d, d);
    for (k, &l) in values.iter().enumerate() {
        if l <= cutoff {
            continue;
        }
        let v = vectors.column(k);
        out += (v * v.adjoint()) * C64::new(l.sqrt(), 0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_and_pauli() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]));
        let e = hermitian_eigenvalues(&d).unwrap();
        assert_eq!(e.len(), 3);
        for (x, y) in e.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-14);
        }
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let e = hermitian_eigenvalues(&x).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn reconstruction_and_trace() {
        let a = DMatrix::from_fn(5, 5, |i, j| c((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.2));
        let h = &a + a.adjoint();
        let (vals, vecs) = eigh(&h).unwrap();
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(5, vals.iter().map(|&l| c(l, 0.0))));
        let rebuilt = &vecs * lam * vecs.adjoint();
        assert!((rebuilt - &h).norm() < 1e-12);
        let sum: f64 = vals.iter().sum();
        assert!((sum - h.trace().re).abs() < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = DMatrix::from_fn(4, 4, |i, j| c(((i + 1) * (j + 2)) as f64 * 0.05, (i as f64 - j as f64) * 0.1));
        let p = &a * a.adjoint();
        let r = psd_sqrt(&p, 0.0).unwrap();
        assert!((&r * &r - &p).norm() < 1e-12);
    }
}
