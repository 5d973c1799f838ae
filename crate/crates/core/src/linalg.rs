//! Thin helpers over faer's dense kernels. Everything here runs on the
//! calling thread; parallelism lives at the trial level.

use faer::{c64, Mat, MatRef, Side};

use crate::{Error, Result};

pub fn frobenius(m: MatRef<'_, c64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

pub fn all_finite(m: MatRef<'_, c64>) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()))
}

/// `‖M − Mᴴ‖_F / ‖M‖_F`, zero for the zero matrix.
pub fn hermitian_defect(m: MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    let mut num = 0.0;
    for j in 0..n {
        for i in 0..n {
            num += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
        }
    }
    let den = frobenius(m);
    if den == 0.0 {
        0.0
    } else {
        num.sqrt() / den
    }
}

/// Ascending eigenvalues and the matching unitary eigenvector matrix.
pub fn hermitian_eigen(m: MatRef<'_, c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NonConvergence("hermitian eigensolver"))?;
    let n = m.nrows();
    let s = evd.S();
    let values: Vec<f64> = (0..n).map(|j| s[j].re).collect();
    Ok((values, evd.U().to_owned()))
}

pub fn hermitian_eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::NonConvergence("hermitian eigensolver"))
}

pub fn general_eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<c64>> {
    m.eigenvalues()
        .map_err(|_| Error::NonConvergence("general eigensolver"))
}

/// Haar-distributed unitary from a square complex Gaussian draw: QR with the
/// phases of `diag(R)` pushed back into `Q`.
pub fn haar_from_ginibre(g: MatRef<'_, c64>) -> Mat<c64> {
    let n = g.nrows();
    let qr = g.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { c64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Tiny negative eigenvalues from rounding are clamped to zero.
pub fn psd_sqrt(m: MatRef<'_, c64>) -> Result<Mat<c64>> {
    let (values, u) = hermitian_eigen(m)?;
    let n = m.nrows();
    let mut scaled = u.clone();
    for (j, &v) in values.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    Ok(&scaled * u.adjoint())
}
