//! Thin wrappers over BLAS/LAPACK for the two dense kernels the estimators
//! need: the Gram matrix A·Aᵀ and the full symmetric eigendecomposition.

use cblas_sys::{CBLAS_LAYOUT, CBLAS_TRANSPOSE, CBLAS_UPLO};
use ndarray::Array2;
use std::ffi::{c_char, c_int};

// Pull in the link directives emitted by openblas-src's build script.
use openblas_src as _;

use crate::error::{Error, Result};

/// A·Aᵀ for a square row-major matrix, computed with dsyrk.
///
/// Only the lower triangle is computed by BLAS; the upper triangle is mirrored
/// afterwards so the result is exactly symmetric. With 0/1 input every entry
/// is an integer accumulated exactly in f64, so the output is independent of
/// the BLAS blocking schedule.
pub(crate) fn gram_aat(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "gram_aat requires a square matrix");
    let mut out = Array2::<f64>::zeros((n, n));
    if n == 0 {
        return out;
    }
    {
        let a_slice = a.as_slice().expect("standard layout");
        let out_slice = out.as_slice_mut().expect("standard layout");
        unsafe {
            cblas_sys::cblas_dsyrk(
                CBLAS_LAYOUT::CblasRowMajor,
                CBLAS_UPLO::CblasLower,
                CBLAS_TRANSPOSE::CblasNoTrans,
                n as c_int,
                n as c_int,
                1.0,
                a_slice.as_ptr(),
                n as c_int,
                0.0,
                out_slice.as_mut_ptr(),
                n as c_int,
            );
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out[[i, j]] = out[[j, i]];
        }
    }
    out
}

/// Full eigendecomposition of a symmetric matrix via LAPACK dsyevd.
///
/// Returns eigenvalues in ascending order and a row-major buffer whose row j
/// holds the unit eigenvector for eigenvalue j. (LAPACK writes eigenvectors
/// as columns of a column-major array, which is exactly the rows of the same
/// buffer viewed row-major.)
pub(crate) fn sym_eigh(m: &Array2<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "sym_eigh requires a square matrix");
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut buf: Vec<f64> = m.as_slice().expect("standard layout").to_vec();
    let mut w = vec![0.0f64; n];

    let jobz = b'V' as c_char;
    // The row-major buffer is the transpose of what LAPACK sees; a symmetric
    // input makes that irrelevant, and 'L' in column-major terms reads the
    // triangle we filled either way.
    let uplo = b'L' as c_char;
    let n_i = n as c_int;
    let mut info: c_int = 0;

    // Workspace query.
    let mut wkopt = 0.0f64;
    let mut iwkopt: c_int = 0;
    let neg1: c_int = -1;
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &n_i,
            buf.as_mut_ptr(),
            &n_i,
            w.as_mut_ptr(),
            &mut wkopt,
            &neg1,
            &mut iwkopt,
            &neg1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Numerical(format!(
            "dsyevd workspace query failed with info = {info}"
        )));
    }
    let lwork = wkopt as c_int;
    let liwork = iwkopt;
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0 as c_int; liwork.max(1) as usize];
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &n_i,
            buf.as_mut_ptr(),
            &n_i,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Numerical(format!(
            "dsyevd failed with info = {info}"
        )));
    }
    Ok((w, buf))
}

/// Rank-restricted reconstruction sum(lambda_j v_j v_jᵀ) over the selected
/// eigenpairs. Builds the upper triangle and mirrors it, so the output is
/// exactly symmetric.
pub(crate) fn low_rank_reconstruct(
    n: usize,
    eigvals: &[f64],
    eigvecs: &[f64],
    selected: &[usize],
) -> Array2<f64> {
    let mut out = Array2::<f64>::zeros((n, n));
    for &j in selected {
        let lambda = eigvals[j];
        let v = &eigvecs[j * n..(j + 1) * n];
        for i in 0..n {
            let scale = lambda * v[i];
            let row = &mut out.as_slice_mut().expect("standard layout")[i * n..(i + 1) * n];
            for (c, item) in row.iter_mut().enumerate().skip(i) {
                *item += scale * v[c];
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out[[j, i]] = out[[i, j]];
        }
    }
    out
}
