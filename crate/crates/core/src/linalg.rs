//! Dense Householder QR least squares, the only solver used by the crate.
//!
//! Normal equations are avoided on purpose: squaring the condition number
//! is what makes near-collinear designs blow up. Rank deficiency is detected
//! on the R diagonal instead of by matrix inversion.

use crate::error::Error;
use crate::Result;

/// Relative threshold on the R diagonal below which a design is treated as
/// rank deficient: `min |r_jj| < RANK_TOLERANCE * max |r_jj|`.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Minimize `||A x - b||_2` for a row-major `m x k` matrix `A`, `m >= k`.
///
/// `A` and `b` are consumed; the factorization overwrites them in place.
/// Returns [`Error::SingularDesign`] when the R diagonal signals rank
/// deficiency and [`Error::SubsetTooSmall`] when `m < k`.
pub fn least_squares(m: usize, k: usize, mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), m);
    if m < k {
        return Err(Error::SubsetTooSmall { need: k, got: m });
    }

    // Householder triangularization, reflectors applied to b on the fly.
    let mut diag = vec![0.0f64; k];
    for j in 0..k {
        let mut norm = 0.0;
        for i in j..m {
            norm = f64::hypot(norm, a[i * k + j]);
        }
        if norm == 0.0 {
            return Err(Error::SingularDesign);
        }
        let alpha = if a[j * k + j] >= 0.0 { -norm } else { norm };
        diag[j] = alpha;

        // v = x - alpha e1, normalized so v[0] = 1 is implicit via beta.
        let v0 = a[j * k + j] - alpha;
        a[j * k + j] = v0;
        let beta = alpha * v0; // = -||v||^2 / 2, nonzero since norm > 0

        for col in (j + 1)..k {
            let mut dot = 0.0;
            for i in j..m {
                dot += a[i * k + j] * a[i * k + col];
            }
            let scale = dot / beta;
            for i in j..m {
                a[i * k + col] += scale * a[i * k + j];
            }
        }
        let mut dot = 0.0;
        for i in j..m {
            dot += a[i * k + j] * b[i];
        }
        let scale = dot / beta;
        for i in j..m {
            b[i] += scale * a[i * k + j];
        }
    }

    let largest = diag.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    let smallest = diag.iter().fold(f64::INFINITY, |acc, d| acc.min(d.abs()));
    if largest == 0.0 || smallest < RANK_TOLERANCE * largest {
        return Err(Error::SingularDesign);
    }

    // Back substitution against the strict upper triangle plus diag.
    let mut x = vec![0.0f64; k];
    for j in (0..k).rev() {
        let mut s = b[j];
        for col in (j + 1)..k {
            s -= a[j * k + col] * x[col];
        }
        x[j] = s / diag[j];
    }
    Ok(x)
}
