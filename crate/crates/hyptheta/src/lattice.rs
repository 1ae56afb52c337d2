//! Truncated lattice enumeration for theta sums.
//!
//! Theta values are sums of Gaussians over Z^g.  A term indexed by m has
//! modulus exp(-pi (m+c)^T Y (m+c)) * envelope, so summing over the ellipsoid
//! (m+c)^T Y (m+c) <= r^2 with pi r^2 >= ln(1/eps) + KAPPA bounds the dropped
//! tail by eps * envelope.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Safety margin added to ln(1/eps) when deriving the ellipsoid radius; it
/// absorbs the lattice-point-count factor in the Gaussian tail comparison.
pub const KAPPA: f64 = 5.0;

/// Hard cap on enumerated lattice points, to protect against nearly
/// degenerate Im(tau).
pub const LATTICE_CAP: u64 = 100_000_000;

/// Requested absolute tail target plus the truncation actually used.
///
/// `radius` and `term_count` are filled in by the evaluator and echoed in
/// reports for reproducibility.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct TruncationSpec {
    pub eps_abs: f64,
    pub radius: f64,
    pub term_count: u64,
}

impl TruncationSpec {
    pub fn new(eps_abs: f64) -> Self {
        assert!(eps_abs > 0.0 && eps_abs < 1.0, "eps_abs must be in (0,1)");
        TruncationSpec { eps_abs, radius: 0.0, term_count: 0 }
    }

    /// Squared ellipsoid radius for the plain Gaussian tail bound.
    pub fn radius_squared(&self) -> f64 {
        ((1.0 / self.eps_abs).ln() + KAPPA) / std::f64::consts::PI
    }
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec::new(1e-13)
    }
}

/// Visit every m in Z^g with (m+c)^T Y (m+c) <= r2.
///
/// Enumeration is depth-first over coordinates g-1..0 using the Cholesky
/// factor of Y, visiting points in a deterministic order.  Returns the number
/// of points visited.
pub(crate) fn for_each_ellipsoid_point<F: FnMut(&[i64])>(
    y: &DMatrix<f64>,
    center: &DVector<f64>,
    r2: f64,
    cap: u64,
    mut visit: F,
) -> Result<u64> {
    let g = y.nrows();
    debug_assert_eq!(y.ncols(), g);
    debug_assert_eq!(center.len(), g);
    let chol = y
        .clone()
        .cholesky()
        .ok_or(Error::ImNotPositiveDefinite { min_eig: f64::NAN })?;
    // Upper-triangular factor R with Y = R^T R.
    let r_mat = chol.l().transpose();

    let mut m = vec![0i64; g];
    let mut count: u64 = 0;
    // rem[i]: remaining squared radius available for coordinates 0..=i.
    // shift[i]: sum_{j>i} R[i,j] (m[j]+c[j]) accumulated from outer levels.
    fn descend<F: FnMut(&[i64])>(
        i: usize,
        rem: f64,
        m: &mut [i64],
        r_mat: &DMatrix<f64>,
        center: &DVector<f64>,
        shifts: &mut [f64],
        count: &mut u64,
        cap: u64,
        visit: &mut F,
    ) -> Result<()> {
        let rii = r_mat[(i, i)];
        // R[i,i] (m_i + c_i) + shift in [-sqrt(rem), sqrt(rem)]
        let half = rem.max(0.0).sqrt();
        let lo = ((-half - shifts[i]) / rii - center[i]).ceil() as i64;
        let hi = ((half - shifts[i]) / rii - center[i]).floor() as i64;
        for mi in lo..=hi {
            m[i] = mi;
            let t = rii * (mi as f64 + center[i]) + shifts[i];
            let rem_next = rem - t * t;
            if rem_next < 0.0 {
                continue;
            }
            if i == 0 {
                *count += 1;
                if *count > cap {
                    return Err(Error::LatticeCapExceeded { estimate: *count, cap });
                }
                visit(m);
            } else {
                for k in 0..i {
                    shifts[k] += r_mat[(k, i)] * (mi as f64 + center[i]);
                }
                descend(i - 1, rem_next, m, r_mat, center, shifts, count, cap, visit)?;
                for k in 0..i {
                    shifts[k] -= r_mat[(k, i)] * (mi as f64 + center[i]);
                }
            }
        }
        Ok(())
    }

    let mut shifts = vec![0.0; g];
    descend(
        g - 1,
        r2,
        &mut m,
        &r_mat,
        center,
        &mut shifts,
        &mut count,
        cap,
        &mut visit,
    )?;
    Ok(count)
}
