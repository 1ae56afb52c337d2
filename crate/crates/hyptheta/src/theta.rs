//! Numerical evaluation of Riemann theta functions on the Siegel upper
//! half-space: theta with characteristics, second-order thetas, z-gradients
//! and the Kummer embedding, all via rigorously truncated lattice sums.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::chars::{enumerate, BinaryVector, Characteristic};
use crate::error::{Error, Result};
use crate::lattice::{for_each_ellipsoid_point, TruncationSpec, LATTICE_CAP};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

const I_PI: Complex64 = Complex64::new(0.0, std::f64::consts::PI);

/// A point of the Siegel upper half-space H_g: symmetric with positive
/// definite imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodMatrix {
    mat: CMatrix,
}

/// Relative entrywise symmetry tolerance for admitting a period matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;

impl PeriodMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "period matrix must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let scale = 1.0 + mat.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut defect = 0.0f64;
        for i in 0..mat.nrows() {
            for j in 0..i {
                defect = defect.max((mat[(i, j)] - mat[(j, i)]).norm());
            }
        }
        if defect > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric { defect: defect / scale });
        }
        let min_eig = min_im_eigenvalue(&mat);
        if min_eig <= 0.0 {
            return Err(Error::ImNotPositiveDefinite { min_eig });
        }
        Ok(PeriodMatrix { mat })
    }

    pub fn genus(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn im(&self) -> DMatrix<f64> {
        self.mat.map(|c| c.im)
    }

    pub fn re(&self) -> DMatrix<f64> {
        self.mat.map(|c| c.re)
    }

    /// 2*tau, used by the second-order thetas.
    pub fn doubled(&self) -> PeriodMatrix {
        PeriodMatrix { mat: self.mat.map(|c| 2.0 * c) }
    }

    pub fn min_im_eigenvalue(&self) -> f64 {
        min_im_eigenvalue(&self.mat)
    }
}

fn min_im_eigenvalue(mat: &CMatrix) -> f64 {
    let n = mat.nrows();
    let mut y = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            y[(i, j)] = 0.5 * (mat[(i, j)].im + mat[(j, i)].im);
        }
    }
    y.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// A theta value together with the truncation report and tail bound.
#[derive(Clone, Copy, Debug)]
pub struct ThetaEval {
    pub value: Complex64,
    /// Guaranteed bound on the dropped tail, |tail| <= eps_abs * envelope.
    pub tail_bound: f64,
    pub truncation: TruncationSpec,
}

/// Second-order theta vector (Theta[eps](tau,z))_eps in `enumerate` order.
#[derive(Clone, Debug)]
pub struct KummerVector {
    pub coords: Vec<Complex64>,
    pub tail_bound: f64,
    pub truncation: TruncationSpec,
}

impl KummerVector {
    pub fn genus(&self) -> usize {
        self.coords.len().trailing_zeros() as usize
    }

    pub fn get(&self, eps: &BinaryVector) -> Complex64 {
        self.coords[eps.index()]
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Entrywise comparison after normalizing both vectors by the entry of
    /// maximal modulus; returns the max normalized discrepancy.
    pub fn projective_distance(&self, other: &KummerVector) -> f64 {
        assert_eq!(self.coords.len(), other.coords.len());
        let i0 = self
            .coords
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .unwrap();
        let (sa, sb) = (self.coords[i0], other.coords[i0]);
        if sb.norm() == 0.0 {
            return f64::INFINITY;
        }
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a / sa - b / sb).norm())
            .fold(0.0, f64::max)
    }
}

/// Bilinear (unconjugated) scalar product.
pub fn cdot(a: &CVector, b: &CVector) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// e(x) = exp(pi i x) for complex x.
pub fn epi(x: Complex64) -> Complex64 {
    (I_PI * x).exp()
}

pub fn cvector_from_f64(v: &[f64]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// tau * v for a 0/1 vector v.
pub fn tau_times_bits(tau: &PeriodMatrix, v: &BinaryVector) -> CVector {
    tau.matrix() * cvector_from_f64(&v.coords_f64())
}

/// The half-period (tau*alpha + beta)/2.
pub fn half_period(tau: &PeriodMatrix, alpha: &BinaryVector, beta: &BinaryVector) -> CVector {
    let mut w = tau_times_bits(tau, alpha);
    for i in 0..w.len() {
        w[i] = 0.5 * (w[i] + Complex64::new(beta.get(i) as f64, 0.0));
    }
    w
}

/// Core truncated sum: sum over m in Z^g of
/// e[(m+a, tau (m+a)) + 2 (m+a, z+b)] for real shift vectors a, b.
fn raw_theta_sum(
    tau: &CMatrix,
    z: &CVector,
    a: &DVector<f64>,
    b: &DVector<f64>,
    spec: &TruncationSpec,
) -> Result<ThetaEval> {
    let g = tau.nrows();
    if z.len() != g || a.len() != g || b.len() != g {
        return Err(Error::DimensionMismatch(format!(
            "theta argument length {} does not match genus {}",
            z.len(),
            g
        )));
    }
    let y = tau.map(|c| c.im);
    let y0 = DVector::from_iterator(g, z.iter().map(|c| c.im));
    let chol = y
        .clone()
        .cholesky()
        .ok_or_else(|| Error::ImNotPositiveDefinite { min_eig: min_im_eigenvalue(tau) })?;
    let yinv_y0 = chol.solve(&y0);
    let center = a + &yinv_y0;
    let envelope = (std::f64::consts::PI * y0.dot(&yinv_y0)).exp();
    let r2 = spec.radius_squared();

    let zb = CVector::from_iterator(g, z.iter().zip(b.iter()).map(|(zi, bi)| zi + Complex64::new(*bi, 0.0)));
    let mut sum = Complex64::new(0.0, 0.0);
    let mut shifted = DVector::<Complex64>::zeros(g);
    let count = for_each_ellipsoid_point(&y, &center, r2, LATTICE_CAP, |m| {
        for i in 0..g {
            shifted[i] = Complex64::new(m[i] as f64 + a[i], 0.0);
        }
        let quad = cdot(&shifted, &(tau * &shifted)) + 2.0 * cdot(&shifted, &zb);
        sum += epi(quad);
    })?;
    Ok(ThetaEval {
        value: sum,
        tail_bound: spec.eps_abs * envelope,
        truncation: TruncationSpec { eps_abs: spec.eps_abs, radius: r2.sqrt(), term_count: count },
    })
}

/// Riemann theta (characteristic zero).
pub fn theta(tau: &PeriodMatrix, z: &CVector, spec: &TruncationSpec) -> Result<ThetaEval> {
    let g = tau.genus();
    raw_theta_sum(tau.matrix(), z, &DVector::zeros(g), &DVector::zeros(g), spec)
}

/// Theta with characteristics, by the direct half-integer lattice sum.
pub fn theta_char(
    tau: &PeriodMatrix,
    z: &CVector,
    c: &Characteristic,
    spec: &TruncationSpec,
) -> Result<ThetaEval> {
    let g = tau.genus();
    if c.genus() != g {
        return Err(Error::DimensionMismatch(format!(
            "characteristic genus {} does not match tau genus {g}",
            c.genus()
        )));
    }
    let a = DVector::from_iterator(g, c.eps.coords_f64().into_iter().map(|x| 0.5 * x));
    let b = DVector::from_iterator(g, c.delta.coords_f64().into_iter().map(|x| 0.5 * x));
    raw_theta_sum(tau.matrix(), z, &a, &b, spec)
}

/// Second-order theta Theta[eps](tau, z) = theta[eps;0](2 tau, 2 z).
pub fn theta2(
    tau: &PeriodMatrix,
    z: &CVector,
    eps: &BinaryVector,
    spec: &TruncationSpec,
) -> Result<ThetaEval> {
    let g = tau.genus();
    if eps.len() != g {
        return Err(Error::DimensionMismatch(format!(
            "characteristic length {} does not match genus {g}",
            eps.len()
        )));
    }
    let tau2 = tau.matrix().map(|c| 2.0 * c);
    let z2 = z.map(|c| 2.0 * c);
    let a = DVector::from_iterator(g, eps.coords_f64().into_iter().map(|x| 0.5 * x));
    raw_theta_sum(&tau2, &z2, &a, &DVector::zeros(g), spec)
}

/// Result of evaluating Theta[delta](tau, z + (tau a + b)/2) together with
/// the residual of the half-period translation identity
/// (-1)^{(delta,b)} e[-1/2 (a,tau a) - 2 (a,z)] Theta[delta+a](tau, z).
#[derive(Clone, Copy, Debug)]
pub struct Theta2Shifted {
    pub value: Complex64,
    pub cross_residual: f64,
}

pub fn theta2_shifted(
    tau: &PeriodMatrix,
    z: &CVector,
    delta: &BinaryVector,
    a: &BinaryVector,
    b: &BinaryVector,
    spec: &TruncationSpec,
) -> Result<Theta2Shifted> {
    let g = tau.genus();
    if delta.len() != g || a.len() != g || b.len() != g {
        return Err(Error::DimensionMismatch("theta2_shifted vector length".into()));
    }
    // Direct route: theta[delta;0](2 tau, 2z + tau a + b).
    let tau2 = tau.matrix().map(|c| 2.0 * c);
    let ta = tau_times_bits(tau, a);
    let arg = CVector::from_iterator(
        g,
        (0..g).map(|i| 2.0 * z[i] + ta[i] + Complex64::new(b.get(i) as f64, 0.0)),
    );
    let shift = DVector::from_iterator(g, delta.coords_f64().into_iter().map(|x| 0.5 * x));
    let direct = raw_theta_sum(&tau2, &arg, &shift, &DVector::zeros(g), spec)?;

    // Translated route via the automorphy factor.
    let av = cvector_from_f64(&a.coords_f64());
    let phase = -0.5 * cdot(&av, &(tau.matrix() * &av)) - 2.0 * cdot(&av, z);
    let sign = if delta.dot(b)? == 1 { -1.0 } else { 1.0 };
    let other = theta2(tau, z, &(*delta ^ *a), spec)?;
    let translated = sign * epi(phase) * other.value;

    let denom = 1.0 + direct.value.norm() + translated.norm();
    Ok(Theta2Shifted {
        value: direct.value,
        cross_residual: (direct.value - translated).norm() / denom,
    })
}

/// The full second-order theta vector at z, i.e. the Kummer image of z.
///
/// All 2^g components come from a single lattice enumeration: substituting
/// n = 2m + eps turns Theta[eps](tau,z) into the sum of e[(n,tau n)/2 + 2(n,z)]
/// over n congruent to eps mod 2, so one pass over n bins terms by parity.
pub fn kummer(tau: &PeriodMatrix, z: &CVector, spec: &TruncationSpec) -> Result<KummerVector> {
    let g = tau.genus();
    if z.len() != g {
        return Err(Error::DimensionMismatch(format!(
            "kummer argument length {} vs genus {g}",
            z.len()
        )));
    }
    let y = tau.im();
    let y0 = DVector::from_iterator(g, z.iter().map(|c| c.im));
    let chol = y
        .clone()
        .cholesky()
        .ok_or_else(|| Error::ImNotPositiveDefinite { min_eig: tau.min_im_eigenvalue() })?;
    let yinv_y0 = chol.solve(&y0);
    let envelope = (2.0 * std::f64::consts::PI * y0.dot(&yinv_y0)).exp();
    let center = 2.0 * &yinv_y0;
    let form = y.map(|x| 0.5 * x);
    let r2 = spec.radius_squared();

    let mut coords = vec![Complex64::new(0.0, 0.0); 1 << g];
    let mut nv = DVector::<Complex64>::zeros(g);
    let tau_mat = tau.matrix();
    let count = for_each_ellipsoid_point(&form, &center, r2, LATTICE_CAP, |m| {
        let mut idx = 0usize;
        for i in 0..g {
            nv[i] = Complex64::new(m[i] as f64, 0.0);
            idx = (idx << 1) | (m[i].rem_euclid(2) as usize);
        }
        let quad = 0.5 * cdot(&nv, &(tau_mat * &nv)) + 2.0 * cdot(&nv, z);
        coords[idx] += epi(quad);
    })?;

    let tail_bound = spec.eps_abs * envelope;
    let kv = KummerVector {
        coords,
        tail_bound,
        truncation: TruncationSpec { eps_abs: spec.eps_abs, radius: r2.sqrt(), term_count: count },
    };
    if kv.max_abs() <= kv.tail_bound {
        return Err(Error::ZeroKummerVector);
    }
    Ok(kv)
}

/// Gradient of Riemann theta in z, by term-wise differentiation.
pub fn theta_gradient(tau: &PeriodMatrix, z: &CVector, spec: &TruncationSpec) -> Result<CVector> {
    let g = tau.genus();
    if z.len() != g {
        return Err(Error::DimensionMismatch("gradient argument length".into()));
    }
    let y = tau.im();
    let y0 = DVector::from_iterator(g, z.iter().map(|c| c.im));
    let chol = y
        .clone()
        .cholesky()
        .ok_or_else(|| Error::ImNotPositiveDefinite { min_eig: tau.min_im_eigenvalue() })?;
    let yinv_y0 = chol.solve(&y0);
    let min_eig = y.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);

    // Enlarge the radius so the polynomial factor |2 pi m| stays below the
    // Gaussian margin: pi r^2 >= ln(1/eps) + kappa + ln(1 + 2 pi (r0/sqrt(lmin) + |c| + 1)).
    let r0 = spec.radius_squared().sqrt();
    let poly = 1.0 + 2.0 * std::f64::consts::PI * (r0 / min_eig.sqrt() + yinv_y0.norm() + 1.0);
    let r2 = spec.radius_squared() + poly.ln() / std::f64::consts::PI;

    let tau_mat = tau.matrix();
    let mut grad = CVector::zeros(g);
    let mut mv = DVector::<Complex64>::zeros(g);
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    for_each_ellipsoid_point(&y, &yinv_y0, r2, LATTICE_CAP, |m| {
        for i in 0..g {
            mv[i] = Complex64::new(m[i] as f64, 0.0);
        }
        let term = epi(cdot(&mv, &(tau_mat * &mv)) + 2.0 * cdot(&mv, z));
        for i in 0..g {
            grad[i] += two_pi_i * mv[i] * term;
        }
    })?;
    Ok(grad)
}

/// Residual of Riemann's bilinear addition theorem
/// theta[c](z) theta[c](w) = sum_sigma (-1)^{(delta,sigma+eps)}
///   Theta[sigma+eps]((z+w)/2) Theta[sigma]((z-w)/2).
///
/// The sign exponent pairs delta with sigma+eps, not sigma alone; the two
/// agree up to the global factor (-1)^{(eps,delta)}, so the distinction only
/// shows for odd characteristics.
pub fn riemann_bilinear_check(
    tau: &PeriodMatrix,
    c: &Characteristic,
    z: &CVector,
    w: &CVector,
    spec: &TruncationSpec,
) -> Result<f64> {
    let lhs = theta_char(tau, z, c, spec)?.value * theta_char(tau, w, c, spec)?.value;
    let half_sum = CVector::from_iterator(z.len(), z.iter().zip(w.iter()).map(|(a, b)| 0.5 * (a + b)));
    let half_diff = CVector::from_iterator(z.len(), z.iter().zip(w.iter()).map(|(a, b)| 0.5 * (a - b)));
    let k1 = kummer(tau, &half_sum, spec)?;
    let k2 = kummer(tau, &half_diff, spec)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for sigma in enumerate(tau.genus()) {
        let shifted = sigma ^ c.eps;
        let sign = if c.delta.dot(&shifted)? == 1 { -1.0 } else { 1.0 };
        rhs += sign * k1.get(&shifted) * k2.get(&sigma);
    }
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm()))
}

/// Residual of the shifted-argument route for theta with characteristics:
/// theta[eps;delta](tau,z) = e[(eps,tau eps)/4 + (eps,z) + (eps,delta)/2]
///   * theta(tau, z + (tau eps + delta)/2).
///
/// The phase constant is the exact one; the integer scalar product
/// (eps,delta) enters through e[(eps,delta)/2] = i^{(eps,delta)}.
pub fn shift_route_check(
    tau: &PeriodMatrix,
    c: &Characteristic,
    z: &CVector,
    spec: &TruncationSpec,
) -> Result<f64> {
    let direct = theta_char(tau, z, c, spec)?.value;
    let hp = half_period(tau, &c.eps, &c.delta);
    let shifted_arg = CVector::from_iterator(z.len(), z.iter().zip(hp.iter()).map(|(a, b)| a + b));
    let plain = theta(tau, &shifted_arg, spec)?.value;
    let ev = cvector_from_f64(&c.eps.coords_f64());
    let int_dot: i64 = c
        .eps
        .coords()
        .iter()
        .zip(c.delta.coords().iter())
        .map(|(&a, &b)| (a * b) as i64)
        .sum();
    let phase = 0.25 * cdot(&ev, &(tau.matrix() * &ev))
        + cdot(&ev, z)
        + Complex64::new(0.5 * int_dot as f64, 0.0);
    let via_shift = epi(phase) * plain;
    Ok((direct - via_shift).norm() / (1.0 + direct.norm() + via_shift.norm()))
}

/// Residual of the quasi-periodicity law
/// Theta[eps](tau, z + e_j + tau e_k) = e(-2 (e_k,tau e_k) - 4 (e_k,z)) Theta[eps](tau,z).
pub fn theta2_quasi_periodicity_check(
    tau: &PeriodMatrix,
    z: &CVector,
    eps: &BinaryVector,
    j: usize,
    k: usize,
    spec: &TruncationSpec,
) -> Result<f64> {
    let g = tau.genus();
    assert!(j < g && k < g);
    let tau_col = tau.matrix().column(k);
    let mut arg = z.clone();
    arg[j] += Complex64::new(1.0, 0.0);
    for i in 0..g {
        arg[i] += tau_col[i];
    }
    let lhs = theta2(tau, &arg, eps, spec)?.value;
    let factor = epi(-2.0 * tau.matrix()[(k, k)] - 4.0 * z[k]);
    let rhs = factor * theta2(tau, z, eps, spec)?.value;
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm()))
}
