//! Period matrices of hyperelliptic curves y^2 = prod (x - p_i) with real
//! branch points, in the homology basis whose Weierstrass images are the
//! classical half-periods A(p_2) = e_1/2, A(p_{2i}) = (tau s_{i-1} + e_i)/2 + s_{i-1},
//! A(p_{2i+1}) = (tau s_i + e_i)/2 + s_{i-1}, A(p_{2g+2}) = tau s_g / 2.
//!
//! Each inter-branch segment carries the phase (-i)^{#points to the right}
//! (the branch of 1/y along the upper boundary of the principal sheet, fixed
//! by y > 0 right of the last branch point).  The a-period columns are
//! alternating-sign prefix sums of the cut-segment integrals and the
//! b-period columns alternating-sign gap-segment integrals; the resulting
//! tau is validated rather than derived: symmetry, positive definite
//! imaginary part, quadrature convergence under node doubling, and the mod-2
//! characteristics of the integrated Abel-Jacobi path images must all match.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::chars::{s_vector, BinaryVector, Characteristic, Parity};
use crate::error::{Error, Result};
use crate::lattice::TruncationSpec;
use crate::theta::{theta, CMatrix, CVector, PeriodMatrix};

/// Strictly increasing list of 2g+2 real branch points, g >= 2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchConfig {
    points: Vec<f64>,
}

impl BranchConfig {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 6 {
            return Err(Error::BadBranchConfig(format!(
                "need at least 6 branch points, got {}",
                points.len()
            )));
        }
        if points.len() % 2 != 0 {
            return Err(Error::BadBranchConfig(format!(
                "need an even number of branch points, got {}",
                points.len()
            )));
        }
        if !points.iter().all(|p| p.is_finite()) {
            return Err(Error::BadBranchConfig("branch points must be finite".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadBranchConfig(
                "branch points must be strictly increasing".into(),
            ));
        }
        Ok(BranchConfig { points })
    }

    pub fn genus(&self) -> usize {
        (self.points.len() - 2) / 2
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

/// Raw and normalized periods plus the self-validation diagnostics.
#[derive(Clone, Debug)]
pub struct PeriodData {
    pub genus: usize,
    pub a_periods: CMatrix,
    pub b_periods: CMatrix,
    pub tau: PeriodMatrix,
    /// Gauss-Chebyshev nodes per segment in the accepted (doubled) pass.
    pub quad_nodes: usize,
    /// Max relative change of a tau entry under node doubling.
    pub node_doubling_delta: f64,
    /// Entrywise asymmetry of the raw tau before symmetrization.
    pub symmetry_defect: f64,
    /// Max distance of 2*(path image coordinates) from integers.
    pub image_lattice_defect: f64,
}

/// Default node count per segment.
pub const DEFAULT_QUAD_NODES: usize = 256;

/// Node-doubling convergence requirement.
pub const QUAD_CONV_TOL: f64 = 1e-9;

/// Tolerance for the raw (pre-symmetrization) asymmetry of tau.
pub const TAU_SYMMETRY_TOL: f64 = 1e-8;

/// Positive moments int x^{j-1} / sqrt(|rest|) over segment [p_s, p_{s+1}]
/// (1-based s), where rest omits the two endpoint factors; Gauss-Chebyshev
/// absorbs the endpoint inverse square roots exactly.
fn segment_moments(points: &[f64], s: usize, g: usize, n: usize) -> Vec<f64> {
    let (a, b) = (points[s - 1], points[s]);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut moments = vec![0.0f64; g];
    for k in 1..=n {
        let t = ((2 * k - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
        let x = mid + half * t;
        let mut rest = 1.0f64;
        for (i, &p) in points.iter().enumerate() {
            if i != s - 1 && i != s {
                rest *= x - p;
            }
        }
        let w = 1.0 / rest.abs().sqrt();
        let mut xp = 1.0f64;
        for m in moments.iter_mut() {
            *m += xp * w;
            xp *= x;
        }
    }
    let scale = std::f64::consts::PI / n as f64;
    for m in moments.iter_mut() {
        *m *= scale;
    }
    moments
}

/// All 2g+1 phased segment increment vectors for the upper-boundary path.
fn path_increments(cfg: &BranchConfig, n: usize) -> Vec<CVector> {
    let g = cfg.genus();
    let pts = cfg.points();
    let npts = pts.len();
    (1..=2 * g + 1)
        .map(|s| {
            let nright = (npts - s) as u32;
            let phase = Complex64::new(0.0, -1.0).powu(nright);
            let m = segment_moments(pts, s, g, n);
            CVector::from_iterator(g, m.into_iter().map(|x| phase * x))
        })
        .collect()
}

fn assemble_tau(incs: &[CVector], g: usize) -> Result<(CMatrix, CMatrix, CMatrix)> {
    let mut pa = CMatrix::zeros(g, g);
    let mut pb = CMatrix::zeros(g, g);
    for i in 1..=g {
        let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
        let mut prefix = CVector::zeros(g);
        for j in 1..=i {
            prefix += &incs[2 * j - 2]; // segment 2j-1 (cut j)
        }
        pa.set_column(i - 1, &prefix.map(|c| 2.0 * sign * c));
        pb.set_column(i - 1, &incs[2 * i - 1].map(|c| 2.0 * sign * c)); // segment 2i (gap i)
    }
    let lu = pa.clone().lu();
    let tau = lu
        .solve(&pb)
        .ok_or_else(|| Error::PeriodInvariantViolated("a-period matrix is singular".into()))?;
    Ok((pa, pb, tau))
}

/// Expected mod-2 characteristics of the Weierstrass images A(p_m).
fn expected_char(g: usize, m: usize) -> Characteristic {
    let zero = BinaryVector::zeros(g);
    if m == 1 {
        return Characteristic::new(zero, zero).unwrap();
    }
    if m == 2 * g + 2 {
        return Characteristic::new(s_vector(g, g).unwrap(), zero).unwrap();
    }
    let i = m / 2;
    if m % 2 == 0 {
        Characteristic::new(s_vector(g, i - 1).unwrap(), BinaryVector::basis(g, i)).unwrap()
    } else {
        Characteristic::new(s_vector(g, i).unwrap(), BinaryVector::basis(g, i)).unwrap()
    }
}

/// Decompose a point as tau x + y and read off the order-two characteristic;
/// returns the characteristic and the distance of (2x, 2y) from integrality.
pub fn characteristic_of_point(tau: &PeriodMatrix, a: &CVector) -> (Characteristic, f64) {
    let g = tau.genus();
    let y_mat = tau.im();
    let im_a = DVector::from_iterator(g, a.iter().map(|c| c.im));
    let x = y_mat
        .lu()
        .solve(&im_a)
        .expect("Im tau positive definite");
    let re_a = DVector::from_iterator(g, a.iter().map(|c| c.re));
    let y = re_a - tau.re() * &x;
    let mut alpha = BinaryVector::zeros(g);
    let mut beta = BinaryVector::zeros(g);
    let mut defect = 0.0f64;
    for i in 0..g {
        let tx = 2.0 * x[i];
        let ty = 2.0 * y[i];
        defect = defect.max((tx - tx.round()).abs()).max((ty - ty.round()).abs());
        alpha.set(i, (tx.round() as i64).rem_euclid(2) as u8);
        beta.set(i, (ty.round() as i64).rem_euclid(2) as u8);
    }
    (Characteristic::new(alpha, beta).unwrap(), defect)
}

/// Integrate the period matrix for a branch configuration.
///
/// Runs the quadrature at `quad_nodes` and `2*quad_nodes` nodes, accepts the
/// doubled pass, and fails if any tau entry moved by more than QUAD_CONV_TOL
/// (relative) or if any PeriodData invariant is violated.
pub fn period_matrix(cfg: &BranchConfig, quad_nodes: usize) -> Result<PeriodData> {
    let g = cfg.genus();
    let incs_coarse = path_increments(cfg, quad_nodes.max(8));
    let incs = path_increments(cfg, 2 * quad_nodes.max(8));
    let (_, _, tau_coarse) = assemble_tau(&incs_coarse, g)?;
    let (pa, pb, tau_raw) = assemble_tau(&incs, g)?;

    let scale = 1.0 + tau_raw.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let delta = (&tau_raw - &tau_coarse)
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        / scale;
    if delta > QUAD_CONV_TOL {
        return Err(Error::QuadratureNotConverged { delta, tol: QUAD_CONV_TOL });
    }

    let mut defect = 0.0f64;
    for i in 0..g {
        for j in 0..i {
            defect = defect.max((tau_raw[(i, j)] - tau_raw[(j, i)]).norm());
        }
    }
    if defect > TAU_SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { defect: defect / scale });
    }
    // exact symmetrization of quadrature noise before the strict PeriodMatrix check
    let mut sym = tau_raw.clone();
    for i in 0..g {
        for j in 0..g {
            sym[(i, j)] = 0.5 * (tau_raw[(i, j)] + tau_raw[(j, i)]);
        }
    }
    let tau = PeriodMatrix::new(sym)?;

    // Path-image validation: the integrated Abel-Jacobi images of all
    // Weierstrass points must be half-periods with the expected mod-2
    // characteristics.
    let n_inv = pa
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::PeriodInvariantViolated("a-period matrix is singular".into()))?;
    let mut acc = CVector::zeros(g);
    let mut image_defect = 0.0f64;
    for m in 2..=2 * g + 2 {
        acc += &n_inv * &incs[m - 2];
        let (ch, d) = characteristic_of_point(&tau, &acc);
        image_defect = image_defect.max(d);
        let want = expected_char(g, m);
        if d > 1e-6 || ch != want {
            return Err(Error::PeriodInvariantViolated(format!(
                "path image of p_{m} has characteristic {ch} (defect {d:.2e}), expected {want}"
            )));
        }
    }

    Ok(PeriodData {
        genus: g,
        a_periods: pa,
        b_periods: pb,
        tau,
        quad_nodes: 2 * quad_nodes.max(8),
        node_doubling_delta: delta,
        symmetry_defect: defect / scale,
        image_lattice_defect: image_defect,
    })
}

/// Abel-Jacobi images of the 2g+2 Weierstrass points and the shifted Riemann
/// constant R = A(p_2), from the closed-form half-period expressions.
#[derive(Clone, Debug)]
pub struct WeierstrassImages {
    /// images[m-1] = A(p_m) for m = 1..2g+2.
    pub images: Vec<CVector>,
    /// R = A(p_2) = e_1/2.
    pub r_shift: CVector,
}

impl WeierstrassImages {
    pub fn genus(&self) -> usize {
        self.images.len() / 2 - 1
    }

    pub fn image(&self, m: usize) -> &CVector {
        &self.images[m - 1]
    }

    /// The characteristic of A(p_m) as an order-two point.
    pub fn characteristic(&self, m: usize) -> Characteristic {
        expected_char(self.genus(), m)
    }
}

fn real_cvector(g: usize, f: impl Fn(usize) -> f64) -> CVector {
    CVector::from_iterator(g, (0..g).map(|i| Complex64::new(f(i), 0.0)))
}

pub fn weierstrass_images(tau: &PeriodMatrix) -> WeierstrassImages {
    let g = tau.genus();
    let s = |k: usize| s_vector(g, k).unwrap();
    let tau_s = |k: usize| crate::theta::tau_times_bits(tau, &s(k));
    let mut images = Vec::with_capacity(2 * g + 2);
    images.push(CVector::zeros(g)); // A(p_1) = 0
    for i in 1..=g {
        let si1 = s(i - 1);
        let half_int = real_cvector(g, |t| si1.get(t) as f64);
        let e_i = real_cvector(g, |t| if t == i - 1 { 1.0 } else { 0.0 });
        let a_even = (tau_s(i - 1) + &e_i).map(|c| 0.5 * c) + &half_int;
        let a_odd = (tau_s(i) + &e_i).map(|c| 0.5 * c) + &half_int;
        images.push(a_even); // A(p_{2i})
        images.push(a_odd); // A(p_{2i+1})
    }
    images.push(tau_s(g).map(|c| 0.5 * c)); // A(p_{2g+2})
    let r_shift = images[1].clone();
    WeierstrassImages { images, r_shift }
}

/// One row of the theta-null vanishing report.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingEntry {
    pub point: usize,
    pub characteristic: Characteristic,
    pub parity: Parity,
    pub theta_abs: f64,
    pub expected_vanishing: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub entries: Vec<VanishingEntry>,
    pub all_pass: bool,
}

/// Vanishing threshold for odd-characteristic nulls.
pub const VANISHING_TOL: f64 = 1e-8;

/// Floor below which an even null would be considered suspicious.
pub const NONVANISHING_FLOOR: f64 = 1e-4;

/// Check Riemann vanishing along the Weierstrass images: theta(A(p_m) + R)
/// vanishes exactly when the characteristic of A(p_m) + A(p_2) is odd.
pub fn riemann_vanishing_check(
    tau: &PeriodMatrix,
    images: &WeierstrassImages,
    spec: &TruncationSpec,
) -> Result<VanishingReport> {
    let g = tau.genus();
    let r_char = expected_char(g, 2);
    let mut entries = Vec::new();
    for m in 1..=2 * g + 2 {
        let ch = images.characteristic(m).add(&r_char)?;
        let parity = ch.parity();
        let arg = images.image(m) + &images.r_shift;
        let value = theta(tau, &arg, spec)?;
        let theta_abs = value.value.norm();
        let expected_vanishing = parity == Parity::Odd;
        let pass = if expected_vanishing {
            theta_abs < VANISHING_TOL
        } else {
            theta_abs > NONVANISHING_FLOOR
        };
        entries.push(VanishingEntry {
            point: m,
            characteristic: ch,
            parity,
            theta_abs,
            expected_vanishing,
            pass,
        });
    }
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(VanishingReport { entries, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(points: &[f64]) -> BranchConfig {
        BranchConfig::new(points.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(BranchConfig::new(vec![0.0, 1.0, 2.0, 3.0]).is_err()); // too short
        assert!(BranchConfig::new(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).is_err()); // odd
        assert!(BranchConfig::new(vec![0.0, 1.0, 1.0, 3.0, 4.0, 5.0]).is_err()); // not strict
    }

    #[test]
    fn symmetric_sextic_has_symmetric_tau() {
        let pd = period_matrix(&cfg(&[-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]), DEFAULT_QUAD_NODES).unwrap();
        let t = pd.tau.matrix();
        // the x -> -x automorphism forces tau_11 = tau_22 in this labeling
        assert!((t[(0, 0)] - t[(1, 1)]).norm() < 1e-8);
        assert!(pd.node_doubling_delta < QUAD_CONV_TOL);
        assert!(pd.tau.min_im_eigenvalue() > 0.0);
    }

    #[test]
    fn affine_invariance_of_tau() {
        let base = [-4.1, -2.3, -0.7, 1.3, 2.9, 5.2];
        let shifted: Vec<f64> = base.iter().map(|p| p + 17.5).collect();
        let scaled: Vec<f64> = base.iter().map(|p| p * 3.25).collect();
        let t0 = period_matrix(&cfg(&base), DEFAULT_QUAD_NODES).unwrap();
        let t1 = period_matrix(&cfg(&shifted), DEFAULT_QUAD_NODES).unwrap();
        let t2 = period_matrix(&cfg(&scaled), DEFAULT_QUAD_NODES).unwrap();
        let d1 = (t0.tau.matrix() - t1.tau.matrix())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let d2 = (t0.tau.matrix() - t2.tau.matrix())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!(d1 < 1e-8, "shift changed tau by {d1}");
        assert!(d2 < 1e-8, "scale changed tau by {d2}");
    }

    #[test]
    fn weierstrass_image_formulas() {
        let pd = period_matrix(&cfg(&[-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]), 128).unwrap();
        let tau = &pd.tau;
        let im = weierstrass_images(tau);
        let g = 3;
        // A(p_2) = e_1 / 2
        assert!((im.image(2)[0] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!(im.image(2)[1].norm() < 1e-14 && im.image(2)[2].norm() < 1e-14);
        assert_eq!(&im.r_shift, im.image(2));
        // A(p_3) = (tau e_1 + e_1)/2
        for t in 0..g {
            let want = 0.5 * (tau.matrix()[(t, 0)] + if t == 0 { 1.0 } else { 0.0 });
            assert!((im.image(3)[t] - want).norm() < 1e-14);
        }
        // doubling any image lands in the lattice
        for m in 1..=2 * g + 2 {
            let (_, defect) = characteristic_of_point(tau, im.image(m));
            assert!(defect < 1e-12, "p_{m} defect {defect}");
        }
    }

    #[test]
    fn genus4_last_image_is_tau_s4_half() {
        let pd = period_matrix(
            &cfg(&[-9.0, -7.0, -4.8, -3.1, -1.0, 1.2, 2.9, 5.0, 6.8, 9.1]),
            128,
        )
        .unwrap();
        let im = weierstrass_images(&pd.tau);
        let s4 = crate::theta::tau_times_bits(&pd.tau, &s_vector(4, 4).unwrap());
        for t in 0..4 {
            assert!((im.image(10)[t] - 0.5 * s4[t]).norm() < 1e-14);
        }
        assert_eq!(im.images.len(), 10);
    }

    #[test]
    fn vanishing_parities_and_values() {
        let pd = period_matrix(&cfg(&[-6.5, -4.2, -2.9, -1.0, 0.7, 2.4, 4.4, 6.8]), DEFAULT_QUAD_NODES)
            .unwrap();
        let im = weierstrass_images(&pd.tau);
        let report =
            riemann_vanishing_check(&pd.tau, &im, &TruncationSpec::default()).unwrap();
        assert!(report.all_pass, "{report:?}");
        // pairs A(p_2)+A(p_{2i}) for i >= 2 are odd; A(p_2)+A(p_{2i+1}) even
        for e in &report.entries {
            if e.point >= 4 && e.point % 2 == 0 {
                assert_eq!(e.parity, Parity::Odd, "point {}", e.point);
            }
            if e.point >= 3 && e.point % 2 == 1 {
                assert_eq!(e.parity, Parity::Even, "point {}", e.point);
            }
        }
    }

    #[test]
    fn genus3_even_null_101_111_vanishes() {
        let pd = period_matrix(&cfg(&[-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]), DEFAULT_QUAD_NODES)
            .unwrap();
        let c: Characteristic = "[101;111]".parse().unwrap();
        assert_eq!(c.parity(), Parity::Even);
        let z = CVector::zeros(3);
        let v = crate::theta::theta_char(&pd.tau, &z, &c, &TruncationSpec::default()).unwrap();
        assert!(v.value.norm() < 1e-8, "null = {}", v.value.norm());
        // a generic even null stays away from zero
        let c0 = Characteristic::zero(3);
        let v0 = crate::theta::theta_char(&pd.tau, &z, &c0, &TruncationSpec::default()).unwrap();
        assert!(v0.value.norm() > 0.5);
    }

    #[test]
    fn random_configs_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in 2..=4usize {
            for _ in 0..3 {
                let cfg = crate::verifier::sample_branch_config(g, &mut rng);
                let pd = period_matrix(&cfg, 128).unwrap();
                assert!(pd.tau.min_im_eigenvalue() > 0.0);
                assert!(pd.node_doubling_delta < QUAD_CONV_TOL);
                let _ = rng.gen::<f64>();
            }
        }
    }
}
