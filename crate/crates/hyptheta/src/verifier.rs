//! Numerical verification engine for the addition-formula identity chain and
//! the multisecant rank conditions, with structured pass/fail reports.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chars::{enumerate, s_vector, BinaryVector, Characteristic};
use crate::error::{Error, Result};
use crate::identities::{gen_cubics, CubicIdentity};
use crate::lattice::TruncationSpec;
use crate::periods::{period_matrix, weierstrass_images, BranchConfig, WeierstrassImages};
use crate::theta::{
    cdot, cvector_from_f64, epi, half_period, kummer, theta, tau_times_bits, CVector,
    KummerVector, PeriodMatrix,
};

/// Modulus below which a theta in a denominator triggers a resample signal.
pub const DENOMINATOR_FLOOR: f64 = 1e-10;

/// Relative singular-value cutoff for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// Ratios in [RANK_TOL, RANK_AMBIGUOUS] flag the rank as undecided.
pub const RANK_AMBIGUOUS: f64 = 1e-4;

// ---------------------------------------------------------------------------
// sampling

/// Random Siegel matrix S + i (Q^T Q + g I); almost surely non-hyperelliptic.
pub fn sample_siegel_tau(g: usize, rng: &mut ChaCha8Rng) -> PeriodMatrix {
    let mut s = DMatrix::<f64>::zeros(g, g);
    for i in 0..g {
        for j in 0..=i {
            let v = rng.gen_range(-0.4..0.4);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    let q = DMatrix::<f64>::from_fn(g, g, |_, _| rng.gen_range(-0.3..0.3));
    let y = q.transpose() * &q + DMatrix::<f64>::identity(g, g) * g as f64;
    let mat = DMatrix::from_fn(g, g, |i, j| Complex64::new(s[(i, j)], y[(i, j)]));
    PeriodMatrix::new(mat).expect("construction guarantees validity")
}

/// Random z = u + tau v with u, v uniform in [-1/2, 1/2]^g.
pub fn sample_z(tau: &PeriodMatrix, rng: &mut ChaCha8Rng) -> CVector {
    let g = tau.genus();
    let u = DVector::<f64>::from_fn(g, |_, _| rng.gen_range(-0.5..0.5));
    let v = DVector::<f64>::from_fn(g, |_, _| rng.gen_range(-0.5..0.5));
    let tv = tau.matrix() * v.map(|x| Complex64::new(x, 0.0));
    CVector::from_fn(g, |i, _| Complex64::new(u[i], 0.0) + tv[i])
}

/// Random strictly increasing branch configuration with gaps in [0.5, 2],
/// centered at the origin.
pub fn sample_branch_config(g: usize, rng: &mut ChaCha8Rng) -> BranchConfig {
    let n = 2 * g + 2;
    let mut pts = Vec::with_capacity(n);
    let mut x = 0.0f64;
    for _ in 0..n {
        x += rng.gen_range(0.5..2.0);
        pts.push(x);
    }
    let mean = pts.iter().sum::<f64>() / n as f64;
    for p in pts.iter_mut() {
        *p -= mean;
    }
    BranchConfig::new(pts).expect("sampled configuration is valid")
}

// ---------------------------------------------------------------------------
// half-period point data

/// The point data (P = 0, Q, A_1..A_g, R) entering the identity chain, with
/// the order-two characteristics when the points are half-periods.
#[derive(Clone, Debug)]
pub struct HalfPeriodPoints {
    pub q: CVector,
    pub r: CVector,
    pub a: Vec<CVector>,
    pub r_char: Characteristic,
    pub a_chars: Vec<Characteristic>,
}

impl HalfPeriodPoints {
    /// The Weierstrass configuration Q = R = A(p_2), A_k = A(p_{2k+2}).
    pub fn from_images(images: &WeierstrassImages) -> Self {
        let g = images.genus();
        let a = (1..=g).map(|k| images.image(2 * k + 2).clone()).collect();
        let a_chars = (1..=g).map(|k| images.characteristic(2 * k + 2)).collect();
        HalfPeriodPoints {
            q: images.r_shift.clone(),
            r: images.r_shift.clone(),
            a,
            r_char: images.characteristic(2),
            a_chars,
        }
    }

    /// The same combinatorial data realized on an arbitrary tau; used as the
    /// negative control (the identities fail unless tau is hyperelliptic).
    pub fn synthetic(tau: &PeriodMatrix) -> Self {
        let g = tau.genus();
        let e1 = BinaryVector::basis(g, 1);
        let zero = BinaryVector::zeros(g);
        let q = half_period(tau, &zero, &e1);
        let a = (1..=g)
            .map(|k| {
                half_period(
                    tau,
                    &s_vector(g, k).unwrap(),
                    &BinaryVector::basis_or_zero(g, k + 1),
                )
            })
            .collect();
        let a_chars = (1..=g)
            .map(|k| {
                Characteristic::new(
                    s_vector(g, k).unwrap(),
                    BinaryVector::basis_or_zero(g, k + 1),
                )
                .unwrap()
            })
            .collect();
        HalfPeriodPoints {
            q: q.clone(),
            r: q,
            a,
            r_char: Characteristic::new(zero, e1).unwrap(),
            a_chars,
        }
    }

    /// The g+2 secant points P = 0, A_1, ..., A_g, Q.
    pub fn secant_points(&self) -> Vec<CVector> {
        let g = self.a.len();
        let mut pts = Vec::with_capacity(g + 2);
        pts.push(CVector::zeros(g));
        pts.extend(self.a.iter().cloned());
        pts.push(self.q.clone());
        pts
    }
}

// ---------------------------------------------------------------------------
// identity evaluations

#[derive(Clone, Copy, Debug)]
pub struct Fact1Eval {
    pub signed_sum: Complex64,
    pub magnitude: f64,
    pub residual: f64,
}

/// Residual of the cleared-denominator addition formula.
///
/// `points` is [P = 0, A_1, ..., A_g, Q]; r is the shifted Riemann constant.
pub fn eval_fact1(
    tau: &PeriodMatrix,
    points: &[CVector],
    r: &CVector,
    x: &CVector,
    y: &CVector,
    spec: &TruncationSpec,
) -> Result<Fact1Eval> {
    let g = tau.genus();
    if points.len() != g + 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected g+2 = {} points, got {}",
            g + 2,
            points.len()
        )));
    }
    if points[0].iter().any(|c| c.norm() > 1e-12) {
        return Err(Error::DimensionMismatch("first point must be P = 0".into()));
    }
    let q = &points[g + 1];
    let th = |arg: CVector| -> Result<Complex64> { Ok(theta(tau, &arg, spec)?.value) };

    let xy = x + y;
    let t_plus = th(q + &xy + r)? * th(q + r)? * th(x + r)? * th(y + r)?;
    let t_prod = th(&xy + r)? * th(r.clone())? * th(q + x + r)? * th(q + y + r)?;
    let theta_r = th(r.clone())?;
    let mut terms = vec![t_plus, -t_prod];
    for (k, a_k) in points[1..=g].iter().enumerate() {
        let denom = th(a_k.map(|c| 2.0 * c) + r)?;
        if denom.norm() < DENOMINATOR_FLOOR {
            return Err(Error::DenominatorTooSmall { index: k + 1, modulus: denom.norm() });
        }
        let t = theta_r * th(q + a_k + r)? * th(q - a_k + &xy + r)? * th(a_k + x + r)?
            * th(a_k + y + r)?
            / denom;
        terms.push(t);
    }
    let signed_sum: Complex64 = terms.iter().sum();
    let magnitude: f64 = terms.iter().map(|t| t.norm()).sum();
    Ok(Fact1Eval {
        signed_sum,
        magnitude,
        residual: signed_sum.norm() / magnitude.max(f64::MIN_POSITIVE),
    })
}

/// Shared per-z data for the sigma-indexed bracket coefficients of the
/// second-order expansion of the addition formula.
pub struct MessTables {
    pub coeff_z_r: Complex64,
    pub coeff_q_z_r: Complex64,
    pub coeff_k: Vec<Complex64>,
    pub kv_z_r: KummerVector,
    pub kv_q_z_r: KummerVector,
    pub kv_a_z_r: Vec<KummerVector>,
}

pub fn mess_tables(
    tau: &PeriodMatrix,
    half: &HalfPeriodPoints,
    z: &CVector,
    spec: &TruncationSpec,
) -> Result<MessTables> {
    let th = |arg: CVector| -> Result<Complex64> { Ok(theta(tau, &arg, spec)?.value) };
    let q = &half.q;
    let r = &half.r;
    let z2 = z.map(|c| 2.0 * c);
    let theta_r = th(r.clone())?;
    let coeff_z_r = th(q + &z2 + r)? * th(q + r)?;
    let coeff_q_z_r = th(&z2 + r)? * theta_r;
    let mut coeff_k = Vec::with_capacity(half.a.len());
    for (k, a_k) in half.a.iter().enumerate() {
        let denom = th(a_k.map(|c| 2.0 * c) + r)?;
        if denom.norm() < DENOMINATOR_FLOOR {
            return Err(Error::DenominatorTooSmall { index: k + 1, modulus: denom.norm() });
        }
        coeff_k.push(theta_r * th(q + a_k + r)? * th(q - a_k + &z2 + r)? / denom);
    }
    let kv_z_r = kummer(tau, &(z + r), spec)?;
    let kv_q_z_r = kummer(tau, &(q + z + r), spec)?;
    let kv_a_z_r = half
        .a
        .iter()
        .map(|a_k| kummer(tau, &(a_k + z + r), spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(MessTables { coeff_z_r, coeff_q_z_r, coeff_k, kv_z_r, kv_q_z_r, kv_a_z_r })
}

#[derive(Clone, Copy, Debug)]
pub struct CoefficientEval {
    pub value: Complex64,
    pub residual: f64,
}

/// The sigma-component of the bracket expansion; vanishes on Jacobian data.
pub fn eval_mess_with(tables: &MessTables, sigma: &BinaryVector) -> CoefficientEval {
    let mut terms = vec![
        tables.coeff_z_r * tables.kv_z_r.get(sigma),
        -(tables.coeff_q_z_r * tables.kv_q_z_r.get(sigma)),
    ];
    for (c, kv) in tables.coeff_k.iter().zip(&tables.kv_a_z_r) {
        terms.push(c * kv.get(sigma));
    }
    let value: Complex64 = terms.iter().sum();
    let magnitude: f64 = terms.iter().map(|t| t.norm()).sum();
    CoefficientEval { value, residual: value.norm() / magnitude.max(f64::MIN_POSITIVE) }
}

/// One-shot form of `eval_mess_with`; also returns the chain residual
/// against the cleared addition formula at x = z + w, y = z - w.
pub fn eval_mess(
    tau: &PeriodMatrix,
    half: &HalfPeriodPoints,
    z: &CVector,
    w: &CVector,
    sigma: &BinaryVector,
    spec: &TruncationSpec,
) -> Result<CoefficientEval> {
    let _ = w;
    let tables = mess_tables(tau, half, z, spec)?;
    Ok(eval_mess_with(&tables, sigma))
}

/// |fact1 signed sum - sum_sigma b_sigma Theta[sigma](w)|, normalized.
/// Both routes are computed independently.
pub fn mess_chain_check(
    tau: &PeriodMatrix,
    half: &HalfPeriodPoints,
    z: &CVector,
    w: &CVector,
    spec: &TruncationSpec,
) -> Result<f64> {
    let tables = mess_tables(tau, half, z, spec)?;
    let kv_w = kummer(tau, w, spec)?;
    let mut recombined = Complex64::new(0.0, 0.0);
    for sigma in enumerate(tau.genus()) {
        recombined += eval_mess_with(&tables, &sigma).value * kv_w.get(&sigma);
    }
    let x = z + w;
    let y = z - w;
    let fact1 = eval_fact1(tau, &half.secant_points(), &half.r, &x, &y, spec)?;
    let denom = 1.0 + fact1.signed_sum.norm() + recombined.norm();
    Ok((fact1.signed_sum - recombined).norm() / denom)
}

/// Shared per-z data for the fully second-order form of the identity.
pub struct LastaddTables {
    pub ratio_k: Vec<Complex64>,
    pub kv_q_z_r: KummerVector,
    pub kv_z: KummerVector,
    pub kv_z_r: KummerVector,
    pub kv_z_minus_a: Vec<KummerVector>,
    pub kv_a_z_r: Vec<KummerVector>,
}

pub fn lastadd_tables(
    tau: &PeriodMatrix,
    half: &HalfPeriodPoints,
    z: &CVector,
    spec: &TruncationSpec,
) -> Result<LastaddTables> {
    let th = |arg: CVector| -> Result<Complex64> { Ok(theta(tau, &arg, spec)?.value) };
    let theta_r = th(half.r.clone())?;
    let mut ratio_k = Vec::with_capacity(half.a.len());
    for (k, a_k) in half.a.iter().enumerate() {
        let denom = th(a_k.map(|c| 2.0 * c) + &half.r)?;
        if denom.norm() < DENOMINATOR_FLOOR {
            return Err(Error::DenominatorTooSmall { index: k + 1, modulus: denom.norm() });
        }
        ratio_k.push(theta_r / denom);
    }
    Ok(LastaddTables {
        ratio_k,
        kv_q_z_r: kummer(tau, &(&half.q + z + &half.r), spec)?,
        kv_z: kummer(tau, z, spec)?,
        kv_z_r: kummer(tau, &(z + &half.r), spec)?,
        kv_z_minus_a: half
            .a
            .iter()
            .map(|a_k| kummer(tau, &(z - a_k), spec))
            .collect::<Result<Vec<_>>>()?,
        kv_a_z_r: half
            .a
            .iter()
            .map(|a_k| kummer(tau, &(a_k + z + &half.r), spec))
            .collect::<Result<Vec<_>>>()?,
    })
}

/// The sigma-equation of the second-order form: sums over all eps of
/// Th[eps](Q+z+R) Th[eps](z) Th[sigma](z+R) - Th[eps](z+R) Th[eps](z) Th[sigma](Q+z+R)
/// + sum_k (theta(R)/theta(2A_k+R)) Th[eps](Q+z+R) Th[eps](z-A_k) Th[sigma](A_k+z+R).
pub fn eval_lastadd_with(tables: &LastaddTables, sigma: &BinaryVector) -> CoefficientEval {
    let g = sigma.len();
    let s_z_r = tables.kv_z_r.get(sigma);
    let s_q_z_r = tables.kv_q_z_r.get(sigma);
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0f64;
    for eps in enumerate(g) {
        let e_q = tables.kv_q_z_r.get(&eps);
        let e_z = tables.kv_z.get(&eps);
        let t1 = e_q * e_z * s_z_r;
        let t2 = -(tables.kv_z_r.get(&eps) * e_z * s_q_z_r);
        value += t1 + t2;
        magnitude += t1.norm() + t2.norm();
        for (k, ratio) in tables.ratio_k.iter().enumerate() {
            let t = ratio * e_q * tables.kv_z_minus_a[k].get(&eps) * tables.kv_a_z_r[k].get(sigma);
            value += t;
            magnitude += t.norm();
        }
    }
    CoefficientEval { value, residual: value.norm() / magnitude.max(f64::MIN_POSITIVE) }
}

pub fn eval_lastadd(
    tau: &PeriodMatrix,
    half: &HalfPeriodPoints,
    z: &CVector,
    sigma: &BinaryVector,
    spec: &TruncationSpec,
) -> Result<CoefficientEval> {
    let tables = lastadd_tables(tau, half, z, spec)?;
    Ok(eval_lastadd_with(&tables, sigma))
}

/// Cross-check the computed coefficient quotients theta(R)/theta(2A_k+R)
/// against the exact automorphy value
/// e[(alpha_k, tau alpha_k) + (alpha, tau alpha_k) + (alpha_k, beta)].
///
/// The (alpha_k, beta) parity factor is forced by quasi-periodicity; the
/// factor-free printed form fails by that sign whenever (alpha_k, beta) is odd.
pub fn ratio_check(
    tau: &PeriodMatrix,
    half: &HalfPeriodPoints,
    spec: &TruncationSpec,
) -> Result<Vec<f64>> {
    let theta_r = theta(tau, &half.r, spec)?.value;
    let alpha = &half.r_char.eps;
    let beta = &half.r_char.delta;
    let mut out = Vec::with_capacity(half.a.len());
    for (k, a_k) in half.a.iter().enumerate() {
        let denom = theta(tau, &(a_k.map(|c| 2.0 * c) + &half.r), spec)?.value;
        if denom.norm() < DENOMINATOR_FLOOR {
            return Err(Error::DenominatorTooSmall { index: k + 1, modulus: denom.norm() });
        }
        let computed = theta_r / denom;
        let ak = &half.a_chars[k].eps;
        let akv = cvector_from_f64(&ak.coords_f64());
        let tau_ak = tau_times_bits(tau, ak);
        let alphav = cvector_from_f64(&alpha.coords_f64());
        let int_dot_ak_beta: i64 = ak
            .coords()
            .iter()
            .zip(beta.coords().iter())
            .map(|(&a, &b)| (a * b) as i64)
            .sum();
        let phase = cdot(&akv, &tau_ak)
            + cdot(&alphav, &tau_ak)
            + Complex64::new(int_dot_ak_beta as f64, 0.0);
        let exact = epi(phase);
        out.push((computed - exact).norm() / (1.0 + computed.norm() + exact.norm()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct CubicEval {
    pub value: Complex64,
    pub residual: f64,
}

/// Evaluate a canonical cubic against a precomputed second-order table.
pub fn eval_cubic_with(table: &KummerVector, identity: &CubicIdentity) -> CubicEval {
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0f64;
    for m in &identity.monomials {
        let p = (m.sign as f64)
            * (m.mult as f64)
            * table.get(&m.factors[0])
            * table.get(&m.factors[1])
            * table.get(&m.factors[2]);
        value += p;
        magnitude += p.norm();
    }
    if identity.monomials.is_empty() {
        return CubicEval { value: Complex64::new(0.0, 0.0), residual: 0.0 };
    }
    CubicEval { value, residual: value.norm() / magnitude.max(f64::MIN_POSITIVE) }
}

pub fn eval_cubic(
    tau: &PeriodMatrix,
    identity: &CubicIdentity,
    z: &CVector,
    spec: &TruncationSpec,
) -> Result<CubicEval> {
    if identity.genus != tau.genus() {
        return Err(Error::DimensionMismatch("cubic genus does not match tau".into()));
    }
    let table = kummer(tau, z, spec)?;
    Ok(eval_cubic_with(&table, identity))
}

// ---------------------------------------------------------------------------
// nondegeneracy

#[derive(Clone, Debug, Serialize)]
pub struct NondegeneracyReport {
    /// Per sigma: the largest coefficient magnitude over the z-samples,
    /// relative to the sample scale.
    pub per_sigma_max: Vec<f64>,
    pub vacuous: bool,
    pub nondegenerate: bool,
}

/// Group each cubic's monomials by the Kummer-image factor (Theta[sigma+s_k])
/// and verify the coefficient functions are not all numerically zero across
/// the z-samples.
pub fn nondegeneracy_check(
    tau: &PeriodMatrix,
    family: &[CubicIdentity],
    z_samples: &[CVector],
    spec: &TruncationSpec,
) -> Result<NondegeneracyReport> {
    let g = tau.genus();
    let tables = z_samples
        .iter()
        .map(|z| kummer(tau, z, spec))
        .collect::<Result<Vec<_>>>()?;
    let mut per_sigma_max = Vec::with_capacity(family.len());
    let mut vacuous = true;
    for identity in family {
        if !identity.monomials.is_empty() {
            vacuous = false;
        }
        let mut best = 0.0f64;
        for table in &tables {
            let scale = table.max_abs().powi(2).max(f64::MIN_POSITIVE);
            for k in 0..=g {
                let kappa = identity.sigma ^ s_vector(g, k).unwrap();
                let mut coeff = Complex64::new(0.0, 0.0);
                for m in &identity.monomials {
                    if let Some(pos) = m.factors.iter().position(|f| *f == kappa) {
                        let others: Vec<_> =
                            (0..3).filter(|&i| i != pos).map(|i| m.factors[i]).collect();
                        coeff += (m.sign as f64)
                            * (m.mult as f64)
                            * table.get(&others[0])
                            * table.get(&others[1]);
                    }
                }
                best = best.max(coeff.norm() / scale);
            }
        }
        per_sigma_max.push(best);
    }
    let nondegenerate = !vacuous && per_sigma_max.iter().any(|&m| m > 1e-6);
    Ok(NondegeneracyReport { per_sigma_max, vacuous, nondegenerate })
}

// ---------------------------------------------------------------------------
// secant ranks

#[derive(Clone, Debug, Serialize)]
pub struct SecantReport {
    pub matrix_shape: (usize, usize),
    pub singular_values: Vec<f64>,
    pub decided_rank: usize,
    pub gap_ratio: f64,
    pub ambiguous: bool,
}

/// Build the n x 2^g matrix with rows K(point_i + z) (max-modulus normalized)
/// and decide its numerical rank from the singular value profile.
pub fn secant_rank(
    tau: &PeriodMatrix,
    points: &[CVector],
    z: &CVector,
    spec: &TruncationSpec,
) -> Result<SecantReport> {
    if points.len() < 2 {
        return Err(Error::DimensionMismatch("need at least 2 secant points".into()));
    }
    let g = tau.genus();
    let cols = 1usize << g;
    let mut mat = DMatrix::<Complex64>::zeros(points.len(), cols);
    for (i, p) in points.iter().enumerate() {
        let kv = kummer(tau, &(p + z), spec)?;
        let scale = kv.max_abs();
        for (j, c) in kv.coords.iter().enumerate() {
            mat[(i, j)] = c / scale;
        }
    }
    let mut sv: Vec<f64> = mat.svd(false, false).singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let s1 = sv[0].max(f64::MIN_POSITIVE);
    let decided_rank = sv.iter().filter(|&&s| s / s1 > RANK_TOL).count();
    let ambiguous = sv
        .iter()
        .any(|&s| (RANK_TOL..=RANK_AMBIGUOUS).contains(&(s / s1)));
    let gap_ratio = sv.get(decided_rank).map(|s| s / s1).unwrap_or(0.0);
    Ok(SecantReport {
        matrix_shape: (points.len(), cols),
        singular_values: sv,
        decided_rank,
        gap_ratio,
        ambiguous,
    })
}

// ---------------------------------------------------------------------------
// final remark experiment

#[derive(Clone, Debug, Serialize)]
pub struct FinalRemarkReport {
    pub genus: usize,
    pub max_residual_z0: f64,
    pub max_residual_order_two: f64,
    pub max_residual_random_z: f64,
    /// Empirical check: z = 0 residuals small implies order-two residuals
    /// within a factor 10; None when the z = 0 residuals are not small.
    pub implication_holds: Option<bool>,
    pub tolerance: f64,
}

/// Report-only experiment: do small residuals at z = 0 co-occur with small
/// residuals at all points of order two and at random z?
pub fn final_remark_experiment(
    tau: &PeriodMatrix,
    tolerance: f64,
    n_random: usize,
    seed: u64,
    spec: &TruncationSpec,
) -> Result<FinalRemarkReport> {
    let g = tau.genus();
    if !(3..=4).contains(&g) {
        return Err(Error::GenusOutOfRange { genus: g, min: 3, max: 4 });
    }
    let family = gen_cubics(g)?;
    let max_over = |zs: &[CVector]| -> Result<f64> {
        let mut worst = 0.0f64;
        for z in zs {
            let table = kummer(tau, z, spec)?;
            for id in &family {
                worst = worst.max(eval_cubic_with(&table, id).residual);
            }
        }
        Ok(worst)
    };
    let z0 = vec![CVector::zeros(g)];
    let mut order_two = Vec::with_capacity(1 << (2 * g));
    for alpha in enumerate(g) {
        for beta in enumerate(g) {
            order_two.push(half_period(tau, &alpha, &beta));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random: Vec<CVector> = (0..n_random).map(|_| sample_z(tau, &mut rng)).collect();

    let max_residual_z0 = max_over(&z0)?;
    let max_residual_order_two = max_over(&order_two)?;
    let max_residual_random_z = max_over(&random)?;
    let implication_holds = if max_residual_z0 < tolerance {
        Some(max_residual_order_two < 10.0 * tolerance)
    } else {
        None
    };
    Ok(FinalRemarkReport {
        genus: g,
        max_residual_z0,
        max_residual_order_two,
        max_residual_random_z,
        implication_holds,
        tolerance,
    })
}

// ---------------------------------------------------------------------------
// suite runner

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub tau_digest: String,
    pub inputs: Value,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub tolerance: f64,
    pub samples: Vec<SampleRecord>,
    pub max_residual: f64,
    pub verdict: Verdict,
}

impl IdentityReport {
    fn from_samples(id: &str, tolerance: f64, samples: Vec<SampleRecord>) -> Self {
        let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
        IdentityReport {
            identity_id: id.to_string(),
            tolerance,
            samples,
            max_residual,
            verdict: if max_residual < tolerance { Verdict::Pass } else { Verdict::Fail },
        }
    }

    fn info(id: &str, tolerance: f64, samples: Vec<SampleRecord>) -> Self {
        let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
        IdentityReport {
            identity_id: id.to_string(),
            tolerance,
            samples,
            max_residual,
            verdict: Verdict::Info,
        }
    }
}

/// 64-bit FNV-1a of the canonical JSON of tau, as a short reproducible digest.
pub fn tau_digest(tau: &PeriodMatrix) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    let reim: Vec<[f64; 2]> = tau.matrix().iter().map(|c| [c.re, c.im]).collect();
    for b in serde_json::to_vec(&reim).expect("serializable") {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

fn cvec_json(v: &CVector) -> Value {
    Value::Array(v.iter().map(|c| json!([c.re, c.im])).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fact1,
    Mess,
    Lastadd,
    Cubics,
    Secant,
    Nondegeneracy,
    FinalRemark,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "fact1" => Suite::Fact1,
            "mess" => Suite::Mess,
            "lastadd" => Suite::Lastadd,
            "cubics" => Suite::Cubics,
            "secant" => Suite::Secant,
            "nondegeneracy" => Suite::Nondegeneracy,
            "final-remark" => Suite::FinalRemark,
            _ => return None,
        })
    }

    pub fn all() -> [Suite; 7] {
        [
            Suite::Fact1,
            Suite::Mess,
            Suite::Lastadd,
            Suite::Cubics,
            Suite::Secant,
            Suite::Nondegeneracy,
            Suite::FinalRemark,
        ]
    }
}

/// Numeric knobs of a verification run.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    pub tolerance: f64,
    pub truncation_eps: f64,
    pub quad_nodes: usize,
    pub seed: u64,
    pub z_samples: usize,
    /// Worker cap; None defers to THETA_SECANT_THREADS or the rayon default.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tolerance: 1e-8,
            truncation_eps: 1e-13,
            quad_nodes: 256,
            seed: 1,
            z_samples: 10,
            threads: None,
        }
    }
}

impl VerifyConfig {
    pub fn spec(&self) -> TruncationSpec {
        TruncationSpec::new(self.truncation_eps)
    }
}

/// Where tau comes from: a hyperelliptic positive control or a random
/// Siegel negative control.
#[derive(Clone, Debug)]
pub enum TauSource {
    Branches(BranchConfig),
    RandomSiegel { genus: usize },
    Explicit(PeriodMatrix),
}

/// Resolved verification input: tau plus the half-period point data.
pub struct VerifyInput {
    pub tau: PeriodMatrix,
    pub half: HalfPeriodPoints,
    pub hyperelliptic: bool,
    pub source: Value,
}

pub fn resolve_input(source: &TauSource, cfg: &VerifyConfig) -> Result<VerifyInput> {
    match source {
        TauSource::Branches(bc) => {
            let pd = period_matrix(bc, cfg.quad_nodes)?;
            let images = weierstrass_images(&pd.tau);
            Ok(VerifyInput {
                half: HalfPeriodPoints::from_images(&images),
                tau: pd.tau,
                hyperelliptic: true,
                source: json!({"branches": bc.points()}),
            })
        }
        TauSource::RandomSiegel { genus } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_7a0);
            let tau = sample_siegel_tau(*genus, &mut rng);
            Ok(VerifyInput {
                half: HalfPeriodPoints::synthetic(&tau),
                tau,
                hyperelliptic: false,
                source: json!({"random_tau_genus": genus, "seed": cfg.seed}),
            })
        }
        TauSource::Explicit(tau) => Ok(VerifyInput {
            half: HalfPeriodPoints::synthetic(tau),
            tau: tau.clone(),
            hyperelliptic: false,
            source: json!({"explicit": true}),
        }),
    }
}

/// Build the worker pool honoring the THETA_SECANT_THREADS cap.
pub fn worker_pool(threads: Option<usize>) -> rayon::ThreadPool {
    let n = threads
        .or_else(|| {
            std::env::var("THETA_SECANT_THREADS")
                .ok()
                .and_then(|s| s.parse::<usize>().ok())
        })
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .expect("thread pool")
}

/// Everything a `verify` invocation emits for one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub identity_reports: Vec<IdentityReport>,
    pub secant_reports: Vec<SecantReport>,
    pub nondegeneracy: Option<NondegeneracyReport>,
    pub final_remark: Option<FinalRemarkReport>,
    pub passed: bool,
}

pub fn run_suite(suite: Suite, input: &VerifyInput, cfg: &VerifyConfig) -> Result<SuiteResult> {
    let pool = worker_pool(cfg.threads);
    pool.install(|| run_suite_inner(suite, input, cfg))
}

fn run_suite_inner(suite: Suite, input: &VerifyInput, cfg: &VerifyConfig) -> Result<SuiteResult> {
    let tau = &input.tau;
    let g = tau.genus();
    let spec = cfg.spec();
    let digest = tau_digest(tau);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut identity_reports = Vec::new();
    let mut secant_reports = Vec::new();
    let mut nondeg = None;
    let mut final_remark = None;

    match suite {
        Suite::Fact1 => {
            let points = input.half.secant_points();
            let draws: Vec<(CVector, CVector)> = (0..cfg.z_samples)
                .map(|_| (sample_z(tau, &mut rng), sample_z(tau, &mut rng)))
                .collect();
            let samples = draws
                .par_iter()
                .map(|(x, y)| {
                    let ev = eval_fact1(tau, &points, &input.half.r, x, y, &spec)?;
                    Ok(SampleRecord {
                        tau_digest: digest.clone(),
                        inputs: json!({"x": cvec_json(x), "y": cvec_json(y)}),
                        residual: ev.residual,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            identity_reports.push(IdentityReport::from_samples("fact1", cfg.tolerance, samples));
        }
        Suite::Mess => {
            let draws: Vec<(CVector, CVector)> = (0..cfg.z_samples)
                .map(|_| (sample_z(tau, &mut rng), sample_z(tau, &mut rng)))
                .collect();
            let sigmas = enumerate(g);
            let per_draw = draws
                .par_iter()
                .map(|(z, w)| {
                    let tables = mess_tables(tau, &input.half, z, &spec)?;
                    let coeffs: Vec<SampleRecord> = sigmas
                        .iter()
                        .map(|sigma| SampleRecord {
                            tau_digest: digest.clone(),
                            inputs: json!({"sigma": sigma.to_string(), "z": cvec_json(z)}),
                            residual: eval_mess_with(&tables, sigma).residual,
                        })
                        .collect();
                    let chain = mess_chain_check(tau, &input.half, z, w, &spec)?;
                    Ok((
                        coeffs,
                        SampleRecord {
                            tau_digest: digest.clone(),
                            inputs: json!({"z": cvec_json(z), "w": cvec_json(w)}),
                            residual: chain,
                        },
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut coeff_samples = Vec::new();
            let mut chain_samples = Vec::new();
            for (c, ch) in per_draw {
                coeff_samples.extend(c);
                chain_samples.push(ch);
            }
            identity_reports.push(IdentityReport::from_samples("mess", cfg.tolerance, coeff_samples));
            identity_reports.push(IdentityReport::from_samples("mess-chain", 1e-9, chain_samples));
        }
        Suite::Lastadd => {
            let draws: Vec<CVector> = (0..cfg.z_samples).map(|_| sample_z(tau, &mut rng)).collect();
            let sigmas = enumerate(g);
            let per_draw = draws
                .par_iter()
                .map(|z| {
                    let la = lastadd_tables(tau, &input.half, z, &spec)?;
                    let mt = mess_tables(tau, &input.half, z, &spec)?;
                    let mut coeffs = Vec::new();
                    let mut agree = Vec::new();
                    for sigma in &sigmas {
                        let lv = eval_lastadd_with(&la, sigma);
                        let mv = eval_mess_with(&mt, sigma);
                        coeffs.push(SampleRecord {
                            tau_digest: digest.clone(),
                            inputs: json!({"sigma": sigma.to_string(), "z": cvec_json(z)}),
                            residual: lv.residual,
                        });
                        let denom = 1.0 + lv.value.norm() + mv.value.norm();
                        agree.push(SampleRecord {
                            tau_digest: digest.clone(),
                            inputs: json!({"sigma": sigma.to_string(), "z": cvec_json(z)}),
                            residual: (lv.value - mv.value).norm() / denom,
                        });
                    }
                    Ok((coeffs, agree))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut coeff_samples = Vec::new();
            let mut agree_samples = Vec::new();
            for (c, a) in per_draw {
                coeff_samples.extend(c);
                agree_samples.extend(a);
            }
            identity_reports.push(IdentityReport::from_samples(
                "lastadd",
                cfg.tolerance,
                coeff_samples,
            ));
            identity_reports.push(IdentityReport::from_samples(
                "lastadd-mess-agreement",
                1e-9,
                agree_samples,
            ));
            let ratios = ratio_check(tau, &input.half, &spec)?;
            let ratio_samples = ratios
                .iter()
                .enumerate()
                .map(|(k, r)| SampleRecord {
                    tau_digest: digest.clone(),
                    inputs: json!({"k": k + 1}),
                    residual: *r,
                })
                .collect();
            identity_reports.push(IdentityReport::from_samples(
                "lastadd-ratio",
                1e-9,
                ratio_samples,
            ));
        }
        Suite::Cubics => {
            let family = gen_cubics(g)?;
            let mut zs = vec![CVector::zeros(g)];
            for _ in 0..cfg.z_samples {
                zs.push(sample_z(tau, &mut rng));
            }
            let per_z = zs
                .par_iter()
                .map(|z| {
                    let table = kummer(tau, z, &spec)?;
                    Ok(family
                        .iter()
                        .map(|id| SampleRecord {
                            tau_digest: digest.clone(),
                            inputs: json!({"sigma": id.sigma.to_string(), "z": cvec_json(z)}),
                            residual: eval_cubic_with(&table, id).residual,
                        })
                        .collect::<Vec<_>>())
                })
                .collect::<Result<Vec<_>>>()?;
            let samples = per_z.into_iter().flatten().collect();
            identity_reports.push(IdentityReport::from_samples("cubics", cfg.tolerance, samples));
        }
        Suite::Secant => {
            let points = input.half.secant_points();
            let zs: Vec<CVector> = (0..cfg.z_samples).map(|_| sample_z(tau, &mut rng)).collect();
            let reports = zs
                .par_iter()
                .map(|z| secant_rank(tau, &points, z, &spec))
                .collect::<Result<Vec<_>>>()?;
            let expected = g + 1;
            let ok = reports
                .iter()
                .all(|r| r.decided_rank == expected && !r.ambiguous);
            secant_reports.extend(reports);
            let verdict_samples = vec![SampleRecord {
                tau_digest: digest.clone(),
                inputs: json!({"expected_rank": expected, "points": "weierstrass g+2"}),
                residual: if ok { 0.0 } else { 1.0 },
            }];
            identity_reports.push(IdentityReport::from_samples("secant", 0.5, verdict_samples));

            // general position scan: y = -(P_k + P_l)/2 over all pairs
            let mut gp = Vec::new();
            for k in 0..points.len() {
                for l in (k + 1)..points.len() {
                    let y = (&points[k] + &points[l]).map(|c| -0.5 * c);
                    let rep = secant_rank(tau, &points, &y, &spec)?;
                    gp.push(SampleRecord {
                        tau_digest: digest.clone(),
                        inputs: json!({"pair": [k, l], "rank": rep.decided_rank}),
                        residual: if rep.decided_rank == expected { 0.0 } else { 1.0 },
                    });
                }
            }
            identity_reports.push(IdentityReport::info("secant-general-position", 0.5, gp));
        }
        Suite::Nondegeneracy => {
            let family = gen_cubics(g)?;
            let zs: Vec<CVector> = (0..cfg.z_samples.max(5))
                .map(|_| sample_z(tau, &mut rng))
                .collect();
            let report = nondegeneracy_check(tau, &family, &zs, &spec)?;
            let ok = report.nondegenerate || report.vacuous;
            identity_reports.push(IdentityReport::from_samples(
                "nondegeneracy",
                0.5,
                vec![SampleRecord {
                    tau_digest: digest.clone(),
                    inputs: json!({
                        "vacuous": report.vacuous,
                        "nondegenerate": report.nondegenerate
                    }),
                    residual: if ok { 0.0 } else { 1.0 },
                }],
            ));
            nondeg = Some(report);
        }
        Suite::FinalRemark => {
            let report = final_remark_experiment(tau, cfg.tolerance, cfg.z_samples, cfg.seed, &spec)?;
            identity_reports.push(IdentityReport::info(
                "final-remark",
                cfg.tolerance,
                vec![SampleRecord {
                    tau_digest: digest.clone(),
                    inputs: json!({
                        "z0": report.max_residual_z0,
                        "order_two": report.max_residual_order_two,
                        "random_z": report.max_residual_random_z
                    }),
                    residual: report.max_residual_z0,
                }],
            ));
            final_remark = Some(report);
        }
    }

    let passed = identity_reports
        .iter()
        .all(|r| r.verdict != Verdict::Fail);
    Ok(SuiteResult {
        suite,
        identity_reports,
        secant_reports,
        nondegeneracy: nondeg,
        final_remark,
        passed,
    })
}

/// Trisecant control (m = 1): the three points K(A_i + zeta) with
/// zeta = (x1 - A0 - A1 - A2)/2, for Weierstrass points A0 = A(p1),
/// A1 = A(p3), A2 = A(p5), x1 = A(p7).  The arguments are then the classical
/// trisecant combinations (A_i - A_j - A_k + x1)/2.
pub fn trisecant_points(images: &WeierstrassImages) -> Vec<CVector> {
    let a0 = images.image(1);
    let a1 = images.image(3);
    let a2 = images.image(5);
    let x1 = images.image(7);
    let shift = (x1 - a0 - a1 - a2).map(|c| 0.5 * c);
    vec![a0 + &shift, a1 + &shift, a2 + &shift]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::DEFAULT_QUAD_NODES;

    fn hyperelliptic_g3() -> (PeriodMatrix, HalfPeriodPoints) {
        let bc = BranchConfig::new(vec![-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]).unwrap();
        let pd = period_matrix(&bc, DEFAULT_QUAD_NODES).unwrap();
        let images = weierstrass_images(&pd.tau);
        let half = HalfPeriodPoints::from_images(&images);
        (pd.tau, half)
    }

    #[test]
    fn fact1_positive_and_degenerate() {
        let (tau, half) = hyperelliptic_g3();
        let spec = TruncationSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let x = sample_z(&tau, &mut rng);
        let y = sample_z(&tau, &mut rng);
        let points = half.secant_points();
        let ev = eval_fact1(&tau, &points, &half.r, &x, &y, &spec).unwrap();
        assert!(ev.residual < 1e-10, "residual {}", ev.residual);
        // x = 0 collapses to a triviality
        let zero = CVector::zeros(3);
        let ev0 = eval_fact1(&tau, &points, &half.r, &zero, &y, &spec).unwrap();
        assert!(ev0.residual < 1e-10, "residual {}", ev0.residual);
    }

    #[test]
    fn mess_and_lastadd_positive() {
        let (tau, half) = hyperelliptic_g3();
        let spec = TruncationSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z = sample_z(&tau, &mut rng);
        let w = sample_z(&tau, &mut rng);
        let mt = mess_tables(&tau, &half, &z, &spec).unwrap();
        let la = lastadd_tables(&tau, &half, &z, &spec).unwrap();
        for sigma in enumerate(3) {
            let m = eval_mess_with(&mt, &sigma);
            let l = eval_lastadd_with(&la, &sigma);
            assert!(m.residual < 1e-9, "mess sigma {sigma}: {}", m.residual);
            assert!(l.residual < 1e-9, "lastadd sigma {sigma}: {}", l.residual);
            let d = (m.value - l.value).norm() / (1.0 + m.value.norm() + l.value.norm());
            assert!(d < 1e-9, "mess/lastadd disagree at {sigma}: {d}");
        }
        let chain = mess_chain_check(&tau, &half, &z, &w, &spec).unwrap();
        assert!(chain < 1e-9, "chain {chain}");
        for r in ratio_check(&tau, &half, &spec).unwrap() {
            assert!(r < 1e-9, "ratio {r}");
        }
    }

    #[test]
    fn negative_controls_fail_loudly() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let tau = sample_siegel_tau(3, &mut rng);
        let half = HalfPeriodPoints::synthetic(&tau);
        let spec = TruncationSpec::default();
        let z = sample_z(&tau, &mut rng);
        let mut worst = 0.0f64;
        let mt = mess_tables(&tau, &half, &z, &spec).unwrap();
        for sigma in enumerate(3) {
            worst = worst.max(eval_mess_with(&mt, &sigma).residual);
        }
        assert!(worst > 1e-2, "random tau should break the identity: {worst}");
    }

    #[test]
    fn secant_rank_positive_and_invariances() {
        let (tau, half) = hyperelliptic_g3();
        let spec = TruncationSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = sample_z(&tau, &mut rng);
        let points = half.secant_points();
        let rep = secant_rank(&tau, &points, &z, &spec).unwrap();
        assert_eq!(rep.decided_rank, 4, "{:?}", rep.singular_values);
        assert!(!rep.ambiguous);
        assert_eq!(rep.matrix_shape, (5, 8));
        // invariance under z -> -z
        let repm = secant_rank(&tau, &points, &z.map(|c| -c), &spec).unwrap();
        assert_eq!(repm.decided_rank, 4);
        let ratio = rep.singular_values[4] / repm.singular_values[4].max(f64::MIN_POSITIVE);
        assert!(ratio < 1e3 && ratio > 1e-3);
    }

    #[test]
    fn trisecant_control() {
        let bc = BranchConfig::new(vec![-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]).unwrap();
        let pd = period_matrix(&bc, DEFAULT_QUAD_NODES).unwrap();
        let images = weierstrass_images(&pd.tau);
        let pts = trisecant_points(&images);
        let spec = TruncationSpec::default();
        let z = CVector::zeros(3);
        let rep = secant_rank(&pd.tau, &pts, &z, &spec).unwrap();
        assert_eq!(rep.decided_rank, 2, "{:?}", rep.singular_values);
    }

    #[test]
    fn secant_negative_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let tau = sample_siegel_tau(3, &mut rng);
        let pts: Vec<CVector> = (0..5).map(|_| sample_z(&tau, &mut rng)).collect();
        let z = sample_z(&tau, &mut rng);
        let rep = secant_rank(&tau, &pts, &z, &TruncationSpec::default()).unwrap();
        assert_eq!(rep.decided_rank, 5, "{:?}", rep.singular_values);
    }

    #[test]
    fn nondegeneracy_cases() {
        let (tau, _) = hyperelliptic_g3();
        let spec = TruncationSpec::default();
        let family = gen_cubics(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let zs: Vec<CVector> = (0..5).map(|_| sample_z(&tau, &mut rng)).collect();
        let rep = nondegeneracy_check(&tau, &family, &zs, &spec).unwrap();
        assert!(rep.nondegenerate && !rep.vacuous);

        // genus-2 family is empty, hence vacuous
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let tau2 = sample_siegel_tau(2, &mut rng);
        let fam2 = gen_cubics(2).unwrap();
        let zs2: Vec<CVector> = (0..3).map(|_| sample_z(&tau2, &mut rng)).collect();
        let rep2 = nondegeneracy_check(&tau2, &fam2, &zs2, &spec).unwrap();
        assert!(rep2.vacuous && !rep2.nondegenerate);

        // an artificially canceling fixture reports degenerate
        use crate::identities::Monomial;
        let s = BinaryVector::zeros(3);
        let f: BinaryVector = "010".parse().unwrap();
        let doctored = vec![CubicIdentity {
            genus: 3,
            sigma: s,
            content: 1,
            monomials: vec![
                Monomial { sign: 1, mult: 1, factors: [s, f, s] },
                Monomial { sign: -1, mult: 1, factors: [f, s, s] },
            ],
        }];
        let rep3 = nondegeneracy_check(&tau, &doctored, &zs, &spec).unwrap();
        assert!(!rep3.nondegenerate && !rep3.vacuous);
    }

    #[test]
    fn genus2_cubics_evaluate_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let tau = sample_siegel_tau(2, &mut rng);
        let z = sample_z(&tau, &mut rng);
        for id in gen_cubics(2).unwrap() {
            let ev = eval_cubic(&tau, &id, &z, &TruncationSpec::default()).unwrap();
            assert_eq!(ev.value, Complex64::new(0.0, 0.0));
            assert_eq!(ev.residual, 0.0);
        }
    }

    #[test]
    fn suite_determinism_across_thread_counts() {
        let bc = BranchConfig::new(vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]).unwrap();
        let mut outputs = Vec::new();
        for threads in [1usize, 2, 8] {
            let cfg = VerifyConfig {
                seed: 42,
                z_samples: 4,
                threads: Some(threads),
                ..VerifyConfig::default()
            };
            let input = resolve_input(&TauSource::Branches(bc.clone()), &cfg).unwrap();
            let result = run_suite(Suite::Cubics, &input, &cfg).unwrap();
            outputs.push(serde_json::to_string(&result).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[0], outputs[2]);
    }
}
