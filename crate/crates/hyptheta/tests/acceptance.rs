//! Acceptance battery: one test per criterion, each printing a PASS line
//! with its measured margins (run with `--nocapture` to see them).
//!
//! Every tolerance is pinned here, not configured.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyptheta::chars::{enumerate, enumerate_characteristics, BinaryVector, Characteristic, Parity};
use hyptheta::identities::{self, fixtures, gen_cubics};
use hyptheta::lattice::TruncationSpec;
use hyptheta::periods::{
    period_matrix, riemann_vanishing_check, weierstrass_images, BranchConfig, QUAD_CONV_TOL,
};
use hyptheta::theta::{
    riemann_bilinear_check, shift_route_check, theta2_quasi_periodicity_check, theta2_shifted,
    theta_char, CVector,
};
use hyptheta::verifier::{
    self, eval_cubic_with, eval_fact1, eval_lastadd_with, eval_mess_with, lastadd_tables,
    mess_chain_check, mess_tables, nondegeneracy_check, ratio_check, resolve_input, run_suite,
    sample_branch_config, sample_siegel_tau, sample_z, secant_rank, trisecant_points,
    HalfPeriodPoints, Suite, TauSource, VerifyConfig,
};

fn spec() -> TruncationSpec {
    TruncationSpec::new(1e-13)
}

fn hyperelliptic(points: &[f64]) -> (hyptheta::PeriodMatrix, HalfPeriodPoints) {
    let cfg = BranchConfig::new(points.to_vec()).unwrap();
    let pd = period_matrix(&cfg, 256).unwrap();
    let images = weierstrass_images(&pd.tau);
    let half = HalfPeriodPoints::from_images(&images);
    (pd.tau, half)
}

#[test]
fn criterion_01_riemann_bilinear() {
    let spec = spec();
    let mut worst = 0.0f64;
    for g in 2..=4usize {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + g as u64);
        let chars = enumerate_characteristics(g);
        for _ in 0..50 {
            let tau = sample_siegel_tau(g, &mut rng);
            let z = sample_z(&tau, &mut rng);
            let w = sample_z(&tau, &mut rng);
            let c = chars[rng.gen_range(0..chars.len())];
            let r = riemann_bilinear_check(&tau, &c, &z, &w, &spec).unwrap();
            assert!(r < 1e-10, "g={g} char {c}: residual {r}");
            worst = worst.max(r);
        }
    }
    println!("ACCEPTANCE 01 riemann-bilinear: PASS (max residual {worst:.3e} < 1e-10)");
}

#[test]
fn criterion_02_shift_autom_change() {
    let spec = spec();
    let mut worst = 0.0f64;
    for g in 1..=3usize {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + g as u64);
        let tau = sample_siegel_tau(g, &mut rng);
        let z = sample_z(&tau, &mut rng);
        // (shift): all 2^{2g} characteristics
        for c in enumerate_characteristics(g) {
            let r = shift_route_check(&tau, &c, &z, &spec).unwrap();
            assert!(r < 1e-9, "shift g={g} {c}: {r}");
            worst = worst.max(r);
        }
        // (autom): every characteristic, every lattice basis direction
        for eps in enumerate(g) {
            for j in 0..g {
                for k in 0..g {
                    let r = theta2_quasi_periodicity_check(&tau, &z, &eps, j, k, &spec).unwrap();
                    assert!(r < 1e-9, "autom g={g} eps={eps} j{j}k{k}: {r}");
                    worst = worst.max(r);
                }
            }
        }
        // (change): all 2^{2g} (delta, a) pairs, b drawn per pair
        for delta in enumerate(g) {
            for a in enumerate(g) {
                let b = BinaryVector::from_index(g, rng.gen_range(0..(1usize << g)));
                let s = theta2_shifted(&tau, &z, &delta, &a, &b, &spec).unwrap();
                assert!(
                    s.cross_residual < 1e-9,
                    "change g={g} d={delta} a={a} b={b}: {}",
                    s.cross_residual
                );
                worst = worst.max(s.cross_residual);
            }
        }
    }
    println!("ACCEPTANCE 02 shift/autom/change: PASS (max residual {worst:.3e} < 1e-9)");
}

#[test]
fn criterion_03_genus2_cancellation() {
    let family = gen_cubics(2).unwrap();
    assert_eq!(family.len(), 4);
    for id in &family {
        assert!(id.is_empty(), "sigma {} has {} monomials", id.sigma, id.monomials.len());
    }
    println!("ACCEPTANCE 03 genus2-cancellation: PASS (4 identities, all empty, exact)");
}

#[test]
fn criterion_04_genus3_reduction() {
    // symbolic fixture
    let family = gen_cubics(3).unwrap();
    let sigma0: BinaryVector = "000".parse().unwrap();
    let got = &family[sigma0.index()];
    let want: Vec<(i8, [&str; 3])> = fixtures::GENUS3_SIGMA_000.to_vec();
    assert_eq!(got.monomials.len(), 4);
    for (m, (sign, fs)) in got.monomials.iter().zip(want.iter()) {
        assert_eq!(m.sign, *sign);
        assert_eq!(m.mult, 1);
        let mut sorted: Vec<String> = fs.iter().map(|s| s.to_string()).collect();
        sorted.sort();
        let got_fs: Vec<String> = m.factors.iter().map(|f| f.to_string()).collect();
        assert_eq!(got_fs, sorted);
    }

    // factored form on random (tau, z), all sigma
    let spec = spec();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let tau = sample_siegel_tau(3, &mut rng);
        let z = sample_z(&tau, &mut rng);
        for sigma in enumerate(3) {
            let r = identities::factor_check_genus3(&tau, &sigma, &z, &spec).unwrap();
            assert!(r < 1e-9, "factor check sigma {sigma}: {r}");
            worst = worst.max(r);
        }
    }

    // hyperelliptic tau: the even null [101;111] vanishes
    let (tau_h, _) = hyperelliptic(&[-6.3, -4.4, -2.2, -0.7, 1.1, 2.8, 4.9, 6.6]);
    let c: Characteristic = "[101;111]".parse().unwrap();
    let z0 = CVector::zeros(3);
    let null = theta_char(&tau_h, &z0, &c, &spec).unwrap().value.norm();
    assert!(null < 1e-8, "hyperelliptic null {null}");
    let r_h = identities::factor_check_genus3(&tau_h, &sigma0, &sample_z(&tau_h, &mut rng), &spec)
        .unwrap();
    assert!(r_h < 1e-9);

    // negative control: random tau gives a non-vanishing null in >= 19/20
    let mut big = 0usize;
    for _ in 0..20 {
        let tau = sample_siegel_tau(3, &mut rng);
        if theta_char(&tau, &z0, &c, &spec).unwrap().value.norm() > 1e-3 {
            big += 1;
        }
    }
    assert!(big >= 19, "only {big}/20 random tau had |null| > 1e-3");
    println!(
        "ACCEPTANCE 04 genus3-reduction: PASS (fixture exact, factor residual {worst:.3e} < 1e-9, \
         null {null:.3e} < 1e-8, negative control {big}/20)"
    );
}

#[test]
fn criterion_05_genus4_fixtures() {
    identities::check_fixtures().unwrap();
    let family = gen_cubics(4).unwrap();
    for (sigma_str, fixture) in [
        ("0000", fixtures::GENUS4_SIGMA_0000),
        ("0001", fixtures::GENUS4_SIGMA_0001),
    ] {
        let sigma: BinaryVector = sigma_str.parse().unwrap();
        let id = &family[sigma.index()];
        assert_eq!(id.monomials.len(), 20, "sigma {sigma_str}");
        assert_eq!(fixture.len(), 20);
        assert!(id.monomials.iter().all(|m| m.mult == 1));
    }
    println!("ACCEPTANCE 05 genus4-fixtures: PASS (sigma=0000 and sigma=0001 match, 20 monomials each, exact)");
}

#[test]
fn criterion_06_theorem5_two_sided() {
    let spec = spec();
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    // positive control: hyperelliptic genus-4 tau from 10 random branch points
    let cfg = sample_branch_config(4, &mut rng);
    let pd = period_matrix(&cfg, 256).unwrap();
    let family = gen_cubics(4).unwrap();
    let mut zs = vec![CVector::zeros(4)];
    for _ in 0..10 {
        zs.push(sample_z(&pd.tau, &mut rng));
    }
    let mut worst = 0.0f64;
    for z in &zs {
        let table = hyptheta::kummer(&pd.tau, z, &spec).unwrap();
        for id in &family {
            let ev = eval_cubic_with(&table, id);
            assert!(ev.residual < 1e-6, "sigma {}: {}", id.sigma, ev.residual);
            worst = worst.max(ev.residual);
        }
    }
    let nd = nondegeneracy_check(&pd.tau, &family, &zs[1..6], &spec).unwrap();
    assert!(nd.nondegenerate);

    // negative control: 10 random Siegel tau, each breaks some sigma badly
    let mut min_break = f64::INFINITY;
    for _ in 0..10 {
        let tau = sample_siegel_tau(4, &mut rng);
        let mut zset = vec![CVector::zeros(4)];
        for _ in 0..10 {
            zset.push(sample_z(&tau, &mut rng));
        }
        let mut best_sigma = 0.0f64;
        for z in &zset {
            let table = hyptheta::kummer(&tau, z, &spec).unwrap();
            for id in &family {
                best_sigma = best_sigma.max(eval_cubic_with(&table, id).residual);
            }
        }
        assert!(best_sigma > 1e-2, "random tau too close to hyperelliptic: {best_sigma}");
        min_break = min_break.min(best_sigma);
    }
    println!(
        "ACCEPTANCE 06 theorem5-two-sided: PASS (positive max {worst:.3e} < 1e-6, nondegenerate, \
         negative min-break {min_break:.3e} > 1e-2)"
    );
}

#[test]
fn criterion_07_addition_formula_chain() {
    let spec = spec();
    let (tau, half) = hyperelliptic(&[-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]);
    let points = half.secant_points();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst_id = 0.0f64;
    let mut worst_chain = 0.0f64;
    for _ in 0..10 {
        let x = sample_z(&tau, &mut rng);
        let y = sample_z(&tau, &mut rng);
        let f = eval_fact1(&tau, &points, &half.r, &x, &y, &spec).unwrap();
        assert!(f.residual < 1e-8, "fact1 {}", f.residual);
        worst_id = worst_id.max(f.residual);

        let z = (&x + &y).map(|c| 0.5 * c);
        let w = (&x - &y).map(|c| 0.5 * c);
        let mt = mess_tables(&tau, &half, &z, &spec).unwrap();
        let la = lastadd_tables(&tau, &half, &z, &spec).unwrap();
        for sigma in enumerate(3) {
            let m = eval_mess_with(&mt, &sigma);
            let l = eval_lastadd_with(&la, &sigma);
            assert!(m.residual < 1e-8, "mess {}", m.residual);
            assert!(l.residual < 1e-8, "lastadd {}", l.residual);
            worst_id = worst_id.max(m.residual).max(l.residual);
            let d = (m.value - l.value).norm() / (1.0 + m.value.norm() + l.value.norm());
            assert!(d < 1e-9, "mess/lastadd {d}");
            worst_chain = worst_chain.max(d);
        }
        let chain = mess_chain_check(&tau, &half, &z, &w, &spec).unwrap();
        assert!(chain < 1e-9, "chain {chain}");
        worst_chain = worst_chain.max(chain);
    }
    // the half-period coefficient quotients match their automorphy values
    for r in ratio_check(&tau, &half, &spec).unwrap() {
        assert!(r < 1e-9, "ratio {r}");
        worst_chain = worst_chain.max(r);
    }
    println!(
        "ACCEPTANCE 07 addition-chain: PASS (identities max {worst_id:.3e} < 1e-8, \
         chain max {worst_chain:.3e} < 1e-9)"
    );
}

#[test]
fn criterion_08_multisecant_ranks() {
    let spec = spec();
    let cfg = BranchConfig::new(vec![-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]).unwrap();
    let pd = period_matrix(&cfg, 256).unwrap();
    let images = weierstrass_images(&pd.tau);
    let half = HalfPeriodPoints::from_images(&images);
    let points = half.secant_points();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..10 {
        let z = sample_z(&pd.tau, &mut rng);
        let rep = secant_rank(&pd.tau, &points, &z, &spec).unwrap();
        assert_eq!(rep.matrix_shape, (5, 8));
        assert_eq!(rep.decided_rank, 4, "svals {:?}", rep.singular_values);
        assert!(!rep.ambiguous);
    }
    // trisecant (m = 1)
    let tri = trisecant_points(&images);
    let rep = secant_rank(&pd.tau, &tri, &CVector::zeros(3), &spec).unwrap();
    assert_eq!(rep.decided_rank, 2, "svals {:?}", rep.singular_values);
    // random-tau control: full rank 5 in >= 9 of 10 trials
    let mut full = 0usize;
    for _ in 0..10 {
        let tau = sample_siegel_tau(3, &mut rng);
        let pts: Vec<CVector> = (0..5).map(|_| sample_z(&tau, &mut rng)).collect();
        let z = sample_z(&tau, &mut rng);
        if secant_rank(&tau, &pts, &z, &spec).unwrap().decided_rank == 5 {
            full += 1;
        }
    }
    assert!(full >= 9, "only {full}/10 random controls had full rank");
    println!("ACCEPTANCE 08 multisecant-ranks: PASS (rank4 x10, trisecant rank2, control {full}/10 full)");
}

#[test]
fn criterion_09_period_matrix_self_validation() {
    let spec = spec();
    let mut worst_delta = 0.0f64;
    let mut worst_null = 0.0f64;
    for g in 2..=4usize {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + g as u64);
        for _ in 0..50 {
            let cfg = sample_branch_config(g, &mut rng);
            // period_matrix enforces: node-doubling < 1e-9, symmetry < 1e-8,
            // Im positive definite, and path-image characteristics.
            let pd = period_matrix(&cfg, 128).unwrap();
            assert!(pd.node_doubling_delta < QUAD_CONV_TOL);
            assert!(pd.symmetry_defect < 1e-8);
            assert!(pd.tau.min_im_eigenvalue() > 0.0);
            worst_delta = worst_delta.max(pd.node_doubling_delta);
            // parity-predicted vanishing of theta nulls along the images
            let images = weierstrass_images(&pd.tau);
            let report = riemann_vanishing_check(&pd.tau, &images, &spec).unwrap();
            for e in &report.entries {
                if e.expected_vanishing {
                    assert_eq!(e.parity, Parity::Odd);
                    assert!(e.theta_abs < 1e-8, "point {} null {}", e.point, e.theta_abs);
                    worst_null = worst_null.max(e.theta_abs);
                } else {
                    assert_eq!(e.parity, Parity::Even);
                    assert!(e.pass, "even null suspiciously small: {}", e.theta_abs);
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 09 period-self-validation: PASS (150 configs, doubling max {worst_delta:.3e} \
         < 1e-9, odd nulls max {worst_null:.3e} < 1e-8)"
    );
}

#[test]
fn criterion_10_determinism_across_workers() {
    let cfg_branch = BranchConfig::new(vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]).unwrap();
    let mut blobs = Vec::new();
    for threads in [1usize, 2, 8] {
        let cfg = VerifyConfig {
            tolerance: 1e-8,
            truncation_eps: 1e-13,
            quad_nodes: 128,
            seed: 42,
            z_samples: 6,
            threads: Some(threads),
        };
        let input = resolve_input(&TauSource::Branches(cfg_branch.clone()), &cfg).unwrap();
        let mut out = Vec::new();
        for suite in [Suite::Cubics, Suite::Secant, Suite::Fact1] {
            out.push(run_suite(suite, &input, &cfg).unwrap());
        }
        blobs.push(serde_json::to_string(&out).unwrap());
    }
    assert_eq!(blobs[0], blobs[1], "1 vs 2 workers differ");
    assert_eq!(blobs[0], blobs[2], "1 vs 8 workers differ");
    println!("ACCEPTANCE 10 determinism: PASS (byte-identical reports at 1/2/8 workers)");
}

/// Extra: the verifier suite wrappers expose the same behavior end to end.
#[test]
fn suite_wrappers_positive_and_negative() {
    let cfg = VerifyConfig {
        z_samples: 3,
        seed: 5,
        quad_nodes: 128,
        ..VerifyConfig::default()
    };
    let pos = resolve_input(
        &TauSource::Branches(BranchConfig::new(vec![-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]).unwrap()),
        &cfg,
    )
    .unwrap();
    for suite in [Suite::Fact1, Suite::Mess, Suite::Lastadd, Suite::Cubics, Suite::Secant] {
        let r = run_suite(suite, &pos, &cfg).unwrap();
        assert!(r.passed, "{suite:?} failed on positive control");
    }
    let mut cubics_tol = cfg.clone();
    cubics_tol.tolerance = 1e-7;
    let neg = resolve_input(&TauSource::RandomSiegel { genus: 3 }, &cubics_tol).unwrap();
    let r = run_suite(Suite::Cubics, &neg, &cubics_tol).unwrap();
    assert!(!r.passed, "cubics should fail on a random tau");
    let fr = run_suite(Suite::FinalRemark, &pos, &cfg).unwrap();
    let report = fr.final_remark.unwrap();
    assert!(report.max_residual_z0 < 1e-7);
    assert!(report.implication_holds == Some(true));
    let nd = run_suite(Suite::Nondegeneracy, &pos, &cfg).unwrap();
    assert!(nd.passed);
}

/// Extra: DVector plumbing for gradients stays consistent with the spec'd
/// diagnostic (theta gradient vanishes at 0 and flips sign with z).
#[test]
fn gradient_diagnostic() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tau = sample_siegel_tau(2, &mut rng);
    let z = sample_z(&tau, &mut rng);
    let spec = spec();
    let gp = hyptheta::theta::theta_gradient(&tau, &z, &spec).unwrap();
    let gm = hyptheta::theta::theta_gradient(&tau, &z.map(|c| -c), &spec).unwrap();
    let diff: DVector<_> = &gp + &gm;
    assert!(diff.iter().all(|c| c.norm() < 1e-10));
}
