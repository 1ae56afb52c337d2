//! hyptheta: evaluate theta functions, compute hyperelliptic period
//! matrices, generate the hyperelliptic cubic identities, and run the
//! verification suites.
//!
//! Structured JSON goes to stdout (or --out); human-readable summaries go to
//! stderr.  Exit codes: 0 success / expected outcome, 1 verification
//! mismatch, 2 usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use hyptheta::chars::Characteristic;
use hyptheta::identities;
use hyptheta::periods::{self, BranchConfig};
use hyptheta::theta::{self, CVector, PeriodMatrix};
use hyptheta::verifier::{self, Suite, TauSource, Verdict, VerifyConfig};
use hyptheta::TruncationSpec;

#[derive(Parser)]
#[command(name = "hyptheta", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate theta with characteristics at a point.
    EvalTheta(EvalThetaArgs),
    /// Integrate the period matrix of a real hyperelliptic curve.
    PeriodMatrix(PeriodMatrixArgs),
    /// Generate the sigma-indexed cubic identities for a genus.
    GenCubics(GenCubicsArgs),
    /// Run verification suites against a positive or negative control.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonOut {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalThetaArgs {
    /// Period matrix JSON file ({"g":N,"entries":[[[re,im],..],..]} or a
    /// period-matrix command output).
    #[arg(long)]
    tau: PathBuf,
    /// Comma-separated argument vector; entries are `re` or `re:im`.
    #[arg(long, default_value = "0")]
    z: String,
    /// Characteristic like "[01;10]"; defaults to zero.
    #[arg(long = "char")]
    characteristic: Option<String>,
    /// Truncation tail target.
    #[arg(long, default_value_t = 1e-13)]
    eps: f64,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args)]
struct PeriodMatrixArgs {
    /// Comma-separated strictly increasing branch points (2g+2 of them).
    #[arg(long)]
    branches: String,
    /// Gauss-Chebyshev nodes per segment (doubled internally for the
    /// convergence check).
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args)]
struct GenCubicsArgs {
    #[arg(long)]
    genus: usize,
    /// Compare the generated genus-3/4 cubics against the stored printed
    /// fixtures and fail on the first differing monomial.
    #[arg(long)]
    check_fixtures: bool,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: fact1 | mess | lastadd | cubics | secant | nondegeneracy |
    /// final-remark | all.
    #[arg(long)]
    suite: String,
    /// Branch points for the hyperelliptic positive control.
    #[arg(long)]
    branches: Option<String>,
    /// Draw a pseudo-random Siegel tau instead (negative control).
    #[arg(long)]
    random_tau: bool,
    /// Genus for --random-tau.
    #[arg(long)]
    genus: Option<usize>,
    /// Period matrix JSON file as the tau source.
    #[arg(long)]
    tau: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Expected outcome: pass | fail.
    #[arg(long, default_value = "pass")]
    expect: String,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, default_value_t = 1e-13)]
    eps: f64,
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    /// Random z (or (x,y)) samples per suite.
    #[arg(long, default_value_t = 10)]
    z_samples: usize,
    #[command(flatten)]
    out: CommonOut,
}

/// Resolved run configuration echoed into every output for provenance.
#[derive(Serialize)]
struct RunConfigEcho {
    genus: usize,
    tolerance: f64,
    truncation_eps: f64,
    quad_nodes: usize,
    seed: u64,
    output_path: String,
}

#[derive(Deserialize)]
struct PeriodMatrixJson {
    g: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
struct PeriodDataJsonIn {
    tau: PeriodMatrixJson,
}

fn tau_to_json(tau: &PeriodMatrix) -> serde_json::Value {
    let g = tau.genus();
    let entries: Vec<Vec<[f64; 2]>> = (0..g)
        .map(|i| (0..g).map(|j| {
            let c = tau.matrix()[(i, j)];
            [c.re, c.im]
        }).collect())
        .collect();
    json!({"g": g, "entries": entries})
}

fn load_tau(path: &Path) -> anyhow::Result<PeriodMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read tau file {}: {e}", path.display()))?;
    let pm = serde_json::from_str::<PeriodMatrixJson>(&text)
        .or_else(|_| serde_json::from_str::<PeriodDataJsonIn>(&text).map(|d| d.tau))
        .map_err(|e| anyhow::anyhow!("cannot parse tau file {}: {e}", path.display()))?;
    if pm.entries.len() != pm.g || pm.entries.iter().any(|row| row.len() != pm.g) {
        anyhow::bail!("tau file {}: entries shape does not match g", path.display());
    }
    let mat = nalgebra::DMatrix::from_fn(pm.g, pm.g, |i, j| {
        Complex64::new(pm.entries[i][j][0], pm.entries[i][j][1])
    });
    Ok(PeriodMatrix::new(mat)?)
}

fn parse_complex_vector(s: &str) -> anyhow::Result<CVector> {
    let parts: Vec<&str> = s.split(',').collect();
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        let p = p.trim();
        let c = if let Some((re, im)) = p.split_once(':') {
            Complex64::new(re.trim().parse()?, im.trim().parse()?)
        } else {
            Complex64::new(p.parse()?, 0.0)
        };
        out.push(c);
    }
    Ok(CVector::from_vec(out))
}

fn parse_branches(s: &str) -> anyhow::Result<BranchConfig> {
    let pts = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(BranchConfig::new(pts)?)
}

fn emit(out: &CommonOut, value: &serde_json::Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match &out.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn out_path(out: &CommonOut) -> String {
    out.out
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "-".to_string())
}

fn cmd_eval_theta(args: &EvalThetaArgs) -> anyhow::Result<()> {
    let tau = load_tau(&args.tau)?;
    let z = parse_complex_vector(&args.z)?;
    if z.len() != tau.genus() {
        anyhow::bail!("z has length {}, tau has genus {}", z.len(), tau.genus());
    }
    let c = match &args.characteristic {
        Some(s) => s.parse::<Characteristic>()?,
        None => Characteristic::zero(tau.genus()),
    };
    let spec = TruncationSpec::new(args.eps);
    let ev = theta::theta_char(&tau, &z, &c, &spec)?;
    let vanishing = ev.value.norm() <= ev.tail_bound;
    let run = RunConfigEcho {
        genus: tau.genus(),
        tolerance: f64::NAN,
        truncation_eps: args.eps,
        quad_nodes: 0,
        seed: 0,
        output_path: out_path(&args.out),
    };
    let value = json!({
        "run_config": serde_json::to_value(&run)?,
        "characteristic": c.to_string(),
        "parity": c.parity(),
        "value": [ev.value.re, ev.value.im],
        "abs": ev.value.norm(),
        "tail_bound": ev.tail_bound,
        "radius": ev.truncation.radius,
        "term_count": ev.truncation.term_count,
        "vanishing": vanishing,
    });
    emit(&args.out, &value)?;
    eprintln!(
        "theta{} = {:.12e} {:+.12e}i  (|.| = {:.3e}, {} lattice points{})",
        c,
        ev.value.re,
        ev.value.im,
        ev.value.norm(),
        ev.truncation.term_count,
        if vanishing { ", vanishing" } else { "" }
    );
    Ok(())
}

fn cmd_period_matrix(args: &PeriodMatrixArgs) -> anyhow::Result<()> {
    let cfg = parse_branches(&args.branches)?;
    let pd = periods::period_matrix(&cfg, args.nodes)?;
    let images = periods::weierstrass_images(&pd.tau);
    let run = RunConfigEcho {
        genus: pd.genus,
        tolerance: f64::NAN,
        truncation_eps: f64::NAN,
        quad_nodes: pd.quad_nodes,
        seed: 0,
        output_path: out_path(&args.out),
    };
    let cx = |v: &CVector| -> Vec<[f64; 2]> { v.iter().map(|c| [c.re, c.im]).collect() };
    let value = json!({
        "run_config": serde_json::to_value(&run)?,
        "branches": cfg.points(),
        "genus": pd.genus,
        "tau": tau_to_json(&pd.tau),
        "a_periods": (0..pd.genus).map(|i| (0..pd.genus).map(|j| {
            let c = pd.a_periods[(i, j)];
            [c.re, c.im]
        }).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "b_periods": (0..pd.genus).map(|i| (0..pd.genus).map(|j| {
            let c = pd.b_periods[(i, j)];
            [c.re, c.im]
        }).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "node_doubling_delta": pd.node_doubling_delta,
        "symmetry_defect": pd.symmetry_defect,
        "image_lattice_defect": pd.image_lattice_defect,
        "weierstrass_images": (1..=2*pd.genus+2).map(|m| json!({
            "point": m,
            "image": cx(images.image(m)),
            "characteristic": images.characteristic(m).to_string(),
        })).collect::<Vec<_>>(),
        "r_shift": cx(&images.r_shift),
    });
    emit(&args.out, &value)?;
    eprintln!(
        "genus {} period matrix: node-doubling delta {:.2e}, symmetry defect {:.2e}",
        pd.genus, pd.node_doubling_delta, pd.symmetry_defect
    );
    Ok(())
}

fn cmd_gen_cubics(args: &GenCubicsArgs) -> anyhow::Result<ExitCode> {
    let family = identities::gen_cubics(args.genus)?;
    if args.check_fixtures {
        if let Err(e) = identities::check_fixtures() {
            eprintln!("fixture check failed: {e}");
            return Ok(ExitCode::from(1));
        }
        eprintln!("fixture check passed (genus 3 sigma=000, genus 4 sigma=0000/0001)");
    }
    let value = json!({
        "genus": args.genus,
        "identities": family,
        "empty_count": family.iter().filter(|c| c.is_empty()).count(),
    });
    emit(&args.out, &value)?;
    let mut summary = String::new();
    for id in family.iter().take(4) {
        let _ = write!(summary, " sigma={}:{}", id.sigma, id.monomials.len());
    }
    eprintln!(
        "generated {} cubics for genus {};{} ...",
        family.len(),
        args.genus,
        summary
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::all().to_vec()
    } else {
        match Suite::parse(&args.suite) {
            Some(s) => vec![s],
            None => {
                eprintln!("unknown suite `{}`", args.suite);
                return Ok(ExitCode::from(2));
            }
        }
    };
    let expect_pass = match args.expect.as_str() {
        "pass" => true,
        "fail" => false,
        other => {
            eprintln!("--expect must be pass or fail, got `{other}`");
            return Ok(ExitCode::from(2));
        }
    };

    let source = match (&args.branches, args.random_tau, &args.tau) {
        (Some(b), false, None) => TauSource::Branches(parse_branches(b)?),
        (None, true, None) => {
            let genus = match args.genus {
                Some(g) => g,
                None => {
                    eprintln!("--random-tau requires --genus");
                    return Ok(ExitCode::from(2));
                }
            };
            TauSource::RandomSiegel { genus }
        }
        (None, false, Some(path)) => TauSource::Explicit(load_tau(path)?),
        _ => {
            eprintln!("exactly one of --branches, --random-tau, --tau is required");
            return Ok(ExitCode::from(2));
        }
    };

    let cfg = VerifyConfig {
        tolerance: args.tolerance,
        truncation_eps: args.eps,
        quad_nodes: args.nodes,
        seed: args.seed,
        z_samples: args.z_samples,
        threads: None,
    };
    let input = verifier::resolve_input(&source, &cfg)?;
    let run = RunConfigEcho {
        genus: input.tau.genus(),
        tolerance: cfg.tolerance,
        truncation_eps: cfg.truncation_eps,
        quad_nodes: cfg.quad_nodes,
        seed: cfg.seed,
        output_path: out_path(&args.out),
    };

    let mut results = Vec::new();
    let mut all_passed = true;
    for suite in &suites {
        let r = verifier::run_suite(*suite, &input, &cfg)?;
        all_passed &= r.passed;
        results.push(r);
    }

    for r in &results {
        for rep in &r.identity_reports {
            eprintln!(
                "{:<28} max residual {:.3e}  tol {:.1e}  {}",
                rep.identity_id,
                rep.max_residual,
                rep.tolerance,
                match rep.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Info => "info",
                }
            );
        }
        for sr in &r.secant_reports {
            eprintln!(
                "secant rank {} of {:?} (gap {:.2e}{})",
                sr.decided_rank,
                sr.matrix_shape,
                sr.gap_ratio,
                if sr.ambiguous { ", AMBIGUOUS" } else { "" }
            );
        }
    }

    let value = json!({
        "run_config": serde_json::to_value(&run)?,
        "source": input.source,
        "tau_digest": verifier::tau_digest(&input.tau),
        "expected": if expect_pass { "pass" } else { "fail" },
        "suites": results,
        "all_passed": all_passed,
    });
    emit(&args.out, &value)?;

    let as_expected = all_passed == expect_pass;
    eprintln!(
        "verdicts {} expectation ({})",
        if as_expected { "match" } else { "DO NOT match" },
        if expect_pass { "pass" } else { "fail" }
    );
    Ok(if as_expected { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> anyhow::Result<ExitCode> {
        match &cli.command {
            Command::EvalTheta(a) => cmd_eval_theta(a).map(|_| ExitCode::SUCCESS),
            Command::PeriodMatrix(a) => cmd_period_matrix(a).map(|_| ExitCode::SUCCESS),
            Command::GenCubics(a) => cmd_gen_cubics(a),
            Command::Verify(a) => cmd_verify(a),
        }
    };
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
