//! Batch front end: width tables, verification suites and sample dumps.
//!
//! Exit codes: 0 on success, 1 when a verification or cross-check fails,
//! 2 on configuration errors.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cvdw::extremal::{
    comparison_search, lagrange_residual, landau_kolmogorov_check, minimize_knot_norm,
    rearrangement_theorem_check, taikov_check, theorem22_check, ClassConfig, ClassKind,
};
use cvdw::oscillation::{check_cvd, check_kernel_diminishes_trig, check_regular};
use cvdw::widths::{width_table, QSpec};
use cvdw::{analysis, KernelSpec};

use output::{OutputSink, Row};

#[derive(Parser)]
#[command(name = "cvdw", version, about = "Exact widths of periodic smoothness classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute width-table rows for a class.
    Widths(WidthArgs),
    /// Run a verification suite; exit 1 on any violation.
    Verify(VerifyArgs),
    /// Emit (t, value) samples of kernels, standard functions or
    /// rearrangements.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Sobolev,
    Achieser,
    Hardy,
}

#[derive(Args)]
struct CommonArgs {
    /// Class family.
    #[arg(long, value_enum)]
    class: Option<ClassArg>,
    /// Derivative order r (≥ 1 for sobolev, ≥ 0 otherwise).
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Strip half-width β (> 0 for achieser/hardy; omit for sobolev).
    #[arg(long)]
    beta: Option<f64>,
    /// Oscillation index or range, e.g. `3` or `1..4` (inclusive).
    #[arg(long, default_value = "1")]
    n: String,
    /// Grid size (power of two ≥ 256).
    #[arg(short = 'N', long, default_value_t = 4096)]
    grid: usize,
    /// Comma-separated norm exponents, e.g. `1,2,inf`.
    #[arg(long, default_value = "inf")]
    q: String,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<std::path::PathBuf>,
    /// Output format.
    #[arg(long, default_value = "json")]
    format: String,
    /// Worker threads (default: CVDW_THREADS or all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct WidthArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Cross-check tolerance for the dual evaluation routes.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name.
    #[arg(value_parser = [
        "comparison", "landau", "theorem22", "rearrangement", "taikov",
        "cvd", "lemma31", "knots", "regularity",
    ])]
    suite: String,
    #[command(flatten)]
    common: CommonArgs,
    /// Randomized trial count.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Seed for the randomized suites (required there).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EvalArgs {
    /// What to sample.
    #[arg(value_parser = ["kernel", "standard-function", "rearrangement"])]
    expr: String,
    #[command(flatten)]
    common: CommonArgs,
    /// Kernel kind for `eval kernel` (d or k).
    #[arg(long, default_value = "d")]
    kind: String,
    /// Built-in input for `eval rearrangement` (currently `cos`).
    #[arg(long)]
    input: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Widths(args) => {
            install_threads(args.common.threads)?;
            cmd_widths(args)
        }
        Command::Verify(args) => {
            install_threads(args.common.threads)?;
            cmd_verify(args)
        }
        Command::Eval(args) => {
            install_threads(args.common.threads)?;
            cmd_eval(args)
        }
    }
}

#[cfg(feature = "parallel")]
fn install_threads(cli_threads: Option<usize>) -> Result<(), Box<dyn std::error::Error>> {
    let threads = cli_threads.or_else(|| {
        std::env::var("CVDW_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn install_threads(_cli_threads: Option<usize>) -> Result<(), Box<dyn std::error::Error>> {
    Ok(())
}

fn parse_config(common: &CommonArgs) -> Result<ClassConfig, Box<dyn std::error::Error>> {
    let class = common.class.ok_or("--class is required")?;
    let kind = match class {
        ClassArg::Sobolev => ClassKind::Sobolev,
        ClassArg::Achieser => ClassKind::Achieser,
        ClassArg::Hardy => ClassKind::Hardy,
    };
    let beta = match (kind, common.beta) {
        (ClassKind::Sobolev, None) => 0.0,
        (ClassKind::Sobolev, Some(b)) if b == 0.0 => 0.0,
        (ClassKind::Sobolev, Some(_)) => {
            return Err("sobolev rejects a nonzero --beta".into());
        }
        (_, Some(b)) => b,
        (_, None) => return Err("achieser/hardy require --beta > 0".into()),
    };
    Ok(ClassConfig::new(kind, common.r, beta)?)
}

fn parse_n_range(text: &str) -> Result<Vec<u32>, Box<dyn std::error::Error>> {
    if let Some((a, b)) = text.split_once("..") {
        let lo: u32 = a.trim().parse()?;
        let hi: u32 = b.trim().trim_start_matches('=').parse()?;
        if lo < 1 || hi < lo {
            return Err(format!("invalid n range '{text}'").into());
        }
        Ok((lo..=hi).collect())
    } else {
        let n: u32 = text.trim().parse()?;
        if n < 1 {
            return Err("n must be ≥ 1".into());
        }
        Ok(vec![n])
    }
}

fn parse_q_list(text: &str) -> Result<Vec<QSpec>, Box<dyn std::error::Error>> {
    text.split(',')
        .map(|s| QSpec::parse(s).map_err(Into::into))
        .collect()
}

fn validate_grid(n: usize) -> Result<(), Box<dyn std::error::Error>> {
    if n < 256 || !n.is_power_of_two() {
        return Err(format!("grid size {n} must be a power of two ≥ 256").into());
    }
    Ok(())
}

fn cmd_widths(args: WidthArgs) -> Result<bool, Box<dyn std::error::Error>> {
    validate_grid(args.common.grid)?;
    let cfg = parse_config(&args.common)?;
    let ns = parse_n_range(&args.common.n)?;
    let qs = parse_q_list(&args.common.q)?;
    let rows = width_table(&[cfg], &ns, &qs, args.common.grid, args.tol)?;
    let ok = rows.iter().all(|r| r.defect < args.tol);
    let sink = OutputSink::new(&args.common.format, args.common.output.as_deref())?;
    sink.write_width_rows(&rows)?;
    Ok(ok)
}

fn cmd_verify(args: VerifyArgs) -> Result<bool, Box<dyn std::error::Error>> {
    validate_grid(args.common.grid)?;
    let randomized = matches!(
        args.suite.as_str(),
        "comparison" | "landau" | "theorem22" | "rearrangement" | "cvd" | "taikov" | "knots"
    );
    let seed = match (args.seed, randomized) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => return Err("--seed is required for randomized suites".into()),
    };
    let ns = parse_n_range(&args.common.n)?;
    let grid = args.common.grid;
    let sink = OutputSink::new(&args.common.format, args.common.output.as_deref())?;
    let mut rows: Vec<Row> = Vec::new();
    let mut all_ok = true;

    match args.suite.as_str() {
        "comparison" | "landau" | "theorem22" | "rearrangement" => {
            let cfg = parse_config(&args.common)?;
            for &n in &ns {
                let out = match args.suite.as_str() {
                    "comparison" => comparison_search(&cfg, n, args.trials, seed, grid)?,
                    "landau" => landau_kolmogorov_check(&cfg, n, args.trials, seed, grid)?,
                    "theorem22" => theorem22_check(&cfg, n, args.trials, seed, grid)?,
                    _ => rearrangement_theorem_check(&cfg, n, args.trials, seed, grid)?,
                };
                all_ok &= out.passed();
                rows.push(Row::suite(&out));
            }
        }
        "taikov" => {
            let cfg = parse_config(&args.common)?;
            let qs = parse_q_list(&args.common.q)?;
            for &n in &ns {
                for q in &qs {
                    let QSpec::Finite(qv) = q else {
                        return Err("taikov needs finite q".into());
                    };
                    let rep = taikov_check(&cfg, n, *qv, seed, grid)?;
                    all_ok &= rep.passed();
                    rows.push(Row::taikov(&rep));
                }
            }
        }
        "cvd" => {
            let beta = args.common.beta.unwrap_or(1.0);
            let smooth = check_cvd(&KernelSpec::analytic(beta), args.trials, seed)?;
            all_ok &= smooth.violations.is_empty();
            rows.push(Row::cvd("cvd-smoothing", beta, &smooth));
            let poly = check_kernel_diminishes_trig(args.common.r.max(1), args.trials, seed)?;
            all_ok &= poly.violations.is_empty();
            rows.push(Row::cvd("cvd-polynomial", args.common.r.max(1) as f64, &poly));
        }
        "lemma31" => {
            let cfg = parse_config(&args.common)?;
            for &n in &ns {
                let (l1, tv_over_4n, defect) = variation_identity(&cfg, n, grid)?;
                let ok = defect < 1e-6;
                all_ok &= ok;
                rows.push(Row::identity(
                    "variation-identity",
                    &cfg.label(),
                    n,
                    l1,
                    tv_over_4n,
                    defect,
                    1e-6,
                ));
            }
        }
        "knots" => {
            let cfg = parse_config(&args.common)?;
            let qs = parse_q_list(&args.common.q)?;
            for &n in &ns {
                for q in &qs {
                    let (qv, polish) = match q {
                        QSpec::Finite(v) => (*v, false),
                        QSpec::Infinity => (64.0, true),
                    };
                    let search = minimize_knot_norm(&cfg, n, qv, polish, seed, grid)?;
                    let phi = cfg.standard(n, grid)?;
                    let reference = if polish {
                        phi.sup_norm()
                    } else {
                        analysis::lq_norm_of(&|t| phi.value_at(t), grid, qv)?
                    };
                    let residual = lagrange_residual(
                        &cfg,
                        &search.knots,
                        search.a,
                        None,
                        if polish { 64.0 } else { qv },
                        grid,
                    )?;
                    let ok = search.gap_spread < 1e-3
                        && (search.value - reference).abs() < 1e-4
                        && residual.stacked_max() < 1e-4;
                    all_ok &= ok;
                    rows.push(Row::knots(&cfg.label(), n, q.label(), &search, reference, &residual));
                }
            }
        }
        "regularity" => {
            let cfg = parse_config(&args.common)?;
            for &n in &ns {
                let phi = cfg.standard(n, grid)?;
                let regular = check_regular(phi.grid(), n)?;
                let ext = phi.extrema()?;
                all_ok &= regular && ext.len() == 2 * n as usize;
                rows.push(Row::identity(
                    "regularity",
                    &cfg.label(),
                    n,
                    ext.len() as f64,
                    2.0 * n as f64,
                    if regular { 0.0 } else { 1.0 },
                    0.5,
                ));
            }
        }
        other => return Err(format!("unknown suite '{other}'").into()),
    }

    sink.write_rows(&rows)?;
    Ok(all_ok)
}

/// `∫|Φ^G| = 4n‖Φ^{∫G}‖_∞`, both sides measured independently.
fn variation_identity(
    cfg: &ClassConfig,
    n: u32,
    grid: usize,
) -> Result<(f64, f64, f64), Box<dyn std::error::Error>> {
    let phi = cfg.standard(n, grid)?;
    let phi_tilde = cfg.standard_integrated(n, grid)?;
    let l1 = analysis::lq_norm_of(&|t| phi.value_at(t), grid, 1.0)?;
    let rhs = 4.0 * n as f64 * phi_tilde.sup_norm();
    Ok((l1, rhs, (l1 - rhs).abs()))
}

fn cmd_eval(args: EvalArgs) -> Result<bool, Box<dyn std::error::Error>> {
    validate_grid(args.common.grid.max(256))?;
    let n_samples = args.common.grid;
    let sink = OutputSink::new(
        if args.common.format == "json" {
            "tsv"
        } else {
            &args.common.format
        },
        args.common.output.as_deref(),
    )?;
    let samples: Vec<(f64, f64)> = match args.expr.as_str() {
        "kernel" => match args.kind.to_ascii_lowercase().as_str() {
            "d" => {
                if args.common.r < 1 {
                    return Err("kernel kind d needs --r ≥ 1".into());
                }
                sample(n_samples, |t| cvdw::eval_d(args.common.r, t).unwrap())
            }
            "k" => {
                let beta = args.common.beta.ok_or("kernel kind k needs --beta")?;
                sample(n_samples, |t| cvdw::eval_k(beta, t, 1e-12).unwrap())
            }
            other => return Err(format!("unknown kernel kind '{other}'").into()),
        },
        "standard-function" => {
            let cfg = parse_config(&args.common)?;
            let ns = parse_n_range(&args.common.n)?;
            let phi = cfg.standard(ns[0], args.common.grid.max(1024))?;
            sample(n_samples, |t| phi.value_at(t))
        }
        "rearrangement" => {
            let grid = match args.input.as_deref() {
                Some("cos") => cvdw::PeriodicGrid::from_fn(n_samples, |t| t.cos())?,
                Some(other) => return Err(format!("unknown input '{other}'").into()),
                None => {
                    let cfg = parse_config(&args.common)?;
                    let ns = parse_n_range(&args.common.n)?;
                    cfg.standard(ns[0], n_samples)?.grid().clone()
                }
            };
            let r = analysis::rearrangement(&grid);
            r.values()
                .iter()
                .enumerate()
                .map(|(j, &v)| (std::f64::consts::TAU * j as f64 / n_samples as f64, v))
                .collect()
        }
        other => return Err(format!("unknown expression '{other}'").into()),
    };
    sink.write_samples(&samples)?;
    Ok(true)
}

fn sample<F: Fn(f64) -> f64>(n: usize, f: F) -> Vec<(f64, f64)> {
    (0..n)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / n as f64;
            (t, f(t))
        })
        .collect()
}
