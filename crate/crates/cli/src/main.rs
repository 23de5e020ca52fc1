//! `tlad`: command-line front end for the robust identification toolkit.
//!
//! Every run resolves its full configuration (flags over `--config` file
//! over defaults), writes it to `run-manifest.txt` in the output directory,
//! streams progress to stderr, writes data to files, and prints exactly one
//! summary line on stdout. Exit codes: 0 success, 1 numerical failure,
//! 2 usage error.

use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use toeplitz_lad::certifier::{certify_report, enumeration_cost};
use toeplitz_lad::experiments::{
    certify_report_table, concentration_probe, concentration_table, consistency_experiment_with,
    consistency_table, emit_csv, emit_svg_lineplot, threshold_curve, threshold_table,
    weak_curve_table, weak_recovery_curve, ConcentrationRow, SvgAxes, SvgSeries,
};
use toeplitz_lad::rng::{split, SplitMix64};
use toeplitz_lad::signal::{
    build_matrix, generate_sequence, observe, read_instance_file, sample_noise, sample_outliers,
    write_instance_file, NoiseFamily, NoiseSpec, ProblemInstance,
};
use toeplitz_lad::{check_optimality, solve_lad, Error, LadOptions};

const SUBCOMMANDS: [&str; 7] = [
    "gen",
    "solve",
    "threshold",
    "certify",
    "weak-curve",
    "consistency",
    "concentration",
];

const DEFAULT_N_GRID: &str = "100,200,300,400,500,600,700,800,900,1000";
const GAUSSIAN_SIGMA_DEFAULT: f64 = 1.0;
const EXPONENTIAL_MEAN_DEFAULT: f64 = std::f64::consts::FRAC_1_SQRT_2;
const GAMMA_SCALE_DEFAULT: f64 = 0.408_248_290_463_863_1;

#[derive(Parser)]
#[command(
    name = "tlad",
    version,
    about = "Robust linear system identification under sparse outliers",
    propagate_version = true
)]
struct Cli {
    /// Directory receiving data files and the run manifest
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,

    /// Rayon thread cap for experiments; 0 uses all cores
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// key=value file injected before command-line flags (flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a serialized problem instance
    Gen(GenArgs),
    /// Solve a serialized instance by exact LAD and certify the solution
    Solve(SolveArgs),
    /// Correctable-outlier-fraction curve beta*(m)
    Threshold(ThresholdArgs),
    /// Exhaustive support certification report for one matrix
    Certify(CertifyArgs),
    /// Exact-recovery rate vs n at a fixed outlier fraction
    WeakCurve(WeakCurveArgs),
    /// Decode error vs n per noise family under mixed corruption
    Consistency(ConsistencyArgs),
    /// Concentration of |Hz|_1 around its Gaussian mean
    Concentration(ConcentrationArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Observation count (rows)
    #[arg(long)]
    n: usize,
    /// Parameter count (window width)
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// Fraction of rows hit by outliers
    #[arg(long, default_value_t = 0.0)]
    outlier_fraction: f64,
    /// Outlier magnitude scale
    #[arg(long, default_value_t = 10.0)]
    outlier_sigma: f64,
    /// Dense noise family: none, gaussian, exponential, gamma_shape2
    #[arg(long, default_value = "none")]
    noise: String,
    /// Family parameter (sigma / mean / scale); family default when omitted
    #[arg(long)]
    noise_param: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instance file name under the output directory
    #[arg(long, default_value = "instance.txt")]
    out: String,
}

#[derive(Args)]
struct SolveArgs {
    /// Serialized instance file to decode
    #[arg(long)]
    instance: PathBuf,
    /// Solution file name under the output directory
    #[arg(long, default_value = "solution.txt")]
    out: String,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 1)]
    m_min: usize,
    #[arg(long, default_value_t = 10)]
    m_max: usize,
    /// CSV file name under the output directory
    #[arg(long, default_value = "threshold.csv")]
    out: String,
    /// Optional SVG plot file name
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Support size to sweep exhaustively
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Upper bound on C(n,k)·2^(k-1) sign-pattern programs
    #[arg(long, default_value_t = 1_000_000)]
    budget: u128,
    #[arg(long, default_value = "certify-report.csv")]
    out: String,
}

#[derive(Args)]
struct WeakCurveArgs {
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// Outlier fraction (support redrawn each trial)
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Comma-separated list of n values
    #[arg(long, default_value = DEFAULT_N_GRID)]
    n_grid: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "weak-curve.csv")]
    out: String,
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct ConsistencyArgs {
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 0.5)]
    outlier_fraction: f64,
    #[arg(long, default_value_t = 10.0)]
    outlier_sigma: f64,
    /// Comma-separated noise families to compare
    #[arg(long, default_value = "gaussian,exponential,gamma_shape2")]
    families: String,
    #[arg(long, default_value_t = GAUSSIAN_SIGMA_DEFAULT)]
    gaussian_sigma: f64,
    #[arg(long, default_value_t = EXPONENTIAL_MEAN_DEFAULT)]
    exponential_mean: f64,
    #[arg(long, default_value_t = GAMMA_SCALE_DEFAULT)]
    gamma_scale: f64,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value = DEFAULT_N_GRID)]
    n_grid: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "consistency.csv")]
    out: String,
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct ConcentrationArgs {
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// Comma-separated list of n values
    #[arg(long, default_value = DEFAULT_N_GRID)]
    n_grid: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Unit direction as comma-separated floats; uniform direction when omitted
    #[arg(long)]
    z: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "concentration.csv")]
    out: String,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidDimension(_)
            | Error::InvalidParameter(_)
            | Error::InvalidSparsity { .. }
            | Error::InvalidInput(_)
            | Error::Parse { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let argv = match expand_config_args(std::env::args().collect()) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // Help/version land on stdout (exit 0), usage errors on
            // stderr (exit 2).
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Splices `key=value` lines from the `--config` file in right after the
/// subcommand token. Keys also given as explicit flags are skipped, so the
/// command line always wins; repeated config keys collapse to the last one.
fn expand_config_args(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut cfg_path: Option<String> = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            cfg_path = argv.get(i + 1).cloned();
        } else if let Some(rest) = a.strip_prefix("--config=") {
            cfg_path = Some(rest.to_string());
        }
    }
    let Some(path) = cfg_path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config file {path}: {e}"))?;
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key=value", lineno + 1))?;
        let key = key.trim();
        if key.is_empty() || key == "config" {
            return Err(format!("{path}:{}: bad key", lineno + 1));
        }
        pairs.retain(|(k, _)| k != key);
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    let sub = argv
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .ok_or("--config requires a subcommand")?;
    let explicit: Vec<&str> = argv[sub + 1..]
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a))
        .collect();
    let mut out = argv[..=sub].to_vec();
    for (key, value) in pairs {
        if explicit.contains(&key.as_str()) {
            continue;
        }
        out.push(format!("--{key}"));
        out.push(value);
    }
    out.extend_from_slice(&argv[sub + 1..]);
    Ok(out)
}

fn parse_grid(text: &str) -> Result<Vec<usize>, Failure> {
    let grid: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::usage(format!(
                "bad n grid {text:?}: expected comma-separated integers"
            ))
        })?;
    if grid.is_empty() {
        return Err(Failure::usage("n grid is empty"));
    }
    if grid.contains(&0) {
        return Err(Failure::usage("n grid values must be positive"));
    }
    Ok(grid)
}

fn noise_from_flags(name: &str, param: Option<f64>) -> Result<NoiseFamily, Failure> {
    let name = name.trim();
    if name == "none" {
        return Ok(NoiseFamily::None);
    }
    let default = match name {
        "gaussian" => GAUSSIAN_SIGMA_DEFAULT,
        "exponential" => EXPONENTIAL_MEAN_DEFAULT,
        "gamma" | "gamma_shape2" => GAMMA_SCALE_DEFAULT,
        other => return Err(Failure::usage(format!("unknown noise family {other:?}"))),
    };
    Ok(NoiseFamily::from_name_param(
        name,
        param.unwrap_or(default),
    )?)
}

fn write_manifest(
    dir: &Path,
    subcommand: &str,
    cli: &Cli,
    mut entries: Vec<(String, String)>,
) -> Result<(), Failure> {
    entries.push(("subcommand".into(), subcommand.into()));
    entries.push(("output-dir".into(), cli.output_dir.display().to_string()));
    entries.push(("threads".into(), cli.threads.to_string()));
    if let Some(c) = &cli.config {
        entries.push(("config".into(), c.display().to_string()));
    }
    entries.sort();
    let mut text = String::new();
    for (k, v) in entries {
        text.push_str(&k);
        text.push('=');
        text.push_str(&v);
        text.push('\n');
    }
    let path = dir.join("run-manifest.txt");
    std::fs::write(&path, text).map_err(|source| {
        Failure::from(Error::Io {
            path: path.display().to_string(),
            source,
        })
    })
}

fn kv(key: &str, value: impl ToString) -> (String, String) {
    (key.into(), value.to_string())
}

fn run(cli: &Cli) -> Result<String, Failure> {
    std::fs::create_dir_all(&cli.output_dir).map_err(|source| {
        Failure::from(Error::Io {
            path: cli.output_dir.display().to_string(),
            source,
        })
    })?;
    match &cli.cmd {
        Cmd::Gen(a) => run_gen(cli, a),
        Cmd::Solve(a) => run_solve(cli, a),
        Cmd::Threshold(a) => run_threshold(cli, a),
        Cmd::Certify(a) => run_certify(cli, a),
        Cmd::WeakCurve(a) => run_weak_curve(cli, a),
        Cmd::Consistency(a) => run_consistency(cli, a),
        Cmd::Concentration(a) => run_concentration(cli, a),
    }
}

fn run_gen(cli: &Cli, a: &GenArgs) -> Result<String, Failure> {
    write_manifest(
        &cli.output_dir,
        "gen",
        cli,
        vec![
            kv("n", a.n),
            kv("m", a.m),
            kv("outlier-fraction", a.outlier_fraction),
            kv("outlier-sigma", a.outlier_sigma),
            kv("noise", &a.noise),
            kv(
                "noise-param",
                a.noise_param.map_or("default".into(), |v| v.to_string()),
            ),
            kv("seed", a.seed),
            kv("out", &a.out),
        ],
    )?;
    if !(0.0..=1.0).contains(&a.outlier_fraction) {
        return Err(Failure::usage(format!(
            "outlier fraction must lie in [0,1], got {}",
            a.outlier_fraction
        )));
    }
    let family = noise_from_flags(&a.noise, a.noise_param)?;
    let seq = generate_sequence(a.n, a.m, split(a.seed, 0))?;
    let mut xr = SplitMix64::new(split(a.seed, 1));
    let x: Vec<f64> = (0..a.m).map(|_| xr.next_standard_normal()).collect();
    let k = (a.outlier_fraction * a.n as f64).round() as usize;
    let e = sample_outliers(a.n, k, a.outlier_sigma, split(a.seed, 2))?;
    let w = sample_noise(
        a.n,
        NoiseSpec {
            family,
            seed: split(a.seed, 3),
        },
    );
    let h = build_matrix(seq);
    let inst = observe(h, x, e, w)?;
    let path = cli.output_dir.join(&a.out);
    write_instance_file(&inst, &path)?;
    Ok(format!(
        "gen: wrote {} (n={}, m={}, outliers={}, noise={})",
        path.display(),
        a.n,
        a.m,
        k,
        family.name()
    ))
}

fn run_solve(cli: &Cli, a: &SolveArgs) -> Result<String, Failure> {
    write_manifest(
        &cli.output_dir,
        "solve",
        cli,
        vec![kv("instance", a.instance.display()), kv("out", &a.out)],
    )?;
    let inst: ProblemInstance = read_instance_file(&a.instance)?;
    let h = inst.h.to_dense();
    let sol = solve_lad(&h, &inst.y, LadOptions::default())?;
    let cert = check_optimality(&h, &inst.y, &sol.x_hat, 1e-9);
    let err_l2 = inst
        .x
        .iter()
        .zip(&sol.x_hat)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let mut text = String::new();
    text.push_str(&format!("objective {}\n", sol.objective));
    text.push_str(&format!("iterations {}\n", sol.iterations));
    text.push_str(&format!("degenerate {}\n", sol.degenerate));
    text.push_str(&format!("zero_residuals {}\n", sol.zero_residual_count));
    text.push_str(&format!("certificate_valid {}\n", cert.valid));
    text.push_str(&format!("gradient_norm {}\n", cert.gradient_norm));
    text.push_str(&format!("err_l2_vs_embedded {err_l2}\n"));
    let xs: Vec<String> = sol.x_hat.iter().map(|v| format!("{v}")).collect();
    text.push_str(&format!("x_hat {}\n", xs.join(" ")));
    let path = cli.output_dir.join(&a.out);
    std::fs::write(&path, text).map_err(|source| {
        Failure::from(Error::Io {
            path: path.display().to_string(),
            source,
        })
    })?;
    Ok(format!(
        "solve: objective={:.6} err_l2={:.3e} certificate={} -> {}",
        sol.objective,
        err_l2,
        if cert.valid { "valid" } else { "INVALID" },
        path.display()
    ))
}

fn run_threshold(cli: &Cli, a: &ThresholdArgs) -> Result<String, Failure> {
    write_manifest(
        &cli.output_dir,
        "threshold",
        cli,
        vec![
            kv("m-min", a.m_min),
            kv("m-max", a.m_max),
            kv("out", &a.out),
            kv("svg", a.svg.as_deref().unwrap_or("")),
        ],
    )?;
    eprintln!("threshold: sweeping m={}..{}", a.m_min, a.m_max);
    let results = threshold_curve(a.m_min, a.m_max)?;
    let path = cli.output_dir.join(&a.out);
    emit_csv(&threshold_table(&results), &path)?;
    if let Some(svg) = &a.svg {
        let series = vec![SvgSeries {
            label: "beta*".into(),
            points: results.iter().map(|r| (r.m as f64, r.beta_star)).collect(),
        }];
        let axes = SvgAxes {
            title: "Correctable outlier fraction".into(),
            x_label: "m".into(),
            y_label: "beta*".into(),
        };
        emit_svg_lineplot(&series, &axes, &cli.output_dir.join(svg))?;
    }
    let first = results.first().unwrap();
    let last = results.last().unwrap();
    Ok(format!(
        "threshold: beta*({})={:.6} .. beta*({})={:.6} -> {}",
        first.m,
        first.beta_star,
        last.m,
        last.beta_star,
        path.display()
    ))
}

fn run_certify(cli: &Cli, a: &CertifyArgs) -> Result<String, Failure> {
    write_manifest(
        &cli.output_dir,
        "certify",
        cli,
        vec![
            kv("n", a.n),
            kv("m", a.m),
            kv("k", a.k),
            kv("seed", a.seed),
            kv("budget", a.budget),
            kv("out", &a.out),
        ],
    )?;
    eprintln!(
        "certify: n={} m={} k={} ({} sign-pattern programs)",
        a.n,
        a.m,
        a.k,
        enumeration_cost(a.n, a.k)
    );
    let seq = generate_sequence(a.n, a.m, a.seed)?;
    let h = build_matrix(seq).to_dense();
    let report = certify_report(&h, a.k, a.budget)?;
    let path = cli.output_dir.join(&a.out);
    emit_csv(&certify_report_table(a.n, a.m, &report), &path)?;
    let all_certified = report.iter().all(|r| r.certified);
    let worst = report
        .iter()
        .min_by(|x, y| x.min_lp_value.partial_cmp(&y.min_lp_value).unwrap())
        .unwrap();
    Ok(format!(
        "certify: {} supports, all_certified={}, worst min_lp={:.6} at {:?} -> {}",
        report.len(),
        all_certified,
        worst.min_lp_value,
        worst.support,
        path.display()
    ))
}

fn run_weak_curve(cli: &Cli, a: &WeakCurveArgs) -> Result<String, Failure> {
    write_manifest(
        &cli.output_dir,
        "weak-curve",
        cli,
        vec![
            kv("m", a.m),
            kv("beta", a.beta),
            kv("trials", a.trials),
            kv("n-grid", &a.n_grid),
            kv("seed", a.seed),
            kv("out", &a.out),
            kv("svg", a.svg.as_deref().unwrap_or("")),
        ],
    )?;
    let grid = parse_grid(&a.n_grid)?;
    eprintln!(
        "weak-curve: m={} beta={} trials={} over {} n values",
        a.m,
        a.beta,
        a.trials,
        grid.len()
    );
    let points = weak_recovery_curve(&grid, a.m, a.beta, a.trials, a.seed)?;
    for p in &points {
        eprintln!(
            "weak-curve: n={} rate={:.3} failed={}",
            p.n,
            p.success_rate(),
            p.failed_solves
        );
    }
    let path = cli.output_dir.join(&a.out);
    emit_csv(&weak_curve_table(&points), &path)?;
    if let Some(svg) = &a.svg {
        let series = vec![SvgSeries {
            label: format!("beta={}", a.beta),
            points: points
                .iter()
                .map(|p| (p.n as f64, p.success_rate()))
                .collect(),
        }];
        let axes = SvgAxes {
            title: "Exact recovery rate".into(),
            x_label: "n".into(),
            y_label: "success rate".into(),
        };
        emit_svg_lineplot(&series, &axes, &cli.output_dir.join(svg))?;
    }
    let last = points.last().unwrap();
    Ok(format!(
        "weak-curve: rate at n={} is {:.3} over {} trials -> {}",
        last.n,
        last.success_rate(),
        last.trials,
        path.display()
    ))
}

fn run_consistency(cli: &Cli, a: &ConsistencyArgs) -> Result<String, Failure> {
    write_manifest(
        &cli.output_dir,
        "consistency",
        cli,
        vec![
            kv("m", a.m),
            kv("outlier-fraction", a.outlier_fraction),
            kv("outlier-sigma", a.outlier_sigma),
            kv("families", &a.families),
            kv("gaussian-sigma", a.gaussian_sigma),
            kv("exponential-mean", a.exponential_mean),
            kv("gamma-scale", a.gamma_scale),
            kv("trials", a.trials),
            kv("n-grid", &a.n_grid),
            kv("seed", a.seed),
            kv("out", &a.out),
            kv("svg", a.svg.as_deref().unwrap_or("")),
        ],
    )?;
    let grid = parse_grid(&a.n_grid)?;
    let mut families = Vec::new();
    for name in a.families.split(',') {
        let param = match name.trim() {
            "gaussian" => Some(a.gaussian_sigma),
            "exponential" => Some(a.exponential_mean),
            "gamma" | "gamma_shape2" => Some(a.gamma_scale),
            _ => None,
        };
        families.push(noise_from_flags(name, param)?);
    }
    if families.is_empty() {
        return Err(Failure::usage("no noise families given"));
    }
    eprintln!(
        "consistency: {} families x {} n values x {} trials",
        families.len(),
        grid.len(),
        a.trials
    );
    let points = consistency_experiment_with(
        &grid,
        &families,
        a.m,
        a.outlier_fraction,
        a.outlier_sigma,
        a.trials,
        a.seed,
    )?;
    for p in &points {
        eprintln!(
            "consistency: {} n={} median={:.4} failed={}",
            p.family, p.n, p.median_err_l2, p.failed_solves
        );
    }
    let path = cli.output_dir.join(&a.out);
    emit_csv(&consistency_table(&points), &path)?;
    if let Some(svg) = &a.svg {
        let series: Vec<SvgSeries> = families
            .iter()
            .map(|f| SvgSeries {
                label: f.name().to_string(),
                points: points
                    .iter()
                    .filter(|p| p.family == f.name())
                    .map(|p| (p.n as f64, p.median_err_l2))
                    .collect(),
            })
            .collect();
        let axes = SvgAxes {
            title: "Decode error vs sample count".into(),
            x_label: "n".into(),
            y_label: "median l2 error".into(),
        };
        emit_svg_lineplot(&series, &axes, &cli.output_dir.join(svg))?;
    }
    Ok(format!(
        "consistency: {} rows over {} families -> {}",
        points.len(),
        families.len(),
        path.display()
    ))
}

fn run_concentration(cli: &Cli, a: &ConcentrationArgs) -> Result<String, Failure> {
    write_manifest(
        &cli.output_dir,
        "concentration",
        cli,
        vec![
            kv("m", a.m),
            kv("n-grid", &a.n_grid),
            kv("trials", a.trials),
            kv("z", a.z.as_deref().unwrap_or("uniform")),
            kv("seed", a.seed),
            kv("out", &a.out),
        ],
    )?;
    let grid = parse_grid(&a.n_grid)?;
    let z: Vec<f64> = match &a.z {
        Some(text) => text
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                Failure::usage(format!("bad z {text:?}: expected comma-separated floats"))
            })?,
        None => vec![1.0 / (a.m as f64).sqrt(); a.m],
    };
    eprintln!(
        "concentration: m={} trials={} over {} n values",
        a.m,
        a.trials,
        grid.len()
    );
    let mut rows = Vec::with_capacity(grid.len());
    for (ni, &n) in grid.iter().enumerate() {
        let point = concentration_probe(n, a.m, &z, a.trials, split(a.seed, ni as u64))?;
        eprintln!(
            "concentration: n={n} mean={:.5} std={:.5}",
            point.statistic, point.spread
        );
        rows.push(ConcentrationRow {
            n,
            m: a.m,
            trials: a.trials,
            mean_ratio: point.statistic,
            std_ratio: point.spread,
            master_seed: split(a.seed, ni as u64),
        });
    }
    let path = cli.output_dir.join(&a.out);
    emit_csv(&concentration_table(&rows), &path)?;
    let last = rows.last().unwrap();
    Ok(format!(
        "concentration: mean ratio at n={} is {:.5} (std {:.5}) -> {}",
        last.n,
        last.mean_ratio,
        last.std_ratio,
        path.display()
    ))
}
