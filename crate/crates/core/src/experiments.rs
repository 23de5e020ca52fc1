//! Seeded Monte Carlo drivers and their CSV/SVG emission.
//!
//! Every trial is a pure function of (master_seed, trial_index): the runner
//! derives one seed per trial up front, so results are identical whatever
//! the thread count, and collection preserves index order, so emitted tables
//! are byte-identical run to run. Solver failures are counted in their own
//! column, never folded into statistics.

use crate::certifier::CertResult;
use crate::error::{Error, Result};
use crate::lad::{solve_lad, LadOptions};
use crate::rng::{split, SplitMix64};
use crate::signal::{
    build_matrix, generate_sequence, sample_noise, sample_outliers, NoiseFamily, NoiseSpec,
};
use crate::thresholds::{strong_threshold, ThresholdResult};
use rayon::prelude::*;
use std::path::Path;

#[derive(Clone, Copy, Debug)]
pub struct TrialConfig {
    pub n: usize,
    pub m: usize,
    pub outlier_fraction: f64,
    pub outlier_sigma: f64,
    pub noise: NoiseFamily,
    pub trials: usize,
    pub master_seed: u64,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.n < self.m {
            return Err(Error::InvalidDimension(format!(
                "need n >= m >= 1, got n={}, m={}",
                self.n, self.m
            )));
        }
        if !(0.0..=1.0).contains(&self.outlier_fraction) {
            return Err(Error::InvalidParameter(format!(
                "outlier fraction must lie in [0,1], got {}",
                self.outlier_fraction
            )));
        }
        if !(self.outlier_sigma.is_finite() && self.outlier_sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "outlier sigma must be positive, got {}",
                self.outlier_sigma
            )));
        }
        if self.trials < 1 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialResult {
    pub seed: u64,
    pub err_l2: f64,
    pub objective: f64,
    pub exact_recovery: bool,
    pub degenerate: bool,
}

/// Exact-recovery cutoff on ‖x̂ − x‖₂.
pub const EXACT_RECOVERY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    pub abscissa: f64,
    pub statistic: f64,
    pub spread: f64,
    pub count: usize,
}

/// One decode attempt: fresh (H, x, e, w) from the trial's derived seed,
/// then exact ℓ₁ recovery. Sub-streams 0..3 cover sequence, state,
/// outliers, and noise so changing one family never shifts another.
pub fn run_recovery_trial(cfg: &TrialConfig, trial_index: usize) -> Result<TrialResult> {
    cfg.validate()?;
    let seed = split(cfg.master_seed, trial_index as u64);
    let seq = generate_sequence(cfg.n, cfg.m, split(seed, 0))?;
    let h = build_matrix(seq);
    let mut xr = SplitMix64::new(split(seed, 1));
    let x: Vec<f64> = (0..cfg.m).map(|_| xr.next_standard_normal()).collect();
    let k = (cfg.outlier_fraction * cfg.n as f64).round() as usize;
    let e = sample_outliers(cfg.n, k, cfg.outlier_sigma, split(seed, 2))?;
    let w = sample_noise(
        cfg.n,
        NoiseSpec {
            family: cfg.noise,
            seed: split(seed, 3),
        },
    );
    let hd = h.to_dense();
    let e_dense = e.to_dense();
    let hx = h.matvec(&x);
    let y: Vec<f64> = (0..cfg.n).map(|i| hx[i] + e_dense[i] + w[i]).collect();
    let sol = solve_lad(&hd, &y, LadOptions::default())?;
    let err_l2 = x
        .iter()
        .zip(&sol.x_hat)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(TrialResult {
        seed,
        err_l2,
        objective: sol.objective,
        exact_recovery: err_l2 <= EXACT_RECOVERY_TOL,
        degenerate: sol.degenerate,
    })
}

fn run_batch(cfg: &TrialConfig) -> Vec<Result<TrialResult>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_recovery_trial(cfg, i))
        .collect()
}

#[derive(Clone, Debug)]
pub struct WeakCurvePoint {
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    pub trials: usize,
    pub successes: usize,
    pub failed_solves: usize,
    pub master_seed: u64,
}

impl WeakCurvePoint {
    pub fn success_rate(&self) -> f64 {
        let solved = self.trials - self.failed_solves;
        if solved == 0 {
            0.0
        } else {
            self.successes as f64 / solved as f64
        }
    }

    pub fn as_curve_point(&self) -> CurvePoint {
        CurvePoint {
            abscissa: self.n as f64,
            statistic: self.success_rate(),
            spread: 0.0,
            count: self.trials - self.failed_solves,
        }
    }
}

/// Exact-recovery rate vs n at a fixed outlier fraction β, noiseless.
/// The support is redrawn every trial.
pub fn weak_recovery_curve(
    n_grid: &[usize],
    m: usize,
    beta: f64,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<WeakCurvePoint>> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in [0,1), got {beta}"
        )));
    }
    let mut out = Vec::with_capacity(n_grid.len());
    for (ni, &n) in n_grid.iter().enumerate() {
        let cfg = TrialConfig {
            n,
            m,
            outlier_fraction: beta,
            outlier_sigma: 10.0,
            noise: NoiseFamily::None,
            trials,
            master_seed: split(master_seed, ni as u64),
        };
        cfg.validate()?;
        let results = run_batch(&cfg);
        let failed = results.iter().filter(|r| r.is_err()).count();
        let successes = results
            .iter()
            .filter(|r| matches!(r, Ok(t) if t.exact_recovery))
            .count();
        out.push(WeakCurvePoint {
            n,
            m,
            beta,
            trials,
            successes,
            failed_solves: failed,
            master_seed: cfg.master_seed,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ConsistencyPoint {
    pub family: String,
    pub n: usize,
    pub trials: usize,
    pub median_err_l2: f64,
    pub mean_err_l2: f64,
    pub iqr_err_l2: f64,
    pub failed_solves: usize,
    pub master_seed: u64,
}

/// Interpolating sample quantile (the common "type 7" rule).
fn quantile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        len => {
            let h = (len - 1) as f64 * q;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(len - 1);
            let frac = h - lo as f64;
            sorted[lo] + frac * (sorted[hi] - sorted[lo])
        }
    }
}

/// Decode error vs n for each noise family under the reference mixed
/// regime: window width 5, half the rows hit by N(0,100) outliers.
pub fn consistency_experiment(
    n_grid: &[usize],
    families: &[NoiseFamily],
    trials: usize,
    master_seed: u64,
) -> Result<Vec<ConsistencyPoint>> {
    consistency_experiment_with(n_grid, families, 5, 0.5, 10.0, trials, master_seed)
}

pub fn consistency_experiment_with(
    n_grid: &[usize],
    families: &[NoiseFamily],
    m: usize,
    outlier_fraction: f64,
    outlier_sigma: f64,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<ConsistencyPoint>> {
    let mut out = Vec::with_capacity(families.len() * n_grid.len());
    for (fi, &family) in families.iter().enumerate() {
        let fam_seed = split(master_seed, fi as u64);
        for (ni, &n) in n_grid.iter().enumerate() {
            let cfg = TrialConfig {
                n,
                m,
                outlier_fraction,
                outlier_sigma,
                noise: family,
                trials,
                master_seed: split(fam_seed, ni as u64),
            };
            cfg.validate()?;
            let results = run_batch(&cfg);
            let failed = results.iter().filter(|r| r.is_err()).count();
            let mut errs: Vec<f64> = results
                .iter()
                .filter_map(|r| r.as_ref().ok().map(|t| t.err_l2))
                .collect();
            errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mean = if errs.is_empty() {
                f64::NAN
            } else {
                errs.iter().sum::<f64>() / errs.len() as f64
            };
            out.push(ConsistencyPoint {
                family: family.name().to_string(),
                n,
                trials,
                median_err_l2: quantile(&errs, 0.5),
                mean_err_l2: mean,
                iqr_err_l2: quantile(&errs, 0.75) - quantile(&errs, 0.25),
                failed_solves: failed,
                master_seed: cfg.master_seed,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ConcentrationRow {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub master_seed: u64,
}

/// Samples ‖Hz‖₁ / (n·√(2/π)) over fresh matrices for a fixed unit z.
/// Each (Hz)_i is standard normal, so the ratio concentrates at 1.
pub fn concentration_probe(
    n: usize,
    m: usize,
    z: &[f64],
    trials: usize,
    master_seed: u64,
) -> Result<CurvePoint> {
    if z.len() != m {
        return Err(Error::InvalidDimension(format!(
            "z has {} entries for m = {m}",
            z.len()
        )));
    }
    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "z must be a unit vector, got norm {norm}"
        )));
    }
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let expected = n as f64 * (2.0 / std::f64::consts::PI).sqrt();
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seq = generate_sequence(n, m, split(master_seed, i as u64))?;
            let h = build_matrix(seq);
            let hz = h.matvec(z);
            Ok(hz.iter().map(|v| v.abs()).sum::<f64>() / expected)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = ratios.iter().sum::<f64>() / trials as f64;
    let std = if trials > 1 {
        (ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (trials - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(CurvePoint {
        abscissa: n as f64,
        statistic: mean,
        spread: std,
        count: trials,
    })
}

/// β*(m) over a contiguous range of window widths.
pub fn threshold_curve(m_min: usize, m_max: usize) -> Result<Vec<ThresholdResult>> {
    if m_min < 1 || m_min > m_max || m_max > 20 {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m_min <= m_max <= 20, got {m_min}..{m_max}"
        )));
    }
    Ok((m_min..=m_max)
        .into_par_iter()
        .map(|m| strong_threshold(m, 1e-5))
        .collect())
}

/// A rendered CSV: fixed header plus finished rows.
#[derive(Clone, Debug)]
pub struct Table {
    pub header: String,
    pub rows: Vec<String>,
}

fn fmt_f(v: f64) -> String {
    format!("{v}")
}

pub fn weak_curve_table(points: &[WeakCurvePoint]) -> Table {
    Table {
        header: "n,m,beta,trials,successes,success_rate,failed_solves,master_seed".into(),
        rows: points
            .iter()
            .map(|p| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    p.n,
                    p.m,
                    fmt_f(p.beta),
                    p.trials,
                    p.successes,
                    fmt_f(p.success_rate()),
                    p.failed_solves,
                    p.master_seed
                )
            })
            .collect(),
    }
}

pub fn consistency_table(points: &[ConsistencyPoint]) -> Table {
    Table {
        header: "family,n,trials,median_err_l2,mean_err_l2,iqr_err_l2,failed_solves,master_seed"
            .into(),
        rows: points
            .iter()
            .map(|p| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    p.family,
                    p.n,
                    p.trials,
                    fmt_f(p.median_err_l2),
                    fmt_f(p.mean_err_l2),
                    fmt_f(p.iqr_err_l2),
                    p.failed_solves,
                    p.master_seed
                )
            })
            .collect(),
    }
}

pub fn threshold_table(results: &[ThresholdResult]) -> Table {
    Table {
        header: "m,beta_star,mu_star,delta_star,lhs_at_star".into(),
        rows: results
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{}",
                    r.m,
                    fmt_f(r.beta_star),
                    fmt_f(r.mu_star),
                    fmt_f(r.delta_star),
                    fmt_f(r.lhs_at_star)
                )
            })
            .collect(),
    }
}

pub fn concentration_table(rows: &[ConcentrationRow]) -> Table {
    Table {
        header: "n,m,trials,mean_ratio,std_ratio,master_seed".into(),
        rows: rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    r.n,
                    r.m,
                    r.trials,
                    fmt_f(r.mean_ratio),
                    fmt_f(r.std_ratio),
                    r.master_seed
                )
            })
            .collect(),
    }
}

fn signs_string(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|&s| if s >= 0 { '+' } else { '-' })
        .collect()
}

fn support_string(support: &[usize]) -> String {
    support
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn certify_report_table(n: usize, m: usize, results: &[CertResult]) -> Table {
    Table {
        header: "n,m,k,support,certified,min_lp_value,worst_signs".into(),
        rows: results
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{}",
                    n,
                    m,
                    r.support.len(),
                    support_string(&r.support),
                    r.certified,
                    fmt_f(r.min_lp_value),
                    signs_string(&r.worst_sign_pattern)
                )
            })
            .collect(),
    }
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable {
            path: path.display().to_string(),
        });
    }
    let mut text = String::with_capacity(table.header.len() + 16 * table.rows.len());
    text.push_str(&table.header);
    text.push('\n');
    for row in &table.rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Debug)]
pub struct SvgSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct SvgAxes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

const SVG_PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t.is_empty() {
        "0".into()
    } else {
        t.into()
    }
}

/// Minimal standalone line chart: fixed 800×500 viewport, one polyline per
/// series, linear axes with five ticks, legend on the right.
pub fn emit_svg_lineplot(series: &[SvgSeries], axes: &SvgAxes, path: &Path) -> Result<()> {
    let finite: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if finite.is_empty() {
        return Err(Error::EmptyTable {
            path: path.display().to_string(),
        });
    }
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &finite {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if xmax - xmin < 1e-12 {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if ymax - ymin < 1e-12 {
        ymin -= 1.0;
        ymax += 1.0;
    } else {
        let pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
    }
    let (px0, px1, py0, py1) = (70.0, 630.0, 450.0, 45.0);
    let sx = |x: f64| px0 + (x - xmin) / (xmax - xmin) * (px1 - px0);
    let sy = |y: f64| py0 + (y - ymin) / (ymax - ymin) * (py1 - py0);

    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\" font-family=\"sans-serif\" font-size=\"12\">\n",
    );
    svg.push_str("<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"350\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        axes.title
    ));
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{px0}\" y1=\"{py0}\" x2=\"{px1}\" y2=\"{py0}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{px0}\" y1=\"{py0}\" x2=\"{px0}\" y2=\"{py1}\" stroke=\"black\"/>\n"
    ));
    for t in 0..=4 {
        let fx = xmin + (xmax - xmin) * t as f64 / 4.0;
        let gx = sx(fx);
        svg.push_str(&format!(
            "<line x1=\"{gx:.2}\" y1=\"{py0}\" x2=\"{gx:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            py0 + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{gx:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
            py0 + 20.0,
            fmt_tick(fx)
        ));
        let fy = ymin + (ymax - ymin) * t as f64 / 4.0;
        let gy = sy(fy);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{gy:.2}\" x2=\"{px0}\" y2=\"{gy:.2}\" stroke=\"black\"/>\n",
            px0 - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
            px0 - 8.0,
            gy + 4.0,
            fmt_tick(fy)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"350\" y=\"490\" text-anchor=\"middle\">{}</text>\n",
        axes.x_label
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"250\" text-anchor=\"middle\" transform=\"rotate(-90 16 250)\">{}</text>\n",
        axes.y_label
    ));
    for (si, s) in series.iter().enumerate() {
        let color = SVG_PALETTE[si % SVG_PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if pts.is_empty() {
            continue;
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        let ly = 60.0 + 20.0 * si as f64;
        svg.push_str(&format!(
            "<line x1=\"650\" y1=\"{ly}\" x2=\"675\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"680\" y=\"{:.1}\">{}</text>\n",
            ly + 4.0,
            s.label
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean_cfg() -> TrialConfig {
        TrialConfig {
            n: 60,
            m: 3,
            outlier_fraction: 0.0,
            outlier_sigma: 10.0,
            noise: NoiseFamily::None,
            trials: 4,
            master_seed: 7,
        }
    }

    #[test]
    fn clean_trial_recovers_exactly() {
        let t = run_recovery_trial(&clean_cfg(), 0).unwrap();
        assert!(t.exact_recovery, "err {}", t.err_l2);
        assert!(t.err_l2 <= EXACT_RECOVERY_TOL);
    }

    #[test]
    fn trials_are_deterministic() {
        let cfg = TrialConfig {
            outlier_fraction: 0.3,
            noise: NoiseFamily::Gaussian { sigma: 1.0 },
            ..clean_cfg()
        };
        let a = run_recovery_trial(&cfg, 5).unwrap();
        let b = run_recovery_trial(&cfg, 5).unwrap();
        assert_eq!(a, b);
        let c = run_recovery_trial(&cfg, 6).unwrap();
        assert_ne!(a.seed, c.seed);
    }

    #[test]
    fn mixed_trial_is_finite() {
        let cfg = TrialConfig {
            n: 200,
            m: 5,
            outlier_fraction: 0.5,
            outlier_sigma: 10.0,
            noise: NoiseFamily::Gaussian { sigma: 1.0 },
            trials: 1,
            master_seed: 42,
        };
        let t = run_recovery_trial(&cfg, 0).unwrap();
        assert!(t.err_l2.is_finite());
        assert!(t.objective > 0.0);
    }

    #[test]
    fn weak_curve_beta_zero_is_perfect() {
        let pts = weak_recovery_curve(&[30, 60], 2, 0.0, 5, 11).unwrap();
        for p in &pts {
            assert_eq!(p.successes, 5);
            assert_eq!(p.failed_solves, 0);
            assert_eq!(p.success_rate(), 1.0);
        }
    }

    #[test]
    fn weak_curve_rejects_bad_beta() {
        assert!(weak_recovery_curve(&[20], 2, 1.0, 3, 0).is_err());
        assert!(weak_recovery_curve(&[20], 2, -0.1, 3, 0).is_err());
    }

    #[test]
    fn consistency_error_shrinks_with_n() {
        let pts = consistency_experiment_with(
            &[80, 320],
            &[NoiseFamily::Gaussian { sigma: 1.0 }],
            2,
            0.25,
            10.0,
            16,
            3,
        )
        .unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].failed_solves, 0);
        assert!(
            pts[1].median_err_l2 < pts[0].median_err_l2,
            "median at n=320 ({}) should be below n=80 ({})",
            pts[1].median_err_l2,
            pts[0].median_err_l2
        );
    }

    #[test]
    fn concentration_ratio_near_one() {
        let p = concentration_probe(1000, 1, &[1.0], 50, 9).unwrap();
        assert!((p.statistic - 1.0).abs() < 0.02, "mean {}", p.statistic);
        let small = concentration_probe(100, 1, &[1.0], 50, 9).unwrap();
        assert!(small.spread > p.spread, "std should shrink with n");
        // Non-unit z rejected.
        assert!(concentration_probe(100, 1, &[2.0], 5, 0).is_err());
    }

    #[test]
    fn quantile_interpolates() {
        let v = [1.0, 2.0, 3.0, 10.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 10.0);
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert!(quantile(&[], 0.5).is_nan());
    }

    #[test]
    fn csv_round_trip_and_empty_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("weak.csv");
        let pts = vec![WeakCurvePoint {
            n: 100,
            m: 5,
            beta: 0.2,
            trials: 10,
            successes: 9,
            failed_solves: 0,
            master_seed: 1,
        }];
        emit_csv(&weak_curve_table(&pts), &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,m,beta,trials,successes,success_rate,failed_solves,master_seed"
        );
        assert_eq!(lines.next().unwrap(), "100,5,0.2,10,9,0.9,0,1");
        assert!(lines.next().is_none());

        let empty = Table {
            header: "a,b".into(),
            rows: vec![],
        };
        let p2 = dir.path().join("empty.csv");
        assert!(matches!(
            emit_csv(&empty, &p2),
            Err(Error::EmptyTable { .. })
        ));
        assert!(!p2.exists());
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("plot.svg");
        let series = vec![
            SvgSeries {
                label: "a".into(),
                points: vec![(1.0, 1.0), (2.0, 2.0)],
            },
            SvgSeries {
                label: "b".into(),
                points: vec![(1.0, 2.0), (2.0, 1.0)],
            },
            SvgSeries {
                label: "c".into(),
                points: vec![(1.0, 0.0), (2.0, 0.5)],
            },
        ];
        let axes = SvgAxes {
            title: "demo".into(),
            x_label: "n".into(),
            y_label: "value".into(),
        };
        emit_svg_lineplot(&series, &axes, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.matches("<polyline").count(), 3);
        assert!(text.contains(">n</text>"));
        assert!(text.contains(">value</text>"));
        assert!(emit_svg_lineplot(&[], &axes, &dir.path().join("e.svg")).is_err());
    }

    #[test]
    fn threshold_curve_validates_range() {
        assert!(threshold_curve(0, 3).is_err());
        assert!(threshold_curve(3, 2).is_err());
        assert!(threshold_curve(1, 21).is_err());
    }
}
