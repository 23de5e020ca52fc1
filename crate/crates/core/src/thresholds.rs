//! Correctable-outlier-fraction analysis and the special functions behind it.
//!
//! The central object is a scalar inequality in (β, μ, δ): a sparsity
//! fraction β is *feasible* for window width m when some μ > 0, δ ∈ (0,1)
//! make
//!
//! ```text
//! β ln(1/β) + (1−β) ln(1/(1−β))
//!   + mβ·[ln2 + mμ²/2 + ln Φ(μ√m)]
//!   + (1/(2m−1) − β)·[ln2 + μ²(1−δ)²/2 + ln(1−Φ(μ(1−δ)))]
//! ```
//!
//! negative. The largest feasible β (the strong threshold β*) is found by
//! bisection over a deterministic search lattice in (μ, δ). The last bracket
//! needs ln(1−Φ(u)) far beyond where 1−Φ underflows, so the tail is computed
//! in log space throughout.

// The ported erfc coefficients below keep their published digits.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

// erfc after FreeBSD msun s_erf.c (via Go's math.Erfc).
// Copyright (C) 1993 by Sun Microsystems, Inc. Developed at SunPro.
// Permission to use, copy, modify, and distribute this software is freely
// granted, provided that this notice is preserved.
const ERX: f64 = 8.45062911510467529297e-01;
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;
const TINY: f64 = 1.3877787807814457e-17; // 2^-56

fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    if x < 0.84375 {
        let temp = if x < TINY {
            x
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if x < 0.25 {
                x + x * y
            } else {
                0.5 + (x * y + (x - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }
    if x < 28.0 {
        let s = 1.0 / (x * x);
        let (r, sd) = if x < 1.0 / 0.35 {
            (
                RA0 + s
                    * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
                1.0 + s
                    * (SA1
                        + s * (SA2
                            + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
            )
        } else {
            if sign && x > 6.0 {
                return 2.0;
            }
            (
                RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
                1.0 + s
                    * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
            )
        };
        // Split x into a pseudo-single-precision head so -x² is computed
        // without cancellation.
        let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
        let v = f64::exp(-z * z - 0.5625) * f64::exp((z - x) * (z + x) + r / sd);
        return if sign { 2.0 - v / x } else { v / x };
    }
    if sign {
        2.0
    } else {
        0.0
    }
}

const LN_SQRT_2PI: f64 = 0.918938533204672741780329736406;

/// Standard normal CDF Φ(u), absolute error ≤ 1e−12 on |u| ≤ 8.
pub fn std_normal_cdf(u: f64) -> f64 {
    0.5 * erfc(-u / std::f64::consts::SQRT_2)
}

/// Upper-tail probability 1 − Φ(u) (underflows to 0 past u ≈ 39).
pub fn gauss_tail(u: f64) -> f64 {
    0.5 * erfc(u / std::f64::consts::SQRT_2)
}

/// ln(1 − Φ(u)), finite and accurate far past where the tail underflows.
/// Three regimes: reflection via log1p for u ≤ 0, direct log of the erfc
/// tail in the middle, and a Mills-ratio continued fraction
/// 1/(u + 1/(u + 2/(u + 3/…))) once u ≥ 8.
pub fn log_gauss_tail(u: f64) -> f64 {
    if u <= 0.0 {
        // 1 − Φ(u) = 1 − tail(−u); log1p keeps the near-zero log accurate.
        (-gauss_tail(-u)).ln_1p()
    } else if u < 8.0 {
        gauss_tail(u).ln()
    } else {
        let mut f = u;
        for k in (1..=60u32).rev() {
            f = u + f64::from(k) / f;
        }
        // tail = φ(u)·R(u), R = 1/f.
        -0.5 * u * u - LN_SQRT_2PI - f.ln()
    }
}

/// ln Φ(u), stable for very negative u.
pub fn log_std_normal_cdf(u: f64) -> f64 {
    log_gauss_tail(-u)
}

#[derive(Clone, Copy, Debug)]
pub struct ThresholdParams {
    pub m: usize,
    pub beta: f64,
    pub mu: f64,
    pub delta: f64,
}

impl ThresholdParams {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must lie in (0,1), got {}",
                self.beta
            )));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive, got {}",
                self.mu
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0,1), got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Left-hand side of the feasibility inequality; β is feasible iff some
/// (μ, δ) makes this negative.
pub fn theorem1_lhs(p: ThresholdParams) -> Result<f64> {
    p.validate()?;
    Ok(lhs_unchecked(p.m, p.beta, p.mu, p.delta))
}

fn lhs_unchecked(m: usize, beta: f64, mu: f64, delta: f64) -> f64 {
    let mf = m as f64;
    let entropy = beta * (1.0 / beta).ln() + (1.0 - beta) * (1.0 / (1.0 - beta)).ln();
    let phi_bracket =
        std::f64::consts::LN_2 + mf * mu * mu / 2.0 + log_std_normal_cdf(mu * mf.sqrt());
    let v = mu * (1.0 - delta);
    let tail_bracket = std::f64::consts::LN_2 + v * v / 2.0 + log_gauss_tail(v);
    entropy + mf * beta * phi_bracket + (1.0 / (2.0 * mf - 1.0) - beta) * tail_bracket
}

/// Deterministic (μ, δ) search grid with local refinement settings.
#[derive(Clone, Debug)]
pub struct SearchLattice {
    pub mu_step: f64,
    pub mu_count: usize,
    pub delta_floor: f64,
    pub delta_step: f64,
    pub delta_count: usize,
    pub refine_rounds: usize,
    pub refine_factor: f64,
}

impl Default for SearchLattice {
    fn default() -> Self {
        Self {
            mu_step: 0.05,
            mu_count: 200, // μ ∈ {0.05, 0.10, …, 10}
            delta_floor: 0.001,
            delta_step: 0.01,
            delta_count: 99, // δ ∈ {0.001} ∪ {0.01, …, 0.99}
            refine_rounds: 3,
            refine_factor: 10.0,
        }
    }
}

impl SearchLattice {
    pub fn describe(&self) -> String {
        format!(
            "mu: {} steps of {}; delta: {} plus {} steps of {}; refine {} rounds x{}",
            self.mu_count,
            self.mu_step,
            self.delta_floor,
            self.delta_count,
            self.delta_step,
            self.refine_rounds,
            self.refine_factor
        )
    }

    fn mu_values(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.mu_count).map(move |i| i as f64 * self.mu_step)
    }

    fn delta_values(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.delta_floor)
            .chain((1..=self.delta_count).map(move |i| i as f64 * self.delta_step))
    }
}

/// Scans the lattice, then locally refines the best point by coordinate
/// descent. Returns the refined minimum and its location.
fn minimize_lhs(m: usize, beta: f64, lattice: &SearchLattice) -> (f64, f64, f64) {
    let mut best = f64::INFINITY;
    let mut best_mu = lattice.mu_step;
    let mut best_delta = lattice.delta_floor;
    for mu in lattice.mu_values() {
        for delta in lattice.delta_values() {
            let v = lhs_unchecked(m, beta, mu, delta);
            if v < best {
                best = v;
                best_mu = mu;
                best_delta = delta;
            }
        }
    }
    let mut mu_step = lattice.mu_step;
    let mut delta_step = lattice.delta_step;
    for _ in 0..lattice.refine_rounds {
        mu_step /= lattice.refine_factor;
        delta_step /= lattice.refine_factor;
        loop {
            let mut improved = false;
            for sign in [-1.0, 1.0] {
                for k in 1..=10 {
                    let mu = best_mu + sign * k as f64 * mu_step;
                    if mu <= 0.0 {
                        continue;
                    }
                    let v = lhs_unchecked(m, beta, mu, best_delta);
                    if v < best {
                        best = v;
                        best_mu = mu;
                        improved = true;
                    }
                }
            }
            for sign in [-1.0, 1.0] {
                for k in 1..=10 {
                    let delta = best_delta + sign * k as f64 * delta_step;
                    if delta <= 0.0 || delta >= 1.0 {
                        continue;
                    }
                    let v = lhs_unchecked(m, beta, best_mu, delta);
                    if v < best {
                        best = v;
                        best_delta = delta;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    (best, best_mu, best_delta)
}

/// Whether any lattice point (after refinement) makes the inequality
/// negative at this β. β outside (0, 1) is never feasible (the quantified
/// domain is empty there), reported as `false` rather than an error so
/// ceiling probes like β = 1/(2m−1) + ε at m = 1 are answerable.
pub fn is_feasible(m: usize, beta: f64, lattice: &SearchLattice) -> (bool, Option<(f64, f64)>) {
    assert!(m >= 1);
    if !(beta > 0.0 && beta < 1.0) {
        return (false, None);
    }
    let (best, mu, delta) = minimize_lhs(m, beta, lattice);
    if best < 0.0 {
        (true, Some((mu, delta)))
    } else {
        (false, None)
    }
}

#[derive(Clone, Debug)]
pub struct ThresholdResult {
    pub m: usize,
    pub beta_star: f64,
    pub mu_star: f64,
    pub delta_star: f64,
    pub lhs_at_star: f64,
    pub grid_resolution: String,
}

pub fn strong_threshold(m: usize, tol_beta: f64) -> ThresholdResult {
    strong_threshold_with(m, tol_beta, &SearchLattice::default())
}

/// Largest feasible β in (0, 1/(2m−1)), located by bisection at resolution
/// `tol_beta` and double-checked by a sweep so a non-monotone lattice
/// artifact cannot truncate the answer.
pub fn strong_threshold_with(m: usize, tol_beta: f64, lattice: &SearchLattice) -> ThresholdResult {
    assert!(m >= 1);
    assert!(tol_beta > 0.0);
    let ceiling = 1.0 / (2.0 * m as f64 - 1.0);
    let mut hi = ceiling;
    let mut lo = 0.0;
    let mut probe = ceiling / 2.0;
    while probe > 1e-12 {
        if is_feasible(m, probe, lattice).0 {
            lo = probe;
            break;
        }
        hi = probe;
        probe /= 2.0;
    }
    if lo == 0.0 {
        // Nothing feasible above 1e-12; report the degenerate floor.
        return ThresholdResult {
            m,
            beta_star: 0.0,
            mu_star: 0.0,
            delta_star: 0.0,
            lhs_at_star: f64::NAN,
            grid_resolution: lattice.describe(),
        };
    }
    while hi - lo > tol_beta {
        let mid = 0.5 * (hi + lo);
        if is_feasible(m, mid, lattice).0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut beta_star = lo;
    for _ in 0..1000 {
        let next = beta_star + tol_beta;
        if next < 1.0 && is_feasible(m, next, lattice).0 {
            beta_star = next;
        } else {
            break;
        }
    }
    let (lhs, mu, delta) = minimize_lhs(m, beta_star, lattice);
    ThresholdResult {
        m,
        beta_star,
        mu_star: mu,
        delta_star: delta,
        lhs_at_star: lhs,
        grid_resolution: lattice.describe(),
    }
}

/// Closed form of E{|l + tX| − |l|} for X ~ N(0, σ²):
/// √(2/π)·tσ·e^{−l²/(2t²σ²)} − 2|l|·(1 − Φ(|l|/(tσ))). Nonnegative and
/// nonincreasing in |l|.
pub fn expected_abs_gain(l: f64, t: f64, sigma: f64) -> f64 {
    assert!(t > 0.0 && sigma > 0.0);
    let ts = t * sigma;
    let a = l.abs() / ts;
    let gain = (2.0 / std::f64::consts::PI).sqrt() * ts * (-0.5 * a * a).exp()
        - 2.0 * l.abs() * gauss_tail(a);
    gain.max(0.0)
}
