//! Exact recoverability certification for a fixed outlier support.
//!
//! A support K is *balanced* for H when every z ≠ 0 puts strictly more ℓ₁
//! mass of Hz outside K than inside: ‖(Hz)_K‖₁ < ‖(Hz)_K̄‖₁. Balancedness is
//! exactly the condition under which ℓ₁ decoding corrects every error
//! supported on K. This module decides it by enumeration: for each sign
//! pattern s on K, minimize ‖(Hz)_K̄‖₁ subject to Σ_{i∈K} s_i (Hz)_i = 1
//! (scaling normalizes the signed K-mass). The support is certified iff the
//! minimum over patterns exceeds 1. The converse is constructive: a witness
//! z with ‖(Hz)_K‖₁ ≥ ‖(Hz)_K̄‖₁ yields a concrete error e on K that makes
//! x + z beat the true x, so failures come with a counterexample.
//!
//! Patterns come in ± pairs with identical LP values, so only patterns with
//! s₁ = +1 are enumerated. Each inner LP is itself a small ℓ₁ regression:
//! the equality constraint eliminates one z coordinate.

use crate::error::{Error, Result};
use crate::lad::{solve_lad, LadOptions};
use crate::mat::{independent_columns, Mat};
use crate::signal::SparseVector;

/// Strictness band around the certification cutoff 1.
const MARGIN: f64 = 1e-8;

const DEFAULT_LP_BUDGET: u128 = 1_000_000;
const MAX_SUPPORT: usize = 20;

#[derive(Clone, Debug)]
pub struct CertResult {
    pub support: Vec<usize>,
    pub certified: bool,
    /// Minimum landed within the numerical tie band around 1; reported as
    /// not certified because a tie means a non-unique decoder optimum.
    pub marginal: bool,
    pub min_lp_value: f64,
    pub worst_sign_pattern: Vec<i8>,
    /// Direction achieving the minimum; present iff not certified.
    pub witness_z: Option<Vec<f64>>,
}

fn validate_support(k_set: &[usize], n: usize) -> Result<()> {
    for w in k_set.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidInput(
                "support indices must be strictly increasing".into(),
            ));
        }
    }
    if let Some(&last) = k_set.last() {
        if last >= n {
            return Err(Error::InvalidInput(format!(
                "support index {last} out of range for {n} rows"
            )));
        }
    }
    Ok(())
}

/// Σ_{i∉K} |(Hz)_i| − Σ_{i∈K} |(Hz)_i|. Positive means z respects the
/// balancedness condition on K.
pub fn balancedness_margin(h: &Mat, k_set: &[usize], z: &[f64]) -> Result<f64> {
    if z.len() != h.cols() {
        return Err(Error::InvalidDimension(format!(
            "z has {} entries for a {}-column matrix",
            z.len(),
            h.cols()
        )));
    }
    if z.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidInput("z must be nonzero".into()));
    }
    validate_support(k_set, h.rows())?;
    let hz = h.matvec(z);
    let mut inside = 0.0;
    let mut outside = 0.0;
    let mut kp = 0;
    for (i, v) in hz.iter().enumerate() {
        if kp < k_set.len() && k_set[kp] == i {
            inside += v.abs();
            kp += 1;
        } else {
            outside += v.abs();
        }
    }
    Ok(outside - inside)
}

/// Minimizes ‖(Hz)_K̄‖₁ subject to cᵀz = 1, returning (value, argmin z).
/// One coordinate of z is eliminated through the constraint; the rest is an
/// ℓ₁ regression over the K̄ rows.
fn constrained_offsupport_min(h: &Mat, kbar: &[usize], c: &[f64]) -> Result<(f64, Vec<f64>)> {
    let m = h.cols();
    let p = (0..m)
        .max_by(|&a, &b| c[a].abs().partial_cmp(&c[b].abs()).unwrap())
        .unwrap();
    let cp = c[p];

    let z = if m == 1 {
        vec![1.0 / cp]
    } else {
        // (Hz)_i = h_ip/cp + Σ_{q≠p} (h_iq − h_ip c_q/cp) u_q over K̄.
        let free: Vec<usize> = (0..m).filter(|&q| q != p).collect();
        let a = Mat::from_fn(kbar.len(), m - 1, |r, jc| {
            let i = kbar[r];
            let q = free[jc];
            -(h.at(i, q) - h.at(i, p) * c[q] / cp)
        });
        let rhs: Vec<f64> = kbar.iter().map(|&i| h.at(i, p) / cp).collect();
        let keep = independent_columns(&a, 1e-11);
        let mut u = vec![0.0; m - 1];
        if !keep.is_empty() {
            let a_sub = Mat::from_fn(kbar.len(), keep.len(), |r, jc| a.at(r, keep[jc]));
            let sol = match solve_lad(&a_sub, &rhs, LadOptions::default()) {
                Ok(s) => s,
                Err(Error::NonConvergence { best, .. }) => *best,
                Err(e) => return Err(e),
            };
            for (jc, &col) in keep.iter().enumerate() {
                u[col] = sol.x_hat[jc];
            }
        }
        let mut z = vec![0.0; m];
        let mut dot = 0.0;
        for (jc, &q) in free.iter().enumerate() {
            z[q] = u[jc];
            dot += c[q] * u[jc];
        }
        z[p] = (1.0 - dot) / cp;
        z
    };

    let hz = h.matvec(&z);
    let value = kbar.iter().map(|&i| hz[i].abs()).sum();
    Ok((value, z))
}

/// Decides balancedness of one support by enumerating its sign patterns.
pub fn certify_support(h: &Mat, k_set: &[usize]) -> Result<CertResult> {
    let n = h.rows();
    validate_support(k_set, n)?;
    let k = k_set.len();
    if k > MAX_SUPPORT {
        return Err(Error::EnumerationLimit {
            required: 1u128 << (k - 1),
            cap: 1u128 << (MAX_SUPPORT - 1),
        });
    }
    if k == 0 {
        return Ok(CertResult {
            support: Vec::new(),
            certified: true,
            marginal: false,
            min_lp_value: f64::INFINITY,
            worst_sign_pattern: Vec::new(),
            witness_z: None,
        });
    }
    let in_k = {
        let mut mask = vec![false; n];
        for &i in k_set {
            mask[i] = true;
        }
        mask
    };
    let kbar: Vec<usize> = (0..n).filter(|&i| !in_k[i]).collect();
    let scale = h.max_abs().max(1.0);

    let mut best = f64::INFINITY;
    let mut best_pattern: Vec<i8> = Vec::new();
    let mut best_z: Vec<f64> = Vec::new();
    let mut any_feasible = false;

    for mask in 0u64..(1u64 << (k - 1)) {
        let signs: Vec<i8> = (0..k)
            .map(|j| {
                if j == 0 {
                    1
                } else if mask >> (j - 1) & 1 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        let mut c = vec![0.0; h.cols()];
        for (j, &i) in k_set.iter().enumerate() {
            let s = f64::from(signs[j]);
            for (q, cq) in c.iter_mut().enumerate() {
                *cq += s * h.at(i, q);
            }
        }
        if c.iter().fold(0.0_f64, |a, v| a.max(v.abs())) <= 1e-12 * scale {
            // The signed K-rows cancel; this pattern admits no normalized z.
            continue;
        }
        any_feasible = true;
        let (value, z) = constrained_offsupport_min(h, &kbar, &c)?;
        if value < best {
            best = value;
            best_pattern = signs;
            best_z = z;
        }
    }

    if !any_feasible {
        return Err(Error::DegenerateSupport);
    }
    let certified = best > 1.0 + MARGIN;
    let marginal = !certified && best > 1.0 - MARGIN;
    Ok(CertResult {
        support: k_set.to_vec(),
        certified,
        marginal,
        min_lp_value: best,
        worst_sign_pattern: best_pattern,
        witness_z: if certified { None } else { Some(best_z) },
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// LP count for a full size-k sweep over n rows: C(n,k)·2^{k−1}.
pub fn enumeration_cost(n: usize, k: usize) -> u128 {
    if k == 0 {
        0
    } else {
        binomial(n, k) * (1u128 << (k - 1))
    }
}

/// Advances idx to the next size-k combination of {0..n} in lexicographic
/// order; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut p = k;
    loop {
        if p == 0 {
            return false;
        }
        p -= 1;
        if idx[p] != p + n - k {
            break;
        }
        if p == 0 {
            return false;
        }
    }
    idx[p] += 1;
    for q in p + 1..k {
        idx[q] = idx[q - 1] + 1;
    }
    true
}

fn check_sweep_budget(n: usize, k: usize, budget: u128) -> Result<()> {
    if k > n {
        return Err(Error::InvalidSparsity { k, n });
    }
    let required = enumeration_cost(n, k);
    if required > budget {
        return Err(Error::EnumerationLimit {
            required,
            cap: budget,
        });
    }
    Ok(())
}

/// Checks every size-k support in lexicographic order; the first failure
/// (if any) is returned. Enumeration cost C(n,k)·2^{k−1} is bounded by
/// `budget` LPs up front.
pub fn certify_all_supports_with_budget(
    h: &Mat,
    k: usize,
    budget: u128,
) -> Result<(bool, Option<Vec<usize>>)> {
    let n = h.rows();
    if k == 0 {
        return Ok((true, None));
    }
    check_sweep_budget(n, k, budget)?;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let res = certify_support(h, &idx)?;
        if !res.certified {
            return Ok((false, Some(idx)));
        }
        if !next_combination(&mut idx, n) {
            return Ok((true, None));
        }
    }
}

/// Certifies every size-k support without short-circuiting, for reporting.
pub fn certify_report(h: &Mat, k: usize, budget: u128) -> Result<Vec<CertResult>> {
    let n = h.rows();
    if k == 0 {
        return Ok(vec![CertResult {
            support: vec![],
            certified: true,
            marginal: false,
            min_lp_value: f64::INFINITY,
            worst_sign_pattern: vec![],
            witness_z: None,
        }]);
    }
    check_sweep_budget(n, k, budget)?;
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(certify_support(h, &idx)?);
        if !next_combination(&mut idx, n) {
            return Ok(out);
        }
    }
}

pub fn certify_all_supports(h: &Mat, k: usize) -> Result<(bool, Option<Vec<usize>>)> {
    certify_all_supports_with_budget(h, k, DEFAULT_LP_BUDGET)
}

/// Builds the error that defeats decoding from an unbalanced witness:
/// e agrees with Hz on K, so the shifted candidate x + z has residual mass
/// ‖(Hz)_K̄‖₁ ≤ ‖(Hz)_K‖₁ = ‖e‖₁, tying or beating the true x.
pub fn adversarial_error(h: &Mat, k_set: &[usize], z: &[f64]) -> Result<SparseVector> {
    let margin = balancedness_margin(h, k_set, z)?;
    if margin > 0.0 {
        return Err(Error::InvalidWitness { margin });
    }
    let hz = h.matvec(z);
    let pairs: Vec<(usize, f64)> = k_set.iter().map(|&i| (i, hz[i])).collect();
    SparseVector::new(h.rows(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lad::objective;
    use crate::rng::SplitMix64;
    use crate::signal::{build_matrix, generate_sequence};

    fn two_row() -> Mat {
        Mat::column_vector(&[1.0, 3.0])
    }

    #[test]
    fn margin_hand_values() {
        let h = two_row();
        assert_eq!(balancedness_margin(&h, &[0], &[1.0]).unwrap(), 2.0);
        assert_eq!(balancedness_margin(&h, &[1], &[1.0]).unwrap(), -2.0);
        assert_eq!(balancedness_margin(&h, &[], &[1.0]).unwrap(), 4.0);
        assert!(matches!(
            balancedness_margin(&h, &[0], &[0.0]),
            Err(Error::InvalidInput(_))
        ));
        assert!(balancedness_margin(&h, &[0, 0], &[1.0]).is_err());
    }

    #[test]
    fn certify_hand_instance() {
        let h = two_row();
        let good = certify_support(&h, &[0]).unwrap();
        assert!(good.certified);
        assert!(!good.marginal);
        assert!((good.min_lp_value - 3.0).abs() < 1e-9);
        assert!(good.witness_z.is_none());

        let bad = certify_support(&h, &[1]).unwrap();
        assert!(!bad.certified);
        assert!((bad.min_lp_value - 1.0 / 3.0).abs() < 1e-9);
        let z = bad.witness_z.unwrap();
        assert!(balancedness_margin(&h, &[1], &z).unwrap() <= 0.0);

        let empty = certify_support(&h, &[]).unwrap();
        assert!(empty.certified);
        assert_eq!(empty.min_lp_value, f64::INFINITY);
    }

    #[test]
    fn certify_all_finds_first_failure() {
        let h = two_row();
        let (ok, failing) = certify_all_supports(&h, 1).unwrap();
        assert!(!ok);
        assert_eq!(failing.unwrap(), vec![1]);
        assert_eq!(certify_all_supports(&h, 0).unwrap(), (true, None));
    }

    #[test]
    fn budget_is_enforced() {
        let seq = generate_sequence(20, 2, 0).unwrap();
        let h = build_matrix(seq).to_dense();
        match certify_all_supports_with_budget(&h, 5, 1000) {
            Err(Error::EnumerationLimit { required, cap }) => {
                assert_eq!(cap, 1000);
                assert_eq!(required, 15504 * 16);
            }
            other => panic!("expected enumeration limit, got {other:?}"),
        }
    }

    #[test]
    fn oversize_support_rejected() {
        let seq = generate_sequence(30, 1, 5).unwrap();
        let h = build_matrix(seq).to_dense();
        let k: Vec<usize> = (0..21).collect();
        assert!(matches!(
            certify_support(&h, &k),
            Err(Error::EnumerationLimit { .. })
        ));
    }

    #[test]
    fn adversarial_error_hand_instance() {
        let h = two_row();
        let e = adversarial_error(&h, &[1], &[1.0]).unwrap();
        assert_eq!(e.to_dense(), vec![0.0, 3.0]);
        // With x = 2: y = Hx + e; the shifted candidate x + z wins.
        let x = 2.0;
        let y: Vec<f64> = vec![x + 0.0, 3.0 * x + 3.0];
        let at_truth = objective(&h, &y, &[x]).unwrap();
        let at_shift = objective(&h, &y, &[x + 1.0]).unwrap();
        assert_eq!(at_truth, 3.0);
        assert_eq!(at_shift, 1.0);

        // Certified support refuses to produce a witness error.
        assert!(matches!(
            adversarial_error(&h, &[0], &[1.0]),
            Err(Error::InvalidWitness { margin }) if margin > 0.0
        ));
    }

    #[test]
    fn adversarial_error_scales_homogeneously() {
        let h = two_row();
        let e1 = adversarial_error(&h, &[1], &[1.0]).unwrap();
        let e3 = adversarial_error(&h, &[1], &[3.0]).unwrap();
        for (a, b) in e1.values().iter().zip(e3.values()) {
            assert!((3.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn certification_matches_decoding_on_small_gaussian() {
        let seq = generate_sequence(8, 1, 31).unwrap();
        let h = build_matrix(seq).to_dense();
        let mut rng = SplitMix64::new(123);
        for i in 0..8 {
            let res = certify_support(&h, &[i]).unwrap();
            let mut all_recovered = true;
            for _ in 0..10 {
                let x = vec![rng.next_standard_normal() * 2.0];
                let mut y = h.matvec(&x);
                y[i] += 10.0 * rng.next_standard_normal();
                let sol = solve_lad(&h, &y, LadOptions::default()).unwrap();
                if (sol.x_hat[0] - x[0]).abs() > 1e-8 {
                    all_recovered = false;
                }
            }
            assert_eq!(
                res.certified, all_recovered,
                "support {{{i}}}: certified={} recovered={}",
                res.certified, all_recovered
            );
            if !res.certified {
                let z = res.witness_z.as_ref().unwrap();
                let e = adversarial_error(&h, &[i], z).unwrap();
                let x = vec![1.0];
                let y: Vec<f64> = h
                    .matvec(&x)
                    .iter()
                    .zip(e.to_dense())
                    .map(|(a, b)| a + b)
                    .collect();
                let shifted: Vec<f64> = vec![x[0] + z[0]];
                assert!(
                    objective(&h, &y, &shifted).unwrap() <= objective(&h, &y, &x).unwrap() + 1e-9
                );
            }
        }
    }

    #[test]
    fn failure_is_monotone_in_support() {
        // Scan a few instances; m = 2 over 6 rows leaves little slack, so
        // failing singletons show up. Every superset of one must fail too.
        let n = 6;
        let mut checked = 0;
        for seed in 0..20 {
            let seq = generate_sequence(n, 2, seed).unwrap();
            let h = build_matrix(seq).to_dense();
            for i in 0..n {
                if certify_support(&h, &[i]).unwrap().certified {
                    continue;
                }
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let sup = if i < j { vec![i, j] } else { vec![j, i] };
                    let res = certify_support(&h, &sup).unwrap();
                    assert!(
                        !res.certified,
                        "seed {seed}: superset {sup:?} of failing {{{i}}}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 0, "no failing singleton in the scanned instances");
    }

    #[test]
    fn verdict_is_scale_invariant() {
        let seq = generate_sequence(10, 2, 3).unwrap();
        let h = build_matrix(seq).to_dense();
        let hc = Mat::from_fn(10, 2, |i, j| 3.7 * h.at(i, j));
        for i in 0..10 {
            let a = certify_support(&h, &[i]).unwrap();
            let b = certify_support(&hc, &[i]).unwrap();
            assert_eq!(a.certified, b.certified);
            assert!((a.min_lp_value - b.min_lp_value).abs() < 1e-8);
        }
    }

    #[test]
    fn witness_satisfies_mass_inequality() {
        let seq = generate_sequence(9, 2, 11).unwrap();
        let h = build_matrix(seq).to_dense();
        for i in 0..9 {
            for j in i + 1..9 {
                let res = certify_support(&h, &[i, j]).unwrap();
                if let Some(z) = res.witness_z {
                    let hz = h.matvec(&z);
                    let inside = hz[i].abs() + hz[j].abs();
                    let outside: f64 = (0..9)
                        .filter(|&q| q != i && q != j)
                        .map(|q| hz[q].abs())
                        .sum();
                    assert!(
                        inside >= outside - 2e-8 * (1.0 + outside),
                        "K={{{i},{j}}}: inside {inside} outside {outside}"
                    );
                }
            }
        }
    }
}
