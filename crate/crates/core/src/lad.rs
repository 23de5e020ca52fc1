//! Exact least-absolute-deviation regression: min_x ‖y − Hx‖₁.
//!
//! The minimization is the linear program min 1ᵀu + 1ᵀw over Hx + u − w = y,
//! u, w ≥ 0, and the solver is its revised simplex specialized to residual
//! space. A state is a basis B of m rows with H_B invertible (so x = H_B⁻¹y_B)
//! together with a sign s_i ∈ {−1, +1} for every nonbasic row: the sign of
//! its residual when nonzero. Rows whose residual sits at zero take the sign
//! they would have in the perturbed problem y_i → y_i + ε^{i+1} (ε → 0⁺),
//! which is read off the first surviving term of the perturbation expansion;
//! the perturbed problem is nondegenerate, so these signs are canonical per
//! basis and need no persistent bookkeeping. The reduced gradient is
//! t = H_B⁻ᵀ Hᵀs; the state is optimal when ‖t‖∞ ≤ 1, since s_{b_j} = −t_j
//! then extends s to a dual vector with Hᵀs = 0, which certifies the point
//! even when more than m residuals vanish. Otherwise the largest |t_j| > 1
//! gives a ray x + step·σd_j (σ = sign t_j, d_j = H_B⁻¹e_j) along which the
//! objective is piecewise linear, and a long step walks the breakpoints of
//! the blocking rows (those whose sign opposes the ray) until the slope
//! turns nonnegative; the stopping row replaces b_j.
//!
//! Zero-residual blockers break at step 0 and are walked in the order of
//! their perturbed breakpoints, compared lexicographically by perturbation
//! coefficient. Every pivot then strictly lowers the perturbed objective,
//! so no state repeats and degenerate vertices cannot cycle, while the
//! entering rule keeps plain steepest-coordinate speed.

use crate::error::{Error, Result};
use crate::mat::{l1_norm, linf_norm, select_row_basis, LuFactors, Mat};

#[derive(Clone, Copy, Debug)]
pub struct LadOptions {
    /// Certificate/optimality tolerance on the reduced gradient.
    pub tol: f64,
    /// Pivot threshold for factorization and basis swaps.
    pub pivot_tol: f64,
    /// Pivot cap; `None` means 50·(n+m).
    pub max_iters: Option<usize>,
}

impl Default for LadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            pivot_tol: 1e-11,
            max_iters: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LadSolution {
    pub x_hat: Vec<f64>,
    pub objective: f64,
    pub residual: Vec<f64>,
    pub zero_residual_count: usize,
    pub iterations: usize,
    pub degenerate: bool,
}

#[derive(Clone, Debug)]
pub struct OptimalityCertificate {
    /// Dual vector s with s_i ∈ [−1, 1], matching residual signs on
    /// nonzero residuals.
    pub dual_signs: Vec<f64>,
    /// ‖Hᵀs‖∞ for the returned s.
    pub gradient_norm: f64,
    pub tol: f64,
    pub valid: bool,
}

pub fn objective(h: &Mat, y: &[f64], x: &[f64]) -> Result<f64> {
    if y.len() != h.rows() || x.len() != h.cols() {
        return Err(Error::InvalidDimension(format!(
            "objective: H is {}x{}, y has {}, x has {}",
            h.rows(),
            h.cols(),
            y.len(),
            x.len()
        )));
    }
    let hx = h.matvec(x);
    Ok(y.iter().zip(&hx).map(|(a, b)| (a - b).abs()).sum())
}

#[inline]
fn sgn(v: f64, tol: f64) -> f64 {
    if v > tol {
        1.0
    } else if v < -tol {
        -1.0
    } else {
        0.0
    }
}

struct Vertex {
    x: Vec<f64>,
    residual: Vec<f64>,
    objective: f64,
    zero_count: usize,
}

fn vertex_state(h: &Mat, y: &[f64], basis: &[usize], lu: &LuFactors, res_tol: f64) -> Vertex {
    let y_b: Vec<f64> = basis.iter().map(|&i| y[i]).collect();
    let x = lu.solve(&y_b);
    let hx = h.matvec(&x);
    let mut residual: Vec<f64> = y.iter().zip(&hx).map(|(a, b)| a - b).collect();
    for &i in basis {
        residual[i] = 0.0;
    }
    let objective = l1_norm(&residual);
    let zero_count = residual.iter().filter(|r| r.abs() <= res_tol).count();
    Vertex {
        x,
        residual,
        objective,
        zero_count,
    }
}

pub fn solve_lad(h: &Mat, y: &[f64], opts: LadOptions) -> Result<LadSolution> {
    let (n, m) = (h.rows(), h.cols());
    if y.len() != n {
        return Err(Error::InvalidDimension(format!(
            "solve_lad: H has {n} rows but y has {}",
            y.len()
        )));
    }
    if n < m || m == 0 {
        return Err(Error::InvalidDimension(format!(
            "solve_lad: need n >= m >= 1, got {n}x{m}"
        )));
    }
    let max_iters = opts.max_iters.unwrap_or(50 * (n + m));
    let res_tol = opts.pivot_tol * y.iter().fold(1.0_f64, |a, v| a.max(v.abs()));

    let mut basis = select_row_basis(h, opts.pivot_tol)?;
    let mut in_basis = vec![false; n];
    for &i in &basis {
        in_basis[i] = true;
    }

    let mut iterations = 0usize;

    loop {
        let hb = h.select_rows(&basis);
        let lu = LuFactors::factor(&hb, opts.pivot_tol).map_err(|_| Error::RankDeficient)?;
        let v = vertex_state(h, y, &basis, &lu, res_tol);

        // Signs of the nonbasic residuals; zero-residual rows take their
        // perturbed sign, for which the expansion coefficients w = H_B⁻ᵀ hᵢ
        // are kept for the ratio-test ordering below.
        let mut s_full = vec![0.0; n];
        let mut zero_w: Vec<Option<Vec<f64>>> = vec![None; n];
        for i in 0..n {
            if in_basis[i] {
                continue;
            }
            let sg = sgn(v.residual[i], res_tol);
            if sg != 0.0 {
                s_full[i] = sg;
            } else {
                let w = lu.solve_transposed(h.row(i));
                let w_tol = opts.pivot_tol * (1.0 + linf_norm(&w));
                s_full[i] = perturbed_zero_sign(i, &w, &basis, w_tol);
                zero_w[i] = Some(w);
            }
        }
        let g = h.t_matvec(&s_full);
        let t = lu.solve_transposed(&g);
        let tmax = linf_norm(&t);

        if tmax <= 1.0 + opts.tol {
            return Ok(finish(v, iterations, m, tmax, opts.tol));
        }
        if iterations >= max_iters {
            let best = finish(v, iterations, m, tmax, opts.tol);
            return Err(Error::NonConvergence {
                iterations,
                best: Box::new(best),
            });
        }
        iterations += 1;

        // Entering coordinate: largest reduced-gradient violation.
        let mut j_star = usize::MAX;
        let mut best = 1.0 + opts.tol;
        for (j, tj) in t.iter().enumerate() {
            if tj.abs() > best {
                best = tj.abs();
                j_star = j;
            }
        }
        debug_assert!(j_star != usize::MAX);
        let sigma = if t[j_star] > 0.0 { 1.0 } else { -1.0 };

        // Ray direction in residual space: v_dir = H · (H_B⁻¹ e_j), which is
        // 1 on row basis[j_star] and 0 on the other basis rows.
        let mut e_j = vec![0.0; m];
        e_j[j_star] = 1.0;
        let d = lu.solve(&e_j);
        let v_dir = h.matvec(&d);
        let v_eps = opts.pivot_tol * linf_norm(&v_dir).max(1.0);

        // Breakpoints along x + step·σ·d, step ≥ 0: a nonbasic row blocks
        // when its sign opposes the ray there. Zero-residual blockers break
        // at step 0 and are ordered by their perturbed breakpoints.
        let mut zero_blockers: Vec<usize> = Vec::new();
        let mut crossings: Vec<(f64, usize, f64)> = Vec::new();
        for i in 0..n {
            if in_basis[i] {
                continue;
            }
            let vi = v_dir[i];
            if vi.abs() <= v_eps || s_full[i] * sigma * vi <= 0.0 {
                continue;
            }
            if zero_w[i].is_some() {
                zero_blockers.push(i);
            } else {
                crossings.push(((v.residual[i] / (sigma * vi)).max(0.0), i, vi.abs()));
            }
        }
        let mut zero_polys: Vec<(usize, Vec<(usize, f64)>)> = zero_blockers
            .iter()
            .map(|&i| {
                (
                    i,
                    ratio_poly(i, zero_w[i].as_ref().unwrap(), &basis, sigma * v_dir[i]),
                )
            })
            .collect();
        zero_polys.sort_by(|a, b| cmp_poly(&a.1, &b.1).then(a.0.cmp(&b.0)));
        let zero_blockers: Vec<usize> = zero_polys.iter().map(|p| p.0).collect();
        crossings.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());

        // Long step: pass breakpoints while the slope stays negative.
        let mut slope = 1.0 - t[j_star].abs();
        let mut leaving = None;
        for &i in zero_blockers.iter().chain(crossings.iter().map(|c| &c.1)) {
            slope += 2.0 * v_dir[i].abs();
            if slope >= 0.0 {
                leaving = Some(i);
                break;
            }
        }
        let leaving = match leaving {
            Some(i) => i,
            None => {
                // A descent ray every blocker lets through cannot happen for
                // full-column-rank H; surface the best iterate.
                let best = finish(v, iterations, m, tmax, opts.tol);
                return Err(Error::NonConvergence {
                    iterations,
                    best: Box::new(best),
                });
            }
        };

        in_basis[basis[j_star]] = false;
        in_basis[leaving] = true;
        basis[j_star] = leaving;
    }
}

/// Sign a zero-residual nonbasic row takes under y_i → y_i + ε^{i+1}:
/// its perturbed residual is ε^{i+1} − Σ_l w_l ε^{b_l+1}, so the smallest
/// surviving exponent decides the sign.
fn perturbed_zero_sign(i: usize, w: &[f64], basis: &[usize], w_tol: f64) -> f64 {
    let mut arg = i;
    let mut sign = 1.0;
    for (l, &b) in basis.iter().enumerate() {
        if b < arg && w[l].abs() > w_tol {
            arg = b;
            sign = if w[l] > 0.0 { -1.0 } else { 1.0 };
        }
    }
    sign
}

/// Perturbation expansion of a zero row's breakpoint along the ray, as
/// (exponent, coefficient) pairs in exponent order.
fn ratio_poly(i: usize, w: &[f64], basis: &[usize], sv: f64) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push((i, 1.0 / sv));
    for (l, &b) in basis.iter().enumerate() {
        if w[l] != 0.0 {
            out.push((b, -w[l] / sv));
        }
    }
    out.sort_by_key(|p| p.0);
    out
}

/// Orders two perturbation expansions as ε → 0⁺: the first exponent whose
/// coefficients differ decides.
fn cmp_poly(a: &[(usize, f64)], b: &[(usize, f64)]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let (mut ia, mut ib) = (0usize, 0usize);
    loop {
        match (a.get(ia), b.get(ib)) {
            (None, None) => return Ordering::Equal,
            (Some(&(_, ca)), None) => {
                if ca != 0.0 {
                    return ca.partial_cmp(&0.0).unwrap();
                }
                ia += 1;
            }
            (None, Some(&(_, cb))) => {
                if cb != 0.0 {
                    return 0.0.partial_cmp(&cb).unwrap();
                }
                ib += 1;
            }
            (Some(&(ea, ca)), Some(&(eb, cb))) => {
                let (va, vb) = if ea < eb {
                    (ca, 0.0)
                } else if eb < ea {
                    (0.0, cb)
                } else {
                    (ca, cb)
                };
                if (va - vb).abs() > 1e-12 * (1.0 + va.abs().max(vb.abs())) {
                    return va.partial_cmp(&vb).unwrap();
                }
                if ea <= eb {
                    ia += 1;
                }
                if eb <= ea {
                    ib += 1;
                }
            }
        }
    }
}

fn finish(v: Vertex, iterations: usize, m: usize, tmax: f64, tol: f64) -> LadSolution {
    let degenerate = v.zero_count > m || tmax >= 1.0 - 10.0 * tol;
    LadSolution {
        x_hat: v.x,
        objective: v.objective,
        residual: v.residual,
        zero_residual_count: v.zero_count,
        iterations,
        degenerate,
    }
}

/// Verifies optimality of `x_hat` by constructing a dual vector s:
/// s_i = sign(r_i) on nonzero residuals; on (near-)zero residuals s is free
/// in [−1, 1] and is chosen to drive Hᵀs to zero. The returned verdict is
/// checked by direct arithmetic on s, so a `valid = true` answer is a
/// machine-checkable proof of global optimality.
pub fn check_optimality(h: &Mat, y: &[f64], x_hat: &[f64], tol: f64) -> OptimalityCertificate {
    let (n, m) = (h.rows(), h.cols());
    assert_eq!(y.len(), n);
    assert_eq!(x_hat.len(), m);
    let hx = h.matvec(x_hat);
    let r: Vec<f64> = y.iter().zip(&hx).map(|(a, b)| a - b).collect();
    let scale = y
        .iter()
        .chain(r.iter())
        .fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let ztol = tol * scale;

    let zero_rows: Vec<usize> = (0..n).filter(|&i| r[i].abs() <= ztol).collect();
    let mut s = vec![0.0; n];
    for i in 0..n {
        if r[i].abs() > ztol {
            s[i] = if r[i] > 0.0 { 1.0 } else { -1.0 };
        }
    }
    // Gradient contribution of the fixed signs.
    let g = h.t_matvec(&s);

    if !zero_rows.is_empty() && linf_norm(&g) > tol {
        let hz = h.select_rows(&zero_rows);
        let free = solve_free_signs(&hz, &g, tol);
        for (pos, &i) in zero_rows.iter().enumerate() {
            s[i] = free[pos].clamp(-1.0, 1.0);
        }
    }

    let grad = h.t_matvec(&s);
    let gradient_norm = linf_norm(&grad);
    let box_ok = s.iter().all(|v| v.abs() <= 1.0);
    let signs_ok = (0..n).all(|i| {
        if r[i].abs() > ztol {
            s[i] == if r[i] > 0.0 { 1.0 } else { -1.0 }
        } else {
            true
        }
    });
    OptimalityCertificate {
        dual_signs: s,
        gradient_norm,
        tol,
        valid: box_ok && signs_ok && gradient_norm <= tol,
    }
}

/// Finds u with ‖H_Zᵀ u + g‖∞ small and u ∈ [−1,1]^|Z| when such u exists.
/// Square case solves directly; otherwise the box-constrained feasibility
/// problem is rewritten as an unconstrained ℓ₁ fit with an exact penalty
/// M·max(|u_i|, 1) per coordinate (M beats the Lipschitz constant of the
/// data term, so any box-interior solution stays exactly inside the box).
fn solve_free_signs(hz: &Mat, g: &[f64], tol: f64) -> Vec<f64> {
    let (z, m) = (hz.rows(), hz.cols());
    debug_assert_eq!(g.len(), m);
    if z == m {
        if let Ok(lu) = LuFactors::factor(hz, 1e-13) {
            let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
            let u = lu.solve_transposed(&neg_g);
            if u.iter().all(|v| v.abs() <= 1.0 + tol) {
                return u;
            }
        }
    }
    // Stacked system: rows H_Zᵀ fit −g, then two (M/2)·I blocks pinning u
    // toward the box via (M/2)(|u−1| + |u+1|) = M·max(|u|, 1).
    let m_pen = {
        let mut worst = 0.0_f64;
        for i in 0..z {
            let mut col = 0.0;
            for j in 0..m {
                col += hz.at(i, j).abs();
            }
            worst = worst.max(col);
        }
        2.0 * worst + 1.0
    };
    let half = 0.5 * m_pen;
    let rows = m + 2 * z;
    let a = Mat::from_fn(rows, z, |i, j| {
        if i < m {
            hz.at(j, i)
        } else if i < m + z {
            if i - m == j {
                half
            } else {
                0.0
            }
        } else if i - m - z == j {
            half
        } else {
            0.0
        }
    });
    let mut rhs = vec![0.0; rows];
    for i in 0..m {
        rhs[i] = -g[i];
    }
    for i in 0..z {
        rhs[m + i] = half;
        rhs[m + z + i] = -half;
    }
    match solve_lad(&a, &rhs, LadOptions::default()) {
        Ok(sol) => sol.x_hat,
        Err(Error::NonConvergence { best, .. }) => best.x_hat,
        Err(_) => vec![0.0; z],
    }
}
