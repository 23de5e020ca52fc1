//! Dense row-major matrices and the small LU kernel used by the solvers.
//!
//! Problem sizes here are desk scale (n up to a few thousand rows, m up to a
//! few tens of columns), so a plain `Vec<f64>` backing with explicit loops is
//! both simpler and faster than pulling in a linear algebra stack.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Single-column matrix from a slice.
    pub fn column_vector(v: &[f64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = 0.0;
            for (r, v) in row.iter().zip(x) {
                acc += r * v;
            }
            *o = acc;
        }
        out
    }

    /// y = Aᵀ s.
    pub fn t_matvec(&self, s: &[f64]) -> Vec<f64> {
        assert_eq!(s.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &si) in s.iter().enumerate() {
            if si == 0.0 {
                continue;
            }
            let row = self.row(i);
            for (o, r) in out.iter_mut().zip(row) {
                *o += si * r;
            }
        }
        out
    }

    /// Submatrix formed by the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

/// LU factorization with partial pivoting of a square matrix (LAPACK-style
/// in-place storage: unit-lower L below the diagonal, U on and above it).
pub struct LuFactors {
    m: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
}

impl LuFactors {
    /// Factors `a` (consumed as a dense m×m row-major buffer). Fails when a
    /// pivot falls below `tol` times the largest initial entry.
    pub fn factor(a: &Mat, tol: f64) -> Result<Self> {
        assert_eq!(a.rows, a.cols, "LU expects a square matrix");
        let m = a.rows;
        let mut lu = a.data.clone();
        let mut piv = vec![0usize; m];
        let scale = a.max_abs();
        if m > 0 && scale == 0.0 {
            return Err(Error::RankDeficient);
        }
        for k in 0..m {
            let mut p = k;
            let mut best = lu[k * m + k].abs();
            for i in (k + 1)..m {
                let v = lu[i * m + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tol * scale {
                return Err(Error::RankDeficient);
            }
            piv[k] = p;
            if p != k {
                for j in 0..m {
                    lu.swap(k * m + j, p * m + j);
                }
            }
            let pivot = lu[k * m + k];
            for i in (k + 1)..m {
                let l = lu[i * m + k] / pivot;
                lu[i * m + k] = l;
                if l != 0.0 {
                    for j in (k + 1)..m {
                        lu[i * m + j] -= l * lu[k * m + j];
                    }
                }
            }
        }
        Ok(Self { m, lu, piv })
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut x = b.to_vec();
        for k in 0..m {
            x.swap(k, self.piv[k]);
        }
        for i in 1..m {
            let mut acc = x[i];
            for (l, v) in self.lu[i * m..i * m + i].iter().zip(&x) {
                acc -= l * v;
            }
            x[i] = acc;
        }
        for i in (0..m).rev() {
            let mut acc = x[i];
            for (l, v) in self.lu[i * m + i + 1..(i + 1) * m].iter().zip(&x[i + 1..]) {
                acc -= l * v;
            }
            x[i] = acc / self.lu[i * m + i];
        }
        x
    }

    /// Solves Aᵀ x = b.
    pub fn solve_transposed(&self, b: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut x = b.to_vec();
        // Uᵀ w = b (forward substitution).
        for i in 0..m {
            let mut acc = x[i];
            for (j, v) in x[..i].iter().enumerate() {
                acc -= self.lu[j * m + i] * v;
            }
            x[i] = acc / self.lu[i * m + i];
        }
        // Lᵀ u = w (backward substitution, unit diagonal).
        for i in (0..m).rev() {
            let mut acc = x[i];
            for (j, v) in x.iter().enumerate().skip(i + 1) {
                acc -= self.lu[j * m + i] * v;
            }
            x[i] = acc;
        }
        // Undo the row swaps.
        for k in (0..m).rev() {
            x.swap(k, self.piv[k]);
        }
        x
    }
}

/// Picks `cols` linearly independent rows of `h` by Gaussian elimination with
/// greedy row pivoting. Returns their indices in pivot order.
pub fn select_row_basis(h: &Mat, tol: f64) -> Result<Vec<usize>> {
    let (n, m) = (h.rows, h.cols);
    if n < m {
        return Err(Error::InvalidDimension(format!(
            "need at least as many rows as columns, got {n}x{m}"
        )));
    }
    let scale = h.max_abs();
    if m > 0 && scale == 0.0 {
        return Err(Error::RankDeficient);
    }
    let mut work = h.data.clone();
    let mut used = vec![false; n];
    let mut basis = Vec::with_capacity(m);
    for j in 0..m {
        let mut p = usize::MAX;
        let mut best = 0.0;
        for i in 0..n {
            if !used[i] {
                let v = work[i * m + j].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
        }
        if p == usize::MAX || best <= tol * scale {
            return Err(Error::RankDeficient);
        }
        used[p] = true;
        basis.push(p);
        let pivot = work[p * m + j];
        for i in 0..n {
            if !used[i] {
                let f = work[i * m + j] / pivot;
                if f != 0.0 {
                    for q in j..m {
                        work[i * m + q] -= f * work[p * m + q];
                    }
                }
            }
        }
    }
    Ok(basis)
}

/// Indices of a maximal linearly independent column subset of `a`.
pub fn independent_columns(a: &Mat, tol: f64) -> Vec<usize> {
    let (n, m) = (a.rows, a.cols);
    let scale = a.max_abs();
    if scale == 0.0 {
        return Vec::new();
    }
    let mut work = a.data.clone();
    let mut kept = Vec::new();
    let mut pivot_row_used = vec![false; n];
    for j in 0..m {
        let mut p = usize::MAX;
        let mut best = 0.0;
        for i in 0..n {
            if !pivot_row_used[i] {
                let v = work[i * m + j].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
        }
        if p == usize::MAX || best <= tol * scale {
            continue;
        }
        kept.push(j);
        pivot_row_used[p] = true;
        let pivot = work[p * m + j];
        for i in 0..n {
            if !pivot_row_used[i] {
                let f = work[i * m + j] / pivot;
                if f != 0.0 {
                    for q in j..m {
                        work[i * m + q] -= f * work[p * m + q];
                    }
                }
            }
        }
    }
    kept
}

pub fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn linf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}
