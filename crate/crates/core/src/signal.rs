//! Observation model: structured matrix, sparse outliers, dense noise.
//!
//! The observation is `y = Hx + e + w`. `H` is an n×m matrix filled from one
//! Gaussian sequence of length n+m−1: row i is the contiguous window
//! `seq[i..i+m]`, so entries are constant along anti-diagonals. `e` has at
//! most k nonzero entries of arbitrary size; `w` is i.i.d. noise from one of
//! a small set of families with matched second moments.
//!
//! All indices in this module and in the serialized instance format are
//! 0-based.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::rng::SplitMix64;

/// A reproducible i.i.d. standard normal sequence of length n+m−1.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussSequence {
    values: Vec<f64>,
    n: usize,
    m: usize,
    seed: u64,
}

impl GaussSequence {
    pub fn generate(n: usize, m: usize, seed: u64) -> Result<Self> {
        check_dims(n, m)?;
        let mut rng = SplitMix64::new(seed);
        let values = (0..n + m - 1).map(|_| rng.next_standard_normal()).collect();
        Ok(Self { values, n, m, seed })
    }

    /// Rebuilds a sequence from stored values (instance replay).
    pub fn from_values(values: Vec<f64>, n: usize, m: usize, seed: u64) -> Result<Self> {
        check_dims(n, m)?;
        if values.len() != n + m - 1 {
            return Err(Error::InvalidDimension(format!(
                "sequence length {} does not match n+m-1 = {}",
                values.len(),
                n + m - 1
            )));
        }
        Ok(Self { values, n, m, seed })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if m < 1 || n < m {
        return Err(Error::InvalidDimension(format!(
            "need n >= m >= 1, got n={n}, m={m}"
        )));
    }
    Ok(())
}

/// The window matrix over a [`GaussSequence`]: n+m−1 storage cells backing
/// n·m logical entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzMatrix {
    seq: GaussSequence,
}

impl ToeplitzMatrix {
    pub fn build(seq: GaussSequence) -> Self {
        Self { seq }
    }

    pub fn rows(&self) -> usize {
        self.seq.n
    }

    pub fn cols(&self) -> usize {
        self.seq.m
    }

    pub fn seq(&self) -> &GaussSequence {
        &self.seq
    }

    /// entry(i, j) = seq[i + j], 0-based. Constant along anti-diagonals.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows() && j < self.cols());
        self.seq.values[i + j]
    }

    pub fn to_dense(&self) -> Mat {
        Mat::from_fn(self.rows(), self.cols(), |i, j| self.entry(i, j))
    }

    /// Dense form with each row reversed (a column permutation), which turns
    /// anti-diagonal constancy into the classical diagonal-constant layout.
    /// ℓ₁ recovery behavior is invariant under this permutation.
    pub fn to_dense_row_reversed(&self) -> Mat {
        let m = self.cols();
        Mat::from_fn(self.rows(), m, |i, j| self.entry(i, m - 1 - j))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols());
        let m = self.cols();
        let mut out = vec![0.0; self.rows()];
        for (i, o) in out.iter_mut().enumerate() {
            let win = &self.seq.values[i..i + m];
            let mut acc = 0.0;
            for (w, v) in win.iter().zip(x) {
                acc += w * v;
            }
            *o = acc;
        }
        out
    }
}

/// Sparse vector with sorted, distinct, 0-based support.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVector {
    length: usize,
    support: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zero(length: usize) -> Self {
        Self {
            length,
            support: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn new(length: usize, mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(format!(
                    "duplicate sparse index {}",
                    w[0].0
                )));
            }
        }
        if let Some(&(last, _)) = pairs.last() {
            if last >= length {
                return Err(Error::InvalidInput(format!(
                    "sparse index {last} out of range for length {length}"
                )));
            }
        }
        let (support, values) = pairs.into_iter().unzip();
        Ok(Self {
            length,
            support,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        match self.support.binary_search(&i) {
            Ok(pos) => self.values[pos],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.length];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }
}

/// Noise families with closed-form second moments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseFamily {
    None,
    /// N(0, σ²).
    Gaussian {
        sigma: f64,
    },
    /// Exponential with the given mean.
    Exponential {
        mean: f64,
    },
    /// Gamma with shape 2 (Erlang-2): sum of two exponentials of the given
    /// scale, so no rejection loop is involved.
    GammaShape2 {
        scale: f64,
    },
}

impl NoiseFamily {
    pub fn second_moment(&self) -> f64 {
        match *self {
            NoiseFamily::None => 0.0,
            NoiseFamily::Gaussian { sigma } => sigma * sigma,
            NoiseFamily::Exponential { mean } => 2.0 * mean * mean,
            NoiseFamily::GammaShape2 { scale } => 6.0 * scale * scale,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseFamily::None => "none",
            NoiseFamily::Gaussian { .. } => "gaussian",
            NoiseFamily::Exponential { .. } => "exponential",
            NoiseFamily::GammaShape2 { .. } => "gamma_shape2",
        }
    }

    /// Builds a family from a CLI-style name and one parameter
    /// (σ / mean / scale; ignored for "none").
    pub fn from_name_param(name: &str, param: f64) -> Result<Self> {
        let fam = match name {
            "none" => return Ok(NoiseFamily::None),
            "gaussian" => NoiseFamily::Gaussian { sigma: param },
            "exponential" => NoiseFamily::Exponential { mean: param },
            "gamma" | "gamma_shape2" => NoiseFamily::GammaShape2 { scale: param },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown noise family '{other}' (expected none, gaussian, exponential, gamma_shape2)"
                )))
            }
        };
        if !(param.is_finite() && param > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise parameter must be positive, got {param}"
            )));
        }
        Ok(fam)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub family: NoiseFamily,
    pub seed: u64,
}

/// One fully assembled observation `y = Hx + e + w`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub h: ToeplitzMatrix,
    pub x: Vec<f64>,
    pub e: SparseVector,
    pub w: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn generate_sequence(n: usize, m: usize, seed: u64) -> Result<GaussSequence> {
    GaussSequence::generate(n, m, seed)
}

pub fn build_matrix(seq: GaussSequence) -> ToeplitzMatrix {
    ToeplitzMatrix::build(seq)
}

/// Uniform-without-replacement support, i.i.d. N(0, magnitude_sigma²) values.
pub fn sample_outliers(
    n: usize,
    k: usize,
    magnitude_sigma: f64,
    seed: u64,
) -> Result<SparseVector> {
    if k > n {
        return Err(Error::InvalidSparsity { k, n });
    }
    if !(magnitude_sigma.is_finite() && magnitude_sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "outlier magnitude must be positive, got {magnitude_sigma}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let support = rng.sample_indices(n, k);
    let values = support
        .iter()
        .map(|_| magnitude_sigma * rng.next_standard_normal())
        .collect();
    Ok(SparseVector {
        length: n,
        support,
        values,
    })
}

pub fn sample_noise(n: usize, spec: NoiseSpec) -> Vec<f64> {
    let mut rng = SplitMix64::new(spec.seed);
    match spec.family {
        NoiseFamily::None => vec![0.0; n],
        NoiseFamily::Gaussian { sigma } => {
            (0..n).map(|_| sigma * rng.next_standard_normal()).collect()
        }
        NoiseFamily::Exponential { mean } => (0..n).map(|_| rng.next_exponential(mean)).collect(),
        NoiseFamily::GammaShape2 { scale } => {
            (0..n).map(|_| rng.next_gamma_shape2(scale)).collect()
        }
    }
}

pub fn observe(
    h: ToeplitzMatrix,
    x: Vec<f64>,
    e: SparseVector,
    w: Vec<f64>,
) -> Result<ProblemInstance> {
    let (n, m) = (h.rows(), h.cols());
    if x.len() != m || e.len() != n || w.len() != n {
        return Err(Error::InvalidDimension(format!(
            "observe: H is {n}x{m} but x has {} entries, e {}, w {}",
            x.len(),
            e.len(),
            w.len()
        )));
    }
    let hx = h.matvec(&x);
    let e_dense = e.to_dense();
    let y = (0..n).map(|i| hx[i] + e_dense[i] + w[i]).collect();
    Ok(ProblemInstance { h, x, e, w, y })
}

fn fmt_floats(v: &[f64]) -> String {
    let mut s = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&format!("{x}"));
    }
    s
}

/// Serializes an instance to the line-oriented replay format:
/// `n m seed`, sequence, x, e as `index:value` pairs, w, y.
/// Floats use shortest-roundtrip formatting, so replay is bit-exact.
pub fn format_instance(inst: &ProblemInstance) -> String {
    let seq = inst.h.seq();
    let e_line = inst
        .e
        .support()
        .iter()
        .zip(inst.e.values())
        .map(|(i, v)| format!("{i}:{v}"))
        .collect::<Vec<_>>()
        .join(" ");
    format!(
        "{} {} {}\n{}\n{}\n{}\n{}\n{}\n",
        seq.n(),
        seq.m(),
        seq.seed(),
        fmt_floats(seq.values()),
        fmt_floats(&inst.x),
        e_line,
        fmt_floats(&inst.w),
        fmt_floats(&inst.y),
    )
}

fn parse_floats(line: &str, what: &str, expect: usize, path: &str) -> Result<Vec<f64>> {
    let vals: std::result::Result<Vec<f64>, _> =
        line.split_whitespace().map(|t| t.parse::<f64>()).collect();
    let vals = vals.map_err(|e| Error::Parse {
        path: path.to_string(),
        detail: format!("bad float in {what} line: {e}"),
    })?;
    if vals.len() != expect {
        return Err(Error::Parse {
            path: path.to_string(),
            detail: format!("{what} line has {} values, expected {expect}", vals.len()),
        });
    }
    Ok(vals)
}

/// Parses the replay format produced by [`format_instance`]. `path` is used
/// only for error messages. The assembled identity y = Hx + e + w is
/// re-checked against the stored y.
pub fn parse_instance(text: &str, path: &str) -> Result<ProblemInstance> {
    let mut lines = text.lines();
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| Error::Parse {
            path: path.to_string(),
            detail: format!("missing {what} line"),
        })
    };
    let header = next("header")?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Parse {
            path: path.to_string(),
            detail: format!("header must be 'n m seed', got '{header}'"),
        });
    }
    let bad_header = |what: &str| Error::Parse {
        path: path.to_string(),
        detail: format!("header field {what} is not an integer"),
    };
    let n: usize = parts[0].parse().map_err(|_| bad_header("n"))?;
    let m: usize = parts[1].parse().map_err(|_| bad_header("m"))?;
    let seed: u64 = parts[2].parse().map_err(|_| bad_header("seed"))?;

    let seq_vals = parse_floats(next("sequence")?, "sequence", n + m - 1, path)?;
    let x = parse_floats(next("x")?, "x", m, path)?;
    let e_line = next("e")?;
    let mut pairs = Vec::new();
    for tok in e_line.split_whitespace() {
        let (is, vs) = tok.split_once(':').ok_or_else(|| Error::Parse {
            path: path.to_string(),
            detail: format!("outlier token '{tok}' is not index:value"),
        })?;
        let i: usize = is.parse().map_err(|_| Error::Parse {
            path: path.to_string(),
            detail: format!("outlier index '{is}' is not an integer"),
        })?;
        let v: f64 = vs.parse().map_err(|_| Error::Parse {
            path: path.to_string(),
            detail: format!("outlier value '{vs}' is not a float"),
        })?;
        pairs.push((i, v));
    }
    let w = parse_floats(next("w")?, "w", n, path)?;
    let y = parse_floats(next("y")?, "y", n, path)?;

    let seq = GaussSequence::from_values(seq_vals, n, m, seed)?;
    let h = ToeplitzMatrix::build(seq);
    let e = SparseVector::new(n, pairs).map_err(|err| Error::Parse {
        path: path.to_string(),
        detail: format!("bad outlier support: {err}"),
    })?;

    let hx = h.matvec(&x);
    let e_dense = e.to_dense();
    let y_scale = y.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    for i in 0..n {
        let assembled = hx[i] + e_dense[i] + w[i];
        if (assembled - y[i]).abs() > 1e-9 * y_scale {
            return Err(Error::Parse {
                path: path.to_string(),
                detail: format!(
                    "stored y[{i}] = {} disagrees with Hx+e+w = {assembled}",
                    y[i]
                ),
            });
        }
    }
    Ok(ProblemInstance { h, x, e, w, y })
}

pub fn write_instance_file(inst: &ProblemInstance, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, format_instance(inst)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_instance_file(path: &std::path::Path) -> Result<ProblemInstance> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sequence_lengths() {
        assert_eq!(generate_sequence(5, 1, 42).unwrap().values().len(), 5);
        assert_eq!(generate_sequence(4, 3, 7).unwrap().values().len(), 6);
    }

    #[test]
    fn sequence_rejects_bad_dims() {
        assert!(matches!(
            generate_sequence(2, 3, 0),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            generate_sequence(3, 0, 0),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn sequence_moments() {
        let seq = generate_sequence(1000, 5, 1).unwrap();
        let v = seq.values();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 0.1, "mean {mean}");
        assert!((var - 1.0).abs() < 0.15, "var {var}");
    }

    #[test]
    fn sequence_deterministic() {
        let a = generate_sequence(100, 5, 9).unwrap();
        let b = generate_sequence(100, 5, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_single_column_is_sequence() {
        let seq = GaussSequence::from_values(vec![1.0, 2.0, 3.0], 3, 1, 0).unwrap();
        let h = build_matrix(seq);
        let d = h.to_dense();
        assert_eq!((d.at(0, 0), d.at(1, 0), d.at(2, 0)), (1.0, 2.0, 3.0));
    }

    #[test]
    fn matrix_rows_are_windows() {
        let seq = GaussSequence::from_values(vec![10.0, 20.0, 30.0, 40.0], 3, 2, 0).unwrap();
        let h = build_matrix(seq);
        let d = h.to_dense();
        assert_eq!(d.row(0), &[10.0, 20.0]);
        assert_eq!(d.row(1), &[20.0, 30.0]);
        assert_eq!(d.row(2), &[30.0, 40.0]);
        // Anti-diagonal constancy at the shared cell.
        assert_eq!(h.entry(1, 0), h.entry(0, 1));
    }

    #[test]
    fn row_reversed_form_reverses_each_row() {
        let seq = generate_sequence(6, 3, 11).unwrap();
        let h = build_matrix(seq);
        let a = h.to_dense();
        let b = h.to_dense_row_reversed();
        for i in 0..6 {
            for j in 0..3 {
                assert_eq!(b.at(i, j), a.at(i, 2 - j));
            }
        }
        // Diagonal constancy of the reversed form.
        assert_eq!(b.at(0, 0), b.at(1, 1));
        assert_eq!(b.at(1, 0), b.at(2, 1));
    }

    #[test]
    fn matvec_matches_dense() {
        let seq = generate_sequence(8, 3, 5).unwrap();
        let h = build_matrix(seq);
        let x = vec![0.3, -1.2, 2.0];
        let direct = h.matvec(&x);
        let via_dense = h.to_dense().matvec(&x);
        assert_eq!(direct, via_dense);
    }

    #[test]
    fn outliers_edge_cases() {
        let z = sample_outliers(10, 0, 1.0, 0).unwrap();
        assert_eq!(z.k(), 0);
        assert_eq!(z.to_dense(), vec![0.0; 10]);

        let full = sample_outliers(10, 10, 1.0, 0).unwrap();
        assert_eq!(full.support(), (0..10).collect::<Vec<_>>());

        assert!(matches!(
            sample_outliers(5, 6, 1.0, 0),
            Err(Error::InvalidSparsity { k: 6, n: 5 })
        ));
    }

    #[test]
    fn outlier_magnitudes() {
        let e = sample_outliers(1000, 500, 10.0, 3).unwrap();
        assert_eq!(e.k(), 500);
        let vals = e.values();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let std =
            (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / vals.len() as f64).sqrt();
        assert!((std - 10.0).abs() < 1.5, "std {std}");
        // Support is sorted and distinct.
        for w in e.support().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn noise_second_moments() {
        let n = 4000;
        let cases = [
            NoiseFamily::Gaussian { sigma: 1.0 },
            NoiseFamily::Exponential {
                mean: std::f64::consts::FRAC_1_SQRT_2,
            },
            NoiseFamily::GammaShape2 {
                scale: 1.0 / 6.0_f64.sqrt(),
            },
        ];
        for (i, fam) in cases.into_iter().enumerate() {
            let w = sample_noise(
                n,
                NoiseSpec {
                    family: fam,
                    seed: 100 + i as u64,
                },
            );
            let m2 = w.iter().map(|x| x * x).sum::<f64>() / n as f64;
            let want = fam.second_moment();
            assert!(
                (m2 - want).abs() < 0.1 * want.max(0.5),
                "{}: {m2} vs {want}",
                fam.name()
            );
            // These three parameterizations share unit second moment.
            assert!((want - 1.0).abs() < 1e-12, "{}: {want}", fam.name());
        }
        let zero = sample_noise(
            5,
            NoiseSpec {
                family: NoiseFamily::None,
                seed: 0,
            },
        );
        assert_eq!(zero, vec![0.0; 5]);
    }

    #[test]
    fn observe_assembles_y() {
        let seq = generate_sequence(6, 2, 1).unwrap();
        let h = build_matrix(seq);
        let x = vec![1.5, -2.0];
        let inst = observe(h.clone(), x.clone(), SparseVector::zero(6), vec![0.0; 6]).unwrap();
        assert_eq!(inst.y, h.matvec(&x));

        let e = SparseVector::new(6, vec![(2, 7.0), (4, -1.0)]).unwrap();
        let inst2 = observe(h.clone(), vec![0.0, 0.0], e.clone(), vec![0.0; 6]).unwrap();
        assert_eq!(inst2.y, e.to_dense());
    }

    #[test]
    fn observe_is_linear_in_x() {
        let seq = generate_sequence(7, 3, 2).unwrap();
        let h = build_matrix(seq);
        let x1 = vec![1.0, 2.0, -0.5];
        let x2 = vec![-0.25, 0.75, 3.0];
        let sum: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a + b).collect();
        let y_sum = observe(h.clone(), sum, SparseVector::zero(7), vec![0.0; 7])
            .unwrap()
            .y;
        let y1 = observe(h.clone(), x1, SparseVector::zero(7), vec![0.0; 7])
            .unwrap()
            .y;
        let y2 = observe(h, x2, SparseVector::zero(7), vec![0.0; 7])
            .unwrap()
            .y;
        for i in 0..7 {
            assert!((y_sum[i] - (y1[i] + y2[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn observe_rejects_mismatched_dims() {
        let seq = generate_sequence(5, 2, 0).unwrap();
        let h = build_matrix(seq);
        assert!(matches!(
            observe(h, vec![1.0], SparseVector::zero(5), vec![0.0; 5]),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn instance_roundtrip_is_bit_exact() {
        let seq = generate_sequence(20, 3, 77).unwrap();
        let h = build_matrix(seq);
        let x = vec![0.1, -2.5, 1.0 / 3.0];
        let e = sample_outliers(20, 4, 10.0, 78).unwrap();
        let w = sample_noise(
            20,
            NoiseSpec {
                family: NoiseFamily::GammaShape2 {
                    scale: 1.0 / 6.0_f64.sqrt(),
                },
                seed: 79,
            },
        );
        let inst = observe(h, x, e, w).unwrap();
        let text = format_instance(&inst);
        let back = parse_instance(&text, "mem").unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn parse_rejects_inconsistent_y() {
        let seq = generate_sequence(4, 1, 5).unwrap();
        let h = build_matrix(seq);
        let inst = observe(h, vec![2.0], SparseVector::zero(4), vec![0.0; 4]).unwrap();
        let mut text = format_instance(&inst);
        // Corrupt the last y value.
        text = text.trim_end().rsplit_once(' ').unwrap().0.to_string() + " 999\n";
        assert!(matches!(
            parse_instance(&text, "mem"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn noise_family_parsing() {
        assert_eq!(
            NoiseFamily::from_name_param("gaussian", 2.0).unwrap(),
            NoiseFamily::Gaussian { sigma: 2.0 }
        );
        assert_eq!(
            NoiseFamily::from_name_param("none", 0.0).unwrap(),
            NoiseFamily::None
        );
        assert!(NoiseFamily::from_name_param("cauchy", 1.0).is_err());
        assert!(NoiseFamily::from_name_param("gaussian", 0.0).is_err());
    }

    proptest! {
        #[test]
        fn window_and_antidiagonal_properties(n in 1usize..40, m_off in 0usize..5, seed in 0u64..1000) {
            let m = (m_off % n.max(1)) + 1;
            prop_assume!(n >= m);
            let seq = generate_sequence(n, m, seed).unwrap();
            let h = build_matrix(seq.clone());
            // Window property: row i equals seq[i..i+m].
            for i in 0..n {
                for j in 0..m {
                    prop_assert_eq!(h.entry(i, j), seq.values()[i + j]);
                }
            }
            // Anti-diagonal constancy.
            for i in 0..n {
                for j in 0..m {
                    for i2 in 0..n {
                        let s = i + j;
                        if s >= i2 && s - i2 < m {
                            prop_assert_eq!(h.entry(i, j), h.entry(i2, s - i2));
                        }
                    }
                }
            }
        }
    }
}
