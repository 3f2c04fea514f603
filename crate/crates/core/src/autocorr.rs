//! Sample correlations for 1D records and 2D grids.
//!
//! Every lag is an unnormalized sum over the zero-padded record: no `1/N`
//! and no `1/(N-t)`. The estimators only ever use ratios of these sums.
//! The `normalization` field carries the sample count so per-sample powers
//! can be recovered where needed.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::C64;

fn check_finite(samples: &[C64]) -> Result<()> {
    match samples.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Finite complex record `x(0..N-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal1D {
    samples: Vec<C64>,
}

impl ComplexSignal1D {
    pub fn new(samples: Vec<C64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        check_finite(&samples)?;
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; records hold at least one sample.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    /// `x(k)` with zeros outside `[0, N-1]`.
    pub fn at(&self, k: isize) -> C64 {
        if k < 0 {
            return C64::new(0.0, 0.0);
        }
        self.samples.get(k as usize).copied().unwrap_or_default()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Grid `x(k, t)`, `k` in `0..rows`, `t` in `0..cols`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal2D {
    rows: usize,
    cols: usize,
    samples: Vec<C64>,
}

impl Signal2D {
    pub fn new(rows: usize, cols: usize, samples: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptySignal);
        }
        if samples.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "Signal2D::new",
                left: (rows, cols),
                right: (samples.len(), 1),
            });
        }
        check_finite(&samples)?;
        Ok(Self { rows, cols, samples })
    }

    /// A single-column grid whose `k` axis is the given 1D record.
    pub fn from_column(x: &ComplexSignal1D) -> Self {
        Self {
            rows: x.len(),
            cols: 1,
            samples: x.samples().to_vec(),
        }
    }

    /// `N1`, the extent of the `k` axis.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `N2`, the extent of the `t` axis.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn row(&self, k: usize) -> &[C64] {
        &self.samples[k * self.cols..(k + 1) * self.cols]
    }

    pub fn get(&self, k: usize, t: usize) -> C64 {
        self.samples[k * self.cols + t]
    }

    /// `x(k, t)` with zeros outside the grid.
    pub fn at(&self, k: isize, t: isize) -> C64 {
        if k < 0 || t < 0 || k as usize >= self.rows || t as usize >= self.cols {
            return C64::new(0.0, 0.0);
        }
        self.get(k as usize, t as usize)
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Biased lags `r_0..r_n`; `r_{-t}` is `conj(r_t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrSeq {
    pub lags: Vec<C64>,
    /// Divides `r_0` (and error powers) into per-sample power.
    pub normalization: f64,
}

impl AutocorrSeq {
    /// Wraps raw lags with unit normalization.
    pub fn from_lags(lags: Vec<C64>) -> Self {
        Self {
            lags,
            normalization: 1.0,
        }
    }

    pub fn max_lag(&self) -> usize {
        self.lags.len().saturating_sub(1)
    }

    /// `r_t` for signed `t`.
    pub fn lag(&self, t: isize) -> C64 {
        if t >= 0 {
            self.lags[t as usize]
        } else {
            self.lags[(-t) as usize].conj()
        }
    }

    /// The `n × n` Hermitian Toeplitz matrix `R_n`.
    pub fn toeplitz(&self, n: usize) -> ComplexMatrix {
        ComplexMatrix::hermitian_toeplitz(&self.lags, n)
    }
}

/// `r_t = Σ_k x(k+t)·conj(x(k))` for `t = 0..=max_lag`.
pub fn estimate_autocorr_1d(x: &ComplexSignal1D, max_lag: usize) -> Result<AutocorrSeq> {
    let n = x.len();
    if max_lag >= n {
        return Err(Error::OrderOutOfRange {
            order: max_lag,
            min: 0,
            max: n - 1,
        });
    }
    let s = x.samples();
    let lags = (0..=max_lag)
        .map(|t| s[t..].iter().zip(s).map(|(a, b)| a * b.conj()).sum())
        .collect();
    Ok(AutocorrSeq {
        lags,
        normalization: n as f64,
    })
}

/// The shifted, zero-filled matrices `X(k)` embedding a grid.
///
/// `X(k)` has `n2 + 1` rows and `N2 + n2` columns; row `i` holds `x(k, j - i)`
/// at column `j` and zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrixSeq {
    pub matrices: Vec<ComplexMatrix>,
    pub channel_order: usize,
}

impl DataMatrixSeq {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn channels(&self) -> usize {
        self.channel_order + 1
    }

    pub fn width(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.cols())
    }
}

pub fn build_data_matrices(x: &Signal2D, n2: usize) -> Result<DataMatrixSeq> {
    if n2 >= x.cols() {
        return Err(Error::OrderOutOfRange {
            order: n2,
            min: 0,
            max: x.cols() - 1,
        });
    }
    let width = x.cols() + n2;
    let matrices = (0..x.rows())
        .map(|k| {
            let row = x.row(k);
            ComplexMatrix::from_fn(n2 + 1, width, |i, j| {
                if j >= i && j - i < row.len() {
                    row[j - i]
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    Ok(DataMatrixSeq {
        matrices,
        channel_order: n2,
    })
}

/// Blocks `R_0..R_{n1}` of the Toeplitz-block-Toeplitz correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockAutocorr {
    pub blocks: Vec<ComplexMatrix>,
    pub channel_order: usize,
    /// Number of grid samples, `N1·N2`.
    pub normalization: f64,
}

impl BlockAutocorr {
    pub fn max_lag(&self) -> usize {
        self.blocks.len().saturating_sub(1)
    }

    pub fn channels(&self) -> usize {
        self.channel_order + 1
    }

    /// `R_k` for signed `k`, with `R_{-k} = R_kᴴ`.
    pub fn block(&self, k: isize) -> ComplexMatrix {
        if k >= 0 {
            self.blocks[k as usize].clone()
        } else {
            self.blocks[(-k) as usize].conj_transpose()
        }
    }

    /// The `n × n`-block matrix with block `(i, j) = R_{j-i}`.
    pub fn assemble(&self, n: usize) -> ComplexMatrix {
        let c = self.channels();
        let mut full = ComplexMatrix::zeros(n * c, n * c);
        for bi in 0..n {
            for bj in 0..n {
                let b = self.block(bj as isize - bi as isize);
                for i in 0..c {
                    for j in 0..c {
                        full[(bi * c + i, bj * c + j)] = b[(i, j)];
                    }
                }
            }
        }
        full
    }
}

/// `R_k = Σ_m X(m+k)·X(m)ᴴ`, evaluated through the lag form
/// `R_k[i][j] = g_k(j - i)` with `g_k(d) = Σ_{m,t} x(m+k, t+d)·conj(x(m, t))`.
pub fn estimate_block_autocorr_2d(x: &Signal2D, n1: usize, n2: usize) -> Result<BlockAutocorr> {
    if n1 >= x.rows() {
        return Err(Error::OrderOutOfRange {
            order: n1,
            min: 0,
            max: x.rows() - 1,
        });
    }
    if n2 >= x.cols() {
        return Err(Error::OrderOutOfRange {
            order: n2,
            min: 0,
            max: x.cols() - 1,
        });
    }
    let (rows, cols) = (x.rows(), x.cols());
    let lag_sum = |k: usize, d: isize| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..rows - k {
            let upper = x.row(m + k);
            let lower = x.row(m);
            for t in 0..cols {
                let u = t as isize + d;
                if u >= 0 && (u as usize) < cols {
                    acc += upper[u as usize] * lower[t].conj();
                }
            }
        }
        acc
    };
    let blocks = (0..=n1)
        .map(|k| {
            let n = n2 as isize;
            let g: Vec<C64> = (-n..=n).map(|d| lag_sum(k, d)).collect();
            ComplexMatrix::from_fn(n2 + 1, n2 + 1, |i, j| g[(j as isize - i as isize + n) as usize])
        })
        .collect();
    Ok(BlockAutocorr {
        blocks,
        channel_order: n2,
        normalization: (rows * cols) as f64,
    })
}
