//! Two-dimensional (multichannel) AR estimators.
//!
//! A grid is embedded as the sequence of shifted data matrices `X(k)` (see
//! [`build_data_matrices`]); each is a block of `n2 + 1` channels. The model
//! predicts `X(k)` from `X(k-1)..X(k-n1)` with coefficient matrices
//! `A_1..A_{n1}`:
//!
//! ```text
//! e^f_n(k) = X(k)   + Σ_l A_l·X(k-l)
//! e^b_n(k) = X(k-n) + Σ_l J·conj(A_l)·J·X(k-n+l)
//! ```
//!
//! [`wwra`] works from the block correlations, [`burg2d_classic`] and
//! [`burg2d_modified`] from the error signals. The modified lattice keeps the
//! zero-padded supports and reproduces [`wwra`] exactly.
//!
//! [`build_data_matrices`]: crate::autocorr::build_data_matrices

use alloc::vec::Vec;

use crate::autocorr::{build_data_matrices, BlockAutocorr, DataMatrixSeq, Signal2D};
use crate::error::{Error, Result};
use crate::linalg::{solve_hermitian_right, ComplexMatrix};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Stage2D {
    /// `A_n^n`.
    pub reflection: ComplexMatrix,
    /// `A_1^n..A_n^n`.
    pub coefficients: Vec<ComplexMatrix>,
    /// Forward/backward cross moment `Δ_n` of the order-`(n-1)` errors.
    pub cross: ComplexMatrix,
    /// `P^f_n`.
    pub forward_power: ComplexMatrix,
    /// `P^b_n`.
    pub backward_power: ComplexMatrix,
    /// `tr(P^f_n) + tr(J·conj(P^b_n)·J)`.
    pub trace_criterion: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArModel2D {
    pub coefficients: Vec<ComplexMatrix>,
    pub channel_order: usize,
    pub forward_power: ComplexMatrix,
    pub backward_power: ComplexMatrix,
    /// Samples behind the (unnormalized) powers.
    pub normalization: f64,
    pub stages: Vec<Stage2D>,
    /// Trace criterion at order 0.
    pub initial_trace: f64,
}

impl ArModel2D {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn channels(&self) -> usize {
        self.channel_order + 1
    }

    /// Trace criterion for orders `0..=n1`.
    pub fn trace_criteria(&self) -> Vec<f64> {
        core::iter::once(self.initial_trace)
            .chain(self.stages.iter().map(|s| s.trace_criterion))
            .collect()
    }
}

fn trace_criterion(forward: &ComplexMatrix, backward: &ComplexMatrix) -> f64 {
    forward.trace().re + backward.trace().re
}

/// `A_l^n = A_l^{n-1} + A_n^n·J·conj(A_{n-l}^{n-1})·J`, `A_n^n` appended.
pub fn order_update_2d(prev: &[ComplexMatrix], reflection: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    let n = prev.len() + 1;
    let mut next = Vec::with_capacity(n);
    for l in 1..n {
        let mirrored = prev[n - l - 1].exchange_conj()?;
        next.push(prev[l - 1].matadd(&reflection.matmul(&mirrored)?)?);
    }
    next.push(reflection.clone());
    Ok(next)
}

fn stage_singular(stage: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Singular { .. } => Error::SingularStage { stage },
        other => other,
    }
}

/// `Δ_{n+1} = R_{n+1} + Σ_{l=1}^{n} A_l·R_{n+1-l}` for the given order-`n`
/// coefficients.
pub fn cross_direct(blocks: &BlockAutocorr, coefficients: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let n = coefficients.len();
    let mut acc = blocks.block(n as isize + 1);
    for (i, a) in coefficients.iter().enumerate() {
        acc = acc.matadd(&a.matmul(&blocks.block((n - i) as isize))?)?;
    }
    Ok(acc)
}

/// `P^f = R_0 + Σ_l A_l·R_{-l}`.
pub fn forward_power_direct(blocks: &BlockAutocorr, coefficients: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut acc = blocks.block(0);
    for (i, a) in coefficients.iter().enumerate() {
        acc = acc.matadd(&a.matmul(&blocks.block(-(i as isize + 1)))?)?;
    }
    Ok(acc)
}

/// `P^b = R_0 + Σ_l J·conj(A_l)·J·R_l`, evaluated from scratch.
pub fn backward_power_direct(blocks: &BlockAutocorr, coefficients: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut acc = blocks.block(0);
    for (i, a) in coefficients.iter().enumerate() {
        acc = acc.matadd(&a.exchange_conj()?.matmul(&blocks.block(i as isize + 1))?)?;
    }
    Ok(acc)
}

/// Multichannel Levinson (Whittle–Wiggins–Robinson) recursion.
///
/// The reflection is `A_n^n = -Δ_n·(P^b_{n-1})⁻¹`. Error powers are carried
/// by the recurrences `P^f_n = P^f_{n-1} + A_n^n·Δ_nᴴ` and
/// `P^b_n = P^b_{n-1} + J·conj(A_n^n)·J·Δ_n` instead of being re-summed.
pub fn wwra(blocks: &BlockAutocorr, n1: usize) -> Result<ArModel2D> {
    if n1 == 0 || n1 > blocks.max_lag() {
        return Err(Error::OrderOutOfRange {
            order: n1,
            min: 1,
            max: blocks.max_lag(),
        });
    }
    let r0 = blocks.block(0);
    let energy = r0.trace();
    if !(energy.re > 0.0) {
        return Err(Error::DegenerateAutocorrelation);
    }

    let mut a: Vec<ComplexMatrix> = Vec::new();
    let mut pf = r0.clone();
    let mut pb = r0;
    let initial_trace = trace_criterion(&pf, &pb);
    let mut stages = Vec::with_capacity(n1);
    for n in 1..=n1 {
        let delta = cross_direct(blocks, &a)?;
        let reflection = -&solve_hermitian_right(&pb, &delta).map_err(stage_singular(n))?;
        a = order_update_2d(&a, &reflection)?;
        pf = pf.matadd(&reflection.matmul(&delta.conj_transpose())?)?;
        pb = pb.matadd(&reflection.exchange_conj()?.matmul(&delta)?)?;
        stages.push(Stage2D {
            reflection,
            coefficients: a.clone(),
            cross: delta,
            forward_power: pf.clone(),
            backward_power: pb.clone(),
            trace_criterion: trace_criterion(&pf, &pb),
        });
    }
    Ok(ArModel2D {
        coefficients: a,
        channel_order: blocks.channel_order,
        forward_power: pf,
        backward_power: pb,
        normalization: blocks.normalization,
        stages,
        initial_trace,
    })
}

/// Relative residual of the block normal equations `A·R + r = 0`.
pub fn block_normal_residual(blocks: &BlockAutocorr, coefficients: &[ComplexMatrix]) -> Result<f64> {
    let n = coefficients.len();
    let mut worst: f64 = 0.0;
    for d in 1..=n {
        let mut acc = blocks.block(d as isize);
        let mut scale = acc.frobenius_norm();
        for (i, a) in coefficients.iter().enumerate() {
            let term = a.matmul(&blocks.block(d as isize - i as isize - 1))?;
            scale += term.frobenius_norm();
            acc = acc.matadd(&term)?;
        }
        worst = worst.max(acc.frobenius_norm() / scale);
    }
    Ok(worst)
}

pub use crate::ar1d::Windowing;

/// How the lattice turns moments into a reflection matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateRule {
    /// `-[P^fb + J(P^fb)ᵀJ]·[P^b + J·conj(P^f)·J]⁻¹`, the trace-criterion minimizer.
    Symmetrized,
    /// `-P^fb·(P^b)⁻¹`.
    Direct,
}

/// Sums feeding the next reflection matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMoments2D {
    /// `Σ e^f(k)·e^b(k-1)ᴴ`.
    pub cross: ComplexMatrix,
    /// `Σ e^f(k)·e^f(k)ᴴ`.
    pub forward: ComplexMatrix,
    /// `Σ e^b(k-1)·e^b(k-1)ᴴ` over the same `k`.
    pub backward: ComplexMatrix,
}

impl LatticeMoments2D {
    pub fn reflection(&self, rule: UpdateRule) -> Result<ComplexMatrix> {
        let solved = match rule {
            UpdateRule::Direct => solve_hermitian_right(&self.backward, &self.cross)?,
            UpdateRule::Symmetrized => {
                let num = self.cross.matadd(&self.cross.exchange_transpose()?)?;
                let den = self.backward.matadd(&self.forward.exchange_conj()?)?;
                solve_hermitian_right(&den, &num)?
            }
        };
        Ok(-&solved)
    }
}

/// Forward/backward error blocks of one order over `k ∈ [first, first+len)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSignals2D {
    pub first: usize,
    pub forward: Vec<ComplexMatrix>,
    pub backward: Vec<ComplexMatrix>,
}

impl ErrorSignals2D {
    pub fn last(&self) -> usize {
        self.first + self.forward.len() - 1
    }
}

/// Block Burg lattice over the data-matrix embedding.
#[derive(Debug, Clone)]
pub struct BurgLattice2D {
    windowing: Windowing,
    rows: usize,
    order: usize,
    forward: Vec<ComplexMatrix>,
    backward: Vec<ComplexMatrix>,
}

impl BurgLattice2D {
    pub fn new(data: &DataMatrixSeq, windowing: Windowing) -> Self {
        Self {
            windowing,
            rows: data.len(),
            order: 0,
            forward: data.matrices.clone(),
            backward: data.matrices.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Inclusive support of the current errors.
    pub fn support(&self) -> (usize, usize) {
        match self.windowing {
            Windowing::Classic => (self.order, self.rows - 1),
            Windowing::ZeroPadded => (0, self.rows + self.order - 1),
        }
    }

    pub fn errors(&self) -> ErrorSignals2D {
        let (lo, hi) = self.support();
        ErrorSignals2D {
            first: lo,
            forward: self.forward[lo..=hi].to_vec(),
            backward: self.backward[lo..=hi].to_vec(),
        }
    }

    fn zero_block(&self) -> ComplexMatrix {
        ComplexMatrix::zeros(self.forward[0].rows(), self.forward[0].cols())
    }

    fn square_zero(&self) -> ComplexMatrix {
        let c = self.forward[0].rows();
        ComplexMatrix::zeros(c, c)
    }

    pub fn moments(&self) -> Result<LatticeMoments2D> {
        let mut cross = self.square_zero();
        let mut forward = self.square_zero();
        let mut backward = self.square_zero();
        let range = match self.windowing {
            Windowing::Classic => self.order + 1..self.rows,
            Windowing::ZeroPadded => 1..self.rows + self.order,
        };
        for k in range {
            let f = &self.forward[k];
            let b = &self.backward[k - 1];
            cross = cross.matadd(&f.mul_adjoint(b)?)?;
            forward = forward.matadd(&f.mul_adjoint(f)?)?;
            backward = backward.matadd(&b.mul_adjoint(b)?)?;
        }
        if self.windowing == Windowing::ZeroPadded {
            // Terms whose partner falls on a zero boundary block.
            let f0 = &self.forward[0];
            let last = &self.backward[self.rows + self.order - 1];
            forward = forward.matadd(&f0.mul_adjoint(f0)?)?;
            backward = backward.matadd(&last.mul_adjoint(last)?)?;
        }
        Ok(LatticeMoments2D {
            cross,
            forward,
            backward,
        })
    }

    /// `(P^f, P^b)` summed over the current support.
    pub fn powers(&self) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let (lo, hi) = self.support();
        let mut pf = self.square_zero();
        let mut pb = self.square_zero();
        for k in lo..=hi {
            pf = pf.matadd(&self.forward[k].mul_adjoint(&self.forward[k])?)?;
            pb = pb.matadd(&self.backward[k].mul_adjoint(&self.backward[k])?)?;
        }
        Ok((pf, pb))
    }

    pub fn reflection(&self, rule: UpdateRule) -> Result<ComplexMatrix> {
        self.moments()?.reflection(rule)
    }

    /// `e^f ← e^f(k) + A·e^b(k-1)`, `e^b ← e^b(k-1) + J·conj(A)·J·e^f(k)`.
    pub fn advance(&mut self, reflection: &ComplexMatrix) -> Result<()> {
        let mirrored = reflection.exchange_conj()?;
        let range = match self.windowing {
            Windowing::Classic => self.order + 1..self.rows,
            Windowing::ZeroPadded => {
                let z = self.zero_block();
                self.forward.push(z.clone());
                self.backward.push(z);
                0..self.rows + self.order + 1
            }
        };
        for k in range.rev() {
            let b_prev = if k == 0 {
                self.zero_block()
            } else {
                self.backward[k - 1].clone()
            };
            let f = &self.forward[k];
            let new_b = b_prev.matadd(&mirrored.matmul(f)?)?;
            let new_f = f.matadd(&reflection.matmul(&b_prev)?)?;
            self.forward[k] = new_f;
            self.backward[k] = new_b;
        }
        self.order += 1;
        Ok(())
    }
}

fn run_burg2d(x: &Signal2D, n1: usize, n2: usize, windowing: Windowing, rule: UpdateRule) -> Result<ArModel2D> {
    if n1 >= x.rows() {
        return Err(Error::OrderOutOfRange {
            order: n1,
            min: 0,
            max: x.rows() - 1,
        });
    }
    let data = build_data_matrices(x, n2)?;
    if x.energy() == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let mut lattice = BurgLattice2D::new(&data, windowing);
    let (mut pf, mut pb) = lattice.powers()?;
    let initial_trace = trace_criterion(&pf, &pb);
    let mut a: Vec<ComplexMatrix> = Vec::new();
    let mut stages = Vec::with_capacity(n1);
    for n in 1..=n1 {
        let moments = lattice.moments()?;
        let reflection = moments.reflection(rule).map_err(stage_singular(n))?;
        a = order_update_2d(&a, &reflection)?;
        lattice.advance(&reflection)?;
        (pf, pb) = lattice.powers()?;
        stages.push(Stage2D {
            reflection,
            coefficients: a.clone(),
            cross: moments.cross,
            forward_power: pf.clone(),
            backward_power: pb.clone(),
            trace_criterion: trace_criterion(&pf, &pb),
        });
    }
    let rows_used = match windowing {
        Windowing::Classic => x.rows() - n1,
        Windowing::ZeroPadded => x.rows(),
    };
    Ok(ArModel2D {
        coefficients: a,
        channel_order: n2,
        forward_power: pf,
        backward_power: pb,
        normalization: (rows_used * x.cols()) as f64,
        stages,
        initial_trace,
    })
}

/// Block Burg over the shrinking window `k ∈ [n+1, N1-1]`, with the
/// symmetrized update that minimizes the trace criterion.
pub fn burg2d_classic(x: &Signal2D, n1: usize, n2: usize) -> Result<ArModel2D> {
    run_burg2d(x, n1, n2, Windowing::Classic, UpdateRule::Symmetrized)
}

/// Block Burg over zero-padded, growing supports with
/// `A = -[Σ e^f(k)·e^b(k-1)ᴴ]·[Σ e^b(k)·e^b(k)ᴴ]⁻¹`. Matches [`wwra`] on
/// [`estimate_block_autocorr_2d`].
///
/// [`estimate_block_autocorr_2d`]: crate::autocorr::estimate_block_autocorr_2d
pub fn burg2d_modified(x: &Signal2D, n1: usize, n2: usize) -> Result<ArModel2D> {
    run_burg2d(x, n1, n2, Windowing::ZeroPadded, UpdateRule::Direct)
}

/// Scalar causal filter `c(l1, l2)`, `l1 ∈ [0, n1]`, `l2 ∈ [0, n2]`, `c(0,0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarterPlaneFilter {
    pub coefficients: ComplexMatrix,
    /// Per-sample innovation variance.
    pub variance: f64,
}

impl QuarterPlaneFilter {
    pub fn order(&self) -> (usize, usize) {
        (self.coefficients.rows() - 1, self.coefficients.cols() - 1)
    }

    /// `y(k, t) = Σ c(l1, l2)·x(k-l1, t-l2)` on `rows × cols` outputs
    /// (row-major), treating `x` as zero off its grid.
    pub fn apply(&self, x: &Signal2D, rows: usize, cols: usize) -> Vec<C64> {
        let c = &self.coefficients;
        let mut out = Vec::with_capacity(rows * cols);
        for k in 0..rows {
            for t in 0..cols {
                let mut acc = C64::new(0.0, 0.0);
                for l1 in 0..c.rows() {
                    for l2 in 0..c.cols() {
                        acc += c[(l1, l2)] * x.at(k as isize - l1 as isize, t as isize - l2 as isize);
                    }
                }
                out.push(acc);
            }
        }
        out
    }
}

/// Reads the scalar filter off row 0 of each coefficient matrix: the channel
/// that predicts the newest sample `x(k, t)` of the stacked column.
pub fn extract_quarter_plane_filter(model: &ArModel2D) -> QuarterPlaneFilter {
    let n1 = model.order();
    let channels = model.channels();
    let coefficients = ComplexMatrix::from_fn(n1 + 1, channels, |l1, l2| match (l1, l2) {
        (0, 0) => C64::new(1.0, 0.0),
        (0, _) => C64::new(0.0, 0.0),
        (l1, l2) => model.coefficients[l1 - 1][(0, l2)],
    });
    QuarterPlaneFilter {
        coefficients,
        variance: model.forward_power[(0, 0)].re / model.normalization,
    }
}

/// Mean squared filter output over the grid.
pub fn residual_mse_2d(x: &Signal2D, filter: &QuarterPlaneFilter) -> f64 {
    let y = filter.apply(x, x.rows(), x.cols());
    y.iter().map(|v| v.norm_sqr()).sum::<f64>() / y.len() as f64
}
