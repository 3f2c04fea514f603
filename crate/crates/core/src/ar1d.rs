//! One-dimensional AR estimators.
//!
//! Three routes to the prediction coefficients `a_1..a_n` of
//! `x(k) + Σ_l a_l·x(k-l) = w(k)`:
//!
//! * [`levinson`] solves the Toeplitz normal equations from lag sums.
//! * [`burg_classic`] runs the Burg lattice over a window that shrinks by one
//!   sample per order, with the half-sum (harmonic) denominator.
//! * [`burg_modified`] runs the same lattice over error signals that grow by
//!   one sample per order with zero boundaries. Its reflection coefficients
//!   are exactly the Levinson ones for the biased lag sums.
//!
//! All three share [`order_update`] to turn a reflection coefficient into the
//! next coefficient vector.
//!
//! A stage whose reflection magnitude reaches one (a perfectly predictable
//! record) ends the recursion; the model is returned at that order with
//! `requested_order` recording what was asked for.

use alloc::vec;
use alloc::vec::Vec;

use crate::autocorr::{AutocorrSeq, ComplexSignal1D};
use crate::error::{Error, Result};
use crate::C64;

/// `|k| ≥ 1 - REFLECTION_UNIT_TOL` stops the recursion.
pub const REFLECTION_UNIT_TOL: f64 = 1e-14;

/// Error powers at or below this fraction of the zero-lag power are singular.
pub const SINGULAR_POWER_FLOOR: f64 = 1e-14;

/// Reflections this far above one mean the lags were not positive definite.
const NOT_PD_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Stage1D {
    /// `a_m^m`.
    pub reflection: C64,
    /// `a_1^m..a_m^m`.
    pub coefficients: Vec<C64>,
    /// `P_m`, unnormalized.
    pub error_power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArModel1D {
    pub coefficients: Vec<C64>,
    /// Unnormalized final error power `P_n`.
    pub error_power: f64,
    /// Sample count that turns `error_power` into a per-sample variance.
    pub normalization: f64,
    pub stages: Vec<Stage1D>,
    pub requested_order: usize,
}

impl ArModel1D {
    pub fn from_coefficients(coefficients: Vec<C64>, error_power: f64, normalization: f64) -> Self {
        let requested_order = coefficients.len();
        Self {
            coefficients,
            error_power,
            normalization,
            stages: Vec::new(),
            requested_order,
        }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// The recursion stopped before `requested_order` on a unit reflection.
    pub fn truncated(&self) -> bool {
        self.order() < self.requested_order
    }

    pub fn innovation_variance(&self) -> f64 {
        self.error_power / self.normalization
    }

    pub fn reflection_coefficients(&self) -> Vec<C64> {
        self.stages.iter().map(|s| s.reflection).collect()
    }

    /// Stage `m` (1-based).
    pub fn stage(&self, m: usize) -> Option<&Stage1D> {
        m.checked_sub(1).and_then(|i| self.stages.get(i))
    }
}

/// `a_l^m = a_l^{m-1} + k·conj(a_{m-l}^{m-1})`, `a_m^m = k`.
pub fn order_update(prev: &[C64], reflection: C64) -> Vec<C64> {
    let m = prev.len() + 1;
    let mut next = Vec::with_capacity(m);
    for l in 1..m {
        next.push(prev[l - 1] + reflection * prev[m - l - 1].conj());
    }
    next.push(reflection);
    next
}

fn check_order(order: usize, len: usize) -> Result<()> {
    if order == 0 || order >= len {
        return Err(Error::OrderOutOfRange {
            order,
            min: 1,
            max: len.saturating_sub(1),
        });
    }
    Ok(())
}

fn reaches_unit(k: C64) -> bool {
    k.norm() >= 1.0 - REFLECTION_UNIT_TOL
}

/// Levinson recursion on `R_n·a_n = -r_n`.
pub fn levinson(r: &AutocorrSeq, order: usize) -> Result<ArModel1D> {
    if order == 0 || order > r.max_lag() {
        return Err(Error::OrderOutOfRange {
            order,
            min: 1,
            max: r.max_lag(),
        });
    }
    let r0 = r.lags[0];
    if !(r0.re > 0.0) || r0.im.abs() > 1e-12 * r0.re {
        return Err(Error::DegenerateAutocorrelation);
    }

    let mut a: Vec<C64> = Vec::new();
    let mut power = r0.re;
    let mut stages = Vec::with_capacity(order);
    for m in 1..=order {
        if power <= SINGULAR_POWER_FLOOR * r0.re {
            return Err(Error::SingularStage { stage: m });
        }
        let delta = r.lags[m]
            + a.iter()
                .enumerate()
                .map(|(i, &al)| al * r.lags[m - 1 - i])
                .sum::<C64>();
        let k = -delta / power;
        let magnitude = k.norm();
        if magnitude > 1.0 + NOT_PD_SLACK {
            return Err(Error::NotPositiveDefinite { stage: m, magnitude });
        }
        a = order_update(&a, k);
        power = (power * (1.0 - k.norm_sqr())).max(0.0);
        stages.push(Stage1D {
            reflection: k,
            coefficients: a.clone(),
            error_power: power,
        });
        if reaches_unit(k) {
            break;
        }
    }
    Ok(ArModel1D {
        coefficients: a,
        error_power: power,
        normalization: r.normalization,
        stages,
        requested_order: order,
    })
}

/// Support convention of the Burg error signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Windowing {
    /// Order-`m` errors live on `k ∈ [m, N-1]`.
    Classic,
    /// Order-`m` errors live on `k ∈ [0, N+m-1]`, zero outside.
    ZeroPadded,
}

/// Denominator used to turn the cross moment into a reflection coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    /// `½·Σ(|e^f(k)|² + |e^b(k-1)|²)`.
    HalfSum,
    /// `Σ|e^f(k)|²`.
    Forward,
    /// `Σ|e^b(k-1)|²`.
    Backward,
}

impl Windowing {
    pub fn default_denominator(self) -> Denominator {
        match self {
            Windowing::Classic => Denominator::HalfSum,
            Windowing::ZeroPadded => Denominator::Forward,
        }
    }
}

/// Sums feeding the next reflection coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeMoments {
    /// `Σ e^f(k)·conj(e^b(k-1))`.
    pub cross: C64,
    pub forward_energy: f64,
    /// Energy of the delayed backward error `e^b(k-1)` over the same `k`.
    pub backward_energy: f64,
}

impl LatticeMoments {
    pub fn denominator(&self, which: Denominator) -> f64 {
        match which {
            Denominator::HalfSum => 0.5 * (self.forward_energy + self.backward_energy),
            Denominator::Forward => self.forward_energy,
            Denominator::Backward => self.backward_energy,
        }
    }
}

/// Forward and backward errors of one order over `k ∈ [first, first+len)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSignals1D {
    pub first: usize,
    pub forward: Vec<C64>,
    pub backward: Vec<C64>,
}

impl ErrorSignals1D {
    /// Inclusive last index of the support.
    pub fn last(&self) -> usize {
        self.first + self.forward.len() - 1
    }

    fn pick(values: &[C64], first: usize, k: isize) -> C64 {
        if k < first as isize {
            return C64::new(0.0, 0.0);
        }
        values.get(k as usize - first).copied().unwrap_or_default()
    }

    pub fn forward_at(&self, k: isize) -> C64 {
        Self::pick(&self.forward, self.first, k)
    }

    pub fn backward_at(&self, k: isize) -> C64 {
        Self::pick(&self.backward, self.first, k)
    }

    pub fn forward_energy(&self) -> f64 {
        self.forward.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn backward_energy(&self) -> f64 {
        self.backward.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Burg lattice state: the current-order forward and backward errors.
#[derive(Debug, Clone)]
pub struct BurgLattice1D {
    windowing: Windowing,
    len: usize,
    order: usize,
    forward: Vec<C64>,
    backward: Vec<C64>,
}

impl BurgLattice1D {
    pub fn new(x: &ComplexSignal1D, windowing: Windowing) -> Self {
        Self {
            windowing,
            len: x.len(),
            order: 0,
            forward: x.samples().to_vec(),
            backward: x.samples().to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn windowing(&self) -> Windowing {
        self.windowing
    }

    /// Inclusive support of the current errors.
    pub fn support(&self) -> (usize, usize) {
        match self.windowing {
            Windowing::Classic => (self.order, self.len - 1),
            Windowing::ZeroPadded => (0, self.len + self.order - 1),
        }
    }

    pub fn errors(&self) -> ErrorSignals1D {
        let (lo, hi) = self.support();
        ErrorSignals1D {
            first: lo,
            forward: self.forward[lo..=hi].to_vec(),
            backward: self.backward[lo..=hi].to_vec(),
        }
    }

    /// Range of `k` whose `(e^f(k), e^b(k-1))` pairs enter the next stage.
    fn pair_range(&self) -> core::ops::Range<usize> {
        match self.windowing {
            Windowing::Classic => self.order + 1..self.len,
            // k = 0 pairs with e^b(-1) = 0 and k = N+m with e^f = 0. Both
            // drop out of the cross sum; `moments` adds their energies back.
            Windowing::ZeroPadded => 1..self.len + self.order,
        }
    }

    pub fn moments(&self) -> LatticeMoments {
        let mut cross = C64::new(0.0, 0.0);
        let mut fe = 0.0;
        let mut be = 0.0;
        for k in self.pair_range() {
            let f = self.forward[k];
            let b = self.backward[k - 1];
            cross += f * b.conj();
            fe += f.norm_sqr();
            be += b.norm_sqr();
        }
        if self.windowing == Windowing::ZeroPadded {
            let last = self.len + self.order - 1;
            fe += self.forward[0].norm_sqr();
            be += self.backward[last].norm_sqr();
        }
        LatticeMoments {
            cross,
            forward_energy: fe,
            backward_energy: be,
        }
    }

    /// Next reflection coefficient, `-cross / denominator`.
    pub fn reflection(&self, which: Denominator) -> Result<C64> {
        let m = self.moments();
        let den = m.denominator(which);
        if !(den > 0.0) {
            return Err(Error::ZeroEnergy);
        }
        Ok(-m.cross / den)
    }

    /// Applies `e^f ← e^f(k) + k·e^b(k-1)`, `e^b ← e^b(k-1) + conj(k)·e^f(k)`.
    pub fn advance(&mut self, reflection: C64) {
        let kc = reflection.conj();
        let range = match self.windowing {
            Windowing::Classic => self.order + 1..self.len,
            Windowing::ZeroPadded => {
                self.forward.push(C64::new(0.0, 0.0));
                self.backward.push(C64::new(0.0, 0.0));
                0..self.len + self.order + 1
            }
        };
        // Descending k so backward[k-1] still holds the previous order.
        for k in range.rev() {
            let f = self.forward[k];
            let b_prev = if k == 0 {
                C64::new(0.0, 0.0)
            } else {
                self.backward[k - 1]
            };
            self.forward[k] = f + reflection * b_prev;
            self.backward[k] = b_prev + kc * f;
        }
        self.order += 1;
    }
}

fn run_burg(x: &ComplexSignal1D, order: usize, windowing: Windowing) -> Result<ArModel1D> {
    check_order(order, x.len())?;
    let energy = x.energy();
    if energy == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let denominator = windowing.default_denominator();
    let mut lattice = BurgLattice1D::new(x, windowing);
    let mut a: Vec<C64> = Vec::new();
    let mut power = energy;
    let mut stages = Vec::with_capacity(order);
    for m in 1..=order {
        if windowing == Windowing::ZeroPadded && power <= SINGULAR_POWER_FLOOR * energy {
            return Err(Error::SingularStage { stage: m });
        }
        let k = lattice.reflection(denominator)?;
        a = order_update(&a, k);
        power = (power * (1.0 - k.norm_sqr())).max(0.0);
        stages.push(Stage1D {
            reflection: k,
            coefficients: a.clone(),
            error_power: power,
        });
        if reaches_unit(k) {
            break;
        }
        if m < order {
            lattice.advance(k);
        }
    }
    Ok(ArModel1D {
        coefficients: a,
        error_power: power,
        normalization: x.len() as f64,
        stages,
        requested_order: order,
    })
}

/// Burg over the shrinking window with the half-sum denominator.
pub fn burg_classic(x: &ComplexSignal1D, order: usize) -> Result<ArModel1D> {
    run_burg(x, order, Windowing::Classic)
}

/// Burg over zero-padded, growing error supports with the forward-energy
/// denominator. Matches [`levinson`] on [`estimate_autocorr_1d`] lags.
///
/// [`estimate_autocorr_1d`]: crate::autocorr::estimate_autocorr_1d
pub fn burg_modified(x: &ComplexSignal1D, order: usize) -> Result<ArModel1D> {
    run_burg(x, order, Windowing::ZeroPadded)
}

/// `x(k) + Σ_l a_l·x(k-l)` for `k ∈ [0, N-1]`, with `x(k) = 0` for `k < 0`.
pub fn prediction_residual(x: &ComplexSignal1D, coefficients: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); x.len()];
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = x.samples()[k];
        for (l, &a) in coefficients.iter().enumerate() {
            acc += a * x.at(k as isize - l as isize - 1);
        }
        *o = acc;
    }
    out
}

/// Mean squared prediction residual over the record.
pub fn residual_mse(x: &ComplexSignal1D, model: &ArModel1D) -> f64 {
    residual_mse_coefficients(x, &model.coefficients)
}

pub fn residual_mse_coefficients(x: &ComplexSignal1D, coefficients: &[C64]) -> f64 {
    let r = prediction_residual(x, coefficients);
    r.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}

/// Residual energy over every `k ∈ [0, N+n-1]` where it can be non-zero,
/// divided by `N`. For the zero-padded estimators this equals `P_n / N`.
pub fn residual_mse_extended(x: &ComplexSignal1D, model: &ArModel1D) -> f64 {
    let n = x.len() + model.coefficients.len();
    let mut total = 0.0;
    for k in 0..n as isize {
        let mut acc = x.at(k);
        for (l, &a) in model.coefficients.iter().enumerate() {
            acc += a * x.at(k - l as isize - 1);
        }
        total += acc.norm_sqr();
    }
    total / x.len() as f64
}
