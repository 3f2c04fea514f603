use arspec_core::ar1d::{residual_mse_extended, ArModel1D};
use arspec_core::siggen::{random_grid, random_signal, sweep_phase};
use arspec_core::spectrum::frequency_grid;
use arspec_core::{
    ar_spectrum_1d, burg2d_classic, burg2d_modified, burg_classic, burg_modified, estimate_autocorr_1d,
    estimate_block_autocorr_2d, gen_noisy_sinusoid, levinson, phase_sweep, residual_mse, wwra, ArModel2D,
    ComplexMatrix, ComplexSignal1D, Signal2D, Snr, SynthConfig, C64,
};
use serde::{Deserialize, Serialize};

use crate::args::{Method1D, Method2D, SynthArgs};
use crate::error::{CliError, Result};

pub fn synth_config(a: &SynthArgs) -> SynthConfig {
    SynthConfig {
        len: a.n,
        freq: a.freq,
        phase: a.phase,
        snr: if a.noiseless { Snr::Noiseless } else { Snr::Db(a.snr_db) },
        seed: a.seed,
    }
}

pub fn estimate_1d(method: Method1D, x: &ComplexSignal1D, order: usize) -> Result<ArModel1D> {
    let model = match method {
        Method1D::Levinson => levinson(&estimate_autocorr_1d(x, order)?, order)?,
        Method1D::Burg => burg_classic(x, order)?,
        Method1D::BurgMod => burg_modified(x, order)?,
    };
    Ok(model)
}

pub fn estimate_2d(method: Method2D, x: &Signal2D, n1: usize, n2: usize) -> Result<ArModel2D> {
    let model = match method {
        Method2D::Wwra => wwra(&estimate_block_autocorr_2d(x, n1, n2)?, n1)?,
        Method2D::Burg2d => burg2d_classic(x, n1, n2)?,
        Method2D::Burg2dMod => burg2d_modified(x, n1, n2)?,
    };
    Ok(model)
}

/// One spectrum per row, keyed by a swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMatrix {
    pub key: &'static str,
    pub keys: Vec<f64>,
    pub frequencies: Vec<f64>,
    pub power: Vec<Vec<f64>>,
}

impl SpectrumMatrix {
    pub fn log10(&self) -> Vec<Vec<f64>> {
        self.power.iter().map(|row| row.iter().map(|p| p.log10()).collect()).collect()
    }
}

pub fn phase_sweep_spectra(
    synth: &SynthArgs,
    steps: usize,
    method: Method1D,
    order: usize,
    nfreq: usize,
) -> Result<SpectrumMatrix> {
    let signals = phase_sweep(&synth_config(synth), steps)?;
    let mut power = Vec::with_capacity(steps);
    for x in &signals {
        power.push(ar_spectrum_1d(&estimate_1d(method, x, order)?, nfreq)?.power);
    }
    Ok(SpectrumMatrix {
        key: "phase",
        keys: (0..steps).map(|j| sweep_phase(j, steps)).collect(),
        frequencies: frequency_grid(nfreq),
        power,
    })
}

pub fn order_sweep_spectra(synth: &SynthArgs, method: Method1D, max_order: usize, nfreq: usize) -> Result<SpectrumMatrix> {
    if max_order == 0 {
        return Err(CliError::Usage("--max-order must be at least 1".into()));
    }
    let x = gen_noisy_sinusoid(&synth_config(synth))?;
    let mut power = Vec::with_capacity(max_order);
    for order in 1..=max_order {
        power.push(ar_spectrum_1d(&estimate_1d(method, &x, order)?, nfreq)?.power);
    }
    Ok(SpectrumMatrix {
        key: "order",
        keys: (1..=max_order).map(|o| o as f64).collect(),
        frequencies: frequency_grid(nfreq),
        power,
    })
}

/// Residual MSE per order. For each method two columns: over the record
/// `[0, N-1]` and over the full zero-padded support `[0, N+n-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MseTable {
    pub methods: Vec<Method1D>,
    pub orders: Vec<usize>,
    /// `rows[order_index][2*method_index + {0: record, 1: extended}]`.
    pub rows: Vec<Vec<f64>>,
}

impl MseTable {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["order".to_string()];
        for m in &self.methods {
            h.push(format!("{}_mse", m.name()));
            h.push(format!("{}_mse_extended", m.name()));
        }
        h
    }

    pub fn column(&self, method: Method1D, extended: bool) -> Option<Vec<f64>> {
        let i = self.methods.iter().position(|&m| m == method)?;
        Some(self.rows.iter().map(|r| r[2 * i + extended as usize]).collect())
    }
}

pub fn mse_vs_order(synth: &SynthArgs, max_order: usize, methods: &[Method1D]) -> Result<MseTable> {
    if max_order == 0 {
        return Err(CliError::Usage("--max-order must be at least 1".into()));
    }
    if methods.is_empty() {
        return Err(CliError::Usage("--methods needs at least one method".into()));
    }
    let x = gen_noisy_sinusoid(&synth_config(synth))?;
    let mut rows = Vec::with_capacity(max_order);
    for order in 1..=max_order {
        let mut row = Vec::with_capacity(2 * methods.len());
        for &m in methods {
            let model = estimate_1d(m, &x, order)?;
            row.push(residual_mse(&x, &model));
            row.push(residual_mse_extended(&x, &model));
        }
        rows.push(row);
    }
    Ok(MseTable {
        methods: methods.to_vec(),
        orders: (1..=max_order).collect(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteVerdict {
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    /// Modified Burg vs Levinson on biased lags, every order up to `N-5`.
    pub burg_mod_vs_levinson: SuiteVerdict,
    /// Modified 2D Burg vs WWRA, `n1 ≤ 3`, `n2 ≤ 2`.
    pub burg2d_mod_vs_wwra: SuiteVerdict,
    pub pass: bool,
}

fn rel_gap(a: &[C64], b: &[C64]) -> f64 {
    let gap = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if scale > 0.0 {
        gap / scale
    } else {
        gap
    }
}

fn rel_gap_mats(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    let gap = a.iter().zip(b).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.max_abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        gap / scale
    } else {
        gap
    }
}

const ONE_D_LENGTHS: [usize; 3] = [8, 20, 64];
const GRID_SHAPES: [(usize, usize); 4] = [(5, 5), (5, 8), (8, 5), (8, 8)];

/// Trial `i` uses seed `seed + i`; lengths and grid shapes cycle.
pub fn equivalence(trials: usize, seed: u64) -> Result<EquivalenceVerdict> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut worst_1d: f64 = 0.0;
    let mut worst_2d: f64 = 0.0;
    for i in 0..trials {
        let s = seed.wrapping_add(i as u64);
        let n = ONE_D_LENGTHS[i % ONE_D_LENGTHS.len()];
        let x = random_signal(n, s);
        let order = n - 5;
        let burg = burg_modified(&x, order)?;
        let lev = levinson(&estimate_autocorr_1d(&x, order)?, order)?;
        if burg.stages.len() != lev.stages.len() {
            worst_1d = f64::INFINITY;
        }
        for (a, b) in burg.stages.iter().zip(&lev.stages) {
            worst_1d = worst_1d.max(rel_gap(&a.coefficients, &b.coefficients));
        }

        let (rows, cols) = GRID_SHAPES[i % GRID_SHAPES.len()];
        let g = random_grid(rows, cols, s);
        for n2 in 0..=2 {
            let burg = burg2d_modified(&g, 3, n2)?;
            let lev = wwra(&estimate_block_autocorr_2d(&g, 3, n2)?, 3)?;
            for (a, b) in burg.stages.iter().zip(&lev.stages) {
                worst_2d = worst_2d.max(rel_gap_mats(&a.coefficients, &b.coefficients));
            }
        }
    }
    let one = SuiteVerdict {
        cases: trials,
        max_deviation: worst_1d,
        tolerance: 1e-9,
        pass: worst_1d <= 1e-9,
    };
    let two = SuiteVerdict {
        cases: trials,
        max_deviation: worst_2d,
        tolerance: 1e-8,
        pass: worst_2d <= 1e-8,
    };
    let pass = one.pass && two.pass;
    Ok(EquivalenceVerdict {
        burg_mod_vs_levinson: one,
        burg2d_mod_vs_wwra: two,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> SynthArgs {
        SynthArgs {
            n: 20,
            freq: 0.25,
            phase: 0.0,
            snr_db: 30.0,
            noiseless: false,
            seed: 1,
        }
    }

    #[test]
    fn mse_table_layout() {
        let t = mse_vs_order(&reference(), 5, &[Method1D::Burg, Method1D::Levinson]).unwrap();
        assert_eq!(
            t.header(),
            ["order", "burg_mse", "burg_mse_extended", "levinson_mse", "levinson_mse_extended"]
        );
        assert_eq!(t.rows.len(), 5);
        assert!(t.rows.iter().all(|r| r.len() == 4));
    }

    #[test]
    fn modified_and_levinson_columns_agree() {
        let t = mse_vs_order(&reference(), 19, &[Method1D::BurgMod, Method1D::Levinson]).unwrap();
        for ext in [false, true] {
            let a = t.column(Method1D::BurgMod, ext).unwrap();
            let b = t.column(Method1D::Levinson, ext).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-10 * y);
            }
        }
        let ext = t.column(Method1D::BurgMod, true).unwrap();
        assert!(ext.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn sweeps_have_expected_shape() {
        let p = phase_sweep_spectra(&reference(), 4, Method1D::BurgMod, 5, 32).unwrap();
        assert_eq!(p.power.len(), 4);
        assert!(p.power.iter().all(|r| r.len() == 32));
        assert_eq!(p.keys[1], core::f64::consts::FRAC_PI_2);

        let o = order_sweep_spectra(&reference(), Method1D::Burg, 6, 16).unwrap();
        assert_eq!(o.keys, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn equivalence_passes_on_small_batch() {
        let v = equivalence(8, 3).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(v.burg_mod_vs_levinson.max_deviation < 1e-12);
    }
}
