//! AR power spectra on uniform frequency grids, plus a direct DFT.
//!
//! DFT convention: the forward transform is unnormalized,
//! `X[m] = Σ_k x[k]·exp(-i2πmk/N)`, and the inverse carries `1/N`.
//! Parseval therefore reads `Σ|x|² = (1/N)·Σ|X|²`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::ar1d::ArModel1D;
use crate::ar2d::QuarterPlaneFilter;
use crate::error::{Error, Result};
use crate::C64;

/// Denominator magnitudes below this are reported as poles.
pub const POLE_FLOOR: f64 = 1e-300;

pub const DEFAULT_NFREQ: usize = 1024;

fn twiddle(m: usize, k: usize, n: usize, sign: f64) -> C64 {
    // Reduce the index product first so the angle stays in [0, 2π).
    let idx = ((m as u128 * k as u128) % n as u128) as f64;
    C64::from_polar(1.0, sign * 2.0 * PI * idx / n as f64)
}

pub fn dft(x: &[C64]) -> Vec<C64> {
    let n = x.len();
    (0..n)
        .map(|m| x.iter().enumerate().map(|(k, &v)| v * twiddle(m, k, n, -1.0)).sum())
        .collect()
}

pub fn idft(x: &[C64]) -> Vec<C64> {
    let n = x.len();
    let scale = 1.0 / n as f64;
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(m, &v)| v * twiddle(m, k, n, 1.0))
                .sum::<C64>()
                * scale
        })
        .collect()
}

/// `nfreq` uniform frequencies covering `[-0.5, 0.5)`.
pub fn frequency_grid(nfreq: usize) -> Vec<f64> {
    (0..nfreq).map(|j| -0.5 + j as f64 / nfreq as f64).collect()
}

/// Power values on a 1D grid, or a row-major `f1 × f2` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub frequencies: Vec<f64>,
    /// Second axis; empty for 1D spectra.
    pub frequencies2: Vec<f64>,
    pub power: Vec<f64>,
    /// Flat indices whose denominator vanished; `power` is `+inf` there.
    pub poles: Vec<usize>,
}

impl SpectrumGrid {
    pub fn is_2d(&self) -> bool {
        !self.frequencies2.is_empty()
    }

    /// Flat index of the largest power value (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.power.iter().enumerate() {
            if p > self.power[best] {
                best = i;
            }
        }
        best
    }

    /// `(i1, i2)` of the maximum for 2D grids.
    pub fn argmax_2d(&self) -> (usize, usize) {
        let nf2 = self.frequencies2.len().max(1);
        let i = self.argmax();
        (i / nf2, i % nf2)
    }

    pub fn peak_frequency(&self) -> f64 {
        self.frequencies[self.argmax()]
    }

    pub fn log10_power(&self) -> Vec<f64> {
        self.power.iter().map(|&p| libm::log10(p)).collect()
    }
}

/// `variance / |1 + Σ_l a_l·exp(-i2πfl)|²` on a uniform grid.
pub fn ar_spectrum(coefficients: &[C64], variance: f64, nfreq: usize) -> Result<SpectrumGrid> {
    if nfreq < 2 {
        return Err(Error::InvalidParameter("spectrum needs at least two frequency bins"));
    }
    let frequencies = frequency_grid(nfreq);
    let mut power = Vec::with_capacity(nfreq);
    let mut poles = Vec::new();
    for (j, &f) in frequencies.iter().enumerate() {
        let mut den = C64::new(1.0, 0.0);
        for (l, &a) in coefficients.iter().enumerate() {
            den += a * C64::from_polar(1.0, -2.0 * PI * f * (l + 1) as f64);
        }
        let mag = den.norm_sqr();
        if mag < POLE_FLOOR {
            poles.push(j);
            power.push(f64::INFINITY);
        } else {
            power.push(variance / mag);
        }
    }
    Ok(SpectrumGrid {
        frequencies,
        frequencies2: Vec::new(),
        power,
        poles,
    })
}

pub fn ar_spectrum_1d(model: &ArModel1D, nfreq: usize) -> Result<SpectrumGrid> {
    ar_spectrum(&model.coefficients, model.innovation_variance(), nfreq)
}

/// `σ² / |Σ c(l1,l2)·exp(-i2π(f1·l1 + f2·l2))|²` on an `nf1 × nf2` grid.
pub fn ar_spectrum_2d(filter: &QuarterPlaneFilter, nf1: usize, nf2: usize) -> Result<SpectrumGrid> {
    if nf1 < 2 || nf2 < 2 {
        return Err(Error::InvalidParameter("spectrum needs at least two bins per axis"));
    }
    let f1s = frequency_grid(nf1);
    let f2s = frequency_grid(nf2);
    let c = &filter.coefficients;
    let mut power = Vec::with_capacity(nf1 * nf2);
    let mut poles = Vec::new();
    for &f1 in &f1s {
        for &f2 in &f2s {
            let mut den = C64::new(0.0, 0.0);
            for l1 in 0..c.rows() {
                for l2 in 0..c.cols() {
                    let v = c[(l1, l2)];
                    if v != C64::new(0.0, 0.0) {
                        den += v * C64::from_polar(1.0, -2.0 * PI * (f1 * l1 as f64 + f2 * l2 as f64));
                    }
                }
            }
            let mag = den.norm_sqr();
            if mag < POLE_FLOOR {
                poles.push(power.len());
                power.push(f64::INFINITY);
            } else {
                power.push(filter.variance / mag);
            }
        }
    }
    Ok(SpectrumGrid {
        frequencies: f1s,
        frequencies2: f2s,
        power,
        poles,
    })
}

#[cfg(test)]
mod tests {
    extern crate std;

    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::siggen::complex_gaussian_noise;
    use alloc::vec;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn dft_of_impulse_is_flat() {
        let x = [c(1.0), c(0.0), c(0.0), c(0.0)];
        for v in dft(&x) {
            assert!((v - c(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn roundtrip_and_parseval() {
        let x = complex_gaussian_noise(20, 5, 0);
        let spec = dft(&x);
        let back = idft(&spec);
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
        let et: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let ef: f64 = spec.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64;
        assert!((et - ef).abs() < 1e-12 * et);
    }

    #[test]
    fn grid_layout() {
        let f = frequency_grid(1024);
        assert_eq!(f[0], -0.5);
        assert_eq!(f[768], 0.25);
        assert_eq!(f[512], 0.0);
    }

    #[test]
    fn flat_and_first_order_spectra() {
        let flat = ar_spectrum(&[], 1.0, 16).unwrap();
        assert!(flat.power.iter().all(|&p| p == 1.0));

        let s = ar_spectrum(&[c(-0.5)], 1.0, 8).unwrap();
        // f = 0 is bin 4 on an 8-point grid.
        assert!((s.power[4] - 4.0).abs() < 1e-12);
        assert!(ar_spectrum(&[], 1.0, 1).is_err());
    }

    #[test]
    fn pole_is_flagged() {
        let s = ar_spectrum(&[c(-1.0)], 1.0, 8).unwrap();
        assert_eq!(s.poles, vec![4]);
        assert!(s.power[4].is_infinite());
    }

    #[test]
    fn real_coefficients_give_symmetric_spectrum() {
        let a = [c(-0.9), c(0.4), c(0.1)];
        let s = ar_spectrum(&a, 2.0, 64).unwrap();
        // f_j and f_{64-j} are negatives of each other.
        for j in 1..64 {
            assert!((s.power[j] - s.power[64 - j]).abs() < 1e-12 * s.power[j]);
        }
    }

    #[test]
    fn variance_scales_linearly() {
        let a = [C64::new(-0.3, 0.6), c(0.2)];
        let s1 = ar_spectrum(&a, 1.0, 128).unwrap();
        let s3 = ar_spectrum(&a, 3.0, 128).unwrap();
        for (p1, p3) in s1.power.iter().zip(&s3.power) {
            assert!((3.0 * p1 - p3).abs() <= 1e-12 * p3);
        }
        assert_eq!(s1.argmax(), s3.argmax());
    }

    #[test]
    fn impulse_filter_flat_2d() {
        let mut coeffs = ComplexMatrix::zeros(2, 2);
        coeffs[(0, 0)] = c(1.0);
        let f = QuarterPlaneFilter {
            coefficients: coeffs,
            variance: 1.0,
        };
        let s = ar_spectrum_2d(&f, 8, 4).unwrap();
        assert_eq!(s.power.len(), 32);
        assert!(s.power.iter().all(|&p| (p - 1.0).abs() < 1e-15));
    }

    #[test]
    fn separable_filter_factorizes() {
        let a = [c(1.0), C64::new(-0.5, 0.2)];
        let b = [c(1.0), c(0.3), C64::new(0.0, -0.2)];
        let coeffs = ComplexMatrix::from_fn(2, 3, |i, j| a[i] * b[j]);
        let f = QuarterPlaneFilter {
            coefficients: coeffs,
            variance: 2.5,
        };
        let s2 = ar_spectrum_2d(&f, 16, 8).unwrap();
        let sa = ar_spectrum(&a[1..], 1.0, 16).unwrap();
        let sb = ar_spectrum(&b[1..], 1.0, 8).unwrap();
        for i in 0..16 {
            for j in 0..8 {
                let want = 2.5 * sa.power[i] * sb.power[j];
                assert!((s2.power[i * 8 + j] - want).abs() < 1e-12 * want);
            }
        }
    }
}
