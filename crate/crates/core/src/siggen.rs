//! Seeded synthesis of noisy complex sinusoids at an exact SNR.
//!
//! # Random stream
//!
//! All randomness comes from SplitMix64 (Steele, Lea & Flood 2014):
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! A stream is identified by `(seed, substream, attempt)`. Its initial state
//! is derived by chaining single SplitMix64 draws:
//!
//! ```text
//! s0 = first output of SplitMix64 started at state `seed`
//! s1 = first output of SplitMix64 started at state `s0 ^ substream`
//! state = s1 ^ attempt
//! ```
//!
//! Uniforms are `(next >> 11) * 2^-53` in `[0, 1)`. Each complex Gaussian
//! sample uses one Box–Muller pair: `u1 = 1 - uniform`, `u2 = uniform`,
//! `r = sqrt(-ln(u1))`, sample `= r·(cos 2πu2 + i sin 2πu2)`, which has
//! unit variance `E|z|² = 1`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::autocorr::{ComplexSignal1D, Signal2D};
use crate::error::{Error, Result};
use crate::spectrum::{dft, idft};
use crate::C64;

/// Unit-variance circular complex Gaussian stream.
pub struct NoiseStream {
    rng: SplitMix64,
}

impl NoiseStream {
    pub fn new(seed: u64, substream: u64, attempt: u64) -> Self {
        let s0 = SplitMix64::from_seed(seed.to_le_bytes()).next_u64();
        let s1 = SplitMix64::from_seed((s0 ^ substream).to_le_bytes()).next_u64();
        Self {
            rng: SplitMix64::from_seed((s1 ^ attempt).to_le_bytes()),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_gaussian(&mut self) -> C64 {
        let u1 = 1.0 - self.next_uniform();
        let u2 = self.next_uniform();
        let r = libm::sqrt(-libm::log(u1));
        let theta = 2.0 * PI * u2;
        C64::new(r * libm::cos(theta), r * libm::sin(theta))
    }
}

/// `len` unit-variance complex Gaussian samples from stream `(seed, substream, 0)`.
pub fn complex_gaussian_noise(len: usize, seed: u64, substream: u64) -> Vec<C64> {
    let mut stream = NoiseStream::new(seed, substream, 0);
    (0..len).map(|_| stream.next_gaussian()).collect()
}

/// Complex white Gaussian record, used for randomized checks.
pub fn random_signal(len: usize, seed: u64) -> ComplexSignal1D {
    ComplexSignal1D::new(complex_gaussian_noise(len, seed, 0)).expect("gaussian samples are finite")
}

/// Complex white Gaussian grid with `rows × cols` samples.
pub fn random_grid(rows: usize, cols: usize, seed: u64) -> Signal2D {
    Signal2D::new(rows, cols, complex_gaussian_noise(rows * cols, seed, 0)).expect("gaussian samples are finite")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    Noiseless,
    Db(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub len: usize,
    /// Normalized frequency in cycles/sample, `[-0.5, 0.5)`.
    pub freq: f64,
    /// Radians.
    pub phase: f64,
    pub snr: Snr,
    pub seed: u64,
}

impl SynthConfig {
    /// The sinusoid used throughout the experiments: 20 samples at
    /// `f = 0.25`, 30 dB.
    pub fn reference(seed: u64) -> Self {
        Self {
            len: 20,
            freq: 0.25,
            phase: 0.0,
            snr: Snr::Db(30.0),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.len < 2 {
            return Err(Error::InvalidParameter("signal length must be at least 2"));
        }
        if !(self.freq >= -0.5 && self.freq < 0.5) {
            return Err(Error::InvalidParameter("frequency must lie in [-0.5, 0.5)"));
        }
        if !self.phase.is_finite() {
            return Err(Error::InvalidParameter("phase must be finite"));
        }
        if let Snr::Db(db) = self.snr {
            if !db.is_finite() {
                return Err(Error::InvalidParameter("snr must be finite"));
            }
        }
        Ok(())
    }
}

/// Time-domain parts of a synthesized record. `signal = clean + noise`
/// up to rounding.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub clean: Vec<C64>,
    pub noise: Vec<C64>,
    pub signal: ComplexSignal1D,
    /// Regeneration attempts needed (0 unless a drawn noise vector vanished).
    pub attempt: u64,
}

impl Synthesis {
    pub fn realized_snr_db(&self) -> f64 {
        realized_snr_db(&self.clean, &self.noise)
    }
}

/// `10·log10(Σ|clean|² / Σ|noise|²)`.
pub fn realized_snr_db(clean: &[C64], noise: &[C64]) -> f64 {
    let ps: f64 = clean.iter().map(|v| v.norm_sqr()).sum();
    let pn: f64 = noise.iter().map(|v| v.norm_sqr()).sum();
    10.0 * libm::log10(ps / pn)
}

/// Builds the sinusoid spectrum, adds frequency-domain noise rescaled to the
/// exact energy ratio, and returns to the time domain with the inverse DFT.
pub fn synthesize(cfg: &SynthConfig, substream: u64) -> Result<Synthesis> {
    cfg.validate()?;
    let n = cfg.len;
    let tone: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * cfg.freq * k as f64 + cfg.phase))
        .collect();
    let tone_spec = dft(&tone);

    let (noise_spec, attempt) = match cfg.snr {
        Snr::Noiseless => (alloc::vec![C64::new(0.0, 0.0); n], 0),
        Snr::Db(db) => {
            let signal_energy: f64 = tone_spec.iter().map(|v| v.norm_sqr()).sum();
            let target = signal_energy / libm::pow(10.0, db / 10.0);
            let mut attempt = 0;
            loop {
                let mut stream = NoiseStream::new(cfg.seed, substream, attempt);
                let draw: Vec<C64> = (0..n).map(|_| stream.next_gaussian()).collect();
                let energy: f64 = draw.iter().map(|v| v.norm_sqr()).sum();
                if energy > 0.0 {
                    let gain = libm::sqrt(target / energy);
                    break (draw.into_iter().map(|v| v * gain).collect(), attempt);
                }
                attempt += 1;
            }
        }
    };

    let mixed: Vec<C64> = tone_spec.iter().zip(&noise_spec).map(|(a, b)| a + b).collect();
    Ok(Synthesis {
        clean: idft(&tone_spec),
        noise: idft(&noise_spec),
        signal: ComplexSignal1D::new(idft(&mixed))?,
        attempt,
    })
}

pub fn gen_noisy_sinusoid(cfg: &SynthConfig) -> Result<ComplexSignal1D> {
    Ok(synthesize(cfg, 0)?.signal)
}

/// Phase `2π·j/steps` for step `j`.
pub fn sweep_phase(step: usize, steps: usize) -> f64 {
    2.0 * PI * step as f64 / steps as f64
}

/// One synthesis per phase step; step `j` draws its noise from substream `j`.
/// The base config's phase is ignored.
pub fn phase_sweep_synthesis(base: &SynthConfig, steps: usize) -> Result<Vec<Synthesis>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("phase sweep needs at least one step"));
    }
    (0..steps)
        .map(|j| {
            let cfg = SynthConfig {
                phase: sweep_phase(j, steps),
                ..*base
            };
            synthesize(&cfg, j as u64)
        })
        .collect()
}

pub fn phase_sweep(base: &SynthConfig, steps: usize) -> Result<Vec<ComplexSignal1D>> {
    Ok(phase_sweep_synthesis(base, steps)?
        .into_iter()
        .map(|s| s.signal)
        .collect())
}
