use std::path::{Path, PathBuf};
use std::time::Instant;

use arspec_core::siggen::random_grid;
use arspec_core::{ar_spectrum_1d, ar_spectrum_2d, extract_quarter_plane_filter, gen_noisy_sinusoid};

use crate::args::{Command, Experiment};
use crate::error::{CliError, Result};
use crate::experiments::{
    equivalence, estimate_1d, estimate_2d, mse_vs_order, order_sweep_spectra, phase_sweep_spectra, synth_config,
    SpectrumMatrix,
};
use crate::formats::*;
use crate::manifest::{read_manifest, write_manifests};

/// `dir/stem.tag.ext` next to `path`.
pub fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn write_matrix(path: &Path, m: &SpectrumMatrix, values: &[Vec<f64>]) -> Result<()> {
    let mut header = vec![m.key.to_string()];
    header.extend(m.frequencies.iter().map(|f| fmt_f64(*f)));
    let rows = m.keys.iter().zip(values).map(|(k, row)| {
        let mut r = Vec::with_capacity(row.len() + 1);
        r.push(if m.key == "order" { format!("{}", *k as usize) } else { fmt_f64(*k) });
        r.extend(row.iter().map(|v| fmt_f64(*v)));
        r
    });
    write_csv(path, &header, rows)
}

fn write_matrix_pair(output: &Path, m: &SpectrumMatrix) -> Result<Vec<PathBuf>> {
    let log_path = sibling(output, "log10");
    write_matrix(output, m, &m.power)?;
    write_matrix(&log_path, m, &m.log10())?;
    Ok(vec![output.to_path_buf(), log_path])
}

/// Executes one command and returns the files it wrote (manifests excluded).
fn execute(command: &Command) -> Result<Vec<PathBuf>> {
    match command {
        Command::Gen(a) => {
            let x = gen_noisy_sinusoid(&synth_config(&a.synth))?;
            write_signal_1d(&a.output, &x)?;
            Ok(vec![a.output.clone()])
        }
        Command::GenGrid(a) => {
            if a.rows == 0 || a.cols == 0 {
                return Err(CliError::Usage("--rows and --cols must be positive".into()));
            }
            write_signal_2d(&a.output, &random_grid(a.rows, a.cols, a.seed))?;
            Ok(vec![a.output.clone()])
        }
        Command::Est1d(a) => {
            let x = read_signal_1d(&a.input)?;
            let model = estimate_1d(a.method, &x, a.order)?;
            let doc = ModelFile::Ar1d(Model1DJson::new(a.method.name(), x.len(), &model));
            write_json(&a.output, &doc)?;
            Ok(vec![a.output.clone()])
        }
        Command::Est2d(a) => {
            let x = read_signal_2d(&a.input)?;
            let model = estimate_2d(a.method, &x, a.n1, a.n2)?;
            let filter = extract_quarter_plane_filter(&model);
            write_json(&a.output, &ModelFile::Ar2d(Model2DJson::new(a.method.name(), &x, &model)))?;
            write_json(
                &a.filter_output,
                &ModelFile::QuarterPlaneFilter(FilterJson::new(a.method.name(), &filter)),
            )?;
            Ok(vec![a.output.clone(), a.filter_output.clone()])
        }
        Command::Spectrum(a) => {
            let nf2 = a.nfreq2.unwrap_or(a.nfreq);
            let grid = match read_json::<ModelFile>(&a.input)? {
                ModelFile::Ar1d(m) => ar_spectrum_1d(&m.to_model(), a.nfreq)?,
                ModelFile::Ar2d(m) => ar_spectrum_2d(&m.to_filter(&a.input)?, a.nfreq, nf2)?,
                ModelFile::QuarterPlaneFilter(f) => ar_spectrum_2d(&f.to_filter(&a.input)?, a.nfreq, nf2)?,
            };
            write_spectrum(&a.output, &grid)?;
            Ok(vec![a.output.clone()])
        }
        Command::Experiment(Experiment::PhaseSweep(a)) => {
            let m = phase_sweep_spectra(&a.synth, a.steps, a.method, a.order, a.nfreq)?;
            write_matrix_pair(&a.output, &m)
        }
        Command::Experiment(Experiment::OrderSweep(a)) => {
            let m = order_sweep_spectra(&a.synth, a.method, a.max_order, a.nfreq)?;
            write_matrix_pair(&a.output, &m)
        }
        Command::Experiment(Experiment::MseVsOrder(a)) => {
            let t = mse_vs_order(&a.synth, a.max_order, &a.methods)?;
            let rows = t.orders.iter().zip(&t.rows).map(|(o, row)| {
                let mut r = vec![o.to_string()];
                r.extend(row.iter().map(|v| fmt_f64(*v)));
                r
            });
            write_csv(&a.output, &t.header(), rows)?;
            Ok(vec![a.output.clone()])
        }
        Command::Experiment(Experiment::Equivalence(a)) => {
            write_json(&a.output, &equivalence(a.trials, a.seed)?)?;
            Ok(vec![a.output.clone()])
        }
        Command::Replay(_) => unreachable!("replay is resolved before execution"),
    }
}

/// Runs a command, writing its outputs and one manifest per output.
pub fn run(command: Command) -> Result<Vec<PathBuf>> {
    let command = match command {
        Command::Replay(r) => {
            let mut recorded = read_manifest(&r.manifest)?.command;
            if matches!(recorded, Command::Replay(_)) {
                return Err(CliError::input(&r.manifest, "manifest records a replay"));
            }
            if let Some(dir) = &r.into {
                recorded.redirect_outputs(dir);
            }
            recorded
        }
        other => other,
    };
    let start = Instant::now();
    let outputs = execute(&command)?;
    write_manifests(&command, &outputs, start.elapsed())?;
    Ok(outputs)
}
