//! Seeded, replicated experiments and their CSV reports.
//!
//! Replicate `r` of grid point `i` draws from stream `(i << 32) | r` of the
//! configured master seed (see [`derive_stream`]). Replicates run on the rayon
//! pool, land in slots indexed by replicate number, and are reduced in index
//! order, so reports do not depend on scheduling or `--jobs`.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;

use rayon::prelude::*;

pub use crate::stream::{derive_stream, Stream};
pub use config::{ChannelConfig, DiagonalConfig, ExperimentConfig, ExperimentKind, WynerConfig};
pub use output::{fmt_f64, fmt_opt, write_tables, Table};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default pool.
    pub jobs: Option<usize>,
    pub emit_gnuplot: bool,
}

/// One reported quantity at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// Grid coordinates, formatted, in `ExperimentResult::key_names` order.
    pub key: Vec<String>,
    pub estimate: f64,
    pub std_err: f64,
    /// Replicates that contributed.
    pub replicates: usize,
    pub failed: usize,
    pub reference: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub config_digest: String,
    pub key_names: Vec<String>,
    pub rows: Vec<ResultRow>,
    /// Every table written, including `result`.
    pub tables: Vec<Table>,
    pub files: Vec<PathBuf>,
}

impl ExperimentResult {
    /// Row whose key matches `key` exactly.
    pub fn row(&self, key: &[&str]) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.key.iter().map(String::as_str).eq(key.iter().copied()))
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// True when no row received a single successful replicate.
    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.replicates == 0 && r.failed > 0)
    }

    pub fn metadata(&self) -> Vec<(&'static str, String)> {
        vec![
            ("bandspec", env!("CARGO_PKG_VERSION").to_string()),
            ("kind", self.kind.name().to_string()),
            ("config_sha256", self.config_digest.clone()),
            ("seed", self.seed.to_string()),
        ]
    }
}

/// Mean and standard error over replicate slots (`None` = failed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation over `√R`; NaN when `R < 2`.
    pub std_err: f64,
    pub replicates: usize,
    pub failed: usize,
}

/// Reduces slots strictly in index order.
pub fn summarize(slots: &[Option<f64>]) -> Summary {
    let ok: Vec<f64> = slots
        .iter()
        .filter_map(|s| s.filter(|v| v.is_finite()))
        .collect();
    let failed = slots.len() - ok.len();
    let r = ok.len();
    if r == 0 {
        return Summary {
            mean: f64::NAN,
            std_err: f64::NAN,
            replicates: 0,
            failed,
        };
    }
    let mean = ok.iter().sum::<f64>() / r as f64;
    let std_err = if r < 2 {
        f64::NAN
    } else {
        let var = ok.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1) as f64;
        (var / r as f64).sqrt()
    };
    Summary {
        mean,
        std_err,
        replicates: r,
        failed,
    }
}

/// Stream index of replicate `r` at grid point `point`.
pub fn stream_index(point: usize, replicate: usize) -> u64 {
    ((point as u64) << 32) | replicate as u64
}

/// Runs `count` replicates of `f` in parallel; slot `r` holds replicate `r`.
pub fn run_replicates<T, F>(seed: u64, point: usize, count: usize, f: F) -> Vec<Result<T>>
where
    T: Send,
    F: Fn(usize, &mut Stream) -> Result<T> + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|r| f(r, &mut derive_stream(seed, stream_index(point, r))))
        .collect()
}

/// Runs the configured experiment and, when `output_dir` is set, writes its
/// tables there.
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions) -> Result<ExperimentResult> {
    config.validate()?;
    let mut result = match options.jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| experiments::run(config))?
        }
        None => experiments::run(config)?,
    };
    if let Some(dir) = &config.output_dir {
        let metadata = result.metadata();
        result.files = write_tables(dir, &result.tables, &metadata, options.emit_gnuplot)?;
    }
    Ok(result)
}
