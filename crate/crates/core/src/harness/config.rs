//! Experiment configuration files (one JSON object per experiment).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::band_matrix::{ChannelParams, Diagonal};
use crate::error::{Error, Result};
use crate::fading::FadingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Spectrum,
    #[serde(alias = "capacity_vs_P")]
    CapacityVsP,
    CapacityVsN,
    Moments,
    Narula,
    ExtremeSnr,
    MpCompare,
    PowerProfile,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Spectrum => "spectrum",
            ExperimentKind::CapacityVsP => "capacity_vs_p",
            ExperimentKind::CapacityVsN => "capacity_vs_n",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Narula => "narula",
            ExperimentKind::ExtremeSnr => "extreme_snr",
            ExperimentKind::MpCompare => "mp_compare",
            ExperimentKind::PowerProfile => "power_profile",
        }
    }
}

/// Three-diagonal Wyner layout; `fading` sets every diagonal unless a
/// per-diagonal law overrides it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WynerConfig {
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fading: Option<FadingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fading_a: Option<FadingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fading_b: Option<FadingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fading_c: Option<FadingSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalConfig {
    pub offset: i64,
    pub gain: f64,
    pub fading: FadingSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub k: usize,
    #[serde(default)]
    pub power: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wyner: Option<WynerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonals: Option<Vec<DiagonalConfig>>,
}

fn one() -> usize {
    1
}

impl ChannelConfig {
    pub fn params(&self) -> Result<ChannelParams> {
        self.params_with_alpha(None)
    }

    /// Channel parameters with `α = β = alpha` when `alpha` is given (Wyner
    /// layouts only).
    pub fn params_with_alpha(&self, alpha: Option<f64>) -> Result<ChannelParams> {
        match (&self.wyner, &self.diagonals) {
            (Some(w), None) => {
                let default = w.fading;
                let law = |x: Option<FadingSpec>, name: &str| {
                    x.or(default).ok_or_else(|| {
                        Error::Config(format!("wyner channel needs `fading` or `{name}`"))
                    })
                };
                let (a, b) = match alpha {
                    Some(v) => (v, v),
                    None => (w.alpha, w.beta.unwrap_or(w.alpha)),
                };
                ChannelParams::wyner(
                    self.n,
                    self.k,
                    a,
                    b,
                    law(w.fading_a, "fading_a")?,
                    law(w.fading_b, "fading_b")?,
                    law(w.fading_c, "fading_c")?,
                    self.power,
                )
            }
            (None, Some(diags)) => {
                if alpha.is_some() {
                    return Err(Error::Config(
                        "alpha_grid needs a `wyner` channel, not explicit diagonals".into(),
                    ));
                }
                ChannelParams::new(
                    self.n,
                    self.k,
                    diags
                        .iter()
                        .map(|d| Diagonal::new(d.offset, d.gain, d.fading))
                        .collect(),
                    self.power,
                )
            }
            _ => Err(Error::Config(
                "channel needs exactly one of `wyner` or `diagonals`".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub channel: ChannelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_grid: Option<Vec<f64>>,
    /// Low-SNR fit points for `extreme_snr`.
    #[serde(default = "default_low_snr_grid")]
    pub low_snr_grid: Vec<f64>,
    /// High-SNR fit points for `extreme_snr`.
    #[serde(default = "default_high_snr_grid")]
    pub high_snr_grid: Vec<f64>,
    #[serde(default = "one")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    #[serde(default = "default_chain_steps")]
    pub chain_steps: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    /// Leading retained chain samples written per grid point.
    #[serde(default = "default_chain_rows")]
    pub chain_sample_rows: usize,
}

fn default_low_snr_grid() -> Vec<f64> {
    vec![1e-3, 2e-3]
}

fn default_high_snr_grid() -> Vec<f64> {
    vec![1e4, 1e6]
}

fn default_bins() -> usize {
    200
}

fn default_chain_steps() -> usize {
    1_000_000
}

fn default_burn_in() -> usize {
    crate::narula_chain::DEFAULT_BURN_IN
}

fn default_chain_rows() -> usize {
    1_000
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        if self.histogram_bins == 0 {
            return Err(Error::Config("histogram_bins must be >= 1".into()));
        }
        check_grid("p_grid", self.p_grid.as_deref())?;
        check_grid("alpha_grid", self.alpha_grid.as_deref())?;
        check_grid("low_snr_grid", Some(&self.low_snr_grid))?;
        check_grid("high_snr_grid", Some(&self.high_snr_grid))?;
        if let Some(ns) = &self.n_grid {
            let as_f: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
            check_grid("n_grid", Some(&as_f))?;
        }
        if let Some(ps) = &self.p_grid {
            if ps.iter().any(|&p| p < 0.0) {
                return Err(Error::Config("p_grid values must be >= 0".into()));
            }
        }
        for (name, grid) in [
            ("low_snr_grid", &self.low_snr_grid),
            ("high_snr_grid", &self.high_snr_grid),
        ] {
            if grid.len() < 2 || grid[0] <= 0.0 {
                return Err(Error::Config(format!("{name} needs >= 2 positive points")));
            }
        }
        match self.kind {
            ExperimentKind::CapacityVsP if self.p_grid.is_none() => {
                return Err(Error::Config("capacity_vs_p needs p_grid".into()))
            }
            ExperimentKind::CapacityVsN if self.n_grid.is_none() => {
                return Err(Error::Config("capacity_vs_n needs n_grid".into()))
            }
            ExperimentKind::Narula => {
                if self.chain_steps < crate::narula_chain::BATCH_COUNT {
                    return Err(Error::Config(format!(
                        "chain_steps must be >= {}",
                        crate::narula_chain::BATCH_COUNT
                    )));
                }
                if self
                    .p_grid
                    .as_ref()
                    .is_some_and(|g| g.iter().any(|&p| p <= 0.0))
                {
                    return Err(Error::Config("narula p_grid values must be > 0".into()));
                }
            }
            _ => {}
        }
        // Surface channel errors as configuration errors.
        let base = self
            .channel
            .params()
            .map_err(|e| Error::Config(format!("channel: {e}")))?;
        if let Some(alphas) = &self.alpha_grid {
            for &a in alphas {
                self.channel
                    .params_with_alpha(Some(a))
                    .map_err(|e| Error::Config(format!("channel at alpha={a}: {e}")))?;
            }
        }
        if let Some(ns) = &self.n_grid {
            for &n in ns {
                base.with_n(n)
                    .map_err(|e| Error::Config(format!("channel at N={n}: {e}")))?;
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, ignoring where outputs go.
    pub fn digest(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = None;
        let json = serde_json::to_string(&canonical).expect("config serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Grid of powers, falling back to the channel's power.
    pub fn powers(&self) -> Vec<f64> {
        self.p_grid
            .clone()
            .unwrap_or_else(|| vec![self.channel.power])
    }
}

fn check_grid(name: &str, grid: Option<&[f64]>) -> Result<()> {
    let Some(g) = grid else { return Ok(()) };
    if g.is_empty() {
        return Err(Error::Config(format!("{name} is empty")));
    }
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config(format!("{name} has a non-finite value")));
    }
    if g.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!("{name} must be strictly increasing")));
    }
    Ok(())
}
