//! Empirical spectral statistics: ECDF, Shannon transform, moments (from
//! eigenvalues or directly from band traces), Kolmogorov–Smirnov distance,
//! and the expected power profile of the channel matrix.

use crate::band_matrix::{BandedHermitian, ChannelParams};
use crate::error::{Error, Result};

/// Sorted eigenvalues of an order-N Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSpectrum {
    eigenvalues: Vec<f64>,
}

/// One histogram bin over `[left, right)` (the last bin is closed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
    pub cum_fraction: f64,
}

impl EmpiricalSpectrum {
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues }
    }

    pub(crate) fn from_sorted(eigenvalues: Vec<f64>) -> Self {
        debug_assert!(eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        Self { eigenvalues }
    }

    /// Pools several spectra into one (used for ensemble ECDFs).
    pub fn pooled<'a, I: IntoIterator<Item = &'a EmpiricalSpectrum>>(spectra: I) -> Self {
        Self::new(
            spectra
                .into_iter()
                .flat_map(|s| s.eigenvalues.iter().copied())
                .collect(),
        )
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Multiplies every eigenvalue by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_sorted(self.eigenvalues.iter().map(|x| x * factor).collect())
    }

    /// `(1/N)·#{λ_i ≤ x}`.
    pub fn ecdf(&self, x: f64) -> f64 {
        if self.eigenvalues.is_empty() {
            return 0.0;
        }
        let count = self.eigenvalues.partition_point(|&v| v <= x);
        count as f64 / self.len() as f64
    }

    /// `(1/N)·Σ ln(1 + ρ·λ_i)` in nats.
    pub fn shannon_transform(&self, rho: f64) -> f64 {
        if self.eigenvalues.is_empty() {
            return 0.0;
        }
        self.eigenvalues
            .iter()
            .map(|&l| (rho * l).ln_1p())
            .sum::<f64>()
            / self.len() as f64
    }

    /// `(1/N)·Σ λ_i^p`.
    pub fn moment(&self, p: u32) -> f64 {
        if self.eigenvalues.is_empty() {
            return 0.0;
        }
        self.eigenvalues
            .iter()
            .map(|l| l.powi(p as i32))
            .sum::<f64>()
            / self.len() as f64
    }

    /// Supremum of `|ECDF − F|`, attained at a jump point: at each distinct
    /// eigenvalue `x` compare `F(x)` with `ECDF(x)` and the left limit of `F`
    /// with `ECDF(x⁻)`.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.len() as f64;
        let mut sup: f64 = 0.0;
        let mut below = 0;
        while below < self.len() {
            let x = self.eigenvalues[below];
            let upto = below + self.eigenvalues[below..].partition_point(|&v| v <= x);
            let right = (cdf(x) - upto as f64 / n).abs();
            let left = (cdf(x.next_down()) - below as f64 / n).abs();
            sup = sup.max(right).max(left);
            below = upto;
        }
        sup
    }

    /// Equal-width histogram over `[0, λ_max]`.
    pub fn histogram(&self, bins: usize) -> Vec<HistogramBin> {
        let bins = bins.max(1);
        let top = self.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
        let width = if top > 0.0 {
            top / bins as f64
        } else {
            1.0 / bins as f64
        };
        let mut counts = vec![0usize; bins];
        for &x in &self.eigenvalues {
            let idx = ((x.max(0.0) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        let total = self.len().max(1) as f64;
        let mut cum = 0;
        counts
            .into_iter()
            .enumerate()
            .map(|(b, count)| {
                cum += count;
                HistogramBin {
                    left: b as f64 * width,
                    right: (b + 1) as f64 * width,
                    count,
                    cum_fraction: cum as f64 / total,
                }
            })
            .collect()
    }
}

/// `(1/N)·tr(A^p)` for `p ∈ {1, 2, 3}` straight from the band, in O(N·b^p).
pub fn trace_moment(a: &BandedHermitian, p: u32) -> Result<f64> {
    let n = a.order();
    if n == 0 {
        return Ok(0.0);
    }
    let b = a.bandwidth();
    let window = |i: usize| i.saturating_sub(b)..=(i + b).min(n - 1);
    let total = match p {
        1 => a.trace(),
        2 => a.frobenius_norm_sqr(),
        3 => {
            let mut acc = 0.0;
            for i in 0..n {
                for j in window(i) {
                    let aij = a.get(i, j);
                    let lo = i.max(j).saturating_sub(b);
                    let hi = (i.min(j) + b).min(n - 1);
                    for k in lo..=hi {
                        acc += (aij * a.get(j, k) * a.get(k, i)).re;
                    }
                }
            }
            acc
        }
        _ => {
            return Err(Error::Domain(format!(
                "trace moments are implemented for p = 1, 2, 3 (got {p})"
            )))
        }
    };
    Ok(total / n as f64)
}

/// Expected power profile sampled on a `rows × cols` grid of cell midpoints
/// over `[0,1)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProfile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major values.
    pub values: Vec<f64>,
}

impl PowerProfile {
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn sup_distance(&self, other: &PowerProfile) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Domain(
                "power profiles sampled on different grids".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max))
    }
}

/// `E|[H_N]_{i,j}|²` at the point `(r, t) ∈ [0,1)²`.
pub fn power_profile_at(params: &ChannelParams, r: f64, t: f64) -> f64 {
    let n = params.n();
    let cols = n * params.k();
    let i = ((r * n as f64).floor() as usize).min(n - 1);
    let j = ((t * cols as f64).floor() as usize).min(cols - 1);
    let offset = (j / params.k()) as i64 - i as i64;
    params
        .diagonal_at(offset)
        .map_or(0.0, |d| d.gain * d.gain * d.fading.second_moment())
}

/// Samples the power profile at the midpoints of a `rows × cols` grid.
pub fn power_profile(params: &ChannelParams, rows: usize, cols: usize) -> PowerProfile {
    let mut values = Vec::with_capacity(rows * cols);
    for u in 0..rows {
        let r = (u as f64 + 0.5) / rows as f64;
        for v in 0..cols {
            let t = (v as f64 + 0.5) / cols as f64;
            values.push(power_profile_at(params, r, t));
        }
    }
    PowerProfile { rows, cols, values }
}

/// `sup |P_N − P_{2N}|` on the common refinement (the `2N × 2NK` grid).
pub fn power_profile_gap(params: &ChannelParams) -> Result<f64> {
    let doubled = params.with_n(2 * params.n())?;
    let rows = 2 * params.n();
    let cols = rows * params.k();
    power_profile(params, rows, cols).sup_distance(&power_profile(&doubled, rows, cols))
}
