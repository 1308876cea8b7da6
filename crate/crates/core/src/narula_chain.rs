//! Markov chain of LDL pivots for the two-tap (Jacobi) channel.
//!
//! Row `n` of the channel carries `a_n` on the main diagonal and `b_n` one
//! column to the left. The pivots of `I + P·HH†` then obey
//! `d_n = 1 + P|a_n|² + P|b_n|²·(1 − P|a_{n−1}|²/d_{n−1})`,
//! so the chain state is the pair `(d_{n−1}, |a_{n−1}|²)`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::band_matrix::{gram, ldl_shifted, BlockBandedChannel};
use crate::error::{Error, Result};
use crate::fading::FadingSpec;
use crate::stream::derive_stream;

pub const DEFAULT_BURN_IN: usize = 1_000;
pub const BATCH_COUNT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainState {
    pub d: f64,
    /// `|a|²` of the row that produced `d`.
    pub a_sq: f64,
}

impl ChainState {
    /// First pivot `1 + P|a₁|² + P|b₁|²` (no previous row).
    pub fn initial(a: Complex64, b: Complex64, power: f64) -> Self {
        let a_sq = a.norm_sqr();
        Self {
            d: 1.0 + power * a_sq + power * b.norm_sqr(),
            a_sq,
        }
    }
}

/// One step of the pivot recursion.
pub fn narula_step(prev: ChainState, a: Complex64, b: Complex64, power: f64) -> ChainState {
    let a_sq = a.norm_sqr();
    let correction = 1.0 - power * prev.a_sq / prev.d;
    let d = 1.0 + power * a_sq + power * b.norm_sqr() * correction;
    debug_assert!(d >= 1.0, "pivot {d} fell below 1");
    ChainState { d, a_sq }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainRun {
    pub power: f64,
    /// Retained steps (after burn-in).
    pub n_steps: usize,
    pub burn_in: usize,
    pub samples: Vec<f64>,
    /// Mean of `ln d` over the retained samples.
    pub ergodic_log_mean: f64,
    /// Batch-means standard error of `ergodic_log_mean`.
    pub std_err: f64,
}

/// Runs the chain with `a_n, b_n ~ CN(0,1)`.
pub fn simulate_chain<R: Rng + ?Sized>(
    power: f64,
    n_steps: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<ChainRun> {
    simulate_chain_with(
        power,
        n_steps,
        burn_in,
        &FadingSpec::ComplexGaussianUnit,
        rng,
    )
}

/// Runs the chain with both taps drawn from `law`, `a` before `b` each step.
pub fn simulate_chain_with<R: Rng + ?Sized>(
    power: f64,
    n_steps: usize,
    burn_in: usize,
    law: &FadingSpec,
    rng: &mut R,
) -> Result<ChainRun> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(Error::InvalidParams(format!(
            "chain power {power} must be > 0"
        )));
    }
    if n_steps < BATCH_COUNT {
        return Err(Error::InvalidParams(format!(
            "need at least {BATCH_COUNT} retained steps (got {n_steps})"
        )));
    }
    let a = law.sample(rng);
    let b = law.sample(rng);
    let mut state = ChainState::initial(a, b, power);
    let mut samples = Vec::with_capacity(n_steps);
    if burn_in == 0 {
        samples.push(state.d);
    }
    for t in 2..=burn_in + n_steps {
        let a = law.sample(rng);
        let b = law.sample(rng);
        state = narula_step(state, a, b, power);
        assert!(state.d >= 1.0, "pivot {} fell below 1", state.d);
        if t > burn_in {
            samples.push(state.d);
        }
    }
    let (ergodic_log_mean, std_err) = batch_means(samples.iter().map(|d| d.ln()), n_steps);
    Ok(ChainRun {
        power,
        n_steps,
        burn_in,
        samples,
        ergodic_log_mean,
        std_err,
    })
}

/// Mean and batch-means standard error with [`BATCH_COUNT`] equal batches
/// (the remainder joins the last batch).
fn batch_means<I: Iterator<Item = f64>>(values: I, n: usize) -> (f64, f64) {
    let size = n / BATCH_COUNT;
    let mut sums = [0.0; BATCH_COUNT];
    let mut counts = [0usize; BATCH_COUNT];
    for (i, v) in values.enumerate() {
        let slot = (i / size).min(BATCH_COUNT - 1);
        sums[slot] += v;
        counts[slot] += 1;
    }
    let total: f64 = sums.iter().sum();
    let mean = total / n as f64;
    let means: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    let bm = means.iter().sum::<f64>() / BATCH_COUNT as f64;
    let var = means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (BATCH_COUNT - 1) as f64;
    (mean, (var / BATCH_COUNT as f64).sqrt())
}

/// Runs `count` independent chains on streams `0..count` of `master_seed`
/// in parallel and returns them in stream order.
pub fn simulate_chains(
    power: f64,
    n_steps: usize,
    burn_in: usize,
    master_seed: u64,
    count: usize,
) -> Result<Vec<ChainRun>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| simulate_chain(power, n_steps, burn_in, &mut derive_stream(master_seed, i)))
        .collect()
}

/// Inverse-variance weighted mean of the runs' ergodic means and its
/// standard error.
pub fn combine_runs(runs: &[ChainRun]) -> Result<(f64, f64)> {
    if runs.is_empty() {
        return Err(Error::InvalidParams("no chain runs to combine".into()));
    }
    if runs.iter().any(|r| !(r.std_err > 0.0)) {
        let m = runs.iter().map(|r| r.ergodic_log_mean).sum::<f64>() / runs.len() as f64;
        return Ok((m, 0.0));
    }
    let (mut wsum, mut acc) = (0.0, 0.0);
    for r in runs {
        let w = 1.0 / (r.std_err * r.std_err);
        wsum += w;
        acc += w * r.ergodic_log_mean;
    }
    Ok((acc / wsum, (1.0 / wsum).sqrt()))
}

/// Pivots of `I + P·HH†` from the recursion and from banded LDL on the same
/// draws; returns the largest absolute difference.
///
/// The matrix has no tap left of its first row, so the recursion starts from
/// `d₁ = 1 + P|a₁|²` here rather than the chain's `1 + P|a₁|² + P|b₁|²`.
pub fn chain_vs_ldl<R: Rng + ?Sized>(n: usize, power: f64, rng: &mut R) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParams("chain_vs_ldl needs N >= 1".into()));
    }
    let law = FadingSpec::ComplexGaussianUnit;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        a.push(law.sample(rng));
        b.push(law.sample(rng));
    }
    b[0] = Complex64::new(0.0, 0.0);
    let mut state = ChainState::initial(a[0], b[0], power);
    let mut recursion = vec![state.d];
    for i in 1..n {
        state = narula_step(state, a[i], b[i], power);
        recursion.push(state.d);
    }
    let h = BlockBandedChannel::from_blocks(n, 1, vec![-1, 0], vec![b, a])?;
    let pivots = ldl_shifted(&gram(&h), power)?;
    Ok(pivots
        .iter()
        .zip(&recursion)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}
