//! Analytic capacity and spectrum baselines for the Wyner / two-tap ISI
//! ensembles, with the quadrature and special functions they rely on.
//!
//! All capacities are per cell (or per symbol) in nats unless a name says
//! otherwise.

pub mod expint;
pub mod quadrature;

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fading::FadingSpec;
use crate::stream::derive_stream;

pub use expint::{exp_integral, exp_integral_scaled};
pub use quadrature::{integrate, integrate_to_infinity, Quadrature, DEFAULT_ABS_TOL};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Number of draws used when a log-amplitude expectation has no closed form.
pub const LOG_AMPLITUDE_SAMPLES: usize = 10_000_000;

/// Master seed of the Monte Carlo fallback in [`mean_log2_amplitude`].
pub const LOG_AMPLITUDE_SEED: u64 = 0x6c6f_6732_6162_7321;

/// Non-fading Wyner capacity `∫_0^1 ln(1 + P(1 + 2α cos 2πf)²) df`.
pub fn wyner_capacity_nonfading(power: f64, alpha: f64) -> Result<f64> {
    check_power(power)?;
    if power == 0.0 {
        return Ok(0.0);
    }
    if alpha == 0.0 {
        return Ok(power.ln_1p());
    }
    // Even in f about 1/2.
    let q = integrate(
        |f: f64| {
            let g = 1.0 + 2.0 * alpha * (2.0 * PI * f).cos();
            (power * g * g).ln_1p()
        },
        0.0,
        0.5,
        0.5 * DEFAULT_ABS_TOL,
    )?;
    Ok(2.0 * q.value)
}

/// The first three limiting moments of the symmetric Wyner Gram spectrum
/// (`K = 1`, uniform-phase fading, one law on all diagonals).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitingMoments {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

impl LimitingMoments {
    pub fn get(&self, p: u32) -> Option<f64> {
        match p {
            1 => Some(self.m1),
            2 => Some(self.m2),
            3 => Some(self.m3),
            _ => None,
        }
    }
}

/// Evaluates the limiting-moment polynomials in the amplitude moments
/// `m2, m4, m6` and the cross gain `α`.
pub fn limiting_moments(m2: f64, m4: f64, m6: f64, alpha: f64) -> LimitingMoments {
    let a2 = alpha * alpha;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let m2_sq = m2 * m2;
    let m2_cu = m2_sq * m2;
    LimitingMoments {
        m1: m2 + 2.0 * m2 * a2,
        m2: m4 + 8.0 * m2_sq * a2 + (4.0 * m2_sq + 2.0 * m4) * a4,
        m3: m6
            + (6.0 * m2_cu + 12.0 * m2 * m4) * a2
            + (36.0 * m2_cu + 12.0 * m2 * m4) * a4
            + (6.0 * m2_cu + 12.0 * m2 * m4 + 2.0 * m6) * a6,
    }
}

/// [`limiting_moments`] for a fading law, which must have uniform phase.
pub fn limiting_moments_for(spec: &FadingSpec, alpha: f64) -> Result<LimitingMoments> {
    if !spec.has_uniform_phase() {
        return Err(Error::Domain(format!(
            "limiting moments need a uniform-phase law (got `{spec}`)"
        )));
    }
    Ok(limiting_moments(
        spec.amplitude_moment(2)?,
        spec.amplitude_moment(4)?,
        spec.amplitude_moment(6)?,
        alpha,
    ))
}

/// Large-K Wyner capacity
/// `∫_0^1 ln(1 + P[σ²(1+2α²) + |μ|²(1 + 2α cos 2πθ)²]) dθ`, `σ² = m2 − |μ|²`.
pub fn wyner_capacity_large_k(power: f64, alpha: f64, m2: f64, mu: Complex64) -> Result<f64> {
    check_power(power)?;
    let mean_sq = mu.norm_sqr();
    let variance = m2 - mean_sq;
    if variance < -1e-12 * m2.abs().max(1.0) {
        return Err(Error::Domain(format!(
            "m2 = {m2} is below |mu|^2 = {mean_sq}"
        )));
    }
    let variance = variance.max(0.0);
    if power == 0.0 {
        return Ok(0.0);
    }
    let diffuse = variance * (1.0 + 2.0 * alpha * alpha);
    if mean_sq == 0.0 || alpha == 0.0 {
        return Ok((power * (diffuse + mean_sq)).ln_1p());
    }
    let q = integrate(
        |t: f64| {
            let g = 1.0 + 2.0 * alpha * (2.0 * PI * t).cos();
            (power * (diffuse + mean_sq * g * g)).ln_1p()
        },
        0.0,
        0.5,
        0.5 * DEFAULT_ABS_TOL,
    )?;
    Ok(2.0 * q.value)
}

/// Stationary density of the Cholesky-pivot chain,
/// `ln(x)·e^{-x/P̄} / (E1(1/P̄)·P̄)` on `x ≥ 1`.
pub fn narula_stationary_pdf(x: f64, pbar: f64) -> Result<f64> {
    check_pbar(pbar)?;
    if !(x >= 1.0) {
        return Ok(0.0);
    }
    let norm = exp_integral_scaled(1.0 / pbar)? * pbar;
    Ok(x.ln() * (-(x - 1.0) / pbar).exp() / norm)
}

/// CDF of the stationary density:
/// `1 − e^{-(x−1)/P̄}·(ln x + e^{x/P̄}E1(x/P̄)) / (e^{1/P̄}E1(1/P̄))`.
pub fn narula_stationary_cdf(x: f64, pbar: f64) -> Result<f64> {
    check_pbar(pbar)?;
    if !(x > 1.0) {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let tail = (-(x - 1.0) / pbar).exp() * (x.ln() + exp_integral_scaled(x / pbar)?)
        / exp_integral_scaled(1.0 / pbar)?;
    Ok((1.0 - tail).clamp(0.0, 1.0))
}

/// Ergodic capacity of the two-tap chain, `∫_1^∞ (ln x)² f_d(x) dx`, by
/// semi-infinite quadrature after `x = 1 + P̄·t`.
pub fn narula_capacity(pbar: f64) -> Result<f64> {
    check_pbar(pbar)?;
    let norm = exp_integral_scaled(1.0 / pbar)?;
    let q = integrate_to_infinity(
        |t: f64| {
            let l = (pbar * t).ln_1p();
            l * l * (-t).exp()
        },
        0.0,
        1e-9 * norm,
    )?;
    Ok(q.value / norm)
}

/// Low-SNR pair: minimum transmit `Eb/N0` (linear) and slope `S0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowSnrParams {
    pub eb_n0_min: f64,
    pub s0: f64,
}

pub fn low_snr_params(k: usize, alpha: f64, m2: f64, m4: f64) -> Result<LowSnrParams> {
    if !(m2 > 0.0) || k == 0 {
        return Err(Error::Domain(format!(
            "need m2 > 0 and K >= 1 (got m2={m2}, K={k})"
        )));
    }
    let kurt = m4 / (m2 * m2);
    let kf = k as f64;
    let a2 = alpha * alpha;
    let a4 = a2 * a2;
    let gain = 1.0 + 2.0 * a2;
    let denom = kurt + kf - 1.0 + 4.0 * (1.0 + kf) * a2 + 2.0 * (kurt + 2.0 * kf) * a4;
    Ok(LowSnrParams {
        eb_n0_min: LN_2 / (m2 * gain),
        s0: 2.0 * kf * gain * gain / denom,
    })
}

/// `E log2|h|`, exact where known, otherwise a Monte Carlo mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAmplitude {
    pub mean: f64,
    /// Zero for analytic values.
    pub std_err: f64,
}

pub fn mean_log2_amplitude(spec: &FadingSpec) -> Result<LogAmplitude> {
    match *spec {
        FadingSpec::Deterministic | FadingSpec::UniformPhaseUnit => Ok(LogAmplitude {
            mean: 0.0,
            std_err: 0.0,
        }),
        // E ln|h|² = −γ for |h|² ~ Exp(1)
        FadingSpec::ComplexGaussianUnit => Ok(LogAmplitude {
            mean: -EULER_GAMMA / (2.0 * LN_2),
            std_err: 0.0,
        }),
        FadingSpec::Rician {
            mean,
            diffuse_variance,
        } => {
            if diffuse_variance == 0.0 {
                if mean.norm() == 0.0 {
                    return Err(Error::DivergentOffset(spec.to_string()));
                }
                return Ok(LogAmplitude {
                    mean: mean.norm().log2(),
                    std_err: 0.0,
                });
            }
            let mut rng = derive_stream(LOG_AMPLITUDE_SEED, 0);
            let n = LOG_AMPLITUDE_SAMPLES;
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..n {
                let v = 0.5 * spec.sample(&mut rng).norm_sqr().log2();
                sum += v;
                sum_sq += v * v;
            }
            let m = sum / n as f64;
            let var = (sum_sq / n as f64 - m * m).max(0.0);
            Ok(LogAmplitude {
                mean: m,
                std_err: (var / n as f64).sqrt(),
            })
        }
    }
}

/// High-SNR pair for the two-diagonal channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrParams {
    pub s_inf: f64,
    /// Power offset in 3-dB units.
    pub l_inf: f64,
    pub l_inf_std_err: f64,
}

pub fn high_snr_params(pi_a: &FadingSpec, pi_b: &FadingSpec) -> Result<HighSnrParams> {
    let a = mean_log2_amplitude(pi_a)?;
    let b = mean_log2_amplitude(pi_b)?;
    let top = if a.mean >= b.mean { a } else { b };
    Ok(HighSnrParams {
        s_inf: 1.0,
        l_inf: -2.0 * top.mean,
        l_inf_std_err: 2.0 * top.std_err,
    })
}

/// Both extreme-SNR pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeSnrParams {
    pub eb_n0_min: f64,
    pub s0: f64,
    pub s_inf: f64,
    pub l_inf: f64,
}

impl ExtremeSnrParams {
    pub fn new(low: LowSnrParams, high: HighSnrParams) -> Self {
        Self {
            eb_n0_min: low.eb_n0_min,
            s0: low.s0,
            s_inf: high.s_inf,
            l_inf: high.l_inf,
        }
    }
}

/// Marchenko–Pastur law with ratio `y = 1/K` and scale `σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchenkoPastur {
    pub ratio: f64,
    pub scale: f64,
}

impl MarchenkoPastur {
    pub fn new(k: usize, sigma2: f64) -> Result<Self> {
        if k == 0 || !(sigma2 > 0.0) {
            return Err(Error::Domain(format!(
                "Marchenko–Pastur needs K >= 1 and sigma2 > 0 (got K={k}, sigma2={sigma2})"
            )));
        }
        Ok(Self {
            ratio: 1.0 / k as f64,
            scale: sigma2,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        let r = self.ratio.sqrt();
        (
            self.scale * (1.0 - r).powi(2),
            self.scale * (1.0 + r).powi(2),
        )
    }

    pub fn density(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x <= a || x >= b || x <= 0.0 {
            return 0.0;
        }
        ((b - x) * (x - a)).sqrt() / (2.0 * PI * self.scale * self.ratio * x)
    }

    /// CDF by quadrature in `θ` with `x = a + (b−a)(1 − cos θ)/2`, which
    /// removes the square-root edges.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let (a, b) = self.support();
        if x <= a {
            return Ok(0.0);
        }
        if x >= b {
            return Ok(1.0);
        }
        let half = 0.5 * (b - a);
        let theta = (1.0 - (x - a) / half).clamp(-1.0, 1.0).acos();
        let c = half * half / (2.0 * PI * self.scale * self.ratio);
        let q = integrate(
            |t: f64| {
                let s = t.sin();
                let xt = a + half * (1.0 - t.cos());
                if xt <= 0.0 {
                    return 0.0;
                }
                c * s * s / xt
            },
            0.0,
            theta,
            DEFAULT_ABS_TOL,
        )?;
        Ok(q.value.clamp(0.0, 1.0))
    }
}

/// Convenience wrapper for [`MarchenkoPastur::cdf`].
pub fn marchenko_pastur_cdf(x: f64, k: usize, sigma2: f64) -> Result<f64> {
    MarchenkoPastur::new(k, sigma2)?.cdf(x)
}

fn check_power(power: f64) -> Result<()> {
    if !(power >= 0.0) || !power.is_finite() {
        return Err(Error::Domain(format!(
            "power {power} must be finite and >= 0"
        )));
    }
    Ok(())
}

fn check_pbar(pbar: f64) -> Result<()> {
    if !(pbar > 0.0) || !pbar.is_finite() {
        return Err(Error::Domain(format!("P̄ = {pbar} must be finite and > 0")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    /// Composite Simpson with `panels` (even) subintervals.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut s = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    /// Composite midpoint rule; never touches the endpoints.
    fn midpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|i| f(a + (i as f64 + 0.5) * h))
            .sum::<f64>()
            * h
    }

    #[test]
    fn wyner_nonfading_trivial_cases() {
        assert_eq!(wyner_capacity_nonfading(7.0, 0.0).unwrap(), 8f64.ln());
        assert_eq!(wyner_capacity_nonfading(0.0, 0.6).unwrap(), 0.0);
        assert!(wyner_capacity_nonfading(-1.0, 0.6).is_err());
    }

    #[test]
    fn wyner_nonfading_matches_simpson_oracle() {
        let (p, alpha) = (10.0, 0.5);
        let oracle = simpson(
            |f: f64| (1.0 + p * (1.0 + 2.0 * alpha * (2.0 * PI * f).cos()).powi(2)).ln(),
            0.0,
            1.0,
            1 << 20,
        );
        let got = wyner_capacity_nonfading(p, alpha).unwrap();
        assert!((got - oracle).abs() < 1e-8, "{got} vs {oracle}");
    }

    #[test]
    fn limiting_moment_values() {
        assert_eq!(
            limiting_moments(1.0, 2.0, 6.0, 0.0),
            LimitingMoments {
                m1: 1.0,
                m2: 2.0,
                m3: 6.0
            }
        );
        let r = limiting_moments(1.0, 2.0, 6.0, 0.5);
        assert!((r.m1 - 1.5).abs() < 1e-15);
        // 2 + 8/4 + 8/16
        assert!((r.m2 - 4.5).abs() < 1e-15);
        // 6 + 30/4 + 60/16 + 42/64
        assert!((r.m3 - 17.90625).abs() < 1e-13);
        let u = limiting_moments(1.0, 1.0, 1.0, 1.0);
        assert_eq!((u.m1, u.m2, u.m3), (3.0, 15.0, 87.0));
        assert!(limiting_moments_for(&FadingSpec::Deterministic, 0.5).is_err());
        assert_eq!(
            limiting_moments_for(&FadingSpec::ComplexGaussianUnit, 0.5).unwrap(),
            r
        );
    }

    #[test]
    fn large_k_reductions() {
        let (p, alpha) = (10.0, 0.5);
        let zero_mean = wyner_capacity_large_k(p, alpha, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        assert!((zero_mean - 16f64.ln()).abs() < 1e-15);
        assert_eq!(
            wyner_capacity_large_k(0.0, alpha, 1.0, Complex64::new(1.0, 0.0)).unwrap(),
            0.0
        );
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for _ in 0..20 {
            let p = rng.random_range(0.0..100.0);
            let a = rng.random_range(0.0..1.0);
            let x = wyner_capacity_large_k(p, a, 1.0, Complex64::new(1.0, 0.0)).unwrap();
            let y = wyner_capacity_nonfading(p, a).unwrap();
            assert!((x - y).abs() < 2e-10, "p={p} a={a}");
        }
        assert!(wyner_capacity_large_k(1.0, 0.5, 0.5, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn capacities_are_monotone_in_power() {
        let grid = [0.0, 0.1, 1.0, 3.0, 10.0, 100.0];
        let nf: Vec<f64> = grid
            .iter()
            .map(|&p| wyner_capacity_nonfading(p, 0.7).unwrap())
            .collect();
        let lk: Vec<f64> = grid
            .iter()
            .map(|&p| wyner_capacity_large_k(p, 0.7, 1.0, Complex64::new(0.8, 0.0)).unwrap())
            .collect();
        for v in [nf, lk] {
            assert_eq!(v[0], 0.0);
            assert!(v.windows(2).all(|w| w[1] >= w[0]));
        }
        let nc: Vec<f64> = [0.1, 1.0, 10.0, 100.0]
            .iter()
            .map(|&p| narula_capacity(p).unwrap())
            .collect();
        assert!(nc.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn narula_pdf_properties() {
        assert_eq!(narula_stationary_pdf(1.0, 3.0).unwrap(), 0.0);
        assert_eq!(narula_stationary_pdf(0.5, 3.0).unwrap(), 0.0);
        for pbar in [0.5, 1.0, 10.0, 100.0] {
            let mass =
                integrate_to_infinity(|x| narula_stationary_pdf(x, pbar).unwrap(), 1.0, 1e-11)
                    .unwrap()
                    .value;
            assert!((mass - 1.0).abs() < 1e-8, "pbar {pbar}: {mass}");
            for i in 0..200 {
                assert!(narula_stationary_pdf(1.0 + 0.37 * i as f64, pbar).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn narula_cdf_matches_quadrature() {
        for pbar in [1.0, 10.0] {
            for x in [1.0, 1.2, 2.0, 5.0, 17.0, 60.0] {
                let q = integrate(|t| narula_stationary_pdf(t, pbar).unwrap(), 1.0, x, 1e-12)
                    .unwrap()
                    .value;
                let c = narula_stationary_cdf(x, pbar).unwrap();
                assert!((q - c).abs() < 1e-10, "pbar {pbar} x {x}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn narula_capacity_limits() {
        assert!(narula_capacity(1e-4).unwrap() < 1e-3);
        assert!(narula_capacity(0.0).is_err());
        // Direct integral in x as an oracle.
        let pbar = 10.0;
        let direct = integrate_to_infinity(
            |x| x.ln() * narula_stationary_pdf(x, pbar).unwrap(),
            1.0,
            1e-11,
        )
        .unwrap()
        .value;
        assert!((narula_capacity(pbar).unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn low_snr_values() {
        let det = low_snr_params(1, 0.0, 1.0, 1.0).unwrap();
        assert!((det.eb_n0_min - LN_2).abs() < 1e-15);
        assert!((det.s0 - 2.0).abs() < 1e-15);
        let ray = low_snr_params(1, 0.0, 1.0, 2.0).unwrap();
        assert!((ray.eb_n0_min - LN_2).abs() < 1e-15);
        assert!((ray.s0 - 1.0).abs() < 1e-15);
        for (m2, m4) in [(1.0, 1.0), (1.0, 2.0), (2.5, 9.0)] {
            let a0 = low_snr_params(3, 0.0, m2, m4).unwrap();
            let a1 = low_snr_params(3, 1.0, m2, m4).unwrap();
            assert!((a1.eb_n0_min * 3.0 - a0.eb_n0_min).abs() < 1e-15);
            assert!(a1.s0 > 0.0 && a1.s0 <= 6.0);
        }
    }

    #[test]
    fn high_snr_values() {
        let det = high_snr_params(&FadingSpec::Deterministic, &FadingSpec::Deterministic).unwrap();
        assert_eq!((det.s_inf, det.l_inf), (1.0, 0.0));
        let up =
            high_snr_params(&FadingSpec::UniformPhaseUnit, &FadingSpec::UniformPhaseUnit).unwrap();
        assert_eq!((up.s_inf, up.l_inf), (1.0, 0.0));
        let ray = high_snr_params(
            &FadingSpec::ComplexGaussianUnit,
            &FadingSpec::ComplexGaussianUnit,
        )
        .unwrap();
        assert!((ray.l_inf - 0.832_746_177_276_867).abs() < 1e-12);
        // max picks the larger expectation, i.e. the smaller offset
        let mixed =
            high_snr_params(&FadingSpec::ComplexGaussianUnit, &FadingSpec::Deterministic).unwrap();
        assert_eq!(mixed.l_inf, 0.0);
        let atom = FadingSpec::rician(0.0, 0.0).unwrap();
        assert!(matches!(
            high_snr_params(&atom, &FadingSpec::Deterministic),
            Err(Error::DivergentOffset(_))
        ));
    }

    #[test]
    fn rayleigh_log_amplitude_monte_carlo() {
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        let n = 2_000_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let v = FadingSpec::ComplexGaussianUnit
                .sample(&mut rng)
                .norm()
                .log2();
            s += v;
            s2 += v * v;
        }
        let m = s / n as f64;
        let se = ((s2 / n as f64 - m * m) / n as f64).sqrt();
        let exact = mean_log2_amplitude(&FadingSpec::ComplexGaussianUnit)
            .unwrap()
            .mean;
        assert!((m - exact).abs() < 3.0 * se, "{m} vs {exact} (se {se})");
    }

    #[test]
    fn rician_log_amplitude_against_analytic_identity() {
        // E ln|h|² = ln|ν|² + E1(|ν|²/s²) for h = ν + CN(0, s²)
        let (nu, s2) = (0.8f64, 0.36);
        let spec = FadingSpec::rician(nu, s2).unwrap();
        let est = mean_log2_amplitude(&spec).unwrap();
        let exact = ((nu * nu).ln() + exp_integral(nu * nu / s2).unwrap()) / (2.0 * LN_2);
        assert!(est.std_err > 0.0);
        assert!(
            (est.mean - exact).abs() < 4.0 * est.std_err,
            "{} vs {exact}",
            est.mean
        );
    }

    #[test]
    fn marchenko_pastur_shape() {
        let mp = MarchenkoPastur::new(1, 2.0).unwrap();
        assert_eq!(mp.support(), (0.0, 8.0));
        for k in [1, 2, 4, 16] {
            let mp = MarchenkoPastur::new(k, 1.0).unwrap();
            let (a, b) = mp.support();
            let half = 0.5 * (b - a);
            // Oracle integrals in θ; the density vanishes at the endpoints
            // even where the transformed integrand does not.
            let x_of = |t: f64| a + half * (1.0 - t.cos());
            let mass = midpoint(|t| mp.density(x_of(t)) * half * t.sin(), 0.0, PI, 1 << 18);
            let mean = midpoint(
                |t| x_of(t) * mp.density(x_of(t)) * half * t.sin(),
                0.0,
                PI,
                1 << 18,
            );
            assert!((mass - 1.0).abs() < 1e-8, "K={k} mass {mass}");
            assert!((mean - 1.0).abs() < 1e-8, "K={k} mean {mean}");
            assert!((mp.cdf(b - 1e-12).unwrap() - 1.0).abs() < 1e-8);
            assert_eq!(mp.cdf(a - 0.1).unwrap(), 0.0);
            assert_eq!(mp.cdf(b + 0.1).unwrap(), 1.0);
            let vals: Vec<f64> = (0..50)
                .map(|i| mp.cdf(a + (b - a) * i as f64 / 49.0).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0]));
        }
        assert!(marchenko_pastur_cdf(1.0, 0, 1.0).is_err());
    }
}
