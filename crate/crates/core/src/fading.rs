//! Fading coefficient laws and their exact moment metadata.
//!
//! Two moment families are kept apart on purpose: the *amplitude* moments
//! `E|h|^i` (used by the limiting-moment polynomials and the kurtosis) and
//! the *complex mean* `E[h]` (used by the large-K Szegő integral, where the
//! coefficient variance is `E|h|^2 - |E h|^2`).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distribution of a single channel coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FadingSpec {
    /// The constant `1 + 0i`.
    Deterministic,
    /// Circularly symmetric `CN(0, 1)`, i.e. Rayleigh amplitude with `E|h|^2 = 1`.
    ComplexGaussianUnit,
    /// `exp(iθ)` with θ uniform on `[0, 2π)`.
    UniformPhaseUnit,
    /// `mean + CN(0, diffuse_variance)`, so `E|h|^2 = |mean|^2 + diffuse_variance`.
    Rician {
        mean: Complex64,
        diffuse_variance: f64,
    },
}

impl FadingSpec {
    /// Rician law with a real line-of-sight component.
    pub fn rician(nu: f64, s2: f64) -> Result<Self> {
        if !(s2 >= 0.0) || !s2.is_finite() || !nu.is_finite() {
            return Err(Error::InvalidParams(format!(
                "rician requires finite nu and s2 >= 0 (got nu={nu}, s2={s2})"
            )));
        }
        Ok(FadingSpec::Rician {
            mean: Complex64::new(nu, 0.0),
            diffuse_variance: s2,
        })
    }

    /// Draws one coefficient.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match *self {
            FadingSpec::Deterministic => Complex64::new(1.0, 0.0),
            FadingSpec::ComplexGaussianUnit => standard_complex_normal(rng),
            FadingSpec::UniformPhaseUnit => {
                let theta = 2.0 * PI * rng.random::<f64>();
                Complex64::from_polar(1.0, theta)
            }
            FadingSpec::Rician {
                mean,
                diffuse_variance,
            } => mean + standard_complex_normal(rng) * diffuse_variance.sqrt(),
        }
    }

    /// Exact `E|h|^order`.
    pub fn amplitude_moment(&self, order: u32) -> Result<f64> {
        if order == 0 {
            return Err(Error::Domain("amplitude moment order must be >= 1".into()));
        }
        match *self {
            FadingSpec::Deterministic | FadingSpec::UniformPhaseUnit => Ok(1.0),
            // |h|^2 ~ Exp(1), so E|h|^i = Γ(1 + i/2).
            FadingSpec::ComplexGaussianUnit => Ok(gamma_half_integer(order + 2)),
            FadingSpec::Rician {
                mean,
                diffuse_variance,
            } => {
                let los = mean.norm_sqr();
                if diffuse_variance == 0.0 {
                    return Ok(los.sqrt().powi(order as i32));
                }
                if order % 2 == 1 {
                    return Err(Error::MomentUnavailable {
                        law: self.to_string(),
                        order,
                    });
                }
                // E|h|^{2k} = k! s^{2k} L_k(-|ν|^2 / s^2)
                let k = (order / 2) as u64;
                let mut total = 0.0;
                for j in 0..=k {
                    let coeff = binomial(k, j) * falling_ratio(k, j);
                    total += coeff * diffuse_variance.powi((k - j) as i32) * los.powi(j as i32);
                }
                Ok(total)
            }
        }
    }

    /// `E[h]`.
    pub fn complex_mean(&self) -> Complex64 {
        match *self {
            FadingSpec::Deterministic => Complex64::new(1.0, 0.0),
            FadingSpec::ComplexGaussianUnit | FadingSpec::UniformPhaseUnit => {
                Complex64::new(0.0, 0.0)
            }
            FadingSpec::Rician { mean, .. } => mean,
        }
    }

    /// `E|h|^2`.
    pub fn second_moment(&self) -> f64 {
        match *self {
            FadingSpec::Deterministic
            | FadingSpec::ComplexGaussianUnit
            | FadingSpec::UniformPhaseUnit => 1.0,
            FadingSpec::Rician {
                mean,
                diffuse_variance,
            } => mean.norm_sqr() + diffuse_variance,
        }
    }

    /// Coefficient variance `E|h|^2 - |E h|^2`.
    pub fn variance(&self) -> f64 {
        (self.second_moment() - self.complex_mean().norm_sqr()).max(0.0)
    }

    /// `m4 / m2^2`.
    pub fn kurtosis(&self) -> f64 {
        let m2 = self.second_moment();
        // Fourth moment exists in closed form for every law.
        let m4 = self
            .amplitude_moment(4)
            .expect("fourth amplitude moment is always available");
        m4 / (m2 * m2)
    }

    /// Whether the phase is uniform and independent of the amplitude, which is
    /// the validity condition of the limiting-moment polynomials.
    pub fn has_uniform_phase(&self) -> bool {
        matches!(
            self,
            FadingSpec::ComplexGaussianUnit | FadingSpec::UniformPhaseUnit
        )
    }
}

fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Γ(n/2) for integer n >= 1.
fn gamma_half_integer(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        (1..n / 2).fold(1.0, |acc, i| acc * i as f64)
    } else {
        // Γ(1/2) = √π, Γ(x + 1) = x Γ(x)
        let mut value = PI.sqrt();
        let mut x = 0.5;
        while x < n as f64 / 2.0 - 0.25 {
            value *= x;
            x += 1.0;
        }
        value
    }
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// k! / j!
fn falling_ratio(k: u64, j: u64) -> f64 {
    (j + 1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl fmt::Display for FadingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadingSpec::Deterministic => f.write_str("deterministic"),
            FadingSpec::ComplexGaussianUnit => f.write_str("rayleigh"),
            FadingSpec::UniformPhaseUnit => f.write_str("uniform-phase"),
            FadingSpec::Rician {
                mean,
                diffuse_variance,
            } => {
                if mean.im == 0.0 {
                    write!(f, "rician:nu={},s2={}", mean.re, diffuse_variance)
                } else {
                    write!(
                        f,
                        "rician:nu={},nu_im={},s2={}",
                        mean.re, mean.im, diffuse_variance
                    )
                }
            }
        }
    }
}

impl FromStr for FadingSpec {
    type Err = Error;

    fn from_str(tag: &str) -> Result<Self> {
        let tag = tag.trim();
        match tag {
            "deterministic" => return Ok(FadingSpec::Deterministic),
            "rayleigh" => return Ok(FadingSpec::ComplexGaussianUnit),
            "uniform-phase" => return Ok(FadingSpec::UniformPhaseUnit),
            _ => {}
        }
        let params = tag
            .strip_prefix("rician:")
            .ok_or_else(|| Error::FadingTag(tag.to_string()))?;
        let (mut nu, mut nu_im, mut s2) = (None, 0.0, None);
        for field in params.split(',') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::FadingTag(tag.to_string()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::FadingTag(tag.to_string()))?;
            match key.trim() {
                "nu" => nu = Some(value),
                "nu_im" => nu_im = value,
                "s2" => s2 = Some(value),
                _ => return Err(Error::FadingTag(tag.to_string())),
            }
        }
        let (nu, s2) = match (nu, s2) {
            (Some(nu), Some(s2)) => (nu, s2),
            _ => return Err(Error::FadingTag(tag.to_string())),
        };
        let mut spec = FadingSpec::rician(nu, s2)?;
        if let FadingSpec::Rician { mean, .. } = &mut spec {
            mean.im = nu_im;
        }
        Ok(spec)
    }
}

impl TryFrom<String> for FadingSpec {
    type Error = Error;

    fn try_from(tag: String) -> Result<Self> {
        tag.parse()
    }
}

impl From<FadingSpec> for String {
    fn from(spec: FadingSpec) -> String {
        spec.to_string()
    }
}
