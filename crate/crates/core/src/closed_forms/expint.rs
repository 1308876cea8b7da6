//! Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `E1(x)` for `x > 0`; power series up to `x = 1`, continued fraction beyond.
pub fn exp_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("E1 requires x > 0 (got {x})")));
    }
    if x <= 1.0 {
        Ok(series(x))
    } else {
        Ok(continued_fraction_scaled(x) * (-x).exp())
    }
}

/// `e^x · E1(x)`, finite for large `x` where `E1` itself underflows.
pub fn exp_integral_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("E1 requires x > 0 (got {x})")));
    }
    if x <= 1.0 {
        Ok(series(x) * x.exp())
    } else {
        Ok(continued_fraction_scaled(x))
    }
}

/// `E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k·k!)`
fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// `e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))`, modified Lentz.
fn continued_fraction_scaled(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: direct summation with a fixed long series
    /// (accurate for moderate x).
    fn oracle(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 1..80 {
            fact *= k as f64;
            sum += (-x).powi(k) / (k as f64 * fact);
        }
        -EULER_GAMMA - x.ln() - sum
    }

    #[test]
    fn value_at_one() {
        let v = exp_integral(1.0).unwrap();
        assert!((v - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((v - oracle(1.0)).abs() < 1e-15);
    }

    #[test]
    fn continued_fraction_agrees_with_series_near_switch() {
        // The alternating series loses digits beyond x ≈ 3.
        for x in [1.0000001, 1.5, 2.0, 3.0] {
            let cf = continued_fraction_scaled(x) * (-x).exp();
            let o = oracle(x);
            assert!((cf - o).abs() <= 1e-12 * o, "x {x}: {cf} vs {o}");
        }
    }

    #[test]
    fn continued_fraction_matches_defining_integral() {
        use crate::closed_forms::quadrature::integrate_to_infinity;
        for x in [5.0, 10.0, 20.0] {
            // e^x·E1(x) = ∫_1^∞ e^{-x(t-1)}/t dt
            let q = integrate_to_infinity(|t| (-x * (t - 1.0)).exp() / t, 1.0, 1e-14).unwrap();
            let v = exp_integral_scaled(x).unwrap();
            assert!(
                (v - q.value).abs() <= 1e-12 * v,
                "x {x}: {v} vs {}",
                q.value
            );
        }
    }

    #[test]
    fn asymptotics_and_monotonicity() {
        let v = exp_integral(50.0).unwrap();
        assert!((v * 50.0 * 50f64.exp() - 1.0).abs() < 0.02);
        let grid: Vec<f64> = (1..=100).map(|i| 0.07 * i as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&x| exp_integral(x).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn scaled_form_survives_underflow() {
        let s = exp_integral_scaled(1e4).unwrap();
        assert!((s * 1e4 - 1.0).abs() < 1e-3);
        assert!(
            (exp_integral_scaled(0.5).unwrap() - exp_integral(0.5).unwrap() * 0.5f64.exp()).abs()
                < 1e-15
        );
    }

    #[test]
    fn domain_errors() {
        assert!(exp_integral(0.0).is_err());
        assert!(exp_integral(-1.0).is_err());
        assert!(exp_integral(f64::NAN).is_err());
    }
}
