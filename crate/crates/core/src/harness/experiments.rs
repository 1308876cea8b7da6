use std::f64::consts::{LN_2, PI};

use crate::band_matrix::{generate_channel, gram, log_det_shifted, BandedHermitian, ChannelParams};
use crate::closed_forms::{
    high_snr_params, integrate, limiting_moments_for, low_snr_params, narula_capacity,
    narula_stationary_cdf, wyner_capacity_large_k, wyner_capacity_nonfading, MarchenkoPastur,
    DEFAULT_ABS_TOL,
};
use crate::eig::eigenvalues;
use crate::error::{Error, Result};
use crate::fading::FadingSpec;
use crate::narula_chain::{combine_runs, simulate_chain};
use crate::spectral::{power_profile, power_profile_gap, trace_moment, EmpiricalSpectrum};

use super::output::{fmt_f64, fmt_opt, Table};
use super::{
    run_replicates, summarize, ExperimentConfig, ExperimentKind, ExperimentResult, ResultRow,
    Summary,
};

const PROFILE_MAX_CELLS: usize = 256;

pub(super) fn run(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let (key_names, rows, extra) = match cfg.kind {
        ExperimentKind::Spectrum => spectrum(cfg)?,
        ExperimentKind::CapacityVsP => capacity_vs_p(cfg)?,
        ExperimentKind::CapacityVsN => capacity_vs_n(cfg)?,
        ExperimentKind::Moments => moments(cfg)?,
        ExperimentKind::Narula => narula(cfg)?,
        ExperimentKind::ExtremeSnr => extreme_snr(cfg)?,
        ExperimentKind::MpCompare => mp_compare(cfg)?,
        ExperimentKind::PowerProfile => profile(cfg)?,
    };
    let mut header: Vec<&str> = key_names.iter().map(String::as_str).collect();
    header.extend(["estimate", "std_err", "replicates", "failed", "reference"]);
    let mut result_table = Table::new("result", &header);
    for r in &rows {
        let mut cells = r.key.clone();
        cells.extend([
            fmt_f64(r.estimate),
            fmt_f64(r.std_err),
            r.replicates.to_string(),
            r.failed.to_string(),
            fmt_opt(r.reference),
        ]);
        result_table.push(cells);
    }
    let mut tables = vec![result_table];
    tables.extend(extra);
    Ok(ExperimentResult {
        kind: cfg.kind,
        seed: cfg.seed,
        config_digest: cfg.digest(),
        key_names,
        rows,
        tables,
        files: Vec::new(),
    })
}

type Outcome = (Vec<String>, Vec<ResultRow>, Vec<Table>);

fn row(key: Vec<String>, s: Summary, reference: Option<f64>) -> ResultRow {
    ResultRow {
        key,
        estimate: s.mean,
        std_err: s.std_err,
        replicates: s.replicates,
        failed: s.failed,
        reference,
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Realizes one Gram matrix `HH†`.
fn draw_gram(params: &ChannelParams, rng: &mut super::Stream) -> BandedHermitian {
    gram(&generate_channel(params, rng))
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numerical(format!("{what} is {x}")))
    }
}

/// Per-cell capacity `(1/N)·ln det(I + (P/K)·HH†)` through banded LDL.
fn capacity_ldl(a: &BandedHermitian, power: f64, k: usize) -> Result<f64> {
    finite(
        log_det_shifted(a, power / k as f64)? / a.order() as f64,
        "capacity",
    )
}

/// Closed-form capacity baseline: exact for deterministic symmetric Wyner
/// and for the Rayleigh two-tap chain, the large-K limit for other
/// symmetric Wyner channels.
pub(crate) fn capacity_reference(params: &ChannelParams, power: f64) -> Option<f64> {
    if let Some((alpha, law)) = params.symmetric_wyner() {
        if law == FadingSpec::Deterministic {
            return wyner_capacity_nonfading(power, alpha).ok();
        }
        return wyner_capacity_large_k(power, alpha, law.second_moment(), law.complex_mean()).ok();
    }
    let rayleigh_chain = params.k() == 1
        && params.diagonals().len() == 2
        && [-1, 0].iter().all(|&o| {
            params
                .diagonal_at(o)
                .is_some_and(|d| d.gain == 1.0 && d.fading == FadingSpec::ComplexGaussianUnit)
        });
    if rayleigh_chain && power > 0.0 {
        return narula_capacity(power).ok();
    }
    None
}

fn spectrum(cfg: &ExperimentConfig) -> Result<Outcome> {
    let params = cfg.channel.params()?;
    let powers = cfg.powers();
    let spectra = run_replicates(cfg.seed, 0, cfg.replications, |_, rng| {
        let s = eigenvalues(&draw_gram(&params, rng));
        if s.eigenvalues().iter().all(|v| v.is_finite()) {
            Ok(s)
        } else {
            Err(Error::Numerical("non-finite eigenvalue".into()))
        }
    });
    let rho_scale = 1.0 / params.k() as f64;
    let mut rows = Vec::new();
    for &p in &powers {
        let slots: Vec<Option<f64>> = spectra
            .iter()
            .map(|s| s.as_ref().ok().map(|s| s.shannon_transform(p * rho_scale)))
            .collect();
        rows.push(row(
            vec![fmt_f64(p)],
            summarize(&slots),
            capacity_reference(&params, p),
        ));
    }
    let pooled = EmpiricalSpectrum::pooled(spectra.iter().filter_map(|s| s.as_ref().ok()));
    let mut eig = Table::new("eigenvalues", &["index", "eigenvalue"]);
    for (i, v) in pooled.eigenvalues().iter().enumerate() {
        eig.push(vec![i.to_string(), fmt_f64(*v)]);
    }
    let hist = histogram_table("histogram", &pooled, cfg.histogram_bins);
    Ok((names(&["P"]), rows, vec![eig, hist]))
}

fn histogram_table(name: &str, s: &EmpiricalSpectrum, bins: usize) -> Table {
    let mut t = Table::new(name, &["bin_left", "bin_right", "count", "cum_fraction"]);
    for b in s.histogram(bins) {
        t.push(vec![
            fmt_f64(b.left),
            fmt_f64(b.right),
            b.count.to_string(),
            fmt_f64(b.cum_fraction),
        ]);
    }
    t
}

fn capacity_vs_p(cfg: &ExperimentConfig) -> Result<Outcome> {
    let params = cfg.channel.params()?;
    let powers = cfg.powers();
    let k = params.k();
    // One realization per replicate serves every P.
    let caps = run_replicates(cfg.seed, 0, cfg.replications, |_, rng| {
        let a = draw_gram(&params, rng);
        powers
            .iter()
            .map(|&p| capacity_ldl(&a, p, k))
            .collect::<Result<Vec<f64>>>()
    });
    let rows = powers
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let slots: Vec<Option<f64>> =
                caps.iter().map(|c| c.as_ref().ok().map(|c| c[i])).collect();
            row(
                vec![fmt_f64(p)],
                summarize(&slots),
                capacity_reference(&params, p),
            )
        })
        .collect();
    Ok((names(&["P"]), rows, Vec::new()))
}

fn capacity_vs_n(cfg: &ExperimentConfig) -> Result<Outcome> {
    let base = cfg.channel.params()?;
    let ns = cfg.n_grid.clone().unwrap_or_else(|| vec![base.n()]);
    let mut rows = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        let params = base.with_n(n)?;
        let caps = run_replicates(cfg.seed, i, cfg.replications, |_, rng| {
            capacity_ldl(&draw_gram(&params, rng), params.power(), params.k())
        });
        let slots: Vec<Option<f64>> = caps.into_iter().map(Result::ok).collect();
        rows.push(row(
            vec![n.to_string()],
            summarize(&slots),
            capacity_reference(&params, params.power()),
        ));
    }
    Ok((names(&["N"]), rows, Vec::new()))
}

fn alpha_points(cfg: &ExperimentConfig) -> Vec<Option<f64>> {
    match &cfg.alpha_grid {
        Some(g) => g.iter().copied().map(Some).collect(),
        None => vec![None],
    }
}

fn alpha_label(params: &ChannelParams) -> String {
    params
        .symmetric_wyner()
        .map(|(a, _)| fmt_f64(a))
        .unwrap_or_default()
}

/// Limiting `(1/N)tr((HH†)^p)` where known: the moment polynomials for
/// uniform-phase laws, or `∫(1 + 2α cos 2πf)^{2p} df` without fading.
pub(crate) fn moment_reference(params: &ChannelParams, p: u32) -> Option<f64> {
    if params.k() != 1 {
        return None;
    }
    let (alpha, law) = params.symmetric_wyner()?;
    if law == FadingSpec::Deterministic {
        let q = integrate(
            |f| (1.0 + 2.0 * alpha * (2.0 * PI * f).cos()).powi(2 * p as i32),
            0.0,
            1.0,
            DEFAULT_ABS_TOL,
        )
        .ok()?;
        return Some(q.value);
    }
    limiting_moments_for(&law, alpha).ok()?.get(p)
}

fn moments(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut rows = Vec::new();
    for (i, alpha) in alpha_points(cfg).into_iter().enumerate() {
        let params = cfg.channel.params_with_alpha(alpha)?;
        let reps = run_replicates(cfg.seed, i, cfg.replications, |_, rng| {
            let a = draw_gram(&params, rng);
            (1..=3)
                .map(|p| trace_moment(&a, p).and_then(|m| finite(m, "trace moment")))
                .collect::<Result<Vec<f64>>>()
        });
        for p in 1..=3u32 {
            let slots: Vec<Option<f64>> = reps
                .iter()
                .map(|m| m.as_ref().ok().map(|m| m[p as usize - 1]))
                .collect();
            rows.push(row(
                vec![alpha_label(&params), p.to_string()],
                summarize(&slots),
                moment_reference(&params, p),
            ));
        }
    }
    Ok((names(&["alpha", "p"]), rows, Vec::new()))
}

fn narula(cfg: &ExperimentConfig) -> Result<Outcome> {
    let powers = cfg.powers();
    let mut rows = Vec::new();
    let mut summary = Table::new(
        "narula_summary",
        &["P", "capacity_estimate", "std_err", "n_steps"],
    );
    let mut ks = Table::new("narula_ks", &["P", "ks_distance", "samples"]);
    let mut chains = Vec::new();
    for (i, &p) in powers.iter().enumerate() {
        let runs = run_replicates(cfg.seed, i, cfg.replications, |r, rng| {
            let mut run = simulate_chain(p, cfg.chain_steps, cfg.burn_in, rng)?;
            finite(run.ergodic_log_mean, "ergodic mean")?;
            if r != 0 {
                run.samples = Vec::new();
            }
            Ok(run)
        });
        let failed = runs.iter().filter(|r| r.is_err()).count();
        let ok: Vec<_> = runs.into_iter().filter_map(Result::ok).collect();
        let reference = narula_capacity(p).ok();
        let (estimate, std_err) = if ok.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            combine_runs(&ok)?
        };
        let total_steps = ok.len() * cfg.chain_steps;
        rows.push(ResultRow {
            key: vec![fmt_f64(p)],
            estimate,
            std_err,
            replicates: ok.len(),
            failed,
            reference,
        });
        summary.push(vec![
            fmt_f64(p),
            fmt_f64(estimate),
            fmt_f64(std_err),
            total_steps.to_string(),
        ]);
        let mut chain = Table::new(&format!("narula_chain_{i}"), &["step", "d", "log_d"]);
        if let Some(first) = ok.first().filter(|r| !r.samples.is_empty()) {
            for (s, d) in first.samples.iter().take(cfg.chain_sample_rows).enumerate() {
                chain.push(vec![(s + 1).to_string(), fmt_f64(*d), fmt_f64(d.ln())]);
            }
            let esd = EmpiricalSpectrum::new(first.samples.clone());
            let dist = esd.ks_distance(|x| narula_stationary_cdf(x, p).unwrap_or(f64::NAN));
            ks.push(vec![fmt_f64(p), fmt_f64(dist), esd.len().to_string()]);
        }
        chains.push(chain);
    }
    let mut extra = vec![summary, ks];
    extra.extend(chains);
    Ok((names(&["P"]), rows, extra))
}

/// Least-squares `C ≈ c1·P + c2·P²` through the origin.
fn quadratic_fit(ps: &[f64], cs: &[f64]) -> (f64, f64) {
    let (mut s2, mut s3, mut s4, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&p, &c) in ps.iter().zip(cs) {
        s2 += p * p;
        s3 += p * p * p;
        s4 += p * p * p * p;
        y1 += p * c;
        y2 += p * p * c;
    }
    let det = s2 * s4 - s3 * s3;
    ((y1 * s4 - y2 * s3) / det, (s2 * y2 - s3 * y1) / det)
}

/// Least-squares line `y ≈ slope·x + intercept`.
fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Delta-method summary of `g(mean c1, mean c2)` with gradient `grad`.
fn delta_summary(
    pairs: &[(f64, f64)],
    failed: usize,
    g: impl Fn(f64, f64) -> f64,
    grad: impl Fn(f64, f64) -> (f64, f64),
) -> Summary {
    let r = pairs.len();
    if r == 0 {
        return Summary {
            mean: f64::NAN,
            std_err: f64::NAN,
            replicates: 0,
            failed,
        };
    }
    let rf = r as f64;
    let m1 = pairs.iter().map(|p| p.0).sum::<f64>() / rf;
    let m2 = pairs.iter().map(|p| p.1).sum::<f64>() / rf;
    let std_err = if r < 2 {
        f64::NAN
    } else {
        let (mut v11, mut v12, mut v22) = (0.0, 0.0, 0.0);
        for &(a, b) in pairs {
            v11 += (a - m1) * (a - m1);
            v12 += (a - m1) * (b - m2);
            v22 += (b - m2) * (b - m2);
        }
        let scale = 1.0 / ((rf - 1.0) * rf);
        let (g1, g2) = grad(m1, m2);
        ((g1 * g1 * v11 + 2.0 * g1 * g2 * v12 + g2 * g2 * v22) * scale)
            .max(0.0)
            .sqrt()
    };
    Summary {
        mean: g(m1, m2),
        std_err,
        replicates: r,
        failed,
    }
}

type Pair = (f64, f64);

/// Closed-form extreme-SNR references: `(eb_n0_min, s0)` for symmetric
/// Wyner channels, `(s_inf, l_inf)` for unit-gain two-tap channels.
pub(crate) fn extreme_references(params: &ChannelParams) -> (Option<Pair>, Option<Pair>) {
    let low = params.symmetric_wyner().and_then(|(alpha, law)| {
        let m2 = law.amplitude_moment(2).ok()?;
        let m4 = law.amplitude_moment(4).ok()?;
        low_snr_params(params.k(), alpha, m2, m4)
            .ok()
            .map(|l| (l.eb_n0_min, l.s0))
    });
    let high = (params.k() == 1 && params.diagonals().len() == 2)
        .then(|| {
            let main = params.diagonal_at(0)?;
            let other = params
                .diagonals()
                .iter()
                .find(|d| d.offset.abs() == 1 && d.gain == 1.0)?;
            if main.gain != 1.0 {
                return None;
            }
            high_snr_params(&main.fading, &other.fading)
                .ok()
                .map(|h| (h.s_inf, h.l_inf))
        })
        .flatten();
    (low, high)
}

fn extreme_snr(cfg: &ExperimentConfig) -> Result<Outcome> {
    let params = cfg.channel.params()?;
    let k = params.k();
    let low_p = cfg.low_snr_grid.clone();
    let high_p = cfg.high_snr_grid.clone();
    let all: Vec<f64> = low_p.iter().chain(&high_p).copied().collect();
    let caps = run_replicates(cfg.seed, 0, cfg.replications, |_, rng| {
        let a = draw_gram(&params, rng);
        all.iter()
            .map(|&p| capacity_ldl(&a, p, k))
            .collect::<Result<Vec<f64>>>()
    });
    let ok: Vec<&Vec<f64>> = caps.iter().filter_map(|c| c.as_ref().ok()).collect();
    let failed = caps.len() - ok.len();

    let mut points = Table::new(
        "capacity",
        &[
            "P",
            "estimate",
            "std_err",
            "replicates",
            "failed",
            "reference",
        ],
    );
    for (i, &p) in all.iter().enumerate() {
        let slots: Vec<Option<f64>> = caps.iter().map(|c| c.as_ref().ok().map(|c| c[i])).collect();
        let s = summarize(&slots);
        points.push(vec![
            fmt_f64(p),
            fmt_f64(s.mean),
            fmt_f64(s.std_err),
            s.replicates.to_string(),
            s.failed.to_string(),
            fmt_opt(capacity_reference(&params, p)),
        ]);
    }

    let lows: Vec<(f64, f64)> = ok
        .iter()
        .map(|c| quadratic_fit(&low_p, &c[..low_p.len()]))
        .collect();
    // Eb/N0_min = ln2 / c1 and S0 = 2·c1² / (−2·c2) in nats.
    let eb = delta_summary(
        &lows,
        failed,
        |c1, _| LN_2 / c1,
        |c1, _| (-LN_2 / (c1 * c1), 0.0),
    );
    let s0 = delta_summary(
        &lows,
        failed,
        |c1, c2| -c1 * c1 / c2,
        |c1, c2| (-2.0 * c1 / c2, c1 * c1 / (c2 * c2)),
    );

    let log_p: Vec<f64> = high_p.iter().map(|p| p.log2()).collect();
    let p_max = *log_p.last().expect("validated grid");
    let mut slope = Vec::new();
    let mut offset = Vec::new();
    let mut fitted = Vec::new();
    for c in &ok {
        let bits: Vec<f64> = c[low_p.len()..].iter().map(|x| x / LN_2).collect();
        let (s, b) = line_fit(&log_p, &bits);
        slope.push(Some(s));
        offset.push(Some(p_max - bits[bits.len() - 1]));
        fitted.push(Some(-b / s));
    }
    let pad = |mut v: Vec<Option<f64>>| {
        v.extend(std::iter::repeat_n(None, failed));
        v
    };
    let (low_ref, high_ref) = extreme_references(&params);
    let rows = vec![
        row(names(&["eb_n0_min"]), eb, low_ref.map(|l| l.0)),
        row(names(&["s0"]), s0, low_ref.map(|l| l.1)),
        row(
            names(&["s_inf"]),
            summarize(&pad(slope)),
            high_ref.map(|h| h.0),
        ),
        row(
            names(&["l_inf"]),
            summarize(&pad(offset)),
            high_ref.map(|h| h.1),
        ),
        row(
            names(&["l_inf_fitted"]),
            summarize(&pad(fitted)),
            high_ref.map(|h| h.1),
        ),
    ];
    Ok((names(&["quantity"]), rows, vec![points]))
}

/// `HH† / (K·Σ gain²)`, whose limiting mean is the main-diagonal `m₂` when
/// all diagonals share one second moment.
pub(crate) fn mp_normalization(params: &ChannelParams) -> f64 {
    let gains: f64 = params.diagonals().iter().map(|d| d.gain * d.gain).sum();
    1.0 / (params.k() as f64 * gains)
}

fn mp_compare(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut hists = Vec::new();
    for (i, alpha) in alpha_points(cfg).into_iter().enumerate() {
        let params = cfg.channel.params_with_alpha(alpha)?;
        let m2 = params
            .diagonal_at(0)
            .map_or(1.0, |d| d.fading.second_moment());
        let mp = MarchenkoPastur::new(params.k(), m2)?;
        let scale = mp_normalization(&params);
        let reps = run_replicates(cfg.seed, i, cfg.replications, |_, rng| {
            let s = eigenvalues(&draw_gram(&params, rng)).scaled(scale);
            let ks = s.ks_distance(|x| mp.cdf(x).unwrap_or(f64::NAN));
            Ok((finite(ks, "KS distance")?, s))
        });
        let slots: Vec<Option<f64>> = reps.iter().map(|r| r.as_ref().ok().map(|r| r.0)).collect();
        rows.push(row(vec![alpha_label(&params)], summarize(&slots), None));
        let pooled =
            EmpiricalSpectrum::pooled(reps.iter().filter_map(|r| r.as_ref().ok().map(|r| &r.1)));
        hists.push(histogram_table(
            &format!("mp_histogram_{i}"),
            &pooled,
            cfg.histogram_bins,
        ));
    }
    Ok((names(&["alpha"]), rows, hists))
}

fn profile(cfg: &ExperimentConfig) -> Result<Outcome> {
    let base = cfg.channel.params()?;
    let ns = cfg.n_grid.clone().unwrap_or_else(|| vec![base.n()]);
    let mut rows = Vec::new();
    for &n in &ns {
        let gap = power_profile_gap(&base.with_n(n)?)?;
        rows.push(ResultRow {
            key: vec![n.to_string()],
            estimate: gap,
            std_err: 0.0,
            replicates: 1,
            failed: 0,
            reference: None,
        });
    }
    let first = base.with_n(ns[0])?;
    let r = first.n().min(PROFILE_MAX_CELLS);
    let c = (first.n() * first.k()).min(PROFILE_MAX_CELLS);
    let grid = power_profile(&first, r, c);
    let mut t = Table::new("profile", &["row", "col", "value"]);
    for u in 0..r {
        for v in 0..c {
            t.push(vec![u.to_string(), v.to_string(), fmt_f64(grid.at(u, v))]);
        }
    }
    Ok((names(&["N"]), rows, vec![t]))
}
