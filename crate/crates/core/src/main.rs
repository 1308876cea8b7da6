use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use bandspec::closed_forms as cf;
use bandspec::harness::{fmt_f64, run_experiment, ExperimentConfig, ExperimentKind, RunOptions};
use bandspec::{Error, FadingSpec};

#[derive(Parser)]
#[command(
    name = "bandspec",
    version,
    about = "Random finite-band matrix experiments for the Wyner uplink"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue spectra, histograms and Shannon transforms.
    Spectrum(RunArgs),
    /// Capacity against a P grid or an N grid.
    Capacity(RunArgs),
    /// Normalized trace moments of the Gram matrix.
    Moments(RunArgs),
    /// Pivot-chain simulation of the two-tap channel.
    Narula(RunArgs),
    /// Low- and high-SNR parameter fits.
    ExtremeSnr(RunArgs),
    /// KS distance to the Marchenko–Pastur law.
    MpCompare(RunArgs),
    /// Power-profile refinement gaps.
    PowerProfile(RunArgs),
    /// Evaluate a closed-form expression without simulating.
    ClosedForm {
        #[command(subcommand)]
        formula: Formula,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (JSON).
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for replicates.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script per CSV.
    #[arg(long)]
    emit_gnuplot: bool,
}

#[derive(Args)]
struct LawArgs {
    /// Fading law tag, e.g. `rayleigh` or `rician:nu=0.8,s2=0.36`.
    #[arg(long)]
    fading: Option<FadingSpec>,
    #[arg(long)]
    m2: Option<f64>,
    #[arg(long)]
    m4: Option<f64>,
    #[arg(long)]
    m6: Option<f64>,
}

impl LawArgs {
    fn moment(&self, order: u32, explicit: Option<f64>) -> bandspec::Result<f64> {
        match (explicit, &self.fading) {
            (Some(v), _) => Ok(v),
            (None, Some(law)) => law.amplitude_moment(order),
            (None, None) => Err(Error::Config(format!("give --fading or --m{order}"))),
        }
    }
}

#[derive(Subcommand)]
enum Formula {
    /// Non-fading Wyner capacity (nats).
    Wyner {
        #[arg(long)]
        power: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Limiting moments M1..M3 for a uniform-phase law.
    Moments {
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        law: LawArgs,
    },
    /// Large-K Wyner capacity (nats).
    LargeK {
        #[arg(long)]
        power: f64,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, default_value_t = 0.0)]
        mu_re: f64,
        #[arg(long, default_value_t = 0.0)]
        mu_im: f64,
    },
    /// Exponential integral E1.
    Expint {
        #[arg(long)]
        x: f64,
    },
    /// Stationary pivot density.
    NarulaPdf {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        pbar: f64,
    },
    /// Stationary pivot CDF.
    NarulaCdf {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        pbar: f64,
    },
    /// Two-tap ergodic capacity (nats).
    NarulaCapacity {
        #[arg(long)]
        pbar: f64,
    },
    /// Minimum Eb/N0 (linear) and wideband slope.
    LowSnr {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        law: LawArgs,
    },
    /// High-SNR slope and offset of the two-tap channel.
    HighSnr {
        #[arg(long)]
        fading_a: FadingSpec,
        #[arg(long)]
        fading_b: FadingSpec,
    },
    /// Marchenko–Pastur CDF with ratio 1/K.
    MpCdf {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Spectrum(a) => run(a, &[ExperimentKind::Spectrum]),
        Command::Capacity(a) => run(
            a,
            &[ExperimentKind::CapacityVsP, ExperimentKind::CapacityVsN],
        ),
        Command::Moments(a) => run(a, &[ExperimentKind::Moments]),
        Command::Narula(a) => run(a, &[ExperimentKind::Narula]),
        Command::ExtremeSnr(a) => run(a, &[ExperimentKind::ExtremeSnr]),
        Command::MpCompare(a) => run(a, &[ExperimentKind::MpCompare]),
        Command::PowerProfile(a) => run(a, &[ExperimentKind::PowerProfile]),
        Command::ClosedForm { formula } => closed_form(formula).map(|_| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bandspec: {e}");
            match e {
                Error::Config(_)
                | Error::Json(_)
                | Error::FadingTag(_)
                | Error::InvalidParams(_)
                | Error::Domain(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(args: RunArgs, kinds: &[ExperimentKind]) -> bandspec::Result<ExitCode> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if !kinds.contains(&config.kind) {
        return Err(Error::Config(format!(
            "config kind `{}` does not match this subcommand",
            config.kind.name()
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = args.out {
        config.output_dir = Some(out);
    }
    if config.output_dir.is_none() {
        config.output_dir = Some(PathBuf::from("out").join(config.kind.name()));
    }
    let options = RunOptions {
        jobs: args.jobs,
        emit_gnuplot: args.emit_gnuplot,
    };
    let started = Instant::now();
    let result = run_experiment(&config, &options)?;
    let failed: usize = result.rows.iter().map(|r| r.failed).sum();
    if failed > 0 {
        eprintln!("bandspec: {failed} replicate evaluations failed and were excluded");
    }
    for f in &result.files {
        eprintln!("wrote {}", f.display());
    }
    eprintln!("wall-clock {:.3} s", started.elapsed().as_secs_f64());
    if let Some(t) = result.table("result") {
        print!("{}", t.render(&[]));
    }
    if result.all_failed() {
        eprintln!("bandspec: every replicate failed");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn closed_form(formula: Formula) -> bandspec::Result<()> {
    let out: Vec<(&str, f64)> = match formula {
        Formula::Wyner { power, alpha } => {
            vec![("capacity", cf::wyner_capacity_nonfading(power, alpha)?)]
        }
        Formula::Moments { alpha, law } => {
            let m = cf::limiting_moments(
                law.moment(2, law.m2)?,
                law.moment(4, law.m4)?,
                law.moment(6, law.m6)?,
                alpha,
            );
            vec![("M1", m.m1), ("M2", m.m2), ("M3", m.m3)]
        }
        Formula::LargeK {
            power,
            alpha,
            law,
            mu_re,
            mu_im,
        } => {
            let mu = match (&law.fading, law.m2) {
                (Some(f), None) => f.complex_mean(),
                _ => Complex64::new(mu_re, mu_im),
            };
            let m2 = law.moment(2, law.m2)?;
            vec![(
                "capacity",
                cf::wyner_capacity_large_k(power, alpha, m2, mu)?,
            )]
        }
        Formula::Expint { x } => vec![("E1", cf::exp_integral(x)?)],
        Formula::NarulaPdf { x, pbar } => vec![("pdf", cf::narula_stationary_pdf(x, pbar)?)],
        Formula::NarulaCdf { x, pbar } => vec![("cdf", cf::narula_stationary_cdf(x, pbar)?)],
        Formula::NarulaCapacity { pbar } => vec![("capacity", cf::narula_capacity(pbar)?)],
        Formula::LowSnr { k, alpha, law } => {
            let l = cf::low_snr_params(k, alpha, law.moment(2, law.m2)?, law.moment(4, law.m4)?)?;
            vec![("eb_n0_min", l.eb_n0_min), ("s0", l.s0)]
        }
        Formula::HighSnr { fading_a, fading_b } => {
            let h = cf::high_snr_params(&fading_a, &fading_b)?;
            vec![
                ("s_inf", h.s_inf),
                ("l_inf", h.l_inf),
                ("l_inf_std_err", h.l_inf_std_err),
            ]
        }
        Formula::MpCdf { x, k, sigma2 } => vec![("cdf", cf::marchenko_pastur_cdf(x, k, sigma2)?)],
    };
    println!("quantity,value");
    for (name, v) in out {
        println!("{name},{}", fmt_f64(v));
    }
    Ok(())
}
