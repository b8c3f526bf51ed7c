//! `trine` — capacities, collective decoding, photon-counting simulation,
//! and coding performance of the ternary symmetric qubit channel.

mod config;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;

use config::Resolver;
use output::{emit, fmt_num, json_to_string, meta_to_json, Csv};
use trine_core::coding::{self, Scheme};
use trine_core::experiment::{self, NoiseConfig};
use trine_core::info;
use trine_core::qstate::{trine_state, StateVector};
use trine_core::pwcode;

/// An error with its process exit code: 2 for usage problems, 3 for
/// numerical or convergence failures.
#[derive(Debug)]
pub struct AppError {
    message: String,
    code: i32,
}

impl AppError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 3,
        }
    }
}

impl From<trine_core::Error> for AppError {
    fn from(e: trine_core::Error) -> Self {
        AppError::numerical(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::numerical(format!("i/o error: {e}"))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Letters {
    Trine,
    OrthogonalPair,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Qchc,
    Acc,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Qchc => Scheme::Qchc,
            SchemeArg::Acc => Scheme::Acc,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CodewordArg {
    All,
    #[value(name = "00")]
    C00,
    #[value(name = "11")]
    C11,
    #[value(name = "22")]
    C22,
}

#[derive(Parser)]
#[command(
    name = "trine",
    version,
    about = "Super-additive decoding of the ternary symmetric qubit channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct CommonArgs {
    /// Output format (each command has its natural default).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Flat `key = value` configuration file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// RNG seed for anything stochastic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(clap::Args, Debug)]
struct NoiseArgs {
    /// Interferometer fringe visibility.
    #[arg(long)]
    visibility: Option<f64>,
    /// Background photon rate per detector, counts/sec.
    #[arg(long)]
    background: Option<f64>,
    /// Dark count rate per detector, counts/sec.
    #[arg(long)]
    dark: Option<f64>,
    /// PBS extinction (1.0 = ideal).
    #[arg(long)]
    pbs_extinction: Option<f64>,
    /// Counting duration per codeword, seconds.
    #[arg(long)]
    duration: Option<f64>,
    /// Detected signal count rate, counts/sec.
    #[arg(long)]
    rate: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-letter capacity C1: optimal priors and measurement.
    Capacity {
        /// Which letter set to optimize.
        #[arg(long, value_enum, default_value = "trine")]
        letters: Letters,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Pair-code information, classical limit, and super-additive gain.
    Superadd {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Mutual information vs codeword offset angle: ideal curve and,
    /// unless --ideal, a simulated noisy measurement.
    Sweep {
        /// First offset, degrees.
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        /// Last offset, degrees.
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Grid step, degrees (> 0).
        #[arg(long)]
        step: f64,
        /// Skip the noisy simulation and emit only the ideal curve.
        #[arg(long)]
        ideal: bool,
        /// Bootstrap replicas per offset.
        #[arg(long)]
        replicas: Option<u64>,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Photon-count record for the channel-matrix measurement.
    Simulate {
        /// Codeword to send, or `all` for the full matrix.
        #[arg(long, value_enum, default_value = "all")]
        codeword: CodewordArg,
        /// Codeword offset angle, degrees.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        offset: f64,
        /// Also write the histogram CSV (`sent,detected,count`) here.
        #[arg(long)]
        histogram: Option<PathBuf>,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Random-coding error exponent E(R) of a coding scheme.
    Exponent {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// Rate, bits per letter.
        #[arg(long)]
        rate: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Code length needed to reach a target block error probability.
    Blocklength {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// Rate, bits per letter.
        #[arg(long)]
        rate: f64,
        /// Target block error probability, in (0, 1].
        #[arg(long)]
        pe: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::Capacity { letters, common } => cmd_capacity(letters, &common),
        Command::Superadd { common } => cmd_superadd(&common),
        Command::Sweep {
            from,
            to,
            step,
            ideal,
            replicas,
            noise,
            common,
        } => cmd_sweep(from, to, step, ideal, replicas, &noise, &common),
        Command::Simulate {
            codeword,
            offset,
            histogram,
            noise,
            common,
        } => cmd_simulate(codeword, offset, histogram, &noise, &common),
        Command::Exponent {
            scheme,
            rate,
            common,
        } => cmd_exponent(scheme.into(), rate, &common),
        Command::Blocklength {
            scheme,
            rate,
            pe,
            common,
        } => cmd_blocklength(scheme.into(), rate, pe, &common),
    }
}

fn resolver_with_seed(common: &CommonArgs) -> Result<(Resolver, u64), AppError> {
    let mut resolver = Resolver::new(common.config.as_deref())?;
    let seed = resolver.u64("seed", common.seed, 0)?;
    Ok((resolver, seed))
}

/// Resolved noise configuration plus duration/rate, all echoed as metadata.
fn resolve_noise(
    resolver: &mut Resolver,
    noise: &NoiseArgs,
) -> Result<(NoiseConfig, f64, f64), AppError> {
    let defaults = NoiseConfig::default();
    let rate = resolver.f64("rate", noise.rate, experiment::DEFAULT_RATE)?;
    let dark = resolver.f64("dark_rate", noise.dark, defaults.dark_rate)?;
    let background = resolver.f64(
        "background_rate",
        noise.background,
        NoiseConfig::background_for_rate(rate, dark),
    )?;
    let cfg = NoiseConfig {
        visibility: resolver.f64("visibility", noise.visibility, defaults.visibility)?,
        background_rate: background,
        dark_rate: dark,
        detector_efficiency: resolver.f64(
            "detector_efficiency",
            None,
            defaults.detector_efficiency,
        )?,
        coupling_efficiency: resolver.f64(
            "coupling_efficiency",
            None,
            defaults.coupling_efficiency,
        )?,
        pbs_extinction: resolver.f64(
            "pbs_extinction",
            noise.pbs_extinction,
            defaults.pbs_extinction,
        )?,
    };
    cfg.validate()
        .map_err(|e| AppError::usage(e.to_string()))?;
    let duration = resolver.f64("duration", noise.duration, experiment::DEFAULT_DURATION_S)?;
    if duration < 0.0 || rate < 0.0 {
        return Err(AppError::usage("duration and rate must be non-negative"));
    }
    Ok((cfg, duration, rate))
}

fn format_or(common: &CommonArgs, default: Format) -> Format {
    common.format.unwrap_or(default)
}

fn cmd_capacity(letters: Letters, common: &CommonArgs) -> Result<(), AppError> {
    let (mut resolver, _seed) = resolver_with_seed(common)?;
    let states: Vec<StateVector> = match letters {
        Letters::Trine => (0..3).map(|x| trine_state(x).unwrap()).collect(),
        Letters::OrthogonalPair => vec![
            StateVector::from_real(&[1.0, 0.0]).unwrap(),
            StateVector::from_real(&[0.0, 1.0]).unwrap(),
        ],
    };
    resolver.note(
        "letters",
        match letters {
            Letters::Trine => "trine",
            Letters::OrthogonalPair => "orthogonal-pair",
        },
    );
    let result = info::optimize_c1(&states)?;
    let angles_deg: Vec<f64> = result.povm_angles.iter().map(|a| a.to_degrees()).collect();
    let meta = resolver.effective.clone();
    let text = match format_or(common, Format::Json) {
        Format::Json => json_to_string(&json!({
            "c1_bits": result.value,
            "priors": result.optimal_priors,
            "povm_angles": angles_deg,
            "povm_weights": result.povm_weights,
            "iterations": result.iterations,
            "config": meta_to_json(&meta),
        })),
        Format::Csv => {
            let mut csv = Csv::new(&meta, &["quantity", "value"]);
            csv.row(&["c1_bits".into(), fmt_num(result.value)]);
            for (i, p) in result.optimal_priors.iter().enumerate() {
                csv.row(&[format!("prior_{i}"), fmt_num(*p)]);
            }
            for (i, a) in angles_deg.iter().enumerate() {
                csv.row(&[format!("povm_angle_deg_{i}"), fmt_num(*a)]);
            }
            for (i, w) in result.povm_weights.iter().enumerate() {
                csv.row(&[format!("povm_weight_{i}"), fmt_num(*w)]);
            }
            csv.row(&["iterations".into(), result.iterations.to_string()]);
            csv.finish()
        }
    };
    emit(common.output.as_deref(), &text)?;
    Ok(())
}

fn cmd_superadd(common: &CommonArgs) -> Result<(), AppError> {
    let (resolver, _seed) = resolver_with_seed(common)?;
    let gain = pwcode::superadditive_gain()?;
    let meta = resolver.effective;
    let text = match format_or(common, Format::Csv) {
        Format::Json => json_to_string(&json!({
            "i2_bits": gain.i2,
            "per_letter_bits": gain.per_letter,
            "c1_bits": gain.c1,
            "gain_bits": gain.gain,
            "two_c1_bits": 2.0 * gain.c1,
            "config": meta_to_json(&meta),
        })),
        Format::Csv => {
            let mut csv = Csv::new(&meta, &["quantity", "bits"]);
            for (name, v) in [
                ("i2", gain.i2),
                ("per_letter", gain.per_letter),
                ("c1", gain.c1),
                ("gain", gain.gain),
                ("two_c1", 2.0 * gain.c1),
            ] {
                csv.row(&[name.into(), fmt_num(v)]);
            }
            csv.finish()
        }
    };
    emit(common.output.as_deref(), &text)?;
    Ok(())
}

fn offset_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, AppError> {
    if step <= 0.0 || !step.is_finite() {
        return Err(AppError::usage(format!("step must be positive, got {step}")));
    }
    if to < from {
        return Err(AppError::usage(format!(
            "invalid range: --from {from} exceeds --to {to}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| from + step * k as f64).collect())
}

fn cmd_sweep(
    from: f64,
    to: f64,
    step: f64,
    ideal_only: bool,
    replicas: Option<u64>,
    noise: &NoiseArgs,
    common: &CommonArgs,
) -> Result<(), AppError> {
    let (mut resolver, seed) = resolver_with_seed(common)?;
    let offsets_deg = offset_grid(from, to, step)?;
    let offsets_rad: Vec<f64> = offsets_deg.iter().map(|d| d.to_radians()).collect();
    resolver.note("from_deg", &fmt_num(from));
    resolver.note("to_deg", &fmt_num(to));
    resolver.note("step_deg", &fmt_num(step));
    resolver.note("ideal", if ideal_only { "true" } else { "false" });

    let ideal = pwcode::ideal_sweep(&offsets_rad);
    let sim = if ideal_only {
        resolver.note("replicas", "0");
        None
    } else {
        let (cfg, duration, rate) = resolve_noise(&mut resolver, noise)?;
        let replicas = resolver.u64(
            "replicas",
            replicas,
            experiment::DEFAULT_REPLICAS as u64,
        )? as usize;
        if replicas == 0 {
            return Err(AppError::usage("replicas must be at least 1"));
        }
        Some(experiment::run_sweep_experiment(
            &offsets_rad,
            &cfg,
            duration,
            rate,
            seed,
            replicas,
        )?)
    };

    let meta = resolver.effective.clone();
    let text = match format_or(common, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(
                &meta,
                &["offset_deg", "mi_ideal_bits", "mi_sim_bits", "mi_sim_stderr"],
            );
            for (k, deg) in offsets_deg.iter().enumerate() {
                let (sim_v, sim_e) = match &sim {
                    Some(points) => (fmt_num(points[k].mi_estimate), fmt_num(points[k].mi_stderr)),
                    None => (String::new(), String::new()),
                };
                csv.row(&[fmt_num(*deg), fmt_num(ideal[k].1), sim_v, sim_e]);
            }
            csv.finish()
        }
        Format::Json => {
            let points: Vec<serde_json::Value> = offsets_deg
                .iter()
                .enumerate()
                .map(|(k, deg)| {
                    let (sim_v, sim_e) = match &sim {
                        Some(points) => (
                            json!(points[k].mi_estimate),
                            json!(points[k].mi_stderr),
                        ),
                        None => (serde_json::Value::Null, serde_json::Value::Null),
                    };
                    json!({
                        "offset_deg": deg,
                        "mi_ideal_bits": ideal[k].1,
                        "mi_sim_bits": sim_v,
                        "mi_sim_stderr": sim_e,
                    })
                })
                .collect();
            json_to_string(&json!({"points": points, "config": meta_to_json(&meta)}))
        }
    };
    emit(common.output.as_deref(), &text)?;
    Ok(())
}

fn cmd_simulate(
    codeword: CodewordArg,
    offset_deg: f64,
    histogram: Option<PathBuf>,
    noise: &NoiseArgs,
    common: &CommonArgs,
) -> Result<(), AppError> {
    let (mut resolver, seed) = resolver_with_seed(common)?;
    let (cfg, duration, rate) = resolve_noise(&mut resolver, noise)?;
    resolver.note("offset_deg", &fmt_num(offset_deg));
    let selected: Option<usize> = match codeword {
        CodewordArg::All => None,
        CodewordArg::C00 => Some(0),
        CodewordArg::C11 => Some(1),
        CodewordArg::C22 => Some(2),
    };
    resolver.note(
        "codeword",
        match selected {
            None => "all",
            Some(0) => "00",
            Some(1) => "11",
            _ => "22",
        },
    );
    let record = experiment::simulate_counts(offset_deg.to_radians(), &cfg, duration, rate, seed)?;
    let mut counts = record.counts;
    if let Some(x) = selected {
        for (row_index, row) in counts.iter_mut().enumerate() {
            if row_index != x {
                *row = [0, 0, 0];
            }
        }
    }
    let labels = ["00", "11", "22"];
    let meta = resolver.effective.clone();

    if let Some(path) = &histogram {
        let mut csv = Csv::new(&meta, &["sent", "detected", "count"]);
        for (x, row) in counts.iter().enumerate() {
            if selected.is_some_and(|s| s != x) {
                continue;
            }
            for (y, c) in row.iter().enumerate() {
                csv.row(&[labels[x].into(), labels[y].into(), c.to_string()]);
            }
        }
        emit(Some(path), &csv.finish())?;
    }

    let text = match format_or(common, Format::Json) {
        Format::Json => json_to_string(&json!({
            "counts": counts,
            "duration_s": record.duration_s,
            "rate_cps": rate,
            "seed": record.seed,
            "config": meta_to_json(&meta),
        })),
        Format::Csv => {
            let mut csv = Csv::new(&meta, &["sent", "detected", "count"]);
            for (x, row) in counts.iter().enumerate() {
                if selected.is_some_and(|s| s != x) {
                    continue;
                }
                for (y, c) in row.iter().enumerate() {
                    csv.row(&[labels[x].into(), labels[y].into(), c.to_string()]);
                }
            }
            csv.finish()
        }
    };
    emit(common.output.as_deref(), &text)?;
    Ok(())
}

fn cmd_exponent(scheme: Scheme, rate: f64, common: &CommonArgs) -> Result<(), AppError> {
    if rate < 0.0 || !rate.is_finite() {
        return Err(AppError::usage(format!("rate must be non-negative, got {rate}")));
    }
    let (mut resolver, _seed) = resolver_with_seed(common)?;
    resolver.note("scheme", scheme.label());
    resolver.note("rate_bits_per_letter", &fmt_num(rate));
    let result = coding::scheme_exponent(scheme, rate);
    let meta = resolver.effective.clone();
    let text = match format_or(common, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(
                &meta,
                &["scheme", "rate_bits_per_letter", "exponent", "blocklength_n"],
            );
            csv.row(&[
                scheme.label().into(),
                fmt_num(rate),
                fmt_num(result.exponent),
                String::new(),
            ]);
            csv.finish()
        }
        Format::Json => json_to_string(&json!({
            "scheme": scheme.label(),
            "rate_bits_per_letter": rate,
            "exponent": result.exponent,
            "optimizing_rho": result.optimizing_rho,
            "optimizing_priors": result.optimizing_priors,
            "config": meta_to_json(&meta),
        })),
    };
    emit(common.output.as_deref(), &text)?;
    Ok(())
}

fn cmd_blocklength(
    scheme: Scheme,
    rate: f64,
    pe: f64,
    common: &CommonArgs,
) -> Result<(), AppError> {
    if rate < 0.0 || !rate.is_finite() {
        return Err(AppError::usage(format!("rate must be non-negative, got {rate}")));
    }
    if !(pe > 0.0 && pe <= 1.0) {
        return Err(AppError::usage(format!("--pe must lie in (0, 1], got {pe}")));
    }
    let (mut resolver, _seed) = resolver_with_seed(common)?;
    resolver.note("scheme", scheme.label());
    resolver.note("rate_bits_per_letter", &fmt_num(rate));
    resolver.note("target_pe", &format!("{pe:e}"));
    let meta = resolver.effective.clone();
    let result = coding::required_blocklength(scheme, rate, pe);
    let (exponent, n_field, attainable, n_json, uses_json) = match &result {
        Ok(r) => (
            r.exponent,
            r.n.to_string(),
            true,
            json!(r.n),
            json!(r.composite_uses),
        ),
        Err(trine_core::Error::Unattainable(_)) => (
            0.0,
            "unattainable".to_string(),
            false,
            serde_json::Value::Null,
            serde_json::Value::Null,
        ),
        Err(e) => return Err(AppError::numerical(e.to_string())),
    };
    let text = match format_or(common, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(
                &meta,
                &["scheme", "rate_bits_per_letter", "exponent", "blocklength_n"],
            );
            csv.row(&[
                scheme.label().into(),
                fmt_num(rate),
                fmt_num(exponent),
                n_field,
            ]);
            csv.finish()
        }
        Format::Json => json_to_string(&json!({
            "scheme": scheme.label(),
            "rate_bits_per_letter": rate,
            "exponent": exponent,
            "target_pe": pe,
            "attainable": attainable,
            "blocklength_n": n_json,
            "composite_uses": uses_json,
            "config": meta_to_json(&meta),
        })),
    };
    emit(common.output.as_deref(), &text)?;
    Ok(())
}
