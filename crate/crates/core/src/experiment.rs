//! Monte Carlo photon-counting simulation of the tabletop experiment:
//! visibility-degraded interference, uniform background plus dark counts,
//! Poisson shot noise, channel-matrix estimation from counts, and the
//! offset-angle sweep.
//!
//! Noise model. The decoder interferes the two paths only at the final V
//! recombiner, so imperfect alignment enters as a fringe-visibility factor on
//! that one cross term (partial dephasing between the paths). Background and
//! dark counts are uniform across the detectors and fold into the channel as
//! a mixing fraction beta. Detector and coupling efficiencies scale total
//! counts only; they cancel in row normalization and are carried as
//! configuration metadata.

use crate::circuit;
use crate::info::{mutual_information, ChannelModel};
use crate::pwcode;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson};

/// Detected signal count rate (counts/sec) used by default: the total over
/// the three detectors while one codeword is sent. With the ideal channel
/// this puts the mean off-diagonal element near 1.9e4 counts per second.
pub const DEFAULT_RATE: f64 = 1.33e6;
/// Default counting duration per codeword, seconds.
pub const DEFAULT_DURATION_S: f64 = 5.0;
/// Default number of bootstrap replicas in sweep estimates.
pub const DEFAULT_REPLICAS: usize = 16;

/// Noise and efficiency parameters of the simulated apparatus.
#[derive(Debug, Clone, Copy)]
pub struct NoiseConfig {
    /// Fringe visibility of the whole interferometer.
    pub visibility: f64,
    /// Background photon rate per detector, counts/sec.
    pub background_rate: f64,
    /// Dark count rate per detector, counts/sec.
    pub dark_rate: f64,
    /// Detector quantum efficiency (metadata; cancels in normalization).
    pub detector_efficiency: f64,
    /// Fiber coupling efficiency (metadata; cancels in normalization).
    pub coupling_efficiency: f64,
    /// PBS extinction; 1.0 = ideal routing.
    pub pbs_extinction: f64,
}

impl NoiseConfig {
    /// Validates ranges.
    pub fn validate(&self) -> Result<()> {
        let fractions = [
            ("visibility", self.visibility),
            ("detector_efficiency", self.detector_efficiency),
            ("coupling_efficiency", self.coupling_efficiency),
            ("pbs_extinction", self.pbs_extinction),
        ];
        for (name, v) in fractions {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!("{name} = {v} not in [0, 1]")));
            }
        }
        if self.background_rate < 0.0 || self.dark_rate < 0.0 {
            return Err(Error::InvalidConfig("negative rate".into()));
        }
        Ok(())
    }

    /// Noise-free configuration (the ideal-channel reduction).
    pub fn noiseless() -> Self {
        Self {
            visibility: 1.0,
            background_rate: 0.0,
            dark_rate: 0.0,
            detector_efficiency: 1.0,
            coupling_efficiency: 1.0,
            pbs_extinction: 1.0,
        }
    }

    /// Background rate per detector chosen so the total background (including
    /// dark counts) is 2% of the mean ideal off-diagonal count at `rate`.
    pub fn background_for_rate(rate: f64, dark_rate: f64) -> f64 {
        let off_diag_rate = rate * pwcode::pair_channel().probability(1, 0);
        (0.02 * off_diag_rate / 3.0 - dark_rate).max(0.0)
    }
}

impl Default for NoiseConfig {
    /// Typical apparatus: 98% visibility, 70% detector efficiency, 80%
    /// coupling, 100/s dark counts, background topped up so the total
    /// background is 2% of the mean off-diagonal count at the default rate.
    fn default() -> Self {
        let dark_rate = 100.0;
        Self {
            visibility: 0.98,
            background_rate: Self::background_for_rate(DEFAULT_RATE, dark_rate),
            dark_rate,
            detector_efficiency: 0.70,
            coupling_efficiency: 0.80,
            pbs_extinction: 1.0,
        }
    }
}

/// Fraction of all detection events that are background at the given signal
/// rate: beta = 3(b + d) / (S + 3(b + d)).
pub fn background_fraction(noise: &NoiseConfig, rate: f64) -> f64 {
    let bg = 3.0 * (noise.background_rate + noise.dark_rate);
    if rate + bg <= 0.0 {
        0.0
    } else {
        bg / (rate + bg)
    }
}

/// The channel seen by the noisy apparatus at the given codeword offset:
/// visibility scales the recombiner cross term, the PBS extinction (if not
/// ideal) is applied through the Jones model, and the background mixes the
/// rows toward uniform: P' = (1 - beta) P_V + beta/3.
pub fn noisy_channel(offset: f64, noise: &NoiseConfig, rate: f64) -> Result<ChannelModel> {
    noise.validate()?;
    let beta = background_fraction(noise, rate);
    let coords = pwcode::rotated_codeword_coords(offset);
    let imp = circuit::optics::Imperfections {
        pbs_extinction: noise.pbs_extinction,
        visibility: noise.visibility,
    };
    let mut rows = Vec::with_capacity(3);
    for (x, w) in coords.iter().enumerate() {
        let p_v: Vec<f64> = if noise.pbs_extinction >= 1.0 {
            // Closed form: APD0 sees w0^2 (no interference partner); the
            // recombiner splits the V power evenly with a visibility-scaled
            // cross term.
            let sym = 0.5 * (w[1] * w[1] + w[2] * w[2]);
            let cross = 0.5 * noise.visibility * (w[1] * w[1] - w[2] * w[2]);
            vec![w[0] * w[0], sym + cross, sym - cross]
        } else {
            let state = pwcode::rotated_codewords(offset)[x].clone();
            let optical = circuit::optics::OpticalState::from_state_vector(&state)?;
            let p = circuit::optics::decode_optical(&optical, Some(&imp));
            let total: f64 = p.iter().sum();
            p.iter().map(|&v| v / total).collect()
        };
        rows.push(p_v.iter().map(|&p| (1.0 - beta) * p + beta / 3.0).collect());
    }
    let labels = vec!["00".to_string(), "11".to_string(), "22".to_string()];
    ChannelModel::new(labels.clone(), labels, rows)
}

/// Photon counts for one full channel-matrix measurement.
#[derive(Debug, Clone)]
pub struct CountRecord {
    /// counts[x][y]: events at detector y while codeword x was sent.
    pub counts: [[u64; 3]; 3],
    /// Counting duration per codeword, seconds.
    pub duration_s: f64,
    /// Total detected event rate (signal plus background), counts/sec.
    pub total_rate: f64,
    /// RNG seed; identical seed and configuration reproduce the counts
    /// bit-exactly.
    pub seed: u64,
}

fn draw_poisson(rng: &mut ChaCha12Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

/// Simulates the one-codeword-at-a-time counting protocol: for each sent
/// codeword, each detector accumulates an independent Poisson count with
/// mean (signal + background) * duration * P'(y|x).
pub fn simulate_counts(
    offset: f64,
    noise: &NoiseConfig,
    duration_s: f64,
    rate: f64,
    seed: u64,
) -> Result<CountRecord> {
    if duration_s < 0.0 || rate < 0.0 {
        return Err(Error::InvalidConfig("negative duration or rate".into()));
    }
    let channel = noisy_channel(offset, noise, rate)?;
    let bg = 3.0 * (noise.background_rate + noise.dark_rate);
    let row_mean = (rate + bg) * duration_s;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut counts = [[0u64; 3]; 3];
    for (x, row) in counts.iter_mut().enumerate() {
        for (y, c) in row.iter_mut().enumerate() {
            *c = draw_poisson(&mut rng, row_mean * channel.probability(y, x));
        }
    }
    Ok(CountRecord {
        counts,
        duration_s,
        total_rate: rate + bg,
        seed,
    })
}

/// Row-normalized channel estimate with per-entry standard errors from
/// counting statistics: sigma = sqrt(p_hat (1 - p_hat) / N_row).
pub fn estimate_channel(record: &CountRecord) -> Result<(ChannelModel, [[f64; 3]; 3])> {
    let mut rows = Vec::with_capacity(3);
    let mut stderr = [[0.0f64; 3]; 3];
    for x in 0..3 {
        let total: u64 = record.counts[x].iter().sum();
        if total == 0 {
            return Err(Error::EmptyRow(x));
        }
        let n = total as f64;
        let row: Vec<f64> = record.counts[x].iter().map(|&c| c as f64 / n).collect();
        for y in 0..3 {
            stderr[x][y] = (row[y] * (1.0 - row[y]) / n).sqrt();
        }
        rows.push(row);
    }
    let labels = vec!["00".to_string(), "11".to_string(), "22".to_string()];
    Ok((ChannelModel::new(labels.clone(), labels, rows)?, stderr))
}

/// One point of a simulated sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    /// Codeword offset, radians.
    pub offset: f64,
    /// Mean mutual-information estimate over the replicas, bits.
    pub mi_estimate: f64,
    /// Standard error of the mean over replicas.
    pub mi_stderr: f64,
}

/// Derives an independent substream seed; replicas and sweep points are
/// seeded by fixed splitting so results do not depend on evaluation order.
fn split_seed(master: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Full simulated analogue of the offset sweep: at each offset, repeat
/// (simulate counts, estimate channel, compute mutual information) over
/// `replicas` independent substreams; report the mean and its standard
/// error.
pub fn run_sweep_experiment(
    offsets: &[f64],
    noise: &NoiseConfig,
    duration_s: f64,
    rate: f64,
    seed: u64,
    replicas: usize,
) -> Result<Vec<SweepPoint>> {
    if replicas == 0 {
        return Err(Error::InvalidConfig("need at least one replica".into()));
    }
    let mut points = Vec::with_capacity(offsets.len());
    for (k, &offset) in offsets.iter().enumerate() {
        let mut values = Vec::with_capacity(replicas);
        for r in 0..replicas {
            let sub = split_seed(seed, (k * 1024 + r) as u64);
            let record = simulate_counts(offset, noise, duration_s, rate, sub)?;
            let (channel, _) = estimate_channel(&record)?;
            values.push(mutual_information(&[1.0 / 3.0; 3], &channel)?);
        }
        let mean = values.iter().sum::<f64>() / replicas as f64;
        let var = values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / (replicas.saturating_sub(1).max(1)) as f64;
        points.push(SweepPoint {
            offset,
            mi_estimate: mean,
            mi_stderr: (var / replicas as f64).sqrt(),
        });
    }
    Ok(points)
}

/// The two per-letter binary channels of the separable (classical) decoding
/// experiment: the polarization letter is measured with waveplates and a PBS
/// (no path interference, visibility-free), the location letter by
/// recombining the paths (visibility applies to states that populate both
/// paths).
pub fn separable_letter_channels(noise: &NoiseConfig) -> [ChannelModel; 2] {
    let m = circuit::separable_measurement_angle();
    let q = crate::info::helstrom_error(
        &crate::qstate::trine_state(0).unwrap(),
        &crate::qstate::trine_state(1).unwrap(),
        0.5,
    )
    .unwrap();
    let pol = ChannelModel::binary_symmetric(q).unwrap();
    // Location letter: P(j|i) = |m_j . psi_i|^2 with the path cross term
    // scaled by the visibility.
    let state_angles = [0.0, -2.0 * std::f64::consts::PI / 3.0];
    let mut rows = Vec::with_capacity(2);
    for &alpha in &state_angles {
        let a = [alpha.cos(), alpha.sin()];
        let mut row = Vec::with_capacity(2);
        for &mm in &[m, m + std::f64::consts::FRAC_PI_2] {
            let proj = [mm.cos(), mm.sin()];
            let terms = [proj[0] * a[0], proj[1] * a[1]];
            row.push(terms[0] * terms[0]
                + terms[1] * terms[1]
                + 2.0 * noise.visibility * terms[0] * terms[1]);
        }
        rows.push(row);
    }
    let loc = ChannelModel::from_matrix(rows).expect("rows stay normalized");
    [pol, loc]
}

/// Simulated separable-decoding estimate of the single-letter capacity: the
/// two letters are used independently with the binary subset strategy; the
/// result is the mean per-letter information with its replica standard
/// error.
pub fn simulate_separable_c1(
    noise: &NoiseConfig,
    duration_s: f64,
    rate: f64,
    seed: u64,
    replicas: usize,
) -> Result<(f64, f64)> {
    if replicas == 0 {
        return Err(Error::InvalidConfig("need at least one replica".into()));
    }
    noise.validate()?;
    let channels = separable_letter_channels(noise);
    // Per-letter background over two detectors.
    let bg = 2.0 * (noise.background_rate + noise.dark_rate);
    let beta = if rate + bg > 0.0 { bg / (rate + bg) } else { 0.0 };
    let mut values = Vec::with_capacity(replicas);
    for r in 0..replicas {
        let mut per_letter = 0.0;
        for (li, ch) in channels.iter().enumerate() {
            let mut rng =
                ChaCha12Rng::seed_from_u64(split_seed(seed, (li * 65536 + r) as u64));
            let mut rows = Vec::with_capacity(2);
            for x in 0..2 {
                let mut row = [0.0f64; 2];
                for (y, v) in row.iter_mut().enumerate() {
                    let p = (1.0 - beta) * ch.probability(y, x) + beta / 2.0;
                    *v = draw_poisson(&mut rng, (rate + bg) * duration_s * p) as f64;
                }
                let total: f64 = row.iter().sum();
                if total == 0.0 {
                    return Err(Error::EmptyRow(x));
                }
                rows.push(vec![row[0] / total, row[1] / total]);
            }
            let est = ChannelModel::from_matrix(rows)?;
            per_letter += 0.5 * mutual_information(&[0.5, 0.5], &est)?;
        }
        values.push(per_letter);
    }
    let mean = values.iter().sum::<f64>() / replicas as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (replicas.saturating_sub(1).max(1)) as f64;
    Ok((mean, (var / replicas as f64).sqrt()))
}
