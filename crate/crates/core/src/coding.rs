//! Random-coding error exponents and block-length requirements for the two
//! coding strategies over the ternary letter channel:
//!
//! * QCHC — an outer classical code over the composite letters {00, 11, 22},
//!   decoded pairwise by the collective measurement. The induced channel is
//!   the 3x3 pair channel; a per-letter rate R corresponds to R*log2(3) bits
//!   per pair (the code rate on the ternary composite alphabet), and the
//!   block error behaves as P_e = 2^(-(n/2) E) over n letters.
//! * ACC — all-classical coding over the binary symmetric channel induced by
//!   the per-letter C1 strategy (crossover 0.066987), with
//!   P_e = 2^(-n E).
//!
//! Exponents are the plain random-coding form
//! E(R) = max_{rho in [0,1]} max_p [E_0(rho, p) - rho R] with
//! E_0(rho, p) = -log2 sum_y [sum_x p(x) P(y|x)^{1/(1+rho)}]^{1+rho}.

use crate::circuit::separable_decoder_channel;
use crate::info::{ChannelModel};
use crate::pwcode::pair_channel;
use crate::{Error, Result};

/// Bracket tolerance of the rho maximization.
const RHO_TOL: f64 = 1e-8;
/// Stop threshold of the prior-ascent objective change.
const PRIOR_ASCENT_TOL: f64 = 1e-10;

/// Coding strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Quantum-classical hybrid coding over composite pairs.
    Qchc,
    /// All-classical coding over the separable-measurement channel.
    Acc,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Qchc => "qchc",
            Scheme::Acc => "acc",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qchc" => Ok(Scheme::Qchc),
            "acc" => Ok(Scheme::Acc),
            other => Err(Error::InvalidConfig(format!("unknown scheme '{other}'"))),
        }
    }
}

/// E(R) maximizer output.
#[derive(Debug, Clone)]
pub struct ExponentResult {
    /// Which scheme, when produced by [`scheme_exponent`].
    pub scheme: Option<Scheme>,
    /// The rate argument: bits per letter for schemes, bits per channel use
    /// for a raw channel.
    pub rate: f64,
    /// E(R) in bits per channel use; zero at and above capacity.
    pub exponent: f64,
    pub optimizing_rho: f64,
    pub optimizing_priors: Vec<f64>,
}

/// Gallager's function E_0(rho, p) in bits.
pub fn gallager_e0(channel: &ChannelModel, priors: &[f64], rho: f64) -> f64 {
    assert!((0.0..=1.0).contains(&rho), "rho must lie in [0, 1]");
    assert_eq!(priors.len(), channel.num_inputs());
    let inv = 1.0 / (1.0 + rho);
    let mut total = 0.0;
    for y in 0..channel.num_outputs() {
        let mut q = 0.0;
        for (x, &px) in priors.iter().enumerate() {
            let pyx = channel.probability(y, x);
            if px > 0.0 && pyx > 0.0 {
                q += px * pyx.powf(inv);
            }
        }
        total += q.powf(1.0 + rho);
    }
    -total.log2()
}

/// Multiplicative ascent of E_0 over the input distribution at fixed rho,
/// from a uniform start. For the symmetric channels used here the uniform
/// distribution is already stationary.
fn ascend_priors(channel: &ChannelModel, rho: f64) -> Vec<f64> {
    let n = channel.num_inputs();
    let mut p = vec![1.0 / n as f64; n];
    let mut best = gallager_e0(channel, &p, rho);
    let inv = 1.0 / (1.0 + rho);
    for _ in 0..500 {
        // alpha_x = sum_y P(y|x)^{1/(1+rho)} q_y^rho with q_y = sum p w.
        let ny = channel.num_outputs();
        let mut q = vec![0.0; ny];
        for (x, &px) in p.iter().enumerate() {
            for (y, qy) in q.iter_mut().enumerate() {
                let pyx = channel.probability(y, x);
                if pyx > 0.0 {
                    *qy += px * pyx.powf(inv);
                }
            }
        }
        let mut alpha = vec![0.0; n];
        for (x, ax) in alpha.iter_mut().enumerate() {
            for (y, qy) in q.iter().enumerate() {
                let pyx = channel.probability(y, x);
                if pyx > 0.0 && *qy > 0.0 {
                    *ax += pyx.powf(inv) * qy.powf(rho);
                }
            }
        }
        let mut candidate: Vec<f64> = p.iter().zip(&alpha).map(|(px, ax)| px * ax).collect();
        let z: f64 = candidate.iter().sum();
        if z <= 0.0 || !z.is_finite() {
            break;
        }
        for c in candidate.iter_mut() {
            *c /= z;
        }
        let value = gallager_e0(channel, &candidate, rho);
        if value <= best + PRIOR_ASCENT_TOL {
            break;
        }
        best = value;
        p = candidate;
    }
    p
}

/// The random-coding exponent of a channel at a per-use rate:
/// E(R) = max_{rho, p} [E_0(rho, p) - rho R].
pub fn error_exponent(channel: &ChannelModel, rate_per_use: f64) -> ExponentResult {
    assert!(rate_per_use >= 0.0, "rate must be non-negative");
    let objective = |rho: f64| {
        let p = ascend_priors(channel, rho);
        (gallager_e0(channel, &p, rho) - rho * rate_per_use, p)
    };
    // Coarse grid, then golden-section polish around the best point.
    let grid = 64;
    let mut best_rho = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for k in 0..=grid {
        let rho = k as f64 / grid as f64;
        let (v, _) = objective(rho);
        if v > best_val {
            best_val = v;
            best_rho = rho;
        }
    }
    let width = 1.0 / grid as f64;
    let (mut rho, _) = crate::info::golden_max(
        |r| objective(r).0,
        (best_rho - width).max(0.0),
        (best_rho + width).min(1.0),
        RHO_TOL,
    );
    // The maximum frequently sits on the rho = 1 boundary.
    if objective(1.0).0 >= objective(rho).0 {
        rho = 1.0;
    }
    let (value, priors) = objective(rho);
    if value <= 0.0 {
        // At or above capacity: the exponent is zero, attained at rho = 0.
        let n = channel.num_inputs();
        return ExponentResult {
            scheme: None,
            rate: rate_per_use,
            exponent: 0.0,
            optimizing_rho: 0.0,
            optimizing_priors: vec![1.0 / n as f64; n],
        };
    }
    ExponentResult {
        scheme: None,
        rate: rate_per_use,
        exponent: value,
        optimizing_rho: rho,
        optimizing_priors: priors,
    }
}

/// The binary symmetric channel used by the all-classical strategy.
pub fn acc_channel() -> ChannelModel {
    separable_decoder_channel()
}

/// Per-pair rate corresponding to a per-letter rate under each scheme.
/// QCHC codes over the ternary composite alphabet, so a per-letter rate R
/// means a composite-symbol code rate R, i.e. R*log2(3) bits per pair.
pub fn per_use_rate(scheme: Scheme, rate_per_letter: f64) -> f64 {
    match scheme {
        Scheme::Qchc => rate_per_letter * 3f64.log2(),
        Scheme::Acc => rate_per_letter,
    }
}

/// E(R) for a scheme at a per-letter rate. The exponent is per channel use
/// (per pair for QCHC, so P_e = 2^(-(n/2) E) over n letters; per letter for
/// ACC, so P_e = 2^(-n E)).
pub fn scheme_exponent(scheme: Scheme, rate_per_letter: f64) -> ExponentResult {
    let channel = match scheme {
        Scheme::Qchc => pair_channel(),
        Scheme::Acc => acc_channel(),
    };
    let mut result = error_exponent(&channel, per_use_rate(scheme, rate_per_letter));
    result.scheme = Some(scheme);
    result.rate = rate_per_letter;
    result
}

/// Smallest code length meeting a target block error probability.
#[derive(Debug, Clone, Copy)]
pub struct BlocklengthResult {
    pub scheme: Scheme,
    /// Bits per letter.
    pub rate: f64,
    pub target_pe: f64,
    /// Code length in letters (even for QCHC).
    pub n: u64,
    /// Channel uses: n/2 composite pairs for QCHC, n letters for ACC.
    pub composite_uses: u64,
    /// The exponent used, per channel use.
    pub exponent: f64,
}

/// Smallest n with 2^(-(n/2) E) <= target (QCHC, n even) or
/// 2^(-n E) <= target (ACC). A zero exponent at this rate is unattainable.
pub fn required_blocklength(
    scheme: Scheme,
    rate_per_letter: f64,
    target_pe: f64,
) -> Result<BlocklengthResult> {
    if !(target_pe > 0.0 && target_pe <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "target error probability {target_pe} not in (0, 1]"
        )));
    }
    let exp = scheme_exponent(scheme, rate_per_letter);
    let bits = -target_pe.log2();
    if bits == 0.0 {
        return Ok(BlocklengthResult {
            scheme,
            rate: rate_per_letter,
            target_pe,
            n: 0,
            composite_uses: 0,
            exponent: exp.exponent,
        });
    }
    if exp.exponent <= 0.0 {
        return Err(Error::Unattainable(format!(
            "rate {rate_per_letter} bit/letter is at or above the {} capacity",
            scheme.label()
        )));
    }
    let step = match scheme {
        Scheme::Qchc => 2u64,
        Scheme::Acc => 1u64,
    };
    let uses_per_letter = match scheme {
        Scheme::Qchc => 0.5,
        Scheme::Acc => 1.0,
    };
    let meets = |n: u64| (n as f64) * uses_per_letter * exp.exponent >= bits;
    let mut n = ((bits / (uses_per_letter * exp.exponent)).ceil() as u64).max(step);
    n += (step - n % step) % step;
    while !meets(n) {
        n += step;
    }
    while n > step && meets(n - step) {
        n -= step;
    }
    Ok(BlocklengthResult {
        scheme,
        rate: rate_per_letter,
        target_pe,
        n,
        composite_uses: (n as f64 * uses_per_letter).round() as u64,
        exponent: exp.exponent,
    })
}

/// Decoder work estimate for asymptotically good codes: (n log2 n)^2.
pub fn decoding_complexity(n: u64) -> f64 {
    assert!(n >= 2, "complexity estimate defined for n >= 2");
    let nf = n as f64;
    (nf * nf.log2()).powi(2)
}
