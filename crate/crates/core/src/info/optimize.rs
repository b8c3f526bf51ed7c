//! Single-letter optimizers: the capacity C1 (maximized over priors and
//! POVMs) and the accessible information (fixed priors, maximized over
//! POVMs).
//!
//! The search space is tiny for real qubit ensembles, so the strategy is
//! alternating coordinate ascent: a Blahut-Arimoto update on the priors for a
//! fixed measurement, then derivative-free refinement (coarse grid plus
//! golden-section polish) of an angle parametrization of rank-1 real POVMs,
//! restarted from several seeds and merged by maximum with a deterministic
//! tie-break on the restart index.

use super::{channel_matrix, mutual_information, LetterEnsemble};
use crate::qstate::{PovmSet, StateVector};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use std::f64::consts::PI;

/// Objective change below which the alternation stops.
const CONVERGENCE_TOL: f64 = 1e-9;
/// Blahut-Arimoto stopping tolerance on the information value.
const BA_TOL: f64 = 1e-13;
const BA_MAX_ITERS: usize = 4000;
/// Number of random restarts on top of the deterministic ones.
const RANDOM_RESTARTS: usize = 16;
/// Fixed optimizer seed; results are deterministic.
const OPTIMIZER_SEED: u64 = 0x7261_6e6b_315f;

/// Outcome of the C1 optimization.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// Bits per letter.
    pub value: f64,
    pub optimal_priors: Vec<f64>,
    pub optimal_povm: PovmSet,
    /// Total alternation rounds over all restarts.
    pub iterations: usize,
    /// Angle parametrization (radians) of the rank-1 POVM directions.
    pub povm_angles: Vec<f64>,
    /// Weights attached to the rank-1 directions.
    pub povm_weights: Vec<f64>,
}

/// Unit vector in the real qubit plane at the given angle.
fn direction(theta: f64) -> StateVector {
    StateVector::from_real(&[theta.cos(), theta.sin()]).expect("unit direction")
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let (pivot, max) = (col..3)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if max < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// Solves the completeness constraints `sum_i w_i |v(theta_i)><v(theta_i)| = I`
/// for non-negative weights, i.e. `sum w = 2`, `sum w cos 2t = 0`,
/// `sum w sin 2t = 0`. Returns `None` when the angles admit no valid weights.
pub fn solve_povm_weights(angles: &[f64]) -> Option<Vec<f64>> {
    let n = angles.len();
    let rows: Vec<[f64; 3]> = angles
        .iter()
        .map(|&t| [1.0, (2.0 * t).cos(), (2.0 * t).sin()])
        .collect();
    let target = [2.0, 0.0, 0.0];
    let w = match n {
        2 => {
            // Exactly solvable only for orthogonal directions with unit weights.
            let d = (angles[0] - angles[1]).rem_euclid(PI);
            if (d - PI / 2.0).abs() > 1e-9 {
                return None;
            }
            vec![1.0, 1.0]
        }
        3 => {
            let a = [
                [rows[0][0], rows[1][0], rows[2][0]],
                [rows[0][1], rows[1][1], rows[2][1]],
                [rows[0][2], rows[1][2], rows[2][2]],
            ];
            solve3(a, target)?.to_vec()
        }
        4 => {
            // Minimum-norm solution w = A^T (A A^T)^{-1} t.
            let mut aat = [[0.0f64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    aat[i][j] = rows.iter().map(|r| r[i] * r[j]).sum();
                }
            }
            let lambda = solve3(aat, target)?;
            rows.iter()
                .map(|r| r[0] * lambda[0] + r[1] * lambda[1] + r[2] * lambda[2])
                .collect()
        }
        _ => return None,
    };
    if w.iter().any(|&x| x < -1e-10 || !x.is_finite()) {
        return None;
    }
    Some(w.into_iter().map(|x| x.max(0.0)).collect())
}

/// Builds the rank-1 POVM for the given direction angles, if the completeness
/// constraints admit non-negative weights.
pub fn rank_one_povm(angles: &[f64]) -> Option<(Vec<f64>, PovmSet)> {
    let weights = solve_povm_weights(angles)?;
    let vectors: Vec<_> = angles.iter().map(|&t| direction(t)).collect();
    let povm = PovmSet::from_weighted_vectors(&weights, &vectors).ok()?;
    Some((weights, povm))
}

/// One Blahut-Arimoto fixed point: optimal priors and capacity of a fixed
/// channel matrix. Starts from the given priors.
fn blahut_arimoto_rows(rows: &[Vec<f64>], start: &[f64]) -> (Vec<f64>, f64) {
    let n = rows.len();
    let ny = rows.first().map_or(0, |r| r.len());
    let mut p: Vec<f64> = start.to_vec();
    let mut d = vec![0.0; n];
    let mut q = vec![0.0; ny];
    let mut last = 0.0;
    for _ in 0..BA_MAX_ITERS {
        q.iter_mut().for_each(|v| *v = 0.0);
        for (row, &px) in rows.iter().zip(&p) {
            for (qy, &pyx) in q.iter_mut().zip(row) {
                *qy += px * pyx;
            }
        }
        // d_x = exp sum_y P(y|x) ln(P(y|x)/q_y)
        for (dx, row) in d.iter_mut().zip(rows) {
            let mut acc = 0.0;
            for (&pyx, &qy) in row.iter().zip(&q) {
                if pyx > 0.0 && qy > 0.0 {
                    acc += pyx * (pyx / qy).ln();
                }
            }
            *dx = acc.exp();
        }
        let z: f64 = p.iter().zip(&d).map(|(px, dx)| px * dx).sum();
        if z <= 0.0 || !z.is_finite() {
            break;
        }
        for (px, dx) in p.iter_mut().zip(&d) {
            *px = *px * dx / z;
        }
        let value = z.ln() / std::f64::consts::LN_2;
        if (value - last).abs() < BA_TOL {
            break;
        }
        last = value;
    }
    let value = super::mi_rows(&p, rows);
    (p, value)
}

/// Golden-section maximization of a unimodal function on [a, b].
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Channel rows P(y|x) = w_y (v(theta_y) . psi_x)^2 for real qubit states.
fn rows_from_angles(states_real: &[[f64; 2]], angles: &[f64], weights: &[f64]) -> Vec<Vec<f64>> {
    states_real
        .iter()
        .map(|a| {
            angles
                .iter()
                .zip(weights)
                .map(|(&t, &w)| {
                    let dot = t.cos() * a[0] + t.sin() * a[1];
                    w * dot * dot
                })
                .collect()
        })
        .collect()
}

/// The objective I(p*, POVM(angles)) where p* is the BA-optimal prior, or
/// the fixed priors when those are given.
fn angle_objective(
    states_real: &[[f64; 2]],
    angles: &[f64],
    fixed_priors: Option<&[f64]>,
) -> f64 {
    let Some(weights) = solve_povm_weights(angles) else {
        return f64::NEG_INFINITY;
    };
    let rows = rows_from_angles(states_real, angles, &weights);
    match fixed_priors {
        Some(p) => super::mi_rows(p, &rows),
        None => {
            let uniform = vec![1.0 / states_real.len() as f64; states_real.len()];
            blahut_arimoto_rows(&rows, &uniform).1
        }
    }
}

/// Coordinate-wise refinement of the POVM angles: a coarse scan followed by a
/// golden-section polish of each angle in turn, repeated until the objective
/// stalls. Returns (angles, value, rounds).
fn refine_angles(
    states_real: &[[f64; 2]],
    mut angles: Vec<f64>,
    fixed_priors: Option<&[f64]>,
) -> (Vec<f64>, f64, usize) {
    let mut best = angle_objective(states_real, &angles, fixed_priors);
    let mut rounds = 0;
    for _ in 0..60 {
        rounds += 1;
        let before = best;
        for i in 0..angles.len() {
            // Coarse scan over the full period of the i-th direction.
            let mut scan_best = (angles[i], best);
            let steps = 48;
            for k in 0..steps {
                let t = k as f64 * PI / steps as f64;
                let mut cand = angles.clone();
                cand[i] = t;
                let v = angle_objective(states_real, &cand, fixed_priors);
                if v > scan_best.1 {
                    scan_best = (t, v);
                }
            }
            let width = PI / steps as f64;
            let (t, v) = golden_max(
                |t| {
                    let mut cand = angles.clone();
                    cand[i] = t;
                    angle_objective(states_real, &cand, fixed_priors)
                },
                scan_best.0 - width,
                scan_best.0 + width,
                1e-10,
            );
            if v > best {
                angles[i] = t;
                best = v;
            }
        }
        if best - before < CONVERGENCE_TOL {
            break;
        }
    }
    (angles, best, rounds)
}

struct Candidate {
    value: f64,
    angles: Vec<f64>,
}

/// Runs the restart schedule and returns the best candidate. Ties keep the
/// earliest restart, so the output is deterministic.
fn search_povm(
    ensemble: &LetterEnsemble,
    fixed_priors: Option<&[f64]>,
) -> (Candidate, usize) {
    let states_real: Vec<[f64; 2]> = ensemble
        .states()
        .iter()
        .map(|s| {
            let a = s.real_amplitudes();
            [a[0], a[1]]
        })
        .collect();
    let mut rng = ChaCha12Rng::seed_from_u64(OPTIMIZER_SEED);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    // Deterministic starts: an orthogonal pair, the anti-trine, and the
    // state directions themselves.
    starts.push(vec![0.0, PI / 2.0]);
    starts.push(vec![PI / 6.0, PI / 2.0, 5.0 * PI / 6.0]);
    let state_angles: Vec<f64> = states_real
        .iter()
        .map(|a| a[1].atan2(a[0]).rem_euclid(PI))
        .collect();
    if state_angles.len() == 3 {
        starts.push(state_angles);
    }
    for _ in 0..RANDOM_RESTARTS {
        let n = *[2usize, 3, 3, 4]
            .get(rng.gen_range(0..4))
            .unwrap();
        starts.push((0..n).map(|_| rng.gen_range(0.0..PI)).collect());
    }

    let mut best: Option<Candidate> = None;
    let mut total_rounds = 0;
    for start in starts {
        let (angles, value, rounds) = refine_angles(&states_real, start, fixed_priors);
        total_rounds += rounds;
        if !value.is_finite() {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => value > b.value + 1e-12,
        };
        if better {
            best = Some(Candidate { value, angles });
        }
    }
    (
        best.unwrap_or(Candidate {
            value: f64::NEG_INFINITY,
            angles: vec![0.0, PI / 2.0],
        }),
        total_rounds,
    )
}

/// Maximizes mutual information over priors and rank-1 real POVMs for the
/// given letter states.
pub fn optimize_c1(states: &[StateVector]) -> Result<CapacityResult> {
    let ensemble = LetterEnsemble::equiprobable(states.to_vec())?;
    let (cand, total_rounds) = search_povm(&ensemble, None);
    if !cand.value.is_finite() {
        return Err(Error::Convergence { best: cand.value });
    }
    let (weights, povm) = rank_one_povm(&cand.angles)
        .ok_or(Error::Convergence { best: cand.value })?;
    let channel = channel_matrix(&ensemble, &povm)?;
    let uniform = vec![1.0 / ensemble.len() as f64; ensemble.len()];
    let (priors, _) = blahut_arimoto_rows(channel.matrix(), &uniform);
    // The reported value is re-evaluated from the returned arguments so the
    // result is reproducible exactly.
    let value = mutual_information(&priors, &channel)?;
    Ok(CapacityResult {
        value,
        optimal_priors: priors,
        optimal_povm: povm,
        iterations: total_rounds,
        povm_angles: cand.angles,
        povm_weights: weights,
    })
}

/// Maximizes mutual information over rank-1 real POVMs at fixed priors.
/// Returns the accessible information and the optimizing POVM.
pub fn accessible_information(ensemble: &LetterEnsemble) -> Result<(f64, PovmSet)> {
    if ensemble.len() == 1 {
        // A single state conveys nothing; any complete measurement attains 0.
        let (_, povm) = rank_one_povm(&[0.0, PI / 2.0]).expect("orthogonal pair");
        return Ok((0.0, povm));
    }
    let priors = ensemble.priors().to_vec();
    let (cand, _) = search_povm(ensemble, Some(&priors));
    if !cand.value.is_finite() {
        return Err(Error::Convergence { best: cand.value });
    }
    let (_, povm) = rank_one_povm(&cand.angles)
        .ok_or(Error::Convergence { best: cand.value })?;
    let channel = channel_matrix(ensemble, &povm)?;
    let value = mutual_information(&priors, &channel)?;
    Ok((value, povm))
}
