//! Gate-level realization of the collective pair decoder, the linear-optical
//! encoder/decoder model, and the separable (classical) decoder.
//!
//! The two-qubit register is (polarization, location) with polarization as
//! the slow index: basis order |00>, |01>, |10>, |11>.
//!
//! The collective decoder is a fixed sequence of five controlled gates whose
//! parameters were solved so that the composed unitary maps the decoding
//! basis onto distinct computational basis states (a per-letter standard
//! measurement then reads off the outcome):
//!
//! ```text
//!   Pi_00 -> |00>,   Pi_11 -> -|10>,   Pi_22 -> -|11>,   Pi_ext -> |01>
//! ```
//!
//! The gate sequence is not unique; this one uses Q(phi) = R_y(phi) sigma_z
//! reflections plus one explicit R_y(gamma) rotation, with open-circle
//! (condition-on-zero) controls where noted.

pub mod optics;

use crate::info::{helstrom_error, mutual_information, ChannelModel};
use crate::pwcode;
use crate::qstate::{q_gate, rotation_y, sigma_z, trine_state, CMatrix, StateVector, UnitaryOp};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Index of the polarization qubit (first letter, slow index).
pub const POLARIZATION: usize = 0;
/// Index of the location qubit (second letter).
pub const LOCATION: usize = 1;

/// Control condition for a two-qubit gate. `on_zero` marks the open-circle
/// convention (gate applies when the control reads 0).
#[derive(Debug, Clone, Copy)]
pub struct Control {
    pub qubit: usize,
    pub on_zero: bool,
}

/// One step of a two-qubit circuit: a 2x2 unitary on `target`, optionally
/// conditioned on the other qubit.
#[derive(Debug, Clone)]
pub struct GateStep {
    pub target: usize,
    pub control: Option<Control>,
    pub unitary: UnitaryOp,
    pub label: String,
}

impl GateStep {
    pub fn single(target: usize, unitary: UnitaryOp, label: &str) -> Result<Self> {
        if target > 1 {
            return Err(Error::InvalidConfig(format!("qubit index {target}")));
        }
        Ok(Self {
            target,
            control: None,
            unitary,
            label: label.into(),
        })
    }

    pub fn controlled(
        control: usize,
        on_zero: bool,
        target: usize,
        unitary: UnitaryOp,
        label: &str,
    ) -> Result<Self> {
        if target > 1 || control > 1 {
            return Err(Error::InvalidConfig(format!(
                "qubit index out of range: control {control}, target {target}"
            )));
        }
        if control == target {
            return Err(Error::InvalidConfig(
                "control and target must differ".into(),
            ));
        }
        Ok(Self {
            target,
            control: Some(Control {
                qubit: control,
                on_zero,
            }),
            unitary,
            label: label.into(),
        })
    }

    /// Applies the step to a two-qubit state.
    pub fn apply(&self, state: &StateVector) -> StateVector {
        assert_eq!(state.dim(), 4, "gate steps act on two qubits");
        let mut amps: Vec<num_complex::Complex64> = state.amplitudes().to_vec();
        let target_bit = if self.target == POLARIZATION { 2 } else { 1 };
        let other_bit = 3 - target_bit;
        for rest in [0usize, other_bit] {
            if let Some(ctrl) = self.control {
                let ctrl_bit = if ctrl.qubit == POLARIZATION { 2 } else { 1 };
                let ctrl_is_one = rest & ctrl_bit != 0;
                if ctrl_is_one == ctrl.on_zero {
                    continue;
                }
            }
            let i0 = rest;
            let i1 = rest | target_bit;
            let (a0, a1) = (amps[i0], amps[i1]);
            let m = self.unitary.matrix();
            amps[i0] = m.get(0, 0) * a0 + m.get(0, 1) * a1;
            amps[i1] = m.get(1, 0) * a0 + m.get(1, 1) * a1;
        }
        StateVector::new(amps).expect("gates preserve the norm")
    }
}

/// The canonical five controlled gates of the collective decoder, in
/// application order.
pub fn collective_gates() -> Vec<GateStep> {
    let gamma = pwcode::gamma();
    vec![
        GateStep::controlled(POLARIZATION, false, LOCATION, q_gate(PI), "CX").unwrap(),
        GateStep::controlled(LOCATION, true, POLARIZATION, rotation_y(gamma), "Ry(gamma)")
            .unwrap(),
        GateStep::controlled(LOCATION, true, POLARIZATION, sigma_z(), "Q(0)").unwrap(),
        GateStep::controlled(LOCATION, false, POLARIZATION, q_gate(-PI / 2.0), "Q(-pi/2)")
            .unwrap(),
        GateStep::controlled(POLARIZATION, false, LOCATION, q_gate(PI / 2.0), "Q(pi/2)")
            .unwrap(),
    ]
}

/// Composes a gate list into a 4x4 unitary, verifying unitarity.
pub fn unitary_from_gates(gates: &[GateStep]) -> Result<UnitaryOp> {
    let mut columns = Vec::with_capacity(4);
    for b in 0..4 {
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 4];
        amps[b] = num_complex::Complex64::new(1.0, 0.0);
        let mut state = StateVector::new(amps).unwrap();
        for g in gates {
            state = g.apply(&state);
        }
        columns.push(state);
    }
    let mut m = CMatrix::zeros(4);
    for (b, col) in columns.iter().enumerate() {
        for i in 0..4 {
            m.set(i, b, col.amplitude(i));
        }
    }
    UnitaryOp::new(m)
}

/// The composed collective-decoding unitary.
pub fn build_collective_circuit() -> Result<UnitaryOp> {
    unitary_from_gates(&collective_gates())
}

/// Measurement outcome assigned to a computational basis state after the
/// collective circuit: |00> -> 0, |10> -> 1, |11> -> 2, |01> -> no-count.
pub fn collective_outcome(basis_index: usize) -> Option<usize> {
    match basis_index {
        0 => Some(0),
        2 => Some(1),
        3 => Some(2),
        1 => None,
        _ => panic!("basis index out of range"),
    }
}

/// Outcome distribution over (outcome 0, 1, 2) when the circuit is applied to
/// `state` and each letter is measured in the standard basis.
pub fn collective_outcome_probabilities(state: &StateVector) -> Result<[f64; 3]> {
    let u = build_collective_circuit()?;
    let out = u.apply(state);
    let mut p = [0.0f64; 3];
    for b in 0..4 {
        if let Some(y) = collective_outcome(b) {
            p[y] += out.amplitude(b).norm_sqr();
        }
    }
    Ok(p)
}

/// The 3x3 channel induced by the gate circuit on the codewords.
pub fn collective_circuit_channel() -> Result<ChannelModel> {
    let mut rows = Vec::with_capacity(3);
    for x in 0..3 {
        let p = collective_outcome_probabilities(&pwcode::codeword(x)?)?;
        rows.push(p.to_vec());
    }
    let labels = vec!["00".to_string(), "11".to_string(), "22".to_string()];
    ChannelModel::new(labels.clone(), labels, rows)
}

/// Measurement-basis angle of the binary (Helstrom) measurement that attains
/// C1 on the letter subset {psi_0, psi_1}: -15 degrees in the real plane;
/// the second projector sits 90 degrees away.
pub fn separable_measurement_angle() -> f64 {
    -PI / 12.0
}

/// The binary symmetric channel induced by the per-letter C1 strategy:
/// only letters {psi_0, psi_1} with the optimal binary projective
/// measurement. Crossover = Helstrom error 0.066987.
pub fn separable_decoder_channel() -> ChannelModel {
    let q = helstrom_error(&trine_state(0).unwrap(), &trine_state(1).unwrap(), 0.5).unwrap();
    ChannelModel::binary_symmetric(q).expect("valid crossover")
}

/// Mutual information per letter of the separable strategy at equal priors.
pub fn separable_per_letter_information() -> f64 {
    mutual_information(&[0.5, 0.5], &separable_decoder_channel()).unwrap()
}

/// Agreement report between the analytic pair channel, the gate circuit, and
/// the ideal optical model.
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceReport {
    /// Largest |Delta| over all (input, outcome) pairs and model pairs.
    pub max_discrepancy: f64,
    /// (input, outcome, delta) where the largest discrepancy occurred.
    pub worst: (usize, usize, f64),
}

fn channel_discrepancy(a: &ChannelModel, b: &ChannelModel) -> (usize, usize, f64) {
    let mut worst = (0, 0, 0.0f64);
    for x in 0..3 {
        for y in 0..3 {
            let d = (a.probability(y, x) - b.probability(y, x)).abs();
            if d > worst.2 {
                worst = (x, y, d);
            }
        }
    }
    worst
}

/// Compares the three routes to the pair channel. Fails (carrying the worst
/// (input, outcome, delta) triple) when they disagree beyond 1e-10.
pub fn verify_circuit_equivalence() -> Result<EquivalenceReport> {
    let analytic = pwcode::pair_channel();
    let gate = collective_circuit_channel()?;
    let optical = optics::optical_channel(&optics::Imperfections::ideal())?;
    let mut worst = channel_discrepancy(&analytic, &gate);
    for pair in [
        channel_discrepancy(&analytic, &optical),
        channel_discrepancy(&gate, &optical),
    ] {
        if pair.2 > worst.2 {
            worst = pair;
        }
    }
    let report = EquivalenceReport {
        max_discrepancy: worst.2,
        worst,
    };
    if report.max_discrepancy > 1e-10 {
        return Err(Error::InvalidState(format!(
            "decoder models disagree: input {} outcome {} delta {:.3e}",
            worst.0, worst.1, worst.2
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::qstate::inner_product;

    #[test]
    fn gate_step_rejects_control_equal_target() {
        assert!(GateStep::controlled(0, false, 0, sigma_z(), "bad").is_err());
    }

    #[test]
    fn collective_circuit_is_unitary_and_has_five_controlled_gates() {
        let gates = collective_gates();
        assert_eq!(gates.len(), 5);
        assert!(gates.iter().all(|g| g.control.is_some()));
        // One gate conditions on zero (open circle) and one carries gamma.
        assert!(gates.iter().any(|g| g.control.unwrap().on_zero));
        assert!(gates.iter().any(|g| g.label == "Ry(gamma)"));
        let u = build_collective_circuit().unwrap();
        let dev = u
            .matrix()
            .dagger()
            .mul(u.matrix())
            .max_abs_diff(&CMatrix::identity(4));
        assert!(dev < 1e-10);
    }

    #[test]
    fn circuit_maps_decoding_basis_to_computational_basis() {
        let u = build_collective_circuit().unwrap();
        let basis = pwcode::decoding_basis();
        let targets = [0usize, 2, 3];
        for (i, v) in basis.vectors.iter().enumerate() {
            let out = u.apply(v);
            assert_abs_diff_eq!(out.amplitude(targets[i]).norm(), 1.0, epsilon = 1e-12);
        }
        let ext = pwcode::complement_vector();
        let out = u.apply(&ext);
        assert_abs_diff_eq!(out.amplitude(1).norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn circuit_statistics_on_first_codeword() {
        let p = collective_outcome_probabilities(&pwcode::codeword(0).unwrap()).unwrap();
        assert_abs_diff_eq!(p[0], 0.9714, epsilon = 1e-4);
        assert_abs_diff_eq!(p[1], 0.0143, epsilon = 1e-4);
        assert_abs_diff_eq!(p[2], 0.0143, epsilon = 1e-4);
    }

    #[test]
    fn circuit_channel_matches_analytic_channel() {
        let gate = collective_circuit_channel().unwrap();
        let analytic = pwcode::pair_channel();
        for x in 0..3 {
            for y in 0..3 {
                assert_abs_diff_eq!(
                    gate.probability(y, x),
                    analytic.probability(y, x),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn circuit_overlaps_reproduce_expansion_coefficients() {
        // |<b_y|U|Psi_xx>|^2 equals the squared expansion coefficient.
        let u = build_collective_circuit().unwrap();
        let m = pwcode::coefficient_matrix();
        let targets = [0usize, 2, 3];
        for x in 0..3 {
            let out = u.apply(&pwcode::codeword(x).unwrap());
            for y in 0..3 {
                assert_abs_diff_eq!(
                    out.amplitude(targets[y]).norm_sqr(),
                    m[x][y] * m[x][y],
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn outcome_assignment_is_a_partition() {
        let mut seen = [0usize; 3];
        let mut no_count = 0;
        for b in 0..4 {
            match collective_outcome(b) {
                Some(y) => seen[y] += 1,
                None => no_count += 1,
            }
        }
        assert_eq!(seen, [1, 1, 1]);
        assert_eq!(no_count, 1);
    }

    #[test]
    fn separable_decoder_reaches_c1() {
        let ch = separable_decoder_channel();
        assert_abs_diff_eq!(ch.probability(1, 0), 0.066987, epsilon = 1e-6);
        let per_letter = separable_per_letter_information();
        assert_abs_diff_eq!(per_letter, 0.6454, epsilon = 1e-3);
        // Two independent letters: twice the classical limit.
        assert_abs_diff_eq!(2.0 * per_letter, 1.2908, epsilon = 2e-3);
    }

    #[test]
    fn separable_product_measurements_never_beat_two_c1() {
        // Random product measurements on the codewords: per-pair information
        // stays below 2*C1.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        let two_c1 = 2.0 * separable_per_letter_information();
        let codewords: Vec<_> = (0..3).map(|x| pwcode::codeword(x).unwrap()).collect();
        for _ in 0..1000 {
            let a: f64 = rng.gen_range(0.0..PI);
            let b: f64 = rng.gen_range(0.0..PI);
            // Product projective measurement: basis {a, a+90} x {b, b+90}.
            let mut rows = Vec::new();
            for cw in &codewords {
                let mut row = Vec::new();
                for ya in [a, a + PI / 2.0] {
                    for yb in [b, b + PI / 2.0] {
                        let va = StateVector::from_real(&[ya.cos(), ya.sin()]).unwrap();
                        let vb = StateVector::from_real(&[yb.cos(), yb.sin()]).unwrap();
                        let proj = crate::qstate::tensor_product(&va, &vb);
                        row.push(inner_product(&proj, cw).unwrap().norm_sqr());
                    }
                }
                rows.push(row);
            }
            let ch = ChannelModel::from_matrix(rows).unwrap();
            let i = mutual_information(&[1.0 / 3.0; 3], &ch).unwrap();
            assert!(
                i <= two_c1 + 1e-9,
                "product measurement at ({a},{b}) gave {i} > {two_c1}"
            );
        }
    }

    #[test]
    fn equivalence_report_is_clean_for_ideal_models() {
        let report = verify_circuit_equivalence().unwrap();
        assert!(report.max_discrepancy < 1e-10);
    }
}
