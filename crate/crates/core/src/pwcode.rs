//! The length-two repeated-letter code over the ternary letter set, its
//! collective decoding basis, the super-additive gain, and the real
//! three-dimensional rotation geometry behind the offset sweep.
//!
//! The three codewords |Psi_xx> = |psi_x> (x) |psi_x> span a 3-dimensional
//! subspace of the two-qubit space (the symmetric subspace). The decoding
//! basis is the unique orthonormal triad symmetric under cyclic relabeling
//! with
//!
//!   |Psi_xx> = c |Pi_xx> + (s/sqrt2) sum_{y != x} |Pi_yy>,
//!
//! where c = cos(gamma/2) = (sqrt2+1)/sqrt6 and s = sin(gamma/2) =
//! (sqrt2-1)/sqrt6, gamma ~= 19.47 deg. (This is the square-root measurement
//! of the codeword set; the all-positive coefficient sign convention is the
//! one consistent with orthonormality, since the codeword Gram matrix has
//! +1/4 off the diagonal.) Diagonal channel elements are c^2 = 0.9714 and
//! off-diagonal ones s^2/2 = 0.0143.

use crate::info::{self, optimize_c1, ChannelModel};
use crate::qstate::{inner_product, tensor_product, trine_state, PovmSet, StateVector};
use crate::Result;

/// c = cos(gamma/2) = (sqrt(2)+1)/sqrt(6).
pub fn basis_c() -> f64 {
    (2f64.sqrt() + 1.0) / 6f64.sqrt()
}

/// s = sin(gamma/2) = (sqrt(2)-1)/sqrt(6).
pub fn basis_s() -> f64 {
    (2f64.sqrt() - 1.0) / 6f64.sqrt()
}

/// gamma = 2 asin(s) ~= 19.47 degrees, in radians.
pub fn gamma() -> f64 {
    2.0 * basis_s().asin()
}

/// Codeword |Psi_xx> = |psi_x> (x) |psi_x>.
pub fn codeword(x: usize) -> Result<StateVector> {
    let letter = trine_state(x)?;
    Ok(tensor_product(&letter, &letter))
}

/// The 3x3 expansion coefficients M with `Psi_x = sum_y M[x][y] Pi_y`:
/// diagonal c, off-diagonal s/sqrt(2).
pub fn coefficient_matrix() -> [[f64; 3]; 3] {
    let c = basis_c();
    let d = basis_s() / 2f64.sqrt();
    let mut m = [[d; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c;
    }
    m
}

/// The collective decoding basis: three orthonormal 4-dimensional vectors
/// plus the scalar data (c, s, gamma).
#[derive(Debug, Clone)]
pub struct DecodingBasis {
    pub vectors: [StateVector; 3],
    pub c: f64,
    pub s: f64,
    pub gamma: f64,
}

/// Constructs the decoding basis by inverting the coefficient matrix on the
/// codeword set: `Pi = M^{-1} Psi`. M = (c-d) I + d J has the closed-form
/// inverse (a I + b J) with a = 1/(c-d), b = -d / ((c-d)(c+2d)).
pub fn decoding_basis() -> DecodingBasis {
    let c = basis_c();
    let d = basis_s() / 2f64.sqrt();
    let a = 1.0 / (c - d);
    let b = -d / ((c - d) * (c + 2.0 * d));
    let cws: Vec<StateVector> = (0..3).map(|x| codeword(x).unwrap()).collect();
    let mut vectors = Vec::with_capacity(3);
    for y in 0..3 {
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 4];
        for (x, cw) in cws.iter().enumerate() {
            let coeff = if x == y { a + b } else { b };
            for (k, amp) in amps.iter_mut().enumerate() {
                *amp += coeff * cw.amplitude(k);
            }
        }
        vectors.push(StateVector::new(amps).expect("basis vectors are normalized"));
    }
    DecodingBasis {
        vectors: [vectors[0].clone(), vectors[1].clone(), vectors[2].clone()],
        c,
        s: basis_s(),
        gamma: gamma(),
    }
}

/// The fourth orthonormal direction of the two-qubit space, orthogonal to all
/// codewords: the antisymmetric combination (|01> - |10>)/sqrt(2).
pub fn complement_vector() -> StateVector {
    let r = 0.5f64.sqrt();
    StateVector::from_real(&[0.0, r, -r, 0.0]).unwrap()
}

/// The collective measurement as a complete POVM on the full two-qubit
/// space: projectors onto the three decoding vectors plus the antisymmetric
/// complement (labelled "ext"; it never fires on ideal codewords).
pub fn pair_povm() -> PovmSet {
    let basis = decoding_basis();
    let mut vectors = basis.vectors.to_vec();
    vectors.push(complement_vector());
    let povm = PovmSet::from_orthonormal_basis(&vectors).expect("orthonormal quadruple");
    // Relabel the complement outcome.
    let elements = (0..4).map(|i| povm.element(i).clone()).collect();
    PovmSet::new(
        elements,
        vec!["00".into(), "11".into(), "22".into(), "ext".into()],
    )
    .unwrap()
}

/// The 3x3 pair channel P(yy|xx) = |<Pi_yy|Psi_xx>|^2: symmetric with
/// diagonal c^2 and off-diagonal s^2/2.
pub fn pair_channel() -> ChannelModel {
    let basis = decoding_basis();
    let labels = vec!["00".to_string(), "11".to_string(), "22".to_string()];
    let mut rows = Vec::with_capacity(3);
    for x in 0..3 {
        let cw = codeword(x).unwrap();
        let row: Vec<f64> = basis
            .vectors
            .iter()
            .map(|v| inner_product(v, &cw).unwrap().norm_sqr())
            .collect();
        rows.push(row);
    }
    ChannelModel::new(labels.clone(), labels, rows).expect("pair channel rows are normalized")
}

/// Super-additivity summary: the pair information, its per-letter value, the
/// single-letter capacity, and the gain.
#[derive(Debug, Clone, Copy)]
pub struct GainRecord {
    /// I(X^2 : Y^2) at uniform codeword priors, bits per pair.
    pub i2: f64,
    /// i2 / 2, bits per letter.
    pub per_letter: f64,
    /// Single-letter capacity from the optimizer, bits per letter.
    pub c1: f64,
    /// per_letter - c1.
    pub gain: f64,
}

/// Computes the super-additive gain i2/2 - C1.
pub fn superadditive_gain() -> Result<GainRecord> {
    let i2 = info::mutual_information(&[1.0 / 3.0; 3], &pair_channel())?;
    let states: Vec<_> = (0..3).map(|x| trine_state(x).unwrap()).collect();
    let c1 = optimize_c1(&states)?.value;
    Ok(GainRecord {
        i2,
        per_letter: i2 / 2.0,
        c1,
        gain: i2 / 2.0 - c1,
    })
}

/// The real three-dimensional picture: codeword coordinates over the
/// decoding frame, the decoder axes themselves, and the symmetry axis.
#[derive(Debug, Clone)]
pub struct RealTrineFrame {
    /// Rows x: coordinates of |Psi_xx> over the orthonormal triad.
    pub codewords: [[f64; 3]; 3],
    /// The decoder axes in their own frame: the standard basis.
    pub decoder_axes: [[f64; 3]; 3],
    /// Unit vector (1,1,1)/sqrt(3), the only axis leaving both triads
    /// set-invariant under 120-degree rotations.
    pub symmetry_axis: [f64; 3],
}

impl RealTrineFrame {
    pub fn new() -> Self {
        let r = 1.0 / 3f64.sqrt();
        Self {
            codewords: coefficient_matrix(),
            decoder_axes: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            symmetry_axis: [r, r, r],
        }
    }
}

impl Default for RealTrineFrame {
    fn default() -> Self {
        Self::new()
    }
}

/// Rodrigues rotation of `v` about the unit axis `n` by `angle` (right-handed
/// for positive angles).
fn rotate_about(n: [f64; 3], angle: f64, v: [f64; 3]) -> [f64; 3] {
    let (c, s) = (angle.cos(), angle.sin());
    let dot = n[0] * v[0] + n[1] * v[1] + n[2] * v[2];
    let cross = [
        n[1] * v[2] - n[2] * v[1],
        n[2] * v[0] - n[0] * v[2],
        n[0] * v[1] - n[1] * v[0],
    ];
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = v[i] * c + cross[i] * s + n[i] * dot * (1.0 - c);
    }
    out
}

/// Codeword coordinates rotated by `offset` about the symmetry axis.
pub fn rotated_codeword_coords(offset: f64) -> [[f64; 3]; 3] {
    let frame = RealTrineFrame::new();
    let mut out = [[0.0; 3]; 3];
    for (x, row) in frame.codewords.iter().enumerate() {
        out[x] = rotate_about(frame.symmetry_axis, offset, *row);
    }
    out
}

/// The rotated codeword states, mapped back to the two-qubit space through
/// the decoding-basis expansion. The antisymmetric complement is untouched.
pub fn rotated_codewords(offset: f64) -> [StateVector; 3] {
    let basis = decoding_basis();
    let coords = rotated_codeword_coords(offset);
    let mut states = Vec::with_capacity(3);
    for w in &coords {
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 4];
        for (y, v) in basis.vectors.iter().enumerate() {
            for (k, amp) in amps.iter_mut().enumerate() {
                *amp += w[y] * v.amplitude(k);
            }
        }
        states.push(StateVector::new(amps).expect("rotations preserve the norm"));
    }
    [states[0].clone(), states[1].clone(), states[2].clone()]
}

/// The ideal channel for codewords rotated by `offset`:
/// P(y|x) = w_x(offset)[y]^2.
pub fn rotated_channel(offset: f64) -> ChannelModel {
    let coords = rotated_codeword_coords(offset);
    let rows: Vec<Vec<f64>> = coords
        .iter()
        .map(|w| w.iter().map(|&wy| wy * wy).collect())
        .collect();
    let labels = vec!["00".to_string(), "11".to_string(), "22".to_string()];
    ChannelModel::new(labels.clone(), labels, rows).expect("rotated rows stay normalized")
}

/// Mutual information at uniform priors through the rotated channel, one
/// value per requested offset (radians).
pub fn ideal_sweep(offsets: &[f64]) -> Vec<(f64, f64)> {
    offsets
        .iter()
        .map(|&delta| {
            let i = info::mutual_information(&[1.0 / 3.0; 3], &rotated_channel(delta))
                .expect("rotated channel is valid");
            (delta, i)
        })
        .collect()
}
