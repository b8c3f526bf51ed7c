//! Jones-matrix model of the single-photon encoder and decoder.
//!
//! A single photon carries two qubits: polarization {H, V} and location
//! {path A, path B}. The four modes are ordered (H_A, H_B, V_A, V_B),
//! matching the computational basis |00>, |01>, |10>, |11> with polarization
//! as the first letter.
//!
//! Fixed phase conventions of this model (reflections and mirror phases are
//! absorbed into half-wave plates at 0 degrees, which act as diag(1, -1) on a
//! path's polarization):
//!
//! * a PBS transmits H and reflects V with no extra phase;
//! * the "phase shifter" elements rotate a path's polarization plane by
//!   their angle;
//! * detection after the recombiner reads APD0 = H_A, APD1 = (V_A+V_B)/sqrt2,
//!   APD2 = (V_A-V_B)/sqrt2, and H_B is a declared no-count mode.
//!
//! Under these conventions the caption angle triples (0,0,0), (30,-30,-15),
//! (30,30,15) degrees produce the three codewords exactly, and the ideal
//! decoder reproduces the collective gate circuit mode for mode.

use crate::info::ChannelModel;
use crate::pwcode;
use crate::qstate::StateVector;
use crate::{Error, Result};
use num_complex::Complex64;

/// Spatial path of the dual-rail qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    A,
    B,
}

/// A linear-optical element of the model.
#[derive(Debug, Clone, Copy)]
pub enum OpticalElement {
    /// Half-wave plate at `theta_deg` in a path:
    /// [[cos 2t, sin 2t], [sin 2t, -cos 2t]] on (H, V).
    Hwp { path: Path, theta_deg: f64 },
    /// Polarizing beamsplitter across the two paths; `extinction` is the
    /// intensity fraction routed to the correct port (1.0 = ideal).
    Pbs { extinction: f64 },
    /// Polarization-plane rotation by `phi_deg` in a path.
    PhaseShifter { path: Path, phi_deg: f64 },
    /// Photodetector reading one recombined mode; terminates propagation.
    Apd { outcome: usize },
}

/// Four complex amplitudes over (H_A, H_B, V_A, V_B).
#[derive(Debug, Clone)]
pub struct OpticalState {
    amps: [Complex64; 4],
}

impl OpticalState {
    /// Photon entering horizontally polarized in path A.
    pub fn input_h_a() -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn from_state_vector(v: &StateVector) -> Result<Self> {
        if v.dim() != 4 {
            return Err(Error::DimensionMismatch(v.dim(), 4));
        }
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps.copy_from_slice(v.amplitudes());
        Ok(Self { amps })
    }

    pub fn to_state_vector(&self) -> Result<StateVector> {
        StateVector::new(self.amps.to_vec())
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn mix2(&mut self, i: usize, j: usize, m: [[f64; 2]; 2]) {
        let (a, b) = (self.amps[i], self.amps[j]);
        self.amps[i] = m[0][0] * a + m[0][1] * b;
        self.amps[j] = m[1][0] * a + m[1][1] * b;
    }
}

fn path_indices(path: Path) -> (usize, usize) {
    // (H index, V index) of the path.
    match path {
        Path::A => (0, 2),
        Path::B => (1, 3),
    }
}

/// Applies one element. APDs leave the state untouched.
pub fn apply_element(state: &mut OpticalState, element: &OpticalElement) {
    match *element {
        OpticalElement::Hwp { path, theta_deg } => {
            let t = 2.0 * theta_deg.to_radians();
            let (h, v) = path_indices(path);
            state.mix2(h, v, [[t.cos(), t.sin()], [t.sin(), -t.cos()]]);
        }
        OpticalElement::PhaseShifter { path, phi_deg } => {
            let p = phi_deg.to_radians();
            let (h, v) = path_indices(path);
            state.mix2(h, v, [[p.cos(), -p.sin()], [p.sin(), p.cos()]]);
        }
        OpticalElement::Pbs { extinction } => {
            let t = extinction.clamp(0.0, 1.0).sqrt();
            let r = (1.0 - extinction.clamp(0.0, 1.0)).sqrt();
            // H transmits (stays in its path), leaking r into the other port.
            state.mix2(0, 1, [[t, -r], [r, t]]);
            // V reflects (swaps path), leaking r into staying put.
            state.mix2(2, 3, [[r, t], [t, -r]]);
        }
        OpticalElement::Apd { .. } => {}
    }
}

/// Encoder half-wave-plate angle triples (theta_0, theta_1, theta_2) in
/// degrees for the three codewords.
pub const ENCODER_HWP_ANGLES_DEG: [[f64; 3]; 3] =
    [[0.0, 0.0, 0.0], [30.0, -30.0, -15.0], [30.0, 30.0, 15.0]];

/// Decoder phase-shifter setting in path A: -gamma/2 (about -9.74 degrees).
pub fn phi_a_deg() -> f64 {
    -(pwcode::gamma() / 2.0).to_degrees()
}

/// Decoder phase-shifter setting in path B: -45 degrees.
pub const PHI_B_DEG: f64 = -45.0;

/// Encoder element sequence for a given HWP angle triple.
pub fn encoder_elements(theta_deg: [f64; 3]) -> Vec<OpticalElement> {
    vec![
        OpticalElement::Hwp {
            path: Path::A,
            theta_deg: theta_deg[0],
        },
        OpticalElement::Pbs { extinction: 1.0 },
        // Reflection phase convention: V sign flips, absorbed as HWP(0).
        OpticalElement::Hwp {
            path: Path::B,
            theta_deg: 0.0,
        },
        OpticalElement::Hwp {
            path: Path::A,
            theta_deg: theta_deg[1],
        },
        OpticalElement::Hwp {
            path: Path::A,
            theta_deg: 0.0,
        },
        OpticalElement::Hwp {
            path: Path::B,
            theta_deg: theta_deg[2],
        },
    ]
}

/// Drives the encoder with an arbitrary angle triple (degrees).
pub fn encode_with_angles(theta_deg: [f64; 3]) -> OpticalState {
    let mut state = OpticalState::input_h_a();
    for e in &encoder_elements(theta_deg) {
        apply_element(&mut state, e);
    }
    state
}

/// Produces codeword `x` with the canonical HWP settings.
pub fn encode_optical(x: usize) -> Result<OpticalState> {
    if x > 2 {
        return Err(Error::InvalidLetter(x));
    }
    Ok(encode_with_angles(ENCODER_HWP_ANGLES_DEG[x]))
}

/// Decoder imperfections; `ideal()` for the lossless noiseless model.
#[derive(Debug, Clone, Copy)]
pub struct Imperfections {
    /// PBS extinction ratio (intensity fraction correctly routed).
    pub pbs_extinction: f64,
    /// Fringe visibility of the path recombination.
    pub visibility: f64,
}

impl Imperfections {
    pub fn ideal() -> Self {
        Self {
            pbs_extinction: 1.0,
            visibility: 1.0,
        }
    }
}

/// Decoder element sequence (the trailing APDs mark the detection mapping).
pub fn decoder_elements(imp: &Imperfections) -> Vec<OpticalElement> {
    vec![
        OpticalElement::Pbs {
            extinction: imp.pbs_extinction,
        },
        OpticalElement::Hwp {
            path: Path::A,
            theta_deg: 0.0,
        },
        OpticalElement::PhaseShifter {
            path: Path::A,
            phi_deg: phi_a_deg(),
        },
        OpticalElement::Hwp {
            path: Path::B,
            theta_deg: 0.0,
        },
        OpticalElement::PhaseShifter {
            path: Path::B,
            phi_deg: PHI_B_DEG,
        },
        OpticalElement::Apd { outcome: 0 },
        OpticalElement::Apd { outcome: 1 },
        OpticalElement::Apd { outcome: 2 },
    ]
}

/// Runs the decoder on a state and returns the three APD probabilities.
///
/// The recombiner mixes the V modes of the two paths 50/50; its interference
/// cross term is scaled by the visibility. APD0 watches H_A, APD1 and APD2
/// the symmetric/antisymmetric V combinations; H_B is a no-count mode, so
/// with imperfections the three probabilities can sum to less than one.
pub fn decode_optical(state: &OpticalState, imp: Option<&Imperfections>) -> [f64; 3] {
    let ideal = Imperfections::ideal();
    let imp = imp.unwrap_or(&ideal);
    let mut s = state.clone();
    for e in &decoder_elements(imp) {
        apply_element(&mut s, e);
    }
    let amps = s.amplitudes();
    let (va, vb) = (amps[2], amps[3]);
    let cross = imp.visibility * (va * vb.conj()).re;
    [
        amps[0].norm_sqr(),
        0.5 * (va.norm_sqr() + vb.norm_sqr()) + cross,
        0.5 * (va.norm_sqr() + vb.norm_sqr()) - cross,
    ]
}

/// Decode with custom phase-shifter settings; used for sensitivity checks.
pub fn decode_optical_with_phases(
    state: &OpticalState,
    phi_a: f64,
    phi_b: f64,
) -> [f64; 3] {
    let mut s = state.clone();
    let elements = vec![
        OpticalElement::Pbs { extinction: 1.0 },
        OpticalElement::Hwp {
            path: Path::A,
            theta_deg: 0.0,
        },
        OpticalElement::PhaseShifter {
            path: Path::A,
            phi_deg: phi_a,
        },
        OpticalElement::Hwp {
            path: Path::B,
            theta_deg: 0.0,
        },
        OpticalElement::PhaseShifter {
            path: Path::B,
            phi_deg: phi_b,
        },
    ];
    for e in &elements {
        apply_element(&mut s, e);
    }
    let amps = s.amplitudes();
    let (va, vb) = (amps[2], amps[3]);
    let cross = (va * vb.conj()).re;
    [
        amps[0].norm_sqr(),
        0.5 * (va.norm_sqr() + vb.norm_sqr()) + cross,
        0.5 * (va.norm_sqr() + vb.norm_sqr()) - cross,
    ]
}

/// The 3x3 channel of the optical decoder on the three codewords,
/// conditioned on a count (rows renormalized over the APD outcomes; with
/// ideal elements the no-count probability is zero and nothing changes).
pub fn optical_channel(imp: &Imperfections) -> Result<ChannelModel> {
    let mut rows = Vec::with_capacity(3);
    for x in 0..3 {
        let p = decode_optical(&encode_optical(x)?, Some(imp));
        let total: f64 = p.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidChannel("no detection probability".into()));
        }
        rows.push(p.iter().map(|&v| v / total).collect());
    }
    let labels = vec!["00".to_string(), "11".to_string(), "22".to_string()];
    ChannelModel::new(labels.clone(), labels, rows)
}
