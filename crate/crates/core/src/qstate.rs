//! Exact dense complex linear algebra for small Hilbert spaces (dim <= 4)
//! and the constructions specific to the ternary symmetric letter set.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function, so the whole module is safe to share across threads.

use crate::{Error, Result};
use num_complex::Complex64;

/// Tolerance for normalization checks on state vectors.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance for unitarity and POVM completeness checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// A pure state as an ordered sequence of complex amplitudes.
///
/// The amplitude ordering for composite systems is lexicographic with the
/// first tensor factor as the slow index, i.e. `(a ⊗ b)[2i + j] = a[i] b[j]`
/// for qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state vector, rejecting inputs that are not normalized
    /// within `NORM_TOL`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude sequence".into()));
        }
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "norm^2 deviates from 1 by {:.3e}",
                (norm_sq - 1.0).abs()
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Builds a state vector from arbitrary amplitudes by normalizing them.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Convenience constructor from real amplitudes.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    /// Real parts of the amplitudes; valid for the real-amplitude states used
    /// throughout this crate.
    pub fn real_amplitudes(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.re).collect()
    }

    /// Canonical global-phase representative: first amplitude of magnitude
    /// above `NORM_TOL` is made real and non-negative.
    pub fn canonical(&self) -> Self {
        let phase = self
            .amplitudes
            .iter()
            .find(|a| a.norm() > NORM_TOL)
            .map(|a| a / a.norm())
            .unwrap_or_else(|| Complex64::new(1.0, 0.0));
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a / phase).collect(),
        }
    }

    /// Density operator |psi><psi|.
    pub fn projector(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        m
    }
}

/// Inner product <a|b>, conjugate-linear in `a` and linear in `b`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Tensor product with the first factor as the slow index.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> StateVector {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in &a.amplitudes {
        for y in &b.amplitudes {
            amps.push(x * y);
        }
    }
    StateVector { amplitudes: amps }
}

/// The three ternary letter states in the {|0>, |1>} basis:
/// |psi_0> = (1, 0), |psi_1> = (-1/2, -sqrt(3)/2), |psi_2> = (-1/2, +sqrt(3)/2).
///
/// Pairwise inner products are -1/2. The explicit signs are part of the
/// construction and are kept verbatim rather than phase-canonicalized.
pub fn trine_state(x: usize) -> Result<StateVector> {
    let r = 3f64.sqrt() / 2.0;
    match x {
        0 => StateVector::from_real(&[1.0, 0.0]),
        1 => StateVector::from_real(&[-0.5, -r]),
        2 => StateVector::from_real(&[-0.5, r]),
        _ => Err(Error::InvalidLetter(x)),
    }
}

/// Small dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        Self::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect::<Vec<_>>(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.get(j, i).conj());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.dim {
                    acc += self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a *= s;
        }
        m
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.dim, v.dim());
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                amps[i] += self.get(i, j) * v.amplitudes[j];
            }
        }
        StateVector { amplitudes: amps }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    /// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations,
    /// ascending order. Intended for dim <= 4.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = self.clone();
        for _sweep in 0..64 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.norm() < 1e-300 {
                        continue;
                    }
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    // Phase so the off-diagonal element becomes real, then a
                    // standard symmetric Jacobi rotation.
                    let phase = apq / apq.norm();
                    let m = apq.norm();
                    let theta = 0.5 * (2.0 * m).atan2(aqq - app);
                    let (c, s) = (theta.cos(), theta.sin());
                    // Columns: v_p' = c*v_p - s*conj(phase)... apply U with
                    // U[p][p]=c, U[p][q]=s*phase, U[q][p]=-s*phase.conj(), U[q][q]=c
                    let mut u = CMatrix::identity(n);
                    u.set(p, p, Complex64::new(c, 0.0));
                    u.set(p, q, phase * s);
                    u.set(q, p, -phase.conj() * s);
                    u.set(q, q, Complex64::new(c, 0.0));
                    a = u.dagger().mul(&a).mul(&u);
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eig
    }
}

/// A unitary operator; construction verifies U†U = I within `UNITARY_TOL`.
#[derive(Debug, Clone)]
pub struct UnitaryOp {
    matrix: CMatrix,
}

impl UnitaryOp {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dev = matrix
            .dagger()
            .mul(&matrix)
            .max_abs_diff(&CMatrix::identity(matrix.dim()));
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { max_dev: dev });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        self.matrix.apply(v)
    }

    pub fn compose_after(&self, first: &UnitaryOp) -> Result<UnitaryOp> {
        UnitaryOp::new(self.matrix.mul(&first.matrix))
    }
}

/// Rotation about the y axis with the half-angle convention
/// R_y(phi) = [[cos(phi/2), -sin(phi/2)], [sin(phi/2), cos(phi/2)]].
///
/// Under this convention R_y(2*pi) = -I; the sign is irrelevant to any
/// probability but fixed here so circuit algebra is reproducible.
pub fn rotation_y(angle: f64) -> UnitaryOp {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    UnitaryOp::new(CMatrix::from_real_rows(&[vec![c, -s], vec![s, c]]))
        .expect("rotation matrices are unitary")
}

/// sigma_z = diag(1, -1).
pub fn sigma_z() -> UnitaryOp {
    UnitaryOp::new(CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]])).unwrap()
}

/// Q(phi) = R_y(phi) sigma_z, the reflection used by the decoding circuit.
/// Q(0) = sigma_z, Q(pi/2) = Hadamard, Q(pi) = sigma_x.
pub fn q_gate(angle: f64) -> UnitaryOp {
    UnitaryOp::new(rotation_y(angle).matrix().mul(sigma_z().matrix())).unwrap()
}

/// A positive operator-valued measure: Hermitian positive elements that sum
/// to the identity.
#[derive(Debug, Clone)]
pub struct PovmSet {
    elements: Vec<CMatrix>,
    labels: Vec<String>,
}

impl PovmSet {
    pub fn new(elements: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        if elements.len() != labels.len() {
            return Err(Error::InvalidPovm("labels and elements differ in length".into()));
        }
        let dim = elements[0].dim();
        let mut sum = CMatrix::zeros(dim);
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::InvalidPovm("mixed element dimensions".into()));
            }
            if !e.is_hermitian(1e-12) {
                return Err(Error::InvalidPovm("element is not Hermitian".into()));
            }
            if let Some(min) = e.hermitian_eigenvalues().first() {
                if *min < -1e-10 {
                    return Err(Error::InvalidPovm(format!(
                        "element has negative eigenvalue {min:.3e}"
                    )));
                }
            }
            sum = sum.add(e);
        }
        let dev = sum.max_abs_diff(&CMatrix::identity(dim));
        if dev > UNITARY_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {dev:.3e}"
            )));
        }
        Ok(Self { elements, labels })
    }

    /// Rank-1 POVM `sum_i w_i |v_i><v_i|` from weights and unit vectors.
    /// Positivity holds by construction (non-negative weights are enforced),
    /// so only completeness is checked.
    pub fn from_weighted_vectors(weights: &[f64], vectors: &[StateVector]) -> Result<Self> {
        if weights.len() != vectors.len() || weights.is_empty() {
            return Err(Error::InvalidPovm("weights/vectors length mismatch".into()));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidPovm("negative weight".into()));
        }
        let dim = vectors[0].dim();
        let mut sum = CMatrix::zeros(dim);
        let mut elements = Vec::with_capacity(weights.len());
        for (&w, v) in weights.iter().zip(vectors) {
            if v.dim() != dim {
                return Err(Error::InvalidPovm("mixed element dimensions".into()));
            }
            let e = v.projector().scale(Complex64::new(w, 0.0));
            sum = sum.add(&e);
            elements.push(e);
        }
        let dev = sum.max_abs_diff(&CMatrix::identity(dim));
        if dev > UNITARY_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {dev:.3e}"
            )));
        }
        let labels = (0..weights.len()).map(|i| i.to_string()).collect();
        Ok(Self { elements, labels })
    }

    /// Orthonormal-basis projectors as a (von Neumann) POVM.
    pub fn from_orthonormal_basis(vectors: &[StateVector]) -> Result<Self> {
        let weights = vec![1.0; vectors.len()];
        Self::from_weighted_vectors(&weights, vectors)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn element(&self, i: usize) -> &CMatrix {
        &self.elements[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Outcome probability Tr(Pi_y |psi><psi|) = <psi|Pi_y|psi>.
    pub fn outcome_probability(&self, y: usize, state: &StateVector) -> Result<f64> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch(self.dim(), state.dim()));
        }
        let applied = self.elements[y].apply(state);
        let p = inner_product(state, &applied)?;
        Ok(p.re.clamp(0.0, 1.0))
    }
}
