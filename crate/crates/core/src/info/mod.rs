//! Channel matrices, mutual information, minimum-error discrimination, and
//! the single-letter optimizers (capacity and accessible information).

mod optimize;

pub(crate) use optimize::golden_max;
pub use optimize::{accessible_information, optimize_c1, rank_one_povm, CapacityResult};

use crate::qstate::{inner_product, CMatrix, PovmSet, StateVector};
use crate::{Error, Result};
use num_complex::Complex64;

/// Tolerance on prior-probability normalization.
const PRIOR_TOL: f64 = 1e-9;

/// A set of pure states with prior probabilities.
#[derive(Debug, Clone)]
pub struct LetterEnsemble {
    states: Vec<StateVector>,
    priors: Vec<f64>,
}

impl LetterEnsemble {
    pub fn new(states: Vec<StateVector>, priors: Vec<f64>) -> Result<Self> {
        if states.len() != priors.len() {
            return Err(Error::InvalidPriors(format!(
                "{} states but {} priors",
                states.len(),
                priors.len()
            )));
        }
        if states.is_empty() {
            return Err(Error::InvalidPriors("empty ensemble".into()));
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::InvalidState("mixed state dimensions".into()));
        }
        validate_priors(&priors)?;
        Ok(Self { states, priors })
    }

    /// Equal priors over the given states.
    pub fn equiprobable(states: Vec<StateVector>) -> Result<Self> {
        let n = states.len();
        Self::new(states, vec![1.0 / n as f64; n])
    }

    /// The equiprobable ternary letter ensemble.
    pub fn trine() -> Self {
        let states = (0..3).map(|x| crate::qstate::trine_state(x).unwrap()).collect();
        Self::equiprobable(states).unwrap()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Average density operator sum_x P(x) |psi_x><psi_x|.
    pub fn average_state(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.dim());
        for (st, &p) in self.states.iter().zip(&self.priors) {
            s = s.add(&st.projector().scale(Complex64::new(p, 0.0)));
        }
        s
    }
}

fn validate_priors(priors: &[f64]) -> Result<()> {
    if priors.iter().any(|&p| p < -PRIOR_TOL || !p.is_finite()) {
        return Err(Error::InvalidPriors("negative or non-finite entry".into()));
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > PRIOR_TOL {
        return Err(Error::InvalidPriors(format!("sum {total} != 1")));
    }
    Ok(())
}

/// A discrete memoryless channel: labeled alphabets and P(y|x).
#[derive(Debug, Clone)]
pub struct ChannelModel {
    input_labels: Vec<String>,
    output_labels: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

impl ChannelModel {
    pub fn new(
        input_labels: Vec<String>,
        output_labels: Vec<String>,
        matrix: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if matrix.len() != input_labels.len() {
            return Err(Error::InvalidChannel("row count != input labels".into()));
        }
        for row in &matrix {
            if row.len() != output_labels.len() {
                return Err(Error::InvalidChannel("column count != output labels".into()));
            }
            if row.iter().any(|&p| p < -1e-12 || !p.is_finite()) {
                return Err(Error::InvalidChannel("negative entry".into()));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidChannel(format!("row sums to {s}")));
            }
        }
        Ok(Self {
            input_labels,
            output_labels,
            matrix,
        })
    }

    /// Channel with numeric labels 0..n.
    pub fn from_matrix(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let ins = (0..matrix.len()).map(|i| i.to_string()).collect();
        let outs = (0..matrix.first().map_or(0, |r| r.len()))
            .map(|i| i.to_string())
            .collect();
        Self::new(ins, outs, matrix)
    }

    /// Binary symmetric channel with the given crossover probability.
    pub fn binary_symmetric(crossover: f64) -> Result<Self> {
        Self::from_matrix(vec![
            vec![1.0 - crossover, crossover],
            vec![crossover, 1.0 - crossover],
        ])
    }

    pub fn num_inputs(&self) -> usize {
        self.matrix.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.output_labels.len()
    }

    pub fn probability(&self, y: usize, x: usize) -> f64 {
        self.matrix[x][y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.matrix[x]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }
}

/// Channel matrix P(y|x) = Tr(Pi_y |psi_x><psi_x|) induced by measuring an
/// ensemble with a POVM.
pub fn channel_matrix(ensemble: &LetterEnsemble, povm: &PovmSet) -> Result<ChannelModel> {
    if ensemble.dim() != povm.dim() {
        return Err(Error::DimensionMismatch(ensemble.dim(), povm.dim()));
    }
    let mut rows = Vec::with_capacity(ensemble.len());
    for st in ensemble.states() {
        let mut row = Vec::with_capacity(povm.len());
        for y in 0..povm.len() {
            row.push(povm.outcome_probability(y, st)?);
        }
        rows.push(row);
    }
    let ins = (0..ensemble.len()).map(|i| i.to_string()).collect();
    ChannelModel::new(ins, povm.labels().to_vec(), rows)
}

/// Shannon mutual information I(X:Y) in bits, with the usual convention that
/// terms with vanishing probability contribute zero.
pub fn mutual_information(priors: &[f64], channel: &ChannelModel) -> Result<f64> {
    if priors.len() != channel.num_inputs() {
        return Err(Error::DimensionMismatch(priors.len(), channel.num_inputs()));
    }
    validate_priors(priors)?;
    Ok(mi_rows(priors, channel.matrix()))
}

/// Mutual information on a raw row matrix; no validation. Shared by the
/// public entry point and the optimizer hot path.
pub(crate) fn mi_rows(priors: &[f64], rows: &[Vec<f64>]) -> f64 {
    let ny = rows.first().map_or(0, |r| r.len());
    let mut marginal = vec![0.0; ny];
    for (row, &px) in rows.iter().zip(priors) {
        for (m, &pyx) in marginal.iter_mut().zip(row) {
            *m += px * pyx;
        }
    }
    let mut bits = 0.0;
    for (row, &px) in rows.iter().zip(priors) {
        if px <= 0.0 {
            continue;
        }
        for (&pyx, &m) in row.iter().zip(&marginal) {
            if pyx > 0.0 && m > 0.0 {
                bits += px * pyx * (pyx / m).log2();
            }
        }
    }
    bits.max(0.0)
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

/// Minimum error probability for discriminating two pure states with priors
/// (p, 1-p): P_e = (1 - sqrt(1 - 4 p (1-p) |<a|b>|^2)) / 2.
pub fn helstrom_error(a: &StateVector, b: &StateVector, p: f64) -> Result<f64> {
    assert!((0.0..=1.0).contains(&p), "prior must lie in [0, 1]");
    let overlap = inner_product(a, b)?.norm_sqr();
    let arg = (1.0 - 4.0 * p * (1.0 - p) * overlap).max(0.0);
    Ok(0.5 * (1.0 - arg.sqrt()))
}

/// Square-root measurement of an ensemble: Pi_x = S^{-1/2} p_x rho_x S^{-1/2}
/// where S is the average state. Only qubit ensembles are supported.
pub fn srm_povm(ensemble: &LetterEnsemble) -> Result<PovmSet> {
    if ensemble.dim() != 2 {
        return Err(Error::NotSymmetric(
            "square-root measurement implemented for qubit ensembles only".into(),
        ));
    }
    let s_inv_sqrt = inverse_sqrt_2x2(&ensemble.average_state())?;
    let mut elements = Vec::with_capacity(ensemble.len());
    for (st, &p) in ensemble.states().iter().zip(ensemble.priors()) {
        let rho = st.projector().scale(Complex64::new(p, 0.0));
        elements.push(s_inv_sqrt.mul(&rho).mul(&s_inv_sqrt));
    }
    let labels = (0..ensemble.len()).map(|i| i.to_string()).collect();
    PovmSet::new(elements, labels)
}

/// Inverse square root of a positive-definite Hermitian 2x2 matrix.
fn inverse_sqrt_2x2(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_hermitian(1e-10) {
        return Err(Error::InvalidPovm("average state is not Hermitian".into()));
    }
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1);
    let tr = a + d;
    let det = a * d - b.norm_sqr();
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
    if l2 <= 1e-14 {
        return Err(Error::InvalidPovm("average state is singular".into()));
    }
    // Spectral decomposition: eigenvector for l1.
    let v1 = if b.norm() > 1e-14 {
        StateVector::normalized(vec![b, Complex64::new(l1 - a, 0.0)])?
    } else if a >= d {
        StateVector::from_real(&[1.0, 0.0])?
    } else {
        StateVector::from_real(&[0.0, 1.0])?
    };
    let v2 = StateVector::normalized(vec![-v1.amplitude(1).conj(), v1.amplitude(0).conj()])?;
    let p1 = v1.projector().scale(Complex64::new(1.0 / l1.sqrt(), 0.0));
    let p2 = v2.projector().scale(Complex64::new(1.0 / l2.sqrt(), 0.0));
    Ok(p1.add(&p2))
}

/// Minimum average error probability for a symmetric pure-state qubit
/// ensemble with equal priors, attained by the square-root measurement.
///
/// Rejects ensembles that are not symmetric (unequal priors or unequal
/// pairwise overlaps), for which the square-root measurement need not be
/// optimal.
pub fn minimum_error_probability(ensemble: &LetterEnsemble) -> Result<f64> {
    let n = ensemble.len();
    if n < 2 {
        return Err(Error::NotSymmetric("need at least two states".into()));
    }
    let p0 = ensemble.priors()[0];
    if ensemble.priors().iter().any(|&p| (p - p0).abs() > 1e-9) {
        return Err(Error::NotSymmetric("priors are not equal".into()));
    }
    let mut overlap: Option<f64> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let o = inner_product(&ensemble.states()[i], &ensemble.states()[j])?.norm();
            match overlap {
                None => overlap = Some(o),
                Some(prev) if (prev - o).abs() > 1e-9 => {
                    return Err(Error::NotSymmetric(
                        "pairwise overlaps are not all equal".into(),
                    ))
                }
                _ => {}
            }
        }
    }
    let povm = srm_povm(ensemble)?;
    let channel = channel_matrix(ensemble, &povm)?;
    let p_correct: f64 = ensemble
        .priors()
        .iter()
        .enumerate()
        .map(|(x, &p)| p * channel.probability(x, x))
        .sum();
    Ok((1.0 - p_correct).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::trine_state;
    use approx::assert_abs_diff_eq;

    fn orthogonal_pair() -> LetterEnsemble {
        LetterEnsemble::equiprobable(vec![
            StateVector::from_real(&[1.0, 0.0]).unwrap(),
            StateVector::from_real(&[0.0, 1.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn srm_on_trine_gives_two_thirds_channel() {
        // Independent oracle: P(y|x) = (2/3) |<psi_y|psi_x>|^2.
        let ens = LetterEnsemble::trine();
        let povm = srm_povm(&ens).unwrap();
        let ch = channel_matrix(&ens, &povm).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let overlap = inner_product(&trine_state(y).unwrap(), &trine_state(x).unwrap())
                    .unwrap()
                    .norm_sqr();
                let oracle = 2.0 / 3.0 * overlap;
                assert_abs_diff_eq!(ch.probability(y, x), oracle, epsilon = 1e-12);
                let expected = if x == y { 2.0 / 3.0 } else { 1.0 / 6.0 };
                assert_abs_diff_eq!(ch.probability(y, x), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn orthonormal_ensemble_with_own_projectors_is_identity_channel() {
        let ens = orthogonal_pair();
        let povm = PovmSet::from_orthonormal_basis(ens.states()).unwrap();
        let ch = channel_matrix(&ens, &povm).unwrap();
        assert_abs_diff_eq!(ch.probability(0, 0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ch.probability(1, 0), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn mutual_information_of_identity_channel_is_log2_of_size() {
        let ch = ChannelModel::from_matrix(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let i = mutual_information(&[1.0 / 3.0; 3], &ch).unwrap();
        assert_abs_diff_eq!(i, 3f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn mutual_information_of_constant_rows_is_zero() {
        let ch = ChannelModel::from_matrix(vec![vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
        assert_abs_diff_eq!(
            mutual_information(&[0.4, 0.6], &ch).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn mutual_information_invariant_under_output_relabeling() {
        let ch = ChannelModel::from_matrix(vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.6, 0.3],
        ])
        .unwrap();
        let permuted = ChannelModel::from_matrix(vec![
            vec![0.1, 0.7, 0.2],
            vec![0.3, 0.1, 0.6],
        ])
        .unwrap();
        let p = [0.35, 0.65];
        assert_abs_diff_eq!(
            mutual_information(&p, &ch).unwrap(),
            mutual_information(&p, &permuted).unwrap(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn mutual_information_rejects_bad_priors() {
        let ch = ChannelModel::binary_symmetric(0.1).unwrap();
        assert!(mutual_information(&[0.5, 0.6], &ch).is_err());
        assert!(mutual_information(&[-0.1, 1.1], &ch).is_err());
    }

    #[test]
    fn helstrom_error_examples() {
        let z0 = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let z1 = StateVector::from_real(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(helstrom_error(&z0, &z1, 0.5).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(helstrom_error(&z0, &z0, 0.5).unwrap(), 0.5, epsilon = 1e-15);

        let e = helstrom_error(&trine_state(0).unwrap(), &trine_state(1).unwrap(), 0.5).unwrap();
        let expected = 0.5 * (1.0 - (3f64).sqrt() / 2.0);
        assert_abs_diff_eq!(e, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(e, 0.0669872981077807, epsilon = 1e-12);
        // Consistency with the single-letter capacity value.
        assert_abs_diff_eq!(1.0 - binary_entropy(e), 0.6454, epsilon = 1e-3);
    }

    #[test]
    fn helstrom_error_symmetric_under_argument_swap() {
        let a = trine_state(0).unwrap();
        let b = trine_state(2).unwrap();
        for p in [0.0, 0.2, 0.5, 0.9, 1.0] {
            assert_abs_diff_eq!(
                helstrom_error(&a, &b, p).unwrap(),
                helstrom_error(&b, &a, 1.0 - p).unwrap(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn trine_minimum_error_is_one_third() {
        let e = minimum_error_probability(&LetterEnsemble::trine()).unwrap();
        assert_abs_diff_eq!(e, 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn orthogonal_pair_minimum_error_is_zero() {
        let e = minimum_error_probability(&orthogonal_pair()).unwrap();
        assert_abs_diff_eq!(e, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn binary_trine_subset_minimum_error_agrees_with_helstrom() {
        let ens = LetterEnsemble::equiprobable(vec![
            trine_state(0).unwrap(),
            trine_state(1).unwrap(),
        ])
        .unwrap();
        let e = minimum_error_probability(&ens).unwrap();
        let h = helstrom_error(&trine_state(0).unwrap(), &trine_state(1).unwrap(), 0.5).unwrap();
        assert_abs_diff_eq!(e, h, epsilon = 1e-10);
        assert_abs_diff_eq!(e, 0.066987, epsilon = 1e-6);
    }

    #[test]
    fn non_symmetric_ensembles_are_rejected() {
        let ens = LetterEnsemble::new(
            vec![trine_state(0).unwrap(), trine_state(1).unwrap()],
            vec![0.7, 0.3],
        )
        .unwrap();
        assert!(matches!(
            minimum_error_probability(&ens),
            Err(Error::NotSymmetric(_))
        ));
        // Unequal overlaps: {|0>, |psi_1>, |+>} is not a symmetric set.
        let plus = StateVector::from_real(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let ens = LetterEnsemble::equiprobable(vec![
            trine_state(0).unwrap(),
            trine_state(1).unwrap(),
            plus,
        ])
        .unwrap();
        assert!(minimum_error_probability(&ens).is_err());
    }
}
