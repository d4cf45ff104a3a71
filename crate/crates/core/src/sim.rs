//! Dense state-vector simulation of small qubit registers.
//!
//! The register convention everywhere in this crate: qubit 0 is the most
//! significant bit of the basis index, so basis state |z⟩ of a k-qubit
//! register has index equal to z read as a big-endian integer, and the
//! joint state |z,z⟩ of two k-qubit halves sits at index `(z << k) | z`.
//!
//! The gate set is exactly what the implemented protocols need: the
//! single-qubit Walsh–Hadamard, diagonal ±1 phase oracles, a bit-toggle
//! oracle (target ⊕= f(register)), and a real-plane rotation used to model
//! measurement at an angle. Everything is exact up to f64 arithmetic;
//! sampling is by an inverse-CDF walk so a fixed stream gives a fixed
//! outcome.

use num_complex::Complex64;
use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Hard cap on register width; 2^20 amplitudes is ample for every protocol
/// here and keeps accidental blowups loud.
pub const MAX_QUBITS: usize = 20;

/// Norm and probability sums must hold to this tolerance.
pub const NORM_TOL: f64 = 1e-10;

/// A vector of ±1 signs indexed by register value, as produced by reading
/// an input string into phases: entry `z` carries (−1)^(bit z of the input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    /// Validates that every entry is exactly +1 or −1.
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Argument("sign entries must be +1 or -1".into()));
        }
        Ok(SignVector(signs))
    }

    /// Signs (−1)^{x_z} for each position z of the input string: bit 1 maps
    /// to −1, bit 0 to +1.
    pub fn from_bit_string(x: &BitString) -> Self {
        SignVector(
            x.bits()
                .iter()
                .map(|&b| if b == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn all_plus(len: usize) -> Self {
        SignVector(vec![1; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sign(&self, z: usize) -> i8 {
        self.0[z]
    }
}

/// Born-rule probabilities over the computational basis.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution(Vec<f64>);

impl OutcomeDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.0[index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total mass; 1 within [`NORM_TOL`] for any normalized state.
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Mass of the basis states selected by `pred` (on the basis index).
    pub fn mass_where<F: Fn(usize) -> bool>(&self, pred: F) -> f64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(j, _)| pred(*j))
            .map(|(_, p)| p)
            .sum()
    }
}

/// Dense complex amplitude vector over `num_qubits` qubits.
#[derive(Debug, Clone)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state |index⟩ on `num_qubits` qubits.
    pub fn computational_basis(num_qubits: usize, index: usize) -> Result<Self> {
        Self::check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Argument(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// |0…0⟩ on `num_qubits` qubits.
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::computational_basis(num_qubits, 0)
    }

    /// The 2k-qubit state Σ_z 2^{-k/2} |z,z⟩: k shared pairs, written with
    /// the first party holding qubits 0..k and the second k..2k.
    pub fn new_entangled_pairs(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Argument("need at least one pair".into()));
        }
        Self::check_width(2 * k)?;
        let dim = 1usize << (2 * k);
        let amp = Complex64::new(0.5f64.powi(k as i32).sqrt(), 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for z in 0..(1usize << k) {
            amps[(z << k) | z] = amp;
        }
        Ok(StateVector {
            num_qubits: 2 * k,
            amps,
        })
    }

    /// Builds from raw amplitudes; length must be a power of two and the
    /// norm must already be 1 within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Error::Argument(
                "amplitude count must be a power of two and at least 2".into(),
            ));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        Self::check_width(num_qubits)?;
        let state = StateVector { num_qubits, amps };
        state.validate()?;
        Ok(state)
    }

    fn check_width(num_qubits: usize) -> Result<()> {
        if num_qubits == 0 {
            return Err(Error::Argument("register needs at least one qubit".into()));
        }
        if num_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap"
            )));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Checks finiteness of every amplitude and unit norm.
    pub fn validate(&self) -> Result<()> {
        if self
            .amps
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::Internal("non-finite amplitude".into()));
        }
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Internal(format!("norm² = {norm} is not 1")));
        }
        Ok(())
    }

    /// Bit position (from the least significant end of the basis index)
    /// addressed by qubit `q` under the qubit-0-is-MSB convention.
    fn stride(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::Argument(format!(
                    "qubit index {q} out of range for {} qubits",
                    self.num_qubits
                )));
            }
            if qubits[..i].contains(&q) {
                return Err(Error::Argument(format!("duplicate qubit index {q}")));
            }
        }
        Ok(())
    }

    /// Walsh–Hadamard on each listed qubit: |0⟩ ↦ (|0⟩+|1⟩)/√2,
    /// |1⟩ ↦ (|0⟩−|1⟩)/√2.
    pub fn apply_hadamard(&mut self, qubits: &[usize]) -> Result<()> {
        self.check_qubits(qubits)?;
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for &q in qubits {
            let stride = self.stride(q);
            for base in 0..self.amps.len() {
                if base & stride == 0 {
                    let hi = base | stride;
                    let a0 = self.amps[base];
                    let a1 = self.amps[hi];
                    self.amps[base] = (a0 + a1) * inv_sqrt2;
                    self.amps[hi] = (a0 - a1) * inv_sqrt2;
                }
            }
        }
        Ok(())
    }

    /// Reads the value of the listed register qubits out of a basis index;
    /// the first listed qubit is the most significant bit of the value.
    fn register_value(&self, index: usize, register: &[usize]) -> usize {
        register
            .iter()
            .fold(0, |acc, &q| (acc << 1) | ((index / self.stride(q)) & 1))
    }

    /// Multiplies the amplitude of every basis state whose register reads z
    /// by `signs[z]`. Magnitudes are untouched.
    pub fn apply_phase_oracle(&mut self, register: &[usize], signs: &SignVector) -> Result<()> {
        self.check_qubits(register)?;
        if signs.len() != 1usize << register.len() {
            return Err(Error::Argument(format!(
                "sign vector length {} does not match register of {} qubits",
                signs.len(),
                register.len()
            )));
        }
        for index in 0..self.amps.len() {
            if signs.sign(self.register_value(index, register)) < 0 {
                self.amps[index] = -self.amps[index];
            }
        }
        Ok(())
    }

    /// Toggle oracle |z⟩|t⟩ ↦ |z⟩|t ⊕ f(z)⟩ where `f` is given as the bit
    /// string `toggles` indexed by register value.
    pub fn apply_xor_oracle(
        &mut self,
        register: &[usize],
        target: usize,
        toggles: &BitString,
    ) -> Result<()> {
        let mut all = register.to_vec();
        all.push(target);
        self.check_qubits(&all)?;
        if toggles.len() != 1usize << register.len() {
            return Err(Error::Argument(format!(
                "toggle table length {} does not match register of {} qubits",
                toggles.len(),
                register.len()
            )));
        }
        let t_stride = self.stride(target);
        for index in 0..self.amps.len() {
            if index & t_stride == 0 && toggles.bit(self.register_value(index, register)) == 1 {
                self.amps.swap(index, index | t_stride);
            }
        }
        Ok(())
    }

    /// Real-plane rotation of one qubit by −`angle`:
    /// the matrix (cos θ, −sin θ; sin θ, cos θ) with θ = −angle.
    /// Measuring at angle φ means rotating by −φ and then measuring in the
    /// computational basis.
    pub fn apply_rotation(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubits(&[qubit])?;
        let (sin, cos) = angle.sin_cos();
        let stride = self.stride(qubit);
        for base in 0..self.amps.len() {
            if base & stride == 0 {
                let hi = base | stride;
                let a0 = self.amps[base];
                let a1 = self.amps[hi];
                self.amps[base] = a0 * cos + a1 * sin;
                self.amps[hi] = -a0 * sin + a1 * cos;
            }
        }
        Ok(())
    }

    /// Born-rule probabilities |amplitude|² per basis state.
    pub fn outcome_distribution(&self) -> OutcomeDistribution {
        OutcomeDistribution(self.amps.iter().map(|a| a.norm_sqr()).collect())
    }

    /// Samples one basis state from the outcome distribution by an
    /// inverse-CDF walk; a fixed rng stream gives a fixed outcome.
    pub fn measure_all<R: Rng>(&self, rng: &mut R) -> BitString {
        let r: f64 = rng.gen();
        let mut acc = 0.0;
        let mut hit = self.amps.len() - 1;
        for (index, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if r < acc {
                hit = index;
                break;
            }
        }
        BitString::from_index(hit, self.num_qubits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::derive_rng;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn amps_close(state: &StateVector, expected: &[(f64, f64)], tol: f64) {
        assert_eq!(state.amplitudes().len(), expected.len());
        for (a, (re, im)) in state.amplitudes().iter().zip(expected) {
            assert_close(a.re, *re, tol);
            assert_close(a.im, *im, tol);
        }
    }

    #[test]
    fn one_entangled_pair_is_phi_plus() {
        let state = StateVector::new_entangled_pairs(1).unwrap();
        amps_close(
            &state,
            &[
                (FRAC_1_SQRT_2, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (FRAC_1_SQRT_2, 0.0),
            ],
            1e-15,
        );
    }

    #[test]
    fn two_entangled_pairs_sit_on_matched_halves() {
        let state = StateVector::new_entangled_pairs(2).unwrap();
        for (index, a) in state.amplitudes().iter().enumerate() {
            let expected = if [0b0000, 0b0101, 0b1010, 0b1111].contains(&index) {
                0.5
            } else {
                0.0
            };
            assert_close(a.re, expected, 1e-15);
            assert_close(a.im, 0.0, 0.0);
        }
    }

    #[test]
    fn entangled_pairs_are_normalized_for_all_small_k() {
        for k in 1..=6 {
            let state = StateVector::new_entangled_pairs(k).unwrap();
            assert_close(state.norm_sqr(), 1.0, NORM_TOL);
        }
    }

    #[test]
    fn entangled_pairs_capacity_error() {
        assert!(matches!(
            StateVector::new_entangled_pairs(MAX_QUBITS),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn hadamard_on_basis_states() {
        let mut zero = StateVector::zero_state(1).unwrap();
        zero.apply_hadamard(&[0]).unwrap();
        amps_close(&zero, &[(FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0)], 1e-15);

        let mut one = StateVector::computational_basis(1, 1).unwrap();
        one.apply_hadamard(&[0]).unwrap();
        amps_close(&one, &[(FRAC_1_SQRT_2, 0.0), (-FRAC_1_SQRT_2, 0.0)], 1e-15);
    }

    #[test]
    fn hadamard_rejects_bad_indices() {
        let mut state = StateVector::zero_state(2).unwrap();
        assert!(matches!(
            state.apply_hadamard(&[2]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            state.apply_hadamard(&[0, 0]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn phase_oracle_identity_and_flip() {
        let mut state = StateVector::new_entangled_pairs(1).unwrap();
        state
            .apply_phase_oracle(&[0], &SignVector::all_plus(2))
            .unwrap();
        amps_close(
            &state,
            &[
                (FRAC_1_SQRT_2, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (FRAC_1_SQRT_2, 0.0),
            ],
            0.0,
        );

        // sign flip on the |1·⟩ component only
        let signs = SignVector::new(vec![1, -1]).unwrap();
        state.apply_phase_oracle(&[0], &signs).unwrap();
        amps_close(
            &state,
            &[
                (FRAC_1_SQRT_2, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (-FRAC_1_SQRT_2, 0.0),
            ],
            0.0,
        );

        // signs square to +1
        state.apply_phase_oracle(&[0], &signs).unwrap();
        amps_close(
            &state,
            &[
                (FRAC_1_SQRT_2, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (FRAC_1_SQRT_2, 0.0),
            ],
            0.0,
        );
    }

    #[test]
    fn phase_oracle_length_mismatch() {
        let mut state = StateVector::zero_state(2).unwrap();
        assert!(matches!(
            state.apply_phase_oracle(&[0, 1], &SignVector::all_plus(2)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn xor_oracle_toggles_target_by_register_value() {
        // |10⟩: register qubit 0 reads 1, toggle table flips target on 1
        let mut state = StateVector::computational_basis(2, 0b10).unwrap();
        let toggles: BitString = "01".parse().unwrap();
        state.apply_xor_oracle(&[0], 1, &toggles).unwrap();
        amps_close(
            &state,
            &[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
            0.0,
        );
        // applying twice undoes it
        state.apply_xor_oracle(&[0], 1, &toggles).unwrap();
        amps_close(
            &state,
            &[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
            0.0,
        );
    }

    #[test]
    fn rotation_identity_and_quarter_turn() {
        let mut state = StateVector::zero_state(1).unwrap();
        state.apply_rotation(0, 0.0).unwrap();
        amps_close(&state, &[(1.0, 0.0), (0.0, 0.0)], 0.0);

        // rotation by −π/2 of the (1,0) plane vector: |0⟩ ↦ −|1⟩
        state.apply_rotation(0, PI / 2.0).unwrap();
        amps_close(&state, &[(0.0, 0.0), (-1.0, 0.0)], 1e-15);
    }

    #[test]
    fn outcome_distribution_examples() {
        let phi = StateVector::new_entangled_pairs(1).unwrap();
        let dist = phi.outcome_distribution();
        assert_close(dist.probability(0), 0.5, 1e-15);
        assert_close(dist.probability(1), 0.0, 0.0);
        assert_close(dist.probability(2), 0.0, 0.0);
        assert_close(dist.probability(3), 0.5, 1e-15);

        let basis = StateVector::computational_basis(3, 5).unwrap();
        let dist = basis.outcome_distribution();
        for (j, p) in dist.probabilities().iter().enumerate() {
            assert_eq!(*p, if j == 5 { 1.0 } else { 0.0 });
        }

        let mut uniform = StateVector::zero_state(2).unwrap();
        uniform.apply_hadamard(&[0, 1]).unwrap();
        for p in uniform.outcome_distribution().probabilities() {
            assert_close(*p, 0.25, 1e-15);
        }
    }

    #[test]
    fn measuring_a_basis_state_is_certain() {
        let state = StateVector::computational_basis(3, 0b011).unwrap();
        let mut rng = derive_rng(1, "measure");
        for _ in 0..32 {
            assert_eq!(state.measure_all(&mut rng).to_string(), "011");
        }
    }

    #[test]
    fn measurement_is_deterministic_per_stream() {
        let mut state = StateVector::zero_state(3).unwrap();
        state.apply_hadamard(&[0, 1, 2]).unwrap();
        let a = state.measure_all(&mut derive_rng(9, "m"));
        let b = state.measure_all(&mut derive_rng(9, "m"));
        assert_eq!(a, b);
    }

    #[test]
    fn entangled_pair_measurement_frequencies() {
        let state = StateVector::new_entangled_pairs(1).unwrap();
        let mut rng = derive_rng(2024, "phi-plus-sampling");
        let trials = 100_000;
        let mut zeros = 0u64;
        for _ in 0..trials {
            let outcome = state.measure_all(&mut rng);
            match outcome.to_string().as_str() {
                "00" => zeros += 1,
                "11" => {}
                other => panic!("impossible outcome {other}"),
            }
        }
        let freq = zeros as f64 / trials as f64;
        assert_close(freq, 0.5, 0.01);
    }

    /// Empirical frequencies match the exact distribution within five
    /// standard errors per basis state.
    #[test]
    fn measurement_consistency_on_a_skewed_state() {
        let mut state = StateVector::zero_state(2).unwrap();
        state.apply_hadamard(&[0]).unwrap();
        state.apply_rotation(1, 0.7).unwrap();
        let dist = state.outcome_distribution();
        let trials = 100_000u64;
        let mut counts = [0u64; 4];
        let mut rng = derive_rng(5, "consistency");
        for _ in 0..trials {
            counts[state.measure_all(&mut rng).to_index()] += 1;
        }
        for (j, &c) in counts.iter().enumerate() {
            let p = dist.probability(j);
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            let observed = c as f64 / trials as f64;
            assert!(
                (observed - p).abs() <= 5.0 * se.max(1e-12),
                "basis {j}: {observed} vs {p}"
            );
        }
    }

    prop_compose! {
        fn arb_state(max_qubits: usize)
            (n in 1..=max_qubits)
            (n in Just(n), parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << n))
            -> StateVector
        {
            let norm: f64 = parts.iter().map(|(re, im)| re * re + im * im).sum::<f64>().sqrt();
            let amps: Vec<Complex64> = if norm < 1e-6 {
                // degenerate all-zero draw: fall back to |0…0⟩
                let mut v = vec![Complex64::new(0.0, 0.0); parts.len()];
                v[0] = Complex64::new(1.0, 0.0);
                v
            } else {
                parts.iter().map(|(re, im)| Complex64::new(re / norm, im / norm)).collect()
            };
            StateVector { num_qubits: n, amps }
        }
    }

    proptest! {
        #[test]
        fn hadamard_is_an_involution(state in arb_state(4), q in 0usize..4) {
            prop_assume!(q < state.num_qubits());
            let mut twice = state.clone();
            twice.apply_hadamard(&[q]).unwrap();
            twice.apply_hadamard(&[q]).unwrap();
            for (a, b) in twice.amplitudes().iter().zip(state.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn rotations_compose_additively(state in arb_state(3), q in 0usize..3,
                                        alpha in -3.2f64..3.2, beta in -3.2f64..3.2) {
            prop_assume!(q < state.num_qubits());
            let mut stepwise = state.clone();
            stepwise.apply_rotation(q, alpha).unwrap();
            stepwise.apply_rotation(q, beta).unwrap();
            let mut direct = state.clone();
            direct.apply_rotation(q, alpha + beta).unwrap();
            for (a, b) in stepwise.amplitudes().iter().zip(direct.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn unitaries_preserve_norm(state in arb_state(4), q in 0usize..4, angle in -3.2f64..3.2) {
            prop_assume!(q < state.num_qubits());
            let mut s = state;
            s.apply_hadamard(&[q]).unwrap();
            s.apply_rotation(q, angle).unwrap();
            let signs = SignVector::new(vec![1, -1]).unwrap();
            s.apply_phase_oracle(&[q], &signs).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < NORM_TOL);
            prop_assert!(s.validate().is_ok());
        }

        #[test]
        fn phase_oracle_never_changes_magnitudes(state in arb_state(4), flips in 0usize..16) {
            let n = state.num_qubits();
            let register: Vec<usize> = (0..n.min(2)).collect();
            let len = 1usize << register.len();
            let signs = SignVector::new(
                (0..len).map(|z| if (flips >> z) & 1 == 1 { -1 } else { 1 }).collect(),
            ).unwrap();
            let mut s = state.clone();
            s.apply_phase_oracle(&register, &signs).unwrap();
            for (a, b) in s.amplitudes().iter().zip(state.amplitudes()) {
                prop_assert!((a.norm() - b.norm()).abs() < 1e-15);
            }
        }

        #[test]
        fn distribution_sums_to_one(state in arb_state(4)) {
            prop_assert!((state.outcome_distribution().total() - 1.0).abs() < NORM_TOL);
        }
    }
}
