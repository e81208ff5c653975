//! Swap-test similarity circuit.
//!
//! An ancilla is put into superposition, conditionally swaps the two input
//! blocks, and interferes with itself: its P(1) is ½ − ½|⟨a|b⟩|².

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::{index_register_width, GateOp, RegisterLayout, StateVector};

/// Amplitude-encode a unit vector over 1-based basis indexes of a single
/// register. Components may be negative; the squared norm must be 1.
pub fn encode_unit_vector(components: &[f64], qubit_cap: usize) -> Result<StateVector> {
    if components.is_empty() {
        return Err(Error::NoTrainingData);
    }
    let mut layout = RegisterLayout::new(qubit_cap);
    let index = layout.add("index_i", index_register_width(components.len()))?;
    let reg = layout.reg(index).clone();
    let mut amps = vec![Complex64::ZERO; layout.dim()];
    for (i, &v) in components.iter().enumerate() {
        amps[reg.place(i as u64 + 1) as usize] = Complex64::new(v, 0.0);
    }
    StateVector::from_amplitudes(layout, amps)
}

/// Run the swap-test circuit on two equal-layout states and return the
/// ancilla's exact P(1).
pub fn swap_test_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    let state = swap_test_state(a, b)?;
    let ancilla = state.layout().total_qubits() - 1;
    state.marginal_probability(ancilla, true)
}

/// The joint post-circuit state: block A, block B, then the ancilla qubit.
pub fn swap_test_state(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    if a.layout() != b.layout() {
        return Err(Error::LayoutMismatch);
    }
    let width = a.layout().total_qubits();
    let mut layout = RegisterLayout::new(a.layout().cap().max(2 * width + 1));
    layout.add("block_a", width)?;
    layout.add("block_b", width)?;
    layout.add("swap_ancilla", 1)?;

    let mut amps = vec![Complex64::ZERO; layout.dim()];
    for (x, &ax) in a.amplitudes().iter().enumerate() {
        if ax == Complex64::ZERO {
            continue;
        }
        for (y, &by) in b.amplitudes().iter().enumerate() {
            amps[x | (y << width)] = ax * by;
        }
    }
    let mut state = StateVector::from_amplitudes(layout, amps)?;

    let ancilla = 2 * width;
    state.apply(&GateOp::H { target: ancilla })?;
    for q in 0..width {
        state.apply(&GateOp::CSwap {
            control: ancilla,
            a: q,
            b: width + q,
        })?;
    }
    state.apply(&GateOp::H { target: ancilla })?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::DEFAULT_QUBIT_CAP;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(components: Vec<f64>) -> Vec<f64> {
        let norm: f64 = components.iter().map(|v| v * v).sum::<f64>().sqrt();
        components.into_iter().map(|v| v / norm).collect()
    }

    #[test]
    fn identical_states_give_zero() {
        let v = encode_unit_vector(&unit(vec![0.3, 0.5, 0.2, 0.7]), DEFAULT_QUBIT_CAP).unwrap();
        let p = swap_test_distance(&v, &v).unwrap();
        assert!(p.abs() < 1e-12);
    }

    #[test]
    fn orthogonal_states_give_half() {
        let a = encode_unit_vector(&[1.0, 0.0], DEFAULT_QUBIT_CAP).unwrap();
        let b = encode_unit_vector(&[0.0, 1.0], DEFAULT_QUBIT_CAP).unwrap();
        let p = swap_test_distance(&a, &b).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn overlap_point_six_gives_point_three_two() {
        // Two unit vectors with inner product 0.6.
        let a = encode_unit_vector(&[1.0, 0.0], DEFAULT_QUBIT_CAP).unwrap();
        let b = encode_unit_vector(&[0.6, 0.8], DEFAULT_QUBIT_CAP).unwrap();
        let p = swap_test_distance(&a, &b).unwrap();
        assert!((p - 0.32).abs() < 1e-12);
    }

    #[test]
    fn layout_mismatch_rejected() {
        let a = encode_unit_vector(&[1.0, 0.0], DEFAULT_QUBIT_CAP).unwrap();
        let b = encode_unit_vector(&unit(vec![1.0, 1.0, 1.0, 1.0, 1.0]), DEFAULT_QUBIT_CAP).unwrap();
        assert!(matches!(
            swap_test_distance(&a, &b),
            Err(Error::LayoutMismatch)
        ));
    }

    #[test]
    fn circuit_matches_closed_form_for_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let n = rng.gen_range(2..12);
            let a: Vec<f64> = unit((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let b: Vec<f64> = unit((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let sa = encode_unit_vector(&a, DEFAULT_QUBIT_CAP).unwrap();
            let sb = encode_unit_vector(&b, DEFAULT_QUBIT_CAP).unwrap();
            let p = swap_test_distance(&sa, &sb).unwrap();
            let ip: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            assert!((p - (0.5 - 0.5 * ip * ip)).abs() < 1e-9);
        }
    }
}
