//! Amplitude estimation: phase estimation over the Grover operator of a
//! state preparation.
//!
//! For a preparation A with good-subspace amplitude a = sin θ, the operator
//! Q = −A·S₀·A†·S_χ rotates the relevant plane by 2θ, so its eigenphases are
//! ±θ/π. A t-qubit phase register estimates y ≈ 2ᵗ·θ/π and the returned
//! estimate is sin²(πy/2ᵗ).

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qsim::{Control, GateOp, Marked, RegisterLayout, StateVector};

/// Phase-register width, Grover-call count R and error bound δ, linked by
/// R ≥ π(π+1)/δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeConfig {
    pub phase_bits: u32,
    pub grover_calls: u64,
    pub error_bound: f64,
}

impl AeConfig {
    /// Fix the phase register width; R = 2ᵗ − 1 and δ = π(π+1)/R.
    pub fn with_phase_bits(t: u32) -> Result<AeConfig> {
        if t == 0 || t > 24 {
            return Err(Error::NoPhaseQubits);
        }
        let grover_calls = (1u64 << t) - 1;
        Ok(AeConfig {
            phase_bits: t,
            grover_calls,
            error_bound: PI * (PI + 1.0) / grover_calls as f64,
        })
    }

    /// Choose the smallest width whose R = 2ᵗ − 1 satisfies R ≥ π(π+1)/δ.
    pub fn with_error_bound(delta: f64) -> Result<AeConfig> {
        if !(delta > 0.0) {
            return Err(Error::NoPhaseQubits);
        }
        let r_min = (PI * (PI + 1.0) / delta).ceil() as u64;
        let mut t = 1;
        while ((1u64 << t) - 1) < r_min {
            t += 1;
        }
        Self::with_phase_bits(t)
    }
}

/// A state preparation A over its own registers, plus the predicate defining
/// the good subspace whose probability is estimated.
#[derive(Debug, Clone)]
pub struct StatePrep {
    pub layout: RegisterLayout,
    pub gates: Vec<GateOp>,
    pub good: Marked,
}

impl StatePrep {
    /// One-qubit preparation with good-state amplitude `a`.
    pub fn single_value(a: f64, qubit_cap: usize) -> Result<StatePrep> {
        if !(0.0..=1.0).contains(&a) || !a.is_finite() {
            return Err(Error::ComponentOutOfRange { index: 0, value: a });
        }
        let mut layout = RegisterLayout::new(qubit_cap);
        layout.add("ae_system", 1)?;
        Ok(StatePrep {
            layout,
            gates: vec![GateOp::Ry {
                target: 0,
                theta: 2.0 * a.asin(),
            }],
            good: Marked::Qubit(0),
        })
    }

    /// The exact good-subspace probability a² of the prepared state.
    pub fn amplitude_squared(&self) -> Result<f64> {
        let mut state = StateVector::zero(self.layout.clone());
        for gate in &self.gates {
            state.apply(gate)?;
        }
        Ok(state.prob_of(&self.good))
    }
}

/// Result of one single-shot estimation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeOutcome {
    /// sin²(π·phase/2ᵗ), the estimate of a².
    pub estimate: f64,
    /// Measured phase-register value y.
    pub phase: u64,
    /// Grover-operator applications consumed (2ᵗ − 1).
    pub grover_calls: u64,
}

/// Run phase estimation over the Grover operator of `prep` and measure the
/// phase register once.
pub fn amplitude_estimate<R: Rng>(
    prep: &StatePrep,
    cfg: &AeConfig,
    rng: &mut R,
) -> Result<AeOutcome> {
    let t = cfg.phase_bits as usize;
    let system_qubits = prep.layout.total_qubits();

    let mut layout = RegisterLayout::new(prep.layout.cap().max(system_qubits + t));
    for reg in prep.layout.registers() {
        layout.add(&reg.name, reg.width)?;
    }
    let phase = layout.add("ae_phase", t)?;
    let phase_offset = layout.reg(phase).offset;
    let system_mask = (1u64 << system_qubits) - 1;

    let mut state = StateVector::zero(layout);
    for gate in &prep.gates {
        state.apply(gate)?;
    }
    for q in 0..t {
        state.apply(&GateOp::H {
            target: phase_offset + q,
        })?;
    }

    // Controlled Q^(2^k) for phase qubit k: Q = −A·S₀·A†·S_χ.
    let flip_good = GateOp::PhaseFlip {
        marked: prep.good.clone(),
    };
    let flip_zero = GateOp::PhaseFlip {
        marked: Marked::MaskZero(system_mask),
    };
    let flip_all = GateOp::PhaseFlip {
        marked: Marked::All,
    };
    for k in 0..t {
        let ctrl = [Control::set(phase_offset + k)];
        for _ in 0..(1u64 << k) {
            state.apply_controlled(&flip_good, &ctrl)?;
            for gate in prep.gates.iter().rev() {
                state.apply_controlled(&gate.inverse(), &ctrl)?;
            }
            state.apply_controlled(&flip_zero, &ctrl)?;
            for gate in &prep.gates {
                state.apply_controlled(gate, &ctrl)?;
            }
            state.apply_controlled(&flip_all, &ctrl)?;
        }
    }

    state.inverse_fourier_on(phase);
    let y = state.measure_register(phase, rng);
    let estimate = (PI * y as f64 / (1u64 << t) as f64).sin().powi(2);
    Ok(AeOutcome {
        estimate,
        phase: y,
        grover_calls: cfg.grover_calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::DEFAULT_QUBIT_CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn config_invariant_links_r_and_delta() {
        for t in 1..=12 {
            let cfg = AeConfig::with_phase_bits(t).unwrap();
            assert_eq!(cfg.grover_calls, (1u64 << t) - 1);
            assert!(cfg.grover_calls as f64 >= PI * (PI + 1.0) / cfg.error_bound - 1e-9);
        }
        let cfg = AeConfig::with_error_bound(0.05).unwrap();
        assert!(cfg.grover_calls as f64 >= PI * (PI + 1.0) / 0.05);
        assert!(AeConfig::with_phase_bits(0).is_err());
        assert!(AeConfig::with_error_bound(0.0).is_err());
    }

    #[test]
    fn zero_amplitude_estimated_exactly() {
        let prep = StatePrep::single_value(0.0, DEFAULT_QUBIT_CAP).unwrap();
        let cfg = AeConfig::with_phase_bits(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let out = amplitude_estimate(&prep, &cfg, &mut rng).unwrap();
            assert_eq!(out.phase, 0);
            assert_eq!(out.estimate, 0.0);
        }
    }

    #[test]
    fn unit_amplitude_estimated_exactly() {
        let prep = StatePrep::single_value(1.0, DEFAULT_QUBIT_CAP).unwrap();
        let cfg = AeConfig::with_phase_bits(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let out = amplitude_estimate(&prep, &cfg, &mut rng).unwrap();
            assert_eq!(out.phase, 1 << 4);
            assert!((out.estimate - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_eigenphase_estimated_exactly() {
        // a = sin(π/8) has eigenphase 1/8, one grid point of a 3-bit register.
        let a = (PI / 8.0).sin();
        let prep = StatePrep::single_value(a, DEFAULT_QUBIT_CAP).unwrap();
        let cfg = AeConfig::with_phase_bits(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let out = amplitude_estimate(&prep, &cfg, &mut rng).unwrap();
            assert!(out.phase == 1 || out.phase == 7, "phase {}", out.phase);
            assert!((out.estimate - a * a).abs() < 1e-12);
        }
    }

    #[test]
    fn multi_qubit_preparation_estimates_good_mass() {
        // Two qubits: H on q0 then a rotation on q1 controlled by q0; the
        // good subspace is q1 = 1.
        let mut layout = RegisterLayout::new(DEFAULT_QUBIT_CAP);
        layout.add("sys", 2).unwrap();
        let prep = StatePrep {
            layout,
            gates: vec![
                GateOp::H { target: 0 },
                GateOp::CRy {
                    controls: vec![Control::set(0)],
                    target: 1,
                    theta: 1.1,
                },
            ],
            good: Marked::Qubit(1),
        };
        let truth = prep.amplitude_squared().unwrap();
        let cfg = AeConfig::with_phase_bits(9).unwrap();
        let bound = PI / 512.0 + PI * PI / (512.0 * 512.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let hits = (0..40)
            .filter(|_| {
                let out = amplitude_estimate(&prep, &cfg, &mut rng).unwrap();
                (out.estimate - truth).abs() <= bound
            })
            .count();
        assert!(hits >= 30, "only {hits}/40 within the estimation bound");
    }
}
