//! Dense complex statevector with register-aware operations.

use num_complex::Complex64;
use rand::Rng;

use super::gate::{Control, GateOp, Marked};
use super::layout::{RegId, RegisterLayout};
use crate::error::{Error, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Complex amplitudes over every basis state of a [`RegisterLayout`].
///
/// A state is owned by one execution context; cloning yields an independent
/// copy (used for fresh search attempts).
#[derive(Debug, Clone)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ over the layout.
    pub fn zero(layout: RegisterLayout) -> Self {
        let mut amps = vec![Complex64::ZERO; layout.dim()];
        amps[0] = Complex64::ONE;
        StateVector { layout, amps }
    }

    /// Wrap explicit amplitudes; they must be normalized to 1 ± 1e-9.
    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        assert_eq!(amps.len(), layout.dim());
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-9 {
            return Err(Error::ZeroProbabilityBranch);
        }
        Ok(StateVector { layout, amps })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, z: u64) -> Complex64 {
        self.amps[z as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Apply one gate to the whole state.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        self.apply_masked(gate, 0, 0)
    }

    /// Apply one gate restricted to basis states satisfying extra controls.
    pub fn apply_controlled(&mut self, gate: &GateOp, extra: &[Control]) -> Result<()> {
        let (mask, val) = fold_controls(extra, self.layout.total_qubits())?;
        self.apply_masked(gate, mask, val)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.layout.total_qubits() {
            return Err(Error::QubitOutOfRange {
                index: q,
                total: self.layout.total_qubits(),
            });
        }
        Ok(())
    }

    fn apply_masked(&mut self, gate: &GateOp, cmask: u64, cval: u64) -> Result<()> {
        match gate {
            GateOp::H { target } => {
                self.check_qubit(*target)?;
                self.mix_pairs(*target, cmask, cval, |a0, a1| {
                    (
                        (a0 + a1) * FRAC_1_SQRT_2,
                        (a0 - a1) * FRAC_1_SQRT_2,
                    )
                });
            }
            GateOp::X { target } => {
                self.check_qubit(*target)?;
                self.swap_pairs(*target, cmask, cval);
            }
            GateOp::Ry { target, theta } => {
                self.check_qubit(*target)?;
                if !theta.is_finite() {
                    return Err(Error::NonFiniteAngle);
                }
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                self.mix_pairs(*target, cmask, cval, |a0, a1| {
                    (a0 * c - a1 * s, a0 * s + a1 * c)
                });
            }
            GateOp::Cx { controls, target } => {
                self.check_qubit(*target)?;
                let (m, v) = fold_controls(controls, self.layout.total_qubits())?;
                debug_assert_eq!(m & (1 << target), 0, "control overlaps target");
                self.swap_pairs(*target, cmask | m, cval | v);
            }
            GateOp::CRy {
                controls,
                target,
                theta,
            } => {
                self.check_qubit(*target)?;
                if !theta.is_finite() {
                    return Err(Error::NonFiniteAngle);
                }
                let (m, v) = fold_controls(controls, self.layout.total_qubits())?;
                debug_assert_eq!(m & (1 << target), 0, "control overlaps target");
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                self.mix_pairs(*target, cmask | m, cval | v, |a0, a1| {
                    (a0 * c - a1 * s, a0 * s + a1 * c)
                });
            }
            GateOp::CSwap { control, a, b } => {
                self.check_qubit(*control)?;
                self.check_qubit(*a)?;
                self.check_qubit(*b)?;
                debug_assert!(a != b && a != control && b != control);
                let amask = 1u64 << a;
                let bmask = 1u64 << b;
                // Enumerate states with control=1, a=1, b=0 and swap with the
                // a=0, b=1 partner.
                let m = cmask | (1 << control) | amask | bmask;
                let v = cval | (1 << control) | amask;
                let total = self.layout.total_qubits();
                let amps = &mut self.amps;
                for_each_matching(total, m, v, |z| {
                    let partner = (z ^ amask ^ bmask) as usize;
                    amps.swap(z as usize, partner);
                });
            }
            GateOp::Comparator {
                reg,
                bound,
                flag_low,
                flag_high,
            } => {
                self.check_qubit(*flag_low)?;
                self.check_qubit(*flag_high)?;
                let register = self.layout.reg(*reg).clone();
                if *bound >= (1u64 << register.width) {
                    return Err(Error::ConstantTooWide {
                        constant: *bound,
                        width: register.width,
                    });
                }
                let low_mask = 1u64 << flag_low;
                let high_mask = 1u64 << flag_high;
                debug_assert_eq!(register.mask() & (low_mask | high_mask), 0);
                for z in 0..self.amps.len() as u64 {
                    if z & cmask != cval {
                        continue;
                    }
                    let j = register.value_in(z);
                    let mut flips = 0u64;
                    if j == 0 {
                        flips |= low_mask;
                    }
                    if j > *bound {
                        flips |= high_mask;
                    }
                    let partner = z ^ flips;
                    if partner > z {
                        self.amps.swap(z as usize, partner as usize);
                    }
                }
            }
            GateOp::PhaseFlip { marked } => {
                for z in 0..self.amps.len() as u64 {
                    if z & cmask == cval && marked.matches(&self.layout, z) {
                        self.amps[z as usize] = -self.amps[z as usize];
                    }
                }
            }
            GateOp::Reflect { axis } => {
                assert_eq!(
                    cmask, 0,
                    "reflection about a state cannot take extra controls"
                );
                assert_eq!(axis.len(), self.amps.len());
                let dot: Complex64 = axis
                    .iter()
                    .zip(&self.amps)
                    .map(|(a, p)| a.conj() * p)
                    .sum();
                for (amp, a) in self.amps.iter_mut().zip(axis) {
                    *amp = 2.0 * dot * a - *amp;
                }
            }
            GateOp::Inverse(inner) => {
                let concrete = match &**inner {
                    GateOp::Ry { target, theta } => GateOp::Ry {
                        target: *target,
                        theta: -theta,
                    },
                    GateOp::CRy {
                        controls,
                        target,
                        theta,
                    } => GateOp::CRy {
                        controls: controls.clone(),
                        target: *target,
                        theta: -theta,
                    },
                    // Every other kind is an involution.
                    other => other.clone(),
                };
                self.apply_masked(&concrete, cmask, cval)?;
            }
        }
        Ok(())
    }

    /// Visit amplitude pairs (target=0, target=1) under a control mask.
    fn mix_pairs<F: Fn(Complex64, Complex64) -> (Complex64, Complex64)>(
        &mut self,
        target: usize,
        cmask: u64,
        cval: u64,
        f: F,
    ) {
        let tmask = 1u64 << target;
        debug_assert_eq!(cmask & tmask, 0, "control overlaps target");
        let total = self.layout.total_qubits();
        for_each_matching(total, cmask | tmask, cval, |z| {
            let z1 = (z | tmask) as usize;
            let (n0, n1) = f(self.amps[z as usize], self.amps[z1]);
            self.amps[z as usize] = n0;
            self.amps[z1] = n1;
        });
    }

    fn swap_pairs(&mut self, target: usize, cmask: u64, cval: u64) {
        let tmask = 1u64 << target;
        debug_assert_eq!(cmask & tmask, 0, "control overlaps target");
        let total = self.layout.total_qubits();
        for_each_matching(total, cmask | tmask, cval, |z| {
            self.amps.swap(z as usize, (z | tmask) as usize);
        });
    }

    /// Exact Born probability of one qubit outcome, without collapse.
    pub fn marginal_probability(&self, qubit: usize, outcome: bool) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1u64 << qubit;
        let want = if outcome { mask } else { 0 };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(z, _)| (*z as u64) & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Probability mass on basis states matching a predicate.
    pub fn prob_of(&self, marked: &Marked) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(z, _)| marked.matches(&self.layout, *z as u64))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Born distribution over the values of one register.
    pub fn register_distribution(&self, reg: RegId) -> Vec<f64> {
        let register = self.layout.reg(reg);
        let mut probs = vec![0.0; 1usize << register.width];
        for (z, a) in self.amps.iter().enumerate() {
            probs[register.value_in(z as u64) as usize] += a.norm_sqr();
        }
        probs
    }

    /// Sample one register outcome from its marginal, collapse and
    /// renormalize.
    pub fn measure_register<R: Rng>(&mut self, reg: RegId, rng: &mut R) -> u64 {
        let probs = self.register_distribution(reg);
        let total: f64 = probs.iter().sum();
        let mut draw = rng.gen::<f64>() * total;
        let mut outcome = probs.len() - 1;
        for (value, &p) in probs.iter().enumerate() {
            if draw < p {
                outcome = value;
                break;
            }
            draw -= p;
        }
        let register = self.layout.reg(reg).clone();
        let p = probs[outcome].max(f64::MIN_POSITIVE);
        let scale = 1.0 / p.sqrt();
        for (z, amp) in self.amps.iter_mut().enumerate() {
            if register.value_in(z as u64) == outcome as u64 {
                *amp *= scale;
            } else {
                *amp = Complex64::ZERO;
            }
        }
        outcome as u64
    }

    /// Condition on fixed register values and keep the listed registers as a
    /// new (renormalized) state. Every register must appear in `fixed` or
    /// `keep`.
    pub fn project_select(&self, fixed: &[(RegId, u64)], keep: &[RegId]) -> Result<StateVector> {
        let n_regs = self.layout.registers().len();
        let mut seen = vec![false; n_regs];
        for (id, _) in fixed {
            seen[id.0] = true;
        }
        for id in keep {
            assert!(!seen[id.0], "register both fixed and kept");
            seen[id.0] = true;
        }
        assert!(
            seen.iter().all(|&s| s),
            "every register must be fixed or kept"
        );

        let mut new_layout = RegisterLayout::new(self.layout.cap());
        let mut kept: Vec<(super::layout::Register, super::layout::Register)> = Vec::new();
        for id in keep {
            let old = self.layout.reg(*id).clone();
            let new_id = new_layout.add(&old.name, old.width)?;
            kept.push((old, new_layout.reg(new_id).clone()));
        }
        let fixed_regs: Vec<(super::layout::Register, u64)> = fixed
            .iter()
            .map(|(id, v)| (self.layout.reg(*id).clone(), *v))
            .collect();

        let mut new_amps = vec![Complex64::ZERO; new_layout.dim()];
        let mut mass = 0.0;
        for (z, amp) in self.amps.iter().enumerate() {
            let z = z as u64;
            if fixed_regs.iter().any(|(r, v)| r.value_in(z) != *v) {
                continue;
            }
            let mut idx = 0u64;
            for (old, new) in &kept {
                idx |= new.place(old.value_in(z));
            }
            new_amps[idx as usize] = *amp;
            mass += amp.norm_sqr();
        }
        if mass < 1e-15 {
            return Err(Error::ZeroProbabilityBranch);
        }
        let scale = 1.0 / mass.sqrt();
        for amp in &mut new_amps {
            *amp *= scale;
        }
        Ok(StateVector {
            layout: new_layout,
            amps: new_amps,
        })
    }

    /// Inverse discrete Fourier transform on one register:
    /// out[y] = T^(-1/2) Σ_x e^(−2πi·xy/T) in[x], applied within every
    /// configuration of the remaining qubits.
    pub fn inverse_fourier_on(&mut self, reg: RegId) {
        let register = self.layout.reg(reg).clone();
        let t = 1usize << register.width;
        let offset = register.offset;
        let low_mask = (1u64 << offset) - 1;
        let rest = self.amps.len() / t;
        let scale = 1.0 / (t as f64).sqrt();
        let twiddle: Vec<Complex64> = (0..t)
            .map(|k| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / t as f64))
            .collect();
        let mut scratch = vec![Complex64::ZERO; t];
        for r in 0..rest as u64 {
            let base = ((r & !low_mask) << register.width) | (r & low_mask);
            for (y, s) in scratch.iter_mut().enumerate() {
                let mut acc = Complex64::ZERO;
                for x in 0..t {
                    let idx = (base | ((x as u64) << offset)) as usize;
                    acc += self.amps[idx] * twiddle[(x * y) % t];
                }
                *s = acc * scale;
            }
            for (y, s) in scratch.iter().enumerate() {
                self.amps[(base | ((y as u64) << offset)) as usize] = *s;
            }
        }
    }
}

/// Call `f` for every basis state z of a `total`-qubit space with
/// `z & mask == val`, by enumerating only the free bits.
fn for_each_matching<F: FnMut(u64)>(total: usize, mask: u64, val: u64, mut f: F) {
    debug_assert_eq!(val & !mask, 0);
    let free: Vec<usize> = (0..total).filter(|q| mask & (1u64 << q) == 0).collect();
    let count = 1u64 << free.len();
    for idx in 0..count {
        let mut z = val;
        for (bit, &pos) in free.iter().enumerate() {
            if idx & (1u64 << bit) != 0 {
                z |= 1u64 << pos;
            }
        }
        f(z);
    }
}

fn fold_controls(controls: &[Control], total: usize) -> Result<(u64, u64)> {
    let mut mask = 0u64;
    let mut val = 0u64;
    for c in controls {
        if c.qubit >= total {
            return Err(Error::QubitOutOfRange {
                index: c.qubit,
                total,
            });
        }
        mask |= 1 << c.qubit;
        if c.value {
            val |= 1 << c.qubit;
        }
    }
    Ok((mask, val))
}
