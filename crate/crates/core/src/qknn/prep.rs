//! Amplitude-encoding state preparation.
//!
//! A vector v with components in [0, 1] is stored by rotating a value ancilla
//! to √(1−vᵢ²)|0⟩ + vᵢ|1⟩ under each index i. The circuit writes a code for
//! vᵢ into a working register (controlled NOTs), rotates the ancilla
//! controlled on that code, then uncomputes the working register with the
//! inverse writes. Index registers are prepared with Hadamards over the full
//! binary range, then a comparator flags the out-of-range branches (index 0
//! and index above the vector length); the flag-clear branch carries the
//! uniform superposition over 1..=N.

use crate::error::{Error, Result};
use crate::qsim::{index_register_width, Control, GateOp, RegId, RegisterLayout, StateVector};

/// Code table mapping distinct nonzero component values to working-register
/// codes 1..=len; the zero component keeps code 0 so the empty register needs
/// no write.
#[derive(Debug, Clone)]
pub(crate) struct ValueTable {
    values: Vec<f64>,
}

impl ValueTable {
    pub fn build<'a, I: IntoIterator<Item = &'a f64>>(components: I) -> ValueTable {
        let mut values: Vec<f64> = components.into_iter().copied().filter(|&v| v != 0.0).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        ValueTable { values }
    }

    pub fn code_of(&self, v: f64) -> u64 {
        if v == 0.0 {
            return 0;
        }
        match self.values.binary_search_by(|x| x.partial_cmp(&v).unwrap()) {
            Ok(pos) => pos as u64 + 1,
            Err(_) => unreachable!("value not in table"),
        }
    }

    pub fn value_of(&self, code: u64) -> f64 {
        if code == 0 {
            0.0
        } else {
            self.values[code as usize - 1]
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn width(&self) -> usize {
        index_register_width(self.values.len())
    }
}

fn validate_components(components: &[f64]) -> Result<()> {
    if components.is_empty() {
        return Err(Error::NoTrainingData);
    }
    for (index, &value) in components.iter().enumerate() {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::ComponentOutOfRange { index, value });
        }
    }
    Ok(())
}

/// Controls asserting that a register holds the exact value `value`.
fn register_equals(layout: &RegisterLayout, reg: RegId, value: u64) -> Vec<Control> {
    let r = layout.reg(reg);
    (0..r.width)
        .map(|q| Control {
            qubit: r.offset + q,
            value: (value >> q) & 1 == 1,
        })
        .collect()
}

/// Encoded test vector: uniform index superposition with the rotated value
/// ancilla, working register written and uncomputed.
#[derive(Debug, Clone)]
pub struct AlphaState {
    pub state: StateVector,
    pub index: RegId,
    pub working: RegId,
    pub value: RegId,
    pub flags: RegId,
    pub n: usize,
    pub gates: Vec<GateOp>,
}

/// Encoded training set: uniform superposition over training indexes, each
/// branch carrying its vector's encoding.
#[derive(Debug, Clone)]
pub struct BetaState {
    pub state: StateVector,
    pub index_j: RegId,
    pub index_i: RegId,
    pub working: RegId,
    pub value: RegId,
    pub flags_j: RegId,
    pub flags_i: RegId,
    pub m: usize,
    pub n: usize,
    pub gates: Vec<GateOp>,
}

/// Prepare the test-vector state over index register, working register, value
/// ancilla and comparator flags.
pub fn prepare_alpha(components: &[f64], qubit_cap: usize) -> Result<AlphaState> {
    validate_components(components)?;
    let n = components.len();
    let table = ValueTable::build(components.iter());

    let mut layout = RegisterLayout::new(qubit_cap);
    let index = layout.add("index_i", index_register_width(n))?;
    let working = layout.add("working", table.width())?;
    let value = layout.add("value", 1)?;
    let flags = layout.add("flags_i", 2)?;

    let mut gates = Vec::new();
    push_index_prep(&layout, index, flags, n as u64, &mut gates);
    push_encode(&layout, index, working, value, components, &table, &mut gates);

    let mut state = StateVector::zero(layout);
    for gate in &gates {
        state.apply(gate)?;
    }
    Ok(AlphaState {
        state,
        index,
        working,
        value,
        flags,
        n,
        gates,
    })
}

/// Prepare the training-set state over both index registers, the shared
/// working register, the value ancilla and both comparator flag pairs.
pub fn prepare_beta(training: &[Vec<f64>], qubit_cap: usize) -> Result<BetaState> {
    if training.is_empty() {
        return Err(Error::NoTrainingData);
    }
    let n = training[0].len();
    for vector in training {
        if vector.len() != n {
            return Err(Error::BadFeatureLength(vector.len(), n));
        }
        validate_components(vector)?;
    }
    let m = training.len();
    let table = ValueTable::build(training.iter().flat_map(|v| v.iter()));

    let mut layout = RegisterLayout::new(qubit_cap);
    let index_j = layout.add("index_j", index_register_width(m))?;
    let index_i = layout.add("index_i", index_register_width(n))?;
    let working = layout.add("working", table.width())?;
    let value = layout.add("value", 1)?;
    let flags_j = layout.add("flags_j", 2)?;
    let flags_i = layout.add("flags_i", 2)?;

    let mut gates = Vec::new();
    push_index_prep(&layout, index_j, flags_j, m as u64, &mut gates);
    push_index_prep(&layout, index_i, flags_i, n as u64, &mut gates);

    // Value writes, rotations and uncomputation over every (j, i) branch.
    let mut writes = Vec::new();
    for (j, vector) in training.iter().enumerate() {
        let j_controls = register_equals(&layout, index_j, j as u64 + 1);
        for (i, &v) in vector.iter().enumerate() {
            let code = table.code_of(v);
            if code == 0 {
                continue;
            }
            let mut controls = j_controls.clone();
            controls.extend(register_equals(&layout, index_i, i as u64 + 1));
            push_code_writes(&layout, working, code, controls, &mut writes);
        }
    }
    gates.extend(writes.iter().cloned());
    push_code_rotations(&layout, working, value, &table, &mut gates);
    gates.extend(writes.iter().rev().map(|g| g.inverse()));

    let mut state = StateVector::zero(layout);
    for gate in &gates {
        state.apply(gate)?;
    }
    Ok(BetaState {
        state,
        index_j,
        index_i,
        working,
        value,
        flags_j,
        flags_i,
        m,
        n,
        gates,
    })
}

/// Hadamards over an index register followed by the range comparator.
fn push_index_prep(
    layout: &RegisterLayout,
    index: RegId,
    flags: RegId,
    bound: u64,
    gates: &mut Vec<GateOp>,
) {
    let reg = layout.reg(index);
    for q in reg.qubits() {
        gates.push(GateOp::H { target: q });
    }
    let flags_reg = layout.reg(flags);
    gates.push(GateOp::Comparator {
        reg: index,
        bound,
        flag_low: flags_reg.offset,
        flag_high: flags_reg.offset + 1,
    });
}

/// Component encoding for a single vector: writes, rotations, uncomputation.
fn push_encode(
    layout: &RegisterLayout,
    index: RegId,
    working: RegId,
    value: RegId,
    components: &[f64],
    table: &ValueTable,
    gates: &mut Vec<GateOp>,
) {
    let mut writes = Vec::new();
    for (i, &v) in components.iter().enumerate() {
        let code = table.code_of(v);
        if code == 0 {
            continue;
        }
        let controls = register_equals(layout, index, i as u64 + 1);
        push_code_writes(layout, working, code, controls, &mut writes);
    }
    gates.extend(writes.iter().cloned());
    push_code_rotations(layout, working, value, table, gates);
    gates.extend(writes.iter().rev().map(|g| g.inverse()));
}

/// Controlled NOTs writing `code` into the working register.
fn push_code_writes(
    layout: &RegisterLayout,
    working: RegId,
    code: u64,
    controls: Vec<Control>,
    gates: &mut Vec<GateOp>,
) {
    let reg = layout.reg(working);
    for bit in 0..reg.width {
        if (code >> bit) & 1 == 1 {
            gates.push(GateOp::Cx {
                controls: controls.clone(),
                target: reg.offset + bit,
            });
        }
    }
}

/// For each nonzero code, rotate the value ancilla by 2·asin of the coded
/// component.
fn push_code_rotations(
    layout: &RegisterLayout,
    working: RegId,
    value: RegId,
    table: &ValueTable,
    gates: &mut Vec<GateOp>,
) {
    let target = layout.reg(value).offset;
    for code in 1..=table.len() as u64 {
        gates.push(GateOp::CRy {
            controls: register_equals(layout, working, code),
            target,
            theta: 2.0 * table.value_of(code).asin(),
        });
    }
}

impl AlphaState {
    /// Renormalized flag-clear branch over (index, working, value).
    pub fn clear_branch(&self) -> Result<StateVector> {
        self.state
            .project_select(&[(self.flags, 0)], &[self.index, self.working, self.value])
    }

    /// The encoded unit vector Σ vᵢ|i⟩ on the index register: flag-clear,
    /// working register zero, value ancilla |1⟩.
    pub fn vector_state(&self) -> Result<StateVector> {
        self.state.project_select(
            &[(self.flags, 0), (self.working, 0), (self.value, 1)],
            &[self.index],
        )
    }

    /// Probability mass on working-register values other than zero.
    pub fn residual_working_mass(&self) -> f64 {
        1.0 - self
            .state
            .register_distribution(self.working)
            .first()
            .copied()
            .unwrap_or(0.0)
    }
}

impl BetaState {
    /// Renormalized all-flags-clear branch over (j, i, working, value).
    pub fn clear_branch(&self) -> Result<StateVector> {
        self.state.project_select(
            &[(self.flags_j, 0), (self.flags_i, 0)],
            &[self.index_j, self.index_i, self.working, self.value],
        )
    }

    /// Marginal probability that the training-index comparator flags are
    /// clear.
    pub fn flag_clear_probability(&self) -> f64 {
        self.state
            .register_distribution(self.flags_j)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    /// The encoded training vector Σ vⱼᵢ|i⟩ for one index j.
    pub fn vector_state(&self, j: u64) -> Result<StateVector> {
        self.state.project_select(
            &[
                (self.index_j, j),
                (self.flags_j, 0),
                (self.flags_i, 0),
                (self.working, 0),
                (self.value, 1),
            ],
            &[self.index_i],
        )
    }

    pub fn residual_working_mass(&self) -> f64 {
        1.0 - self
            .state
            .register_distribution(self.working)
            .first()
            .copied()
            .unwrap_or(0.0)
    }
}
