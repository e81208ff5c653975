//! Gate operations applied to dense statevectors.

use std::fmt;

use num_complex::Complex64;

use super::layout::{RegId, RegisterLayout};

/// A control condition: the qubit must be in |1⟩ (`value = true`) or |0⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub value: bool,
}

impl Control {
    pub fn set(qubit: usize) -> Self {
        Control { qubit, value: true }
    }

    pub fn clear(qubit: usize) -> Self {
        Control {
            qubit,
            value: false,
        }
    }
}

/// Basis-state predicates used by phase oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum Marked {
    /// Every basis state (a global phase when used as an oracle).
    All,
    /// The all-zeros basis state.
    AllZero,
    /// States where every qubit under the mask is |0⟩.
    MaskZero(u64),
    /// States where one qubit is |1⟩.
    Qubit(usize),
    /// States where a register holds an exact value.
    RegValue { reg: RegId, value: u64 },
    /// States where a register value is strictly below a threshold, optionally
    /// excluding listed values of a second register.
    RegBelow {
        reg: RegId,
        threshold: u64,
        exclude_reg: Option<RegId>,
        exclude: Vec<u64>,
    },
}

impl Marked {
    pub fn matches(&self, layout: &RegisterLayout, z: u64) -> bool {
        match self {
            Marked::All => true,
            Marked::AllZero => z == 0,
            Marked::MaskZero(mask) => z & mask == 0,
            Marked::Qubit(q) => (z >> q) & 1 == 1,
            Marked::RegValue { reg, value } => layout.reg(*reg).value_in(z) == *value,
            Marked::RegBelow {
                reg,
                threshold,
                exclude_reg,
                exclude,
            } => {
                if layout.reg(*reg).value_in(z) >= *threshold {
                    return false;
                }
                match exclude_reg {
                    Some(er) => !exclude.contains(&layout.reg(*er).value_in(z)),
                    None => true,
                }
            }
        }
    }
}

/// One unitary operation on a statevector.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    H {
        target: usize,
    },
    X {
        target: usize,
    },
    /// Rotation about Y: [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]].
    Ry {
        target: usize,
        theta: f64,
    },
    /// Multi-controlled NOT; a single control is a plain CNOT.
    Cx {
        controls: Vec<Control>,
        target: usize,
    },
    CRy {
        controls: Vec<Control>,
        target: usize,
        theta: f64,
    },
    CSwap {
        control: usize,
        a: usize,
        b: usize,
    },
    /// Flag-setting comparison of a register against a classical bound:
    /// the low flag is toggled when the register is 0, the high flag when it
    /// exceeds the bound. An XOR permutation on basis states.
    Comparator {
        reg: RegId,
        bound: u64,
        flag_low: usize,
        flag_high: usize,
    },
    /// Phase oracle: multiplies marked basis states by −1.
    PhaseFlip {
        marked: Marked,
    },
    /// Reflection 2|a⟩⟨a| − I about a fixed state (Grover diffusion when the
    /// axis is the search's start state).
    Reflect {
        axis: Vec<Complex64>,
    },
    Inverse(Box<GateOp>),
}

impl GateOp {
    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Cx {
            controls: vec![Control::set(control)],
            target,
        }
    }

    /// The inverse gate. Most kinds are involutions; rotations negate θ.
    pub fn inverse(&self) -> GateOp {
        match self {
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
            GateOp::Inverse(inner) => (**inner).clone(),
            other => GateOp::Inverse(Box::new(other.clone())),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn controls(list: &[Control]) -> String {
            list.iter()
                .map(|c| format!("{}{}", if c.value { "+" } else { "-" }, c.qubit))
                .collect::<Vec<_>>()
                .join(",")
        }
        match self {
            GateOp::H { target } => write!(f, "h q{target}"),
            GateOp::X { target } => write!(f, "x q{target}"),
            GateOp::Ry { target, theta } => write!(f, "ry({theta:.6}) q{target}"),
            GateOp::Cx { controls: c, target } => write!(f, "cx [{}] q{target}", controls(c)),
            GateOp::CRy {
                controls: c,
                target,
                theta,
            } => write!(f, "cry({theta:.6}) [{}] q{target}", controls(c)),
            GateOp::CSwap { control, a, b } => write!(f, "cswap q{control} q{a} q{b}"),
            GateOp::Comparator {
                bound,
                flag_low,
                flag_high,
                ..
            } => write!(f, "cmp(bound={bound}) low=q{flag_low} high=q{flag_high}"),
            GateOp::PhaseFlip { marked } => write!(f, "oracle {marked:?}"),
            GateOp::Reflect { .. } => write!(f, "reflect"),
            GateOp::Inverse(inner) => write!(f, "inv({inner})"),
        }
    }
}
