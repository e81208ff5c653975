//! Named qubit registers over a dense statevector.
//!
//! Qubit `q` corresponds to bit `q` of the basis index (little endian), and a
//! register occupies a contiguous range of qubits.

use crate::error::{Error, Result};

/// Default cap on total qubits (2^26 amplitudes of 16 bytes each is ~1 GiB).
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Handle to one register inside a [`RegisterLayout`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegId(pub(crate) usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Register {
    pub name: String,
    pub offset: usize,
    pub width: usize,
}

impl Register {
    pub fn mask(&self) -> u64 {
        ((1u64 << self.width) - 1) << self.offset
    }

    /// Value of this register inside the basis index `z`.
    pub fn value_in(&self, z: u64) -> u64 {
        (z >> self.offset) & ((1u64 << self.width) - 1)
    }

    /// Basis-index bits representing `value` in this register.
    pub fn place(&self, value: u64) -> u64 {
        debug_assert!(value < (1u64 << self.width));
        value << self.offset
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.width
    }
}

/// Ordered collection of uniquely named registers with a qubit cap.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterLayout {
    regs: Vec<Register>,
    total: usize,
    cap: usize,
}

impl RegisterLayout {
    pub fn new(cap: usize) -> Self {
        RegisterLayout {
            regs: Vec::new(),
            total: 0,
            cap,
        }
    }

    pub fn with_default_cap() -> Self {
        Self::new(DEFAULT_QUBIT_CAP)
    }

    /// Append a register above the existing ones.
    pub fn add(&mut self, name: &str, width: usize) -> Result<RegId> {
        if width == 0 {
            return Err(Error::EmptyRegister);
        }
        if self.regs.iter().any(|r| r.name == name) {
            return Err(Error::DuplicateRegister(name.to_string()));
        }
        if self.total + width > self.cap {
            return Err(Error::CapacityExceeded {
                requested: self.total + width,
                cap: self.cap,
            });
        }
        self.regs.push(Register {
            name: name.to_string(),
            offset: self.total,
            width,
        });
        self.total += width;
        Ok(RegId(self.regs.len() - 1))
    }

    pub fn reg(&self, id: RegId) -> &Register {
        &self.regs[id.0]
    }

    pub fn registers(&self) -> &[Register] {
        &self.regs
    }

    pub fn total_qubits(&self) -> usize {
        self.total
    }

    pub fn dim(&self) -> usize {
        1usize << self.total
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

/// Qubits needed to hold the 1-based indexes 1..=n.
pub fn index_register_width(n: usize) -> usize {
    let mut width = 0;
    while (1usize << width) < n + 1 {
        width += 1;
    }
    width.max(1)
}
