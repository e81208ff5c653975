//! Simulation parameters and the flat key-value config file.

use std::path::Path;

use crate::error::{Error, Result};

/// Register widths and search budget knobs shared across the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Width of the distance register in qubits.
    pub distance_bits: u32,
    /// Phase-register width for amplitude estimation.
    pub phase_bits: u32,
    /// Multiplier on the ⌈√(kM)⌉ Grover-iteration budget.
    pub budget_multiplier: u32,
    /// Hard cap on total qubits of any dense statevector.
    pub qubit_cap: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        // t = b + 2 keeps the estimation error below half a distance code.
        SimConfig {
            distance_bits: 8,
            phase_bits: 10,
            budget_multiplier: 1,
            qubit_cap: 26,
        }
    }
}

impl SimConfig {
    /// Parse a flat `key = value` file. Keys: `b`, `t`, `c`, `qubit_cap`.
    /// Blank lines and `#` comments are ignored.
    pub fn from_file(path: &Path) -> Result<SimConfig> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_flat(&text)
    }

    pub fn from_str_flat(text: &str) -> Result<SimConfig> {
        let mut cfg = SimConfig::default();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::BadConfig {
                line: raw.to_string(),
                reason: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_u32 = |v: &str| -> Result<u32> {
                v.parse().map_err(|_| Error::BadConfig {
                    line: raw.to_string(),
                    reason: "value must be a positive integer".into(),
                })
            };
            match key {
                "b" | "distance_bits" => cfg.distance_bits = parse_u32(value)?,
                "t" | "phase_bits" => cfg.phase_bits = parse_u32(value)?,
                "c" | "budget_multiplier" => cfg.budget_multiplier = parse_u32(value)?,
                "qubit_cap" => cfg.qubit_cap = parse_u32(value)? as usize,
                _ => {
                    return Err(Error::BadConfig {
                        line: raw.to_string(),
                        reason: format!("unknown key {key:?}"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Error::BadConfig {
            line: format!("{self:?}"),
            reason: reason.into(),
        };
        if self.distance_bits == 0 || self.distance_bits > 32 {
            return Err(bad("b must be in 1..=32"));
        }
        if self.phase_bits == 0 || self.phase_bits > 24 {
            return Err(bad("t must be in 1..=24"));
        }
        if self.budget_multiplier == 0 {
            return Err(bad("c must be at least 1"));
        }
        if self.qubit_cap == 0 || self.qubit_cap > 30 {
            return Err(bad("qubit_cap must be in 1..=30"));
        }
        Ok(())
    }
}
