//! Similarity distances and the index/distance register superposition.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::{index_register_width, RegId, RegisterLayout, StateVector};

/// d(a, b) = ½ − ½⟨a,b⟩² for unit vectors; 0 for identical, ½ for orthogonal.
pub fn exact_distance(a: &[f64], b: &[f64]) -> f64 {
    let ip: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    0.5 - 0.5 * ip * ip
}

/// Round a distance onto a b-bit code: round(d·(2ᵇ−1)).
pub fn quantize_distance(d: f64, bits: u32) -> u64 {
    let max = ((1u64 << bits) - 1) as f64;
    (d.clamp(0.0, 1.0) * max).round() as u64
}

/// Exact and quantized distances from a test vector to every training vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    pub exact: Vec<f64>,
    pub quantized: Vec<u64>,
    pub bits: u32,
}

impl DistanceTable {
    pub fn build(v0: &[f64], training: &[Vec<f64>], bits: u32) -> DistanceTable {
        let exact: Vec<f64> = training.iter().map(|v| exact_distance(v0, v)).collect();
        let quantized = exact.iter().map(|&d| quantize_distance(d, bits)).collect();
        DistanceTable {
            exact,
            quantized,
            bits,
        }
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    /// CSV dump: index, exact distance, quantized code.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "exact", "code"])?;
        for (j, (d, q)) in self.exact.iter().zip(&self.quantized).enumerate() {
            w.write_record([(j + 1).to_string(), format!("{d}"), q.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Uniform superposition over training indexes, each entangled with its
/// distance code: the search substrate.
#[derive(Debug, Clone)]
pub struct SigmaState {
    state: StateVector,
    index_reg: RegId,
    dist_reg: RegId,
    m: usize,
    bits: u32,
    codes: Vec<u64>,
}

impl SigmaState {
    /// Build from per-index codes (codes[j−1] belongs to 1-based index j).
    pub fn from_codes(codes: &[u64], bits: u32, qubit_cap: usize) -> Result<SigmaState> {
        if codes.is_empty() {
            return Err(Error::NoTrainingData);
        }
        for &code in codes {
            if code >= (1u64 << bits) {
                return Err(Error::ThresholdOutOfRange {
                    threshold: code,
                    bits,
                });
            }
        }
        let m = codes.len();
        let mut layout = RegisterLayout::new(qubit_cap);
        let index_reg = layout.add("index_j", index_register_width(m))?;
        let dist_reg = layout.add("distance", bits as usize)?;
        let index = layout.reg(index_reg).clone();
        let dist = layout.reg(dist_reg).clone();

        let amp = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);
        let mut amps = vec![Complex64::ZERO; layout.dim()];
        for (j, &code) in codes.iter().enumerate() {
            amps[(index.place(j as u64 + 1) | dist.place(code)) as usize] = amp;
        }
        Ok(SigmaState {
            state: StateVector::from_amplitudes(layout, amps)?,
            index_reg,
            dist_reg,
            m,
            bits,
            codes: codes.to_vec(),
        })
    }

    /// Oracle-level backend: quantized exact distances.
    pub fn from_table(table: &DistanceTable, qubit_cap: usize) -> Result<SigmaState> {
        Self::from_codes(&table.quantized, table.bits, qubit_cap)
    }

    /// Infinite-precision backend: codes are ranks among the distinct exact
    /// distances, so every comparison matches the exact values (ties share a
    /// code).
    pub fn from_exact_ranks(exact: &[f64], qubit_cap: usize) -> Result<SigmaState> {
        let mut distinct: Vec<f64> = exact.to_vec();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup();
        let codes: Vec<u64> = exact
            .iter()
            .map(|d| {
                distinct
                    .binary_search_by(|x| x.partial_cmp(d).unwrap())
                    .unwrap() as u64
            })
            .collect();
        let bits = index_register_width(distinct.len().saturating_sub(1).max(1)) as u32;
        Self::from_codes(&codes, bits, qubit_cap)
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn index_reg(&self) -> RegId {
        self.index_reg
    }

    pub fn dist_reg(&self) -> RegId {
        self.dist_reg
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// Distance code entangled with a 1-based index.
    pub fn code_of(&self, j: u64) -> u64 {
        self.codes[j as usize - 1]
    }
}
