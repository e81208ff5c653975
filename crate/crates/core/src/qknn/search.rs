//! Grover threshold search and the k-minimum candidate loop.
//!
//! The search marks indexes whose distance code is strictly below a threshold
//! (excluding current candidates), amplifies them with Grover iterations and
//! measures. The k-minimum loop keeps k candidates, repeatedly replacing the
//! worst with any strictly closer index until the global iteration budget
//! c·⌈√(kM)⌉ is spent.

use rand::Rng;

use super::distance::SigmaState;
use crate::error::{Error, Result};
use crate::qsim::{GateOp, Marked};

/// Growth factor of the unknown-marked-count schedule.
const SCHEDULE_GROWTH: f64 = 1.2;

/// Global Grover-iteration budget c·⌈√(kM)⌉.
pub fn grover_budget(k: usize, m: usize, multiplier: u32) -> u64 {
    multiplier as u64 * ((k as f64 * m as f64).sqrt().ceil() as u64)
}

/// Outcome of one threshold search round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSearchOutcome {
    /// A 1-based index whose code is strictly below the threshold, if found.
    pub found: Option<u64>,
    /// Grover iterations consumed by this round.
    pub iterations: u64,
}

/// Search σ for an index outside `exclude` whose code is strictly below
/// `threshold`, spending at most `budget` Grover iterations.
///
/// Iteration counts follow the classic unknown-marked-count schedule:
/// uniformly random in {0, …, ⌈m⌉−1} with m growing geometrically up to √M.
/// A zero-iteration attempt is a plain classical sample of σ.
pub fn grover_threshold_search<R: Rng>(
    sigma: &SigmaState,
    threshold: u64,
    exclude: &[u64],
    budget: u64,
    rng: &mut R,
) -> Result<ThresholdSearchOutcome> {
    search_round(sigma, threshold, exclude, Some(budget), rng)
}

/// Threshold search in the infinite-budget limit: rounds repeat until a
/// marked index is measured; an empty marked set returns immediately (the
/// almost-sure terminal case).
pub fn grover_threshold_search_forced<R: Rng>(
    sigma: &SigmaState,
    threshold: u64,
    exclude: &[u64],
    rng: &mut R,
) -> Result<ThresholdSearchOutcome> {
    search_round(sigma, threshold, exclude, None, rng)
}

fn search_round<R: Rng>(
    sigma: &SigmaState,
    threshold: u64,
    exclude: &[u64],
    budget: Option<u64>,
    rng: &mut R,
) -> Result<ThresholdSearchOutcome> {
    if threshold > (1u64 << sigma.bits()) {
        return Err(Error::ThresholdOutOfRange {
            threshold,
            bits: sigma.bits(),
        });
    }
    if budget.is_none() {
        let any_marked = (1..=sigma.m() as u64)
            .any(|j| sigma.code_of(j) < threshold && !exclude.contains(&j));
        if !any_marked {
            return Ok(ThresholdSearchOutcome {
                found: None,
                iterations: 0,
            });
        }
    }

    let oracle = GateOp::PhaseFlip {
        marked: Marked::RegBelow {
            reg: sigma.dist_reg(),
            threshold,
            exclude_reg: Some(sigma.index_reg()),
            exclude: exclude.to_vec(),
        },
    };
    let diffusion = GateOp::Reflect {
        axis: sigma.state().amplitudes().to_vec(),
    };
    let schedule_cap = (sigma.m() as f64).sqrt();

    let mut schedule = 1.0f64;
    let mut consumed = 0u64;
    loop {
        let planned = rng.gen_range(0..schedule.ceil() as u64);
        let iterations = match budget {
            Some(b) => planned.min(b - consumed),
            None => planned,
        };
        let mut state = sigma.state().clone();
        for _ in 0..iterations {
            state.apply(&oracle)?;
            state.apply(&diffusion)?;
        }
        consumed += iterations;
        let j = state.measure_register(sigma.index_reg(), rng);
        let code = state.measure_register(sigma.dist_reg(), rng);
        if code < threshold && !exclude.contains(&j) {
            return Ok(ThresholdSearchOutcome {
                found: Some(j),
                iterations: consumed,
            });
        }
        if let Some(b) = budget {
            if consumed >= b {
                return Ok(ThresholdSearchOutcome {
                    found: None,
                    iterations: consumed,
                });
            }
        }
        schedule = (schedule * SCHEDULE_GROWTH).min(schedule_cap).max(1.0);
    }
}

/// Options for the k-minimum search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Budget multiplier c.
    pub budget_multiplier: u32,
    /// Infinite-budget limit: rounds never fail while an improvement exists.
    pub forced: bool,
    /// Record a text trace of the candidate-set evolution.
    pub trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget_multiplier: 1,
            forced: false,
            trace: false,
        }
    }
}

/// Winning indexes plus iteration accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// k distinct 1-based training indexes, ascending by (code, index).
    pub indexes: Vec<u64>,
    /// Total Grover iterations consumed.
    pub grover_iterations: u64,
    /// Phase-oracle invocations (one per Grover iteration).
    pub oracle_calls: u64,
    /// Budget that applied to this run.
    pub budget: u64,
    /// Whether the result equals the code-order k smallest.
    pub success: bool,
    /// Candidate-set evolution, one line per event (empty unless requested).
    pub trace: Vec<String>,
}

/// Find the k indexes with the smallest distance codes.
///
/// Candidates start as k distinct uniformly random indexes; each successful
/// threshold search replaces the current worst candidate with a strictly
/// closer index. Stops when the budget is spent (or, in forced mode, when no
/// improvement exists).
pub fn durr_k_min<R: Rng>(
    sigma: &SigmaState,
    k: usize,
    opts: &SearchOptions,
    rng: &mut R,
) -> Result<SearchResult> {
    let m = sigma.m();
    if k == 0 || k > m {
        return Err(Error::KExceedsM { k, m });
    }
    let budget = if opts.forced {
        u64::MAX
    } else {
        grover_budget(k, m, opts.budget_multiplier)
    };

    // k distinct random starting candidates (partial Fisher-Yates).
    let mut pool: Vec<u64> = (1..=m as u64).collect();
    for swap_to in 0..k {
        let pick = rng.gen_range(swap_to..m);
        pool.swap(swap_to, pick);
    }
    let mut candidates: Vec<u64> = pool[..k].to_vec();

    let mut trace = Vec::new();
    let log = |line: String, trace: &mut Vec<String>| {
        if opts.trace {
            trace.push(line);
        }
    };
    log(
        format!("init candidates={:?}", with_codes(&candidates, sigma)),
        &mut trace,
    );

    let mut consumed = 0u64;
    loop {
        // Worst candidate by (code, index).
        let (worst_pos, &worst) = candidates
            .iter()
            .enumerate()
            .max_by_key(|(_, &j)| (sigma.code_of(j), j))
            .expect("k >= 1");
        let threshold = sigma.code_of(worst);

        let round = if opts.forced {
            grover_threshold_search_forced(sigma, threshold, &candidates, rng)?
        } else {
            grover_threshold_search(sigma, threshold, &candidates, budget - consumed, rng)?
        };
        consumed += round.iterations;

        match round.found {
            Some(j) => {
                debug_assert!(sigma.code_of(j) < threshold);
                log(
                    format!(
                        "iterations={consumed} replace index {worst} (code {threshold}) with {j} (code {})",
                        sigma.code_of(j)
                    ),
                    &mut trace,
                );
                candidates[worst_pos] = j;
            }
            None => {
                log(
                    format!(
                        "iterations={consumed} stop: {}",
                        if opts.forced {
                            "no index improves the candidate set"
                        } else {
                            "budget exhausted"
                        }
                    ),
                    &mut trace,
                );
                break;
            }
        }
        if !opts.forced && consumed >= budget {
            log(format!("iterations={consumed} stop: budget exhausted"), &mut trace);
            break;
        }
    }

    candidates.sort_by_key(|&j| (sigma.code_of(j), j));

    let mut by_code: Vec<u64> = (1..=m as u64).collect();
    by_code.sort_by_key(|&j| (sigma.code_of(j), j));
    let mut best: Vec<u64> = by_code[..k].to_vec();
    best.sort_unstable();
    let mut got = candidates.clone();
    got.sort_unstable();
    let success = got == best;

    assert!(consumed <= budget, "iteration budget law violated");
    Ok(SearchResult {
        indexes: candidates,
        grover_iterations: consumed,
        oracle_calls: consumed,
        budget,
        success,
        trace,
    })
}

fn with_codes(indexes: &[u64], sigma: &SigmaState) -> Vec<(u64, u64)> {
    indexes.iter().map(|&j| (j, sigma.code_of(j))).collect()
}

/// Majority vote over the winner labels; ties keep the label seen first in
/// the winners' order.
pub fn majority_vote<'a>(indexes: &[u64], labels: &'a [String]) -> Result<&'a str> {
    if indexes.is_empty() {
        return Err(Error::NoTrainingData);
    }
    let mut tally: Vec<(&str, usize)> = Vec::new();
    for &j in indexes {
        let label = labels[j as usize - 1].as_str();
        match tally.iter_mut().find(|(l, _)| *l == label) {
            Some((_, count)) => *count += 1,
            None => tally.push((label, 1)),
        }
    }
    // First occurrence wins ties because earlier entries come first.
    let mut best = tally[0];
    for &entry in &tally[1..] {
        if entry.1 > best.1 {
            best = entry;
        }
    }
    Ok(best.0)
}
