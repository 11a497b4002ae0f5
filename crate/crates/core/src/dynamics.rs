//! Growth of conjugacy classes under iteration of a free-group automorphism.
//!
//! The stretch factor is the exponential growth rate of cyclically reduced
//! lengths, `sup_w limsup ||f^n(w)||^(1/n)`. It is estimated from the
//! generator orbits with a half-window ratio, which cancels the constant
//! prefactor that makes the raw n-th root converge slowly.

use rayon::prelude::*;

use crate::error::{Error, NotAutomorphism, Result};
use crate::free_auto::FreeMap;
use crate::intlin::{dominant_eigenvalue, EigenEstimate, PowerIteration};
use crate::word::{CyclicWord, Letter, Word, DEFAULT_LETTER_CAP};

pub const DEFAULT_DEPTH: usize = 80;
pub const DEFAULT_LENGTH_CAP: usize = 1_000_000;
pub const DEFAULT_MAX_LEN: usize = 6;
pub const DEFAULT_MAX_PERIOD: usize = 6;

/// Relative spread allowed between the last three window estimates.
const CONVERGENCE_SPREAD: f64 = 1e-3;

/// The orbit of one seed.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRun {
    pub seed: Word,
    /// `lengths[n]` is the cyclic length of `f^n(seed)`.
    pub lengths: Vec<u64>,
    pub estimate: f64,
    /// `(m, n)` with the estimate `(L(n) / L(m))^(1 / (n - m))`.
    pub window: (usize, usize),
    pub converged: bool,
    /// Iteration stopped early at the length cap or the letter cap.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StretchEstimate {
    /// Largest estimate over the seeds.
    pub lambda_hat: f64,
    /// The run attaining `lambda_hat` converged; see `runs` for the others.
    pub converged: bool,
    /// Some seed run stopped before the requested depth.
    pub truncated: bool,
    /// Index into `runs` of the seed attaining `lambda_hat`.
    pub best: usize,
    pub runs: Vec<GrowthRun>,
}

impl StretchEstimate {
    pub fn seed(&self) -> &Word {
        &self.runs[self.best].seed
    }

    pub fn lengths(&self) -> &[u64] {
        &self.runs[self.best].lengths
    }

    pub fn window(&self) -> (usize, usize) {
        self.runs[self.best].window
    }
}

/// Estimate from the window ending at `n`, with `m = ceil(n / 2)`.
fn window_estimate(lengths: &[u64], n: usize) -> (f64, (usize, usize)) {
    let m = n.div_ceil(2);
    let (lo, hi) = (lengths[m] as f64, lengths[n] as f64);
    if lo == 0.0 {
        return (if hi == 0.0 { 0.0 } else { f64::INFINITY }, (m, n));
    }
    ((hi / lo).powf(1.0 / (n - m) as f64), (m, n))
}

fn summarize(seed: Word, lengths: Vec<u64>, truncated: bool) -> GrowthRun {
    let last = lengths.len() - 1;
    let (mut estimate, window) = match last {
        0 => (1.0, (0, 0)),
        1 => {
            let (a, b) = (lengths[0] as f64, lengths[1] as f64);
            (if a == 0.0 { 0.0 } else { b / a }, (0, 1))
        }
        _ => window_estimate(&lengths, last),
    };
    let converged = last >= 4 && {
        let recent: Vec<f64> = (last - 2..=last).map(|n| window_estimate(&lengths, n).0).collect();
        let hi = recent.iter().cloned().fold(f64::MIN, f64::max);
        let lo = recent.iter().cloned().fold(f64::MAX, f64::min);
        hi.is_finite() && hi - lo <= CONVERGENCE_SPREAD * hi
    };
    // n-th roots of positive integers have limsup >= 1
    if lengths.iter().all(|&l| l > 0) {
        estimate = estimate.max(1.0);
    }
    GrowthRun {
        seed,
        lengths,
        estimate,
        window,
        converged,
        truncated,
    }
}

fn grow(f: &FreeMap, seed: &Word, depth: usize, length_cap: usize) -> Result<GrowthRun> {
    let mut w = seed.cyclic_core();
    let mut lengths = vec![w.len() as u64];
    let mut truncated = false;
    for _ in 0..depth {
        if w.len() > length_cap {
            truncated = true;
            break;
        }
        match f.apply_capped(&w, DEFAULT_LETTER_CAP) {
            Ok(next) => w = next.cyclic_core(),
            Err(Error::CapacityExceeded { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
        lengths.push(w.len() as u64);
    }
    Ok(summarize(seed.clone(), lengths, truncated))
}

/// Iterates `f` on each seed up to `depth` times (or until a cyclic length
/// exceeds `length_cap`) and estimates the growth rate. Empty `seeds` means
/// the generators.
pub fn estimate_stretch(
    f: &FreeMap,
    depth: usize,
    seeds: &[Word],
    length_cap: usize,
) -> Result<StretchEstimate> {
    let default_seeds;
    let seeds = if seeds.is_empty() {
        default_seeds = (1..=f.rank())
            .map(|g| Word::generator(f.rank(), g))
            .collect::<Result<Vec<_>>>()?;
        &default_seeds
    } else {
        seeds
    };
    if let Some(s) = seeds.iter().find(|s| s.rank() != f.rank()) {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: s.rank(),
        });
    }
    let runs = seeds
        .par_iter()
        .map(|s| grow(f, s, depth, length_cap))
        .collect::<Result<Vec<_>>>()?;
    let best = runs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.estimate.total_cmp(&b.1.estimate))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Invalid("no seeds".into()))?;
    Ok(StretchEstimate {
        lambda_hat: runs[best].estimate,
        converged: runs[best].converged,
        truncated: runs.iter().any(|r| r.truncated),
        best,
        runs,
    })
}

/// Estimates for a map and its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct StretchPair {
    pub forward: StretchEstimate,
    pub backward: StretchEstimate,
}

impl StretchPair {
    pub fn min(&self) -> f64 {
        self.forward.lambda_hat.min(self.backward.lambda_hat)
    }

    pub fn max(&self) -> f64 {
        self.forward.lambda_hat.max(self.backward.lambda_hat)
    }

    pub fn converged(&self) -> bool {
        self.forward.converged && self.backward.converged
    }
}

pub fn stretch_pair(f: &FreeMap, depth: usize, length_cap: usize) -> Result<StretchPair> {
    let inverse = f.invert()?;
    Ok(StretchPair {
        forward: estimate_stretch(f, depth, &[], length_cap)?,
        backward: estimate_stretch(&inverse, depth, &[], length_cap)?,
    })
}

/// Perron-Frobenius eigenvalue of the transition matrix: an upper bound on
/// the stretch factor, since cancellation only shortens images.
pub fn transition_bound(f: &FreeMap) -> EigenEstimate {
    dominant_eigenvalue(&f.transition_matrix(), PowerIteration::default())
        .expect("transition matrices are square and nonnegative")
}

/// Whether the transition matrix is irreducible (its letter graph is
/// strongly connected). When it is not, generator seeds may miss the
/// fastest-growing classes.
pub fn transition_irreducible(f: &FreeMap) -> bool {
    let r = f.rank();
    let counts: Vec<Vec<u64>> = f.images().iter().map(Word::letter_counts).collect();
    // edge j -> i when generator i occurs in the image of generator j
    let reach = |forward: bool| {
        let mut seen = vec![false; r];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(j) = stack.pop() {
            for i in 0..r {
                let edge = if forward { counts[j][i] } else { counts[i][j] };
                if edge > 0 && !seen[i] {
                    seen[i] = true;
                    stack.push(i);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// A conjugacy class returning to itself after `period` applications.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PeriodicOrbit {
    pub rep: CyclicWord,
    pub period: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicScan {
    /// Sorted by class.
    pub orbits: Vec<PeriodicOrbit>,
    pub max_len: usize,
    pub max_period: usize,
    /// Number of classes examined.
    pub candidates: usize,
}

impl PeriodicScan {
    /// No periodic class within the searched bounds. A bounded certificate,
    /// not a proof of atoroidality.
    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

/// All canonical cyclic words of rank `rank` and length `1..=max_len`.
pub fn cyclic_words_up_to(rank: usize, max_len: usize) -> Vec<CyclicWord> {
    let letters: Vec<Letter> = (1..=rank)
        .flat_map(|g| [Letter::positive(g), Letter::negative(g)])
        .collect();
    let mut out = Vec::new();
    let mut prefix: Vec<Letter> = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        extend_necklaces(&letters, len, &mut prefix, &mut out, rank);
    }
    out
}

fn extend_necklaces(
    letters: &[Letter],
    len: usize,
    prefix: &mut Vec<Letter>,
    out: &mut Vec<CyclicWord>,
    rank: usize,
) {
    if prefix.len() == len {
        let (first, last) = (prefix[0], prefix[len - 1]);
        if len > 1 && first == last.inverse() {
            return;
        }
        let canon = CyclicWord::from_cyclically_reduced(rank, prefix);
        if canon.letters() == prefix.as_slice() {
            out.push(canon);
        }
        return;
    }
    for &x in letters {
        if let Some(&prev) = prefix.last() {
            // freely reduced, and the least rotation starts with the least letter
            if x == prev.inverse() || x < prefix[0] {
                continue;
            }
        }
        prefix.push(x);
        extend_necklaces(letters, len, prefix, out, rank);
        prefix.pop();
    }
}

/// Searches for conjugacy classes of length at most `max_len` that return
/// to themselves within `max_period` applications of `f`.
///
/// A candidate is abandoned once its image is too long to shrink back within
/// the remaining steps: one application of the inverse multiplies cyclic
/// length by at most the inverse's longest image.
pub fn scan_periodic_classes(
    f: &FreeMap,
    max_len: usize,
    max_period: usize,
) -> Result<PeriodicScan, NotAutomorphism> {
    let inverse = f.invert()?;
    let shrink = inverse.max_image_len().max(1);
    let candidates = cyclic_words_up_to(f.rank(), max_len);
    let mut orbits: Vec<PeriodicOrbit> = candidates
        .par_iter()
        .filter_map(|rep| {
            let len = rep.len();
            let mut w = rep.to_word();
            for k in 1..=max_period {
                w = f.apply(&w).ok()?.cyclic_core();
                let budget = shrink
                    .checked_pow((max_period - k) as u32)
                    .and_then(|s| s.checked_mul(len))
                    .unwrap_or(usize::MAX);
                if w.len() > budget {
                    return None;
                }
                if w.len() == len && &w.canonical_cyclic() == rep {
                    return Some(PeriodicOrbit {
                        rep: rep.clone(),
                        period: k,
                    });
                }
            }
            None
        })
        .collect();
    orbits.sort();
    Ok(PeriodicScan {
        orbits,
        max_len,
        max_period,
        candidates: candidates.len(),
    })
}
