//! Brute-force vertex enumeration for small dimensions, plus the random
//! support-selection success experiment.
//!
//! Every extreme point of the class polytope has at most d+1 nonzero
//! entries, so the complete vertex set can be recovered by sweeping all
//! support subsets of size 1..=d+1, solving the restricted margin system
//! exactly, and keeping nonnegative solutions. A solution is collected when
//! the restricted system is uniquely solvable; when the restricted kernel is
//! one-dimensional the solution segment is intersected with the nonnegative
//! cone and its endpoints collected; higher-dimensional kernels are skipped
//! because every candidate they could contribute lives on a smaller support
//! that the sweep visits anyway. Candidates are deduplicated by their
//! canonical serialized form, certified by the rank test, and returned
//! sorted by that key.
//!
//! The per-subset solver works in i128 with fraction-free elimination,
//! falling back to arbitrary-precision rationals in the (practically
//! unreachable) event of overflow. Subsets are processed in parallel by
//! rank, with combinations recovered by lexicographic unranking.

use std::collections::BTreeMap;

use num::bigint::{BigInt, BigUint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::class::{is_extremal, FrechetClass, Pmf};
use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, Solution};
use crate::rat::Rat;

/// Hard ceiling on the number of support subsets a single enumeration may
/// visit, even when the dimension gate is overridden.
const MAX_SUBSETS: u128 = 1 << 32;

/// Outcome of solving the margin system restricted to one support subset.
enum SubsetOutcome {
    /// Inconsistent, or kernel dimension >= 2 (deferred to sub-supports).
    Skip,
    /// Unique solution (not yet checked for nonnegativity).
    Unique(Vec<Rat>),
    /// One-dimensional solution set: base + t * dir, with sum(dir) = 0.
    Segment { base: Vec<Rat>, dir: Vec<Rat> },
}

/// Enumerates every extreme point of the class polytope by sweeping support
/// subsets of size up to `max_support` (default d+1, larger values are
/// clamped). Gated to d <= 5 unless `force_large_d` is set; even then the
/// total subset count must stay below 2^32.
pub fn enumerate_extremals_bruteforce(
    class: &FrechetClass,
    max_support: Option<u32>,
    force_large_d: bool,
) -> Result<Vec<Pmf>> {
    if class.d() > 5 && !force_large_d {
        return Err(Error::Unsupported(format!(
            "brute-force enumeration is gated to d <= 5 (got d = {}); set the force flag to override",
            class.d()
        )));
    }
    let n: u64 = 1 << class.d();
    let cap = max_support
        .unwrap_or(class.d() + 1)
        .min(class.d() + 1) as usize;
    let table = binomial_table(n as usize, cap);
    let total: u128 = (1..=cap).map(|k| table[n as usize][k]).sum();
    if total > MAX_SUBSETS {
        return Err(Error::Unsupported(format!(
            "enumeration would visit {total} support subsets; the limit is {MAX_SUBSETS}"
        )));
    }

    let mut found: BTreeMap<String, Pmf> = BTreeMap::new();
    for k in 1..=cap {
        let count = table[n as usize][k];
        let candidates: Vec<Pmf> = (0..count as u64)
            .into_par_iter()
            .flat_map_iter(|rank| {
                let subset = unrank_combination(&table, n, k, rank as u128);
                subset_candidates(class, &subset).into_iter()
            })
            .collect();
        for pmf in candidates {
            found.entry(pmf.dense_key()).or_insert(pmf);
        }
    }

    let mut out = Vec::with_capacity(found.len());
    for (_, pmf) in found {
        pmf.validate(class).map_err(|e| {
            Error::Internal(format!("enumerated candidate failed validation: {e}"))
        })?;
        if is_extremal(class, &pmf)?.is_extremal {
            out.push(pmf);
        }
    }
    Ok(out)
}

/// Estimates how often a uniformly random choice of d+1 polytope coordinates
/// supports at least one class member: the fraction of `trials` draws whose
/// restricted polytope is nonempty. Deterministic for a fixed seed.
pub fn support_success_experiment(class: &FrechetClass, trials: u64, seed: u64) -> Result<Rat> {
    if class.d() > 6 {
        return Err(Error::Unsupported(format!(
            "the support success experiment is gated to d <= 6 (got d = {})",
            class.d()
        )));
    }
    if trials == 0 {
        return Ok(Rat::zero());
    }
    let n = 1usize << class.d();
    let k = class.d() as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Draw all subsets sequentially so the stream of random values, and
    // hence the estimate, does not depend on thread scheduling.
    let draws: Vec<Vec<u64>> = (0..trials)
        .map(|_| {
            let mut idx = rand::seq::index::sample(&mut rng, n, k).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| i as u64).collect()
        })
        .collect();
    let successes = draws
        .par_iter()
        .filter(|subset| subset_feasible(class, subset))
        .count() as i64;
    Ok(Rat::from_int(successes) / Rat::from_int(trials as i64))
}

/// True when some class member is supported inside `subset`. A nonempty
/// restricted polytope always has a vertex, and a vertex is the unique
/// solution on its own support, so it suffices to scan sub-supports for a
/// uniquely solvable, nonnegative system.
fn subset_feasible(class: &FrechetClass, subset: &[u64]) -> bool {
    let k = subset.len();
    let mut sub = Vec::with_capacity(k);
    for mask in 1u32..(1 << k) {
        sub.clear();
        for (i, &offset) in subset.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sub.push(offset);
            }
        }
        if let SubsetOutcome::Unique(values) = solve_subset(class, &sub) {
            if values.iter().all(|v| !v.is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Candidate pmfs supported (weakly) on one subset: the unique solution if
/// nonnegative, or the endpoints of a one-dimensional solution segment
/// clipped to the nonnegative cone.
fn subset_candidates(class: &FrechetClass, subset: &[u64]) -> Vec<Pmf> {
    let points: Vec<Vec<Rat>> = match solve_subset(class, subset) {
        SubsetOutcome::Skip => return Vec::new(),
        SubsetOutcome::Unique(values) => {
            if values.iter().any(Rat::is_negative) {
                return Vec::new();
            }
            vec![values]
        }
        SubsetOutcome::Segment { base, dir } => segment_endpoints(&base, &dir),
    };
    points
        .into_iter()
        .map(|values| {
            let mass: BTreeMap<BigUint, Rat> = subset
                .iter()
                .zip(values)
                .filter(|(_, v)| !v.is_zero())
                .map(|(&off, v)| (BigUint::from(off), v))
                .collect();
            Pmf::from_map_unchecked(class.d(), mass)
        })
        .collect()
}

/// Endpoints of {base + t * dir : all coordinates >= 0}. The sum row forces
/// the direction's entries to cancel, so the interval is always bounded;
/// it may still be empty.
fn segment_endpoints(base: &[Rat], dir: &[Rat]) -> Vec<Vec<Rat>> {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (b, v) in base.iter().zip(dir) {
        if v.is_zero() {
            if b.is_negative() {
                return Vec::new();
            }
            continue;
        }
        let bound = -(b / v);
        if v.is_positive() {
            lo = Some(match lo {
                Some(cur) => cur.max(bound),
                None => bound,
            });
        } else {
            hi = Some(match hi {
                Some(cur) => cur.min(bound),
                None => bound,
            });
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        // A nonzero direction with zero coordinate sum has entries of both
        // signs; a one-sided interval means the direction was zero.
        return Vec::new();
    };
    if lo > hi {
        return Vec::new();
    }
    let point = |t: &Rat| -> Vec<Rat> {
        base.iter()
            .zip(dir)
            .map(|(b, v)| b + &(v * t))
            .collect()
    };
    let mut out = vec![point(&lo)];
    if hi != lo {
        out.push(point(&hi));
    }
    out
}

/// Solves the margin-plus-normalization system restricted to the given
/// support columns: d scaled margin rows (s at a zero bit, s-t at a one bit,
/// right-hand side 0) and a sum row (all ones, right-hand side 1).
fn solve_subset(class: &FrechetClass, subset: &[u64]) -> SubsetOutcome {
    let rows = class.d() as usize + 1;
    let k = subset.len();
    let cols = k + 1;
    let mut m = vec![0i128; rows * cols];
    let s = class.s() as i128;
    let neg = s - class.t() as i128;
    for (j, &offset) in subset.iter().enumerate() {
        for i in 0..class.d() as usize {
            m[i * cols + j] = if offset >> i & 1 == 0 { s } else { neg };
        }
        m[(rows - 1) * cols + j] = 1;
    }
    m[(rows - 1) * cols + k] = 1;
    match bareiss_echelon(rows, cols, &mut m) {
        Some(pivots) => outcome_from_echelon(&m, cols, k, &pivots),
        None => solve_subset_bigrat(class, subset),
    }
}

/// Arbitrary-precision fallback for the restricted solve, reusing the
/// generic rational solver. Only reachable when the i128 elimination
/// overflows, which the small integer entries make practically impossible.
fn solve_subset_bigrat(class: &FrechetClass, subset: &[u64]) -> SubsetOutcome {
    let rows = class.d() as usize + 1;
    let k = subset.len();
    let mut a = RatMatrix::zeros(rows, k);
    let mut b = vec![Rat::zero(); rows];
    let s = Rat::from_int(class.s() as i64);
    let neg = Rat::from_int(class.s() as i64 - class.t() as i64);
    for (j, &offset) in subset.iter().enumerate() {
        for i in 0..class.d() as usize {
            let v = if offset >> i & 1 == 0 { s.clone() } else { neg.clone() };
            a.set(i, j, v);
        }
        a.set(rows - 1, j, Rat::one());
    }
    b[rows - 1] = Rat::one();
    match a.solve_full(&b) {
        Solution::Unique(x) => SubsetOutcome::Unique(x),
        Solution::Parametric { particular, kernel } if kernel.len() == 1 => {
            SubsetOutcome::Segment {
                base: particular,
                dir: kernel.into_iter().next().unwrap(),
            }
        }
        _ => SubsetOutcome::Skip,
    }
}

/// Fraction-free (Bareiss) forward elimination on a row-major augmented
/// matrix. Returns the pivot (row, column) list, or None if an intermediate
/// product overflowed i128. Intermediate entries are minors of the input,
/// so every division is exact.
fn bareiss_echelon(rows: usize, cols: usize, m: &mut [i128]) -> Option<Vec<(usize, usize)>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev: i128 = 1;
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.swap(r * cols + j, pr * cols + j);
            }
        }
        let pivot = m[r * cols + c];
        for i in r + 1..rows {
            let head = m[i * cols + c];
            for j in c + 1..cols {
                let lhs = pivot.checked_mul(m[i * cols + j])?;
                let rhs = head.checked_mul(m[r * cols + j])?;
                let num = lhs.checked_sub(rhs)?;
                debug_assert_eq!(num % prev, 0, "fraction-free division must be exact");
                m[i * cols + j] = num / prev;
            }
            m[i * cols + c] = 0;
        }
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    Some(pivots)
}

/// Classifies an echelonized augmented system with `k` unknowns and extracts
/// exact solutions. Kernel dimension 2 or more is reported as Skip.
fn outcome_from_echelon(
    m: &[i128],
    cols: usize,
    k: usize,
    pivots: &[(usize, usize)],
) -> SubsetOutcome {
    if pivots.iter().any(|&(_, c)| c == k) {
        return SubsetOutcome::Skip;
    }
    let nullity = k - pivots.len();
    if nullity >= 2 {
        return SubsetOutcome::Skip;
    }
    let base = back_substitute(m, cols, k, pivots, None);
    if nullity == 0 {
        return SubsetOutcome::Unique(base);
    }
    let free = (0..k)
        .find(|&c| !pivots.iter().any(|&(_, pc)| pc == c))
        .expect("nullity 1 implies a free column");
    let dir = back_substitute(m, cols, k, pivots, Some(free));
    SubsetOutcome::Segment { base, dir }
}

/// Back-substitution over exact rationals. With `free` unset this solves the
/// inhomogeneous system with free variables pinned to zero; with `free` set
/// it produces the homogeneous kernel vector that is 1 at that column.
fn back_substitute(
    m: &[i128],
    cols: usize,
    k: usize,
    pivots: &[(usize, usize)],
    free: Option<usize>,
) -> Vec<Rat> {
    let rat = |v: i128| Rat::from_bigint(BigInt::from(v));
    let mut x = vec![Rat::zero(); k];
    if let Some(fc) = free {
        x[fc] = Rat::one();
    }
    for &(r, c) in pivots.iter().rev() {
        let mut acc = if free.is_none() {
            rat(m[r * cols + k])
        } else {
            Rat::zero()
        };
        for j in c + 1..k {
            if !x[j].is_zero() {
                acc -= rat(m[r * cols + j]) * &x[j];
            }
        }
        x[c] = acc / rat(m[r * cols + c]);
    }
    x
}

/// Pascal's triangle up to row `n`, truncated at `k_max` columns, with
/// saturating arithmetic so oversized counts trip the subset ceiling rather
/// than wrapping.
fn binomial_table(n: usize, k_max: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; k_max + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=k_max.min(i) {
            t[i][j] = t[i - 1][j - 1].saturating_add(t[i - 1][j]);
        }
    }
    t
}

/// The rank-th k-subset of {0,…,n-1} in lexicographic order.
fn unrank_combination(table: &[Vec<u128>], n: u64, k: usize, mut rank: u128) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    let mut remaining = k;
    let mut e = 0u64;
    while remaining > 0 {
        let with_e = table[(n - e - 1) as usize][remaining - 1];
        if rank < with_e {
            out.push(e);
            remaining -= 1;
        } else {
            rank -= with_e;
        }
        e += 1;
    }
    out
}
