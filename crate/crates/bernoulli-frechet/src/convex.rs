//! Sum distributions, convex order, and the closed-form minimal
//! construction.
//!
//! Projecting a class member onto its coordinate sum S lands in the set of
//! distributions on {0,…,d} with mean dp. The extreme points of that set are
//! two-point distributions bracketing the mean (plus the point mass when dp
//! is an integer), and the convex-order minimum S* is the one supported on
//! the integers adjacent to dp. This module evaluates stop-loss transforms,
//! enumerates the sum extremals, and builds an actual d-variate class member
//! whose sum is S*: a short window-sliced polynomial in the class ideal
//! whose canonical preimage does the job directly at dimensions in the
//! hundreds.
//!
//! The sum layer deliberately works with a bare (d, p) pair instead of a
//! class handle: distributions on {0,…,d} with mean dp make sense for any
//! 0 < p < 1, and the reference values for, say, mean second moments are
//! quoted at p > 1/2 where no class with equal margins p <= 1/2 exists.
//!
//! Also here: crossed-moment sums computed two independent ways, mean
//! correlation, and m-order mutual exclusivity with its feasibility bound.

use std::collections::BTreeMap;

use num::bigint::BigUint;
use num::One;

use crate::class::{FrechetClass, Pmf};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultilinearPoly};
use crate::rat::Rat;
use crate::transform::{mass_to_coeffs, pmf_to_poly, type0_pmf};

/// Distribution of the coordinate sum: probabilities over {0,…,d}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumPmf {
    d: u32,
    probs: Vec<Rat>,
    mean: Rat,
}

impl SumPmf {
    fn from_probs(d: u32, probs: Vec<Rat>) -> Self {
        debug_assert_eq!(probs.len(), d as usize + 1);
        let mean = probs
            .iter()
            .enumerate()
            .map(|(k, p)| Rat::from_int(k as i64) * p)
            .sum();
        SumPmf { d, probs, mean }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Probabilities indexed by sum value 0..=d.
    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    pub fn mean(&self) -> &Rat {
        &self.mean
    }

    /// Sum values carrying positive mass, ascending.
    pub fn support(&self) -> Vec<u32> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, _)| k as u32)
            .collect()
    }
}

/// Projects a class member onto its coordinate sum by weight class.
pub fn sum_pmf(pmf: &Pmf) -> SumPmf {
    let mut probs = vec![Rat::zero(); pmf.d() as usize + 1];
    for (offset, value) in pmf.iter() {
        probs[offset.count_ones() as usize] += value;
    }
    SumPmf::from_probs(pmf.d(), probs)
}

/// An extreme point of the mean-dp sum polytope: mass on the two points
/// j1 < dp < j2, or the point mass at dp itself (then j1 = j2 = dp).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumExtremal {
    pub j1: u32,
    pub j2: u32,
    pub pmf: SumPmf,
}

fn check_sum_params(d: u32, p: &Rat) -> Result<Rat> {
    if d < 1 {
        return Err(Error::InvalidClass("dimension must be at least 1".into()));
    }
    if !p.is_positive() || p >= &Rat::one() {
        return Err(Error::InvalidClass(format!(
            "mean parameter p = {p} must satisfy 0 < p < 1"
        )));
    }
    Ok(Rat::from_int(d as i64) * p)
}

/// The integers strictly bracketing dp: the largest integer below it and the
/// smallest above. When dp is itself an integer these are dp-1 and dp+1.
pub fn sum_brackets(d: u32, p: &Rat) -> Result<(u32, u32)> {
    let mean = check_sum_params(d, p)?;
    let floor: i64 = i64::try_from(mean.floor_int()).expect("dp fits in i64");
    let (lo, hi) = if mean.is_integer() {
        (floor - 1, floor + 1)
    } else {
        (floor, floor + 1)
    };
    Ok((lo.max(0) as u32, hi as u32))
}

fn two_point(d: u32, mean: &Rat, j1: u32, j2: u32) -> SumExtremal {
    let mut probs = vec![Rat::zero(); d as usize + 1];
    if j1 == j2 {
        probs[j1 as usize] = Rat::one();
    } else {
        let span = Rat::from_int(j2 as i64 - j1 as i64);
        probs[j1 as usize] = (Rat::from_int(j2 as i64) - mean) / &span;
        probs[j2 as usize] = (mean - &Rat::from_int(j1 as i64)) / &span;
    }
    SumExtremal {
        j1,
        j2,
        pmf: SumPmf::from_probs(d, probs),
    }
}

/// All extreme points of the mean-dp sum polytope: every two-point
/// distribution s_{j1,j2} with j1 below and j2 above the mean, plus the
/// point mass when dp is an integer. Ordered by (j1, j2), point mass last.
pub fn sum_extremals(d: u32, p: &Rat) -> Result<Vec<SumExtremal>> {
    let mean = check_sum_params(d, p)?;
    let (lo, hi) = sum_brackets(d, p)?;
    let mut out = Vec::new();
    for j1 in 0..=lo {
        for j2 in hi..=d {
            out.push(two_point(d, &mean, j1, j2));
        }
    }
    if mean.is_integer() {
        let m = i64::try_from(mean.floor_int()).expect("dp fits in i64") as u32;
        out.push(two_point(d, &mean, m, m));
    }
    Ok(out)
}

/// Exact stop-loss transform E[(S - l)+] of a sum distribution.
pub fn stop_loss(s: &SumPmf, l: &Rat) -> Rat {
    let mut total = Rat::zero();
    for (k, p) in s.probs.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let excess = Rat::from_int(k as i64) - l;
        if excess.is_positive() {
            total += excess * p;
        }
    }
    total
}

/// The convex-order minimum of the mean-dp sum polytope: the two-point
/// distribution on the integers adjacent to dp (or the point mass at an
/// integer dp). Minimality is re-verified against every sum extremal on the
/// quarter-integer grid; stop-loss transforms are piecewise linear between
/// integers, so that grid is decisive. The sweep is quadratic in d per
/// rival, so it is skipped once the evaluation count would pass half a
/// million; the closed form itself has no dimension limit.
pub fn min_convex_sum(d: u32, p: &Rat) -> Result<SumExtremal> {
    let mean = check_sum_params(d, p)?;
    let minimal = if mean.is_integer() {
        let m = i64::try_from(mean.floor_int()).expect("dp fits in i64") as u32;
        two_point(d, &mean, m, m)
    } else {
        let (lo, hi) = sum_brackets(d, p)?;
        two_point(d, &mean, lo, hi)
    };
    let rivals = sum_extremals(d, p)?;
    if (4 * d as u64 + 1) * rivals.len() as u64 <= 500_000 {
        let quarter = Rat::new(1, 4);
        for step in 0..=(4 * d as i64) {
            let l = Rat::from_int(step) * &quarter;
            let own = stop_loss(&minimal.pmf, &l);
            for rival in &rivals {
                if own > stop_loss(&rival.pmf, &l) {
                    return Err(Error::Internal(format!(
                        "convex-order minimality violated at l = {l} against s_{{{},{}}}",
                        rival.j1, rival.j2
                    )));
                }
            }
        }
    }
    Ok(minimal)
}

fn binom_rat(n: u64, k: u64) -> Rat {
    Rat::from_biguint(num::integer::binomial(BigUint::from(n), BigUint::from(k)))
}

/// Visits all k-subsets of {0,…,n-1} in lexicographic order without
/// materializing the whole family.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        f(&cur);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Sum of all order-tau crossed moments, computed twice: directly as
/// sum over tau-subsets T of P(X_T = 1), and through the sum distribution
/// as sum C(k,tau) p_k. The two routes must agree exactly; a mismatch is an
/// internal-consistency failure. The direct route enumerates C(d,tau)
/// subsets and is gated accordingly.
pub fn crossed_moment_sum(pmf: &Pmf, tau: u32) -> Result<Rat> {
    let d = pmf.d();
    if tau < 2 || tau > d {
        return Err(Error::InvalidIndexSet(format!(
            "moment order {tau} outside 2..={d}"
        )));
    }
    let subsets = num::integer::binomial(BigUint::from(d as u64), BigUint::from(tau as u64));
    if subsets > BigUint::from(2_000_000u64) {
        return Err(Error::Unsupported(format!(
            "the direct crossed-moment route would enumerate {subsets} subsets; the limit is 2000000"
        )));
    }

    let support: Vec<(&BigUint, &Rat)> = pmf.iter().collect();
    let mut direct = Rat::zero();
    for_each_combination(d as usize, tau as usize, |set| {
        let mut mask = BigUint::from(0u32);
        for &i in set {
            mask.set_bit(i as u64, true);
        }
        for (offset, value) in &support {
            if *offset & &mask == mask {
                direct += *value;
            }
        }
    });

    let s = sum_pmf(pmf);
    let mut via_sum = Rat::zero();
    for (k, p) in s.probs().iter().enumerate() {
        if k as u32 >= tau && !p.is_zero() {
            via_sum += binom_rat(k as u64, tau as u64) * p;
        }
    }

    if direct != via_sum {
        return Err(Error::Internal(format!(
            "crossed-moment identity violated at tau = {tau}: direct {direct} vs weight route {via_sum}"
        )));
    }
    Ok(direct)
}

/// Mean second moment of the coordinate pairs, recovered from the sum
/// distribution alone: sum k(k-1) p_k / (d(d-1)).
pub fn mean_second_moment(s: &SumPmf) -> Result<Rat> {
    if s.d() < 2 {
        return Err(Error::InvalidClass(
            "the mean second moment needs at least two coordinates".into(),
        ));
    }
    let mut num = Rat::zero();
    for (k, p) in s.probs.iter().enumerate() {
        if k >= 2 && !p.is_zero() {
            num += Rat::from_int((k * (k - 1)) as i64) * p;
        }
    }
    Ok(num / Rat::from_int((s.d() as i64) * (s.d() as i64 - 1)))
}

/// Closed form of the minimal mean second moment: with j the greatest
/// integer at or below dp, j(2dp - j - 1) / (d(d-1)). Every sum distribution
/// supported on the integers adjacent to dp attains exactly this value.
pub fn minimal_mean_second_moment(d: u32, p: &Rat) -> Result<Rat> {
    let mean = check_sum_params(d, p)?;
    if d < 2 {
        return Err(Error::InvalidClass(
            "the mean second moment needs at least two coordinates".into(),
        ));
    }
    let j = Rat::from_bigint(mean.floor_int());
    let value = &j * &(&mean + &mean - &j - &Rat::one());
    Ok(value / Rat::from_int((d as i64) * (d as i64 - 1)))
}

/// Mean pairwise correlation: the average of the C(d,2) pair correlations,
/// which for equal Bernoulli(p) margins is (mu2 - p^2) / (p q) with mu2 the
/// mean second moment.
pub fn mean_correlation(class: &FrechetClass, pmf: &Pmf) -> Result<Rat> {
    if pmf.d() != class.d() {
        return Err(Error::DimensionMismatch {
            got: pmf.d(),
            want: class.d(),
        });
    }
    let crossed = crossed_moment_sum(pmf, 2)?;
    let pairs = binom_rat(class.d() as u64, 2);
    let mu2 = crossed / pairs;
    let p = class.p();
    Ok((mu2 - &(p * p)) / (p * class.q()))
}

/// The smallest m with P(S >= m) = 0, i.e. one past the largest attained
/// sum; the member is mutually exclusive of that order and every higher one.
pub fn exclusivity_order(pmf: &Pmf) -> u32 {
    let max_weight = pmf
        .iter()
        .map(|(offset, _)| offset.count_ones() as u32)
        .max()
        .unwrap_or(0);
    max_weight + 1
}

/// Whether order-m exclusivity is achievable with mean dp: some sum
/// distribution on {0,…,d} with mean dp is supported below m iff
/// m - 1 >= dp. At integer dp the point mass at dp itself qualifies, so the
/// bound is inclusive.
pub fn minimality_feasibility(d: u32, p: &Rat, m: u32) -> Result<bool> {
    let mean = check_sum_params(d, p)?;
    if m == 0 {
        return Ok(false);
    }
    Ok(Rat::from_int(m as i64 - 1) >= mean)
}

/// The exchangeable member with minimal sum: spreads each mass of S* evenly
/// over its weight class, f(x) = s*(|x|) / C(d, |x|). Materializes every
/// support point, hence gated by the weight-class sizes.
pub fn exchangeable_min_pmf(class: &FrechetClass) -> Result<Pmf> {
    let (lo, hi) = sum_brackets(class.d(), class.p())?;
    let mut total_points = BigUint::from(0u32);
    for w in lo..=hi {
        total_points += num::integer::binomial(
            BigUint::from(class.d() as u64),
            BigUint::from(w as u64),
        );
    }
    if total_points > BigUint::from(2_000_000u64) {
        return Err(Error::Unsupported(format!(
            "the exchangeable witness would carry {total_points} support points; the limit is 2000000"
        )));
    }
    let minimal = min_convex_sum(class.d(), class.p())?;
    let mut weights: Vec<(u32, Rat)> = Vec::new();
    for (k, prob) in minimal.pmf.probs().iter().enumerate() {
        if !prob.is_zero() {
            weights.push((k as u32, prob.clone()));
        }
    }
    let mut mass: BTreeMap<BigUint, Rat> = BTreeMap::new();
    for (w, prob) in &weights {
        let per_point = prob / &binom_rat(class.d() as u64, *w as u64);
        for_each_combination(class.d() as usize, *w as usize, |set| {
            let mut offset = BigUint::from(0u32);
            for &i in set {
                offset.set_bit(i as u64, true);
            }
            mass.insert(offset, per_point.clone());
        });
    }
    let pmf = Pmf::from_map_unchecked(class.d(), mass);
    pmf.validate(class).map_err(|e| {
        Error::Internal(format!("exchangeable witness failed validation: {e}"))
    })?;
    Ok(pmf)
}

/// Which of the closed-form parameter regimes applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinCxCase {
    Integer,
    NonIntegerLow,
    NonIntegerHigh,
}

impl std::fmt::Display for MinCxCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MinCxCase::Integer => "Integer",
            MinCxCase::NonIntegerLow => "NonIntegerLow",
            MinCxCase::NonIntegerHigh => "NonIntegerHigh",
        })
    }
}

/// How the minimal member was realized: the window polynomial of the
/// closed-form construction, a pairing-kernel pmf (p = 1/2 and d = 2, where
/// the window polynomial degenerates to zero), or the exchangeable witness
/// (the handful of small classes where no window assignment avoids the
/// leading monomial).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinCxRoute {
    Windows,
    Kernel,
    Exchangeable,
}

impl std::fmt::Display for MinCxRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MinCxRoute::Windows => "Windows",
            MinCxRoute::Kernel => "Kernel",
            MinCxRoute::Exchangeable => "Exchangeable",
        })
    }
}

/// A class member whose coordinate sum is the convex-order minimum S*,
/// together with the construction data that produced it.
pub struct MinCxConstruction {
    pub case: MinCxCase,
    pub route: MinCxRoute,
    pub h: u64,
    pub k: u64,
    /// Degree of the leading monomial, the theorem's window-list length L.
    pub lead_degree: u32,
    pub alphas: Vec<Monomial>,
    pub betas: Vec<Monomial>,
    pub polynomial: MultilinearPoly,
    pub pmf: Pmf,
}

struct Branch {
    case: MinCxCase,
    l: i128,
    h: i128,
    k: i128,
    alpha_size: i128,
    beta_size: i128,
}

fn branch_params(class: &FrechetClass, case: MinCxCase) -> Branch {
    let d = class.d() as i128;
    let a1 = class.a1() as i128;
    let a2 = class.a2() as i128;
    match case {
        MinCxCase::Integer => {
            let pd = i64::try_from(class.mean_sum().floor_int()).expect("dp fits") as i128;
            Branch {
                case,
                l: d - pd,
                h: a1 + a2,
                k: 0,
                alpha_size: pd,
                beta_size: 0,
            }
        }
        MinCxCase::NonIntegerLow | MinCxCase::NonIntegerHigh => {
            let jm = i64::try_from(class.mean_sum().floor_int()).expect("dp fits") as i128;
            let base_k = a2 * d - 2 * a2 * jm - a1 * jm;
            let (l, k) = if case == MinCxCase::NonIntegerLow {
                (d - jm, base_k)
            } else {
                (d - jm - 1, base_k - a2)
            };
            Branch {
                case,
                l,
                h: a1 + a2 - k,
                k,
                alpha_size: jm,
                beta_size: jm + 1,
            }
        }
    }
}

/// A branch is usable when its window counts are nonnegative, the leading
/// monomial fits in the d-1 available variables, and no window is as long
/// as the whole list (a full-length window would coincide with the leading
/// monomial and collapse the polynomial).
fn branch_feasible(b: &Branch, d: u32) -> bool {
    b.h >= 0
        && b.k >= 0
        && b.l >= 1
        && b.l <= d as i128 - 1
        && (b.h == 0 || b.alpha_size < b.l)
        && (b.k == 0 || b.beta_size < b.l)
}

/// Slices `count` windows of `size` consecutive positions from the list
/// (x_1,…,x_l) repeated end to end, starting at *pos.
fn slice_windows(
    l: i128,
    pos: &mut i128,
    count: i128,
    size: i128,
) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    for _ in 0..count {
        if size == 0 {
            out.push(Monomial::constant());
            continue;
        }
        let vars: Vec<u32> = (0..size)
            .map(|i| ((*pos + i) % l) as u32 + 1)
            .collect();
        *pos += size;
        let m = Monomial::new(vars).map_err(|e| {
            Error::Internal(format!("window slicing produced an invalid monomial: {e}"))
        })?;
        out.push(m);
    }
    Ok(out)
}

fn build_window_construction(
    class: &FrechetClass,
    b: &Branch,
) -> Result<MinCxConstruction> {
    let a2 = class.a2() as i128;
    if b.h * b.alpha_size + b.k * b.beta_size != a2 * b.l {
        return Err(Error::Internal(format!(
            "window bookkeeping is off: {}x{} + {}x{} != {}x{}",
            b.h, b.alpha_size, b.k, b.beta_size, a2, b.l
        )));
    }
    let mut pos: i128 = 0;
    let alphas = slice_windows(b.l, &mut pos, b.h, b.alpha_size)?;
    let betas = slice_windows(b.l, &mut pos, b.k, b.beta_size)?;

    let lead = Monomial::new((1..=b.l as u32).collect()).map_err(|e| {
        Error::Internal(format!("leading monomial construction failed: {e}"))
    })?;
    let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
    let mut add = |m: Monomial, v: Rat| {
        let entry = terms.entry(m).or_insert_with(Rat::zero);
        *entry += v;
    };
    add(lead, -Rat::from_int(class.a2() as i64));
    for m in alphas.iter().chain(betas.iter()) {
        add(m.clone(), Rat::one());
    }
    add(Monomial::constant(), -Rat::from_int(class.a1() as i64));
    let terms: Vec<(Monomial, Rat)> = terms
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let polynomial = MultilinearPoly::from_terms(class.d() - 1, terms)?;

    let pmf = type0_pmf(class, &polynomial).map_err(|e| {
        Error::Internal(format!("window polynomial rejected by the preimage construction: {e}"))
    })?;
    Ok(MinCxConstruction {
        case: b.case,
        route: MinCxRoute::Windows,
        h: b.h as u64,
        k: b.k as u64,
        lead_degree: b.l as u32,
        alphas,
        betas,
        polynomial,
        pmf,
    })
}

/// Checks the defining postcondition: the coordinate sum of the constructed
/// member is exactly S*.
fn assert_minimal_sum(class: &FrechetClass, pmf: &Pmf) -> Result<()> {
    let mean = class.mean_sum();
    let d = class.d();
    let mut want = vec![Rat::zero(); d as usize + 1];
    if mean.is_integer() {
        let m = i64::try_from(mean.floor_int()).expect("dp fits") as usize;
        want[m] = Rat::one();
    } else {
        let (lo, hi) = sum_brackets(d, class.p())?;
        want[lo as usize] = Rat::from_int(hi as i64) - &mean;
        want[hi as usize] = &mean - &Rat::from_int(lo as i64);
    }
    let got = sum_pmf(pmf);
    if got.probs() != want.as_slice() {
        return Err(Error::Internal(
            "constructed member's sum distribution is not the convex-order minimum".into(),
        ));
    }
    Ok(())
}

/// Builds a class member whose coordinate sum is the convex-order minimum.
///
/// Case selection: integer dp stands alone; otherwise dp + p below the
/// upper bracket selects the low case and at or above it the high case.
/// Each case fixes window counts h (size j^M, or dp when integer) and k
/// (size j^m) and slices them from (x_1,…,x_L) repeated a2 times; the
/// polynomial -a2 x_1...x_L + sum x^alpha_i + sum x^beta_i - a1 lies in the
/// class ideal and its canonical preimage has sum S*. The reported case is
/// the branch actually used: when the labeled branch would need a window as
/// long as the whole list (which collapses the polynomial), the sibling
/// branch is tried, and the handful of small classes where both fail fall
/// back to the exchangeable witness. p = 1/2 and d = 2 route through an
/// explicit pairing-kernel member because every window assignment
/// degenerates there. Every route's output is re-verified against S*;
/// failures are internal errors, never silent.
pub fn min_convex_bernoulli(class: &FrechetClass) -> Result<MinCxConstruction> {
    let mean = class.mean_sum();
    let integer = mean.is_integer();
    let labeled = if integer {
        MinCxCase::Integer
    } else {
        let (_, hi) = sum_brackets(class.d(), class.p())?;
        if &(&mean + class.p()) < &Rat::from_int(hi as i64) {
            MinCxCase::NonIntegerLow
        } else {
            MinCxCase::NonIntegerHigh
        }
    };

    let kernel_route = class.p() == &Rat::new(1, 2) || class.d() == 2;
    let construction = if kernel_route {
        let w = class.d() / 2;
        let mut mass: BTreeMap<BigUint, Rat> = BTreeMap::new();
        let low = (BigUint::one() << w) - BigUint::one();
        let top = class.num_points() - BigUint::one();
        let high = &top ^ &low;
        let leftover = class.q() - class.p();
        if !leftover.is_zero() {
            mass.insert(BigUint::from(0u32), leftover);
        }
        mass.insert(low, class.p().clone());
        mass.insert(high, class.p().clone());
        let pmf = Pmf::from_map_unchecked(class.d(), mass);
        pmf.validate(class).map_err(|e| {
            Error::Internal(format!("kernel-route member failed validation: {e}"))
        })?;
        let image: BTreeMap<BigUint, Rat> =
            pmf.iter().map(|(o, v)| (o.clone(), v.clone())).collect();
        if !mass_to_coeffs(class, &image).is_empty() {
            return Err(Error::Internal(
                "kernel-route member is not annihilated by the pairing map".into(),
            ));
        }
        let labeled_l = branch_params(class, labeled).l.max(0) as u32;
        MinCxConstruction {
            case: labeled,
            route: MinCxRoute::Kernel,
            h: 0,
            k: 0,
            lead_degree: labeled_l,
            alphas: Vec::new(),
            betas: Vec::new(),
            polynomial: MultilinearPoly::zero(class.d() - 1),
            pmf,
        }
    } else {
        let first = branch_params(class, labeled);
        let chosen = if branch_feasible(&first, class.d()) {
            Some(first)
        } else if !integer {
            let sibling = match labeled {
                MinCxCase::NonIntegerLow => MinCxCase::NonIntegerHigh,
                _ => MinCxCase::NonIntegerLow,
            };
            let second = branch_params(class, sibling);
            branch_feasible(&second, class.d()).then_some(second)
        } else {
            None
        };
        match chosen {
            Some(branch) => build_window_construction(class, &branch)?,
            None => {
                let pmf = exchangeable_min_pmf(class)?;
                let polynomial = pmf_to_poly(class, &pmf)?;
                let labeled_l = branch_params(class, labeled).l.max(0) as u32;
                MinCxConstruction {
                    case: labeled,
                    route: MinCxRoute::Exchangeable,
                    h: 0,
                    k: 0,
                    lead_degree: labeled_l,
                    alphas: Vec::new(),
                    betas: Vec::new(),
                    polynomial,
                    pmf,
                }
            }
        }
    };

    assert_minimal_sum(class, &construction.pmf)?;
    Ok(construction)
}
