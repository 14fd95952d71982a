//! Classes of d-variate Bernoulli distributions with equal margins, their
//! probability mass functions, and extremality certificates.
//!
//! A class is fixed by the dimension `d >= 2` and a margin probability
//! `p = s/t` in lowest terms with `0 < p <= 1/2`. Margins above one half are
//! rejected at construction: complementing every variable (`1 - X_i`) maps
//! such a problem onto one with `p <= 1/2`, so nothing is lost.
//!
//! Points of {0,1}^d are ordered so that the first coordinate varies fastest:
//! the point with 0-based offset `j` has `x_i = 1` exactly when bit `i-1` of
//! `j` is set. For d = 3 the order is 000, 100, 010, 110, 001, 101, 011, 111.
//! Offsets are kept as `BigUint` so that dimensions in the hundreds work; the
//! complement of a point is `offset XOR (2^d - 1)`.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigUint;
use num::integer::gcd;
use num::One;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rat::Rat;

/// Largest dimension for which we allow materializing dense 2^d-sized data.
pub(crate) const DENSE_D_LIMIT: u32 = 25;

/// A family of d-variate Bernoulli distributions sharing the margin `p = s/t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrechetClass {
    d: u32,
    s: u64,
    t: u64,
    p: Rat,
    q: Rat,
    c: Rat,
    a: Rat,
    a1: u64,
    a2: u64,
}

impl FrechetClass {
    /// Builds the class for dimension `d` and margin `s/t`.
    ///
    /// Requirements: `d >= 2`, `1 <= s < t`, `gcd(s, t) == 1`, and
    /// `s/t <= 1/2`.
    pub fn new(d: u32, s: u64, t: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidClass(format!("d must be at least 2, got {d}")));
        }
        if s == 0 || t == 0 || s >= t {
            return Err(Error::InvalidClass(format!(
                "margin must satisfy 0 < s/t < 1, got {s}/{t}"
            )));
        }
        if gcd(s, t) != 1 {
            return Err(Error::InvalidClass(format!(
                "margin {s}/{t} is not in lowest terms"
            )));
        }
        if 2 * s > t {
            return Err(Error::InvalidClass(format!(
                "margin {s}/{t} exceeds 1/2; model the complemented variables 1 - X_i instead"
            )));
        }
        let p = Rat::from_ratio(s.into(), t.into());
        let q = Rat::one() - &p;
        // c = q/p = (t-s)/s and a = (2s-t)/s = 1 - c; both exact.
        let c = Rat::from_ratio((t - s).into(), s.into());
        let a = Rat::from_ratio((2 * s as i128 - t as i128).into(), (s as i128).into());
        Ok(FrechetClass {
            d,
            s,
            t,
            p,
            q,
            c,
            a,
            a1: t - 2 * s,
            a2: s,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// Margin probability p = s/t.
    pub fn p(&self) -> &Rat {
        &self.p
    }

    /// Complementary probability q = 1 - p.
    pub fn q(&self) -> &Rat {
        &self.q
    }

    /// The odds ratio c = q/p >= 1.
    pub fn c(&self) -> &Rat {
        &self.c
    }

    /// a = (2s - t)/s = 1 - c <= 0; the coefficient that folds the
    /// upper-half masses into the constant polynomial coefficient.
    pub fn a(&self) -> &Rat {
        &self.a
    }

    /// a1 = t - 2s >= 0.
    pub fn a1(&self) -> u64 {
        self.a1
    }

    /// a2 = s.
    pub fn a2(&self) -> u64 {
        self.a2
    }

    /// Expected sum of the d variables, p*d.
    pub fn mean_sum(&self) -> Rat {
        &self.p * &Rat::from_int(self.d as i64)
    }

    /// Number of points of {0,1}^d as a big integer.
    pub fn num_points(&self) -> BigUint {
        BigUint::one() << self.d
    }
}

/// A single point of {0,1}^d, carried as (dimension, offset).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportPoint {
    d: u32,
    offset: BigUint,
}

impl SupportPoint {
    pub fn from_offset(d: u32, offset: BigUint) -> Result<Self> {
        if offset.bits() > d as u64 {
            return Err(Error::InvalidPoint(format!(
                "offset {offset} is out of range for d = {d}"
            )));
        }
        Ok(SupportPoint { d, offset })
    }

    /// Parses a bit string such as `"110"`; the first character is x_1.
    pub fn from_bits(bits: &str) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidPoint("empty bit string".into()));
        }
        let mut offset = BigUint::from(0u32);
        for (i, ch) in bits.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => offset.set_bit(i as u64, true),
                _ => {
                    return Err(Error::InvalidPoint(format!(
                        "bit string `{bits}` contains `{ch}`"
                    )))
                }
            }
        }
        Ok(SupportPoint {
            d: bits.len() as u32,
            offset,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn offset(&self) -> &BigUint {
        &self.offset
    }

    /// 1-based position of the point in the fast-first-coordinate order.
    pub fn index(&self) -> BigUint {
        &self.offset + 1u32
    }

    /// Value of coordinate `i` (1-based).
    pub fn coordinate(&self, i: u32) -> bool {
        assert!(i >= 1 && i <= self.d, "coordinate out of range");
        self.offset.bit((i - 1) as u64)
    }

    /// Number of coordinates equal to one.
    pub fn weight(&self) -> u32 {
        self.offset.count_ones() as u32
    }

    /// The point with every coordinate flipped.
    pub fn complement(&self) -> SupportPoint {
        let mask = (BigUint::one() << self.d) - BigUint::one();
        SupportPoint {
            d: self.d,
            offset: &self.offset ^ mask,
        }
    }

    /// Bit-string form, x_1 first: the d = 4 point {x_2, x_3} prints "0110".
    pub fn bits(&self) -> String {
        (0..self.d)
            .map(|i| if self.offset.bit(i as u64) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for SupportPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits())
    }
}

impl fmt::Debug for SupportPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SupportPoint({})", self.bits())
    }
}

/// A validated probability mass function over {0,1}^d, stored sparsely.
///
/// Only nonzero masses are kept, keyed by point offset. Every constructor
/// validates membership in its class: nonnegative masses, total mass one,
/// and all d univariate margins equal to p.
#[derive(Clone, PartialEq, Eq)]
pub struct Pmf {
    d: u32,
    mass: BTreeMap<BigUint, Rat>,
}

impl Pmf {
    /// Builds a pmf from all 2^d values in point order (first coordinate
    /// fastest). Validation order: length, negativity, total mass, margins.
    pub fn from_dense(class: &FrechetClass, values: &[Rat]) -> Result<Pmf> {
        let want = class.num_points();
        if BigUint::from(values.len()) != want {
            return Err(Error::PmfLength {
                got: values.len(),
                want,
            });
        }
        let mass: BTreeMap<BigUint, Rat> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (BigUint::from(i), v.clone()))
            .collect();
        Self::from_map(class, mass)
    }

    /// Builds a pmf from (point, mass) pairs; unlisted points carry mass 0.
    /// Duplicate points are rejected rather than summed.
    pub fn from_support(class: &FrechetClass, entries: Vec<(SupportPoint, Rat)>) -> Result<Pmf> {
        let mut mass = BTreeMap::new();
        for (point, value) in entries {
            if point.d() != class.d() {
                return Err(Error::InvalidPoint(format!(
                    "point {} has dimension {}, class has {}",
                    point.bits(),
                    point.d(),
                    class.d()
                )));
            }
            if value.is_zero() {
                continue;
            }
            if mass.insert(point.offset().clone(), value).is_some() {
                return Err(Error::InvalidPoint(format!(
                    "point {} listed twice",
                    point.bits()
                )));
            }
        }
        Self::from_map(class, mass)
    }

    /// Parses the sparse text form: one `bits value` pair per line, `#`
    /// comments and blank lines ignored, omitted points carrying mass zero.
    pub fn parse_text(class: &FrechetClass, text: &str) -> Result<Pmf> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(value), None) = (parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::Parse(format!(
                    "line {}: expected `bits value`, got `{line}`",
                    lineno + 1
                )));
            };
            let point = SupportPoint::from_bits(bits)?;
            if point.d() != class.d() {
                return Err(Error::InvalidPoint(format!(
                    "line {}: point `{bits}` has {} coordinates, class has {}",
                    lineno + 1,
                    point.d(),
                    class.d()
                )));
            }
            entries.push((point, value.parse::<Rat>()?));
        }
        Self::from_support(class, entries)
    }

    /// Emits the sparse text form accepted by [`Pmf::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (offset, value) in &self.mass {
            let point = SupportPoint {
                d: self.d,
                offset: offset.clone(),
            };
            out.push_str(&format!("{} {}\n", point.bits(), value));
        }
        out
    }

    fn from_map(class: &FrechetClass, mass: BTreeMap<BigUint, Rat>) -> Result<Pmf> {
        let pmf = Pmf { d: class.d(), mass };
        pmf.validate(class)?;
        Ok(pmf)
    }

    /// Skips validation; callers must have produced the masses from an
    /// already-verified construction.
    pub(crate) fn from_map_unchecked(d: u32, mass: BTreeMap<BigUint, Rat>) -> Pmf {
        Pmf { d, mass }
    }

    /// Re-checks class membership: in-range points, nonnegative masses,
    /// total mass one, every margin equal to p (first failure reported).
    pub fn validate(&self, class: &FrechetClass) -> Result<()> {
        if self.d != class.d() {
            return Err(Error::InvalidPoint(format!(
                "pmf dimension {} does not match class dimension {}",
                self.d,
                class.d()
            )));
        }
        for (offset, value) in &self.mass {
            if offset.bits() > class.d() as u64 {
                return Err(Error::InvalidPoint(format!(
                    "offset {offset} is out of range for d = {}",
                    class.d()
                )));
            }
            if value.is_negative() {
                let point = SupportPoint {
                    d: self.d,
                    offset: offset.clone(),
                };
                return Err(Error::NegativeMass {
                    point: point.bits(),
                    value: value.clone(),
                });
            }
        }
        let sum: Rat = self.mass.values().sum();
        if !sum.is_one() {
            return Err(Error::MassSumNotOne { sum });
        }
        for i in 1..=class.d() {
            let got = self.margin(i);
            if &got != class.p() {
                return Err(Error::MarginMismatch {
                    index: i,
                    got,
                    want: class.p().clone(),
                });
            }
        }
        Ok(())
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Mass at a point; zero when the point is not in the support.
    pub fn get(&self, offset: &BigUint) -> Rat {
        self.mass.get(offset).cloned().unwrap_or_else(Rat::zero)
    }

    /// Support iteration in ascending offset order.
    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, &Rat)> {
        self.mass.iter()
    }

    /// Support as typed points, ascending offset order.
    pub fn support_points(&self) -> impl Iterator<Item = (SupportPoint, &Rat)> {
        let d = self.d;
        self.mass.iter().map(move |(offset, value)| {
            (
                SupportPoint {
                    d,
                    offset: offset.clone(),
                },
                value,
            )
        })
    }

    pub fn support_size(&self) -> usize {
        self.mass.len()
    }

    /// P(X_i = 1) for the 1-based coordinate `i`.
    pub fn margin(&self, i: u32) -> Rat {
        assert!(i >= 1 && i <= self.d, "margin index out of range");
        self.mass
            .iter()
            .filter(|(offset, _)| offset.bit((i - 1) as u64))
            .map(|(_, v)| v)
            .sum()
    }

    /// Dense vector of all 2^d masses; refused at large d.
    pub fn to_dense(&self) -> Result<Vec<Rat>> {
        if self.d > DENSE_D_LIMIT {
            return Err(Error::Unsupported(format!(
                "dense pmf requested at d = {}, limit is {DENSE_D_LIMIT}",
                self.d
            )));
        }
        let mut out = vec![Rat::zero(); 1usize << self.d];
        for (offset, value) in &self.mass {
            let idx: usize = offset.try_into().expect("offset fits by the d guard");
            out[idx] = value.clone();
        }
        Ok(out)
    }

    /// Canonical single-line serialization of the dense vector, used as a
    /// deterministic dedup and ordering key by the enumeration code. Above
    /// the dense materialization limit the key lists "offset:value" pairs
    /// instead; keys are only ever compared within one dimension, so the
    /// two regimes never mix.
    pub fn dense_key(&self) -> String {
        match self.to_dense() {
            Ok(dense) => {
                let parts: Vec<String> = dense.iter().map(Rat::to_string).collect();
                parts.join(" ")
            }
            Err(_) => {
                let parts: Vec<String> =
                    self.iter().map(|(o, v)| format!("{o}:{v}")).collect();
                parts.join(" ")
            }
        }
    }
}

impl fmt::Debug for Pmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pmf(d={}, {{", self.d)?;
        for (i, (offset, value)) in self.mass.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let point = SupportPoint {
                d: self.d,
                offset: offset.clone(),
            };
            write!(f, "{}: {}", point.bits(), value)?;
        }
        write!(f, "}})")
    }
}

/// Margin constraint matrix: d rows, 2^d columns; entry (i, j) is 1 when
/// coordinate i of point j is 0 and -c when it is 1. A pmf f with total mass
/// one satisfies all margins exactly when H f = 0, because row i evaluates
/// to 1 - m_i/p where m_i is the i-th margin.
///
/// Dense 2^d storage, so this is gated to small d; the extremality check
/// below never materializes it.
pub fn build_h(class: &FrechetClass) -> Result<RatMatrix> {
    if class.d() > 14 {
        return Err(Error::Unsupported(format!(
            "dense margin matrix requested at d = {}, limit is 14",
            class.d()
        )));
    }
    let size = 1usize << class.d();
    let mut m = RatMatrix::zeros(class.d() as usize, size);
    for i in 0..class.d() as usize {
        for j in 0..size {
            let v = if (j >> i) & 1 == 0 {
                Rat::one()
            } else {
                -class.c()
            };
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Outcome of the extremality test, with the rank computation that
/// witnessed it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalCertificate {
    pub is_extremal: bool,
    /// Rank of the margin matrix stacked with one coordinate row per
    /// zero-mass point.
    pub rank_found: BigUint,
    /// The rank required for extremality, 2^d - 1.
    pub rank_required: BigUint,
}

/// Tests whether a pmf is an extreme point of its class.
///
/// Conceptually one stacks the margin matrix H with a standard basis row for
/// every zero-mass point and asks for rank 2^d - 1. Those basis rows
/// eliminate all non-support columns, so the stacked rank always equals
/// `(2^d - k) + rank(H restricted to the k support columns)`; the pmf is
/// extremal exactly when the restricted rank is `k - 1`. Only the d x k
/// restricted matrix is ever built, which keeps the test exact and fast at
/// dimensions where 2^d is astronomically large.
pub fn is_extremal(class: &FrechetClass, pmf: &Pmf) -> Result<ExtremalCertificate> {
    if pmf.d() != class.d() {
        return Err(Error::InvalidPoint(format!(
            "pmf dimension {} does not match class dimension {}",
            pmf.d(),
            class.d()
        )));
    }
    let k = pmf.support_size();
    let mut restricted = RatMatrix::zeros(class.d() as usize, k);
    for (col, (offset, _)) in pmf.iter().enumerate() {
        for i in 0..class.d() {
            let v = if offset.bit(i as u64) {
                -class.c()
            } else {
                Rat::one()
            };
            restricted.set(i as usize, col, v);
        }
    }
    let restricted_rank = restricted.rank();
    let rank_found = class.num_points() - BigUint::from(k) + BigUint::from(restricted_rank);
    let rank_required = class.num_points() - BigUint::one();
    Ok(ExtremalCertificate {
        is_extremal: rank_found == rank_required,
        rank_found,
        rank_required,
    })
}
