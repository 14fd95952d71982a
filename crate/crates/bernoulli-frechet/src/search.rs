//! Targeted vertex search driven by the remainder matrix B.
//!
//! Every degree >= 2 monomial reduces, modulo the class ideal, to a linear
//! polynomial; B tabulates those remainders column by column (negated
//! constant in row 1, variable indicators below). Choosing monomial columns
//! J and rows K of variables whose remainder contribution must cancel, the
//! kernel of the K x J submatrix yields coefficient vectors a whose
//! fundamental-polynomial combinations P = sum a_j F_j lie in the ideal with
//! the K-linear parts eliminated; the canonical preimage of each P is a
//! candidate vertex, certified by the rank test.
//!
//! The module also exposes the direct corner cases (the canonical preimages
//! of F and -F for a single index set), a bounded exploration of the
//! pairing-map kernel that discovers vertices adjacent to a given base pmf,
//! and a deterministic, resumable stream of (J, K) specifications for
//! exhaustive sweeps.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::{Integer, One, Signed, Zero};

use crate::class::{is_extremal, ExtremalCertificate, FrechetClass, Pmf};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{fundamental, Monomial, MultilinearPoly};
use crate::rat::Rat;
use crate::transform::{kernel_basis, pmf_to_poly, type0_pmf, SparseVec};

/// Remainder matrix B: one column per degree >= 2 monomial in d-1
/// variables, listing the negated remainder constant (row 1) and the
/// monomial's variable indicators (rows 2..=d).
pub struct RemainderMatrixB {
    d: u32,
    monomials: Vec<Monomial>,
    matrix: RatMatrix,
}

impl RemainderMatrixB {
    /// Monomials in ascending order; column j of the matrix describes
    /// `monomials()[j]`.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn num_columns(&self) -> usize {
        self.monomials.len()
    }

    /// Column index of a monomial, if it has degree >= 2 and fits the class.
    pub fn column_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.binary_search(m).ok()
    }
}

/// Builds the d x (2^{d-1} - d) remainder matrix. Dense in the number of
/// monomials, hence gated; needs d >= 3 for any degree-2 monomial to exist.
pub fn build_b(class: &FrechetClass) -> Result<RemainderMatrixB> {
    let d = class.d();
    if d < 3 {
        return Err(Error::Unsupported(format!(
            "the remainder matrix needs d >= 3 (got d = {d}); at d = 2 there are no degree-2 monomials"
        )));
    }
    if d > 16 {
        return Err(Error::Unsupported(format!(
            "the remainder matrix is dense in 2^(d-1) monomials; d = {d} exceeds the limit of 16"
        )));
    }
    let half: u64 = 1 << (d - 1);
    let mut monomials = Vec::with_capacity((half as usize) - d as usize);
    for offset in 1..half {
        if offset.count_ones() >= 2 {
            monomials.push(Monomial::from_offset(&BigUint::from(offset)));
        }
    }
    let mut matrix = RatMatrix::zeros(d as usize, monomials.len());
    for (j, m) in monomials.iter().enumerate() {
        matrix.set(0, j, -Rat::from_int(m.degree() as i64 - 1));
        for &v in m.vars() {
            matrix.set(v as usize, j, Rat::one());
        }
    }
    Ok(RemainderMatrixB { d, monomials, matrix })
}

/// A validated (J, K) choice: monomial columns J and annihilated variable
/// rows K (2-based, row k standing for the variable x_{k-1}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    j: Vec<usize>,
    k: Vec<u32>,
}

impl SearchSpec {
    /// Validates column indices against the matrix, row labels against
    /// 2..=d, and the size bound #J <= #K + 2.
    pub fn new(b: &RemainderMatrixB, j: Vec<usize>, k: Vec<u32>) -> Result<Self> {
        let mut j = j;
        let mut k = k;
        j.sort_unstable();
        k.sort_unstable();
        if j.is_empty() {
            return Err(Error::InvalidSearchSpec("J must be nonempty".into()));
        }
        if j.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSearchSpec("J has repeated columns".into()));
        }
        if let Some(&bad) = j.iter().find(|&&c| c >= b.num_columns()) {
            return Err(Error::InvalidSearchSpec(format!(
                "column {bad} out of range; the matrix has {} columns",
                b.num_columns()
            )));
        }
        if k.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSearchSpec("K has repeated rows".into()));
        }
        if let Some(&bad) = k.iter().find(|&&r| r < 2 || r > b.d) {
            return Err(Error::InvalidSearchSpec(format!(
                "row {bad} out of range; K must lie in 2..={} (the constant row is never annihilated)",
                b.d
            )));
        }
        if j.len() > k.len() + 2 {
            return Err(Error::InvalidSearchSpec(format!(
                "#J = {} exceeds #K + 2 = {}",
                j.len(),
                k.len() + 2
            )));
        }
        Ok(SearchSpec { j, k })
    }

    /// Convenience constructor taking monomials instead of column indices.
    pub fn from_monomials(b: &RemainderMatrixB, monomials: &[Monomial], k: Vec<u32>) -> Result<Self> {
        let mut j = Vec::with_capacity(monomials.len());
        for m in monomials {
            let col = b.column_of(m).ok_or_else(|| {
                Error::InvalidSearchSpec(format!(
                    "monomial {m} is not a degree >= 2 monomial of this class"
                ))
            })?;
            j.push(col);
        }
        Self::new(b, j, k)
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    /// Stable textual key, used to order and label sweep output.
    pub fn key(&self, b: &RemainderMatrixB) -> String {
        let js: Vec<String> = self.j.iter().map(|&c| b.monomials[c].to_string()).collect();
        let ks: Vec<String> = self.k.iter().map(|r| r.to_string()).collect();
        format!("J={{{}}} K={{{}}}", js.join(","), ks.join(","))
    }
}

impl fmt::Display for SearchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let js: Vec<String> = self.j.iter().map(|c| c.to_string()).collect();
        let ks: Vec<String> = self.k.iter().map(|r| r.to_string()).collect();
        write!(f, "J=[{}] K=[{}]", js.join(","), ks.join(","))
    }
}

/// One candidate produced by a search construction.
pub struct SearchResult {
    /// Kernel coefficients over the spec's J columns (empty for the
    /// constructions that do not solve a kernel system).
    pub coefficients: Vec<Rat>,
    pub polynomial: MultilinearPoly,
    pub pmf: Pmf,
    pub certificate: ExtremalCertificate,
}

/// Runs one (J, K) search: extracts the kernel of the K x J submatrix,
/// normalizes each generator to coprime integers with a positive leading
/// entry, assembles P = sum a_j F_j, and certifies the canonical preimage.
/// Non-extremal candidates are returned with their failing certificate
/// rather than dropped; an empty kernel yields an empty list.
pub fn search(class: &FrechetClass, b: &RemainderMatrixB, spec: &SearchSpec) -> Result<Vec<SearchResult>> {
    let mut sub = RatMatrix::zeros(spec.k.len(), spec.j.len());
    for (ri, &k) in spec.k.iter().enumerate() {
        for (ci, &col) in spec.j.iter().enumerate() {
            sub.set(ri, ci, b.matrix.at((k - 1) as usize, col).clone());
        }
    }
    let mut out = Vec::new();
    for generator in sub.null_space() {
        let coeffs = canonical_integer_vector(&generator);
        let mut poly = MultilinearPoly::zero(class.d() - 1);
        for (&col, a) in spec.j.iter().zip(&coeffs) {
            if a.is_zero() {
                continue;
            }
            let f = fundamental(class.d() - 1, b.monomials[col].vars())?;
            poly = poly.add(&f.scale(a));
        }
        if poly.is_zero() {
            continue;
        }
        let pmf = type0_pmf(class, &poly)?;
        let certificate = is_extremal(class, &pmf)?;
        out.push(SearchResult {
            coefficients: coeffs,
            polynomial: poly,
            pmf,
            certificate,
        });
    }
    Ok(out)
}

/// Canonical preimage of the fundamental polynomial F on an index set,
/// with its certificate. Always certifies extremal.
pub fn fundamental_pmf(class: &FrechetClass, indices: &[u32]) -> Result<SearchResult> {
    signed_fundamental(class, indices, false)
}

/// Canonical preimage of -F on an index set, with its certificate. Always
/// certifies extremal, and generally differs from the preimage of +F.
pub fn negated_fundamental_pmf(class: &FrechetClass, indices: &[u32]) -> Result<SearchResult> {
    signed_fundamental(class, indices, true)
}

fn signed_fundamental(class: &FrechetClass, indices: &[u32], negate: bool) -> Result<SearchResult> {
    let f = fundamental(class.d() - 1, indices)?;
    let (poly, coeff) = if negate {
        (f.neg(), -Rat::one())
    } else {
        (f, Rat::one())
    };
    let pmf = type0_pmf(class, &poly)?;
    let certificate = is_extremal(class, &pmf)?;
    Ok(SearchResult {
        coefficients: vec![coeff],
        polynomial: poly,
        pmf,
        certificate,
    })
}

/// Explores the pairing-map kernel around a base pmf: walks the rays
/// base + t * e for e ranging over negated kernel basis vectors and basis
/// differences, clips each ray to the nonnegative cone, renormalizes the
/// endpoint, and keeps the certified extremal results (the kernel basis
/// vectors themselves, which are valid pmfs, are included as candidates).
/// Bounded exploration: with a type-0 base this surfaces vertices that pure
/// polynomial searches cannot reach, but it makes no completeness claim.
pub fn type1k_vertex_search(class: &FrechetClass, base: &Pmf) -> Result<Vec<SearchResult>> {
    if class.d() > 10 {
        return Err(Error::Unsupported(format!(
            "kernel exploration enumerates 2^(d-1) basis vectors and their differences; d = {} exceeds the limit of 10",
            class.d()
        )));
    }
    base.validate(class)?;
    let basis = kernel_basis(class)?;
    let base_mass: BTreeMap<BigUint, Rat> =
        base.iter().map(|(o, v)| (o.clone(), v.clone())).collect();

    let mut candidates: Vec<BTreeMap<BigUint, Rat>> = Vec::new();
    candidates.push(base_mass.clone());
    for v in &basis {
        candidates.push(v.iter().cloned().collect());
    }
    for v in &basis {
        let neg: SparseVec = v.iter().map(|(o, x)| (o.clone(), -x)).collect();
        if let Some(c) = clip_ray(&base_mass, &neg) {
            candidates.push(c);
        }
    }
    for (i, vi) in basis.iter().enumerate() {
        for (j, vj) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let diff = sparse_sub(vi, vj);
            if let Some(c) = clip_ray(&base_mass, &diff) {
                candidates.push(c);
            }
        }
    }

    let mut seen: BTreeMap<String, SearchResult> = BTreeMap::new();
    for mass in candidates {
        let total: Rat = mass.values().sum();
        let Some(inv) = total.recip() else { continue };
        if total.is_negative() {
            continue;
        }
        let normalized: BTreeMap<BigUint, Rat> = mass
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(o, v)| (o, &v * &inv))
            .collect();
        let pmf = Pmf::from_map_unchecked(class.d(), normalized);
        if pmf.support_size() as u64 > class.d() as u64 + 1 {
            continue;
        }
        pmf.validate(class).map_err(|e| {
            Error::Internal(format!("kernel exploration produced an invalid pmf: {e}"))
        })?;
        let key = pmf.dense_key();
        if seen.contains_key(&key) {
            continue;
        }
        let certificate = is_extremal(class, &pmf)?;
        if !certificate.is_extremal {
            continue;
        }
        let polynomial = pmf_to_poly(class, &pmf)?;
        seen.insert(
            key,
            SearchResult {
                coefficients: Vec::new(),
                polynomial,
                pmf,
                certificate,
            },
        );
    }
    Ok(seen.into_values().collect())
}

/// base + t * dir for the largest t >= 0 keeping every coordinate
/// nonnegative; None when the ray is unbounded (no negative direction
/// entries) or the endpoint is just the base (t = 0).
fn clip_ray(
    base: &BTreeMap<BigUint, Rat>,
    dir: &SparseVec,
) -> Option<BTreeMap<BigUint, Rat>> {
    let mut t_max: Option<Rat> = None;
    for (offset, v) in dir {
        if !v.is_negative() {
            continue;
        }
        let available = base.get(offset).cloned().unwrap_or_else(Rat::zero);
        let bound = -(&available / v);
        t_max = Some(match t_max {
            Some(cur) => cur.min(bound),
            None => bound,
        });
    }
    let t = t_max?;
    if t.is_zero() {
        return None;
    }
    let mut out = base.clone();
    for (offset, v) in dir {
        let entry = out.entry(offset.clone()).or_insert_with(Rat::zero);
        *entry += v * &t;
    }
    out.retain(|_, v| !v.is_zero());
    Some(out)
}

fn sparse_sub(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut m: BTreeMap<BigUint, Rat> = a.iter().cloned().collect();
    for (o, v) in b {
        let entry = m.entry(o.clone()).or_insert_with(Rat::zero);
        *entry -= v;
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Scales a rational vector to coprime integers with a positive leading
/// nonzero entry, the reproducible representative of its ray.
fn canonical_integer_vector(v: &[Rat]) -> Vec<Rat> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &l / x.denom()).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let mut scaled: Vec<BigInt> = ints.into_iter().map(|i| i / &g).collect();
    if scaled.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        for x in &mut scaled {
            *x = -x.clone();
        }
    }
    scaled.into_iter().map(Rat::from_bigint).collect()
}

/// Deterministic stream of every valid (J, K) pair with #J <= max_j,
/// ordered by J size, then J columns lexicographically, then K as an
/// ascending bitmask over {2,…,d}. Pairs are numbered from 0 in stream
/// order; `resume_from` skips everything below that cursor so interrupted
/// sweeps can restart where they stopped.
pub fn sweep_specs(
    b: &RemainderMatrixB,
    max_j: usize,
    resume_from: u64,
) -> impl Iterator<Item = (u64, SearchSpec)> {
    let cols = b.num_columns();
    let d = b.d;
    let max_j = max_j.min(cols);
    let k_masks: u64 = 1 << (d - 1);
    let mut cursor: u64 = 0;
    let mut items: Vec<(u64, SearchSpec)> = Vec::new();
    for size in 1..=max_j {
        for j in combinations(cols, size) {
            for mask in 0..k_masks {
                let k: Vec<u32> = (2..=d).filter(|&r| mask >> (r - 2) & 1 == 1).collect();
                if size > k.len() + 2 {
                    continue;
                }
                if cursor >= resume_from {
                    items.push((cursor, SearchSpec { j: j.clone(), k }));
                }
                cursor += 1;
            }
        }
    }
    items.into_iter()
}

/// All size-k subsets of {0,…,n-1} in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
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
