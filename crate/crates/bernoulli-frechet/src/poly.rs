//! Multilinear polynomials in d-1 variables and the ideal of the class's
//! prescribed points.
//!
//! Joint distributions with margin p map onto multilinear polynomials in
//! x_1, ..., x_{d-1} (the last coordinate is eliminated by the mass
//! constraints). The polynomials that arise are exactly the members of the
//! ideal of the d points {all-ones, c_1, ..., c_{d-1}}, where c_j has -c at
//! coordinate j and 1 elsewhere. This module provides the polynomial type
//! with its text format, the fundamental ideal members, reduction to the
//! quotient basis {1, x_1, ..., x_{d-1}}, and the point-vanishing membership
//! test.
//!
//! Monomials are ordered by their index offset (sum of 2^(i-1) over the
//! variables), which matches the point order with the first variable varying
//! fastest. The comparison walks the variable lists from the back so no big
//! integers are needed even at hundreds of variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigUint;

use crate::class::FrechetClass;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// A squarefree monomial: a strictly increasing list of 1-based variable
/// indices. The empty list is the constant monomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    /// Builds a monomial from variable indices; they are sorted, and
    /// duplicates or zero indices are rejected.
    pub fn new(mut vars: Vec<u32>) -> Result<Monomial> {
        vars.sort_unstable();
        if vars.first() == Some(&0) {
            return Err(Error::InvalidIndexSet(
                "variable indices are 1-based; got 0".into(),
            ));
        }
        if vars.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidIndexSet(format!(
                "duplicate variable in monomial {vars:?}"
            )));
        }
        Ok(Monomial(vars))
    }

    pub fn constant() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn vars(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, var: u32) -> bool {
        self.0.binary_search(&var).is_ok()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    /// The 0-based offset of this monomial in the fast-first-variable order:
    /// the sum of 2^(i-1) over its variables.
    pub fn index_offset(&self) -> BigUint {
        let mut off = BigUint::from(0u32);
        for &v in &self.0 {
            off.set_bit((v - 1) as u64, true);
        }
        off
    }

    /// Inverse of [`Monomial::index_offset`].
    pub fn from_offset(offset: &BigUint) -> Monomial {
        let mut vars = Vec::new();
        for i in 0..offset.bits() {
            if offset.bit(i) {
                vars.push(i as u32 + 1);
            }
        }
        Monomial(vars)
    }

    /// Parses the compact CLI form `x1x2x10` (concatenated variables, no
    /// separators). Variables may appear in any order; duplicates rejected.
    pub fn parse_compact(text: &str) -> Result<Monomial> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        let mut vars = Vec::new();
        for chunk in text.split('x') {
            if chunk.is_empty() {
                continue;
            }
            let v: u32 = chunk
                .parse()
                .map_err(|_| Error::Parse(format!("bad monomial `{text}`")))?;
            vars.push(v);
        }
        if vars.is_empty() || !text.starts_with('x') || text.split('x').next() != Some("") {
            return Err(Error::Parse(format!("bad monomial `{text}`")));
        }
        Monomial::new(vars)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Orders by index offset without materializing it: compare variable
    /// lists from the largest variable down; the first difference decides,
    /// and a monomial that runs out of variables is the smaller one.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|v| format!("x{v}")).collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

/// A multilinear polynomial with exact rational coefficients in a fixed
/// number of variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    num_vars: u32,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultilinearPoly {
    pub fn zero(num_vars: u32) -> Self {
        MultilinearPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: u32, value: Rat) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::constant(), value);
        p
    }

    pub fn from_terms(num_vars: u32, terms: Vec<(Monomial, Rat)>) -> Result<Self> {
        let mut p = Self::zero(num_vars);
        for (m, c) in terms {
            if m.max_var() > num_vars {
                return Err(Error::InvalidIndexSet(format!(
                    "monomial {m} uses a variable beyond x{num_vars}"
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Adds `value * monomial`, merging with any existing coefficient.
    /// Internal callers guarantee the variable range.
    pub(crate) fn add_term(&mut self, monomial: Monomial, value: Rat) {
        debug_assert!(monomial.max_var() <= self.num_vars);
        if value.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order (constant first when present).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::constant())
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: &Rat) -> MultilinearPoly {
        if factor.is_zero() {
            return Self::zero(self.num_vars);
        }
        MultilinearPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn neg(&self) -> MultilinearPoly {
        self.scale(&-Rat::one())
    }

    pub fn add(&self, other: &MultilinearPoly) -> MultilinearPoly {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultilinearPoly) -> MultilinearPoly {
        self.add(&other.neg())
    }

    /// Evaluates at a full assignment of the variables.
    pub fn eval(&self, values: &[Rat]) -> Result<Rat> {
        if values.len() != self.num_vars as usize {
            return Err(Error::DimensionMismatch {
                got: values.len() as u32,
                want: self.num_vars,
            });
        }
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &v in m.vars() {
                let x = &values[(v - 1) as usize];
                if x.is_zero() {
                    term = Rat::zero();
                    break;
                }
                if !x.is_one() {
                    term *= x;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Parses the textual form: signed terms of `coeff*xi*xj...` factors.
    /// Term order is free, coefficients may be omitted (`-x1*x2`), and
    /// repeated monomials are summed. Repeated variables within one term are
    /// rejected (the polynomials here are multilinear by construction).
    pub fn parse(text: &str, num_vars: u32) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut poly = Self::zero(num_vars);
        let bytes = compact.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = Rat::one();
            // Consume leading signs of this term.
            while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                pos += 1;
            }
            let term = &compact[start..pos];
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{text}`")));
            }
            let (coeff, monomial) = Self::parse_term(term, num_vars)?;
            poly.add_term(monomial, sign * coeff);
        }
        Ok(poly)
    }

    fn parse_term(term: &str, num_vars: u32) -> Result<(Rat, Monomial)> {
        let mut coeff = Rat::one();
        let mut vars: Vec<u32> = Vec::new();
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{term}`")));
            }
            if let Some(idx) = factor.strip_prefix('x') {
                let v: u32 = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable `{factor}`")))?;
                if v == 0 || v > num_vars {
                    return Err(Error::Parse(format!(
                        "variable `{factor}` out of range 1..={num_vars}"
                    )));
                }
                if vars.contains(&v) {
                    return Err(Error::Parse(format!(
                        "term `{term}` repeats x{v}; only multilinear polynomials are supported"
                    )));
                }
                vars.push(v);
            } else {
                coeff *= &factor.parse::<Rat>()?;
            }
        }
        Ok((coeff, Monomial::new(vars)?))
    }
}

impl fmt::Display for MultilinearPoly {
    /// Canonical form: non-constant terms in ascending monomial order, the
    /// constant term last, every coefficient written explicitly:
    /// `1*x1*x2 + 1*x1*x3 - 2*x1*x2*x3 - 1`. The zero polynomial prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let constant = Monomial::constant();
        let mut ordered: Vec<(&Monomial, &Rat)> = self
            .terms
            .iter()
            .filter(|(m, _)| !m.is_constant())
            .collect();
        if let Some(c) = self.terms.get(&constant) {
            ordered.push((&constant, c));
        }
        for (i, (m, c)) in ordered.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.abs();
            if m.is_constant() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilinearPoly({self})")
    }
}

/// The fundamental ideal member on an index set of size n >= 2:
/// the product of the variables minus their sum plus (n - 1).
///
/// Size-0 and size-1 sets are rejected: the same formula collapses to a
/// constant or to the zero polynomial and generates nothing.
pub fn fundamental(num_vars: u32, indices: &[u32]) -> Result<MultilinearPoly> {
    let monomial = Monomial::new(indices.to_vec())?;
    if monomial.degree() < 2 {
        return Err(Error::InvalidIndexSet(format!(
            "fundamental polynomials need at least two indices, got {:?}",
            indices
        )));
    }
    if monomial.max_var() > num_vars {
        return Err(Error::InvalidIndexSet(format!(
            "index {} exceeds the variable count {num_vars}",
            monomial.max_var()
        )));
    }
    let n = monomial.degree();
    let mut poly = MultilinearPoly::zero(num_vars);
    poly.add_term(monomial.clone(), Rat::one());
    for &v in monomial.vars() {
        poly.add_term(Monomial(vec![v]), -Rat::one());
    }
    poly.add_term(Monomial::constant(), Rat::from_int(n as i64 - 1));
    Ok(poly)
}

/// Reduces a polynomial modulo the pairwise generators: every monomial of
/// degree n >= 2 is replaced by the sum of its variables minus (n - 1).
/// The result lives in the span of {1, x_1, ..., x_{d-1}} and agrees with
/// the input on every prescribed point. Equivalently, subtracting the
/// remainder of the degree->=2 part from a polynomial tells you whether it
/// sits in the ideal.
pub fn remainder(poly: &MultilinearPoly) -> MultilinearPoly {
    let mut out = MultilinearPoly::zero(poly.num_vars());
    for (m, c) in poly.terms() {
        if m.degree() < 2 {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        for &v in m.vars() {
            out.add_term(Monomial(vec![v]), c.clone());
        }
        out.add_term(
            Monomial::constant(),
            c * &Rat::from_int(-((m.degree() - 1) as i64)),
        );
    }
    out
}

/// The d points every class polynomial must vanish on: the all-ones point
/// and, for each variable j, the point with -c at coordinate j and 1
/// elsewhere.
#[derive(Clone, Debug)]
pub struct VanishingPoints {
    pub points: Vec<Vec<Rat>>,
}

impl VanishingPoints {
    pub fn new(class: &FrechetClass) -> Self {
        let n = (class.d() - 1) as usize;
        let mut points = vec![vec![Rat::one(); n]];
        for j in 0..n {
            let mut pt = vec![Rat::one(); n];
            pt[j] = -class.c();
            points.push(pt);
        }
        VanishingPoints { points }
    }
}

/// Evaluates the polynomial at each prescribed point, exploiting that the
/// points are all-ones except for at most one -c coordinate. Cost is
/// O(terms * d) regardless of dimension.
pub fn eval_on_vanishing_points(poly: &MultilinearPoly, class: &FrechetClass) -> Result<Vec<Rat>> {
    if poly.num_vars() != class.d() - 1 {
        return Err(Error::DimensionMismatch {
            got: poly.num_vars(),
            want: class.d() - 1,
        });
    }
    let coeff_sum: Rat = poly.terms().map(|(_, c)| c).sum();
    let minus_c = -class.c();
    let mut values = vec![coeff_sum];
    for j in 1..class.d() {
        // Terms containing x_j pick up a factor -c; all others stay as is.
        let mut v = Rat::zero();
        for (m, c) in poly.terms() {
            if m.contains(j) {
                v += c * &minus_c;
            } else {
                v += c;
            }
        }
        values.push(v);
    }
    Ok(values)
}

/// True exactly when the polynomial vanishes on all d prescribed points.
pub fn ideal_membership(poly: &MultilinearPoly, class: &FrechetClass) -> Result<bool> {
    Ok(eval_on_vanishing_points(poly, class)?
        .iter()
        .all(Rat::is_zero))
}

/// A reduced Groebner-style generator of the ideal, in a wrapper that can
/// carry the one squared term the multilinear type cannot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealGenerator {
    /// (x_i - 1)(x_i + c) = x_i^2 + (c-1) x_i - c.
    Quadratic { var: u32 },
    /// 1 - x_i - x_k + x_i x_k for i < k.
    Pair { i: u32, k: u32 },
}

impl IdealGenerator {
    pub fn display(&self, class: &FrechetClass) -> String {
        match self {
            IdealGenerator::Quadratic { var } => {
                format!("(x{var} - 1)*(x{var} + {})", class.c())
            }
            IdealGenerator::Pair { i, k } => {
                format!("1 - x{i} - x{k} + x{i}*x{k}")
            }
        }
    }

    /// Evaluates at a full point of the (d-1)-dimensional ambient space.
    pub fn eval(&self, class: &FrechetClass, point: &[Rat]) -> Result<Rat> {
        if point.len() != (class.d() - 1) as usize {
            return Err(Error::DimensionMismatch {
                got: point.len() as u32,
                want: class.d() - 1,
            });
        }
        Ok(match self {
            IdealGenerator::Quadratic { var } => {
                let x = &point[(var - 1) as usize];
                (x - &Rat::one()) * (x + class.c())
            }
            IdealGenerator::Pair { i, k } => {
                let xi = &point[(i - 1) as usize];
                let xk = &point[(k - 1) as usize];
                Rat::one() - xi - xk + &(xi * xk)
            }
        })
    }
}

/// The reduced generating set: one quadratic per variable and one pair
/// generator per variable pair, (d-1) + C(d-1, 2) generators in total.
pub fn groebner_generators(class: &FrechetClass) -> Vec<IdealGenerator> {
    let n = class.d() - 1;
    let mut gens = Vec::new();
    for var in 1..=n {
        gens.push(IdealGenerator::Quadratic { var });
    }
    for i in 1..=n {
        for k in (i + 1)..=n {
            gens.push(IdealGenerator::Pair { i, k });
        }
    }
    gens
}

/// Basis of the quotient by the ideal of generators: the constant and the
/// bare variables.
pub fn quotient_basis(class: &FrechetClass) -> Vec<Monomial> {
    let mut basis = vec![Monomial::constant()];
    for v in 1..=(class.d() - 1) {
        basis.push(Monomial(vec![v]));
    }
    basis
}
