//! The linear map from pmfs to multilinear polynomials, its kernel, and the
//! canonical (type-0) preimage construction.
//!
//! Identifying complementary points pairwise sends a pmf f over {0,1}^d to a
//! polynomial in d-1 variables whose coefficient on the monomial with index
//! offset j (j >= 1) is `f_{j+1} - f_{2^d - j}`, and whose constant
//! coefficient folds in the upper-half mass with weight a = (2s-t)/s. Valid
//! pmfs land in the ideal of the class's prescribed points; the kernel of
//! the map has dimension 2^{d-1} and an explicit sparse basis.
//!
//! Each nonzero ideal member has one canonical preimage, its type-0 pmf:
//! positive coefficients put mass on their own monomial's point, negative
//! coefficients on the complementary point, and the constant balance c_0
//! decides how much lands on the all-zeros or all-ones corner. Everything
//! here is sparse, so the constructions stay exact and cheap at dimensions
//! in the hundreds.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigUint;
use num::One;

use crate::class::{FrechetClass, Pmf};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{ideal_membership, Monomial, MultilinearPoly};
use crate::rat::Rat;

/// A sparse vector over the 2^d point space: (offset, value) pairs.
pub type SparseVec = Vec<(BigUint, Rat)>;

/// Classification of a pmf relative to the polynomial map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmfType {
    /// The canonical preimage of its own polynomial image.
    Type0,
    /// A kernel member: the polynomial image is zero.
    Type1K,
    /// Neither: a nonzero image whose canonical preimage is a different pmf.
    Type1,
}

impl fmt::Display for PmfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PmfType::Type0 => "Type0",
            PmfType::Type1K => "Type1K",
            PmfType::Type1 => "Type1",
        })
    }
}

/// Dense pairing matrix Q = (I | J + A): 2^{d-1} rows, 2^d columns, where J
/// is minus the anti-diagonal identity and A adds a = (2s-t)/s across the
/// whole first row of the right block. Q f lists the polynomial coefficients
/// of f in monomial order. Dense 2^d storage, so gated to small d; use
/// [`mass_to_coeffs`] for real work.
pub fn build_q(class: &FrechetClass) -> Result<RatMatrix> {
    if class.d() > 10 {
        return Err(Error::Unsupported(format!(
            "dense pairing matrix requested at d = {}, limit is 10",
            class.d()
        )));
    }
    let half = 1usize << (class.d() - 1);
    let mut m = RatMatrix::zeros(half, 2 * half);
    for i in 0..half {
        m.set(i, i, Rat::one());
        // Anti-diagonal of the right block: 1-based row i+1 pairs with
        // 1-based column 2^d - i.
        let j = 2 * half - 1 - i;
        m.set(i, j, -Rat::one());
    }
    for j in half..2 * half {
        let v = m.at(0, j) + class.a();
        m.set(0, j, v);
    }
    Ok(m)
}

/// Applies the pairing map to an arbitrary sparse mass vector, returning the
/// nonzero polynomial coefficients keyed by monomial index offset
/// (0 = constant). This is Q.v computed without materializing Q.
pub fn mass_to_coeffs(class: &FrechetClass, mass: &BTreeMap<BigUint, Rat>) -> BTreeMap<BigUint, Rat> {
    let top = class.num_points() - BigUint::one();
    let mut coeffs: BTreeMap<BigUint, Rat> = BTreeMap::new();
    let mut add = |key: BigUint, v: Rat| {
        if v.is_zero() {
            return;
        }
        let entry = coeffs.entry(key).or_insert_with(Rat::zero);
        *entry += v;
    };
    for (offset, value) in mass {
        if offset.bit((class.d() - 1) as u64) {
            // Upper-half point: subtract at the complementary monomial and
            // feed the constant row's a-weighted total.
            add(&top ^ offset, -value);
            add(BigUint::from(0u32), class.a() * value);
        } else {
            add(offset.clone(), value.clone());
        }
    }
    coeffs.retain(|_, v| !v.is_zero());
    coeffs
}

/// Polynomial image of a pmf: a multilinear polynomial in d-1 variables.
/// For valid pmfs the image always lies in the ideal of the class points.
pub fn pmf_to_poly(class: &FrechetClass, pmf: &Pmf) -> Result<MultilinearPoly> {
    if pmf.d() != class.d() {
        return Err(Error::DimensionMismatch {
            got: pmf.d(),
            want: class.d(),
        });
    }
    let mass: BTreeMap<BigUint, Rat> =
        pmf.iter().map(|(o, v)| (o.clone(), v.clone())).collect();
    let coeffs = mass_to_coeffs(class, &mass);
    let terms = coeffs
        .into_iter()
        .map(|(off, c)| (Monomial::from_offset(&off), c))
        .collect();
    MultilinearPoly::from_terms(class.d() - 1, terms)
}

/// Unnormalized canonical preimage masses of an ideal member. The caller
/// divides by the total; [`type0_pmf`] does exactly that.
///
/// Construction: a positive coefficient on a non-constant monomial puts that
/// much mass on the monomial's own point (last coordinate 0); a negative
/// coefficient puts the absolute value on the complementary point. The
/// residual constant c_0 = a_constant + a * (sum of negative coefficients)
/// lands on the all-zeros point when positive and, divided by c, on the
/// all-ones point when negative.
pub fn type0_masses(class: &FrechetClass, poly: &MultilinearPoly) -> Result<BTreeMap<BigUint, Rat>> {
    if poly.num_vars() != class.d() - 1 {
        return Err(Error::DimensionMismatch {
            got: poly.num_vars(),
            want: class.d() - 1,
        });
    }
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !ideal_membership(poly, class)? {
        return Err(Error::NotInIdeal(format!(
            "`{poly}` does not vanish on all prescribed points of d={}, p={}/{}",
            class.d(),
            class.s(),
            class.t()
        )));
    }
    let top = class.num_points() - BigUint::one();
    let mut mass: BTreeMap<BigUint, Rat> = BTreeMap::new();
    let mut negative_sum = Rat::zero();
    for (m, coeff) in poly.terms() {
        if m.is_constant() {
            continue;
        }
        let off = m.index_offset();
        if coeff.is_positive() {
            mass.insert(off, coeff.clone());
        } else {
            negative_sum += coeff;
            mass.insert(&top ^ &off, -coeff);
        }
    }
    let c0 = poly.constant_term() + &(class.a() * &negative_sum);
    if c0.is_positive() {
        mass.insert(BigUint::from(0u32), c0);
    } else if c0.is_negative() {
        mass.insert(top, -c0 / class.c());
    }
    if mass.is_empty() {
        // Unreachable for ideal members: a nonzero member has a nonzero
        // non-constant coefficient, which always deposits mass.
        return Err(Error::Internal(
            "type-0 construction produced an empty mass vector".into(),
        ));
    }
    Ok(mass)
}

/// The canonical preimage of a nonzero ideal member: type-0 masses
/// normalized to total mass one. The result is always a valid member of the
/// class; that is re-checked and a violation reported as an internal error.
pub fn type0_pmf(class: &FrechetClass, poly: &MultilinearPoly) -> Result<Pmf> {
    let mass = type0_masses(class, poly)?;
    let total: Rat = mass.values().sum();
    let inv = total
        .recip()
        .ok_or_else(|| Error::Internal("type-0 masses sum to zero".into()))?;
    let normalized: BTreeMap<BigUint, Rat> =
        mass.into_iter().map(|(o, v)| (o, &v * &inv)).collect();
    let pmf = Pmf::from_map_unchecked(class.d(), normalized);
    pmf.validate(class).map_err(|e| {
        Error::Internal(format!("type-0 preimage failed class validation: {e}"))
    })?;
    Ok(pmf)
}

/// The j-th kernel basis vector (1-based j in 1..=2^{d-1}), sparsely.
///
/// v_1 carries q at the all-zeros point and p at the all-ones point; for
/// j >= 2, v_j carries 1-2p at the all-zeros point and p at the points with
/// offsets j-1 and 2^d-j. All are valid pmfs in their own right, and the
/// pairing map annihilates each one.
pub fn kernel_basis_vector(class: &FrechetClass, j: &BigUint) -> Result<SparseVec> {
    let half = class.num_points() >> 1;
    if j < &BigUint::one() || j > &half {
        return Err(Error::InvalidIndexSet(format!(
            "kernel index {j} outside 1..={half}"
        )));
    }
    let top = class.num_points() - BigUint::one();
    if j.is_one() {
        return Ok(vec![
            (BigUint::from(0u32), class.q().clone()),
            (top, class.p().clone()),
        ]);
    }
    let mut v: SparseVec = Vec::new();
    let one_minus_2p = class.q() - class.p();
    if !one_minus_2p.is_zero() {
        v.push((BigUint::from(0u32), one_minus_2p));
    }
    let low = j - BigUint::one();
    let high = &top - &low;
    v.push((low, class.p().clone()));
    v.push((high, class.p().clone()));
    Ok(v)
}

/// All 2^{d-1} kernel basis vectors. Exponentially many, hence gated.
pub fn kernel_basis(class: &FrechetClass) -> Result<Vec<SparseVec>> {
    if class.d() > 20 {
        return Err(Error::Unsupported(format!(
            "full kernel basis requested at d = {}, limit is 20",
            class.d()
        )));
    }
    let half: u64 = 1 << (class.d() - 1);
    (1..=half)
        .map(|j| kernel_basis_vector(class, &BigUint::from(j)))
        .collect()
}

/// Dense kernel basis for small d, aligned with [`build_q`] columns.
pub fn kernel_basis_dense(class: &FrechetClass) -> Result<Vec<Vec<Rat>>> {
    if class.d() > 10 {
        return Err(Error::Unsupported(format!(
            "dense kernel basis requested at d = {}, limit is 10",
            class.d()
        )));
    }
    let size = 1usize << class.d();
    kernel_basis(class)?
        .into_iter()
        .map(|sparse| {
            let mut dense = vec![Rat::zero(); size];
            for (off, v) in sparse {
                let idx: usize = (&off).try_into().expect("offset fits at small d");
                dense[idx] = v;
            }
            Ok(dense)
        })
        .collect()
}

/// Classifies a pmf as Type0 (canonical preimage of its image), Type1K
/// (kernel member, zero image), or Type1 (everything else).
pub fn classify(class: &FrechetClass, pmf: &Pmf) -> Result<PmfType> {
    let poly = pmf_to_poly(class, pmf)?;
    if poly.is_zero() {
        return Ok(PmfType::Type1K);
    }
    let canonical = type0_pmf(class, &poly)?;
    if &canonical == pmf {
        Ok(PmfType::Type0)
    } else {
        Ok(PmfType::Type1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::fundamental;

    fn class_d3_p25() -> FrechetClass {
        FrechetClass::new(3, 2, 5).unwrap()
    }

    fn pmf(class: &FrechetClass, values: &[&str]) -> Pmf {
        let vals: Vec<Rat> = values.iter().map(|s| s.parse().unwrap()).collect();
        Pmf::from_dense(class, &vals).unwrap()
    }

    // The nine extreme points of the d=3, p=2/5 class, in point order
    // 000, 100, 010, 110, 001, 101, 011, 111.
    fn table_vertices(class: &FrechetClass) -> Vec<Pmf> {
        [
            ["1/5", "0", "0", "2/5", "2/5", "0", "0", "0"],
            ["1/5", "0", "2/5", "0", "0", "2/5", "0", "0"],
            ["1/5", "2/5", "0", "0", "0", "0", "2/5", "0"],
            ["2/5", "0", "0", "1/5", "0", "1/5", "1/5", "0"],
            ["3/5", "0", "0", "0", "0", "0", "0", "2/5"],
            ["0", "1/5", "1/5", "1/5", "2/5", "0", "0", "0"],
            ["0", "1/5", "2/5", "0", "1/5", "1/5", "0", "0"],
            ["0", "2/5", "1/5", "0", "1/5", "0", "1/5", "0"],
            ["0", "3/10", "3/10", "0", "3/10", "0", "0", "1/10"],
        ]
        .iter()
        .map(|vals| pmf(class, vals))
        .collect()
    }

    #[test]
    fn pairing_matrix_shape_d3() {
        let class = class_d3_p25();
        let q = build_q(&class).unwrap();
        assert_eq!((q.rows(), q.cols()), (4, 8));
        let expect = [
            ["1", "0", "0", "0", "-1/2", "-1/2", "-1/2", "-3/2"],
            ["0", "1", "0", "0", "0", "0", "-1", "0"],
            ["0", "0", "1", "0", "0", "-1", "0", "0"],
            ["0", "0", "0", "1", "-1", "0", "0", "0"],
        ];
        for (i, row) in expect.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(q.at(i, j), &v.parse::<Rat>().unwrap(), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn sparse_map_agrees_with_dense_matrix() {
        let class = class_d3_p25();
        let q = build_q(&class).unwrap();
        for vertex in table_vertices(&class) {
            let dense = vertex.to_dense().unwrap();
            let product = q.mul_vec(&dense);
            let mass: BTreeMap<BigUint, Rat> =
                vertex.iter().map(|(o, v)| (o.clone(), v.clone())).collect();
            let sparse = mass_to_coeffs(&class, &mass);
            for (j, value) in product.iter().enumerate() {
                let key = BigUint::from(j);
                let got = sparse.get(&key).cloned().unwrap_or_else(Rat::zero);
                assert_eq!(&got, value, "coefficient {j}");
            }
        }
    }

    #[test]
    fn image_of_known_vertices() {
        let class = class_d3_p25();
        let vertices = table_vertices(&class);
        // r_9 maps to -3/10 * (1 - x1 - x2 + x1*x2).
        let p9 = pmf_to_poly(&class, &vertices[8]).unwrap();
        let expect = MultilinearPoly::parse("-3/10 + 3/10*x1 + 3/10*x2 - 3/10*x1*x2", 2).unwrap();
        assert_eq!(p9, expect);
        // r_4 maps to 1/5 * (x1*x2 - x1 - x2 + 1).
        let p4 = pmf_to_poly(&class, &vertices[3]).unwrap();
        let expect = fundamental(2, &[1, 2]).unwrap().scale(&Rat::new(1, 5));
        assert_eq!(p4, expect);
        // Images of valid pmfs always sit in the ideal.
        for v in &vertices {
            let p = pmf_to_poly(&class, v).unwrap();
            assert!(p.is_zero() || ideal_membership(&p, &class).unwrap());
        }
    }

    #[test]
    fn canonical_preimages_of_fundamental_and_negation() {
        let class = class_d3_p25();
        let f = fundamental(2, &[1, 2]).unwrap();
        let vertices = table_vertices(&class);
        assert_eq!(type0_pmf(&class, &f).unwrap(), vertices[3]);
        assert_eq!(type0_pmf(&class, &f.neg()).unwrap(), vertices[8]);
        // Scaling by a positive constant leaves the preimage unchanged;
        // the preimage only sees the ray.
        let scaled = f.scale(&Rat::new(7, 3));
        assert_eq!(type0_pmf(&class, &scaled).unwrap(), vertices[3]);
    }

    #[test]
    fn type0_rejections() {
        let class = class_d3_p25();
        assert!(matches!(
            type0_pmf(&class, &MultilinearPoly::zero(2)),
            Err(Error::ZeroPolynomial)
        ));
        let not_member = MultilinearPoly::parse("x1*x2 - x2", 2).unwrap();
        assert!(matches!(
            type0_pmf(&class, &not_member),
            Err(Error::NotInIdeal(_))
        ));
        let wrong_vars = MultilinearPoly::parse("x1*x2 - x1 - x2 + 1", 5).unwrap();
        assert!(matches!(
            type0_pmf(&class, &wrong_vars),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_vectors_are_annihilated_and_match_vertices() {
        let class = class_d3_p25();
        let basis = kernel_basis(&class).unwrap();
        assert_eq!(basis.len(), 4);
        let q = build_q(&class).unwrap();
        let vertices = table_vertices(&class);
        // v_1 = r_5, v_2 = r_3, v_3 = r_2, v_4 = r_1.
        let expected = [&vertices[4], &vertices[2], &vertices[1], &vertices[0]];
        for (idx, sparse) in basis.iter().enumerate() {
            let mass: BTreeMap<BigUint, Rat> = sparse.iter().cloned().collect();
            assert!(mass_to_coeffs(&class, &mass).is_empty(), "v_{}", idx + 1);
            let mut dense = vec![Rat::zero(); 8];
            for (off, v) in sparse {
                let i: usize = off.try_into().unwrap();
                dense[i] = v.clone();
            }
            assert!(q.mul_vec(&dense).iter().all(Rat::is_zero));
            let as_pmf = Pmf::from_dense(&class, &dense).unwrap();
            assert_eq!(&as_pmf, expected[idx]);
        }
    }

    #[test]
    fn kernel_vector_at_large_d_stays_sparse() {
        let class = FrechetClass::new(216, 2, 5).unwrap();
        let j = BigUint::from(12345u32);
        let v = kernel_basis_vector(&class, &j).unwrap();
        let mass: BTreeMap<BigUint, Rat> = v.into_iter().collect();
        assert_eq!(mass.len(), 3);
        assert!(mass_to_coeffs(&class, &mass).is_empty());
        assert!(kernel_basis_vector(&class, &BigUint::from(0u32)).is_err());
    }

    #[test]
    fn classification_of_table_columns() {
        let class = class_d3_p25();
        let vertices = table_vertices(&class);
        let expect = [
            PmfType::Type1K, // r_1
            PmfType::Type1K, // r_2
            PmfType::Type1K, // r_3
            PmfType::Type0,  // r_4
            PmfType::Type1K, // r_5
            PmfType::Type1,  // r_6
            PmfType::Type1,  // r_7
            PmfType::Type1,  // r_8
            PmfType::Type0,  // r_9
        ];
        for (v, want) in vertices.iter().zip(expect) {
            assert_eq!(classify(&class, v).unwrap(), want);
        }
    }

    #[test]
    fn fiber_structure_of_type1_members() {
        // A Type1 pmf differs from the canonical preimage of its image by a
        // kernel element: here we check the image of r_6 is a negative
        // multiple of the fundamental polynomial, whose canonical preimage
        // is r_9, not r_6.
        let class = class_d3_p25();
        let vertices = table_vertices(&class);
        let p6 = pmf_to_poly(&class, &vertices[5]).unwrap();
        let expect = fundamental(2, &[1, 2]).unwrap().scale(&Rat::new(-1, 5));
        assert_eq!(p6, expect);
        assert_eq!(type0_pmf(&class, &p6).unwrap(), vertices[8]);
    }
}
