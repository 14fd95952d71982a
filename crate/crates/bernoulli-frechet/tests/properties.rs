//! Randomized structural properties of the pairing, the ideal, and the
//! convex-order layer, plus the exhaustive closed-form construction sweep.

use std::collections::BTreeMap;

use num::bigint::BigUint;
use proptest::prelude::*;

use bernoulli_frechet::class::{FrechetClass, Pmf};
use bernoulli_frechet::convex::{
    crossed_moment_sum, exclusivity_order, min_convex_bernoulli, sum_pmf,
};
use bernoulli_frechet::linalg::RatMatrix;
use bernoulli_frechet::poly::{fundamental, ideal_membership, remainder, Monomial, MultilinearPoly};
use bernoulli_frechet::rat::Rat;
use bernoulli_frechet::transform::{
    classify, kernel_basis, mass_to_coeffs, pmf_to_poly, type0_pmf, PmfType,
};

fn class(d: u32, s: u64, t: u64) -> FrechetClass {
    FrechetClass::new(d, s, t).unwrap()
}

/// Dense vectors of the kernel basis: every mixture of these has zero
/// polynomial image (the two-point upper bound member is the first basis
/// vector).
fn kernel_family(c: &FrechetClass) -> Vec<Vec<Rat>> {
    let size = 1usize << c.d();
    let mut family = Vec::new();
    for sparse in kernel_basis(c).unwrap() {
        let mut dense = vec![Rat::zero(); size];
        for (offset, value) in sparse {
            dense[u64::try_from(&offset).unwrap() as usize] = value;
        }
        family.push(dense);
    }
    family
}

/// Kernel basis plus the canonical preimages of every +-fundamental
/// polynomial: a family rich enough that mixtures reach all three member
/// types.
fn full_family(c: &FrechetClass) -> Vec<Vec<Rat>> {
    let mut family = kernel_family(c);
    for m in high_monomials(c.d()) {
        let f = fundamental(c.d() - 1, m.vars()).unwrap();
        for poly in [f.clone(), f.neg()] {
            let pmf = type0_pmf(c, &poly).unwrap();
            family.push(pmf.to_dense().unwrap());
        }
    }
    family
}

fn combine(c: &FrechetClass, family: &[Vec<Rat>], weights: &[u32]) -> Option<Pmf> {
    let total: u32 = weights.iter().take(family.len()).sum();
    if total == 0 {
        return None;
    }
    let mut dense = vec![Rat::zero(); 1 << c.d()];
    for (g, &w) in family.iter().zip(weights) {
        if w == 0 {
            continue;
        }
        let scale = Rat::new(w as i64, total as i64);
        for (acc, v) in dense.iter_mut().zip(g) {
            *acc += v * &scale;
        }
    }
    Some(Pmf::from_dense(c, &dense).unwrap())
}

/// All degree->=2 monomials over d-1 variables, ascending.
fn high_monomials(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for offset in 1u64..(1 << (d - 1)) {
        if offset.count_ones() >= 2 {
            out.push(Monomial::from_offset(&BigUint::from(offset)));
        }
    }
    out.sort();
    out
}

/// Integer combination of fundamental polynomials; always an ideal member.
fn fundamental_combo(d: u32, coeffs: &[i32]) -> MultilinearPoly {
    let mut poly = MultilinearPoly::zero(d - 1);
    for (m, &a) in high_monomials(d).iter().zip(coeffs) {
        if a == 0 {
            continue;
        }
        let f = fundamental(d - 1, m.vars()).unwrap();
        poly = poly.add(&f.scale(&Rat::from_int(a as i64)));
    }
    poly
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The canonical preimage inverts the pairing up to a positive scalar.
    #[test]
    fn type0_round_trip(coeffs in proptest::collection::vec(-3i32..=3, 4)) {
        let c = class(4, 2, 5);
        let poly = fundamental_combo(4, &coeffs);
        prop_assume!(!poly.is_zero());
        let pmf = type0_pmf(&c, &poly).unwrap();
        let image = pmf_to_poly(&c, &pmf).unwrap();
        // Proportional with a positive factor.
        let (m, reference) = poly.terms().next().unwrap();
        let factor = image.coeff(m) / reference;
        prop_assert!(factor.is_positive());
        prop_assert_eq!(image, poly.scale(&factor));
    }

    /// The pairing is linear: the image of a mixture is the mixture of the
    /// images.
    #[test]
    fn pairing_linearity(
        w1 in proptest::collection::vec(0u32..6, 6),
        w2 in proptest::collection::vec(0u32..6, 6),
        lambda_num in 0i64..=8,
    ) {
        let c = class(3, 2, 5);
        let family = full_family(&c);
        let (Some(f), Some(g)) = (combine(&c, &family, &w1), combine(&c, &family, &w2)) else {
            return Ok(());
        };
        let lambda = Rat::new(lambda_num, 8);
        let complement = Rat::one() - &lambda;
        let mixed: Vec<Rat> = f
            .to_dense()
            .unwrap()
            .iter()
            .zip(g.to_dense().unwrap().iter())
            .map(|(a, b)| a * &lambda + b * &complement)
            .collect();
        let mixture = Pmf::from_dense(&c, &mixed).unwrap();

        let image_mix = pmf_to_poly(&c, &mixture).unwrap();
        let expected = pmf_to_poly(&c, &f)
            .unwrap()
            .scale(&lambda)
            .add(&pmf_to_poly(&c, &g).unwrap().scale(&complement));
        prop_assert_eq!(image_mix, expected);
    }

    /// Every member's polynomial image vanishes on the prescribed points.
    #[test]
    fn member_images_vanish(weights in proptest::collection::vec(0u32..6, 16)) {
        let c = class(4, 2, 5);
        let Some(pmf) = combine(&c, &full_family(&c), &weights) else { return Ok(()); };
        let image = pmf_to_poly(&c, &pmf).unwrap();
        prop_assert!(ideal_membership(&image, &c).unwrap());
    }

    /// Reduction modulo the generators preserves evaluation on the
    /// prescribed points, lands in the affine span, and detects membership.
    #[test]
    fn remainder_is_congruent(coeffs in proptest::collection::vec(-3i32..=3, 8)) {
        let d = 4u32;
        let c = class(d, 2, 5);
        // Random polynomial over all monomials, not only ideal members.
        let mut poly = MultilinearPoly::zero(d - 1);
        let mut terms: Vec<(Monomial, Rat)> = Vec::new();
        for (offset, &a) in (0u64..(1 << (d - 1))).zip(&coeffs) {
            if a != 0 {
                terms.push((
                    Monomial::from_offset(&BigUint::from(offset)),
                    Rat::from_int(a as i64),
                ));
            }
        }
        if !terms.is_empty() {
            poly = MultilinearPoly::from_terms(d - 1, terms).unwrap();
        }
        let rem = remainder(&poly);
        prop_assert!(rem.degree() <= 1);
        prop_assert!(ideal_membership(&poly.sub(&rem), &c).unwrap());
        prop_assert_eq!(
            ideal_membership(&poly, &c).unwrap(),
            rem.is_zero(),
            "membership iff zero remainder"
        );
    }

    /// Convex combinations of members stay members, keep the sum mean at
    /// dp, and respect the exclusivity bound.
    #[test]
    fn convex_closure_and_sum_mean(weights in proptest::collection::vec(0u32..6, 24)) {
        let c = class(5, 2, 5);
        let Some(pmf) = combine(&c, &full_family(&c), &weights) else { return Ok(()); };
        pmf.validate(&c).unwrap();
        let s = sum_pmf(&pmf);
        prop_assert_eq!(s.mean(), &c.mean_sum());
        let order = exclusivity_order(&pmf);
        prop_assert!(Rat::from_int(order as i64 - 1) >= c.mean_sum());
    }

    /// Mixtures of kernel vectors are annihilated by the pairing and
    /// classified as such.
    #[test]
    fn kernel_mixtures_annihilate(weights in proptest::collection::vec(0u32..6, 8)) {
        let c = class(4, 2, 5);
        let Some(pmf) = combine(&c, &kernel_family(&c), &weights) else { return Ok(()); };
        let image: BTreeMap<BigUint, Rat> =
            pmf.iter().map(|(o, v)| (o.clone(), v.clone())).collect();
        prop_assert!(mass_to_coeffs(&c, &image).is_empty());
        prop_assert_eq!(classify(&c, &pmf).unwrap(), PmfType::Type1K);
    }

    /// Subtracting the canonical preimage of a member's image lands in the
    /// pairing kernel: the fiber decomposition is exact.
    #[test]
    fn fiber_decomposition(weights in proptest::collection::vec(0u32..6, 16)) {
        let c = class(4, 2, 5);
        let Some(pmf) = combine(&c, &full_family(&c), &weights) else { return Ok(()); };
        let image = pmf_to_poly(&c, &pmf).unwrap();
        prop_assume!(!image.is_zero());
        let canonical = type0_pmf(&c, &image).unwrap();
        let canonical_image = pmf_to_poly(&c, &canonical).unwrap();
        let (m, reference) = image.terms().next().unwrap();
        let mu = image.coeff(m) / &canonical_image.coeff(m);
        prop_assert!(mu.is_positive());
        // residual = pmf - mu * canonical, as a signed mass vector.
        let mut residual: BTreeMap<BigUint, Rat> = BTreeMap::new();
        for (o, v) in pmf.iter() {
            residual.insert(o.clone(), v.clone());
        }
        for (o, v) in canonical.iter() {
            let entry = residual.entry(o.clone()).or_insert_with(Rat::zero);
            *entry -= v * &mu;
        }
        residual.retain(|_, v| !v.is_zero());
        prop_assert!(mass_to_coeffs(&c, &residual).is_empty());
        let _ = reference;
    }

    /// Crossed-moment sums agree between the direct and weight-class
    /// routes for arbitrary members and orders.
    #[test]
    fn crossed_moment_identity(weights in proptest::collection::vec(0u32..6, 16), tau in 2u32..=4) {
        let c = class(4, 2, 5);
        let Some(pmf) = combine(&c, &full_family(&c), &weights) else { return Ok(()); };
        // Ok(_) is the property: the function cross-checks internally.
        crossed_moment_sum(&pmf, tau).unwrap();
    }

    /// Rank plus nullity equals the column count for random small exact
    /// matrices.
    #[test]
    fn rank_nullity(entries in proptest::collection::vec(-4i64..=4, 12)) {
        let rows: Vec<Vec<Rat>> = entries
            .chunks(4)
            .map(|chunk| chunk.iter().map(|&e| Rat::from_int(e)).collect())
            .collect();
        let m = RatMatrix::from_rows(rows);
        let rank = m.rank();
        let nullity = m.null_space().len();
        prop_assert_eq!(rank + nullity, 4);
    }
}

/// The closed-form construction succeeds for every class in the sweep
/// range, with its internal sum-support postcondition doing the certifying.
#[test]
fn closed_form_construction_sweep() {
    let mut count = 0u64;
    for t in 2u64..=11 {
        for s in 1..=t / 2 {
            if num::integer::gcd(s, t) != 1 {
                continue;
            }
            for d in 2u32..=30 {
                let c = class(d, s, t);
                let m = min_convex_bernoulli(&c)
                    .unwrap_or_else(|e| panic!("d={d} p={s}/{t}: {e}"));
                m.pmf.validate(&c).unwrap();
                assert!(ideal_membership(&m.polynomial, &c).unwrap());
                count += 1;
            }
        }
    }
    assert_eq!(count, 21 * 29);
}
