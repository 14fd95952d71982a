//! End-to-end acceptance checks: the golden values and behaviors the
//! library must reproduce exactly.
//!
//! Each test covers one numbered criterion and prints a single
//! "ACCEPTANCE <n>: PASS" line on success (visible with --nocapture).
//! Everything is exact rational arithmetic; no tolerances except where a
//! criterion is explicitly statistical.

use std::time::Instant;

use num::bigint::BigUint;

use bernoulli_frechet::class::{is_extremal, FrechetClass, Pmf};
use bernoulli_frechet::convex::{
    exchangeable_min_pmf, exclusivity_order, mean_second_moment, min_convex_bernoulli,
    min_convex_sum, minimal_mean_second_moment, minimality_feasibility, stop_loss, sum_pmf,
    MinCxRoute,
};
use bernoulli_frechet::enumerate::{enumerate_extremals_bruteforce, support_success_experiment};
use bernoulli_frechet::poly::{ideal_membership, MultilinearPoly};
use bernoulli_frechet::rat::Rat;
use bernoulli_frechet::search::{build_b, search, type1k_vertex_search, SearchSpec};
use bernoulli_frechet::transform::{kernel_basis, mass_to_coeffs, pmf_to_poly, type0_pmf};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn class(d: u32, s: u64, t: u64) -> FrechetClass {
    FrechetClass::new(d, s, t).unwrap()
}

fn rat(s: &str) -> Rat {
    s.parse().unwrap()
}

fn pmf_from(c: &FrechetClass, values: &[&str]) -> Pmf {
    let vals: Vec<Rat> = values.iter().map(|v| v.parse().unwrap()).collect();
    Pmf::from_dense(c, &vals).unwrap()
}

/// The nine vertex columns at d=3, p=2/5, points in reverse-lex order
/// (000, 100, 010, 110, 001, 101, 011, 111).
fn table_d3() -> Vec<Vec<&'static str>> {
    vec![
        vec!["1/5", "0", "0", "2/5", "2/5", "0", "0", "0"],
        vec!["1/5", "0", "2/5", "0", "0", "2/5", "0", "0"],
        vec!["1/5", "2/5", "0", "0", "0", "0", "2/5", "0"],
        vec!["2/5", "0", "0", "1/5", "0", "1/5", "1/5", "0"],
        vec!["3/5", "0", "0", "0", "0", "0", "0", "2/5"],
        vec!["0", "1/5", "1/5", "1/5", "2/5", "0", "0", "0"],
        vec!["0", "1/5", "2/5", "0", "1/5", "1/5", "0", "0"],
        vec!["0", "2/5", "1/5", "0", "1/5", "0", "1/5", "0"],
        vec!["0", "3/10", "3/10", "0", "3/10", "0", "0", "1/10"],
    ]
}

#[test]
fn criterion_1_vertex_table_d3() {
    let c = class(3, 2, 5);
    let started = Instant::now();
    let vertices = enumerate_extremals_bruteforce(&c, None, false).unwrap();
    let elapsed = started.elapsed();

    assert_eq!(vertices.len(), 9);
    let mut got: Vec<String> = vertices.iter().map(Pmf::dense_key).collect();
    let mut want: Vec<String> = table_d3()
        .iter()
        .map(|col| pmf_from(&c, col).dense_key())
        .collect();
    got.sort();
    want.sort();
    assert_eq!(got, want, "exact vertex set at d=3, p=2/5");
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "enumeration took {elapsed:?}, budget is 1 s"
    );
    println!("ACCEPTANCE 1: PASS (9 vertices, {elapsed:?})");
}

#[test]
fn criterion_2_vertex_count_d5() {
    let c = class(5, 2, 5);
    let started = Instant::now();
    let vertices = enumerate_extremals_bruteforce(&c, None, false).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(vertices.len(), 5_162);
    for v in &vertices {
        assert!(v.support_size() <= 6);
    }
    println!("ACCEPTANCE 2: PASS (5162 vertices, {elapsed:?})");
}

#[test]
fn criterion_3_polynomial_round_trips() {
    let c = class(3, 2, 5);
    let p4 = MultilinearPoly::parse("x1*x2 - x1 - x2 + 1", 2).unwrap();
    let got = type0_pmf(&c, &p4).unwrap();
    let r4 = pmf_from(&c, &["2/5", "0", "0", "1/5", "0", "1/5", "1/5", "0"]);
    assert_eq!(got, r4);

    let p9 = MultilinearPoly::parse("-x1*x2 + x1 + x2 - 1", 2).unwrap();
    let got = type0_pmf(&c, &p9).unwrap();
    let r9 = pmf_from(&c, &["0", "3/10", "3/10", "0", "3/10", "0", "0", "1/10"]);
    assert_eq!(got, r9);
    println!("ACCEPTANCE 3: PASS (both preimages exact)");
}

#[test]
fn criterion_4_targeted_search() {
    let c = class(4, 2, 5);
    let b = build_b(&c).unwrap();
    use bernoulli_frechet::poly::Monomial;
    let j = vec![
        b.column_of(&Monomial::parse_compact("x1x2").unwrap()).unwrap(),
        b.column_of(&Monomial::parse_compact("x1x3").unwrap()).unwrap(),
    ];
    let spec = SearchSpec::new(&b, j, vec![2]).unwrap();
    let results = search(&c, &b, &spec).unwrap();
    assert_eq!(results.len(), 1);
    let r = &results[0];
    assert_eq!(r.coefficients, vec![Rat::one(), -Rat::one()]);
    // The coefficient vector (1,-1) forces x1x2 - x1x3 - x2 + x3, which
    // factors as (x1 - 1)(x2 - x3) and vanishes on all four evaluation
    // points; flipping the sign of the linear part gives (x1 + 1)(x2 - x3),
    // which misses the point (1, -c, 1) and is not in the ideal.
    let want = MultilinearPoly::parse("x1*x2 - x1*x3 - x2 + x3", 3).unwrap();
    assert_eq!(r.polynomial, want);
    let want_pmf = pmf_from(
        &c,
        &[
            "1/5", "0", "0", "1/5", "1/5", "0", "0", "0", "0", "0", "1/5", "0", "0", "1/5", "0",
            "0",
        ],
    );
    assert_eq!(r.pmf, want_pmf);
    assert!(r.certificate.is_extremal);
    println!("ACCEPTANCE 4: PASS (coefficients (1,-1), pmf and certificate exact)");
}

#[test]
fn criterion_5_closed_form_golden_set() {
    struct Golden {
        d: u32,
        s: u64,
        t: u64,
        h: u64,
        k: u64,
        poly: &'static str,
    }
    let cases = [
        Golden {
            d: 7,
            s: 2,
            t: 5,
            h: 1,
            k: 2,
            poly: "-2*x1*x2*x3*x4 + x1*x2 + x1*x3*x4 + x2*x3*x4 - 1",
        },
        Golden {
            d: 9,
            s: 2,
            t: 7,
            h: 1,
            k: 4,
            poly: "-2*x1*x2*x3*x4*x5*x6*x7 + x1*x2 + x3*x4*x5 + x1*x6*x7 + x2*x3*x4 + x5*x6*x7 - 3",
        },
        Golden {
            d: 9,
            s: 2,
            t: 5,
            h: 2,
            k: 1,
            poly: "-2*x1*x2*x3*x4*x5 + x1*x2*x3 + x1*x4*x5 + x2*x3*x4*x5 - 1",
        },
        Golden {
            d: 5,
            s: 2,
            t: 5,
            h: 3,
            k: 0,
            poly: "-2*x1*x2*x3 + x1*x2 + x1*x3 + x2*x3 - 1",
        },
    ];
    for g in &cases {
        let c = class(g.d, g.s, g.t);
        let started = Instant::now();
        let m = min_convex_bernoulli(&c).unwrap();
        let elapsed = started.elapsed();
        assert_eq!((m.h, m.k), (g.h, g.k), "d={} t={}", g.d, g.t);
        let want = MultilinearPoly::parse(g.poly, g.d - 1).unwrap();
        assert_eq!(m.polynomial, want, "d={} t={}", g.d, g.t);
        assert!(elapsed.as_secs_f64() < 1.0);
    }

    // d=216: the sparse high-dimensional case, P_130 with 5 terms.
    let c = class(216, 2, 5);
    let started = Instant::now();
    let m = min_convex_bernoulli(&c).unwrap();
    let elapsed = started.elapsed();
    assert_eq!((m.h, m.k, m.lead_degree), (1, 2, 130));
    assert_eq!(m.polynomial.num_terms(), 5);
    let alpha: Vec<u32> = (1..=86).collect();
    let beta1: Vec<u32> = (1..=43).chain(87..=130).collect();
    let beta2: Vec<u32> = (44..=130).collect();
    assert_eq!(m.alphas[0].vars(), alpha.as_slice());
    assert_eq!(m.betas[0].vars(), beta1.as_slice());
    assert_eq!(m.betas[1].vars(), beta2.as_slice());
    let lead: Vec<u32> = (1..=130).collect();
    assert_eq!(
        m.polynomial.coeff(&bernoulli_frechet::poly::Monomial::new(lead).unwrap()),
        rat("-2")
    );
    assert_eq!(m.polynomial.constant_term(), rat("-1"));
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "d=216 construction took {elapsed:?}, budget is 1 s"
    );
    println!("ACCEPTANCE 5: PASS (five golden constructions, d=216 in {elapsed:?})");
}

/// Seeded stream of random valid members: convex combinations of the
/// kernel basis, the upper bound member, and the product measure, with
/// small random integer weights.
fn random_members(c: &FrechetClass, count: usize, seed: u64) -> Vec<Pmf> {
    let mut generators: Vec<Vec<Rat>> = Vec::new();
    for sparse in kernel_basis(c).unwrap() {
        let mut dense = vec![Rat::zero(); 1 << c.d()];
        for (offset, value) in sparse {
            let idx = u64::try_from(&offset).unwrap() as usize;
            dense[idx] = value;
        }
        generators.push(dense);
    }
    generators.push(upper_frechet(c).to_dense().unwrap());
    generators.push(independence(c).to_dense().unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let weights: Vec<u32> = (0..generators.len()).map(|_| rng.gen_range(0..8)).collect();
        let total: u32 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let mut dense = vec![Rat::zero(); 1 << c.d()];
        for (g, &w) in generators.iter().zip(&weights) {
            if w == 0 {
                continue;
            }
            let scale = Rat::new(w as i64, total as i64);
            for (acc, v) in dense.iter_mut().zip(g) {
                *acc += v * &scale;
            }
        }
        out.push(Pmf::from_dense(c, &dense).unwrap());
    }
    out
}

#[test]
fn criterion_6_moment_identities() {
    let mut checked = 0u64;
    for (d, s, t) in [(3u32, 2u64, 5u64), (4, 2, 5), (5, 2, 5)] {
        let c = class(d, s, t);
        for pmf in random_members(&c, 200, 0x5eed + d as u64) {
            for tau in 2..=d {
                // crossed_moment_sum internally computes both routes and
                // errors on any mismatch; Ok() is the assertion.
                bernoulli_frechet::convex::crossed_moment_sum(&pmf, tau).unwrap();
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 200 * (2 + 3 + 4));
    println!("ACCEPTANCE 6: PASS ({checked} identity checks, all exact)");
}

#[test]
fn criterion_7_minimality_oracle() {
    let quarter = rat("1/4");
    for (s, t) in [(2u64, 5u64), (1, 3), (1, 2)] {
        for d in [3u32, 4] {
            let c = class(d, s, t);
            let construction = min_convex_bernoulli(&c).unwrap();
            let own = sum_pmf(&construction.pmf);

            let vertices = enumerate_extremals_bruteforce(&c, None, false).unwrap();
            assert!(!vertices.is_empty());
            for vertex in &vertices {
                let rival = sum_pmf(vertex);
                for step in 0..=(4 * d) {
                    let l = Rat::from_int(step as i64) * &quarter;
                    assert!(
                        stop_loss(&own, &l) <= stop_loss(&rival, &l),
                        "d={d} p={s}/{t} level {l}"
                    );
                }
            }

            let mu2 = mean_second_moment(&own).unwrap();
            assert_eq!(
                mu2,
                minimal_mean_second_moment(d, c.p()).unwrap(),
                "d={d} p={s}/{t}"
            );
        }
    }
    // A margin above one half exercises the high-bracket arithmetic: the
    // minimum spreads mean 11/4 across {2, 3}, giving E(S^2) = 31/4 and
    // (E(S^2) - E(S)) / (d(d-1)) = 1/4.
    let s = min_convex_sum(5, &rat("11/20")).unwrap();
    assert_eq!(mean_second_moment(&s.pmf).unwrap(), rat("1/4"));
    println!("ACCEPTANCE 7: PASS (stop-loss minimal against all vertices; second moments exact)");
}

#[test]
fn criterion_8_success_rate() {
    let c = class(5, 2, 5);
    let rate = support_success_experiment(&c, 1000, 42).unwrap();
    let target = rat("162/1000");
    let deviation = if rate > target {
        &rate - &target
    } else {
        &target - &rate
    };
    assert!(
        deviation <= rat("1/20"),
        "success rate {rate} deviates more than 0.05 from 0.162"
    );
    println!("ACCEPTANCE 8: PASS (success rate {rate})");
}

#[test]
fn criterion_9_property_sweep() {
    let mut classes = 0u64;
    for t in 2u64..=11 {
        for s in 1..=t / 2 {
            if num::integer::gcd(s, t) != 1 || 2 * s > t {
                continue;
            }
            for d in 2u32..=12 {
                let c = class(d, s, t);
                classes += 1;

                // Kernel-basis membership: the pairing annihilates every
                // basis vector, and each is a valid extremal member.
                let basis = kernel_basis(&c).unwrap();
                assert_eq!(basis.len(), 1usize << (d - 1));
                for sparse in &basis {
                    let map: std::collections::BTreeMap<BigUint, Rat> =
                        sparse.iter().cloned().collect();
                    assert!(mass_to_coeffs(&c, &map).is_empty());
                }

                // A spread of members: their polynomial images all vanish
                // on the prescribed points, and the exclusivity order obeys
                // the mean bound with the feasibility rule agreeing.
                let mut members = vec![upper_frechet(&c), independence(&c)];
                members.push(min_convex_bernoulli(&c).unwrap().pmf);
                for m in &members {
                    m.validate(&c).unwrap();
                    let image = pmf_to_poly(&c, m).unwrap();
                    assert!(ideal_membership(&image, &c).unwrap());
                    let order = exclusivity_order(m);
                    assert!(Rat::from_int(order as i64 - 1) >= c.mean_sum());
                    assert!(minimality_feasibility(d, c.p(), order).unwrap());
                    // Monotone: every order above an achieved one is feasible.
                    assert!(minimality_feasibility(d, c.p(), order + 1).unwrap());
                }

                // Support bound on certified vertices.
                if d <= 4 {
                    let vertices = enumerate_extremals_bruteforce(&c, None, false).unwrap();
                    for v in &vertices {
                        let cert = is_extremal(&c, v).unwrap();
                        assert!(cert.is_extremal);
                        assert!(v.support_size() as u64 <= d as u64 + 1);
                    }
                } else {
                    for sparse in basis.iter().take(8) {
                        let entries: Vec<(bernoulli_frechet::class::SupportPoint, Rat)> = sparse
                            .iter()
                            .map(|(o, v)| {
                                (
                                    bernoulli_frechet::class::SupportPoint::from_offset(
                                        d,
                                        o.clone(),
                                    )
                                    .unwrap(),
                                    v.clone(),
                                )
                            })
                            .collect();
                        let v = Pmf::from_support(&c, entries).unwrap();
                        let cert = is_extremal(&c, &v).unwrap();
                        assert!(cert.is_extremal);
                        assert!(v.support_size() as u64 <= d as u64 + 1);
                    }
                }
            }
        }
    }
    assert!(classes >= 200, "sweep covered {classes} classes");
    println!("ACCEPTANCE 9: PASS ({classes} classes swept)");
}

/// Mass q at the all-zeros point and p at the all-ones point.
fn upper_frechet(c: &FrechetClass) -> Pmf {
    let top = bernoulli_frechet::class::SupportPoint::from_offset(
        c.d(),
        c.num_points() - BigUint::from(1u32),
    )
    .unwrap();
    let bottom =
        bernoulli_frechet::class::SupportPoint::from_offset(c.d(), BigUint::from(0u32)).unwrap();
    Pmf::from_support(c, vec![(bottom, c.q().clone()), (top, c.p().clone())]).unwrap()
}

/// The product measure: f(x) = p^|x| q^(d-|x|).
fn independence(c: &FrechetClass) -> Pmf {
    let d = c.d();
    let mut pow_p = vec![Rat::one()];
    let mut pow_q = vec![Rat::one()];
    for i in 1..=d as usize {
        pow_p.push(&pow_p[i - 1] * c.p());
        pow_q.push(&pow_q[i - 1] * c.q());
    }
    let dense: Vec<Rat> = (0u64..1 << d)
        .map(|offset| {
            let w = offset.count_ones() as usize;
            &pow_p[w] * &pow_q[d as usize - w]
        })
        .collect();
    Pmf::from_dense(c, &dense).unwrap()
}

/// The targeted searches agree with brute force wherever both run.
#[test]
fn search_results_are_vertices() {
    for (d, s, t) in [(3u32, 2u64, 5u64), (4, 2, 5)] {
        let c = class(d, s, t);
        let vertices = enumerate_extremals_bruteforce(&c, None, false).unwrap();
        let keys: std::collections::BTreeSet<String> =
            vertices.iter().map(Pmf::dense_key).collect();

        let b = build_b(&c).unwrap();
        for (_, spec) in bernoulli_frechet::search::sweep_specs(&b, 4, 0) {
            for result in search(&c, &b, &spec).unwrap() {
                assert!(
                    keys.contains(&result.pmf.dense_key()),
                    "search hit a non-vertex at d={d}, spec {spec}"
                );
                assert!(result.certificate.is_extremal);
            }
        }

        // Kernel exploration from each type-0 vertex stays inside the set.
        let base = type0_pmf(
            &c,
            &bernoulli_frechet::poly::fundamental(d - 1, &[1, 2]).unwrap(),
        )
        .unwrap();
        for result in type1k_vertex_search(&c, &base).unwrap() {
            assert!(keys.contains(&result.pmf.dense_key()));
        }
    }
    println!("CROSS-CHECK: PASS (search outputs are certified vertices)");
}

/// The exchangeable witness realizes the same minimal sum as the main
/// construction wherever both exist.
#[test]
fn exchangeable_witness_cross_check() {
    for (d, s, t) in [(3u32, 2u64, 5u64), (4, 2, 5), (5, 2, 5), (6, 2, 7), (7, 3, 7)] {
        let c = class(d, s, t);
        let witness = exchangeable_min_pmf(&c).unwrap();
        let main = min_convex_bernoulli(&c).unwrap();
        assert_eq!(sum_pmf(&witness).probs(), sum_pmf(&main.pmf).probs());
        if main.route == MinCxRoute::Exchangeable {
            assert_eq!(witness, main.pmf);
        }
    }
    println!("CROSS-CHECK: PASS (exchangeable witness agrees)");
}
