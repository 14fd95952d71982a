//! Verb implementations: each one builds its inputs, calls exactly one
//! library operation (plus the cheap lookups a report needs), and prints.
//!
//! Output conventions: single results are pretty-printed JSON objects,
//! streams (enumerate, search, sweep) are one compact JSON record per line,
//! and the pmf/polynomial text formats are emitted verbatim where the verb
//! exists to produce them, so shell pipelines can feed one verb to another.

use std::fs;
use std::io::{Read as _, Write as _};

use bernoulli_frechet::class::{is_extremal, ExtremalCertificate, FrechetClass, Pmf, SupportPoint};
use bernoulli_frechet::convex::{
    crossed_moment_sum, exclusivity_order, mean_correlation, mean_second_moment,
    min_convex_bernoulli, minimal_mean_second_moment, minimality_feasibility, stop_loss,
    sum_brackets, sum_pmf,
};
use bernoulli_frechet::enumerate::{enumerate_extremals_bruteforce, support_success_experiment};
use bernoulli_frechet::poly::{Monomial, MultilinearPoly};
use bernoulli_frechet::rat::Rat;
use bernoulli_frechet::search::{
    build_b, search, sweep_specs, RemainderMatrixB, SearchResult, SearchSpec,
};
use bernoulli_frechet::transform::{classify, kernel_basis, pmf_to_poly, type0_pmf};
use serde_json::{json, Value};

use crate::{ClassArgs, CliError, Emit, PmfArg, Verb};

type VResult = Result<(), CliError>;

pub fn run(verb: Verb) -> VResult {
    match verb {
        Verb::ClassInfo { class } => class_info(&class.build()?),
        Verb::Validate { class, pmf } => {
            let c = class.build()?;
            validate(&pmf.load(&c)?)
        }
        Verb::ToPoly { class, pmf } => {
            let c = class.build()?;
            to_poly(&c, &pmf.load(&c)?)
        }
        Verb::FromPoly { class, poly } => from_poly(&class.build()?, &poly),
        Verb::KernelBasis { class } => kernel_basis_verb(&class.build()?),
        Verb::Classify { class, pmf } => {
            let c = class.build()?;
            classify_verb(&c, &pmf.load(&c)?)
        }
        Verb::ExtremalCheck { class, pmf } => {
            let c = class.build()?;
            extremal_check(&c, &pmf.load(&c)?)
        }
        Verb::Enumerate {
            class,
            max_support,
            force_large_d,
        } => enumerate(&class.build()?, max_support, force_large_d),
        Verb::Search { class, j, k } => search_verb(&class.build()?, &j, &k),
        Verb::Sweep {
            class,
            max_j,
            out,
            resume_from,
        } => sweep(&class.build()?, max_j, &out, resume_from),
        Verb::MinConvex { class, emit } => min_convex(&class.build()?, emit),
        Verb::StopLoss { class, pmf, l } => {
            let c = class.build()?;
            stop_loss_verb(&pmf.load(&c)?, &l)
        }
        Verb::Moments { class, pmf, tau } => {
            let c = class.build()?;
            moments(&pmf.load(&c)?, tau)
        }
        Verb::Exclusivity { class, pmf } => {
            let c = class.build()?;
            exclusivity(&c, &pmf.load(&c)?)
        }
        Verb::SuccessRate {
            class,
            trials,
            seed,
        } => success_rate(&class.build()?, trials, seed),
        Verb::Report { class, pmf } => {
            let c = class.build()?;
            report(&c, &pmf.load(&c)?)
        }
    }
}

impl ClassArgs {
    fn build(&self) -> Result<FrechetClass, CliError> {
        Ok(FrechetClass::new(self.d, self.s, self.t)?)
    }
}

impl PmfArg {
    fn load(&self, class: &FrechetClass) -> Result<Pmf, CliError> {
        Ok(Pmf::parse_text(class, &read_input(&self.pmf)?)?)
    }
}

/// Reads a file argument, with `-` standing for stdin.
fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        return Ok(buf);
    }
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{path}: {e}")))
}

/// Sparse pmf rendering: an array of `[bits, value]` pairs in point order.
fn pmf_entries(pmf: &Pmf) -> Value {
    Value::Array(
        pmf.support_points()
            .map(|(pt, v)| json!([pt.bits(), v.to_string()]))
            .collect(),
    )
}

fn rat_strings<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Vec<String> {
    values.into_iter().map(Rat::to_string).collect()
}

fn cert_entries(cert: &ExtremalCertificate) -> Value {
    json!({
        "extremal": cert.is_extremal,
        "rank_found": cert.rank_found.to_string(),
        "rank_required": cert.rank_required.to_string(),
    })
}

fn print_pretty(value: &Value) -> VResult {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn class_info(c: &FrechetClass) -> VResult {
    let (lo, hi) = sum_brackets(c.d(), c.p())?;
    print_pretty(&json!({
        "d": c.d(),
        "s": c.s(),
        "t": c.t(),
        "p": c.p().to_string(),
        "q": c.q().to_string(),
        "c": c.c().to_string(),
        "a": c.a().to_string(),
        "a1": c.a1(),
        "a2": c.a2(),
        "mean_sum": c.mean_sum().to_string(),
        "num_points": c.num_points().to_string(),
        "kernel_dim": (c.num_points() >> 1u32).to_string(),
        "min_sum_brackets": [lo, hi],
    }))
}

fn validate(pmf: &Pmf) -> VResult {
    // Parsing already validated membership; reaching this point is success.
    print_pretty(&json!({
        "valid": true,
        "support_size": pmf.support_size(),
    }))
}

fn to_poly(c: &FrechetClass, pmf: &Pmf) -> VResult {
    println!("{}", pmf_to_poly(c, pmf)?);
    Ok(())
}

fn from_poly(c: &FrechetClass, poly_input: &str) -> VResult {
    let text = read_input(poly_input)?;
    let poly = MultilinearPoly::parse(text.trim(), c.d() - 1)?;
    print!("{}", type0_pmf(c, &poly)?.to_text());
    Ok(())
}

fn kernel_basis_verb(c: &FrechetClass) -> VResult {
    let basis = kernel_basis(c)?;
    let mut vectors = Vec::with_capacity(basis.len());
    for (i, sparse) in basis.iter().enumerate() {
        let mut support = Vec::with_capacity(sparse.len());
        for (offset, value) in sparse {
            let pt = SupportPoint::from_offset(c.d(), offset.clone())
                .map_err(|e| CliError::Internal(format!("kernel offset out of range: {e}")))?;
            support.push(json!([pt.bits(), value.to_string()]));
        }
        vectors.push(json!({ "j": i + 1, "support": support }));
    }
    print_pretty(&json!({
        "d": c.d(),
        "count": vectors.len(),
        "vectors": vectors,
    }))
}

fn classify_verb(c: &FrechetClass, pmf: &Pmf) -> VResult {
    let kind = classify(c, pmf)?;
    let image = pmf_to_poly(c, pmf)?;
    print_pretty(&json!({
        "classification": kind.to_string(),
        "polynomial": image.to_string(),
    }))
}

fn extremal_check(c: &FrechetClass, pmf: &Pmf) -> VResult {
    print_pretty(&cert_entries(&is_extremal(c, pmf)?))
}

fn enumerate(c: &FrechetClass, max_support: Option<u32>, force_large_d: bool) -> VResult {
    let vertices = enumerate_extremals_bruteforce(c, max_support, force_large_d)?;
    for v in &vertices {
        println!(
            "{}",
            json!({ "pmf": pmf_entries(v), "support_size": v.support_size() })
        );
    }
    eprintln!("{} extreme points", vertices.len());
    Ok(())
}

/// One JSON line per search candidate: the originating spec (J as monomial
/// strings, K as degree rows, the sweep cursor when there is one), the
/// kernel coefficients, the polynomial, the pmf, and the certificate bit.
fn search_record(
    b: &RemainderMatrixB,
    spec: &SearchSpec,
    cursor: Option<u64>,
    r: &SearchResult,
) -> Value {
    let j: Vec<String> = spec
        .j()
        .iter()
        .map(|&col| b.monomials()[col].to_string())
        .collect();
    let mut spec_value = json!({ "j": j, "k": spec.k() });
    if let Some(cur) = cursor {
        spec_value["cursor"] = json!(cur);
    }
    json!({
        "spec": spec_value,
        "coefficients": rat_strings(&r.coefficients),
        "polynomial": r.polynomial.to_string(),
        "pmf": pmf_entries(&r.pmf),
        "extremal": r.certificate.is_extremal,
    })
}

fn search_verb(c: &FrechetClass, j_flag: &str, k_flag: &str) -> VResult {
    let b = build_b(c)?;
    let monomials = j_flag
        .split(',')
        .map(Monomial::parse_compact)
        .collect::<Result<Vec<_>, _>>()?;
    let k = k_flag
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| CliError::Invalid(format!("bad degree row `{s}` in --K")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let spec = SearchSpec::from_monomials(&b, &monomials, k)?;
    for r in search(c, &b, &spec)? {
        println!("{}", search_record(&b, &spec, None, &r));
    }
    Ok(())
}

fn sweep(c: &FrechetClass, max_j: usize, out: &std::path::Path, resume_from: u64) -> VResult {
    let b = build_b(c)?;
    let file = if resume_from > 0 {
        fs::OpenOptions::new().create(true).append(true).open(out)?
    } else {
        fs::File::create(out)?
    };
    let mut w = std::io::BufWriter::new(file);
    let (mut specs_run, mut candidates, mut extremal) = (0u64, 0u64, 0u64);
    let mut next_cursor = resume_from;
    for (cursor, spec) in sweep_specs(&b, max_j, resume_from) {
        for r in search(c, &b, &spec)? {
            writeln!(w, "{}", search_record(&b, &spec, Some(cursor), &r))?;
            candidates += 1;
            if r.certificate.is_extremal {
                extremal += 1;
            }
        }
        specs_run += 1;
        next_cursor = cursor + 1;
    }
    w.flush()?;
    print_pretty(&json!({
        "specs_run": specs_run,
        "candidates": candidates,
        "extremal": extremal,
        "next_cursor": next_cursor,
        "out": out.display().to_string(),
    }))
}

fn min_convex(c: &FrechetClass, emit: Emit) -> VResult {
    let mc = min_convex_bernoulli(c)?;
    match emit {
        Emit::Poly => println!("{}", mc.polynomial),
        Emit::Pmf => print!("{}", mc.pmf.to_text()),
        Emit::Both => {
            let s = sum_pmf(&mc.pmf);
            print_pretty(&json!({
                "case": mc.case.to_string(),
                "route": mc.route.to_string(),
                "h": mc.h,
                "k": mc.k,
                "lead_degree": mc.lead_degree,
                "alphas": mc.alphas.iter().map(Monomial::to_string).collect::<Vec<_>>(),
                "betas": mc.betas.iter().map(Monomial::to_string).collect::<Vec<_>>(),
                "polynomial": mc.polynomial.to_string(),
                "pmf": pmf_entries(&mc.pmf),
                "sum_pmf": rat_strings(s.probs()),
            }))?;
        }
    }
    Ok(())
}

fn stop_loss_verb(pmf: &Pmf, l_flag: &str) -> VResult {
    let l: Rat = l_flag.parse()?;
    let s = sum_pmf(pmf);
    print_pretty(&json!({
        "l": l.to_string(),
        "stop_loss": stop_loss(&s, &l).to_string(),
    }))
}

fn moments(pmf: &Pmf, tau: u32) -> VResult {
    print_pretty(&json!({
        "tau": tau,
        "crossed_moment": crossed_moment_sum(pmf, tau)?.to_string(),
    }))
}

fn exclusivity(c: &FrechetClass, pmf: &Pmf) -> VResult {
    let order = exclusivity_order(pmf);
    print_pretty(&json!({
        "exclusivity_order": order,
        "minimal_feasible": minimality_feasibility(c.d(), c.p(), order)?,
    }))
}

fn success_rate(c: &FrechetClass, trials: u64, seed: u64) -> VResult {
    let rate = support_success_experiment(c, trials, seed)?;
    print_pretty(&json!({
        "trials": trials,
        "seed": seed,
        "rate": rate.to_string(),
        "rate_approx": rate.to_f64(),
    }))
}

fn report(c: &FrechetClass, pmf: &Pmf) -> VResult {
    let s = sum_pmf(pmf);
    let margins: Vec<String> = (1..=c.d()).map(|i| pmf.margin(i).to_string()).collect();
    let curve: Vec<Value> = (0..=c.d())
        .map(|l| {
            let at = Rat::from_int(i64::from(l));
            json!({ "l": l, "value": stop_loss(&s, &at).to_string() })
        })
        .collect();
    let order = exclusivity_order(pmf);
    let image = pmf_to_poly(c, pmf)?;
    print_pretty(&json!({
        "class": { "d": c.d(), "p": c.p().to_string() },
        "margins": margins,
        "sum_pmf": rat_strings(s.probs()),
        "stop_loss": curve,
        "mean_second_moment": mean_second_moment(&s)?.to_string(),
        "minimal_mean_second_moment": minimal_mean_second_moment(c.d(), c.p())?.to_string(),
        "mean_correlation": mean_correlation(c, pmf)?.to_string(),
        "exclusivity_order": order,
        "minimal_feasible": minimality_feasibility(c.d(), c.p(), order)?,
        "certificate": cert_entries(&is_extremal(c, pmf)?),
        "classification": classify(c, pmf)?.to_string(),
        "polynomial": image.to_string(),
    }))
}
