//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

use std::time::{Duration, Instant};

use clap::Parser;
use fbc_cli::{run, Cli, EXIT_OK};
use fbc_core::dynamics::{estimate_stretch, transition_bound};
use fbc_core::{
    abelian_invariants, compare_fingerprints, count_homs, fingerprint, mapping_torus_presentation,
    standard_library, Comparison, Error, FiniteGroup, FreeMap, Presentation, Word,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

const PSI: &str = "a->b; b->c; c->cA";
const SWAP: &str = "a->b; b->a; c->c";
const NOT_AUTO: &str = "a->a; b->a; c->c";

fn psi() -> FreeMap {
    FreeMap::parse(PSI).unwrap()
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut argv = vec!["fbc", "--json"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    let out = run(&cli);
    if out.code != EXIT_OK {
        return Err(format!("exit {}: {}", out.code, out.text));
    }
    Ok(out.document)
}

fn sigma(seed: u64) -> FreeMap {
    FreeMap::random_automorphism(3, 6, &mut StdRng::seed_from_u64(seed))
}

fn torus(f: &FreeMap) -> Presentation {
    mapping_torus_presentation(f, None).unwrap()
}

fn check(cond: bool, detail: String) -> Result<String, String> {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Every assignment of generators, every relator evaluated at the end.
fn brute_force_homs(p: &Presentation, q: &FiniteGroup) -> u64 {
    let n = p.generator_count();
    let mut img = vec![0usize; n];
    let mut homs = 0;
    loop {
        let ok = p.relators().iter().all(|r| {
            r.letters().iter().fold(0, |acc, x| {
                let y = img[x.index()];
                q.op(acc, if x.is_inverse() { q.inv(y) } else { y })
            }) == 0
        });
        homs += ok as u64;
        let mut i = 0;
        loop {
            if i == n {
                return homs;
            }
            img[i] += 1;
            if img[i] < q.order() {
                break;
            }
            img[i] = 0;
            i += 1;
        }
    }
}

fn b1_reproduction() -> Result<String, String> {
    let doc = cli_json(&["b1", "--map", PSI])?;
    let betti = &doc["results"]["betti"];
    let torsion = &doc["results"]["torsion"];
    check(
        *betti == 1 && torsion.as_array().is_some_and(Vec::is_empty),
        format!("betti {betti}, torsion {torsion}"),
    )
}

fn stretch_reproduction() -> Result<String, String> {
    let doc = cli_json(&["stretch", "--map", PSI, "--depth", "80"])?;
    let min = doc["results"]["min"].as_f64().ok_or("no min")?;
    let converged = doc["diagnostics"]["converged"] == true;
    check(
        (1.157..=1.177).contains(&min) && converged,
        format!("min {min:.5}, converged {converged}"),
    )
}

fn cancellation_witness() -> Result<String, String> {
    let f = psi();
    let pf = transition_bound(&f).value;
    // real root of x^3 - x^2 - 1 by bisection
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..100 {
        let mid = (lo + hi) / 2.0;
        if mid.powi(3) - mid.powi(2) - 1.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = estimate_stretch(&f, 80, &[], 1_000_000).map_err(|e| e.to_string())?.lambda_hat;
    check(
        (pf - 1.46557).abs() <= 1e-4 && (pf - lo).abs() <= 1e-6 && pf - lambda > 0.25,
        format!("PF {pf:.6} (root {lo:.6}), gap {:.4}", pf - lambda),
    )
}

fn atoroidality_slice() -> Result<String, String> {
    let doc = cli_json(&["atoroidal", "--map", PSI, "--max-len", "6", "--max-period", "6"])?;
    let psi_orbits = doc["results"]["orbits"].as_array().ok_or("no orbits")?.len();
    let doc = cli_json(&["atoroidal", "--map", SWAP, "--max-len", "6", "--max-period", "6"])?;
    let found = doc["results"]["orbits"]
        .as_array()
        .ok_or("no orbits")?
        .iter()
        .any(|o| o["class"] == "c" && o["period"] == 1);
    check(
        psi_orbits == 0 && found,
        format!("psi: {psi_orbits} orbits; swap has ([c], 1): {found}"),
    )
}

fn fingerprint_invariance() -> Result<String, String> {
    let lib = standard_library(false);
    let f = psi();
    let reference = fingerprint(&torus(&f), &lib);
    let mut variants = vec![("inverse".to_string(), f.invert().map_err(|e| e.to_string())?)];
    for seed in [11, 12, 13] {
        let conj = f.conjugate_by(&sigma(seed)).map_err(|e| e.to_string())?;
        variants.push((format!("sigma#{seed}"), conj));
    }
    for (name, g) in &variants {
        let fp = fingerprint(&torus(g), &lib);
        match compare_fingerprints(&reference, &fp).map_err(|e| e.to_string())? {
            Comparison::Identical => {}
            Comparison::Differ { label, .. } => return Err(format!("{name} differs at {label}")),
        }
    }
    Ok(format!("{} variants identical over {} groups", variants.len(), lib.len()))
}

fn fingerprint_separation() -> Result<String, String> {
    let lib = standard_library(false);
    let a = fingerprint(&torus(&psi()), &lib);
    let b = fingerprint(&torus(&FreeMap::parse(SWAP).unwrap()), &lib);
    match compare_fingerprints(&a, &b).map_err(|e| e.to_string())? {
        Comparison::Differ { label, left, right, .. } => check(
            label == "Z/2" && left.homs == 2 && right.homs == 8,
            format!("differ at {label}: {} vs {}", left.homs, right.homs),
        ),
        Comparison::Identical => Err("identical".into()),
    }
}

fn oracle_fixtures() -> Vec<Presentation> {
    let fixed = [
        "gens: a b",
        "gens: a; rel: aaa",
        "gens: a b; rel: abAB",
        "gens: a t; rel: Tata",
        "gens: a b; rel: aa; rel: bbb; rel: abab",
        "gens: a b; rel: aaaa; rel: aaBB; rel: Baba",
        "gens: a b; rel: abaBAB",
        "gens: a b; rel: BabAA",
        "gens: a b c; rel: abAB; rel: bcBC; rel: caCA",
        "gens: a b c; rel: abc",
        "gens: a b c; rel: aabbcc; rel: abcabc",
    ];
    let mut out: Vec<Presentation> = fixed.iter().map(|t| Presentation::parse(t).unwrap()).collect();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..30 {
        let gens = rng.gen_range(1..=3usize);
        let rels = (0..rng.gen_range(1..=3))
            .map(|_| {
                let len = rng.gen_range(1..=8);
                let raw: Vec<i64> = (0..len)
                    .map(|_| rng.gen_range(1..=gens as i64) * if rng.gen() { 1 } else { -1 })
                    .collect();
                Word::from_signed(gens, &raw).unwrap()
            })
            .collect();
        let names = (1..=gens).map(fbc_core::text::generator_name).collect();
        out.push(Presentation::new(names, rels).unwrap());
    }
    out
}

fn oracle_equivalence() -> Result<String, String> {
    let groups: Vec<FiniteGroup> = standard_library(false).into_iter().filter(|g| g.order() <= 12).collect();
    let fixtures = oracle_fixtures();
    for p in &fixtures {
        for q in &groups {
            let (pruned, oracle) = (count_homs(p, q), brute_force_homs(p, q));
            if pruned != oracle {
                return Err(format!("{p} -> {}: {pruned} vs {oracle}", q.label()));
            }
        }
    }
    Ok(format!("{} presentations x {} groups", fixtures.len(), groups.len()))
}

fn abelian_consistency() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(2024);
    for i in 0..50 {
        let rank = 1 + i % 3;
        let f = FreeMap::random_automorphism(rank, 10, &mut rng);
        let g = torus(&f);
        let inv = abelian_invariants(&g);
        for n in 2..=12u64 {
            let expected = inv.cyclic_hom_count(n);
            let got = count_homs(&g, &FiniteGroup::cyclic(n as usize));
            if expected != got.into() {
                return Err(format!("{f:?} n={n}: {got} vs {expected}"));
            }
        }
    }
    Ok("50 maps, n = 2..12".into())
}

fn inversion_correctness() -> Result<String, String> {
    let f = psi();
    let inv = f.invert().map_err(|e| e.to_string())?;
    let round_trip = |f: &FreeMap, g: &FreeMap| {
        f.compose(g).is_ok_and(|h| h.is_identity()) && g.compose(f).is_ok_and(|h| h.is_identity())
    };
    if !round_trip(&f, &inv) {
        return Err("psi does not round-trip".into());
    }
    let rejected = matches!(
        FreeMap::parse(NOT_AUTO).unwrap().invert().map_err(Error::from),
        Err(Error::NotAutomorphism(_))
    );
    if !rejected {
        return Err("non-automorphism accepted".into());
    }
    let mut rng = StdRng::seed_from_u64(99);
    for i in 0..100 {
        let g = FreeMap::random_automorphism(2 + i % 3, 12, &mut rng);
        match g.invert() {
            Ok(h) if round_trip(&g, &h) => {}
            _ => return Err(format!("random map {i} failed: {g:?}")),
        }
    }
    Ok(format!("psi^-1 = {}; fixture rejected; 100 random round-trips", fbc_core::text::format_automorphism(&inv)))
}

fn conjugacy_stability() -> Result<String, String> {
    let f = psi();
    let base = estimate_stretch(&f, 80, &[], 1_000_000).map_err(|e| e.to_string())?.lambda_hat;
    let mut worst: f64 = 0.0;
    for seed in [11, 12, 13] {
        let g = f.conjugate_by(&sigma(seed)).map_err(|e| e.to_string())?;
        let l = estimate_stretch(&g, 80, &[], 1_000_000).map_err(|e| e.to_string())?.lambda_hat;
        worst = worst.max((l - base).abs());
    }
    check(worst <= 0.02, format!("base {base:.5}, max deviation {worst:.5}"))
}

type Criterion = (&'static str, Duration, fn() -> Result<String, String>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("b1 reproduction", Duration::from_millis(100), b1_reproduction),
        ("stretch reproduction", Duration::from_secs(5), stretch_reproduction),
        ("cancellation witness", Duration::from_millis(100), cancellation_witness),
        ("atoroidality slice", Duration::from_secs(30), atoroidality_slice),
        ("fingerprint isomorphism invariance", Duration::from_secs(120), fingerprint_invariance),
        ("fingerprint separation", Duration::from_secs(1), fingerprint_separation),
        ("oracle equivalence", Duration::from_secs(60), oracle_equivalence),
        ("abelian consistency", Duration::from_secs(120), abelian_consistency),
        ("inversion correctness", Duration::from_secs(5), inversion_correctness),
        ("stretch conjugacy stability", Duration::from_secs(15), conjugacy_stability),
    ];
    let mut failures = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(d) => (false, d),
        };
        failures += !ok as usize;
        println!(
            "{} {:>2} {name}: {detail} [{:.3}s / {:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
