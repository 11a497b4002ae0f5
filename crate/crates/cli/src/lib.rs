//! `fbc`: parse automorphisms of free groups, compute invariants of their
//! mapping tori and compare two such groups.

mod json;

use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fbc_core::dynamics::{
    scan_periodic_classes, stretch_pair, transition_bound, transition_irreducible, StretchPair,
    DEFAULT_DEPTH, DEFAULT_LENGTH_CAP, DEFAULT_MAX_LEN, DEFAULT_MAX_PERIOD,
};
use fbc_core::finite_quotients::{fingerprint_cached, DEFAULT_ORDER_CAP};
use fbc_core::text::{format_automorphism, parse_automorphism};
use fbc_core::{
    abelian_invariants, compare_fingerprints, mapping_torus_invariants, mapping_torus_presentation,
    smith_normal_form, standard_library, AbelianInvariants, Comparison, Error, FiniteGroup,
    Fingerprint, FingerprintCache, FreeMap, Presentation,
};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_AUTOMORPHISM: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Stretch estimates closer than this count as equal in `compare`.
const STRETCH_TOLERANCE: f64 = 0.02;

/// Periodic classes listed in text output.
const HUMAN_ORBITS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "fbc", version, about = "Invariants of free-by-cyclic groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit one JSON document instead of text.
    #[arg(long, global = true, env = "FBC_JSON")]
    pub json: bool,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "FBC_WORKERS")]
    pub workers: Option<NonZeroUsize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and normalize an automorphism.
    Parse(MapArgs),
    /// Invert an automorphism.
    Invert(MapArgs),
    /// `map1 ∘ map2`: apply `map2` first.
    Compose(PairArgs),
    /// First Betti number and torsion of the mapping torus.
    B1(GroupArgs),
    /// H_1 by both the presentation and the `A - I` route.
    H1(GroupArgs),
    /// Forward and backward stretch estimates.
    Stretch {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        growth: GrowthArgs,
    },
    /// Search for periodic conjugacy classes of bounded length and period.
    Atoroidal {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Hom/epi counts into a library of finite groups.
    Fingerprint {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        library: LibraryArgs,
    },
    /// Rank, b1, stretch pair and fingerprints of two groups side by side.
    Compare {
        #[command(flatten)]
        pair: GroupPairArgs,
        #[command(flatten)]
        growth: GrowthArgs,
        #[command(flatten)]
        library: LibraryArgs,
    },
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Automorphism, e.g. "a->b; b->c; c->cA".
    #[arg(long, env = "FBC_MAP")]
    pub map: String,
    /// Rank of the free group, when larger than the number of rules.
    #[arg(long, env = "FBC_RANK", value_parser = positive)]
    pub rank: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub map1: String,
    #[arg(long)]
    pub map2: String,
    #[arg(long, env = "FBC_RANK", value_parser = positive)]
    pub rank: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Automorphism whose mapping torus is the group.
    #[arg(long, env = "FBC_MAP", conflicts_with = "presentation", required_unless_present = "presentation")]
    pub map: Option<String>,
    /// Presentation, e.g. "gens: a t; rel: Tata".
    #[arg(long, env = "FBC_PRESENTATION")]
    pub presentation: Option<String>,
    #[arg(long, env = "FBC_RANK", value_parser = positive)]
    pub rank: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GroupPairArgs {
    #[arg(long, conflicts_with = "presentation1", required_unless_present = "presentation1")]
    pub map1: Option<String>,
    #[arg(long, conflicts_with = "presentation2", required_unless_present = "presentation2")]
    pub map2: Option<String>,
    #[arg(long)]
    pub presentation1: Option<String>,
    #[arg(long)]
    pub presentation2: Option<String>,
    #[arg(long, env = "FBC_RANK", value_parser = positive)]
    pub rank: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[arg(long, env = "FBC_DEPTH", default_value_t = DEFAULT_DEPTH, value_parser = positive)]
    pub depth: usize,
    /// Stop iterating a seed past this cyclic length; accepts `1e6`.
    #[arg(long, env = "FBC_LENGTH_CAP", default_value_t = DEFAULT_LENGTH_CAP, value_parser = count)]
    pub length_cap: usize,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, env = "FBC_MAX_LEN", default_value_t = DEFAULT_MAX_LEN, value_parser = positive)]
    pub max_len: usize,
    #[arg(long, env = "FBC_MAX_PERIOD", default_value_t = DEFAULT_MAX_PERIOD, value_parser = positive)]
    pub max_period: usize,
}

#[derive(Debug, Args)]
pub struct LibraryArgs {
    /// Add S5 to the library.
    #[arg(long, env = "FBC_DEEP")]
    pub deep: bool,
    /// Extra group: one permutation per line in cycle notation. Repeatable.
    #[arg(long = "group-file")]
    pub group_files: Vec<PathBuf>,
    #[arg(long, env = "FBC_CACHE_FILE")]
    pub cache_file: Option<PathBuf>,
    #[arg(long, env = "FBC_NO_CACHE")]
    pub no_cache: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Positive integer, also written as `1e6` or `2.5e5`.
fn count(s: &str) -> Result<usize, String> {
    if let Ok(n) = positive(s) {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 1.0 && x.fract() == 0.0 && x <= usize::MAX as f64 => Ok(x as usize),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

/// What a run produced: the exit code, the structured document and its
/// text rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub document: Value,
    pub text: String,
}

impl Outcome {
    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(&self.document).expect("serializable")
        } else {
            self.text.clone()
        }
    }
}

struct Report {
    inputs: Value,
    results: Value,
    diagnostics: Value,
    text: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotAutomorphism(_) => EXIT_NOT_AUTOMORPHISM,
        Error::CapacityExceeded { .. } | Error::OrderCapExceeded { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidLetter { .. } => "InvalidLetter",
        Error::CapacityExceeded { .. } => "CapacityExceeded",
        Error::RankMismatch { .. } => "RankMismatch",
        Error::Parse { .. } => "ParseError",
        Error::DuplicateRule(_) => "DuplicateRule",
        Error::MissingGenerator(_) => "MissingGenerator",
        Error::NonSquare { .. } => "NonSquare",
        Error::NegativeEntry { .. } => "NegativeEntry",
        Error::OrderCapExceeded { .. } => "OrderCapExceeded",
        Error::LibraryMismatch(_) => "LibraryMismatch",
        Error::NotAutomorphism(_) => "NotAutomorphism",
        Error::Invalid(_) => "Invalid",
        Error::Io(_) => "Io",
    }
}

fn versions() -> Value {
    json!({ "fbc": env!("CARGO_PKG_VERSION"), "fbc-core": fbc_core::VERSION })
}

/// Runs one command. Never exits the process.
pub fn run(cli: &Cli) -> Outcome {
    let name = command_name(&cli.command);
    let result = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.get()).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Error::Invalid(e.to_string())),
        },
        None => dispatch(&cli.command),
    };
    match result {
        Ok(r) => Outcome {
            code: EXIT_OK,
            document: json!({
                "command": name,
                "inputs": r.inputs,
                "results": r.results,
                "diagnostics": r.diagnostics,
                "versions": versions(),
            }),
            text: r.text,
        },
        Err(e) => {
            let code = exit_code(&e);
            Outcome {
                code,
                document: json!({
                    "command": name,
                    "error": { "kind": error_kind(&e), "message": e.to_string(), "exit_code": code },
                    "versions": versions(),
                }),
                text: format!("error: {e}"),
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse(_) => "parse",
        Command::Invert(_) => "invert",
        Command::Compose(_) => "compose",
        Command::B1(_) => "b1",
        Command::H1(_) => "h1",
        Command::Stretch { .. } => "stretch",
        Command::Atoroidal { .. } => "atoroidal",
        Command::Fingerprint { .. } => "fingerprint",
        Command::Compare { .. } => "compare",
    }
}

enum Group {
    Torus(FreeMap, Presentation),
    Given(Presentation),
}

impl Group {
    fn load(map: Option<&str>, presentation: Option<&str>, rank: Option<usize>) -> fbc_core::Result<Self> {
        match (map, presentation) {
            (Some(m), _) => {
                let f = parse_automorphism(m, rank)?;
                let p = mapping_torus_presentation(&f, None)?;
                Ok(Group::Torus(f, p))
            }
            (None, Some(p)) => Ok(Group::Given(Presentation::parse(p)?)),
            (None, None) => Err(Error::Invalid("give --map or --presentation".into())),
        }
    }

    fn presentation(&self) -> &Presentation {
        match self {
            Group::Torus(_, p) | Group::Given(p) => p,
        }
    }

    fn map(&self) -> Option<&FreeMap> {
        match self {
            Group::Torus(f, _) => Some(f),
            Group::Given(_) => None,
        }
    }

    fn echo(&self) -> Value {
        match self {
            Group::Torus(f, p) => json!({
                "map": format_automorphism(f),
                "rank": f.rank(),
                "presentation": p.to_string(),
            }),
            Group::Given(p) => json!({ "presentation": p.to_string() }),
        }
    }
}

fn parse_map(args: &MapArgs) -> fbc_core::Result<FreeMap> {
    parse_automorphism(&args.map, args.rank)
}

fn map_echo(f: &FreeMap) -> Value {
    json!({ "map": format_automorphism(f), "rank": f.rank() })
}

fn dispatch(command: &Command) -> fbc_core::Result<Report> {
    match command {
        Command::Parse(args) => {
            let f = parse_map(args)?;
            let auto = f.is_automorphism();
            Ok(Report {
                inputs: map_echo(&f),
                results: json!({ "map": format_automorphism(&f), "rank": f.rank(), "automorphism": auto }),
                diagnostics: json!({}),
                text: format!(
                    "map: {}\nrank: {}\nautomorphism: {}",
                    format_automorphism(&f),
                    f.rank(),
                    if auto { "yes" } else { "no" }
                ),
            })
        }
        Command::Invert(args) => {
            let f = parse_map(args)?;
            let inv = f.invert()?;
            Ok(Report {
                inputs: map_echo(&f),
                results: json!({ "inverse": format_automorphism(&inv) }),
                diagnostics: json!({}),
                text: format!("inverse: {}", format_automorphism(&inv)),
            })
        }
        Command::Compose(args) => {
            let f = parse_automorphism(&args.map1, args.rank)?;
            let g = parse_automorphism(&args.map2, args.rank)?;
            let fg = f.compose(&g)?;
            Ok(Report {
                inputs: json!({ "map1": format_automorphism(&f), "map2": format_automorphism(&g), "rank": f.rank() }),
                results: json!({ "composite": format_automorphism(&fg) }),
                diagnostics: json!({ "order": "map1 after map2" }),
                text: format!("composite: {}", format_automorphism(&fg)),
            })
        }
        Command::B1(args) => {
            let g = Group::load(args.map.as_deref(), args.presentation.as_deref(), args.rank)?;
            let inv = abelian_invariants(g.presentation());
            let torsion = json::torsion(&inv);
            Ok(Report {
                inputs: g.echo(),
                results: json!({ "betti": inv.betti, "torsion": torsion }),
                diagnostics: json!({}),
                text: format!("betti: {}\ntorsion: {}", inv.betti, torsion_text(&inv)),
            })
        }
        Command::H1(args) => {
            let g = Group::load(args.map.as_deref(), args.presentation.as_deref(), args.rank)?;
            let p = g.presentation();
            let inv = abelian_invariants(p);
            let diagonal: Vec<String> = smith_normal_form(&p.relation_matrix())
                .diagonal
                .iter()
                .map(ToString::to_string)
                .collect();
            let shortcut = g.map().map(mapping_torus_invariants);
            let agree = shortcut.as_ref().map(|s| *s == inv);
            let mut text = format!("H1: {inv}\nsmith diagonal: [{}]", diagonal.join(", "));
            if let Some(s) = &shortcut {
                text.push_str(&format!("\nfrom A - I: {s}"));
            }
            Ok(Report {
                inputs: g.echo(),
                results: json!({
                    "h1": inv.to_string(),
                    "betti": inv.betti,
                    "torsion": json::torsion(&inv),
                    "shortcut": shortcut.as_ref().map(ToString::to_string),
                }),
                diagnostics: json!({ "smith_diagonal": diagonal, "routes_agree": agree }),
                text,
            })
        }
        Command::Stretch { map, growth } => {
            let f = parse_map(map)?;
            let pair = stretch_pair(&f, growth.depth, growth.length_cap)?;
            let bound = transition_bound(&f);
            let irreducible = transition_irreducible(&f);
            let text = format!(
                "{}\ntransition bound: {}\nirreducible: {}",
                stretch_text(&pair),
                bound.value,
                yes_no(irreducible)
            );
            Ok(Report {
                inputs: json!({
                    "map": format_automorphism(&f),
                    "rank": f.rank(),
                    "depth": growth.depth,
                    "length_cap": growth.length_cap,
                }),
                results: json::stretch_pair(&pair),
                diagnostics: json!({
                    "converged": pair.converged(),
                    "truncated": pair.forward.truncated || pair.backward.truncated,
                    "transition_bound": bound.value,
                    "transition_bound_converged": bound.converged,
                    "transition_irreducible": irreducible,
                    "runs_forward": json::runs(&pair.forward),
                    "runs_backward": json::runs(&pair.backward),
                }),
                text,
            })
        }
        Command::Atoroidal { map, scan } => {
            let f = parse_map(map)?;
            let result = scan_periodic_classes(&f, scan.max_len, scan.max_period)?;
            let mut text = format!(
                "periodic classes (length <= {}, period <= {}): {}",
                scan.max_len,
                scan.max_period,
                result.orbits.len()
            );
            for o in result.orbits.iter().take(HUMAN_ORBITS) {
                text.push_str(&format!("\n  {} period {}", o.rep, o.period));
            }
            if result.orbits.len() > HUMAN_ORBITS {
                text.push_str(&format!("\n  ... {} more (see --json)", result.orbits.len() - HUMAN_ORBITS));
            }
            Ok(Report {
                inputs: json!({
                    "map": format_automorphism(&f),
                    "rank": f.rank(),
                    "max_len": scan.max_len,
                    "max_period": scan.max_period,
                }),
                results: json!({ "orbits": json::orbits(&result.orbits), "empty": result.is_empty() }),
                diagnostics: json!({
                    "candidates": result.candidates,
                    "bounded_certificate": true,
                }),
                text,
            })
        }
        Command::Fingerprint { group, library } => {
            let g = Group::load(group.map.as_deref(), group.presentation.as_deref(), group.rank)?;
            let lib = load_library(library)?;
            let mut cache = open_cache(library)?;
            let fp = fingerprint_cached(g.presentation(), &lib, cache.as_mut())?;
            let mut inputs = g.echo();
            inputs["library"] = json!(lib.iter().map(FiniteGroup::label).collect::<Vec<_>>());
            Ok(Report {
                inputs,
                results: json!({ "fingerprint": json::fingerprint(&fp) }),
                diagnostics: json!({ "cache_hits": fp.cache_hits, "cache_file": library.cache_file }),
                text: fingerprint_text(&fp),
            })
        }
        Command::Compare { pair, growth, library } => compare(pair, growth, library),
    }
}

fn compare(pair: &GroupPairArgs, growth: &GrowthArgs, library: &LibraryArgs) -> fbc_core::Result<Report> {
    let g1 = Group::load(pair.map1.as_deref(), pair.presentation1.as_deref(), pair.rank)?;
    let g2 = Group::load(pair.map2.as_deref(), pair.presentation2.as_deref(), pair.rank)?;
    let mut checks = Vec::new();
    let mut lines = Vec::new();

    if let (Some(f1), Some(f2)) = (g1.map(), g2.map()) {
        let equal = f1.rank() == f2.rank();
        checks.push(json!({ "check": "rank", "left": f1.rank(), "right": f2.rank(), "equal": equal }));
        lines.push(format!("rank: {} vs {} [{}]", f1.rank(), f2.rank(), same(equal)));
    }

    let (h1, h2) = (abelian_invariants(g1.presentation()), abelian_invariants(g2.presentation()));
    let equal = h1 == h2;
    checks.push(json!({
        "check": "h1",
        "left": { "betti": h1.betti, "torsion": json::torsion(&h1) },
        "right": { "betti": h2.betti, "torsion": json::torsion(&h2) },
        "equal": equal,
    }));
    lines.push(format!("H1: {h1} vs {h2} [{}]", same(equal)));

    let mut converged = Value::Null;
    if let (Some(f1), Some(f2)) = (g1.map(), g2.map()) {
        let s1 = stretch_pair(f1, growth.depth, growth.length_cap)?;
        let s2 = stretch_pair(f2, growth.depth, growth.length_cap)?;
        let equal = (s1.min() - s2.min()).abs() <= STRETCH_TOLERANCE
            && (s1.max() - s2.max()).abs() <= STRETCH_TOLERANCE;
        checks.push(json!({
            "check": "stretch",
            "left": { "min": s1.min(), "max": s1.max() },
            "right": { "min": s2.min(), "max": s2.max() },
            "tolerance": STRETCH_TOLERANCE,
            "equal": equal,
        }));
        lines.push(format!(
            "stretch pair: ({}, {}) vs ({}, {}) [{}]",
            s1.min(),
            s1.max(),
            s2.min(),
            s2.max(),
            same(equal)
        ));
        converged = json!([s1.converged(), s2.converged()]);
    }

    let lib = load_library(library)?;
    let mut cache = open_cache(library)?;
    let fp1 = fingerprint_cached(g1.presentation(), &lib, cache.as_mut())?;
    let fp2 = fingerprint_cached(g2.presentation(), &lib, cache.as_mut())?;
    let comparison = compare_fingerprints(&fp1, &fp2)?;
    let (equal, detail) = match &comparison {
        Comparison::Identical => (true, json!(null)),
        Comparison::Differ { index, label, left, right } => (
            false,
            json!({
                "index": index,
                "group": label,
                "left": { "homs": left.homs, "epis": left.epis },
                "right": { "homs": right.homs, "epis": right.epis },
            }),
        ),
    };
    checks.push(json!({ "check": "fingerprint", "equal": equal, "first_difference": detail }));
    lines.push(match &comparison {
        Comparison::Identical => format!("fingerprint over {} groups: IDENTICAL", lib.len()),
        Comparison::Differ { label, left, right, .. } => format!(
            "fingerprint: DIFFER at {label}: homs {} vs {}, epis {} vs {}",
            left.homs, right.homs, left.epis, right.epis
        ),
    });

    let distinguished = checks.iter().any(|c| c["equal"] == json!(false));
    lines.push(format!(
        "verdict: {}",
        if distinguished { "distinguished" } else { "not distinguished by these invariants" }
    ));
    Ok(Report {
        inputs: json!({
            "left": g1.echo(),
            "right": g2.echo(),
            "depth": growth.depth,
            "length_cap": growth.length_cap,
            "library": lib.iter().map(FiniteGroup::label).collect::<Vec<_>>(),
        }),
        results: json!({
            "checks": checks,
            "distinguished": distinguished,
            "fingerprint_left": json::fingerprint(&fp1),
            "fingerprint_right": json::fingerprint(&fp2),
        }),
        diagnostics: json!({
            "stretch_converged": converged,
            "cache_hits": fp1.cache_hits + fp2.cache_hits,
        }),
        text: lines.join("\n"),
    })
}

fn load_library(args: &LibraryArgs) -> fbc_core::Result<Vec<FiniteGroup>> {
    let mut lib = standard_library(args.deep);
    for path in &args.group_files {
        lib.push(FiniteGroup::from_file(path, DEFAULT_ORDER_CAP)?);
    }
    Ok(lib)
}

fn open_cache(args: &LibraryArgs) -> fbc_core::Result<Option<FingerprintCache>> {
    match (&args.cache_file, args.no_cache) {
        (Some(path), false) => Ok(Some(FingerprintCache::open(path)?)),
        _ => Ok(None),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn same(b: bool) -> &'static str {
    if b {
        "same"
    } else {
        "DIFFER"
    }
}

fn torsion_text(inv: &AbelianInvariants) -> String {
    if inv.torsion.is_empty() {
        "none".into()
    } else {
        inv.torsion.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn stretch_text(p: &StretchPair) -> String {
    let line = |name: &str, e: &fbc_core::dynamics::StretchEstimate| {
        format!(
            "{name}: {} (seed {}, window {:?}, converged {}, truncated {})",
            e.lambda_hat,
            e.seed(),
            e.window(),
            yes_no(e.converged),
            yes_no(e.truncated)
        )
    };
    format!(
        "{}\n{}\nmin: {}\nmax: {}",
        line("forward", &p.forward),
        line("backward", &p.backward),
        p.min(),
        p.max()
    )
}

fn fingerprint_text(fp: &Fingerprint) -> String {
    let mut out = String::from("group\torder\thoms\tepis");
    for e in &fp.entries {
        out.push_str(&format!("\n{}\t{}\t{}\t{}", e.label, e.order, e.homs, e.epis));
    }
    out
}
