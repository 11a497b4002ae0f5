//! Homomorphism and epimorphism counts from finitely presented groups into
//! small finite groups.
//!
//! For finitely generated groups these counts only depend on the profinite
//! completion, so equal fingerprints over a library are a necessary (never
//! sufficient) condition for having the same finite quotients.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::mapping_torus::Presentation;
use crate::text::parse_permutation_file;

pub const DEFAULT_ORDER_CAP: usize = 2000;

/// A finite group as a multiplication table. Element 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    mul: Vec<u32>,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    pub const IDENTITY: usize = 0;

    /// Closes the group generated by `gens`, each a permutation in cycle
    /// form on points `1..`. Products compose left to right.
    pub fn from_permutations(label: &str, gens: &[Vec<Vec<usize>>], cap: usize) -> Result<Self> {
        let degree = gens.iter().flatten().flatten().copied().max().unwrap_or(0);
        let perms: Vec<Vec<u32>> = gens
            .iter()
            .map(|cycles| {
                let mut p: Vec<u32> = (0..degree as u32).collect();
                for cycle in cycles {
                    for (k, &x) in cycle.iter().enumerate() {
                        p[x - 1] = (cycle[(k + 1) % cycle.len()] - 1) as u32;
                    }
                }
                p
            })
            .collect();

        let compose = |p: &[u32], q: &[u32]| -> Vec<u32> { p.iter().map(|&x| q[x as usize]).collect() };
        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &perms {
                let p = compose(&elements[i], g);
                if !index.contains_key(&p) {
                    if elements.len() == cap {
                        return Err(Error::OrderCapExceeded {
                            label: label.to_string(),
                            cap,
                        });
                    }
                    index.insert(p.clone(), elements.len() as u32);
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }

        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = index[&compose(&elements[i], &elements[j])];
            }
        }
        let inverse = (0..n)
            .map(|i| (0..n).find(|&j| mul[i * n + j] == 0).expect("finite group") as u32)
            .collect();
        let group = FiniteGroup {
            label: label.to_string(),
            order: n,
            mul,
            inverse,
        };
        group.spot_check(64)?;
        Ok(group)
    }

    /// Generators given as cycle-notation strings, e.g. `"(1 2 3)(4 5)"`.
    pub fn from_cycle_strings(label: &str, gens: &[&str]) -> Result<Self> {
        let parsed = gens
            .iter()
            .map(|g| crate::text::parse_cycles(g))
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_permutations(label, &parsed, DEFAULT_ORDER_CAP)
    }

    /// Reads a permutation-group file; the label is the file stem.
    pub fn from_file(path: &Path, cap: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("group")
            .to_string();
        FiniteGroup::from_permutations(&label, &parse_permutation_file(&text)?, cap)
    }

    /// Validates a Cayley table with identity at index 0.
    pub fn from_table(label: &str, order: usize, mul: Vec<u32>) -> Result<Self> {
        if order == 0 || mul.len() != order * order || mul.iter().any(|&x| x as usize >= order) {
            return Err(Error::Invalid(format!("`{label}`: malformed table")));
        }
        let is_identity = (0..order).all(|i| mul[i] as usize == i && mul[i * order] as usize == i);
        if !is_identity {
            return Err(Error::Invalid(format!("`{label}`: element 0 is not the identity")));
        }
        let mut inverse = Vec::with_capacity(order);
        for i in 0..order {
            let j = (0..order)
                .find(|&j| mul[i * order + j] == 0 && mul[j * order + i] == 0)
                .ok_or_else(|| Error::Invalid(format!("`{label}`: element {i} has no inverse")))?;
            inverse.push(j as u32);
        }
        let group = FiniteGroup {
            label: label.to_string(),
            order,
            mul,
            inverse,
        };
        group.spot_check(256)?;
        Ok(group)
    }

    pub fn cyclic(n: usize) -> Self {
        let cycle: Vec<usize> = (1..=n).collect();
        let gens = if n > 1 { vec![vec![cycle]] } else { vec![] };
        FiniteGroup::from_permutations(&format!("Z/{n}"), &gens, usize::MAX).expect("no cap")
    }

    /// Dihedral group of order `2n` acting on an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3);
        let rotation: Vec<usize> = (1..=n).collect();
        let reflection: Vec<Vec<usize>> = (2..=n / 2 + n % 2)
            .map(|k| vec![k, n + 2 - k])
            .filter(|c| c[0] != c[1])
            .collect();
        FiniteGroup::from_permutations(
            &format!("D{n}"),
            &[vec![rotation], reflection],
            usize::MAX,
        )
        .expect("no cap")
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let size = n * m;
        let mut mul = vec![0u32; size * size];
        for a in 0..n {
            for b in 0..m {
                for c in 0..n {
                    for d in 0..m {
                        let x = self.mul[a * n + c] as usize * m + other.mul[b * m + d] as usize;
                        mul[(a * m + b) * size + c * m + d] = x as u32;
                    }
                }
            }
        }
        let inverse = (0..size)
            .map(|i| (self.inverse[i / m] as usize * m + other.inverse[i % m] as usize) as u32)
            .collect();
        FiniteGroup {
            label: format!("{}x{}", self.label, other.label),
            order: size,
            mul,
            inverse,
        }
    }

    /// Identity and inverse laws everywhere, associativity on random triples.
    fn spot_check(&self, triples: usize) -> Result<()> {
        let n = self.order;
        for i in 0..n {
            if self.op(i, 0) != i || self.op(0, i) != i || self.op(i, self.inv(i)) != 0 {
                return Err(Error::Invalid(format!("`{}`: group laws fail at {i}", self.label)));
            }
        }
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..triples {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if self.op(self.op(a, b), c) != self.op(a, self.op(b, c)) {
                return Err(Error::Invalid(format!("`{}`: not associative", self.label)));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != Self::IDENTITY {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    /// Whether `gens` generate the whole group.
    pub fn generates(&self, gens: &[usize]) -> bool {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.op(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.order
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label, self.order)
    }
}

/// `Z/2 .. Z/12`, `D4`, `D5`, `D6`, `Q8`, `A4`, `S4`, `A5`; `deep` adds `S5`.
pub fn standard_library(deep: bool) -> Vec<FiniteGroup> {
    let mut lib: Vec<FiniteGroup> = (2..=12).map(FiniteGroup::cyclic).collect();
    lib.extend([4, 5, 6].map(FiniteGroup::dihedral));
    let named: &[(&str, &[&str])] = &[
        ("Q8", &["(1 2 4 6)(3 8 7 5)", "(1 3 4 7)(2 5 6 8)"]),
        ("A4", &["(1 2 3)", "(1 2)(3 4)"]),
        ("S4", &["(1 2 3 4)", "(1 2)"]),
        ("A5", &["(1 2 3 4 5)", "(1 2 3)"]),
    ];
    for (label, gens) in named {
        lib.push(FiniteGroup::from_cycle_strings(label, gens).expect("standard generators"));
    }
    if deep {
        lib.push(FiniteGroup::from_cycle_strings("S5", &["(1 2 3 4 5)", "(1 2)"]).expect("S5"));
    }
    lib
}

type Relator = Vec<(usize, bool)>;

#[derive(Clone, Debug)]
enum Step {
    /// Try every element for the generator.
    Branch(usize),
    /// The generator occurs once in a relator whose other generators are
    /// already assigned, so its image is forced: `x^e = (V U)^-1` for the
    /// relator `U x^e V`. `tail` is `V U`.
    Solve { gen: usize, tail: Relator, inverse: bool },
}

/// Static enumeration plan: steps plus the relators that become fully
/// assigned after each step.
#[derive(Clone, Debug)]
struct Plan {
    steps: Vec<Step>,
    checks: Vec<Vec<usize>>,
    relators: Vec<Relator>,
    generators: usize,
}

impl Plan {
    fn new(p: &Presentation, order: Option<&[usize]>) -> Result<Self> {
        let n = p.generator_count();
        let relators: Vec<Relator> = p
            .relators()
            .iter()
            .map(|r| r.letters().iter().map(|x| (x.index(), x.is_inverse())).collect())
            .collect();
        if let Some(o) = order {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::Invalid("order must permute the generators".into()));
            }
        }
        let gens_of = |r: &Relator| {
            let mut g: Vec<usize> = r.iter().map(|x| x.0).collect();
            g.sort_unstable();
            g.dedup();
            g
        };
        let rel_gens: Vec<Vec<usize>> = relators.iter().map(gens_of).collect();
        let mut assigned = vec![false; n];
        let mut done = vec![false; relators.len()];
        let mut steps = Vec::with_capacity(n);
        let mut checks = Vec::with_capacity(n);

        for pos in 0..n {
            let candidates: Vec<usize> = match order {
                Some(o) => vec![o[pos]],
                None => (0..n).filter(|&g| !assigned[g]).collect(),
            };
            let solvable = |g: usize| {
                (0..relators.len()).find(|&ri| {
                    !done[ri]
                        && rel_gens[ri].iter().all(|&h| h == g || assigned[h])
                        && relators[ri].iter().filter(|x| x.0 == g).count() == 1
                })
            };
            let choice = candidates.iter().find_map(|&g| solvable(g).map(|ri| (g, Some(ri))));
            let (gen, solve_with) = choice.unwrap_or_else(|| {
                // branch on the generator completing the most relators, then
                // the one occurring in the most pending relators
                let score = |g: usize| {
                    let pending = (0..relators.len()).filter(|&ri| !done[ri] && rel_gens[ri].contains(&g));
                    let completes = pending
                        .clone()
                        .filter(|&ri| rel_gens[ri].iter().all(|&h| h == g || assigned[h]))
                        .count();
                    (completes, pending.count())
                };
                let g = *candidates
                    .iter()
                    .max_by(|&&a, &&b| score(a).cmp(&score(b)).then(b.cmp(&a)))
                    .expect("unassigned generator");
                (g, None)
            });
            assigned[gen] = true;
            let step = match solve_with {
                Some(ri) => {
                    done[ri] = true;
                    let r = &relators[ri];
                    let at = r.iter().position(|x| x.0 == gen).expect("occurs once");
                    let tail: Relator = r[at + 1..].iter().chain(&r[..at]).copied().collect();
                    Step::Solve {
                        gen,
                        tail,
                        inverse: r[at].1,
                    }
                }
                None => Step::Branch(gen),
            };
            let mut now = Vec::new();
            for ri in 0..relators.len() {
                if !done[ri] && rel_gens[ri].iter().all(|&h| assigned[h]) {
                    done[ri] = true;
                    now.push(ri);
                }
            }
            steps.push(step);
            checks.push(now);
        }
        Ok(Plan {
            steps,
            checks,
            relators,
            generators: n,
        })
    }
}

/// Homomorphism and epimorphism counts for one target group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HomCounts {
    pub homs: u64,
    pub epis: u64,
}

impl std::ops::Add for HomCounts {
    type Output = HomCounts;

    fn add(self, o: HomCounts) -> HomCounts {
        HomCounts {
            homs: self.homs + o.homs,
            epis: self.epis + o.epis,
        }
    }
}

struct Search<'a> {
    plan: &'a Plan,
    q: &'a FiniteGroup,
    want_epis: bool,
}

impl Search<'_> {
    fn eval(&self, word: &[(usize, bool)], img: &[usize]) -> usize {
        word.iter().fold(FiniteGroup::IDENTITY, |acc, &(g, inv)| {
            let x = img[g];
            self.q.op(acc, if inv { self.q.inv(x) } else { x })
        })
    }

    fn checks_pass(&self, step: usize, img: &[usize]) -> bool {
        self.plan.checks[step]
            .iter()
            .all(|&ri| self.eval(&self.plan.relators[ri], img) == FiniteGroup::IDENTITY)
    }

    fn assign(&self, step: usize, img: &mut [usize], value: Option<usize>) -> Option<()> {
        match &self.plan.steps[step] {
            Step::Branch(g) => img[*g] = value.expect("branch value"),
            Step::Solve { gen, tail, inverse } => {
                let t = self.eval(tail, img);
                img[*gen] = if *inverse { t } else { self.q.inv(t) };
            }
        }
        self.checks_pass(step, img).then_some(())
    }

    fn run(&self, step: usize, img: &mut Vec<usize>) -> HomCounts {
        if step == self.plan.steps.len() {
            let epi = self.want_epis && self.q.generates(img);
            return HomCounts {
                homs: 1,
                epis: epi as u64,
            };
        }
        match self.plan.steps[step] {
            Step::Branch(_) => {
                let mut total = HomCounts::default();
                for x in 0..self.q.order() {
                    if self.assign(step, img, Some(x)).is_some() {
                        total = total + self.run(step + 1, img);
                    }
                }
                total
            }
            Step::Solve { .. } => match self.assign(step, img, None) {
                Some(()) => self.run(step + 1, img),
                None => HomCounts::default(),
            },
        }
    }

    /// Splits the first branching step across workers.
    fn run_parallel(&self) -> HomCounts {
        let mut img = vec![0; self.plan.generators];
        let mut step = 0;
        while let Some(Step::Solve { .. }) = self.plan.steps.get(step) {
            if self.assign(step, &mut img, None).is_none() {
                return HomCounts::default();
            }
            step += 1;
        }
        if step == self.plan.steps.len() {
            return self.run(step, &mut img);
        }
        (0..self.q.order())
            .into_par_iter()
            .map(|x| {
                let mut img = img.clone();
                match self.assign(step, &mut img, Some(x)) {
                    Some(()) => self.run(step + 1, &mut img),
                    None => HomCounts::default(),
                }
            })
            .reduce(HomCounts::default, |a, b| a + b)
    }
}

/// Counts homomorphisms (and, if asked, epimorphisms) `P -> Q` by
/// backtracking, checking each relator as soon as its generators are set.
pub fn count(p: &Presentation, q: &FiniteGroup, want_epis: bool) -> HomCounts {
    let plan = Plan::new(p, None).expect("default order");
    Search { plan: &plan, q, want_epis }.run_parallel()
}

/// As [`count`], but assigning generators (0-based) in the given order.
pub fn count_with_order(p: &Presentation, q: &FiniteGroup, order: &[usize]) -> Result<HomCounts> {
    let plan = Plan::new(p, Some(order))?;
    Ok(Search { plan: &plan, q, want_epis: true }.run_parallel())
}

pub fn count_homs(p: &Presentation, q: &FiniteGroup) -> u64 {
    count(p, q, false).homs
}

pub fn count_epis(p: &Presentation, q: &FiniteGroup) -> u64 {
    count(p, q, true).epis
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerprintEntry {
    pub label: String,
    pub order: usize,
    pub homs: u64,
    pub epis: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fingerprint {
    pub entries: Vec<FingerprintEntry>,
    /// Entries served from a cache.
    pub cache_hits: usize,
}

pub fn fingerprint(p: &Presentation, library: &[FiniteGroup]) -> Fingerprint {
    fingerprint_cached(p, library, None).expect("no cache, no i/o")
}

/// Fingerprint, reading and extending `cache` when given.
pub fn fingerprint_cached(
    p: &Presentation,
    library: &[FiniteGroup],
    mut cache: Option<&mut FingerprintCache>,
) -> Result<Fingerprint> {
    let key = presentation_hash(p);
    let mut out = Fingerprint::default();
    for q in library {
        let cached = cache.as_ref().and_then(|c| c.get(&key, q.label()));
        let counts = match cached {
            Some(c) => {
                out.cache_hits += 1;
                c
            }
            None => {
                let c = count(p, q, true);
                if let Some(cache) = cache.as_mut() {
                    cache.insert(&key, q.label(), c)?;
                }
                c
            }
        };
        out.entries.push(FingerprintEntry {
            label: q.label().to_string(),
            order: q.order(),
            homs: counts.homs,
            epis: counts.epis,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Equal over the library; says nothing beyond it.
    Identical,
    Differ {
        index: usize,
        label: String,
        left: HomCounts,
        right: HomCounts,
    },
}

pub fn compare_fingerprints(a: &Fingerprint, b: &Fingerprint) -> Result<Comparison> {
    let labels = |f: &Fingerprint| f.entries.iter().map(|e| e.label.clone()).collect::<Vec<_>>();
    if labels(a) != labels(b) {
        return Err(Error::LibraryMismatch(format!(
            "[{}] vs [{}]",
            labels(a).join(", "),
            labels(b).join(", ")
        )));
    }
    for (index, (x, y)) in a.entries.iter().zip(&b.entries).enumerate() {
        if (x.homs, x.epis) != (y.homs, y.epis) {
            return Ok(Comparison::Differ {
                index,
                label: x.label.clone(),
                left: HomCounts { homs: x.homs, epis: x.epis },
                right: HomCounts { homs: y.homs, epis: y.epis },
            });
        }
    }
    Ok(Comparison::Identical)
}

/// SHA-256 over the generator count and the sorted relators, each reduced
/// to the least of the canonical cyclic forms of itself and its inverse.
pub fn presentation_hash(p: &Presentation) -> String {
    let mut rels: Vec<String> = p
        .relators()
        .iter()
        .map(|r| {
            let a = r.canonical_cyclic();
            let b = r.inverse().canonical_cyclic();
            a.min(b).to_word().to_string()
        })
        .collect();
    rels.sort();
    let digest = Sha256::digest(format!("{}|{}", p.generator_count(), rels.join(",")));
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Append-only cache of counts keyed by (presentation hash, group label).
/// Lines are `hash<TAB>label<TAB>homs<TAB>epis`.
#[derive(Debug)]
pub struct FingerprintCache {
    path: PathBuf,
    entries: HashMap<(String, String), HomCounts>,
}

impl FingerprintCache {
    /// Loads `path`, which need not exist yet. Malformed lines are skipped.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                let line = line?;
                let fields: Vec<&str> = line.split('\t').collect();
                if let [hash, label, homs, epis] = fields[..] {
                    if let (Ok(homs), Ok(epis)) = (homs.parse(), epis.parse()) {
                        entries.insert((hash.to_string(), label.to_string()), HomCounts { homs, epis });
                    }
                }
            }
        }
        Ok(FingerprintCache { path, entries })
    }

    pub fn get(&self, hash: &str, label: &str) -> Option<HomCounts> {
        self.entries.get(&(hash.to_string(), label.to_string())).copied()
    }

    pub fn insert(&mut self, hash: &str, label: &str, counts: HomCounts) -> Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{hash}\t{label}\t{}\t{}", counts.homs, counts.epis)?;
        self.entries.insert((hash.to_string(), label.to_string()), counts);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_auto::FreeMap;
    use crate::mapping_torus::mapping_torus_presentation;

    fn torus(text: &str) -> Presentation {
        mapping_torus_presentation(&FreeMap::parse(text).unwrap(), None).unwrap()
    }

    #[test]
    fn permutation_closure() {
        let z3 = FiniteGroup::from_cycle_strings("Z3", &["(1 2 3)"]).unwrap();
        assert_eq!(z3.order(), 3);
        assert!(z3.is_abelian());
        let s3 = FiniteGroup::from_cycle_strings("S3", &["(1 2)", "(1 2 3)"]).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let s5 = FiniteGroup::from_cycle_strings("S5", &["(1 2 3 4 5)", "(1 2)"]).unwrap();
        assert_eq!(s5.order(), 120);
    }

    #[test]
    fn order_cap() {
        let gens = vec![crate::text::parse_cycles("(1 2 3 4 5)").unwrap(), crate::text::parse_cycles("(1 2)").unwrap()];
        assert_eq!(
            FiniteGroup::from_permutations("S5", &gens, 100).unwrap_err(),
            Error::OrderCapExceeded { label: "S5".into(), cap: 100 }
        );
    }

    #[test]
    fn standard_library_orders() {
        let lib = standard_library(false);
        let orders: Vec<(String, usize)> = lib.iter().map(|g| (g.label().to_string(), g.order())).collect();
        let expected: Vec<(String, usize)> = (2..=12)
            .map(|n| (format!("Z/{n}"), n))
            .chain([("D4", 8), ("D5", 10), ("D6", 12), ("Q8", 8), ("A4", 12), ("S4", 24), ("A5", 60)].map(|(l, n)| (l.to_string(), n)))
            .collect();
        assert_eq!(orders, expected);
        for g in &lib[..11] {
            assert!(g.is_abelian());
            assert!((0..g.order()).any(|x| g.element_order(x) == g.order()));
        }
        let q8 = &lib[14];
        let involutions = (0..8).filter(|&x| q8.element_order(x) == 2).count();
        assert_eq!(involutions, 1);
        assert!(!q8.is_abelian());
        let d4 = &lib[11];
        assert_eq!((0..8).filter(|&x| d4.element_order(x) == 2).count(), 5);
        assert_eq!(standard_library(true).last().unwrap().order(), 120);
    }

    #[test]
    fn table_validation() {
        let z2 = FiniteGroup::from_table("Z2", 2, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(z2.inv(1), 1);
        assert!(FiniteGroup::from_table("bad", 2, vec![0, 1, 1, 1]).is_err());
        assert!(FiniteGroup::from_table("bad", 2, vec![1, 0, 0, 1]).is_err());
        // a loop that is not associative: the smallest such quasigroup table
        let loop5 = vec![0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0];
        assert!(FiniteGroup::from_table("loop", 5, loop5).is_err());
    }

    #[test]
    fn hom_count_examples() {
        let lib = standard_library(false);
        let s3 = FiniteGroup::from_cycle_strings("S3", &["(1 2)", "(1 2 3)"]).unwrap();
        assert_eq!(count_homs(&Presentation::free(2).unwrap(), &s3), 36);
        let g = torus("a->b; b->c; c->cA");
        assert_eq!(count_homs(&g, &lib[3]), 5);
        let klein = torus("a->A");
        assert_eq!(count_homs(&klein, &lib[0]), 4);
    }

    #[test]
    fn epi_count_examples() {
        let z = Presentation::free(1).unwrap();
        assert_eq!(count_epis(&z, &FiniteGroup::cyclic(4)), 2);
        assert_eq!(count_epis(&Presentation::free(2).unwrap(), &FiniteGroup::cyclic(2)), 3);
        assert_eq!(count_epis(&torus("a->b; b->c; c->cA"), &FiniteGroup::cyclic(1)), 1);
        assert_eq!(count_homs(&torus("a->b; b->c; c->cA"), &FiniteGroup::cyclic(1)), 1);
    }

    #[test]
    fn solving_steps_are_planned() {
        let plan = Plan::new(&torus("a->b; b->c; c->cA"), None).unwrap();
        let solves = plan.steps.iter().filter(|s| matches!(s, Step::Solve { .. })).count();
        assert_eq!(solves, 2);
    }

    #[test]
    fn order_does_not_matter() {
        let g = torus("a->b; b->c; c->cA");
        let a4 = FiniteGroup::from_cycle_strings("A4", &["(1 2 3)", "(1 2)(3 4)"]).unwrap();
        let reference = count(&g, &a4, true);
        for order in [[0, 1, 2, 3], [3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
            assert_eq!(count_with_order(&g, &a4, &order).unwrap(), reference);
        }
        assert!(count_with_order(&g, &a4, &[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn fingerprint_examples() {
        let lib = standard_library(false);
        let fp = fingerprint(&torus("a->b; b->c; c->cA"), &lib);
        for e in &fp.entries[..11] {
            assert_eq!(e.homs, e.order as u64, "{}", e.label);
        }
        assert!(fingerprint(&torus("a->a"), &[]).entries.is_empty());
        let f1 = fingerprint(&Presentation::free(1).unwrap(), &lib[..2]);
        assert_eq!(f1.entries.iter().map(|e| e.homs).collect::<Vec<_>>(), [2, 3]);
        assert!(fp.entries.iter().all(|e| e.epis <= e.homs && e.homs >= 1));
    }

    #[test]
    fn comparison() {
        let lib = standard_library(false)[..4].to_vec();
        let g = fingerprint(&torus("a->b; b->c; c->cA"), &lib);
        assert_eq!(compare_fingerprints(&g, &g).unwrap(), Comparison::Identical);
        let swap = fingerprint(&torus("a->b; b->a; c->c"), &lib);
        match compare_fingerprints(&g, &swap).unwrap() {
            Comparison::Differ { index, label, left, right } => {
                assert_eq!((index, label.as_str()), (0, "Z/2"));
                assert_eq!((left.homs, right.homs), (2, 8));
            }
            other => panic!("{other:?}"),
        }
        let short = fingerprint(&torus("a->b; b->c; c->cA"), &lib[..2]);
        assert!(matches!(compare_fingerprints(&g, &short), Err(Error::LibraryMismatch(_))));
    }

    #[test]
    fn hash_ignores_relator_order_rotation_and_inversion() {
        let p = Presentation::parse("gens: a b; rel: abAB; rel: aa").unwrap();
        let q = Presentation::parse("gens: a b; rel: AA; rel: bABa").unwrap();
        assert_eq!(presentation_hash(&p), presentation_hash(&q));
        let r = Presentation::parse("gens: a b c; rel: abAB; rel: aa").unwrap();
        assert_ne!(presentation_hash(&p), presentation_hash(&r));
    }
}
