//! Finite presentations, mapping tori and their abelianizations.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::free_auto::FreeMap;
use crate::intlin::{smith_normal_form, IntMatrix};
use crate::word::{Letter, Word};

#[derive(Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Invalid("a presentation needs a generator".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Invalid(format!("duplicate generator name `{name}`")));
            }
        }
        let n = names.len();
        if let Some(r) = relators.iter().find(|r| r.rank() != n) {
            return Err(Error::RankMismatch {
                expected: n,
                found: r.rank(),
            });
        }
        Ok(Presentation { names, relators })
    }

    /// `gens: a b c t; rel: TatB; ...`
    pub fn parse(text: &str) -> Result<Self> {
        crate::text::parse_presentation(text)
    }

    /// The free group on `rank` generators named `a, b, ...`.
    pub fn free(rank: usize) -> Result<Self> {
        Presentation::new(default_names(rank), Vec::new())
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Rows are generators, columns relators.
    pub fn relation_matrix(&self) -> IntMatrix {
        let columns: Vec<Vec<i64>> = self.relators.iter().map(Word::exponent_sums).collect();
        IntMatrix::from_columns(self.generator_count(), &columns)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_presentation(self))
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({self})")
    }
}

fn default_names(rank: usize) -> Vec<String> {
    (1..=rank).map(crate::text::generator_name).collect()
}

/// Name for the stable letter: `t` when free, otherwise the last unused
/// lowercase letter.
fn stable_letter_name(names: &[String]) -> String {
    let taken = |s: &str| names.iter().any(|n| n == s);
    if !taken("t") {
        return "t".into();
    }
    ('a'..='z')
        .rev()
        .map(|c| c.to_string())
        .find(|s| !taken(s))
        .unwrap_or_else(|| "t0".into())
}

/// Presentation of the mapping torus `F_r x|_f Z`.
///
/// Generators are those of `F_r` followed by `t`; for each generator `x`
/// the relator is `t^-1 x t f(x)^-1`, i.e. `x^t = f(x)` with `x^t = t^-1 x t`.
/// `names`, when given, names the `r` free generators.
pub fn mapping_torus_presentation(f: &FreeMap, names: Option<&[String]>) -> Result<Presentation> {
    let r = f.rank();
    let mut all = match names {
        Some(n) if n.len() != r => {
            return Err(Error::RankMismatch {
                expected: r,
                found: n.len(),
            })
        }
        Some(n) => n.to_vec(),
        None => default_names(r),
    };
    all.push(stable_letter_name(&all));
    let n = r + 1;
    let t = Letter::positive(n);
    let relators = (1..=r)
        .map(|g| {
            let mut raw = vec![t.inverse(), Letter::positive(g), t];
            raw.extend(f.image(g).inverse().letters().iter().copied());
            Word::reduce(n, raw)
        })
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(all, relators)
}

/// `Z^betti + Z/d1 + ... + Z/dk` with `2 <= d1 | d2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    fn from_smith(generators: usize, m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        let betti = generators - snf.rank();
        let torsion = snf
            .diagonal
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        AbelianInvariants { betti, torsion }
    }

    /// `|Hom(H, Z/n)| = n^betti * prod gcd(d_i, n)`.
    pub fn cyclic_hom_count(&self, n: u64) -> BigInt {
        let n_big = BigInt::from(n);
        let mut count = num_traits::pow(n_big.clone(), self.betti);
        for d in &self.torsion {
            count *= num_integer::gcd(d.clone(), n_big.clone());
        }
        count
    }

    /// Torsion coefficients as machine integers, if they fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.betti > 0 {
            parts.push(if self.betti == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.betti)
            });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `H_1` of a presentation from the Smith form of its relation matrix.
pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    AbelianInvariants::from_smith(p.generator_count(), &p.relation_matrix())
}

/// `H_1` of the mapping torus of `f` read off `A - I`, with `A` the
/// abelianized map: one free coordinate for `t` plus the cokernel of `A - I`.
pub fn mapping_torus_invariants(f: &FreeMap) -> AbelianInvariants {
    let a = f.abelianization_matrix();
    let shifted = &a - &IntMatrix::identity(f.rank());
    let mut inv = AbelianInvariants::from_smith(f.rank(), &shifted);
    inv.betti += 1;
    inv
}
