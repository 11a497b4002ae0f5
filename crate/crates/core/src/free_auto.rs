//! Endomorphisms of a free group given by generator images.
//!
//! `compose(f, g)` is "f after g": `compose(f, g)(x) = f(g(x))`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed};
use rand::Rng;

use crate::error::{Error, NotAutomorphism, NotAutomorphismReason, Result};
use crate::intlin::{determinant, IntMatrix};
use crate::word::{push_reduced, Letter, Word, DEFAULT_LETTER_CAP};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeMap {
    rank: usize,
    images: Vec<Word>,
    /// Cached inverses of `images`.
    inverse_images: Vec<Word>,
}

impl FreeMap {
    /// One image per generator, all of rank `images.len()`.
    pub fn new(images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        if rank == 0 {
            return Err(Error::Invalid("a free map needs rank at least 1".into()));
        }
        if let Some(w) = images.iter().find(|w| w.rank() != rank) {
            return Err(Error::RankMismatch {
                expected: rank,
                found: w.rank(),
            });
        }
        let inverse_images = images.iter().map(Word::inverse).collect();
        Ok(FreeMap {
            rank,
            images,
            inverse_images,
        })
    }

    /// Parses the rule syntax `a->b; b->c; c->cA`.
    pub fn parse(text: &str) -> Result<Self> {
        crate::text::parse_automorphism(text, None)
    }

    pub fn identity(rank: usize) -> Self {
        FreeMap::new(
            (1..=rank)
                .map(|g| Word::generator(rank, g).expect("in range"))
                .collect(),
        )
        .expect("rank >= 1")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::positive(i + 1)])
    }

    /// Longest generator image.
    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.apply_capped(w, DEFAULT_LETTER_CAP)
    }

    /// Applies the map, failing with `CapacityExceeded` as soon as the
    /// partially reduced result exceeds `cap` letters.
    pub fn apply_capped(&self, w: &Word, cap: usize) -> Result<Word> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: w.rank(),
            });
        }
        let mut out = Vec::with_capacity(w.len().min(cap));
        for x in w.letters() {
            let image = if x.is_inverse() {
                &self.inverse_images[x.index()]
            } else {
                &self.images[x.index()]
            };
            for &y in image.letters() {
                push_reduced(&mut out, y);
            }
            if out.len() > cap {
                return Err(Error::CapacityExceeded {
                    len: out.len(),
                    cap,
                });
            }
        }
        Ok(Word::from_reduced(self.rank, out))
    }

    /// `self` after `g`.
    pub fn compose(&self, g: &FreeMap) -> Result<FreeMap> {
        if g.rank != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: g.rank,
            });
        }
        FreeMap::new(
            g.images
                .iter()
                .map(|w| self.apply(w))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// `k`-fold composite of the map with itself (`k >= 0`).
    pub fn power(&self, k: usize) -> Result<FreeMap> {
        let mut out = FreeMap::identity(self.rank);
        for _ in 0..k {
            out = self.compose(&out)?;
        }
        Ok(out)
    }

    /// `sigma . self . sigma^-1`; fails when `sigma` does not invert.
    pub fn conjugate_by(&self, sigma: &FreeMap) -> Result<FreeMap> {
        let sigma_inv = sigma.invert()?;
        sigma.compose(&self.compose(&sigma_inv)?)
    }

    /// Entry `(i, j)` is the exponent sum of generator `i` in the image of
    /// generator `j`.
    pub fn abelianization_matrix(&self) -> IntMatrix {
        let columns: Vec<Vec<i64>> = self.images.iter().map(Word::exponent_sums).collect();
        IntMatrix::from_columns(self.rank, &columns)
    }

    /// Entry `(i, j)` counts occurrences of generator `i`, either sign, in
    /// the image of generator `j`.
    pub fn transition_matrix(&self) -> IntMatrix {
        let columns: Vec<Vec<i64>> = self
            .images
            .iter()
            .map(|w| w.letter_counts().into_iter().map(|c| c as i64).collect())
            .collect();
        IntMatrix::from_columns(self.rank, &columns)
    }

    /// Inverse automorphism via Nielsen reduction of the image tuple.
    ///
    /// The determinant of the abelianized map is checked first. Otherwise
    /// the tuple is reduced by elementary moves (swap, invert, multiply one
    /// entry on either side by another entry or its inverse), always taking
    /// the move with the least (total length, tuple) key and stopping when no
    /// move improves it. If the reduced tuple is a signed permutation of the
    /// basis, the moves replayed on formal symbols express each generator in
    /// terms of the images. Greedy reduction can stall on a genuine basis, so
    /// a stalled tuple is finished by Stallings folding, which decides
    /// whether it generates and spells the generators when it does.
    pub fn invert(&self) -> Result<FreeMap, NotAutomorphism> {
        let det = determinant(&self.abelianization_matrix()).expect("square");
        if !det.abs().is_one() {
            return Err(NotAutomorphism {
                reason: NotAutomorphismReason::Determinant,
            });
        }

        let r = self.rank;
        let mut tuple = NielsenTuple {
            words: self.images.clone(),
            // exprs[i] spells words[i] in formal symbols y_j standing for images[j]
            exprs: (1..=r).map(|g| Word::generator(r, g).expect("in range")).collect(),
        };
        while let Some(mv) = tuple.best_move() {
            tuple.apply(mv);
        }

        let g = match tuple.signed_permutation_inverse() {
            Some(g) => g,
            None => {
                // Nielsen stalled; fold the reduced tuple and translate back.
                let spelled = fold_to_rose(&tuple.words).ok_or(NotAutomorphism {
                    reason: NotAutomorphismReason::NotABasis,
                })?;
                let exprs = FreeMap::new(tuple.exprs).expect("rank preserved");
                let images = spelled
                    .iter()
                    .map(|v| exprs.apply(v))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|_| NotAutomorphism {
                        reason: NotAutomorphismReason::NotABasis,
                    })?;
                FreeMap::new(images).expect("rank preserved")
            }
        };
        debug_assert!(self.compose(&g).is_ok_and(|h| h.is_identity()));
        Ok(g)
    }

    pub fn is_automorphism(&self) -> bool {
        self.invert().is_ok()
    }

    /// Elementary Nielsen automorphism for `mv`.
    pub fn elementary(rank: usize, mv: NielsenMove) -> Result<FreeMap> {
        let mut images: Vec<Word> = (1..=rank)
            .map(|g| Word::generator(rank, g).expect("in range"))
            .collect();
        let check = |g: usize| {
            if g >= rank {
                Err(Error::InvalidLetter { gen: g + 1, rank })
            } else {
                Ok(())
            }
        };
        match mv {
            NielsenMove::Swap(i, j) => {
                check(i)?;
                check(j)?;
                images.swap(i, j);
            }
            NielsenMove::Invert(i) => {
                check(i)?;
                images[i] = images[i].inverse();
            }
            NielsenMove::Multiply {
                target,
                by,
                inverse,
                left,
            } => {
                check(target)?;
                check(by)?;
                if target == by {
                    return Err(Error::Invalid("a generator cannot multiply itself".into()));
                }
                let factor = Word::reduce(rank, [Letter::new(by + 1, inverse)])?;
                images[target] = if left {
                    &factor * &images[target]
                } else {
                    &images[target] * &factor
                };
            }
        }
        FreeMap::new(images)
    }

    /// Product of `moves` random elementary Nielsen automorphisms.
    pub fn random_automorphism<R: Rng + ?Sized>(rank: usize, moves: usize, rng: &mut R) -> FreeMap {
        let mut f = FreeMap::identity(rank);
        for _ in 0..moves {
            let mv = NielsenMove::random(rank, rng);
            let e = FreeMap::elementary(rank, mv).expect("valid move");
            f = e.compose(&f).expect("same rank");
        }
        f
    }
}

impl fmt::Display for FreeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_automorphism(self))
    }
}

impl fmt::Debug for FreeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeMap({self})")
    }
}

/// An elementary Nielsen transformation on a tuple (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NielsenMove {
    Swap(usize, usize),
    Invert(usize),
    /// `target <- by^(+-1) * target` when `left`, else `target * by^(+-1)`.
    Multiply {
        target: usize,
        by: usize,
        inverse: bool,
        left: bool,
    },
}

impl NielsenMove {
    /// A uniformly chosen move. Rank 1 only has `Invert`.
    pub fn random<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> NielsenMove {
        if rank == 1 {
            return NielsenMove::Invert(0);
        }
        match rng.gen_range(0..6) {
            0 => {
                let i = rng.gen_range(0..rank);
                let j = (i + rng.gen_range(1..rank)) % rank;
                NielsenMove::Swap(i, j)
            }
            1 => NielsenMove::Invert(rng.gen_range(0..rank)),
            _ => {
                let target = rng.gen_range(0..rank);
                let by = (target + rng.gen_range(1..rank)) % rank;
                NielsenMove::Multiply {
                    target,
                    by,
                    inverse: rng.gen(),
                    left: rng.gen(),
                }
            }
        }
    }
}

struct NielsenTuple {
    words: Vec<Word>,
    exprs: Vec<Word>,
}

fn multiply(w: &Word, by: &Word, inverse: bool, left: bool) -> Word {
    let factor = if inverse { by.inverse() } else { by.clone() };
    if left {
        &factor * w
    } else {
        w * &factor
    }
}

impl NielsenTuple {
    fn total_len(words: &[Word]) -> usize {
        words.iter().map(Word::len).sum()
    }

    fn transformed(words: &[Word], mv: NielsenMove) -> Vec<Word> {
        let mut out = words.to_vec();
        match mv {
            NielsenMove::Swap(i, j) => out.swap(i, j),
            NielsenMove::Invert(i) => out[i] = out[i].inverse(),
            NielsenMove::Multiply {
                target,
                by,
                inverse,
                left,
            } => out[target] = multiply(&words[target], &words[by], inverse, left),
        }
        out
    }

    /// The move with the least (total length, tuple) key, if it beats the
    /// current tuple.
    fn best_move(&self) -> Option<NielsenMove> {
        let r = self.words.len();
        let mut candidates = Vec::new();
        for i in 0..r {
            candidates.push(NielsenMove::Invert(i));
            for j in 0..r {
                if i == j {
                    continue;
                }
                if i < j {
                    candidates.push(NielsenMove::Swap(i, j));
                }
                for inverse in [false, true] {
                    for left in [false, true] {
                        candidates.push(NielsenMove::Multiply {
                            target: i,
                            by: j,
                            inverse,
                            left,
                        });
                    }
                }
            }
        }

        let key = |words: &[Word]| (Self::total_len(words), words.to_vec());
        let mut best: Option<(NielsenMove, (usize, Vec<Word>))> = None;
        for mv in candidates {
            let k = key(&Self::transformed(&self.words, mv));
            if best.as_ref().is_none_or(|(_, b)| k.cmp(b) == Ordering::Less) {
                best = Some((mv, k));
            }
        }
        let (mv, k) = best?;
        (k < key(&self.words)).then_some(mv)
    }

    fn apply(&mut self, mv: NielsenMove) {
        self.words = Self::transformed(&self.words, mv);
        self.exprs = Self::transformed(&self.exprs, mv);
    }

    /// The inverse map when the tuple is a signed permutation of the basis.
    fn signed_permutation_inverse(&self) -> Option<FreeMap> {
        let mut inverse: Vec<Option<Word>> = vec![None; self.words.len()];
        for (w, e) in self.words.iter().zip(&self.exprs) {
            match w.letters() {
                [x] if inverse[x.index()].is_none() => {
                    inverse[x.index()] = Some(if x.is_inverse() { e.inverse() } else { e.clone() });
                }
                _ => return None,
            }
        }
        FreeMap::new(inverse.into_iter().collect::<Option<Vec<_>>>()?).ok()
    }
}

#[derive(Clone, Debug)]
struct FoldEdge {
    from: usize,
    to: usize,
    gen: usize,
    /// Element of the free group on symbols standing for the tuple entries.
    label: Word,
}

/// Stallings folding of the wedge of loops spelling `words`.
///
/// Every edge carries a label in the free group on formal symbols, one per
/// entry of `words`, such that reading any closed path at the base vertex
/// spells the image of its label product. Folds identify two edges after a
/// gauge change at the vertex being eliminated, which keeps that property.
/// Returns, for each generator, the label of its loop in the final rose, or
/// `None` if the words do not form a basis: either a fold drops the rank
/// or the folded graph is not a rose.
fn fold_to_rose(words: &[Word]) -> Option<Vec<Word>> {
    let r = words.len();
    const BASE: usize = 0;
    let mut edges: Vec<FoldEdge> = Vec::new();
    let mut vertex_count = 1;
    for (j, w) in words.iter().enumerate() {
        if w.is_empty() {
            return None;
        }
        let symbol = Word::generator(r, j + 1).expect("in range");
        let mut prev = BASE;
        for (i, x) in w.letters().iter().enumerate() {
            let next = if i + 1 == w.len() {
                BASE
            } else {
                vertex_count += 1;
                vertex_count - 1
            };
            let label = match (i, x.is_inverse()) {
                (0, false) => symbol.clone(),
                (0, true) => symbol.inverse(),
                _ => Word::identity(r),
            };
            let (from, to) = if x.is_inverse() { (next, prev) } else { (prev, next) };
            edges.push(FoldEdge {
                from,
                to,
                gen: x.index(),
                label,
            });
            prev = next;
        }
    }

    loop {
        // (vertex, generator, outgoing) -> edge
        let mut seen = std::collections::HashMap::new();
        let mut fold = None;
        'scan: for (k, e) in edges.iter().enumerate() {
            for key in [(e.from, e.gen, true), (e.to, e.gen, false)] {
                if let Some(&other) = seen.get(&key) {
                    fold = Some((other, k, key.2));
                    break 'scan;
                }
                seen.insert(key, k);
            }
        }
        let Some((first, second, outgoing)) = fold else {
            break;
        };
        let far = |e: &FoldEdge| if outgoing { e.to } else { e.from };
        let (mut keep, mut drop) = (first, second);
        if far(&edges[keep]) == far(&edges[drop]) {
            // parallel edges: folding them lowers the rank
            return None;
        }
        if far(&edges[drop]) == BASE {
            std::mem::swap(&mut keep, &mut drop);
        }
        let survivor = far(&edges[keep]);
        let doomed = far(&edges[drop]);
        let (lk, ld) = (&edges[keep].label, &edges[drop].label);
        let gauge = if outgoing {
            &ld.inverse() * lk
        } else {
            ld * &lk.inverse()
        };
        let gauge_inv = gauge.inverse();
        for e in edges.iter_mut() {
            if e.to == doomed {
                e.label = &e.label * &gauge;
            }
            if e.from == doomed {
                e.label = &gauge_inv * &e.label;
            }
        }
        debug_assert_eq!(edges[keep].label, edges[drop].label);
        edges.swap_remove(drop);
        for e in edges.iter_mut() {
            if e.from == doomed {
                e.from = survivor;
            }
            if e.to == doomed {
                e.to = survivor;
            }
        }
    }

    if edges.len() != r || edges.iter().any(|e| e.from != BASE || e.to != BASE) {
        return None;
    }
    let mut spelled: Vec<Option<Word>> = vec![None; r];
    for e in edges {
        spelled[e.gen] = Some(e.label);
    }
    spelled.into_iter().collect()
}
