//! Words in a free group of finite rank.
//!
//! A [`Word`] is always freely reduced; reduction happens at construction.
//! A [`CyclicWord`] is the canonical representative of a conjugacy class:
//! cyclically reduced, then rotated to the least rotation under the letter
//! order (generator ascending, positive before negative).

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Default cap on the number of letters any single word may reach.
pub const DEFAULT_LETTER_CAP: usize = 10_000_000;

/// A generator or its inverse.
///
/// Stored as `2 * (gen - 1) + inverse`, so the derived order is exactly the
/// canonical letter order and inversion is a bit flip.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    /// `gen` is 1-based.
    pub fn new(gen: usize, inverse: bool) -> Self {
        assert!(gen >= 1, "generator indices start at 1");
        Letter(((gen as u32 - 1) << 1) | inverse as u32)
    }

    pub fn positive(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    pub fn negative(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    pub fn gen(self) -> usize {
        (self.0 >> 1) as usize + 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Zero-based generator index.
    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.gen();
        if g <= 26 {
            let c = (b'a' + (g - 1) as u8) as char;
            if self.is_inverse() {
                write!(f, "{}", c.to_ascii_uppercase())
            } else {
                write!(f, "{c}")
            }
        } else if self.is_inverse() {
            write!(f, "x{g}^-1")
        } else {
            write!(f, "x{g}")
        }
    }
}

/// Pushes `x` onto a freely reduced stack, cancelling against the top.
#[inline]
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, x: Letter) {
    if stack.last() == Some(&x.inverse()) {
        stack.pop();
    } else {
        stack.push(x);
    }
}

/// A freely reduced word in the free group of rank `rank`.
///
/// The derived order compares rank, then letters lexicographically (a proper
/// prefix sorts first).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    /// Freely reduces `raw`, checking every generator index against `rank`.
    pub fn reduce<I>(rank: usize, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut stack = Vec::new();
        for x in raw {
            if x.gen() > rank {
                return Err(Error::InvalidLetter { gen: x.gen(), rank });
            }
            push_reduced(&mut stack, x);
        }
        Ok(Word {
            rank,
            letters: stack,
        })
    }

    /// Builds a word from signed generator indices (`-2` is the inverse of
    /// generator 2). Zeros are rejected.
    pub fn from_signed(rank: usize, raw: &[i64]) -> Result<Self> {
        let mut letters = Vec::with_capacity(raw.len());
        for &x in raw {
            if x == 0 {
                return Err(Error::InvalidLetter { gen: 0, rank });
            }
            letters.push(Letter::new(x.unsigned_abs() as usize, x < 0));
        }
        Word::reduce(rank, letters)
    }

    /// Caller guarantees `letters` is freely reduced and in range.
    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        debug_assert!(letters.iter().all(|x| x.gen() <= rank));
        Word { rank, letters }
    }

    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, gen: usize) -> Result<Self> {
        Word::reduce(rank, [Letter::positive(gen)])
    }

    /// Parses the shared word syntax (`caB^2`, `a^-1`, `(ab)^3`, `1`).
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        crate::text::parse_word(rank, text)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Signed generator indices.
    pub fn to_signed(&self) -> Vec<i64> {
        self.letters
            .iter()
            .map(|x| x.sign() * x.gen() as i64)
            .collect()
    }

    pub fn inverse(&self) -> Self {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|x| x.inverse()).collect(),
        }
    }

    /// Reduced product `self * other`.
    pub fn product(&self, other: &Word) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let mut letters = self.letters.clone();
        for &x in &other.letters {
            push_reduced(&mut letters, x);
        }
        Ok(Word {
            rank: self.rank,
            letters,
        })
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Signed exponent sum of each generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.rank];
        for x in &self.letters {
            sums[x.index()] += x.sign();
        }
        sums
    }

    /// Occurrences of each generator, ignoring sign.
    pub fn letter_counts(&self) -> Vec<u64> {
        let mut counts = vec![0; self.rank];
        for x in &self.letters {
            counts[x.index()] += 1;
        }
        counts
    }

    /// Splits `self = conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let (start, end) = cyclic_core_bounds(&self.letters);
        let core = Word::from_reduced(self.rank, self.letters[start..end].to_vec());
        let conjugator = Word::from_reduced(self.rank, self.letters[..start].to_vec());
        (core, conjugator)
    }

    /// The cyclically reduced core alone.
    pub fn cyclic_core(&self) -> Word {
        let (start, end) = cyclic_core_bounds(&self.letters);
        Word::from_reduced(self.rank, self.letters[start..end].to_vec())
    }

    /// Length of the cyclically reduced core; a conjugacy invariant.
    pub fn cyclic_length(&self) -> usize {
        let (start, end) = cyclic_core_bounds(&self.letters);
        end - start
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&first), Some(&last)) => self.letters.len() < 2 || first != last.inverse(),
            _ => true,
        }
    }

    pub fn canonical_cyclic(&self) -> CyclicWord {
        CyclicWord::from_word(self)
    }
}

/// Bounds `[start, end)` of the cyclic core of a freely reduced sequence.
fn cyclic_core_bounds(letters: &[Letter]) -> (usize, usize) {
    let (mut start, mut end) = (0, letters.len());
    while end - start >= 2 && letters[start] == letters[end - 1].inverse() {
        start += 1;
        end -= 1;
    }
    (start, end)
}

/// Index of the lexicographically least rotation of `s`.
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            Ordering::Equal => {
                k += 1;
                continue;
            }
            Ordering::Greater => i += k + 1,
            Ordering::Less => j += k + 1,
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

impl<'a> Mul<&'a Word> for &'a Word {
    type Output = Word;

    /// Panics on rank mismatch; use [`Word::product`] for the fallible form.
    fn mul(self, rhs: &'a Word) -> Word {
        self.product(rhs).expect("word ranks must agree")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for x in &self.letters {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Canonical representative of a conjugacy class.
///
/// Ordered shortlex: shorter classes first, then by letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn from_word(w: &Word) -> Self {
        let (start, end) = cyclic_core_bounds(&w.letters);
        CyclicWord::from_cyclically_reduced(w.rank, &w.letters[start..end])
    }

    /// Caller guarantees `core` is cyclically reduced.
    pub(crate) fn from_cyclically_reduced(rank: usize, core: &[Letter]) -> Self {
        let shift = least_rotation(core);
        let mut letters = Vec::with_capacity(core.len());
        letters.extend_from_slice(&core[shift..]);
        letters.extend_from_slice(&core[..shift]);
        CyclicWord { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word::from_reduced(self.rank, self.letters.clone())
    }
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_word())
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord{self}")
    }
}
