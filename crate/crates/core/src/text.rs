//! Text formats shared by the CLI, fixtures and bindings.
//!
//! Word syntax: lowercase `a..z` are generators 1..26, uppercase or a `^-1`
//! suffix inverts, `^k` repeats (negative `k` inverts), `(...)` groups, `1`
//! is the empty word, whitespace is ignored.
//!
//! Automorphism rules: `a->b; b->c; c->cA`, separated by `;` or newlines.
//!
//! Presentations: `gens: a b c t; rel: TatB; rel: TbtC; rel: TctaC`.
//!
//! Permutation groups: one generator per line in cycle notation.

use crate::error::{Error, Result};
use crate::free_auto::FreeMap;
use crate::mapping_torus::Presentation;
use crate::word::{push_reduced, Letter, Word, DEFAULT_LETTER_CAP};

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
    ch: char,
}

struct Cursor {
    chars: Vec<Pos>,
    at: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        let mut chars = Vec::with_capacity(text.len());
        let (mut line, mut column) = (1, 1);
        for ch in text.chars() {
            chars.push(Pos { line, column, ch });
            if ch == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Cursor { chars, at: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|p| p.ch)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.at += 1;
        }
        c
    }

    /// Skips whitespace; newlines too unless they are significant.
    fn skip_ws(&mut self, keep_newlines: bool) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() && !(keep_newlines && c == '\n') {
                self.at += 1;
            } else {
                break;
            }
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = match self.chars.get(self.at) {
            Some(p) => (p.line, p.column),
            None => match self.chars.last() {
                Some(p) if p.ch == '\n' => (p.line + 1, 1),
                Some(p) => (p.line, p.column + 1),
                None => (1, 1),
            },
        };
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn expect_str(&mut self, s: &str) -> Result<()> {
        for want in s.chars() {
            if self.peek() != Some(want) {
                return Err(self.error(format!("expected `{s}`")));
            }
            self.at += 1;
        }
        Ok(())
    }
}

/// Maps a lowercase letter to a 1-based generator index.
type Resolver<'a> = dyn Fn(char) -> Result<usize> + 'a;

fn positional(rank: usize) -> impl Fn(char) -> Result<usize> {
    move |c| {
        let gen = (c as u8 - b'a') as usize + 1;
        if gen > rank {
            Err(Error::InvalidLetter { gen, rank })
        } else {
            Ok(gen)
        }
    }
}

/// Parses a word until end of input, a `)`, or any character in `stop`.
fn parse_sequence(
    cur: &mut Cursor,
    resolve: &Resolver<'_>,
    stop: &[char],
) -> Result<Vec<Letter>> {
    let keep_newlines = stop.contains(&'\n');
    let mut out: Vec<Letter> = Vec::new();
    loop {
        cur.skip_ws(keep_newlines);
        let c = match cur.peek() {
            None => break,
            Some(c) if c == ')' || stop.contains(&c) => break,
            Some(c) => c,
        };
        let atom: Vec<Letter> = if c == '(' {
            cur.bump();
            let inner = parse_sequence(cur, resolve, &[])?;
            cur.skip_ws(false);
            if cur.bump() != Some(')') {
                return Err(cur.error("unclosed `(`"));
            }
            inner
        } else if c == '1' {
            cur.bump();
            Vec::new()
        } else if c.is_ascii_alphabetic() {
            let gen = resolve(c.to_ascii_lowercase())?;
            cur.bump();
            vec![Letter::new(gen, c.is_ascii_uppercase())]
        } else {
            return Err(cur.error(format!("unexpected character `{c}`")));
        };
        let mut exponent: i64 = 1;
        loop {
            cur.skip_ws(keep_newlines);
            if cur.peek() != Some('^') {
                break;
            }
            cur.bump();
            cur.skip_ws(false);
            exponent = exponent
                .checked_mul(parse_integer(cur)?)
                .ok_or_else(|| cur.error("exponent overflow"))?;
        }
        let reps = exponent.unsigned_abs() as usize;
        let grown = atom.len().saturating_mul(reps).saturating_add(out.len());
        if grown > DEFAULT_LETTER_CAP {
            return Err(Error::CapacityExceeded {
                len: grown,
                cap: DEFAULT_LETTER_CAP,
            });
        }
        let block: Vec<Letter> = if exponent < 0 {
            atom.iter().rev().map(|x| x.inverse()).collect()
        } else {
            atom
        };
        for _ in 0..reps {
            for &x in &block {
                push_reduced(&mut out, x);
            }
        }
    }
    Ok(out)
}

fn parse_integer(cur: &mut Cursor) -> Result<i64> {
    let mut sign = 1;
    match cur.peek() {
        Some('-') => {
            sign = -1;
            cur.bump();
        }
        Some('+') => {
            cur.bump();
        }
        _ => {}
    }
    let mut value: i64 = 0;
    let mut digits = 0;
    while let Some(d) = cur.peek().and_then(|c| c.to_digit(10)) {
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(d as i64))
            .ok_or_else(|| cur.error("integer overflow"))?;
        digits += 1;
        cur.bump();
    }
    if digits == 0 {
        return Err(cur.error("expected an integer exponent"));
    }
    Ok(sign * value)
}

pub fn parse_word(rank: usize, text: &str) -> Result<Word> {
    let mut cur = Cursor::new(text);
    let resolve = positional(rank);
    let letters = parse_sequence(&mut cur, &resolve, &[])?;
    if cur.peek().is_some() {
        return Err(cur.error("unbalanced `)`"));
    }
    Ok(Word::from_reduced(rank, letters))
}

/// Parses the automorphism rule syntax. The rank is the number of rules
/// unless `rank_override` is given.
pub fn parse_automorphism(text: &str, rank_override: Option<usize>) -> Result<FreeMap> {
    let mut cur = Cursor::new(text);
    // (generator, rule start) pairs, parsed in two passes so images can be
    // checked against the final rank.
    let mut heads: Vec<(usize, usize)> = Vec::new();
    loop {
        cur.skip_ws(false);
        match cur.peek() {
            None => break,
            Some(';') => {
                cur.bump();
                continue;
            }
            Some(c) if c.is_ascii_lowercase() => {
                let gen = (c as u8 - b'a') as usize + 1;
                cur.bump();
                cur.skip_ws(true);
                cur.expect_str("->")?;
                heads.push((gen, cur.at));
                while let Some(c) = cur.peek() {
                    if c == ';' || c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            }
            Some(c) => return Err(cur.error(format!("expected a generator, found `{c}`"))),
        }
    }
    if heads.is_empty() {
        return Err(cur.error("no rules"));
    }
    let rank = rank_override.unwrap_or(heads.len());
    if rank == 0 {
        return Err(Error::Invalid("rank must be positive".into()));
    }
    let mut images: Vec<Option<Word>> = vec![None; rank];
    for &(gen, start) in &heads {
        if gen > rank {
            return Err(Error::InvalidLetter { gen, rank });
        }
        if images[gen - 1].is_some() {
            return Err(Error::DuplicateRule(generator_name(gen)));
        }
        cur.at = start;
        let resolve = positional(rank);
        let letters = parse_sequence(&mut cur, &resolve, &[';', '\n'])?;
        if cur.peek() == Some(')') {
            return Err(cur.error("unbalanced `)`"));
        }
        images[gen - 1] = Some(Word::from_reduced(rank, letters));
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::MissingGenerator(generator_name(i + 1))))
        .collect::<Result<Vec<_>>>()?;
    FreeMap::new(images)
}

/// Rule text for a map; parses back to the same map.
pub fn format_automorphism(f: &FreeMap) -> String {
    f.images()
        .iter()
        .enumerate()
        .map(|(i, w)| format!("{}->{}", generator_name(i + 1), w))
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn generator_name(gen: usize) -> String {
    Letter::positive(gen).to_string()
}

/// Parses `gens: a b c t; rel: ...`. Names are single lowercase letters;
/// relators use the word syntax over those names.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut cur = Cursor::new(text);
    let mut names: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    loop {
        cur.skip_ws(false);
        match cur.peek() {
            None => break,
            Some(';') => {
                cur.bump();
                continue;
            }
            _ => {}
        }
        let mut keyword = String::new();
        while let Some(c) = cur.peek() {
            if c.is_ascii_alphabetic() {
                keyword.push(c);
                cur.bump();
            } else {
                break;
            }
        }
        cur.skip_ws(true);
        if cur.bump() != Some(':') {
            return Err(cur.error("expected `gens:` or `rel:`"));
        }
        match keyword.as_str() {
            "gens" => {
                if names.is_some() {
                    return Err(cur.error("duplicate `gens:`"));
                }
                let mut list: Vec<String> = Vec::new();
                loop {
                    cur.skip_ws(true);
                    match cur.peek() {
                        None | Some(';') | Some('\n') => break,
                        Some(',') => {
                            cur.bump();
                        }
                        Some(c) if c.is_ascii_lowercase() => {
                            let name = c.to_string();
                            if list.contains(&name) {
                                return Err(cur.error(format!("duplicate generator `{c}`")));
                            }
                            list.push(name);
                            cur.bump();
                            if cur.peek().is_some_and(|n| n.is_ascii_alphanumeric()) {
                                return Err(cur.error("generator names are single lowercase letters"));
                            }
                        }
                        Some(c) => return Err(cur.error(format!("bad generator name `{c}`"))),
                    }
                }
                if list.is_empty() {
                    return Err(cur.error("empty generator list"));
                }
                names = Some(list);
            }
            "rel" => {
                let Some(list) = names.as_ref() else {
                    return Err(cur.error("`rel:` before `gens:`"));
                };
                let n = list.len();
                let lookup = |c: char| -> Result<usize> {
                    list.iter()
                        .position(|s| s.starts_with(c))
                        .map(|i| i + 1)
                        .ok_or_else(|| Error::Invalid(format!("unknown generator `{c}`")))
                };
                let letters = parse_sequence(&mut cur, &lookup, &[';', '\n'])?;
                if cur.peek() == Some(')') {
                    return Err(cur.error("unbalanced `)`"));
                }
                relators.push(Word::from_reduced(n, letters));
            }
            other => return Err(cur.error(format!("unknown section `{other}`"))),
        }
    }
    let names = names.ok_or_else(|| cur.error("missing `gens:`"))?;
    Presentation::new(names, relators)
}

/// Inverse of [`parse_presentation`] for single-letter names.
pub fn format_presentation(p: &Presentation) -> String {
    let mut out = format!("gens: {}", p.generator_names().join(" "));
    for r in p.relators() {
        out.push_str("; rel: ");
        if r.is_empty() {
            out.push('1');
        }
        for x in r.letters() {
            let name = &p.generator_names()[x.gen() - 1];
            if x.is_inverse() {
                out.push_str(&name.to_uppercase());
            } else {
                out.push_str(name);
            }
        }
    }
    out
}

/// Parses one permutation in cycle notation, `(1 2 3)(4 5)`; points are
/// 1-based, separated by spaces or commas. Returns the cycles.
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut cur = Cursor::new(text);
    let mut cycles = Vec::new();
    loop {
        cur.skip_ws(false);
        match cur.bump() {
            None => break,
            Some('(') => {
                let mut cycle = Vec::new();
                loop {
                    cur.skip_ws(false);
                    match cur.peek() {
                        Some(')') => {
                            cur.bump();
                            break;
                        }
                        Some(',') => {
                            cur.bump();
                        }
                        Some(c) if c.is_ascii_digit() => {
                            let p = parse_integer(&mut cur)?;
                            if p < 1 {
                                return Err(cur.error("points are numbered from 1"));
                            }
                            if cycle.contains(&(p as usize)) {
                                return Err(cur.error(format!("point {p} repeated in a cycle")));
                            }
                            cycle.push(p as usize);
                        }
                        _ => return Err(cur.error("expected a point or `)`")),
                    }
                }
                cycles.push(cycle);
            }
            Some(c) => {
                cur.at -= 1;
                return Err(cur.error(format!("expected `(`, found `{c}`")));
            }
        }
    }
    Ok(cycles)
}

/// One generator per non-empty line; `#` starts a comment.
pub fn parse_permutation_file(text: &str) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut gens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let cycles = parse_cycles(body).map_err(|e| match e {
            Error::Parse {
                column, message, ..
            } => Error::Parse {
                line: i + 1,
                column,
                message,
            },
            other => other,
        })?;
        gens.push(cycles);
    }
    Ok(gens)
}
