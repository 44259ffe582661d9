//! The Fibonacci substitution `a -> ab, b -> a`, its fixed point `u`, points
//! of the associated subshift, and the repeatable-word combinatorics used for
//! periodic approximation.
//!
//! Fibonacci numbers are indexed by word length: `F_k = |S^k(a)|`, so
//! `F_0 = 1, F_1 = 2, F_2 = 3, F_3 = 5, ...`. Every function in this crate that
//! takes a level `k` uses this convention.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default number of letters of `u` kept in the shared prefix cache.
pub const DEFAULT_CAP: usize = 1_000_000;

/// `1/φ²`, the rotation number of the Sturmian coding of `u`.
pub const ROTATION_NUMBER: f64 = 0.381_966_011_250_105_1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    A,
    B,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::A => 'a',
            Symbol::B => 'b',
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(letters: Vec<Symbol>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&x| x == s).count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Cyclic rotation by `shift` letters to the left.
    pub fn rotate(&self, shift: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let s = shift % v.len();
            v.rotate_left(s);
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'a' => Ok(Symbol::A),
                'b' => Ok(Symbol::B),
                other => Err(Error::InvalidArgument(format!("letter `{other}` is not in {{a, b}}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

/// `F_k = |S^k(a)|` with `F_0 = 1`, `F_1 = 2`.
pub fn fib_number(k: usize) -> u64 {
    let (mut prev, mut cur) = (1u64, 1u64); // F_{-1} = |b|, F_0 = |a|
    for _ in 0..k {
        let next = prev.checked_add(cur).expect("Fibonacci number overflow");
        prev = cur;
        cur = next;
    }
    cur
}

/// Letterwise image under `a -> ab, b -> a`.
pub fn substitute(w: &Word) -> Word {
    let mut out = Vec::with_capacity(2 * w.len());
    for s in w.letters() {
        match s {
            Symbol::A => out.extend_from_slice(&[Symbol::A, Symbol::B]),
            Symbol::B => out.push(Symbol::A),
        }
    }
    Word(out)
}

/// `S^k(a)`, computed by repeated substitution.
pub fn fib_word(k: usize) -> Result<Word> {
    fib_word_capped(k, DEFAULT_CAP)
}

pub fn fib_word_capped(k: usize, cap: usize) -> Result<Word> {
    let len = fib_number(k);
    if len > cap as u64 {
        return Err(Error::LengthCap {
            requested: len as usize,
            cap,
        });
    }
    let mut w = Word(vec![Symbol::A]);
    for _ in 0..k {
        w = substitute(&w);
    }
    Ok(w)
}

/// A memoized prefix of the fixed point `u`, built once up to `cap` letters.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    letters: Vec<Symbol>,
}

impl FixedPoint {
    pub fn with_cap(cap: usize) -> Self {
        let mut prev = vec![Symbol::A];
        let mut cur = vec![Symbol::A, Symbol::B];
        while cur.len() < cap {
            let mut next = cur.clone();
            next.extend_from_slice(&prev);
            prev = cur;
            cur = next;
        }
        cur.truncate(cap.max(1));
        FixedPoint { letters: cur }
    }

    /// Shared cache with [`DEFAULT_CAP`] letters.
    pub fn global() -> &'static FixedPoint {
        static CACHE: OnceLock<FixedPoint> = OnceLock::new();
        CACHE.get_or_init(|| FixedPoint::with_cap(DEFAULT_CAP))
    }

    pub fn cap(&self) -> usize {
        self.letters.len()
    }

    pub fn prefix(&self, n: usize) -> Result<&[Symbol]> {
        if n > self.letters.len() {
            return Err(Error::LengthCap {
                requested: n,
                cap: self.letters.len(),
            });
        }
        Ok(&self.letters[..n])
    }

    pub fn letter(&self, n: usize) -> Result<Symbol> {
        self.letters.get(n).copied().ok_or(Error::LengthCap {
            requested: n + 1,
            cap: self.letters.len(),
        })
    }

    /// Prefix long enough to contain every factor of length `len`.
    fn search_prefix(&self, len: usize) -> Result<&[Symbol]> {
        let mut k = 0;
        while fib_number(k) < len as u64 {
            k += 1;
        }
        let needed = fib_number(k + 3) as usize + len;
        self.prefix(needed.min(self.cap()).max(len.min(self.cap())))
    }

    pub fn is_factor(&self, w: &Word) -> Result<bool> {
        if w.is_empty() {
            return Err(Error::InvalidArgument("empty word".into()));
        }
        let hay = self.search_prefix(w.len())?;
        Ok(hay.windows(w.len()).any(|x| x == w.letters()))
    }

    /// True iff `w` is a cyclic rotation of `u_0 ... u_{|w|-1}`.
    pub fn is_repeatable(&self, w: &Word) -> Result<bool> {
        if !self.is_factor(w)? {
            return Err(Error::NotAFactor(w.to_string()));
        }
        let n = w.len();
        let p = self.prefix(n)?;
        let doubled: Vec<Symbol> = p.iter().chain(p[..n - 1].iter()).copied().collect();
        Ok(doubled.windows(n).any(|x| x == w.letters()))
    }

    /// Distinct factors of `u` of the given length.
    pub fn factors(&self, len: usize) -> Result<BTreeSet<Word>> {
        if len == 0 {
            return Err(Error::InvalidArgument("factor length must be positive".into()));
        }
        let hay = self.search_prefix(len)?;
        Ok(hay.windows(len).map(Word::from).collect())
    }

    pub fn factor_census(&self, k: usize) -> Result<FactorCensus> {
        if k < 2 {
            return Err(Error::InvalidArgument("factor census needs k >= 2".into()));
        }
        let len = fib_number(k) as usize;
        let factors = self.factors(len)?;
        let mut repeatable = 0;
        let mut nonrepeatable = Vec::new();
        for w in &factors {
            if self.is_repeatable(w)? {
                repeatable += 1;
            } else {
                nonrepeatable.push(w.clone());
            }
        }
        if repeatable != len || nonrepeatable.len() != 1 {
            return Err(Error::Inconsistent(format!(
                "length {len}: {repeatable} repeatable and {} nonrepeatable factors",
                nonrepeatable.len()
            )));
        }
        Ok(FactorCensus {
            k,
            length: len,
            count: factors.len(),
            repeatable,
            nonrepeatable_word: nonrepeatable.pop().unwrap(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCensus {
    pub k: usize,
    pub length: usize,
    pub count: usize,
    pub repeatable: usize,
    pub nonrepeatable_word: Word,
}

pub fn fixed_point_prefix(n: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::InvalidArgument("prefix length must be positive".into()));
    }
    FixedPoint::global().prefix(n).map(Word::from)
}

pub fn is_factor(w: &Word) -> Result<bool> {
    FixedPoint::global().is_factor(w)
}

pub fn is_repeatable(w: &Word) -> Result<bool> {
    FixedPoint::global().is_repeatable(w)
}

pub fn factor_census(k: usize) -> Result<FactorCensus> {
    FixedPoint::global().factor_census(k)
}

/// The unique nonrepeatable factor of length `F_k`, read off `S^{k+2}(a)`:
/// writing `S^{k+2}(a) = v w x` with `|x| = 1` and `|w| = F_k`, this is `w`.
pub fn nonrepeatable_by_construction(k: usize) -> Result<Word> {
    let big = fib_word(k + 2)?;
    let len = fib_number(k) as usize;
    let end = big.len() - 1;
    Ok(Word::from(&big.letters()[end - len..end]))
}

/// A point of the Fibonacci subshift, indexable over all integers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SubshiftPoint {
    /// `n -> ω^(u)_{n+j}` where `ω^(u)` agrees with `u` on `n >= 0` and is
    /// extended to the left by `... a b a a b` (so `ω_{-1} = b`, `ω_{-2} = a`).
    Shift(u64),
    /// Sturmian coding: `ω_n = b` iff `{(n+1)/φ² + θ} ∈ [1 - 1/φ², 1)`.
    Rotation(f64),
}

impl SubshiftPoint {
    pub fn fixed_point() -> Self {
        SubshiftPoint::Shift(0)
    }

    pub fn shift(j: u64) -> Self {
        SubshiftPoint::Shift(j)
    }

    pub fn rotation(theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::InvalidPhase(theta));
        }
        Ok(SubshiftPoint::Rotation(theta))
    }

    pub fn symbol(&self, n: i64) -> Result<Symbol> {
        match *self {
            SubshiftPoint::Shift(j) => two_sided_fixed_point(n + j as i64),
            SubshiftPoint::Rotation(theta) => {
                let x = ((n + 1) as f64 * ROTATION_NUMBER + theta).rem_euclid(1.0);
                Ok(if x >= 1.0 - ROTATION_NUMBER {
                    Symbol::B
                } else {
                    Symbol::A
                })
            }
        }
    }

    pub fn window(&self, start: i64, len: usize) -> Result<Word> {
        (start..start + len as i64)
            .map(|n| self.symbol(n))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// The subsequence of `F_0, ..., F_{max_k}` for which `ω_0 ... ω_{F_k - 1}`
    /// is repeatable.
    pub fn repeatable_prefix_lengths(&self, max_k: usize) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for k in 0..=max_k {
            let f = fib_number(k);
            let w = self.window(0, f as usize)?;
            if is_repeatable(&w)? {
                out.push(f);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SubshiftPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubshiftPoint::Shift(0) => write!(f, "u"),
            SubshiftPoint::Shift(j) => write!(f, "shift:{j}"),
            SubshiftPoint::Rotation(t) => write!(f, "rot:{t}"),
        }
    }
}

impl FromStr for SubshiftPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "u" {
            return Ok(SubshiftPoint::fixed_point());
        }
        if let Some(j) = s.strip_prefix("shift:") {
            let j = j
                .parse::<u64>()
                .map_err(|e| Error::InvalidArgument(format!("bad shift `{j}`: {e}")))?;
            return Ok(SubshiftPoint::Shift(j));
        }
        if let Some(t) = s.strip_prefix("rot:") {
            let t = t
                .parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("bad phase `{t}`: {e}")))?;
            return SubshiftPoint::rotation(t);
        }
        Err(Error::InvalidArgument(format!(
            "omega must be `u`, `shift:J` or `rot:THETA`, got `{s}`"
        )))
    }
}

fn two_sided_fixed_point(m: i64) -> Result<Symbol> {
    let u = FixedPoint::global();
    if m >= 0 {
        return u.letter(m as usize);
    }
    // S^{2j+1}(a) is both a prefix of u and a suffix of S^{2j+3}(a).
    let mut k = 1;
    while (fib_number(k) as i64) < -m {
        k += 2;
    }
    u.letter((fib_number(k) as i64 + m) as usize)
}
