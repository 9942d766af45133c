//! Words over a finite generating set and their conjugacy canonical forms.
//!
//! Generators are printed as `a`, `b`, `c`, ... and their inverses as `A`,
//! `B`, `C`, .... Letters are ordered `a < A < b < B < ...`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Generators beyond this count have no single-letter symbol.
pub const MAX_GENERATORS: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("`{0}` is not a generator symbol")]
    BadSymbol(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: u16,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: u16, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub const fn gen(generator: u16) -> Self {
        Self::new(generator, false)
    }

    pub fn inv(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    pub fn key(self) -> u32 {
        2 * self.generator as u32 + self.inverse as u32
    }

    pub fn symbol(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.generator as u8) as char
    }

    pub fn from_symbol(c: char) -> Result<Self, WordError> {
        match c {
            'a'..='z' => Ok(Self::new(c as u16 - 'a' as u16, false)),
            'A'..='Z' => Ok(Self::new(c as u16 - 'A' as u16, true)),
            _ => Err(WordError::BadSymbol(c)),
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn gen(g: u16) -> Self {
        Self(vec![Letter::gen(g)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Free product with cancellation at the junction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `g self g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }

    pub fn free_reduce(&self) -> Word {
        Word::empty().concat(self)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(f), Some(l)) if self.0.len() > 1 => *f != l.inv(),
            _ => true,
        }
    }

    /// Freely and cyclically reduced form; conjugate to `self`.
    pub fn cyclic_reduce(&self) -> Word {
        let mut w = self.free_reduce().0;
        let (mut i, mut j) = (0usize, w.len());
        while j - i > 1 && w[i] == w[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        w.truncate(j);
        w.drain(..i);
        Word(w)
    }

    /// Lexicographically least cyclic rotation of the reduced word or of its
    /// inverse. Two words in a free group are conjugate up to inversion iff
    /// their canonical forms agree.
    pub fn canonical(&self) -> Word {
        let w = self.cyclic_reduce();
        if w.is_empty() {
            return w;
        }
        let a = least_rotation(&w.0);
        let b = least_rotation(&w.inverse().0);
        Word(a.min(b))
    }

    /// Substitutes `images[g]` for every occurrence of generator `g`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::empty();
        for l in &self.0 {
            let img = &images[l.generator as usize];
            if l.inverse {
                out = out.concat(&img.inverse());
            } else {
                out = out.concat(img);
            }
        }
        out
    }

    /// Number of occurrences of generator `g`, counting inverses.
    pub fn occurrences(&self, g: u16) -> usize {
        self.0.iter().filter(|l| l.generator == g).count()
    }

    /// `true` if the word only differs from `self` by a rotation.
    pub fn is_rotation_of(&self, other: &Word) -> bool {
        self.len() == other.len()
            && (self.is_empty() || (0..self.len()).any(|k| rotate(&self.0, k) == other.0))
    }
}

fn rotate(w: &[Letter], k: usize) -> Vec<Letter> {
    w[k..].iter().chain(&w[..k]).copied().collect()
}

fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    (0..w.len()).map(|k| rotate(w, k)).min().unwrap_or_default()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses letters, ignoring whitespace. `""` and `"1"` give the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "1" {
            return Ok(Word::empty());
        }
        t.chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::from_symbol)
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}
