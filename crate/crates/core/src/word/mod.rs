//! Words in the indeterminate `X` and coefficient letters `B1..Bk`.
//!
//! A [`Word`] is a run-length encoded product of letter powers. Runs are
//! always merged and zero exponents dropped, so two words are equal exactly
//! when they spell the same product.

mod normal;
mod parse;
mod plan;

use std::fmt;

pub use normal::{normal_form, NormalForm};
pub use parse::parse_word;
pub use plan::{decompose_totally_symmetric, Step, TotallySymmetricPlan};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    /// Coefficient letter `B_i`, 1-based.
    B(usize),
}

impl Letter {
    pub fn is_x(self) -> bool {
        self == Letter::X
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X => write!(f, "X"),
            Letter::B(i) => write!(f, "B{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub letter: Letter,
    pub exp: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    factors: Vec<Factor>,
    k: usize,
}

impl Word {
    /// The empty product.
    pub fn identity(k: usize) -> Self {
        Self { factors: Vec::new(), k }
    }

    pub fn x(k: usize) -> Self {
        Self {
            factors: vec![Factor { letter: Letter::X, exp: 1 }],
            k,
        }
    }

    /// Builds a word from `(letter, exponent)` pairs, merging runs and
    /// dropping zero exponents.
    pub fn from_factors(k: usize, factors: impl IntoIterator<Item = (Letter, u32)>) -> Result<Self> {
        let mut w = Self::identity(k);
        for (letter, exp) in factors {
            if let Letter::B(i) = letter {
                if i == 0 || i > k {
                    return Err(Error::IndexOutOfRange { index: i, k });
                }
            }
            w.push(letter, exp);
        }
        Ok(w)
    }

    pub fn from_letters(k: usize, letters: &[Letter]) -> Result<Self> {
        Self::from_factors(k, letters.iter().map(|&l| (l, 1)))
    }

    /// Parses a word and takes the alphabet size from the largest `B` index (at least 1).
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse_inferred(text)
    }

    /// Two-letter word written with `A` and `B`, mapped to `X` and `B1`.
    pub fn from_ab(text: &str) -> Result<Self> {
        let mut w = Self::identity(1);
        for (pos, c) in text.chars().enumerate() {
            match c {
                'A' => w.push(Letter::X, 1),
                'B' => w.push(Letter::B(1), 1),
                c if c.is_whitespace() => {}
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("expected A or B, found `{c}`"),
                    })
                }
            }
        }
        Ok(w)
    }

    /// Spells a word over `{X, B1}` with `A` for `X` and `B` for `B1`.
    pub fn to_ab_string(&self) -> Option<String> {
        let mut s = String::new();
        for f in &self.factors {
            let c = match f.letter {
                Letter::X => 'A',
                Letter::B(1) => 'B',
                Letter::B(_) => return None,
            };
            s.extend(std::iter::repeat_n(c, f.exp as usize));
        }
        Some(s)
    }

    fn push(&mut self, letter: Letter, exp: u32) {
        if exp == 0 {
            return;
        }
        match self.factors.last_mut() {
            Some(last) if last.letter == letter => last.exp += exp,
            _ => self.factors.push(Factor { letter, exp }),
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    /// Same word over a larger alphabet.
    pub fn with_alphabet(&self, k: usize) -> Result<Self> {
        if let Some(i) = self.max_b_index().filter(|&i| i > k) {
            return Err(Error::IndexOutOfRange { index: i, k });
        }
        Ok(Self {
            factors: self.factors.clone(),
            k,
        })
    }

    pub fn max_b_index(&self) -> Option<usize> {
        self.factors
            .iter()
            .filter_map(|f| match f.letter {
                Letter::B(i) => Some(i),
                Letter::X => None,
            })
            .max()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of letters counted with multiplicity.
    pub fn len(&self) -> usize {
        self.factors.iter().map(|f| f.exp as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Letters with multiplicity, left to right.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.factors
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.letter, f.exp as usize))
    }

    pub fn to_letters(&self) -> Vec<Letter> {
        self.letters().collect()
    }

    pub fn contains_x(&self) -> bool {
        self.factors.iter().any(|f| f.letter.is_x())
    }

    /// Total exponent on `X`.
    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| f.letter.is_x())
            .map(|f| f.exp as usize)
            .sum()
    }

    pub fn reverse(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().copied().collect(),
            k: self.k,
        }
    }

    /// Palindromic: equal to its reversal.
    pub fn is_symmetric(&self) -> bool {
        let n = self.factors.len();
        (0..n / 2).all(|i| self.factors[i] == self.factors[n - 1 - i])
    }

    /// Coefficient runs alternate with powers of `X`: no two `B` runs are
    /// adjacent and at least one `X` occurs.
    pub fn is_interlaced(&self) -> bool {
        self.contains_x()
            && self
                .factors
                .windows(2)
                .all(|w| w[0].letter.is_x() || w[1].letter.is_x())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = Self {
            factors: self.factors.clone(),
            k: self.k.max(other.k),
        };
        for f in &other.factors {
            w.push(f.letter, f.exp);
        }
        w
    }

    pub fn pow(&self, m: u32) -> Word {
        let mut w = Self::identity(self.k);
        for _ in 0..m {
            for f in &self.factors {
                w.push(f.letter, f.exp);
            }
        }
        w
    }

    /// Portion strictly left of the `j`-th occurrence of `X` (1-based,
    /// counting multiplicity inside powers).
    pub fn subword_left(&self, j: usize) -> Result<Word> {
        Ok(self.split_at_occurrence(j)?.0)
    }

    /// Portion strictly right of the `j`-th occurrence of `X`.
    pub fn subword_right(&self, j: usize) -> Result<Word> {
        Ok(self.split_at_occurrence(j)?.1)
    }

    /// `(W^L_j, W^R_j)` with `W = W^L_j X W^R_j`.
    pub fn split_at_occurrence(&self, j: usize) -> Result<(Word, Word)> {
        let s = self.degree();
        if j == 0 || j > s {
            return Err(Error::OccurrenceOutOfRange { j, degree: s });
        }
        let mut seen = 0usize;
        for (idx, f) in self.factors.iter().enumerate() {
            if !f.letter.is_x() {
                continue;
            }
            let e = f.exp as usize;
            if seen + e >= j {
                let before = (j - seen - 1) as u32;
                let after = f.exp - 1 - before;
                let mut left = Self {
                    factors: self.factors[..idx].to_vec(),
                    k: self.k,
                };
                left.push(Letter::X, before);
                let mut right = Self::identity(self.k);
                right.push(Letter::X, after);
                for g in &self.factors[idx + 1..] {
                    right.push(g.letter, g.exp);
                }
                return Ok((left, right));
            }
            seen += e;
        }
        unreachable!("occurrence index checked against degree")
    }

    /// Exchanges the roles of `X` and `B_i`.
    pub fn swap_x_with(&self, i: usize) -> Result<Word> {
        if i == 0 || i > self.k {
            return Err(Error::IndexOutOfRange { index: i, k: self.k });
        }
        Self::from_factors(
            self.k,
            self.factors.iter().map(|f| {
                let l = match f.letter {
                    Letter::X => Letter::B(i),
                    Letter::B(j) if j == i => Letter::X,
                    other => other,
                };
                (l, f.exp)
            }),
        )
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, factor) in self.factors.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", factor.letter)?;
            if factor.exp != 1 {
                write!(f, "^{}", factor.exp)?;
            }
        }
        Ok(())
    }
}

pub fn reverse(w: &Word) -> Word {
    w.reverse()
}

pub fn is_symmetric(w: &Word) -> bool {
    w.is_symmetric()
}

pub fn is_interlaced(w: &Word) -> bool {
    w.is_interlaced()
}

pub fn degree(w: &Word) -> usize {
    w.degree()
}

pub fn subword_left(w: &Word, j: usize) -> Result<Word> {
    w.subword_left(j)
}

pub fn subword_right(w: &Word, j: usize) -> Result<Word> {
    w.subword_right(j)
}

/// All words of length exactly `len` over `{X, B1}`.
pub fn all_two_letter_words(len: usize) -> impl Iterator<Item = Word> {
    (0u64..1 << len).map(move |bits| {
        let letters: Vec<Letter> = (0..len)
            .map(|p| if bits >> (len - 1 - p) & 1 == 1 { Letter::B(1) } else { Letter::X })
            .collect();
        Word::from_letters(1, &letters).expect("letters within alphabet")
    })
}
