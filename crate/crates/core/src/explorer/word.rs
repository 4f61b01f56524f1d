use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    /// `+1` or `−1`.
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Result<Self> {
        if exponent != 1 && exponent != -1 {
            return Err(Error::InvalidParameter(format!(
                "letter exponent must be ±1, got {exponent}"
            )));
        }
        Ok(Self {
            generator,
            exponent,
        })
    }

    pub fn inverse(self) -> Self {
        Self {
            generator: self.generator,
            exponent: -self.exponent,
        }
    }

    fn key(self) -> (usize, bool) {
        (self.generator, self.exponent < 0)
    }
}

/// `a < a⁻¹ < b < b⁻¹ < …`
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A word in the generators. Ordered shortlex: by length, then letter by letter.
///
/// Serialized as a list of nonzero integers: `±(i+1)` for generator `i` to the `±1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Word {
    letters: Vec<Letter>,
    reduced: bool,
}

impl Word {
    pub fn identity() -> Self {
        Self {
            letters: Vec::new(),
            reduced: true,
        }
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        let reduced = letters.windows(2).all(|w| w[0] != w[1].inverse());
        Self { letters, reduced }
    }

    pub fn generator(index: usize) -> Self {
        Self {
            letters: vec![Letter {
                generator: index,
                exponent: 1,
            }],
            reduced: true,
        }
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

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Free reduction.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self {
            letters: out,
            reduced: true,
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(letters).reduce()
    }

    pub(crate) fn push(&self, letter: Letter) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.extend_from_slice(&self.letters);
        let reduced = self.reduced && self.last() != Some(letter.inverse());
        letters.push(letter);
        Self { letters, reduced }
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            reduced: self.reduced,
        }
    }

    /// `w^k` for any integer `k`, reduced.
    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word::new(letters).reduce()
    }

    /// Renders with generator names, collapsing runs: `a^3 b^-1`.
    pub fn display(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            let name = names.get(l.generator).map(String::as_str).unwrap_or("?");
            let exp = run as i64 * l.exponent as i64;
            if exp == 1 {
                out.push_str(name);
            } else {
                let _ = write!(out, "{name}^{exp}");
            }
            i += run;
        }
        out
    }
}

impl From<Word> for Vec<i64> {
    fn from(w: Word) -> Self {
        w.letters
            .iter()
            .map(|l| (l.generator as i64 + 1) * l.exponent as i64)
            .collect()
    }
}

impl TryFrom<Vec<i64>> for Word {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        let letters = v
            .into_iter()
            .map(|x| match x {
                0 => Err(Error::InvalidParameter("word letters are nonzero".into())),
                x => Letter::new(x.unsigned_abs() as usize - 1, x.signum() as i8),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::new(letters))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
