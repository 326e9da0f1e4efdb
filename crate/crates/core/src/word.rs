//! Words in a free group, written as `x1X2x1` with capitals for inverses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("malformed word {0:?}")]
    Malformed(String),
    #[error("generator x{index} out of range for rank {rank}")]
    OutOfRange { index: usize, rank: usize },
}

/// A generator `x_{generator+1}` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word over `x_1, ..., x_r` and their inverses (not necessarily reduced).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn generator(index: usize) -> Self {
        Self(vec![Letter::new(index, false)])
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free reduction.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Reduced concatenation.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v).reduced()
    }

    /// Largest generator index used plus one.
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), WordError> {
        match self.0.iter().find(|l| l.generator >= rank) {
            Some(l) => Err(WordError::OutOfRange {
                index: l.generator + 1,
                rank,
            }),
            None => Ok(()),
        }
    }

    /// Image in the abelianization `Z^rank`.
    pub fn exponent_sum(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            v[l.generator] += l.sign();
        }
        v
    }

    /// Replaces every generator by the corresponding image word, then reduces.
    pub fn substitute(&self, images: &[Word]) -> Self {
        let mut out = Vec::new();
        for l in &self.0 {
            let w = &images[l.generator];
            if l.inverse {
                out.extend(w.0.iter().rev().map(|x| x.inv()));
            } else {
                out.extend_from_slice(&w.0);
            }
        }
        Self(out).reduced()
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// `""` and `"1"` denote the identity.
    fn from_str(s: &str) -> Result<Self, WordError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::identity());
        }
        let bytes = s.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let inverse = match bytes[i] {
                b'x' => false,
                b'X' => true,
                _ => return Err(WordError::Malformed(s.into())),
            };
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let index: usize = s[start..i]
                .parse()
                .map_err(|_| WordError::Malformed(s.into()))?;
            if index == 0 {
                return Err(WordError::Malformed(s.into()));
            }
            out.push(Letter::new(index - 1, inverse));
        }
        Ok(Self(out))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(
                f,
                "{}{}",
                if l.inverse { 'X' } else { 'x' },
                l.generator + 1
            )?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
