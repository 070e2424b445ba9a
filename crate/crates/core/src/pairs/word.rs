use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which base map a letter applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Eta,
    Xi,
}

impl Letter {
    pub fn symbol(self) -> char {
        match self {
            Letter::Eta => 'E',
            Letter::Xi => 'X',
        }
    }

    pub fn other(self) -> Letter {
        match self {
            Letter::Eta => Letter::Xi,
            Letter::Xi => Letter::Eta,
        }
    }
}

/// A composition word, stored in application order: the first letter acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn single(l: Letter) -> Self {
        Self(vec![l])
    }

    /// `E^e X^x` in application order.
    pub fn powers(e: u64, x: u64) -> Self {
        let mut v = vec![Letter::Eta; e as usize];
        v.extend(std::iter::repeat(Letter::Xi).take(x as usize));
        Self(v)
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

    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&m| m == l).count()
    }

    /// `self` followed by `other` (so `other ∘ self` as maps).
    pub fn then(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, times: u64) -> Word {
        Word(self.0.repeat(times as usize))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Ok(Word::default());
        }
        s.chars()
            .map(|c| match c {
                'E' => Ok(Letter::Eta),
                'X' => Ok(Letter::Xi),
                _ => Err(Error::Parse(format!("bad letter {c:?} in word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}
