use super::FractalKind;
use crate::error::{invalid, Result};

/// A finite address `w = w_1 ... w_n` in the digit alphabet of a fractal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    digits: Vec<u8>,
}

impl Word {
    pub fn new(kind: FractalKind, digits: Vec<u8>) -> Result<Self> {
        let b = kind.alphabet_size() as u8;
        if let Some(d) = digits.iter().find(|&&d| d >= b) {
            return invalid(format!("digit {d} out of range for {kind}"));
        }
        Ok(Word { digits })
    }

    #[cfg(test)]
    pub(crate) fn from_digits_unchecked(digits: Vec<u8>) -> Self {
        Word { digits }
    }

    pub fn empty() -> Self {
        Word { digits: Vec::new() }
    }

    pub fn parse(kind: FractalKind, s: &str) -> Result<Self> {
        let mut digits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c.to_digit(10) {
                Some(d) => digits.push(d as u8),
                None => return invalid(format!("bad digit '{c}' in word '{s}'")),
            }
        }
        Word::new(kind, digits)
    }

    /// The constant word `i^n`.
    pub fn power(digit: u8, n: usize) -> Self {
        Word { digits: vec![digit; n] }
    }

    pub fn level(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Word { digits }
    }

    pub fn push(&mut self, d: u8) {
        self.digits.push(d);
    }

    pub fn pop(&mut self) -> Option<u8> {
        self.digits.pop()
    }

    pub fn child(&self, d: u8) -> Word {
        let mut w = self.clone();
        w.digits.push(d);
        w
    }

    /// The parent `w^-`, or `None` for the empty word.
    pub fn parent(&self) -> Option<Word> {
        if self.digits.is_empty() {
            None
        } else {
            Some(Word { digits: self.digits[..self.digits.len() - 1].to_vec() })
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word { digits: self.digits[..n.min(self.digits.len())].to_vec() }
    }

    pub fn last(&self) -> Option<u8> {
        self.digits.last().copied()
    }

    /// Position in the lexicographic enumeration of words of the same level.
    pub fn index(&self, kind: FractalKind) -> usize {
        let b = kind.alphabet_size();
        self.digits.iter().fold(0usize, |acc, &d| acc * b + d as usize)
    }

    pub fn from_index(kind: FractalKind, level: usize, mut idx: usize) -> Word {
        let b = kind.alphabet_size();
        let mut digits = vec![0u8; level];
        for slot in digits.iter_mut().rev() {
            *slot = (idx % b) as u8;
            idx /= b;
        }
        Word { digits }
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("∅");
        }
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// All words of length `n`, lexicographically sorted.
pub fn enumerate_words(kind: FractalKind, n: usize) -> Vec<Word> {
    let count = kind.alphabet_size().pow(n as u32);
    (0..count).map(|i| Word::from_index(kind, n, i)).collect()
}
