use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A finite word over the alphabet `0..k`.
///
/// Symbols are stored zero-based; the textual form is one-based, as digits
/// when every symbol fits in a single digit and dot-separated otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    /// Parses the one-based textual form. Digits are read one symbol each
    /// unless the text contains a `.`.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let bad = || Error::BadShape(alloc::format!("bad word {text:?} for alphabet size {k}"));
        let mut out = Vec::new();
        if text.contains('.') {
            for part in text.split('.') {
                let s: usize = part.parse().map_err(|_| bad())?;
                if s == 0 || s > k {
                    return Err(bad());
                }
                out.push((s - 1) as u8);
            }
        } else {
            for c in text.chars() {
                let s = c.to_digit(10).ok_or_else(bad)? as usize;
                if s == 0 || s > k {
                    return Err(bad());
                }
                out.push((s - 1) as u8);
            }
        }
        if out.is_empty() {
            return Err(bad());
        }
        Ok(Word(out))
    }

    /// `n` symbols read cyclically starting at `start`.
    pub fn cyclic_window(&self, start: usize, n: usize) -> Word {
        let len = self.0.len();
        Word((0..n).map(|i| self.0[(start + i) % len]).collect())
    }

    pub fn rotate(&self, by: usize) -> Word {
        self.cyclic_window(by % self.0.len().max(1), self.0.len())
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Lexicographically least rotation (Booth's algorithm).
    pub fn least_rotation(&self) -> Word {
        let s = &self.0;
        let n = s.len();
        if n == 0 {
            return self.clone();
        }
        let mut f: Vec<isize> = alloc::vec![-1; 2 * n];
        let mut k = 0usize;
        for j in 1..2 * n {
            let sj = s[j % n];
            let mut i = f[j - k - 1];
            while i != -1 && sj != s[(k + i as usize + 1) % n] {
                if sj < s[(k + i as usize + 1) % n] {
                    k = j - i as usize - 1;
                }
                i = f[i as usize];
            }
            if sj != s[(k + (i + 1) as usize) % n] {
                if sj < s[k % n] {
                    k = j;
                }
                f[j - k] = -1;
            } else {
                f[j - k] = i + 1;
            }
        }
        self.rotate(k)
    }

    /// Smallest `p` such that the word is a power of its length-`p` prefix.
    pub fn primitive_period(&self) -> usize {
        let n = self.0.len();
        (1..=n)
            .find(|&p| n % p == 0 && (p..n).all(|i| self.0[i] == self.0[i - p]))
            .unwrap_or(n)
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_period() == self.0.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let small = self.0.iter().all(|&s| s < 9);
        let mut out = String::new();
        for (i, &s) in self.0.iter().enumerate() {
            if !small && i > 0 {
                out.push('.');
            }
            out.push_str(&alloc::format!("{}", s as usize + 1));
        }
        f.write_str(&out)
    }
}
