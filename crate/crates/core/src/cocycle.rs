//! Locally constant cocycles and their Birkhoff sums along periodic orbits.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::matrix::Mat;
use crate::sft::{admissible_words, BlockGraph, PeriodicOrbit, SftSpec};
use crate::{Error, Rational, Result, Word};

/// A function of the coordinates `x_0 .. x_range`, given on every admissible
/// `(range + 1)`-word.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantCocycle<T> {
    sft: SftSpec,
    range: usize,
    values: BTreeMap<Word, T>,
}

/// Real-valued cocycle with exact rational values.
pub type RationalCocycle = LocallyConstantCocycle<Rational>;

impl<T: Clone> LocallyConstantCocycle<T> {
    /// Fails unless `values` covers exactly the admissible `(range+1)`-words.
    pub fn new(sft: SftSpec, range: usize, values: BTreeMap<Word, T>) -> Result<Self> {
        let words = admissible_words(&sft, range + 1, usize::MAX)?;
        for w in &words {
            if !values.contains_key(w) {
                return Err(Error::CocycleMismatch(format!("no value for admissible word {w}")));
            }
        }
        if values.len() != words.len() {
            let extra = values.keys().find(|w| w.len() != range + 1 || !sft.is_admissible(w)).unwrap();
            return Err(Error::CocycleMismatch(format!("value given for {extra}, which is not an admissible {}-word", range + 1)));
        }
        Ok(LocallyConstantCocycle { sft, range, values })
    }

    pub fn from_fn(sft: SftSpec, range: usize, mut f: impl FnMut(&Word) -> T) -> Result<Self> {
        let values = admissible_words(&sft, range + 1, usize::MAX)?.into_iter().map(|w| {
            let v = f(&w);
            (w, v)
        });
        Ok(LocallyConstantCocycle { sft, range, values: values.collect() })
    }

    pub fn sft(&self) -> &SftSpec {
        &self.sft
    }

    /// Number of coordinates after `x_0` the cocycle depends on.
    pub fn range(&self) -> usize {
        self.range
    }

    /// Block length used by the solvers: `max(range, 1)`.
    pub fn block_length(&self) -> usize {
        self.range.max(1)
    }

    pub fn values(&self) -> &BTreeMap<Word, T> {
        &self.values
    }

    pub fn set(&mut self, word: &Word, value: T) -> Result<()> {
        match self.values.get_mut(word) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::InadmissibleWord(word.clone())),
        }
    }

    /// Value on the leading window of `word` (which must be at least
    /// `range + 1` long and admissible).
    pub fn eval_prefix(&self, word: &[u8]) -> &T {
        &self.values[&Word(word[..self.range + 1].to_vec())]
    }

    /// Value on the cyclic window of `word` starting at `start`.
    pub fn eval_cyclic(&self, word: &Word, start: usize) -> &T {
        &self.values[&word.cyclic_window(start, self.range + 1)]
    }

    /// Edge weights on a block graph of length at least `range`.
    pub fn edge_values(&self, graph: &BlockGraph) -> Vec<T> {
        graph.edges().iter().map(|e| self.eval_prefix(e.word.symbols()).clone()).collect()
    }

    pub(crate) fn check_orbit(&self, word: &Word) -> Result<()> {
        if !self.sft.is_cyclically_admissible(word) {
            return Err(Error::InadmissibleWord(word.clone()));
        }
        Ok(())
    }
}

impl RationalCocycle {
    pub fn zero(sft: SftSpec, range: usize) -> Result<Self> {
        Self::from_fn(sft, range, |_| Rational::zero())
    }
}

/// `f(x) + f(sigma x) + ... + f(sigma^{n-1} x)` for the periodic point
/// `x = word^infinity`.
pub fn birkhoff_sum(f: &RationalCocycle, orbit: &PeriodicOrbit) -> Result<Rational> {
    cyclic_sum(f, orbit.word())
}

/// Birkhoff sum over any cyclically admissible word, primitive or not.
pub fn cyclic_sum(f: &RationalCocycle, word: &Word) -> Result<Rational> {
    f.check_orbit(word)?;
    Ok((0..word.len()).fold(Rational::zero(), |acc, i| acc + f.eval_cyclic(word, i)))
}

/// Ordered product `f(sigma^{n-1} x) ... f(sigma x) f(x)`; later windows
/// multiply on the left.
pub fn birkhoff_product(f: &LocallyConstantCocycle<Mat>, orbit: &PeriodicOrbit) -> Result<Mat> {
    cyclic_product(f, orbit.word())
}

pub fn cyclic_product(f: &LocallyConstantCocycle<Mat>, word: &Word) -> Result<Mat> {
    f.check_orbit(word)?;
    let dim = f.values().values().next().map_or(0, Mat::dim);
    Ok((0..word.len()).fold(Mat::identity(dim), |acc, i| f.eval_cyclic(word, i).mul(&acc)))
}
