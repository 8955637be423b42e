//! Alphabets, sources, strings and their information-theoretic quantities.
//!
//! All information quantities are measured in bits. The convention
//! `0 * log2(0) = 0` is used throughout.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SstError};

/// A symbol is an index into an [`Alphabet`].
pub type Symbol = u32;

const SOURCE_SUM_TOLERANCE: f64 = 1e-12;

/// An alphabet `{0, .., m-1}` with `m >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(u32);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 || size > u32::MAX as usize {
            return Err(SstError::InvalidAlphabet(size));
        }
        Ok(Alphabet(size as u32))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn contains(self, symbol: Symbol) -> bool {
        symbol < self.0
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = SstError;

    fn try_from(size: usize) -> Result<Self> {
        Alphabet::new(size)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.size()
    }
}

/// A memoryless source: an alphabet with one probability per symbol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SourceEnsemble {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl SourceEnsemble {
    /// Builds a source from its probability vector. The weights must be
    /// nonnegative, finite and sum to one within `1e-12`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let alphabet = Alphabet::new(probs.len())?;
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(SstError::InvalidSource(format!("weight {p} is not a probability")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SOURCE_SUM_TOLERANCE {
            return Err(SstError::InvalidSource(format!("weights sum to {sum}, not 1")));
        }
        Ok(SourceEnsemble { alphabet, probs })
    }

    /// Accepts weights whose sum is within `tolerance` of one and
    /// renormalizes them exactly.
    pub fn normalized(probs: Vec<f64>, tolerance: f64) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > tolerance {
            return Err(SstError::InvalidSource(format!(
                "weights sum to {sum}, not 1 within {tolerance}"
            )));
        }
        let probs = probs.into_iter().map(|p| p / sum).collect();
        SourceEnsemble::new(probs)
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let m = alphabet.size();
        SourceEnsemble {
            alphabet,
            probs: vec![1.0 / m as f64; m],
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, symbol: Symbol) -> f64 {
        self.probs[symbol as usize]
    }

    pub fn is_uniform(&self) -> bool {
        let p = 1.0 / self.probs.len() as f64;
        self.probs.iter().all(|q| (q - p).abs() <= SOURCE_SUM_TOLERANCE)
    }
}

/// A nonempty string over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolString {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl SymbolString {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(SstError::EmptyString);
        }
        if let Some((position, &symbol)) = symbols
            .iter()
            .enumerate()
            .find(|(_, s)| !alphabet.contains(**s))
        {
            return Err(SstError::SymbolOutOfRange {
                symbol,
                position,
                alphabet: alphabet.size(),
            });
        }
        Ok(SymbolString { alphabet, symbols })
    }

    /// Parses a string of decimal digits, one symbol per digit. Only
    /// meaningful for alphabets of size at most 10.
    pub fn from_digits(alphabet: Alphabet, digits: &str) -> Result<Self> {
        let symbols = digits
            .chars()
            .enumerate()
            .map(|(position, c)| {
                c.to_digit(10).ok_or(SstError::SymbolOutOfRange {
                    symbol: c as u32,
                    position,
                    alphabet: alphabet.size(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SymbolString::new(alphabet, symbols)
    }

    pub(crate) fn from_trusted(alphabet: Alphabet, symbols: Vec<Symbol>) -> Self {
        debug_assert!(!symbols.is_empty());
        debug_assert!(symbols.iter().all(|s| alphabet.contains(*s)));
        SymbolString { alphabet, symbols }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }
}

impl fmt::Display for SymbolString {
    /// Digits for alphabets of size at most 10, comma-separated integers otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.size() <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
        } else {
            for (i, s) in self.symbols.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// Symbol-count histogram of a string (its type class).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    counts: Vec<u32>,
}

impl Composition {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        Alphabet::new(counts.len())?;
        Ok(Composition { counts })
    }

    pub(crate) fn from_trusted(counts: Vec<u32>) -> Self {
        Composition { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Total length `n` of the strings in this class.
    pub fn len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.counts.len() as u32)
    }
}

/// A nonnegative, finite quantity of information in bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InfoBits(f64);

impl InfoBits {
    pub const ZERO: InfoBits = InfoBits(0.0);

    /// Clamps tiny negative rounding residue to zero.
    pub fn new(value: f64) -> Self {
        debug_assert!(value.is_finite(), "information must be finite, got {value}");
        debug_assert!(value > -1e-9, "information must be nonnegative, got {value}");
        InfoBits(value.max(0.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for InfoBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

fn check_alphabet(expected: Alphabet, actual: Alphabet) -> Result<()> {
    if expected != actual {
        return Err(SstError::AlphabetMismatch {
            expected: expected.size(),
            actual: actual.size(),
        });
    }
    Ok(())
}

/// `H(X) = -sum p_i log2 p_i`.
pub fn shannon_entropy(src: &SourceEnsemble) -> InfoBits {
    let h = src
        .probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    InfoBits::new(h)
}

pub fn composition_of(s: &SymbolString) -> Composition {
    let mut counts = vec![0u32; s.alphabet.size()];
    for &sym in &s.symbols {
        counts[sym as usize] += 1;
    }
    Composition { counts }
}

/// `-sum_a c_a log2(c_a / n)` over the nonzero counts.
///
/// The sum runs over the counts in sorted order so that every permutation
/// of a composition yields a bit-identical value.
pub fn composition_info(c: &Composition) -> InfoBits {
    let n = c.len();
    if n == 0 {
        return InfoBits::ZERO;
    }
    let mut counts: Vec<u32> = c.counts.iter().copied().filter(|&k| k > 0).collect();
    counts.sort_unstable();
    let log_n = (n as f64).log2();
    let bits = counts
        .iter()
        .map(|&k| k as f64 * (log_n - (k as f64).log2()))
        .sum();
    InfoBits::new(bits)
}

/// Empirical information content: `-sum_j log2(count(s_j) / n)`, where the
/// probability of each occurrence is its frequency within `s`.
pub fn empirical_info_content(s: &SymbolString) -> InfoBits {
    composition_info(&composition_of(s))
}

/// Information content under the source probabilities: `-sum_j log2 P(s_j)`.
pub fn source_info_content(s: &SymbolString, src: &SourceEnsemble) -> Result<InfoBits> {
    check_alphabet(src.alphabet, s.alphabet)?;
    let mut bits = 0.0;
    for (position, &symbol) in s.symbols.iter().enumerate() {
        let p = src.prob(symbol);
        if p <= 0.0 {
            return Err(SstError::ZeroProbabilitySymbol { symbol, position });
        }
        bits -= p.log2();
    }
    Ok(InfoBits::new(bits))
}

/// `P(s) = prod_j p(s_j)`; zero when any symbol has zero probability.
pub fn sequence_probability(s: &SymbolString, src: &SourceEnsemble) -> Result<f64> {
    check_alphabet(src.alphabet, s.alphabet)?;
    Ok(s.symbols.iter().map(|&sym| src.prob(sym)).product())
}
