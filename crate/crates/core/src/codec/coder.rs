//! Binary arithmetic coder driven by an adaptive order-0 frequency model.
//!
//! The encoder keeps a 62-bit `low` register and a range in `(2^61, 2^62]`.
//! Interval bounds are `floor(range * cum / total)`, computed in 128-bit
//! arithmetic. When `low` overflows 62 bits the carry is propagated into
//! the bits already emitted. Termination emits a single bit selecting the
//! multiple of `2^61` inside the final interval; the decoder treats bits
//! past the end of the payload as zeros.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SstError};
use crate::model::{Alphabet, InfoBits, SymbolString};

const PRECISION: u32 = 62;
const FULL: u64 = 1 << PRECISION;
const HALF: u64 = 1 << (PRECISION - 1);
const MASK: u64 = FULL - 1;

/// Bits emitted by termination beyond the renormalization output.
pub const TERMINATION_BITS: usize = 1;

/// Fixed-point resolution of the smoothing constant.
const ALPHA_SCALE: f64 = 256.0;

/// Adaptive additive-smoothing model parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodecModelConfig {
    pub alphabet: Alphabet,
    /// Smoothing constant; resolved to multiples of 1/256.
    pub alpha: f64,
}

impl CodecModelConfig {
    pub fn new(alphabet: Alphabet, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(SstError::InvalidConfig(format!("smoothing constant {alpha} must be positive")));
        }
        if (alpha * ALPHA_SCALE).round() < 1.0 {
            return Err(SstError::InvalidConfig(format!(
                "smoothing constant {alpha} is below the model resolution of 1/256"
            )));
        }
        Ok(CodecModelConfig { alphabet, alpha })
    }

    /// Laplace smoothing, `alpha = 1`.
    pub fn laplace(alphabet: Alphabet) -> Self {
        CodecModelConfig { alphabet, alpha: 1.0 }
    }

    fn alpha_units(&self) -> u64 {
        (self.alpha * ALPHA_SCALE).round() as u64
    }
}

/// Symbol `j` has weight `count_j * 256 + alpha * 256` after `count_j` occurrences.
#[derive(Clone, Debug)]
struct AdaptiveModel {
    freqs: Vec<u64>,
    total: u64,
}

impl AdaptiveModel {
    fn new(cfg: &CodecModelConfig) -> Self {
        let m = cfg.alphabet.size();
        let a = cfg.alpha_units();
        AdaptiveModel {
            freqs: vec![a; m],
            total: a * m as u64,
        }
    }

    fn interval(&self, symbol: usize) -> (u64, u64) {
        let cum: u64 = self.freqs[..symbol].iter().sum();
        (cum, self.freqs[symbol])
    }

    fn update(&mut self, symbol: usize) {
        self.freqs[symbol] += ALPHA_SCALE as u64;
        self.total += ALPHA_SCALE as u64;
    }
}

#[inline]
fn scale(range: u64, cum: u64, total: u64) -> u64 {
    (range as u128 * cum as u128 / total as u128) as u64
}

/// Packed big-endian output with an exact bit length.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodedBits {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl EncodedBits {
    /// Payload bytes, final byte zero-padded.
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    fn push(&mut self, bit: bool) {
        if self.bit_len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.bit_len % 8);
        }
        self.bit_len += 1;
    }

    fn get(&self, i: usize) -> bool {
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    fn flip(&mut self, i: usize) {
        self.bytes[i / 8] ^= 0x80 >> (i % 8);
    }

    /// Adds one at the last emitted bit position.
    fn carry(&mut self) {
        let mut i = self.bit_len;
        while i > 0 {
            i -= 1;
            let was_set = self.get(i);
            self.flip(i);
            if !was_set {
                return;
            }
        }
        unreachable!("carry out of the coded interval");
    }
}

struct Encoder {
    low: u64,
    range: u64,
    out: EncodedBits,
}

impl Encoder {
    fn new() -> Self {
        Encoder {
            low: 0,
            range: FULL,
            out: EncodedBits::default(),
        }
    }

    fn encode(&mut self, cum: u64, freq: u64, total: u64) {
        let lo = scale(self.range, cum, total);
        let hi = scale(self.range, cum + freq, total);
        debug_assert!(hi > lo);
        self.low += lo;
        self.range = hi - lo;
        if self.low >= FULL {
            self.low -= FULL;
            self.out.carry();
        }
        while self.range <= HALF {
            self.out.push(self.low & HALF != 0);
            self.low = (self.low << 1) & MASK;
            self.range <<= 1;
        }
    }

    fn finish(mut self) -> EncodedBits {
        // range > HALF, so a multiple of HALF lies in [low, low + range)
        let v = self.low.div_ceil(HALF) * HALF;
        if v == FULL {
            self.out.carry();
            self.out.push(false);
        } else {
            self.out.push(v == HALF);
        }
        self.out
    }
}

struct Decoder<'a> {
    bits: &'a [u8],
    pos: usize,
    offset: u64,
    range: u64,
}

impl<'a> Decoder<'a> {
    fn new(bits: &'a [u8]) -> Self {
        let mut d = Decoder {
            bits,
            pos: 0,
            offset: 0,
            range: FULL,
        };
        for _ in 0..PRECISION {
            d.offset = (d.offset << 1) | d.next_bit() as u64;
        }
        d
    }

    fn next_bit(&mut self) -> bool {
        let i = self.pos;
        self.pos += 1;
        i / 8 < self.bits.len() && self.bits[i / 8] & (0x80 >> (i % 8)) != 0
    }

    fn decode(&mut self, model: &AdaptiveModel) -> Result<usize> {
        if self.offset >= self.range {
            return Err(SstError::MalformedBitstream("code value left the coding interval".into()));
        }
        let total = model.total;
        let mut cum = 0u64;
        let mut found = None;
        for (symbol, &f) in model.freqs.iter().enumerate() {
            let hi = scale(self.range, cum + f, total);
            if self.offset < hi {
                found = Some((symbol, scale(self.range, cum, total), hi));
                break;
            }
            cum += f;
        }
        let (symbol, lo, hi) = found
            .ok_or_else(|| SstError::MalformedBitstream("code value matches no symbol".into()))?;
        self.offset -= lo;
        self.range = hi - lo;
        while self.range <= HALF {
            self.offset = (self.offset << 1) | self.next_bit() as u64;
            self.range <<= 1;
        }
        // a genuine stream is read at most PRECISION - 1 bits past its end
        if self.pos > self.bits.len() * 8 + PRECISION as usize {
            return Err(SstError::MalformedBitstream("payload too short for the symbol count".into()));
        }
        Ok(symbol)
    }
}

fn check_alphabet(s: &SymbolString, cfg: &CodecModelConfig) -> Result<()> {
    if s.alphabet() != cfg.alphabet {
        return Err(SstError::AlphabetMismatch {
            expected: cfg.alphabet.size(),
            actual: s.alphabet().size(),
        });
    }
    Ok(())
}

pub fn encode(s: &SymbolString, cfg: &CodecModelConfig) -> Result<EncodedBits> {
    check_alphabet(s, cfg)?;
    let mut model = AdaptiveModel::new(cfg);
    let mut enc = Encoder::new();
    for &sym in s.symbols() {
        let (cum, freq) = model.interval(sym as usize);
        enc.encode(cum, freq, model.total);
        model.update(sym as usize);
    }
    Ok(enc.finish())
}

/// Decodes `n` symbols from a payload produced by [`encode`] with the same
/// configuration.
pub fn decode(bits: &[u8], n: usize, cfg: &CodecModelConfig) -> Result<SymbolString> {
    if n == 0 {
        return Err(SstError::EmptyString);
    }
    let mut model = AdaptiveModel::new(cfg);
    let mut dec = Decoder::new(bits);
    let mut symbols = Vec::with_capacity(n);
    for _ in 0..n {
        let sym = dec.decode(&model)?;
        model.update(sym);
        symbols.push(sym as u32);
    }
    Ok(SymbolString::from_trusted(cfg.alphabet, symbols))
}

/// `-log2` of the probability the adaptive model assigns to `s`.
pub fn ideal_code_length(s: &SymbolString, cfg: &CodecModelConfig) -> Result<InfoBits> {
    check_alphabet(s, cfg)?;
    let mut model = AdaptiveModel::new(cfg);
    let mut bits = 0.0;
    for &sym in s.symbols() {
        let f = model.freqs[sym as usize];
        bits += (model.total as f64).log2() - (f as f64).log2();
        model.update(sym as usize);
    }
    Ok(InfoBits::new(bits))
}
