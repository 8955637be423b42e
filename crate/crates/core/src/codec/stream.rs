//! Self-describing container for a coded string.
//!
//! Layout: `version: u8 | symbol count: u32 (big-endian) | alphabet size: u8 | payload`.
//! The payload is the coder output packed most significant bit first with
//! the final byte zero-padded. The smoothing constant is not stored and
//! must match on both sides.

use crate::codec::coder::{decode, encode, CodecModelConfig};
use crate::error::{Result, SstError};
use crate::model::{Alphabet, SymbolString};

pub const STREAM_VERSION: u8 = 1;
const HEADER_LEN: usize = 6;

pub fn write_stream(s: &SymbolString, alpha: f64) -> Result<Vec<u8>> {
    let m = s.alphabet().size();
    let m_byte = u8::try_from(m)
        .map_err(|_| SstError::InvalidConfig(format!("alphabet size {m} does not fit the stream header")))?;
    let count = u32::try_from(s.len())
        .map_err(|_| SstError::InvalidConfig(format!("{} symbols do not fit the stream header", s.len())))?;
    let cfg = CodecModelConfig::new(s.alphabet(), alpha)?;
    let payload = encode(s, &cfg)?;
    let mut out = Vec::with_capacity(HEADER_LEN + payload.bytes().len());
    out.push(STREAM_VERSION);
    out.extend_from_slice(&count.to_be_bytes());
    out.push(m_byte);
    out.extend_from_slice(payload.bytes());
    Ok(out)
}

pub fn read_stream(bytes: &[u8], alpha: f64) -> Result<SymbolString> {
    if bytes.len() < HEADER_LEN {
        return Err(SstError::MalformedBitstream("truncated header".into()));
    }
    if bytes[0] != STREAM_VERSION {
        return Err(SstError::MalformedBitstream(format!("unsupported version {}", bytes[0])));
    }
    let count = u32::from_be_bytes(bytes[1..5].try_into().expect("four header bytes")) as usize;
    let alphabet = Alphabet::new(bytes[5] as usize)
        .map_err(|_| SstError::MalformedBitstream(format!("invalid alphabet size {}", bytes[5])))?;
    if count == 0 {
        return Err(SstError::MalformedBitstream("zero symbol count".into()));
    }
    let cfg = CodecModelConfig::new(alphabet, alpha)?;
    decode(&bytes[HEADER_LEN..], count, &cfg)
}
