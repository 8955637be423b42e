//! Raw-versus-shaped code length benchmark.

use rayon::prelude::*;
use serde::Serialize;

use crate::codec::coder::{decode, encode, ideal_code_length, CodecModelConfig};
use crate::error::{Result, SstError};
use crate::model::{SourceEnsemble, SymbolString};
use crate::sampling::{mean_and_std_error, serialize_sig6, trial_rng, StringSampler, SEED_DERIVATION_VERSION};
use crate::shaping::{Shaper, ShapingParams};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArmStats {
    pub arm: &'static str,
    pub trials: u64,
    #[serde(serialize_with = "serialize_sig6")]
    pub mean_emitted_bits: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub emitted_std_error: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub mean_ideal_bits: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub ideal_std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub alphabet: usize,
    pub base_len: usize,
    pub order: usize,
    pub alpha: f64,
    pub source: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub seed_derivation_version: u32,
    pub raw: ArmStats,
    pub shaped: ArmStats,
}

impl BenchReport {
    /// `raw mean ideal - shaped mean ideal`, positive when shaping helps.
    pub fn ideal_gain(&self) -> f64 {
        self.raw.mean_ideal_bits - self.shaped.mean_ideal_bits
    }

    /// `sqrt(se_raw^2 + se_shaped^2)` of the ideal lengths.
    pub fn ideal_combined_std_error(&self) -> f64 {
        self.raw.ideal_std_error.hypot(self.shaped.ideal_std_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per arm.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&self.raw).expect("row serializes");
        w.serialize(&self.shaped).expect("row serializes");
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

struct TrialLengths {
    raw_emitted: f64,
    raw_ideal: f64,
    shaped_emitted: f64,
    shaped_ideal: f64,
}

fn code(s: &SymbolString, cfg: &CodecModelConfig) -> Result<(f64, f64)> {
    let bits = encode(s, cfg)?;
    if &decode(bits.bytes(), s.len(), cfg)? != s {
        return Err(SstError::MalformedBitstream("benchmark round trip mismatch".into()));
    }
    Ok((bits.bit_len() as f64, ideal_code_length(s, cfg)?.value()))
}

fn arm(name: &'static str, emitted: &[f64], ideal: &[f64]) -> ArmStats {
    let (mean_emitted_bits, emitted_std_error) = mean_and_std_error(emitted);
    let (mean_ideal_bits, ideal_std_error) = mean_and_std_error(ideal);
    ArmStats {
        arm: name,
        trials: emitted.len() as u64,
        mean_emitted_bits,
        emitted_std_error,
        mean_ideal_bits,
        ideal_std_error,
    }
}

/// Codes each sampled string both as drawn and after shaping, with the same
/// adaptive model, and reports per-arm mean lengths.
pub fn run_codec_benchmark(
    p: ShapingParams,
    src: &SourceEnsemble,
    trials: u64,
    seed: u64,
    cfg: &CodecModelConfig,
) -> Result<BenchReport> {
    if src.alphabet() != p.alphabet || cfg.alphabet != p.alphabet {
        return Err(SstError::AlphabetMismatch {
            expected: p.alphabet.size(),
            actual: if src.alphabet() != p.alphabet { src.alphabet().size() } else { cfg.alphabet.size() },
        });
    }
    let shaper = Shaper::new(p)?;
    let sampler = StringSampler::new(src)?;
    let lengths = (0..trials)
        .into_par_iter()
        .map(|t| {
            let x = sampler.sample(p.base_len, &mut trial_rng(seed, 0, t));
            let y = shaper.shape(&x)?;
            let (raw_emitted, raw_ideal) = code(&x, cfg)?;
            let (shaped_emitted, shaped_ideal) = code(&y, cfg)?;
            Ok(TrialLengths {
                raw_emitted,
                raw_ideal,
                shaped_emitted,
                shaped_ideal,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let column = |f: fn(&TrialLengths) -> f64| lengths.iter().map(f).collect::<Vec<_>>();
    Ok(BenchReport {
        alphabet: p.alphabet.size(),
        base_len: p.base_len,
        order: p.order,
        alpha: cfg.alpha,
        source: src.probs().to_vec(),
        trials,
        seed,
        seed_derivation_version: SEED_DERIVATION_VERSION,
        raw: arm("raw", &column(|t| t.raw_emitted), &column(|t| t.raw_ideal)),
        shaped: arm("shaped", &column(|t| t.shaped_emitted), &column(|t| t.shaped_ideal)),
    })
}
