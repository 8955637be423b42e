//! Error injection and detection by shaped-set membership.
//!
//! A shaped string that is corrupted in transit is flagged when it no
//! longer belongs to the shaped set. Clean shaped strings are always
//! members, so the detector has no false positives by construction; the
//! experiment still counts them.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SstError};
use crate::index::{binomial, TableCache};
use crate::model::{sequence_probability, Alphabet, SourceEnsemble, SymbolString};
use crate::sampling::{
    serialize_sig6, trial_rng, wilson_interval, StringSampler, SEED_DERIVATION_VERSION, Z_95,
};
use crate::shaping::{Shaper, ShapingParams};

/// How many symbols a substitution model corrupts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCount {
    /// Exactly this many distinct positions.
    Exact(usize),
    /// Each position independently with this probability.
    PerSymbol(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorModel {
    /// Replace symbols with a uniformly chosen different symbol.
    Substitution { count: ErrorCount },
    /// Redraw a contiguous window of `length` symbols uniformly at random.
    Burst { length: usize },
}

impl ErrorModel {
    pub fn substitutions(count: usize) -> Self {
        ErrorModel::Substitution {
            count: ErrorCount::Exact(count),
        }
    }

    pub fn validate(&self, message_len: usize) -> Result<()> {
        match *self {
            ErrorModel::Substitution {
                count: ErrorCount::Exact(e),
            } if e > message_len => Err(SstError::InvalidErrorModel(format!(
                "{e} substitutions in a message of {message_len} symbols"
            ))),
            ErrorModel::Substitution {
                count: ErrorCount::PerSymbol(p),
            } if !(0.0..=1.0).contains(&p) => Err(SstError::InvalidErrorModel(format!(
                "per-symbol error probability {p} is outside [0, 1]"
            ))),
            ErrorModel::Burst { length } if length > message_len => Err(SstError::InvalidErrorModel(
                format!("burst of {length} symbols in a message of {message_len} symbols"),
            )),
            _ => Ok(()),
        }
    }
}

fn substitute<R: Rng + ?Sized>(old: u32, alphabet: Alphabet, rng: &mut R) -> u32 {
    let r = rng.random_range(0..alphabet.size() as u32 - 1);
    if r >= old {
        r + 1
    } else {
        r
    }
}

pub fn inject_errors<R: Rng + ?Sized>(s: &SymbolString, em: &ErrorModel, rng: &mut R) -> Result<SymbolString> {
    em.validate(s.len())?;
    let alphabet = s.alphabet();
    let mut symbols = s.symbols().to_vec();
    match *em {
        ErrorModel::Substitution {
            count: ErrorCount::Exact(e),
        } => {
            for pos in sample_indices(rng, symbols.len(), e) {
                symbols[pos] = substitute(symbols[pos], alphabet, rng);
            }
        }
        ErrorModel::Substitution {
            count: ErrorCount::PerSymbol(p),
        } => {
            for sym in symbols.iter_mut() {
                if rng.random_bool(p) {
                    *sym = substitute(*sym, alphabet, rng);
                }
            }
        }
        ErrorModel::Burst { length } => {
            if length > 0 {
                let start = rng.random_range(0..=symbols.len() - length);
                for sym in &mut symbols[start..start + length] {
                    *sym = rng.random_range(0..alphabet.size() as u32);
                }
            }
        }
    }
    Ok(SymbolString::from_trusted(alphabet, symbols))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectionRow {
    pub k: usize,
    pub trials: u64,
    pub detected: u64,
    #[serde(serialize_with = "serialize_sig6")]
    pub rate: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub ci_low: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub ci_high: f64,
}

impl DetectionRow {
    fn new(k: usize, trials: u64, detected: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(detected, trials, Z_95);
        DetectionRow {
            k,
            trials,
            detected,
            rate: if trials == 0 { 0.0 } else { detected as f64 / trials as f64 },
            ci_low,
            ci_high,
        }
    }

    /// Binomial standard error of the rate.
    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectionReport {
    pub alphabet: usize,
    pub base_len: usize,
    pub error_model: ErrorModel,
    pub source: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub seed_derivation_version: u32,
    /// Clean shaped strings that failed the membership test.
    pub clean_rejections: u64,
    pub rows: Vec<DetectionRow>,
}

impl DetectionReport {
    pub fn row(&self, k: usize) -> Option<&DetectionRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Columns `k,trials,detected,rate,ci_low,ci_high`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("row serializes");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

/// For every shaping order in `orders`: sample, shape, corrupt and test
/// membership, `trials` times. Each order uses its own random lane, so a
/// row does not depend on which other orders are run.
pub fn run_detection_experiment(
    alphabet: Alphabet,
    base_len: usize,
    orders: &[usize],
    src: &SourceEnsemble,
    em: &ErrorModel,
    trials: u64,
    seed: u64,
) -> Result<DetectionReport> {
    if src.alphabet() != alphabet {
        return Err(SstError::AlphabetMismatch {
            expected: alphabet.size(),
            actual: src.alphabet().size(),
        });
    }
    let sampler = StringSampler::new(src)?;
    let mut rows = Vec::with_capacity(orders.len());
    let mut clean_rejections = 0;
    for &k in orders {
        let p = ShapingParams::new(alphabet.size(), base_len, k)?;
        em.validate(p.shaped_len())?;
        let shaper = Shaper::new(p)?;
        let (rejected, detected) = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, k as u64, t);
                let x = sampler.sample(base_len, &mut rng);
                let y = shaper.shape(&x)?;
                let clean_ok = shaper.is_in_shaped_set(&y)?;
                let corrupted = inject_errors(&y, em, &mut rng)?;
                let flagged = !shaper.is_in_shaped_set(&corrupted)?;
                Ok((u64::from(!clean_ok), u64::from(flagged)))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        clean_rejections += rejected;
        rows.push(DetectionRow::new(k, trials, detected));
    }
    Ok(DetectionReport {
        alphabet: alphabet.size(),
        base_len,
        error_model: *em,
        source: src.probs().to_vec(),
        trials,
        seed,
        seed_derivation_version: SEED_DERIVATION_VERSION,
        clean_rejections,
        rows,
    })
}

/// Calls `visit` with every way of substituting exactly `errors` symbols of `y`.
fn for_each_substitution(y: &[u32], m: u32, errors: usize, visit: &mut impl FnMut(&[u32])) {
    fn recurse(buf: &mut Vec<u32>, start: usize, left: usize, m: u32, visit: &mut impl FnMut(&[u32])) {
        if left == 0 {
            visit(buf);
            return;
        }
        for pos in start..=buf.len() - left {
            let old = buf[pos];
            for sym in (0..m).filter(|&s| s != old) {
                buf[pos] = sym;
                recurse(buf, pos + 1, left - 1, m, visit);
            }
            buf[pos] = old;
        }
    }
    let mut buf = y.to_vec();
    recurse(&mut buf, 0, errors, m, visit);
}

/// Exact probability that `errors` uniform substitutions take a shaped
/// string out of the shaped set, averaged over the source distribution.
/// Enumerates every input and every error pattern.
pub fn detection_rate_exact_small(p: ShapingParams, src: &SourceEnsemble, errors: usize) -> Result<f64> {
    let m = p.alphabet.size();
    let cap = TableCache::global().cap();
    let space = BigUint::from(m).pow(p.shaped_len() as u32);
    if space > BigUint::from(cap) {
        return Err(SstError::CapacityExceeded {
            n: p.shaped_len(),
            m,
            compositions: space.to_string(),
            cap,
        });
    }
    ErrorModel::substitutions(errors).validate(p.shaped_len())?;
    if errors == 0 {
        return Ok(0.0);
    }
    let shaper = Shaper::new(p)?;
    let patterns = (binomial(p.shaped_len(), errors) * BigUint::from(m - 1).pow(errors as u32))
        .to_f64()
        .expect("pattern count is finite");
    let domain = p.domain_size().to_u64().expect("domain bounded by the cap");
    let mut rate = 0.0;
    for idx in 0..domain {
        let mut digits = vec![0u32; p.base_len];
        let mut rest = idx;
        for d in digits.iter_mut().rev() {
            *d = (rest % m as u64) as u32;
            rest /= m as u64;
        }
        let x = SymbolString::from_trusted(p.alphabet, digits);
        let weight = sequence_probability(&x, src)?;
        if weight == 0.0 {
            continue;
        }
        let y = shaper.shape(&x)?;
        let mut flagged = 0u64;
        for_each_substitution(y.symbols(), m as u32, errors, &mut |z| {
            let z = SymbolString::from_trusted(p.alphabet, z.to_vec());
            if !shaper.is_in_shaped_set(&z).expect("same length and alphabet") {
                flagged += 1;
            }
        });
        rate += weight * flagged as f64 / patterns;
    }
    Ok(rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(m: usize) -> Alphabet {
        Alphabet::new(m).unwrap()
    }

    fn digits(m: usize, d: &str) -> SymbolString {
        SymbolString::from_digits(a(m), d).unwrap()
    }

    #[test]
    fn zero_errors_is_identity() {
        let s = digits(3, "0120120");
        let mut rng = trial_rng(1, 0, 0);
        assert_eq!(inject_errors(&s, &ErrorModel::substitutions(0), &mut rng).unwrap(), s);
        let none = ErrorModel::Substitution {
            count: ErrorCount::PerSymbol(0.0),
        };
        assert_eq!(inject_errors(&s, &none, &mut rng).unwrap(), s);
        assert_eq!(inject_errors(&s, &ErrorModel::Burst { length: 0 }, &mut rng).unwrap(), s);
    }

    #[test]
    fn single_substitution_always_changes_a_symbol() {
        let s = digits(2, "00");
        for t in 0..200 {
            let out = inject_errors(&s, &ErrorModel::substitutions(1), &mut trial_rng(3, 0, t)).unwrap();
            assert!(out == digits(2, "10") || out == digits(2, "01"), "{out}");
        }
    }

    #[test]
    fn full_substitution_changes_every_position() {
        let s = digits(3, "0120120120");
        for t in 0..50 {
            let out = inject_errors(&s, &ErrorModel::substitutions(10), &mut trial_rng(4, 0, t)).unwrap();
            assert!(out.symbols().iter().zip(s.symbols()).all(|(a, b)| a != b));
        }
    }

    #[test]
    fn burst_stays_in_a_window() {
        let s = digits(3, "0000000000");
        for t in 0..50 {
            let out = inject_errors(&s, &ErrorModel::Burst { length: 3 }, &mut trial_rng(5, 0, t)).unwrap();
            let changed: Vec<_> = (0..10).filter(|&i| out.symbols()[i] != 0).collect();
            if let (Some(first), Some(last)) = (changed.first(), changed.last()) {
                assert!(last - first < 3);
            }
            assert_eq!(out.len(), 10);
        }
    }

    #[test]
    fn invalid_models_are_rejected() {
        let s = digits(2, "01");
        let mut rng = trial_rng(0, 0, 0);
        assert!(inject_errors(&s, &ErrorModel::substitutions(3), &mut rng).is_err());
        assert!(inject_errors(&s, &ErrorModel::Burst { length: 3 }, &mut rng).is_err());
        let bad = ErrorModel::Substitution {
            count: ErrorCount::PerSymbol(1.5),
        };
        assert!(inject_errors(&s, &bad, &mut rng).is_err());
    }

    #[test]
    fn no_detections_without_errors() {
        let src = SourceEnsemble::uniform(a(3));
        let r = run_detection_experiment(a(3), 6, &[0, 1, 2, 3], &src, &ErrorModel::substitutions(0), 2000, 8)
            .unwrap();
        assert!(r.rows.iter().all(|row| row.detected == 0 && row.rate == 0.0));
        assert_eq!(r.clean_rejections, 0);
    }

    #[test]
    fn order_zero_never_detects() {
        let src = SourceEnsemble::uniform(a(3));
        let r = run_detection_experiment(a(3), 6, &[0], &src, &ErrorModel::substitutions(2), 2000, 8).unwrap();
        assert_eq!(r.rows[0].detected, 0);
    }

    #[test]
    fn binary_order_one_detects_everything() {
        let src = SourceEnsemble::uniform(a(2));
        let p = ShapingParams::new(2, 1, 1).unwrap();
        let r = run_detection_experiment(a(2), 1, &[1], &src, &ErrorModel::substitutions(1), 1000, 7).unwrap();
        assert_eq!(r.rows[0].rate, 1.0);
        assert_eq!(detection_rate_exact_small(p, &src, 1).unwrap(), 1.0);
        assert_eq!(detection_rate_exact_small(p, &src, 0).unwrap(), 0.0);
    }

    #[test]
    fn exact_rate_requires_enumerable_space() {
        let src = SourceEnsemble::uniform(a(3));
        let p = ShapingParams::new(3, 20, 5).unwrap();
        assert!(matches!(
            detection_rate_exact_small(p, &src, 1),
            Err(SstError::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn rows_are_independent_of_other_orders() {
        let src = SourceEnsemble::uniform(a(3));
        let em = ErrorModel::substitutions(1);
        let both = run_detection_experiment(a(3), 5, &[1, 3], &src, &em, 500, 2).unwrap();
        let only = run_detection_experiment(a(3), 5, &[3], &src, &em, 500, 2).unwrap();
        assert_eq!(both.row(3), only.row(3));
    }

    #[test]
    fn csv_schema() {
        let src = SourceEnsemble::uniform(a(2));
        let r = run_detection_experiment(a(2), 1, &[1], &src, &ErrorModel::substitutions(1), 10, 7).unwrap();
        assert_eq!(r.to_csv(), "k,trials,detected,rate,ci_low,ci_high\n1,10,10,1.0,0.722467,1.0\n");
    }
}
