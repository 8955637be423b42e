//! Average information content of unshaped and shaped string sets.
//!
//! Every string of a type class has the same information content, so the
//! averages are weighted sums over class tables and never touch
//! individual strings. Weights `count / m^N` are formed in log space so
//! long strings do not underflow.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::index::{log2_big, ClassTable, TableCache};
use crate::model::{composition_info, composition_of, Alphabet, InfoBits, SourceEnsemble};
use crate::sampling::{mean_and_std_error, serialize_sig6, trial_rng, StringSampler};
use crate::shaping::{Shaper, ShapingParams};

/// Mean information content over the first `budget` strings of the
/// canonical order. Classes are taken whole until the budget runs out; the
/// boundary class contributes pro rata.
pub fn prefix_mean_info(table: &ClassTable, budget: &BigUint) -> f64 {
    if budget.is_zero() {
        return 0.0;
    }
    let log_budget = log2_big(budget);
    let mut left = budget.clone();
    let mut acc = 0.0;
    for entry in table.entries() {
        if left.is_zero() {
            break;
        }
        let take = if entry.count < left { entry.count.clone() } else { left.clone() };
        left -= &take;
        if entry.info.value() > 0.0 {
            acc += (log2_big(&take) - log_budget).exp2() * entry.info.value();
        }
    }
    acc
}

/// Mean information content of the canonical prefix ending at each class
/// boundary, in table order.
pub fn class_boundary_means(table: &ClassTable) -> Vec<f64> {
    table
        .entries()
        .iter()
        .map(|e| prefix_mean_info(table, &e.end_rank()))
        .collect()
}

/// Average empirical information of a length-`n` string from a uniform source.
pub fn average_info_unshaped(alphabet: Alphabet, n: usize) -> Result<InfoBits> {
    let table = TableCache::global().get(n, alphabet)?;
    Ok(InfoBits::new(prefix_mean_info(&table, table.total())))
}

/// Average empirical information of the shaped image of a uniform source.
pub fn average_info_shaped(p: ShapingParams) -> Result<InfoBits> {
    let table = TableCache::global().get(p.shaped_len(), p.alphabet)?;
    Ok(InfoBits::new(prefix_mean_info(&table, &p.domain_size())))
}

/// One row of the information-versus-order table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapingRow {
    pub k: usize,
    pub length: usize,
    #[serde(rename = "info_bits", serialize_with = "serialize_sig6")]
    pub info: f64,
}

pub fn shaping_table(alphabet: Alphabet, n: usize, k_max: usize) -> Result<Vec<ShapingRow>> {
    let base = ShapingParams {
        alphabet,
        base_len: n,
        order: 0,
    };
    (0..=k_max)
        .map(|k| {
            let p = base.with_order(k);
            Ok(ShapingRow {
                k,
                length: p.shaped_len(),
                info: average_info_shaped(p)?.value(),
            })
        })
        .collect()
}

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Monte Carlo estimate of the mean shaped information content for an
/// arbitrary memoryless source.
pub fn average_info_shaped_nonuniform(
    p: ShapingParams,
    src: &SourceEnsemble,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    let shaper = Shaper::new(p)?;
    let sampler = StringSampler::new(src)?;
    let values = (0..trials)
        .into_par_iter()
        .map(|t| {
            let x = sampler.sample(p.base_len, &mut trial_rng(seed, 0, t));
            let y = shaper.shape(&x)?;
            Ok(composition_info(&composition_of(&y)).value())
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, std_error) = mean_and_std_error(&values);
    Ok(Estimate {
        mean,
        std_error,
        trials,
    })
}
