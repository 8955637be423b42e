//! The shaping bijection from length-`N` strings onto the `m^N` lowest
//! information strings of length `N + K`.
//!
//! Both sides use the canonical order of [`crate::index`]: the string of
//! rank `r` among length-`N` strings maps to the string of rank `r` among
//! length-`N + K` strings. The image (the shaped set) is therefore the
//! canonical prefix of length `m^N`, and membership reduces to a rank
//! comparison.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SstError};
use crate::index::{rank_in_class, BigRank, ClassTable, TableCache};
use crate::model::{Alphabet, SymbolString};

/// Alphabet size, base length `N` and shaping order `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapingParams {
    pub alphabet: Alphabet,
    pub base_len: usize,
    pub order: usize,
}

impl ShapingParams {
    pub fn new(m: usize, base_len: usize, order: usize) -> Result<Self> {
        let alphabet = Alphabet::new(m)?;
        if base_len == 0 {
            return Err(SstError::InvalidConfig("base length N must be at least 1".into()));
        }
        Ok(ShapingParams {
            alphabet,
            base_len,
            order,
        })
    }

    pub fn with_order(self, order: usize) -> Self {
        ShapingParams { order, ..self }
    }

    /// `N + K`.
    pub fn shaped_len(&self) -> usize {
        self.base_len + self.order
    }

    /// `m^N`, the size of both the domain and the shaped set.
    pub fn domain_size(&self) -> BigRank {
        BigUint::from(self.alphabet.size()).pow(self.base_len as u32)
    }
}

/// Precomputed tables for one set of shaping parameters.
#[derive(Clone, Debug)]
pub struct Shaper {
    params: ShapingParams,
    domain: Arc<ClassTable>,
    codomain: Arc<ClassTable>,
}

impl Shaper {
    /// Uses the process-wide table cache.
    pub fn new(params: ShapingParams) -> Result<Self> {
        Shaper::with_cache(params, TableCache::global())
    }

    pub fn with_cache(params: ShapingParams, cache: &TableCache) -> Result<Self> {
        let domain = cache.get(params.base_len, params.alphabet)?;
        let codomain = cache.get(params.shaped_len(), params.alphabet)?;
        Ok(Shaper {
            params,
            domain,
            codomain,
        })
    }

    pub fn params(&self) -> &ShapingParams {
        &self.params
    }

    pub fn domain_table(&self) -> &ClassTable {
        &self.domain
    }

    pub fn codomain_table(&self) -> &ClassTable {
        &self.codomain
    }

    pub fn shape(&self, x: &SymbolString) -> Result<SymbolString> {
        if self.params.order == 0 {
            self.domain.entry_for(x)?;
            return Ok(x.clone());
        }
        let r = self.domain.global_rank(x)?;
        self.codomain.global_unrank(&r)
    }

    /// Inverse of [`Shaper::shape`]; fails with [`SstError::NotInShapedSet`]
    /// for strings outside the image.
    pub fn unshape(&self, y: &SymbolString) -> Result<SymbolString> {
        if self.params.order == 0 {
            self.codomain.entry_for(y)?;
            return Ok(y.clone());
        }
        let r = self.codomain.global_rank(y)?;
        if &r >= self.domain.total() {
            return Err(SstError::NotInShapedSet);
        }
        self.domain.global_unrank(&r)
    }

    pub fn is_in_shaped_set(&self, y: &SymbolString) -> Result<bool> {
        let entry = self.codomain.entry_for(y)?;
        let budget = self.domain.total();
        if &entry.start_rank >= budget {
            return Ok(false);
        }
        if &entry.end_rank() <= budget {
            return Ok(true);
        }
        // boundary class: only part of it is shaped
        Ok(&(&entry.start_rank + rank_in_class(y)) < budget)
    }
}

pub fn shape(x: &SymbolString, p: ShapingParams) -> Result<SymbolString> {
    Shaper::new(p)?.shape(x)
}

pub fn unshape(y: &SymbolString, p: ShapingParams) -> Result<SymbolString> {
    Shaper::new(p)?.unshape(y)
}

pub fn is_in_shaped_set(y: &SymbolString, p: ShapingParams) -> Result<bool> {
    Shaper::new(p)?.is_in_shaped_set(y)
}
