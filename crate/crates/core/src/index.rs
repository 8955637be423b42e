//! Canonical ordering of fixed-length strings and exact rank/unrank under it.
//!
//! Strings of length `n` are ordered by:
//!
//! 1. the empirical information content of their type class, ascending;
//! 2. among classes of equal information, the counts vector in descending
//!    lexicographic order (equivalently, ascending order of each class's
//!    lexicographically smallest member);
//! 3. lexicographic order within a class.
//!
//! Step 1 is decided exactly: for a fixed `n`, the information of a class
//! is `n log2 n - log2 prod_a c_a^c_a`, so ascending information is
//! descending `prod_a c_a^c_a`, which is compared as a big integer.
//!
//! A [`ClassTable`] stores the classes of one `(n, m)` in canonical order
//! together with their sizes and cumulative start ranks, so ranking a
//! string costs `O(n m)` big-integer operations and never enumerates
//! strings.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, SstError};
use crate::model::{composition_info, composition_of, Alphabet, Composition, InfoBits, SymbolString};

/// Global rank of a string among the `m^n` strings of its length.
pub type BigRank = BigUint;

/// Default upper bound on the number of classes a table may hold.
pub const DEFAULT_COMPOSITION_CAP: u64 = 10_000_000;

/// Number of weak compositions of `n` into `m` parts, `C(n + m - 1, m - 1)`.
pub fn composition_count(n: usize, m: usize) -> BigUint {
    binomial(n + m - 1, m - 1)
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 1..=k {
        acc *= n - k + j;
        acc /= j;
    }
    acc
}

/// All weak compositions of `n` into `m` parts, counts vectors in
/// descending lexicographic order (`(n, 0, ..)` first).
pub fn enumerate_compositions(n: usize, m: usize) -> Result<Vec<Composition>> {
    if n == 0 {
        return Err(SstError::EmptyString);
    }
    Alphabet::new(m)?;
    let mut out = Vec::new();
    let mut counts = vec![0u32; m];
    fill_compositions(&mut counts, 0, n as u32, &mut out);
    Ok(out)
}

fn fill_compositions(counts: &mut [u32], slot: usize, remaining: u32, out: &mut Vec<Composition>) {
    if slot + 1 == counts.len() {
        counts[slot] = remaining;
        out.push(Composition::from_trusted(counts.to_vec()));
        return;
    }
    for c in (0..=remaining).rev() {
        counts[slot] = c;
        fill_compositions(counts, slot + 1, remaining - c, out);
    }
}

/// Size of a type class, `n! / prod_a c_a!`.
pub fn multinomial_count(c: &Composition) -> BigRank {
    let mut acc = BigUint::one();
    let mut placed = 0usize;
    for &k in c.counts() {
        for j in 1..=k as usize {
            placed += 1;
            acc *= placed;
            acc /= j;
        }
    }
    acc
}

/// `prod_a c_a^c_a`; larger means lower information content at fixed `n`.
fn concentration(c: &Composition) -> BigUint {
    c.counts()
        .iter()
        .filter(|&&k| k > 1)
        .fold(BigUint::one(), |acc, &k| acc * BigUint::from(k).pow(k))
}

/// One type class in a [`ClassTable`].
#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub composition: Composition,
    pub info: InfoBits,
    pub count: BigRank,
    pub start_rank: BigRank,
}

impl ClassEntry {
    /// One past the last global rank in this class.
    pub fn end_rank(&self) -> BigRank {
        &self.start_rank + &self.count
    }
}

/// Type classes of all length-`n` strings over an alphabet, in canonical order.
#[derive(Debug)]
pub struct ClassTable {
    n: usize,
    alphabet: Alphabet,
    entries: Vec<ClassEntry>,
    lookup: HashMap<Vec<u32>, usize>,
    total: BigRank,
}

impl ClassTable {
    /// Builds the table, refusing when more than `cap` classes would be needed.
    pub fn build(n: usize, alphabet: Alphabet, cap: u64) -> Result<Self> {
        let m = alphabet.size();
        let classes = composition_count(n, m);
        if classes > BigUint::from(cap) {
            return Err(SstError::CapacityExceeded {
                n,
                m,
                compositions: classes.to_string(),
                cap,
            });
        }
        let mut keyed: Vec<(BigUint, Composition)> = enumerate_compositions(n, m)?
            .into_iter()
            .map(|c| (concentration(&c), c))
            .collect();
        // enumeration is already descending lex; the stable sort keeps it
        // that way among equal concentrations
        keyed.sort_by(|a, b| b.0.cmp(&a.0));

        let mut entries = Vec::with_capacity(keyed.len());
        let mut lookup = HashMap::with_capacity(keyed.len());
        let mut start = BigUint::zero();
        for (idx, (_, composition)) in keyed.into_iter().enumerate() {
            let count = multinomial_count(&composition);
            let next = &start + &count;
            lookup.insert(composition.counts().to_vec(), idx);
            entries.push(ClassEntry {
                info: composition_info(&composition),
                composition,
                count,
                start_rank: start,
            });
            start = next;
        }
        Ok(ClassTable {
            n,
            alphabet,
            entries,
            lookup,
            total: start,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn entries(&self) -> &[ClassEntry] {
        &self.entries
    }

    /// `m^n`, the number of strings covered by the table.
    pub fn total(&self) -> &BigRank {
        &self.total
    }

    pub fn class_of(&self, c: &Composition) -> Option<&ClassEntry> {
        self.lookup.get(c.counts()).map(|&i| &self.entries[i])
    }

    /// Index of the class holding global rank `r`; `r` must be below `total`.
    pub fn class_index_of_rank(&self, r: &BigRank) -> usize {
        self.entries.partition_point(|e| &e.start_rank <= r) - 1
    }

    fn check_string(&self, s: &SymbolString) -> Result<()> {
        if s.alphabet() != self.alphabet {
            return Err(SstError::AlphabetMismatch {
                expected: self.alphabet.size(),
                actual: s.alphabet().size(),
            });
        }
        if s.len() != self.n {
            return Err(SstError::LengthMismatch {
                expected: self.n,
                actual: s.len(),
            });
        }
        Ok(())
    }

    /// The class entry a string belongs to.
    pub fn entry_for(&self, s: &SymbolString) -> Result<&ClassEntry> {
        self.check_string(s)?;
        Ok(self
            .class_of(&composition_of(s))
            .expect("every composition of length n is in the table"))
    }

    pub fn global_rank(&self, s: &SymbolString) -> Result<BigRank> {
        let entry = self.entry_for(s)?;
        Ok(&entry.start_rank + rank_in_class(s))
    }

    pub fn global_unrank(&self, r: &BigRank) -> Result<SymbolString> {
        if r >= &self.total {
            return Err(SstError::RankOutOfRange {
                rank: r.to_string(),
                bound: self.total.to_string(),
            });
        }
        let entry = &self.entries[self.class_index_of_rank(r)];
        unrank_in_class(&entry.composition, &(r - &entry.start_rank))
    }
}

pub fn build_class_table(n: usize, m: usize) -> Result<ClassTable> {
    ClassTable::build(n, Alphabet::new(m)?, DEFAULT_COMPOSITION_CAP)
}

pub fn global_rank(s: &SymbolString, table: &ClassTable) -> Result<BigRank> {
    table.global_rank(s)
}

pub fn global_unrank(r: &BigRank, table: &ClassTable) -> Result<SymbolString> {
    table.global_unrank(r)
}

/// Position of `s` in the lexicographic enumeration of its type class.
///
/// Walks the string left to right keeping the number of arrangements of
/// the remaining multiset; the arrangements starting with symbol `a` are
/// `arrangements * remaining[a] / len`.
pub fn rank_in_class(s: &SymbolString) -> BigRank {
    let mut remaining = composition_of(s).counts().to_vec();
    let mut arrangements = multinomial_count(&Composition::from_trusted(remaining.clone()));
    let mut rank = BigUint::zero();
    let mut left = s.len();
    for &sym in s.symbols() {
        let sym = sym as usize;
        for &k in remaining[..sym].iter().filter(|&&k| k > 0) {
            rank += &arrangements * k / left;
        }
        arrangements = arrangements * remaining[sym] / left;
        remaining[sym] -= 1;
        left -= 1;
    }
    rank
}

/// Inverse of [`rank_in_class`] on the class `c`.
pub fn unrank_in_class(c: &Composition, r: &BigRank) -> Result<SymbolString> {
    let mut arrangements = multinomial_count(c);
    if r >= &arrangements {
        return Err(SstError::RankOutOfRange {
            rank: r.to_string(),
            bound: arrangements.to_string(),
        });
    }
    let n = c.len();
    if n == 0 {
        return Err(SstError::EmptyString);
    }
    let mut remaining = c.counts().to_vec();
    let mut r = r.clone();
    let mut symbols = Vec::with_capacity(n);
    for left in (1..=n).rev() {
        let mut chosen = None;
        for (a, &k) in remaining.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let block = &arrangements * k / left;
            if r < block {
                chosen = Some((a, block));
                break;
            }
            r -= block;
        }
        let (a, block) = chosen.expect("rank below class size always lands in a block");
        symbols.push(a as u32);
        remaining[a] -= 1;
        arrangements = block;
    }
    Ok(SymbolString::from_trusted(c.alphabet(), symbols))
}

/// Memoized class tables keyed by `(n, m)`, shared across threads.
#[derive(Debug)]
pub struct TableCache {
    cap: u64,
    tables: RwLock<HashMap<(usize, Alphabet), Arc<ClassTable>>>,
}

static GLOBAL_CACHE: OnceLock<TableCache> = OnceLock::new();

impl TableCache {
    pub fn new(cap: u64) -> Self {
        TableCache {
            cap,
            tables: RwLock::new(HashMap::new()),
        }
    }

    /// Process-wide cache. Uses [`DEFAULT_COMPOSITION_CAP`] unless
    /// [`TableCache::init_global`] ran first.
    pub fn global() -> &'static TableCache {
        GLOBAL_CACHE.get_or_init(|| TableCache::new(DEFAULT_COMPOSITION_CAP))
    }

    /// Sets the cap of the process-wide cache. Returns false if the cache
    /// was already initialized with a different cap.
    pub fn init_global(cap: u64) -> bool {
        GLOBAL_CACHE.get_or_init(|| TableCache::new(cap)).cap == cap
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn get(&self, n: usize, alphabet: Alphabet) -> Result<Arc<ClassTable>> {
        if let Some(t) = self.tables.read().expect("table cache poisoned").get(&(n, alphabet)) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(ClassTable::build(n, alphabet, self.cap)?);
        let mut guard = self.tables.write().expect("table cache poisoned");
        // another writer may have won the race; keep the first table
        let entry = guard.entry((n, alphabet)).or_insert(table);
        Ok(Arc::clone(entry))
    }
}

/// `log2` of a positive big integer, accurate to about 1e-15 relative.
pub(crate) fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in u64") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits in u64");
    (top as f64).log2() + shift as f64
}
