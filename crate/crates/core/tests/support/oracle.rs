//! Brute-force reference implementations. They enumerate every string and
//! share no code with the class-table machinery they check.

#![allow(dead_code)]

/// All strings of length `n` over `m` symbols, lexicographic order.
pub fn all_strings(m: usize, n: usize) -> Vec<Vec<u32>> {
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut s = vec![0u32; n];
            for slot in s.iter_mut().rev() {
                *slot = (idx % m) as u32;
                idx /= m;
            }
            s
        })
        .collect()
}

pub fn counts(s: &[u32], m: usize) -> Vec<u32> {
    let mut c = vec![0u32; m];
    for &x in s {
        c[x as usize] += 1;
    }
    c
}

/// `-sum_j log2(freq(s_j))`, evaluated symbol by symbol.
pub fn info(s: &[u32], m: usize) -> f64 {
    let c = counts(s, m);
    let n = s.len() as f64;
    -s.iter().map(|&x| (c[x as usize] as f64 / n).log2()).sum::<f64>()
}

/// Every string of length `n`, sorted by (information, counts vector
/// descending, string ascending). Information ties are grouped at 1e-9.
pub fn canonical_order(m: usize, n: usize) -> Vec<Vec<u32>> {
    let mut keyed: Vec<(i64, Vec<u32>, Vec<u32>)> = all_strings(m, n)
        .into_iter()
        .map(|s| ((info(&s, m) * 1e9).round() as i64, counts(&s, m), s))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)).then_with(|| a.2.cmp(&b.2)));
    keyed.into_iter().map(|(_, _, s)| s).collect()
}

/// The shaping map as an explicit list: `x` at canonical position `r`
/// among length-`n` strings maps to canonical position `r` at `n + k`.
pub fn shaping_pairs(m: usize, n: usize, k: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let domain = canonical_order(m, n);
    let codomain = canonical_order(m, n + k);
    domain.into_iter().zip(codomain).collect()
}

/// Mean information content of the first `m^n` strings at length `n + k`.
pub fn shaped_mean(m: usize, n: usize, k: usize) -> f64 {
    let order = canonical_order(m, n + k);
    let budget = m.pow(n as u32);
    order[..budget].iter().map(|s| info(s, m)).sum::<f64>() / budget as f64
}

/// Strings of a class in lexicographic order.
pub fn class_members(m: usize, class: &[u32]) -> Vec<Vec<u32>> {
    let n = class.iter().sum::<u32>() as usize;
    all_strings(m, n)
        .into_iter()
        .filter(|s| counts(s, m) == class)
        .collect()
}

pub fn to_digits(s: &[u32]) -> String {
    s.iter().map(|d| char::from_digit(*d, 36).unwrap()).collect()
}
