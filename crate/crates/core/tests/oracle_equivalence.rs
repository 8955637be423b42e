//! Exhaustive checks of the fast rank/unrank and shaping paths against
//! brute-force enumeration.

mod support;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use sst_core::analysis::{average_info_shaped, class_boundary_means};
use sst_core::index::{multinomial_count, rank_in_class, unrank_in_class};
use sst_core::model::empirical_info_content;
use sst_core::{Alphabet, Composition, Shaper, ShapingParams, SymbolString, TableCache};
use support::oracle;

fn string(m: usize, s: &[u32]) -> SymbolString {
    SymbolString::new(Alphabet::new(m).unwrap(), s.to_vec()).unwrap()
}

#[test]
fn global_rank_matches_canonical_enumeration() {
    let cache = TableCache::new(1_000_000);
    for m in 2..=3usize {
        for n in 1..=8usize {
            let table = cache.get(n, Alphabet::new(m).unwrap()).unwrap();
            let order = oracle::canonical_order(m, n);
            assert_eq!(table.total().to_usize().unwrap(), order.len());
            let mut seen = vec![false; order.len()];
            for (r, s) in order.iter().enumerate() {
                let s = string(m, s);
                let rank = table.global_rank(&s).unwrap().to_usize().unwrap();
                assert_eq!(rank, r, "m={m} n={n} s={s}");
                assert!(!std::mem::replace(&mut seen[rank], true));
                assert_eq!(table.global_unrank(&BigUint::from(r)).unwrap(), s);
            }
            assert!(seen.iter().all(|&x| x));
        }
    }
}

#[test]
fn rank_in_class_matches_lexicographic_enumeration() {
    for m in 2..=3usize {
        for n in 1..=8usize {
            for class in sst_core::index::enumerate_compositions(n, m).unwrap() {
                let members = oracle::class_members(m, class.counts());
                assert_eq!(multinomial_count(&class).to_usize().unwrap(), members.len());
                for (r, s) in members.iter().enumerate() {
                    let s = string(m, s);
                    assert_eq!(rank_in_class(&s).to_usize().unwrap(), r);
                    assert_eq!(unrank_in_class(&class, &BigUint::from(r)).unwrap(), s);
                }
            }
        }
    }
    // (2,2): 0011 0101 0110 1001 1010 1100
    let c = Composition::new(vec![2, 2]).unwrap();
    assert_eq!(oracle::class_members(2, &[2, 2]).len(), 6);
    assert_eq!(
        unrank_in_class(&c, &BigUint::from(5u32)).unwrap().to_string(),
        "1100"
    );
}

#[test]
fn rank_order_is_information_monotone() {
    let cache = TableCache::new(1_000_000);
    for m in 2..=3usize {
        for n in 1..=8usize {
            let table = cache.get(n, Alphabet::new(m).unwrap()).unwrap();
            let total = table.total().to_usize().unwrap();
            let infos: Vec<f64> = (0..total)
                .map(|r| empirical_info_content(&table.global_unrank(&BigUint::from(r)).unwrap()).value())
                .collect();
            assert!(infos.windows(2).all(|w| w[0] <= w[1] + 1e-12), "m={m} n={n}");
        }
    }
}

#[test]
fn shaping_matches_brute_force_bijection() {
    for m in 2..=3usize {
        for n in 1..=6usize {
            for k in 0..=3usize {
                let shaper = Shaper::new(ShapingParams::new(m, n, k).unwrap()).unwrap();
                let pairs = oracle::shaping_pairs(m, n, k);
                for (x, y) in &pairs {
                    let x = string(m, x);
                    let y = string(m, y);
                    assert_eq!(shaper.shape(&x).unwrap(), y, "m={m} n={n} k={k}");
                    assert_eq!(shaper.unshape(&y).unwrap(), x);
                }
            }
        }
    }
}

#[test]
fn image_is_exactly_the_membership_set() {
    for m in 2..=3usize {
        for n in 1..=5usize {
            for k in 0..=3usize {
                let shaper = Shaper::new(ShapingParams::new(m, n, k).unwrap()).unwrap();
                let mut image: Vec<Vec<u32>> = oracle::all_strings(m, n)
                    .iter()
                    .map(|x| shaper.shape(&string(m, x)).unwrap().into_symbols())
                    .collect();
                image.sort();
                let before = image.len();
                image.dedup();
                assert_eq!(image.len(), before, "shape is not injective");

                let mut members: Vec<Vec<u32>> = oracle::all_strings(m, n + k)
                    .into_iter()
                    .filter(|y| shaper.is_in_shaped_set(&string(m, y)).unwrap())
                    .collect();
                members.sort();
                assert_eq!(image, members, "m={m} n={n} k={k}");

                // members are the lowest-information strings
                let max_in = members.iter().map(|y| oracle::info(y, m)).fold(0.0, f64::max);
                let min_out = oracle::all_strings(m, n + k)
                    .into_iter()
                    .filter(|y| members.binary_search(y).is_err())
                    .map(|y| oracle::info(&y, m))
                    .fold(f64::INFINITY, f64::min);
                assert!(max_in <= min_out + 1e-9);
            }
        }
    }
}

#[test]
fn shaping_preserves_rank_order() {
    let cache = TableCache::new(1_000_000);
    for (m, n, k) in [(2, 6, 3), (3, 5, 2), (3, 4, 3)] {
        let shaper = Shaper::with_cache(ShapingParams::new(m, n, k).unwrap(), &cache).unwrap();
        let dom = shaper.domain_table();
        let total = dom.total().to_usize().unwrap();
        let mut prev = None;
        for r in 0..total {
            let x = dom.global_unrank(&BigUint::from(r)).unwrap();
            let ry = shaper.codomain_table().global_rank(&shaper.shape(&x).unwrap()).unwrap();
            if let Some(p) = prev {
                assert!(ry > p);
            }
            prev = Some(ry);
        }
    }
}

#[test]
fn shaped_average_matches_brute_force() {
    for m in 2..=3usize {
        for n in 1..=6usize {
            for k in 0..=3usize {
                let fast = average_info_shaped(ShapingParams::new(m, n, k).unwrap()).unwrap().value();
                let slow = oracle::shaped_mean(m, n, k);
                assert!((fast - slow).abs() < 1e-9, "m={m} n={n} k={k}: {fast} vs {slow}");
            }
        }
    }
}

#[test]
fn prefix_means_match_brute_force_and_never_decrease() {
    for (m, n) in [(2usize, 8usize), (3, 7)] {
        let table = TableCache::global().get(n, Alphabet::new(m).unwrap()).unwrap();
        let order = oracle::canonical_order(m, n);
        let means = class_boundary_means(&table);
        for (entry, mean) in table.entries().iter().zip(&means) {
            let t = entry.end_rank().to_usize().unwrap();
            let slow = order[..t].iter().map(|s| oracle::info(s, m)).sum::<f64>() / t as f64;
            assert!((mean - slow).abs() < 1e-9);
        }
        assert!(means.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }
}
