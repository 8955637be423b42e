use proptest::prelude::*;
use sst_core::codec::{decode, encode, ideal_code_length, CodecModelConfig, TERMINATION_BITS};
use sst_core::model::{composition_info, composition_of, empirical_info_content};
use sst_core::{Alphabet, Shaper, ShapingParams, SymbolString};

fn strings(max_m: usize, max_n: usize) -> impl Strategy<Value = SymbolString> {
    (2..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        prop::collection::vec(0..m as u32, n)
            .prop_map(move |s| SymbolString::new(Alphabet::new(m).unwrap(), s).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn empirical_info_is_permutation_invariant(s in strings(6, 40), seed in any::<u64>()) {
        let mut perm = s.symbols().to_vec();
        let len = perm.len();
        let mut state = seed;
        for i in (1..len).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let p = SymbolString::new(s.alphabet(), perm).unwrap();
        prop_assert_eq!(empirical_info_content(&s), empirical_info_content(&p));
        prop_assert_eq!(empirical_info_content(&s), composition_info(&composition_of(&s)));
        let bound = s.len() as f64 * (s.alphabet().size() as f64).log2();
        prop_assert!(empirical_info_content(&s).value() <= bound + 1e-9);
    }

    #[test]
    fn global_rank_round_trips_long_strings(
        m in 2usize..=3,
        syms in prop::collection::vec(0u32..3, 1..=120),
    ) {
        let syms: Vec<u32> = syms.into_iter().map(|x| x % m as u32).collect();
        let s = SymbolString::new(Alphabet::new(m).unwrap(), syms).unwrap();
        let table = sst_core::TableCache::global().get(s.len(), s.alphabet()).unwrap();
        let r = table.global_rank(&s).unwrap();
        prop_assert!(&r < table.total());
        prop_assert_eq!(table.global_unrank(&r).unwrap(), s);
    }

    #[test]
    fn shape_round_trips_long_strings(
        m in 2usize..=4,
        k in 0usize..=4,
        syms in prop::collection::vec(0u32..4, 1..=100),
    ) {
        let syms: Vec<u32> = syms.into_iter().map(|x| x % m as u32).collect();
        let x = SymbolString::new(Alphabet::new(m).unwrap(), syms).unwrap();
        let shaper = Shaper::new(ShapingParams::new(m, x.len(), k).unwrap()).unwrap();
        let y = shaper.shape(&x).unwrap();
        prop_assert_eq!(y.len(), x.len() + k);
        prop_assert!(shaper.is_in_shaped_set(&y).unwrap());
        prop_assert_eq!(shaper.unshape(&y).unwrap(), x);
    }

    #[test]
    fn codec_round_trips_within_bound(s in strings(8, 256), alpha_units in 1u32..=512) {
        let cfg = CodecModelConfig::new(s.alphabet(), alpha_units as f64 / 256.0).unwrap();
        let bits = encode(&s, &cfg).unwrap();
        prop_assert_eq!(&decode(bits.bytes(), s.len(), &cfg).unwrap(), &s);
        let ideal = ideal_code_length(&s, &cfg).unwrap().value();
        prop_assert!(bits.bit_len() as f64 <= ideal + 2.0 + TERMINATION_BITS as f64);
    }
}
