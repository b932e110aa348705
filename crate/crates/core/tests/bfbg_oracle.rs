mod common;

use common::{bfbg_mismatches, random_chunk, random_chunk_over, rng};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reachability_matches_inter_vertex_closure(seed in any::<u64>(), c in 2usize..=8) {
        let mut r = rng(seed);
        let older = random_chunk(&mut r, c, 300);
        let n = r.random_range(2..=400u64);
        let m = r.random_range(0..=300);
        let newer = random_chunk_over(&mut r, c, m, n);
        prop_assert_eq!(bfbg_mismatches(&older, &newer), 0);
    }
}

