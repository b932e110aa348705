mod common;

use bic_core::BackwardAuft;
use common::{auft_mismatches, interval_mismatches, random_chunk, rng};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snapshot_roots_match_rebuild(seed in any::<u64>(), c in 2usize..=8) {
        let chunk = random_chunk(&mut rng(seed), c, 500);
        prop_assert_eq!(auft_mismatches(&chunk), 0);
    }

    #[test]
    fn intervals_partition_existence_range(seed in any::<u64>(), c in 2usize..=8) {
        let chunk = random_chunk(&mut rng(seed), c, 200);
        prop_assert_eq!(interval_mismatches(&chunk), 0);
    }

    #[test]
    fn labels_and_annotations_consistent(seed in any::<u64>(), c in 2usize..=8) {
        let chunk = random_chunk(&mut rng(seed), c, 500);
        let b = BackwardAuft::build(&chunk);
        b.check_invariants().map_err(TestCaseError::fail)?;
        // one UFTE per vertex except the roots of the whole-chunk-minus-offset-0 forest
        let naive = common::naive_backward(&chunk, 1);
        let roots = naive.vertices().filter(|&v| naive.find(v) == Some(v)).count();
        prop_assert_eq!(b.vertex_count(), naive.len());
        prop_assert_eq!(b.ufte_count(), naive.len() - roots);
    }
}
