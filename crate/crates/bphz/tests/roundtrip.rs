use bphz::parse::{parse_canon, parse_diag_forest, parse_mi_forest, parse_multi_index};
use bphz_core::feynman::catalog::connected_diagrams_up_to;
use bphz_core::{DiagForest, MIForest, MultiIndex};
use proptest::prelude::*;

#[test]
fn every_small_diagram_reparses() {
    let all = connected_diagrams_up_to(5);
    for c in &all {
        assert_eq!(&parse_canon(&c.to_string()).unwrap(), c);
    }
    let f = DiagForest::new(all.iter().take(4).cloned().collect());
    assert_eq!(parse_diag_forest(&f.to_string()).unwrap(), f);
}

fn multi_index() -> impl Strategy<Value = MultiIndex> {
    proptest::collection::btree_map(1u32..=12, 1u32..=9, 1..=4).prop_map(|m| MultiIndex::new(m).unwrap())
}

proptest! {
    #[test]
    fn multi_indices_reparse(m in multi_index()) {
        prop_assert_eq!(parse_multi_index(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn forests_reparse(parts in proptest::collection::vec(multi_index(), 0..4)) {
        let f = MIForest::new(parts);
        prop_assert_eq!(parse_mi_forest(&f.to_string()).unwrap(), f);
    }
}
