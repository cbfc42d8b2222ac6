use proptest::prelude::*;

use pentile::avc::named_avc;
use pentile::constructors::{earth_map, platonic, pp, rotation_modification, Chirality};
use pentile::counting::{count_beta_assignments, opposite_edges};
use pentile::enumerator::verify_tiling;
use pentile::io::TilingDocument;
use pentile::label::Label;
use pentile::map::{canonical_code, validate, MirrorPolicy, Tiling};
use pentile::transforms::{reduce_avc, reduce_tiling, LabelMap};

fn fixture(i: usize) -> Tiling {
    match i % 8 {
        0 => pp("cube", Chirality::Right).unwrap(),
        1 => pp("octahedron", Chirality::Left).unwrap(),
        2 => pp("dodecahedron", Chirality::Right).unwrap(),
        3 => earth_map(12).unwrap(),
        4 => earth_map(20).unwrap(),
        5 => rotation_modification(12, 1).unwrap(),
        6 => platonic("icosahedron").unwrap(),
        _ => platonic("cube").unwrap(),
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn fixture_and_permutation() -> impl Strategy<Value = (Tiling, Vec<usize>)> {
    (0usize..8).prop_flat_map(|i| {
        let t = fixture(i);
        let n = t.half_edge_count();
        (Just(t), permutation(n))
    })
}

/// A map from the five tile labels onto a random subset of them.
fn label_map() -> impl Strategy<Value = LabelMap> {
    prop::collection::vec(0usize..5, 5).prop_map(|targets| {
        LabelMap::from_pairs(
            targets
                .into_iter()
                .enumerate()
                .map(|(i, j)| (Label::new(i).unwrap(), Label::new(j).unwrap())),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn codes_ignore_half_edge_numbering((t, perm) in fixture_and_permutation()) {
        let s = t.relabel_ids(&perm);
        prop_assert!(validate(&s, None).is_valid());
        for policy in [MirrorPolicy::Oriented, MirrorPolicy::Unoriented] {
            prop_assert_eq!(canonical_code(&s, policy), canonical_code(&t, policy));
        }
    }

    #[test]
    fn mirroring_is_an_involution((t, perm) in fixture_and_permutation()) {
        let t = t.relabel_ids(&perm);
        let m = t.mirror();
        prop_assert!(validate(&m, None).is_valid());
        prop_assert_eq!(m.mirror(), t.clone());
        prop_assert_eq!(
            canonical_code(&m, MirrorPolicy::Unoriented),
            canonical_code(&t, MirrorPolicy::Unoriented)
        );
        prop_assert_eq!(m.census(), t.census());
    }

    #[test]
    fn reductions_compose(i in 0usize..6, a in label_map(), b in label_map()) {
        let t = fixture(i);
        let stepwise = reduce_tiling(&reduce_tiling(&t, &a).unwrap(), &b).unwrap();
        let composed = reduce_tiling(&t, &a.then(&b).unwrap()).unwrap();
        prop_assert_eq!(stepwise, composed);
    }

    #[test]
    fn reduced_tilings_satisfy_reduced_avcs(i in 0usize..3, m in label_map()) {
        let (t, avc) = match i {
            0 => (pp("cube", Chirality::Right).unwrap(), named_avc("5A24").unwrap()),
            1 => (pp("cube", Chirality::Left).unwrap(), named_avc("5A24").unwrap()),
            _ => (pp("dodecahedron", Chirality::Right).unwrap(), named_avc("5A60").unwrap()),
        };
        let reduced = reduce_avc(&avc, &m).unwrap();
        let r = reduce_tiling(&t, &m).unwrap();
        prop_assert!(verify_tiling(&r, &reduced, &[]).passed());
    }

    #[test]
    fn documents_round_trip((t, perm) in fixture_and_permutation()) {
        let t = t.relabel_ids(&perm);
        let json = TilingDocument::from_tiling(&t).to_json();
        let back = TilingDocument::from_json(&json).unwrap().to_tiling().unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn beta_count_ignores_edge_order(perm in permutation(24)) {
        let skeleton = reduce_tiling(
            &pp("cube", Chirality::Right).unwrap(),
            &LabelMap::named("3B2").unwrap(),
        ).unwrap();
        let edges = opposite_edges(&skeleton, Label::GAMMA);
        prop_assume!(edges.len() == perm.len());
        let shuffled: Vec<usize> = perm.iter().map(|&i| edges[i]).collect();
        let a = count_beta_assignments(&skeleton, &edges, MirrorPolicy::Oriented, 1 << 20).unwrap();
        let b = count_beta_assignments(&skeleton, &shuffled, MirrorPolicy::Oriented, 1 << 20).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn beta_skeleton_has_twenty_four_marked_edges() {
    let skeleton = reduce_tiling(&pp("cube", Chirality::Right).unwrap(), &LabelMap::named("3B2").unwrap()).unwrap();
    assert_eq!(opposite_edges(&skeleton, Label::GAMMA).len(), 24);
}
