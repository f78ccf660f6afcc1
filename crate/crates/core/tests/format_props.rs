use proptest::prelude::*;
use rama_core::cayley::{build_lps, build_random_cayley, CayleyGraph, HEADER_LEN};
use rama_core::Error;

fn graphs() -> impl Strategy<Value = CayleyGraph> {
    prop_oneof![
        (prop::sample::select(vec![5u64, 7, 11, 13]), any::<u64>())
            .prop_map(|(q, seed)| build_random_cayley(q, seed).unwrap()),
        prop::sample::select(vec![(5u64, 13u64), (13, 17), (29, 5), (13, 5)])
            .prop_map(|(p, m)| build_lps(p, m).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bytes_roundtrip(g in graphs()) {
        let bytes = g.to_bytes();
        prop_assert_eq!(bytes.len(), HEADER_LEN + 16 * g.k() + 4 * g.n() * g.k() + 8);
        let back = CayleyGraph::from_bytes(&bytes).unwrap();
        prop_assert_eq!(back.checksum(), g.checksum());
        prop_assert_eq!(&back, &g);
    }

    #[test]
    fn any_single_corruption_is_detected(g in graphs(), pos in any::<prop::sample::Index>(), bit in 0u8..8) {
        let mut bytes = g.to_bytes();
        let i = pos.index(bytes.len());
        bytes[i] ^= 1 << bit;
        let detected = matches!(CayleyGraph::from_bytes(&bytes), Err(Error::Checksum { .. }));
        prop_assert!(detected);
    }

    #[test]
    fn truncation_is_detected(g in graphs(), cut in any::<prop::sample::Index>()) {
        let bytes = g.to_bytes();
        let len = cut.index(bytes.len());
        prop_assert!(CayleyGraph::from_bytes(&bytes[..len]).is_err());
    }

    #[test]
    fn random_builds_are_deterministic(q in prop::sample::select(vec![5u64, 7, 13, 29]), seed in any::<u64>()) {
        let a = build_random_cayley(q, seed).unwrap();
        let b = build_random_cayley(q, seed).unwrap();
        prop_assert_eq!(a.checksum(), b.checksum());
        prop_assert_eq!(a.generators(), b.generators());
    }
}

#[test]
fn file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x529.lpsg");
    let g = build_lps(5, 29).unwrap();
    g.save(&path).unwrap();
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 44 + 96 + 292_320 + 8);
    assert_eq!(CayleyGraph::load(&path).unwrap(), g);
}
