use bisph_core::grid::GridFunction;
use bisph_core::Complex64;
use bisph_lab::io::{read_snapshot, sidecar_path, write_snapshot};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn snapshot_roundtrip(d in 2usize..=3, log_n in 1u32..=4, l in 0.5f64..64.0, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let values: Vec<Complex64> = (0..n.pow(d as u32))
            .map(|i| {
                let s = seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64);
                Complex64::new((s % 1000) as f64 / 7.0 - 50.0, f64::from_bits(s >> 12 | 0x3ff0_0000_0000_0000) - 1.5)
            })
            .collect();
        let f = GridFunction::new(d, n, l, values).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.bin");
        write_snapshot(&path, &f, &serde_json::json!({"seed": seed})).unwrap();
        let back = read_snapshot(&path).unwrap();
        prop_assert_eq!(back.values(), f.values());
        prop_assert_eq!((back.d(), back.n(), back.box_length()), (d, n, l));
        let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
        prop_assert_eq!(&side["provenance"]["seed"], &serde_json::json!(seed));
    }
}

#[test]
fn corrupt_snapshots_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.bin");
    let f = GridFunction::constant(2, 4, 2.0, 1.0).unwrap();
    write_snapshot(&path, &f, &serde_json::Value::Null).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() - 1]).unwrap();
    assert!(read_snapshot(&path).is_err());
    std::fs::write(&path, b"not a snapshot at all, definitely not").unwrap();
    assert!(read_snapshot(&path).is_err());
}
