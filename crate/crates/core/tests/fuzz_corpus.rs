//! Replays the checked-in fuzz seeds through the same entry points as the fuzz targets.

use std::fs;
use std::path::PathBuf;

use cohoquant::artifact::{self, Artifact, Kind};
use cohoquant::Scalar;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn artifact_seeds() {
    let mut decoded = 0;
    for (name, data) in seeds("parse_artifact") {
        let Ok(s) = std::str::from_utf8(&data) else { continue };
        match Artifact::parse(s) {
            Ok(a) => {
                assert_eq!(Artifact::parse(&a.to_text()).unwrap(), a, "{name}");
                artifact::decode_any(&a).unwrap_or_else(|e| panic!("{name}: {e}"));
                decoded += 1;
            }
            Err(e) => assert!(name.starts_with("truncated"), "{name}: {e}"),
        }
    }
    assert!(decoded >= 8);
}

#[test]
fn payload_seeds() {
    for (name, data) in seeds("decode_payload") {
        let (&sel, rest) = data.split_first().unwrap();
        let v: serde_json::Value = serde_json::from_slice(rest).unwrap();
        let ok = match sel % 8 {
            0 => artifact::decode_useries(&v, "$").is_ok(),
            1 => artifact::decode_chord_series(&v, "$").is_ok(),
            2 => artifact::decode_bialgebra(&v, "$").is_ok(),
            3 => artifact::decode_hseries(&v, "$").is_ok(),
            4 => artifact::decode_twist(&v, "$").is_ok(),
            5 => artifact::decode_uelement(&v, "$").is_ok(),
            k => {
                let kind = Kind::ALL[k as usize % Kind::ALL.len()];
                artifact::decode_any(&Artifact::new(kind, v)).is_ok() || kind != Kind::Report
            }
        };
        assert!(ok, "{name}");
    }
}

#[test]
fn scalar_seeds() {
    for (name, data) in seeds("parse_scalar") {
        let s = String::from_utf8(data).unwrap();
        if let Ok(x) = s.parse::<Scalar>() {
            assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x, "{name}");
        }
    }
}
