#![no_main]
use cohoquant::artifact::{self, Artifact, Kind};
use libfuzzer_sys::fuzz_target;
use serde_json::Value;

// The first byte picks the decoder, the rest is the JSON payload.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(v) = serde_json::from_slice::<Value>(rest) else { return };
    match sel % 8 {
        0 => {
            if let Ok(s) = artifact::decode_useries(&v, "$") {
                assert_eq!(artifact::decode_useries(&artifact::encode_useries(&s), "$").unwrap(), s);
            }
        }
        1 => {
            if let Ok(s) = artifact::decode_chord_series(&v, "$") {
                assert_eq!(artifact::decode_chord_series(&artifact::encode_chord_series(&s), "$").unwrap(), s);
            }
        }
        2 => {
            if let Ok(b) = artifact::decode_bialgebra(&v, "$") {
                assert_eq!(artifact::decode_bialgebra(&artifact::encode_bialgebra(&b), "$").unwrap(), b);
            }
        }
        3 => {
            if let Ok((h, gens)) = artifact::decode_hseries(&v, "$") {
                assert_eq!(artifact::decode_hseries(&artifact::encode_hseries(&h, &gens), "$").unwrap(), (h, gens));
            }
        }
        4 => {
            if let Ok((t, phi)) = artifact::decode_twist(&v, "$") {
                assert_eq!(artifact::decode_twist(&artifact::encode_twist(&t, &phi), "$").unwrap(), (t, phi));
            }
        }
        5 => {
            if let Ok(e) = artifact::decode_uelement(&v, "$") {
                assert_eq!(artifact::decode_uelement(&artifact::encode_uelement(&e), "$").unwrap(), e);
            }
        }
        k => {
            let kind = Kind::ALL[k as usize % Kind::ALL.len()];
            let _ = artifact::decode_any(&Artifact::new(kind, v));
        }
    }
});
