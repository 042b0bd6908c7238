#![no_main]
use cohoquant::artifact::{decode_any, Artifact};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(a) = Artifact::parse(s) else { return };
    let text = a.to_text();
    let again = Artifact::parse(&text).expect("canonical text parses");
    assert_eq!(again, a);
    assert_eq!(again.to_text(), text);
    let _ = decode_any(&a);
});
