#![no_main]
use cohoquant::Scalar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = s.parse::<Scalar>() {
        assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
    }
});
