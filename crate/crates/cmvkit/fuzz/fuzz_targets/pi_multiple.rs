//! Fuzz target for the angle parser (`0.25pi`, `pi`, radians).

#![no_main]
use cmvkit::io::parse_pi_multiple;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(theta) = parse_pi_multiple(s) {
            assert!(!theta.is_nan());
            let back = parse_pi_multiple(&format!("{theta}")).expect("printed radians parse");
            assert_eq!(back, theta);
        }
    }
});
