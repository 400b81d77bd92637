//! Fuzz target for polynomial file decoding.

#![no_main]
use cmvkit::io::{parse_poly_json, poly_to_json};
use libfuzzer_sys::fuzz_target;

const MAX_INPUT_SIZE: usize = 64 * 1024;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT_SIZE {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = parse_poly_json(s) {
            assert_eq!(p.coeffs().len(), p.degree() + 1);
            if let Ok(text) = poly_to_json(&p) {
                let back = parse_poly_json(&text).expect("encoded polynomials decode");
                assert_eq!(back, p, "polynomial must survive a round trip");
            }
        }
    }
});
