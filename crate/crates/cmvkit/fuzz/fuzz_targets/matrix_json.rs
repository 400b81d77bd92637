//! Fuzz target for operator file decoding.
//!
//! Accepted operators must round-trip and report a bandwidth inside the
//! window.

#![no_main]
use cmvkit::io::{matrix_to_json, parse_matrix_json};
use libfuzzer_sys::fuzz_target;

const MAX_INPUT_SIZE: usize = 64 * 1024;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT_SIZE {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = parse_matrix_json(s) {
            assert!(m.bandwidth() < m.dim());
            let text = matrix_to_json(&m).expect("accepted operators encode");
            let back = parse_matrix_json(&text).expect("encoded operators decode");
            assert_eq!(back, m, "operator must survive a round trip");
        }
    }
});
