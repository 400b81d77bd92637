//! Fuzz target for schedule file decoding.
//!
//! Accepted schedules must re-encode and decode to the same schedule, and
//! every stored coefficient must lie inside the closed unit disk.

#![no_main]
use cmvkit::io::{parse_schedule_json, schedule_to_json};
use libfuzzer_sys::fuzz_target;

const MAX_INPUT_SIZE: usize = 64 * 1024;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT_SIZE {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(schedule) = parse_schedule_json(s) {
            for a in schedule.alphas() {
                assert!(a.norm() <= 1.0 + cmvkit::coefficients::ALPHA_SLACK);
            }
            let text = schedule_to_json(&schedule).expect("accepted schedules encode");
            let back = parse_schedule_json(&text).expect("encoded schedules decode");
            assert_eq!(back, schedule, "schedule must survive a round trip");
        }
    }
});
