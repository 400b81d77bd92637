//! Fuzz target for the `RE,IM` command-line parser.

#![no_main]
use cmvkit::io::parse_complex_arg;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(z) = parse_complex_arg(s) {
            assert!(z.re.is_finite() && z.im.is_finite());
            let back = parse_complex_arg(&format!("{},{}", z.re, z.im)).expect("printed values parse");
            assert_eq!(back, z);
        }
    }
});
